//! Catalog of maximal monotone operators, resolvents, and proximity
//! operators.
//!
//! The ambient Hilbert space is realized as finite-dimensional `R^d`
//! (weak and strong convergence coincide there); a point is an
//! [`Array1<f64>`] with all entries finite. Set-valued operators are
//! exposed only through their resolvents `J_lambda = (I + lambda A)^-1`,
//! which are closed-form for every catalog entry, so `resolve` is exact
//! up to rounding.

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::RngStream;
use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

/// Finite-dimensional stand-in for an element of the ambient space.
pub type Point = Array1<f64>;

pub(crate) fn ensure_finite(name: &str, x: &Point) -> Result<()> {
    if !linalg::all_finite(x) {
        return Err(Error::InvalidInput(format!("{name} has non-finite entries")));
    }
    Ok(())
}

pub(crate) fn ensure_positive_step(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!(
            "step parameter must be positive and finite, got {lambda}"
        )));
    }
    Ok(())
}

fn clamp_to_box(x: &Point, lower: &Array1<f64>, upper: &Array1<f64>) -> Point {
    let mut out = x.clone();
    for (i, v) in out.iter_mut().enumerate() {
        *v = v.max(lower[i]).min(upper[i]);
    }
    out
}

fn soft_threshold(x: &Point, threshold: f64) -> Point {
    x.mapv(|v| v.signum() * (v.abs() - threshold).max(0.0))
}

/// Maximal monotone operator exposed through its resolvent.
///
/// JSON descriptor: `{"kind": "zero" | "affine" | "box_normal_cone" |
/// "l1" | "quadratic", ...parameters}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneMap {
    /// `A = 0`; its resolvent is the identity.
    Zero,
    /// `A x = M x + q` for a monotone `M` (positive semidefinite plus
    /// skew part). The resolvent solves `(I + lambda M) y = x - lambda q`.
    Affine {
        #[serde(with = "crate::jsonio::matrix")]
        matrix: Array2<f64>,
        #[serde(with = "crate::jsonio::vector")]
        offset: Array1<f64>,
    },
    /// Normal cone of the box `[lower, upper]`; the resolvent is the
    /// projection onto the box, for every `lambda`.
    BoxNormalCone {
        #[serde(with = "crate::jsonio::vector")]
        lower: Array1<f64>,
        #[serde(with = "crate::jsonio::vector")]
        upper: Array1<f64>,
    },
    /// Subdifferential of `tau * ||.||_1`; the resolvent is coordinatewise
    /// soft-thresholding at `lambda * tau`.
    L1 { tau: f64 },
    /// Subdifferential of `coeff/2 * ||.||^2`, i.e. `A x = coeff * x`.
    Quadratic { coeff: f64 },
}

impl MonotoneMap {
    pub fn box_cone(lower: Array1<f64>, upper: Array1<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Parameter("box bounds must have equal length".into()));
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::Parameter("box lower bound exceeds upper bound".into()));
        }
        Ok(MonotoneMap::BoxNormalCone { lower, upper })
    }

    pub fn symmetric_box(d: usize, half_width: f64) -> Result<Self> {
        if half_width < 0.0 {
            return Err(Error::Parameter("box half-width must be nonnegative".into()));
        }
        Self::box_cone(
            Array1::from_elem(d, -half_width),
            Array1::from_elem(d, half_width),
        )
    }

    /// Resolvent `J_lambda(x) = (I + lambda A)^{-1} x`.
    pub fn resolve(&self, lambda: f64, x: &Point) -> Result<Point> {
        ensure_positive_step(lambda)?;
        ensure_finite("resolvent input", x)?;
        match self {
            MonotoneMap::Zero => Ok(x.clone()),
            MonotoneMap::Affine { matrix, offset } => {
                if matrix.nrows() != x.len() || offset.len() != x.len() {
                    return Err(Error::InvalidInput(
                        "affine operator dimension mismatch".into(),
                    ));
                }
                let mut system = matrix * lambda;
                for i in 0..system.nrows() {
                    system[[i, i]] += 1.0;
                }
                let rhs = x - &(offset * lambda);
                linalg::lu_solve(&system, &rhs)
            }
            MonotoneMap::BoxNormalCone { lower, upper } => {
                if lower.len() != x.len() {
                    return Err(Error::InvalidInput("box dimension mismatch".into()));
                }
                Ok(clamp_to_box(x, lower, upper))
            }
            MonotoneMap::L1 { tau } => {
                if *tau < 0.0 {
                    return Err(Error::Parameter("l1 weight tau must be nonnegative".into()));
                }
                Ok(soft_threshold(x, lambda * tau))
            }
            MonotoneMap::Quadratic { coeff } => {
                if *coeff < 0.0 {
                    return Err(Error::Parameter(
                        "quadratic coefficient must be nonnegative".into(),
                    ));
                }
                Ok(x / (1.0 + lambda * coeff))
            }
        }
    }
}

/// Resolvent of a maximal monotone operator (free-function form).
pub fn resolve(a: &MonotoneMap, lambda: f64, x: &Point) -> Result<Point> {
    a.resolve(lambda, x)
}

/// Proper lower semicontinuous convex function with a closed-form
/// proximity operator and an extended-real value oracle.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProxFunction {
    /// `f = 0`.
    Zero,
    /// Indicator of the box `[lower, upper]`.
    BoxIndicator {
        #[serde(with = "crate::jsonio::vector")]
        lower: Array1<f64>,
        #[serde(with = "crate::jsonio::vector")]
        upper: Array1<f64>,
    },
    /// `f = tau * ||.||_1`.
    L1 { tau: f64 },
    /// `f = coeff/2 * ||.||^2`.
    Quadratic { coeff: f64 },
}

impl ProxFunction {
    pub fn box_indicator(lower: Array1<f64>, upper: Array1<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::Parameter("invalid box bounds".into()));
        }
        Ok(ProxFunction::BoxIndicator { lower, upper })
    }

    pub fn symmetric_box(d: usize, half_width: f64) -> Result<Self> {
        Self::box_indicator(
            Array1::from_elem(d, -half_width),
            Array1::from_elem(d, half_width),
        )
    }

    /// `prox_{lambda f}(x) = argmin_y f(y) + ||x - y||^2 / (2 lambda)`.
    pub fn prox(&self, lambda: f64, x: &Point) -> Result<Point> {
        ensure_positive_step(lambda)?;
        ensure_finite("prox input", x)?;
        match self {
            ProxFunction::Zero => Ok(x.clone()),
            ProxFunction::BoxIndicator { lower, upper } => {
                if lower.len() != x.len() {
                    return Err(Error::InvalidInput("box dimension mismatch".into()));
                }
                Ok(clamp_to_box(x, lower, upper))
            }
            ProxFunction::L1 { tau } => {
                if *tau < 0.0 {
                    return Err(Error::Parameter("l1 weight tau must be nonnegative".into()));
                }
                Ok(soft_threshold(x, lambda * tau))
            }
            ProxFunction::Quadratic { coeff } => {
                if *coeff < 0.0 {
                    return Err(Error::Parameter(
                        "quadratic coefficient must be nonnegative".into(),
                    ));
                }
                Ok(x / (1.0 + lambda * coeff))
            }
        }
    }

    /// Extended-real function value; `+inf` outside the effective domain.
    ///
    /// Box membership uses a small relative slack so that convex
    /// combinations of in-box points computed in floating point do not
    /// spuriously evaluate to `+inf`.
    pub fn value(&self, x: &Point) -> f64 {
        match self {
            ProxFunction::Zero => 0.0,
            ProxFunction::BoxIndicator { lower, upper } => {
                let inside = x.iter().enumerate().all(|(i, &v)| {
                    let slack = 1e-12 * (1.0 + lower[i].abs().max(upper[i].abs()));
                    v >= lower[i] - slack && v <= upper[i] + slack
                });
                if inside {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxFunction::L1 { tau } => tau * x.iter().map(|v| v.abs()).sum::<f64>(),
            ProxFunction::Quadratic { coeff } => 0.5 * coeff * linalg::sq_norm(x),
        }
    }

    /// The subdifferential as a catalog `MonotoneMap`; `prox_{lambda f}`
    /// agrees with its resolvent.
    pub fn subdifferential(&self) -> MonotoneMap {
        match self {
            ProxFunction::Zero => MonotoneMap::Zero,
            ProxFunction::BoxIndicator { lower, upper } => MonotoneMap::BoxNormalCone {
                lower: lower.clone(),
                upper: upper.clone(),
            },
            ProxFunction::L1 { tau } => MonotoneMap::L1 { tau: *tau },
            ProxFunction::Quadratic { coeff } => MonotoneMap::Quadratic { coeff: *coeff },
        }
    }
}

/// `prox_{lambda f*}(x)` via the Moreau decomposition
/// `x = prox_{lambda f*}(x) + lambda * prox_{f/lambda}(x / lambda)`.
pub fn conjugate_prox(f: &ProxFunction, lambda: f64, x: &Point) -> Result<Point> {
    ensure_positive_step(lambda)?;
    ensure_finite("conjugate prox input", x)?;
    let inner = f.prox(1.0 / lambda, &(x / lambda))?;
    Ok(x - &(inner * lambda))
}

/// Single-valued monotone Lipschitz operator `B x = M x + q` with declared
/// Lipschitz constant and strong-monotonicity modulus.
///
/// The affine form covers every benchmark in this crate (identity,
/// skew fields, quadratic gradients, least-squares gradients); the
/// declared constants are validated by sampling, see
/// [`estimate_lipschitz`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LipOperator {
    #[serde(with = "crate::jsonio::matrix")]
    matrix: Array2<f64>,
    #[serde(with = "crate::jsonio::vector")]
    offset: Array1<f64>,
    lipschitz: f64,
    strong_mod: f64,
}

impl LipOperator {
    pub fn new(
        matrix: Array2<f64>,
        offset: Array1<f64>,
        lipschitz: f64,
        strong_mod: f64,
    ) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Parameter("operator matrix must be square".into()));
        }
        if matrix.nrows() != offset.len() {
            return Err(Error::Parameter("offset length must match matrix order".into()));
        }
        if !matrix.iter().all(|v| v.is_finite()) || !linalg::all_finite(&offset) {
            return Err(Error::InvalidInput("operator data must be finite".into()));
        }
        if !(lipschitz > 0.0) || !lipschitz.is_finite() {
            return Err(Error::Parameter("Lipschitz constant must be positive".into()));
        }
        if strong_mod < 0.0 || strong_mod > lipschitz {
            return Err(Error::Parameter(
                "strong-monotonicity modulus must lie in [0, L]".into(),
            ));
        }
        Ok(Self {
            matrix,
            offset,
            lipschitz,
            strong_mod,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: Array2::eye(d),
            offset: Array1::zeros(d),
            lipschitz: 1.0,
            strong_mod: 1.0,
        }
    }

    pub fn scaling(d: usize, coeff: f64) -> Result<Self> {
        if !(coeff > 0.0) {
            return Err(Error::Parameter("scaling coefficient must be positive".into()));
        }
        Self::new(Array2::eye(d) * coeff, Array1::zeros(d), coeff, coeff)
    }

    /// Mean of several operators; the declared constants are the means of
    /// the component constants (valid upper/lower bounds by convexity).
    pub fn average(components: &[LipOperator]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Parameter("average of zero operators".into()))?;
        let d = first.dim();
        let mut matrix = Array2::<f64>::zeros((d, d));
        let mut offset = Array1::<f64>::zeros(d);
        let mut lipschitz = 0.0;
        let mut strong = 0.0;
        for c in components {
            if c.dim() != d {
                return Err(Error::Parameter("component dimension mismatch".into()));
            }
            matrix += &c.matrix;
            offset += &c.offset;
            lipschitz += c.lipschitz;
            strong += c.strong_mod;
        }
        let count = components.len() as f64;
        Self::new(matrix / count, offset / count, lipschitz / count, strong / count)
    }

    pub fn eval(&self, x: &Point) -> Point {
        self.matrix.dot(x) + &self.offset
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn strong_mod(&self) -> f64 {
        self.strong_mod
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn offset(&self) -> &Array1<f64> {
        &self.offset
    }
}

/// Empirical Lipschitz estimate: the maximum of `||Bx - By|| / ||x - y||`
/// over sampled pairs in the box `[-radius, radius]^d`. Zero-distance
/// pairs are discarded; if every pair degenerates the sampling fails.
pub fn estimate_lipschitz(
    b: &LipOperator,
    sample_count: usize,
    radius: f64,
    seed: u64,
) -> Result<f64> {
    if sample_count < 2 {
        return Err(Error::Parameter("need at least two samples".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::Parameter("sampling radius must be positive".into()));
    }
    let d = b.dim();
    let mut rng = RngStream::new(seed, 0x11b);
    let mut best: Option<f64> = None;
    for _ in 0..sample_count {
        let x = Array1::from_shape_fn(d, |_| rng.next_range(-radius, radius));
        let y = Array1::from_shape_fn(d, |_| rng.next_range(-radius, radius));
        let dist = linalg::l2_norm(&(&x - &y));
        if dist == 0.0 {
            continue;
        }
        let ratio = linalg::l2_norm(&(&b.eval(&x) - &b.eval(&y))) / dist;
        best = Some(best.map_or(ratio, |prev: f64| prev.max(ratio)));
    }
    best.ok_or_else(|| Error::Sampling("all sampled pairs were degenerate".into()))
}
