//! The stochastic inertial forward-backward-forward iteration.
//!
//! One step at iterate `x_n` (with memory `x_{n-1}`):
//!
//! ```text
//! alpha_n = min(eps_n / ||x_n - x_{n-1}||, theta)   (theta if equal)
//! w_n = x_n + alpha_n (x_n - x_{n-1})
//! r_n = oracle estimate of B w_n
//! y_n = (I + lambda_n A)^{-1} (w_n - lambda_n r_n)
//! s_n = unbiased oracle estimate of B y_n
//! x_{n+1} = y_n - lambda_n (s_n - r_n)
//! ```
//!
//! With zero noise and `theta = 0` this is the deterministic
//! forward-backward-forward (extragradient-type) method; zeros of `A + B`
//! are fixed points. The module also provides the composite-minimization
//! specialization (`A = subdifferential of f`, `B = gradient of h`) written
//! in prox/gradient form, and a numeric check of the per-iteration descent
//! inequality that drives the convergence analysis.

use crate::error::{Error, Result};
use crate::linalg;
use crate::operators::{MonotoneMap, Point, ProxFunction};
use crate::oracles::{
    inertia_coefficient, validate_summability, EpsilonSchedule, RngStream, StepSchedule,
    StochasticOracle,
};
use ndarray::Array1;
use serde::{Deserialize, Serialize};

/// Iterate magnitude beyond which the run is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Full configuration of an inclusion run.
#[derive(Clone, Debug)]
pub struct FbfConfig {
    pub operator: MonotoneMap,
    pub oracle: StochasticOracle,
    pub steps: StepSchedule,
    pub eps: EpsilonSchedule,
    pub theta: f64,
    pub horizon: usize,
    pub record_every: usize,
}

impl FbfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Parameter(format!(
                "inertia parameter theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Parameter("record_every must be positive".into()));
        }
        if let StepSchedule::Constant { .. } = self.steps {
            self.steps.validate_against(self.oracle.base().lipschitz())?;
        }
        Ok(())
    }

    /// Advisory regime check; runs never block on it (falsification runs
    /// deliberately violate the summability conditions).
    pub fn regime_warning(&self) -> Option<String> {
        let horizon = self.horizon.max(10);
        match validate_summability(&self.oracle, &self.steps, horizon.min(10_000)) {
            Ok(report) if !report.satisfies_some_regime() => Some(format!(
                "noise/step schedules satisfy neither convergence regime \
                 (esum: {:?}, dkv: {:?})",
                report.esum, report.dkv
            )),
            _ => None,
        }
    }
}

/// Mutable iteration state.
#[derive(Clone, Debug)]
pub struct FbfState {
    pub n: usize,
    pub x_prev: Point,
    pub x_cur: Point,
    pub last_w: Point,
    pub last_y: Point,
    pub rng: RngStream,
}

impl FbfState {
    /// Start with `x_{-1} = x_0 = x_init`.
    pub fn init(x_init: Point, rng: RngStream) -> Self {
        let last_w = x_init.clone();
        let last_y = x_init.clone();
        Self {
            n: 0,
            x_prev: x_init.clone(),
            x_cur: x_init,
            last_w,
            last_y,
            rng,
        }
    }
}

/// Per-step diagnostics: everything the descent-inequality check needs.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub n: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub w: Point,
    pub y: Point,
    pub r: Point,
    pub s: Point,
}

fn check_finite_iterate(n: usize, x: &Point, last_finite: &Point) -> Result<()> {
    let ok = linalg::all_finite(x) && linalg::l2_norm(x) <= DIVERGENCE_THRESHOLD;
    if ok {
        Ok(())
    } else {
        Err(Error::Divergence {
            at: n,
            last_finite: last_finite.to_vec(),
        })
    }
}

/// Advance the state by one iteration of the splitting method.
pub fn fbf_step(state: FbfState, config: &FbfConfig) -> Result<(FbfState, StepRecord)> {
    let FbfState {
        n,
        x_prev,
        x_cur,
        mut rng,
        ..
    } = state;
    let lambda = config.steps.at(n);
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("step lambda_{n} = {lambda} must be positive")));
    }
    let eps_n = config.eps.at(n);
    let alpha = inertia_coefficient(&x_cur, &x_prev, eps_n, config.theta);

    let w = &x_cur + &((&x_cur - &x_prev) * alpha);
    let r = config.oracle.draw_r(&w, n, &mut rng);
    let y = config.operator.resolve(lambda, &(&w - &(&r * lambda)))?;
    let s = config.oracle.draw_s(&y, n, &mut rng);
    let x_next = &y - &((&s - &r) * lambda);
    check_finite_iterate(n, &x_next, &x_cur)?;

    let record = StepRecord {
        n,
        alpha,
        lambda,
        w: w.clone(),
        y: y.clone(),
        r,
        s,
    };
    let next = FbfState {
        n: n + 1,
        x_prev: x_cur,
        x_cur: x_next,
        last_w: w,
        last_y: y,
        rng,
    };
    Ok((next, record))
}

/// One trajectory sample.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub n: usize,
    #[serde(with = "crate::jsonio::vector")]
    pub x: Point,
    /// Squared distance to the reference point, when one was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq_dist: Option<f64>,
    pub alpha: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivergenceInfo {
    pub at: usize,
    pub last_finite: Vec<f64>,
}

/// Recorded run output. Recording is dense (`record_every`) up to
/// n = 1000 and then thinned to roughly 900 points per decade so that a
/// horizon of 10^6 stays in bounded memory; the final iterate is always
/// recorded. A divergent run carries the partial data plus the divergence
/// record instead of failing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<DivergenceInfo>,
    /// Smallest squared distance to the reference over all iterations
    /// (not just recorded ones), with the iteration it occurred at.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_sq_dist: Option<(usize, f64)>,
}

impl Trajectory {
    pub fn series(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| p.sq_dist.map(|d| (p.n as f64, d)))
            .collect()
    }

    pub fn final_point(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }
}

pub(crate) fn record_stride(n: usize, record_every: usize) -> usize {
    if n <= 1000 {
        record_every
    } else {
        let decade = 10usize.pow(((n as f64).log10().floor() as u32).saturating_sub(2));
        record_every.max(decade)
    }
}

fn should_record(n: usize, horizon: usize, record_every: usize) -> bool {
    n == horizon || n % record_stride(n, record_every) == 0
}

/// Run the iteration for `config.horizon` steps from `x_init`.
///
/// `reference` enables squared-distance tracking. The randomness is fully
/// determined by `rng`; zero-noise configurations produce the same
/// trajectory for every stream.
pub fn run_fbf(
    config: &FbfConfig,
    x_init: &Point,
    reference: Option<&Point>,
    rng: RngStream,
) -> Result<Trajectory> {
    config.validate()?;
    if let Some(msg) = config.regime_warning() {
        log::warn!("{msg}");
    }
    if let Some(p) = reference {
        if p.len() != x_init.len() {
            return Err(Error::InvalidInput(
                "reference dimension does not match the initial point".into(),
            ));
        }
    }

    let sq_dist_to = |x: &Point| reference.map(|p| linalg::sq_norm(&(x - p)));
    let mut points = Vec::new();
    let mut min_sq_dist: Option<(usize, f64)> = None;
    let mut track_min = |n: usize, d: Option<f64>| {
        if let Some(d) = d {
            if min_sq_dist.map_or(true, |(_, best)| d < best) {
                min_sq_dist = Some((n, d));
            }
        }
    };

    let mut state = FbfState::init(x_init.clone(), rng);
    let d0 = sq_dist_to(&state.x_cur);
    track_min(0, d0);
    if should_record(0, config.horizon, config.record_every) {
        points.push(TrajectoryPoint {
            n: 0,
            x: state.x_cur.clone(),
            sq_dist: d0,
            alpha: 0.0,
            lambda: config.steps.at(0),
        });
    }

    let mut divergence = None;
    while state.n < config.horizon {
        match fbf_step(state.clone(), config) {
            Ok((next, record)) => {
                state = next;
                let d = sq_dist_to(&state.x_cur);
                track_min(state.n, d);
                if should_record(state.n, config.horizon, config.record_every) {
                    points.push(TrajectoryPoint {
                        n: state.n,
                        x: state.x_cur.clone(),
                        sq_dist: d,
                        alpha: record.alpha,
                        lambda: record.lambda,
                    });
                }
            }
            Err(Error::Divergence { at, last_finite }) => {
                divergence = Some(DivergenceInfo { at, last_finite });
                break;
            }
            Err(other) => return Err(other),
        }
    }

    Ok(Trajectory {
        points,
        divergence,
        min_sq_dist,
    })
}

/// Composite-minimization configuration: `minimize f(x) + h(x)` with `f`
/// proximable and `h` smooth, accessed through a stochastic gradient
/// oracle. Two independent gradient samples are drawn per iteration (one
/// at `w_n`, one at `y_n`).
#[derive(Clone, Debug)]
pub struct CompositeConfig {
    pub f: ProxFunction,
    pub grad_oracle: StochasticOracle,
    pub steps: StepSchedule,
    pub eps: EpsilonSchedule,
    pub theta: f64,
}

/// One step of the prox-gradient form:
/// `y_n = prox_{lambda f}(w_n - lambda g(w_n)); x_{n+1} = y_n - lambda (g(y_n) - g(w_n))`.
/// Coincides with [`fbf_step`] for `A = subdifferential(f)`,
/// `B = gradient oracle`, draw for draw.
pub fn composite_step(state: FbfState, config: &CompositeConfig) -> Result<(FbfState, StepRecord)> {
    let FbfState {
        n,
        x_prev,
        x_cur,
        mut rng,
        ..
    } = state;
    let lambda = config.steps.at(n);
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("step lambda_{n} = {lambda} must be positive")));
    }
    let eps_n = config.eps.at(n);
    let alpha = inertia_coefficient(&x_cur, &x_prev, eps_n, config.theta);

    let w = &x_cur + &((&x_cur - &x_prev) * alpha);
    let grad_w = config.grad_oracle.draw_r(&w, n, &mut rng);
    let y = config.f.prox(lambda, &(&w - &(&grad_w * lambda)))?;
    let grad_y = config.grad_oracle.draw_s(&y, n, &mut rng);
    let x_next = &y - &((&grad_y - &grad_w) * lambda);
    check_finite_iterate(n, &x_next, &x_cur)?;

    let record = StepRecord {
        n,
        alpha,
        lambda,
        w: w.clone(),
        y: y.clone(),
        r: grad_w,
        s: grad_y,
    };
    let next = FbfState {
        n: n + 1,
        x_prev: x_cur,
        x_cur: x_next,
        last_w: w,
        last_y: y,
        rng,
    };
    Ok((next, record))
}

/// Residual `E_s[RHS - LHS]` of the per-iteration descent inequality
///
/// ```text
/// ||x_{n+1} - p||^2 <= ||w - p||^2 - (1 - lambda^2 L^2) ||w - y||^2
///   + lambda^2 (||s - By||^2 + ||r - Bw||^2)
///   + 2 lambda^2 (<s - By, By - r> + <By - Bw, Bw - r>)
///   + 2 <y - w - lambda (By - r), y - p> + 2 lambda <By - s, y - p>
/// ```
///
/// for a realized `(w, y, r)` triple, with the conditional expectation
/// over `s` computed as an exact finite sum. The inequality holds
/// pathwise (it uses only algebra and the Lipschitz bound), so the
/// residual must be nonnegative up to rounding at every iteration and
/// every solution `p`. Requires a finitely supported `s` law (zero noise
/// or the finite-sum oracle); Gaussian noise is rejected.
pub fn lemma32_residual(
    w: &Point,
    y: &Point,
    r: &Point,
    lambda: f64,
    p: &Point,
    oracle: &StochasticOracle,
) -> Result<f64> {
    let atoms = oracle.s_support(y).ok_or_else(|| {
        Error::Capability(
            "descent-inequality check needs a finitely supported s draw \
             (zero noise or finite_sum); got nondegenerate Gaussian noise"
            .into(),
        )
    })?;
    let lipschitz = oracle.base().lipschitz();
    let by = oracle.base().eval(y);
    let bw = oracle.base().eval(w);

    let w_minus_p = w - p;
    let y_minus_p = y - p;
    let w_minus_y = w - y;
    let sq_w_p = linalg::sq_norm(&w_minus_p);
    let sq_w_y = linalg::sq_norm(&w_minus_y);
    let by_minus_r = &by - r;
    let by_minus_bw = &by - &bw;
    let bw_minus_r = &bw - r;
    let r_err_sq = linalg::sq_norm(&bw_minus_r);
    let backward_term = &(y - w) - &(&by_minus_r * lambda);

    let mut expected = 0.0;
    for (prob, s) in &atoms {
        let x_next = y - &((s - r) * lambda);
        let lhs = linalg::sq_norm(&(&x_next - p));
        let s_err = s - &by;
        let rhs = sq_w_p - (1.0 - lambda * lambda * lipschitz * lipschitz) * sq_w_y
            + lambda * lambda * (linalg::sq_norm(&s_err) + r_err_sq)
            + 2.0 * lambda * lambda
                * (s_err.dot(&by_minus_r) + by_minus_bw.dot(&bw_minus_r))
            + 2.0 * backward_term.dot(&y_minus_p)
            + 2.0 * lambda * (-&s_err).dot(&y_minus_p);
        expected += prob * (rhs - lhs);
    }
    Ok(expected)
}

/// Drive `iterations` steps and return the minimum descent-inequality
/// residual over all steps and all supplied solutions.
pub fn lemma32_scan(
    config: &FbfConfig,
    x_init: &Point,
    solutions: &[Point],
    iterations: usize,
    rng: RngStream,
) -> Result<f64> {
    config.validate()?;
    if solutions.is_empty() {
        return Err(Error::Parameter("need at least one solution point".into()));
    }
    let mut state = FbfState::init(x_init.clone(), rng);
    let mut min_residual = f64::INFINITY;
    for _ in 0..iterations {
        let (next, record) = fbf_step(state, config)?;
        for p in solutions {
            let residual = lemma32_residual(
                &record.w,
                &record.y,
                &record.r,
                record.lambda,
                p,
                &config.oracle,
            )?;
            min_residual = min_residual.min(residual);
        }
        state = next;
    }
    Ok(min_residual)
}
