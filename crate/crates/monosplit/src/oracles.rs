//! Stochastic operator estimators and the noise / inertia / step schedules
//! that drive them.
//!
//! An oracle wraps a known base operator `B` and produces the two random
//! estimates used by the splitting iteration: `r_n` queried at the inertial
//! point `w_n`, and `s_n` queried at `y_n`. The `s` draw is conditionally
//! unbiased for every noise model; the summability of the noise energy
//! against the step schedule is what separates the convergent regimes from
//! the falsification runs, and `validate_summability` classifies it.

use crate::error::{Error, Result};
use crate::linalg;
use crate::operators::{LipOperator, Point};
pub use crate::rng::RngStream;
use ndarray::Array1;
use serde::{Deserialize, Serialize};

/// Noise model attached to an oracle.
///
/// JSON descriptor: `{"model": "gaussian_decay" | "gaussian_constant" |
/// "finite_sum", ...parameters}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum NoiseModel {
    /// Isotropic Gaussian noise with per-coordinate standard deviation
    /// `sigma0 * (n + 1)^(-p)` at iteration `n`.
    GaussianDecay { sigma0: f64, p: f64 },
    /// Isotropic Gaussian noise with constant per-coordinate standard
    /// deviation `sigma0`.
    GaussianConstant { sigma0: f64 },
    /// Uniform sampling of one component operator per draw; the base
    /// operator is the component average, so draws are unbiased.
    FiniteSum { components: Vec<LipOperator> },
}

impl NoiseModel {
    pub fn exact() -> Self {
        NoiseModel::GaussianConstant { sigma0: 0.0 }
    }

    /// Per-coordinate standard deviation at iteration `n` for the additive
    /// Gaussian models; `None` for the finite-sum model, whose spread
    /// depends on the query point.
    pub fn sigma_at(&self, n: usize) -> Option<f64> {
        match self {
            NoiseModel::GaussianDecay { sigma0, p } => {
                Some(sigma0 * ((n + 1) as f64).powf(-p))
            }
            NoiseModel::GaussianConstant { sigma0 } => Some(*sigma0),
            NoiseModel::FiniteSum { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.sigma_at(0), Some(s) if s == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::GaussianDecay { sigma0, p } => {
                if *sigma0 < 0.0 || *p < 0.0 {
                    return Err(Error::Parameter(
                        "gaussian_decay needs sigma0 >= 0 and p >= 0".into(),
                    ));
                }
            }
            NoiseModel::GaussianConstant { sigma0 } => {
                if *sigma0 < 0.0 {
                    return Err(Error::Parameter("gaussian_constant needs sigma0 >= 0".into()));
                }
            }
            NoiseModel::FiniteSum { components } => {
                if components.is_empty() {
                    return Err(Error::Parameter("finite_sum needs at least one component".into()));
                }
                let d = components[0].dim();
                if components.iter().any(|c| c.dim() != d) {
                    return Err(Error::Parameter("finite_sum components must share a dimension".into()));
                }
            }
        }
        Ok(())
    }
}

/// Experimental deterministic perturbation added to `r_n` only.
///
/// The convergence theory constrains `r_n` solely through the summability
/// of `||r_n - B w_n||^2`, which this decaying bias satisfies for
/// `2 * decay > 1`; it is not an unbiased estimator and is therefore never
/// applied to the `s` draw.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeterministicPerturbation {
    pub delta0: f64,
    pub decay: f64,
}

/// Randomized estimator of a Lipschitz monotone operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StochasticOracle {
    base: LipOperator,
    noise: NoiseModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_bias: Option<DeterministicPerturbation>,
}

impl StochasticOracle {
    pub fn new(base: LipOperator, noise: NoiseModel) -> Result<Self> {
        noise.validate()?;
        if let NoiseModel::FiniteSum { components } = &noise {
            let avg = LipOperator::average(components)?;
            let diff = avg.matrix() - base.matrix();
            let offd = avg.offset() - base.offset();
            if linalg::frobenius_norm(&diff) > 1e-10 || linalg::l2_norm(&offd) > 1e-10 {
                return Err(Error::Parameter(
                    "finite_sum components must average to the base operator".into(),
                ));
            }
        }
        Ok(Self {
            base,
            noise,
            r_bias: None,
        })
    }

    /// Oracle that returns the exact operator value on every draw.
    pub fn exact(base: LipOperator) -> Self {
        Self {
            base,
            noise: NoiseModel::exact(),
            r_bias: None,
        }
    }

    /// Finite-sum oracle; the base operator is the component average.
    pub fn finite_sum(components: Vec<LipOperator>) -> Result<Self> {
        let base = LipOperator::average(&components)?;
        Self::new(base, NoiseModel::FiniteSum { components })
    }

    /// Attach the experimental deterministic `r`-perturbation.
    pub fn with_r_bias(mut self, bias: DeterministicPerturbation) -> Self {
        self.r_bias = Some(bias);
        self
    }

    pub fn base(&self) -> &LipOperator {
        &self.base
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn is_exact(&self) -> bool {
        self.noise.is_exact() && self.r_bias.is_none()
    }

    fn sample(&self, point: &Point, n: usize, rng: &mut RngStream) -> Point {
        match &self.noise {
            NoiseModel::FiniteSum { components } => {
                let idx = rng.next_index(components.len());
                components[idx].eval(point)
            }
            model => {
                let sigma = model.sigma_at(n).expect("additive model");
                let mut value = self.base.eval(point);
                if sigma > 0.0 {
                    let mut noise = vec![0.0; value.len()];
                    rng.fill_standard_normal(&mut noise);
                    for (v, z) in value.iter_mut().zip(&noise) {
                        *v += sigma * z;
                    }
                }
                value
            }
        }
    }

    /// Estimate of `B w` used by the forward steps; may carry the
    /// experimental deterministic bias.
    pub fn draw_r(&self, w: &Point, n: usize, rng: &mut RngStream) -> Point {
        let mut value = self.sample(w, n, rng);
        if let Some(bias) = &self.r_bias {
            let shift = bias.delta0 * ((n + 1) as f64).powf(-bias.decay)
                / (value.len() as f64).sqrt();
            value.mapv_inplace(|v| v + shift);
        }
        value
    }

    /// Conditionally unbiased estimate of `B y`; the unbiasedness is a hard
    /// contract for every model, so the deterministic bias never applies.
    pub fn draw_s(&self, y: &Point, n: usize, rng: &mut RngStream) -> Point {
        self.sample(y, n, rng)
    }

    /// Finite support of the `s` draw at `y` as `(probability, value)`
    /// pairs, when the conditional law is finitely supported (exact or
    /// finite-sum models). `None` for nondegenerate Gaussian noise.
    pub fn s_support(&self, y: &Point) -> Option<Vec<(f64, Point)>> {
        match &self.noise {
            NoiseModel::FiniteSum { components } => {
                let prob = 1.0 / components.len() as f64;
                Some(components.iter().map(|c| (prob, c.eval(y))).collect())
            }
            model if model.is_exact() => Some(vec![(1.0, self.base.eval(y))]),
            _ => None,
        }
    }

    /// Exact conditional noise energy `E[||draw - B x||^2]` at iteration
    /// `n` and query point `x`.
    pub fn variance_at(&self, x: &Point, n: usize) -> f64 {
        match &self.noise {
            NoiseModel::FiniteSum { components } => {
                let mean = self.base.eval(x);
                let m = components.len() as f64;
                components
                    .iter()
                    .map(|c| linalg::sq_norm(&(&c.eval(x) - &mean)))
                    .sum::<f64>()
                    / m
            }
            model => {
                let sigma = model.sigma_at(n).expect("additive model");
                self.dim() as f64 * sigma * sigma
            }
        }
    }
}

/// Summable inertia tolerance sequence `eps_n = eps0 * (n + 1)^(-theta_exp)`.
///
/// Indexing is shifted by one relative to the usual `n^(-theta)` writing so
/// that `n = 0` is a valid iteration index; the shift is applied uniformly
/// to every schedule in this crate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpsilonSchedule {
    pub eps0: f64,
    pub theta_exp: f64,
}

impl EpsilonSchedule {
    pub fn new(eps0: f64, theta_exp: f64) -> Result<Self> {
        if eps0 < 0.0 {
            return Err(Error::Parameter("eps0 must be nonnegative".into()));
        }
        if !(theta_exp > 1.0) {
            return Err(Error::Parameter(
                "theta_exp must exceed 1 so that the sequence is summable".into(),
            ));
        }
        Ok(Self { eps0, theta_exp })
    }

    pub fn zero() -> Self {
        Self {
            eps0: 0.0,
            theta_exp: 2.0,
        }
    }

    pub fn at(&self, n: usize) -> f64 {
        self.eps0 * ((n + 1) as f64).powf(-self.theta_exp)
    }

    pub fn partial_sum(&self, horizon: usize) -> f64 {
        (0..horizon).map(|n| self.at(n)).sum()
    }

    /// Closed-form upper bound on the full series.
    pub fn sum_bound(&self) -> f64 {
        self.eps0 * self.theta_exp / (self.theta_exp - 1.0) + self.eps0
    }
}

/// Step-size schedule `lambda_n`.
///
/// `at(n)` takes the 0-based iteration counter; polynomial schedules
/// evaluate at `k = n + 1`, i.e. `lambda = 4a / (mu k^alpha)`, matching the
/// one-based indexing of the rate analysis.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    Constant { value: f64, margin: f64 },
    Polynomial { a: f64, alpha: f64, mu: f64 },
}

impl StepSchedule {
    /// Default constant step inside the admissible interval
    /// `]margin, (1 - margin)/L[` with `margin = 0.05`: `lambda = 0.9 / L`.
    pub fn default_constant(lipschitz: f64) -> Self {
        StepSchedule::Constant {
            value: 0.9 / lipschitz,
            margin: 0.05,
        }
    }

    pub fn polynomial(a: f64, alpha: f64, mu: f64) -> Result<Self> {
        if !(a > 0.0) || !(mu > 0.0) {
            return Err(Error::Parameter("polynomial schedule needs a > 0 and mu > 0".into()));
        }
        if !(alpha > 0.5 && alpha <= 1.0) {
            return Err(Error::Parameter("polynomial exponent alpha must lie in (1/2, 1]".into()));
        }
        Ok(StepSchedule::Polynomial { a, alpha, mu })
    }

    pub fn at(&self, n: usize) -> f64 {
        match self {
            StepSchedule::Constant { value, .. } => *value,
            StepSchedule::Polynomial { a, alpha, mu } => {
                4.0 * a / (mu * ((n + 1) as f64).powf(*alpha))
            }
        }
    }

    pub fn is_square_summable(&self) -> bool {
        match self {
            StepSchedule::Constant { .. } => false,
            // alpha > 1/2, so sum lambda_n^2 ~ sum n^(-2 alpha) converges
            StepSchedule::Polynomial { .. } => true,
        }
    }

    /// Check the constant-step admissibility `value in ]margin, (1-margin)/L[`.
    pub fn validate_against(&self, lipschitz: f64) -> Result<()> {
        match self {
            StepSchedule::Constant { value, margin } => {
                if !(*margin > 0.0 && *margin < 0.5) {
                    return Err(Error::Parameter("constant-step margin must lie in (0, 1/2)".into()));
                }
                if !(*value > *margin && *value * lipschitz < 1.0 - *margin) {
                    return Err(Error::Parameter(format!(
                        "constant step {value} outside ]{margin}, {}[ for L = {lipschitz}",
                        (1.0 - margin) / lipschitz
                    )));
                }
                Ok(())
            }
            StepSchedule::Polynomial { a, alpha, mu } => {
                if !(*a > 0.0) || !(*mu > 0.0) || !(*alpha > 0.5 && *alpha <= 1.0) {
                    return Err(Error::Parameter("invalid polynomial schedule parameters".into()));
                }
                Ok(())
            }
        }
    }
}

/// Inertia coefficient of the extrapolation step:
/// `theta` when the iterates coincide (up to a relative tolerance of
/// `1e-14`), otherwise `min(eps_n / ||x_cur - x_prev||, theta)`. The output
/// always satisfies `alpha * ||x_cur - x_prev|| <= eps_n` on the min
/// branch.
pub fn inertia_coefficient(x_cur: &Point, x_prev: &Point, eps_n: f64, theta: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&theta));
    debug_assert!(eps_n >= 0.0);
    let displacement = linalg::l2_norm(&(x_cur - x_prev));
    if displacement <= 1e-14 * (1.0 + linalg::l2_norm(x_cur)) {
        theta
    } else {
        (eps_n / displacement).min(theta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummabilityVerdict {
    /// The series converges.
    Summable,
    /// The terms are bounded but the series is not analytically summable
    /// (the finite-sum model, whose spread depends on the trajectory).
    BoundedOnly,
    /// The series diverges.
    Divergent,
}

/// Numeric and analytic summability report for the noise conditions of the
/// two convergence regimes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummabilityReport {
    pub horizon: usize,
    /// Partial sum of the variance sequence (finite-sum variance profiled
    /// at the origin).
    pub variance_partial_sum: f64,
    /// Partial sum of `lambda_n^2 *` variance.
    pub weighted_partial_sum: f64,
    /// Verdict for the unweighted series required by the general regime.
    pub esum: SummabilityVerdict,
    /// Verdict for the step-weighted series required by the strongly
    /// monotone regime.
    pub dkv: SummabilityVerdict,
}

impl SummabilityReport {
    pub fn satisfies_some_regime(&self) -> bool {
        self.esum == SummabilityVerdict::Summable || self.dkv == SummabilityVerdict::Summable
    }
}

/// Classify the noise variance series against a step schedule and report
/// partial sums up to `horizon`.
pub fn validate_summability(
    oracle: &StochasticOracle,
    steps: &StepSchedule,
    horizon: usize,
) -> Result<SummabilityReport> {
    if horizon < 10 {
        return Err(Error::Parameter("summability horizon must be at least 10".into()));
    }
    let origin = Array1::zeros(oracle.dim());
    let mut variance_sum = 0.0;
    let mut weighted_sum = 0.0;
    for n in 0..horizon {
        let var = oracle.variance_at(&origin, n);
        let lambda = steps.at(n);
        variance_sum += var;
        weighted_sum += lambda * lambda * var;
    }

    let (esum, dkv) = match oracle.noise() {
        NoiseModel::FiniteSum { .. } => {
            let dkv = if steps.is_square_summable() {
                SummabilityVerdict::Summable
            } else {
                SummabilityVerdict::BoundedOnly
            };
            (SummabilityVerdict::BoundedOnly, dkv)
        }
        model => {
            let (sigma0, p) = match model {
                NoiseModel::GaussianDecay { sigma0, p } => (*sigma0, *p),
                NoiseModel::GaussianConstant { sigma0 } => (*sigma0, 0.0),
                NoiseModel::FiniteSum { .. } => unreachable!(),
            };
            if sigma0 == 0.0 {
                (SummabilityVerdict::Summable, SummabilityVerdict::Summable)
            } else {
                // variance terms decay like n^(-2p)
                let esum = if 2.0 * p > 1.0 {
                    SummabilityVerdict::Summable
                } else {
                    SummabilityVerdict::Divergent
                };
                let dkv = match steps {
                    StepSchedule::Constant { .. } => esum,
                    // weighted terms decay like n^(-2 alpha - 2p), 2 alpha > 1
                    StepSchedule::Polynomial { .. } => SummabilityVerdict::Summable,
                };
                (esum, dkv)
            }
        }
    };

    Ok(SummabilityReport {
        horizon,
        variance_partial_sum: variance_sum,
        weighted_partial_sum: weighted_sum,
        esum,
        dkv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn scaled_identity(d: usize, c: f64) -> LipOperator {
        LipOperator::scaling(d, c).unwrap()
    }

    #[test]
    fn zero_noise_draws_are_exact() {
        let oracle = StochasticOracle::exact(scaled_identity(2, 1.0));
        let mut rng = RngStream::new(1, 1);
        let w = array![0.4, -2.0];
        for n in 0..5 {
            let r = oracle.draw_r(&w, n, &mut rng);
            let s = oracle.draw_s(&w, n, &mut rng);
            assert_eq!(r, w);
            assert_eq!(s, w);
        }
    }

    #[test]
    fn gaussian_decay_schedule_value() {
        let model = NoiseModel::GaussianDecay { sigma0: 1.0, p: 1.0 };
        assert!((model.sigma_at(3).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn identical_streams_give_identical_draws() {
        let oracle = StochasticOracle::new(
            scaled_identity(3, 2.0),
            NoiseModel::GaussianConstant { sigma0: 0.7 },
        )
        .unwrap();
        let y = array![1.0, 2.0, 3.0];
        let mut rng_a = RngStream::new(9, 4);
        let mut rng_b = RngStream::new(9, 4);
        for n in 0..10 {
            assert_eq!(oracle.draw_s(&y, n, &mut rng_a), oracle.draw_s(&y, n, &mut rng_b));
        }
    }

    #[test]
    fn finite_sum_mean_matches_base_statistically() {
        let comp_up = LipOperator::new(array![[1.5]], array![0.3], 1.5, 0.0).unwrap();
        let comp_down = LipOperator::new(array![[0.5]], array![-0.3], 0.5, 0.0).unwrap();
        let oracle = StochasticOracle::finite_sum(vec![comp_up, comp_down]).unwrap();
        let w = array![2.0];
        let exact = oracle.base().eval(&w);
        let reps = 100_000usize;
        let mut rng = RngStream::new(31, 0);
        let mut mean = 0.0;
        let mut sq = 0.0;
        for n in 0..reps {
            let v = oracle.draw_r(&w, n, &mut rng)[0];
            mean += v;
            sq += v * v;
        }
        mean /= reps as f64;
        let var = sq / reps as f64 - mean * mean;
        let stderr = (var / reps as f64).sqrt();
        assert!(
            (mean - exact[0]).abs() <= 3.0 * stderr + 1e-12,
            "mean {mean} vs exact {} (stderr {stderr})",
            exact[0]
        );
    }

    #[test]
    fn s_draw_is_unbiased_within_four_sigma() {
        let cases: Vec<StochasticOracle> = vec![
            StochasticOracle::new(
                scaled_identity(2, 1.0),
                NoiseModel::GaussianDecay { sigma0: 1.0, p: 0.5 },
            )
            .unwrap(),
            StochasticOracle::new(
                scaled_identity(2, 1.0),
                NoiseModel::GaussianConstant { sigma0: 0.5 },
            )
            .unwrap(),
        ];
        let y = array![0.7, -1.2];
        let reps = 100_000usize;
        for (case_idx, oracle) in cases.iter().enumerate() {
            let exact = oracle.base().eval(&y);
            let n_fixed = 4usize;
            let sigma = oracle.noise().sigma_at(n_fixed).unwrap();
            let mut rng = RngStream::new(100 + case_idx as u64, 1);
            let mut sums = Array1::<f64>::zeros(2);
            for _ in 0..reps {
                sums += &oracle.draw_s(&y, n_fixed, &mut rng);
            }
            let tolerance = 4.0 * sigma / (reps as f64).sqrt();
            for i in 0..2 {
                let deviation = (sums[i] / reps as f64 - exact[i]).abs();
                assert!(deviation <= tolerance, "case {case_idx} coord {i}: {deviation} > {tolerance}");
            }
        }
    }

    #[test]
    fn r_bias_applies_only_to_r() {
        let oracle = StochasticOracle::exact(scaled_identity(1, 1.0)).with_r_bias(
            DeterministicPerturbation {
                delta0: 0.5,
                decay: 1.0,
            },
        );
        let w = array![1.0];
        let mut rng = RngStream::new(0, 0);
        let r = oracle.draw_r(&w, 0, &mut rng);
        let s = oracle.draw_s(&w, 0, &mut rng);
        assert!((r[0] - 1.5).abs() < 1e-15);
        assert_eq!(s[0], 1.0);
    }

    #[test]
    fn finite_sum_must_average_to_base() {
        let comp = LipOperator::new(array![[2.0]], array![0.0], 2.0, 0.0).unwrap();
        let wrong_base = scaled_identity(1, 1.0);
        let err = StochasticOracle::new(
            wrong_base,
            NoiseModel::FiniteSum {
                components: vec![comp],
            },
        );
        assert!(err.is_err());
    }

    #[test]
    fn epsilon_schedule_sums_are_monotone_and_bounded() {
        let eps = EpsilonSchedule::new(0.3, 1.5).unwrap();
        let mut prev = 0.0;
        for horizon in [1usize, 10, 100, 1000, 10_000] {
            let sum = eps.partial_sum(horizon);
            assert!(sum >= prev);
            prev = sum;
        }
        assert!(prev <= eps.sum_bound());
    }

    #[test]
    fn polynomial_schedule_matches_closed_form() {
        let steps = StepSchedule::polynomial(2.0, 1.0, 0.5).unwrap();
        for k in 1usize..=1000 {
            let expected = 4.0 * 2.0 / (0.5 * (k as f64));
            let got = steps.at(k - 1);
            assert!(
                (got - expected).abs() <= 1e-15 * expected,
                "k = {k}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn inertia_rule_branches() {
        let x = array![1.0, 1.0];
        assert_eq!(inertia_coefficient(&x, &x, 0.5, 0.9), 0.9);
        let x_prev = array![1.0, 0.5]; // displacement 0.5
        assert!((inertia_coefficient(&x, &x_prev, 0.1, 0.9) - 0.2).abs() < 1e-15);
        assert!((inertia_coefficient(&x, &x_prev, 10.0, 0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn summability_verdicts_match_series_tests() {
        let base = scaled_identity(1, 1.0);
        let steps_const = StepSchedule::default_constant(1.0);
        let steps_poly = StepSchedule::polynomial(2.0, 1.0, 1.0).unwrap();

        let decaying = StochasticOracle::new(
            base.clone(),
            NoiseModel::GaussianDecay { sigma0: 1.0, p: 1.0 },
        )
        .unwrap();
        let report = validate_summability(&decaying, &steps_const, 100).unwrap();
        assert_eq!(report.esum, SummabilityVerdict::Summable);

        let flat = StochasticOracle::new(
            base.clone(),
            NoiseModel::GaussianDecay { sigma0: 1.0, p: 0.0 },
        )
        .unwrap();
        let report = validate_summability(&flat, &steps_const, 100).unwrap();
        assert_eq!(report.esum, SummabilityVerdict::Divergent);
        assert_eq!(report.dkv, SummabilityVerdict::Divergent);

        let report = validate_summability(&flat, &steps_poly, 100).unwrap();
        assert_eq!(report.dkv, SummabilityVerdict::Summable);

        assert!(validate_summability(&flat, &steps_poly, 9).is_err());
    }

    #[test]
    fn variance_partial_sums_track_p_series() {
        let base = scaled_identity(1, 1.0);
        let oracle = StochasticOracle::new(
            base,
            NoiseModel::GaussianDecay { sigma0: 1.0, p: 1.0 },
        )
        .unwrap();
        let steps = StepSchedule::default_constant(1.0);
        let report = validate_summability(&oracle, &steps, 10_000).unwrap();
        let expected: f64 = (0..10_000).map(|n| ((n + 1) as f64).powi(-2)).sum();
        assert!((report.variance_partial_sum - expected).abs() < 1e-12);
        assert!(report.variance_partial_sum < std::f64::consts::PI.powi(2) / 6.0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn inertia_output_respects_bounds(
                x0 in -10.0f64..10.0,
                x1 in -10.0f64..10.0,
                p0 in -10.0f64..10.0,
                p1 in -10.0f64..10.0,
                eps_n in 0.0f64..5.0,
                theta in 0.0f64..1.0,
            ) {
                let x = array![x0, x1];
                let x_prev = array![p0, p1];
                let alpha = inertia_coefficient(&x, &x_prev, eps_n, theta);
                prop_assert!(alpha <= theta + 1e-15);
                prop_assert!(alpha >= 0.0);
                let displacement = linalg::l2_norm(&(&x - &x_prev));
                // the equality-tolerance branch may pay up to theta * tolerance
                let slack = 1e-14 * (1.0 + linalg::l2_norm(&x)) * theta;
                prop_assert!(alpha * displacement <= eps_n + slack + 1e-12);
            }
        }
    }
}
