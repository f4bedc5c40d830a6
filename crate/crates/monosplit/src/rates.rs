//! Non-asymptotic recursion bounds and empirical rate fitting.
//!
//! The central object is the scalar recursion
//! `0 <= s_{n+1} <= (1 - a n^-alpha) s_n + b n^-beta`, which the expected
//! squared distance of the strongly monotone regime satisfies. The two
//! closed-form bounds (`alpha = 1` and `1/2 < alpha < 1`) are implemented
//! verbatim and checked against the extremal simulated sequence; the rate
//! fitter turns trajectory data into a log-log slope to compare with the
//! predicted exponents.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `phi_c(t) = (t^c - 1) / c` for `c != 0`, `log t` at `c = 0`, continuous
/// in `c`; tiny `|c|` is routed through `expm1` for stability.
pub fn phi_c(c: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("phi_c needs t > 0, got {t}")));
    }
    if c == 0.0 {
        return Ok(t.ln());
    }
    if c.abs() < 1e-8 {
        return Ok((c * t.ln()).exp_m1() / c);
    }
    Ok((t.powf(c) - 1.0) / c)
}

/// Parameters of the recursion `s_{n+1} = (1 - a n^-alpha) s_n + b n^-beta`
/// together with the start index `n0` (the smallest integer `> 1` with
/// `a * n0^-alpha < 1`) and the start value `s_init = s_{n0}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecursionParams {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub s_init: f64,
    pub n0: usize,
}

impl RecursionParams {
    pub fn new(a: f64, b: f64, alpha: f64, beta: f64, s_init: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Parameter("recursion coefficient a must be positive".into()));
        }
        if b < 0.0 {
            return Err(Error::Parameter("recursion coefficient b must be nonnegative".into()));
        }
        if !(alpha > 0.5 && alpha <= 1.0) {
            return Err(Error::Parameter("alpha must lie in (1/2, 1]".into()));
        }
        if !(beta > 1.0) {
            return Err(Error::Parameter("beta must exceed 1".into()));
        }
        if a > beta {
            return Err(Error::Parameter("the bounds require a <= beta".into()));
        }
        if s_init < 0.0 {
            return Err(Error::Parameter("s_init must be nonnegative".into()));
        }
        let mut n0 = (a.powf(1.0 / alpha).ceil() as usize).max(2);
        while a * (n0 as f64).powf(-alpha) >= 1.0 {
            n0 += 1;
        }
        Ok(Self {
            a,
            b,
            alpha,
            beta,
            s_init,
            n0,
        })
    }

    /// `t = 1 - 2^(alpha - 1)`, nonnegative on the admitted range.
    pub fn t(&self) -> f64 {
        1.0 - 2f64.powf(self.alpha - 1.0)
    }
}

/// Closed-form bound on `s_{n+1}` for `n >= 2 n0`.
pub fn lemma36_bound(params: &RecursionParams, n: usize) -> Result<f64> {
    if n < 2 * params.n0 {
        return Err(Error::Domain(format!(
            "bound asserted only for n >= 2 n0 = {}, got {n}",
            2 * params.n0
        )));
    }
    let nf = n as f64;
    let n0f = params.n0 as f64;
    let RecursionParams {
        a, b, alpha, beta, ..
    } = *params;
    if alpha == 1.0 {
        let first = params.s_init * (n0f / (nf + 1.0)).powf(a);
        let second =
            b / (nf + 1.0).powf(a) * (1.0 + 1.0 / n0f).powf(a) * phi_c(a + 1.0 - beta, nf)?;
        Ok(first + second)
    } else {
        let t = params.t();
        let leading = b * phi_c(1.0 - beta, nf)?
            + params.s_init * (a * n0f.powf(1.0 - alpha) / (1.0 - alpha)).exp();
        let decay = (-a * t * (nf + 1.0).powf(1.0 - alpha) / (1.0 - alpha)).exp();
        let tail = b * 2f64.powf(beta - alpha) / (a * (nf - 2.0).powf(beta - alpha));
        Ok(leading * decay + tail)
    }
}

/// The extremal sequence attaining the recursion with equality,
/// `s_{n+1} = (1 - a n^-alpha) s_n + b n^-beta` clipped at zero, started at
/// `s_{n0} = s_init`. Returns the values for `n = n0 ..= horizon`; entry
/// `i` holds `s_{n0 + i}`.
pub fn simulate_recursion(params: &RecursionParams, horizon: usize) -> Result<Vec<f64>> {
    if horizon < params.n0 {
        return Err(Error::Parameter(format!(
            "horizon must be at least n0 = {}",
            params.n0
        )));
    }
    let mut values = Vec::with_capacity(horizon - params.n0 + 1);
    let mut current = params.s_init;
    values.push(current);
    for n in params.n0..horizon {
        let nf = n as f64;
        current = ((1.0 - params.a * nf.powf(-params.alpha)) * current
            + params.b * nf.powf(-params.beta))
        .max(0.0);
        values.push(current);
    }
    Ok(values)
}

/// Rate-exponent parameters of the step schedule and noise level, used to
/// fill the predicted slope.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TheoryParams {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Predicted log-log slope of the expected squared distance, with a flag
/// for the logarithmic correction at `alpha = 1`, `a = beta - 1`.
pub fn theory_slope(params: &TheoryParams) -> Result<(f64, bool)> {
    let TheoryParams { a, alpha, beta } = *params;
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(Error::Parameter("alpha must lie in (1/2, 1]".into()));
    }
    if alpha < 1.0 {
        Ok((alpha - beta, false))
    } else {
        let log_correction = (a - (beta - 1.0)).abs() < 1e-12;
        Ok((-a.min(beta - 1.0), log_correction))
    }
}

/// Outcome of a least-squares slope fit on log-log data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateVerdict {
    pub fitted_slope: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theory_slope: Option<f64>,
    pub window: (f64, f64),
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    pub log_correction: bool,
    pub points_used: usize,
}

/// Unweighted least-squares slope of `log value` against `log n` over the
/// points with `n` inside `window`. Needs at least 10 strictly positive
/// points in the window.
pub fn fit_rate(
    series: &[(f64, f64)],
    window: (f64, f64),
    theory: Option<&TheoryParams>,
) -> Result<RateVerdict> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Parameter(format!("invalid fit window [{lo}, {hi}]")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(n, v) in series {
        if n < lo || n > hi {
            continue;
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!(
                "rate fit needs positive finite values, got {v} at n = {n}"
            )));
        }
        xs.push(n.ln());
        ys.push(v.ln());
    }
    if xs.len() < 10 {
        return Err(Error::Domain(format!(
            "rate fit needs at least 10 points in the window, found {}",
            xs.len()
        )));
    }
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Domain("degenerate fit window: all abscissae equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let e = y - (intercept + slope * x);
        ss_res += e * e;
    }
    let residual = (ss_res / count).sqrt();

    let (theory_value, log_correction) = match theory {
        Some(p) => {
            let (slope, flag) = theory_slope(p)?;
            (Some(slope), flag)
        }
        None => (None, false),
    };
    Ok(RateVerdict {
        fitted_slope: slope,
        theory_slope: theory_value,
        window,
        residual,
        log_correction,
        points_used: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_at_zero_is_log() {
        assert!((phi_c(0.0, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phi_at_one() {
        assert!((phi_c(1.0, 5.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn phi_is_continuous_at_small_c() {
        let expected = 2f64.ln();
        assert!((phi_c(1e-12, 2.0).unwrap() - expected).abs() < 1e-9);
        for t in [0.1, 0.5, 1.0, 2.0, 10.0] {
            for c in [-1e-8, -1e-10, 1e-10, 1e-8] {
                let diff = (phi_c(c, t).unwrap() - phi_c(0.0, t).unwrap()).abs();
                assert!(diff <= 1e-6, "c={c}, t={t}: diff {diff}");
            }
        }
    }

    #[test]
    fn phi_rejects_nonpositive_t() {
        assert!(phi_c(1.0, 0.0).is_err());
        assert!(phi_c(1.0, -2.0).is_err());
    }

    #[test]
    fn phi_is_increasing_in_t() {
        for c in [-2.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            let mut prev = f64::NEG_INFINITY;
            for i in 1..=100 {
                let t = 0.05 * i as f64;
                let v = phi_c(c, t).unwrap();
                assert!(v > prev, "phi_{c} not increasing at t = {t}");
                prev = v;
            }
        }
    }

    #[test]
    fn n0_is_smallest_admissible_start() {
        let p = RecursionParams::new(2.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(p.n0, 3); // 2 * 2^-1 = 1 is not < 1, 2/3 < 1
        let p = RecursionParams::new(0.5, 1.0, 0.75, 1.5, 1.0).unwrap();
        assert_eq!(p.n0, 2);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(RecursionParams::new(0.0, 1.0, 1.0, 2.0, 1.0).is_err());
        assert!(RecursionParams::new(1.0, 1.0, 0.4, 2.0, 1.0).is_err());
        assert!(RecursionParams::new(1.0, 1.0, 1.0, 0.9, 1.0).is_err());
        assert!(RecursionParams::new(3.0, 1.0, 1.0, 2.0, 1.0).is_err()); // a > beta
    }

    #[test]
    fn telescoping_case_matches_product_oracle() {
        // b = 0, alpha = 1, a = 1: s_{n+1} = (1 - 1/n) s_n telescopes to
        // s_n = s_{n0} * prod_{k=n0}^{n-1} (1 - 1/k); the oracle computes
        // the product directly.
        let p = RecursionParams::new(1.0, 0.0, 1.0, 2.0, 1.0).unwrap();
        let horizon = 200;
        let sim = simulate_recursion(&p, horizon).unwrap();
        for n in p.n0..=horizon {
            let mut product = 1.0;
            for k in p.n0..n {
                product *= 1.0 - 1.0 / k as f64;
            }
            let expected = p.s_init * product;
            let got = sim[n - p.n0];
            assert!(
                (got - expected).abs() <= 1e-14 * (1.0 + expected),
                "n = {n}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn alpha_one_bound_reduces_when_b_is_zero() {
        let p = RecursionParams::new(1.5, 0.0, 1.0, 2.0, 0.7).unwrap();
        let n = 2 * p.n0 + 5;
        let bound = lemma36_bound(&p, n).unwrap();
        let expected = 0.7 * (p.n0 as f64 / (n as f64 + 1.0)).powf(1.5);
        assert!((bound - expected).abs() < 1e-15);
    }

    #[test]
    fn alpha_one_bound_matches_hand_evaluation() {
        // a = 2, beta = 2, n0 = 2 is not admissible for a = 2 (2/2^1 = 1),
        // so fix n0 by construction: a = 2 forces n0 = 3. Use the spec-free
        // hand evaluation with the constructed n0.
        let p = RecursionParams::new(2.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let n = 10;
        let n0 = p.n0 as f64;
        let expected = (n0 / 11.0).powi(2)
            + (1.0 / 121.0) * (1.0 + 1.0 / n0).powi(2) * phi_c(1.0, 10.0).unwrap();
        let got = lemma36_bound(&p, n).unwrap();
        assert!((got - expected).abs() <= 1e-14 * expected.abs());
    }

    #[test]
    fn bound_rejects_small_n() {
        let p = RecursionParams::new(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert!(lemma36_bound(&p, 2 * p.n0 - 1).is_err());
    }

    #[test]
    fn bound_dominates_simulation_on_the_grid() {
        let horizon = 10_000;
        for &a in &[0.5, 1.0, 2.0] {
            for &alpha in &[0.6, 0.75, 1.0] {
                for &beta in &[1.5, 2.0, 3.0] {
                    if a > beta {
                        continue;
                    }
                    let p = RecursionParams::new(a, 1.0, alpha, beta, 1.0).unwrap();
                    let sim = simulate_recursion(&p, horizon).unwrap();
                    for n in (2 * p.n0)..horizon {
                        let bound = lemma36_bound(&p, n).unwrap();
                        let value = sim[n + 1 - p.n0];
                        assert!(
                            value <= bound * (1.0 + 1e-9),
                            "violation at a={a} alpha={alpha} beta={beta} n={n}: {value} > {bound}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn simulated_sequences_stay_nonnegative_and_eventually_decrease() {
        let p = RecursionParams::new(1.2, 0.8, 0.75, 2.0, 2.0).unwrap();
        let sim = simulate_recursion(&p, 5000).unwrap();
        assert!(sim.iter().all(|&v| v >= 0.0));
        let tail = &sim[sim.len() - 100..];
        for pair in tail.windows(2) {
            assert!(pair[1] <= pair[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let series: Vec<(f64, f64)> = (1..=2000).map(|n| (n as f64, 5.0 / n as f64)).collect();
        let verdict = fit_rate(&series, (10.0, 2000.0), None).unwrap();
        assert!((verdict.fitted_slope + 1.0).abs() < 1e-6);
        assert!(verdict.residual < 1e-9);
    }

    #[test]
    fn fit_recovers_constant() {
        let series: Vec<(f64, f64)> = (1..=100).map(|n| (n as f64, 3.5)).collect();
        let verdict = fit_rate(&series, (1.0, 100.0), None).unwrap();
        assert!(verdict.fitted_slope.abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_nonpositive_values_and_thin_windows() {
        let bad: Vec<(f64, f64)> = (1..=50).map(|n| (n as f64, -1.0)).collect();
        assert!(fit_rate(&bad, (1.0, 50.0), None).is_err());
        let thin: Vec<(f64, f64)> = (1..=5).map(|n| (n as f64, 1.0)).collect();
        assert!(fit_rate(&thin, (1.0, 5.0), None).is_err());
    }

    #[test]
    fn theory_slopes_follow_rate_table() {
        let (slope, log_flag) = theory_slope(&TheoryParams {
            a: 1.0,
            alpha: 0.75,
            beta: 2.0,
        })
        .unwrap();
        assert!((slope + 1.25).abs() < 1e-15);
        assert!(!log_flag);

        let (slope, log_flag) = theory_slope(&TheoryParams {
            a: 2.0,
            alpha: 1.0,
            beta: 2.0,
        })
        .unwrap();
        assert!((slope + 1.0).abs() < 1e-15);
        assert!(!log_flag);

        let (slope, log_flag) = theory_slope(&TheoryParams {
            a: 1.0,
            alpha: 1.0,
            beta: 2.0,
        })
        .unwrap();
        assert!((slope + 1.0).abs() < 1e-15);
        assert!(log_flag);
    }

    #[test]
    fn fit_on_simulated_recursion_matches_theory_exponent() {
        // alpha = 1, a > beta - 1: decay exponent beta - 1
        let p = RecursionParams::new(2.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let horizon = 100_000;
        let sim = simulate_recursion(&p, horizon).unwrap();
        let series: Vec<(f64, f64)> = (p.n0..=horizon)
            .map(|n| (n as f64, sim[n - p.n0]))
            .collect();
        let verdict = fit_rate(&series, (1_000.0, 100_000.0), None).unwrap();
        assert!(
            (verdict.fitted_slope + 1.0).abs() <= 0.1,
            "slope {}",
            verdict.fitted_slope
        );
    }
}
