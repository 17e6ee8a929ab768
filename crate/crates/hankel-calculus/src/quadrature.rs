//! Semi-infinite panel quadrature.
//!
//! The plain engine lays composite Gauss–Legendre panels over `(0, X_max]`
//! with dyadic grading toward the origin (integrable endpoint singularities
//! up to `x^{-1/2}` are absorbed by the grading) and refines by halving every
//! panel until two successive estimates agree to `abs_tol`.
//!
//! The oscillatory engine splits the tail at the estimated zeros of the
//! fastest Bessel factor (spacing `π / ω_max`) and, when requested,
//! accelerates the alternating panel-sum tail by repeated averaging. The
//! conditionally convergent kernel integrals require that acceleration.
//!
//! Panels are evaluated independently (in parallel under the `parallel`
//! feature) and summed pairwise in ascending panel order, so results are
//! deterministic regardless of thread count.

use crate::bessel::{self, BesselOrder};
use crate::numeric::{euler_accelerate, pairwise_sum};
use crate::parallel;
use crate::{Error, Result};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// Tail-summation strategy for oscillatory integrands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Acceleration {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "alternating-series")]
    AlternatingSeries,
}

/// Configuration of the quadrature engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel, 4 ≤ n ≤ 64.
    pub panel_nodes: usize,
    /// Truncation point of the semi-infinite range.
    pub x_max: f64,
    /// Split tail panels at estimated kernel zeros.
    pub zero_splitting: bool,
    pub acceleration: Acceleration,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            panel_nodes: 16,
            x_max: 60.0,
            zero_splitting: true,
            acceleration: Acceleration::None,
            abs_tol: 1e-9,
            max_panels: 4096,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(4..=64).contains(&self.panel_nodes) {
            return Err(Error::InvalidInput(format!(
                "panel_nodes must be in [4, 64], got {}",
                self.panel_nodes
            )));
        }
        if !(self.x_max > 0.0) || !self.x_max.is_finite() {
            return Err(Error::InvalidInput(format!("x_max must be positive, got {}", self.x_max)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidInput(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.max_panels < 8 {
            return Err(Error::InvalidInput("max_panels must be at least 8".into()));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn with_x_max(mut self, x_max: f64) -> Self {
        self.x_max = x_max;
        self
    }

    pub fn with_acceleration(mut self, acceleration: Acceleration) -> Self {
        self.acceleration = acceleration;
        self
    }
}

/// Outcome of a quadrature; `converged` implies `error_estimate ≤ abs_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub converged: bool,
}

static GL_CACHE: Lazy<RwLock<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Gauss–Legendre nodes and weights on [-1, 1], cached per degree.
pub(crate) fn gauss_legendre_rule(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    if let Some(hit) = GL_CACHE.read().expect("cache poisoned").get(&n) {
        return hit.clone();
    }
    let computed = Arc::new(compute_gauss_legendre(n));
    let mut guard = GL_CACHE.write().expect("cache poisoned");
    guard.entry(n).or_insert(computed).clone()
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let m = (n + 1) / 2;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..m {
        // Newton on P_n from a cosine initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for k in 1..=n {
                let k = k as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * k - 1.0) * x * p2 - (k - 1.0) * p3) / k;
            }
            dp = n as f64 * (x * p1 - p2) / (x * x - 1.0);
            let dx = -p1 / dp;
            x += dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x.abs();
        weights[i] = w;
        nodes[n - 1 - i] = x.abs();
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn panel_value<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (&x, &w) in rule.0.iter().zip(rule.1.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Dyadically graded panels on `(0, b]`, finest near the origin.
fn graded_panels(b: f64, levels: usize) -> Vec<(f64, f64)> {
    let mut breaks = Vec::with_capacity(levels + 2);
    breaks.push(0.0);
    for j in (1..=levels).rev() {
        breaks.push(b * (0.5_f64).powi(j as i32));
    }
    breaks.push(b);
    breaks.windows(2).map(|w| (w[0], w[1])).collect()
}

fn halve(panels: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(panels.len() * 2);
    for &(a, b) in panels {
        let m = 0.5 * (a + b);
        out.push((a, m));
        out.push((m, b));
    }
    out
}

fn composite<F: Fn(f64) -> f64 + Sync>(f: &F, panels: &[(f64, f64)], n: usize) -> f64 {
    let rule = gauss_legendre_rule(n);
    let values = parallel::map_collect(panels, |&(a, b)| panel_value(f, a, b, &rule));
    pairwise_sum(&values)
}

fn integrate_on<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    spec: &QuadratureSpec,
    upper: f64,
    grading_levels: usize,
) -> IntegralResult {
    let mut panels = graded_panels(upper, grading_levels);
    let mut estimate = composite(f, &panels, spec.panel_nodes);
    let mut error = f64::INFINITY;
    let mut converged = false;
    while panels.len() * 2 <= spec.max_panels {
        panels = halve(&panels);
        let next = composite(f, &panels, spec.panel_nodes);
        error = (next - estimate).abs();
        estimate = next;
        if error <= spec.abs_tol {
            converged = true;
            break;
        }
    }
    IntegralResult {
        value: estimate,
        error_estimate: error,
        panels_used: panels.len(),
        converged,
    }
}

/// Composite Gauss–Legendre over `(0, X_max]` with doubling refinement.
pub fn integrate<F: Fn(f64) -> f64 + Sync>(f: F, spec: &QuadratureSpec) -> Result<IntegralResult> {
    spec.validate()?;
    Ok(integrate_on(&f, spec, spec.x_max, 80))
}

/// Estimated first positive zero of `J_ν`.
fn first_zero_estimate(nu: f64) -> f64 {
    if nu < 0.75 {
        2.404825557695773
    } else {
        // McMahon-type estimate, adequate for panel placement
        let c = nu.powf(1.0 / 3.0);
        nu + 1.855_757 * c + 1.033_15 / c
    }
}

/// Oscillatory integral `∫₀^∞ envelope(t) Π_i J_{ν_i}(ω_i t) dt`.
///
/// Tail panels follow the zero spacing of the fastest-frequency factor; with
/// [`Acceleration::AlternatingSeries`] the alternating panel sums are
/// accelerated by repeated averaging, which also covers conditionally
/// convergent integrands. Without acceleration the tail is summed as-is and
/// the last panel magnitude enters the error estimate.
pub fn integrate_bessel_oscillatory<F: Fn(f64) -> f64 + Sync>(
    envelope: F,
    frequencies: &[f64],
    orders: &[BesselOrder],
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    spec.validate()?;
    if frequencies.len() != orders.len() || frequencies.is_empty() {
        return Err(Error::InvalidInput(
            "oscillatory integration needs matching nonempty frequencies/orders".into(),
        ));
    }
    if frequencies.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidInput("frequencies must be positive".into()));
    }
    if !spec.zero_splitting {
        return Err(Error::InvalidInput(
            "oscillatory integration requires zero_splitting".into(),
        ));
    }

    let factors: Vec<(f64, f64)> = frequencies
        .iter()
        .zip(orders.iter())
        .map(|(&w, &nu)| (w, nu.value()))
        .collect();
    let integrand = |t: f64| -> f64 {
        let mut v = envelope(t);
        for &(w, nu) in &factors {
            if v == 0.0 {
                return 0.0;
            }
            v *= bessel::eval_j(nu, w * t);
        }
        v
    };

    // head region up to the first zero of the fastest factor
    let (omega_max, nu_fast) = factors
        .iter()
        .fold((f64::MIN, 0.0), |acc, &(w, nu)| if w > acc.0 { (w, nu) } else { acc });
    let t_head = (first_zero_estimate(nu_fast) / omega_max).min(spec.x_max);
    let head_spec = QuadratureSpec {
        max_panels: spec.max_panels.min(1024),
        ..*spec
    };
    let head = integrate_on(&integrand, &head_spec, t_head, 32);

    // half-period tail panels
    let step = std::f64::consts::PI / omega_max;
    let n_tail = ((spec.x_max - t_head) / step).floor().max(0.0) as usize;
    let rule = gauss_legendre_rule(spec.panel_nodes);
    let sums = parallel::map_range(n_tail, |k| {
        let a = t_head + k as f64 * step;
        panel_value(&integrand, a, a + step, &rule)
    });

    let mut panels_used = head.panels_used + n_tail;
    match spec.acceleration {
        Acceleration::None => {
            let tail = pairwise_sum(&sums);
            let trunc = sums.last().map(|s| s.abs()).unwrap_or(0.0);
            let error = head.error_estimate + trunc;
            Ok(IntegralResult {
                value: head.value + tail,
                error_estimate: error,
                panels_used,
                converged: head.converged && error <= spec.abs_tol,
            })
        }
        Acceleration::AlternatingSeries => {
            if sums.is_empty() {
                return Ok(head);
            }
            let start = alternation_start(&sums);
            let Some(start) = start else {
                return Ok(IntegralResult {
                    value: head.value + pairwise_sum(&sums),
                    error_estimate: f64::INFINITY,
                    panels_used,
                    converged: false,
                });
            };
            let leading = pairwise_sum(&sums[..start]);
            let (accelerated, acc_err) = euler_accelerate(&sums[start..]);
            panels_used += sums.len() - start;
            let error = head.error_estimate + acc_err;
            Ok(IntegralResult {
                value: head.value + leading + accelerated,
                error_estimate: error,
                panels_used,
                converged: head.converged && error <= spec.abs_tol,
            })
        }
    }
}

/// First index from which the panel sums strictly alternate in sign
/// (tiny panels count as compatible with either sign).
fn alternation_start(sums: &[f64]) -> Option<usize> {
    let scale = sums.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    if scale == 0.0 {
        return Some(0);
    }
    let negligible = 1e-14 * scale;
    'outer: for start in 0..sums.len() {
        let mut prev_sign = 0i8;
        for &s in &sums[start..] {
            if s.abs() <= negligible {
                continue;
            }
            let sign = if s > 0.0 { 1 } else { -1 };
            if sign == prev_sign {
                continue 'outer;
            }
            prev_sign = sign;
        }
        // require a meaningful alternating run, not just the final dregs
        if sums.len() - start >= 4 || start == 0 {
            return Some(start);
        }
    }
    None
}

/// The weighted-norm functional `∫₀^∞ |φ(x)|^p x^{μ+1/2} dx` (no p-th root),
/// with convergence checked by doubling the truncation point.
pub fn lp_mu_norm<F: Fn(f64) -> f64 + Sync>(
    f: F,
    p: f64,
    mu: BesselOrder,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    spec.validate()?;
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("exponent p must be ≥ 1, got {p}")));
    }
    let weight_exp = mu.value() + 0.5;
    let integrand = |x: f64| -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        f(x).abs().powf(p) * x.powf(weight_exp)
    };
    let base = integrate_on(&integrand, spec, spec.x_max, 80);
    let doubled = integrate_on(&integrand, spec, 2.0 * spec.x_max, 80);
    let tail_change = (doubled.value - base.value).abs();
    let converged = base.converged && doubled.converged && tail_change <= 2.0 * spec.abs_tol;
    Ok(IntegralResult {
        value: doubled.value,
        error_estimate: doubled.error_estimate + tail_change,
        panels_used: base.panels_used + doubled.panels_used,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn o(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    #[test]
    fn gauss_legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre_rule(8);
        // degree 15 is exact for 8 nodes
        let val = panel_value(&|x: f64| x.powi(14), -1.0, 1.0, &rule);
        assert_relative_eq!(val, 2.0 / 15.0, max_relative = 1e-13);
    }

    #[test]
    fn exponential_integral() {
        let spec = QuadratureSpec::default().with_tol(1e-10).with_x_max(40.0);
        let r = integrate(|x: f64| (-x).exp(), &spec).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn gaussian_moment() {
        let spec = QuadratureSpec::default().with_tol(1e-10);
        let r = integrate(|x: f64| x * (-x * x).exp(), &spec).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn square_root_singularity() {
        // ∫₀^∞ x^{-1/2} e^{-x} dx = Γ(1/2) = √π
        let spec = QuadratureSpec::default().with_tol(1e-8).with_x_max(40.0);
        let r = integrate(|x: f64| x.powf(-0.5) * (-x).exp(), &spec).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.7724538509055160273).abs() <= 1e-8);
    }

    #[test]
    fn laplace_transform_of_j0() {
        // ∫₀^∞ J_0(t) e^{-t} dt = 1/√2
        let spec = QuadratureSpec::default().with_tol(1e-9);
        let r = integrate_bessel_oscillatory(|t: f64| (-t).exp(), &[1.0], &[o(0.0)], &spec).unwrap();
        assert!(r.converged, "error estimate {}", r.error_estimate);
        assert!((r.value - 0.7071067811865475).abs() <= 1e-8);
    }

    #[test]
    fn dini_style_integral_with_acceleration() {
        // ∫₀^∞ J_1(t)/t dt = 1: decays like t^{-3/2}, needs the tail
        // acceleration at desk truncations.
        let spec = QuadratureSpec {
            acceleration: Acceleration::AlternatingSeries,
            abs_tol: 1e-6,
            x_max: 200.0,
            ..QuadratureSpec::default()
        };
        let r = integrate_bessel_oscillatory(|t: f64| 1.0 / t, &[1.0], &[o(1.0)], &spec).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() <= 1e-6, "value {}", r.value);
    }

    #[test]
    fn zero_envelope_is_exactly_zero() {
        let spec = QuadratureSpec::default();
        let r = integrate_bessel_oscillatory(|_| 0.0, &[2.0], &[o(0.5)], &spec).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn oscillatory_agrees_with_plain_on_smooth_decay() {
        let spec = QuadratureSpec::default().with_tol(1e-9);
        let plain = integrate(
            |x: f64| x * (-0.5 * x * x).exp() * bessel::eval_j(0.0, x),
            &spec,
        )
        .unwrap();
        let osc = integrate_bessel_oscillatory(
            |x: f64| x * (-0.5 * x * x).exp(),
            &[1.0],
            &[o(0.0)],
            &spec,
        )
        .unwrap();
        assert!((plain.value - osc.value).abs() <= 2.0 * spec.abs_tol);
    }

    #[test]
    fn lp_norm_examples() {
        let spec = QuadratureSpec::default();
        // μ=0 gaussian at p=1: ∫ x e^{-x²/2} dx = 1
        let r = lp_mu_norm(
            |x: f64| x.sqrt() * (-0.5 * x * x).exp(),
            1.0,
            o(0.0),
            &spec,
        )
        .unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-8);
        // zero function
        let r = lp_mu_norm(|_| 0.0, 2.0, o(1.0), &spec).unwrap();
        assert_eq!(r.value, 0.0);
        // e^{-x} at p=2, μ=-1/2: ∫ e^{-2x} dx = 1/2
        let r = lp_mu_norm(|x: f64| (-x).exp(), 2.0, o(-0.5), &spec).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 0.5, epsilon = 1e-8);
    }

    #[test]
    fn divergent_norm_flagged() {
        // ∫ x^{1/2} / (1+x) ... grows: constant function has divergent L¹_μ
        let spec = QuadratureSpec::default();
        let r = lp_mu_norm(|_| 1.0, 1.0, o(0.0), &spec).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn linearity_property() {
        let spec = QuadratureSpec::default().with_tol(1e-10);
        let f = |x: f64| (-x).exp();
        let g = |x: f64| x * (-x * x).exp();
        let (a, b) = (2.5, -1.25);
        let lhs = integrate(|x| a * f(x) + b * g(x), &spec).unwrap().value;
        let rhs = a * integrate(f, &spec).unwrap().value + b * integrate(g, &spec).unwrap().value;
        assert!((lhs - rhs).abs() <= 2.0 * spec.abs_tol);
    }

    #[test]
    fn truncation_monotonicity_for_nonnegative() {
        let f = |x: f64| (-0.3 * x).exp();
        let mut prev = 0.0;
        for &xm in &[5.0, 10.0, 20.0, 40.0] {
            let spec = QuadratureSpec::default().with_x_max(xm).with_tol(1e-10);
            let v = integrate(f, &spec).unwrap().value;
            assert!(v + 1e-9 >= prev, "not monotone at X_max={xm}");
            prev = v;
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = QuadratureSpec::default();
        spec.panel_nodes = 2;
        assert!(spec.validate().is_err());
        spec = QuadratureSpec::default();
        spec.abs_tol = 0.0;
        assert!(spec.validate().is_err());
    }
}
