//! Shared numerical helpers: log-gamma, deterministic summation, Richardson
//! differentiation and bracketed maximization.

/// Lanczos g = 7, n = 9 coefficients (Godfrey's set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`, relative accuracy ~1e-14.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        // reflection keeps the Lanczos argument away from the pole
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for `x > 0`.
pub(crate) fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Deterministic pairwise summation in slice order.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        let mut s = 0.0;
        for &x in v {
            s += x;
        }
        return s;
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Central difference with Richardson extrapolation.
///
/// Returns `(derivative, error_estimate)`; the estimate is the change in the
/// extrapolation diagonal at the final level.
pub(crate) fn richardson_derivative<F: Fn(f64) -> f64>(
    f: &F,
    x: f64,
    h0: f64,
    levels: usize,
) -> (f64, f64) {
    let levels = levels.max(1);
    let mut table = vec![0.0_f64; levels];
    let mut prev_diag = f64::NAN;
    let mut err = f64::INFINITY;
    for i in 0..levels {
        let h = h0 / (2.0_f64).powi(i as i32);
        let mut value = (f(x + h) - f(x - h)) / (2.0 * h);
        for j in 1..=i {
            let factor = (4.0_f64).powi(j as i32);
            let prev = table[j - 1];
            table[j - 1] = value;
            value = (factor * value - prev) / (factor - 1.0);
        }
        table[i] = value;
        if i > 0 {
            err = (value - prev_diag).abs();
        }
        prev_diag = value;
    }
    (prev_diag, err)
}

/// Nested `(x^{-1} d/dx)^k` by recursive Richardson differences.
///
/// Each level differentiates the level below with its own extrapolation, so
/// error growth stays controlled up to `k ≈ 6`. The step shrinks near the
/// origin to keep all evaluation points positive.
pub(crate) fn iterated_scaled_derivative<F: Fn(f64) -> f64 + Copy>(
    f: F,
    k: usize,
    x: f64,
    h0: f64,
    levels: usize,
) -> f64 {
    fn recurse<F: Fn(f64) -> f64 + Copy>(f: F, k: usize, x: f64, h0: f64, levels: usize) -> f64 {
        if k == 0 {
            return f(x);
        }
        let h = h0.min(0.45 * x / k as f64);
        let (d, _) = richardson_derivative(&|t| recurse(f, k - 1, t, h0, levels), x, h, levels);
        d / x
    }
    recurse(f, k, x, h0, levels)
}

/// Same as [`iterated_scaled_derivative`] but also returns a noise estimate
/// obtained by re-running one extrapolation level shallower.
pub(crate) fn iterated_scaled_derivative_with_error<F: Fn(f64) -> f64 + Copy>(
    f: F,
    k: usize,
    x: f64,
    h0: f64,
    levels: usize,
) -> (f64, f64) {
    let fine = iterated_scaled_derivative(f, k, x, h0, levels);
    if k == 0 {
        return (fine, 0.0);
    }
    let coarse = iterated_scaled_derivative(f, k, x, h0, levels.saturating_sub(1).max(1));
    (fine, (fine - coarse).abs())
}

/// Golden-section maximization of `f` on `[a, b]` (unimodal assumption).
pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let inv_phi = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Repeated-averaging (Euler) acceleration of an alternating tail.
///
/// `terms` are consecutive partial contributions whose signs alternate.
/// Returns `(sum_estimate, error_estimate)`.
pub(crate) fn euler_accelerate(terms: &[f64]) -> (f64, f64) {
    assert!(!terms.is_empty());
    let mut partial: Vec<f64> = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for &t in terms {
        acc += t;
        partial.push(acc);
    }
    let mut prev_estimate = *partial.last().unwrap();
    let mut err = f64::INFINITY;
    while partial.len() > 1 {
        for i in 0..partial.len() - 1 {
            partial[i] = 0.5 * (partial[i] + partial[i + 1]);
        }
        partial.pop();
        let estimate = *partial.last().unwrap();
        err = (estimate - prev_estimate).abs();
        prev_estimate = estimate;
    }
    (prev_estimate, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ln_gamma_matches_known_values() {
        assert_relative_eq!(gamma(0.5), std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-14);
        assert_relative_eq!(ln_gamma(5.0), 24.0_f64.ln(), max_relative = 1e-13);
        // ln Γ(30.5), 22 digits
        assert_relative_eq!(ln_gamma(30.5), 72.95347118416940832384, max_relative = 1e-13);
    }

    #[test]
    fn richardson_gets_close_to_machine() {
        let f = |x: f64| x.sin();
        let (d, err) = richardson_derivative(&f, 1.0, 0.1, 5);
        assert!((d - 1.0_f64.cos()).abs() < 1e-12);
        assert!(err < 1e-9);
    }

    #[test]
    fn nested_scaled_derivative_of_gaussian() {
        // (x^{-1} d/dx)^k e^{-x^2/2} = (-1)^k e^{-x^2/2}
        let f = |x: f64| (-0.5 * x * x).exp();
        for k in 0..=4 {
            let v = iterated_scaled_derivative(f, k, 1.3, 0.05, 4);
            let expect = (-1.0_f64).powi(k as i32) * (-0.5 * 1.3_f64 * 1.3).exp();
            assert_relative_eq!(v, expect, max_relative = 1e-7);
        }
    }

    #[test]
    fn euler_accelerates_log2() {
        // 1 - 1/2 + 1/3 - ... = ln 2; 20 raw terms give ~0.025 error,
        // the averaged tail is far tighter.
        let terms: Vec<f64> = (1..=20)
            .map(|k| if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 })
            .collect();
        let (s, _) = euler_accelerate(&terms);
        assert!((s - std::f64::consts::LN_2).abs() < 1e-7);
    }

    #[test]
    fn golden_section_finds_peak() {
        // position accuracy is sqrt(eps)-limited at a smooth peak; the value
        // itself converges quadratically and is what downstream code uses
        let f = |x: f64| x * x * (-x).exp();
        let (x, v) = golden_section_max(&f, 0.5, 4.0, 60);
        assert_relative_eq!(x, 2.0, max_relative = 1e-6);
        assert_relative_eq!(v, 4.0 * (-2.0_f64).exp(), max_relative = 1e-14);
    }
}
