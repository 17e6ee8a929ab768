//! Test-function representations.
//!
//! The closed family `φ(x) = x^{μ+1/2} P(x²) e^{-p x²}` carries every exact
//! computation in the crate: it is closed under `(x^{-1} d/dx)` applied to
//! `x^{-μ-1/2} φ`, under multiplication by `x²`, and under the Hankel
//! transform. Polynomials are stored in the variable `u = x²`, where
//! `(x^{-1} d/dx)` acts as `2 d/du`, so the derivative recurrence is exact.
//!
//! [`SampledFunction`] is the generic grid-sampled carrier for quadrature
//! outputs; it interpolates inside its grid hull and decays to zero outside.

use crate::bessel::BesselOrder;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Exact binomial coefficient as `f64` (valid well beyond the depths used).
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

fn horner(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

fn trim(mut coeffs: Vec<f64>) -> Vec<f64> {
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    coeffs
}

/// `P(u) e^{-p u}` with `u = x²`: the μ-independent core of a family member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussPolyProfile {
    rate: f64,
    coeffs: Vec<f64>,
}

impl GaussPolyProfile {
    /// `rate ≥ 0` (zero admits pure polynomials, used by internal algebra).
    pub fn new(rate: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidInput(format!("profile rate must be ≥ 0, got {rate}")));
        }
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("profile coefficients must be nonempty and finite".into()));
        }
        Ok(GaussPolyProfile { rate, coeffs: trim(coeffs) })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value at `u = x²`.
    pub fn eval_u(&self, u: f64) -> f64 {
        horner(&self.coeffs, u) * (-self.rate * u).exp()
    }

    /// Value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_u(x * x)
    }

    /// One application of `(x^{-1} d/dx)`: `P ↦ 2(P' - pP)` in `u`.
    pub fn scaled_derivative(&self) -> GaussPolyProfile {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j >= 1 {
                out[j - 1] += 2.0 * j as f64 * c;
            }
            out[j] += -2.0 * self.rate * c;
        }
        GaussPolyProfile {
            rate: self.rate,
            coeffs: trim(out),
        }
    }

    /// `(x^{-1} d/dx)^q` by iterating the exact one-step recurrence.
    pub fn iterated_scaled_derivative(&self, q: usize) -> GaussPolyProfile {
        let mut acc = self.clone();
        for _ in 0..q {
            acc = acc.scaled_derivative();
        }
        acc
    }

    /// Product of profiles: polynomials multiply, rates add.
    pub fn multiply(&self, other: &GaussPolyProfile) -> GaussPolyProfile {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        GaussPolyProfile {
            rate: self.rate + other.rate,
            coeffs: trim(coeffs),
        }
    }

    /// Sum of profiles with identical rate.
    pub fn add(&self, other: &GaussPolyProfile) -> Result<GaussPolyProfile> {
        if self.rate != other.rate {
            return Err(Error::InvalidInput(format!(
                "profile rates differ: {} vs {}",
                self.rate, other.rate
            )));
        }
        let mut coeffs = vec![0.0; self.coeffs.len().max(other.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Ok(GaussPolyProfile {
            rate: self.rate,
            coeffs: trim(coeffs),
        })
    }

    pub fn scale(&self, factor: f64) -> GaussPolyProfile {
        GaussPolyProfile {
            rate: self.rate,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplication by `u = x²` (shifts coefficients up by one).
    pub fn times_u(&self) -> GaussPolyProfile {
        let mut coeffs = vec![0.0];
        coeffs.extend_from_slice(&self.coeffs);
        GaussPolyProfile {
            rate: self.rate,
            coeffs,
        }
    }
}

/// Closed-family member `φ(x) = x^{μ+1/2} P(x²) e^{-p x²}` with `p > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteFunction {
    mu: BesselOrder,
    profile: GaussPolyProfile,
}

impl GaussHermiteFunction {
    pub fn new(mu: BesselOrder, p: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidInput(format!("gaussian rate must be > 0, got {p}")));
        }
        Ok(GaussHermiteFunction {
            mu,
            profile: GaussPolyProfile::new(p, coeffs)?,
        })
    }

    /// The member `x^{μ+1/2} e^{-p x²}` with unit polynomial part.
    pub fn gaussian(mu: BesselOrder, p: f64) -> Result<Self> {
        GaussHermiteFunction::new(mu, p, vec![1.0])
    }

    pub fn from_profile(mu: BesselOrder, profile: GaussPolyProfile) -> Result<Self> {
        if !(profile.rate() > 0.0) {
            return Err(Error::InvalidInput("family member needs a positive gaussian rate".into()));
        }
        Ok(GaussHermiteFunction { mu, profile })
    }

    pub fn order(&self) -> BesselOrder {
        self.mu
    }

    pub fn rate(&self) -> f64 {
        self.profile.rate()
    }

    pub fn coeffs(&self) -> &[f64] {
        self.profile.coeffs()
    }

    pub fn profile(&self) -> &GaussPolyProfile {
        &self.profile
    }

    /// Point evaluation, with the `x → 0⁺` limit at `x = 0`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let exponent = self.mu.value() + 0.5;
        if x == 0.0 {
            return if exponent > 0.0 {
                0.0
            } else {
                // μ = -1/2: the prefactor is x^0
                self.profile.eval_u(0.0)
            };
        }
        x.powf(exponent) * self.profile.eval(x)
    }

    /// `(x^{-1} d/dx)^q (x^{-μ-1/2} φ)`, exact in coefficients.
    pub fn bessel_derivative(&self, q: usize) -> GaussPolyProfile {
        self.profile.iterated_scaled_derivative(q)
    }

    pub fn is_zero(&self) -> bool {
        self.profile.coeffs().iter().all(|&c| c == 0.0)
    }
}

/// `|LHS - RHS|` of the Leibniz rule
/// `(x^{-1}d/dx)^k (x^{-μ-1/2} ψ φ) = Σ_ν C(k,ν) (x^{-1}d/dx)^ν ψ · (x^{-1}d/dx)^{k-ν}(x^{-μ-1/2} φ)`
/// for a smooth even factor `ψ = Q(x²) e^{-r x²}`. Both sides use exact
/// coefficient arithmetic, so the residual is pure floating round-off.
pub fn leibniz_residual(
    psi: &GaussPolyProfile,
    phi: &GaussHermiteFunction,
    k: usize,
    x: f64,
) -> Result<f64> {
    if k > 8 {
        return Err(Error::InvalidInput(format!("leibniz depth {k} exceeds 8")));
    }
    if x <= 0.0 {
        return Err(Error::Domain("leibniz_residual needs x > 0".into()));
    }
    let product = psi.multiply(phi.profile());
    let lhs = product.iterated_scaled_derivative(k).eval(x);

    let mut rhs_profile: Option<GaussPolyProfile> = None;
    for nu in 0..=k {
        let term = psi
            .iterated_scaled_derivative(nu)
            .multiply(&phi.profile().iterated_scaled_derivative(k - nu))
            .scale(binomial(k, nu));
        rhs_profile = Some(match rhs_profile {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    let rhs = rhs_profile.expect("k+1 ≥ 1 terms").eval(x);
    Ok((lhs - rhs).abs())
}

/// Interpolation rule for sampled functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpolation {
    #[serde(rename = "cubic-local")]
    CubicLocal,
    #[serde(rename = "linear")]
    Linear,
}

/// Grid-sampled function on `(0, ∞)`; zero outside the grid hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    #[serde(rename = "interp")]
    interpolation: Interpolation,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::InvalidInput(
                "sampled function needs matching grid/value lengths ≥ 2".into(),
            ));
        }
        if grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "grid must be strictly increasing and positive".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sampled values must be finite".into()));
        }
        Ok(SampledFunction {
            grid,
            values,
            interpolation,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: &[f64], f: F, interpolation: Interpolation) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        SampledFunction::new(grid.to_vec(), values, interpolation)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Interpolated value inside the hull, zero outside.
    pub fn evaluate(&self, x: f64) -> f64 {
        let n = self.grid.len();
        if x < self.grid[0] || x > self.grid[n - 1] {
            return 0.0;
        }
        let idx = match self.grid.binary_search_by(|g| g.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.values[i],
            Err(i) => i, // grid[i-1] < x < grid[i]
        };
        match self.interpolation {
            Interpolation::Linear => {
                let (x0, x1) = (self.grid[idx - 1], self.grid[idx]);
                let (y0, y1) = (self.values[idx - 1], self.values[idx]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
            Interpolation::CubicLocal => {
                // local 4-point Lagrange around the bracketing interval
                let lo = idx.saturating_sub(2).min(n - 4);
                let xs = &self.grid[lo..lo + 4];
                let ys = &self.values[lo..lo + 4];
                let mut acc = 0.0;
                for i in 0..4 {
                    let mut w = ys[i];
                    for j in 0..4 {
                        if i != j {
                            w *= (x - xs[j]) / (xs[i] - xs[j]);
                        }
                    }
                    acc += w;
                }
                acc
            }
        }
    }
}

/// Serializable function input: either an exact family member or samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum RadialFunction {
    #[serde(rename = "gauss-hermite")]
    GaussHermite { mu: f64, p: f64, coeffs: Vec<f64> },
    #[serde(rename = "sampled")]
    Sampled(SampledFunction),
}

impl RadialFunction {
    pub fn from_family(f: &GaussHermiteFunction) -> Self {
        RadialFunction::GaussHermite {
            mu: f.order().value(),
            p: f.rate(),
            coeffs: f.coeffs().to_vec(),
        }
    }

    /// The exact family member, when this is one.
    pub fn as_family(&self) -> Result<Option<GaussHermiteFunction>> {
        match self {
            RadialFunction::GaussHermite { mu, p, coeffs } => Ok(Some(GaussHermiteFunction::new(
                BesselOrder::new(*mu)?,
                *p,
                coeffs.clone(),
            )?)),
            RadialFunction::Sampled(_) => Ok(None),
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        match self {
            RadialFunction::GaussHermite { mu, p, coeffs } => {
                let f = GaussHermiteFunction::new(BesselOrder::new(*mu)?, *p, coeffs.clone())?;
                Ok(f.evaluate(x))
            }
            RadialFunction::Sampled(s) => Ok(s.evaluate(x)),
        }
    }
}

/// Strictly increasing positive evaluation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("grid must be nonempty".into()));
        }
        if points[0] <= 0.0 || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "grid must be strictly increasing and positive".into(),
            ));
        }
        Ok(Grid(points))
    }

    pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return Err(Error::InvalidInput("log grid needs 0 < lo < hi, n ≥ 2".into()));
        }
        let (la, lb) = (lo.ln(), hi.ln());
        let pts = (0..n)
            .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
            .collect();
        Grid::from_points(pts)
    }

    pub fn linear(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return Err(Error::InvalidInput("linear grid needs 0 < lo < hi, n ≥ 2".into()));
        }
        let pts = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        Grid::from_points(pts)
    }

    /// Default transform output grid: 64 log-spaced points on [0.05, 12].
    pub fn default_output() -> Self {
        Grid::log_spaced(0.05, 12.0, 64).expect("static grid parameters")
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
