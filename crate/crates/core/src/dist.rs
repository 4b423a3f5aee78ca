//! The recursive exponential–gamma mixture: density, reliability, hazard,
//! moments, transforms and quantiles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun;

/// Recursion depth used when none is given.
pub const DEFAULT_DEPTH: u32 = 3;

/// Model parameters: shape `alpha`, rate `theta` and recursion depth `n`.
///
/// `n` is configuration, never estimated. All fields are validated at
/// construction; the value is immutable afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct RegParams {
    alpha: f64,
    theta: f64,
    n: u32,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    theta: f64,
    n: u32,
}

impl TryFrom<RawParams> for RegParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        RegParams::new(raw.alpha, raw.theta, raw.n)
    }
}

/// Mean, variance and shape indices of the distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub cv: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

/// Coarse shape of a hazard curve over a finite grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HazardShape {
    Constant,
    Increasing,
    Decreasing,
    /// Decreasing, then increasing.
    Bathtub,
    /// Increasing, then decreasing.
    UpsideDownBathtub,
    /// More than one change of monotonicity.
    Irregular,
}

/// Gamma(shape, rate) density, evaluated in log space.
pub fn gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return if x == 0.0 && shape == 1.0 { rate } else { 0.0 };
    }
    (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - libm::lgamma(shape)).exp()
}

impl RegParams {
    pub fn new(alpha: f64, theta: f64, n: u32) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(domain(format!("alpha must be finite and > 0, got {alpha}")));
        }
        if !(theta.is_finite() && theta > 0.0) {
            return Err(domain(format!("theta must be finite and > 0, got {theta}")));
        }
        if n == 0 {
            return Err(domain("recursion depth n must be >= 1"));
        }
        Ok(Self { alpha, theta, n })
    }

    /// Parameters with the default recursion depth of 3.
    pub fn with_default_depth(alpha: f64, theta: f64) -> Result<Self> {
        Self::new(alpha, theta, DEFAULT_DEPTH)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Exponential-component weight `p_n = (θ/(θ+1))^n`.
    pub fn weight(&self) -> f64 {
        (self.theta / (self.theta + 1.0)).powi(self.n as i32)
    }

    /// `(θx)^{α-1} / Γ(α)` in log space; the x → 0 limit is 0 for α > 1.
    pub(crate) fn gamma_ratio(&self, x: f64) -> f64 {
        if self.alpha == 1.0 {
            return 1.0;
        }
        if x == 0.0 {
            return if self.alpha > 1.0 { 0.0 } else { f64::INFINITY };
        }
        ((self.alpha - 1.0) * (self.theta * x).ln() - libm::lgamma(self.alpha)).exp()
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || x.is_nan() {
            return Err(domain(format!("density requires x > 0, got {x}")));
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        let p = self.weight();
        let t = self.theta;
        Ok(t * (-t * x).exp() * (p + (1.0 - p) * self.gamma_ratio(x)))
    }

    /// Natural log of the density; finite well past the point where the
    /// density itself underflows.
    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain(format!("density requires finite x > 0, got {x}")));
        }
        let p = self.weight();
        let ln_ratio = if self.alpha == 1.0 {
            0.0
        } else {
            (self.alpha - 1.0) * (self.theta * x).ln() - libm::lgamma(self.alpha)
        };
        Ok(self.theta.ln() - self.theta * x + log_mix(p, ln_ratio))
    }

    /// Survival function `p_n e^{-θx} + (1 - p_n) Q(α, θx)`.
    pub fn reliability(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain(format!("reliability requires x >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok(1.0);
        }
        let p = self.weight();
        let y = self.theta * x;
        Ok(p * (-y).exp() + (1.0 - p) * specfun::reg_upper_gamma(self.alpha, y)?)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain(format!("cdf requires x >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let p = self.weight();
        let y = self.theta * x;
        let (lower, _) = specfun::reg_gamma_pair(self.alpha, y)?;
        Ok(p * (-(-y).exp_m1()) + (1.0 - p) * lower)
    }

    /// Pieces of the hazard ratio with e^{-θx} cancelled:
    /// `(p + (1-p) g, p + (1-p) S)` where `S = Q(α, θx) e^{θx}`.
    fn hazard_terms(&self, x: f64) -> Result<(f64, f64, f64, f64)> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain(format!("hazard requires finite x > 0, got {x}")));
        }
        let survival = self.reliability(x)?;
        if survival < f64::MIN_POSITIVE {
            return Err(Error::Overflow(format!(
                "reliability underflows at x={x} (theta*x={}); hazard is not representable",
                self.theta * x
            )));
        }
        let p = self.weight();
        let g = self.gamma_ratio(x);
        let s = specfun::reg_upper_gamma_scaled(self.alpha, self.theta * x)?;
        Ok((p + (1.0 - p) * g, p + (1.0 - p) * s, g, s))
    }

    pub fn hazard(&self, x: f64) -> Result<f64> {
        if self.alpha == 1.0 {
            return if x > 0.0 && x.is_finite() {
                Ok(self.theta)
            } else {
                Err(domain(format!("hazard requires finite x > 0, got {x}")))
            };
        }
        let (num, den, _, _) = self.hazard_terms(x)?;
        Ok(self.theta * num / den)
    }

    /// Derivative of the hazard in x, from differentiating the ratio
    /// `θ N(x) / D(x)` with `N' = (1-p)(α-1) g / x` and `D' = (1-p) θ (S - g)`.
    pub fn hazard_derivative(&self, x: f64) -> Result<f64> {
        if self.alpha == 1.0 {
            self.hazard(x)?;
            return Ok(0.0);
        }
        let (num, den, g, s) = self.hazard_terms(x)?;
        let p = self.weight();
        let t = self.theta;
        let d_num = (1.0 - p) * (self.alpha - 1.0) * g / x;
        let d_den = (1.0 - p) * t * (s - g);
        Ok(t * (d_num * den - num * d_den) / (den * den))
    }

    /// Raw moment `E[X^r] = (r! p + (1-p) α(α+1)…(α+r-1)) / θ^r`.
    pub fn raw_moment(&self, r: u32) -> Result<f64> {
        if r == 0 {
            return Err(domain("raw moment order must be >= 1"));
        }
        Ok(self.raw_moment_unchecked(r))
    }

    fn raw_moment_unchecked(&self, r: u32) -> f64 {
        if r == 0 {
            return 1.0;
        }
        let p = self.weight();
        let mut factorial = 1.0;
        let mut rising = 1.0;
        for j in 0..r {
            factorial *= f64::from(j + 1);
            rising *= self.alpha + f64::from(j);
        }
        (p * factorial + (1.0 - p) * rising) / self.theta.powi(r as i32)
    }

    /// Central moment of order k ≥ 2 by binomial expansion of raw moments.
    pub fn central_moment(&self, k: u32) -> Result<f64> {
        if k < 2 {
            return Err(domain("central moment order must be >= 2"));
        }
        let mu = self.raw_moment_unchecked(1);
        let mut sum = 0.0;
        let mut binom = 1.0;
        for r in 0..=k {
            if r > 0 {
                binom *= f64::from(k - r + 1) / f64::from(r);
            }
            sum += binom * self.raw_moment_unchecked(r) * (-mu).powi((k - r) as i32);
        }
        Ok(sum)
    }

    /// Mean, variance (μ′₂ − μ′₁²), coefficient of variation, skewness and
    /// kurtosis.
    pub fn moment_summary(&self) -> MomentSummary {
        let mean = self.raw_moment_unchecked(1);
        let variance = self.raw_moment_unchecked(2) - mean * mean;
        // unwraps: k >= 2 always holds here
        let mu3 = self.central_moment(3).unwrap();
        let mu4 = self.central_moment(4).unwrap();
        MomentSummary {
            mean,
            variance,
            cv: variance.sqrt() / mean,
            skewness: mu3 / variance.powf(1.5),
            kurtosis: mu4 / (variance * variance),
        }
    }

    /// Moment generating function, defined for t < θ.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        if !(t < self.theta) {
            return Err(domain(format!(
                "mgf requires t < theta = {}, got {t}",
                self.theta
            )));
        }
        let p = self.weight();
        let base = 1.0 - t / self.theta;
        Ok((p + (1.0 - p) * base.powf(-(self.alpha - 1.0))) / base)
    }

    /// Characteristic function φ(t) = M(it).
    pub fn cf(&self, t: f64) -> Complex64 {
        let p = self.weight();
        let base = Complex64::new(1.0, -t / self.theta);
        (p + (1.0 - p) * base.powf(-(self.alpha - 1.0))) / base
    }

    /// Inverse cdf by bracketing and bisection with a final secant polish.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!("quantile requires 0 < u < 1, got {u}")));
        }
        let summary = self.moment_summary();
        let mut lo = 0.0;
        let mut hi = summary.mean + 20.0 * summary.variance.sqrt();
        let mut doublings = 0;
        while self.cdf(hi)? <= u {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 2000 {
                return Err(Error::Numeric(format!("could not bracket quantile {u}")));
            }
        }
        for _ in 0..400 {
            if hi - lo <= 1e-12 * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid)? < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let f_lo = if lo > 0.0 { self.cdf(lo)? - u } else { -u };
        let f_hi = self.cdf(hi)? - u;
        let mut x = if f_hi != f_lo {
            lo - f_lo * (hi - lo) / (f_hi - f_lo)
        } else {
            0.5 * (lo + hi)
        };
        if !(x >= lo && x <= hi) {
            x = 0.5 * (lo + hi);
        }
        if x <= 0.0 {
            x = hi;
        }
        let err = (self.cdf(x)? - u).abs();
        if err > 1e-10 {
            return Err(Error::Numeric(format!(
                "quantile({u}) refinement stalled with residual {err:e}"
            )));
        }
        Ok(x)
    }

    /// Classify the hazard shape from the signs of successive hazard
    /// differences on `grid` (ascending, positive).
    pub fn classify_hazard(&self, grid: &[f64]) -> Result<HazardShape> {
        let values = grid
            .iter()
            .map(|&x| self.hazard(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(classify_sequence(&values))
    }
}

/// Shape of a sampled curve from the sign pattern of its successive
/// differences. Differences below a relative 1e-12 count as flat.
pub fn classify_sequence(values: &[f64]) -> HazardShape {
    let mut signs: Vec<i8> = Vec::new();
    for w in values.windows(2) {
        let diff = w[1] - w[0];
        let scale = w[0].abs().max(w[1].abs()).max(f64::MIN_POSITIVE);
        let s = if diff.abs() <= 1e-12 * scale {
            0
        } else if diff > 0.0 {
            1
        } else {
            -1
        };
        if s != 0 && signs.last() != Some(&s) {
            signs.push(s);
        }
    }
    match signs.as_slice() {
        [] => HazardShape::Constant,
        [1] => HazardShape::Increasing,
        [-1] => HazardShape::Decreasing,
        [-1, 1] => HazardShape::Bathtub,
        [1, -1] => HazardShape::UpsideDownBathtub,
        _ => HazardShape::Irregular,
    }
}

/// ln(p + (1-p) e^{z}) without overflow.
pub(crate) fn log_mix(p: f64, z: f64) -> f64 {
    let a = p.ln();
    let b = (1.0 - p).ln() + z;
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}
