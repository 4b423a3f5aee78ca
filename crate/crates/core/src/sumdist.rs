//! Distribution of the sum of m i.i.d. mixture variables.
//!
//! Expanding `(p M_E(t) + (1−p) M_G(t))^m` binomially gives a mixture of
//! m+1 gamma laws with shapes `m + k(α−1)`, rate θ and weights
//! `C(m,k) p^{m−k} (1−p)^k`, k = 0..m.

use serde::{Deserialize, Serialize};

use crate::dist::{gamma_pdf, RegParams};
use crate::error::{domain, Result};
use crate::specfun::{log_gamma, reg_lower_gamma};

/// Largest supported number of summands.
pub const MAX_TERMS: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaComponent {
    pub weight: f64,
    pub shape: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumDistSpec {
    pub m: u32,
    pub components: Vec<GammaComponent>,
}

/// Mixture representation of the m-fold sum; weights are formed in log
/// space so large m does not overflow the binomial coefficients.
pub fn sum_spec(params: &RegParams, m: u32) -> Result<SumDistSpec> {
    if m == 0 {
        return Err(domain("number of summands must be >= 1"));
    }
    if m > MAX_TERMS {
        return Err(domain(format!(
            "number of summands {m} exceeds the cap of {MAX_TERMS}"
        )));
    }
    let p = params.weight();
    let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
    let mf = f64::from(m);
    let ln_m_fact = log_gamma(mf + 1.0)?;
    let components = (0..=m)
        .map(|k| {
            let kf = f64::from(k);
            let ln_binom = ln_m_fact - libm::lgamma(kf + 1.0) - libm::lgamma(mf - kf + 1.0);
            // 0 * ln 0 counts as 0 for the edge weights
            let ln_w = ln_binom
                + if m > k { (mf - kf) * ln_p } else { 0.0 }
                + if k > 0 { kf * ln_q } else { 0.0 };
            GammaComponent {
                weight: ln_w.exp(),
                shape: mf + kf * (params.alpha() - 1.0),
                rate: params.theta(),
            }
        })
        .collect();
    Ok(SumDistSpec { m, components })
}

impl SumDistSpec {
    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    pub fn pdf(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(domain(format!("sum density requires s > 0, got {s}")));
        }
        Ok(self
            .components
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| c.weight * gamma_pdf(s, c.shape, c.rate))
            .sum())
    }

    pub fn cdf(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(domain(format!("sum cdf requires s >= 0, got {s}")));
        }
        let mut total = 0.0;
        for c in self.components.iter().filter(|c| c.weight > 0.0) {
            total += c.weight * reg_lower_gamma(c.shape, c.rate * s)?;
        }
        Ok(total.min(1.0))
    }

    pub fn mean(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.shape / c.rate)
            .sum()
    }

    /// Moment generating function of the mixture, t < rate.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        let rate = self.components[0].rate;
        if !(t < rate) {
            return Err(domain(format!("mgf requires t < {rate}, got {t}")));
        }
        let base = 1.0 - t / rate;
        Ok(self
            .components
            .iter()
            .map(|c| c.weight * base.powf(-c.shape))
            .sum())
    }
}

pub fn sum_pdf(spec: &SumDistSpec, s: f64) -> Result<f64> {
    spec.pdf(s)
}
