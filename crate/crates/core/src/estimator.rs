//! Maximum-likelihood estimation of (α, θ) for a fixed recursion depth.

use serde::{Deserialize, Serialize};

use crate::dist::{log_mix, RegParams};
use crate::error::{Error, Result};
use crate::optim::{self, Likelihood};
use crate::specfun;

/// Outcome of one maximum-likelihood fit.
///
/// `gradient_norm` is the Euclidean norm of the score in the natural
/// parameterisation, excluding parameters held at a lower bound. A fit is
/// `converged` only when that norm is at most 1e-6.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult<P = RegParams> {
    pub params: P,
    pub neg_log_lik: f64,
    pub initial_neg_log_lik: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub messages: Vec<String>,
    /// Observed-information standard errors, in parameter order.
    pub std_errors: Option<Vec<f64>>,
}

impl<P> FitResult<P> {
    pub fn log_lik(&self) -> f64 {
        -self.neg_log_lik
    }

    pub(crate) fn from_outcome(params: P, out: optim::Outcome) -> Self {
        Self {
            params,
            neg_log_lik: -out.log_lik,
            initial_neg_log_lik: -out.initial_log_lik,
            gradient_norm: out.gradient_norm,
            iterations: out.iterations,
            converged: out.converged,
            messages: out.messages,
            std_errors: out.std_errors,
        }
    }
}

pub(crate) fn check_data(data: &[f64]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Data("dataset is empty".into()));
    }
    if let Some((i, x)) = data
        .iter()
        .enumerate()
        .find(|(_, x)| !(**x > 0.0 && x.is_finite()))
    {
        return Err(Error::Data(format!(
            "observation {i} is not a finite positive value: {x}"
        )));
    }
    Ok(())
}

/// Sample mean and unbiased sample variance.
pub(crate) fn mean_var(data: &[f64]) -> (f64, f64) {
    let m = data.len() as f64;
    let mean = data.iter().sum::<f64>() / m;
    let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, var)
}

/// ℓ(α, θ) = m ln θ − θ Σx + Σ ln(p_n + (1−p_n)(θx)^{α−1}/Γ(α)).
pub fn log_likelihood(params: &RegParams, data: &[f64]) -> Result<f64> {
    check_data(data)?;
    let (a, t) = (params.alpha(), params.theta());
    let p = params.weight();
    let lg = specfun::log_gamma(a)?;
    let m = data.len() as f64;
    let mut sum_x = 0.0;
    let mut mix = 0.0;
    for &x in data {
        sum_x += x;
        mix += log_mix(p, (a - 1.0) * (t * x).ln() - lg);
    }
    let ll = m * t.ln() - t * sum_x + mix;
    if ll.is_finite() {
        Ok(ll)
    } else {
        Err(Error::Numeric(format!(
            "log-likelihood is not finite at {params:?}"
        )))
    }
}

/// Score vector (∂ℓ/∂α, ∂ℓ/∂θ).
///
/// The θ component differentiates p_n through dp_n/dθ = n p_n / (θ(θ+1)).
pub fn score(params: &RegParams, data: &[f64]) -> Result<(f64, f64)> {
    check_data(data)?;
    let (a, t) = (params.alpha(), params.theta());
    let p = params.weight();
    let dp = f64::from(params.n()) * p / (t * (t + 1.0));
    let lg = specfun::log_gamma(a)?;
    let psi = specfun::digamma(a)?;
    let m = data.len() as f64;
    let mut d_alpha = 0.0;
    let mut d_theta = m / t;
    for &x in data {
        let ln_tx = (t * x).ln();
        let z = (a - 1.0) * ln_tx - lg;
        let lm = log_mix(p, z);
        let inv_d = (-lm).exp();
        let g_over_d = (z - lm).exp();
        let w = (1.0 - p) * g_over_d;
        d_alpha += w * (ln_tx - psi);
        d_theta += -x + dp * (inv_d - g_over_d) + (1.0 - p) * (a - 1.0) * g_over_d / t;
    }
    if d_alpha.is_finite() && d_theta.is_finite() {
        Ok((d_alpha, d_theta))
    } else {
        Err(Error::Numeric(format!("score is not finite at {params:?}")))
    }
}

/// Log-likelihood of the exponential(1/x̄) fit, −m(1 + ln x̄).
pub fn exponential_log_likelihood(data: &[f64]) -> Result<f64> {
    check_data(data)?;
    let m = data.len() as f64;
    let mean = data.iter().sum::<f64>() / m;
    Ok(-m * (1.0 + mean.ln()))
}

struct MixtureLikelihood<'a> {
    data: &'a [f64],
    n: u32,
}

impl Likelihood for MixtureLikelihood<'_> {
    fn lower_bounds(&self) -> Vec<f64> {
        vec![0.0, 0.0]
    }

    fn log_lik(&self, x: &[f64]) -> Result<f64> {
        log_likelihood(&RegParams::new(x[0], x[1], self.n)?, self.data)
    }

    fn score(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (da, dt) = score(&RegParams::new(x[0], x[1], self.n)?, self.data)?;
        Ok(vec![da, dt])
    }
}

/// Fits (α, θ) with `n` held fixed.
///
/// Starts from `init` or, by default, the gamma method-of-moments point
/// α₀ = x̄²/s², θ₀ = x̄/s². Non-convergence is reported in the result, not
/// as an error.
pub fn fit_mle(data: &[f64], n: u32, init: Option<(f64, f64)>) -> Result<FitResult> {
    check_data(data)?;
    if data.len() < 3 {
        return Err(Error::Data(format!(
            "need at least 3 observations, got {}",
            data.len()
        )));
    }
    if n == 0 {
        return Err(Error::Domain("recursion depth n must be >= 1".into()));
    }
    let (mean, var) = mean_var(data);
    if !(var > 0.0) {
        return Err(Error::Degenerate("all observations are identical".into()));
    }
    let (a0, t0) = init.unwrap_or((mean * mean / var, mean / var));
    RegParams::new(a0, t0, n)?;
    let model = MixtureLikelihood { data, n };
    let out = optim::maximize(&model, &[a0, t0])?;
    let params = RegParams::new(out.params[0], out.params[1], n)?;
    Ok(FitResult::from_outcome(params, out))
}
