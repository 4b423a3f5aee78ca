//! Generalized-Lindley baseline families used for model comparison.
//!
//! | family  | density                                                         | domain                  |
//! |---------|-----------------------------------------------------------------|-------------------------|
//! | `Gl3`   | θ²(θx)^{α−1}(α+γx)e^{−θx} / ((γ+θ)Γ(α+1))                       | α, θ > 0, γ ≥ 0         |
//! | `ExpGl` | αλ²(1+x)(1 − (1+λ+λx)e^{−λx}/(1+λ))^{α−1} e^{−λx} / (1+λ)        | α, λ > 0                |
//! | `Ngl`   | θ^α x^{α−2}(x+α−1)e^{−θx} / ((θ+1)Γ(α))                         | α ≥ 1, θ > 0            |
//! | `Ql`    | θ(α+θx)e^{−θx} / (α+1)                                          | α > −1, θ > 0           |
//!
//! `Gl3` mixes gamma(α, θ) and gamma(α+1, θ) with weights θ/(θ+γ) and
//! γ/(θ+γ); `Ngl` mixes gamma(α−1, θ) and gamma(α, θ) with weights
//! θ/(θ+1) and 1/(θ+1). `ExpGl` raises the Lindley cdf to the power α.
//!
//! `Ql` with −1 < α < 0 is negative below x = −α/θ and its likelihood is
//! unbounded as α → −1, so fitting restricts it to α ≥ 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimator::{check_data, mean_var, FitResult};
use crate::optim::{self, Likelihood};
use crate::specfun::{digamma, log_gamma, reg_lower_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl3,
    ExpGl,
    Ngl,
    Ql,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Gl3, Family::ExpGl, Family::Ngl, Family::Ql];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gl3 => "GL3",
            Family::ExpGl => "EXPGL",
            Family::Ngl => "NGL",
            Family::Ql => "QL",
        }
    }

    /// Number of free parameters.
    pub fn param_count(self) -> usize {
        self.param_names().len()
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Gl3 => &["alpha", "theta", "gamma"],
            Family::ExpGl => &["alpha", "lambda"],
            Family::Ngl | Family::Ql => &["alpha", "theta"],
        }
    }

    /// The density as originally published, in LaTeX.
    pub fn formula(self) -> &'static str {
        match self {
            Family::Gl3 => {
                r"f_X(x) = \frac{\theta^2(\theta x)^{\alpha-1}(\alpha + \gamma x)e^{-\theta x}}{(\gamma + \theta)\Gamma(\alpha + 1)}, x, \alpha, \theta, \gamma > 0."
            }
            Family::ExpGl => {
                r"f_X(x) = \frac{\alpha\lambda^2(1+x)\left(1 - \frac{1+\lambda+\lambda x}{1+\lambda}e^{-\lambda x}\right)^{\alpha-1}e^{-\lambda x}}{1+\lambda}, x, \alpha, \lambda > 0."
            }
            Family::Ngl => {
                r"f_X(x) = \frac{\theta^\alpha x^{\alpha-2}(x + \alpha - 1)e^{-\theta x}}{(\theta + 1)\Gamma(\alpha)}, \alpha \geq 1, x, \theta > 0."
            }
            Family::Ql => {
                r"f_X(x) = \frac{\theta(\alpha + \theta x)e^{-\theta x}}{\alpha + 1}, \alpha \geq -1, x, \theta > 0."
            }
        }
    }

    /// Lower bounds used while fitting.
    fn fit_bounds(self) -> Vec<f64> {
        match self {
            Family::Gl3 => vec![0.0, 0.0, 0.0],
            Family::ExpGl => vec![0.0, 0.0],
            Family::Ngl => vec![1.0, 0.0],
            Family::Ql => vec![0.0, 0.0],
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "gl3" => Some(Family::Gl3),
            "expgl" => Some(Family::ExpGl),
            "ngl" => Some(Family::Ngl),
            "ql" => Some(Family::Ql),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A competitor family together with validated parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CompetitorModel {
    Gl3 { alpha: f64, theta: f64, gamma: f64 },
    ExpGl { alpha: f64, lambda: f64 },
    Ngl { alpha: f64, theta: f64 },
    Ql { alpha: f64, theta: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl CompetitorModel {
    /// Builds a model from `values` in [`Family::param_names`] order.
    pub fn new(family: Family, values: &[f64]) -> Result<Self> {
        if values.len() != family.param_count() {
            return Err(domain(format!(
                "{family} takes {} parameters, got {}",
                family.param_count(),
                values.len()
            )));
        }
        let model = match family {
            Family::Gl3 => {
                positive("alpha", values[0])?;
                positive("theta", values[1])?;
                if !(values[2].is_finite() && values[2] >= 0.0) {
                    return Err(domain(format!("gamma must be >= 0, got {}", values[2])));
                }
                CompetitorModel::Gl3 {
                    alpha: values[0],
                    theta: values[1],
                    gamma: values[2],
                }
            }
            Family::ExpGl => {
                positive("alpha", values[0])?;
                positive("lambda", values[1])?;
                CompetitorModel::ExpGl {
                    alpha: values[0],
                    lambda: values[1],
                }
            }
            Family::Ngl => {
                if !(values[0].is_finite() && values[0] >= 1.0) {
                    return Err(domain(format!(
                        "NGL requires alpha >= 1, got {}",
                        values[0]
                    )));
                }
                positive("theta", values[1])?;
                CompetitorModel::Ngl {
                    alpha: values[0],
                    theta: values[1],
                }
            }
            Family::Ql => {
                if !(values[0].is_finite() && values[0] > -1.0) {
                    return Err(domain(format!("QL requires alpha > -1, got {}", values[0])));
                }
                positive("theta", values[1])?;
                CompetitorModel::Ql {
                    alpha: values[0],
                    theta: values[1],
                }
            }
        };
        Ok(model)
    }

    pub fn family(&self) -> Family {
        match self {
            CompetitorModel::Gl3 { .. } => Family::Gl3,
            CompetitorModel::ExpGl { .. } => Family::ExpGl,
            CompetitorModel::Ngl { .. } => Family::Ngl,
            CompetitorModel::Ql { .. } => Family::Ql,
        }
    }

    /// Parameter values in [`Family::param_names`] order.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            CompetitorModel::Gl3 {
                alpha,
                theta,
                gamma,
            } => vec![alpha, theta, gamma],
            CompetitorModel::ExpGl { alpha, lambda } => vec![alpha, lambda],
            CompetitorModel::Ngl { alpha, theta } | CompetitorModel::Ql { alpha, theta } => {
                vec![alpha, theta]
            }
        }
    }

    /// Log density; errors outside the support or where the printed
    /// formula is negative.
    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(domain(format!("density requires finite x > 0, got {x}")));
        }
        let v = match *self {
            CompetitorModel::Gl3 {
                alpha,
                theta,
                gamma,
            } => {
                2.0 * theta.ln() + (alpha - 1.0) * (theta * x).ln() + (alpha + gamma * x).ln()
                    - theta * x
                    - (gamma + theta).ln()
                    - log_gamma(alpha + 1.0)?
            }
            CompetitorModel::ExpGl { alpha, lambda } => {
                let base = lindley_cdf(lambda, x);
                let tail = if alpha == 1.0 {
                    0.0
                } else {
                    (alpha - 1.0) * base.ln()
                };
                alpha.ln() + 2.0 * lambda.ln() + x.ln_1p() + tail - lambda * x - lambda.ln_1p()
            }
            CompetitorModel::Ngl { alpha, theta } => {
                alpha * theta.ln() + (alpha - 2.0) * x.ln() + (x + alpha - 1.0).ln()
                    - theta * x
                    - theta.ln_1p()
                    - log_gamma(alpha)?
            }
            CompetitorModel::Ql { alpha, theta } => {
                let lin = alpha + theta * x;
                if lin < 0.0 {
                    return Err(domain(format!(
                        "QL density is negative at x={x} for alpha={alpha}, theta={theta}"
                    )));
                }
                theta.ln() + lin.ln() - theta * x - (alpha + 1.0).ln()
            }
        };
        if v.is_nan() {
            return Err(Error::Numeric(format!(
                "log density is NaN at x={x} for {self:?}"
            )));
        }
        Ok(v)
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.ln_pdf(x).map(f64::exp)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain(format!("cdf requires x >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let v = match *self {
            CompetitorModel::Gl3 {
                alpha,
                theta,
                gamma,
            } => {
                let w = theta / (theta + gamma);
                w * reg_lower_gamma(alpha, theta * x)?
                    + (1.0 - w) * reg_lower_gamma(alpha + 1.0, theta * x)?
            }
            CompetitorModel::ExpGl { alpha, lambda } => lindley_cdf(lambda, x).powf(alpha),
            CompetitorModel::Ngl { alpha, theta } => {
                // shape alpha - 1 = 0 is a point mass at the origin
                let low = if alpha == 1.0 {
                    1.0
                } else {
                    reg_lower_gamma(alpha - 1.0, theta * x)?
                };
                (theta * low + reg_lower_gamma(alpha, theta * x)?) / (theta + 1.0)
            }
            CompetitorModel::Ql { alpha, theta } => {
                let y = theta * x;
                // 1 - (1 + y/(α+1)) e^{-y}
                -(-y).exp_m1() - y / (alpha + 1.0) * (-y).exp()
            }
        };
        Ok(v.clamp(0.0, 1.0))
    }

    /// Score in [`Family::param_names`] order.
    pub fn score(&self, data: &[f64]) -> Result<Vec<f64>> {
        check_data(data)?;
        let m = data.len() as f64;
        let g = match *self {
            CompetitorModel::Gl3 {
                alpha,
                theta,
                gamma,
            } => {
                let psi = digamma(alpha + 1.0)?;
                let mut g = [0.0; 3];
                for &x in data {
                    let lin = alpha + gamma * x;
                    g[0] += (theta * x).ln() + 1.0 / lin - psi;
                    g[1] += (alpha + 1.0) / theta - x - 1.0 / (gamma + theta);
                    g[2] += x / lin - 1.0 / (gamma + theta);
                }
                g.to_vec()
            }
            CompetitorModel::ExpGl { alpha, lambda } => {
                let mut g = [m / alpha, 0.0];
                for &x in data {
                    let base = lindley_cdf(lambda, x);
                    let c = 1.0 + lambda * x / (1.0 + lambda);
                    let d_base = (-lambda * x).exp() * x * (c - 1.0 / (1.0 + lambda).powi(2));
                    g[0] += base.ln();
                    g[1] += 2.0 / lambda + (alpha - 1.0) * d_base / base - x - 1.0 / (1.0 + lambda);
                }
                g.to_vec()
            }
            CompetitorModel::Ngl { alpha, theta } => {
                let psi = digamma(alpha)?;
                let mut g = [0.0; 2];
                for &x in data {
                    g[0] += theta.ln() + x.ln() + 1.0 / (x + alpha - 1.0) - psi;
                    g[1] += alpha / theta - x - 1.0 / (theta + 1.0);
                }
                g.to_vec()
            }
            CompetitorModel::Ql { alpha, theta } => {
                let mut g = [0.0; 2];
                for &x in data {
                    let lin = alpha + theta * x;
                    g[0] += 1.0 / lin - 1.0 / (alpha + 1.0);
                    g[1] += 1.0 / theta + x / lin - x;
                }
                g.to_vec()
            }
        };
        if g.iter().all(|v| v.is_finite()) {
            Ok(g)
        } else {
            Err(Error::Numeric(format!("score is not finite for {self:?}")))
        }
    }
}

/// Lindley(λ) cdf, 1 − (1+λ+λx)e^{−λx}/(1+λ).
fn lindley_cdf(lambda: f64, x: f64) -> f64 {
    let y = lambda * x;
    // (1 - e^{-y}) - y e^{-y} / (1+λ)
    -(-y).exp_m1() - y * (-y).exp() / (1.0 + lambda)
}

pub fn comp_pdf(model: &CompetitorModel, x: f64) -> Result<f64> {
    model.pdf(x)
}

pub fn comp_cdf(model: &CompetitorModel, x: f64) -> Result<f64> {
    model.cdf(x)
}

pub fn comp_log_likelihood(model: &CompetitorModel, data: &[f64]) -> Result<f64> {
    check_data(data)?;
    let mut sum = 0.0;
    for &x in data {
        sum += model.ln_pdf(x)?;
    }
    if sum.is_finite() {
        Ok(sum)
    } else {
        Err(Error::Numeric(format!(
            "log-likelihood is not finite for {model:?}"
        )))
    }
}

struct FamilyLikelihood<'a> {
    family: Family,
    data: &'a [f64],
}

impl Likelihood for FamilyLikelihood<'_> {
    fn lower_bounds(&self) -> Vec<f64> {
        self.family.fit_bounds()
    }

    fn log_lik(&self, x: &[f64]) -> Result<f64> {
        comp_log_likelihood(&CompetitorModel::new(self.family, x)?, self.data)
    }

    fn score(&self, x: &[f64]) -> Result<Vec<f64>> {
        CompetitorModel::new(self.family, x)?.score(self.data)
    }
}

fn starting_points(family: Family, data: &[f64]) -> Vec<Vec<f64>> {
    let (mean, var) = mean_var(data);
    let shape = mean * mean / var;
    let rate = mean / var;
    let lindley = (-(mean - 1.0) + ((mean - 1.0).powi(2) + 8.0 * mean).sqrt()) / (2.0 * mean);
    match family {
        Family::Gl3 => vec![
            vec![shape, rate, 0.5 * rate],
            vec![(shape - 0.5).max(0.1), rate, 2.0 * rate],
            vec![1.0, 1.0 / mean, 0.1 / mean],
        ],
        Family::ExpGl => vec![
            vec![1.0, lindley],
            vec![shape, rate],
            vec![2.0 * shape, 1.5 * lindley],
        ],
        Family::Ngl => vec![
            vec![(shape + 0.5).max(1.1), rate],
            vec![2.0, lindley],
            vec![(2.0 * shape).max(1.5), 2.0 * rate],
        ],
        Family::Ql => vec![
            vec![1.0, 1.5 / mean],
            vec![0.1, 2.0 / mean],
            vec![5.0, 1.2 / mean],
        ],
    }
}

/// Maximum-likelihood fit of a competitor family.
///
/// Several deterministic starting points are tried; the best converged
/// result wins, falling back to the best non-converged one.
pub fn comp_fit(family: Family, data: &[f64]) -> Result<FitResult<CompetitorModel>> {
    check_data(data)?;
    if data.len() < 2 {
        return Err(Error::Data("need at least 2 observations".into()));
    }
    let (_, var) = mean_var(data);
    if !(var > 0.0) {
        return Err(Error::Degenerate("all observations are identical".into()));
    }
    let model = FamilyLikelihood { family, data };
    let mut best: Option<optim::Outcome> = None;
    let mut failures = Vec::new();
    for start in starting_points(family, data) {
        match optim::maximize(&model, &start) {
            Ok(out) => {
                let better = match &best {
                    None => true,
                    Some(b) => (out.converged, out.log_lik) > (b.converged, b.log_lik),
                };
                if better {
                    best = Some(out);
                }
            }
            Err(e) => failures.push(format!("start {start:?}: {e}")),
        }
    }
    let Some(mut out) = best else {
        return Err(Error::Numeric(format!(
            "{family} fit failed from every start: {}",
            failures.join("; ")
        )));
    };
    out.messages.extend(failures);
    let params = CompetitorModel::new(family, &out.params)?;
    Ok(FitResult::from_outcome(params, out))
}
