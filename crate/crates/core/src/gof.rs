//! Goodness-of-fit metrics and the model comparison report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::competitors::{comp_fit, Family};
use crate::corpus::Dataset;
use crate::dist::RegParams;
use crate::error::{domain, Error, Result};
use crate::estimator::fit_mle;

/// Report label of the mixture model.
pub const PROPOSED: &str = "REG";

/// One-sample Kolmogorov–Smirnov statistic from fitted cdf values at the
/// sorted sample points: `max_i max(i/m − F_i, F_i − (i−1)/m)`.
pub fn ks_statistic(cdf_values: &[f64]) -> Result<f64> {
    if cdf_values.is_empty() {
        return Err(Error::Data("K-S statistic needs at least one value".into()));
    }
    if let Some(v) = cdf_values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(domain(format!("cdf value {v} lies outside [0, 1]")));
    }
    let m = cdf_values.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &f) in cdf_values.iter().enumerate() {
        let above = (i as f64 + 1.0) / m - f;
        let below = f - i as f64 / m;
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// K-S statistic of `data` against `cdf`; the data need not be sorted.
pub fn ks_against<F>(data: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values = sorted.into_iter().map(cdf).collect::<Result<Vec<_>>>()?;
    ks_statistic(&values)
}

/// Akaike information criterion, 2k − 2 ln L.
pub fn aic(k: usize, log_lik: f64) -> f64 {
    2.0 * k as f64 - 2.0 * log_lik
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
}

/// One model's line in a [`GofReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRow {
    pub model: String,
    pub k: usize,
    pub estimates: Vec<Estimate>,
    pub neg_log_lik: Option<f64>,
    pub aic: Option<f64>,
    pub ks: Option<f64>,
    pub converged: bool,
    pub gradient_norm: Option<f64>,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub dataset: String,
    pub observations: usize,
    /// Mixing depth used for the proposed model.
    pub n: u32,
    pub rows: Vec<ModelRow>,
    pub best_by_aic: Option<String>,
    pub best_by_ks: Option<String>,
}

fn failed_row(model: &str, k: usize, err: &Error) -> ModelRow {
    ModelRow {
        model: model.to_string(),
        k,
        estimates: Vec::new(),
        neg_log_lik: None,
        aic: None,
        ks: None,
        converged: false,
        gradient_norm: None,
        messages: vec![err.to_string()],
    }
}

/// Fits the mixture at depth `n`.
pub fn proposed_row(data: &Dataset, n: u32) -> ModelRow {
    let values = data.values();
    let fit = match fit_mle(values, n, None) {
        Ok(f) => f,
        Err(e) => return failed_row(PROPOSED, 2, &e),
    };
    let params = fit.params;
    let ks = ks_against(values, |x| params.cdf(x));
    metrics_row(
        PROPOSED,
        vec![("alpha", params.alpha()), ("theta", params.theta())],
        fit.neg_log_lik,
        ks,
        fit.converged,
        fit.gradient_norm,
        fit.messages,
    )
}

pub fn competitor_row(data: &Dataset, family: Family) -> ModelRow {
    let values = data.values();
    let fit = match comp_fit(family, values) {
        Ok(f) => f,
        Err(e) => return failed_row(family.name(), family.param_count(), &e),
    };
    let model = fit.params;
    let ks = ks_against(values, |x| model.cdf(x));
    let estimates = family
        .param_names()
        .iter()
        .copied()
        .zip(model.values())
        .collect();
    metrics_row(
        family.name(),
        estimates,
        fit.neg_log_lik,
        ks,
        fit.converged,
        fit.gradient_norm,
        fit.messages,
    )
}

fn metrics_row(
    model: &str,
    estimates: Vec<(&str, f64)>,
    neg_log_lik: f64,
    ks: Result<f64>,
    converged: bool,
    gradient_norm: f64,
    mut messages: Vec<String>,
) -> ModelRow {
    let k = estimates.len();
    let ks = ks.map_err(|e| messages.push(format!("K-S: {e}"))).ok();
    ModelRow {
        model: model.to_string(),
        k,
        estimates: estimates
            .into_iter()
            .map(|(name, value)| Estimate {
                name: name.to_string(),
                value,
            })
            .collect(),
        neg_log_lik: Some(neg_log_lik),
        aic: Some(aic(k, -neg_log_lik)),
        ks,
        converged,
        gradient_norm: Some(gradient_norm),
        messages,
    }
}

/// Index of the converged row minimising `key`; ties go to fewer parameters.
fn best_by(rows: &[ModelRow], key: impl Fn(&ModelRow) -> Option<f64>) -> Option<String> {
    rows.iter()
        .filter(|r| r.converged)
        .filter_map(|r| key(r).map(|v| (v, r.k, r)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, _, r)| r.model.clone())
}

impl GofReport {
    pub fn from_rows(dataset: &str, observations: usize, n: u32, rows: Vec<ModelRow>) -> Self {
        let best_by_aic = best_by(&rows, |r| r.aic);
        let best_by_ks = best_by(&rows, |r| r.ks);
        Self {
            dataset: dataset.to_string(),
            observations,
            n,
            rows,
            best_by_aic,
            best_by_ks,
        }
    }

    pub fn row(&self, model: &str) -> Option<&ModelRow> {
        self.rows.iter().find(|r| r.model == model)
    }

    /// Whether the mixture has both the lowest AIC and the lowest K-S.
    pub fn proposed_wins(&self) -> bool {
        self.best_by_aic.as_deref() == Some(PROPOSED)
            && self.best_by_ks.as_deref() == Some(PROPOSED)
    }

    pub fn to_json(&self) -> String {
        // serialization of plain data cannot fail
        serde_json::to_string_pretty(self).unwrap()
    }

    /// Aligned text table: model, estimates, −LogL, AIC, K-S.
    pub fn to_table(&self) -> String {
        let fmt_opt = |v: Option<f64>, d: usize| v.map_or("-".to_string(), |x| format!("{x:.d$}"));
        let lines: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                let est = if r.estimates.is_empty() {
                    "-".to_string()
                } else {
                    r.estimates
                        .iter()
                        .map(|e| format!("{}={:.6}", e.name, e.value))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let model = if r.converged {
                    r.model.clone()
                } else {
                    format!("{}*", r.model)
                };
                [
                    model,
                    est,
                    fmt_opt(r.neg_log_lik, 6),
                    fmt_opt(r.aic, 6),
                    fmt_opt(r.ks, 6),
                ]
            })
            .collect();
        let header = ["model", "estimates", "-LogL", "AIC", "K-S"];
        let mut widths = header.map(str::len);
        for l in &lines {
            for (w, cell) in widths.iter_mut().zip(l) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "dataset: {} ({} observations, depth n = {})",
            self.dataset, self.observations, self.n
        );
        let render = |out: &mut String, cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i < 2 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        render(&mut out, &header.map(String::from));
        for l in &lines {
            render(&mut out, l);
        }
        let _ = writeln!(
            out,
            "best by AIC: {}; best by K-S: {}",
            self.best_by_aic.as_deref().unwrap_or("-"),
            self.best_by_ks.as_deref().unwrap_or("-")
        );
        if self.rows.iter().any(|r| !r.converged) {
            let _ = writeln!(
                out,
                "* fit did not converge; see JSON output for diagnostics"
            );
        }
        out
    }
}

/// Fits the mixture and all four competitors to `data`.
pub fn build_report(data: &Dataset, n: u32) -> GofReport {
    let mut rows = vec![proposed_row(data, n)];
    rows.extend(Family::ALL.iter().map(|&f| competitor_row(data, f)));
    GofReport::from_rows(data.label(), data.count(), n, rows)
}

/// Published comparison values for a builtin dataset, for side-by-side
/// reporting only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub model: &'static str,
    pub neg_log_lik: f64,
    pub aic: f64,
    pub ks: f64,
}

/// Published −LogL / AIC / K-S values, keyed by dataset label. Rows are
/// matched to families by parameter count.
pub fn published(label: &str) -> Option<[PublishedRow; 5]> {
    let row = |model, neg_log_lik, aic, ks| PublishedRow {
        model,
        neg_log_lik,
        aic,
        ks,
    };
    match label {
        "ex1" => Some([
            row("GL3", 329.45, 662.90, 0.0563),
            row("EXPGL", 328.92, 663.84, 0.0521),
            row("NGL", 330.18, 664.36, 0.0614),
            row("QL", 331.25, 666.50, 0.0648),
            row(PROPOSED, 328.15, 660.30, 0.0487),
        ]),
        "ex2" => Some([
            row("GL3", 122.18, 248.36, 0.1834),
            row("EXPGL", 121.45, 248.90, 0.1762),
            row("NGL", 123.67, 251.34, 0.1921),
            row("QL", 124.83, 253.66, 0.2043),
            row(PROPOSED, 120.92, 245.84, 0.1687),
        ]),
        "ex3" => Some([
            row("GL3", 24.18, 52.36, 0.1342),
            row("EXPGL", 23.67, 53.34, 0.1283),
            row("NGL", 25.12, 54.24, 0.1421),
            row("QL", 25.89, 55.78, 0.1489),
            row(PROPOSED, 23.15, 50.30, 0.1214),
        ]),
        "ex4" => Some([
            row("GL3", 94.23, 192.46, 0.0921),
            row("EXPGL", 93.78, 193.56, 0.0874),
            row("NGL", 95.12, 194.24, 0.0983),
            row("QL", 96.34, 196.68, 0.1042),
            row(PROPOSED, 93.25, 190.50, 0.0841),
        ]),
        _ => None,
    }
}

/// Plain-text comparison of a report against the published values.
pub fn published_comparison(report: &GofReport) -> Option<String> {
    let reference = published(&report.dataset)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:>12} {:>12} {:>10} {:>10}",
        "model", "-LogL", "published", "K-S", "published"
    );
    for p in &reference {
        let (ll, ks) = report
            .row(p.model)
            .map_or((None, None), |r| (r.neg_log_lik, r.ks));
        let cell = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        let _ = writeln!(
            out,
            "{:<6} {:>12} {:>12.2} {:>10} {:>10.4}",
            p.model,
            cell(ll),
            p.neg_log_lik,
            cell(ks),
            p.ks
        );
    }
    Some(out)
}

/// Mixture parameters recorded in a proposed-model row.
pub fn proposed_params(row: &ModelRow, n: u32) -> Option<RegParams> {
    if row.model != PROPOSED || row.estimates.len() != 2 {
        return None;
    }
    RegParams::new(row.estimates[0].value, row.estimates[1].value, n).ok()
}
