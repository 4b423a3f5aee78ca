//! Two-component system reliability: exact curves and Monte Carlo
//! estimates.
//!
//! Monte Carlo trials are split into fixed blocks of [`BLOCK_TRIALS`]; block
//! `b` draws from stream `rng.stream() + b` of the caller's seed. Blocks are
//! spread over worker threads, and because the block-to-stream assignment
//! never changes the merged counts do not depend on the number of workers.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::RegParams;
use crate::error::{domain, Error, Result};
use crate::rng::RngState;
use crate::sampler::sample_one;

pub const BLOCK_TRIALS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Survives while either component survives: lifetime max(X₁, X₂).
    Parallel,
    /// Survives while both components survive: lifetime min(X₁, X₂).
    Series,
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parallel" => Ok(Topology::Parallel),
            "series" => Ok(Topology::Series),
            other => Err(domain(format!(
                "unknown topology `{other}` (parallel|series)"
            ))),
        }
    }
}

impl Topology {
    fn lifetime(self, pair: [f64; 2]) -> f64 {
        match self {
            Topology::Parallel => pair[0].max(pair[1]),
            Topology::Series => pair[0].min(pair[1]),
        }
    }
}

/// One line of a reliability table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityRow {
    pub t: f64,
    pub exact: f64,
    pub estimate: f64,
    pub abs_error: f64,
}

/// Exact system reliability: 2R − R² for parallel, R² for series.
pub fn system_reliability_exact(params: &RegParams, t: f64, topology: Topology) -> Result<f64> {
    let r = params.reliability(t)?;
    Ok(match topology {
        Topology::Parallel => 2.0 * r - r * r,
        Topology::Series => r * r,
    })
}

/// Component lifetime pairs for `trials` independent systems.
pub fn simulate_pairs(params: &RegParams, trials: usize, rng: &RngState) -> Vec<[f64; 2]> {
    simulate_pairs_with_workers(params, trials, rng, default_workers())
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(16)
}

/// As [`simulate_pairs`] with an explicit worker count; the output does not
/// depend on `workers`.
pub fn simulate_pairs_with_workers(
    params: &RegParams,
    trials: usize,
    rng: &RngState,
    workers: usize,
) -> Vec<[f64; 2]> {
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let run_block = |b: usize| -> Vec<[f64; 2]> {
        let mut stream = rng.fork(rng.stream().wrapping_add(b as u64));
        let len = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
        (0..len)
            .map(|_| {
                [
                    sample_one(params, &mut stream),
                    sample_one(params, &mut stream),
                ]
            })
            .collect()
    };
    let workers = workers.clamp(1, blocks.max(1));
    if workers == 1 {
        return (0..blocks).flat_map(run_block).collect();
    }
    let mut parts: Vec<Vec<[f64; 2]>> = vec![Vec::new(); blocks];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let run_block = &run_block;
                scope.spawn(move || {
                    (w..blocks)
                        .step_by(workers)
                        .map(|b| (b, run_block(b)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (b, block) in h.join().expect("simulation worker panicked") {
                parts[b] = block;
            }
        }
    });
    parts.concat()
}

/// Fraction of simulated systems whose lifetime exceeds `t`.
pub fn system_reliability_mc(
    params: &RegParams,
    t: f64,
    topology: Topology,
    trials: usize,
    rng: &RngState,
) -> Result<f64> {
    if trials == 0 {
        return Err(domain("number of trials must be >= 1"));
    }
    if !(t >= 0.0) {
        return Err(domain(format!("time must be >= 0, got {t}")));
    }
    let pairs = simulate_pairs(params, trials, rng);
    Ok(exceedance_fraction(&pairs, topology, t))
}

fn exceedance_fraction(pairs: &[[f64; 2]], topology: Topology, t: f64) -> f64 {
    let k = pairs.iter().filter(|p| topology.lifetime(**p) > t).count();
    k as f64 / pairs.len() as f64
}

/// Exact and simulated reliability on the grid 0, step, 2·step, …, t_max.
/// The same simulated systems are reused at every grid point.
pub fn reliability_table(
    params: &RegParams,
    t_max: f64,
    step: f64,
    topology: Topology,
    trials: usize,
    rng: &RngState,
) -> Result<Vec<ReliabilityRow>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(domain(format!("step must be > 0, got {step}")));
    }
    if !(t_max >= step && t_max.is_finite()) {
        return Err(domain(format!("t_max must be >= step, got {t_max}")));
    }
    if trials == 0 {
        return Err(domain("number of trials must be >= 1"));
    }
    let points = (t_max / step + 1e-9).floor() as usize;
    let pairs = simulate_pairs(params, trials, rng);
    (0..=points)
        .map(|i| {
            let t = i as f64 * step;
            let exact = system_reliability_exact(params, t, topology)?;
            let estimate = exceedance_fraction(&pairs, topology, t);
            Ok(ReliabilityRow {
                t,
                exact,
                estimate,
                abs_error: (exact - estimate).abs(),
            })
        })
        .collect()
}

/// CSV with header `t,exact,estimate,abs_error`, six decimals per value.
pub fn table_to_csv(rows: &[ReliabilityRow]) -> String {
    let mut out = String::from("t,exact,estimate,abs_error\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.6}",
            r.t, r.exact, r.estimate, r.abs_error
        );
    }
    out
}

/// Three-sigma binomial error bound plus one count of slack.
pub fn binomial_bound(exact: f64, trials: usize) -> f64 {
    let n = trials as f64;
    3.0 * (exact * (1.0 - exact) / n).sqrt() + 1.0 / n
}
