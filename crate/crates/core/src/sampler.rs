//! Exact random variate generation.
//!
//! A uniform `u` selects the branch: `u <= p_n` draws an exponential(θ)
//! variate `-ln(v)/θ`, otherwise a gamma(α, θ) variate is drawn. For
//! integer shapes up to [`MAX_SUM_SHAPE`] the gamma branch sums α
//! independent exponential log-uniforms; every other shape uses the
//! Marsaglia–Tsang squeeze with the `α < 1` boost `G(α+1) · U^{1/α}`.

use crate::dist::RegParams;
use crate::error::{domain, Result};
use crate::rng::RngState;

/// Largest integer shape sampled as a sum of exponentials.
pub const MAX_SUM_SHAPE: f64 = 32.0;

/// Which mixture component produced a draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Exponential,
    Gamma,
}

/// One draw together with the branch that produced it.
pub fn sample_tagged(params: &RegParams, rng: &mut RngState) -> (f64, Branch) {
    let u = rng.uniform();
    if u <= params.weight() {
        let v = rng.uniform_open_zero();
        (-v.ln() / params.theta(), Branch::Exponential)
    } else {
        (
            sample_gamma(params.alpha(), params.theta(), rng),
            Branch::Gamma,
        )
    }
}

pub fn sample_one(params: &RegParams, rng: &mut RngState) -> f64 {
    sample_tagged(params, rng).0
}

pub fn sample_many(params: &RegParams, count: usize, rng: &mut RngState) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    Ok((0..count).map(|_| sample_one(params, rng)).collect())
}

/// Gamma(shape, rate) variate.
pub fn sample_gamma(shape: f64, rate: f64, rng: &mut RngState) -> f64 {
    if shape.fract() == 0.0 && shape <= MAX_SUM_SHAPE {
        let mut acc = 0.0;
        for _ in 0..shape as u32 {
            acc -= rng.uniform_open_zero().ln();
        }
        return acc / rate;
    }
    if shape < 1.0 {
        let boosted = marsaglia_tsang(shape + 1.0, rng);
        let u = rng.uniform_open_zero();
        return boosted * u.powf(1.0 / shape) / rate;
    }
    marsaglia_tsang(shape, rng) / rate
}

/// Unit-rate gamma variate for shape >= 1.
fn marsaglia_tsang(shape: f64, rng: &mut RngState) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z = standard_normal(rng);
        let t = 1.0 + c * z;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform_open_zero();
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 {
            return d * v;
        }
        if u.ln() < 0.5 * z2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Box–Muller; one normal per pair of uniforms.
fn standard_normal(rng: &mut RngState) -> f64 {
    let u1 = rng.uniform_open_zero();
    let u2 = rng.uniform();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
