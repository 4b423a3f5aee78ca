#![allow(dead_code)]

//! Independent oracles shared by the integration tests.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature on [a, b]: the
/// panel with the largest error estimate is bisected until the summed
/// estimate falls below max(abs_tol, rel_tol·|I|).
pub fn integrate_tol(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let mut panels = vec![(a, b, gk15(&f, a, b))];
    for _ in 0..5000 {
        let total: f64 = panels.iter().map(|p| p.2 .0).sum();
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .unwrap();
        let (lo, hi, _) = panels.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, gk15(&f, lo, mid)));
        panels.push((mid, hi, gk15(&f, mid, hi)));
    }
    panels.iter().map(|p| p.2 .0).sum()
}

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    integrate_tol(f, a, b, 1e-300, 1e-13)
}

/// ∫₀^∞ f. The first panel [0, scale] is mapped through x = u² to soften
/// x^(−1/2)-type endpoint singularities; further panels double in width
/// until they stop contributing.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, scale: f64) -> f64 {
    let root = scale.sqrt();
    let mut total = integrate(
        |u| if u == 0.0 { 0.0 } else { 2.0 * u * f(u * u) },
        0.0,
        root,
    );
    integrate_from(&f, scale, scale, &mut total);
    total
}

/// ∫_a^∞ f for a > 0, with panels of doubling width starting at `scale`.
pub fn integrate_tail(f: impl Fn(f64) -> f64, a: f64, scale: f64) -> f64 {
    let mut total = 0.0;
    integrate_from(&f, a, scale, &mut total);
    total
}

fn integrate_from(f: &dyn Fn(f64) -> f64, a: f64, scale: f64, total: &mut f64) {
    let mut lo = a;
    let mut width = scale;
    while lo < 1e300 {
        let piece = integrate(f, lo, lo + width);
        *total += piece;
        if piece.abs() <= 1e-17 * total.abs() && width > 64.0 * scale {
            return;
        }
        lo += width;
        width *= 2.0;
    }
}

/// O(m²) K-S oracle: for each sorted point, counts how many sample values
/// fall at or below it by scanning the whole sample.
pub fn ks_brute_force(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let m = sample.len() as f64;
    let mut d: f64 = 0.0;
    for &x in sample {
        let below = sample.iter().filter(|&&y| y < x).count() as f64;
        let at_or_below = sample.iter().filter(|&&y| y <= x).count() as f64;
        let f = cdf(x);
        d = d.max(at_or_below / m - f).max(f - below / m);
    }
    d
}

/// Central difference with a relative step.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, rel: f64) -> f64 {
    let h = rel * x.abs().max(1e-3);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

/// Minimal splitmix64 stream for generating test instances independently
/// of the library generator.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
