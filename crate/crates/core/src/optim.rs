//! Safeguarded Newton ascent for small maximum-likelihood problems.
//!
//! Each parameter is written as `lower + exp(u)` and the search runs in
//! `u`, so every trial point is feasible. Newton directions come from a
//! central-difference Hessian of the analytic score; when that Hessian is
//! not negative definite a BFGS inverse approximation is used instead.
//! Steps are halved until the log-likelihood does not decrease.
//!
//! Convergence is declared on the score in the natural parameterisation.
//! A coordinate pinned against its lower bound with an outward-pointing
//! score is treated as an active constraint and left out of the norm.

use crate::error::{Error, Result};

pub(crate) trait Likelihood {
    fn lower_bounds(&self) -> Vec<f64>;
    fn log_lik(&self, params: &[f64]) -> Result<f64>;
    fn score(&self, params: &[f64]) -> Result<Vec<f64>>;
}

pub(crate) const GRADIENT_TOL: f64 = 1e-6;
pub(crate) const MAX_ITER: usize = 200;

/// `u` below this with an outward score marks an active bound.
const ACTIVE_FLOOR: f64 = -30.0;
const U_MIN: f64 = -45.0;
const MAX_STEP: f64 = 3.0;
const HESS_STEP: f64 = 1e-5;

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub params: Vec<f64>,
    pub log_lik: f64,
    pub initial_log_lik: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub messages: Vec<String>,
    pub std_errors: Option<Vec<f64>>,
}

struct Point {
    u: Vec<f64>,
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

fn natural(lb: &[f64], u: &[f64]) -> Vec<f64> {
    lb.iter().zip(u).map(|(l, v)| l + v.exp()).collect()
}

fn evaluate(model: &dyn Likelihood, lb: &[f64], u: Vec<f64>) -> Result<Point> {
    let x = natural(lb, &u);
    let f = model.log_lik(&x)?;
    if !f.is_finite() {
        return Err(Error::Numeric(format!(
            "log-likelihood is not finite at {x:?}"
        )));
    }
    let g = model.score(&x)?;
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("score is not finite at {x:?}")));
    }
    Ok(Point { u, x, f, g })
}

fn active_set(p: &Point) -> Vec<bool> {
    p.u.iter()
        .zip(&p.g)
        .map(|(&u, &g)| u < ACTIVE_FLOOR && g < 0.0)
        .collect()
}

fn projected_norm(g: &[f64], active: &[bool]) -> f64 {
    g.iter()
        .zip(active)
        .filter(|(_, &a)| !a)
        .map(|(v, _)| v * v)
        .sum::<f64>()
        .sqrt()
}

fn u_gradient(p: &Point) -> Vec<f64> {
    p.g.iter().zip(&p.u).map(|(g, u)| g * u.exp()).collect()
}

pub(crate) fn maximize(model: &dyn Likelihood, init: &[f64]) -> Result<Outcome> {
    let lb = model.lower_bounds();
    assert_eq!(lb.len(), init.len());
    let u0 = init
        .iter()
        .zip(&lb)
        .map(|(x, l)| {
            if x > l && x.is_finite() {
                Ok((x - l).ln().max(U_MIN))
            } else {
                Err(Error::Domain(format!(
                    "initial value {x} is not above its bound {l}"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cur = evaluate(model, &lb, u0)?;
    let initial_log_lik = cur.f;
    let dim = lb.len();
    let mut inv_approx: Option<Vec<Vec<f64>>> = None;
    let mut messages = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut used_fallback = false;

    loop {
        let active = active_set(&cur);
        let pg = projected_norm(&cur.g, &active);
        if pg <= GRADIENT_TOL {
            converged = true;
            break;
        }
        if iterations >= MAX_ITER {
            messages.push(format!(
                "iteration cap {MAX_ITER} reached; score norm {pg:.3e}"
            ));
            break;
        }
        iterations += 1;

        let gu = u_gradient(&cur);
        let free: Vec<usize> = (0..dim).filter(|&i| !active[i]).collect();
        let gf: Vec<f64> = free.iter().map(|&i| gu[i]).collect();

        let mut dir_free = hessian_u(model, &lb, &cur.u)
            .ok()
            .map(|h| sub_matrix(&h, &free, -1.0))
            .and_then(|neg_h| cholesky_solve(&neg_h, &gf));
        if dir_free.is_none() {
            used_fallback = true;
            dir_free = Some(match &inv_approx {
                Some(b) => mat_vec(&sub_matrix(b, &free, 1.0), &gf),
                None => {
                    let scale = gf.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
                    gf.iter().map(|v| v / scale).collect()
                }
            });
        }
        let mut dir_free = dir_free.unwrap();
        if dot(&dir_free, &gf) <= 0.0 {
            let scale = gf.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
            dir_free = gf.iter().map(|v| v / scale).collect();
        }
        let longest = dir_free.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if longest > MAX_STEP {
            dir_free.iter_mut().for_each(|v| *v *= MAX_STEP / longest);
        }
        let mut dir = vec![0.0; dim];
        for (k, &i) in free.iter().enumerate() {
            dir[i] = dir_free[k];
        }

        let mut step = 1.0;
        let mut next = None;
        for _ in 0..60 {
            let trial: Vec<f64> = cur
                .u
                .iter()
                .zip(&dir)
                .map(|(u, d)| (u + step * d).max(U_MIN))
                .collect();
            if let Ok(p) = evaluate(model, &lb, trial) {
                let improved = p.f > cur.f;
                let flat = p.f >= cur.f - 1e-12 * cur.f.abs().max(1.0)
                    && projected_norm(&p.g, &active_set(&p)) < pg;
                if improved || flat {
                    next = Some(p);
                    break;
                }
            }
            step *= 0.5;
        }
        let Some(next) = next else {
            messages.push(format!("line search failed; score norm {pg:.3e}"));
            break;
        };

        // BFGS update of the inverse of the negative u-Hessian.
        let s: Vec<f64> = next.u.iter().zip(&cur.u).map(|(a, b)| a - b).collect();
        let gu_next = u_gradient(&next);
        let y: Vec<f64> = gu.iter().zip(&gu_next).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            let b = inv_approx.get_or_insert_with(|| {
                let scale = sy / dot(&y, &y);
                identity(dim, scale)
            });
            bfgs_update(b, &s, &y, sy);
        }
        cur = next;
    }

    if used_fallback {
        messages.push("quasi-Newton fallback engaged at least once".to_string());
    }
    let active = active_set(&cur);
    for (i, &a) in active.iter().enumerate() {
        if a {
            messages.push(format!("parameter {i} is at its lower bound {}", lb[i]));
        }
    }
    let std_errors = observed_std_errors(model, &cur.x, &active);
    Ok(Outcome {
        gradient_norm: projected_norm(&cur.g, &active),
        params: cur.x,
        log_lik: cur.f,
        initial_log_lik,
        iterations,
        converged,
        messages,
        std_errors,
    })
}

fn hessian_u(model: &dyn Likelihood, lb: &[f64], u: &[f64]) -> Result<Vec<Vec<f64>>> {
    let dim = u.len();
    let mut h = vec![vec![0.0; dim]; dim];
    for j in 0..dim {
        let mut plus = u.to_vec();
        let mut minus = u.to_vec();
        plus[j] += HESS_STEP;
        minus[j] -= HESS_STEP;
        let gp = scaled_score(model, lb, &plus)?;
        let gm = scaled_score(model, lb, &minus)?;
        for i in 0..dim {
            h[i][j] = (gp[i] - gm[i]) / (2.0 * HESS_STEP);
        }
    }
    symmetrize(&mut h);
    Ok(h)
}

fn scaled_score(model: &dyn Likelihood, lb: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    let g = model.score(&natural(lb, u))?;
    Ok(g.iter().zip(u).map(|(g, u)| g * u.exp()).collect())
}

/// Standard errors from the inverse observed information at `x`, free
/// coordinates only.
fn observed_std_errors(model: &dyn Likelihood, x: &[f64], active: &[bool]) -> Option<Vec<f64>> {
    let free: Vec<usize> = (0..x.len()).filter(|&i| !active[i]).collect();
    if free.is_empty() {
        return None;
    }
    let mut info = vec![vec![0.0; x.len()]; x.len()];
    for j in 0..x.len() {
        let h = 1e-6 * x[j].abs().max(1e-8);
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let gp = model.score(&plus).ok()?;
        let gm = model.score(&minus).ok()?;
        for i in 0..x.len() {
            info[i][j] = -(gp[i] - gm[i]) / (2.0 * h);
        }
    }
    symmetrize(&mut info);
    let sub = sub_matrix(&info, &free, 1.0);
    let mut out = vec![f64::NAN; x.len()];
    for (k, &i) in free.iter().enumerate() {
        let mut e = vec![0.0; free.len()];
        e[k] = 1.0;
        let col = cholesky_solve(&sub, &e)?;
        out[i] = col[k].sqrt();
    }
    Some(out)
}

fn symmetrize(m: &mut [Vec<f64>]) {
    for i in 0..m.len() {
        for j in 0..i {
            let avg = 0.5 * (m[i][j] + m[j][i]);
            m[i][j] = avg;
            m[j][i] = avg;
        }
    }
}

fn sub_matrix(m: &[Vec<f64>], idx: &[usize], sign: f64) -> Vec<Vec<f64>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| sign * m[i][j]).collect())
        .collect()
}

fn identity(dim: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { scale } else { 0.0 }).collect())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn bfgs_update(b: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let by = mat_vec(b, y);
    let ybty = dot(y, &by);
    let rho = 1.0 / sy;
    let n = s.len();
    for i in 0..n {
        for j in 0..n {
            b[i][j] += (1.0 + ybty * rho) * rho * s[i] * s[j] - rho * (by[i] * s[j] + s[i] * by[j]);
        }
    }
}

/// Solves `A x = b` for symmetric positive definite `A`; `None` otherwise.
pub(crate) fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return None;
                }
                l[i][i] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i][k] * z[k];
        }
        z[i] = sum / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = z[i];
        for k in i + 1..n {
            sum -= l[k][i] * x[k];
        }
        x[i] = sum / l[i][i];
    }
    Some(x)
}
