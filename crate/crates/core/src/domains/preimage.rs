//! Solving `P~(x) = target` in the three-dimensional slice.

use nalgebra::Vector3;
use serde::Serialize;

use super::{bisect, c_profile, grid, membership, rho_curve};
use crate::geodesic::TangentVector3;
use crate::ptilde::{det_dptilde3, dptilde3, ptilde3};

const MAX_NEWTON: usize = 50;
const MAX_HALVINGS: usize = 30;
const RESIDUAL_TOL: f64 = 1e-10;
const SEED_SPAN: f64 = 8.0;
const SEED_COUNT: usize = 33;
const BRACKET_STEP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreimageSolution {
    pub point: TangentVector3,
    /// Max-norm of `P~(point) - target`.
    pub residual: f64,
    pub det: f64,
    /// Membership in `[O0, O1, O2]`.
    pub membership: [bool; 3],
}

fn rotate(p: TangentVector3, cos: f64, sin: f64) -> TangentVector3 {
    TangentVector3::new(cos * p.a - sin * p.b, sin * p.a + cos * p.b, p.c)
}

fn residual(x: TangentVector3, target: TangentVector3) -> f64 {
    ptilde3(x).dist(target)
}

/// Newton's method with step halving until the residual decreases.
fn damped_newton(seed: TangentVector3, target: TangentVector3, stop: f64) -> TangentVector3 {
    let mut x = seed;
    let mut res = residual(x, target);
    for _ in 0..MAX_NEWTON {
        if !(res > stop) {
            break;
        }
        let f = Vector3::from(ptilde3(x).to_array()) - Vector3::from(target.to_array());
        let Some(step) = dptilde3(x).lu().solve(&f) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial = TangentVector3::new(x.a - lambda * step[0], x.b - lambda * step[1], x.c - lambda * step[2]);
            let r = residual(trial, target);
            if r < res {
                x = trial;
                res = r;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    x
}

/// All solutions of `P~(x) = target` found from the seeds, from seeds placed
/// along the level curve through the target, and by bisection of `C_A(t) = C`
/// along that curve. Solutions are reported once each, sorted by `c`.
pub fn preimage_solve(target: TangentVector3, seeds: &[TangentVector3]) -> Vec<PreimageSolution> {
    if !target.is_finite() {
        return Vec::new();
    }
    let level = target.a.hypot(target.b);
    let (cos, sin) = if level > 0.0 {
        (target.a / level, target.b / level)
    } else {
        (1.0, 0.0)
    };
    let scale = target.to_array().iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let tol = RESIDUAL_TOL * scale;

    let mut found: Vec<TangentVector3> = Vec::new();
    let curve_seeds = (0..SEED_COUNT).map(|k| {
        let t = -SEED_SPAN + 2.0 * SEED_SPAN * k as f64 / (SEED_COUNT - 1) as f64;
        rotate(rho_curve(level, t), cos, sin)
    });
    for seed in seeds.iter().copied().filter(|s| s.is_finite()).chain(curve_seeds) {
        let x = damped_newton(seed, target, 1e-3 * tol);
        if x.is_finite() && residual(x, target) < tol {
            found.push(x);
        }
    }

    let span = target.c.abs() + 20.0;
    let ts = grid(-span, span, BRACKET_STEP).expect("finite span");
    let g = |t: f64| c_profile(level, t) - target.c;
    for w in ts.windows(2) {
        let (g0, g1) = (g(w[0]), g(w[1]));
        if g0 == 0.0 || g0.signum() != g1.signum() {
            if let Some(t) = bisect(g, w[0], w[1]) {
                let x = rotate(rho_curve(level, t), cos, sin);
                if residual(x, target) < tol {
                    found.push(x);
                }
            }
        }
    }

    found.sort_by(|x, y| x.c.total_cmp(&y.c));
    let mut merged: Vec<TangentVector3> = Vec::new();
    for x in found {
        match merged.last_mut() {
            Some(last) if x.dist(*last) <= 1e-4 * (1.0 + x.norm()) => {
                if residual(x, target) < residual(*last, target) {
                    *last = x;
                }
            }
            _ => merged.push(x),
        }
    }
    merged
        .into_iter()
        .map(|point| PreimageSolution {
            point,
            residual: residual(point, target),
            det: det_dptilde3(point),
            membership: membership(point),
        })
        .collect()
}
