//! The rotation- and reflection-invariant domains `O0`, `O1`, `O2` of the
//! three-dimensional slice, together with the level curves and checks built
//! on their boundary functions.

mod convexity;
mod preimage;
mod scan;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use convexity::{convexity_check, segment_escape, ConvexityReport, ConvexityWitness, ImageRegion};
pub use preimage::{preimage_solve, PreimageSolution};
pub use scan::{injectivity_scan, Collision, ScanConfig, ScanReport};

use crate::error::{Error, Result};
use crate::geodesic::TangentVector3;
use crate::kernel::{eval_scalar, monotonicity_expression, ScalarFn};
use crate::ptilde::ptilde3;

/// `{(a, b, c) : a^2 + b^2 < f(c)}` for one of the three boundary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RadialDomain {
    O0,
    O1,
    O2,
}

impl RadialDomain {
    pub const ALL: [RadialDomain; 3] = [RadialDomain::O0, RadialDomain::O1, RadialDomain::O2];

    pub fn boundary_fn(self) -> ScalarFn {
        match self {
            RadialDomain::O0 => ScalarFn::F0,
            RadialDomain::O1 => ScalarFn::F1,
            RadialDomain::O2 => ScalarFn::F2,
        }
    }

    /// `f(c)`, the squared boundary radius.
    pub fn boundary_sq(self, c: f64) -> f64 {
        eval_scalar(self.boundary_fn(), c)
    }

    pub fn boundary_radius(self, c: f64) -> f64 {
        self.boundary_sq(c).sqrt()
    }

    /// Compares radii rather than their squares, so a point built as
    /// `(sqrt f(c), 0, c)` lands exactly on the boundary.
    pub fn contains(self, p: TangentVector3) -> bool {
        p.a.hypot(p.b) < self.boundary_radius(p.c)
    }

    /// Like [`contains`](Self::contains) but with `|(a, b)| < (1 - margin) sqrt f(c)`.
    pub fn contains_with_margin(self, p: TangentVector3, margin: f64) -> bool {
        p.a.hypot(p.b) < (1.0 - margin) * self.boundary_radius(p.c)
    }

    pub fn name(self) -> &'static str {
        match self {
            RadialDomain::O0 => "O0",
            RadialDomain::O1 => "O1",
            RadialDomain::O2 => "O2",
        }
    }
}

impl fmt::Display for RadialDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RadialDomain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "O0" => Ok(RadialDomain::O0),
            "O1" => Ok(RadialDomain::O1),
            "O2" => Ok(RadialDomain::O2),
            _ => Err(Error::InvalidArgument(format!("unknown domain `{s}`"))),
        }
    }
}

/// Membership flags `[O0, O1, O2]`.
pub fn membership(p: TangentVector3) -> [bool; 3] {
    RadialDomain::ALL.map(|d| d.contains(p))
}

/// `t / sinh t`, the reciprocal of `l`.
fn inv_l(t: f64) -> f64 {
    1.0 / eval_scalar(ScalarFn::L, t)
}

/// The level curve `rho_A(t) = (A t / sinh t, 0, t)` along which the first
/// image component stays equal to `A`.
pub fn rho_curve(level: f64, t: f64) -> TangentVector3 {
    TangentVector3::new(level * inv_l(t), 0.0, t)
}

/// `C_A(t)`, the third component of `P~(rho_A(t))`.
pub fn c_profile(level: f64, t: f64) -> f64 {
    ptilde3(rho_curve(level, t)).c
}

/// Root of `f` in `[lo, hi]` by bisection, given a sign change at the ends.
/// Runs to the resolution of the floating-point grid.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Evenly spaced samples `start, start + step, ...` not exceeding `end`,
/// computed as `start + k step` so the grid does not drift.
pub fn grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !end.is_finite() || end < start {
        return Err(Error::InvalidArgument(format!(
            "bad grid [{start}, {end}] with step {step}"
        )));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// Relative gap below which two boundary functions count as touching.
pub const CONTACT_TOL: f64 = 1e-12;
/// Contact of the boundaries is expected only for `|c|` up to this.
pub const CONTACT_RADIUS: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub samples: usize,
    /// Smallest `(f1 - f2) / f1` over samples away from the contact point.
    pub min_rel_gap_21: f64,
    /// Smallest `(f0 - f1) / f0` over samples away from the contact point.
    pub min_rel_gap_10: f64,
    /// Samples where an inequality fails or the boundaries touch away from 0.
    pub violations: Vec<f64>,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `f2 <= f1 <= f0` on a grid, with contact only at `c = 0`.
pub fn inclusion_check(c_min: f64, c_max: f64, step: f64) -> Result<InclusionReport> {
    let cs = grid(c_min, c_max, step)?;
    let mut report = InclusionReport {
        samples: cs.len(),
        min_rel_gap_21: f64::INFINITY,
        min_rel_gap_10: f64::INFINITY,
        violations: Vec::new(),
    };
    for &c in &cs {
        let f0 = eval_scalar(ScalarFn::F0, c);
        let f1 = eval_scalar(ScalarFn::F1, c);
        let f2 = eval_scalar(ScalarFn::F2, c);
        let g21 = (f1 - f2) / f1;
        let g10 = (f0 - f1) / f0;
        let ordered = f2 <= f1 && f1 <= f0;
        let near_zero = c.abs() <= CONTACT_RADIUS;
        if !near_zero {
            report.min_rel_gap_21 = report.min_rel_gap_21.min(g21);
            report.min_rel_gap_10 = report.min_rel_gap_10.min(g10);
        }
        let touching = g21 <= CONTACT_TOL || g10 <= CONTACT_TOL;
        if !ordered || (touching && !near_zero) {
            report.violations.push(c);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub samples: usize,
    /// Minimum of `2t cosh^2 t - 3 cosh t sinh t + t` and where it occurs.
    pub min_expression: f64,
    pub argmin_expression: f64,
    /// Minimum of the central-difference derivative of `(sinh^2 t / t^2) f0(t)`.
    pub min_derivative: f64,
    pub argmin_derivative: f64,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.min_expression > 0.0 && self.min_derivative > 0.0
    }
}

/// `(sinh^2 t / t^2) f0(t)`: `A^2` below it means `rho_A(t)` lies in `O0`.
pub fn o0_level_bound(t: f64) -> f64 {
    let l = eval_scalar(ScalarFn::L, t);
    l * l * eval_scalar(ScalarFn::F0, t)
}

/// Samples the positivity of [`monotonicity_expression`] and the growth of [`o0_level_bound`] on
/// `t = start + k step <= end` (all `t > 0`).
pub fn monotonicity_check(start: f64, end: f64, step: f64) -> Result<MonotonicityReport> {
    if !(start > 0.0) {
        return Err(Error::InvalidArgument("monotonicity is checked for t > 0".into()));
    }
    let ts = grid(start, end, step)?;
    let mut r = MonotonicityReport {
        samples: ts.len(),
        min_expression: f64::INFINITY,
        argmin_expression: f64::NAN,
        min_derivative: f64::INFINITY,
        argmin_derivative: f64::NAN,
    };
    for &t in &ts {
        let e = monotonicity_expression(t);
        if e < r.min_expression {
            r.min_expression = e;
            r.argmin_expression = t;
        }
        let h = 1e-4 * t.min(1.0);
        let d = (o0_level_bound(t + h) - o0_level_bound(t - h)) / (2.0 * h);
        if d < r.min_derivative {
            r.min_derivative = d;
            r.argmin_derivative = t;
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileReport {
    pub level: f64,
    /// Whether `C_A` increased strictly at every sampled step.
    pub increasing: bool,
    pub min_value: f64,
    pub argmin: f64,
}

/// Samples `C_A` on `t = start + k step <= end` for each level `A`.
///
/// For `A > sqrt 3` the profile starts with slope `1 - A^2/3 < 0`, dips below
/// zero and only then increases, so those levels report `increasing = false`.
pub fn profile_monotonicity(levels: &[f64], start: f64, end: f64, step: f64) -> Result<Vec<ProfileReport>> {
    let ts = grid(start, end, step)?;
    Ok(levels
        .iter()
        .map(|&level| {
            let values: Vec<f64> = ts.iter().map(|&t| c_profile(level, t)).collect();
            let (argmin, min_value) =
                ts.iter().zip(&values).fold(
                    (f64::NAN, f64::INFINITY),
                    |acc, (&t, &v)| if v < acc.1 { (t, v) } else { acc },
                );
            ProfileReport {
                level,
                increasing: values.windows(2).all(|w| w[1] > w[0]),
                min_value,
                argmin,
            }
        })
        .collect())
}

/// The `t > 0` with `sqrt(f1(t)) sinh(t) / t = level`, i.e. the point where
/// `rho_A` crosses the boundary of `O1` and `C_A` vanishes.
pub fn o1_crossing(level: f64) -> Option<f64> {
    if level <= 3f64.sqrt() {
        return None;
    }
    let g = |t: f64| eval_scalar(ScalarFn::F1, t).sqrt() * eval_scalar(ScalarFn::L, t) - level;
    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e3 {
            return None;
        }
    }
    bisect(g, 1e-12, hi)
}
