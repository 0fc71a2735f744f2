//! Invariant suites behind `htube verify`.
//!
//! Every check records the measured quantity next to its bound. Suites that
//! concern a general H-type algebra run on the algebra of the context; the
//! three-dimensional checks always use the Heisenberg group.

use std::f64::consts::TAU;

use clap::ValueEnum;
use htube_core::algebra::{AlgebraElement, HTypeAlgebra};
use htube_core::domains::{
    bisect, convexity_check, grid, inclusion_check, injectivity_scan, monotonicity_check, o1_crossing, preimage_solve,
    profile_monotonicity, ImageRegion, RadialDomain, ScanConfig,
};
use htube_core::embedding::{boundary_embed_check, boundary_samples, embed_frame};
use htube_core::geodesic::{
    flow_rule_residual, geodesic_numeric, geodesic_trajectory, left_velocity, phi3, scaling_check, TangentVector3,
};
use htube_core::group::{inverse_complex, multiply, multiply_real, polar_compose, polar_decompose};
use htube_core::group::{ComplexAlgebraElement, GroupElement};
use htube_core::kernel::{
    closed_form, eval_scalar, injectivity_gap_series, monotonicity_expression, series_branch, ScalarFn,
};
use htube_core::ptilde::{
    det_dptilde3, dptilde_matrix, jacobian_fd, numeric_rank, ptilde, ptilde3, ptilde3_from_phi, ptilde3_jacobian_fd,
    singular_criterion,
};
use nalgebra::{DVector, Matrix3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{CheckRecord, SuiteReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Kernel,
    Algebra,
    Group,
    Geodesic,
    Ptilde,
    Domains,
    Embedding,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 7] = [
        Suite::Kernel,
        Suite::Algebra,
        Suite::Group,
        Suite::Geodesic,
        Suite::Ptilde,
        Suite::Domains,
        Suite::Embedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Algebra => "algebra",
            Suite::Group => "group",
            Suite::Geodesic => "geodesic",
            Suite::Ptilde => "ptilde",
            Suite::Domains => "domains",
            Suite::Embedding => "embedding",
            Suite::All => "all",
        }
    }
}

pub struct SuiteContext {
    pub alg: HTypeAlgebra,
    pub alg_name: String,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
}

impl Default for SuiteContext {
    fn default() -> Self {
        Self {
            alg: HTypeAlgebra::quaternionic(),
            alg_name: "quaternionic".into(),
            tol_scale: 1.0,
        }
    }
}

impl SuiteContext {
    fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }
}

pub fn run_suite(suite: Suite, ctx: &SuiteContext) -> SuiteReport {
    let checks = match suite {
        Suite::Kernel => kernel(ctx),
        Suite::Algebra => algebra(ctx),
        Suite::Group => group(ctx),
        Suite::Geodesic => geodesic(ctx),
        Suite::Ptilde => ptilde_suite(ctx),
        Suite::Domains => domains(ctx),
        Suite::Embedding => embedding(ctx),
        Suite::All => Suite::MODULES.iter().flat_map(|&s| run_suite(s, ctx).checks).collect(),
    };
    SuiteReport::new(suite.name(), &ctx.alg_name, checks)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_v3(rng: &mut ChaCha8Rng, half: f64) -> TangentVector3 {
    TangentVector3::new(
        rng.random_range(-half..half),
        rng.random_range(-half..half),
        rng.random_range(-half..half),
    )
}

fn random_element(rng: &mut ChaCha8Rng, alg: &HTypeAlgebra, half: f64) -> AlgebraElement {
    let flat: Vec<f64> = (0..alg.dim()).map(|_| rng.random_range(-half..half)).collect();
    AlgebraElement::from_flat(&flat, alg.dim_v())
}

fn random_complex(rng: &mut ChaCha8Rng, alg: &HTypeAlgebra, half: f64) -> ComplexAlgebraElement {
    ComplexAlgebraElement {
        re: random_element(rng, alg, half),
        im: random_element(rng, alg, half),
    }
}

fn h1() -> HTypeAlgebra {
    HTypeAlgebra::heisenberg(1).expect("n = 1 is valid")
}

fn kernel(ctx: &SuiteContext) -> Vec<CheckRecord> {
    let mut out = Vec::new();

    let mut branch: f64 = 0.0;
    for f in ScalarFn::ALL {
        for t in grid(0.8, 1.2, 0.01).expect("valid grid") {
            for s in [t, -t] {
                let closed = closed_form(f, s);
                branch = branch.max((series_branch(f, s) - closed).abs() / closed.abs().max(1.0));
            }
        }
    }
    out.push(CheckRecord::at_most("kernel.branch_agreement", branch, ctx.tol(1e-10)));

    // 40-digit values of the closed forms
    let refs = [
        (ScalarFn::F0, 1.0, 3.1945280494653251136),
        (ScalarFn::F1, 1.0, 2.4587235516374669552),
        (ScalarFn::F2, 1.0, 2.1721849828989313992),
        (ScalarFn::L, 0.03, 1.0001500067501446447),
    ];
    let worst = refs
        .iter()
        .map(|&(f, t, v)| ((eval_scalar(f, t) - v) / v).abs())
        .fold(0.0, f64::max);
    out.push(CheckRecord::at_most("kernel.reference_values", worst, ctx.tol(1e-13)));

    let origin = [ScalarFn::F0, ScalarFn::F1, ScalarFn::F2]
        .iter()
        .map(|&f| (eval_scalar(f, 0.0) - 3.0).abs())
        .fold(0.0, f64::max);
    out.push(CheckRecord::at_most("kernel.boundary_functions_at_origin", origin, 0.0));

    let mut parity: f64 = 0.0;
    for f in ScalarFn::ALL {
        let sign = match f.parity() {
            htube_core::kernel::Parity::Even => 1.0,
            htube_core::kernel::Parity::Odd => -1.0,
        };
        for t in grid(0.0, 10.0, 0.05).expect("valid grid") {
            parity = parity.max((eval_scalar(f, -t) - sign * eval_scalar(f, t)).abs());
        }
    }
    out.push(CheckRecord::at_most("kernel.parity", parity, 0.0));

    let gap = injectivity_gap_series(20).to_f64();
    let min_all = gap.coeffs().iter().copied().fold(f64::INFINITY, f64::min);
    let min_even = (4..=20).step_by(2).map(|k| gap.coeff(k)).fold(f64::INFINITY, f64::min);
    out.push(CheckRecord::at_least(
        "kernel.injectivity_gap_coefficients_nonnegative",
        min_all,
        0.0,
    ));
    out.push(CheckRecord::above(
        "kernel.injectivity_gap_even_coefficients_positive",
        min_even,
        0.0,
    ));

    let expr_min = grid(1e-2, 20.0, 1e-2)
        .expect("valid grid")
        .into_iter()
        .map(monotonicity_expression)
        .fold(f64::INFINITY, f64::min);
    out.push(CheckRecord::above(
        "kernel.monotonicity_expression_positive",
        expr_min,
        0.0,
    ));

    let c: f64 = 1e-2;
    let lead = ((eval_scalar(ScalarFn::F0, c) - eval_scalar(ScalarFn::F1, c)) / (c * c) - 0.8).abs();
    out.push(CheckRecord::at_most(
        "kernel.f0_minus_f1_leading_term",
        lead,
        ctx.tol(1e-4),
    ));
    out
}

fn algebra(ctx: &SuiteContext) -> Vec<CheckRecord> {
    let alg = &ctx.alg;
    let mut out = vec![CheckRecord::flag("algebra.validate", alg.validate(1e-12).is_ok())];
    let mut r = rng(1);
    let (mut jsq, mut compat, mut anti): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..200 {
        let z = DVector::from_iterator(alg.dim_z(), (0..alg.dim_z()).map(|_| r.random_range(-1.0..1.0)));
        let j = alg.j_matrix(&z).expect("dims match");
        let sq = &j * &j + nalgebra::DMatrix::identity(alg.dim_v(), alg.dim_v()) * z.norm_squared();
        jsq = jsq.max(sq.amax());
        let x = random_element(&mut r, alg, 1.0);
        let y = random_element(&mut r, alg, 1.0);
        let br = alg.bracket(&x, &y).expect("dims match");
        let lhs = (&j * &x.v).dot(&y.v);
        compat = compat.max((lhs - z.dot(&br.z)).abs());
        anti = anti.max((&br + &alg.bracket(&y, &x).expect("dims match")).max_abs());
    }
    out.push(CheckRecord::at_most(
        "algebra.j_squared_is_minus_norm",
        jsq,
        ctx.tol(1e-12),
    ));
    out.push(CheckRecord::at_most(
        "algebra.bracket_compatibility",
        compat,
        ctx.tol(1e-12),
    ));
    out.push(CheckRecord::at_most(
        "algebra.bracket_antisymmetry",
        anti,
        ctx.tol(1e-15),
    ));
    out.push(CheckRecord::flag(
        "algebra.bracket_onto_center",
        alg.derived_rank() == alg.dim_z(),
    ));
    out
}

fn group(ctx: &SuiteContext) -> Vec<CheckRecord> {
    let alg = &ctx.alg;
    let mut r = rng(2);
    let (mut assoc, mut inv, mut polar): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..500 {
        let (a, b, c) = (
            random_complex(&mut r, alg, 3.0),
            random_complex(&mut r, alg, 3.0),
            random_complex(&mut r, alg, 3.0),
        );
        let l = multiply(alg, &multiply(alg, &a, &b).unwrap(), &c).unwrap();
        let rr = multiply(alg, &a, &multiply(alg, &b, &c).unwrap()).unwrap();
        assoc = assoc.max((&l - &rr).max_abs() / (1.0 + l.max_abs()));
        inv = inv.max(multiply(alg, &a, &inverse_complex(&a)).unwrap().max_abs());
        let (h, xi) = polar_decompose(alg, &a).unwrap();
        let back = polar_compose(alg, &h, &xi).unwrap();
        polar = polar.max((&back - &a).max_abs() / (1.0 + a.max_abs()));
    }
    let mut law: f64 = 0.0;
    let h = h1();
    let mat = |x: &AlgebraElement| {
        let (a, b, c) = (x.v[0], x.v[1], x.z[0]);
        Matrix3::new(1.0, a, c + a * b / 2.0, 0.0, 1.0, b, 0.0, 0.0, 1.0)
    };
    for _ in 0..500 {
        let g = GroupElement::new(random_element(&mut r, &h, 3.0));
        let k = GroupElement::new(random_element(&mut r, &h, 3.0));
        let p = multiply_real(&h, &g, &k).unwrap().coords;
        let m = mat(&g.coords) * mat(&k.coords);
        let want = [m[(0, 1)], m[(1, 2)], m[(0, 2)] - m[(0, 1)] * m[(1, 2)] / 2.0];
        law = law.max((0..3).map(|i| (p.to_vec()[i] - want[i]).abs()).fold(0.0, f64::max));
    }
    vec![
        CheckRecord::at_most("group.associativity", assoc, ctx.tol(1e-14)),
        CheckRecord::at_most("group.inverse", inv, ctx.tol(1e-13)),
        CheckRecord::at_most("group.polar_round_trip", polar, ctx.tol(1e-13)),
        CheckRecord::at_most("group.heisenberg_matrix_law", law, ctx.tol(1e-13)),
    ]
}

/// Max error of the numeric geodesic against the closed form at every node.
fn numeric_geodesic_error(v: TangentVector3, t_end: f64, steps: usize) -> f64 {
    let traj = geodesic_trajectory(&h1(), &v.to_element(), t_end, steps).expect("valid input");
    traj.iter()
        .map(|(t, g)| (&g.coords - &phi3(Complex64::new(*t, 0.0), v).re).max_abs())
        .fold(0.0, f64::max)
}

/// Observed order `log2(e(n) / e(2n))`.
pub fn geodesic_convergence_order(v: TangentVector3, t_end: f64, steps: usize) -> f64 {
    (numeric_geodesic_error(v, t_end, steps) / numeric_geodesic_error(v, t_end, 2 * steps)).log2()
}

fn geodesic(ctx: &SuiteContext) -> Vec<CheckRecord> {
    let mut r = rng(3);
    let (mut flow, mut scale): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let v = random_v3(&mut r, 1.0);
        let x = r.random_range(-1.0..1.0);
        let z = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        flow = flow.max(flow_rule_residual(v, x, z));
        let y = r.random_range(-2.0..2.0);
        scale = scale.max(scaling_check(z, y, v) / (1.0 + phi3(z * y, v).max_abs()));
    }
    let vs = [
        TangentVector3::new(1.0, 0.0, 1.0),
        TangentVector3::new(-0.6, 0.8, -1.5),
        TangentVector3::new(0.3, 0.2, 0.1),
    ];
    let err = vs
        .iter()
        .map(|&v| numeric_geodesic_error(v, 5.0, 1000))
        .fold(0.0, f64::max);
    let order = vs
        .iter()
        .map(|&v| geodesic_convergence_order(v, 5.0, 50))
        .fold(f64::INFINITY, f64::min);

    let alg = &ctx.alg;
    let (mut speed, mut selfconv): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let v = random_element(&mut r, alg, 1.0);
        for k in 0..10 {
            let w = left_velocity(alg, &v, k as f64 * 0.7).unwrap();
            speed = speed.max((w.norm() - v.norm()).abs());
        }
        let coarse = geodesic_numeric(alg, &v, 2.0, 200).unwrap();
        let fine = geodesic_numeric(alg, &v, 2.0, 400).unwrap();
        selfconv = selfconv.max((&coarse.coords - &fine.coords).max_abs());
    }
    vec![
        CheckRecord::at_most("geodesic.flow_rule", flow, ctx.tol(1e-10)),
        CheckRecord::at_most("geodesic.scaling", scale, ctx.tol(1e-12)),
        CheckRecord::at_most("geodesic.numeric_vs_closed_form", err, ctx.tol(1e-8)),
        CheckRecord::at_least("geodesic.rk_convergence_order", order, 3.5),
        CheckRecord::at_most("geodesic.left_velocity_speed", speed, ctx.tol(1e-12)),
        CheckRecord::at_most("geodesic.numeric_self_convergence", selfconv, ctx.tol(1e-8)),
    ]
}

/// Relative determinant error of the finite-difference Jacobian on a cubic grid.
pub fn determinant_grid_error(cs: &[f64], ab: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for &a in ab {
        for &b in ab {
            for &c in cs {
                let v = TangentVector3::new(a, b, c);
                let d = det_dptilde3(v);
                let fd = ptilde3_jacobian_fd(v, 1e-3).expect("finite").determinant();
                worst = worst.max((fd - d).abs() / (1.0 + d.abs()));
            }
        }
    }
    worst
}

/// Root in `rho^2` of the singular-locus criterion at `tau`, by bisection.
pub fn criterion_root(tau: f64) -> Option<f64> {
    bisect(|s| singular_criterion(s.sqrt(), tau), 0.0, 1e3)
}

fn ptilde_suite(ctx: &SuiteContext) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let axis = grid(-3.0, 3.0, 0.3).expect("valid grid");
    out.push(CheckRecord::at_most(
        "ptilde.det_consistency_grid",
        determinant_grid_error(&axis, &axis),
        ctx.tol(1e-6),
    ));
    let band = grid(-0.04, 0.04, 0.01).expect("valid grid");
    out.push(CheckRecord::at_most(
        "ptilde.det_consistency_series_band",
        determinant_grid_error(&band, &axis),
        ctx.tol(1e-5),
    ));

    let mut r = rng(4);
    let (mut polar, mut equi): (f64, f64) = (0.0, 0.0);
    for _ in 0..10_000 {
        let v = random_v3(&mut r, 5.0);
        polar = polar.max(ptilde3_from_phi(v).dist(ptilde3(v)));
    }
    for _ in 0..1000 {
        let v = random_v3(&mut r, 4.0);
        let th: f64 = r.random_range(0.0..TAU);
        let (s, c) = th.sin_cos();
        let rot = |p: TangentVector3| TangentVector3::new(c * p.a - s * p.b, s * p.a + c * p.b, p.c);
        let p = ptilde3(v);
        equi = equi.max(ptilde3(rot(v)).dist(rot(p)) / (1.0 + p.norm()));
        let m = ptilde3(TangentVector3::new(v.a, v.b, -v.c));
        equi = equi.max(m.dist(TangentVector3::new(p.a, p.b, -p.c)));
    }
    out.push(CheckRecord::at_most(
        "ptilde.polar_phi_consistency",
        polar,
        ctx.tol(1e-10),
    ));
    out.push(CheckRecord::at_most("ptilde.equivariance", equi, ctx.tol(1e-12)));

    let (mut on, mut off) = (0.0_f64, f64::INFINITY);
    for _ in 0..500 {
        let c: f64 = r.random_range(0.1..4.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let th: f64 = r.random_range(0.0..TAU);
        let rad = eval_scalar(ScalarFn::F1, c).sqrt();
        let v = TangentVector3::new(rad * th.cos(), rad * th.sin(), c);
        let mirror = |p: TangentVector3| TangentVector3::new(p.a, p.b, -p.c);
        on = on.max(ptilde3(v).dist(ptilde3(mirror(v))));
        let w = TangentVector3::new(v.a * 0.9, v.b * 0.9, c);
        off = off.min(ptilde3(w).dist(ptilde3(mirror(w))));
    }
    out.push(CheckRecord::at_most(
        "ptilde.mirror_collision_on_o1_boundary",
        on,
        ctx.tol(1e-12),
    ));
    out.push(CheckRecord::above(
        "ptilde.mirror_collision_absent_off_boundary",
        off,
        0.0,
    ));

    let worst_root = (1..=50)
        .map(|k| {
            let tau = 0.1 * k as f64;
            let f0 = eval_scalar(ScalarFn::F0, tau);
            criterion_root(tau).map_or(f64::INFINITY, |s| ((s - f0) / f0).abs())
        })
        .fold(0.0, f64::max);
    out.push(CheckRecord::at_most(
        "ptilde.singular_root_equals_f0",
        worst_root,
        ctx.tol(1e-8),
    ));

    let alg = &ctx.alg;
    let (mut fd_err, mut rank_ok) = (0.0_f64, true);
    for _ in 0..50 {
        let p = random_element(&mut r, alg, 2.0);
        let exact = dptilde_matrix(alg, &p).unwrap();
        let fd = jacobian_fd(
            |x| {
                ptilde(alg, &AlgebraElement::from_flat(x, alg.dim_v()))
                    .unwrap()
                    .to_vec()
            },
            &p.to_vec(),
            1e-3,
        )
        .unwrap();
        fd_err = fd_err.max((&fd - &exact).amax() / (1.0 + exact.amax()));

        let tau = p.z.norm();
        let rho = eval_scalar(ScalarFn::F0, tau).sqrt();
        let on = AlgebraElement::new(&p.v * (rho / p.v.norm()), p.z.clone());
        let inside = AlgebraElement::new(&on.v * 0.9, p.z.clone());
        rank_ok &= numeric_rank(&dptilde_matrix(alg, &on).unwrap(), 1e-9) == alg.dim() - 1;
        rank_ok &= numeric_rank(&dptilde_matrix(alg, &inside).unwrap(), 1e-9) == alg.dim();
    }
    out.push(CheckRecord::at_most(
        "ptilde.general_differential_vs_fd",
        fd_err,
        ctx.tol(1e-6),
    ));
    out.push(CheckRecord::flag(
        "ptilde.general_rank_drops_on_criterion_root",
        rank_ok,
    ));

    let h = h1();
    let mut reduce: f64 = 0.0;
    for _ in 0..1000 {
        let v = random_v3(&mut r, 4.0);
        let g = ptilde(&h, &v.to_element()).unwrap();
        reduce = reduce.max(TangentVector3::from_element(&g).dist(ptilde3(v)));
    }
    out.push(CheckRecord::at_most("ptilde.general_reduces_to_three_dim", reduce, 0.0));
    out
}

fn domains(ctx: &SuiteContext) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let inc = inclusion_check(-20.0, 20.0, 1e-3).expect("valid grid");
    out.push(
        CheckRecord::at_most("domains.inclusion_chain", inc.violations.len() as f64, 0.0).with_detail(format!(
            "min relative gaps {:.3e}, {:.3e}",
            inc.min_rel_gap_21, inc.min_rel_gap_10
        )),
    );
    let mono = monotonicity_check(1e-3, 20.0, 1e-3).expect("valid grid");
    out.push(CheckRecord::above(
        "domains.monotonicity_expression_positive",
        mono.min_expression,
        0.0,
    ));
    out.push(CheckRecord::above(
        "domains.level_bound_increasing",
        mono.min_derivative,
        0.0,
    ));

    let low = [0.5, 1.0, 1.5, 3f64.sqrt()];
    let high = [2.0, 2.5, 3.0];
    let low_ok = profile_monotonicity(&low, 1e-3, 10.0, 1e-3)
        .expect("valid grid")
        .iter()
        .all(|p| p.increasing);
    out.push(CheckRecord::flag("domains.profile_increasing_up_to_sqrt3", low_ok));
    let dips = profile_monotonicity(&high, 1e-3, 10.0, 1e-3).expect("valid grid");
    out.push(CheckRecord::skip(
        "domains.profile_dips_above_sqrt3",
        dips.iter().filter(|p| !p.increasing).count() as f64,
        "levels A > sqrt 3 start with slope 1 - A^2/3 < 0; reported only",
    ));

    let cfg = ScanConfig::default();
    for d in [RadialDomain::O1, RadialDomain::O2] {
        let rep = injectivity_scan(d, &cfg);
        out.push(CheckRecord::at_most(
            &format!("domains.scan_{}_collisions", d.name().to_lowercase()),
            rep.collisions.len() as f64,
            0.0,
        ));
    }
    let o0 = injectivity_scan(RadialDomain::O0, &cfg);
    let a1 = eval_scalar(ScalarFn::F1, 1.0).sqrt();
    let witness = o0
        .collisions
        .iter()
        .find(|c| c.first.c == -1.0 && c.second.c == 1.0 && (c.first.a - a1).abs() < 1e-9);
    out.push(match witness {
        Some(w) => {
            CheckRecord::at_most("domains.scan_o0_mirror_witness", w.image_gap, ctx.tol(1e-12)).with_detail(format!(
                "({:.6}, 0, +-1) -> ({:.6}, 0, {:.1e}); {} collisions in O0",
                w.first.a,
                w.image.a,
                w.image.c,
                o0.collisions.len()
            ))
        }
        None => CheckRecord::at_most("domains.scan_o0_mirror_witness", f64::NAN, ctx.tol(1e-12)),
    });

    let t_star = o1_crossing(2.0).unwrap_or(f64::NAN);
    out.push(CheckRecord::flag(
        "domains.o1_crossing_of_level_two",
        t_star > 1.60 && t_star < 1.61,
    ));
    let two = preimage_solve(TangentVector3::new(2.0, 0.0, 0.0), &[]);
    let star = two
        .iter()
        .find(|s| s.point.c > 1.60 && s.point.c < 1.61 && s.membership[0]);
    out.push(CheckRecord::at_most(
        "domains.preimage_of_two",
        star.map_or(f64::NAN, |s| s.residual),
        ctx.tol(1e-10),
    ));
    let s3 = preimage_solve(TangentVector3::new(3f64.sqrt(), 0.0, 0.0), &[]);
    let worst_det = if s3.is_empty() {
        f64::NAN
    } else {
        s3.iter().map(|s| s.det.abs()).fold(0.0, f64::max)
    };
    out.push(CheckRecord::at_most(
        "domains.preimage_of_sqrt3_singular",
        worst_det,
        ctx.tol(1e-6),
    ));
    let missing = [(1.0, 0.0), (1.0, 5.0), (2.0, 5.0)]
        .iter()
        .filter(|&&(a, c)| preimage_solve(TangentVector3::new(a, 0.0, c), &[]).is_empty())
        .count();
    out.push(CheckRecord::at_most("domains.preimages_exist", missing as f64, 0.0));

    let o2 = convexity_check(ImageRegion::Cylinder, 20_000, 5);
    out.push(CheckRecord::flag("domains.image_o2_convex", o2.convex));
    for (d, region) in [
        (RadialDomain::O0, ImageRegion::PuncturedByCircle),
        (RadialDomain::O1, ImageRegion::SlitOutsideDisk),
    ] {
        let rep = convexity_check(region, 2000, 6);
        let rec = CheckRecord::flag(
            &format!("domains.image_{}_not_convex", d.name().to_lowercase()),
            !rep.convex && rep.witness.is_some(),
        );
        out.push(match rep.witness {
            Some(w) => rec.with_detail(format!(
                "segment meets ({:.4}, {:.4}, {:.1e})",
                w.excluded.a, w.excluded.b, w.excluded.c
            )),
            None => rec,
        });
    }
    out
}

fn embedding(ctx: &SuiteContext) -> Vec<CheckRecord> {
    let alg = &ctx.alg;
    if alg.dim_v() < 2 {
        return vec![CheckRecord::skip("embedding.frame", f64::NAN, "algebra has dim v < 2")];
    }
    let mut r = rng(7);
    let v1 = DVector::from_iterator(alg.dim_v(), (0..alg.dim_v()).map(|_| r.random_range(-1.0..1.0)));
    let yb = DVector::from_iterator(alg.dim_z(), (0..alg.dim_z()).map(|_| r.random_range(-1.0..1.0)));
    let frame = match embed_frame(alg, &v1, &yb) {
        Ok(f) => f,
        Err(e) => {
            return vec![CheckRecord::flag("embedding.frame", false).with_detail(e.to_string())];
        }
    };
    let samples = boundary_samples(1000, 5.0, 8);
    let rep = boundary_embed_check(alg, &frame, &samples).expect("dims match");
    let mut comm: f64 = 0.0;
    for _ in 0..1000 {
        let v = random_v3(&mut r, 2.0);
        comm = comm.max(htube_core::embedding::slice_commutativity(alg, &frame, v).unwrap());
    }
    let interior = samples
        .iter()
        .map(|v| {
            let x = frame.di_map(TangentVector3::new(0.9 * v.a, 0.9 * v.b, v.c));
            singular_criterion(x.v.norm(), x.z.norm())
        })
        .fold(f64::INFINITY, f64::min);
    vec![
        CheckRecord::at_most("embedding.frame", rep.frame_residual, ctx.tol(1e-12)),
        CheckRecord::at_most("embedding.boundary_criterion", rep.max_abs_criterion, ctx.tol(1e-9)),
        CheckRecord::at_most(
            "embedding.slice_commutativity",
            comm.max(rep.max_commutativity),
            ctx.tol(1e-12),
        ),
        CheckRecord::above("embedding.interior_criterion_positive", interior, 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass_on_builtins() {
        for (name, alg) in [
            ("quaternionic", HTypeAlgebra::quaternionic()),
            ("heisenberg2", HTypeAlgebra::heisenberg(2).unwrap()),
        ] {
            let ctx = SuiteContext {
                alg,
                alg_name: name.into(),
                tol_scale: 1.0,
            };
            for s in [Suite::Kernel, Suite::Algebra, Suite::Group, Suite::Embedding] {
                let r = run_suite(s, &ctx);
                assert!(r.passed(), "{}", r.summary());
            }
        }
    }

    #[test]
    fn criterion_root_matches_f0() {
        for tau in [0.1, 1.0, 5.0] {
            let s = criterion_root(tau).unwrap();
            let f0 = eval_scalar(ScalarFn::F0, tau);
            assert!(((s - f0) / f0).abs() < 1e-8);
        }
    }
}
