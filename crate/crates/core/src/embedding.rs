//! The three-dimensional Heisenberg subalgebra `span{V1, V2, Yb}` inside an
//! H-type algebra, with `V2 = J_Yb V1`, and the slice-level compatibility of
//! the two `P~` maps along it.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, HTypeAlgebra};
use crate::error::{invalid, Result};
use crate::geodesic::TangentVector3;
use crate::kernel::{eval_scalar, ScalarFn};
use crate::ptilde::{ptilde, ptilde3, singular_criterion};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingFrame {
    pub v1: DVector<f64>,
    pub v2: DVector<f64>,
    pub yb: DVector<f64>,
}

/// Normalizes `v1` and `yb` and completes them with `V2 = J_Yb V1`.
pub fn embed_frame(alg: &HTypeAlgebra, v1: &DVector<f64>, yb: &DVector<f64>) -> Result<EmbeddingFrame> {
    if v1.len() != alg.dim_v() || yb.len() != alg.dim_z() {
        return invalid(format!(
            "frame vectors have lengths ({}, {}), algebra needs ({}, {})",
            v1.len(),
            yb.len(),
            alg.dim_v(),
            alg.dim_z()
        ));
    }
    let (nv, ny) = (v1.norm(), yb.norm());
    if !(nv > 0.0 && nv.is_finite() && ny > 0.0 && ny.is_finite()) {
        return invalid("frame vectors must be non-zero and finite");
    }
    let v1 = v1 / nv;
    let yb = yb / ny;
    let v2 = alg.j_apply(&yb, &v1)?;
    Ok(EmbeddingFrame { v1, v2, yb })
}

impl EmbeddingFrame {
    /// Largest deviation from orthonormality of `V1, V2, Yb` and from
    /// `[V1, V2] = Yb`.
    pub fn invariant_residual(&self, alg: &HTypeAlgebra) -> f64 {
        let br = alg.bracket_vv(&self.v1, &self.v2);
        [
            self.v1.dot(&self.v2).abs(),
            (self.v1.norm() - 1.0).abs(),
            (self.v2.norm() - 1.0).abs(),
            (self.yb.norm() - 1.0).abs(),
            (br - &self.yb).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `a V1 + b V2 + c Yb`.
    pub fn di_map(&self, p: TangentVector3) -> AlgebraElement {
        AlgebraElement::new(&self.v1 * p.a + &self.v2 * p.b, &self.yb * p.c)
    }
}

/// Max-norm of `P~_G(DI(v)) - DI(P~_3(v))`.
pub fn slice_commutativity(alg: &HTypeAlgebra, frame: &EmbeddingFrame, v: TangentVector3) -> Result<f64> {
    let lhs = ptilde(alg, &frame.di_map(v))?;
    let rhs = frame.di_map(ptilde3(v));
    Ok((&lhs - &rhs).max_abs())
}

/// `n` points `(sqrt f0(c) cos th, sqrt f0(c) sin th, c)` on the boundary of
/// `O0` with `c` uniform in `[-c_max, c_max]`.
pub fn boundary_samples(n: usize, c_max: f64, seed: u64) -> Vec<TangentVector3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let c = rng.random_range(-c_max..=c_max);
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            let r = eval_scalar(ScalarFn::F0, c).sqrt();
            TangentVector3::new(r * th.cos(), r * th.sin(), c)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryEmbedReport {
    pub samples: usize,
    pub frame_residual: f64,
    /// Largest `|criterion|` at the embedded boundary points.
    pub max_abs_criterion: f64,
    /// Largest commutativity gap relative to `1 + |P~_3(v)|`; boundary images
    /// reach several hundred for `|c|` near 5.
    pub max_commutativity: f64,
}

impl BoundaryEmbedReport {
    pub fn passed(&self, frame_tol: f64, criterion_tol: f64, commute_tol: f64) -> bool {
        self.frame_residual <= frame_tol
            && self.max_abs_criterion <= criterion_tol
            && self.max_commutativity <= commute_tol
    }
}

/// Evaluates the singular-locus criterion at `DI(v)` for boundary samples `v`
/// (norms read off the embedded element) and the slice commutativity there.
pub fn boundary_embed_check(
    alg: &HTypeAlgebra,
    frame: &EmbeddingFrame,
    samples: &[TangentVector3],
) -> Result<BoundaryEmbedReport> {
    let mut crit: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for &v in samples {
        let x = frame.di_map(v);
        crit = crit.max(singular_criterion(x.v.norm(), x.z.norm()).abs());
        comm = comm.max(slice_commutativity(alg, frame, v)? / (1.0 + ptilde3(v).norm()));
    }
    Ok(BoundaryEmbedReport {
        samples: samples.len(),
        frame_residual: frame.invariant_residual(alg),
        max_abs_criterion: crit,
        max_commutativity: comm,
    })
}
