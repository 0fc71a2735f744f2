//! Cross-module properties through the public API.

use htube_core::algebra::{AlgebraElement, HTypeAlgebra};
use htube_core::domains::{membership, preimage_solve, RadialDomain};
use htube_core::embedding::{embed_frame, slice_commutativity};
use htube_core::geodesic::{phi3, TangentVector3};
use htube_core::group::{polar_compose, polar_decompose, ComplexAlgebraElement};
use htube_core::kernel::{eval_scalar, ScalarFn};
use htube_core::ptilde::{det_dptilde3, ptilde, ptilde3};
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

fn v3() -> impl Strategy<Value = TangentVector3> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c)| TangentVector3::new(a, b, c))
}

/// Points of `d` at radius fraction `s < 1` of the boundary.
fn inside(d: RadialDomain) -> impl Strategy<Value = TangentVector3> {
    (0.0..0.999f64, 0.0..std::f64::consts::TAU, -4.0..4.0f64).prop_map(move |(s, th, c)| {
        let r = s * d.boundary_radius(c);
        TangentVector3::new(r * th.cos(), r * th.sin(), c)
    })
}

proptest! {
    #[test]
    fn o2_points_have_invertible_differential(v in inside(RadialDomain::O2)) {
        prop_assert!(det_dptilde3(v) > 0.0);
    }

    #[test]
    fn nested_membership(v in v3()) {
        let [o0, o1, o2] = membership(v);
        prop_assert!(!o2 || o1);
        prop_assert!(!o1 || o0);
    }

    #[test]
    fn o1_points_are_their_own_unique_preimage_in_o1(v in inside(RadialDomain::O1)) {
        let target = ptilde3(v);
        let inside: Vec<_> = preimage_solve(target, &[v])
            .into_iter()
            .filter(|s| s.membership[1])
            .collect();
        prop_assert_eq!(inside.len(), 1);
        prop_assert!(inside[0].point.dist(v) < 1e-6 * (1.0 + v.norm()));
    }

    #[test]
    fn polar_round_trip_of_complex_geodesics(v in v3(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let h1 = HTypeAlgebra::heisenberg(1).unwrap();
        let g: ComplexAlgebraElement = phi3(Complex64::new(re, im), v);
        let (h, xi) = polar_decompose(&h1, &g).unwrap();
        let back = polar_compose(&h1, &h, &xi).unwrap();
        prop_assert!((&back - &g).max_abs() <= 1e-12 * (1.0 + g.max_abs()));
    }

    #[test]
    fn quaternionic_slice_commutes(v in v3(), a in prop::array::uniform4(-1.0..1.0f64), y in prop::array::uniform3(-1.0..1.0f64)) {
        let q = HTypeAlgebra::quaternionic();
        let (v1, yb) = (DVector::from_row_slice(&a), DVector::from_row_slice(&y));
        prop_assume!(v1.norm() > 0.1 && yb.norm() > 0.1);
        let frame = embed_frame(&q, &v1, &yb).unwrap();
        prop_assert!(slice_commutativity(&q, &frame, v).unwrap() <= 1e-12 * (1.0 + ptilde3(v).norm()));
    }

    #[test]
    fn ptilde_on_pure_vertical_and_horizontal_vectors(x in -3.0..3.0f64, s in -3.0..3.0f64) {
        let q = HTypeAlgebra::quaternionic();
        let vert = AlgebraElement::from_flat(&[0.0, 0.0, 0.0, 0.0, x, 0.0, 0.0], 4);
        prop_assert_eq!(ptilde(&q, &vert).unwrap(), vert.clone());
        let horiz = AlgebraElement::from_flat(&[s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 4);
        prop_assert!((&ptilde(&q, &horiz).unwrap() - &horiz).max_abs() == 0.0);
    }
}

#[test]
fn boundary_radii_at_origin() {
    for d in [RadialDomain::O0, RadialDomain::O1, RadialDomain::O2] {
        assert_eq!(d.boundary_radius(0.0), 3f64.sqrt());
    }
    assert!((eval_scalar(ScalarFn::F1, 1.0) - 2.4587235516374669552).abs() < 1e-14);
}
