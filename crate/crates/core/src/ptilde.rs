//! The slice map `P~ : V + Y -> l(|Y|) V + (1 + |V|^2 m(|Y|)) Y`, its
//! differential, and the locus where the differential drops rank.

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, HTypeAlgebra};
use crate::error::{Error, Result};
use crate::geodesic::{phi3, TangentVector3};
use crate::group::polar_decompose;
use crate::kernel::{eval_scalar, ScalarFn};

/// Below this, `l'(t)/t` and `m'(t)/t` are replaced by their values at 0.
const RATIO_FLOOR: f64 = 1e-150;

/// `l'(t)/t`, even, equal to `1/3` at the origin.
pub fn l_prime_over_t(t: f64) -> f64 {
    if t.abs() < RATIO_FLOOR {
        1.0 / 3.0
    } else {
        eval_scalar(ScalarFn::LPrime, t) / t
    }
}

/// `m'(t)/t`, even, equal to `-2/15` at the origin.
pub fn m_prime_over_t(t: f64) -> f64 {
    if t.abs() < RATIO_FLOOR {
        -2.0 / 15.0
    } else {
        eval_scalar(ScalarFn::MPrime, t) / t
    }
}

/// General slice map on an H-type algebra.
pub fn ptilde(alg: &HTypeAlgebra, p: &AlgebraElement) -> Result<AlgebraElement> {
    alg.check(p)?;
    let tau = p.z.norm();
    let l = eval_scalar(ScalarFn::L, tau);
    let m = eval_scalar(ScalarFn::M, tau);
    let rho_sq = p.v.norm_squared();
    Ok(AlgebraElement::new(&p.v * l, &p.z * (1.0 + rho_sq * m)))
}

/// The three-dimensional case `(a l(c), b l(c), c (1 + (a^2 + b^2) m(c)))`.
pub fn ptilde3(v: TangentVector3) -> TangentVector3 {
    let l = eval_scalar(ScalarFn::L, v.c);
    let m = eval_scalar(ScalarFn::M, v.c);
    TangentVector3::new(v.a * l, v.b * l, v.c * (1.0 + v.radius_sq() * m))
}

/// `P~(v)` obtained instead as the `xi`-part of the polar decomposition of the
/// complexified geodesic at time `i`.
pub fn ptilde3_from_phi(v: TangentVector3) -> TangentVector3 {
    let alg = HTypeAlgebra::heisenberg(1).expect("n = 1 is valid");
    let (_, xi) = polar_decompose(&alg, &phi3(Complex64::i(), v)).expect("dimensions match");
    TangentVector3::from_element(&xi)
}

/// Directional derivative `(D P~)_p (w)`; at `Y = 0` the analytic limit.
pub fn dptilde(alg: &HTypeAlgebra, p: &AlgebraElement, w: &AlgebraElement) -> Result<AlgebraElement> {
    alg.check(p)?;
    alg.check(w)?;
    let tau = p.z.norm();
    let l = eval_scalar(ScalarFn::L, tau);
    let m = eval_scalar(ScalarFn::M, tau);
    let yx = p.z.dot(&w.z);
    let vu = p.v.dot(&w.v);
    let rho_sq = p.v.norm_squared();
    let dv = &p.v * (l_prime_over_t(tau) * yx) + &w.v * l;
    let dz = &p.z * (2.0 * vu * m + rho_sq * m_prime_over_t(tau) * yx) + &w.z * (1.0 + rho_sq * m);
    Ok(AlgebraElement::new(dv, dz))
}

/// Matrix of `(D P~)_p` in the coordinates `(v, z)`.
pub fn dptilde_matrix(alg: &HTypeAlgebra, p: &AlgebraElement) -> Result<DMatrix<f64>> {
    alg.check(p)?;
    let n = alg.dim();
    let mut jac = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for k in 0..n {
        e[k] = 1.0;
        let col = dptilde(alg, p, &AlgebraElement::from_flat(&e, alg.dim_v()))?;
        jac.set_column(k, &DVector::from_vec(col.to_vec()));
        e[k] = 0.0;
    }
    Ok(jac)
}

/// Differential of [`ptilde3`] with columns `d/da, d/db, d/dc`.
pub fn dptilde3(v: TangentVector3) -> Matrix3<f64> {
    let alg = HTypeAlgebra::heisenberg(1).expect("n = 1 is valid");
    let m = dptilde_matrix(&alg, &v.to_element()).expect("dimensions match");
    Matrix3::from_iterator(m.iter().copied())
}

/// `(c cosh c - sinh c) / c^3`, even, `1/3` at the origin.
fn det_gap(c: f64) -> f64 {
    l_prime_over_t(c)
}

/// `det (D P~)_{(a,b,c)} = l(c) (l(c) - (a^2 + b^2)(c cosh c - sinh c)/c^3)`.
pub fn det_dptilde3(v: TangentVector3) -> f64 {
    let l = eval_scalar(ScalarFn::L, v.c);
    l * (l - v.radius_sq() * det_gap(v.c))
}

/// `1 + rho^2 m(tau) - rho^2 tau (2 l'(tau) m(tau) / l(tau) - m'(tau))` for
/// `rho = |V|`, `tau = |Y|`; it vanishes exactly where `D P~` is singular.
pub fn singular_criterion(rho: f64, tau: f64) -> f64 {
    let tau = tau.abs();
    let l = eval_scalar(ScalarFn::L, tau);
    let m = eval_scalar(ScalarFn::M, tau);
    let lp = eval_scalar(ScalarFn::LPrime, tau);
    let mp = eval_scalar(ScalarFn::MPrime, tau);
    let rho_sq = rho * rho;
    1.0 + rho_sq * m - rho_sq * tau * (2.0 * lp * m / l - mp)
}

/// Number of singular values of `a` above `tol * sigma_max`.
pub fn numeric_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    let sv = a.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// Central-difference Jacobian of `f` at `p` refined by one Richardson step
/// (`h` and `h/2`), so the truncation error is `O(h^4)`.
pub fn jacobian_fd<F>(f: F, p: &[f64], h: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let f0 = f(p);
    let (rows, cols) = (f0.len(), p.len());
    let mut x = p.to_vec();
    let mut central = |k: usize, step: f64| -> Result<Vec<f64>> {
        x[k] = p[k] + step;
        let fp = f(&x);
        x[k] = p[k] - step;
        let fm = f(&x);
        x[k] = p[k];
        if fp.len() != rows || fm.len() != rows {
            return Err(Error::InvalidArgument("map changes output dimension".into()));
        }
        let d: Vec<f64> = fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * step)).collect();
        if d.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow(format!("non-finite difference along axis {k}")));
        }
        Ok(d)
    };
    let mut jac = DMatrix::zeros(rows, cols);
    for k in 0..cols {
        let coarse = central(k, h)?;
        let fine = central(k, h / 2.0)?;
        for r in 0..rows {
            jac[(r, k)] = (4.0 * fine[r] - coarse[r]) / 3.0;
        }
    }
    Ok(jac)
}

/// [`jacobian_fd`] applied to [`ptilde3`].
pub fn ptilde3_jacobian_fd(v: TangentVector3, h: f64) -> Result<Matrix3<f64>> {
    let m = jacobian_fd(
        |x| ptilde3(TangentVector3::new(x[0], x[1], x[2])).to_array().to_vec(),
        &v.to_array(),
        h,
    )?;
    Ok(Matrix3::from_iterator(m.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PTILDE_101: [f64; 3] = [1.1752011936438014569, 0.0, 0.59328489803824530808];
    const DET_101: f64 = 0.94876548716012207573;

    fn f0(c: f64) -> f64 {
        eval_scalar(ScalarFn::F0, c)
    }

    #[test]
    fn ratio_limits_match_series() {
        let l = ScalarFn::L.maclaurin(4).to_f64();
        let m = ScalarFn::M.maclaurin(4).to_f64();
        assert_eq!(l_prime_over_t(0.0), 2.0 * l.coeff(2));
        assert_eq!(m_prime_over_t(0.0), 2.0 * m.coeff(2));
        assert!((l_prime_over_t(1e-140) - 1.0 / 3.0).abs() < 1e-16);
        assert!((m_prime_over_t(-1e-3) + 2.0 / 15.0).abs() < 1e-6);
    }

    #[test]
    fn ptilde3_examples() {
        assert_eq!(ptilde3(TangentVector3::default()), TangentVector3::default());
        assert_eq!(
            ptilde3(TangentVector3::new(2.5, 0.0, 0.0)),
            TangentVector3::new(2.5, 0.0, 0.0)
        );
        let got = ptilde3(TangentVector3::new(1.0, 0.0, 1.0)).to_array();
        for k in 0..3 {
            assert!((got[k] - PTILDE_101[k]).abs() < 1e-15);
        }
        let via_phi = ptilde3_from_phi(TangentVector3::new(1.0, 0.0, 1.0)).to_array();
        for k in 0..3 {
            assert!((via_phi[k] - PTILDE_101[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn general_map_reduces_to_three_dim_formula() {
        let alg = HTypeAlgebra::heisenberg(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let v = TangentVector3::new(
                rng.random_range(-4.0..4.0),
                rng.random_range(-4.0..4.0),
                rng.random_range(-4.0..4.0),
            );
            assert_eq!(
                TangentVector3::from_element(&ptilde(&alg, &v.to_element()).unwrap()),
                ptilde3(v)
            );
            let (a, b, c) = (v.a, v.b, v.c);
            // the naive closed forms lose accuracy near c = 0
            if c.abs() < 0.5 {
                continue;
            }
            let l = c.sinh() / c;
            let m = (c - c.sinh() * c.cosh()) / (2.0 * c.powi(3));
            let want = [a * l, b * l, c * (1.0 + (a * a + b * b) * m)];
            // the third component cancels near 1 + rho^2 m = 0, so compare on
            // the scale of its largest term
            let scale = [want[0].abs(), want[1].abs(), (c * (a * a + b * b) * m).abs()];
            let got = ptilde(&alg, &v.to_element()).unwrap().to_vec();
            for k in 0..3 {
                assert!((got[k] - want[k]).abs() <= 1e-13 * (1.0 + scale[k]), "{got:?} {want:?}");
            }
        }
    }

    #[test]
    fn dptilde_is_identity_at_origin() {
        let q = HTypeAlgebra::quaternionic();
        let w = q.element(&[0.3, 1.0, -2.0, 0.5], &[4.0, -1.0, 0.25]).unwrap();
        assert_eq!(dptilde(&q, &q.zero(), &w).unwrap(), w);
    }

    #[test]
    fn dptilde_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for alg in [HTypeAlgebra::heisenberg(2).unwrap(), HTypeAlgebra::quaternionic()] {
            let n = alg.dim();
            for _ in 0..40 {
                let p: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
                let pe = AlgebraElement::from_flat(&p, alg.dim_v());
                let fd = jacobian_fd(
                    |x| {
                        ptilde(&alg, &AlgebraElement::from_flat(x, alg.dim_v()))
                            .unwrap()
                            .to_vec()
                    },
                    &p,
                    1e-3,
                )
                .unwrap();
                let exact = dptilde_matrix(&alg, &pe).unwrap();
                let scale = 1.0 + exact.amax();
                assert!((&fd - &exact).amax() < 1e-6 * scale, "{fd} vs {exact}");
            }
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_dptilde3(TangentVector3::default()), 1.0);
        let d = det_dptilde3(TangentVector3::new(1.0, 0.0, 1.0));
        assert!((d - DET_101).abs() < 1e-15);
        let s1 = 1f64.sinh();
        assert!((d - s1 * (2.0 * s1 - 1f64.cosh())).abs() < 1e-15);
        for c in [0.5, 1.0, 2.0] {
            assert!(det_dptilde3(TangentVector3::new(f0(c).sqrt(), 0.0, c)).abs() < 1e-14);
        }
        let assembled = dptilde3(TangentVector3::new(1.0, 0.0, 1.0)).determinant();
        assert!((assembled - DET_101).abs() < 1e-14);
        let fd = ptilde3_jacobian_fd(TangentVector3::new(1.0, 0.0, 1.0), 1e-3)
            .unwrap()
            .determinant();
        assert!((fd - DET_101).abs() < 1e-7);
    }

    #[test]
    fn determinant_on_series_band() {
        for c in [-0.04, -1e-6, 0.0, 1e-9, 0.03] {
            let v = TangentVector3::new(1.2, -0.7, c);
            let fd = ptilde3_jacobian_fd(v, 1e-3).unwrap().determinant();
            let d = det_dptilde3(v);
            assert!((fd - d).abs() <= 1e-8 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn criterion_examples() {
        for tau in [0.0, 0.5, 3.0] {
            assert_eq!(singular_criterion(0.0, tau), 1.0);
        }
        assert!((singular_criterion(2.0, 0.0) - (1.0 - 4.0 / 3.0)).abs() < 1e-15);
        assert!(singular_criterion(3f64.sqrt(), 0.0).abs() < 1e-15);
        for tau in [0.1, 1.0, 5.0] {
            assert!(singular_criterion(f0(tau).sqrt(), tau).abs() < 1e-12);
        }
        assert_eq!(singular_criterion(1.3, -0.7), singular_criterion(1.3, 0.7));
    }

    #[test]
    fn criterion_agrees_with_rank_in_quaternionic_group() {
        let q = HTypeAlgebra::quaternionic();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let y: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let vdir: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let tau = DVector::from_row_slice(&y).norm();
            let vnorm = DVector::from_row_slice(&vdir).norm();
            let rho = f0(tau).sqrt();
            let v: Vec<f64> = vdir.iter().map(|x| x * rho / vnorm).collect();
            let p = q.element(&v, &y).unwrap();
            let jac = dptilde_matrix(&q, &p).unwrap();
            assert_eq!(numeric_rank(&jac, 1e-9), 6);
            let inside = q.element(&v.iter().map(|x| 0.9 * x).collect::<Vec<_>>(), &y).unwrap();
            assert_eq!(numeric_rank(&dptilde_matrix(&q, &inside).unwrap(), 1e-9), 7);
        }
    }

    #[test]
    fn fd_oracle_basics() {
        let c = jacobian_fd(|_| vec![1.0, 2.0], &[0.3, 0.4, 0.5], 1e-3).unwrap();
        assert_eq!(c, DMatrix::zeros(2, 3));
        let id = jacobian_fd(|x| x.to_vec(), &[1.0, -2.0, 3.0], 1e-3).unwrap();
        assert!((id - DMatrix::identity(3, 3)).amax() < 1e-12);
        assert!(matches!(
            jacobian_fd(|x| x.to_vec(), &[1.0], 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            jacobian_fd(|x| vec![(x[0] * 1e3).exp()], &[800.0], 1e-3),
            Err(Error::NumericOverflow(_))
        ));
    }

    #[test]
    fn mirror_collision_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let c: f64 = rng.random_range(0.2..4.0);
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let on = eval_scalar(ScalarFn::F1, c).sqrt();
            let v = TangentVector3::new(on * theta.cos(), on * theta.sin(), c);
            let mirrored = TangentVector3::new(v.a, v.b, -c);
            assert!(ptilde3(v).dist(ptilde3(mirrored)) < 1e-13);
            let off = TangentVector3::new(v.a * 0.95, v.b * 0.95, c);
            let off_m = TangentVector3::new(off.a, off.b, -c);
            assert!(ptilde3(off).dist(ptilde3(off_m)) > 1e-3);
        }
    }

    fn rotate(v: TangentVector3, t: f64) -> TangentVector3 {
        let (s, c) = t.sin_cos();
        TangentVector3::new(c * v.a - s * v.b, s * v.a + c * v.b, v.c)
    }

    proptest! {
        #[test]
        fn equivariance(a in -4.0f64..4.0, b in -4.0f64..4.0, c in -4.0f64..4.0, t in 0.0f64..6.3) {
            let v = TangentVector3::new(a, b, c);
            let lhs = ptilde3(rotate(v, t));
            let rhs = rotate(ptilde3(v), t);
            prop_assert!(lhs.dist(rhs) <= 1e-12 * (1.0 + rhs.norm()));
            let sv = ptilde3(TangentVector3::new(a, b, -c));
            let p = ptilde3(v);
            prop_assert_eq!(sv, TangentVector3::new(p.a, p.b, -p.c));
        }

        #[test]
        fn polar_phi_consistency(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
            let v = TangentVector3::new(a, b, c);
            let want = ptilde3(v);
            prop_assert!(ptilde3_from_phi(v).dist(want) <= 1e-10 * (1.0 + want.norm()));
        }
    }
}
