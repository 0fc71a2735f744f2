//! Generalized Heisenberg (H-type) Lie algebras `g = v (+) z`.
//!
//! The bracket is encoded by a family of skew maps `J_Z : v -> v`, one per
//! orthonormal basis vector of the center, through `<J_Z V, W> = <Z, [V, W]>`.
//! With `J = [[0, -1], [1, 0]]` this gives `[e1, e2] = e3` on the three-dimensional
//! Heisenberg algebra.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Number of random unit center vectors probed by [`HTypeAlgebra::validate`].
const RANDOM_PROBES: usize = 32;

/// An element `V + Y` of `v (+) z`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub v: DVector<f64>,
    pub z: DVector<f64>,
}

impl AlgebraElement {
    pub fn new(v: DVector<f64>, z: DVector<f64>) -> Self {
        Self { v, z }
    }

    pub fn from_slices(v: &[f64], z: &[f64]) -> Self {
        Self::new(DVector::from_column_slice(v), DVector::from_column_slice(z))
    }

    pub fn zeros(dim_v: usize, dim_z: usize) -> Self {
        Self::new(DVector::zeros(dim_v), DVector::zeros(dim_z))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.v.len(), self.z.len())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(&self.v * s, &self.z * s)
    }

    pub fn norm(&self) -> f64 {
        (self.v.norm_squared() + self.z.norm_squared()).sqrt()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.v.amax().max(self.z.amax())
    }

    pub fn is_finite(&self) -> bool {
        self.v.iter().chain(self.z.iter()).all(|x| x.is_finite())
    }

    /// Coordinates in the order `v` then `z`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.v.iter().chain(self.z.iter()).copied().collect()
    }

    pub fn from_flat(flat: &[f64], dim_v: usize) -> Self {
        Self::from_slices(&flat[..dim_v], &flat[dim_v..])
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        AlgebraElement::new(&self.v + &rhs.v, &self.z + &rhs.z)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        AlgebraElement::new(&self.v - &rhs.v, &self.z - &rhs.z)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::new(-&self.v, -&self.z)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |x: &DVector<f64>| x.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(", ");
        write!(f, "({} | {})", join(&self.v), join(&self.z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinAlgebra {
    /// `2n + 1`-dimensional Heisenberg algebra.
    Heisenberg(usize),
    /// Left multiplication by `i, j, k` on the quaternions.
    Quaternionic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HTypeAlgebra {
    dim_v: usize,
    dim_z: usize,
    j_maps: Vec<DMatrix<f64>>,
}

impl HTypeAlgebra {
    pub fn builtin(kind: BuiltinAlgebra) -> Result<Self> {
        match kind {
            BuiltinAlgebra::Heisenberg(n) => Self::heisenberg(n),
            BuiltinAlgebra::Quaternionic => Ok(Self::quaternionic()),
        }
    }

    /// Block-diagonal standard symplectic map on `R^{2n}`, one-dimensional center.
    pub fn heisenberg(n: usize) -> Result<Self> {
        if n < 1 {
            return invalid("heisenberg(n) needs n >= 1");
        }
        let mut j = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            j[(2 * k + 1, 2 * k)] = 1.0;
            j[(2 * k, 2 * k + 1)] = -1.0;
        }
        Ok(Self {
            dim_v: 2 * n,
            dim_z: 1,
            j_maps: vec![j],
        })
    }

    /// `v = H = R^4` with basis `1, i, j, k`; `J` are left multiplications.
    pub fn quaternionic() -> Self {
        Self {
            dim_v: 4,
            dim_z: 3,
            j_maps: quaternion_units().to_vec(),
        }
    }

    /// Validates user data with the default tolerance.
    pub fn custom(dim_v: usize, dim_z: usize, j_maps: Vec<DMatrix<f64>>) -> Result<Self> {
        Self::custom_with_tolerance(dim_v, dim_z, j_maps, DEFAULT_TOLERANCE)
    }

    pub fn custom_with_tolerance(dim_v: usize, dim_z: usize, j_maps: Vec<DMatrix<f64>>, tol: f64) -> Result<Self> {
        if dim_v < 2 || !dim_v.is_multiple_of(2) {
            return invalid(format!("dim_v must be even and >= 2, got {dim_v}"));
        }
        if dim_z < 1 {
            return invalid("dim_z must be >= 1");
        }
        if j_maps.len() != dim_z {
            return invalid(format!("expected {dim_z} J-maps, got {}", j_maps.len()));
        }
        if let Some(bad) = j_maps.iter().find(|j| j.shape() != (dim_v, dim_v)) {
            return invalid(format!(
                "J-map has shape {:?}, expected ({dim_v}, {dim_v})",
                bad.shape()
            ));
        }
        let alg = Self { dim_v, dim_z, j_maps };
        alg.validate(tol)?;
        Ok(alg)
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_z(&self) -> usize {
        self.dim_z
    }

    pub fn dim(&self) -> usize {
        self.dim_v + self.dim_z
    }

    pub fn j_maps(&self) -> &[DMatrix<f64>] {
        &self.j_maps
    }

    /// Checks skewness, `J_i^2 = -I`, pairwise anticommutation, and then
    /// `J_Z^2 = -|Z|^2 I` on seeded random unit vectors `Z`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let id = DMatrix::<f64>::identity(self.dim_v, self.dim_v);
        let basis = |i: usize| {
            let mut z = vec![0.0; self.dim_z];
            z[i] = 1.0;
            z
        };
        for (i, j) in self.j_maps.iter().enumerate() {
            let skew = (j + j.transpose()).amax();
            if skew > tol {
                return Err(Error::HTypeAxiom {
                    identity: "J_Z skew-symmetric".into(),
                    witness: basis(i),
                    residual: skew,
                });
            }
            let sq = (j * j + &id).amax();
            if sq > tol {
                return Err(Error::HTypeAxiom {
                    identity: "J_Z^2 = -|Z|^2 I".into(),
                    witness: basis(i),
                    residual: sq,
                });
            }
        }
        for a in 0..self.dim_z {
            for b in a + 1..self.dim_z {
                let (ja, jb) = (&self.j_maps[a], &self.j_maps[b]);
                let anti = (ja * jb + jb * ja).amax();
                if anti > tol {
                    let mut w = basis(a);
                    w[b] = 1.0;
                    return Err(Error::HTypeAxiom {
                        identity: "J_Z J_Y + J_Y J_Z = 0 for orthogonal Z, Y".into(),
                        witness: w,
                        residual: anti,
                    });
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..RANDOM_PROBES {
            let z = random_unit(&mut rng, self.dim_z);
            let jz = self.j_matrix_unchecked(&z);
            let res = (&jz * &jz + &id).amax();
            if res > tol {
                return Err(Error::HTypeAxiom {
                    identity: "J_Z^2 = -|Z|^2 I".into(),
                    witness: z.iter().copied().collect(),
                    residual: res,
                });
            }
        }
        Ok(())
    }

    fn j_matrix_unchecked(&self, z: &DVector<f64>) -> DMatrix<f64> {
        self.j_maps
            .iter()
            .zip(z.iter())
            .fold(DMatrix::zeros(self.dim_v, self.dim_v), |acc, (j, zi)| acc + j * *zi)
    }

    /// The matrix `J_Z = sum_i Z_i J_i`.
    pub fn j_matrix(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_z(z)?;
        Ok(self.j_matrix_unchecked(z))
    }

    pub fn j_apply(&self, z: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_z(z)?;
        self.check_v(v)?;
        Ok(self.j_apply_unchecked(z, v))
    }

    pub(crate) fn j_apply_unchecked(&self, z: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        self.j_maps
            .iter()
            .zip(z.iter())
            .fold(DVector::zeros(self.dim_v), |acc, (j, zi)| acc + (j * v) * *zi)
    }

    /// Center component of `[x_v, y_v]`: `z_i = <J_i x_v, y_v>`.
    pub(crate) fn bracket_vv(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.dim_z, self.j_maps.iter().map(|j| (j * x).dot(y)))
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(AlgebraElement::new(
            DVector::zeros(self.dim_v),
            self.bracket_vv(&x.v, &y.v),
        ))
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zeros(self.dim_v, self.dim_z)
    }

    pub fn element(&self, v: &[f64], z: &[f64]) -> Result<AlgebraElement> {
        let e = AlgebraElement::from_slices(v, z);
        self.check(&e)?;
        Ok(e)
    }

    pub fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.dims() != (self.dim_v, self.dim_z) {
            return invalid(format!(
                "element has dimensions {:?}, algebra has ({}, {})",
                x.dims(),
                self.dim_v,
                self.dim_z
            ));
        }
        Ok(())
    }

    fn check_v(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.dim_v {
            return invalid(format!("v-vector of length {}, expected {}", v.len(), self.dim_v));
        }
        Ok(())
    }

    fn check_z(&self, z: &DVector<f64>) -> Result<()> {
        if z.len() != self.dim_z {
            return invalid(format!("z-vector of length {}, expected {}", z.len(), self.dim_z));
        }
        Ok(())
    }

    /// Rank of the span of `[e_a, e_b]` over basis pairs of `v`.
    pub fn derived_rank(&self) -> usize {
        let mut cols = Vec::new();
        for a in 0..self.dim_v {
            for b in a + 1..self.dim_v {
                let (ea, eb) = (unit(self.dim_v, a), unit(self.dim_v, b));
                cols.push(self.bracket_vv(&ea, &eb));
            }
        }
        DMatrix::from_columns(&cols).rank(1e-10)
    }
}

pub(crate) fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[i] = 1.0;
    e
}

pub(crate) fn random_unit<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let norm = v.norm();
        if norm > 1e-3 {
            return v / norm;
        }
    }
}

/// Left multiplication by `i`, `j`, `k` in the basis `(1, i, j, k)`.
fn quaternion_units() -> [DMatrix<f64>; 3] {
    let li = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, -1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    );
    let lj = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, -1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, -1.0, 0.0, 0.0,
        ],
    );
    let lk = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, -1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0,
        ],
    );
    [li, lj, lk]
}
