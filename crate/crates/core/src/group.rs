//! The simply connected two-step nilpotent group `G` and its complexification
//! in exponential coordinates.
//!
//! BCH terminates after the first bracket, so `exp(X) exp(Y) = exp(X + Y + [X, Y]/2)`
//! holds exactly, for real and complex coefficients alike.

use std::ops::{Add, Neg, Sub};

use crate::algebra::{AlgebraElement, HTypeAlgebra};
use crate::error::{invalid, Result};

/// `exp(coords)` in `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub coords: AlgebraElement,
}

impl GroupElement {
    pub fn new(coords: AlgebraElement) -> Self {
        Self { coords }
    }

    pub fn identity(alg: &HTypeAlgebra) -> Self {
        Self::new(alg.zero())
    }
}

/// `re + i im` in `g^C`, equivalently a point of `G^C` in exponential coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAlgebraElement {
    pub re: AlgebraElement,
    pub im: AlgebraElement,
}

impl ComplexAlgebraElement {
    pub fn new(re: AlgebraElement, im: AlgebraElement) -> Result<Self> {
        if re.dims() != im.dims() {
            return invalid("real and imaginary parts live in different algebras");
        }
        Ok(Self { re, im })
    }

    pub fn real(re: AlgebraElement) -> Self {
        let (dv, dz) = re.dims();
        Self {
            re,
            im: AlgebraElement::zeros(dv, dz),
        }
    }

    pub fn imaginary(im: AlgebraElement) -> Self {
        let (dv, dz) = im.dims();
        Self {
            re: AlgebraElement::zeros(dv, dz),
            im,
        }
    }

    pub fn zeros(alg: &HTypeAlgebra) -> Self {
        Self::real(alg.zero())
    }

    pub fn dims(&self) -> (usize, usize) {
        self.re.dims()
    }

    /// Largest absolute real or imaginary coordinate.
    pub fn max_abs(&self) -> f64 {
        self.re.max_abs().max(self.im.max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for &ComplexAlgebraElement {
    type Output = ComplexAlgebraElement;
    fn add(self, rhs: Self) -> ComplexAlgebraElement {
        ComplexAlgebraElement {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ComplexAlgebraElement {
    type Output = ComplexAlgebraElement;
    fn sub(self, rhs: Self) -> ComplexAlgebraElement {
        ComplexAlgebraElement {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Neg for &ComplexAlgebraElement {
    type Output = ComplexAlgebraElement;
    fn neg(self) -> ComplexAlgebraElement {
        ComplexAlgebraElement {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

fn check(alg: &HTypeAlgebra, x: &ComplexAlgebraElement) -> Result<()> {
    alg.check(&x.re)?;
    alg.check(&x.im)
}

/// Bracket extended complex-bilinearly to `g^C`.
pub fn complex_bracket(
    alg: &HTypeAlgebra,
    x: &ComplexAlgebraElement,
    y: &ComplexAlgebraElement,
) -> Result<ComplexAlgebraElement> {
    check(alg, x)?;
    check(alg, y)?;
    let re = alg.bracket_vv(&x.re.v, &y.re.v) - alg.bracket_vv(&x.im.v, &y.im.v);
    let im = alg.bracket_vv(&x.re.v, &y.im.v) + alg.bracket_vv(&x.im.v, &y.re.v);
    let zero_v = nalgebra::DVector::zeros(alg.dim_v());
    Ok(ComplexAlgebraElement {
        re: AlgebraElement::new(zero_v.clone(), re),
        im: AlgebraElement::new(zero_v, im),
    })
}

/// Group law of `G^C` in exponential coordinates.
pub fn multiply(
    alg: &HTypeAlgebra,
    g: &ComplexAlgebraElement,
    h: &ComplexAlgebraElement,
) -> Result<ComplexAlgebraElement> {
    let br = complex_bracket(alg, g, h)?;
    let sum = g + h;
    Ok(ComplexAlgebraElement {
        re: &sum.re + &br.re.scale(0.5),
        im: &sum.im + &br.im.scale(0.5),
    })
}

/// Group law of the real group `G`.
pub fn multiply_real(alg: &HTypeAlgebra, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    let br = alg.bracket(&g.coords, &h.coords)?;
    Ok(GroupElement::new(&(&g.coords + &h.coords) + &br.scale(0.5)))
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    GroupElement::new(-&g.coords)
}

pub fn inverse_complex(g: &ComplexAlgebraElement) -> ComplexAlgebraElement {
    -g
}

/// Splits `exp(X + iY) = h exp(i xi)` with `h = exp(X)` and
/// `xi = Y_v + (Y_z - [X_v, Y_v]/2)`.
pub fn polar_decompose(alg: &HTypeAlgebra, z: &ComplexAlgebraElement) -> Result<(GroupElement, AlgebraElement)> {
    check(alg, z)?;
    let br = alg.bracket_vv(&z.re.v, &z.im.v);
    let xi = AlgebraElement::new(z.im.v.clone(), &z.im.z - br * 0.5);
    Ok((GroupElement::new(z.re.clone()), xi))
}

/// Inverse of [`polar_decompose`]: the exponential coordinates of `h exp(i xi)`.
pub fn polar_compose(alg: &HTypeAlgebra, h: &GroupElement, xi: &AlgebraElement) -> Result<ComplexAlgebraElement> {
    multiply(
        alg,
        &ComplexAlgebraElement::real(h.coords.clone()),
        &ComplexAlgebraElement::imaginary(xi.clone()),
    )
}
