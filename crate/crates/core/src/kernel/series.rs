//! Truncated one-variable power series.
//!
//! A [`TruncatedSeries`] holds the Maclaurin coefficients `c_0 ..= c_N` of a
//! function, all arithmetic is truncated to the smaller order of the two
//! operands. Coefficients are generic so the same code runs on `f64` and on
//! exact [`BigRational`] values; the latter is used wherever a sign statement about
//! a coefficient has to be exact.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// Scalar type usable as a series coefficient.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
}

impl Coefficient for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

impl Coefficient for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> TruncatedSeries<T> {
    /// Builds a series from `c_0 ..= c_N`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a truncated series needs at least one coefficient");
        }
        Ok(Self { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn constant(value: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// The identity series `t`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `t^k`, zero past the truncation order.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() - other.coeffs[k].clone())
                .collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(T::zero(), |acc, j| {
                    acc + self.coeffs[j].clone() * other.coeffs[k - j].clone()
                })
            })
            .collect();
        Self { coeffs }
    }

    /// Formal quotient `self / other`; requires a nonzero constant term in `other`.
    pub fn quotient(&self, other: &Self) -> Result<Self> {
        let b0 = other.coeffs[0].clone();
        if b0.is_zero() {
            return Err(Error::SingularSeries);
        }
        let n = self.order().min(other.order());
        let mut q: Vec<T> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - other.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(acc / b0.clone());
        }
        Ok(Self { coeffs: q })
    }

    /// Term-wise derivative; the order drops by one (order 0 stays a zero constant).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=self.order())
                .map(|k| self.coeffs[k].clone() * T::from_int(k as i64))
                .collect(),
        }
    }

    /// Divides by `t^k`. The first `k` coefficients must vanish exactly, which is
    /// how removable singularities are taken out of a numerator.
    pub fn deflate(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return invalid(format!("cannot deflate order-{} series by t^{k}", self.order()));
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return invalid(format!("series does not vanish to order {k} at the origin"));
        }
        Ok(Self {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Multiplies by `t^k`, keeping the order (top coefficients fall off).
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![T::zero(); n + 1];
        for j in 0..=n {
            if j + k <= n {
                coeffs[j + k] = self.coeffs[j].clone();
            }
        }
        Self { coeffs }
    }
}

impl TruncatedSeries<f64> {
    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

impl TruncatedSeries<BigRational> {
    /// Rounds every coefficient to the nearest double.
    pub fn to_f64(&self) -> TruncatedSeries<f64> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }
}

impl<T: Coefficient> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> Self::Output {
        self.plus(rhs)
    }
}

impl<T: Coefficient> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.minus(rhs)
    }
}

impl<T: Coefficient> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.product(rhs)
    }
}

impl<T: Coefficient> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn neg(self) -> Self::Output {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

/// Named functions with known Maclaurin expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesFn {
    SinhOverT,
    Cosh,
    Sinh,
    SinOverT,
    OneMinusCosOverT2,
    Exp,
}

impl SeriesFn {
    pub const ALL: [SeriesFn; 6] = [
        SeriesFn::SinhOverT,
        SeriesFn::Cosh,
        SeriesFn::Sinh,
        SeriesFn::SinOverT,
        SeriesFn::OneMinusCosOverT2,
        SeriesFn::Exp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesFn::SinhOverT => "sinh_over_t",
            SeriesFn::Cosh => "cosh",
            SeriesFn::Sinh => "sinh",
            SeriesFn::SinOverT => "sin_over_t",
            SeriesFn::OneMinusCosOverT2 => "one_minus_cos_over_t2",
            SeriesFn::Exp => "exp",
        }
    }
}

impl FromStr for SeriesFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SeriesFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown series function `{s}`")))
    }
}

/// Maclaurin coefficients of `f` through degree `order`.
pub fn series_from_function<T: Coefficient>(f: SeriesFn, order: usize) -> TruncatedSeries<T> {
    // exp coefficients 1/k!, generated far enough for the shifted variants.
    let n = order + 2;
    let mut inv_fact = Vec::with_capacity(n + 1);
    inv_fact.push(T::one());
    for k in 1..=n {
        let prev: T = inv_fact[k - 1].clone();
        inv_fact.push(prev / T::from_int(k as i64));
    }
    let coeff = |k: usize| -> T {
        match f {
            SeriesFn::Exp => inv_fact[k].clone(),
            SeriesFn::Cosh if k.is_multiple_of(2) => inv_fact[k].clone(),
            SeriesFn::Sinh if k % 2 == 1 => inv_fact[k].clone(),
            SeriesFn::SinhOverT if k.is_multiple_of(2) => inv_fact[k + 1].clone(),
            SeriesFn::SinOverT if k.is_multiple_of(2) => alternate(inv_fact[k + 1].clone(), k / 2),
            // (1 - cos t)/t^2 = sum (-1)^j t^{2j} / (2j+2)!
            SeriesFn::OneMinusCosOverT2 if k.is_multiple_of(2) => alternate(inv_fact[k + 2].clone(), k / 2),
            _ => T::zero(),
        }
    };
    TruncatedSeries {
        coeffs: (0..=order).map(coeff).collect(),
    }
}

fn alternate<T: Coefficient>(x: T, j: usize) -> T {
    if j.is_multiple_of(2) {
        x
    } else {
        -x
    }
}

/// Looks a function up by name; unknown names are rejected.
pub fn series_from_name(name: &str, order: usize) -> Result<TruncatedSeries<f64>> {
    Ok(series_from_function(name.parse()?, order))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn series_combine<T: Coefficient>(
    op: SeriesOp,
    s1: &TruncatedSeries<T>,
    s2: &TruncatedSeries<T>,
) -> Result<TruncatedSeries<T>> {
    match op {
        SeriesOp::Add => Ok(s1 + s2),
        SeriesOp::Sub => Ok(s1 - s2),
        SeriesOp::Mul => Ok(s1 * s2),
        SeriesOp::Div => s1.quotient(s2),
    }
}
