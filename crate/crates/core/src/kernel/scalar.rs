//! The special functions of the slice map and of the domain boundaries.
//!
//! Every function here has a removable singularity at the origin. Near zero the
//! value comes from a Maclaurin table generated once in exact rational
//! arithmetic; away from zero from a cancellation-free closed form.

use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::BigRational;

use super::series::{series_from_function, Coefficient, SeriesFn, TruncatedSeries};
use crate::error::{Error, Result};

/// Below this magnitude the series table is used; at exactly the threshold the
/// closed form wins.
pub const SERIES_SWITCH: f64 = 1.0;

/// Truncation degree of the evaluation tables.
pub const SERIES_ORDER: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalarFn {
    /// `l(t) = sinh t / t`
    L,
    /// `m(t) = (t - sinh t cosh t) / (2 t^3)`
    M,
    LPrime,
    MPrime,
    /// Boundary of O0: `c^2 sinh c / (c cosh c - sinh c)`
    F0,
    /// Boundary of O1: `2 c^3 / (sinh c cosh c - c)`
    F1,
    /// Boundary of O2: `3 c^2 / sinh^2 c`
    F2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl ScalarFn {
    pub const ALL: [ScalarFn; 7] = [
        ScalarFn::L,
        ScalarFn::M,
        ScalarFn::LPrime,
        ScalarFn::MPrime,
        ScalarFn::F0,
        ScalarFn::F1,
        ScalarFn::F2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScalarFn::L => "l",
            ScalarFn::M => "m",
            ScalarFn::LPrime => "l_prime",
            ScalarFn::MPrime => "m_prime",
            ScalarFn::F0 => "f0",
            ScalarFn::F1 => "f1",
            ScalarFn::F2 => "f2",
        }
    }

    /// `l'` and `m'` are derivatives of even functions and therefore odd.
    pub fn parity(self) -> Parity {
        match self {
            ScalarFn::LPrime | ScalarFn::MPrime => Parity::Odd,
            _ => Parity::Even,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn eval(self, t: f64) -> f64 {
        eval_scalar(self, t)
    }

    /// Exact Maclaurin coefficients through degree `order`.
    pub fn maclaurin(self, order: usize) -> TruncatedSeries<BigRational> {
        maclaurin_exact(self, order)
    }
}

impl FromStr for ScalarFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScalarFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scalar function `{s}`")))
    }
}

fn maclaurin_exact<T: Coefficient>(f: ScalarFn, order: usize) -> TruncatedSeries<T> {
    // Four spare degrees cover the deflations by t^3 and the derivatives.
    let n = order + 4;
    let sinh: TruncatedSeries<T> = series_from_function(SeriesFn::Sinh, n);
    let cosh: TruncatedSeries<T> = series_from_function(SeriesFn::Cosh, n);
    let t = TruncatedSeries::<T>::variable(n);
    let l: TruncatedSeries<T> = series_from_function(SeriesFn::SinhOverT, n);
    let half = T::one() / T::from_int(2);
    // (t - sinh cosh) / t^3 and (t cosh - sinh) / t^3; the prefixes vanish exactly.
    let m = || {
        (&t - &(&sinh * &cosh))
            .deflate(3)
            .expect("t - sinh t cosh t = O(t^3)")
            .scale(&half)
    };
    let series = match f {
        ScalarFn::L => l,
        ScalarFn::M => m(),
        ScalarFn::LPrime => l.derivative(),
        ScalarFn::MPrime => m().derivative(),
        ScalarFn::F0 => {
            let den = (&(&t * &cosh) - &sinh).deflate(3).expect("t cosh t - sinh t = O(t^3)");
            l.quotient(&den).expect("denominator starts with 1/3")
        }
        ScalarFn::F1 => {
            let den = (&(&sinh * &cosh) - &t).deflate(3).expect("sinh t cosh t - t = O(t^3)");
            TruncatedSeries::constant(T::from_int(2), den.order())
                .quotient(&den)
                .expect("denominator starts with 2/3")
        }
        ScalarFn::F2 => TruncatedSeries::constant(T::from_int(3), n)
            .quotient(&(&l * &l))
            .expect("l(0)^2 = 1"),
    };
    series.truncate(order)
}

fn tables() -> &'static [TruncatedSeries<f64>; 7] {
    static TABLES: OnceLock<[TruncatedSeries<f64>; 7]> = OnceLock::new();
    TABLES.get_or_init(|| ScalarFn::ALL.map(|f| maclaurin_exact::<BigRational>(f, SERIES_ORDER).to_f64()))
}

/// Series-table value, valid for small `|t|`.
pub fn series_branch(f: ScalarFn, t: f64) -> f64 {
    tables()[f.index()].eval(t)
}

/// Closed-form value for `t != 0`, written to avoid overflow in the ratios.
pub fn closed_form(f: ScalarFn, t: f64) -> f64 {
    let x = t.abs();
    let sign = match f.parity() {
        Parity::Odd => t.signum(),
        Parity::Even => 1.0,
    };
    let v = match f {
        ScalarFn::L => x.sinh() / x,
        ScalarFn::M => (x - 0.5 * (2.0 * x).sinh()) / (2.0 * x * x * x),
        ScalarFn::LPrime => (x * x.cosh() - x.sinh()) / (x * x),
        ScalarFn::MPrime => (-2.0 * x - x * (2.0 * x).cosh() + 1.5 * (2.0 * x).sinh()) / (2.0 * x.powi(4)),
        ScalarFn::F0 => {
            let th = x.tanh();
            x * x * th / (x - th)
        }
        ScalarFn::F1 => 4.0 * x.powi(3) / ((2.0 * x).sinh() - 2.0 * x),
        ScalarFn::F2 => {
            let r = x / x.sinh();
            3.0 * r * r
        }
    };
    sign * v
}

/// Evaluates `f(t)` on the whole real line.
pub fn eval_scalar(f: ScalarFn, t: f64) -> f64 {
    if t.abs() < SERIES_SWITCH {
        series_branch(f, t)
    } else {
        closed_form(f, t)
    }
}

/// Coefficients of `R - L` with `R = sinh c / c + (sinh^2 c / c^2) cosh c` and
/// `L = 2 cosh c`, exact through degree `order`.
pub fn injectivity_gap_series(order: usize) -> TruncatedSeries<BigRational> {
    let l: TruncatedSeries<BigRational> = series_from_function(SeriesFn::SinhOverT, order);
    let cosh: TruncatedSeries<BigRational> = series_from_function(SeriesFn::Cosh, order);
    let rhs = &l + &(&(&l * &l) * &cosh);
    let lhs = cosh.scale(&BigRational::from_int(2));
    &rhs - &lhs
}

fn monotonicity_table() -> &'static TruncatedSeries<f64> {
    static TABLE: OnceLock<TruncatedSeries<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = SERIES_ORDER + 1;
        let sinh: TruncatedSeries<BigRational> = series_from_function(SeriesFn::Sinh, n);
        let cosh: TruncatedSeries<BigRational> = series_from_function(SeriesFn::Cosh, n);
        let t = TruncatedSeries::<BigRational>::variable(n);
        let two = BigRational::from_int(2);
        let three = BigRational::from_int(3);
        let a = (&t * &(&cosh * &cosh)).scale(&two);
        let b = (&cosh * &sinh).scale(&three);
        (&(&a - &b) + &t).to_f64()
    })
}

/// `2t cosh^2 t - 3 cosh t sinh t + t`, which behaves like `4t^5/15` at the origin.
pub fn monotonicity_expression(t: f64) -> f64 {
    if t.abs() < SERIES_SWITCH {
        monotonicity_table().eval(t)
    } else {
        let (s, c) = (t.sinh(), t.cosh());
        2.0 * t * c * c - 3.0 * c * s + t
    }
}
