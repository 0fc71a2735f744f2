//! Scalar special functions and the truncated-series engine behind them.

pub mod scalar;
pub mod series;

pub use scalar::{
    closed_form, eval_scalar, injectivity_gap_series, monotonicity_expression, series_branch, Parity, ScalarFn,
    SERIES_ORDER, SERIES_SWITCH,
};
pub use series::{
    series_combine, series_from_function, series_from_name, Coefficient, SeriesFn, SeriesOp, TruncatedSeries,
};
