//! A small expression language plus a grid sampler that turns continuous
//! problems over a box into finite instances.

mod expr;
pub(crate) mod sample;

pub use expr::{parse_expression, BinaryOp, EvalError, Expression, Function, ParseError};
pub use sample::{AnalyticInstance, Resolution, SampleSpec, SampledInstance, Variable, MAX_DIMENSION};
