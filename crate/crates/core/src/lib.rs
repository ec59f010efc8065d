//! Exact interval prerings, Lebesgue-Stieltjes style integration of simple
//! functions, and executable checks of one-sided calculus theorems.
//!
//! Exact layers use arbitrary-precision rationals throughout; only the Dini
//! derivative estimators and quadrature of transcendental pieces use floats.

pub mod derivatives;
pub mod dsl;
pub mod error;
pub mod exec;
pub mod expr;
pub mod harness;
pub mod measures;
pub mod piecewise;
pub mod poly;
pub mod prering;
pub mod quadrature;
pub mod random;
pub mod rational;
pub mod report;
pub mod riesz;
pub mod simple;
pub mod surd;
pub mod tensor;
pub mod vector;

pub use error::{Error, Result};
pub use exec::Execution;
pub use piecewise::{PiecewiseFunc, Value};
pub use prering::{Interval, SimpleSet};
pub use rational::Rational;
pub use vector::QVector;
