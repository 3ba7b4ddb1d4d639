//! Catalog of Burgers-like and KdV-like equations with separable exact
//! solutions `u = R e^{kx} f(t)`, their dispersion relations, and a residual
//! engine that checks a candidate solution on a grid.

mod catalog;
mod dispersion;
mod profile;
mod report;
mod residual;

pub use catalog::*;
pub use dispersion::*;
pub use profile::*;
pub use report::*;
pub use residual::*;

use thiserror::Error;

use crate::fracpoly::SeriesError;
use crate::numops::NumOpsError;
use crate::specfun::SpecialFunctionError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquationError {
    #[error("parameter {name} = {value} outside {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("wave number k must be non-zero and finite")]
    ZeroWaveNumber,
    #[error("amplitude R must be non-zero and finite")]
    ZeroAmplitude,
    #[error("variable-coefficient Burgers needs R = 1 to balance a(x)uu_x against b(t)u_xx, got R = {0}")]
    BalanceViolation(f64),
    #[error("ansatz wave number {ansatz} differs from the equation's k = {equation}")]
    WaveNumberMismatch { equation: f64, ansatz: f64 },
    #[error("ansatz profile {profile} does not match the equation's time operator {operator}")]
    ProfileMismatch {
        profile: &'static str,
        operator: &'static str,
    },
    #[error("time {0} is negative; fractional profiles need t >= 0")]
    NegativeTime(f64),
    #[error("{0:.1}% of grid nodes are masked, more than half")]
    TooManyMasked(f64),
    #[error("field has {got} values, grid needs {expected}")]
    FieldShape { expected: usize, got: usize },
    #[error("exact-time mode needs an analytic ansatz, not sampled data")]
    ExactTimeNeedsAnsatz,
    #[error("probe point ({x}, {t}) is masked")]
    MaskedProbe { x: f64, t: f64 },
    #[error("residual is not affine in r (third-point mismatch {0:e})")]
    NotAffine(f64),
    #[error("residual does not depend on r; no dispersion relation to solve")]
    Degenerate,
    #[error(transparent)]
    Grid(#[from] NumOpsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

pub type Result<T> = std::result::Result<T, EquationError>;
