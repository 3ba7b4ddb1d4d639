//! Operator calculus for the Laguerre derivative, the Caputo derivative and the
//! three-parameter hyper-Bessel operator, together with exact separable
//! solutions of Burgers-like and KdV-like equations and an independent residual
//! engine that verifies them.
//!
//! - [`specfun`]: scalar special functions (Γ, C₀, E_α, W, Lₙ, lₙ).
//! - [`fracpoly`]: exact operator algebra on generalized power series.
//! - [`numops`]: finite-difference and L1 oracles on sampled grids.
//! - [`equations`]: the equation catalog, dispersion relations and residuals.
//! - [`cli`]: the `lagcalc` command-line front end.

pub mod cli;
pub mod equations;
pub mod fracpoly;
pub mod numops;
pub mod specfun;
