use serde_json::{json, Value};

use super::{EquationError, Result};
use crate::fracpoly::{self, PhasedPowerSeries};
use crate::numops::{self, Grid1D, MaskedSamples};
use crate::specfun::{self, SeriesEvalPolicy};

/// A linear time operator T together with the eigenfunction family
/// f satisfying T f = −r f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeOperator {
    /// ∂_t, paired with e^{−rt}.
    Derivative,
    /// −_L D̂_t = ∂_t t ∂_t, the sign in which the Laguerre derivative enters
    /// the equations; paired with C₀(rt).
    Laguerre,
    /// Caputo D^α, paired with E_α(−r t^α).
    Caputo { alpha: f64 },
    /// x^{α−ν} D^β (x^ν D^α ·), paired with W_{α,β,ν}(−r t^β).
    HyperBessel { alpha: f64, beta: f64, nu: f64 },
}

fn unit_order(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(EquationError::Parameter {
            name,
            value,
            range: "(0, 1]",
        })
    }
}

impl TimeOperator {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Derivative | Self::Laguerre => Ok(()),
            Self::Caputo { alpha } => unit_order("alpha", alpha),
            Self::HyperBessel { alpha, beta, nu } => {
                unit_order("alpha", alpha)?;
                unit_order("beta", beta)?;
                if nu > 0.0 && nu.is_finite() {
                    Ok(())
                } else {
                    Err(EquationError::Parameter {
                        name: "nu",
                        value: nu,
                        range: "(0, inf)",
                    })
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Derivative => "derivative",
            Self::Laguerre => "laguerre",
            Self::Caputo { .. } => "caputo",
            Self::HyperBessel { .. } => "hyper-bessel",
        }
    }

    pub fn params(&self) -> Value {
        match *self {
            Self::Derivative | Self::Laguerre => json!({ "op": self.name() }),
            Self::Caputo { alpha } => json!({ "op": self.name(), "alpha": alpha }),
            Self::HyperBessel { alpha, beta, nu } => {
                json!({ "op": self.name(), "alpha": alpha, "beta": beta, "nu": nu })
            }
        }
    }

    pub fn profile(&self, r: f64) -> TemporalProfile {
        let kind = match *self {
            Self::Derivative => ProfileKind::Exponential,
            Self::Laguerre => ProfileKind::Tricomi,
            Self::Caputo { alpha } => ProfileKind::MittagLeffler { alpha },
            Self::HyperBessel { alpha, beta, nu } => ProfileKind::HyperBesselW { alpha, beta, nu },
        };
        TemporalProfile { kind, r }
    }

    /// True when the grid scheme is built on the L1 Caputo discretization.
    pub fn uses_l1(&self) -> bool {
        match *self {
            Self::Caputo { alpha } => alpha < 1.0,
            Self::HyperBessel { alpha, beta, .. } => alpha < 1.0 || beta < 1.0,
            _ => false,
        }
    }

    /// Profiles of fractional operators involve t^α and need t ≥ 0.
    pub fn needs_nonnegative_time(&self) -> bool {
        matches!(self, Self::Caputo { .. } | Self::HyperBessel { .. })
    }

    /// Exact image of a series in t.
    pub fn apply_series(&self, s: &PhasedPowerSeries) -> Result<PhasedPowerSeries> {
        Ok(match *self {
            Self::Derivative => fracpoly::differentiate(s)?,
            Self::Laguerre => fracpoly::laguerre_derivative(s)?.scale_real(-1.0),
            Self::Caputo { alpha } => fracpoly::caputo(s, alpha)?,
            Self::HyperBessel { alpha, beta, nu } => fracpoly::hyper_bessel_op(s, alpha, beta, nu)?,
        })
    }

    /// Grid image of samples in t.
    pub fn apply_fd(&self, samples: &[f64], grid: &Grid1D) -> Result<MaskedSamples> {
        Ok(match *self {
            Self::Derivative => numops::fd_derivative(samples, grid.step(), 1)?,
            Self::Laguerre => numops::laguerre_time_fd(samples, grid)?.map(|_, v| -v),
            Self::Caputo { alpha } if alpha == 1.0 => numops::fd_derivative(samples, grid.step(), 1)?,
            Self::Caputo { alpha } => numops::caputo_l1(samples, grid, alpha)?,
            Self::HyperBessel { alpha, beta, nu } => numops::hyper_bessel_fd(samples, grid, alpha, beta, nu)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    Exponential,
    Tricomi,
    MittagLeffler { alpha: f64 },
    HyperBesselW { alpha: f64, beta: f64, nu: f64 },
}

/// f(t) with T f = −r f for its paired operator T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalProfile {
    pub kind: ProfileKind,
    pub r: f64,
}

impl TemporalProfile {
    pub fn operator(&self) -> TimeOperator {
        match self.kind {
            ProfileKind::Exponential => TimeOperator::Derivative,
            ProfileKind::Tricomi => TimeOperator::Laguerre,
            ProfileKind::MittagLeffler { alpha } => TimeOperator::Caputo { alpha },
            ProfileKind::HyperBesselW { alpha, beta, nu } => TimeOperator::HyperBessel { alpha, beta, nu },
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ProfileKind::Exponential => "exponential",
            ProfileKind::Tricomi => "tricomi",
            ProfileKind::MittagLeffler { .. } => "mittag-leffler",
            ProfileKind::HyperBesselW { .. } => "hyper-bessel-w",
        }
    }

    pub fn eval(&self, t: f64, policy: &SeriesEvalPolicy) -> Result<f64> {
        let r = self.r;
        Ok(match self.kind {
            ProfileKind::Exponential => (-r * t).exp(),
            ProfileKind::Tricomi => specfun::tricomi_c0(r * t, policy)?,
            ProfileKind::MittagLeffler { alpha } => {
                check_time(t)?;
                specfun::mittag_leffler(alpha, -r * t.powf(alpha), policy)?
            }
            ProfileKind::HyperBesselW { alpha, beta, nu } => {
                check_time(t)?;
                specfun::hyper_bessel_w(alpha, beta, nu, -r * t.powf(beta), policy)?
            }
        })
    }

    pub fn sample(&self, grid: &Grid1D, policy: &SeriesEvalPolicy) -> Result<Vec<f64>> {
        grid.nodes().into_iter().map(|t| self.eval(t, policy)).collect()
    }

    /// First `terms` terms of f as a series in t.
    pub fn series(&self, terms: usize) -> Result<PhasedPowerSeries> {
        let r = self.r;
        Ok(match self.kind {
            ProfileKind::Exponential => fracpoly::exponential_series(-r, terms)?,
            ProfileKind::Tricomi => fracpoly::tricomi_series(r, terms)?,
            ProfileKind::MittagLeffler { alpha } => fracpoly::mittag_leffler_series(alpha, -r, terms)?,
            ProfileKind::HyperBesselW { alpha, beta, nu } => {
                fracpoly::hyper_bessel_w_series(alpha, beta, nu, -r, terms)?
            }
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(EquationError::NegativeTime(t))
    }
}
