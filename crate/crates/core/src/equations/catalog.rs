use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::{EquationError, Result, TemporalProfile, TimeOperator};
use crate::specfun::SeriesEvalPolicy;

/// How the power-n nonlinearity is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerParse {
    /// `(2u_x/u)ⁿ u_x`, as the equation is displayed.
    Literal,
    /// `2(u_x/u)ⁿ u_x`, the form matching `r = 2k^{n+1} − k²`.
    PaperCondition,
}

impl PowerParse {
    pub fn name(self) -> &'static str {
        match self {
            Self::Literal => "literal",
            Self::PaperCondition => "paper_condition",
        }
    }
}

impl fmt::Display for PowerParse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PowerParse {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "literal" => Ok(Self::Literal),
            "paper_condition" | "paper-condition" => Ok(Self::PaperCondition),
            other => Err(format!("unknown parse mode '{other}' (literal, paper_condition)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquationSpec {
    /// `u_t + (2u_x/u)u_x − u_xx = 0`.
    BurgersClassic,
    /// `−_L D̂_t u + (2u_x/u)u_x − u_xx = 0`.
    BurgersLaguerre,
    /// `T u + (2u_x/u)u_x − u_xx = 0` for any time operator T.
    BurgersGeneralOt(TimeOperator),
    /// Caputo time derivative of order α.
    BurgersFractional { alpha: f64 },
    /// Hyper-Bessel time operator.
    BurgersHyperBessel { alpha: f64, beta: f64, nu: f64 },
    /// Laguerre time operator with an n-th power nonlinearity.
    BurgersPowerN { n: u32, parse: PowerParse },
    /// `T u + (u − (u_x² + u_xxx)/u_xx)u_x + 2u_xx = 0`.
    BurgersHighOrder(TimeOperator),
    /// `−_L D̂_t u + (2u_xx/u)u_x − u_xxx = 0`.
    KdVLaguerre,
    KdVGeneralOt(TimeOperator),
    /// `−_L D̂_t u + k e^{−kx} u u_x − b(t) u_xx + r u = 0` with b the profile.
    VarCoefBurgers { k: f64, r: f64 },
    VarCoefGeneralOt { op: TimeOperator, k: f64, r: f64 },
}

/// Pointwise values an equation's left-hand side is built from.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub ux: f64,
    pub uxx: f64,
    pub uxxx: f64,
    /// Time operator applied to u.
    pub tu: f64,
    /// Time coefficient b(t) of the variable-coefficient entries.
    pub b: f64,
}

impl EquationSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::BurgersClassic => "burgers-classic",
            Self::BurgersLaguerre => "burgers-laguerre",
            Self::BurgersGeneralOt(_) => "burgers-general",
            Self::BurgersFractional { .. } => "burgers-fractional",
            Self::BurgersHyperBessel { .. } => "burgers-hyper-bessel",
            Self::BurgersPowerN { .. } => "burgers-power-n",
            Self::BurgersHighOrder(_) => "burgers-high-order",
            Self::KdVLaguerre => "kdv-laguerre",
            Self::KdVGeneralOt(_) => "kdv-general",
            Self::VarCoefBurgers { .. } => "varcoef-burgers",
            Self::VarCoefGeneralOt { .. } => "varcoef-general",
        }
    }

    pub fn time_operator(&self) -> TimeOperator {
        match *self {
            Self::BurgersClassic => TimeOperator::Derivative,
            Self::BurgersLaguerre | Self::BurgersPowerN { .. } | Self::KdVLaguerre | Self::VarCoefBurgers { .. } => {
                TimeOperator::Laguerre
            }
            Self::BurgersGeneralOt(op)
            | Self::BurgersHighOrder(op)
            | Self::KdVGeneralOt(op)
            | Self::VarCoefGeneralOt { op, .. } => op,
            Self::BurgersFractional { alpha } => TimeOperator::Caputo { alpha },
            Self::BurgersHyperBessel { alpha, beta, nu } => TimeOperator::HyperBessel { alpha, beta, nu },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.time_operator().validate()?;
        match *self {
            Self::BurgersPowerN { n, .. } if !(2..=16).contains(&n) => Err(EquationError::Parameter {
                name: "n",
                value: n as f64,
                range: "[2, 16]",
            }),
            Self::VarCoefBurgers { k, r } | Self::VarCoefGeneralOt { k, r, .. } => {
                if k == 0.0 || !k.is_finite() {
                    Err(EquationError::ZeroWaveNumber)
                } else if !r.is_finite() {
                    Err(EquationError::Parameter {
                        name: "r",
                        value: r,
                        range: "finite reals",
                    })
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Equation parameters as a JSON object.
    pub fn params(&self) -> Value {
        match *self {
            Self::BurgersGeneralOt(op) | Self::BurgersHighOrder(op) | Self::KdVGeneralOt(op) => op.params(),
            Self::BurgersFractional { alpha } => json!({ "alpha": alpha }),
            Self::BurgersHyperBessel { alpha, beta, nu } => json!({ "alpha": alpha, "beta": beta, "nu": nu }),
            Self::BurgersPowerN { n, parse } => json!({ "n": n, "parse": parse.name() }),
            Self::VarCoefBurgers { k, r } => json!({ "k": k, "r": r }),
            Self::VarCoefGeneralOt { op, k, r } => {
                let mut v = op.params();
                v["k"] = json!(k);
                v["r"] = json!(r);
                v
            }
            _ => json!({}),
        }
    }

    pub fn needs_third_derivative(&self) -> bool {
        matches!(self, Self::BurgersHighOrder(_) | Self::KdVLaguerre | Self::KdVGeneralOt(_))
    }

    /// True when the equation divides by u_xx.
    pub fn divides_by_uxx(&self) -> bool {
        matches!(self, Self::BurgersHighOrder(_))
    }

    /// The coefficient profile b(t) of the variable-coefficient entries.
    pub fn coefficient_profile(&self) -> Option<TemporalProfile> {
        match *self {
            Self::VarCoefBurgers { r, .. } | Self::VarCoefGeneralOt { r, .. } => {
                Some(self.time_operator().profile(r))
            }
            _ => None,
        }
    }

    pub fn coefficient_b(&self, t: f64, policy: &SeriesEvalPolicy) -> Result<f64> {
        match self.coefficient_profile() {
            Some(p) => p.eval(t, policy),
            None => Ok(0.0),
        }
    }

    /// Individual left-hand-side terms at one node; their sum is the residual.
    /// Unused slots are zero.
    pub fn terms(&self, j: &Jet) -> [f64; 4] {
        match *self {
            Self::BurgersClassic
            | Self::BurgersLaguerre
            | Self::BurgersGeneralOt(_)
            | Self::BurgersFractional { .. }
            | Self::BurgersHyperBessel { .. } => [j.tu, 2.0 * j.ux / j.u * j.ux, -j.uxx, 0.0],
            Self::BurgersPowerN { n, parse } => {
                let ratio = j.ux / j.u;
                let nonlinear = match parse {
                    PowerParse::Literal => (2.0 * ratio).powi(n as i32) * j.ux,
                    PowerParse::PaperCondition => 2.0 * ratio.powi(n as i32) * j.ux,
                };
                [j.tu, nonlinear, -j.uxx, 0.0]
            }
            Self::BurgersHighOrder(_) => {
                let factor = j.u - (j.ux * j.ux + j.uxxx) / j.uxx;
                [j.tu, factor * j.ux, 2.0 * j.uxx, 0.0]
            }
            Self::KdVLaguerre | Self::KdVGeneralOt(_) => [j.tu, 2.0 * j.uxx / j.u * j.ux, -j.uxxx, 0.0],
            Self::VarCoefBurgers { k, r } | Self::VarCoefGeneralOt { k, r, .. } => {
                let a = k * (-k * j.x).exp();
                [j.tu, a * j.u * j.ux, -j.b * j.uxx, r * j.u]
            }
        }
    }
}

/// `u(x,t) = R e^{kx} f(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionAnsatz {
    pub amplitude: f64,
    pub k: f64,
    pub profile: TemporalProfile,
}

impl SolutionAnsatz {
    pub fn new(amplitude: f64, k: f64, profile: TemporalProfile) -> Result<Self> {
        if amplitude == 0.0 || !amplitude.is_finite() {
            return Err(EquationError::ZeroAmplitude);
        }
        if k == 0.0 || !k.is_finite() {
            return Err(EquationError::ZeroWaveNumber);
        }
        if !profile.r.is_finite() {
            return Err(EquationError::Parameter {
                name: "r",
                value: profile.r,
                range: "finite reals",
            });
        }
        profile.operator().validate()?;
        Ok(Self { amplitude, k, profile })
    }

    pub fn r(&self) -> f64 {
        self.profile.r
    }

    /// Same amplitude and wave number with another eigenvalue r.
    pub fn with_r(&self, r: f64) -> Result<Self> {
        let profile = TemporalProfile { r, ..self.profile };
        Self::new(self.amplitude, self.k, profile)
    }

    pub fn eval(&self, x: f64, t: f64, policy: &SeriesEvalPolicy) -> Result<f64> {
        Ok(self.amplitude * (self.k * x).exp() * self.profile.eval(t, policy)?)
    }
}

/// The exact solution of `eq` with amplitude R and wave number k, its
/// eigenvalue r fixed by the dispersion relation.
pub fn build_solution(eq: &EquationSpec, amplitude: f64, k: f64) -> Result<SolutionAnsatz> {
    eq.validate()?;
    if k == 0.0 || !k.is_finite() {
        return Err(EquationError::ZeroWaveNumber);
    }
    if let EquationSpec::VarCoefBurgers { k: eq_k, .. } | EquationSpec::VarCoefGeneralOt { k: eq_k, .. } = *eq {
        if amplitude != 1.0 {
            return Err(EquationError::BalanceViolation(amplitude));
        }
        if k != eq_k {
            return Err(EquationError::WaveNumberMismatch { equation: eq_k, ansatz: k });
        }
    }
    let r = super::dispersion(eq, k)?;
    SolutionAnsatz::new(amplitude, k, eq.time_operator().profile(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::ProfileKind;

    #[test]
    fn laguerre_burgers_solution() {
        let a = build_solution(&EquationSpec::BurgersLaguerre, 1.0, 1.0).unwrap();
        assert_eq!(a.profile.kind, ProfileKind::Tricomi);
        assert_eq!(a.r(), 1.0);
        let policy = SeriesEvalPolicy::default();
        assert_eq!(a.eval(0.0, 0.0, &policy).unwrap(), 1.0);
    }

    #[test]
    fn fractional_solution_uses_mittag_leffler() {
        let a = build_solution(&EquationSpec::BurgersFractional { alpha: 0.5 }, 2.0, 1.0).unwrap();
        assert_eq!(a.profile.kind, ProfileKind::MittagLeffler { alpha: 0.5 });
        assert_eq!((a.amplitude, a.r()), (2.0, 1.0));
    }

    #[test]
    fn unit_order_fractional_solution_is_travelling_wave() {
        let policy = SeriesEvalPolicy::default();
        let (amp, k) = (1.5, 0.8);
        let a = build_solution(&EquationSpec::BurgersFractional { alpha: 1.0 }, amp, k).unwrap();
        for (x, t) in [(0.0, 0.0), (0.3, 0.7), (1.0, 1.0)] {
            let wave = amp * (k * x).exp() * (-k * k * t).exp();
            assert!((a.eval(x, t, &policy).unwrap() - wave).abs() < 1e-14 * wave.abs().max(1.0));
        }
    }

    #[test]
    fn preconditions() {
        let eq = EquationSpec::BurgersLaguerre;
        assert_eq!(build_solution(&eq, 1.0, 0.0), Err(EquationError::ZeroWaveNumber));
        assert_eq!(build_solution(&eq, 0.0, 1.0), Err(EquationError::ZeroAmplitude));
        let var = EquationSpec::VarCoefBurgers { k: 1.0, r: 1.0 };
        assert_eq!(build_solution(&var, 2.0, 1.0), Err(EquationError::BalanceViolation(2.0)));
        assert!(matches!(
            build_solution(&var, 1.0, 0.5),
            Err(EquationError::WaveNumberMismatch { .. })
        ));
        let power = EquationSpec::BurgersPowerN {
            n: 1,
            parse: PowerParse::Literal,
        };
        assert!(power.validate().is_err());
    }

    #[test]
    fn analytic_jet_cancels_for_every_family() {
        let (amp, k) = (1.3, 0.7);
        let ops = [
            TimeOperator::Derivative,
            TimeOperator::Laguerre,
            TimeOperator::Caputo { alpha: 0.4 },
        ];
        let mut catalog = vec![
            EquationSpec::BurgersClassic,
            EquationSpec::BurgersLaguerre,
            EquationSpec::KdVLaguerre,
            EquationSpec::BurgersPowerN {
                n: 3,
                parse: PowerParse::Literal,
            },
            EquationSpec::BurgersPowerN {
                n: 2,
                parse: PowerParse::PaperCondition,
            },
        ];
        for op in ops {
            catalog.push(EquationSpec::BurgersGeneralOt(op));
            catalog.push(EquationSpec::BurgersHighOrder(op));
            catalog.push(EquationSpec::KdVGeneralOt(op));
        }
        for eq in catalog {
            let r = crate::equations::dispersion(&eq, k).unwrap();
            let (x, f) = (0.4, 0.83);
            let u = amp * (k * x).exp() * f;
            let jet = Jet {
                x,
                t: 0.5,
                u,
                ux: k * u,
                uxx: k * k * u,
                uxxx: k * k * k * u,
                tu: -r * u,
                b: 0.0,
            };
            let sum: f64 = eq.terms(&jet).iter().sum();
            assert!(sum.abs() < 1e-14, "{}: {sum}", eq.name());
        }
    }

    #[test]
    fn params_are_objects() {
        let eq = EquationSpec::VarCoefGeneralOt {
            op: TimeOperator::Caputo { alpha: 0.5 },
            k: 1.0,
            r: 2.0,
        };
        let p = eq.params();
        assert_eq!(p["alpha"], json!(0.5));
        assert_eq!(p["r"], json!(2.0));
        assert!(EquationSpec::BurgersLaguerre.params().is_object());
    }
}
