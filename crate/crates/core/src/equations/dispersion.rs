use super::{EquationError, EquationSpec, Jet, PowerParse, Result, SolutionAnsatz};
use crate::specfun::SeriesEvalPolicy;

/// Closed-form eigenvalue r making `R e^{kx} f(t)` solve `eq`.
pub fn dispersion(eq: &EquationSpec, k: f64) -> Result<f64> {
    if k == 0.0 || !k.is_finite() {
        return Err(EquationError::ZeroWaveNumber);
    }
    Ok(match *eq {
        EquationSpec::BurgersClassic
        | EquationSpec::BurgersLaguerre
        | EquationSpec::BurgersGeneralOt(_)
        | EquationSpec::BurgersFractional { .. }
        | EquationSpec::BurgersHyperBessel { .. }
        | EquationSpec::BurgersHighOrder(_) => k * k,
        EquationSpec::KdVLaguerre | EquationSpec::KdVGeneralOt(_) => k * k * k,
        EquationSpec::BurgersPowerN { n, parse } => {
            let lead = match parse {
                PowerParse::Literal => 2f64.powi(n as i32),
                PowerParse::PaperCondition => 2.0,
            };
            lead * k.powi(n as i32 + 1) - k * k
        }
        EquationSpec::VarCoefBurgers { r, .. } | EquationSpec::VarCoefGeneralOt { r, .. } => r,
    })
}

/// Where [`solve_dispersion_numeric`] evaluates the residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub x: f64,
    pub t: f64,
}

impl Default for Probe {
    fn default() -> Self {
        Self { x: 0.5, t: 0.25 }
    }
}

const TRIAL_R: [f64; 3] = [1.0, 2.0, 3.0];
const AFFINE_TOL: f64 = 1e-9;

/// Root in r of the exact-time residual at one probe point, found from two
/// trial values and checked against a third.
pub fn solve_dispersion_numeric(eq: &EquationSpec, k: f64, policy: &SeriesEvalPolicy) -> Result<f64> {
    solve_dispersion_at(eq, k, Probe::default(), policy)
}

pub fn solve_dispersion_at(eq: &EquationSpec, k: f64, probe: Probe, policy: &SeriesEvalPolicy) -> Result<f64> {
    eq.validate()?;
    if k == 0.0 || !k.is_finite() {
        return Err(EquationError::ZeroWaveNumber);
    }
    let op = eq.time_operator();
    let b = eq.coefficient_b(probe.t, policy)?;
    let rho = |r: f64| -> Result<f64> {
        let ansatz = SolutionAnsatz::new(1.0, k, op.profile(r))?;
        let u = ansatz.eval(probe.x, probe.t, policy)?;
        let f0 = ansatz.eval(probe.x, 0.0, policy)?;
        if u.abs() < 1e-6 * f0.abs() {
            return Err(EquationError::MaskedProbe { x: probe.x, t: probe.t });
        }
        let jet = Jet {
            x: probe.x,
            t: probe.t,
            u,
            ux: k * u,
            uxx: k * k * u,
            uxxx: k * k * k * u,
            tu: -r * u,
            b,
        };
        if eq.divides_by_uxx() && jet.uxx.abs() < 1e-6 * f0.abs() * k * k {
            return Err(EquationError::MaskedProbe { x: probe.x, t: probe.t });
        }
        Ok(eq.terms(&jet).iter().sum::<f64>() / u)
    };
    let [r0, r1, r2] = TRIAL_R;
    let (p0, p1, p2) = (rho(r0)?, rho(r1)?, rho(r2)?);
    let slope = (p1 - p0) / (r1 - r0);
    if slope.abs() < f64::EPSILON * (p0.abs() + p1.abs()).max(1.0) {
        return Err(EquationError::Degenerate);
    }
    let predicted = p0 + slope * (r2 - r0);
    let mismatch = (predicted - p2).abs() / p0.abs().max(p1.abs()).max(p2.abs()).max(1.0);
    if mismatch > AFFINE_TOL {
        return Err(EquationError::NotAffine(mismatch));
    }
    Ok(r0 - p0 / slope)
}
