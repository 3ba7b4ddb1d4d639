use serde::{Serialize, Serializer};
use serde_json::Value;

use super::{residual, EquationSpec, ResidualInput, ResidualSetup, Result, SolutionAnsatz};

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(v: f64, digits: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

fn sig15<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_significant(*v, 15))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    #[serde(serialize_with = "sig15")]
    pub x_min: f64,
    #[serde(serialize_with = "sig15")]
    pub x_max: f64,
    pub nx: usize,
    #[serde(serialize_with = "sig15")]
    pub t_min: f64,
    #[serde(serialize_with = "sig15")]
    pub t_max: f64,
    pub nt: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub equation: String,
    pub params: Value,
    #[serde(rename = "R", serialize_with = "sig15")]
    pub amplitude: f64,
    #[serde(serialize_with = "sig15")]
    pub k: f64,
    #[serde(serialize_with = "sig15")]
    pub r: f64,
    pub mode: String,
    pub grid: GridMeta,
    #[serde(serialize_with = "sig15")]
    pub max_abs: f64,
    #[serde(serialize_with = "sig15")]
    pub rms: f64,
    #[serde(serialize_with = "sig15")]
    pub normalized: f64,
    #[serde(serialize_with = "sig15")]
    pub masked_fraction: f64,
    #[serde(serialize_with = "sig15")]
    pub tolerance: f64,
    pub pass: bool,
}

/// Residual statistics of `ansatz` in `eq`; passes when the normalized
/// residual is within `tol`.
pub fn verify(eq: &EquationSpec, ansatz: &SolutionAnsatz, setup: &ResidualSetup, tol: f64) -> Result<ResidualReport> {
    let field = residual(eq, ResidualInput::Ansatz(ansatz), setup)?;
    let stats = field.stats();
    Ok(ResidualReport {
        equation: eq.name().to_string(),
        params: eq.params(),
        amplitude: ansatz.amplitude,
        k: ansatz.k,
        r: ansatz.r(),
        mode: setup.mode.name().to_string(),
        grid: GridMeta {
            x_min: setup.grid_x.start(),
            x_max: setup.grid_x.stop(),
            nx: setup.grid_x.count(),
            t_min: setup.grid_t.start(),
            t_max: setup.grid_t.stop(),
            nt: setup.grid_t.count(),
        },
        max_abs: stats.max_abs,
        rms: stats.rms,
        normalized: stats.normalized,
        masked_fraction: stats.masked_fraction,
        tolerance: tol,
        pass: stats.normalized <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{build_solution, ResidualMode, TimeOperator};
    use crate::numops::Grid1D;

    fn setup(mode: ResidualMode) -> ResidualSetup {
        ResidualSetup::new(
            Grid1D::new(0.0, 1.0, 41).unwrap(),
            Grid1D::new(0.0, 1.0, 41).unwrap(),
            mode,
        )
    }

    #[test]
    fn rounding() {
        assert_eq!(round_significant(0.1 + 0.2, 15), 0.3);
        assert_eq!(round_significant(0.0, 15), 0.0);
        assert_eq!(round_significant(123456.789, 3), 123000.0);
    }

    #[test]
    fn report_examples() {
        let high = EquationSpec::BurgersHighOrder(TimeOperator::Laguerre);
        let a = build_solution(&high, 1.0, 1.0).unwrap();
        assert!(verify(&high, &a, &setup(ResidualMode::ExactTime), 1e-6).unwrap().pass);

        let kdv = EquationSpec::KdVLaguerre;
        let a = build_solution(&kdv, 1.0, 1.5).unwrap();
        let rep = verify(&kdv, &a, &setup(ResidualMode::ExactTime), 1e-6).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.r, 3.375);
    }

    #[test]
    fn json_schema() {
        let eq = EquationSpec::BurgersLaguerre;
        let a = build_solution(&eq, 1.0, 1.0).unwrap();
        let rep = verify(&eq, &a, &setup(ResidualMode::ExactTime), 1e-6).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        for key in [
            "equation",
            "params",
            "R",
            "k",
            "r",
            "mode",
            "grid",
            "max_abs",
            "rms",
            "normalized",
            "masked_fraction",
            "tolerance",
            "pass",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        for key in ["x_min", "x_max", "nx", "t_min", "t_max", "nt"] {
            assert!(v["grid"].get(key).is_some(), "{key}");
        }
        assert_eq!(v["mode"], "exact-time");
        assert_eq!(v["r"], 1.0);
    }
}
