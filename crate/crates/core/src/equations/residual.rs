use std::fmt;
use std::str::FromStr;

use super::{EquationError, EquationSpec, Jet, Result, SolutionAnsatz};
use crate::numops::{self, Grid1D, MaskedSamples};
use crate::specfun::SeriesEvalPolicy;

/// Nodes with |u| (or |u_xx| where the equation divides by it) below this
/// fraction of the grid maximum are excluded.
pub const ZERO_MASK: f64 = 1e-6;

/// Default share of the time window masked as L1 start-up layer.
pub const STARTUP_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMode {
    /// Time operator replaced by −r·u; spatial derivatives analytic.
    ExactTime,
    /// Every derivative taken numerically on the grid.
    Fd,
}

impl ResidualMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::ExactTime => "exact-time",
            Self::Fd => "fd",
        }
    }
}

impl fmt::Display for ResidualMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ResidualMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact-time" | "exact" => Ok(Self::ExactTime),
            "fd" => Ok(Self::Fd),
            other => Err(format!("unknown mode '{other}' (exact-time, fd)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSetup {
    pub grid_x: Grid1D,
    pub grid_t: Grid1D,
    pub mode: ResidualMode,
    pub policy: SeriesEvalPolicy,
    /// Fraction of the time window treated as start-up layer for L1-based
    /// operators in FD mode.
    pub startup_fraction: f64,
}

impl ResidualSetup {
    pub fn new(grid_x: Grid1D, grid_t: Grid1D, mode: ResidualMode) -> Self {
        Self {
            grid_x,
            grid_t,
            mode,
            policy: SeriesEvalPolicy::default(),
            startup_fraction: STARTUP_FRACTION,
        }
    }

    pub fn with_policy(mut self, policy: SeriesEvalPolicy) -> Self {
        self.policy = policy;
        self
    }
}

/// Samples of u on a tensor grid, x-major: `values[ix * nt + jt]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub grid_x: Grid1D,
    pub grid_t: Grid1D,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn new(grid_x: Grid1D, grid_t: Grid1D, values: Vec<f64>) -> Result<Self> {
        let expected = grid_x.count() * grid_t.count();
        if values.len() != expected {
            return Err(EquationError::FieldShape {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { grid_x, grid_t, values })
    }

    pub fn from_ansatz(a: &SolutionAnsatz, grid_x: &Grid1D, grid_t: &Grid1D, policy: &SeriesEvalPolicy) -> Result<Self> {
        let f = a.profile.sample(grid_t, policy)?;
        let mut values = Vec::with_capacity(grid_x.count() * f.len());
        for x in grid_x.nodes() {
            let e = a.amplitude * (a.k * x).exp();
            values.extend(f.iter().map(|v| e * v));
        }
        Self::new(grid_x.clone(), grid_t.clone(), values)
    }

    pub fn get(&self, ix: usize, jt: usize) -> f64 {
        self.values[ix * self.grid_t.count() + jt]
    }

    /// Time series at x-node `ix`.
    pub fn column(&self, ix: usize) -> &[f64] {
        let nt = self.grid_t.count();
        &self.values[ix * nt..(ix + 1) * nt]
    }

    /// Spatial profile at t-node `jt`.
    pub fn row(&self, jt: usize) -> Vec<f64> {
        (0..self.grid_x.count()).map(|ix| self.get(ix, jt)).collect()
    }
}

pub enum ResidualInput<'a> {
    Ansatz(&'a SolutionAnsatz),
    Field(&'a SampledField),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Valid,
    /// Outside the reach of a stencil or inside the start-up layer.
    Stencil,
    /// Division by a (near) zero of u or u_xx.
    ZeroMasked,
}

/// Pointwise residual on the grid, x-major like [`SampledField`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub grid_x: Grid1D,
    pub grid_t: Grid1D,
    pub u: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest single-term magnitude at each node.
    pub scale: Vec<f64>,
    pub status: Vec<NodeStatus>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualStats {
    pub max_abs: f64,
    pub rms: f64,
    pub normalized: f64,
    pub masked_fraction: f64,
    pub valid_nodes: usize,
}

impl ResidualField {
    pub fn index(&self, ix: usize, jt: usize) -> usize {
        ix * self.grid_t.count() + jt
    }

    /// Residual at a node, or None when the node is excluded.
    pub fn value(&self, ix: usize, jt: usize) -> Option<f64> {
        let i = self.index(ix, jt);
        (self.status[i] == NodeStatus::Valid).then(|| self.values[i])
    }

    /// Share of nodes excluded by the zero mask.
    pub fn masked_fraction(&self) -> f64 {
        let masked = self.status.iter().filter(|s| **s == NodeStatus::ZeroMasked).count();
        masked as f64 / self.status.len() as f64
    }

    pub fn stats(&self) -> ResidualStats {
        let mut max_abs = 0.0f64;
        let mut sum_sq = 0.0;
        let mut scale = 0.0f64;
        let mut count = 0;
        for i in 0..self.values.len() {
            if self.status[i] != NodeStatus::Valid {
                continue;
            }
            let v = self.values[i].abs();
            max_abs = max_abs.max(v);
            sum_sq += v * v;
            scale = scale.max(self.scale[i]);
            count += 1;
        }
        let rms = if count > 0 { (sum_sq / count as f64).sqrt() } else { 0.0 };
        let normalized = if scale > 0.0 {
            max_abs / scale
        } else if max_abs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        ResidualStats {
            max_abs,
            rms,
            normalized,
            masked_fraction: self.masked_fraction(),
            valid_nodes: count,
        }
    }
}

/// Evaluates the left-hand side of `eq` on the setup's grid.
pub fn residual(eq: &EquationSpec, input: ResidualInput<'_>, setup: &ResidualSetup) -> Result<ResidualField> {
    eq.validate()?;
    let op = eq.time_operator();
    if op.needs_nonnegative_time() && setup.grid_t.start() < 0.0 {
        return Err(EquationError::NegativeTime(setup.grid_t.start()));
    }
    match (setup.mode, input) {
        (ResidualMode::ExactTime, ResidualInput::Ansatz(a)) => exact_time(eq, a, setup),
        (ResidualMode::ExactTime, ResidualInput::Field(_)) => Err(EquationError::ExactTimeNeedsAnsatz),
        (ResidualMode::Fd, ResidualInput::Ansatz(a)) => {
            let field = SampledField::from_ansatz(a, &setup.grid_x, &setup.grid_t, &setup.policy)?;
            finite_difference(eq, &field, setup)
        }
        (ResidualMode::Fd, ResidualInput::Field(field)) => {
            if field.grid_x != setup.grid_x || field.grid_t != setup.grid_t {
                let grids = SampledField::new(setup.grid_x.clone(), setup.grid_t.clone(), field.values.clone())?;
                finite_difference(eq, &grids, setup)
            } else {
                finite_difference(eq, field, setup)
            }
        }
    }
}

fn exact_time(eq: &EquationSpec, a: &SolutionAnsatz, setup: &ResidualSetup) -> Result<ResidualField> {
    let op = eq.time_operator();
    if a.profile.operator() != op {
        return Err(EquationError::ProfileMismatch {
            profile: a.profile.name(),
            operator: op.name(),
        });
    }
    let field = SampledField::from_ansatz(a, &setup.grid_x, &setup.grid_t, &setup.policy)?;
    let b = coefficient_samples(eq, setup)?;
    let (k, r) = (a.k, a.r());
    let jets = |ix: usize, jt: usize| -> Option<Jet> {
        let u = field.get(ix, jt);
        Some(Jet {
            x: setup.grid_x.node(ix),
            t: setup.grid_t.node(jt),
            u,
            ux: k * u,
            uxx: k * k * u,
            uxxx: k * k * k * u,
            tu: -r * u,
            b: b[jt],
        })
    };
    assemble(eq, &field, jets)
}

fn finite_difference(eq: &EquationSpec, field: &SampledField, setup: &ResidualSetup) -> Result<ResidualField> {
    let op = eq.time_operator();
    let (gx, gt) = (&setup.grid_x, &setup.grid_t);
    let (nx, nt) = (gx.count(), gt.count());
    let startup = if op.uses_l1() {
        numops::startup_nodes(gt, setup.startup_fraction)
    } else {
        0
    };
    let time: Vec<MaskedSamples> = (0..nx)
        .map(|ix| {
            let mut s = op.apply_fd(field.column(ix), gt)?;
            s.mask_before(startup);
            Ok(s)
        })
        .collect::<Result<_>>()?;
    let third = eq.needs_third_derivative();
    let space: Vec<[MaskedSamples; 3]> = (0..nt)
        .map(|jt| {
            let row = field.row(jt);
            let d3 = if third {
                numops::fd_derivative(&row, gx.step(), 3)?
            } else {
                MaskedSamples {
                    values: vec![0.0; nx],
                    valid: vec![true; nx],
                }
            };
            Ok([
                numops::fd_derivative(&row, gx.step(), 1)?,
                numops::fd_derivative(&row, gx.step(), 2)?,
                d3,
            ])
        })
        .collect::<Result<_>>()?;
    let b = coefficient_samples(eq, setup)?;
    let jets = |ix: usize, jt: usize| -> Option<Jet> {
        let tu = &time[ix];
        let [d1, d2, d3] = &space[jt];
        if !(tu.valid[jt] && d1.valid[ix] && d2.valid[ix] && d3.valid[ix]) {
            return None;
        }
        Some(Jet {
            x: gx.node(ix),
            t: gt.node(jt),
            u: field.get(ix, jt),
            ux: d1.values[ix],
            uxx: d2.values[ix],
            uxxx: d3.values[ix],
            tu: tu.values[jt],
            b: b[jt],
        })
    };
    assemble(eq, field, jets)
}

fn coefficient_samples(eq: &EquationSpec, setup: &ResidualSetup) -> Result<Vec<f64>> {
    match eq.coefficient_profile() {
        Some(p) => p.sample(&setup.grid_t, &setup.policy),
        None => Ok(vec![0.0; setup.grid_t.count()]),
    }
}

fn assemble<F>(eq: &EquationSpec, field: &SampledField, jet_at: F) -> Result<ResidualField>
where
    F: Fn(usize, usize) -> Option<Jet>,
{
    let (nx, nt) = (field.grid_x.count(), field.grid_t.count());
    let jets: Vec<Option<Jet>> = (0..nx)
        .flat_map(|ix| (0..nt).map(move |jt| (ix, jt)))
        .map(|(ix, jt)| jet_at(ix, jt))
        .collect();
    let u_max = field.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let uxx_max = jets.iter().flatten().fold(0.0f64, |m, j| m.max(j.uxx.abs()));
    let n = jets.len();
    let mut values = vec![0.0; n];
    let mut scale = vec![0.0; n];
    let mut status = vec![NodeStatus::Stencil; n];
    for (i, jet) in jets.iter().enumerate() {
        let masked_u = field.values[i].abs() < ZERO_MASK * u_max;
        let Some(j) = jet else {
            if masked_u {
                status[i] = NodeStatus::ZeroMasked;
            }
            continue;
        };
        if masked_u || (eq.divides_by_uxx() && j.uxx.abs() < ZERO_MASK * uxx_max) {
            status[i] = NodeStatus::ZeroMasked;
            continue;
        }
        let terms = eq.terms(j);
        values[i] = terms.iter().sum();
        scale[i] = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        status[i] = NodeStatus::Valid;
    }
    let out = ResidualField {
        grid_x: field.grid_x.clone(),
        grid_t: field.grid_t.clone(),
        u: field.values.clone(),
        values,
        scale,
        status,
    };
    let masked = out.masked_fraction();
    if masked > 0.5 || !out.status.contains(&NodeStatus::Valid) {
        return Err(EquationError::TooManyMasked(100.0 * masked));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{build_solution, dispersion, PowerParse, TimeOperator};

    fn unit_setup(nx: usize, nt: usize, mode: ResidualMode) -> ResidualSetup {
        ResidualSetup::new(
            Grid1D::new(0.0, 1.0, nx).unwrap(),
            Grid1D::new(0.0, 1.0, nt).unwrap(),
            mode,
        )
    }

    fn normalized(eq: &EquationSpec, a: &SolutionAnsatz, setup: &ResidualSetup) -> f64 {
        residual(eq, ResidualInput::Ansatz(a), setup).unwrap().stats().normalized
    }

    fn catalog() -> Vec<EquationSpec> {
        let ops = [
            TimeOperator::Derivative,
            TimeOperator::Laguerre,
            TimeOperator::Caputo { alpha: 0.5 },
            TimeOperator::HyperBessel {
                alpha: 0.5,
                beta: 0.5,
                nu: 1.0,
            },
        ];
        let mut out = vec![
            EquationSpec::BurgersClassic,
            EquationSpec::BurgersLaguerre,
            EquationSpec::BurgersFractional { alpha: 0.5 },
            EquationSpec::BurgersHyperBessel {
                alpha: 0.3,
                beta: 0.6,
                nu: 1.2,
            },
            EquationSpec::BurgersPowerN {
                n: 2,
                parse: PowerParse::Literal,
            },
            EquationSpec::BurgersPowerN {
                n: 3,
                parse: PowerParse::PaperCondition,
            },
            EquationSpec::KdVLaguerre,
            EquationSpec::VarCoefBurgers { k: 1.0, r: 1.0 },
        ];
        for op in ops {
            out.push(EquationSpec::BurgersGeneralOt(op));
            out.push(EquationSpec::BurgersHighOrder(op));
            out.push(EquationSpec::KdVGeneralOt(op));
            out.push(EquationSpec::VarCoefGeneralOt { op, k: 1.0, r: 0.7 });
        }
        out
    }

    #[test]
    fn laguerre_burgers_exact_and_fd() {
        let eq = EquationSpec::BurgersLaguerre;
        let a = build_solution(&eq, 1.0, 1.0).unwrap();
        assert!(normalized(&eq, &a, &unit_setup(201, 401, ResidualMode::ExactTime)) <= 1e-6);
        assert!(normalized(&eq, &a, &unit_setup(201, 401, ResidualMode::Fd)) <= 5e-3);
    }

    #[test]
    fn wrong_r_is_caught() {
        let eq = EquationSpec::BurgersLaguerre;
        let k = 1.5;
        let a = build_solution(&eq, 1.0, k).unwrap().with_r(2.0 * k * k).unwrap();
        assert!(normalized(&eq, &a, &unit_setup(41, 41, ResidualMode::ExactTime)) >= 0.3);
    }

    #[test]
    fn catalog_passes_and_perturbed_r_fails() {
        let setup = unit_setup(41, 41, ResidualMode::ExactTime);
        for eq in catalog() {
            let k = match eq {
                EquationSpec::VarCoefBurgers { k, .. } | EquationSpec::VarCoefGeneralOt { k, .. } => k,
                _ => 0.8,
            };
            let a = build_solution(&eq, 1.0, k).unwrap();
            let good = normalized(&eq, &a, &setup);
            assert!(good <= 1e-6, "{}: {good}", eq.name());
            if matches!(eq, EquationSpec::VarCoefBurgers { .. } | EquationSpec::VarCoefGeneralOt { .. }) {
                continue;
            }
            let bad = normalized(&eq, &a.with_r(1.5 * a.r()).unwrap(), &setup);
            assert!(bad >= 0.1, "{}: perturbed {bad}", eq.name());
        }
    }

    #[test]
    fn general_burgers_is_profile_independent() {
        let setup = unit_setup(41, 41, ResidualMode::ExactTime);
        for op in [
            TimeOperator::Derivative,
            TimeOperator::Laguerre,
            TimeOperator::Caputo { alpha: 0.7 },
            TimeOperator::HyperBessel {
                alpha: 0.5,
                beta: 0.5,
                nu: 0.7,
            },
        ] {
            let eq = EquationSpec::BurgersGeneralOt(op);
            let k = 1.3;
            assert_eq!(dispersion(&eq, k).unwrap(), k * k);
            let a = build_solution(&eq, 1.0, k).unwrap();
            assert!(normalized(&eq, &a, &setup) <= 1e-6, "{op:?}");
        }
    }

    #[test]
    fn amplitude_scaling_is_covariant() {
        let setup = unit_setup(41, 41, ResidualMode::ExactTime);
        for eq in catalog() {
            if matches!(eq, EquationSpec::VarCoefBurgers { .. } | EquationSpec::VarCoefGeneralOt { .. }) {
                continue;
            }
            let a = build_solution(&eq, 1.0, 0.9).unwrap();
            for c in [0.5, 3.0] {
                let scaled = build_solution(&eq, c, 0.9).unwrap();
                assert_eq!(scaled.r(), a.r());
                assert!(normalized(&eq, &scaled, &setup) <= 1e-6, "{} c={c}", eq.name());
            }
        }
    }

    #[test]
    fn near_unit_order_matches_classical_field() {
        let setup = unit_setup(101, 201, ResidualMode::Fd);
        let frac = EquationSpec::BurgersFractional { alpha: 0.999 };
        let classic = EquationSpec::BurgersClassic;
        let rf = residual(&frac, ResidualInput::Ansatz(&build_solution(&frac, 1.0, 1.0).unwrap()), &setup).unwrap();
        let rc = residual(
            &classic,
            ResidualInput::Ansatz(&build_solution(&classic, 1.0, 1.0).unwrap()),
            &setup,
        )
        .unwrap();
        let mut worst = 0.0f64;
        for i in 0..rf.values.len() {
            if rf.status[i] == NodeStatus::Valid && rc.status[i] == NodeStatus::Valid {
                worst = worst.max((rf.u[i] - rc.u[i]).abs()).max((rf.values[i] - rc.values[i]).abs());
            }
        }
        assert!(worst <= 1e-2, "{worst}");
    }

    #[test]
    fn fd_error_is_second_order() {
        let eq = EquationSpec::BurgersLaguerre;
        let a = build_solution(&eq, 1.0, 1.0).unwrap();
        let coarse = normalized(&eq, &a, &unit_setup(51, 101, ResidualMode::Fd));
        let fine = normalized(&eq, &a, &unit_setup(101, 201, ResidualMode::Fd));
        assert!(coarse / fine >= 3.5, "{coarse} / {fine}");
    }

    #[test]
    fn hyper_bessel_fd_budget() {
        let eq = EquationSpec::BurgersHyperBessel {
            alpha: 0.5,
            beta: 0.5,
            nu: 1.0,
        };
        let a = build_solution(&eq, 1.0, 1.0).unwrap();
        let n = normalized(&eq, &a, &unit_setup(201, 401, ResidualMode::Fd));
        assert!(n <= 1e-2, "{n}");
    }

    #[test]
    fn zero_of_tricomi_is_masked() {
        let z0 = 1.4457964907366961303f64;
        // k² · 0.5 lands on the first zero at the grid's midpoint
        let k = (2.0 * z0).sqrt();
        let eq = EquationSpec::BurgersLaguerre;
        let a = build_solution(&eq, 1.0, k).unwrap();
        let setup = unit_setup(11, 11, ResidualMode::ExactTime);
        let field = residual(&eq, ResidualInput::Ansatz(&a), &setup).unwrap();
        for ix in 0..11 {
            assert_eq!(field.status[field.index(ix, 5)], NodeStatus::ZeroMasked);
        }
        assert!((field.masked_fraction() - 1.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn exact_time_rejects_data_and_mismatched_profiles() {
        let setup = unit_setup(11, 11, ResidualMode::ExactTime);
        let eq = EquationSpec::BurgersLaguerre;
        let a = build_solution(&EquationSpec::BurgersClassic, 1.0, 1.0).unwrap();
        assert!(matches!(
            residual(&eq, ResidualInput::Ansatz(&a), &setup),
            Err(EquationError::ProfileMismatch { .. })
        ));
        let field = SampledField::from_ansatz(&a, &setup.grid_x, &setup.grid_t, &setup.policy).unwrap();
        assert_eq!(
            residual(&eq, ResidualInput::Field(&field), &setup),
            Err(EquationError::ExactTimeNeedsAnsatz)
        );
    }

    #[test]
    fn mostly_zero_field_is_rejected() {
        let gx = Grid1D::new(0.0, 1.0, 11).unwrap();
        let gt = Grid1D::new(0.0, 1.0, 11).unwrap();
        let mut values = vec![0.0; 121];
        values[60] = 1.0;
        let field = SampledField::new(gx.clone(), gt.clone(), values).unwrap();
        let setup = ResidualSetup::new(gx, gt, ResidualMode::Fd);
        assert!(matches!(
            residual(&EquationSpec::BurgersClassic, ResidualInput::Field(&field), &setup),
            Err(EquationError::TooManyMasked(_))
        ));
    }
}
