//! The `lagcalc` command line.
//!
//! Exit codes: 0 success, 1 a verification or identity check failed,
//! 2 bad usage, configuration or parameters.

mod config;

pub use config::{expand_config, parse_config};

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::equations::{
    self, build_solution, dispersion, residual, round_significant, solve_dispersion_numeric, EquationSpec,
    PowerParse, ResidualInput, ResidualMode, ResidualSetup, SolutionAnsatz, TimeOperator,
};
use crate::fracpoly::identities::{self, IdentityStatus};
use crate::numops::Grid1D;
use crate::specfun::{self, SeriesEvalPolicy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lagcalc", version, about = "Laguerre and fractional operator calculus toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a special function at one or more points
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Check an exact solution against its equation on a grid
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Closed-form and numerically solved dispersion relation
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Dispersion(DispersionArgs),
    /// Run the operator identity suite
    #[command(args_override_self = true)]
    Identities,
    /// Write u and the pointwise residual as CSV
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionName {
    C0,
    Mlf,
    Hbw,
    #[value(name = "laguerre_poly", alias = "laguerre-poly")]
    LaguerrePoly,
    #[value(name = "lower_l", alias = "lower-l")]
    LowerL,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquationName {
    BurgersClassic,
    BurgersLaguerre,
    BurgersGeneral,
    BurgersFractional,
    BurgersHyperBessel,
    BurgersPowerN,
    BurgersHighOrder,
    KdvLaguerre,
    KdvGeneral,
    VarcoefBurgers,
    VarcoefGeneral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorName {
    Derivative,
    Laguerre,
    Caputo,
    HyperBessel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParseName {
    Literal,
    #[value(name = "paper_condition", alias = "paper-condition")]
    PaperCondition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    #[value(alias = "exact")]
    ExactTime,
    Fd,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    #[arg(long, default_value_t = 64)]
    pub max_terms: usize,
    #[arg(long, default_value_t = 1e-16)]
    pub rel_stop: f64,
    #[arg(long, default_value_t = 30.0)]
    pub arg_bound: f64,
}

impl PolicyArgs {
    fn policy(&self) -> Result<SeriesEvalPolicy, String> {
        SeriesEvalPolicy::new(self.max_terms, self.rel_stop, self.arg_bound).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FunctionName,
    /// Points, comma separated or repeated
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub at: Vec<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Degree for laguerre_poly and lower_l
    #[arg(long)]
    pub n: Option<u32>,
    /// Second variable(s) of laguerre_poly
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Vec<f64>,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EquationArgs {
    #[arg(long = "eq", value_enum)]
    pub equation: EquationName,
    /// Time operator for the general entries
    #[arg(long, value_enum)]
    pub op: Option<OperatorName>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Power of the power-n entry
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, value_enum, default_value = "literal")]
    pub parse: ParseName,
    /// Eigenvalue parameter of the variable-coefficient entries
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    pub x_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub x_max: f64,
    #[arg(long, default_value_t = 201)]
    pub nx: usize,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 401)]
    pub nt: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolutionArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[arg(long = "R", default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long)]
    pub k: f64,
    /// Replace the dispersion-relation r (negative controls)
    #[arg(long)]
    pub force_r: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    #[arg(long, value_enum, default_value = "exact-time")]
    pub mode: ModeName,
    /// Defaults to 1e-6 in exact-time mode and 1e-2 in fd mode
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub equation: EquationArgs,
    #[arg(long)]
    pub k: f64,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    #[arg(long, value_enum, default_value = "fd")]
    pub mode: ModeName,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Formats a number with 15 significant digits, switching to exponent form
/// for very small or very large magnitudes.
pub fn fmt_num(v: f64) -> String {
    let r = round_significant(v, 15);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn required(name: &str, v: Option<f64>) -> Result<f64, String> {
    v.ok_or_else(|| format!("--{name} is required here"))
}

impl EquationArgs {
    fn operator(&self, default: Option<OperatorName>) -> Result<TimeOperator, String> {
        let name = self.op.or(default).ok_or("--op is required for this equation")?;
        Ok(match name {
            OperatorName::Derivative => TimeOperator::Derivative,
            OperatorName::Laguerre => TimeOperator::Laguerre,
            OperatorName::Caputo => TimeOperator::Caputo {
                alpha: required("alpha", self.alpha)?,
            },
            OperatorName::HyperBessel => TimeOperator::HyperBessel {
                alpha: required("alpha", self.alpha)?,
                beta: required("beta", self.beta)?,
                nu: required("nu", self.nu)?,
            },
        })
    }

    fn parse_mode(&self) -> PowerParse {
        match self.parse {
            ParseName::Literal => PowerParse::Literal,
            ParseName::PaperCondition => PowerParse::PaperCondition,
        }
    }

    /// The catalog entry; `k` feeds the variable-coefficient entries.
    pub fn spec(&self, k: f64) -> Result<EquationSpec, String> {
        let spec = match self.equation {
            EquationName::BurgersClassic => EquationSpec::BurgersClassic,
            EquationName::BurgersLaguerre => EquationSpec::BurgersLaguerre,
            EquationName::BurgersGeneral => EquationSpec::BurgersGeneralOt(self.operator(None)?),
            EquationName::BurgersFractional => EquationSpec::BurgersFractional {
                alpha: required("alpha", self.alpha)?,
            },
            EquationName::BurgersHyperBessel => EquationSpec::BurgersHyperBessel {
                alpha: required("alpha", self.alpha)?,
                beta: required("beta", self.beta)?,
                nu: required("nu", self.nu)?,
            },
            EquationName::BurgersPowerN => EquationSpec::BurgersPowerN {
                n: self.n,
                parse: self.parse_mode(),
            },
            EquationName::BurgersHighOrder => {
                EquationSpec::BurgersHighOrder(self.operator(Some(OperatorName::Laguerre))?)
            }
            EquationName::KdvLaguerre => EquationSpec::KdVLaguerre,
            EquationName::KdvGeneral => EquationSpec::KdVGeneralOt(self.operator(None)?),
            EquationName::VarcoefBurgers => EquationSpec::VarCoefBurgers { k, r: self.r },
            EquationName::VarcoefGeneral => EquationSpec::VarCoefGeneralOt {
                op: self.operator(None)?,
                k,
                r: self.r,
            },
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

impl GridArgs {
    fn grids(&self) -> Result<(Grid1D, Grid1D), String> {
        let gx = Grid1D::new(self.x_min, self.x_max, self.nx).map_err(|e| e.to_string())?;
        let gt = Grid1D::new(self.t_min, self.t_max, self.nt).map_err(|e| e.to_string())?;
        Ok((gx, gt))
    }
}

impl ModeName {
    fn mode(self) -> ResidualMode {
        match self {
            Self::ExactTime => ResidualMode::ExactTime,
            Self::Fd => ResidualMode::Fd,
        }
    }
}

impl SolutionArgs {
    fn build(&self, mode: ResidualMode) -> Result<(EquationSpec, SolutionAnsatz, ResidualSetup), String> {
        let eq = self.equation.spec(self.k)?;
        let mut ansatz = build_solution(&eq, self.amplitude, self.k).map_err(|e| e.to_string())?;
        if let Some(r) = self.force_r {
            ansatz = ansatz.with_r(r).map_err(|e| e.to_string())?;
        }
        let (gx, gt) = self.grid.grids()?;
        let setup = ResidualSetup::new(gx, gt, mode).with_policy(self.policy.policy()?);
        Ok((eq, ansatz, setup))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Dispersion(a) => cmd_dispersion(a, out),
        Command::Identities => cmd_identities(out),
        Command::Table(a) => cmd_table(a, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: io::Error) -> String {
    format!("write failed: {e}")
}

pub fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, String> {
    let policy = a.policy.policy()?;
    let se = |e: specfun::SpecialFunctionError| e.to_string();
    let mut lines = Vec::new();
    match a.function {
        FunctionName::LaguerrePoly => {
            let n = a.n.ok_or("--n is required for laguerre_poly")?;
            if a.y.is_empty() {
                return Err("--y is required for laguerre_poly".into());
            }
            lines.push("x,y,value".to_string());
            for &x in &a.at {
                for &y in &a.y {
                    let v = specfun::laguerre_poly(n, x, y).map_err(se)?;
                    lines.push(format!("{},{},{}", fmt_num(x), fmt_num(y), fmt_num(v)));
                }
            }
        }
        f => {
            lines.push("arg,value".to_string());
            for &x in &a.at {
                let v = match f {
                    FunctionName::C0 => specfun::tricomi_c0(x, &policy),
                    FunctionName::Mlf => specfun::mittag_leffler(required("alpha", a.alpha)?, x, &policy),
                    FunctionName::Hbw => specfun::hyper_bessel_w(
                        required("alpha", a.alpha)?,
                        required("beta", a.beta)?,
                        required("nu", a.nu)?,
                        x,
                        &policy,
                    ),
                    FunctionName::LowerL => Ok(specfun::lower_l(a.n.ok_or("--n is required for lower_l")?, x)),
                    FunctionName::LaguerrePoly => unreachable!(),
                }
                .map_err(se)?;
                lines.push(format!("{},{}", fmt_num(x), fmt_num(v)));
            }
        }
    }
    for line in lines {
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, String> {
    let mode = a.mode.mode();
    let (eq, ansatz, setup) = a.solution.build(mode)?;
    let tol = a.tol.unwrap_or(match mode {
        ResidualMode::ExactTime => 1e-6,
        ResidualMode::Fd => 1e-2,
    });
    let report = equations::verify(&eq, &ansatz, &setup, tol).map_err(|e| e.to_string())?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    writeln!(out, "{text}").map_err(io_err)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

pub fn cmd_dispersion(a: &DispersionArgs, out: &mut dyn Write) -> Result<i32, String> {
    let policy = a.policy.policy()?;
    let eq = a.equation.spec(a.k)?;
    let closed = |eq: &EquationSpec| dispersion(eq, a.k).map_err(|e| e.to_string());
    let numeric = |eq: &EquationSpec| solve_dispersion_numeric(eq, a.k, &policy).map_err(|e| e.to_string());
    let entry = |c: f64, n: f64| json!({ "closed_form": round_significant(c, 15), "numeric": round_significant(n, 15), "agree": agree(c, n) });
    let (value, ok) = if let EquationSpec::BurgersPowerN { n, .. } = eq {
        let literal = EquationSpec::BurgersPowerN {
            n,
            parse: PowerParse::Literal,
        };
        let paper = EquationSpec::BurgersPowerN {
            n,
            parse: PowerParse::PaperCondition,
        };
        // the literal residual is the arbiter for both readings
        let arbiter = numeric(&literal)?;
        let lit = closed(&literal)?;
        let pap = closed(&paper)?;
        (
            json!({ "literal": entry(lit, arbiter), "paper_condition": entry(pap, arbiter) }),
            agree(lit, arbiter),
        )
    } else {
        let c = closed(&eq)?;
        let n = numeric(&eq)?;
        (entry(c, n), agree(c, n))
    };
    let text = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
    writeln!(out, "{text}").map_err(io_err)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_identities(out: &mut dyn Write) -> Result<i32, String> {
    let checks = identities::run_all();
    let mut failed = 0;
    let mut warned = 0;
    for c in &checks {
        match c.status {
            IdentityStatus::Fail => failed += 1,
            IdentityStatus::PhaseWarning => warned += 1,
            IdentityStatus::Pass => {}
        }
        writeln!(out, "{c}").map_err(io_err)?;
    }
    writeln!(
        out,
        "{} checks: {} passed, {} failed, {} phase warnings",
        checks.len(),
        checks.len() - failed - warned,
        failed,
        warned
    )
    .map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32, String> {
    let (eq, ansatz, setup) = a.solution.build(a.mode.mode())?;
    let field = residual(&eq, ResidualInput::Ansatz(&ansatz), &setup).map_err(|e| e.to_string())?;
    let mut file;
    let sink: &mut dyn Write = match &a.out {
        Some(path) => {
            file = BufWriter::new(File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?);
            &mut file
        }
        None => out,
    };
    writeln!(sink, "x,t,u,residual").map_err(io_err)?;
    for ix in 0..field.grid_x.count() {
        for jt in 0..field.grid_t.count() {
            let x = field.grid_x.node(ix);
            let t = field.grid_t.node(jt);
            let u = field.u[field.index(ix, jt)];
            let res = field.value(ix, jt).map(fmt_num).unwrap_or_default();
            writeln!(sink, "{},{},{},{}", fmt_num(x), fmt_num(t), fmt_num(u), res).map_err(io_err)?;
        }
    }
    sink.flush().map_err(io_err)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["lagcalc"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_rows() {
        let (code, out, _) = call(&["eval", "--fn", "c0", "--at", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "arg,value\n0,1\n");
        let (_, out, _) = call(&["eval", "--fn", "mlf", "--alpha", "1", "--at", "1"]);
        assert!(out.contains("1,2.71828182845905"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["eval", "--fn", "nope", "--at", "0"]).0, 2);
        assert_eq!(call(&["verify", "--eq", "burgers-laguerre"]).0, 2);
        assert_eq!(call(&["verify", "--eq", "burgers-fractional", "--k", "1"]).0, 2);
        assert_eq!(call(&["eval", "--fn", "mlf", "--at", "1"]).0, 2);
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_num(1.5e-16), "1.5e-16");
        assert_eq!(fmt_num(0.0), "0");
    }
}
