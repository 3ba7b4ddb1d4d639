use super::{phase, PhasedPowerSeries, Result, SeriesError, Term, EXPONENT_TOL};
use crate::specfun::{self, gamma_ratio};

fn is_constant(exponent: f64) -> bool {
    exponent.abs() <= EXPONENT_TOL
}

/// Term-wise d/dx. Constant terms vanish.
pub fn differentiate(s: &PhasedPowerSeries) -> Result<PhasedPowerSeries> {
    PhasedPowerSeries::new(
        s.terms()
            .iter()
            .filter(|t| !is_constant(t.exponent))
            .map(|t| Term::new(t.coeff * t.exponent, t.exponent - 1.0))
            .collect(),
    )
}

/// Multiplication by x^γ.
pub fn multiply_by_power(s: &PhasedPowerSeries, gamma: f64) -> Result<PhasedPowerSeries> {
    PhasedPowerSeries::new(
        s.terms()
            .iter()
            .map(|t| Term::new(t.coeff, t.exponent + gamma))
            .collect(),
    )
}

fn check_order(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(SeriesError::Parameter {
            name,
            value,
            range: "(0, 1]",
        })
    }
}

/// Caputo derivative of order α ∈ (0, 1] through the power rule
/// `D^α x^p = Γ(p+1)/Γ(p−α+1) x^{p−α}`; constants are annihilated.
pub fn caputo(s: &PhasedPowerSeries, alpha: f64) -> Result<PhasedPowerSeries> {
    check_order("alpha", alpha)?;
    if alpha == 1.0 {
        return differentiate(s);
    }
    let mut out = Vec::with_capacity(s.len());
    for t in s.terms() {
        if is_constant(t.exponent) {
            continue;
        }
        if t.exponent < 0.0 {
            return Err(SeriesError::CaputoDomain(t.exponent));
        }
        let ratio = gamma_ratio(t.exponent + 1.0, t.exponent - alpha + 1.0)?;
        out.push(Term::new(t.coeff * ratio, t.exponent - alpha));
    }
    PhasedPowerSeries::new(out)
}

/// Laguerre derivative `−d/dx x d/dx`: `(c, p) → (−c p², p − 1)`.
pub fn laguerre_derivative(s: &PhasedPowerSeries) -> Result<PhasedPowerSeries> {
    PhasedPowerSeries::new(
        s.terms()
            .iter()
            .filter(|t| !is_constant(t.exponent))
            .map(|t| Term::new(-t.coeff * (t.exponent * t.exponent), t.exponent - 1.0))
            .collect(),
    )
}

pub const MAX_LAGUERRE_POWER: u32 = 16;

fn check_power(m: u32) -> Result<()> {
    if (1..=MAX_LAGUERRE_POWER).contains(&m) {
        Ok(())
    } else {
        Err(SeriesError::Parameter {
            name: "m",
            value: m as f64,
            range: "1..=16",
        })
    }
}

/// m-fold Laguerre derivative.
pub fn laguerre_power(s: &PhasedPowerSeries, m: u32) -> Result<PhasedPowerSeries> {
    check_power(m)?;
    (0..m).try_fold(s.clone(), |acc, _| laguerre_derivative(&acc))
}

/// `(−1)^m ∂^m x^m ∂^m` evaluated directly, without iterating the Laguerre
/// derivative.
pub fn laguerre_power_direct(s: &PhasedPowerSeries, m: u32) -> Result<PhasedPowerSeries> {
    check_power(m)?;
    let mut acc = (0..m).try_fold(s.clone(), |acc, _| differentiate(&acc))?;
    acc = multiply_by_power(&acc, m as f64)?;
    acc = (0..m).try_fold(acc, |acc, _| differentiate(&acc))?;
    Ok(acc.scale(phase(m as f64)))
}

fn check_hyper_bessel(alpha: f64, beta: f64, nu: f64) -> Result<()> {
    check_order("alpha", alpha)?;
    check_order("beta", beta)?;
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(SeriesError::Parameter {
            name: "nu",
            value: nu,
            range: "(0, inf)",
        });
    }
    Ok(())
}

/// Hyper-Bessel operator `x^{α−ν} D^β (x^ν D^α ·)` with Caputo stages.
pub fn hyper_bessel_op(s: &PhasedPowerSeries, alpha: f64, beta: f64, nu: f64) -> Result<PhasedPowerSeries> {
    check_hyper_bessel(alpha, beta, nu)?;
    let inner = multiply_by_power(&caputo(s, alpha)?, nu)?;
    multiply_by_power(&caputo(&inner, beta)?, alpha - nu)
}

/// Fractional Laguerre-type derivative `(−1)^β x^{α−ν} D^β (x^ν D^α ·)`,
/// with `(−1)^β = e^{iπβ}`.
pub fn frac_laguerre_op(s: &PhasedPowerSeries, alpha: f64, beta: f64, nu: f64) -> Result<PhasedPowerSeries> {
    Ok(hyper_bessel_op(s, alpha, beta, nu)?.scale(phase(beta)))
}

pub const MAX_EXP_LAGUERRE_DEGREE: u32 = 30;

/// `e^{y·L}` applied to lₙ, where L is the Laguerre derivative. The exponential
/// terminates after n + 1 terms because L^{n+1} lₙ = 0.
pub fn exp_laguerre(n: u32, y: f64) -> Result<PhasedPowerSeries> {
    if n > MAX_EXP_LAGUERRE_DEGREE {
        return Err(SeriesError::Parameter {
            name: "n",
            value: n as f64,
            range: "0..=30",
        });
    }
    let mut power = super::lower_l_series(n)?;
    let mut total = power.clone();
    let mut weight = 1.0;
    for m in 1..=n {
        power = laguerre_derivative(&power)?;
        weight *= y / m as f64;
        total = total.add(&power.scale_real(weight))?;
    }
    Ok(total)
}

/// The operator symbols of the calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorDescriptor {
    Derivative,
    MultiplyByPower(f64),
    Caputo(f64),
    Laguerre,
    LaguerrePower(u32),
    HyperBessel { alpha: f64, beta: f64, nu: f64 },
    FracLaguerre { alpha: f64, beta: f64, nu: f64 },
}

impl OperatorDescriptor {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Derivative | Self::Laguerre | Self::MultiplyByPower(_) => Ok(()),
            Self::Caputo(alpha) => check_order("alpha", alpha),
            Self::LaguerrePower(m) => check_power(m),
            Self::HyperBessel { alpha, beta, nu } | Self::FracLaguerre { alpha, beta, nu } => {
                check_hyper_bessel(alpha, beta, nu)
            }
        }
    }

    pub fn apply(&self, s: &PhasedPowerSeries) -> Result<PhasedPowerSeries> {
        match *self {
            Self::Derivative => differentiate(s),
            Self::MultiplyByPower(gamma) => multiply_by_power(s, gamma),
            Self::Caputo(alpha) => caputo(s, alpha),
            Self::Laguerre => laguerre_derivative(s),
            Self::LaguerrePower(m) => laguerre_power(s, m),
            Self::HyperBessel { alpha, beta, nu } => hyper_bessel_op(s, alpha, beta, nu),
            Self::FracLaguerre { alpha, beta, nu } => frac_laguerre_op(s, alpha, beta, nu),
        }
    }
}

/// Γ(p+1)/Γ(p−α+1), the Caputo power-rule factor.
pub fn caputo_factor(p: f64, alpha: f64) -> specfun::Result<f64> {
    gamma_ratio(p + 1.0, p - alpha + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracpoly::{laguerre_poly_series, lower_l_series, tricomi_series};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn real(pairs: &[(f64, f64)]) -> PhasedPowerSeries {
        PhasedPowerSeries::from_real(pairs).unwrap()
    }

    #[test]
    fn differentiate_examples() {
        assert_eq!(differentiate(&real(&[(1.0, 2.0)])).unwrap(), real(&[(2.0, 1.0)]));
        assert!(differentiate(&real(&[(1.0, 0.0)])).unwrap().is_empty());
        assert_eq!(differentiate(&real(&[(1.0, 0.5)])).unwrap(), real(&[(0.5, -0.5)]));
        assert!(matches!(
            differentiate(&real(&[(1.0, -0.5)])),
            Err(SeriesError::ExponentTooLow(_))
        ));
    }

    #[test]
    fn multiply_by_power_examples() {
        assert_eq!(multiply_by_power(&real(&[(1.0, 1.0)]), 2.0).unwrap(), real(&[(1.0, 3.0)]));
        assert_eq!(multiply_by_power(&real(&[(1.0, 0.0)]), -0.5).unwrap(), real(&[(1.0, -0.5)]));
        assert!(multiply_by_power(&PhasedPowerSeries::empty(), 7.0).unwrap().is_empty());
        assert!(multiply_by_power(&real(&[(1.0, 0.0)]), -1.0).is_err());
    }

    #[test]
    fn caputo_examples() {
        let out = caputo(&real(&[(1.0, 1.0)]), 0.5).unwrap();
        assert_eq!(out.len(), 1);
        assert_relative_eq!(out.terms()[0].coeff.re, 2.0 / std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(out.terms()[0].exponent, 0.5);
        assert!(caputo(&real(&[(1.0, 0.0)]), 0.5).unwrap().is_empty());
        assert_eq!(caputo(&real(&[(1.0, 2.0)]), 1.0).unwrap(), real(&[(2.0, 1.0)]));
        assert!(matches!(
            caputo(&real(&[(1.0, -0.5)]), 0.5),
            Err(SeriesError::CaputoDomain(_))
        ));
        assert!(caputo(&real(&[(1.0, 1.0)]), 0.0).is_err());
    }

    #[test]
    fn laguerre_derivative_of_l2() {
        // L₂(x, 1) = 1 − 2x + x²/2  →  2 L₁(x, 1) = 2 − 2x
        let image = laguerre_derivative(&real(&[(1.0, 0.0), (-2.0, 1.0), (0.5, 2.0)])).unwrap();
        assert_eq!(image, real(&[(2.0, 0.0), (-2.0, 1.0)]));
    }

    #[test]
    fn laguerre_eigenfunction() {
        let s = tricomi_series(1.0, 40).unwrap();
        let image = laguerre_derivative(&s).unwrap();
        assert!(image.max_deviation(&tricomi_series(1.0, 39).unwrap()) < 1e-13);
    }

    #[test]
    fn laguerre_lowers_l3() {
        let image = laguerre_derivative(&lower_l_series(3).unwrap()).unwrap();
        assert!(image.max_deviation(&lower_l_series(2).unwrap().scale_real(3.0)) < 1e-15);
    }

    #[test]
    fn laguerre_power_examples() {
        let image = laguerre_power(&lower_l_series(5).unwrap(), 2).unwrap();
        assert!(image.max_deviation(&lower_l_series(3).unwrap().scale_real(20.0)) < 1e-14);
        assert_eq!(laguerre_power(&real(&[(1.0, 2.0)]), 2).unwrap(), real(&[(4.0, 0.0)]));
        let s = real(&[(0.3, 0.0), (1.0, 1.5), (-2.0, 4.0)]);
        assert_eq!(laguerre_power(&s, 1).unwrap(), laguerre_derivative(&s).unwrap());
        assert!(laguerre_power(&s, 0).is_err());
        assert!(laguerre_power(&s, 17).is_err());
    }

    #[test]
    fn hyper_bessel_integer_case() {
        // d/dx(x · d/dx x²) = 4x
        let out = hyper_bessel_op(&real(&[(1.0, 2.0)]), 1.0, 1.0, 1.0).unwrap();
        assert_eq!(out, real(&[(4.0, 1.0)]));
    }

    #[test]
    fn frac_laguerre_integer_case_is_laguerre() {
        let l3 = lower_l_series(3).unwrap();
        let out = frac_laguerre_op(&l3, 1.0, 1.0, 1.0).unwrap();
        assert!(out.max_deviation(&lower_l_series(2).unwrap().scale_real(3.0)) < 1e-15);
    }

    #[test]
    fn exp_laguerre_examples() {
        assert_eq!(exp_laguerre(0, 2.5).unwrap(), real(&[(1.0, 0.0)]));
        assert_eq!(exp_laguerre(1, 1.0).unwrap(), real(&[(1.0, 0.0), (-1.0, 1.0)]));
        let lhs = exp_laguerre(4, 0.5).unwrap();
        assert!(lhs.max_deviation(&laguerre_poly_series(4, 0.5).unwrap()) < 1e-12);
        assert!(exp_laguerre(31, 1.0).is_err());
    }

    #[test]
    fn descriptor_dispatch() {
        let s = real(&[(1.0, 1.0), (2.0, 3.0)]);
        assert_eq!(OperatorDescriptor::Laguerre.apply(&s).unwrap(), laguerre_derivative(&s).unwrap());
        assert_eq!(
            OperatorDescriptor::Caputo(1.0).apply(&s).unwrap(),
            differentiate(&s).unwrap()
        );
        assert!(OperatorDescriptor::HyperBessel { alpha: 0.5, beta: 1.2, nu: 1.0 }.validate().is_err());
        assert!(OperatorDescriptor::LaguerrePower(0).validate().is_err());
    }

    fn integer_poly() -> impl Strategy<Value = PhasedPowerSeries> {
        prop::collection::btree_map(0u32..12, -5.0f64..5.0, 1..6).prop_map(|m| {
            PhasedPowerSeries::new(m.into_iter().map(|(p, c)| Term::real(c, p as f64)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn caputo_order_one_is_derivative(s in integer_poly()) {
            prop_assert_eq!(caputo(&s, 1.0).unwrap(), differentiate(&s).unwrap());
        }

        #[test]
        fn laguerre_power_matches_direct_form(s in integer_poly(), m in 1u32..5) {
            let iterated = laguerre_power(&s, m).unwrap();
            let direct = laguerre_power_direct(&s, m).unwrap();
            let scale = direct.terms().iter().map(|t| t.coeff.norm()).fold(1.0, f64::max);
            prop_assert!(iterated.max_deviation(&direct) <= 1e-12 * scale);
        }

        #[test]
        fn frac_laguerre_unit_parameters_is_laguerre(s in integer_poly()) {
            let frac = frac_laguerre_op(&s, 1.0, 1.0, 1.0).unwrap();
            let lag = laguerre_derivative(&s).unwrap();
            let scale = lag.terms().iter().map(|t| t.coeff.norm()).fold(1.0, f64::max);
            prop_assert!(frac.max_deviation(&lag) <= 1e-15 * scale);
        }
    }
}
