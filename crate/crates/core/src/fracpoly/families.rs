//! Series of the functions the operators act on.

use num_complex::Complex64;

use super::{phase, PhasedPowerSeries, Result, SeriesError, Term};
use crate::specfun::{self, factorial, gamma, hyper_bessel_w_coefficients, laguerre_coefficient};

/// lₙ(x) = (−x)ⁿ/n! as the single term `((−1)ⁿ/n!, n)`.
pub fn lower_l_series(n: u32) -> Result<PhasedPowerSeries> {
    PhasedPowerSeries::monomial(phase(n as f64) / factorial(n), n as f64)
}

/// Lₙ(x, y) as a polynomial in x for fixed y.
pub fn laguerre_poly_series(n: u32, y: f64) -> Result<PhasedPowerSeries> {
    if n > 170 {
        return Err(specfun::SpecialFunctionError::Degree(n).into());
    }
    PhasedPowerSeries::new(
        (0..=n)
            .map(|r| Term::real(laguerre_coefficient(n, r, y), r as f64))
            .collect(),
    )
}

fn check_terms(terms: usize) -> Result<()> {
    if terms > super::MAX_TERMS {
        Err(SeriesError::TooManyTerms(terms))
    } else {
        Ok(())
    }
}

/// First `terms` terms of C₀(λx) = Σ (−λ)^r x^r/(r!)².
pub fn tricomi_series(lambda: f64, terms: usize) -> Result<PhasedPowerSeries> {
    check_terms(terms)?;
    let mut coeff = 1.0;
    let mut out = Vec::with_capacity(terms);
    for r in 0..terms {
        if r > 0 {
            let rf = r as f64;
            coeff *= -lambda / (rf * rf);
        }
        out.push(Term::real(coeff, r as f64));
    }
    PhasedPowerSeries::new(out)
}

/// First `terms` terms of e^{a t}.
pub fn exponential_series(a: f64, terms: usize) -> Result<PhasedPowerSeries> {
    check_terms(terms)?;
    let mut coeff = 1.0;
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        if k > 0 {
            coeff *= a / k as f64;
        }
        out.push(Term::real(coeff, k as f64));
    }
    PhasedPowerSeries::new(out)
}

/// First `terms` terms of E_α(a t^α) = Σ a^k t^{αk}/Γ(αk+1).
pub fn mittag_leffler_series(alpha: f64, a: f64, terms: usize) -> Result<PhasedPowerSeries> {
    check_terms(terms)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SeriesError::Parameter {
            name: "alpha",
            value: alpha,
            range: "(0, 1]",
        });
    }
    let mut power = 1.0;
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        if k > 0 {
            power *= a;
        }
        let kf = k as f64;
        out.push(Term::real(power / gamma(alpha * kf + 1.0)?, alpha * kf));
    }
    PhasedPowerSeries::new(out)
}

/// First `terms` terms of W_{α,β,ν}(a t^β).
pub fn hyper_bessel_w_series(alpha: f64, beta: f64, nu: f64, a: f64, terms: usize) -> Result<PhasedPowerSeries> {
    check_terms(terms)?;
    let coeffs = hyper_bessel_w_coefficients(alpha, beta, nu, terms)?;
    let mut power = 1.0;
    let mut out = Vec::with_capacity(terms);
    for (k, c) in coeffs.into_iter().enumerate() {
        if k > 0 {
            power *= a;
        }
        out.push(Term::real(c * power, beta * k as f64));
    }
    PhasedPowerSeries::new(out)
}

/// l^{(α,ν)}_n(x) = (−x)^n / Γ(n−α+ν+1) for real index n > −1.
pub fn frac_lower_l_series(index: f64, alpha: f64, nu: f64) -> Result<PhasedPowerSeries> {
    let denom = gamma(index - alpha + nu + 1.0)?;
    PhasedPowerSeries::monomial(phase(index) / denom, index)
}

/// l̃^{(α,β,ν)}_n(x) = [Π_{i=1..n} Γ(βi+1−α)/Γ(βi+1)] (−x)^{βn} / Γ(βn−α+ν+1).
pub fn tilde_l_series(n: u32, alpha: f64, beta: f64, nu: f64) -> Result<PhasedPowerSeries> {
    let coeffs = hyper_bessel_w_coefficients(alpha, beta, nu, n as usize + 1)?;
    let exponent = beta * n as f64;
    PhasedPowerSeries::monomial(phase(exponent) * Complex64::new(coeffs[n as usize], 0.0), exponent)
}
