//! Exact operator algebra on truncated generalized power series
//! `Σ cⱼ x^{pⱼ}` on x > 0.
//!
//! Coefficients are complex so that powers of negative quantities can carry
//! their phase: `(−1)^γ` is always taken as `e^{iπγ}` (principal branch), and
//! `(−x)^γ` is stored as the pair `(e^{iπγ}, γ)`.

mod families;
pub mod identities;
mod ops;
mod text;

pub use families::*;
pub use ops::*;
pub use text::ParseSeriesError;

use num_complex::Complex64;
use thiserror::Error;

use crate::specfun::SpecialFunctionError;

/// Largest number of terms a series may hold.
pub const MAX_TERMS: usize = 256;

/// Two exponents closer than this are the same power of x.
pub const EXPONENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("exponent {0} is not above -1")]
    ExponentTooLow(f64),
    #[error("exponents must be strictly increasing ({prev} then {next})")]
    Unordered { prev: f64, next: f64 },
    #[error("series holds {0} terms, more than {MAX_TERMS}")]
    TooManyTerms(usize),
    #[error("non-finite coefficient at exponent {0}")]
    NonFinite(f64),
    #[error("Caputo power rule undefined for exponent {0} in (-1, 0)")]
    CaputoDomain(f64),
    #[error("operator parameter {name} = {value} outside {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// One term `coeff · x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub exponent: f64,
}

impl Term {
    pub fn new(coeff: Complex64, exponent: f64) -> Self {
        Self { coeff, exponent }
    }

    pub fn real(coeff: f64, exponent: f64) -> Self {
        Self::new(Complex64::new(coeff, 0.0), exponent)
    }
}

/// `(−1)^γ` on the principal branch. Integer γ gives an exact ±1.
pub fn phase(gamma: f64) -> Complex64 {
    if gamma == gamma.round() {
        let odd = (gamma.round() as i64).rem_euclid(2) == 1;
        Complex64::new(if odd { -1.0 } else { 1.0 }, 0.0)
    } else {
        Complex64::from_polar(1.0, std::f64::consts::PI * gamma)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhasedPowerSeries {
    terms: Vec<Term>,
}

impl PhasedPowerSeries {
    /// Validates and wraps an already-ordered list of terms.
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.len() > MAX_TERMS {
            return Err(SeriesError::TooManyTerms(terms.len()));
        }
        for (i, term) in terms.iter().enumerate() {
            if !(term.exponent > -1.0) {
                return Err(SeriesError::ExponentTooLow(term.exponent));
            }
            if !(term.coeff.re.is_finite() && term.coeff.im.is_finite()) {
                return Err(SeriesError::NonFinite(term.exponent));
            }
            if i > 0 {
                let prev = terms[i - 1].exponent;
                if term.exponent - prev <= EXPONENT_TOL {
                    return Err(SeriesError::Unordered {
                        prev,
                        next: term.exponent,
                    });
                }
            }
        }
        Ok(Self { terms })
    }

    /// Builds a series from terms in any order, merging equal exponents.
    pub fn from_unordered(mut terms: Vec<Term>) -> Result<Self> {
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if (term.exponent - last.exponent).abs() <= EXPONENT_TOL => {
                    last.coeff += term.coeff;
                }
                _ => merged.push(term),
            }
        }
        Self::new(merged)
    }

    pub fn from_real(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(c, p)| Term::real(c, p)).collect())
    }

    pub fn monomial(coeff: Complex64, exponent: f64) -> Result<Self> {
        Self::new(vec![Term::new(coeff, exponent)])
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.coeff * factor, t.exponent))
                .collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut all = self.terms.clone();
        all.extend_from_slice(&other.terms);
        Self::from_unordered(all)
    }

    /// The first `len` terms (lowest exponents).
    pub fn truncated(&self, len: usize) -> Self {
        Self {
            terms: self.terms.iter().take(len).copied().collect(),
        }
    }

    /// Drops the lowest-order term, the one an eigenrelation image cannot
    /// reproduce from a truncated input.
    pub fn without_lowest(&self) -> Self {
        Self {
            terms: self.terms.iter().skip(1).copied().collect(),
        }
    }

    pub fn coefficient_at(&self, exponent: f64) -> Complex64 {
        self.terms
            .iter()
            .find(|t| (t.exponent - exponent).abs() <= EXPONENT_TOL)
            .map_or(Complex64::new(0.0, 0.0), |t| t.coeff)
    }

    /// Evaluates the series at x > 0.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                if t.exponent == 0.0 {
                    t.coeff
                } else {
                    t.coeff * x.powf(t.exponent)
                }
            })
            .sum()
    }

    /// Largest coefficient difference after aligning exponents; a missing
    /// term counts as a zero coefficient.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.aligned(other)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Like [`max_deviation`](Self::max_deviation) but on coefficient magnitudes.
    pub fn max_magnitude_deviation(&self, other: &Self) -> f64 {
        self.aligned(other)
            .map(|(a, b)| (a.norm() - b.norm()).abs())
            .fold(0.0, f64::max)
    }

    /// Pairs of coefficients at matching exponents, zero-filled.
    pub fn aligned<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = (Complex64, Complex64)> + 'a {
        let zero = Complex64::new(0.0, 0.0);
        let mut i = 0;
        let mut j = 0;
        std::iter::from_fn(move || {
            let a = self.terms.get(i);
            let b = other.terms.get(j);
            match (a, b) {
                (None, None) => None,
                (Some(a), None) => {
                    i += 1;
                    Some((a.coeff, zero))
                }
                (None, Some(b)) => {
                    j += 1;
                    Some((zero, b.coeff))
                }
                (Some(a), Some(b)) => {
                    if (a.exponent - b.exponent).abs() <= EXPONENT_TOL {
                        i += 1;
                        j += 1;
                        Some((a.coeff, b.coeff))
                    } else if a.exponent < b.exponent {
                        i += 1;
                        Some((a.coeff, zero))
                    } else {
                        j += 1;
                        Some((zero, b.coeff))
                    }
                }
            }
        })
    }

    /// True when both series hold the same exponents in the same order.
    pub fn same_support(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| (a.exponent - b.exponent).abs() <= EXPONENT_TOL)
    }
}
