//! Plain-text form of a series: one `coeff_re coeff_im exponent` line per term.
//! Blank lines and lines starting with `#` are ignored on input.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use super::{PhasedPowerSeries, SeriesError, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseSeriesError {
    #[error("line {line}: expected `coeff_re coeff_im exponent`")]
    Shape { line: usize },
    #[error("line {line}: {source}")]
    Number {
        line: usize,
        source: std::num::ParseFloatError,
    },
    #[error(transparent)]
    Invalid(#[from] SeriesError),
}

impl fmt::Display for PhasedPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.terms() {
            writeln!(f, "{:e} {:e} {:e}", t.coeff.re, t.coeff.im, t.exponent)?;
        }
        Ok(())
    }
}

impl FromStr for PhasedPowerSeries {
    type Err = ParseSeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut terms = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(ParseSeriesError::Shape { line: idx + 1 });
            }
            let mut nums = [0.0; 3];
            for (slot, field) in nums.iter_mut().zip(&fields) {
                *slot = field
                    .parse()
                    .map_err(|source| ParseSeriesError::Number { line: idx + 1, source })?;
            }
            terms.push(Term::new(Complex64::new(nums[0], nums[1]), nums[2]));
        }
        Ok(PhasedPowerSeries::new(terms)?)
    }
}
