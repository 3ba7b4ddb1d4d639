//! Grid-based oracles: central finite differences, the expanded Laguerre time
//! operator, the L1 Caputo scheme and the composite hyper-Bessel scheme.
//!
//! Every operator returns [`MaskedSamples`]; nodes a stencil cannot reach are
//! marked invalid and must not enter any statistic.

use thiserror::Error;

use crate::specfun::{gamma, SpecialFunctionError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumOpsError {
    #[error("grid needs stop > start and at least 9 nodes (got [{start}, {stop}] with {count})")]
    Grid { start: f64, stop: f64, count: usize },
    #[error("order-{order} stencil needs at least {needed} samples, got {got}")]
    TooFewSamples { order: u32, needed: usize, got: usize },
    #[error("unsupported derivative order {0}")]
    Order(u32),
    #[error("fractional grids must start at 0 (got {0})")]
    NonZeroStart(f64),
    #[error("parameter {name} = {value} outside {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("sample count {got} does not match grid count {expected}")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

pub type Result<T> = std::result::Result<T, NumOpsError>;

pub const MIN_GRID_NODES: usize = 9;

/// Uniform grid of `count` nodes on `[start, stop]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    start: f64,
    stop: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && stop > start && count >= MIN_GRID_NODES) {
            return Err(NumOpsError::Grid { start, stop, count });
        }
        Ok(Self { start, stop, count })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }

    /// The same interval with twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            count: 2 * self.count - 1,
            ..*self
        }
    }

    pub fn sample<F: FnMut(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes().into_iter().map(f).collect()
    }
}

/// Values on a grid with a per-node validity flag.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedSamples {
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl MaskedSamples {
    fn interior(values: Vec<f64>, margin: usize) -> Self {
        let n = values.len();
        let valid = (0..n).map(|i| i >= margin && i + margin < n).collect();
        Self { values, valid }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// (index, value) over valid nodes.
    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .zip(&self.valid)
            .enumerate()
            .filter_map(|(i, (&v, &ok))| ok.then_some((i, v)))
    }

    pub fn map(&self, mut f: impl FnMut(usize, f64) -> f64) -> Self {
        Self {
            values: self.values.iter().enumerate().map(|(i, &v)| f(i, v)).collect(),
            valid: self.valid.clone(),
        }
    }

    /// Largest |self − reference| over valid nodes.
    pub fn max_error(&self, reference: &[f64]) -> f64 {
        self.iter_valid()
            .map(|(i, v)| (v - reference[i]).abs())
            .fold(0.0, f64::max)
    }

    /// Invalidates every node before `first_valid`.
    pub fn mask_before(&mut self, first_valid: usize) {
        for flag in self.valid.iter_mut().take(first_valid) {
            *flag = false;
        }
    }
}

/// Central differences of order 1, 2 or 3 (second-order accurate). Order 3 uses
/// `(−u_{i−2} + 2u_{i−1} − 2u_{i+1} + u_{i+2}) / (2h³)`.
pub fn fd_derivative(samples: &[f64], h: f64, order: u32) -> Result<MaskedSamples> {
    let n = samples.len();
    let (needed, margin) = match order {
        1 | 2 => (5, 1),
        3 => (7, 2),
        other => return Err(NumOpsError::Order(other)),
    };
    if n < needed {
        return Err(NumOpsError::TooFewSamples { order, needed, got: n });
    }
    let u = samples;
    let mut out = vec![0.0; n];
    for i in margin..n - margin {
        out[i] = match order {
            1 => (u[i + 1] - u[i - 1]) / (2.0 * h),
            2 => (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h),
            _ => (-u[i - 2] + 2.0 * u[i - 1] - 2.0 * u[i + 1] + u[i + 2]) / (2.0 * h * h * h),
        };
    }
    Ok(MaskedSamples::interior(out, margin))
}

fn check_len(samples: &[f64], grid: &Grid1D) -> Result<()> {
    if samples.len() != grid.count() {
        return Err(NumOpsError::Length {
            expected: grid.count(),
            got: samples.len(),
        });
    }
    Ok(())
}

/// Laguerre derivative in t, `−∂_t u − t ∂_t² u`, on interior nodes.
pub fn laguerre_time_fd(samples: &[f64], grid: &Grid1D) -> Result<MaskedSamples> {
    check_len(samples, grid)?;
    let h = grid.step();
    let d1 = fd_derivative(samples, h, 1)?;
    let d2 = fd_derivative(samples, h, 2)?;
    Ok(d1.map(|i, v| -v - grid.node(i) * d2.values[i]))
}

/// `t ∂_t² u + ν ∂_t u`, i.e. `t^{1−ν} ∂_t (t^ν ∂_t u)` expanded.
fn bessel_time_fd(samples: &[f64], grid: &Grid1D, nu: f64) -> Result<MaskedSamples> {
    let h = grid.step();
    let d1 = fd_derivative(samples, h, 1)?;
    let d2 = fd_derivative(samples, h, 2)?;
    Ok(d1.map(|i, v| nu * v + grid.node(i) * d2.values[i]))
}

fn check_fractional_grid(grid: &Grid1D) -> Result<()> {
    if grid.start() != 0.0 {
        return Err(NumOpsError::NonZeroStart(grid.start()));
    }
    Ok(())
}

fn check_order(name: &'static str, value: f64, closed: bool) -> Result<()> {
    let ok = value > 0.0 && (value < 1.0 || (closed && value == 1.0));
    if ok {
        Ok(())
    } else {
        Err(NumOpsError::Parameter {
            name,
            value,
            range: if closed { "(0, 1]" } else { "(0, 1)" },
        })
    }
}

fn l1_raw(samples: &[f64], h: f64, alpha: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    let weights: Vec<f64> = (0..n)
        .map(|j| {
            let j = j as f64;
            (j + 1.0).powf(1.0 - alpha) - j.powf(1.0 - alpha)
        })
        .collect();
    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = h.powf(-alpha) / gamma(2.0 - alpha)?;
    let mut out = vec![0.0; n];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        // Σ_{j<k} b_j (u_{k−j} − u_{k−j−1})
        let acc: f64 = weights[..k]
            .iter()
            .zip(diffs[..k].iter().rev())
            .map(|(b, d)| b * d)
            .sum();
        *slot = scale * acc;
    }
    Ok(out)
}

/// L1 discretization of the Caputo derivative of order α ∈ (0, 1) on a
/// uniform grid starting at 0. Node 0 is invalid.
pub fn caputo_l1(samples: &[f64], grid: &Grid1D, alpha: f64) -> Result<MaskedSamples> {
    check_len(samples, grid)?;
    check_fractional_grid(grid)?;
    check_order("alpha", alpha, false)?;
    let values = l1_raw(samples, grid.step(), alpha)?;
    let mut valid = vec![true; values.len()];
    valid[0] = false;
    Ok(MaskedSamples { values, valid })
}

/// Second-order first derivative valid at every node (one-sided at the ends).
fn gradient(samples: &[f64], h: f64) -> Vec<f64> {
    let n = samples.len();
    let u = samples;
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h)
            } else {
                (u[i + 1] - u[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// One Caputo stage for the composite operator; order 1 falls back to a
/// second-order gradient.
fn caputo_stage(samples: &[f64], h: f64, order: f64) -> Result<Vec<f64>> {
    if order == 1.0 {
        Ok(gradient(samples, h))
    } else {
        l1_raw(samples, h, order)
    }
}

/// Hyper-Bessel operator `t^{α−ν} D^β (t^ν D^α u)` with L1 stages.
///
/// The intermediate `t^ν D^α u` is taken as 0 at t = 0. For α = β = 1 the
/// expanded form `ν ∂_t u + t ∂_t² u` is used so that the integer case shares
/// the stencils of [`laguerre_time_fd`].
pub fn hyper_bessel_fd(samples: &[f64], grid: &Grid1D, alpha: f64, beta: f64, nu: f64) -> Result<MaskedSamples> {
    check_len(samples, grid)?;
    check_order("alpha", alpha, true)?;
    check_order("beta", beta, true)?;
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(NumOpsError::Parameter {
            name: "nu",
            value: nu,
            range: "(0, inf)",
        });
    }
    if alpha == 1.0 && beta == 1.0 {
        return bessel_time_fd(samples, grid, nu);
    }
    check_fractional_grid(grid)?;
    if samples.len() < 5 {
        return Err(NumOpsError::TooFewSamples {
            order: 1,
            needed: 5,
            got: samples.len(),
        });
    }
    let h = grid.step();
    let t = grid.nodes();
    let inner = caputo_stage(samples, h, alpha)?;
    let weighted: Vec<f64> = inner
        .iter()
        .zip(&t)
        .enumerate()
        .map(|(i, (v, ti))| if i == 0 { 0.0 } else { ti.powf(nu) * v })
        .collect();
    let outer = caputo_stage(&weighted, h, beta)?;
    let values: Vec<f64> = outer
        .iter()
        .zip(&t)
        .enumerate()
        .map(|(i, (v, ti))| if i == 0 { 0.0 } else { ti.powf(alpha - nu) * v })
        .collect();
    let mut valid = vec![true; values.len()];
    valid[0] = false;
    Ok(MaskedSamples { values, valid })
}

/// First node index at or beyond `fraction` of the time window.
///
/// The L1 scheme carries an O(1) error at the first few nodes when the sampled
/// function behaves like a fractional power of t near 0; the residual engine
/// excludes this start-up layer for L1-based operators.
pub fn startup_nodes(grid: &Grid1D, fraction: f64) -> usize {
    let cut = grid.start() + fraction * (grid.stop() - grid.start());
    (0..grid.count())
        .find(|&i| grid.node(i) >= cut - 1e-12 * grid.step())
        .unwrap_or(grid.count())
}
