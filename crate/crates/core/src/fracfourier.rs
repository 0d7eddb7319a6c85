//! The fractional part ρ(x), the dilation difference ρ(x) − ρ(2x) and its
//! Fourier sine series
//!
//! ```text
//! ρ(x) − ρ(2x) = Σ_{n≥1} (sin 4nπx − sin 2nπx) / (nπ),
//! ```
//!
//! together with the sweep that measures how large its partial sums get.
//! A uniform bound on those partial sums is what allows the sum to be moved
//! outside the Mellin integral.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Upper bound accepted for sup |S_N(x)|. The true supremum is about 0.6.
pub const DEFAULT_SUP_BOUND: f64 = 2.0;

/// Fractional grid offset (1/2 + 1/√2) mod 1; keeps sweep points off the
/// dyadic rationals where ρ(x) and ρ(2x) jump.
pub const DEFAULT_GRID_OFFSET: f64 = FRAC_1_SQRT_2 - 0.5;

/// Minimum number of x samples in a supremum sweep.
pub const MIN_GRID_POINTS: usize = 256;

pub fn rho(x: f64) -> f64 {
    debug_assert!(
        x.is_finite() && x >= 0.0,
        "rho needs finite x >= 0, got {x}"
    );
    x - x.floor()
}

pub fn telescoped(x: f64) -> f64 {
    rho(x) - rho(2.0 * x)
}

/// sin(2πu) with u reduced exactly to a quarter period first, so that
/// multiples of 1/4 give exact results.
fn sin_two_pi(u: f64) -> f64 {
    let v = 4.0 * u.rem_euclid(1.0);
    let q = v.round();
    let angle = TAU * ((v - q) * 0.25);
    match q as u8 {
        0 | 4 => angle.sin(),
        1 => angle.cos(),
        2 => -angle.sin(),
        _ => -angle.cos(),
    }
}

/// (sin 4nπx − sin 2nπx) / (nπ)
#[inline]
fn series_term(n: usize, x: f64) -> f64 {
    let nx = n as f64 * x;
    (sin_two_pi(2.0 * nx) - sin_two_pi(nx)) / (n as f64 * PI)
}

/// Index N and point x of a Fourier partial sum S_N(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSumSpec {
    pub n_terms: usize,
    pub x: f64,
}

impl PartialSumSpec {
    pub fn new(n_terms: usize, x: f64) -> Result<Self> {
        if n_terms == 0 {
            return Err(Error::Config("n_terms must be at least 1".into()));
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Config(format!(
                "x must be positive and finite, got {x}"
            )));
        }
        Ok(Self { n_terms, x })
    }
}

/// S_N(x), summed in ascending n with compensation.
pub fn fourier_partial_sum(params: PartialSumSpec) -> f64 {
    let mut acc = CompensatedSum::new();
    for n in 1..=params.n_terms {
        acc.add(series_term(n, params.x));
    }
    acc.value()
}

/// The sweep points (j + offset) / grid_points, j = 0..grid_points, in (0, 1).
pub fn offset_grid(grid_points: usize, offset: f64) -> impl Iterator<Item = f64> + Clone {
    let step = 1.0 / grid_points as f64;
    (0..grid_points).map(move |j| (j as f64 + offset) * step)
}

/// max_{1≤N≤n_max} |S_N(x)| along the running partial sums at one point.
fn running_sup(n_max: usize, x: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut sup = 0.0_f64;
    for n in 1..=n_max {
        acc.add(series_term(n, x));
        sup = sup.max(acc.value().abs());
    }
    sup
}

/// Settings for [`partial_sum_sup_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSweep {
    pub n_max: usize,
    pub grid_points: usize,
    /// Fractional offset in (0, 1) of the sample grid.
    pub offset: f64,
    pub bound: f64,
    pub parallel: bool,
}

impl SupSweep {
    pub fn new(n_max: usize, grid_points: usize) -> Self {
        Self {
            n_max,
            grid_points,
            offset: DEFAULT_GRID_OFFSET,
            bound: DEFAULT_SUP_BOUND,
            parallel: true,
        }
    }
}

/// sup |S_N(x)| over N ∈ 1..=n_max and the default offset grid, checked
/// against [`DEFAULT_SUP_BOUND`].
pub fn partial_sum_sup(n_max: usize, grid_points: usize) -> Result<f64> {
    partial_sum_sup_with(&SupSweep::new(n_max, grid_points))
}

pub fn partial_sum_sup_with(sweep: &SupSweep) -> Result<f64> {
    if sweep.n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    if sweep.grid_points < MIN_GRID_POINTS {
        return Err(Error::Config(format!(
            "grid_points must be at least {MIN_GRID_POINTS}, got {}",
            sweep.grid_points
        )));
    }
    if !(sweep.offset > 0.0 && sweep.offset < 1.0) {
        return Err(Error::Config(format!(
            "grid offset must lie in (0, 1), got {}",
            sweep.offset
        )));
    }
    let grid = offset_grid(sweep.grid_points, sweep.offset);
    let sup = if sweep.parallel {
        grid.collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| running_sup(sweep.n_max, x))
            .reduce(|| 0.0, f64::max)
    } else {
        grid.map(|x| running_sup(sweep.n_max, x))
            .fold(0.0, f64::max)
    };
    if sup > sweep.bound {
        return Err(Error::BoundExceeded {
            sup,
            bound: sweep.bound,
        });
    }
    Ok(sup)
}
