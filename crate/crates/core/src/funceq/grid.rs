use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_EXCLUSION_RADIUS: f64 = 0.1;

/// Rectangular grid of s values, traversed with the real axis outer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub re_steps: usize,
    pub im_steps: usize,
    pub exclusion_radius: f64,
}

fn axis(min: f64, max: f64, steps: usize) -> impl Iterator<Item = f64> + Clone {
    let span = max - min;
    (0..steps).map(move |i| {
        if steps == 1 {
            min
        } else if i + 1 == steps {
            max
        } else {
            min + span * i as f64 / (steps - 1) as f64
        }
    })
}

impl GridSpec {
    pub fn new(re: (f64, f64), im: (f64, f64), steps: (usize, usize)) -> Result<Self> {
        let grid = Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            re_steps: steps.0,
            im_steps: steps.1,
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// A degenerate axis (min == max) must have exactly one step.
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, min: f64, max: f64, steps: usize| -> Result<()> {
            if !(min.is_finite() && max.is_finite()) {
                return Err(Error::Config(format!("{name} bounds must be finite")));
            }
            if steps == 0 {
                return Err(Error::Config(format!("{name} steps must be at least 1")));
            }
            if min > max || (min == max && steps != 1) {
                return Err(Error::Config(format!(
                    "{name} range [{min}, {max}] is invalid for {steps} steps"
                )));
            }
            Ok(())
        };
        check("re", self.re_min, self.re_max, self.re_steps)?;
        check("im", self.im_min, self.im_max, self.im_steps)?;
        if !(self.exclusion_radius >= 0.0 && self.exclusion_radius.is_finite()) {
            return Err(Error::Config(format!(
                "exclusion radius must be finite and non-negative, got {}",
                self.exclusion_radius
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.re_steps * self.im_steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let ims = axis(self.im_min, self.im_max, self.im_steps);
        axis(self.re_min, self.re_max, self.re_steps)
            .flat_map(move |re| ims.clone().map(move |im| Complex64::new(re, im)))
    }

    /// Inside a disk around s = 1, s = 0, the chi poles 3, 5, 7, …, the
    /// zeros 2πik/ln 2 of 2^s − 1, or the points 1 + 2πik/ln 2 (k ≠ 0).
    pub fn is_excluded(&self, s: Complex64) -> bool {
        let r = self.exclusion_radius;
        if r == 0.0 {
            return false;
        }
        let near = |c: Complex64| (s - c).norm() < r;
        if near(Complex64::new(1.0, 0.0)) || near(Complex64::new(0.0, 0.0)) {
            return true;
        }
        let odd = 2.0 * ((s.re - 1.0) / 2.0).round() + 1.0;
        if odd >= 3.0 && near(Complex64::new(odd, 0.0)) {
            return true;
        }
        let spacing = 2.0 * PI / LN_2;
        let k = (s.im / spacing).round();
        k != 0.0
            && (near(Complex64::new(0.0, k * spacing)) || near(Complex64::new(1.0, k * spacing)))
    }
}
