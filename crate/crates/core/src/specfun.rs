//! Complex special functions: Γ(z), an Euler–Maclaurin ζ(s) valid on the
//! whole plane minus the pole, and a Dirichlet-eta cross-check.
//!
//! Neither zeta routine uses the functional equation, so both can serve as
//! oracles for verifying it.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::CompensatedComplexSum;

/// Distance from a non-positive integer inside which Γ reports a pole.
pub const GAMMA_POLE_RADIUS: f64 = 1e-9;
/// Distance from s = 1 inside which ζ reports a pole.
pub const ZETA_POLE_RADIUS: f64 = 1e-3;
/// Distance from a zero of 1 - 2^(1-s) inside which the eta relation refuses to divide.
pub const ETA_RELATION_RADIUS: f64 = 1e-6;

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_2, B_4, ..., B_32 as exact rationals (numerator, denominator).
const BERNOULLI_EVEN: [(i64, i64); 16] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
];

/// `B_{2k} / (2k)!` for k = 1..=16, index k - 1.
fn bernoulli_over_factorial() -> &'static [f64; 16] {
    static TABLE: OnceLock<[f64; 16]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; 16];
        let mut factorial = 1.0_f64;
        for (k, &(num, den)) in BERNOULLI_EVEN.iter().enumerate() {
            let two_k = 2 * (k + 1);
            factorial *= ((two_k - 1) * two_k) as f64;
            out[k] = num as f64 / den as f64 / factorial;
        }
        out
    })
}

/// `x^w` on the principal real branch, `exp(w ln x)`.
///
/// Real exponents go through `powi`/`powf`, so integer and half-integer
/// powers of exactly representable values come out exact.
pub fn pow_real_complex(x: f64, w: Complex64) -> Complex64 {
    debug_assert!(x > 0.0, "pow_real_complex needs a positive base, got {x}");
    if w.im == 0.0 {
        if w.re.fract() == 0.0 && w.re.abs() <= i32::MAX as f64 {
            return Complex64::new(x.powi(w.re as i32), 0.0);
        }
        return Complex64::new(x.powf(w.re), 0.0);
    }
    let ln_x = x.ln();
    let modulus = x.powf(w.re);
    let (sin, cos) = (w.im * ln_x).sin_cos();
    Complex64::new(modulus * cos, modulus * sin)
}

/// sin(πz) with the real part reduced exactly before scaling by π.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let r = z.re - k;
    let sign = if (0.5 * k).fract() == 0.0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * r).sin_cos();
    let y = PI * z.im;
    Complex64::new(sign * s * y.cosh(), sign * c * y.sinh())
}

/// cos(πz), reduced the same way as [`sin_pi`].
pub fn cos_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let r = z.re - k;
    let sign = if (0.5 * k).fract() == 0.0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * r).sin_cos();
    let y = PI * z.im;
    Complex64::new(sign * c * y.cosh(), -sign * s * y.sinh())
}

/// ln Γ(z) for ℜz ≥ 1/2 (not necessarily the continuous branch).
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

fn near_gamma_pole(z: Complex64) -> bool {
    let k = z.re.round();
    k <= 0.0 && (z.re - k).hypot(z.im) < GAMMA_POLE_RADIUS
}

/// Γ(z) by the Lanczos approximation, with reflection for ℜz < 1/2.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            what: "gamma",
            at: z,
            reason: "non-finite argument",
        });
    }
    if near_gamma_pole(z) {
        return Err(Error::Pole {
            function: "gamma",
            at: z,
        });
    }
    if z.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        Ok(PI * (-ln_gamma_lanczos(one_minus)).exp() / sin_pi(z))
    } else {
        Ok(ln_gamma_lanczos(z).exp())
    }
}

/// 1/Γ(z), which is entire: exactly zero at the non-positive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        sin_pi(z) * ln_gamma_lanczos(one_minus).exp() / PI
    } else {
        (-ln_gamma_lanczos(z)).exp()
    }
}

/// Settings for the Euler–Maclaurin zeta oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Direct-sum cutoff N.
    pub pivot_terms: usize,
    /// Number M of Bernoulli corrections B_2..B_2M.
    pub correction_terms: usize,
    /// Tolerance, scaled by max(1, |ζ(s)|), on the first omitted correction.
    pub target_tol: f64,
}

impl OracleConfig {
    /// One stored Bernoulli number is kept back to estimate the truncation error.
    pub const MAX_CORRECTION_TERMS: usize = BERNOULLI_EVEN.len() - 1;
    const MAX_PIVOT: usize = 2000;

    pub fn new(pivot_terms: usize, correction_terms: usize, target_tol: f64) -> Result<Self> {
        let cfg = Self {
            pivot_terms,
            correction_terms,
            target_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pivot_terms < 2 {
            return Err(Error::Config(format!(
                "pivot_terms must be at least 2, got {}",
                self.pivot_terms
            )));
        }
        if self.correction_terms > Self::MAX_CORRECTION_TERMS {
            return Err(Error::Config(format!(
                "correction_terms must be at most {}, got {}",
                Self::MAX_CORRECTION_TERMS,
                self.correction_terms
            )));
        }
        if self.target_tol.is_nan() || self.target_tol <= 0.0 {
            return Err(Error::Config(format!(
                "target_tol must be positive, got {}",
                self.target_tol
            )));
        }
        Ok(())
    }

    /// Picks the cutoff N and correction count M that minimize the predicted
    /// truncation plus rounding error at `s`.
    ///
    /// Far left of the critical line the direct sum Σ n^{-s} is dominated by
    /// terms of size N^{1-ℜs}, so a large N costs accuracy; the Bernoulli
    /// tail on the other hand wants N well above |s|/2π. For each N the
    /// asymptotic series is cut just before its smallest term.
    pub fn tuned_for(s: Complex64) -> Self {
        let coefs = bernoulli_over_factorial();
        let sigma = s.re;
        // ln |B_2k/(2k)! · s(s+1)…(s+2k-2)| for k = 1..=16
        let mut ln_heads = [0.0; 16];
        let mut ln_rising = s.norm().ln();
        for (k, head) in ln_heads.iter_mut().enumerate() {
            *head = coefs[k].abs().ln() + ln_rising;
            let j = (2 * k + 1) as f64;
            ln_rising += (s + j).norm().ln() + (s + j + 1.0).norm().ln();
        }
        let pole_dist = (s - 1.0).norm();

        let mut best = (f64::INFINITY, 2, Self::MAX_CORRECTION_TERMS);
        let mut power_sum = 0.0;
        for n in 2..=Self::MAX_PIVOT {
            let nf = n as f64;
            power_sum += ((n - 1) as f64).powf(-sigma);
            let ln_n = nf.ln();
            // smallest omitted term over M = 1..=15, i.e. term index k = M + 1
            let (truncation, m) = (1..ln_heads.len())
                .map(|k| {
                    let ln_term = ln_heads[k] - (sigma + (2 * k + 1) as f64) * ln_n;
                    (ln_term.exp(), k)
                })
                .fold((f64::INFINITY, 1), |a, b| if b.0 < a.0 { b } else { a });
            let magnitude = power_sum + nf.powf(1.0 - sigma) / pole_dist + nf.powf(-sigma);
            // n^{-s} carries a phase error ~ eps·|t|·ln n; the 0.05 is fitted
            let rounding = f64::EPSILON * 0.05 * (1.0 + s.im.abs() * ln_n) * magnitude;
            let total = truncation + rounding;
            if total < 0.99 * best.0 {
                best = (total, n, m);
            }
        }
        Self {
            pivot_terms: best.1,
            correction_terms: best.2,
            // the rounding floor, not the Bernoulli tail, limits accuracy far left
            target_tol: (10.0 * best.0).max(1e-12),
        }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            pivot_terms: 32,
            correction_terms: OracleConfig::MAX_CORRECTION_TERMS,
            target_tol: 1e-12,
        }
    }
}

/// A zeta value with its advisory error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOutcome {
    pub value: Complex64,
    /// Magnitude of the first omitted correction term.
    pub error_estimate: f64,
    pub pivot_terms: usize,
}

/// ζ(s) by Euler–Maclaurin summation with the given cutoff and corrections.
pub fn zeta_detailed(s: Complex64, cfg: &OracleConfig) -> Result<OracleOutcome> {
    cfg.validate()?;
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain {
            what: "zeta",
            at: s,
            reason: "non-finite argument",
        });
    }
    if (s - 1.0).norm() <= ZETA_POLE_RADIUS {
        return Err(Error::Pole {
            function: "zeta",
            at: s,
        });
    }

    let coefs = bernoulli_over_factorial();
    let n = cfg.pivot_terms;
    let nf = n as f64;

    let mut acc = CompensatedComplexSum::new();
    for k in 1..n {
        acc.add(pow_real_complex(k as f64, -s));
    }
    let n_pow = pow_real_complex(nf, -s);
    acc.add(n_pow * nf / (s - 1.0));
    acc.add(n_pow * 0.5);

    // term_k = B_2k/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
    let mut rising = s;
    let mut scale = n_pow / nf;
    let inv_n2 = 1.0 / (nf * nf);
    for (k, &coef) in coefs.iter().enumerate().take(cfg.correction_terms) {
        acc.add(coef * rising * scale);
        let j = (2 * k + 1) as f64;
        rising *= (s + j) * (s + j + 1.0);
        scale *= inv_n2;
    }
    let error_estimate = (coefs[cfg.correction_terms] * rising * scale).norm();
    let value = acc.value();

    if error_estimate > cfg.target_tol * value.norm().max(1.0) {
        return Err(Error::NonConvergence {
            what: "zeta (Euler-Maclaurin)",
            value,
            estimate: error_estimate,
            tolerance: cfg.target_tol,
            work: n,
        });
    }
    Ok(OracleOutcome {
        value,
        error_estimate,
        pivot_terms: n,
    })
}

pub fn zeta(s: Complex64, cfg: &OracleConfig) -> Result<Complex64> {
    zeta_detailed(s, cfg).map(|o| o.value)
}

/// ζ(s) with the cutoff chosen by [`OracleConfig::tuned_for`].
pub fn zeta_oracle(s: Complex64) -> Result<OracleOutcome> {
    zeta_detailed(s, &OracleConfig::tuned_for(s))
}

/// Cohen–Rodriguez Villegas–Zagier acceleration of Σ (-1)^k (k+1)^{-s}
/// with `n` terms.
fn eta_accelerated(s: Complex64, n: usize) -> Complex64 {
    // weights[i] = n (n+i-1)! 4^i / ((n-i)! (2i)!), so d_k = Σ_{i≤k} weights[i]
    let mut weights = vec![0.0; n + 1];
    weights[0] = 1.0;
    for i in 0..n {
        let fi = i as f64;
        let nf = n as f64;
        weights[i + 1] =
            weights[i] * 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
    }
    // e_k = d_n - d_k, accumulated from the top to avoid cancellation.
    let mut e = vec![0.0; n];
    let mut running = 0.0;
    for k in (0..n).rev() {
        running += weights[k + 1];
        e[k] = running;
    }
    let d_n = running + weights[0];

    let mut acc = CompensatedComplexSum::new();
    for (k, &ek) in e.iter().enumerate() {
        let term = ek * pow_real_complex((k + 1) as f64, -s);
        acc.add(if k % 2 == 0 { term } else { -term });
    }
    acc.value() / d_n
}

fn eta_terms_for(s: Complex64) -> usize {
    let left = (-s.re).max(0.0).ceil() as usize;
    24 + (0.9 * s.im.abs()).ceil() as usize + 2 * left
}

/// Absolute tolerance, scaled by max(1, |η|), accepted from the eta acceleration.
pub const ETA_TOL: f64 = 1e-12;

/// Dirichlet eta η(s) = Σ (-1)^{n-1} n^{-s} for ℜs > -2.
pub fn eta(s: Complex64) -> Result<Complex64> {
    if !s.re.is_finite() || !s.im.is_finite() || s.re <= -2.0 {
        return Err(Error::Domain {
            what: "eta",
            at: s,
            reason: "requires finite s with Re s > -2",
        });
    }
    let n = eta_terms_for(s);
    let coarse = eta_accelerated(s, n);
    let fine = eta_accelerated(s, n + 12);
    let estimate = (fine - coarse).norm();
    if estimate > ETA_TOL * fine.norm().max(1.0) {
        return Err(Error::NonConvergence {
            what: "eta (alternating acceleration)",
            value: fine,
            estimate,
            tolerance: ETA_TOL,
            work: n + 12,
        });
    }
    Ok(fine)
}

/// ζ(s) = η(s) / (1 - 2^{1-s}), the independent second oracle.
pub fn zeta_via_eta(s: Complex64) -> Result<Complex64> {
    // zeros of the prefactor: s = 1 + 2πik / ln 2
    let spacing = 2.0 * PI / LN_2;
    let k = (s.im / spacing).round();
    let hazard = Complex64::new(1.0, k * spacing);
    if (s - hazard).norm() < ETA_RELATION_RADIUS {
        return Err(Error::DivisionHazard { at: s });
    }
    let prefactor = Complex64::new(1.0, 0.0) - pow_real_complex(2.0, Complex64::new(1.0, 0.0) - s);
    Ok(eta(s)? / prefactor)
}
