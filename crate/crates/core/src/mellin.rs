//! Mellin transforms on (0, ∞):
//!
//! ```text
//! ∫ x^{-s-1} ρ(x) dx,   ∫ x^{-s-1} (ρ(x) − ρ(2x)) dx      0 < ℜs < 1
//! ∫ x^{-s-1} sin(ax) dx                                  −1 < ℜs < 0
//! ```
//!
//! The sawtooth transforms are sums of exact per-interval antiderivatives.
//! The sine transform is quadrature over half-period lobes with an
//! accelerated alternating tail.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::specfun::pow_real_complex;
use crate::sum::CompensatedComplexSum;

/// Distance kept from the boundary lines of each strip.
pub const STRIP_MARGIN: f64 = 0.02;

pub const MIN_INTERVALS: usize = 10;

/// How the part of a sawtooth integral beyond the last summed interval is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailStrategy {
    /// Mean part in closed form, oscillating remainder truncated.
    /// Tail error ~ N^{-ℜs-1}.
    MeanSubtraction,
    /// Plain truncation of the integral at N. Tail error ~ N^{-ℜs}.
    RawCutoff,
    /// Mean part in closed form, oscillating remainder extrapolated from the
    /// partial sums at N/8, N/4, N/2 and N.
    #[default]
    Extrapolated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Unit intervals summed for the sawtooth transforms; half-period lobes
    /// for the sine transform.
    pub max_intervals: usize,
    pub target_tol: f64,
    pub tail_strategy: TailStrategy,
    /// Terms of the Fourier series summed before the closed-form tail.
    pub series_terms: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            max_intervals: 1024,
            target_tol: 1e-10,
            tail_strategy: TailStrategy::default(),
            series_terms: 10_000,
        }
    }
}

impl TruncationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_intervals < MIN_INTERVALS {
            return Err(Error::Config(format!(
                "max_intervals must be at least {MIN_INTERVALS}, got {}",
                self.max_intervals
            )));
        }
        if !(self.target_tol > 0.0 && self.target_tol.is_finite()) {
            return Err(Error::Config(format!(
                "target_tol must be positive and finite, got {}",
                self.target_tol
            )));
        }
        if self.series_terms == 0 {
            return Err(Error::Config("series_terms must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub work: usize,
    pub converged: bool,
}

impl QuadratureOutcome {
    /// Best-effort outcome carried by a `NonConvergence` error.
    pub fn from_non_convergence(err: &Error) -> Option<Self> {
        match *err {
            Error::NonConvergence {
                value,
                estimate,
                work,
                ..
            } => Some(Self {
                value,
                abs_error_estimate: estimate,
                work,
                converged: false,
            }),
            _ => None,
        }
    }
}

fn finish(
    what: &'static str,
    value: Complex64,
    estimate: f64,
    work: usize,
    tol: f64,
) -> Result<QuadratureOutcome> {
    if estimate <= tol {
        Ok(QuadratureOutcome {
            value,
            abs_error_estimate: estimate,
            work,
            converged: true,
        })
    } else {
        Err(Error::NonConvergence {
            what,
            value,
            estimate,
            tolerance: tol,
            work,
        })
    }
}

fn check_strip(
    what: &'static str,
    s: Complex64,
    lo: f64,
    hi: f64,
    reason: &'static str,
) -> Result<()> {
    let ok = s.re >= lo + STRIP_MARGIN && s.re <= hi - STRIP_MARGIN && s.im.is_finite();
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            at: s,
            reason,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sawtooth {
    Rho,
    Telescoped,
}

impl Sawtooth {
    /// Weight of m^{-s-1-k} b_k for odd k in the large-m expansion of one
    /// interval, where b_k = binom(-s-1, k).
    fn moment(self, k: i32) -> f64 {
        let half = 0.5_f64.powi(k + 1);
        let k = k as f64;
        match self {
            Sawtooth::Rho => half / (k + 2.0),
            Sawtooth::Telescoped => half / ((k + 1.0) * (k + 2.0)),
        }
    }

    /// Exact integral over [0, 1].
    fn head(self, s: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Sawtooth::Rho => one / (one - s),
            Sawtooth::Telescoped => (pow_real_complex(2.0, s) - one) / s - one / (one - s),
        }
    }

    /// Leading coefficient c in tail ≈ c·N^{-s-1} of the mean-free remainder.
    fn tail_coefficient(self) -> f64 {
        match self {
            Sawtooth::Rho => 1.0 / 12.0,
            Sawtooth::Telescoped => 1.0 / 24.0,
        }
    }
}

/// ∫_a^b (α + βx) x^{-s-1} dx.
fn linear_moment(s: Complex64, a: f64, b: f64, alpha: f64, beta: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let p0 = (pow_real_complex(b, -s) - pow_real_complex(a, -s)) / (-s);
    let p1 = (pow_real_complex(b, one - s) - pow_real_complex(a, one - s)) / (one - s);
    p0 * alpha + p1 * beta
}

/// Mean-free part of the sawtooth integral over [n, n+1].
fn interval(kind: Sawtooth, s: Complex64, n: usize, series_from: f64) -> Complex64 {
    let nf = n as f64;
    let m = nf + 0.5;
    if m < series_from {
        return match kind {
            Sawtooth::Rho => linear_moment(s, nf, nf + 1.0, -m, 1.0),
            Sawtooth::Telescoped => {
                linear_moment(s, nf, m, nf, -1.0) + linear_moment(s, m, nf + 1.0, nf + 1.0, -1.0)
            }
        };
    }
    let inv2 = 1.0 / (m * m);
    let mut binom = -s - 1.0;
    let mut scale = 1.0 / m;
    let mut acc = binom * (kind.moment(1) * scale);
    let mut k = 1;
    loop {
        // b_{k+2} = b_k (−s−k−1)(−s−k−2) / ((k+1)(k+2))
        let kf = k as f64;
        binom = binom * (-s - (kf + 1.0)) * (-s - (kf + 2.0)) / ((kf + 1.0) * (kf + 2.0));
        scale *= inv2;
        k += 2;
        let term = binom * (kind.moment(k) * scale);
        acc += term;
        if term.norm() <= 1e-18 * acc.norm() || k > 61 {
            break;
        }
    }
    acc * pow_real_complex(m, -s - 1.0)
}

/// Ratio-two Richardson step removing a tail term ∝ N^{-p}.
fn richardson(coarse: Complex64, fine: Complex64, p: Complex64) -> Complex64 {
    let w = pow_real_complex(2.0, p);
    (w * fine - coarse) / (w - 1.0)
}

fn sawtooth(
    kind: Sawtooth,
    what: &'static str,
    s: Complex64,
    cfg: &TruncationConfig,
) -> Result<QuadratureOutcome> {
    check_strip(what, s, 0.0, 1.0, "requires 0 < Re s < 1")?;
    cfg.validate()?;
    let n_top = cfg.max_intervals;
    let series_from = 2.0 * (s.norm() + 3.0);
    let levels = [n_top / 8, n_top / 4, n_top / 2, n_top];

    let mut acc = CompensatedComplexSum::new();
    let mut abs_sum = 0.0;
    let mut partial = [Complex64::new(0.0, 0.0); 4];
    let mut next_level = 0;
    for n in 1..n_top {
        while next_level < 4 && levels[next_level] == n {
            partial[next_level] = acc.value();
            next_level += 1;
        }
        let c = interval(kind, s, n, series_from);
        abs_sum += c.norm();
        acc.add(c);
    }
    partial[3] = acc.value();

    let head = kind.head(s);
    let nf = n_top as f64;
    let remainder_tail = pow_real_complex(nf, -s - 1.0).norm() * kind.tail_coefficient();
    let rounding = 16.0 * f64::EPSILON * (abs_sum + head.norm());
    let mean_tail = match kind {
        Sawtooth::Rho => Complex64::new(0.5, 0.0) / s,
        Sawtooth::Telescoped => Complex64::new(0.0, 0.0),
    };

    let (value, estimate) = match cfg.tail_strategy {
        TailStrategy::MeanSubtraction => (head + mean_tail + partial[3], remainder_tail + rounding),
        TailStrategy::RawCutoff => {
            // mean part integrated over [1, N] only
            let cut = mean_tail * (1.0 - pow_real_complex(nf, -s));
            let missing = (mean_tail * pow_real_complex(nf, -s)).norm();
            (head + cut + partial[3], missing + remainder_tail + rounding)
        }
        TailStrategy::Extrapolated => {
            let mut row = partial.to_vec();
            let mut previous_best = row[2];
            for j in 0..3 {
                let p = s + (2 * j + 1) as f64;
                previous_best = row[row.len() - 1];
                row = row.windows(2).map(|w| richardson(w[0], w[1], p)).collect();
            }
            let best = row[0];
            (
                head + mean_tail + best,
                (best - previous_best).norm() + 4.0 * rounding,
            )
        }
    };
    finish(what, value, estimate, n_top, cfg.target_tol)
}

/// ∫₀^∞ x^{-s-1} ρ(x) dx, which equals ζ(s)/(−s).
pub fn mellin_rho(s: Complex64, cfg: &TruncationConfig) -> Result<QuadratureOutcome> {
    sawtooth(Sawtooth::Rho, "mellin_rho", s, cfg)
}

/// ∫₀^∞ x^{-s-1} (ρ(x) − ρ(2x)) dx, which equals (2^s − 1)ζ(s)/s.
pub fn mellin_telescoped(s: Complex64, cfg: &TruncationConfig) -> Result<QuadratureOutcome> {
    sawtooth(Sawtooth::Telescoped, "mellin_telescoped", s, cfg)
}

const MIN_LOBES: usize = 8;
const MAX_AVERAGING: usize = 40;
const LOBE_SUBINTERVALS: usize = 64;
const HEAD_SUBINTERVALS: usize = 400;

/// Repeated pairwise averaging of consecutive partial sums, collapsed to one value.
fn averaged(window: &[Complex64]) -> Complex64 {
    let mut v = window.to_vec();
    while v.len() > 1 {
        v = v.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    v[0]
}

/// ∫₀^∞ x^{-s-1} sin(ax) dx by quadrature.
///
/// With x = πy/a the integral is (π/a)^{-s} Σ_k (−1)^k I_k, where
/// I_k = ∫₀¹ (k+u)^{-s-1} sin(πu) du. The first lobe is integrated after the
/// substitution u = t^p, p = 5/(1 − ℜs), which makes the integrand vanish like
/// t⁴ at the origin. The alternating sum over k ≥ 1 is accelerated by repeated
/// averaging of its partial sums; `max_intervals` caps the lobe count.
pub fn mellin_sin_numeric(
    s: Complex64,
    a: f64,
    cfg: &TruncationConfig,
) -> Result<QuadratureOutcome> {
    const WHAT: &str = "mellin_sin_numeric";
    check_strip(WHAT, s, -1.0, 0.0, "requires -1 < Re s < 0")?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain {
            what: WHAT,
            at: s,
            reason: "frequency a must be positive and finite",
        });
    }
    cfg.validate()?;
    let prefactor = pow_real_complex(PI / a, -s);
    let tol = cfg.target_tol / prefactor.norm().max(f64::MIN_POSITIVE);
    let quad_tol = 1e-3 * tol;

    let p = 5.0 / (1.0 - s.re);
    let exponent = -s * p - 1.0;
    let head = quadrature::integrate(
        |t| pow_real_complex(t, exponent) * (p * (PI * t.powf(p)).sin()),
        0.0,
        1.0,
        quad_tol,
        HEAD_SUBINTERVALS,
    );
    let mut quad_error = head.abs_error;

    let mut partial_sums = Vec::with_capacity(cfg.max_intervals);
    let mut running = CompensatedComplexSum::new();
    let mut previous: Option<Complex64> = None;
    let mut delta = f64::INFINITY;
    let mut quiet_steps = 0;
    let mut accelerated = Complex64::new(0.0, 0.0);
    let mut lobes = 0;
    while lobes < cfg.max_intervals && quiet_steps < 2 {
        lobes += 1;
        let k = lobes as f64;
        let lobe = quadrature::integrate(
            |u| pow_real_complex(k + u, -s - 1.0) * (PI * u).sin(),
            0.0,
            1.0,
            quad_tol,
            LOBE_SUBINTERVALS,
        );
        quad_error += lobe.abs_error;
        running.add(if lobes % 2 == 1 {
            -lobe.value
        } else {
            lobe.value
        });
        partial_sums.push(running.value());

        let width = (lobes / 2).min(MAX_AVERAGING);
        accelerated = averaged(&partial_sums[lobes - 1 - width..]);
        if let Some(prev) = previous {
            delta = (accelerated - prev).norm();
            if lobes >= MIN_LOBES && delta < 0.5 * tol {
                quiet_steps += 1;
            } else {
                quiet_steps = 0;
            }
        }
        previous = Some(accelerated);
    }

    let value = prefactor * (head.value + accelerated);
    let estimate = prefactor.norm() * (quad_error + delta) + 8.0 * f64::EPSILON * value.norm();
    let converged = quiet_steps >= 2 && head.converged;
    if converged && estimate <= cfg.target_tol {
        Ok(QuadratureOutcome {
            value,
            abs_error_estimate: estimate,
            work: lobes + 1,
            converged: true,
        })
    } else {
        Err(Error::NonConvergence {
            what: WHAT,
            value,
            estimate,
            tolerance: cfg.target_tol,
            work: lobes + 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, zeta_oracle};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rho_target(s: Complex64) -> Complex64 {
        zeta_oracle(s).unwrap().value / (-s)
    }

    fn telescoped_target(s: Complex64) -> Complex64 {
        (pow_real_complex(2.0, s) - 1.0) * zeta_oracle(s).unwrap().value / s
    }

    /// ∫₀¹ u^{-s-1} sin(πu) du as a power series in π.
    fn head_series(s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut coef = PI;
        for j in 0..60 {
            let odd = (2 * j + 1) as f64;
            acc += coef / (odd - s);
            coef *= -PI * PI / ((odd + 1.0) * (odd + 2.0));
        }
        acc
    }

    /// Γ(−s) sin(−πs/2) a^s, the known closed form.
    fn sine_closed(s: Complex64, a: f64) -> Complex64 {
        -gamma(-s).unwrap() * (s * (PI / 2.0)).sin() * pow_real_complex(a, s)
    }

    #[test]
    fn rho_examples() {
        let cfg = TruncationConfig::default();
        let v = mellin_rho(c(0.5, 0.0), &cfg).unwrap();
        assert!((v.value - c(2.920_709_0, 0.0)).norm() < 1e-7);
        let v = mellin_rho(c(0.25, 0.0), &cfg).unwrap();
        assert!((v.value - c(3.253_113_6, 0.0)).norm() < 1e-7);
        let s = c(0.5, 2.0);
        assert!((mellin_rho(s, &cfg).unwrap().value - rho_target(s)).norm() < 1e-8);
    }

    #[test]
    fn telescoped_examples() {
        let cfg = TruncationConfig::default();
        let v = mellin_telescoped(c(0.5, 0.0), &cfg).unwrap();
        // (√2 − 1)·ζ(1/2)/(1/2) = −1.2097972868…
        assert!((v.value - c(-1.209_797_286_8, 0.0)).norm() < 1e-9);
        let s = c(0.25, 0.0);
        assert!((mellin_telescoped(s, &cfg).unwrap().value - telescoped_target(s)).norm() < 1e-8);
    }

    #[test]
    fn dilation_identity_at_point_seven() {
        let cfg = TruncationConfig::default();
        let s = c(0.7, 0.0);
        let rho = mellin_rho(s, &cfg).unwrap().value;
        let tel = mellin_telescoped(s, &cfg).unwrap().value;
        let expected = (1.0 - pow_real_complex(2.0, s)) * rho;
        assert!((tel - expected).norm() < 1e-12);
    }

    #[test]
    fn series_and_antiderivative_agree_at_switch() {
        for kind in [Sawtooth::Rho, Sawtooth::Telescoped] {
            for s in [c(0.1, 0.0), c(0.5, 7.0), c(0.9, -19.0)] {
                for n in [1usize, 5, 40, 60] {
                    let closed = interval(kind, s, n, f64::INFINITY);
                    let series = interval(kind, s, n, 0.0);
                    let m = n as f64 + 0.5;
                    let scale = pow_real_complex(m, -s - 2.0).norm() * (s.norm() + 1.0);
                    if m >= 2.0 * (s.norm() + 3.0) {
                        assert!((closed - series).norm() < 1e-9 * scale, "{kind:?} {s} {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn every_strategy_is_honest() {
        for strategy in [
            TailStrategy::MeanSubtraction,
            TailStrategy::RawCutoff,
            TailStrategy::Extrapolated,
        ] {
            let cfg = TruncationConfig {
                tail_strategy: strategy,
                target_tol: 1e3,
                ..TruncationConfig::default()
            };
            for s in [c(0.05, 0.0), c(0.5, 10.0), c(0.95, -20.0)] {
                let out = mellin_rho(s, &cfg).unwrap();
                let err = (out.value - rho_target(s)).norm();
                assert!(
                    err <= 10.0 * out.abs_error_estimate + 1e-13,
                    "{strategy:?} {s}: {err} vs {}",
                    out.abs_error_estimate
                );
                let out = mellin_telescoped(s, &cfg).unwrap();
                let err = (out.value - telescoped_target(s)).norm();
                assert!(
                    err <= 10.0 * out.abs_error_estimate + 1e-13,
                    "{strategy:?} {s}: {err} vs {}",
                    out.abs_error_estimate
                );
            }
        }
    }

    #[test]
    fn slow_tails_report_non_convergence() {
        let cfg = TruncationConfig {
            tail_strategy: TailStrategy::RawCutoff,
            ..TruncationConfig::default()
        };
        let err = mellin_rho(c(0.05, 0.0), &cfg).unwrap_err();
        let best = QuadratureOutcome::from_non_convergence(&err).unwrap();
        assert!(!best.converged);
        assert!((best.value - rho_target(c(0.05, 0.0))).norm() < 10.0 * best.abs_error_estimate);
    }

    #[test]
    fn strip_and_config_checks() {
        let cfg = TruncationConfig::default();
        assert!(matches!(
            mellin_rho(c(0.01, 0.0), &cfg),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            mellin_telescoped(c(0.99, 0.0), &cfg),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            mellin_sin_numeric(c(-0.5, 0.0), 0.0, &cfg),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            mellin_sin_numeric(c(0.5, 0.0), 1.0, &cfg),
            Err(Error::Domain { .. })
        ));
        let bad = TruncationConfig {
            max_intervals: 9,
            ..cfg
        };
        assert!(matches!(
            mellin_rho(c(0.5, 0.0), &bad),
            Err(Error::Config(_))
        ));
        let bad = TruncationConfig {
            target_tol: 0.0,
            ..cfg
        };
        assert!(matches!(
            mellin_rho(c(0.5, 0.0), &bad),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn sine_fresnel_values() {
        let cfg = TruncationConfig::default();
        let s = c(-0.5, 0.0);
        for (a, want) in [(2.0 * PI, 0.5), (8.0 * PI, 0.25), (1.0, (PI / 2.0).sqrt())] {
            let out = mellin_sin_numeric(s, a, &cfg).unwrap();
            assert!(
                (out.value - c(want, 0.0)).norm() < 1e-9,
                "a = {a}: {}",
                out.value
            );
            assert!(out.converged);
        }
    }

    #[test]
    fn sine_matches_closed_form_off_axis() {
        let cfg = TruncationConfig::default();
        for s in [
            c(-0.05, 0.0),
            c(-0.95, 0.0),
            c(-0.3, 4.0),
            c(-0.7, -10.0),
            c(-0.5, 20.0),
        ] {
            for a in [1.0, 2.0 * PI, 8.0 * PI, 30.0] {
                let out = mellin_sin_numeric(s, a, &cfg).unwrap();
                let want = sine_closed(s, a);
                let err = (out.value - want).norm();
                assert!(err < 1e-9 * want.norm().max(1.0), "s = {s}, a = {a}: {err}");
                assert!(
                    err <= 10.0 * out.abs_error_estimate + 1e-13,
                    "s = {s}, a = {a}: {err} vs {}",
                    out.abs_error_estimate
                );
            }
        }
    }

    #[test]
    fn first_lobe_matches_power_series() {
        for s in [c(-0.1, 0.0), c(-0.9, 0.0), c(-0.4, 3.0)] {
            let p = 5.0 / (1.0 - s.re);
            let exponent = -s * p - 1.0;
            let head = quadrature::integrate(
                |t| pow_real_complex(t, exponent) * (p * (PI * t.powf(p)).sin()),
                0.0,
                1.0,
                1e-14,
                HEAD_SUBINTERVALS,
            );
            assert!((head.value - head_series(s)).norm() < 1e-12, "{s}");
        }
    }

    #[test]
    fn lobe_cap_reports_non_convergence() {
        let cfg = TruncationConfig {
            max_intervals: 10,
            ..TruncationConfig::default()
        };
        let err = mellin_sin_numeric(c(-0.5, 0.0), 1.0, &cfg).unwrap_err();
        assert!(err.is_non_convergence());
    }
}
