//! Closed-form term integrals, the factor χ(s), and the chain of
//! equalities leading from the sawtooth Mellin transform to
//!
//! ```text
//! ζ(s) = χ(s) ζ(1 − s),   χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1 − s).
//! ```

mod grid;
mod record;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use grid::{GridSpec, DEFAULT_EXCLUSION_RADIUS};
pub use record::{Step, TolerancePolicy, VerificationRecord};

use crate::error::{Error, Result};
use crate::mellin::{self, QuadratureOutcome, TruncationConfig, STRIP_MARGIN};
use crate::specfun::{gamma, pow_real_complex, rgamma, sin_pi, zeta_oracle};
use crate::sum::CompensatedComplexSum;

/// Terms of the Fourier series evaluated through [`mellin_sin_closed`]
/// before switching to the factored form.
pub const UNFACTORED_TERMS: usize = 64;

/// Frequencies of the term-wise integrals checked by the chain.
pub const CHAIN_FREQUENCIES: [f64; 2] = [2.0 * PI, 4.0 * PI];

fn in_strip(s: Complex64, lo: f64, hi: f64) -> bool {
    s.re >= lo + STRIP_MARGIN && s.re <= hi - STRIP_MARGIN && s.im.is_finite()
}

pub fn in_critical_strip(s: Complex64) -> bool {
    in_strip(s, 0.0, 1.0)
}

pub fn in_left_strip(s: Complex64) -> bool {
    in_strip(s, -1.0, 0.0)
}

fn require_left_strip(what: &'static str, s: Complex64) -> Result<()> {
    if in_left_strip(s) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            at: s,
            reason: "requires -1 < Re s < 0",
        })
    }
}

/// ∫₀^∞ x^{-s-1} sin(ax) dx = −Γ(−s) sin(πs/2) a^s.
pub fn mellin_sin_closed(s: Complex64, a: f64) -> Result<Complex64> {
    require_left_strip("mellin_sin_closed", s)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain {
            what: "mellin_sin_closed",
            at: s,
            reason: "frequency a must be positive and finite",
        });
    }
    Ok(-gamma(-s)? * sin_pi(s * 0.5) * pow_real_complex(a, s))
}

/// χ(s) through π^{s−1/2} Γ((1−s)/2) / Γ(s/2), finite at the even integers.
pub fn chi(s: Complex64) -> Result<Complex64> {
    let g = gamma((1.0 - s) * 0.5).map_err(|e| match e {
        Error::Pole { .. } => Error::Pole {
            function: "chi",
            at: s,
        },
        other => other,
    })?;
    Ok(pow_real_complex(PI, s - 0.5) * g * rgamma(s * 0.5))
}

/// χ(s) as the product 2^s π^{s−1} sin(πs/2) Γ(1−s).
pub fn chi_product(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let g = gamma(one - s).map_err(|_| Error::Pole {
        function: "chi (product form)",
        at: s,
    })?;
    Ok(pow_real_complex(2.0, s) * pow_real_complex(PI, s - one) * sin_pi(s * 0.5) * g)
}

/// −Γ(−s) sin(πs/2) π^{s−1} (4^s − 2^s), the common factor of the terms
/// of the interchanged series.
fn series_factor(s: Complex64) -> Result<Complex64> {
    Ok(-gamma(-s)?
        * sin_pi(s * 0.5)
        * pow_real_complex(PI, s - 1.0)
        * (pow_real_complex(4.0, s) - pow_real_complex(2.0, s)))
}

/// Σ_{n=1}^{N} (1/(nπ)) [M(s, 4nπ) − M(s, 2nπ)] with M the closed-form sine
/// transform. Terms beyond the first 64 use the factored form
/// K(s)·n^{s−1}.
pub fn series_rhs_partial(s: Complex64, n_terms: usize) -> Result<Complex64> {
    require_left_strip("series_rhs_partial", s)?;
    if n_terms == 0 {
        return Err(Error::Config("n_terms must be at least 1".into()));
    }
    let mut acc = CompensatedComplexSum::new();
    for n in 1..=n_terms.min(UNFACTORED_TERMS) {
        let nf = n as f64;
        let term = mellin_sin_closed(s, 4.0 * nf * PI)? - mellin_sin_closed(s, 2.0 * nf * PI)?;
        acc.add(term / (nf * PI));
    }
    if n_terms > UNFACTORED_TERMS {
        let mut powers = CompensatedComplexSum::new();
        let exponent = s - 1.0;
        for n in UNFACTORED_TERMS + 1..=n_terms {
            powers.add(pow_real_complex(n as f64, exponent));
        }
        acc.add(series_factor(s)? * powers.value());
    }
    Ok(acc.value())
}

/// K(s)·Σ_{n>N} n^{s−1} from its Euler–Maclaurin expansion through the B4 term.
pub fn series_rhs_tail(s: Complex64, n_terms: usize) -> Result<Complex64> {
    require_left_strip("series_rhs_tail", s)?;
    if n_terms == 0 {
        return Err(Error::Config("n_terms must be at least 1".into()));
    }
    let n = n_terms as f64;
    let one = Complex64::new(1.0, 0.0);
    let p = pow_real_complex(n, s);
    let tail = -p / s - p / (2.0 * n) - (s - one) * p / (12.0 * n * n)
        + (s - one) * (s - 2.0) * (s - 3.0) * p / (720.0 * n.powi(4));
    Ok(series_factor(s)? * tail)
}

/// Partial sum plus the closed-form estimate of what is left.
pub fn series_rhs_tail_corrected(s: Complex64, n_terms: usize) -> Result<Complex64> {
    Ok(series_rhs_partial(s, n_terms)? + series_rhs_tail(s, n_terms)?)
}

/// (2^s − 1) ζ(s) / s from the oracle.
pub fn telescoped_oracle(s: Complex64) -> Result<Complex64> {
    Ok((pow_real_complex(2.0, s) - 1.0) * zeta_oracle(s)?.value / s)
}

/// A value and whether it converged, with NonConvergence downgraded to its
/// best-effort value. Any other error aborts the record.
fn settle<T>(
    r: Result<T>,
    on_ok: impl FnOnce(T) -> (Complex64, usize),
) -> Option<(Complex64, usize, bool)> {
    match r {
        Ok(v) => {
            let (value, work) = on_ok(v);
            Some((value, work, true))
        }
        Err(Error::NonConvergence { value, work, .. }) => Some((value, work, false)),
        Err(_) => None,
    }
}

fn from_outcome(o: QuadratureOutcome) -> (Complex64, usize) {
    (o.value, o.work)
}

fn compare(
    step: Step,
    s: Complex64,
    lhs: Option<(Complex64, usize, bool)>,
    rhs: Option<(Complex64, usize, bool)>,
    tol: &TolerancePolicy,
) -> VerificationRecord {
    match (lhs, rhs) {
        (Some((l, work, lc)), Some((r, _, rc))) => {
            VerificationRecord::new(step, s, l, r, work, lc && rc, tol)
        }
        _ => VerificationRecord::failed(step, s),
    }
}

pub fn eq1_record(
    s: Complex64,
    cfg: &TruncationConfig,
    tol: &TolerancePolicy,
) -> VerificationRecord {
    let lhs = settle(mellin::mellin_rho(s, cfg), from_outcome);
    let rhs = settle(zeta_oracle(s), |z| (z.value / (-s), z.pivot_terms));
    compare(Step::Eq1, s, lhs, rhs, tol)
}

pub fn telescope_record(
    s: Complex64,
    cfg: &TruncationConfig,
    tol: &TolerancePolicy,
) -> VerificationRecord {
    let lhs = settle(mellin::mellin_telescoped(s, cfg), from_outcome);
    let rhs = settle(telescoped_oracle(s), |v| (v, 0));
    compare(Step::Telescope, s, lhs, rhs, tol)
}

/// Numeric against closed-form sine transform at frequency a.
pub fn interchange_record(
    s: Complex64,
    a: f64,
    cfg: &TruncationConfig,
    tol: &TolerancePolicy,
) -> VerificationRecord {
    let lhs = settle(mellin::mellin_sin_numeric(s, a, cfg), from_outcome);
    let rhs = settle(mellin_sin_closed(s, a), |v| (v, 0));
    compare(Step::Interchange, s, lhs, rhs, tol)
}

/// Tail-corrected interchanged series with `cfg.series_terms` terms against
/// (2^s − 1) ζ(s) / s.
pub fn series_sum_record(
    s: Complex64,
    cfg: &TruncationConfig,
    tol: &TolerancePolicy,
) -> VerificationRecord {
    let n = cfg.series_terms;
    let lhs = settle(series_rhs_tail_corrected(s, n), |v| (v, n));
    let rhs = settle(telescoped_oracle(s), |v| (v, 0));
    compare(Step::SeriesSum, s, lhs, rhs, tol)
}

/// ζ(s) against χ(s) ζ(1 − s), both sides from the oracle.
pub fn fe_residual(s: Complex64, tol: &TolerancePolicy) -> Result<VerificationRecord> {
    let lhs = zeta_oracle(s)?;
    let rhs = chi(s)? * zeta_oracle(1.0 - s)?.value;
    Ok(VerificationRecord::new(
        Step::FuncEq,
        s,
        lhs.value,
        rhs,
        lhs.pivot_terms,
        true,
        tol,
    ))
}

/// [`fe_residual`] with failures folded into the record.
pub fn fe_record(s: Complex64, tol: &TolerancePolicy) -> VerificationRecord {
    let lhs = settle(zeta_oracle(s), |z| (z.value, z.pivot_terms));
    let rhs = match (chi(s), zeta_oracle(1.0 - s)) {
        (Ok(c), Ok(z)) => Some((c * z.value, 0, true)),
        (Ok(c), Err(Error::NonConvergence { value, work, .. })) => Some((c * value, work, false)),
        _ => None,
    };
    compare(Step::FuncEq, s, lhs, rhs, tol)
}

/// Every step of the chain that applies at s: EQ1, TELESCOPE and FUNC_EQ in
/// the critical strip; INTERCHANGE at 2π and 4π, SERIES_SUM and FUNC_EQ in
/// the strip −1 < ℜs < 0. Excluded points yield no records.
pub fn verify_chain(
    s: Complex64,
    cfg: &TruncationConfig,
    grid_policy: &GridSpec,
    tol: &TolerancePolicy,
) -> Result<Vec<VerificationRecord>> {
    cfg.validate()?;
    if grid_policy.is_excluded(s) {
        return Ok(Vec::new());
    }
    if in_critical_strip(s) {
        Ok(vec![
            eq1_record(s, cfg, tol),
            telescope_record(s, cfg, tol),
            fe_record(s, tol),
        ])
    } else if in_left_strip(s) {
        let mut out: Vec<_> = CHAIN_FREQUENCIES
            .iter()
            .map(|&a| interchange_record(s, a, cfg, tol))
            .collect();
        out.push(series_sum_record(s, cfg, tol));
        out.push(fe_record(s, tol));
        Ok(out)
    } else {
        Err(Error::Domain {
            what: "verify_chain",
            at: s,
            reason: "requires 0 < Re s < 1 or -1 < Re s < 0, 0.02 inside the strip",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn sine_closed_fresnel() {
        let s = c(-0.5, 0.0);
        assert!((mellin_sin_closed(s, 2.0 * PI).unwrap() - 0.5).norm() < 1e-14);
        assert!((mellin_sin_closed(s, 1.0).unwrap() - (PI / 2.0).sqrt()).norm() < 1e-14);
    }

    #[test]
    fn sine_closed_scaling() {
        let s = c(-0.3, 0.7);
        let lhs = mellin_sin_closed(s, 5.0).unwrap();
        let rhs = pow_real_complex(5.0, s) * mellin_sin_closed(s, 1.0).unwrap();
        assert!(rel(lhs, rhs) < 1e-14);
    }

    #[test]
    fn sine_closed_domain() {
        assert!(matches!(
            mellin_sin_closed(c(0.5, 0.0), 1.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            mellin_sin_closed(c(-0.5, 0.0), -1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn chi_examples() {
        assert!((chi(c(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((chi(c(2.0, 0.0)).unwrap() + 2.0 * PI * PI).norm() < 1e-12);
        let p = chi(c(0.3, 0.0)).unwrap() * chi(c(0.7, 0.0)).unwrap();
        assert!((p - 1.0).norm() < 1e-12);
        assert!(matches!(chi(c(3.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(chi(c(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn chi_forms_agree() {
        for s in [
            c(0.3, 0.0),
            c(-2.5, 4.0),
            c(0.5, 20.0),
            c(-7.3, -3.0),
            c(4.5, 1.0),
        ] {
            assert!(rel(chi(s).unwrap(), chi_product(s).unwrap()) < 1e-11, "{s}");
        }
        // Γ(1 − s) has a pole at s = 2 although χ(2) is finite
        assert!(chi_product(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn fe_examples() {
        let tol = TolerancePolicy::default();
        let r = fe_residual(c(2.0, 0.0), &tol).unwrap();
        assert!((r.lhs - PI * PI / 6.0).norm() < 1e-12);
        assert!(r.abs_err < 1e-10 && r.pass);
        let r = fe_residual(c(-3.0, 0.0), &tol).unwrap();
        assert!((r.lhs - 1.0 / 120.0).norm() < 1e-12);
        assert!(r.abs_err < 1e-10);
        let r = fe_residual(c(0.5, 5.0), &tol).unwrap();
        assert!(r.rel_err < 1e-9);
        let r = fe_residual(c(0.5, 0.0), &tol).unwrap();
        assert!(r.abs_err < 1e-14);
        assert!(fe_residual(c(1.0, 0.0), &tol).is_err());
    }

    #[test]
    fn single_term_value() {
        let v = series_rhs_partial(c(-0.5, 0.0), 1).unwrap();
        let want = ((1.0 / 8.0_f64).sqrt() - 0.5) / PI;
        assert!((v - want).norm() < 1e-15);
        assert!((v.re + 0.046_615_403_6).abs() < 1e-10);
    }

    #[test]
    fn factored_form_matches_unfactored() {
        let s = c(-0.4, 2.5);
        let k = series_factor(s).unwrap();
        for n in [1.0, 65.0, 1000.0] {
            let direct = (mellin_sin_closed(s, 4.0 * n * PI).unwrap()
                - mellin_sin_closed(s, 2.0 * n * PI).unwrap())
                / (n * PI);
            assert!(rel(direct, k * pow_real_complex(n, s - 1.0)) < 1e-13);
        }
    }

    #[test]
    fn tail_correction_closes_the_gap() {
        let s = c(-0.5, 0.0);
        let target = telescoped_oracle(s).unwrap();
        assert!((target.re + 0.121_776_93).abs() < 1e-8);
        for n in [100, 1000, 5000] {
            let raw = series_rhs_partial(s, n).unwrap();
            let fixed = series_rhs_tail_corrected(s, n).unwrap();
            assert!((raw - target).norm() > 1e-4);
            assert!(
                (fixed - target).norm() < 1e-12,
                "{n}: {}",
                (fixed - target).norm()
            );
        }
    }

    #[test]
    fn chain_in_critical_strip() {
        let cfg = TruncationConfig::default();
        let grid = GridSpec::new((0.0, 1.0), (0.0, 1.0), (2, 2)).unwrap();
        let recs = verify_chain(c(0.5, 0.0), &cfg, &grid, &TolerancePolicy::default()).unwrap();
        let steps: Vec<_> = recs.iter().map(|r| r.step).collect();
        assert_eq!(steps, [Step::Eq1, Step::Telescope, Step::FuncEq]);
        assert!((recs[0].lhs - 2.920_709_017_6).norm() < 1e-9);
        assert!((recs[1].lhs + 1.209_797_286_8).norm() < 1e-9);
        assert!(recs[2].rel_err < 1e-9);
        assert!(recs.iter().all(|r| r.pass));
    }

    #[test]
    fn chain_in_left_strip() {
        let cfg = TruncationConfig::default();
        let grid = GridSpec::new((0.0, 1.0), (0.0, 1.0), (2, 2)).unwrap();
        let recs = verify_chain(c(-0.5, 3.0), &cfg, &grid, &TolerancePolicy::default()).unwrap();
        let steps: Vec<_> = recs.iter().map(|r| r.step).collect();
        assert_eq!(
            steps,
            [
                Step::Interchange,
                Step::Interchange,
                Step::SeriesSum,
                Step::FuncEq
            ]
        );
        assert!(recs.iter().all(|r| r.pass), "{recs:?}");
        assert_eq!(recs[2].n_terms, cfg.series_terms);
    }

    #[test]
    fn chain_domain_and_exclusions() {
        let cfg = TruncationConfig::default();
        let tol = TolerancePolicy::default();
        let grid = GridSpec::new((0.0, 1.0), (0.0, 1.0), (2, 2)).unwrap();
        assert!(verify_chain(c(2.0, 0.0), &cfg, &grid, &tol).is_err());
        assert!(verify_chain(c(0.01, 5.0), &cfg, &grid, &tol).is_err());
        assert!(verify_chain(c(0.95, 0.0), &cfg, &grid, &tol)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn chain_reports_non_convergence_instead_of_aborting() {
        let cfg = TruncationConfig {
            max_intervals: 10,
            ..TruncationConfig::default()
        };
        let grid = GridSpec::new((0.0, 1.0), (0.0, 1.0), (2, 2)).unwrap();
        let recs = verify_chain(c(0.3, 1.0), &cfg, &grid, &TolerancePolicy::default()).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(!recs[0].converged && !recs[0].pass);
        assert!(recs[0].lhs.norm().is_finite());
        assert!(recs[2].pass);
    }
}
