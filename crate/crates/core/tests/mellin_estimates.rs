//! Honesty and refinement behaviour of the Mellin error estimates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zeta_mellin::funceq::{mellin_sin_closed, telescoped_oracle, GridSpec};
use zeta_mellin::mellin::{
    mellin_rho, mellin_sin_numeric, mellin_telescoped, QuadratureOutcome, TailStrategy,
    TruncationConfig,
};
use zeta_mellin::specfun::zeta_oracle;
use zeta_mellin::Result;

fn outcome(r: Result<QuadratureOutcome>) -> QuadratureOutcome {
    match r {
        Ok(o) => o,
        Err(e) => {
            QuadratureOutcome::from_non_convergence(&e).expect("only non-convergence expected")
        }
    }
}

#[test]
fn estimates_are_honest_on_acceptance_grids() {
    let mut total = 0;
    let mut honest = 0;
    let mut tally = |err: f64, est: f64| {
        total += 1;
        if err <= 10.0 * est {
            honest += 1;
        }
    };
    let cfg = TruncationConfig::default();
    for s in GridSpec::new((0.05, 0.95), (-20.0, 20.0), (10, 20))
        .unwrap()
        .points()
    {
        let z = zeta_oracle(s).unwrap().value;
        let o = outcome(mellin_rho(s, &cfg));
        tally((o.value - z / (-s)).norm(), o.abs_error_estimate);
        let o = outcome(mellin_telescoped(s, &cfg));
        tally(
            (o.value - telescoped_oracle(s).unwrap()).norm(),
            o.abs_error_estimate,
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..50 {
        let s = Complex64::new(rng.gen_range(-0.95..-0.05), rng.gen_range(-10.0..10.0));
        let a = [2.0, 4.0, 8.0][i % 3] * PI;
        let o = outcome(mellin_sin_numeric(s, a, &cfg));
        tally(
            (o.value - mellin_sin_closed(s, a).unwrap()).norm(),
            o.abs_error_estimate,
        );
    }
    assert!(honest as f64 >= 0.99 * total as f64, "{honest} of {total}");
}

#[test]
fn non_converged_estimates_are_honest_too() {
    for strategy in [TailStrategy::MeanSubtraction, TailStrategy::RawCutoff] {
        let cfg = TruncationConfig {
            tail_strategy: strategy,
            max_intervals: 200,
            ..TruncationConfig::default()
        };
        for s in [Complex64::new(0.1, 3.0), Complex64::new(0.6, -12.0)] {
            let o = outcome(mellin_rho(s, &cfg));
            let err = (o.value - zeta_oracle(s).unwrap().value / (-s)).norm();
            assert!(
                err <= 10.0 * o.abs_error_estimate && err >= 0.1 * o.abs_error_estimate,
                "{strategy:?} {s}"
            );
        }
    }
}

#[test]
fn doubling_intervals_does_not_hurt() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let sample: Vec<Complex64> = (0..20)
        .map(|_| Complex64::new(rng.gen_range(0.05..0.95), rng.gen_range(-20.0..20.0)))
        .collect();
    for strategy in [
        TailStrategy::Extrapolated,
        TailStrategy::MeanSubtraction,
        TailStrategy::RawCutoff,
    ] {
        for &s in &sample {
            let exact = zeta_oracle(s).unwrap().value / (-s);
            let mut n = 64;
            while n <= 2048 {
                let at = |m: usize| {
                    outcome(mellin_rho(
                        s,
                        &TruncationConfig {
                            max_intervals: m,
                            tail_strategy: strategy,
                            ..TruncationConfig::default()
                        },
                    ))
                };
                let (coarse, fine) = (at(n), at(2 * n));
                let (e1, e2) = ((coarse.value - exact).norm(), (fine.value - exact).norm());
                assert!(
                    e2 <= e1 + fine.abs_error_estimate,
                    "{strategy:?} {s} N={n}: {e1:e} -> {e2:e}"
                );
                n *= 2;
            }
        }
    }
}
