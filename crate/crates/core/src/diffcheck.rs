//! Seeded differential harness: the structured collision-rank test against
//! the Kalman and PBH oracles on random factor pairs.
//!
//! Instances whose factor spectra do not split over the rationals are
//! skipped (the structured path cannot run there by design) and the skip
//! count is reported. Trials derive their randomness from independent
//! ChaCha streams keyed by trial index, so a fixed seed reproduces the same
//! summary byte for byte regardless of evaluation order.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::{check_kron, kalman_oracle, pbh_oracle, Verdict};
use crate::eigen::eigenvalues;
use crate::error::Result;
use crate::graph::InputSelection;
use crate::mat::Mat;
use crate::rational::Rational;

/// Harness parameters.
#[derive(Clone, Copy, Debug)]
pub struct DiffConfig {
    pub trials: u64,
    pub seed: u64,
    pub max_size: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            trials: 200,
            seed: 7,
            max_size: 3,
        }
    }
}

/// Aggregated outcome; `failures` holds one line per disagreement.
#[derive(Clone, Debug, Default)]
pub struct DiffSummary {
    pub trials: u64,
    pub passes: u64,
    pub skips: u64,
    pub failures: Vec<String>,
}

impl DiffSummary {
    pub fn failed(&self) -> usize {
        self.failures.len()
    }
}

impl fmt::Display for DiffSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "trials={} pass={} skip={} fail={}",
            self.trials,
            self.passes,
            self.skips,
            self.failed()
        )?;
        for line in &self.failures {
            writeln!(f, "FAIL {line}")?;
        }
        Ok(())
    }
}

/// Random integer factor: entries are zero with probability 0.3, otherwise
/// uniform over ±{1,2,3}.
pub fn random_matrix(rng: &mut impl Rng, size: usize) -> Mat {
    Mat::from_fn(size, size, |_, _| {
        if rng.gen_range(0..10) < 3 {
            Rational::zero()
        } else {
            let magnitude = rng.gen_range(1..=3i64);
            if rng.gen_bool(0.5) {
                Rational::from(magnitude)
            } else {
                Rational::from(-magnitude)
            }
        }
    })
}

/// Random nonempty actuated set over `size` nodes.
pub fn random_selection(rng: &mut impl Rng, size: usize) -> InputSelection {
    let mut nodes: Vec<usize> = (1..=size).filter(|_| rng.gen_bool(0.5)).collect();
    if nodes.is_empty() {
        nodes.push(rng.gen_range(1..=size));
    }
    InputSelection::new(size, nodes).expect("indices in range")
}

/// Random factor pair with selections, sizes 1..=max_size each.
pub fn random_instance(
    rng: &mut impl Rng,
    max_size: usize,
) -> (Mat, InputSelection, Mat, InputSelection) {
    let n1 = rng.gen_range(1..=max_size);
    let n2 = rng.gen_range(1..=max_size);
    let a1 = random_matrix(rng, n1);
    let a2 = random_matrix(rng, n2);
    let b1 = random_selection(rng, n1);
    let b2 = random_selection(rng, n2);
    (a1, b1, a2, b2)
}

/// Random integer matrix with a fully rational spectrum and nontrivial
/// Jordan structure: an upper triangular core with a small repeated-prone
/// diagonal, conjugated by a random unimodular integer matrix.
pub fn random_rational_spectrum_matrix(rng: &mut impl Rng, size: usize) -> Mat {
    let mut core = Mat::zeros(size, size);
    for i in 0..size {
        core.set(i, i, Rational::from(rng.gen_range(-1..=2i64)));
        for j in i + 1..size {
            if rng.gen_bool(0.6) {
                core.set(i, j, Rational::from(rng.gen_range(-2..=2i64)));
            }
        }
    }
    // Conjugate by elementary integer row operations, tracking the inverse.
    let mut u = Mat::identity(size);
    let mut u_inv = Mat::identity(size);
    if size > 1 {
        for _ in 0..2 * size {
            let i = rng.gen_range(0..size);
            let mut j = rng.gen_range(0..size);
            while j == i {
                j = rng.gen_range(0..size);
            }
            let c = Rational::from(rng.gen_range(1..=2i64));
            let c = if rng.gen_bool(0.5) { -c } else { c };
            // u <- E u with E = I + c e_ji; u_inv <- u_inv E^{-1}.
            for col in 0..size {
                let v = u.at(j, col) + &(&c * u.at(i, col));
                u.set(j, col, v);
            }
            for row in 0..size {
                let v = u_inv.at(row, i) - &(&c * u_inv.at(row, j));
                u_inv.set(row, i, v);
            }
        }
    }
    u.matmul(&core)
        .and_then(|m| m.matmul(&u_inv))
        .expect("square dimensions")
}

fn rng_for_trial(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn run_trial(trial: u64, cfg: &DiffConfig) -> Result<Outcome> {
    let mut rng = rng_for_trial(cfg.seed, trial);
    let (a1, b1, a2, b2) = random_instance(&mut rng, cfg.max_size);
    let (_, full1) = eigenvalues(&a1)?;
    let (_, full2) = eigenvalues(&a2)?;
    if !full1 || !full2 {
        return Ok(Outcome::Skip);
    }
    let report = check_kron(&a1, &b1, &a2, &b2)?;
    let structured = match report.verdict {
        Verdict::Controllable => true,
        Verdict::Uncontrollable => false,
        Verdict::OracleOnly => unreachable!("spectra verified rational"),
    };
    let composite = a1.kron(&a2);
    let input = b1.matrix().kron(&b2.matrix());
    let kalman = kalman_oracle(&composite, &input)?;
    let pbh = pbh_oracle(&composite, &input)?;
    if structured == kalman && kalman == pbh {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Fail(format!(
            "trial {trial}: structured={structured} kalman={kalman} pbh={pbh} a1={a1:?} b1={:?} a2={a2:?} b2={:?}",
            b1.indices(),
            b2.indices()
        )))
    }
}

/// Runs the harness; deterministic for a fixed config.
pub fn run_differential(cfg: &DiffConfig) -> DiffSummary {
    let mut summary = DiffSummary {
        trials: cfg.trials,
        ..DiffSummary::default()
    };
    for trial in 0..cfg.trials {
        match run_trial(trial, cfg) {
            Ok(Outcome::Pass) => summary.passes += 1,
            Ok(Outcome::Skip) => summary.skips += 1,
            Ok(Outcome::Fail(line)) => summary.failures.push(line),
            Err(e) => summary.failures.push(format!("trial {trial}: error {e}")),
        }
    }
    summary
}
