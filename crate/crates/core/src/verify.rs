//! Randomized property suites behind `qdist verify`.
//!
//! Every trial draws from its own ChaCha stream derived from the seed, the
//! suite and the trial index, so reports are reproducible and independent of
//! scheduling.

use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::channels::{DepolarizingChannel, MixingChannel};
use crate::distances::{dn_mixed_closed, fidelity, neighboring_overlap_deficit};
use crate::entropy::{mixing_gap, Ensemble, ProbDist};
use crate::error::{Error, Result};
use crate::linalg::partial_trace_aux;
use crate::purification::{
    ap_update, assemble_qubit_purification, dn_via_purification, solve_a_system, Objective, Rotation3,
};
use crate::states::{
    from_bloch, random_bloch, random_density, random_pure, random_unitary, BlochVector, DensityMatrix, PureState,
};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: usize,
    pub dims: RangeInclusive<usize>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { trials: 1000, dims: 2..=8, seed: 42 }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if *self.dims.start() < 2 || self.dims.is_empty() {
            return Err(Error::Domain(format!(
                "dimension range {}..{} must be non-empty and start at 2 or more",
                self.dims.start(),
                self.dims.end()
            )));
        }
        Ok(())
    }

    fn dim_for(&self, trial: usize) -> usize {
        let (lo, hi) = (*self.dims.start(), *self.dims.end());
        lo + trial % (hi - lo + 1)
    }
}

/// One measured quantity with its acceptance bound (`residual ≤ tolerance`).
#[derive(Debug, Clone, Copy)]
struct Check {
    name: &'static str,
    residual: f64,
    tolerance: f64,
}

fn check(name: &'static str, residual: f64, tolerance: f64) -> Check {
    Check { name, residual, tolerance }
}

#[derive(Debug, Clone)]
pub struct CheckSummary {
    pub name: &'static str,
    pub tolerance: f64,
    pub worst: f64,
    pub failures: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub checks: Vec<CheckSummary>,
    /// Description of the lowest-indexed failing trial.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn first_failing(&self) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| !s.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for s in &self.suites {
            writeln!(
                f,
                "{:<26} {}  trials={} failures={}",
                s.name,
                if s.passed() { "PASS" } else { "FAIL" },
                s.trials,
                s.failures
            )?;
            for c in &s.checks {
                writeln!(
                    f,
                    "    {:<30} worst={:.3e} tol={:.0e} failures={}",
                    c.name, c.worst, c.tolerance, c.failures
                )?;
            }
            if let Some(msg) = &s.first_failure {
                writeln!(f, "    first failure: {msg}")?;
            }
        }
        let passed = self.suites.iter().filter(|s| s.passed()).count();
        write!(f, "{passed}/{} suites passed", self.suites.len())
    }
}

type Trial = fn(&VerifyConfig, usize, &mut ChaCha8Rng) -> Result<Vec<Check>>;

const SUITES: [(&str, Trial); 6] = [
    ("metric_axioms", metric_axioms),
    ("oracle_equivalence", oracle_equivalence),
    ("purification_invariants", purification_invariants),
    ("contractivity", contractivity),
    ("mixing_gap", mixing_gap_suite),
    ("overlap_deficit", overlap_deficit),
];

/// Per-trial generator: stream `(suite, trial)` of the seeded ChaCha.
pub fn trial_rng(seed: u64, suite: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 40) | trial as u64);
    rng
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(idx, &(name, trial))| {
            let outcomes: Vec<Result<Vec<Check>>> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| trial(cfg, t, &mut trial_rng(cfg.seed, idx, t)))
                .collect();
            summarize(name, outcomes)
        })
        .collect();
    Ok(VerifyReport { seed: cfg.seed, suites })
}

fn summarize(name: &'static str, outcomes: Vec<Result<Vec<Check>>>) -> SuiteResult {
    let mut checks: Vec<CheckSummary> = Vec::new();
    let mut failures = 0;
    let mut first_failure = None;
    let trials = outcomes.len();
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(list) => {
                let mut failed = None;
                for c in list {
                    let ok = c.residual <= c.tolerance;
                    let entry = match checks.iter_mut().find(|s| s.name == c.name) {
                        Some(e) => e,
                        None => {
                            checks.push(CheckSummary { name: c.name, tolerance: c.tolerance, worst: 0.0, failures: 0 });
                            checks.last_mut().unwrap()
                        }
                    };
                    entry.worst = entry.worst.max(c.residual);
                    if !ok {
                        entry.failures += 1;
                        failed.get_or_insert(format!(
                            "trial {t}: {} residual {:.3e} > {:.0e}",
                            c.name, c.residual, c.tolerance
                        ));
                    }
                }
                if let Some(msg) = failed {
                    failures += 1;
                    first_failure.get_or_insert(msg);
                }
            }
            Err(e) => {
                failures += 1;
                first_failure.get_or_insert(format!("trial {t}: {e}"));
            }
        }
    }
    SuiteResult { name, trials, failures, checks, first_failure }
}

fn dn(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(dn_mixed_closed(a, b)?.value)
}

fn metric_axioms(cfg: &VerifyConfig, t: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let d = cfg.dim_for(t);
    let (a, b, c) = (random_density(d, rng), random_density(d, rng), random_density(d, rng));
    let (ab, ba, bc, ac) = (dn(&a, &b)?, dn(&b, &a)?, dn(&b, &c)?, dn(&a, &c)?);
    let aa = dn(&a, &a)?;
    let f_ab = fidelity(&a, &b)?;
    // D ≤ 1e-8 ⇔ F ≥ 1 - 1e-8, on the random pair and on the self pair
    let indiscernible = |d: f64, f: f64| ((d <= 1e-8) != (f >= 1.0 - 1e-8)) as u8 as f64;
    Ok(vec![
        check("symmetry", (ab - ba).abs(), 0.0),
        check("nonnegativity", (-ab.min(bc).min(ac)).max(0.0), 0.0),
        check("bound", (ab.max(bc).max(ac) - 1.0).max(0.0), 0.0),
        check("triangle", (ac - ab - bc).max(0.0), 1e-9),
        check("self_distance", aa, 1e-8),
        check(
            "identity_of_indiscernibles",
            indiscernible(ab, f_ab).max(indiscernible(aa, fidelity(&a, &a)?)),
            0.0,
        ),
    ])
}

fn oracle_equivalence(_: &VerifyConfig, _: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let a = from_bloch(&random_bloch(rng));
    let b = from_bloch(&random_bloch(rng));
    let closed = dn_mixed_closed(&a, &b)?;
    let exact = dn_via_purification(&a, &b, Objective::ExactOverlap)?;
    let hs = dn_via_purification(&a, &b, Objective::HsNorm)?;
    let f = closed.metadata.fidelity.unwrap_or(f64::NAN);
    Ok(vec![
        check("exact_vs_closed", (exact.value - closed.value).abs(), 1e-6),
        check("overlap_le_fidelity", (exact.metadata.overlap.unwrap_or(f64::NAN) - f).max(0.0), 1e-9),
        check("hs_not_below_closed", (closed.value - hs.value).max(0.0), 1e-9),
    ])
}

fn purification_invariants(_: &VerifyConfig, t: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let r = match t % 8 {
        0 => BlochVector::origin(),
        1 => {
            let v = random_bloch(rng);
            BlochVector::new(v.components().map(|c| c / v.norm()))?
        }
        _ => random_bloch(rng),
    };
    let a = solve_a_system(&r)?.a * *Rotation3::random(rng).matrix();
    let q = assemble_qubit_purification(&r, &a)?;
    let p = q.operator();
    let reduced = partial_trace_aux(p, 2, 2)?;
    let p_dep: f64 = rng.random();
    let upd = ap_update(&solve_a_system(&r)?.a, &r, p_dep)?;
    Ok(vec![
        check("trace", (p.trace().re - 1.0).abs(), 1e-9),
        check("idempotence", (&(p * p) - p).max_abs(), 1e-8),
        check("partial_trace", reduced.max_abs_diff(from_bloch(&r).matrix()), 1e-9),
        check("gram_update", upd.gram_residual.max(upd.det_residual), 1e-9),
    ])
}

fn contractivity(cfg: &VerifyConfig, t: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let d = cfg.dim_for(t);
    let (a, b) = (random_density(d, rng), random_density(d, rng));
    let before = dn(&a, &b)?;
    let u = random_unitary(d, rng);
    let rotated = dn(&a.conjugate_by(&u)?, &b.conjugate_by(&u)?)?;
    let w: f64 = rng.random();
    let ch = MixingChannel::new(random_density(d, rng), w)?;
    let mixed = dn(&ch.apply(&a)?, &ch.apply(&b)?)?;
    let mut worst_dep: f64 = 0.0;
    let (qa, qb) = (random_density(2, rng), random_density(2, rng));
    let q_before = dn(&qa, &qb)?;
    for p in [0.1, 0.5, 0.9] {
        let e = DepolarizingChannel::new(p)?;
        worst_dep = worst_dep.max(dn(&e.apply(&qa)?, &e.apply(&qb)?)? - q_before);
    }
    Ok(vec![
        check("unitary_invariance", (rotated - before).abs(), 1e-9),
        check("mixing_channel", (mixed - before).max(0.0), 1e-9),
        check("depolarizing", worst_dep.max(0.0), 1e-9),
    ])
}

fn mixing_gap_suite(cfg: &VerifyConfig, t: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let d = cfg.dim_for(t);
    let k = 2 + t % 3;
    let members: Vec<DensityMatrix> = (0..k).map(|_| random_density(d, rng)).collect();
    let gap = mixing_gap(&Ensemble::new(dirichlet(k, rng)?, members)?)?;
    // two non-orthogonal pure states: strictly inside the bound
    let (psi, phi) = (random_pure(d, rng), random_pure(d, rng));
    let pure_pair = vec![crate::states::projector(&psi), crate::states::projector(&phi)];
    let strict = mixing_gap(&Ensemble::uniform(pure_pair)?)?;
    Ok(vec![check("lower_bound", (-gap).max(0.0), 1e-10), check("strict_positivity_shortfall", 1e-6 - strict, 0.0)])
}

fn overlap_deficit(cfg: &VerifyConfig, t: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let d = cfg.dim_for(t);
    let (psi, dp) = deficit_instance(d, 1e-5, rng)?;
    let dev = neighboring_overlap_deficit(&psi, &dp)?;
    Ok(vec![check("ratio", (dev.actual / dev.predicted - 1.0).abs(), 1e-3)])
}

/// Flat-Dirichlet weights.
pub fn dirichlet(k: usize, rng: &mut impl Rng) -> Result<ProbDist> {
    let g = Gamma::new(1.0, 1.0).expect("valid shape");
    let x: Vec<f64> = (0..k).map(|_| f64::max(g.sample(rng), 1e-300)).collect();
    let s: f64 = x.iter().sum();
    ProbDist::new(x.into_iter().map(|v| v / s).collect())
}

/// A state `Σ √p_j e^{iθ_j} |j⟩` with every `p_j ≥ 0.1/d`, and a zero-sum
/// perturbation `dp` of Euclidean norm `norm`.
pub fn deficit_instance(d: usize, norm: f64, rng: &mut impl Rng) -> Result<(PureState, Vec<f64>)> {
    let w = dirichlet(d, rng)?;
    let p: Vec<f64> = w.probs().iter().map(|x| 0.9 * x + 0.1 / d as f64).collect();
    let amps = p
        .iter()
        .map(|&pj| num_complex::Complex64::from_polar(pj.sqrt(), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    let mut dp: Vec<f64> = (0..d).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
    let mean = dp.iter().sum::<f64>() / d as f64;
    dp.iter_mut().for_each(|x| *x -= mean);
    let n = dp.iter().map(|x| x * x).sum::<f64>().sqrt();
    dp.iter_mut().for_each(|x| *x *= norm / n);
    Ok((PureState::normalized(amps)?, dp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let cfg = VerifyConfig { trials: 40, dims: 2..=4, seed: 7 };
        let a = run_verify(&cfg).unwrap();
        let b = run_verify(&cfg).unwrap();
        assert!(a.all_passed(), "{a}");
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a.suites.len(), SUITES.len());
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = VerifyConfig { trials: 0, ..Default::default() };
        assert!(matches!(run_verify(&cfg), Err(Error::Domain(_))));
        let cfg = VerifyConfig { dims: 1..=3, ..Default::default() };
        assert!(run_verify(&cfg).is_err());
    }

    #[test]
    fn failures_are_counted_and_named() {
        let outcomes = vec![
            Ok(vec![check("x", 0.0, 1e-9)]),
            Ok(vec![check("x", 1.0, 1e-9)]),
            Err(Error::Domain("boom".into())),
        ];
        let s = summarize("demo", outcomes);
        assert_eq!(s.failures, 2);
        assert_eq!(s.checks[0].failures, 1);
        assert!(s.first_failure.unwrap().starts_with("trial 1: x"));
    }

    #[test]
    fn deficit_instances_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=8 {
            let (psi, dp) = deficit_instance(d, 1e-5, &mut rng).unwrap();
            assert_eq!(psi.dim(), d);
            assert!(dp.iter().sum::<f64>().abs() < 1e-18);
            assert!((dp.iter().map(|x| x * x).sum::<f64>().sqrt() - 1e-5).abs() < 1e-15);
        }
    }
}
