//! Exact and statistical comparisons between the measures and the oracles,
//! and the aggregate verification suite over the default parameter grid.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::branching::{verify_coherence, verify_exchangeability_up_to, verify_kappa_forms, BranchingParams};
use crate::coeff::{ExactRational, RationalFunction};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::macdonald::{transition_probabilities, verify_pieri, Alphabet, Distribution};
use crate::oracles::{jordan_distribution_exhaustive, jordan_distribution_mc, rsk_distribution, rsk_distribution_exhaustive};
use crate::partition::enumerate_partitions;
use crate::report::{Status, VerifyReport};
use crate::samplers::{bk_transition_probabilities, empirical_distribution, is_stochastic, sample_bk, sample_generic, tv_distance};
use crate::special::{
    default_jack_eps, jordan_measure, schur_measure, verify_green_charge, verify_hl_kappa, verify_jack_limit, verify_relative_dimension,
    verify_schur_forms, HLParams, JackParams,
};

/// Largest level the aggregate suite accepts.
pub const SUITE_CAP: usize = 8;

/// Default Monte-Carlo tolerance on total variation.
pub fn default_tolerance() -> ExactRational {
    ExactRational::frac(1, 100)
}

/// `(q, t) ∈ {0, 1/3, 1/2} × {1/3, 1/2}`.
pub fn default_param_grid() -> Vec<BranchingParams<ExactRational>> {
    let qs = [ExactRational::zero(), ExactRational::frac(1, 3), ExactRational::frac(1, 2)];
    let ts = [ExactRational::frac(1, 3), ExactRational::frac(1, 2)];
    qs.iter()
        .flat_map(|q| ts.iter().map(move |t| BranchingParams::numeric(q.clone(), t.clone()).expect("grid lies in the domain")))
        .collect()
}

/// `(1/2, 1/2)`, `(2/5, 3/10, 1/5, 1/10)`, `geometric:2`, `geometric:3`.
pub fn default_alphabets() -> Vec<Alphabet> {
    vec![
        Alphabet::uniform(2).expect("valid"),
        "2/5,3/10,1/5,1/10".parse().expect("valid"),
        Alphabet::Geometric { p: 2 },
        Alphabet::Geometric { p: 3 },
    ]
}

/// Observed versus reference distribution on one level.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub name: String,
    pub n: usize,
    pub params: BTreeMap<String, String>,
    pub tv: ExactRational,
    pub tv_approx: f64,
    /// Zero for exact comparisons.
    pub tolerance: ExactRational,
    pub status: Status,
    pub reference: Distribution,
    pub observed: Distribution,
}

impl Comparison {
    /// Exact comparisons pass on equality, Monte-Carlo ones when `tv < tolerance`.
    pub fn new(name: &str, reference: Distribution, observed: Distribution, tolerance: ExactRational) -> Result<Self> {
        let tv = tv_distance(&reference, &observed)?;
        let ok = if tolerance.is_zero() { tv.is_zero() } else { tv < tolerance };
        Ok(Comparison {
            name: name.into(),
            n: reference.n,
            params: BTreeMap::new(),
            tv_approx: tv.to_f64(),
            tv,
            tolerance,
            status: if ok { Status::Ok } else { Status::Violated },
            reference,
            observed,
        })
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

/// Jordan types over all of `T(n, F_p)` against the measure.
pub fn compare_matrix_exhaustive(n: usize, p: u32) -> Result<Comparison> {
    let hl = HLParams::new(p)?;
    Ok(Comparison::new("matrix-exhaustive", jordan_measure(n, &hl)?, jordan_distribution_exhaustive(n, p)?, ExactRational::zero())?.with_param("p", p))
}

/// Jordan types of random elements of `T(n, F_p)` against the measure.
pub fn compare_matrix_mc(n: usize, p: u32, trials: u64, seed: u64, tol: ExactRational, exec: Execution) -> Result<Comparison> {
    let hl = HLParams::new(p)?;
    Ok(Comparison::new("matrix-mc", jordan_measure(n, &hl)?, jordan_distribution_mc(n, p, trials, seed, exec)?, tol)?
        .with_param("p", p)
        .with_param("trials", trials)
        .with_param("seed", seed))
}

/// RSK shapes of all words against the Schur measure.
pub fn compare_rsk_exhaustive(n: usize, alphabet: &Alphabet) -> Result<Comparison> {
    Ok(Comparison::new("rsk-exhaustive", schur_measure(n, alphabet)?, rsk_distribution_exhaustive(n, alphabet)?, ExactRational::zero())?
        .with_param("alphabet", alphabet))
}

/// RSK shapes of random words against the Schur measure.
pub fn compare_rsk(n: usize, alphabet: &Alphabet, trials: u64, seed: u64, tol: ExactRational, exec: Execution) -> Result<Comparison> {
    Ok(Comparison::new("rsk", schur_measure(n, alphabet)?, rsk_distribution(n, alphabet, trials, seed, exec)?, tol)?
        .with_param("alphabet", alphabet)
        .with_param("trials", trials)
        .with_param("seed", seed))
}

/// Column-sampler endpoints against the Jordan-type measure.
pub fn compare_bk(n: usize, p: u32, trials: u64, seed: u64, tol: ExactRational, exec: Execution) -> Result<Comparison> {
    let hl = HLParams::new(p)?;
    let run = sample_bk(n, &hl, trials, seed, exec);
    Ok(Comparison::new("bk-sampler", jordan_measure(n, &hl)?, empirical_distribution(&run)?, tol)?
        .with_param("p", p)
        .with_param("trials", trials)
        .with_param("seed", seed))
}

/// Generic-sampler endpoints against the coherent measure.
pub fn compare_generic(
    n: usize,
    alphabet: &Alphabet,
    params: &BranchingParams<ExactRational>,
    trials: u64,
    seed: u64,
    tol: ExactRational,
    exec: Execution,
) -> Result<Comparison> {
    let run = sample_generic(n, alphabet, params, trials, seed, exec)?;
    let exact = crate::macdonald::measure(n, alphabet, params)?;
    Ok(Comparison::new("generic-sampler", exact, empirical_distribution(&run)?, tol)?
        .with_param("q", params.q())
        .with_param("t", params.t())
        .with_param("alphabet", alphabet)
        .with_param("trials", trials)
        .with_param("seed", seed))
}

/// Column-sampler probabilities equal the general transition
/// probabilities at `q = 0`, `t = 1/p` on the geometric alphabet, and sum to one.
pub fn verify_bk_transitions(n: usize, params: &HLParams) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("bk-transitions", n).with_param("p", params.p());
    for size in 0..=n {
        for shape in enumerate_partitions(size)? {
            let bk = bk_transition_probabilities(&shape, params);
            let gen = transition_probabilities(&shape, &params.alphabet(), &params.branching())?;
            report.check(is_stochastic(&bk) && bk == gen, || format!("lambda = {shape}: column rule {bk:?}, general {gen:?}"));
        }
    }
    Ok(report)
}

fn comparison_report(c: &Comparison) -> VerifyReport {
    let mut r = VerifyReport::new(c.name.clone(), c.n);
    r.params = c.params.clone();
    r.check(c.is_ok(), || format!("total variation {}", c.tv));
    r
}

/// Outcome of every verifier in the suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub cap: usize,
    pub status: Status,
    pub reports: Vec<VerifyReport>,
}

impl SuiteReport {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

/// Runs every exact identity check up to level `cap` (at most 8) across the
/// default grid.
pub fn run_suite(cap: usize) -> Result<SuiteReport> {
    if cap > SUITE_CAP {
        return Err(Error::InvalidParams(format!("suite level cap {cap} exceeds {SUITE_CAP}")));
    }
    let mut reports = vec![
        verify_kappa_forms(cap, &BranchingParams::<RationalFunction>::symbolic())?,
        verify_exchangeability_up_to(cap.min(7), &BranchingParams::<RationalFunction>::symbolic())?,
    ];
    for params in default_param_grid() {
        for alphabet in default_alphabets() {
            for n in 1..=cap {
                reports.push(verify_coherence(n, &params, &alphabet)?);
            }
            reports.push(verify_pieri(cap.min(6), &alphabet, &params)?);
        }
    }
    for p in [2, 3, 5] {
        let hl = HLParams::new(p)?;
        reports.push(verify_hl_kappa(cap, &hl)?);
        reports.push(verify_bk_transitions(cap, &hl)?);
    }
    reports.push(verify_green_charge(cap.min(6))?);
    reports.push(verify_schur_forms(cap)?);
    reports.push(verify_relative_dimension(cap, &ExactRational::frac(1, 2))?);
    for p in [2, 3] {
        for n in 1..=cap.min(4) {
            reports.push(comparison_report(&compare_matrix_exhaustive(n, p)?));
        }
    }
    let rsk_alphabets: Vec<Alphabet> = ["1/2,1/2", "1/3,1/3,1/3", "1/2,1/3,1/6"].iter().map(|s| s.parse().expect("valid")).collect();
    for alphabet in &rsk_alphabets {
        for n in 1..=cap.min(4) {
            reports.push(comparison_report(&compare_rsk_exhaustive(n, alphabet)?));
        }
    }
    for theta in [ExactRational::frac(1, 2), ExactRational::one(), ExactRational::from_integer(2)] {
        reports.push(verify_jack_limit(cap.min(6), &JackParams::new(theta)?, &default_jack_eps())?);
    }
    let status = if reports.iter().all(VerifyReport::is_ok) { Status::Ok } else { Status::Violated };
    Ok(SuiteReport { cap, status, reports })
}
