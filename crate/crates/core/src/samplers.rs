//! Random growth of partitions one box at a time.
//!
//! The generic sampler draws each step from the exact transition
//! probabilities `P_Λ ψ'_{Λ/λ} / P_λ`, so the endpoint after `n` steps has
//! law `M_n`. The column sampler is its Hall-Littlewood specialization: add
//! to column `j` with probability `p^{-λ'_j} - p^{-λ'_{j-1}}`.
//!
//! Every trial owns a ChaCha stream keyed by `(seed, trial index)`, so runs
//! are bit-reproducible whether trials execute sequentially or on rayon.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::branching::{BranchingParams, GrowthPath};
use crate::coeff::ExactRational;
use crate::error::{Error, Result};
use crate::exec::{map_trials, Execution};
use crate::macdonald::{transitions_from, Alphabet, AlphabetEvaluator, Distribution, DistributionMeta};
use crate::partition::{CoverStep, Partition, DEFAULT_ENUMERATION_CAP};
use crate::special::HLParams;

/// A reproducible random stream identified by `(seed, stream)`.
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A uniform 128-bit integer.
    pub fn next_u128(&mut self) -> u128 {
        ((self.rng.next_u64() as u128) << 64) | self.rng.next_u64() as u128
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: u32) -> u32 {
        self.rng.random_range(0..bound)
    }
}

/// Inverse-CDF table for exact probabilities.
///
/// Entry `i` is chosen for the smallest `i` with `U < F_i · 2^128`, where
/// `U` is a uniform 128-bit integer and `F_i` the exact cumulative sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeTable {
    /// `ceil(F_i · 2^128)`, or `None` once it reaches `2^128`.
    thresholds: Vec<Option<u128>>,
}

impl CumulativeTable {
    pub fn from_probs(probs: &[ExactRational]) -> Result<Self> {
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidParams("negative probability".into()));
        }
        let total: ExactRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParams(format!("probabilities sum to {total}, not 1")));
        }
        let scale = BigUint::one() << 128u32;
        let mut cum = ExactRational::zero();
        let thresholds = probs
            .iter()
            .map(|p| {
                cum += p;
                let num = cum.numer().to_biguint().expect("nonnegative") * &scale;
                let den = cum.denom().to_biguint().expect("positive");
                let ceil = (&num + &den - BigUint::one()) / &den;
                ceil.to_u128()
            })
            .collect();
        Ok(CumulativeTable { thresholds })
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn draw(&self, u: u128) -> usize {
        self.thresholds
            .iter()
            .position(|t| t.is_none_or(|t| u < t))
            .expect("last cumulative threshold is 2^128")
    }
}

/// `(parent, col)` transitions of the generic sampler, precomputed for every
/// reachable state below level `n` and then shared read-only across trials.
pub struct TransitionKernel {
    n: usize,
    table: HashMap<Partition, (Vec<usize>, CumulativeTable)>,
}

impl TransitionKernel {
    pub fn new(n: usize, alphabet: &Alphabet, params: &BranchingParams<ExactRational>) -> Result<Self> {
        if n > DEFAULT_ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                n,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        BranchingParams::numeric(params.q().clone(), params.t().clone())?;
        let mut eval = AlphabetEvaluator::new(alphabet, params)?;
        let mut table = HashMap::new();
        let mut level = vec![Partition::empty()];
        for _ in 0..n {
            let mut next = Vec::new();
            for shape in level {
                let tr = transitions_from(&shape, &mut eval, params)?;
                let probs: Vec<ExactRational> = tr.iter().map(|(_, p)| p.clone()).collect();
                let cols = tr.iter().map(|(s, _)| s.col).collect();
                for (step, p) in tr {
                    if !p.is_zero() && !next.contains(&step.child) {
                        next.push(step.child);
                    }
                }
                table.insert(shape, (cols, CumulativeTable::from_probs(&probs)?));
            }
            level = next;
        }
        Ok(TransitionKernel { n, table })
    }

    pub fn levels(&self) -> usize {
        self.n
    }

    pub fn sample(&self, rng: &mut RngStream) -> GrowthPath {
        let mut at = Partition::empty();
        let mut columns = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let (cols, cdf) = &self.table[&at];
            let col = cols[cdf.draw(rng.next_u128())];
            at = at.add_to_column(col).expect("kernel columns are addable");
            columns.push(col);
        }
        GrowthPath::from_parts_unchecked(columns, at)
    }
}

/// One path of the generic growth process.
pub fn grow_generic(n: usize, alphabet: &Alphabet, params: &BranchingParams<ExactRational>, rng: &mut RngStream) -> Result<GrowthPath> {
    Ok(TransitionKernel::new(n, alphabet, params)?.sample(rng))
}

/// Exact column probabilities of the Hall-Littlewood sampler from `shape`,
/// one entry per addable column.
pub fn bk_transition_probabilities(shape: &Partition, params: &HLParams) -> Vec<(CoverStep, ExactRational)> {
    let p = params.p() as i64;
    let inv = |e: usize| ExactRational::from_integer(p).pow(-(e as i32)).expect("p > 0");
    shape
        .addable_columns()
        .into_iter()
        .map(|step| {
            let j = step.col;
            let prob = if j == 1 {
                inv(shape.col_len(1))
            } else {
                inv(shape.col_len(j)) - inv(shape.col_len(j - 1))
            };
            (step, prob)
        })
        .collect()
}

/// Largest `e` with `u · p^e < 2^128`, or `None` when every `e` qualifies (`u = 0`).
fn bk_level(u: u128, p: u128) -> Option<usize> {
    if u == 0 {
        return None;
    }
    let mut e = 0;
    let mut acc = u;
    while let Some(next) = acc.checked_mul(p) {
        acc = next;
        e += 1;
    }
    Some(e)
}

/// One path of the Hall-Littlewood column sampler.
///
/// Cumulative probability through column `j` is `p^{-λ'_j}`, so the chosen
/// column is the first one whose length is at most `e`, the largest exponent
/// with `U p^e < 2^128`. That column starts right after row `e + 1` ends.
pub fn grow_bk(n: usize, params: &HLParams, rng: &mut RngStream) -> GrowthPath {
    let p = params.p() as u128;
    let mut rows: Vec<usize> = Vec::new();
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let target = match bk_level(rng.next_u128(), p) {
            Some(e) => rows.get(e).copied().unwrap_or(0),
            None => 0,
        };
        // first row whose length equals `target` receives the box
        let r = rows.partition_point(|&len| len > target);
        if r == rows.len() {
            rows.push(1);
        } else {
            rows[r] += 1;
        }
        columns.push(target + 1);
    }
    GrowthPath::from_parts_unchecked(columns, Partition::from_parts_unchecked(rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Generic,
    Bk,
}

/// Sampler parameters echoed in every run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub sampler: SamplerKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Alphabet>,
    pub trials: u64,
    pub seed: u64,
}

/// The outcome of `trials` independent growth runs, in trial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRun {
    pub config: SampleConfig,
    pub results: Vec<GrowthPath>,
    /// Serialize full paths instead of endpoint frequencies.
    pub record_paths: bool,
}

impl SampleRun {
    pub fn endpoints(&self) -> impl Iterator<Item = &Partition> {
        self.results.iter().map(GrowthPath::endpoint)
    }
}

#[derive(Serialize)]
struct FrequencyRepr<'a> {
    partition: &'a Partition,
    count: u64,
    freq: ExactRational,
}

#[derive(Serialize)]
struct SampleRunRepr<'a> {
    config: &'a SampleConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<FrequencyRepr<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<Vec<&'a [usize]>>,
}

impl Serialize for SampleRun {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (entries, paths) = if self.record_paths {
            (None, Some(self.results.iter().map(GrowthPath::columns).collect()))
        } else {
            let counts = count_endpoints(self.endpoints());
            let total = ExactRational::from_integer(self.results.len() as i64);
            let entries = counts
                .into_iter()
                .rev()
                .map(|(partition, count)| FrequencyRepr {
                    partition,
                    count,
                    freq: ExactRational::from_integer(count as i64) / &total,
                })
                .collect();
            (Some(entries), None)
        };
        SampleRunRepr {
            config: &self.config,
            entries,
            paths,
        }
        .serialize(serializer)
    }
}

fn count_endpoints<'a>(it: impl Iterator<Item = &'a Partition>) -> BTreeMap<&'a Partition, u64> {
    let mut counts = BTreeMap::new();
    for p in it {
        *counts.entry(p).or_insert(0u64) += 1;
    }
    counts
}

/// `trials` runs of the generic sampler with streams `(seed, 0..trials)`.
pub fn sample_generic(
    n: usize,
    alphabet: &Alphabet,
    params: &BranchingParams<ExactRational>,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<SampleRun> {
    let kernel = TransitionKernel::new(n, alphabet, params)?;
    let results = map_trials(trials, exec, |i| kernel.sample(&mut RngStream::new(seed, i)));
    Ok(SampleRun {
        config: SampleConfig {
            sampler: SamplerKind::Generic,
            n,
            p: None,
            q: Some(params.q().clone()),
            t: Some(params.t().clone()),
            alphabet: Some(alphabet.clone()),
            trials,
            seed,
        },
        results,
        record_paths: false,
    })
}

/// `trials` runs of the Hall-Littlewood column sampler.
pub fn sample_bk(n: usize, params: &HLParams, trials: u64, seed: u64, exec: Execution) -> SampleRun {
    let results = map_trials(trials, exec, |i| grow_bk(n, params, &mut RngStream::new(seed, i)));
    SampleRun {
        config: SampleConfig {
            sampler: SamplerKind::Bk,
            n,
            p: Some(params.p()),
            q: None,
            t: None,
            alphabet: None,
            trials,
            seed,
        },
        results,
        record_paths: false,
    }
}

/// Empirical frequencies of `n`-level outcomes as an exact distribution.
pub fn empirical_from<'a>(n: usize, outcomes: impl Iterator<Item = &'a Partition>, source: &str) -> Result<Distribution> {
    let counts = count_endpoints(outcomes);
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::InvalidParams("no trials".into()));
    }
    if let Some((p, _)) = counts.iter().find(|(p, _)| p.size() != n) {
        return Err(Error::LevelMismatch(n, p.size()));
    }
    let denom = ExactRational::from_integer(total as i64);
    let entries = counts
        .into_iter()
        .map(|(p, c)| (p.clone(), ExactRational::from_integer(c as i64) / &denom))
        .collect();
    Ok(Distribution::new(
        n,
        entries,
        DistributionMeta {
            source: source.into(),
            trials: Some(total),
            ..Default::default()
        },
    ))
}

/// Endpoint frequencies of a run.
pub fn empirical_distribution(run: &SampleRun) -> Result<Distribution> {
    let mut d = empirical_from(run.config.n, run.endpoints(), "empirical")?;
    d.meta.q = run.config.q.clone();
    d.meta.t = run.config.t.clone();
    d.meta.alphabet = run.config.alphabet.clone();
    Ok(d)
}

/// `½ Σ |a(Λ) - b(Λ)|`.
pub fn tv_distance(a: &Distribution, b: &Distribution) -> Result<ExactRational> {
    if a.n != b.n {
        return Err(Error::LevelMismatch(a.n, b.n));
    }
    let mut all: BTreeMap<&Partition, (ExactRational, ExactRational)> = BTreeMap::new();
    for (p, x) in &a.entries {
        all.entry(p).or_insert_with(|| (ExactRational::zero(), ExactRational::zero())).0 += x;
    }
    for (p, y) in &b.entries {
        all.entry(p).or_insert_with(|| (ExactRational::zero(), ExactRational::zero())).1 += y;
    }
    let sum: ExactRational = all.values().map(|(x, y)| (x - y).abs()).sum();
    Ok(sum / ExactRational::from_integer(2))
}

/// Sample mean of `λ_i / n` over trials against `(1 - 1/p) / p^{i-1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub part: usize,
    pub mean_approx: f64,
    pub stderr_approx: f64,
    pub predicted_approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticProfile {
    pub n: usize,
    pub p: u32,
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<ProfileRow>,
}

/// Normalized mean row lengths of the column sampler for the first `parts` rows.
pub fn asymptotic_profile(n: usize, params: &HLParams, trials: u64, seed: u64, parts: usize, exec: Execution) -> Result<AsymptoticProfile> {
    if n < 100 {
        return Err(Error::InvalidParams(format!("asymptotic profile needs n >= 100, got {n}")));
    }
    if trials < 2 {
        return Err(Error::InvalidParams("asymptotic profile needs at least 2 trials".into()));
    }
    let shapes = map_trials(trials, exec, |i| grow_bk(n, params, &mut RngStream::new(seed, i)).endpoint().clone());
    let p = params.p() as f64;
    let rows = (1..=parts)
        .map(|i| {
            let xs: Vec<f64> = shapes.iter().map(|s| s.row_len(i) as f64 / n as f64).collect();
            let m = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / m;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
            ProfileRow {
                part: i,
                mean_approx: mean,
                stderr_approx: (var / m).sqrt(),
                predicted_approx: (1.0 - 1.0 / p) * p.powi(-(i as i32 - 1)),
            }
        })
        .collect();
    Ok(AsymptoticProfile {
        n,
        p: params.p(),
        trials,
        seed,
        rows,
    })
}

/// Whether the total is exactly `1` and every entry is nonnegative.
pub fn is_stochastic(probs: &[(CoverStep, ExactRational)]) -> bool {
    probs.iter().all(|(_, p)| !p.is_negative()) && probs.iter().map(|(_, p)| p).sum::<ExactRational>().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macdonald::{measure, transition_probabilities};
    use crate::special::jordan_measure;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn streams_are_reproducible() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        let mut c = RngStream::new(7, 4);
        let xa: Vec<u128> = (0..4).map(|_| a.next_u128()).collect();
        let xb: Vec<u128> = (0..4).map(|_| b.next_u128()).collect();
        let xc: Vec<u128> = (0..4).map(|_| c.next_u128()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn cumulative_table_edges() {
        let t = CumulativeTable::from_probs(&[r(1, 2), r(0, 1), r(1, 2)]).unwrap();
        assert_eq!(t.draw(0), 0);
        assert_eq!(t.draw((1u128 << 127) - 1), 0);
        assert_eq!(t.draw(1u128 << 127), 2);
        assert_eq!(t.draw(u128::MAX), 2);
        let t = CumulativeTable::from_probs(&[r(1, 3), r(2, 3)]).unwrap();
        // ceil(2^128 / 3)
        let third = u128::MAX / 3 + 1;
        assert_eq!(t.draw(third - 1), 0);
        assert_eq!(t.draw(third), 1);
        assert!(CumulativeTable::from_probs(&[r(1, 2)]).is_err());
    }

    #[test]
    fn generic_small_cases() {
        let p = BranchingParams::numeric(r(0, 1), r(1, 2)).unwrap();
        let geo = Alphabet::Geometric { p: 2 };
        let mut rng = RngStream::new(1, 0);
        let path = grow_generic(1, &geo, &p, &mut rng).unwrap();
        assert_eq!(path.columns(), &[1]);
        assert_eq!(path.endpoint(), &part(&[1]));
        let run = sample_generic(2, &geo, &p, 20_000, 11, Execution::Parallel).unwrap();
        let emp = empirical_distribution(&run).unwrap();
        let exact = measure(2, &geo, &p).unwrap();
        assert!(tv_distance(&emp, &exact).unwrap() < r(2, 100));
    }

    #[test]
    fn bk_probabilities_examples() {
        let hl = HLParams::new(2).unwrap();
        let tr = bk_transition_probabilities(&Partition::empty(), &hl);
        assert_eq!(tr.len(), 1);
        assert_eq!(tr[0].1, r(1, 1));
        let tr = bk_transition_probabilities(&part(&[1]), &hl);
        assert_eq!(tr.iter().map(|(s, p)| (s.col, p.clone())).collect::<Vec<_>>(), vec![(1, r(1, 2)), (2, r(1, 2))]);
    }

    #[test]
    fn bk_matches_generic_transitions() {
        for p in [2, 3] {
            let hl = HLParams::new(p).unwrap();
            for n in 0..=6 {
                for shape in crate::partition::enumerate_partitions(n).unwrap() {
                    let bk = bk_transition_probabilities(&shape, &hl);
                    assert!(is_stochastic(&bk));
                    let gen = transition_probabilities(&shape, &hl.alphabet(), &hl.branching()).unwrap();
                    assert_eq!(bk, gen, "{shape}");
                }
            }
        }
    }

    #[test]
    fn bk_sampler_agrees_with_jordan_measure() {
        let hl = HLParams::new(2).unwrap();
        let run = sample_bk(5, &hl, 40_000, 5, Execution::Parallel);
        for path in &run.results {
            assert_eq!(GrowthPath::from_columns(path.columns().to_vec()).unwrap().endpoint(), path.endpoint());
        }
        let emp = empirical_distribution(&run).unwrap();
        let exact = jordan_measure(5, &hl).unwrap();
        assert!(tv_distance(&emp, &exact).unwrap() < r(2, 100));
    }

    #[test]
    fn bk_level_rule() {
        assert_eq!(bk_level(0, 2), None);
        assert_eq!(bk_level(u128::MAX, 2), Some(0));
        assert_eq!(bk_level(1u128 << 126, 2), Some(1));
        assert_eq!(bk_level((1u128 << 126) - 1, 2), Some(2));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let hl = HLParams::new(3).unwrap();
        assert_eq!(sample_bk(8, &hl, 500, 9, Execution::Sequential), sample_bk(8, &hl, 500, 9, Execution::Parallel));
        let p = BranchingParams::numeric(r(1, 2), r(1, 2)).unwrap();
        let a = Alphabet::uniform(2).unwrap();
        assert_eq!(
            sample_generic(4, &a, &p, 300, 2, Execution::Sequential).unwrap(),
            sample_generic(4, &a, &p, 300, 2, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn tv_examples() {
        let mk = |a: ExactRational, b: ExactRational| Distribution::new(2, vec![(part(&[2]), a), (part(&[1, 1]), b)], DistributionMeta::default());
        let x = mk(r(3, 4), r(1, 4));
        let y = mk(r(1, 2), r(1, 2));
        assert_eq!(tv_distance(&x, &x).unwrap(), r(0, 1));
        assert_eq!(tv_distance(&x, &y).unwrap(), r(1, 4));
        let pa = Distribution::new(2, vec![(part(&[2]), r(1, 1))], DistributionMeta::default());
        let pb = Distribution::new(2, vec![(part(&[1, 1]), r(1, 1))], DistributionMeta::default());
        assert_eq!(tv_distance(&pa, &pb).unwrap(), r(1, 1));
        let other = Distribution::new(3, vec![], DistributionMeta::default());
        assert!(matches!(tv_distance(&x, &other), Err(Error::LevelMismatch(2, 3))));
    }

    #[test]
    fn empirical_examples() {
        let hl = HLParams::new(2).unwrap();
        let run = sample_bk(3, &hl, 1, 0, Execution::Sequential);
        let d = empirical_distribution(&run).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert!(d.total().is_one());
        let same = [part(&[2]), part(&[2]), part(&[2])];
        let d = empirical_from(2, same.iter(), "test").unwrap();
        assert_eq!(d.entries, vec![(part(&[2]), r(1, 1))]);
    }

    #[test]
    fn run_json_shape() {
        let hl = HLParams::new(2).unwrap();
        let mut run = sample_bk(2, &hl, 10, 3, Execution::Sequential);
        let v = serde_json::to_value(&run).unwrap();
        assert_eq!(v["config"]["sampler"], "bk");
        assert_eq!(v["config"]["p"], 2);
        assert!(v["entries"].is_array());
        run.record_paths = true;
        let v = serde_json::to_value(&run).unwrap();
        assert_eq!(v["paths"].as_array().unwrap().len(), 10);
        assert_eq!(v["paths"][0][0], 1);
    }
}
