//! Macdonald polynomials `P_Λ(x; q, t)` on finite and geometric alphabets,
//! the coherent measures `M_n`, and the growth transition probabilities
//! `P_Λ ψ'_{Λ/λ} / P_λ`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::branching::{arm_leg, psi_prime, upper_hook_product, BranchingParams, DimensionTable};
use crate::coeff::{one_minus, ExactRational, Field};
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, CoverStep, Partition, DEFAULT_ENUMERATION_CAP};
use crate::report::VerifyReport;

/// Largest finite alphabet accepted by [`Alphabet::finite`].
pub const MAX_ALPHABET_LEN: usize = 8;

/// A specialization `x_1, x_2, …` of the symmetric-function variables with `Σ x_i = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Alphabet {
    /// Finitely many nonnegative values summing to one.
    Finite { values: Vec<ExactRational> },
    /// `x_i = 1/p^{i-1} - 1/p^i`.
    Geometric { p: u32 },
}

impl Alphabet {
    pub fn finite(values: Vec<ExactRational>) -> Result<Self> {
        let a = Alphabet::Finite { values };
        a.validate()?;
        Ok(a)
    }

    pub fn geometric(p: u32) -> Result<Self> {
        let a = Alphabet::Geometric { p };
        a.validate()?;
        Ok(a)
    }

    /// `n` equal letters `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::finite(vec![ExactRational::frac(1, n as i64); n])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Alphabet::Finite { values } => {
                if values.is_empty() || values.len() > MAX_ALPHABET_LEN {
                    return Err(Error::InvalidAlphabet(format!(
                        "expected between 1 and {MAX_ALPHABET_LEN} letters, got {}",
                        values.len()
                    )));
                }
                if values.iter().any(|v| v.is_negative()) {
                    return Err(Error::InvalidAlphabet("letters must be nonnegative".into()));
                }
                let total: ExactRational = values.iter().sum();
                if !total.is_one() {
                    return Err(Error::InvalidAlphabet(format!("letters sum to {total}, not 1")));
                }
                Ok(())
            }
            Alphabet::Geometric { p } if *p < 2 => Err(Error::InvalidAlphabet(format!("geometric ratio 1/{p} needs p >= 2"))),
            Alphabet::Geometric { .. } => Ok(()),
        }
    }

    /// Ratio `1/p` of a geometric alphabet.
    pub fn ratio(&self) -> Option<ExactRational> {
        match self {
            Alphabet::Geometric { p } => Some(ExactRational::frac(1, *p as i64)),
            Alphabet::Finite { .. } => None,
        }
    }

    /// Letter `i` (0-based).
    pub fn letter(&self, i: usize) -> ExactRational {
        match self {
            Alphabet::Finite { values } => values.get(i).cloned().unwrap_or_else(ExactRational::zero),
            Alphabet::Geometric { p } => {
                let u = ExactRational::frac(1, *p as i64);
                one_minus(&u) * u.pow(i as i32).expect("nonzero ratio")
            }
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Finite { values } => {
                let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", v.join(","))
            }
            Alphabet::Geometric { p } => write!(f, "geometric:{p}"),
        }
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    /// `geometric:P` or a comma list of rationals summing to one.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(p) = s.strip_prefix("geometric:") {
            let p = p.trim().parse::<u32>().map_err(|_| Error::Parse {
                what: "geometric alphabet",
                input: s.to_string(),
            })?;
            return Alphabet::geometric(p);
        }
        let values = s.split(',').map(str::parse).collect::<Result<Vec<ExactRational>>>()?;
        Alphabet::finite(values)
    }
}

/// Partitions `μ ⊆ λ` such that `λ/μ` is a horizontal strip, including `μ = λ`.
pub fn horizontal_strips_below(shape: &Partition) -> Vec<Partition> {
    let parts = shape.parts();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts.len());
    fn rec(parts: &[usize], i: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == parts.len() {
            let mut v = current.clone();
            while v.last() == Some(&0) {
                v.pop();
            }
            out.push(Partition::from_parts_unchecked(v));
            return;
        }
        let lo = parts.get(i + 1).copied().unwrap_or(0);
        for m in (lo..=parts[i]).rev() {
            current.push(m);
            rec(parts, i + 1, current, out);
            current.pop();
        }
    }
    rec(parts, 0, &mut current, &mut out);
    out
}

fn is_horizontal_strip(outer: &Partition, inner: &Partition) -> bool {
    inner.is_contained_in(outer) && (1..=outer.len()).all(|i| inner.row_len(i) >= outer.row_len(i + 1))
}

/// Horizontal-strip branching coefficient
/// `ψ_{Λ/μ} = Π_{s ∈ R−C} b_μ(s) / b_Λ(s)`, where the product runs over cells in
/// rows meeting the strip but in columns missing it, and
/// `b(s) = (1 - q^a t^{l+1}) / (1 - q^{a+1} t^l)`.
pub fn psi_horizontal<F: Field>(outer: &Partition, inner: &Partition, params: &BranchingParams<F>) -> Result<F> {
    if !is_horizontal_strip(outer, inner) {
        return Err(Error::NotHorizontalStrip {
            outer: outer.to_string(),
            inner: inner.to_string(),
        });
    }
    let strip_cols: Vec<bool> = {
        let width = outer.row_len(1);
        let mut cols = vec![false; width + 1];
        for i in 1..=outer.len() {
            cols[inner.row_len(i) + 1..=outer.row_len(i)].fill(true);
        }
        cols
    };
    let (oc, ic) = (outer.conjugate(), inner.conjugate());
    let mut num = F::one();
    let mut den = F::one();
    for i in 1..=outer.len() {
        if outer.row_len(i) == inner.row_len(i) {
            continue;
        }
        for j in (1..=inner.row_len(i)).filter(|&j| !strip_cols[j]) {
            let s = crate::partition::Cell::new(i, j);
            let (ai, li) = arm_leg(inner, &ic, s);
            let (ao, lo) = arm_leg(outer, &oc, s);
            // b_inner(s) / b_outer(s)
            num = num
                .mul_ref(&params.one_minus_qt(ai, li + 1)?)
                .mul_ref(&params.one_minus_qt(ao + 1, lo)?);
            den = den
                .mul_ref(&params.one_minus_qt(ai + 1, li)?)
                .mul_ref(&params.one_minus_qt(ao, lo + 1)?);
        }
    }
    num.checked_div(&den).map_err(|_| Error::Pole {
        factor: format!("psi {outer}/{inner}"),
    })
}

/// Evaluates `P_Λ(x_1, …, x_k; q, t)` by peeling one variable at a time:
/// `P_Λ(x_1..x_k) = Σ_μ ψ_{Λ/μ} x_k^{|Λ/μ|} P_μ(x_1..x_{k-1})`.
///
/// Memoized on `(μ, remaining variables)`; one evaluator per alphabet.
pub struct MacdonaldEvaluator<F> {
    params: BranchingParams<F>,
    x: Vec<F>,
    memo: HashMap<(Partition, usize), F>,
    psi: HashMap<(Partition, Partition), F>,
}

impl<F: Field> MacdonaldEvaluator<F> {
    pub fn new(params: BranchingParams<F>, x: Vec<F>) -> Self {
        MacdonaldEvaluator {
            params,
            x,
            memo: HashMap::new(),
            psi: HashMap::new(),
        }
    }

    pub fn params(&self) -> &BranchingParams<F> {
        &self.params
    }

    pub fn eval(&mut self, shape: &Partition) -> Result<F> {
        if shape.size() > DEFAULT_ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                n: shape.size(),
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        self.eval_k(shape, self.x.len())
    }

    fn psi_cached(&mut self, outer: &Partition, inner: &Partition) -> Result<F> {
        let key = (outer.clone(), inner.clone());
        if let Some(v) = self.psi.get(&key) {
            return Ok(v.clone());
        }
        let v = psi_horizontal(outer, inner, &self.params)?;
        self.psi.insert(key, v.clone());
        Ok(v)
    }

    fn eval_k(&mut self, shape: &Partition, k: usize) -> Result<F> {
        if shape.is_empty() {
            return Ok(F::one());
        }
        if shape.len() > k {
            return Ok(F::zero());
        }
        let key = (shape.clone(), k);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let xk = self.x[k - 1].clone();
        let mut acc = F::zero();
        for inner in horizontal_strips_below(shape) {
            if inner.len() > k - 1 {
                continue;
            }
            let sub = self.eval_k(&inner, k - 1)?;
            if sub.is_zero() {
                continue;
            }
            let coeff = self.psi_cached(shape, &inner)?;
            let weight = xk.powi((shape.size() - inner.size()) as i32)?;
            acc = acc.add_ref(&coeff.mul_ref(&weight).mul_ref(&sub));
        }
        self.memo.insert(key, acc.clone());
        Ok(acc)
    }
}

/// Evaluates `G(Λ) = P_Λ(1, u, u², …; q, t)` for `0 < u < 1` through
/// `(1 - u^{|Λ|}) G(Λ) = Σ_{μ ⊊ Λ} ψ_{Λ/μ} u^{|μ|} G(μ)`, which follows from
/// peeling the first variable and homogeneity.
pub struct GeometricEvaluator<F> {
    params: BranchingParams<F>,
    u: F,
    memo: HashMap<Partition, F>,
}

impl<F: Field> GeometricEvaluator<F> {
    pub fn new(params: BranchingParams<F>, u: F) -> Self {
        GeometricEvaluator {
            params,
            u,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, shape: &Partition) -> Result<F> {
        if shape.is_empty() {
            return Ok(F::one());
        }
        if let Some(v) = self.memo.get(shape) {
            return Ok(v.clone());
        }
        let mut acc = F::zero();
        for inner in horizontal_strips_below(shape) {
            if &inner == shape {
                continue;
            }
            let g = self.eval(&inner)?;
            let coeff = psi_horizontal(shape, &inner, &self.params)?;
            acc = acc.add_ref(&coeff.mul_ref(&self.u.powi(inner.size() as i32)?).mul_ref(&g));
        }
        let v = acc.checked_div(&one_minus(&self.u.powi(shape.size() as i32)?))?;
        self.memo.insert(shape.clone(), v.clone());
        Ok(v)
    }
}

/// `P_Λ(1, t, t², …; q, t) = t^{n(Λ)} Π_s 1 / (1 - q^{a(s)} t^{l(s)+1})`.
pub fn principal_specialization<F: Field>(shape: &Partition, params: &BranchingParams<F>) -> Result<F> {
    let conj = shape.conjugate();
    let mut den = F::one();
    for s in shape.cells() {
        let (a, l) = arm_leg(shape, &conj, s);
        den = den.mul_ref(&params.one_minus_qt(a, l + 1)?);
    }
    params.t().powi(shape.n_stat() as i32)?.checked_div(&den)
}

/// `P_Λ(1, t, …, t^{k-1}; q, t) = t^{n(Λ)} Π_s (1 - q^{a'(s)} t^{k - l'(s)}) / (1 - q^{a(s)} t^{l(s)+1})`
/// with co-arm `a' = j - 1` and co-leg `l' = i - 1`.
pub fn principal_specialization_truncated<F: Field>(shape: &Partition, k: usize, params: &BranchingParams<F>) -> Result<F> {
    let conj = shape.conjugate();
    let mut num = params.t().powi(shape.n_stat() as i32)?;
    let mut den = F::one();
    for s in shape.cells() {
        let (a, l) = arm_leg(shape, &conj, s);
        num = num.mul_ref(&params.one_minus_qt(s.col as i32 - 1, k as i32 - (s.row as i32 - 1))?);
        den = den.mul_ref(&params.one_minus_qt(a, l + 1)?);
    }
    num.checked_div(&den)
}

/// Exact `P_Λ(x)` for a numeric alphabet.
pub enum AlphabetEvaluator {
    Finite(MacdonaldEvaluator<ExactRational>),
    Geometric {
        inner: GeometricEvaluator<ExactRational>,
        scale: ExactRational,
    },
    /// Geometric ratio equal to `t`: the product formula applies.
    Principal {
        params: BranchingParams<ExactRational>,
        scale: ExactRational,
    },
}

impl AlphabetEvaluator {
    pub fn new(alphabet: &Alphabet, params: &BranchingParams<ExactRational>) -> Result<Self> {
        alphabet.validate()?;
        Ok(match alphabet {
            Alphabet::Finite { values } => AlphabetEvaluator::Finite(MacdonaldEvaluator::new(params.clone(), values.clone())),
            Alphabet::Geometric { .. } => {
                let u = alphabet.ratio().expect("geometric");
                let scale = one_minus(&u);
                if &u == params.t() {
                    AlphabetEvaluator::Principal {
                        params: params.clone(),
                        scale,
                    }
                } else {
                    AlphabetEvaluator::Geometric {
                        inner: GeometricEvaluator::new(params.clone(), u),
                        scale,
                    }
                }
            }
        })
    }

    pub fn eval(&mut self, shape: &Partition) -> Result<ExactRational> {
        match self {
            AlphabetEvaluator::Finite(e) => e.eval(shape),
            AlphabetEvaluator::Geometric { inner, scale } => Ok(inner.eval(shape)? * scale.pow(shape.size() as i32)?),
            AlphabetEvaluator::Principal { params, scale } => {
                Ok(principal_specialization(shape, params)? * scale.pow(shape.size() as i32)?)
            }
        }
    }
}

/// Provenance attached to a [`Distribution`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistributionMeta {
    pub q: Option<ExactRational>,
    pub t: Option<ExactRational>,
    pub alphabet: Option<Alphabet>,
    pub source: String,
    pub trials: Option<u64>,
}

/// An exact probability distribution on the partitions of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub n: usize,
    /// Sorted in enumeration (reverse-lexicographic) order.
    pub entries: Vec<(Partition, ExactRational)>,
    pub meta: DistributionMeta,
}

impl Distribution {
    /// Builds a distribution, sorting entries canonically.
    pub fn new(n: usize, mut entries: Vec<(Partition, ExactRational)>, meta: DistributionMeta) -> Self {
        entries.sort_by(|a, b| b.0.cmp(&a.0));
        Distribution { n, entries, meta }
    }

    pub fn prob(&self, shape: &Partition) -> ExactRational {
        self.entries
            .binary_search_by(|(p, _)| shape.cmp(p))
            .map(|i| self.entries[i].1.clone())
            .unwrap_or_else(|_| ExactRational::zero())
    }

    pub fn total(&self) -> ExactRational {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Nonnegative, sums to one, every key a partition of `n`.
    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|(s, p)| s.size() == self.n && !p.is_negative()) && self.total().is_one()
    }
}

#[derive(Serialize)]
struct EntryRepr<'a> {
    partition: &'a Partition,
    prob: &'a ExactRational,
}

#[derive(Serialize)]
struct DistributionRepr<'a> {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<&'a ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<&'a ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alphabet: Option<&'a Alphabet>,
    source: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    entries: Vec<EntryRepr<'a>>,
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DistributionRepr {
            n: self.n,
            q: self.meta.q.as_ref(),
            t: self.meta.t.as_ref(),
            alphabet: self.meta.alphabet.as_ref(),
            source: &self.meta.source,
            trials: self.meta.trials,
            entries: self
                .entries
                .iter()
                .map(|(partition, prob)| EntryRepr { partition, prob })
                .collect(),
        }
        .serialize(serializer)
    }
}

fn revalidate(params: &BranchingParams<ExactRational>) -> Result<()> {
    BranchingParams::numeric(params.q().clone(), params.t().clone()).map(|_| ())
}

/// The coherent measure
/// `M_n(Λ) = (1-q)^n P_Λ(x) t^{n(Λ)} dim(Λ) / Π_{s∈Λ} (1 - q^{a+1} t^l)`.
pub fn measure(n: usize, alphabet: &Alphabet, params: &BranchingParams<ExactRational>) -> Result<Distribution> {
    revalidate(params)?;
    let mut dims = DimensionTable::new();
    dims.fill_to(n, params)?;
    measure_with(n, alphabet, params, &dims)
}

/// [`measure`] reusing a filled dimension table.
pub fn measure_with(
    n: usize,
    alphabet: &Alphabet,
    params: &BranchingParams<ExactRational>,
    dims: &DimensionTable<ExactRational>,
) -> Result<Distribution> {
    revalidate(params)?;
    if n > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let mut eval = AlphabetEvaluator::new(alphabet, params)?;
    let scale = one_minus(params.q()).pow(n as i32)?;
    let mut entries = Vec::new();
    for shape in enumerate_partitions(n)? {
        let dim = dims.get(&shape).ok_or(Error::CapExceeded { n, cap: dims.depth() })?;
        let p = eval.eval(&shape)?;
        let mass = (&scale * &p * params.t().pow(shape.n_stat() as i32)? * dim).checked_div(&upper_hook_product(&shape, params)?)?;
        entries.push((shape, mass));
    }
    Ok(Distribution::new(
        n,
        entries,
        DistributionMeta {
            q: Some(params.q().clone()),
            t: Some(params.t().clone()),
            alphabet: Some(alphabet.clone()),
            source: "measure".into(),
            trials: None,
        },
    ))
}

/// `P(λ → Λ) = P_Λ(x) ψ'_{Λ/λ} / P_λ(x)` for every addable column of `λ`,
/// zero-probability steps included.
pub fn transition_probabilities(
    shape: &Partition,
    alphabet: &Alphabet,
    params: &BranchingParams<ExactRational>,
) -> Result<Vec<(CoverStep, ExactRational)>> {
    revalidate(params)?;
    let mut eval = AlphabetEvaluator::new(alphabet, params)?;
    transitions_from(shape, &mut eval, params)
}

pub(crate) fn transitions_from(
    shape: &Partition,
    eval: &mut AlphabetEvaluator,
    params: &BranchingParams<ExactRational>,
) -> Result<Vec<(CoverStep, ExactRational)>> {
    let base = eval.eval(shape)?;
    if base.is_zero() {
        return Err(Error::UnreachableState(shape.to_string()));
    }
    shape
        .addable_columns()
        .into_iter()
        .map(|step| {
            let p = eval.eval(&step.child)? * psi_prime(&step, params)?;
            let prob = p.checked_div(&base)?;
            Ok((step, prob))
        })
        .collect()
}

/// Pieri rule with `e_1 = Σ x_i = 1`: `Σ_{λ↗Λ} P_Λ ψ'_{Λ/λ} = P_λ` for all `|λ| <= n`.
pub fn verify_pieri(n: usize, alphabet: &Alphabet, params: &BranchingParams<ExactRational>) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("pieri", n)
        .with_param("q", params.q())
        .with_param("t", params.t())
        .with_param("alphabet", alphabet);
    let mut eval = AlphabetEvaluator::new(alphabet, params)?;
    for size in 0..=n {
        for shape in enumerate_partitions(size)? {
            let base = eval.eval(&shape)?;
            let mut acc = ExactRational::zero();
            for step in shape.addable_columns() {
                acc += &(eval.eval(&step.child)? * psi_prime(&step, params)?);
            }
            report.check(acc == base, || format!("lambda = {shape}: sum = {acc}, P_lambda = {base}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::RationalFunction as RF;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn alphabet_parsing() {
        assert_eq!("geometric:3".parse::<Alphabet>().unwrap(), Alphabet::Geometric { p: 3 });
        assert_eq!(
            "1/2,1/2".parse::<Alphabet>().unwrap(),
            Alphabet::Finite {
                values: vec![r(1, 2), r(1, 2)]
            }
        );
        assert!("1/2,1/3".parse::<Alphabet>().is_err());
        assert!("geometric:1".parse::<Alphabet>().is_err());
        assert!("-1,2".parse::<Alphabet>().is_err());
        let json = serde_json::to_string(&Alphabet::Geometric { p: 2 }).unwrap();
        assert_eq!(json, r#"{"kind":"geometric","p":2}"#);
    }

    #[test]
    fn horizontal_strips() {
        let got = horizontal_strips_below(&part(&[2, 1]));
        assert_eq!(got, vec![part(&[2, 1]), part(&[2]), part(&[1, 1]), part(&[1])]);
        assert_eq!(horizontal_strips_below(&Partition::empty()), vec![Partition::empty()]);
    }

    #[test]
    fn psi_horizontal_basics() {
        let p = BranchingParams::symbolic();
        assert_eq!(psi_horizontal(&part(&[1]), &Partition::empty(), &p).unwrap(), RF::one());
        assert_eq!(psi_horizontal(&part(&[3, 1]), &part(&[3, 1]), &p).unwrap(), RF::one());
        assert!(matches!(
            psi_horizontal(&part(&[1, 1]), &Partition::empty(), &p),
            Err(Error::NotHorizontalStrip { .. })
        ));
    }

    #[test]
    fn eval_p_examples() {
        let params = BranchingParams::symbolic();
        let x1 = RF::monomial(r(1, 1), (0, 0));
        // P_(1)(x1, x2) = x1 + x2 with numeric letters
        let np = BranchingParams::numeric(r(1, 3), r(1, 2)).unwrap();
        let mut e = MacdonaldEvaluator::new(np, vec![r(1, 5), r(4, 5)]);
        assert_eq!(e.eval(&part(&[1])).unwrap(), r(1, 1));
        let mut e = MacdonaldEvaluator::new(BranchingParams::numeric(r(1, 3), r(1, 2)).unwrap(), vec![r(1, 2), r(1, 2)]);
        assert_eq!(e.eval(&part(&[1, 1])).unwrap(), r(1, 4));
        assert_eq!(e.eval(&part(&[1, 1, 1])).unwrap(), r(0, 1));

        // P_(2)(x1, x2) = x1^2 + x2^2 + (1+q)(1-t)/(1-qt) x1 x2, checked at x = (2, 3)
        let q = RF::q();
        let t = RF::t();
        let one = RF::one();
        let mut e = MacdonaldEvaluator::new(params, vec![&x1 * &RF::from_int(2), RF::from_int(3)]);
        let cross = (&(&one + &q) * &(&one - &t)).checked_div(&(&one - &(&q * &t))).unwrap();
        let expected = &RF::from_int(13) + &(&cross * &RF::from_int(6));
        assert_eq!(e.eval(&part(&[2])).unwrap(), expected);
    }

    #[test]
    fn principal_specialization_examples() {
        let p = BranchingParams::numeric(r(0, 1), r(1, 2)).unwrap();
        assert_eq!(principal_specialization(&Partition::empty(), &p).unwrap(), r(1, 1));
        assert_eq!(principal_specialization(&part(&[1]), &p).unwrap(), r(2, 1));
        assert_eq!(principal_specialization(&part(&[1, 1]), &p).unwrap(), r(4, 3));
    }

    #[test]
    fn geometric_recursion_matches_product_formula() {
        for (q, t) in [(r(0, 1), r(1, 2)), (r(1, 3), r(1, 2)), (r(1, 2), r(1, 3))] {
            let p = BranchingParams::numeric(q, t.clone()).unwrap();
            let mut g = GeometricEvaluator::new(p.clone(), t);
            for n in 0..=5 {
                for shape in enumerate_partitions(n).unwrap() {
                    assert_eq!(g.eval(&shape).unwrap(), principal_specialization(&shape, &p).unwrap(), "{shape}");
                }
            }
        }
    }

    #[test]
    fn truncated_principal_specialization_matches_evaluation() {
        let p = BranchingParams::numeric(r(1, 3), r(1, 2)).unwrap();
        for k in 1..=4 {
            let x: Vec<ExactRational> = (0..k).map(|i| r(1, 2).pow(i).unwrap()).collect();
            let mut e = MacdonaldEvaluator::new(p.clone(), x);
            for n in 0..=4 {
                for shape in enumerate_partitions(n).unwrap() {
                    assert_eq!(
                        e.eval(&shape).unwrap(),
                        principal_specialization_truncated(&shape, k as usize, &p).unwrap(),
                        "{shape} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn measure_examples() {
        let p = BranchingParams::numeric(r(1, 3), r(1, 2)).unwrap();
        let m = measure(1, &Alphabet::uniform(2).unwrap(), &p).unwrap();
        assert_eq!(m.entries, vec![(part(&[1]), r(1, 1))]);

        for pp in [2i64, 3, 5] {
            let hl = BranchingParams::numeric(r(0, 1), r(1, pp)).unwrap();
            let m = measure(2, &Alphabet::Geometric { p: pp as u32 }, &hl).unwrap();
            assert_eq!(m.prob(&part(&[1, 1])), r(1, pp));
            assert_eq!(m.prob(&part(&[2])), r(pp - 1, pp));
        }

        let schur = BranchingParams::numeric(r(1, 3), r(1, 3)).unwrap();
        let m = measure(2, &Alphabet::uniform(2).unwrap(), &schur).unwrap();
        assert_eq!(m.prob(&part(&[2])), r(3, 4));
        assert_eq!(m.prob(&part(&[1, 1])), r(1, 4));
        assert!(m.is_valid());
    }

    #[test]
    fn measure_rejects_bad_input() {
        let p = BranchingParams::unchecked(r(1, 1), r(1, 2));
        assert!(matches!(measure(2, &Alphabet::uniform(2).unwrap(), &p), Err(Error::InvalidParams(_))));
        let p = BranchingParams::numeric(r(1, 3), r(1, 2)).unwrap();
        let bad = Alphabet::Finite { values: vec![r(1, 3)] };
        assert!(matches!(measure(2, &bad, &p), Err(Error::InvalidAlphabet(_))));
    }

    #[test]
    fn transitions_examples() {
        let p = BranchingParams::numeric(r(0, 1), r(1, 2)).unwrap();
        let geo = Alphabet::Geometric { p: 2 };
        let tr = transition_probabilities(&Partition::empty(), &geo, &p).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr[0].1, r(1, 1));
        let tr = transition_probabilities(&part(&[1]), &geo, &p).unwrap();
        let got: Vec<_> = tr.iter().map(|(s, pr)| (s.child.clone(), pr.clone())).collect();
        assert_eq!(got, vec![(part(&[1, 1]), r(1, 2)), (part(&[2]), r(1, 2))]);

        let s = BranchingParams::numeric(r(1, 2), r(1, 2)).unwrap();
        let tr = transition_probabilities(&part(&[1]), &Alphabet::uniform(2).unwrap(), &s).unwrap();
        let total: ExactRational = tr.iter().map(|(_, p)| p.clone()).sum();
        assert!(total.is_one());
        assert_eq!(tr[1].1, r(3, 4));

        // three rows cannot be reached with two letters
        let err = transition_probabilities(&part(&[1, 1, 1]), &Alphabet::uniform(2).unwrap(), &s);
        assert!(matches!(err, Err(Error::UnreachableState(_))));
        let tr = transition_probabilities(&part(&[1, 1]), &Alphabet::uniform(2).unwrap(), &s).unwrap();
        assert_eq!(tr[0].1, r(0, 1));
    }

    #[test]
    fn pieri_small() {
        let p = BranchingParams::numeric(r(1, 3), r(1, 2)).unwrap();
        let rep = verify_pieri(4, &"2/5,3/10,1/5,1/10".parse().unwrap(), &p).unwrap();
        assert!(rep.is_ok(), "{rep:?}");
    }

    #[test]
    fn distribution_json_shape() {
        let p = BranchingParams::numeric(r(0, 1), r(1, 2)).unwrap();
        let m = measure(2, &Alphabet::Geometric { p: 2 }, &p).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["n"], 2);
        assert_eq!(v["q"], "0/1");
        assert_eq!(v["t"], "1/2");
        assert_eq!(v["entries"][0]["partition"], serde_json::json!([2]));
        assert_eq!(v["entries"][0]["prob"], "1/2");
        assert_eq!(v["entries"][1]["partition"], serde_json::json!([1, 1]));
    }
}
