//! The Macdonald Bratteli diagram: the multiplicity `κ(λ, Λ)` on the edges of
//! Young's lattice, the single-box Pieri coefficient `ψ'_{Λ/λ}`, weighted path
//! counts (dimensions) and exhaustive checkers for the identities that tie
//! them to the coherent measures.

use std::collections::HashMap;

use crate::coeff::{one_minus, ExactRational, Field, RationalFunction};
use crate::error::{Error, Result};
use crate::macdonald::{measure_with, Alphabet};
use crate::partition::{enumerate_paths, Cell, CoverStep, Partition, DEFAULT_ENUMERATION_CAP};
use crate::report::VerifyReport;

/// Numeric or symbolic choice of `(q, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingParams<F> {
    q: F,
    t: F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Numeric,
    Symbolic,
}

impl BranchingParams<ExactRational> {
    /// Rational parameters on the open domain `0 <= q < 1`, `0 < t < 1`.
    pub fn numeric(q: ExactRational, t: ExactRational) -> Result<Self> {
        let one = ExactRational::one();
        if q.is_negative() || q >= one {
            return Err(Error::InvalidParams(format!("q = {q} must satisfy 0 <= q < 1")));
        }
        if !t.is_positive() || t >= one {
            return Err(Error::InvalidParams(format!("t = {t} must satisfy 0 < t < 1")));
        }
        Ok(BranchingParams { q, t })
    }
}

impl BranchingParams<RationalFunction> {
    /// Formal `q` and `t`.
    pub fn symbolic() -> Self {
        BranchingParams {
            q: RationalFunction::q(),
            t: RationalFunction::t(),
        }
    }

    /// The Schur line `q = t`, both set to the formal variable `q`.
    pub fn symbolic_schur() -> Self {
        BranchingParams {
            q: RationalFunction::q(),
            t: RationalFunction::q(),
        }
    }
}

impl<F: Field> BranchingParams<F> {
    /// No domain check; used for limits and symbolic substitutions.
    pub fn unchecked(q: F, t: F) -> Self {
        BranchingParams { q, t }
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn t(&self) -> &F {
        &self.t
    }

    pub fn mode(&self) -> Mode {
        if F::SYMBOLIC {
            Mode::Symbolic
        } else {
            Mode::Numeric
        }
    }

    /// `q^a t^b` with `0^0 = 1`.
    pub fn qt(&self, a: i32, b: i32) -> Result<F> {
        Ok(self.q.powi(a)?.mul_ref(&self.t.powi(b)?))
    }

    /// `1 - q^a t^b`.
    pub fn one_minus_qt(&self, a: i32, b: i32) -> Result<F> {
        Ok(one_minus(&self.qt(a, b)?))
    }

    fn describe(&self, report: VerifyReport) -> VerifyReport {
        report.with_param("q", &self.q).with_param("t", &self.t)
    }
}

/// An edge weighting of Young's lattice.
pub trait Multiplicity<F: Field>: Sync {
    fn kappa(&self, step: &CoverStep) -> Result<F>;
}

impl<F: Field> Multiplicity<F> for BranchingParams<F> {
    fn kappa(&self, step: &CoverStep) -> Result<F> {
        kappa(step, self)
    }
}

/// Arm and leg of `cell` in `shape`, given the conjugate.
pub(crate) fn arm_leg(shape: &Partition, conj: &Partition, cell: Cell) -> (i32, i32) {
    let arm = shape.row_len(cell.row) - cell.col;
    let leg = conj.row_len(cell.col) - cell.row;
    (arm as i32, leg as i32)
}

fn ratio<F: Field>(num: F, den: F, step: &CoverStep) -> Result<F> {
    num.checked_div(&den).map_err(|_| Error::Pole {
        factor: format!("denominator of {} -> {}", step.parent, step.child),
    })
}

/// `κ(λ, Λ)` in the product form over `R_{Λ/λ}` and `C_{Λ/λ}`:
///
/// ```text
/// Π_R (t^{-l_Λ} - q^{a_Λ+1}) / (t^{-l_λ} - q^{a_λ+1})
///   · Π_C (q^{a_Λ} - t^{-(l_Λ+1)}) / (q^{a_λ} - t^{-(l_λ+1)})
/// ```
pub fn kappa<F: Field>(step: &CoverStep, params: &BranchingParams<F>) -> Result<F> {
    let (rows, cols) = step.row_col_sets();
    let (pc, cc) = (step.parent.conjugate(), step.child.conjugate());
    let mut num = F::one();
    let mut den = F::one();
    for s in rows {
        let (a_big, l_big) = arm_leg(&step.child, &cc, s);
        let (a_small, l_small) = arm_leg(&step.parent, &pc, s);
        num = num.mul_ref(&params.qt(0, -l_big)?.sub_ref(&params.qt(a_big + 1, 0)?));
        den = den.mul_ref(&params.qt(0, -l_small)?.sub_ref(&params.qt(a_small + 1, 0)?));
    }
    for s in cols {
        let (a_big, l_big) = arm_leg(&step.child, &cc, s);
        let (a_small, l_small) = arm_leg(&step.parent, &pc, s);
        num = num.mul_ref(&params.qt(a_big, 0)?.sub_ref(&params.qt(0, -(l_big + 1))?));
        den = den.mul_ref(&params.qt(a_small, 0)?.sub_ref(&params.qt(0, -(l_small + 1))?));
    }
    ratio(num, den, step)
}

/// `κ(λ, Λ)` in the normalized form
///
/// ```text
/// t^{-(Λ'_i - 1)} · Π_R (1 - q^{a_Λ+1} t^{l_Λ}) / (1 - q^{a_λ+1} t^{l_λ})
///                 · Π_C (1 - q^{a_Λ} t^{l_Λ+1}) / (1 - q^{a_λ} t^{l_λ+1})
/// ```
/// where `i` is the column of the added cell.
pub fn kappa_second_form<F: Field>(step: &CoverStep, params: &BranchingParams<F>) -> Result<F> {
    let (rows, cols) = step.row_col_sets();
    let (pc, cc) = (step.parent.conjugate(), step.child.conjugate());
    let height = cc.row_len(step.col) as i32;
    let mut num = F::one();
    let mut den = params.qt(0, height - 1)?;
    for s in rows {
        let (a_big, l_big) = arm_leg(&step.child, &cc, s);
        let (a_small, l_small) = arm_leg(&step.parent, &pc, s);
        num = num.mul_ref(&params.one_minus_qt(a_big + 1, l_big)?);
        den = den.mul_ref(&params.one_minus_qt(a_small + 1, l_small)?);
    }
    for s in cols {
        let (a_big, l_big) = arm_leg(&step.child, &cc, s);
        let (a_small, l_small) = arm_leg(&step.parent, &pc, s);
        num = num.mul_ref(&params.one_minus_qt(a_big, l_big + 1)?);
        den = den.mul_ref(&params.one_minus_qt(a_small, l_small + 1)?);
    }
    ratio(num, den, step)
}

/// Single-box vertical Pieri coefficient `ψ'_{Λ/λ} = Π_{s∈C} b_Λ(s) / b_λ(s)`
/// with `b(s) = (1 - q^a t^{l+1}) / (1 - q^{a+1} t^l)`.
pub fn psi_prime<F: Field>(step: &CoverStep, params: &BranchingParams<F>) -> Result<F> {
    let (_, cols) = step.row_col_sets();
    let (pc, cc) = (step.parent.conjugate(), step.child.conjugate());
    let mut num = F::one();
    let mut den = F::one();
    for s in cols {
        let (a_big, l_big) = arm_leg(&step.child, &cc, s);
        let (a_small, l_small) = arm_leg(&step.parent, &pc, s);
        num = num
            .mul_ref(&params.one_minus_qt(a_big, l_big + 1)?)
            .mul_ref(&params.one_minus_qt(a_small + 1, l_small)?);
        den = den
            .mul_ref(&params.one_minus_qt(a_big + 1, l_big)?)
            .mul_ref(&params.one_minus_qt(a_small, l_small + 1)?);
    }
    ratio(num, den, step)
}

/// `Π_{s∈Λ} (1 - q^{a(s)+1} t^{l(s)})`.
pub fn upper_hook_product<F: Field>(shape: &Partition, params: &BranchingParams<F>) -> Result<F> {
    let conj = shape.conjugate();
    let mut acc = F::one();
    for s in shape.cells() {
        let (a, l) = arm_leg(shape, &conj, s);
        acc = acc.mul_ref(&params.one_minus_qt(a + 1, l)?);
    }
    Ok(acc)
}

/// `(1-q)^n t^{n(Λ)} / Π_{s∈Λ} (1 - q^{a+1} t^l)`, the common value of
/// `Π_j ψ'/κ` along every path from `∅` to `Λ`.
pub fn exchangeable_weight<F: Field>(shape: &Partition, params: &BranchingParams<F>) -> Result<F> {
    let num = one_minus(params.q())
        .powi(shape.size() as i32)?
        .mul_ref(&params.t().powi(shape.n_stat() as i32)?);
    num.checked_div(&upper_hook_product(shape, params)?)
        .map_err(|_| Error::Pole {
            factor: format!("hook product of {shape}"),
        })
}

/// A path `∅ = γ(0) ↗ γ(1) ↗ … ↗ γ(n)` recorded by the columns of the added cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthPath {
    columns: Vec<usize>,
    end: Partition,
}

impl GrowthPath {
    pub fn from_columns(columns: Vec<usize>) -> Result<Self> {
        let mut end = Partition::empty();
        for &c in &columns {
            end = CoverStep::new(end, c)?.child;
        }
        Ok(GrowthPath { columns, end })
    }

    pub(crate) fn from_parts_unchecked(columns: Vec<usize>, end: Partition) -> Self {
        GrowthPath { columns, end }
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn endpoint(&self) -> &Partition {
        &self.end
    }

    /// The chain of cover steps.
    pub fn steps(&self) -> Vec<CoverStep> {
        let mut at = Partition::empty();
        let mut out = Vec::with_capacity(self.columns.len());
        for &c in &self.columns {
            let step = CoverStep::new(at, c).expect("recorded columns form a valid path");
            at = step.child.clone();
            out.push(step);
        }
        out
    }
}

/// Sum over all paths `from ↗ … ↗ to` of the product of multiplicities.
pub fn interval_dimension<F: Field, M: Multiplicity<F> + ?Sized>(from: &Partition, to: &Partition, m: &M) -> Result<F> {
    if to.size() > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n: to.size(),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    if !from.is_contained_in(to) {
        return Err(Error::NotContained {
            inner: from.to_string(),
            outer: to.to_string(),
        });
    }
    let mut level: HashMap<Partition, F> = HashMap::from([(from.clone(), F::one())]);
    for _ in from.size()..to.size() {
        let mut next: HashMap<Partition, F> = HashMap::new();
        for (shape, weight) in &level {
            for step in shape.addable_columns() {
                if !step.child.is_contained_in(to) {
                    continue;
                }
                let w = weight.mul_ref(&m.kappa(&step)?);
                match next.get_mut(&step.child) {
                    Some(acc) => *acc = acc.add_ref(&w),
                    None => {
                        next.insert(step.child, w);
                    }
                }
            }
        }
        level = next;
    }
    Ok(level.remove(to).unwrap_or_else(F::zero))
}

/// `dim(Λ)`: weighted count of maximal paths from `∅`.
pub fn dimension<F: Field, M: Multiplicity<F> + ?Sized>(shape: &Partition, m: &M) -> Result<F> {
    interval_dimension(&Partition::empty(), shape, m)
}

/// Level-by-level memo of `dim` over all of `Γ_0 … Γ_n`.
///
/// Fill it once, then share it read-only.
pub struct DimensionTable<F> {
    levels: Vec<HashMap<Partition, F>>,
}

impl<F: Field> Default for DimensionTable<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> DimensionTable<F> {
    pub fn new() -> Self {
        DimensionTable {
            levels: vec![HashMap::from([(Partition::empty(), F::one())])],
        }
    }

    /// Extends the table through level `n`.
    pub fn fill_to<M: Multiplicity<F> + ?Sized>(&mut self, n: usize, m: &M) -> Result<()> {
        if n > DEFAULT_ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                n,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        while self.levels.len() <= n {
            let prev = self.levels.last().expect("level 0 is always present");
            let mut next: HashMap<Partition, F> = HashMap::new();
            for (shape, weight) in prev {
                for step in shape.addable_columns() {
                    let w = weight.mul_ref(&m.kappa(&step)?);
                    match next.get_mut(&step.child) {
                        Some(acc) => *acc = acc.add_ref(&w),
                        None => {
                            next.insert(step.child, w);
                        }
                    }
                }
            }
            self.levels.push(next);
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn get(&self, shape: &Partition) -> Option<&F> {
        self.levels.get(shape.size())?.get(shape)
    }

    pub fn clear(&mut self) {
        self.levels.truncate(1);
    }
}

/// Checks the two printed forms of `κ` against each other on every cover
/// step with `|Λ| <= n`.
pub fn verify_kappa_forms<F: Field>(n: usize, params: &BranchingParams<F>) -> Result<VerifyReport> {
    let mut report = params.describe(VerifyReport::new("kappa-forms", n));
    for size in 0..n {
        for shape in crate::partition::enumerate_partitions(size)? {
            for step in shape.addable_columns() {
                let a = kappa(&step, params)?;
                let b = kappa_second_form(&step, params)?;
                report.check(a == b, || format!("{} -> {}: {a} vs {b}", step.parent, step.child));
            }
        }
    }
    Ok(report)
}

/// Path independence of `Π_j ψ'/κ`: every path from `∅` to `shape` gives
/// [`exchangeable_weight`].
pub fn verify_exchangeability<F: Field>(shape: &Partition, params: &BranchingParams<F>) -> Result<VerifyReport> {
    let mut report = params
        .describe(VerifyReport::new("exchangeability", shape.size()))
        .with_param("shape", shape);
    let expected = exchangeable_weight(shape, params)?;
    for path in enumerate_paths(&Partition::empty(), shape)? {
        let mut acc = F::one();
        for step in &path {
            let r = psi_prime(step, params)?.checked_div(&kappa(step, params)?)?;
            acc = acc.mul_ref(&r);
        }
        report.check(acc == expected, || {
            let cols: Vec<String> = path.iter().map(|s| s.col.to_string()).collect();
            format!("path with columns [{}] gives {acc}, expected {expected}", cols.join(","))
        });
    }
    Ok(report)
}

/// Runs [`verify_exchangeability`] for every shape with `|Λ| <= n`.
pub fn verify_exchangeability_up_to<F: Field>(n: usize, params: &BranchingParams<F>) -> Result<VerifyReport> {
    let mut report = params.describe(VerifyReport::new("exchangeability", n));
    for size in 0..=n {
        for shape in crate::partition::enumerate_partitions(size)? {
            report.absorb(&verify_exchangeability(&shape, params)?);
        }
    }
    Ok(report)
}

/// Coherence of `{M_n}` with the diagram:
/// `M_{n-1}(λ) = Σ_{λ↗Λ} dim(λ)/dim(Λ) · κ(λ,Λ) · M_n(Λ)` for every `λ ⊢ n-1`.
pub fn verify_coherence(n: usize, params: &BranchingParams<ExactRational>, alphabet: &Alphabet) -> Result<VerifyReport> {
    verify_coherence_with(n, params, alphabet, params)
}

/// [`verify_coherence`] with the diagram weighted by `kappa` instead of the
/// Macdonald multiplicity; the measures are always the Macdonald ones.
pub fn verify_coherence_with<M: Multiplicity<ExactRational> + ?Sized>(
    n: usize,
    params: &BranchingParams<ExactRational>,
    alphabet: &Alphabet,
    kappa: &M,
) -> Result<VerifyReport> {
    if n == 0 {
        return Err(Error::InvalidParams("coherence needs n >= 1".into()));
    }
    let mut report = params
        .describe(VerifyReport::new("coherence", n))
        .with_param("alphabet", alphabet);
    let mut dims = DimensionTable::new();
    dims.fill_to(n, kappa)?;
    let upper = measure_with(n, alphabet, params, &dims)?;
    let lower = measure_with(n - 1, alphabet, params, &dims)?;
    for (shape, mass) in &lower.entries {
        let d_small = dims.get(shape).expect("table filled");
        let mut acc = ExactRational::zero();
        for step in shape.addable_columns() {
            let d_big = dims.get(&step.child).expect("table filled");
            let term = (d_small * &kappa.kappa(&step)?).checked_div(d_big)? * upper.prob(&step.child);
            acc += &term;
        }
        report.check(&acc == mass, || format!("lambda = {shape}: M_(n-1) = {mass}, backward sum = {acc}"));
    }
    report.check(upper.total().is_one(), || format!("M_{n} sums to {}", upper.total()));
    Ok(report)
}
