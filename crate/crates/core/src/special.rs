//! The three classical specializations of the Macdonald diagram.
//!
//! * Hall-Littlewood (`q = 0`, `t = 1/p`): integer multiplicities, Green's
//!   polynomials as dimensions, and the Jordan-type measure of unipotent
//!   upper triangular matrices over `F_p`.
//! * Schur (`q = t`): hook-length multiplicities and dimensions.
//! * Jack: the `t → 1` limit along `q = u^d`, `t = u^c` with `θ = c/d`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::branching::{arm_leg, dimension, interval_dimension, kappa, BranchingParams, DimensionTable, Multiplicity};
use crate::coeff::{q_integer, ExactRational, Field, RationalFunction};
use crate::error::{Error, Result};
use crate::macdonald::{measure, Alphabet, Distribution, DistributionMeta, MacdonaldEvaluator};
use crate::oracles::{kostka_foulkes, young_path_count};
use crate::partition::{enumerate_partitions, CoverStep, Partition, DEFAULT_ENUMERATION_CAP};
use crate::report::VerifyReport;

/// Hall-Littlewood parameters: the size `p` of the finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HLParams {
    p: u32,
}

impl HLParams {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams(format!("field size p = {p} must be at least 2")));
        }
        Ok(HLParams { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `q = 0`, `t = 1/p`.
    pub fn branching(&self) -> BranchingParams<ExactRational> {
        BranchingParams::numeric(ExactRational::zero(), ExactRational::frac(1, self.p as i64)).expect("1/p lies in (0,1)")
    }

    /// The geometric alphabet `x_i = (1 - 1/p) / p^{i-1}`.
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::Geometric { p: self.p }
    }
}

/// Exponent range `λ'_{i+1} ..= λ'_i` of the Hall-Littlewood multiplicity
/// for adding a box in column `i`.
fn hl_exponents(step: &CoverStep) -> std::ops::RangeInclusive<usize> {
    let lo = step.parent.col_len(step.col + 1);
    let hi = step.parent.col_len(step.col);
    lo..=hi
}

/// `κ(λ, Λ) = p^{λ'_i} + p^{λ'_i - 1} + … + p^{λ'_{i+1}}` for a box added in column `i`.
pub fn hl_kappa(step: &CoverStep, params: &HLParams) -> BigUint {
    let p = BigUint::from(params.p);
    hl_exponents(step).map(|e| p.pow(e as u32)).sum()
}

impl Multiplicity<ExactRational> for HLParams {
    fn kappa(&self, step: &CoverStep) -> Result<ExactRational> {
        Ok(ExactRational::from_biguint(hl_kappa(step, self)))
    }
}

/// A polynomial in the field size `p` with nonnegative integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GreenPolynomial {
    /// `coeffs[k]` multiplies `p^k`; no trailing zeros.
    coeffs: Vec<BigUint>,
}

impl GreenPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        GreenPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn evaluate(&self, p: u32) -> BigUint {
        let p = BigUint::from(p);
        self.coeffs.iter().rev().fold(BigUint::zero(), |acc, c| acc * &p + c)
    }

    fn add_shifted(&mut self, other: &GreenPolynomial, weights: std::ops::RangeInclusive<usize>) {
        for shift in weights {
            let need = other.coeffs.len() + shift;
            if self.coeffs.len() < need {
                self.coeffs.resize(need, BigUint::zero());
            }
            for (k, c) in other.coeffs.iter().enumerate() {
                self.coeffs[k + shift] += c;
            }
        }
    }
}

impl fmt::Display for GreenPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match (k, c.is_one()) {
                (0, _) => c.to_string(),
                (1, true) => "p".to_string(),
                (1, false) => format!("{c}*p"),
                (_, true) => format!("p^{k}"),
                (_, false) => format!("{c}*p^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize)]
struct GreenTerm {
    ep: usize,
    coeff: ExactRational,
}

impl Serialize for GreenPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<GreenTerm> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(ep, c)| GreenTerm {
                ep,
                coeff: ExactRational::from_biguint(c.clone()),
            })
            .collect();
        terms.serialize(serializer)
    }
}

/// `dim(Λ)` of the Hall-Littlewood diagram as a polynomial in the field size,
/// by dynamic programming over paths from `∅`.
pub fn green_polynomial(shape: &Partition) -> Result<GreenPolynomial> {
    if shape.size() > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n: shape.size(),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let mut level: HashMap<Partition, GreenPolynomial> = HashMap::from([(Partition::empty(), GreenPolynomial::from_coeffs(vec![BigUint::one()]))]);
    for _ in 0..shape.size() {
        let mut next: HashMap<Partition, GreenPolynomial> = HashMap::new();
        for (lam, poly) in &level {
            for step in lam.addable_columns() {
                if !step.child.is_contained_in(shape) {
                    continue;
                }
                let range = hl_exponents(&step);
                next.entry(step.child).or_default().add_shifted(poly, range);
            }
        }
        level = next;
    }
    Ok(level.remove(shape).unwrap_or_default())
}

/// Law of the Jordan type of a uniform element of the unipotent upper
/// triangular group `T(n, F_p)`: the coherent measure at `q = 0`, `t = 1/p`
/// on the geometric alphabet with ratio `1/p`.
pub fn jordan_measure(n: usize, params: &HLParams) -> Result<Distribution> {
    let mut d = measure(n, &params.alphabet(), &params.branching())?;
    d.meta.source = "jordan-measure".into();
    Ok(d)
}

/// Checks `hl_kappa` against the general `κ` at `q = 0`, `t = 1/p` on all
/// steps with `|Λ| <= n`.
pub fn verify_hl_kappa(n: usize, params: &HLParams) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("hl-kappa", n).with_param("p", params.p);
    let general = params.branching();
    for size in 0..n {
        for shape in enumerate_partitions(size)? {
            for step in shape.addable_columns() {
                let a = ExactRational::from_biguint(hl_kappa(&step, params));
                let b = kappa(&step, &general)?;
                report.check(a == b, || format!("{} -> {}: {a} vs {b}", step.parent, step.child));
            }
        }
    }
    Ok(report)
}

/// `Q^Λ(p) = p^{n(Λ)} Σ_μ f^μ K_{μΛ}(1/p)` as polynomials in `p`, with `K`
/// generated by the charge statistic, for every `|Λ| <= n`.
pub fn verify_green_charge(n: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("green-charge", n);
    for size in 0..=n {
        let shapes = enumerate_partitions(size)?;
        for lam in &shapes {
            let top = lam.n_stat() as i32;
            let mut coeffs = vec![BigUint::zero(); lam.n_stat() + 1];
            let mut out_of_range = false;
            for mu in &shapes {
                let k = kostka_foulkes(mu, lam)?;
                let f = mu.syt_count();
                for (&(eq, et), c) in k.terms() {
                    let c = c.numer().to_biguint();
                    match (eq, c) {
                        (0, Some(c)) if (0..=top).contains(&et) => coeffs[(top - et) as usize] += &f * c,
                        _ => out_of_range = true,
                    }
                }
            }
            let rhs = GreenPolynomial::from_coeffs(coeffs);
            let lhs = green_polynomial(lam)?;
            report.check(!out_of_range && lhs == rhs, || format!("{lam}: path sum {lhs}, charge side {rhs}"));
        }
    }
    Ok(report)
}

/// Schur multiplicity at a given `q`:
/// `κ = q^{-λ'_i} Π_{s∈λ} [h_Λ(s)] / [h_λ(s)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurParams<F> {
    pub q: F,
}

fn hook_q_product<F: Field>(shape: &Partition, cells_of: &Partition, q: &F) -> F {
    let conj = shape.conjugate();
    let mut acc = F::one();
    for s in cells_of.cells() {
        let (a, l) = arm_leg(shape, &conj, s);
        acc = acc.mul_ref(&q_integer((a + l + 1) as u32, q));
    }
    acc
}

pub fn schur_kappa<F: Field>(step: &CoverStep, q: &F) -> Result<F> {
    let lam = &step.parent;
    let num = hook_q_product(&step.child, lam, q);
    let den = hook_q_product(lam, lam, q);
    let prefactor = q.powi(-(lam.col_len(step.col) as i32))?;
    prefactor.mul_ref(&num).checked_div(&den)
}

/// `dim(Λ) = f^Λ Π_{s∈Λ} [h(s)] / q^{n(Λ)}`.
pub fn schur_dimension<F: Field>(shape: &Partition, q: &F) -> Result<F> {
    let f = F::from_int(i64::try_from(shape.syt_count()).map_err(|_| Error::CapExceeded {
        n: shape.size(),
        cap: DEFAULT_ENUMERATION_CAP,
    })?);
    f.mul_ref(&hook_q_product(shape, shape, q)).checked_div(&q.powi(shape.n_stat() as i32)?)
}

impl<F: Field> Multiplicity<F> for SchurParams<F> {
    fn kappa(&self, step: &CoverStep) -> Result<F> {
        schur_kappa(step, &self.q)
    }
}

/// Schur multiplicities and hook dimensions against the general `κ` and
/// path-sum dimension on the symbolic line `q = t`, for `|Λ| <= n`.
pub fn verify_schur_forms(n: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("schur-forms", n).with_param("q", "t");
    let general = BranchingParams::symbolic_schur();
    let q = RationalFunction::q();
    let mut dims = DimensionTable::new();
    dims.fill_to(n, &general)?;
    for size in 0..=n {
        for shape in enumerate_partitions(size)? {
            let hook = schur_dimension(&shape, &q)?;
            let path = dims.get(&shape).expect("table filled");
            report.check(&hook == path, || format!("dim {shape}: hook formula {hook}, path sum {path}"));
            if size == n {
                continue;
            }
            for step in shape.addable_columns() {
                let a = schur_kappa(&step, &q)?;
                let b = kappa(&step, &general)?;
                report.check(a == b, || format!("kappa {} -> {}: {a} vs {b}", step.parent, step.child));
            }
        }
    }
    Ok(report)
}

/// `dim(Λ,ν) / dim(∅,ν) = q^{n(Λ)} / Π_{s∈Λ}[h(s)] · dim*(ν/Λ) / dim*(ν)`, where
/// `dim*` counts paths of Young's lattice.
pub fn schur_relative_dimension_check(shape: &Partition, outer: &Partition, q: &ExactRational) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("relative-dim", outer.size())
        .with_param("q", q)
        .with_param("lambda", shape)
        .with_param("nu", outer);
    let m = SchurParams { q: q.clone() };
    let lhs = interval_dimension(shape, outer, &m)?.checked_div(&dimension(outer, &m)?)?;
    let young_rel = ExactRational::from_biguint(young_path_count(shape, outer)?);
    let young_full = ExactRational::from_biguint(young_path_count(&Partition::empty(), outer)?);
    let rhs = (q.pow(shape.n_stat() as i32)? * young_rel).checked_div(&(hook_q_product(shape, shape, q) * young_full))?;
    report.check(lhs == rhs, || format!("Lambda = {shape}, nu = {outer}: {lhs} vs {rhs}"));
    Ok(report)
}

/// [`schur_relative_dimension_check`] for every pair `Λ ⊆ ν` with `|ν| <= n`.
pub fn verify_relative_dimension(n: usize, q: &ExactRational) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("relative-dim", n).with_param("q", q);
    let all: Vec<Partition> = (0..=n).map(enumerate_partitions).collect::<Result<Vec<_>>>()?.concat();
    for outer in &all {
        for shape in all.iter().filter(|s| s.is_contained_in(outer)) {
            report.absorb(&schur_relative_dimension_check(shape, outer, q)?);
        }
    }
    Ok(report)
}

/// `s_Λ(x) f^Λ` with `s_Λ` evaluated as `P_Λ` at `q = t`.
pub fn schur_measure_at(n: usize, alphabet: &Alphabet, q: &ExactRational) -> Result<Distribution> {
    alphabet.validate()?;
    let values = match alphabet {
        Alphabet::Finite { values } => values.clone(),
        Alphabet::Geometric { .. } => {
            return Err(Error::InvalidAlphabet("the Schur measure takes a finite alphabet".into()));
        }
    };
    let params = BranchingParams::numeric(q.clone(), q.clone())?;
    let mut eval = MacdonaldEvaluator::new(params, values);
    let entries = enumerate_partitions(n)?
        .into_iter()
        .map(|shape| {
            let s = eval.eval(&shape)?;
            let f = ExactRational::from_biguint(shape.syt_count());
            Ok((shape, s * f))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Distribution::new(
        n,
        entries,
        DistributionMeta {
            q: Some(q.clone()),
            t: Some(q.clone()),
            alphabet: Some(alphabet.clone()),
            source: "schur-measure".into(),
            trials: None,
        },
    ))
}

/// [`schur_measure_at`] computed at `q = t = 1/2` and confirmed at `q = t = 1/3`.
pub fn schur_measure(n: usize, alphabet: &Alphabet) -> Result<Distribution> {
    let a = schur_measure_at(n, alphabet, &ExactRational::frac(1, 2))?;
    let b = schur_measure_at(n, alphabet, &ExactRational::frac(1, 3))?;
    if a.entries != b.entries {
        let (shape, x) = a
            .entries
            .iter()
            .zip(&b.entries)
            .find(|(x, y)| x != y)
            .map(|(x, y)| (x.0.clone(), format!("{} vs {}", x.1, y.1)))
            .expect("entries differ");
        return Err(Error::IdentityViolated {
            identity: "schur-measure-q-independence".into(),
            counterexample: format!("{shape}: {x}"),
        });
    }
    let mut d = a;
    d.meta.q = None;
    d.meta.t = None;
    Ok(d)
}

/// Jack parameter `θ > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct JackParams {
    theta: ExactRational,
}

impl JackParams {
    pub fn new(theta: ExactRational) -> Result<Self> {
        if !theta.is_positive() {
            return Err(Error::InvalidParams(format!("Jack parameter theta = {theta} must be positive")));
        }
        Ok(JackParams { theta })
    }

    pub fn theta(&self) -> &ExactRational {
        &self.theta
    }
}

/// Jack multiplicity
/// `Π_R (a_Λ+1+θ l_Λ)/(a_λ+1+θ l_λ) · Π_C (a_Λ+θ(l_Λ+1))/(a_λ+θ(l_λ+1))`.
pub fn jack_kappa(step: &CoverStep, params: &JackParams) -> ExactRational {
    let th = &params.theta;
    let (rows, cols) = step.row_col_sets();
    let (pc, cc) = (step.parent.conjugate(), step.child.conjugate());
    let lin = |a: i32, b: i32| ExactRational::from_integer(a) + th * &ExactRational::from_integer(b);
    let mut acc = ExactRational::one();
    for s in rows {
        let (a_big, l_big) = arm_leg(&step.child, &cc, s);
        let (a, l) = arm_leg(&step.parent, &pc, s);
        acc = acc * lin(a_big + 1, l_big) / lin(a + 1, l);
    }
    for s in cols {
        let (a_big, l_big) = arm_leg(&step.child, &cc, s);
        let (a, l) = arm_leg(&step.parent, &pc, s);
        acc = acc * lin(a_big, l_big + 1) / lin(a, l + 1);
    }
    acc
}

impl Multiplicity<ExactRational> for JackParams {
    fn kappa(&self, step: &CoverStep) -> Result<ExactRational> {
        Ok(jack_kappa(step, self))
    }
}

/// The Macdonald parameters approaching the Jack limit: with `θ = c/d` in
/// lowest terms and `u = 1 - ε`, `q = u^d` and `t = u^c`.
pub fn jack_approach(params: &JackParams, eps: &ExactRational) -> Result<BranchingParams<ExactRational>> {
    let c: i32 = params
        .theta
        .numer()
        .try_into()
        .map_err(|_| Error::InvalidParams("theta numerator too large".into()))?;
    let d: i32 = params
        .theta
        .denom()
        .try_into()
        .map_err(|_| Error::InvalidParams("theta denominator too large".into()))?;
    let u = ExactRational::one() - eps;
    BranchingParams::numeric(u.pow(d)?, u.pow(c)?)
}

/// Errors `|κ_ε - κ_Jack|` of one step along a decreasing sequence of `ε`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JackLimitRow {
    pub step: String,
    pub jack: ExactRational,
    pub errors: Vec<ExactRational>,
}

/// How `κ_ε` approaches the Jack value along the `ε` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convergence {
    /// Zero error at every `ε`.
    Exact,
    /// `err/ε` stays within a factor 3 between successive `ε`.
    Linear,
    /// `err/ε` shrinks by more than a factor 3 somewhere: the first-order
    /// term vanishes (on the `q = t` line this happens for cells of content 0).
    Superlinear,
    /// Errors fail to decrease, or `err/ε` grows by more than a factor 3.
    Failing,
}

impl JackLimitRow {
    pub fn convergence(&self, eps: &[ExactRational]) -> Convergence {
        let three = ExactRational::from_integer(3);
        let mut out = Convergence::Exact;
        for (e, x) in self.errors.windows(2).zip(eps.windows(2)) {
            if e[0].is_zero() && e[1].is_zero() {
                continue;
            }
            if e[0].is_zero() || e[1] >= e[0] {
                return Convergence::Failing;
            }
            let prev = e[0].checked_div(&x[0]).expect("eps > 0");
            let cur = e[1].checked_div(&x[1]).expect("eps > 0");
            let ratio = cur.checked_div(&prev).expect("nonzero error");
            if ratio > three {
                return Convergence::Failing;
            }
            if ratio.clone() * &three < ExactRational::one() {
                out = Convergence::Superlinear;
            } else if out == Convergence::Exact {
                out = Convergence::Linear;
            }
        }
        out
    }

    /// `|κ_ε - κ_Jack| = O(ε)`: errors decrease and `err/ε` never grows by more than a factor 3.
    pub fn is_order_eps(&self, eps: &[ExactRational]) -> bool {
        self.convergence(eps) != Convergence::Failing
    }
}

/// The `ε` grid `1/10, 1/100, 1/1000`.
pub fn default_jack_eps() -> Vec<ExactRational> {
    vec![ExactRational::frac(1, 10), ExactRational::frac(1, 100), ExactRational::frac(1, 1000)]
}

pub fn jack_limit_rows(n: usize, params: &JackParams, eps: &[ExactRational]) -> Result<Vec<JackLimitRow>> {
    let approaches = eps.iter().map(|e| jack_approach(params, e)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for size in 0..n {
        for shape in enumerate_partitions(size)? {
            for step in shape.addable_columns() {
                let jack = jack_kappa(&step, params);
                let errors = approaches
                    .iter()
                    .map(|p| Ok((kappa(&step, p)? - &jack).abs()))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(JackLimitRow {
                    step: format!("{} -> {}", step.parent, step.child),
                    jack,
                    errors,
                });
            }
        }
    }
    Ok(rows)
}

/// Linear convergence of the Macdonald `κ` to the Jack `κ` on every step
/// with `|Λ| <= n`.
pub fn verify_jack_limit(n: usize, params: &JackParams, eps: &[ExactRational]) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("jack-limit", n).with_param("theta", &params.theta);
    for row in jack_limit_rows(n, params, eps)? {
        report.check(row.is_order_eps(eps), || {
            let errs: Vec<String> = row.errors.iter().map(|e| format!("{:.3e}", e.to_f64())).collect();
            format!("{}: jack {}, errors [{}]", row.step, row.jack, errs.join(", "))
        });
    }
    Ok(report)
}
