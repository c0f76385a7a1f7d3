//! Brute-force ground truth, independent of the branching machinery.
//!
//! * unipotent upper triangular matrices over `F_p` and their Jordan types;
//! * RSK row insertion on words;
//! * semistandard tableaux, the charge statistic and Kostka-Foulkes
//!   polynomials;
//! * path counts in Young's lattice.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::{ExactRational, LaurentPoly};
use crate::error::{Error, Result};
use crate::exec::{map_trials, Execution};
use crate::macdonald::{horizontal_strips_below, Alphabet, Distribution, DistributionMeta};
use crate::partition::{Partition, DEFAULT_ENUMERATION_CAP};
use crate::samplers::{empirical_from, CumulativeTable, RngStream};

/// Largest number of objects an exhaustive oracle will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("p = {p} must be prime")))
    }
}

/// A square matrix over `F_p`, `p` prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixFp {
    n: usize,
    p: u32,
    entries: Vec<u32>,
}

#[derive(Serialize)]
struct MatrixRepr {
    n: usize,
    p: u32,
    rows: Vec<Vec<u32>>,
}

impl Serialize for MatrixFp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            p: self.p,
            rows: self.rows(),
        }
        .serialize(serializer)
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

impl MatrixFp {
    pub fn identity(n: usize, p: u32) -> Result<Self> {
        check_prime(p)?;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Ok(MatrixFp { n, p, entries })
    }

    pub fn from_rows(rows: Vec<Vec<u32>>, p: u32) -> Result<Self> {
        check_prime(p)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParams("matrix must be square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= p) {
            return Err(Error::InvalidParams(format!("entries must be residues mod {p}")));
        }
        Ok(MatrixFp {
            n,
            p,
            entries: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[u32]>::to_vec).collect()
    }

    /// Upper triangular with ones on the diagonal.
    pub fn is_unipotent_upper(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u32::from(i == j) || j > i))
    }

    pub fn minus_identity(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            let x = &mut out.entries[i * self.n + i];
            *x = (*x + self.p - 1) % self.p;
        }
        out
    }

    pub fn mul(&self, rhs: &MatrixFp) -> Self {
        let (n, p) = (self.n, self.p as u64);
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = ((*e as u64 + a * rhs.get(k, j) as u64) % p) as u32;
                }
            }
        }
        MatrixFp { n, p: self.p, entries }
    }

    /// Rank by Gaussian elimination over `F_p`.
    pub fn rank(&self) -> usize {
        let (n, p) = (self.n, self.p as u64);
        let mut m: Vec<Vec<u64>> = self.rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = inv_mod(m[rank][col] as u32, self.p) as u64;
            for x in m[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..n {
                if r != rank && m[r][col] != 0 {
                    let f = m[r][col];
                    let pivot = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot) {
                        *x = (*x + p * p - f * y) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// A uniform element of `T(n, F_p)`.
pub fn random_unipotent(n: usize, p: u32, rng: &mut RngStream) -> Result<MatrixFp> {
    let mut m = MatrixFp::identity(n, p)?;
    for i in 0..n {
        for j in i + 1..n {
            m.entries[i * n + j] = rng.below(p);
        }
    }
    Ok(m)
}

/// Every element of `T(n, F_p)`; refuses more than [`ENUMERATION_LIMIT`].
pub fn enumerate_unipotent(n: usize, p: u32) -> Result<Vec<MatrixFp>> {
    check_prime(p)?;
    let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let count = (p as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let base = MatrixFp::identity(n, p)?;
    let mut digits = vec![0u32; free.len()];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        let mut m = base.clone();
        for (&(i, j), &d) in free.iter().zip(&digits) {
            m.entries[i * n + j] = d;
        }
        out.push(m);
        // odometer increment
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(out);
            }
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Jordan type of a unipotent matrix: `λ'_k = rank (M-I)^{k-1} - rank (M-I)^k`.
pub fn jordan_type(m: &MatrixFp) -> Result<Partition> {
    let nil = m.minus_identity();
    let mut ranks = vec![m.n];
    let mut power = MatrixFp::identity(m.n, m.p)?;
    while *ranks.last().expect("nonempty") > 0 {
        if ranks.len() > m.n {
            return Err(Error::NotUnipotent);
        }
        power = power.mul(&nil);
        let r = power.rank();
        if r == *ranks.last().expect("nonempty") {
            return Err(Error::NotUnipotent);
        }
        ranks.push(r);
    }
    let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    Ok(Partition::new(conj)?.conjugate())
}

fn oracle_meta(source: &str) -> DistributionMeta {
    DistributionMeta {
        source: source.into(),
        ..Default::default()
    }
}

/// Exact law of the Jordan type over all of `T(n, F_p)`.
pub fn jordan_distribution_exhaustive(n: usize, p: u32) -> Result<Distribution> {
    let all = enumerate_unipotent(n, p)?;
    let total = ExactRational::from_integer(all.len() as i64);
    let mut counts: BTreeMap<Partition, i64> = BTreeMap::new();
    for m in &all {
        *counts.entry(jordan_type(m)?).or_insert(0) += 1;
    }
    let entries = counts
        .into_iter()
        .map(|(s, c)| (s, ExactRational::from_integer(c) / &total))
        .collect();
    Ok(Distribution::new(n, entries, oracle_meta("oracle")))
}

/// Empirical law of the Jordan type of `trials` uniform elements of `T(n, F_p)`.
pub fn jordan_distribution_mc(n: usize, p: u32, trials: u64, seed: u64, exec: Execution) -> Result<Distribution> {
    check_prime(p)?;
    let shapes = map_trials(trials, exec, |i| {
        let m = random_unipotent(n, p, &mut RngStream::new(seed, i))?;
        jordan_type(&m)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut d = empirical_from(n, shapes.iter(), "oracle-mc")?;
    d.meta.trials = Some(trials);
    Ok(d)
}

/// A word over the letters `1, 2, …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    pub letters: Vec<usize>,
}

/// Insertion tableau of RSK row insertion.
pub fn rsk_insertion(word: &[usize]) -> Vec<Vec<usize>> {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &x in word {
        let mut x = x;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let row = &mut rows[r];
            match row.iter().position(|&y| y > x) {
                Some(k) => {
                    x = std::mem::replace(&mut row[k], x);
                    r += 1;
                }
                None => {
                    row.push(x);
                    break;
                }
            }
        }
    }
    rows
}

pub fn rsk_shape(word: &Word) -> Partition {
    Partition::new(rsk_insertion(&word.letters).iter().map(Vec::len).collect()).expect("insertion tableau has partition shape")
}

fn finite_letters(alphabet: &Alphabet) -> Result<Vec<ExactRational>> {
    alphabet.validate()?;
    match alphabet {
        Alphabet::Finite { values } => Ok(values.clone()),
        Alphabet::Geometric { .. } => Err(Error::InvalidAlphabet("RSK words need a finite alphabet".into())),
    }
}

/// Exact law of the RSK shape of an i.i.d. word of length `n`, summed over all `k^n` words.
pub fn rsk_distribution_exhaustive(n: usize, alphabet: &Alphabet) -> Result<Distribution> {
    let x = finite_letters(alphabet)?;
    let k = x.len();
    let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut acc: BTreeMap<Partition, ExactRational> = BTreeMap::new();
    let mut digits = vec![0usize; n];
    'words: loop {
        let word = Word {
            letters: digits.iter().map(|d| d + 1).collect(),
        };
        let weight: ExactRational = digits.iter().map(|&d| x[d].clone()).product();
        if !weight.is_zero() {
            *acc.entry(rsk_shape(&word)).or_insert_with(ExactRational::zero) += &weight;
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'words;
            }
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
    let mut d = Distribution::new(n, acc.into_iter().collect(), oracle_meta("oracle"));
    d.meta.alphabet = Some(alphabet.clone());
    Ok(d)
}

/// Empirical law of the RSK shape of `trials` i.i.d. words.
pub fn rsk_distribution(n: usize, alphabet: &Alphabet, trials: u64, seed: u64, exec: Execution) -> Result<Distribution> {
    let x = finite_letters(alphabet)?;
    let cdf = CumulativeTable::from_probs(&x)?;
    let shapes = map_trials(trials, exec, |i| {
        let mut rng = RngStream::new(seed, i);
        let letters = (0..n).map(|_| cdf.draw(rng.next_u128()) + 1).collect();
        rsk_shape(&Word { letters })
    });
    let mut d = empirical_from(n, shapes.iter(), "oracle-mc")?;
    d.meta.alphabet = Some(alphabet.clone());
    Ok(d)
}

/// A semistandard Young tableau in English notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Tableau {
    pub rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(Vec::len).collect()).expect("tableau rows form a partition")
    }

    /// Rows weakly increase, columns strictly increase.
    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self
            .rows
            .windows(2)
            .all(|w| w[1].iter().enumerate().all(|(j, &below)| w[0].get(j).is_some_and(|&above| above < below)));
        rows_ok && cols_ok && self.rows.iter().flatten().all(|&x| x >= 1)
    }

    /// Rows read left to right, from the bottom row up.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.iter().rev().flatten().copied().collect()
    }
}

/// All semistandard fillings of `shape` with entries in `1..=max`, optionally
/// with prescribed content (`content[i]` copies of `i + 1`).
fn fill_tableaux(shape: &Partition, max: usize, content: Option<&[usize]>) -> Vec<Tableau> {
    let cells: Vec<(usize, usize)> = shape.cells().map(|c| (c.row - 1, c.col - 1)).collect();
    let mut rows: Vec<Vec<usize>> = shape.parts().iter().map(|&l| vec![0; l]).collect();
    let mut left: Vec<usize> = content.map(<[usize]>::to_vec).unwrap_or_default();
    let mut out = Vec::new();
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        rows: &mut Vec<Vec<usize>>,
        max: usize,
        left: &mut Vec<usize>,
        constrained: bool,
        out: &mut Vec<Tableau>,
    ) {
        if k == cells.len() {
            out.push(Tableau { rows: rows.clone() });
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { rows[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { rows[i - 1][j] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=max {
            if constrained {
                if left[v - 1] == 0 {
                    continue;
                }
                left[v - 1] -= 1;
            }
            rows[i][j] = v;
            rec(k + 1, cells, rows, max, left, constrained, out);
            if constrained {
                left[v - 1] += 1;
            }
        }
    }
    let constrained = content.is_some();
    rec(0, &cells, &mut rows, max, &mut left, constrained, &mut out);
    out
}

/// Semistandard tableaux of `shape` with entries at most `max`.
pub fn ssyt(shape: &Partition, max: usize) -> Vec<Tableau> {
    fill_tableaux(shape, max, None)
}

/// Semistandard tableaux of `shape` with content `content`.
pub fn ssyt_with_content(shape: &Partition, content: &Partition) -> Vec<Tableau> {
    if shape.size() != content.size() {
        return Vec::new();
    }
    fill_tableaux(shape, content.len(), Some(content.parts()))
}

/// Charge of a word whose content is a partition: split it into standard
/// subwords (scan leftwards, cyclically, for `1, 2, …`) and sum their charges,
/// where in a standard word `r+1` gets the index of `r`, plus one if it
/// lies to the right of `r`.
pub fn charge_of_word(word: &[usize]) -> usize {
    let mut live: Vec<Option<usize>> = word.iter().copied().map(Some).collect();
    let mut total = 0;
    while live.iter().any(Option::is_some) {
        let len = live.len();
        let mut positions = Vec::new();
        let mut cursor = len;
        let mut letter = 1;
        loop {
            // scan leftwards from `cursor - 1`, wrapping once
            let found = (1..=len).map(|s| (cursor + len - s) % len).find(|&i| live[i] == Some(letter));
            match found {
                Some(i) => {
                    positions.push(i);
                    cursor = i;
                    letter += 1;
                }
                None => break,
            }
        }
        let mut index = 0;
        for w in positions.windows(2) {
            if w[1] > w[0] {
                index += 1;
            }
            total += index;
        }
        for &i in &positions {
            live[i] = None;
        }
        if positions.is_empty() {
            break;
        }
    }
    total
}

pub fn charge(t: &Tableau) -> usize {
    charge_of_word(&t.reading_word())
}

/// `K_{μΛ}(t) = Σ t^{charge(T)}` over tableaux of shape `μ` and content `Λ`,
/// stored in the `t` slot of a [`LaurentPoly`].
pub fn kostka_foulkes(shape: &Partition, content: &Partition) -> Result<LaurentPoly> {
    if shape.size() != content.size() {
        return Err(Error::SizeMismatch(shape.size(), content.size()));
    }
    let mut acc = LaurentPoly::zero();
    for t in ssyt_with_content(shape, content) {
        acc = &acc + &LaurentPoly::monomial(ExactRational::one(), (0, charge(&t) as i32));
    }
    Ok(acc)
}

/// Kostka number: chains `∅ ⊂ … ⊂ shape` of horizontal strips of sizes `content_1, content_2, …`.
pub fn kostka_number(shape: &Partition, content: &Partition) -> Result<BigUint> {
    if shape.size() != content.size() {
        return Err(Error::SizeMismatch(shape.size(), content.size()));
    }
    fn rec(shape: &Partition, k: usize, content: &[usize], memo: &mut HashMap<(Partition, usize), BigUint>) -> BigUint {
        if k == 0 {
            return if shape.is_empty() { BigUint::one() } else { BigUint::zero() };
        }
        if let Some(v) = memo.get(&(shape.clone(), k)) {
            return v.clone();
        }
        let Some(want) = shape.size().checked_sub(content[k - 1]) else {
            return BigUint::zero();
        };
        let mut acc = BigUint::zero();
        for inner in horizontal_strips_below(shape) {
            if inner.size() == want {
                acc += rec(&inner, k - 1, content, memo);
            }
        }
        memo.insert((shape.clone(), k), acc.clone());
        acc
    }
    Ok(rec(shape, content.len(), content.parts(), &mut HashMap::new()))
}

/// `s_Λ(x) = Σ_T x^T` over semistandard tableaux with entries at most `len(x)`.
pub fn schur_polynomial(shape: &Partition, x: &[ExactRational]) -> ExactRational {
    ssyt(shape, x.len())
        .iter()
        .map(|t| t.rows.iter().flatten().map(|&v| x[v - 1].clone()).product::<ExactRational>())
        .sum()
}

/// Number of saturated chains `from ↗ … ↗ to` in Young's lattice.
pub fn young_path_count(from: &Partition, to: &Partition) -> Result<BigUint> {
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
    fn dfs(at: &Partition, to: &Partition, memo: &mut HashMap<Partition, BigUint>) -> BigUint {
        if at == to {
            return BigUint::one();
        }
        if let Some(v) = memo.get(at) {
            return v.clone();
        }
        let mut acc = BigUint::zero();
        for step in at.addable_columns() {
            if step.child.is_contained_in(to) {
                acc += dfs(&step.child, to, memo);
            }
        }
        memo.insert(at.clone(), acc.clone());
        acc
    }
    Ok(dfs(from, to, &mut HashMap::new()))
}
