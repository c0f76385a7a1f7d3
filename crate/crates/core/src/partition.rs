//! Integer partitions, Young diagrams and the cover relation of Young's lattice.
//!
//! Diagrams use English convention with 1-based coordinates: the row index
//! grows downwards and the column index grows to the right, so the cell
//! `(i, j)` belongs to `λ` when `1 <= j <= λ_i`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound on the level that [`enumerate_partitions`] will materialize.
pub const DEFAULT_ENUMERATION_CAP: usize = 60;

/// A partition stored as its weakly decreasing sequence of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

/// A cell `(row, col)` of a Young diagram, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

/// Arm, leg and hook length of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hook {
    pub arm: usize,
    pub leg: usize,
    pub hook: usize,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        let size = parts.iter().sum();
        Ok(Partition { parts, size })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]) && !parts.contains(&0));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i` with 1-based `i`; zero beyond the last row.
    pub fn row_len(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Column height `λ'_j` with 1-based `j`; zero beyond the first row.
    pub fn col_len(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.parts.iter().take_while(|&&p| p >= j).count()
    }

    /// The conjugate partition, `λ'_j = #{i : λ_i >= j}`.
    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width).map(|j| self.col_len(j)).collect();
        Partition::from_parts_unchecked(parts)
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_stat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// Multiplicity `m_i(λ)` of the part `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        cell.row >= 1 && cell.col >= 1 && cell.col <= self.row_len(cell.row)
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| Cell::new(i + 1, j)))
    }

    pub fn arm_leg_hook(&self, cell: Cell) -> Result<Hook> {
        if !self.contains_cell(cell) {
            return Err(Error::CellOutsideDiagram {
                row: cell.row,
                col: cell.col,
                partition: self.to_string(),
            });
        }
        let arm = self.row_len(cell.row) - cell.col;
        let leg = self.col_len(cell.col) - cell.row;
        Ok(Hook {
            arm,
            leg,
            hook: arm + leg + 1,
        })
    }

    /// Diagram containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// The partition obtained by adding a cell at the bottom of column `col`,
    /// if that yields a partition.
    pub fn add_to_column(&self, col: usize) -> Option<Partition> {
        if col == 0 {
            return None;
        }
        // the bottom of column `col` sits in row `row`; the cell is addable
        // exactly when that row currently ends one column to the left
        let row = self.col_len(col) + 1;
        if self.row_len(row) != col - 1 {
            return None;
        }
        let mut parts = self.parts.clone();
        if row > parts.len() {
            parts.push(1);
        } else {
            parts[row - 1] += 1;
        }
        Some(Partition::from_parts_unchecked(parts))
    }

    /// Every `Λ` with `λ ↗ Λ`, in increasing column order.
    pub fn addable_columns(&self) -> Vec<CoverStep> {
        let width = self.parts.first().copied().unwrap_or(0);
        (1..=width + 1)
            .filter_map(|col| {
                self.add_to_column(col).map(|child| CoverStep {
                    parent: self.clone(),
                    child,
                    col,
                })
            })
            .collect()
    }

    /// Every `μ` with `μ ↗ λ`, with the column of the removed cell.
    pub fn removable_columns(&self) -> Vec<(Partition, usize)> {
        let mut out = Vec::new();
        for (i, &p) in self.parts.iter().enumerate() {
            if self.parts.get(i + 1).copied().unwrap_or(0) < p {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.pop();
                }
                out.push((Partition::from_parts_unchecked(parts), p));
            }
        }
        out.sort_by_key(|(_, col)| *col);
        out
    }

    /// Product of all hook lengths.
    pub fn hook_product(&self) -> BigUint {
        let conj = self.conjugate();
        self.cells()
            .map(|c| BigUint::from(self.row_len(c.row) - c.col + conj.row_len(c.col) - c.row + 1))
            .product()
    }

    /// `f^λ`, the number of standard Young tableaux, via the hook-length formula.
    pub fn syt_count(&self) -> BigUint {
        let factorial: BigUint = (1..=self.size).map(BigUint::from).product();
        factorial / self.hook_product()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `[5,4,4,1]`, `5,4,4,1` and `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "partition",
            input: s.to_string(),
        };
        let body = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if body.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = body
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| err()))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// An edge `λ ↗ Λ` of Young's lattice together with the column of the added cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverStep {
    pub parent: Partition,
    pub child: Partition,
    pub col: usize,
}

impl CoverStep {
    pub fn new(parent: Partition, col: usize) -> Result<Self> {
        match parent.add_to_column(col) {
            Some(child) => Ok(CoverStep { parent, child, col }),
            None => Err(Error::NotAddable {
                col,
                partition: parent.to_string(),
            }),
        }
    }

    /// Recovers the step from its endpoints.
    pub fn between(parent: &Partition, child: &Partition) -> Result<Self> {
        parent
            .addable_columns()
            .into_iter()
            .find(|s| &s.child == child)
            .ok_or_else(|| Error::NotContained {
                inner: parent.to_string(),
                outer: child.to_string(),
            })
    }

    /// The added cell.
    pub fn added_cell(&self) -> Cell {
        Cell::new(self.parent.col_len(self.col) + 1, self.col)
    }

    /// `(R, C)`: cells of the parent in the same row, resp. column, as the added cell.
    pub fn row_col_sets(&self) -> (Vec<Cell>, Vec<Cell>) {
        let added = self.added_cell();
        let row = (1..=self.parent.row_len(added.row))
            .map(|j| Cell::new(added.row, j))
            .collect();
        let col = (1..=self.parent.col_len(added.col))
            .map(|i| Cell::new(i, added.col))
            .collect();
        (row, col)
    }
}

/// All partitions of `n` in reverse-lexicographic order, bounded by the default cap.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_partitions_capped(n: usize, cap: usize) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_partitions(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill_partitions(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::from_parts_unchecked(current.clone()));
        return;
    }
    for part in (1..=rest.min(max)).rev() {
        current.push(part);
        fill_partitions(rest - part, part, current, out);
        current.pop();
    }
}

/// Every maximal chain `from ↗ … ↗ to`, each as its sequence of steps.
pub fn enumerate_paths(from: &Partition, to: &Partition) -> Result<Vec<Vec<CoverStep>>> {
    if !from.is_contained_in(to) {
        return Err(Error::NotContained {
            inner: from.to_string(),
            outer: to.to_string(),
        });
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    walk_paths(from, to, &mut stack, &mut out);
    Ok(out)
}

fn walk_paths(at: &Partition, to: &Partition, stack: &mut Vec<CoverStep>, out: &mut Vec<Vec<CoverStep>>) {
    if at == to {
        out.push(stack.clone());
        return;
    }
    for step in at.addable_columns() {
        if step.child.is_contained_in(to) {
            let next = step.child.clone();
            stack.push(step);
            walk_paths(&next, to, stack, out);
            stack.pop();
        }
    }
}

/// Partition numbers `p(0..=n)` from Euler's pentagonal recurrence.
pub fn partition_numbers(n: usize) -> Vec<BigUint> {
    let mut p = vec![BigUint::one()];
    for m in 1..=n {
        let mut plus = BigUint::default();
        let mut minus = BigUint::default();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let bucket = if k % 2 == 1 { &mut plus } else { &mut minus };
            *bucket += &p[m - g1];
            if g2 <= m {
                *bucket += &p[m - g2];
            }
        }
        p.push(plus - minus);
    }
    p
}
