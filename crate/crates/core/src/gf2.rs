//! Bit-packed linear algebra over GF(2).
//!
//! Group elements of `C_2^r` and parity-check columns share one
//! representation: an `r`-bit word, added by XOR. A [`GF2Matrix`] stores its
//! columns in that form, so the columns of a parity-check matrix can be read
//! directly as a sequence over the group. Its minimum distance is then the
//! length of the shortest non-empty zero-sum subfamily of the columns, and
//! both sides of that identity are computed here by independent routes.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Length, Result};

/// Largest rank supported by the single-word representation.
pub const MAX_RANK: usize = 63;

/// Codeword masks are single `u64` words.
pub const MAX_CODE_LENGTH: usize = 64;

/// An element of `C_2^r`, stored as an `r`-bit vector. Bits at positions
/// `>= r` are always zero.
///
/// Ordering is by the integer value of the bit pattern, which is the
/// canonical order used for sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    bits: u64,
    rank: u8,
}

impl GroupElement {
    pub fn new(bits: u64, rank: usize) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::InvalidArgument(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        if bits & !rank_mask(rank) != 0 {
            return Err(Error::InvalidArgument(format!(
                "bit pattern {bits:#b} does not fit in rank {rank}"
            )));
        }
        Ok(Self { bits, rank: rank as u8 })
    }

    pub fn zero(rank: usize) -> Self {
        assert!(rank <= MAX_RANK);
        Self { bits: 0, rank: rank as u8 }
    }

    /// The `i`-th standard basis vector `e_{i+1}`.
    pub fn basis(rank: usize, i: usize) -> Self {
        assert!(i < rank && rank <= MAX_RANK, "basis index {i} out of range for rank {rank}");
        Self { bits: 1 << i, rank: rank as u8 }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn rank(self) -> usize {
        self.rank as usize
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }
}

impl Add for GroupElement {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.rank, rhs.rank, "adding elements of different groups");
        Self { bits: self.bits ^ rhs.bits, rank: self.rank }
    }
}

impl AddAssign for GroupElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

pub(crate) fn rank_mask(rank: usize) -> u64 {
    if rank >= 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

/// Incremental XOR basis keyed by leading bit.
#[derive(Clone)]
pub(crate) struct XorBasis {
    pivots: [u64; 64],
    len: usize,
}

impl XorBasis {
    pub(crate) fn new() -> Self {
        Self { pivots: [0; 64], len: 0 }
    }

    pub(crate) fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if self.pivots[top] == 0 {
                break;
            }
            v ^= self.pivots[top];
        }
        v
    }

    /// Adds `v`; returns false if it was already in the span.
    pub(crate) fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.pivots[63 - v.leading_zeros() as usize] = v;
        self.len += 1;
        true
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }
}

fn rank_of_words(words: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = XorBasis::new();
    for w in words {
        basis.insert(w);
    }
    basis.len()
}

/// Dense `rows x cols` matrix over GF(2), stored column by column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: Vec<u64>,
}

impl GF2Matrix {
    /// Builds a matrix from column bit patterns (bit `i` = row `i`).
    pub fn new(rows: usize, cols: Vec<u64>) -> Result<Self> {
        if rows > MAX_RANK {
            return Err(Error::InvalidArgument(format!("{rows} rows exceeds {MAX_RANK}")));
        }
        let mask = rank_mask(rows);
        if let Some((i, c)) = cols.iter().enumerate().find(|(_, &c)| c & !mask != 0) {
            return Err(Error::InvalidArgument(format!("column {i} ({c:#b}) has bits beyond row {rows}")));
        }
        Ok(Self { rows, cols })
    }

    pub fn from_columns(rows: usize, cols: &[GroupElement]) -> Result<Self> {
        if let Some(c) = cols.iter().find(|c| c.rank() != rows) {
            return Err(Error::InvalidArgument(format!(
                "column of rank {} in a matrix with {rows} rows",
                c.rank()
            )));
        }
        Self::new(rows, cols.iter().map(|c| c.bits()).collect())
    }

    pub fn identity(r: usize) -> Self {
        Self::new(r, (0..r).map(|i| 1u64 << i).collect()).expect("identity fits")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, vec![0; cols]).expect("zero matrix fits")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column_words(&self) -> &[u64] {
        &self.cols
    }

    pub fn column(&self, j: usize) -> GroupElement {
        GroupElement { bits: self.cols[j], rank: self.rows as u8 }
    }

    pub fn columns(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.cols()).map(|j| self.column(j))
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows);
        (self.cols[col] >> row) & 1 == 1
    }

    /// Row `i` as a bit pattern over the columns (requires at most 64 columns).
    fn row_word(&self, i: usize) -> u64 {
        self.cols
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &c)| acc | (((c >> i) & 1) << j))
    }

    pub fn transpose(&self) -> Result<Self> {
        if self.cols() > MAX_RANK {
            return Err(Error::InvalidArgument(format!(
                "transpose needs at most {MAX_RANK} columns, have {}",
                self.cols()
            )));
        }
        Self::new(self.cols(), (0..self.rows).map(|i| self.row_word(i)).collect())
    }

    /// Dimension of the column space.
    pub fn rank(&self) -> usize {
        rank_of_words(self.cols.iter().copied())
    }

    /// All elements of the column span, ascending. Exponential in the rank;
    /// meant for small test-scale matrices.
    pub fn column_span(&self) -> Vec<u64> {
        let mut basis = Vec::new();
        let mut xb = XorBasis::new();
        for &c in &self.cols {
            if xb.insert(c) {
                basis.push(c);
            }
        }
        let mut out: Vec<u64> = (0u64..1 << basis.len())
            .map(|sel| {
                basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sel >> i & 1 == 1)
                    .fold(0, |a, (_, &b)| a ^ b)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Basis of the null space `{x : H x = 0}`, each vector a mask over the
    /// columns.
    pub fn null_space_basis(&self) -> Result<Vec<u64>> {
        let n = self.cols();
        if n > MAX_CODE_LENGTH {
            return Err(Error::InvalidArgument(format!(
                "code length {n} exceeds {MAX_CODE_LENGTH}"
            )));
        }
        // Reduced row echelon form on the row words.
        let mut rows: Vec<u64> = (0..self.rows).map(|i| self.row_word(i)).collect();
        let mut pivots: Vec<(usize, u64)> = Vec::new();
        let mut next = 0;
        for col in 0..n {
            let bit = 1u64 << col;
            let Some(p) = (next..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != next && *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            pivots.push((col, 0));
            next += 1;
        }
        for (k, p) in pivots.iter_mut().enumerate() {
            p.1 = rows[k];
        }
        let pivot_mask = pivots.iter().fold(0u64, |m, &(c, _)| m | 1 << c);
        Ok((0..n)
            .filter(|&f| pivot_mask >> f & 1 == 0)
            .map(|f| {
                pivots
                    .iter()
                    .filter(|(_, row)| row >> f & 1 == 1)
                    .fold(1u64 << f, |x, &(c, _)| x | 1 << c)
            })
            .collect())
    }

    /// Visits every codeword of the code with this parity-check matrix (the
    /// zero word included) in Gray-code order. Returns the number visited.
    pub fn for_each_codeword(&self, limits: &WorkLimits, mut visit: impl FnMut(u64)) -> Result<u64> {
        let basis = self.null_space_basis()?;
        let k = basis.len();
        let count = 1u128 << k;
        if count > limits.max_codewords as u128 {
            return Err(Error::WorkLimit {
                what: "codeword enumeration",
                needed: count,
                limit: limits.max_codewords,
            });
        }
        let mut word = 0u64;
        visit(word);
        for i in 1u64..(1u64 << k) {
            word ^= basis[i.trailing_zeros() as usize];
            visit(word);
        }
        Ok(count as u64)
    }
}

/// Dump format: one row per line, `0`/`1` characters, no separators.
impl fmt::Display for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols() {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for GF2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let n = lines.first().map_or(0, |l| l.len());
        let mut cols = vec![0u64; n];
        for (i, line) in lines.iter().enumerate() {
            if line.len() != n {
                return Err(Error::InvalidArgument(format!("row {i} has length {}, expected {n}", line.len())));
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => cols[j] |= 1 << i,
                    other => return Err(Error::InvalidArgument(format!("unexpected character {other:?}"))),
                }
            }
        }
        Self::new(lines.len(), cols)
    }
}

/// Explicit work limits. Exceeding one is an error, never an approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkLimits {
    pub max_codewords: u64,
    pub max_subsets: u64,
}

impl Default for WorkLimits {
    fn default() -> Self {
        Self { max_codewords: 1 << 28, max_subsets: 1 << 24 }
    }
}

/// How [`min_distance_with`] computes the distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceStrategy {
    /// Null-space enumeration when it fits the codeword limit, otherwise the
    /// column-subset search.
    Auto,
    NullSpace,
    ColumnSubsets,
}

/// Minimum weight of a non-zero codeword of `{x : h x = 0}`; infinite for
/// the zero code.
pub fn min_distance(h: &GF2Matrix, limits: &WorkLimits) -> Result<Length> {
    min_distance_with(h, DistanceStrategy::Auto, limits)
}

pub fn min_distance_with(h: &GF2Matrix, strategy: DistanceStrategy, limits: &WorkLimits) -> Result<Length> {
    let n = h.cols();
    if n > MAX_CODE_LENGTH {
        return Err(Error::InvalidArgument(format!("code length {n} exceeds {MAX_CODE_LENGTH}")));
    }
    match strategy {
        DistanceStrategy::NullSpace => null_space_distance(h, limits),
        DistanceStrategy::ColumnSubsets => min_zero_sum_words(h.column_words(), limits),
        DistanceStrategy::Auto => match null_space_distance(h, limits) {
            Err(Error::WorkLimit { .. }) => min_zero_sum_words(h.column_words(), limits),
            other => other,
        },
    }
}

fn null_space_distance(h: &GF2Matrix, limits: &WorkLimits) -> Result<Length> {
    let mut best = u32::MAX;
    h.for_each_codeword(limits, |w| {
        if w != 0 {
            best = best.min(w.count_ones());
        }
    })?;
    Ok(if best == u32::MAX { Length::Infinite } else { Length::Finite(best as u64) })
}

/// Length of the shortest non-empty subfamily of `cols` summing to zero;
/// infinite exactly when the columns are linearly independent.
pub fn min_zero_sum_length(cols: &[GroupElement], limits: &WorkLimits) -> Result<Length> {
    if let Some(first) = cols.first() {
        if cols.iter().any(|c| c.rank() != first.rank()) {
            return Err(Error::InvalidArgument("columns from different groups".into()));
        }
    }
    let words: Vec<u64> = cols.iter().map(|c| c.bits()).collect();
    min_zero_sum_words(&words, limits)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn min_zero_sum_words(words: &[u64], limits: &WorkLimits) -> Result<Length> {
    let n = words.len();
    if n > MAX_CODE_LENGTH {
        return Err(Error::InvalidArgument(format!("{n} columns exceeds {MAX_CODE_LENGTH}")));
    }
    let rank = rank_of_words(words.iter().copied());
    if rank == n {
        return Ok(Length::Infinite);
    }
    // Any rank + 1 columns are dependent, so the loop terminates by then.
    for w in 1..=rank + 1 {
        if zero_sum_of_size(words, w, limits)? {
            return Ok(Length::Finite(w as u64));
        }
    }
    unreachable!("dependent columns always contain a zero-sum of size at most rank + 1")
}

/// Whether some `w`-subset sums to zero, assuming none of size `< w` does.
fn zero_sum_of_size(words: &[u64], w: usize, limits: &WorkLimits) -> Result<bool> {
    let n = words.len();
    let check = |needed: u128| -> Result<()> {
        if needed > limits.max_subsets as u128 {
            Err(Error::WorkLimit { what: "column-subset search", needed, limit: limits.max_subsets })
        } else {
            Ok(())
        }
    };
    match w {
        1 => Ok(words.contains(&0)),
        2 => {
            let mut seen = HashSet::with_capacity(n);
            Ok(!words.iter().all(|w| seen.insert(*w)))
        }
        3 => {
            check(binomial(n, 3))?;
            for a in 0..n {
                for b in a + 1..n {
                    let s = words[a] ^ words[b];
                    if words[b + 1..].contains(&s) {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        4 => {
            check(binomial(n, 4))?;
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let s = words[a] ^ words[b] ^ words[c];
                        if words[c + 1..].contains(&s) {
                            return Ok(true);
                        }
                    }
                }
            }
            Ok(false)
        }
        _ => {
            // Meet in the middle: with no shorter zero-sum, two distinct
            // subsets of sizes ceil(w/2) and floor(w/2) with equal sums have a
            // symmetric difference that is a zero-sum of size exactly w.
            let big = w.div_ceil(2);
            let small = w / 2;
            check(binomial(n, big) + if big == small { 0 } else { binomial(n, small) })?;
            let mut sums = HashSet::new();
            if big == small {
                let mut found = false;
                for_each_subset_sum(words, big, &mut |s| {
                    found = !sums.insert(s);
                    found
                });
                return Ok(found);
            }
            for_each_subset_sum(words, small, &mut |s| {
                sums.insert(s);
                false
            });
            let mut found = false;
            for_each_subset_sum(words, big, &mut |s| {
                found = sums.contains(&s);
                found
            });
            Ok(found)
        }
    }
}

/// Calls `f` with the XOR of every `k`-subset; stops early when `f` returns true.
fn for_each_subset_sum(words: &[u64], k: usize, f: &mut dyn FnMut(u64) -> bool) -> bool {
    fn go(words: &[u64], start: usize, left: usize, acc: u64, f: &mut dyn FnMut(u64) -> bool) -> bool {
        if left == 0 {
            return f(acc);
        }
        for i in start..=words.len() - left {
            if go(words, i + 1, left - 1, acc ^ words[i], f) {
                return true;
            }
        }
        false
    }
    k <= words.len() && go(words, 0, k, 0, f)
}

/// A uniformly drawn full-rank `r x n` parity-check matrix; deterministic in
/// `seed`.
pub fn random_parity_matrix(r: usize, n: usize, seed: u64) -> Result<GF2Matrix> {
    if r == 0 || n < r {
        return Err(Error::InvalidArgument(format!("need n >= r >= 1, got r = {r}, n = {n}")));
    }
    if r > MAX_RANK || n > MAX_CODE_LENGTH {
        return Err(Error::InvalidArgument(format!(
            "dimensions {r}x{n} exceed {MAX_RANK}x{MAX_CODE_LENGTH}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = rank_mask(r);
    loop {
        let cols: Vec<u64> = (0..n).map(|_| rng.random::<u64>() & mask).collect();
        if rank_of_words(cols.iter().copied()) == r {
            return GF2Matrix::new(r, cols);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(rank: usize, bits: u64) -> GroupElement {
        GroupElement::new(bits, rank).unwrap()
    }

    #[test]
    fn element_arithmetic() {
        let x = e(3, 0b101);
        assert!((x + x).is_zero());
        assert_eq!(x + GroupElement::basis(3, 1), e(3, 0b111));
        assert!(GroupElement::new(0b1000, 3).is_err());
        assert!(GroupElement::new(1, 64).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(GF2Matrix::identity(4).rank(), 4);
        assert_eq!(GF2Matrix::zeros(3, 5).rank(), 0);
        assert_eq!(GF2Matrix::new(3, vec![0b001, 0b010, 0b011]).unwrap().rank(), 2);
    }

    #[test]
    fn dump_roundtrip() {
        let m = GF2Matrix::new(3, vec![0b001, 0b110, 0b011, 0b000]).unwrap();
        let dump = m.to_string();
        assert_eq!(dump, "1010\n0110\n0100\n");
        assert_eq!(dump.parse::<GF2Matrix>().unwrap(), m);
        assert!("10\n1".parse::<GF2Matrix>().is_err());
        assert!("1x".parse::<GF2Matrix>().is_err());
    }

    #[test]
    fn transpose_preserves_rank() {
        let m = random_parity_matrix(5, 9, 3).unwrap();
        let t = m.transpose().unwrap();
        assert_eq!(t.rows(), 9);
        assert_eq!(t.cols(), 5);
        assert_eq!(t.rank(), m.rank());
        assert_eq!(t.transpose().unwrap(), m);
    }

    #[test]
    fn hamming_code_distance() {
        // All seven non-zero vectors of C_2^3: the [7,4,3] Hamming code.
        let h = GF2Matrix::new(3, (1..8).collect()).unwrap();
        let limits = WorkLimits::default();
        assert_eq!(min_distance(&h, &limits).unwrap(), Length::Finite(3));
        assert_eq!(min_distance_with(&h, DistanceStrategy::ColumnSubsets, &limits).unwrap(), Length::Finite(3));
        assert_eq!(h.for_each_codeword(&limits, |_| {}).unwrap(), 16);
    }

    #[test]
    fn distance_edge_cases() {
        let limits = WorkLimits::default();
        assert_eq!(min_distance(&GF2Matrix::identity(4), &limits).unwrap(), Length::Infinite);
        let h = GF2Matrix::new(2, vec![0b01, 0b00, 0b10]).unwrap();
        assert_eq!(min_distance(&h, &limits).unwrap(), Length::Finite(1));
    }

    #[test]
    fn zero_sum_examples() {
        let limits = WorkLimits::default();
        let b = |i| GroupElement::basis(3, i);
        assert_eq!(min_zero_sum_length(&[b(0), b(0)], &limits).unwrap(), Length::Finite(2));
        assert_eq!(min_zero_sum_length(&[b(0), b(1), b(2)], &limits).unwrap(), Length::Infinite);
        assert_eq!(
            min_zero_sum_length(&[b(0), b(1), b(0) + b(1), b(2)], &limits).unwrap(),
            Length::Finite(3)
        );
        assert_eq!(min_zero_sum_length(&[], &limits).unwrap(), Length::Infinite);
    }

    #[test]
    fn meet_in_the_middle_sizes() {
        // Shortest zero-sums of sizes 5, 6, 7: a basis plus the all-ones vector.
        let limits = WorkLimits::default();
        for r in 4..=6 {
            let mut cols: Vec<GroupElement> = (0..r).map(|i| GroupElement::basis(r, i)).collect();
            cols.push(e(r, rank_mask(r)));
            assert_eq!(min_zero_sum_length(&cols, &limits).unwrap(), Length::Finite(r as u64 + 1));
        }
    }

    #[test]
    fn work_limits_are_errors() {
        let tight = WorkLimits { max_codewords: 4, max_subsets: 10 };
        let h = GF2Matrix::new(3, (1..8).collect()).unwrap();
        assert!(matches!(
            min_distance_with(&h, DistanceStrategy::NullSpace, &tight),
            Err(Error::WorkLimit { .. })
        ));
        assert!(matches!(min_distance(&h, &tight), Err(Error::WorkLimit { .. })));
    }

    #[test]
    fn random_matrix_contract() {
        let m = random_parity_matrix(3, 5, 1).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m, random_parity_matrix(3, 5, 1).unwrap());
        assert!(random_parity_matrix(3, 2, 1).is_err());
        assert!(random_parity_matrix(0, 2, 1).is_err());
    }

    #[test]
    fn null_space_is_annihilated() {
        for seed in 0..20 {
            let h = random_parity_matrix(4, 10, seed).unwrap();
            let basis = h.null_space_basis().unwrap();
            assert_eq!(basis.len(), 10 - h.rank());
            for x in basis {
                let syndrome = (0..10).filter(|j| x >> j & 1 == 1).fold(0, |s, j| s ^ h.column_words()[j]);
                assert_eq!(syndrome, 0);
            }
        }
    }
}
