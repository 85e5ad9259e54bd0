//! Exhaustive oracles over `C_2^r` for small ranks.
//!
//! - [`max_disjoint_zero_sums`]: the largest family of pairwise disjoint
//!   non-empty zero-sum subsequences of a sequence.
//! - [`davenport_exact`]: `D_j(C_2^r)`, the least `l` such that every sequence
//!   of length `l` has `j` disjoint non-empty zero-sum subsequences.
//! - [`bounded_constant_exact`]: `s_{<=d}(C_2^r)`, the least `l` such that
//!   every sequence of length `l` has a non-empty zero-sum subsequence of
//!   length at most `d`.
//! - [`eqrec_combine`]: the recursive upper bound
//!   `D_{j+1} <= min_i max{D_j + i, s_{<=i} - 1}`.
//!
//! Both searches assume the extremal sequence spans the group. A sequence
//! that does not can be extended by an element outside its span without
//! creating new zero-sums, so the longest admissible sequences span, and up
//! to a change of basis they contain the standard basis. The searches start
//! from that basis and add the remaining elements in non-decreasing order.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf2::{GroupElement, XorBasis, MAX_RANK};
use crate::{Error, Length, Result};

/// Hard ceiling on sequence length for the position-subset DP (masks are `u32`).
const DP_HARD_MAX: usize = 32;

/// A finite sequence over `C_2^r`, kept in canonical (ascending) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence {
    rank: usize,
    elements: Vec<GroupElement>,
}

impl Sequence {
    pub fn new(rank: usize, mut elements: Vec<GroupElement>) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::InvalidArgument(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        if let Some(g) = elements.iter().find(|g| g.rank() != rank) {
            return Err(Error::InvalidArgument(format!(
                "element of rank {} in a sequence over rank {rank}",
                g.rank()
            )));
        }
        elements.sort_unstable();
        Ok(Self { rank, elements })
    }

    pub fn from_bits(rank: usize, bits: &[u64]) -> Result<Self> {
        let elements = bits
            .iter()
            .map(|&b| GroupElement::new(b, rank))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rank, elements)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn bits(&self) -> Vec<u64> {
        self.elements.iter().map(|g| g.bits()).collect()
    }

    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        if self.rank != other.rank {
            return Err(Error::InvalidArgument("concatenating sequences over different groups".into()));
        }
        Sequence::new(self.rank, self.elements.iter().chain(&other.elements).copied().collect())
    }
}

/// Maximum number of disjoint zero-sum subsequences, with one witness family.
/// Index sets refer to positions in the canonical sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub max_disjoint: usize,
    pub witness: Vec<Vec<usize>>,
}

/// Search limits for the oracles. Exceeding one is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub dp_max_len: usize,
    pub davenport_max_rank: usize,
    pub davenport_max_j: usize,
    pub sconst_max_rank: usize,
    pub node_budget: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            dp_max_len: 22,
            davenport_max_rank: 4,
            davenport_max_j: 4,
            sconst_max_rank: 5,
            node_budget: 200_000_000,
        }
    }
}

/// Minimal zero-sum position sets (circuits). A circuit with largest index
/// `m` is an independent set `I` of smaller indices together with an `m`
/// whose element equals the sum of `I`, so each is produced exactly once.
fn circuits(elements: &[u64]) -> Vec<u32> {
    fn grow(elements: &[u64], start: usize, mask: u32, sum: u64, basis: &XorBasis, out: &mut Vec<u32>) {
        for (m, &x) in elements.iter().enumerate().skip(start) {
            if x == sum {
                out.push(mask | 1 << m);
            }
        }
        for (i, &x) in elements.iter().enumerate().skip(start) {
            let mut next = basis.clone();
            if next.insert(x) {
                grow(elements, i + 1, mask | 1 << i, sum ^ x, &next, out);
            }
        }
    }
    let mut out = Vec::new();
    grow(elements, 0, 0, 0, &XorBasis::new(), &mut out);
    out
}

/// Disjoint packing of circuits, memoized on the set of unused positions.
struct Packing {
    by_lowest: Vec<Vec<u32>>,
    memo: HashMap<u32, u8>,
    cap: u8,
}

impl Packing {
    fn new(elements: &[u64], cap: usize) -> Self {
        let mut by_lowest = vec![Vec::new(); elements.len()];
        for c in circuits(elements) {
            by_lowest[c.trailing_zeros() as usize].push(c);
        }
        Self { by_lowest, memo: HashMap::new(), cap: cap.min(u8::MAX as usize) as u8 }
    }

    /// Packing size within `set`, truncated at `cap`. Any zero-sum contains a
    /// circuit, so circuits suffice. Either the lowest position is unused, or
    /// it lies in a circuit of the packing; dropping one position loses at
    /// most one member, which bounds the first branch from above.
    fn best(&mut self, set: u32) -> u8 {
        if set == 0 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&set) {
            return v;
        }
        let low = set.trailing_zeros() as usize;
        let without = self.best(set & (set - 1));
        let mut value = without;
        if without < self.cap {
            for idx in 0..self.by_lowest[low].len() {
                let c = self.by_lowest[low][idx];
                if c & set == c {
                    let v = 1 + self.best(set ^ c);
                    if v > value {
                        value = v;
                        if value > without || value >= self.cap {
                            break;
                        }
                    }
                }
            }
        }
        let value = value.min(self.cap);
        self.memo.insert(set, value);
        value
    }

    /// Re-derives one optimal family from the memoized values.
    fn witness(&mut self, mut set: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while set != 0 {
            let target = self.best(set);
            if target == 0 {
                break;
            }
            let low = set.trailing_zeros() as usize;
            if self.best(set & (set - 1)) == target {
                set &= set - 1;
                continue;
            }
            let chosen = self.by_lowest[low]
                .clone()
                .into_iter()
                .find(|&c| c & set == c && 1 + self.best(set ^ c) == target)
                .expect("optimal value is attained by some circuit");
            out.push(chosen);
            set ^= chosen;
        }
        out
    }
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Number of disjoint zero-sums among `elements`, truncated at `cap`.
pub(crate) fn max_disjoint_capped(elements: &[u64], cap: usize) -> usize {
    assert!(elements.len() <= DP_HARD_MAX);
    Packing::new(elements, cap).best(full_mask(elements.len())) as usize
}

pub fn max_disjoint_zero_sums(s: &Sequence, limits: &OracleLimits) -> Result<DecompositionReport> {
    let max_len = limits.dp_max_len.min(DP_HARD_MAX);
    if s.len() > max_len {
        return Err(Error::InvalidArgument(format!(
            "sequence length {} exceeds the DP limit {max_len}",
            s.len()
        )));
    }
    let words = s.bits();
    let mut packing = Packing::new(&words, usize::MAX);
    let all = full_mask(words.len());
    let max_disjoint = packing.best(all) as usize;
    let witness = packing
        .witness(all)
        .into_iter()
        .map(|m| (0..words.len()).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    Ok(DecompositionReport { max_disjoint, witness })
}

/// Exact value of an oracle search together with an extremal sequence of
/// length `value - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DavenportResult {
    pub r: usize,
    pub j: usize,
    pub value: u64,
    pub witness: Vec<u64>,
}

struct DavenportSearch<'a> {
    r: usize,
    j: usize,
    max_multiplicity: u8,
    limits: &'a OracleLimits,
    nodes: &'a AtomicU64,
}

impl DavenportSearch<'_> {
    fn dfs(&self, seq: &mut Vec<u64>, counts: &mut [u8], from: u64, best: &mut Vec<u64>) -> Result<()> {
        for x in from..1u64 << self.r {
            if counts[x as usize] >= self.max_multiplicity {
                continue;
            }
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limits.node_budget {
                return Err(Error::Budget { what: "davenport_exact", limit: self.limits.node_budget });
            }
            seq.push(x);
            if seq.len() > self.limits.dp_max_len.min(DP_HARD_MAX) {
                return Err(Error::InvalidArgument(format!(
                    "candidate length {} exceeds the DP limit {}",
                    seq.len(),
                    self.limits.dp_max_len
                )));
            }
            // Admissibility is closed under taking subsequences, so a failing
            // prefix cuts the whole subtree.
            if max_disjoint_capped(seq, self.j) < self.j {
                if better(seq, best) {
                    *best = canonical(seq);
                }
                counts[x as usize] += 1;
                let res = self.dfs(seq, counts, x, best);
                counts[x as usize] -= 1;
                res?;
            }
            seq.pop();
        }
        Ok(())
    }
}

fn canonical(seq: &[u64]) -> Vec<u64> {
    let mut v = seq.to_vec();
    v.sort_unstable();
    v
}

/// Longer wins; ties go to the lexicographically smaller canonical form.
fn better(candidate: &[u64], incumbent: &[u64]) -> bool {
    candidate.len() > incumbent.len()
        || (candidate.len() == incumbent.len() && canonical(candidate).as_slice() < incumbent)
}

/// Exact `D_j(C_2^r)` by exhaustive search.
///
/// Top-level branches run in parallel; every branch is searched in full, so
/// the result and the node count do not depend on scheduling.
pub fn davenport_exact(r: usize, j: usize, limits: &OracleLimits) -> Result<DavenportResult> {
    if r == 0 || j == 0 {
        return Err(Error::InvalidArgument(format!("need r >= 1 and j >= 1, got r = {r}, j = {j}")));
    }
    if r > limits.davenport_max_rank || j > limits.davenport_max_j {
        return Err(Error::InvalidArgument(format!(
            "(r, j) = ({r}, {j}) outside the configured oracle range r <= {}, j <= {}",
            limits.davenport_max_rank, limits.davenport_max_j
        )));
    }
    // 2j copies of one element hold j disjoint pairs.
    let max_multiplicity = (2 * j - 1).min(u8::MAX as usize) as u8;
    let nodes = AtomicU64::new(0);
    let search = DavenportSearch { r, j, max_multiplicity, limits, nodes: &nodes };
    let basis: Vec<u64> = (0..r).map(|i| 1u64 << i).collect();

    let branches: Vec<Result<Vec<u64>>> = (0..1u64 << r)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0u8; 1 << r];
            for &b in &basis {
                counts[b as usize] += 1;
            }
            let mut best = canonical(&basis);
            if counts[first as usize] >= max_multiplicity {
                return Ok(best);
            }
            let mut seq = basis.clone();
            seq.push(first);
            if max_disjoint_capped(&seq, j) < j {
                best = canonical(&seq);
                counts[first as usize] += 1;
                search.dfs(&mut seq, &mut counts, first, &mut best)?;
            }
            Ok(best)
        })
        .collect();

    let mut best = canonical(&basis);
    for branch in branches {
        let candidate = branch?;
        if better(&candidate, &best) {
            best = candidate;
        }
    }
    Ok(DavenportResult { r, j, value: best.len() as u64 + 1, witness: best })
}

/// Exact `s_{<=d}(C_2^r)` with an extremal set of length `value - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SConstResult {
    pub r: usize,
    pub d: usize,
    pub value: u64,
    pub witness: Vec<u64>,
}

/// Exact `s_{<=d}(C_2^r)` for `d >= 2`.
///
/// With `d >= 2` an extremal sequence has neither `0` nor repeated elements,
/// so the search runs over subsets of the non-zero elements. Branch and
/// bound: candidates are taken in increasing order and a branch is cut when
/// even every remaining allowed candidate cannot beat the incumbent.
pub fn bounded_constant_exact(r: usize, d: usize, limits: &OracleLimits) -> Result<SConstResult> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "d = {d}: s_{{<=d}} is only finite for d >= 2 (a zero-sum of length 1 needs the element 0)"
        )));
    }
    if r == 0 || r > limits.sconst_max_rank {
        return Err(Error::InvalidArgument(format!(
            "rank {r} outside the configured range 1..={}",
            limits.sconst_max_rank
        )));
    }
    let size = 1usize << r;
    // reach[k][y]: y is a sum of exactly k distinct chosen elements, k < d.
    let depth = (d - 1).min(size);
    let mut reach = vec![vec![false; size]; depth + 1];
    reach[0][0] = true;
    let mut chosen = Vec::new();
    for i in 0..r {
        add_element(&mut reach, 1 << i);
        chosen.push(1u64 << i);
    }
    let candidates: Vec<u64> = (1..size as u64).filter(|x| !x.is_power_of_two()).collect();
    let mut best = chosen.clone();
    let mut nodes = 0u64;
    sconst_dfs(&candidates, 0, &mut reach, &mut chosen, &mut best, &mut nodes, limits)?;
    best.sort_unstable();
    Ok(SConstResult { r, d, value: best.len() as u64 + 1, witness: best })
}

fn add_element(reach: &mut [Vec<bool>], x: u64) {
    for k in (1..reach.len()).rev() {
        let (lower, upper) = reach.split_at_mut(k);
        let prev = &lower[k - 1];
        for (y, slot) in upper[0].iter_mut().enumerate() {
            if prev[y ^ x as usize] {
                *slot = true;
            }
        }
    }
}

/// Whether `x` is a sum of between 1 and d-1 chosen elements, i.e. adding it
/// would close a zero-sum of length at most d.
fn forbidden(reach: &[Vec<bool>], x: u64) -> bool {
    reach.iter().skip(1).any(|level| level[x as usize])
}

fn sconst_dfs(
    candidates: &[u64],
    from: usize,
    reach: &mut Vec<Vec<bool>>,
    chosen: &mut Vec<u64>,
    best: &mut Vec<u64>,
    nodes: &mut u64,
    limits: &OracleLimits,
) -> Result<()> {
    let allowed: Vec<u64> = candidates[from..].iter().copied().filter(|&x| !forbidden(reach, x)).collect();
    if chosen.len() + allowed.len() <= best.len() {
        return Ok(());
    }
    for (pos, &x) in allowed.iter().enumerate() {
        if chosen.len() + allowed.len() - pos <= best.len() {
            break;
        }
        *nodes += 1;
        if *nodes > limits.node_budget {
            return Err(Error::Budget { what: "bounded_constant_exact", limit: limits.node_budget });
        }
        if forbidden(reach, x) {
            continue;
        }
        let saved = reach.clone();
        add_element(reach, x);
        chosen.push(x);
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        let next = candidates.iter().position(|&c| c == x).expect("candidate") + 1;
        sconst_dfs(candidates, next, reach, chosen, best, nodes, limits)?;
        chosen.pop();
        *reach = saved;
    }
    Ok(())
}

/// `min_i max{dj + i, s_{<=i} - 1}` over the supplied table: an upper bound
/// for `D_{j+1}` whenever `dj` bounds `D_j` and the table entries bound
/// `s_{<=i}` from above.
pub fn eqrec_combine(dj: u64, s_table: &BTreeMap<u64, Length>) -> Result<Length> {
    if s_table.is_empty() {
        return Err(Error::InvalidArgument("empty s-table".into()));
    }
    Ok(s_table
        .iter()
        .map(|(&i, &s)| match s {
            Length::Finite(s) => Length::Finite((dj + i).max(s.saturating_sub(1))),
            Length::Infinite => Length::Infinite,
        })
        .min()
        .expect("non-empty"))
}

/// The exact `s_{<=d}(C_2^r)` for `d = 2..=r+1`; larger `d` add nothing since
/// the value is constant from `r + 1` on.
pub fn exact_s_table(r: usize, limits: &OracleLimits) -> Result<BTreeMap<u64, Length>> {
    (2..=r + 1)
        .map(|d| Ok((d as u64, Length::Finite(bounded_constant_exact(r, d, limits)?.value))))
        .collect()
}
