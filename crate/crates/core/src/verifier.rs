//! Exhaustive verification of the separation property.
//!
//! Column families are enumerated in canonical form (equal-size parts ordered
//! by their minimum), so each unordered family is visited exactly once, in
//! lexicographic order of its flat encoding. Parallel runs split that order
//! into chunks by the first part and merge the chunk results in order, which
//! keeps verdicts and witnesses identical for every thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::Zero;
use rayon::prelude::*;

use crate::bigcomb::{factorial, multinomial, t_function, BigCount};
use crate::error::{domain, Result};
use crate::model::{check_type_fits, ColumnFamily, RepMatrix, RowWeight, ShfType, Symbol};

/// Outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    /// First unseparated family in canonical order; present iff `!ok`.
    pub witness: Option<ColumnFamily>,
    /// The closed-form family count when `ok`, otherwise the 1-based rank of
    /// the witness in canonical order.
    pub families_checked: BigCount,
}

/// Depth-first cursor over canonical column families.
///
/// The current family is kept as a flat list of columns, part after part.
/// A prefix of positions may be pinned, in which case only families sharing
/// that prefix are produced.
#[derive(Debug, Clone)]
pub(crate) struct FamilyCursor {
    n: usize,
    blocks: Vec<usize>,
    /// Flat position at which each position's part starts.
    part_start: Vec<usize>,
    /// Flat start of the previous part when it has the same size.
    sibling_start: Vec<Option<usize>>,
    /// Last flat position of each position's part.
    part_end: Vec<usize>,
    chosen: Vec<usize>,
    used: Vec<bool>,
    pinned: usize,
    started: bool,
    done: bool,
}

impl FamilyCursor {
    /// `blocks` must be sorted ascending with every entry positive.
    pub(crate) fn new(n: usize, blocks: &[usize]) -> Self {
        let u: usize = blocks.iter().sum();
        let mut part_start = Vec::with_capacity(u);
        let mut part_end = Vec::with_capacity(u);
        let mut sibling_start = Vec::with_capacity(u);
        let mut at = 0;
        let mut prev: Option<(usize, usize)> = None;
        for &b in blocks {
            let sib = prev.filter(|&(size, _)| size == b).map(|(_, start)| start);
            for _ in 0..b {
                part_start.push(at);
                part_end.push(at + b - 1);
                sibling_start.push(sib);
            }
            prev = Some((b, at));
            at += b;
        }
        FamilyCursor {
            n,
            blocks: blocks.to_vec(),
            part_start,
            sibling_start,
            part_end,
            chosen: vec![0; u],
            used: vec![false; n],
            pinned: 0,
            started: false,
            done: u > n,
        }
    }

    /// Restricts the cursor to families whose first part is `first`
    /// (sorted ascending, of size `blocks[0]`).
    pub(crate) fn with_first_part(n: usize, blocks: &[usize], first: &[usize]) -> Self {
        let mut cursor = FamilyCursor::new(n, blocks);
        debug_assert_eq!(first.len(), blocks[0]);
        for (pos, &c) in first.iter().enumerate() {
            cursor.chosen[pos] = c;
            cursor.used[c] = true;
        }
        cursor.pinned = first.len();
        cursor
    }

    pub(crate) fn current(&self) -> &[usize] {
        &self.chosen
    }

    fn lower_bound(&self, pos: usize) -> usize {
        if pos == self.part_start[pos] {
            match self.sibling_start[pos] {
                Some(s) => self.chosen[s] + 1,
                None => 0,
            }
        } else {
            self.chosen[pos - 1] + 1
        }
    }

    fn candidate(&self, pos: usize, from: usize) -> Option<usize> {
        let room = self.part_end[pos] - pos;
        let last = self.n.checked_sub(room + 1)?;
        (from..=last).find(|&c| !self.used[c])
    }

    /// Moves to the next family; returns false when exhausted.
    pub(crate) fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        let u = self.chosen.len();
        let (mut pos, mut from);
        if !self.started {
            self.started = true;
            pos = self.pinned;
            if pos == u {
                return true;
            }
            from = self.lower_bound(pos);
        } else {
            if u == self.pinned {
                self.done = true;
                return false;
            }
            pos = u - 1;
            self.used[self.chosen[pos]] = false;
            from = self.chosen[pos] + 1;
        }
        loop {
            match self.candidate(pos, from) {
                Some(c) => {
                    self.chosen[pos] = c;
                    self.used[c] = true;
                    pos += 1;
                    if pos == u {
                        return true;
                    }
                    from = self.lower_bound(pos);
                }
                None => {
                    if pos == self.pinned {
                        self.done = true;
                        return false;
                    }
                    pos -= 1;
                    self.used[self.chosen[pos]] = false;
                    from = self.chosen[pos] + 1;
                }
            }
        }
    }

    pub(crate) fn family(&self) -> ColumnFamily {
        ColumnFamily::from_canonical_flat(&self.chosen, &self.blocks)
    }
}

/// Iterator over all canonical families of a type on `n` columns.
pub struct Families {
    cursor: FamilyCursor,
}

impl Iterator for Families {
    type Item = ColumnFamily;

    fn next(&mut self) -> Option<ColumnFamily> {
        self.cursor.advance().then(|| self.cursor.family())
    }
}

pub fn enumerate_families(n: usize, ty: &ShfType) -> Result<Families> {
    if ty.u() > n {
        return domain(format!("type {ty} has u = {} > n = {n}", ty.u()));
    }
    Ok(Families {
        cursor: FamilyCursor::new(n, ty.blocks()),
    })
}

/// Closed-form number of canonical families:
/// `multinomial(n; w1, ..., wt, n-u) / prod(m_s!)` over runs of equal sizes.
pub fn family_count(n: usize, ty: &ShfType) -> Result<BigCount> {
    if ty.u() > n {
        return domain(format!("type {ty} has u = {} > n = {n}", ty.u()));
    }
    let mut parts: Vec<u64> = ty.blocks().iter().map(|&b| b as u64).collect();
    parts.push((n - ty.u()) as u64);
    Ok(multinomial(&parts) / symmetry_factor(ty))
}

/// `prod(m_s!)`: orderings of equal-size parts.
pub fn symmetry_factor(ty: &ShfType) -> BigCount {
    ty.multiplicities()
        .into_iter()
        .map(|m| factorial(m as u64))
        .product()
}

/// Per-thread scratch for the separation test.
struct SymbolMarks {
    stamp: Vec<u64>,
    owner: Vec<u32>,
    generation: u64,
}

impl SymbolMarks {
    fn new(q: usize) -> Self {
        SymbolMarks {
            stamp: vec![0; q],
            owner: vec![0; q],
            generation: 0,
        }
    }

    /// True iff the symbol sets of the parts are pairwise disjoint in `row`.
    fn separates(&mut self, row: &[Symbol], flat: &[usize], blocks: &[usize]) -> bool {
        self.generation += 1;
        let g = self.generation;
        let mut at = 0;
        for (part, &b) in blocks.iter().enumerate() {
            for &c in &flat[at..at + b] {
                let s = row[c] as usize;
                if self.stamp[s] == g {
                    if self.owner[s] != part as u32 {
                        return false;
                    }
                } else {
                    self.stamp[s] = g;
                    self.owner[s] = part as u32;
                }
            }
            at += b;
        }
        true
    }
}

/// True iff the symbol sets `row(part)` are pairwise disjoint.
pub fn row_separates(row: &[Symbol], family: &ColumnFamily) -> bool {
    let q = row.iter().copied().max().map_or(1, |m| m as usize + 1);
    let blocks: Vec<usize> = family.parts().iter().map(Vec::len).collect();
    SymbolMarks::new(q).separates(row, &family.encoding(), &blocks)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn resolve_threads(threads: usize) -> usize {
    if threads == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        threads
    }
}

/// Runs `f` on every first-part chunk, sequentially when `threads == 1` and
/// on a dedicated rayon pool otherwise. Results come back in chunk order.
fn map_chunks<T, F>(chunks: &[Vec<usize>], threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &[usize]) -> T + Sync,
{
    let threads = resolve_threads(threads);
    if threads == 1 {
        return chunks.iter().enumerate().map(|(i, c)| f(i, c)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build verifier thread pool");
    pool.install(|| {
        chunks
            .par_iter()
            .enumerate()
            .map(|(i, c)| f(i, c))
            .collect()
    })
}

enum ChunkOutcome {
    /// Every family in the chunk is separated.
    Clean(u64),
    /// Families checked up to and including the first unseparated one.
    Failed(u64, Vec<usize>),
    /// Not examined because an earlier chunk already failed.
    Skipped,
}

/// Verifies the matrix as an SHF of `ty` using all available cores.
pub fn verify(matrix: &RepMatrix, ty: &ShfType) -> Result<Verdict> {
    verify_with_threads(matrix, ty, 0)
}

/// Verifies the matrix as an SHF of `ty`. `threads == 0` means all
/// available cores; `threads == 1` runs the sequential reference path.
pub fn verify_with_threads(matrix: &RepMatrix, ty: &ShfType, threads: usize) -> Result<Verdict> {
    let n = matrix.cols();
    check_type_fits(n, matrix.q() as usize, ty)?;
    let blocks = ty.blocks();
    let chunks = subsets(n, blocks[0]);
    let first_failure = AtomicUsize::new(usize::MAX);

    let outcomes = map_chunks(&chunks, threads, |index, first| {
        if index > first_failure.load(Ordering::Relaxed) {
            return ChunkOutcome::Skipped;
        }
        let mut cursor = FamilyCursor::with_first_part(n, blocks, first);
        let mut marks = SymbolMarks::new(matrix.q() as usize);
        let mut checked = 0u64;
        while cursor.advance() {
            checked += 1;
            let flat = cursor.current();
            if !matrix
                .iter_rows()
                .any(|row| marks.separates(row, flat, blocks))
            {
                first_failure.fetch_min(index, Ordering::Relaxed);
                return ChunkOutcome::Failed(checked, flat.to_vec());
            }
            if checked.is_multiple_of(4096) && index > first_failure.load(Ordering::Relaxed) {
                return ChunkOutcome::Skipped;
            }
        }
        ChunkOutcome::Clean(checked)
    });

    let mut total = 0u64;
    for outcome in outcomes {
        match outcome {
            ChunkOutcome::Clean(c) => total += c,
            ChunkOutcome::Failed(c, flat) => {
                return Ok(Verdict {
                    ok: false,
                    witness: Some(ColumnFamily::from_canonical_flat(&flat, blocks)),
                    families_checked: BigCount::from(total + c),
                });
            }
            ChunkOutcome::Skipped => {
                unreachable!("a chunk is only skipped after an earlier chunk failed")
            }
        }
    }
    Ok(Verdict {
        ok: true,
        witness: None,
        families_checked: BigCount::from(total),
    })
}

/// Rows whose deletion leaves the matrix an SHF of `ty`.
///
/// A row is necessary exactly when some family is separated by that row
/// alone, so one pass recording sole separators settles every row.
pub fn find_redundant_rows(matrix: &RepMatrix, ty: &ShfType) -> Result<Vec<usize>> {
    find_redundant_rows_with_threads(matrix, ty, 0)
}

pub fn find_redundant_rows_with_threads(
    matrix: &RepMatrix,
    ty: &ShfType,
    threads: usize,
) -> Result<Vec<usize>> {
    let n = matrix.cols();
    check_type_fits(n, matrix.q() as usize, ty)?;
    let blocks = ty.blocks();
    let chunks = subsets(n, blocks[0]);
    let rows = matrix.rows();

    let per_chunk = map_chunks(&chunks, threads, |_, first| {
        let mut cursor = FamilyCursor::with_first_part(n, blocks, first);
        let mut marks = SymbolMarks::new(matrix.q() as usize);
        let mut essential = vec![false; rows];
        while cursor.advance() {
            let flat = cursor.current();
            let mut separators = matrix
                .iter_rows()
                .enumerate()
                .filter(|(_, row)| marks.separates(row, flat, blocks))
                .map(|(r, _)| r);
            match (separators.next(), separators.next()) {
                (None, _) => return Err(flat.to_vec()),
                (Some(r), None) => essential[r] = true,
                _ => {}
            }
        }
        Ok(essential)
    });

    let mut essential = vec![false; rows];
    for chunk in per_chunk {
        match chunk {
            Ok(e) => essential.iter_mut().zip(e).for_each(|(a, b)| *a |= b),
            Err(flat) => {
                let family = ColumnFamily::from_canonical_flat(&flat, blocks);
                return domain(format!(
                    "matrix is not an SHF of type {ty}: {family} is unseparated"
                ));
            }
        }
    }
    Ok((0..rows).filter(|&r| !essential[r]).collect())
}

/// Counts the families of `ty` separated by `row`, by enumeration.
///
/// With `ordered`, each unordered family is weighted by the number of ways
/// to order its equal-size parts, giving the count of ordered tuples.
pub fn count_separated_by_row_bruteforce(
    row: &[Symbol],
    ty: &ShfType,
    ordered: bool,
) -> Result<BigCount> {
    let n = row.len();
    if ty.u() > n {
        return domain(format!("type {ty} has u = {} > n = {n}", ty.u()));
    }
    let q = row.iter().copied().max().map_or(1, |m| m as usize + 1);
    let blocks = ty.blocks();
    let mut marks = SymbolMarks::new(q);
    let mut cursor = FamilyCursor::new(n, blocks);
    let mut count = 0u64;
    while cursor.advance() {
        if marks.separates(row, cursor.current(), blocks) {
            count += 1;
        }
    }
    let count = BigCount::from(count);
    Ok(if ordered {
        count * symmetry_factor(ty)
    } else {
        count
    })
}

/// Ordered count of separated tuples of type `{w1^(q-1), w2}` for a row of
/// the given weight: `(q-1)! * T(i_1, ..., i_{q-1})`.
///
/// Only valid when `i_0 >= w2` and `w1 <= i_k < w2` for every nonzero symbol.
pub fn count_separated_by_row_formula(
    weight: &RowWeight,
    w1: usize,
    w2: usize,
    n: usize,
    q: usize,
) -> Result<BigCount> {
    if weight.counts().len() != q {
        return domain(format!(
            "weight has {} symbols, q = {q}",
            weight.counts().len()
        ));
    }
    if weight.len() != n {
        return domain(format!("weight sums to {}, n = {n}", weight.len()));
    }
    if weight.zeros() < w2 {
        return domain(format!("i_0 = {} is below w2 = {w2}", weight.zeros()));
    }
    if let Some(&i) = weight.nonzero().iter().find(|&&i| i < w1 || i >= w2) {
        return domain(format!("weight {i} is outside [w1, w2) = [{w1}, {w2})"));
    }
    let nonzero: Vec<u64> = weight.nonzero().iter().map(|&i| i as u64).collect();
    let t = t_function(q as u64, w1 as u64, w2 as u64, n as u64, &nonzero)?;
    let z = factorial(q as u64 - 1) * t;
    debug_assert!(!z.is_zero());
    Ok(z)
}
