//! The optimal construction for type `{w1^(q-1), w2}`.
//!
//! One row per tuple `(C_1, ..., C_{q-1})` of pairwise-disjoint `w1`-sets of
//! columns with strictly increasing minima; the row carries symbol `j` on the
//! columns of `C_j` and `0` elsewhere.

use std::io::{self, Write};

use crate::bigcomb::{construction_size, BigCount};
use crate::error::{domain, Result};
use crate::model::{push_row_text, RepMatrix, ShfType, Symbol};

/// `q - 1` disjoint `w1`-sets with strictly increasing minima, each sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TauTuple {
    parts: Vec<Vec<usize>>,
}

impl TauTuple {
    pub fn new(parts: Vec<Vec<usize>>) -> Result<Self> {
        let Some(w1) = parts.first().map(Vec::len) else {
            return domain("a tuple needs at least one part");
        };
        if w1 == 0 || parts.iter().any(|p| p.len() != w1) {
            return domain("tuple parts must share one positive size");
        }
        if parts.iter().any(|p| p.windows(2).any(|w| w[0] >= w[1])) {
            return domain("tuple parts must be strictly increasing");
        }
        if parts.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return domain("tuple part minima must be strictly increasing");
        }
        let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != total {
            return domain("tuple parts overlap");
        }
        Ok(TauTuple { parts })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }
}

/// Streaming generator of tuples in lexicographic order of their
/// concatenated parts.
///
/// Each part is a `w1`-subset of the unused columns whose minimum exceeds the
/// previous part's minimum; parts are advanced like an odometer, the last part
/// fastest.
#[derive(Debug, Clone)]
pub struct TauStream {
    n: usize,
    w1: usize,
    parts: usize,
    /// Column indices, part after part.
    cols: Vec<usize>,
    used: Vec<bool>,
    state: StreamState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

pub fn tau_stream(n: usize, q: usize, w1: usize) -> Result<TauStream> {
    if q < 2 {
        return domain(format!("q = {q} must be at least 2"));
    }
    if w1 == 0 {
        return domain("w1 must be positive");
    }
    if (q - 1) * w1 > n {
        return domain(format!("(q-1)*w1 = {} exceeds n = {n}", (q - 1) * w1));
    }
    Ok(TauStream {
        n,
        w1,
        parts: q - 1,
        cols: Vec::with_capacity((q - 1) * w1),
        used: vec![false; n],
        state: StreamState::Fresh,
    })
}

impl TauStream {
    /// Smallest lexicographic `w1`-subset of unused columns with minimum at
    /// least `from`, pushed onto `cols`.
    fn push_first_subset(&mut self, from: usize) -> bool {
        let mut c = from;
        let start = self.cols.len();
        while self.cols.len() - start < self.w1 {
            while c < self.n && self.used[c] {
                c += 1;
            }
            if c >= self.n {
                self.pop_part(start);
                return false;
            }
            self.cols.push(c);
            self.used[c] = true;
            c += 1;
        }
        true
    }

    fn pop_part(&mut self, start: usize) {
        for c in self.cols.drain(start..) {
            self.used[c] = false;
        }
    }

    /// Advances the last part to its next subset (same minimum bound); on
    /// exhaustion the part is removed and false is returned.
    fn bump_last_part(&mut self) -> bool {
        let start = self.cols.len() - self.w1;
        let min_bound = self.cols[start];
        // Free this part and search for the next subset in lexicographic order
        // among columns not used by earlier parts.
        let current: Vec<usize> = self.cols[start..].to_vec();
        self.pop_part(start);
        let free: Vec<usize> = (min_bound..self.n).filter(|&c| !self.used[c]).collect();
        let mut idx: Vec<usize> = current
            .iter()
            .map(|c| free.binary_search(c).expect("part columns are free"))
            .collect();
        let k = self.w1;
        let m = free.len();
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for &j in &idx {
            self.cols.push(free[j]);
            self.used[free[j]] = true;
        }
        true
    }

    /// Completes `cols` to a full tuple, backtracking as needed.
    fn fill(&mut self) -> bool {
        loop {
            if self.cols.len() == self.parts * self.w1 {
                return true;
            }
            let from = match self.cols.len() {
                0 => 0,
                len => self.cols[len - self.w1] + 1,
            };
            if self.push_first_subset(from) {
                continue;
            }
            // No part fits after the current prefix: advance the previous part.
            loop {
                if self.cols.is_empty() {
                    return false;
                }
                if self.bump_last_part() {
                    break;
                }
            }
        }
    }
}

impl Iterator for TauStream {
    type Item = TauTuple;

    fn next(&mut self) -> Option<TauTuple> {
        let found = match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                self.state = StreamState::Running;
                self.fill()
            }
            StreamState::Running => loop {
                if self.cols.is_empty() {
                    break false;
                }
                if self.bump_last_part() {
                    break self.fill();
                }
            },
        };
        if !found {
            self.state = StreamState::Done;
            return None;
        }
        let parts = self.cols.chunks(self.w1).map(<[usize]>::to_vec).collect();
        Some(TauTuple { parts })
    }
}

/// Row with symbol `j` on the columns of the `j`-th part (1-based), else `0`.
pub fn row_of_tuple(tuple: &TauTuple, n: usize) -> Vec<Symbol> {
    let mut row = vec![0; n];
    for (j, part) in tuple.parts.iter().enumerate() {
        for &c in part {
            row[c] = j as Symbol + 1;
        }
    }
    row
}

fn check_hypothesis(n: usize, q: usize, w1: usize, w2: usize) -> Result<()> {
    if q < 2 {
        return domain(format!("q = {q} must be at least 2"));
    }
    if w1 == 0 || w1 >= w2 {
        return domain(format!("need 0 < w1 < w2, got w1 = {w1}, w2 = {w2}"));
    }
    if w2 + (q - 1) * w1 > n {
        return domain(format!(
            "w2 + (q-1)*w1 = {} exceeds n = {n}",
            w2 + (q - 1) * w1
        ));
    }
    Ok(())
}

/// Number of rows `construct` will produce, after checking its hypothesis.
pub fn construct_rows(n: usize, q: usize, w1: usize, w2: usize) -> Result<BigCount> {
    check_hypothesis(n, q, w1, w2)?;
    construction_size(n as u64, q as u64, w1 as u64)
}

/// Builds the representation matrix of an SHF of type `{w1^(q-1), w2}`.
///
/// `w2` does not influence the rows; it is only checked against the
/// hypothesis `w1 < w2` and `w2 + (q-1)*w1 <= n`.
pub fn construct(n: usize, q: usize, w1: usize, w2: usize) -> Result<RepMatrix> {
    check_hypothesis(n, q, w1, w2)?;
    let mut m = RepMatrix::new(q as u32, n);
    for tuple in tau_stream(n, q, w1)? {
        m.push_row(&row_of_tuple(&tuple, n))?;
    }
    Ok(m)
}

/// The claimed type of `construct(n, q, w1, w2)`.
pub fn construction_type(q: usize, w1: usize, w2: usize) -> Result<ShfType> {
    ShfType::repeated(q, w1, w2)
}

/// Streams the constructed matrix in the text certificate format without
/// materializing it. Returns the number of rows written.
pub fn write_construction<W: Write + ?Sized>(
    out: &mut W,
    n: usize,
    q: usize,
    w1: usize,
    w2: usize,
) -> io::Result<BigCount> {
    let rows = construct_rows(n, q, w1, w2)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
    writeln!(out, "{rows} {n} {q}")?;
    let mut line = String::new();
    let stream = tau_stream(n, q, w1).expect("hypothesis already checked");
    for tuple in stream {
        line.clear();
        push_row_text(&mut line, &row_of_tuple(&tuple, n));
        out.write_all(line.as_bytes())?;
    }
    Ok(rows)
}
