//! SHF parameters, representation matrices, column families and row weights.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Result, ShfError};

/// Matrix symbol drawn from `{0, ..., q-1}`.
pub type Symbol = u32;

/// Multiset of block sizes `{w1, ..., wt}`, stored in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShfType {
    blocks: Vec<usize>,
}

impl ShfType {
    pub fn new(mut blocks: Vec<usize>) -> Result<Self> {
        if blocks.len() < 2 {
            return domain(format!(
                "a type needs at least 2 blocks, got {}",
                blocks.len()
            ));
        }
        if blocks.contains(&0) {
            return domain("block sizes must be positive");
        }
        blocks.sort_unstable();
        Ok(ShfType { blocks })
    }

    /// The type `{w1^(q-1), w2}`.
    pub fn repeated(q: usize, w1: usize, w2: usize) -> Result<Self> {
        if q < 2 {
            return domain(format!("q = {q} must be at least 2"));
        }
        let mut blocks = vec![w1; q - 1];
        blocks.push(w2);
        ShfType::new(blocks)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Number of blocks `t`.
    pub fn t(&self) -> usize {
        self.blocks.len()
    }

    /// Sum of the blocks `u`.
    pub fn u(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Sizes of runs of equal blocks, e.g. `{1,1,2,2,2}` gives `[2, 3]`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < self.blocks.len() {
            let j = i + self.blocks[i..]
                .iter()
                .take_while(|&&b| b == self.blocks[i])
                .count();
            runs.push(j - i);
            i = j;
        }
        runs
    }

    /// Replace `blocks[index]` by a smaller size `w'`.
    pub fn reduce_block(&self, index: usize, new_size: usize) -> Result<Self> {
        let Some(&old) = self.blocks.get(index) else {
            return domain(format!("block index {index} out of range"));
        };
        if new_size < 1 || new_size > old {
            return domain(format!("cannot reduce block of size {old} to {new_size}"));
        }
        let mut blocks = self.blocks.clone();
        blocks[index] = new_size;
        ShfType::new(blocks)
    }

    /// Replace blocks `i` and `j` by one block of their combined size.
    pub fn merge_blocks(&self, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return domain("cannot merge a block with itself");
        }
        if self.t() < 3 {
            return domain(format!(
                "merging needs at least 3 blocks, type has {}",
                self.t()
            ));
        }
        if i >= self.t() || j >= self.t() {
            return domain(format!("block index out of range for t = {}", self.t()));
        }
        let merged = self.blocks[i] + self.blocks[j];
        let mut blocks: Vec<usize> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, &b)| b)
            .collect();
        blocks.push(merged);
        ShfType::new(blocks)
    }
}

impl fmt::Display for ShfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for ShfType {
    type Err = ShfError;

    /// Parses a comma list such as `1,1,2`; surrounding braces are optional.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let blocks = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| ShfError::Domain(format!("bad block size {p:?} in type {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ShfType::new(blocks)
    }
}

/// The tuple `(N; n, q, type)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShfParams {
    pub rows: usize,
    pub cols: usize,
    pub q: usize,
    pub ty: ShfType,
}

impl ShfParams {
    pub fn new(rows: usize, cols: usize, q: usize, ty: ShfType) -> Result<Self> {
        check_type_fits(cols, q, &ty)?;
        Ok(ShfParams { rows, cols, q, ty })
    }
}

/// Non-vacuity conditions `u <= n` and `q >= t`.
pub fn check_type_fits(cols: usize, q: usize, ty: &ShfType) -> Result<()> {
    if ty.u() > cols {
        return domain(format!("type {ty} has u = {} > n = {cols}", ty.u()));
    }
    if q < ty.t() {
        return domain(format!("type {ty} has t = {} > q = {q}", ty.t()));
    }
    Ok(())
}

/// `N x n` matrix over `{0, ..., q-1}`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMatrix {
    q: u32,
    cols: usize,
    entries: Vec<Symbol>,
}

impl RepMatrix {
    pub fn new(q: u32, cols: usize) -> Self {
        RepMatrix {
            q,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_rows<I, R>(q: u32, cols: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[Symbol]>,
    {
        let mut m = RepMatrix::new(q, cols);
        for row in rows {
            m.push_row(row.as_ref())?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: &[Symbol]) -> Result<()> {
        if row.len() != self.cols {
            return domain(format!(
                "row has {} entries, expected {}",
                row.len(),
                self.cols
            ));
        }
        check_symbols(row, self.q)?;
        self.entries.extend_from_slice(row);
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.entries.len().checked_div(self.cols).unwrap_or(0)
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        self.entries.chunks_exact(self.cols.max(1))
    }

    /// Copy of the matrix with row `r` deleted.
    pub fn without_row(&self, r: usize) -> RepMatrix {
        let mut entries = self.entries.clone();
        entries.drain(r * self.cols..(r + 1) * self.cols);
        RepMatrix {
            q: self.q,
            cols: self.cols,
            entries,
        }
    }
}

fn check_symbols(row: &[Symbol], q: u32) -> Result<()> {
    match row.iter().position(|&s| s >= q) {
        Some(column) => Err(ShfError::Symbol {
            symbol: row[column],
            column,
            q,
        }),
        None => Ok(()),
    }
}

/// Symbol multiplicities `(i_0, i_1, ..., i_{q-1})` of one row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowWeight {
    counts: Vec<usize>,
}

impl RowWeight {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        RowWeight { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Row length `n`.
    pub fn len(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of zero symbols.
    pub fn zeros(&self) -> usize {
        self.counts[0]
    }

    /// `(i_1, ..., i_{q-1})`.
    pub fn nonzero(&self) -> &[usize] {
        &self.counts[1..]
    }
}

pub fn weight_of_row(row: &[Symbol], q: u32) -> Result<RowWeight> {
    check_symbols(row, q)?;
    let mut counts = vec![0usize; q as usize];
    for &s in row {
        counts[s as usize] += 1;
    }
    debug_assert_eq!(counts[0], row.len() - counts[1..].iter().sum::<usize>());
    Ok(RowWeight { counts })
}

/// Pairwise-disjoint column sets whose sizes match a type block-for-block.
///
/// Parts are kept in canonical form: each part sorted, parts ordered by size
/// and, among equal sizes, by increasing minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnFamily {
    parts: Vec<Vec<usize>>,
}

impl ColumnFamily {
    pub fn new(parts: Vec<Vec<usize>>, ty: &ShfType) -> Result<Self> {
        let mut parts: Vec<Vec<usize>> = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        if parts.iter().any(|p| p.is_empty()) {
            return domain("column family parts must be nonempty");
        }
        parts.sort_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])));
        let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        if sizes != ty.blocks() {
            return domain(format!("part sizes {sizes:?} do not match type {ty}"));
        }
        let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != total {
            return domain("column family parts overlap");
        }
        Ok(ColumnFamily { parts })
    }

    /// Builds a family from a flat canonical encoding and the type's block
    /// sizes. The caller guarantees the encoding is already canonical.
    pub(crate) fn from_canonical_flat(flat: &[usize], blocks: &[usize]) -> Self {
        let mut parts = Vec::with_capacity(blocks.len());
        let mut at = 0;
        for &b in blocks {
            parts.push(flat[at..at + b].to_vec());
            at += b;
        }
        ColumnFamily { parts }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Concatenation of the canonical parts.
    pub fn encoding(&self) -> Vec<usize> {
        self.parts.iter().flatten().copied().collect()
    }

    pub fn max_column(&self) -> Option<usize> {
        self.parts.iter().flatten().copied().max()
    }
}

impl fmt::Display for ColumnFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let cols: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                format!("{{{}}}", cols.join(","))
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Renders the matrix in the plain-text certificate format: a header line
/// `N n q`, then one line of space-separated symbols per row.
pub fn serialize_matrix(m: &RepMatrix) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), m.q());
    for row in m.iter_rows().take(m.rows()) {
        push_row_text(&mut out, row);
    }
    out
}

pub(crate) fn push_row_text(out: &mut String, row: &[Symbol]) {
    use std::fmt::Write;
    for (k, s) in row.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{s}").expect("writing to a String");
    }
    out.push('\n');
}

pub fn parse_matrix(text: &str) -> Result<RepMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(ShfError::Format {
        line: 1,
        message: "missing header line `N n q`".into(),
    })?;
    let fields = parse_ints(header, hline)?;
    let [rows, cols, q] = fields[..] else {
        return Err(ShfError::Format {
            line: hline,
            message: format!("header must have 3 fields `N n q`, found {}", fields.len()),
        });
    };
    let q = u32::try_from(q).map_err(|_| ShfError::Format {
        line: hline,
        message: format!("q = {q} is too large"),
    })?;
    let mut m = RepMatrix::new(q, cols);
    let mut row = Vec::with_capacity(cols);
    for (line, content) in lines.by_ref().take(rows) {
        row.clear();
        for v in parse_ints(content, line)? {
            let s = u32::try_from(v)
                .ok()
                .filter(|&s| s < q)
                .ok_or(ShfError::Format {
                    line,
                    message: format!("symbol {v} is not below q = {q}"),
                })?;
            row.push(s);
        }
        if row.len() != cols {
            return Err(ShfError::Format {
                line,
                message: format!("expected {cols} symbols, found {}", row.len()),
            });
        }
        m.push_row(&row)?;
    }
    if m.rows() != rows || (cols == 0 && rows > 0) {
        return Err(ShfError::Format {
            line: hline,
            message: format!("header declares {rows} rows, found {}", m.rows()),
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(ShfError::Format {
            line,
            message: "trailing data after the last row".into(),
        });
    }
    Ok(m)
}

fn parse_ints(content: &str, line: usize) -> Result<Vec<usize>> {
    content
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| ShfError::Format {
                line,
                message: format!("not a nonnegative integer: {tok:?}"),
            })
        })
        .collect()
}
