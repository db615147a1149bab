//! Independent bitmask oracles shared by the integration targets.
#![allow(dead_code)]

/// Ordered tuples `(P_0, ..., P_{t-1})` of disjoint column sets with
/// `|P_j| = blocks[j]` that `row` separates. Columns are bits, so `n <= 32`.
pub fn ordered_separated(row: &[u32], blocks: &[usize]) -> u64 {
    fn go(row: &[u32], blocks: &[usize], free: u32, used_symbols: u64) -> u64 {
        let Some((&size, rest)) = blocks.split_first() else {
            return 1;
        };
        let mut total = 0;
        for mask in submasks_of_size(free, size) {
            let syms = symbols_of(row, mask);
            if syms & used_symbols == 0 {
                total += go(row, rest, free & !mask, used_symbols | syms);
            }
        }
        total
    }
    go(row, blocks, full_mask(row.len()), 0)
}

/// Whether every family of the given type is separated by some row.
pub fn is_shf(rows: &[Vec<u32>], n: usize, blocks: &[usize]) -> bool {
    fn go(rows: &[Vec<u32>], blocks: &[usize], free: u32, chosen: &mut Vec<u32>) -> bool {
        let Some((&size, rest)) = blocks.split_first() else {
            return rows.iter().any(|r| {
                let mut seen = 0u64;
                chosen.iter().all(|&m| {
                    let s = symbols_of(r, m);
                    let ok = s & seen == 0;
                    seen |= s;
                    ok
                })
            });
        };
        for mask in submasks_of_size(free, size) {
            chosen.push(mask);
            let ok = go(rows, rest, free & !mask, chosen);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    go(rows, blocks, full_mask(n), &mut Vec::new())
}

pub fn full_mask(n: usize) -> u32 {
    assert!(n <= 32);
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn submasks_of_size(free: u32, size: usize) -> impl Iterator<Item = u32> {
    let mut sub = free;
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & free;
        }
        if cur.count_ones() as usize == size {
            return Some(cur);
        }
    })
}

fn symbols_of(row: &[u32], mask: u32) -> u64 {
    let mut s = 0u64;
    let mut m = mask;
    while m != 0 {
        let c = m.trailing_zeros() as usize;
        s |= 1 << row[c];
        m &= m - 1;
    }
    s
}

/// A row with `counts[k]` copies of symbol `k`, interleaved round-robin so
/// no symbol occupies a contiguous run.
pub fn row_with_counts(counts: &[usize]) -> Vec<u32> {
    let mut left = counts.to_vec();
    let mut row = Vec::with_capacity(counts.iter().sum());
    while left.iter().any(|&c| c > 0) {
        for (k, c) in left.iter_mut().enumerate() {
            if *c > 0 {
                row.push(k as u32);
                *c -= 1;
            }
        }
    }
    row
}

/// All compositions of `n` into `parts` non-negative summands.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut tail in compositions(n - first, parts - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// `(q, w1, w2, n)` for `q <= 4`, `w1 <= 2`, `w1 < w2 <= 4`, `n` in the
/// valid range.
pub fn small_grid() -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for q in 2..=4 {
        for w1 in 1..=2 {
            for w2 in w1 + 1..=4 {
                let lo = w2 + (q - 1) * w1;
                let hi = lo - 1 + w2 / w1;
                for n in lo..=hi {
                    out.push((q, w1, w2, n));
                }
            }
        }
    }
    out
}
