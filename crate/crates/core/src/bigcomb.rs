//! Exact combinatorial kernel.
//!
//! Every count in the crate (binomials, the `T` product, construction sizes,
//! family counts and bound magnitudes) is a [`BigCount`]. Small binomials come
//! from a shared Pascal table; anything past the table cap is computed as a
//! direct big-integer product.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Largest `n` held by the default binomial table.
pub const DEFAULT_TABLE_CAP: u64 = 256;

/// Pascal triangle of binomials `C(n, k)` for `n <= cap`.
///
/// Rows are filled once at construction and never mutated afterwards, so a
/// table can be shared between any number of threads.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    cap: u64,
    rows: Vec<Vec<BigCount>>,
}

impl BinomialTable {
    pub fn with_cap(cap: u64) -> Self {
        let mut rows: Vec<Vec<BigCount>> = Vec::with_capacity(cap as usize + 1);
        rows.push(vec![BigCount::one()]);
        for n in 1..=cap as usize {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigCount::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigCount::one());
            rows.push(row);
        }
        BinomialTable { cap, rows }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// `C(n, k)`, zero when `k > n`.
    pub fn binom(&self, n: u64, k: u64) -> BigCount {
        if k > n {
            return BigCount::zero();
        }
        if n <= self.cap {
            return self.rows[n as usize][k as usize].clone();
        }
        binom_product(n, k)
    }
}

fn default_table() -> &'static BinomialTable {
    static TABLE: OnceLock<BinomialTable> = OnceLock::new();
    TABLE.get_or_init(|| BinomialTable::with_cap(DEFAULT_TABLE_CAP))
}

/// `C(n, k)`; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigCount {
    default_table().binom(n, k)
}

/// `C(n, k)` by the multiplicative formula, bypassing the table.
///
/// Each partial product `C(n - k + i, i)` is an integer, so the running
/// division is exact.
pub fn binom_product(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigCount::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

pub fn factorial(k: u64) -> BigCount {
    (2..=k).fold(BigCount::one(), |acc, i| acc * i)
}

/// Multinomial coefficient `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[u64]) -> BigCount {
    let mut remaining: u64 = parts.iter().sum();
    let mut acc = BigCount::one();
    for &p in parts {
        acc *= binom(remaining, p);
        remaining -= p;
    }
    acc
}

/// The separated-tuple product
/// `C(i_1, w1) ... C(i_{q-1}, w1) * C(n - sum i_k, w2)`.
///
/// `weights` holds `(i_1, ..., i_{q-1})`; the zero count `i_0` is implied
/// by `n`. The product is only defined when `w1 < w2`, every `i_k >= w1` and
/// `i_0 >= w2`.
pub fn t_function(q: u64, w1: u64, w2: u64, n: u64, weights: &[u64]) -> Result<BigCount> {
    if q < 2 {
        return domain(format!("q = {q} must be at least 2"));
    }
    if w1 == 0 || w1 >= w2 {
        return domain(format!("need 0 < w1 < w2, got w1 = {w1}, w2 = {w2}"));
    }
    if weights.len() as u64 != q - 1 {
        return domain(format!(
            "expected {} nonzero-symbol weights, got {}",
            q - 1,
            weights.len()
        ));
    }
    if let Some(&bad) = weights.iter().find(|&&i| i < w1) {
        return domain(format!("weight {bad} is below w1 = {w1}"));
    }
    let used: u64 = weights.iter().sum();
    if used > n || n - used < w2 {
        return domain(format!(
            "zero count n - sum = {} is below w2 = {w2}",
            n as i128 - used as i128
        ));
    }
    let mut acc = binom(n - used, w2);
    for &i in weights {
        acc *= binom(i, w1);
    }
    Ok(acc)
}

/// Number of rows of the canonical construction:
/// `(1/(q-1)!) * prod_{j=0}^{q-2} C(n - j*w1, w1)`.
///
/// Panics if the division is inexact; the product counts ordered tuples of
/// disjoint blocks, so divisibility by `(q-1)!` always holds.
pub fn construction_size(n: u64, q: u64, w1: u64) -> Result<BigCount> {
    if q < 2 {
        return domain(format!("q = {q} must be at least 2"));
    }
    if w1 == 0 {
        return domain("w1 must be positive");
    }
    if (q - 1) * w1 > n {
        return domain(format!("(q-1)*w1 = {} exceeds n = {n}", (q - 1) * w1));
    }
    let product = ordered_block_product(n, q - 1, w1);
    let (quot, rem) = product.div_rem(&factorial(q - 1));
    assert!(
        rem.is_zero(),
        "(q-1)! does not divide the ordered block product"
    );
    Ok(quot)
}

/// `prod_{j=0}^{m-1} C(n - j*w, w)`: ordered choices of `m` disjoint `w`-sets.
pub fn ordered_block_product(n: u64, m: u64, w: u64) -> BigCount {
    (0..m).fold(BigCount::one(), |acc, j| acc * binom(n - j * w, w))
}

/// Total number of ordered column `q`-tuples of type `{w1^(q-1), w2}`:
/// `C(n,w1) C(n-w1,w1) ... C(n-(q-2)w1, w1) C(n-(q-1)w1, w2)`.
pub fn ordered_tuple_total(n: u64, q: u64, w1: u64, w2: u64) -> Result<BigCount> {
    if q < 2 || w1 == 0 || w2 == 0 {
        return domain("need q >= 2 and positive block sizes");
    }
    let used = (q - 1) * w1;
    if used + w2 > n {
        return domain(format!("(q-1)*w1 + w2 = {} exceeds n = {n}", used + w2));
    }
    Ok(ordered_block_product(n, q - 1, w1) * binom(n - used, w2))
}
