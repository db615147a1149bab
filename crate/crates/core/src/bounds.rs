//! Lower bounds on `N` for type `{w1^(q-1), w2}` and its strong-SHF
//! specialisation, and three general upper bounds on `n` used for comparison.
//!
//! The general bounds exist in two conventions. The printed statements use
//! the exponent `ceil(N/(u-1))` and take `(w1, w2)` as the two smallest
//! blocks; the published comparison table is reproduced by the exponent
//! `floor(N/(u-1)) + 1`, the designated pair `(w1, w2)` of the type name, and
//! a square-root correction for the 2013 bound. Results computed under any
//! of the latter are flagged `reconstructed`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::bigcomb::{binom, construction_size, BigCount};
use crate::error::{domain, Result, ShfError};
use crate::model::ShfType;

/// Inclusive range of `n` over which the tight lower bound is proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NRange {
    pub lo: u64,
    pub hi: u64,
}

impl NRange {
    pub fn contains(&self, n: u64) -> bool {
        self.lo <= n && n <= self.hi
    }
}

/// `w2 + (q-1)w1 <= n <= w2 + (q-1)w1 + w2/w1 - 1`, upper end truncated.
///
/// For integer `n` the real upper endpoint is equivalent to
/// `n * w1 <= (w2 + (q-1)w1 - 1) * w1 + w2`, i.e. `n <= lo - 1 + floor(w2/w1)`.
pub fn valid_n_range(q: u64, w1: u64, w2: u64) -> Result<NRange> {
    if q < 2 {
        return domain(format!("q = {q} must be at least 2"));
    }
    if w1 == 0 || w1 >= w2 {
        return domain(format!("need 0 < w1 < w2, got w1 = {w1}, w2 = {w2}"));
    }
    let lo = w2 + (q - 1) * w1;
    Ok(NRange {
        lo,
        hi: lo - 1 + w2 / w1,
    })
}

/// Minimum number of rows of an SHF of type `{w1^(q-1), w2}` on `n` columns,
/// valid only for `n` inside [`valid_n_range`].
///
/// Not a true lower bound at `w1 = 1, w2 = 2, n = q + 2`: there a row of
/// weight `(2, 1, ..., 1, 2)` separates `4(q-1)!` ordered tuples against
/// `3(q-1)!` for the balanced row, and smaller matrices exist (9 rows for `q = 3`,
/// 18 for `q = 4`). The formula is still returned as stated.
pub fn main_min_n(n: u64, q: u64, w1: u64, w2: u64) -> Result<BigCount> {
    let range = valid_n_range(q, w1, w2)?;
    if !range.contains(n) {
        return Err(ShfError::Range(format!(
            "n = {n} is outside [{}, {}] where the bound for q = {q}, w1 = {w1}, w2 = {w2} holds",
            range.lo, range.hi
        )));
    }
    construction_size(n, q, w1)
}

/// Largest `n` compatible with a row budget, or no constraint at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpliedN {
    AtMost(u64),
    /// The budget meets the requirement at every `n` of the proven range.
    NoBound,
}

impl fmt::Display for ImpliedN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImpliedN::AtMost(n) => write!(f, "{n}"),
            ImpliedN::NoBound => f.write_str("no bound"),
        }
    }
}

/// With `N` rows, the first in-range `n` whose minimum exceeds `N` cannot be
/// reached; deleting columns preserves separation, so neither can any larger
/// `n`.
pub fn implied_max_n(budget: &BigCount, q: u64, w1: u64, w2: u64) -> Result<ImpliedN> {
    let range = valid_n_range(q, w1, w2)?;
    for n in range.lo..=range.hi {
        if construction_size(n, q, w1)? > *budget {
            return Ok(ImpliedN::AtMost(n - 1));
        }
    }
    Ok(ImpliedN::NoBound)
}

fn sshf_range(q: u64, t1: u64, t2: u64) -> Result<NRange> {
    if q < 2 {
        return Err(ShfError::Hypothesis(format!("q = {q} must be at least 2")));
    }
    if t1 < q - 1 {
        return Err(ShfError::Hypothesis(format!(
            "t1 = {t1} must be at least q-1 = {}",
            q - 1
        )));
    }
    if t2 == 0 || t1 + t2 <= q {
        return Err(ShfError::Hypothesis(format!(
            "t1 + t2 = {} must exceed q = {q} so the reduced type has w1 < w2",
            t1 + t2
        )));
    }
    Ok(NRange {
        lo: t1 + t2,
        hi: 2 * (t1 + t2) - q,
    })
}

/// `C(n, q-1)`: minimum rows of an SHF of type `{1^t1, t2}` for
/// `t1 + t2 <= n <= 2(t1+t2) - q`.
pub fn sshf_min_n(n: u64, q: u64, t1: u64, t2: u64) -> Result<BigCount> {
    let range = sshf_range(q, t1, t2)?;
    if !range.contains(n) {
        return Err(ShfError::Range(format!(
            "n = {n} is outside [{}, {}] for q = {q}, t1 = {t1}, t2 = {t2}",
            range.lo, range.hi
        )));
    }
    Ok(binom(n, q - 1))
}

pub fn sshf_implied_max_n(budget: &BigCount, q: u64, t1: u64, t2: u64) -> Result<ImpliedN> {
    let range = sshf_range(q, t1, t2)?;
    Ok((range.lo..=range.hi)
        .find(|&n| binom(n, q - 1) > *budget)
        .map_or(ImpliedN::NoBound, |n| ImpliedN::AtMost(n - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpMode {
    /// `ceil(N / (u-1))`.
    Ceil,
    /// `floor(N / (u-1)) + 1`.
    FloorPlusOne,
}

impl ExpMode {
    pub fn exponent(self, budget: &BigCount, u: u64) -> BigCount {
        let d = BigCount::from(u - 1);
        match self {
            ExpMode::Ceil => (budget + &d - 1u32) / d,
            ExpMode::FloorPlusOne => budget / d + 1u32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMode {
    /// The two smallest blocks of the type.
    TwoSmallest,
    /// An explicit pair of blocks of the type.
    DesignatedPair(usize, usize),
}

impl fmt::Display for GammaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaMode::TwoSmallest => f.write_str("two-smallest"),
            GammaMode::DesignatedPair(a, b) => write!(f, "designated-pair:{a},{b}"),
        }
    }
}

impl Serialize for GammaMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bt2013Variant {
    /// Same expression as the 2011 bound.
    Printed,
    /// `(u-1)q^k + 2 - 2*sqrt(3q^k + 1)`, floored.
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rounding {
    HalfEven,
    Truncate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Besz,
    Bt2011,
    Bt2013,
}

/// Exponents beyond which `q^k` is not materialized. Any such value exceeds
/// `2^8192`, far past the double maximum.
const MATERIALIZE_BITS: u64 = 8192;

/// Symbolic form `coefficient * q^k`, optionally followed by
/// `+ 2 - 2*sqrt(3q^k + 1)` (floored).
#[derive(Debug, Clone, PartialEq, Eq)]
struct BoundExpr {
    coefficient: BigCount,
    q: u64,
    exponent: BigCount,
    sqrt_correction: bool,
}

impl BoundExpr {
    /// Lower bound on `log2(q^k)` from `q >= 2^(bits(q)-1)`.
    fn is_huge(&self) -> bool {
        let floor_log2_q = 63 - self.q.leading_zeros() as u64;
        match self.exponent.to_u64() {
            Some(k) => k.saturating_mul(floor_log2_q) > MATERIALIZE_BITS,
            None => true,
        }
    }

    fn evaluate(&self) -> BigCount {
        let k = self
            .exponent
            .to_u64()
            .expect("exponent fits in u64 when evaluated");
        let power = pow_u64(self.q, k);
        let mut value = &self.coefficient * &power;
        if self.sqrt_correction {
            // floor(A - 2*sqrt(X)) = A - ceil(sqrt(4X)) for integers A, X.
            let four_x = (power * 3u32 + 1u32) * 4u32;
            let r = four_x.sqrt();
            let ceil = if &r * &r == four_x { r } else { r + 1u32 };
            value = value + 2u32 - ceil;
        }
        value
    }
}

fn pow_u64(base: u64, mut exp: u64) -> BigCount {
    let mut acc = BigCount::one();
    let mut b = BigCount::from(base);
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &b;
        }
        exp >>= 1;
        if exp > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Value of one general bound together with its conventions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub method: Method,
    /// Exact value; `None` only when it is too large to be worth
    /// materializing (such values are always `omega`).
    pub value: Option<BigCount>,
    pub omega: bool,
    /// `a.bc×10^e`, or `Ω` when `omega`.
    pub rendering: String,
    pub exp_mode: ExpMode,
    pub gamma_mode: Option<GammaMode>,
    pub variant: Option<Bt2013Variant>,
    pub reconstructed: bool,
    expr: BoundExpr,
}

impl BoundResult {
    fn from_expr(
        method: Method,
        expr: BoundExpr,
        exp_mode: ExpMode,
        gamma_mode: Option<GammaMode>,
        variant: Option<Bt2013Variant>,
        rounding: Rounding,
    ) -> Self {
        let value = (!expr.is_huge()).then(|| expr.evaluate());
        let omega = value.as_ref().is_none_or(omega_check);
        let rendering = match &value {
            Some(v) if !omega => render_scientific(v, rounding),
            _ => "Ω".to_string(),
        };
        let reconstructed = exp_mode == ExpMode::FloorPlusOne
            || matches!(gamma_mode, Some(GammaMode::DesignatedPair(..)))
            || variant == Some(Bt2013Variant::Tabulated);
        BoundResult {
            method,
            value,
            omega,
            rendering,
            exp_mode,
            gamma_mode,
            variant,
            reconstructed,
            expr,
        }
    }

    /// Exact value, computed on demand when it was not materialized.
    pub fn exact_value(&self) -> BigCount {
        self.value.clone().unwrap_or_else(|| self.expr.evaluate())
    }

    /// The exponent `k` used for `q^k`.
    pub fn exponent(&self) -> &BigCount {
        &self.expr.exponent
    }

    /// Re-renders the value under another rounding rule.
    pub fn render(&self, rounding: Rounding) -> String {
        match &self.value {
            Some(v) if !self.omega => render_scientific(v, rounding),
            _ => "Ω".to_string(),
        }
    }

    /// Table-style cell: the exact integer below `10^7`, else the rendering.
    pub fn cell(&self, rounding: Rounding) -> String {
        match &self.value {
            Some(v) if !self.omega && *v < BigCount::from(10_000_000u32) => v.to_string(),
            _ => self.render(rounding),
        }
    }
}

fn gamma(ty: &ShfType, mode: GammaMode) -> Result<u64> {
    let (a, b) = match mode {
        GammaMode::TwoSmallest => (ty.blocks()[0], ty.blocks()[1]),
        GammaMode::DesignatedPair(a, b) => {
            let mut rest = ty.blocks().to_vec();
            for w in [a, b] {
                let Some(pos) = rest.iter().position(|&x| x == w) else {
                    return domain(format!(
                        "designated pair ({a},{b}) is not contained in type {ty}"
                    ));
                };
                rest.remove(pos);
            }
            (a, b)
        }
    };
    let (a, b, u) = (a as u64, b as u64, ty.u() as u64);
    Ok(a * b + u - a - b)
}

/// `gamma * q^k` with `gamma = w1*w2 + u - w1 - w2`.
pub fn besz_bound(
    budget: &BigCount,
    q: u64,
    ty: &ShfType,
    gamma_mode: GammaMode,
    exp_mode: ExpMode,
    rounding: Rounding,
) -> Result<BoundResult> {
    check_q(q)?;
    let expr = BoundExpr {
        coefficient: BigCount::from(gamma(ty, gamma_mode)?),
        q,
        exponent: exp_mode.exponent(budget, ty.u() as u64),
        sqrt_correction: false,
    };
    Ok(BoundResult::from_expr(
        Method::Besz,
        expr,
        exp_mode,
        Some(gamma_mode),
        None,
        rounding,
    ))
}

/// `(u-1) * q^k`.
pub fn baztran2011_bound(
    budget: &BigCount,
    q: u64,
    ty: &ShfType,
    exp_mode: ExpMode,
    rounding: Rounding,
) -> Result<BoundResult> {
    check_q(q)?;
    let u = ty.u() as u64;
    let expr = BoundExpr {
        coefficient: BigCount::from(u - 1),
        q,
        exponent: exp_mode.exponent(budget, u),
        sqrt_correction: false,
    };
    Ok(BoundResult::from_expr(
        Method::Bt2011,
        expr,
        exp_mode,
        None,
        None,
        rounding,
    ))
}

/// The 2013 bound; requires `t >= 3` and `u >= 4`.
pub fn baztran2013_bound(
    budget: &BigCount,
    q: u64,
    ty: &ShfType,
    exp_mode: ExpMode,
    variant: Bt2013Variant,
    rounding: Rounding,
) -> Result<BoundResult> {
    check_q(q)?;
    if ty.t() < 3 {
        return Err(ShfError::Hypothesis(format!(
            "t = {} must be at least 3",
            ty.t()
        )));
    }
    let u = ty.u() as u64;
    if u < 4 {
        return Err(ShfError::Hypothesis(format!("u = {u} must be at least 4")));
    }
    let expr = BoundExpr {
        coefficient: BigCount::from(u - 1),
        q,
        exponent: exp_mode.exponent(budget, u),
        sqrt_correction: variant == Bt2013Variant::Tabulated,
    };
    Ok(BoundResult::from_expr(
        Method::Bt2013,
        expr,
        exp_mode,
        None,
        Some(variant),
        rounding,
    ))
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return domain(format!("q = {q} must be at least 2"));
    }
    Ok(())
}

/// `2^1024 - 2^971`, the largest finite IEEE double as an exact integer.
pub fn double_max() -> BigCount {
    (BigUint::one() << 1024u32) - (BigUint::one() << 971u32)
}

/// True iff the value exceeds the largest finite IEEE double.
pub fn omega_check(value: &BigCount) -> bool {
    if value.bits() <= 1023 {
        return false;
    }
    *value > double_max()
}

/// `a.bc×10^e` with three significant digits.
pub fn render_scientific(value: &BigCount, rounding: Rounding) -> String {
    if value.is_zero() {
        return "0.00×10^0".to_string();
    }
    let digits = value.to_string();
    let mut exp = digits.len() - 1;
    let bytes = digits.as_bytes();
    let mut head: u32 = (0..3)
        .map(|i| bytes.get(i).map_or(0, |b| u32::from(b - b'0')))
        .fold(0, |acc, d| acc * 10 + d);
    let rest = digits.get(3..).unwrap_or("");
    if rounding == Rounding::HalfEven {
        let round_up = match rest.as_bytes().first() {
            None => false,
            Some(&d) if d > b'5' => true,
            Some(&d) if d < b'5' => false,
            Some(_) => rest.bytes().skip(1).any(|d| d != b'0') || head % 2 == 1,
        };
        if round_up {
            head += 1;
            if head == 1000 {
                head = 100;
                exp += 1;
            }
        }
    }
    format!("{}.{:02}×10^{}", head / 100, head % 100, exp)
}
