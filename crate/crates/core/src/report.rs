//! JSON report schemas. Every key is always present; absent values are
//! `null`, and big integers are decimal strings.

use serde::Serialize;

use crate::bounds::{BoundResult, Bt2013Variant, ExpMode, GammaMode, ImpliedN};
use crate::verifier::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub ok: bool,
    /// 0-indexed column lists of the unseparated family.
    pub witness: Option<Vec<Vec<usize>>>,
    pub families_checked: String,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        VerdictReport {
            ok: v.ok,
            witness: v.witness.as_ref().map(|w| w.parts().to_vec()),
            families_checked: v.families_checked.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// A lower bound on the number of rows `N`.
    MinRows,
    /// An upper bound on the number of columns `n`.
    MaxColumns,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub method: &'static str,
    pub quantity: Quantity,
    /// Exact decimal value; `null` when there is no bound or the value was
    /// too large to materialize.
    pub value: Option<String>,
    pub no_bound: bool,
    pub omega: bool,
    pub rendering: String,
    pub exp_mode: Option<ExpMode>,
    pub gamma_mode: Option<GammaMode>,
    pub variant: Option<Bt2013Variant>,
    pub reconstructed: bool,
}

impl BoundReport {
    pub fn min_rows(method: &'static str, value: &num_bigint::BigUint, rendering: String) -> Self {
        BoundReport {
            method,
            quantity: Quantity::MinRows,
            value: Some(value.to_string()),
            no_bound: false,
            omega: crate::bounds::omega_check(value),
            rendering,
            exp_mode: None,
            gamma_mode: None,
            variant: None,
            reconstructed: false,
        }
    }

    pub fn implied(method: &'static str, implied: ImpliedN) -> Self {
        let (value, no_bound) = match implied {
            ImpliedN::AtMost(n) => (Some(n.to_string()), false),
            ImpliedN::NoBound => (None, true),
        };
        BoundReport {
            method,
            quantity: Quantity::MaxColumns,
            rendering: implied.to_string(),
            value,
            no_bound,
            omega: false,
            exp_mode: None,
            gamma_mode: None,
            variant: None,
            reconstructed: false,
        }
    }

    pub fn general(method: &'static str, r: &BoundResult) -> Self {
        BoundReport {
            method,
            quantity: Quantity::MaxColumns,
            value: r.value.as_ref().map(ToString::to_string),
            no_bound: false,
            omega: r.omega,
            rendering: r.rendering.clone(),
            exp_mode: Some(r.exp_mode),
            gamma_mode: r.gamma_mode,
            variant: r.variant,
            reconstructed: r.reconstructed,
        }
    }
}
