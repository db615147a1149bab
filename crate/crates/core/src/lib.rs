//! Separating hash families of type `{w1^(q-1), w2}`: exact counting,
//! the optimal construction, exhaustive verification, and bounds.

pub mod bigcomb;
pub mod bounds;
pub mod cli;
pub mod constructor;
pub mod error;
pub mod model;
pub mod report;
pub mod table;
pub mod verifier;

pub use bigcomb::BigCount;
pub use error::{Result, ShfError};
pub use model::{ColumnFamily, RepMatrix, RowWeight, ShfParams, ShfType};
pub use verifier::Verdict;
