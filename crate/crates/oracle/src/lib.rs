//! Classical cross-checks for tropical inflection components: Puiseux-coefficient curves,
//! symbolic Hessians, and numeric inflection points at a small instantiated `t`.

pub mod classical;
pub mod error;
pub mod exact;
pub mod hessian;
pub mod mp;
pub mod mpoly;
pub mod numeric;
pub mod verify;

pub use classical::ClassicalCurve;
pub use error::{OracleError, Result};
pub use hessian::{check_hessian_tropicalization, hessian_poly, initial_forms_commute};
pub use numeric::{numeric_inflections, NumericReport, Realness};
pub use verify::{verify_counts, VerificationReport};
