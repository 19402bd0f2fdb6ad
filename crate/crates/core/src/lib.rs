//! Numerical models of the noncommutative disk algebra `A_d` and its
//! quotients by graded ideals.
//!
//! The free algebra lives in [`freealg`]; [`fock`] truncates the full Fock
//! space at a degree cutoff and builds creation operators, saturated ideal
//! bases and the compressed tuple `s^I`; [`norms`] computes quotient norms
//! and brackets; [`deform`] follows families `I_t` and the radius-scaling
//! tower; [`ncfunc`] evaluates on matrix tuples; [`suite`] bundles the
//! property checks.

// NaN must fail every positivity check, hence `!(x > 0.0)` throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deform;
pub mod error;
pub mod fock;
pub mod freealg;
pub mod linalg;
pub mod ncfunc;
pub mod norms;
pub mod suite;

pub use error::{Error, Result};
pub use fock::{CompressedTuple, FockVector, GradedIdealBasis, TruncatedFock};
pub use freealg::{FreePoly, TermRecord, Word};
pub use ncfunc::MatrixTuple;
pub use norms::NormBracket;

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order follows input order, and the reported error is the one for
/// the earliest failing item regardless of scheduling.
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let results: Vec<Result<U>> = {
        use rayon::prelude::*;
        items.par_iter().map(&f).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<U>> = items.iter().map(&f).collect();
    results.into_iter().collect()
}
