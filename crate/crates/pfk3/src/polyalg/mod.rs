//! Commutative algebra over F_p: polynomial rings, Groebner bases for
//! ideals and submodules of free modules, Hilbert series, saturation,
//! syzygies, univariate factorization, and zero-dimensional solving.

pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod module;
pub mod qpoly;
pub mod ring;
pub mod solve;
pub mod univar;

pub use groebner::{GroebnerBasis, VecPoly};
pub use hilbert::HilbertData;
pub use ideal::{GradedIdeal, LinearReduction};
pub use qpoly::QPoly;
pub use ring::{parse_poly, Mon, MonomialOrder, MultiPoly, PolyRing, MAX_VARS};
pub use univar::UPoly;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    /// A computation exceeded its budget (basis size, reduction count, or
    /// wall clock).  Budgets fail loudly; they never degrade into a wrong
    /// answer.
    #[error("resource budget exceeded during {0}")]
    ResourceExhausted(String),
    #[error("expected a homogeneous input in {0}")]
    NotHomogeneous(String),
    #[error("ideal is not zero-dimensional: {0}")]
    NotZeroDimensional(String),
    /// Independent affine charts disagreed on a quantity that must be
    /// chart-invariant; indicates a genuine degeneracy, never patched over.
    #[error("affine charts disagree: {0}")]
    ChartDisagreement(String),
    #[error("retries exhausted: {0}")]
    RetriesExhausted(String),
    #[error("inconsistent input: {0}")]
    BadInput(String),
}
