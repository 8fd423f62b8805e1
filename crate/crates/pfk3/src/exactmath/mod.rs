//! Exact linear and multilinear algebra over F_p: prime-field scalars,
//! dense matrices, skew bilinear forms with their Pfaffians and radicals,
//! and Pluecker coordinates on Gr(2,6) with the wedge pairings.

pub mod fp;
pub mod matrix;
pub mod plucker;
pub mod rng;
pub mod skew;

pub use fp::Fp;
pub use matrix::Matrix;
pub use plucker::{wedge, wedge4, FourForm, PluckerVector, PAIRS, QUADS};
pub use rng::SplitMix64;
pub use skew::SkewForm;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("matrix is not skew-symmetric (entry ({i},{j}) vs ({j},{i}))")]
    NotSkew { i: usize, j: usize },
    #[error("matrix is not alternating: nonzero diagonal entry at {i}")]
    NonzeroDiagonal { i: usize },
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    BadDimensions {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("Pluecker vector is not decomposable")]
    NotDecomposable,
}
