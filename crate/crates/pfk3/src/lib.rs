//! Exact computational toolkit for Pfaffian cubic fourfolds and the K3
//! surfaces of isotropic 2-planes attached to them.
//!
//! A sampled instance consists of six skew bilinear forms on a 6-dimensional
//! vector space over a large prime field F_p.  From these the toolkit builds
//! the cubic fourfold cut out by the Pfaffian of the generic member, the K3
//! surface of common isotropic 2-planes inside the Grassmannian Gr(2,6), and
//! the incidence correspondence between them, and it certifies the expected
//! geometry (degree-4 fibers, flatness evidence, smoothness samples) with
//! exact Groebner computations.  A separate module checks the numerical
//! K-theory shadow of the mutation functors, and another exercises the
//! classical determinantal description of twisted cubics on cubic surfaces.
//!
//! All arithmetic is exact: F_p with 64-bit residues, or arbitrary-precision
//! rationals.  Every randomized search is driven by an explicit 64-bit-state
//! PRNG seeded from caller-supplied seeds, so all outputs are reproducible
//! bit for bit.

pub mod config;
pub mod exactmath;
pub mod parallel;
pub mod polyalg;

pub mod construction;
pub mod correspondence;
pub mod detcubics;
pub mod ktheory;
pub mod report;
pub mod verify;

pub use config::Budget;
pub use exactmath::fp::Fp;
pub use exactmath::rng::SplitMix64;
