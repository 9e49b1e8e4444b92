//! Exact computations with equivariant vector bundles on the projective line.
//!
//! Bundles are glued from the two standard charts by a Laurent-polynomial transition
//! matrix `T(z)`; a global section is a pair `(s₀(z), s_∞(w))` of polynomial vectors with
//! `s₀(z) = T(z)·s_∞(1/z)`, so `T = z^n` is the line bundle `O(n)`. Finite abelian groups act
//! through monomial Möbius maps, and equivariant structures are cocycles of bundle maps.

pub mod bundle;
pub mod classify;
pub mod equivariant;
pub mod error;
pub mod exactalg;
pub mod fuzz;
pub mod group;

pub use bundle::{HNData, ModelIso, SplittingType, VectorBundle};
pub use classify::{
    build_structure, decompose, verify_certificate, Block, DecompositionCertificate, ModelStructure,
};
pub use equivariant::{
    canonical_structure, existence, is_bundle_map, structure_quotient, structures_equivalent, Canonical,
    EquivariantStructure,
};
pub use error::{Error, Result};
pub use exactalg::{CycNum, LaurentMatrix, LaurentPoly, Matrix, Point, Rational};
pub use group::{Acting, Character, GroupElement, GroupKind, GroupSpec, LiftedElement, Moebius, ProjPoint};
