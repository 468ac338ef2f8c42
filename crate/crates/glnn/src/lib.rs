//! Exact combinatorics of maximal atypical irreducible representations of
//! the general linear supergroup GL(n|n), and tensor product decompositions
//! modulo negligible summands via classical Lie-group fusion.
//!
//! A maximal atypical highest weight is a weakly decreasing integer vector
//! `[λ1,…,λn]`. Everything else is derived from it: the cup diagram of its
//! support, the sector invariants, the Duflo–Serganova derivative, signed
//! superdimensions, the determinant exponent, the Tannaka group of the image
//! in the semisimplified category, and fusion rules for tensor products.

pub mod cli;
pub mod diagrams;
pub mod ds;
pub mod fusion;
pub mod tannaka;
pub mod weights;

pub use diagrams::{
    are_equivalent, associated_basic, class_key, cup_diagram, depth, dual_class_rep,
    enumerate_basic, is_basic, is_weakly_selfdual, lambda_c, lambda_zero, projective_possible,
    sectors, transpose_basic, BasicWeight, CupDiagram, Sector, SectorProfile,
};
pub use ds::{det_berezin_power, ds, ds_iterate, ell, left_moves, sdim, DerivativeSummand, SignedDimension};
pub use fusion::{
    klimyk_tensor, tensor_mod_negligible, weight_system, weyl_dimension, ClassicalWeight,
    FusionCache, RootSystem, RootType, SuperTensor, TensorDecomposition, TensorTerm,
};
pub use tannaka::{branching, classify, duality_type, enumerate_classes, DualityType, GroupFamily, Pairing, TannakaGroup};
pub use weights::{DominantWeight, Support, Weight, WeightError};
