//! Finite topological structures indexed by unitary magmas.
//!
//! The central object is the fibrous preorder: a finite carrier together with
//! a family of relations indexed by a unitary magma and a witness map tying
//! the family together. Such a system induces a topology on the carrier, and
//! the crate provides lossless conversions between four equivalent
//! presentations of the same data (relation family, neighborhood map, ternary
//! relation with witnesses, open-neighborhood assignment), constructors that
//! realize preorders, rational pseudometrics, groups with a distinguished
//! subset, lax Mal'tsev operations and monoid scaling families as fibrous
//! preorders, and exact rational queries for a few classical example spaces.
//!
//! Everything is exact: rationals are arbitrary-precision, searches are
//! exhaustive, and every "first witness" tie-break follows the declared
//! element order, so all outputs are deterministic.

pub mod carrier;
pub mod constructors;
pub mod examples;
pub mod fibrous;
pub mod imodule;
pub mod magma;
pub mod rational;
pub mod repr;
pub mod topology;

pub use carrier::{Carrier, CarrierError, Subset};
pub use fibrous::{check_morphism, AxiomReport, FibrousError, FibrousPreorder, MorphismReport};
pub use magma::{MagmaError, MagmaKind, UnitaryMagma};
pub use rational::{format_ratio, parse_ratio, Rational};
pub use topology::{FiniteTopology, Preorder, TopologyError};

/// Default cap on carrier size for exhaustive all-subsets scans.
pub const EXHAUSTIVE_BOUND_DEFAULT: usize = 12;
