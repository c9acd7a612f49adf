//! Exact arithmetic for coloured Neretin groups.
//!
//! The crate covers the finite, computable side of the theory: colour groups, the
//! coloured tree and its plane orders, tree-pair elements of `V_F`, the shift of
//! finite type on the graph attached to the orbit sizes of `F`, Smith normal forms
//! for the abelianization, and the cardinality estimates behind the nonexistence of
//! lattices.

pub mod abelian;
pub mod almostauto;
pub mod interval;
pub mod io;
pub mod lattice;
pub mod permgrp;
pub mod sampling;
pub mod selftest;
pub mod sftbridge;
pub mod tree;

pub use almostauto::{ElementError, FinitaryElement, SignMode, SignTarget, SignValue, TreePairElement};
pub use permgrp::{Colour, ColourGroup, Permutation};
pub use tree::{CompleteSubtree, PlaneOrder, VertexAddress};
