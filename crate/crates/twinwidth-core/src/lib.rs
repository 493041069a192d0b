//! Twin-width toolkit for subdivisions of multigraphs.
//!
//! The crate is organised around a small number of certificate-checked
//! primitives:
//!
//! * [`trigraph`] — trigraphs (black/red edge partition), the contraction
//!   operation and an independent verifier for (partial) d-contraction
//!   sequences.
//! * [`graph`] — multigraphs, subdivisions, and constructors for every named
//!   graph and gadget the toolkit works with.
//! * [`minor`] — minor containment with explicit witnesses, the obstruction
//!   family tests, and segregated models.
//! * [`decomp`] — tree decompositions, bag classification, addable sets and
//!   the 3-contractible construction.
//! * [`solve`] — an exact/bounded twin-width solver used as the ground-truth
//!   oracle.
//! * [`synth`] — synthesis of verified contraction sequences for subdivisions,
//!   grids, walls and the extremal family.
//!
//! The crate is `no_std` (with `alloc`); all collections are B-tree based so
//! iteration order, and hence every synthesized sequence, is deterministic.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod decomp;
pub mod graph;
pub mod iso;
pub mod minor;
pub mod solve;
pub mod synth;
pub mod trigraph;

pub use graph::{EdgeId, Multigraph};
pub use trigraph::{Color, ContractionSequence, ContractionStep, Trigraph, VertexId};
