//! Minimal walks on ordinals below ε₀ and the strong colorings derived from
//! walking along coherent C-sequences.
//!
//! * [`ordinal`]: exact Cantor-normal-form arithmetic.
//! * [`cseq`]: lazily queried C-sequence builders.
//! * [`walks`]: traces, ρ₂, λ, λ₂ and η-indices.
//! * [`coloring`]: the painter `h`, the colorings `d` and `c`, and witness
//!   searches over finite disjoint families.
//! * [`harness`]: sampling, experiments, property suites and reports.

pub mod coloring;
pub mod cseq;
pub mod harness;
pub mod ordinal;
pub mod walks;

pub use cseq::{CSeq, CSeqBuilder, CSeqKind};
pub use ordinal::Ordinal;
pub use walks::{walk, WalkResult};
