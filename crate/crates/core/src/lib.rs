//! Toric degenerations of SL3 conformal blocks.
//!
//! Local semigroups over a trinode (`local`), their gluing over a trivalent
//! graph (`global`), the classical invariant ring they degenerate from
//! (`classical`), structural checks (`analysis`) and the Verlinde formula
//! (`verlinde`) as an independent dimension count.

pub mod analysis;
pub mod classical;
pub mod error;
pub mod global;
pub mod graphs;
pub mod local;
pub mod verlinde;
pub mod weights;

pub use error::{AnalysisError, GlobalError, GraphError, LocalError, ParseWeightError, VerlindeError};
pub use global::{assemble, global_dim, hilbert_function, GlobalPoint};
pub use graphs::{parse_graph, TrivalentGraph};
pub use local::{Boundary, Generator, LocalPoint, Rep};
pub use weights::Weight;
