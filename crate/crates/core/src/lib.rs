//! Zero forcing parameters of general graphs and their walk-counting power
//! multigraphs, and the constraint pipelines that use them to rule out
//! ordered eigenvalue multiplicity lists.

pub mod appendix;
pub mod bounds;
pub mod catalog;
pub mod config;
pub mod data;
pub mod error;
pub mod forcing;
pub mod graph;
pub mod mlist;
pub mod numeric;
pub mod power;
pub mod skew;
pub mod symmetric;
pub mod verdict;

pub use config::{PairState, PartialConfiguration, DEFAULT_EXHAUST_THRESHOLD};
pub use error::{Error, Result};
pub use forcing::{
    available_forces, case_split_bounds, closure, is_forcing_set, max_over_completions,
    min_forcing_number, CaseBound, ColorState, ForcingRule, Mode, ParameterResult, SearchOptions,
};
pub use graph::{
    canonical_form, canonical_graph, canonical_labeling, enumerate_connected, find_isomorphism,
    CanonicalForm, GeneralGraph, LoopState, PairClass, VertexSet,
};
pub use power::{gamma_lazy, gamma_walks, PowerMultigraph, WalkSpec};
