//! Reduction from bounded-occurrence Max-2-CSAT to maximum clique in 3-track
//! interval graphs, with exact solvers on both sides and a harness that
//! checks the reduction's guarantees on concrete instances.
//!
//! Pipeline: [`SatInstance`] → [`gadgetize`] → [`CsatInstance`] →
//! [`construct_tracks`] → [`TrackFamily`] → [`collapse_twins`] →
//! [`max_clique_bb`].

pub mod formulas;
pub mod intervals;
pub mod io;
pub mod reductions;
pub mod render;
pub mod solvers;
pub mod verify;

pub use formulas::{
    brute_force_opt, evaluate, validate, Assignment, Clause, CsatInstance, Formula, Literal,
    SatInstance,
};
pub use intervals::{
    build_graph, collapse_twins, IntersectionGraph, MultiTrackInterval, OpenInterval, Tag,
    TrackFamily, VertexClass,
};
pub use reductions::{
    assignment_to_clique, canonicalize_clique, clique_to_assignment, construct_tracks, gadgetize,
    CliqueWitness, GadgetMap,
};
pub use solvers::{max_clique_bb, max_clique_enum, CliqueSolution};
