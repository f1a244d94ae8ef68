//! Exact enumeration for the generalized factor order on words over the
//! positive integers.
//!
//! - [`words`]: the word type, embeddings, permutation and composition families
//! - [`skyline`]: rigid shifts, reversal and shift-equivalence classes
//! - [`polyring`]: truncated trivariate series with big-integer coefficients
//! - [`clusters`]: minimal clusters, the profile automaton, the series
//!   `M_u`, `C_u`, `A_u` and the exact strong Wilf equivalence test
//! - [`equivalence`]: bulk classification and split-class search

pub mod clusters;
pub mod equivalence;
pub mod error;
pub mod polyring;
pub mod skyline;
pub mod words;

pub use clusters::{
    brute_force_a, build_automaton, m_level_dp, m_level_enum, minimal_cluster, series_a, series_c,
    series_m, strong_wilf_by_levels, strong_wilf_equivalent, ClusterAutomaton, MarkedCluster,
    Method, OverlapProfile, SweCertificate, Witness,
};
pub use equivalence::{
    class_count_sequence, find_swe_not_shift, partition, EquivalenceReport, Relation, SearchReport,
    SplitClass, SplitPair, Universe,
};
pub use error::{Error, Result};
pub use polyring::{Monomial, TriPoly};
pub use skyline::{
    apply_shift, enumerate_shifts, is_valid_shift, render, reverse, shift_class, RenderFormat,
    RigidShift, ShiftClass,
};
pub use words::{
    embeddings, eta, generate_by_sum, generate_permutations, is_rearrangement, parse_word,
    EmbeddingSet, Word,
};
