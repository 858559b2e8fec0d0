//! Polynomial invariant and filamentations of flat virtual links.
//!
//! Links are given by Gauss codes ([`gauss`]). The invariant assembles a
//! per-component polynomial and a linear term per pair of components
//! ([`invariant`]); [`filament`] decides whether a filamentation exists;
//! [`moves`] applies flat Reidemeister moves for invariance testing; and
//! [`genlab`] generates, enumerates and searches small codes.

pub mod error;
pub mod filament;
pub mod gauss;
pub mod genlab;
pub mod invariant;
pub mod moves;
pub mod poly;

pub use error::{Error, Result};
pub use filament::{
    brute_force_filamentation, component_filamentation, elementary_switch,
    greedy_zero_sum_partition, link_filamentation, verify_filamentation, Filamentation, Violation,
    ZeroSumPartition,
};
pub use gauss::{
    codes_equivalent_syntactically, parse_flat_link, render_flat_link, validate, Codeword,
    CrossingCatalog, CrossingInfo, CrossingKind, FlatLinkCode, Letter, Link, Position, Sign,
};
pub use genlab::{
    enumerate_small_codes, random_flat_link, search_examples, GenSpec, SearchGoal, SearchLimits,
    Witness,
};
pub use invariant::{
    choose_pair_partition, flat_linking_diff, invariants_equal, link_polynomial, pair_coefficient,
    self_polynomial, LinkInvariant, PairPartition,
};
pub use moves::{apply_move, find_move_sites, random_walk, MoveKind, MoveSite, WalkPolicy};
pub use poly::SparsePoly;
