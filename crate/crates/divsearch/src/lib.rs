//! Membership search in tables consistent with the division poset.
//!
//! `P_n = {1, …, n}` ordered by divisibility; a table `a_1, …, a_n` of
//! distinct reals is *consistent* with `P_n` when `i | j` implies
//! `a_i < a_j`. Given a probe value `x`, the problem is to decide whether
//! `x` equals some table entry using as few three-way comparisons
//! `x : a_i` as possible.
//!
//! The crate provides both sides of the question plus the machinery to
//! check them against each other:
//!
//! - [`divposet`] — chains, the 2×3-power layer decomposition, unit
//!   classification and the special-unit index sets.
//! - [`search`] — counting search algorithms: per-chain binary search,
//!   the `m+n−1` monotone-grid subroutine, the `m+n−2` layer search and
//!   the layer-by-layer table search, with exact comparison budgets.
//! - [`adversary`] — the response strategies `RS1`/`RS2`/`RS2*` as
//!   adaptive oracles, essential-element sets and forced-comparison
//!   counters.
//! - [`tablegen`] — consistent-table generation, transcript-feasibility
//!   witnesses and early-stop refutation.
//! - [`exact`] — brute-force minimax values `τ(n)` for small `n` and
//!   optimal decision-tree export.

// divisibility tests read better spelled with `%` in this codebase
#![allow(clippy::manual_is_multiple_of)]

pub mod adversary;
pub mod divposet;
pub mod exact;
pub mod search;
pub mod suites;
pub mod tablegen;
