//! Exact analysis of one-round War.
//!
//! Each player holds `N` of the cards `1..=2N`. Player 2 knows only the rank
//! of each card within both hands and chooses a permutation pairing his ranks
//! against player 1's. Everything below is exact: trick probabilities are
//! integers over `C(2N, N)`, optimal strategies are found by closed formulas
//! and checked against independent oracles, and transcendental bounds are
//! decided with certified interval arithmetic.
//!
//! ```
//! use oneround::{objective, no_gap_strategy, TrickMatrix};
//!
//! let p = TrickMatrix::stern(7).unwrap();
//! let best = no_gap_strategy(7, 2).unwrap();
//! assert_eq!(objective(&p, &best).unwrap(), 15148.into());
//! ```

pub mod certified;
pub mod combinatorics;
pub mod error;
pub mod matrix;
pub mod optimal;
pub mod oracles;
pub mod report;
pub mod simulate;
pub mod strategy;

pub use combinatorics::{binomial, pascal_row, prefix_sum_row, BigRational};
pub use error::{Error, Result};
pub use matrix::{verify_structural_lemmas, BuildMethod, TrickMatrix};
pub use oracles::{exhaustive_optimal, lap_optimal, Deal, OptimumResult};
pub use report::VerificationReport;
pub use strategy::{majority_strategy, no_gap_strategy, objective, strategy_from_string, Strategy, ThrowString};
