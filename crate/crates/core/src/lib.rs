//! Finite-player incomplete-information games where players may disagree
//! about how signals and opponent types are distributed.
//!
//! Each player carries a belief kernel: a stochastic row per own type over
//! joint (state, opponent-type) cells. The library tests whether those
//! kernels are mutually consistent with some common prior, measures how far
//! they are from consistency, reweights payoffs against a dominating product
//! measure to build an auxiliary complete-information-style game, solves that
//! game, and converts its equilibria back into exact Bayesian equilibria of
//! the original game by repairing rows at measure-null types.
//!
//! Module map:
//! - [`game`]: grids, payoff tensors, belief kernels, strategy profiles,
//!   validation.
//! - [`expr`]: a small closed-form payoff expression language with exact
//!   tabulation onto grids.
//! - [`measure`]: absolute continuity, Radon-Nikodym density tables, common
//!   prior search, belief reconstruction from a prior.
//! - [`interim`]: interim action values and payoffs, reweighted payoff
//!   grids, surrogate payoffs.
//! - [`solver`]: best responses, iterated best response, smoothed fictitious
//!   play, exact pure-profile enumeration.
//! - [`equilibrium`]: regret reports, repair of almost-equilibria into exact
//!   ones, certification routines for the equilibrium characterization.
//! - [`scenarios`]: reference game families (coordination with outside
//!   option, public-good provision, Cournot competition, Gaussian belief
//!   discretizations, seeded random games).

pub mod equilibrium;
pub mod error;
pub mod expr;
pub mod game;
pub mod interim;
pub mod measure;
pub mod numeric;
pub mod scenarios;
pub mod solver;

pub use error::Error;
pub use game::{
    BehavioralStrategy, BeliefKernel, FiniteGame, Grid, ProductMeasure, StrategyProfile,
    ValidationReport,
};
