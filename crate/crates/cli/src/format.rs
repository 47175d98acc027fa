//! JSON file formats and report documents for the command-line tools.
//!
//! Games and strategies travel as plain JSON so they stay diffable and
//! toolchain-neutral. Numbers are emitted in shortest round-trip form, so
//! reloading a document reproduces the exact binary values. Every report
//! printed by a command deserializes back through the types in this module.

use priorless_core::error::Error;
use priorless_core::expr::{parse_expr, tabulate};
use priorless_core::game::{
    BehavioralStrategy, BeliefKernel, FiniteGame, Grid, ProductMeasure, StrategyProfile,
};
use priorless_core::measure::ConsistencyResult;
use priorless_core::scenarios::{
    discretize_gaussian_beliefs, truncated_normal_masses, GaussianBeliefSpec, TruncatedNormalSpec,
};
use serde::{Deserialize, Serialize};

/// One state grid point with a display label.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub label: String,
    pub value: f64,
}

/// Payoff given as an expression over `s`, `t1..tn`, `a1..an`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprPayoff {
    pub expr: String,
}

/// Payoff given as a flat tensor in canonical `(s, t, a)` order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablePayoff {
    pub table: Vec<f64>,
}

/// One player's payoff block: exactly one of the two encodings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PayoffSpec {
    Expr(ExprPayoff),
    Table(TablePayoff),
}

/// Belief kernel given as a row-major flat table, one row per own type
/// over `(state, opponent type)` cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableBelief {
    pub table: Vec<f64>,
}

/// Belief kernel discretized from a conditional Gaussian family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianBelief {
    pub gaussian: GaussianBeliefSpec,
}

/// Belief kernel over the opponent's type grid from a truncated normal
/// centered at the believer's own type. Requires a single-state game.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncnormBelief {
    pub truncnorm: TruncatedNormalSpec,
}

/// One player's belief block: exactly one of the three encodings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BeliefSpec {
    Table(TableBelief),
    Gaussian(GaussianBelief),
    Truncnorm(TruncnormBelief),
}

/// A product reference measure: one distribution over states and one over
/// each player's types.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub s: Vec<f64>,
    pub t: Vec<Vec<f64>>,
}

impl MeasureSpec {
    /// Validates shape and stochasticity against `game` and returns the
    /// finalized measure.
    pub fn to_measure(&self, game: &FiniteGame) -> Result<ProductMeasure, Error> {
        let mut nu = ProductMeasure {
            state: self.s.clone(),
            types: self.t.clone(),
        };
        nu.finalize(game)?;
        Ok(nu)
    }

    pub fn from_measure(nu: &ProductMeasure) -> Self {
        MeasureSpec {
            s: nu.state.clone(),
            t: nu.types.clone(),
        }
    }
}

/// Top-level game document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    pub states: Vec<StateEntry>,
    /// Per-player type grids.
    pub types: Vec<Vec<f64>>,
    /// Per-player action grids.
    pub actions: Vec<Vec<f64>>,
    /// Per-player payoff blocks.
    pub payoffs: Vec<PayoffSpec>,
    /// Per-player belief blocks.
    pub beliefs: Vec<BeliefSpec>,
    /// Optional reference measure carried with the game; commands use it
    /// when invoked with `--nu embedded`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<MeasureSpec>,
}

fn count_check(what: &str, expected: usize, got: usize) -> Result<(), Error> {
    if expected != got {
        return Err(Error::DimensionMismatch {
            what: what.into(),
            expected,
            got,
        });
    }
    Ok(())
}

impl GameFile {
    /// Builds the raw game without finalizing, so callers can run the full
    /// validation report and surface every violation at once. Expression
    /// payoffs are tabulated and parametric beliefs discretized here; those
    /// steps can fail on their own preconditions.
    pub fn build_raw(&self) -> Result<FiniteGame, Error> {
        if self.players == 0 {
            return Err(Error::invalid("a game needs at least one player"));
        }
        if self.states.is_empty() {
            return Err(Error::invalid("a game needs at least one state"));
        }
        let n = self.players;
        count_check("type grids", n, self.types.len())?;
        count_check("action grids", n, self.actions.len())?;
        count_check("payoff blocks", n, self.payoffs.len())?;
        count_check("belief blocks", n, self.beliefs.len())?;

        let state_grid = Grid::new(self.states.iter().map(|s| s.value).collect());
        let type_grids: Vec<Grid> = self.types.iter().map(|v| Grid::new(v.clone())).collect();
        let action_grids: Vec<Grid> = self.actions.iter().map(|v| Grid::new(v.clone())).collect();

        let mut payoffs = Vec::with_capacity(n);
        for spec in &self.payoffs {
            payoffs.push(match spec {
                PayoffSpec::Expr(e) => {
                    let ast = parse_expr(&e.expr, n)?;
                    tabulate(&ast, &state_grid, &type_grids, &action_grids)?
                }
                PayoffSpec::Table(t) => t.table.clone(),
            });
        }

        let mut beliefs = Vec::with_capacity(n);
        for (i, spec) in self.beliefs.iter().enumerate() {
            beliefs.push(match spec {
                BeliefSpec::Table(t) => {
                    let rows = self.types[i].len();
                    let cols = self.states.len()
                        * (0..n)
                            .filter(|&j| j != i)
                            .map(|j| self.types[j].len())
                            .product::<usize>();
                    BeliefKernel::new(rows, cols, t.table.clone())?
                }
                BeliefSpec::Gaussian(gb) => {
                    if n != 2 {
                        return Err(Error::Incompatible(format!(
                            "gaussian beliefs are defined for two players, game has {n}"
                        )));
                    }
                    discretize_gaussian_beliefs(
                        &gb.gaussian,
                        &state_grid,
                        &type_grids[1 - i],
                        &type_grids[i],
                    )?
                }
                BeliefSpec::Truncnorm(tb) => {
                    if n != 2 {
                        return Err(Error::Incompatible(format!(
                            "truncated normal beliefs are defined for two players, game has {n}"
                        )));
                    }
                    if self.states.len() != 1 {
                        return Err(Error::Incompatible(format!(
                            "truncated normal beliefs require a single state, game has {}",
                            self.states.len()
                        )));
                    }
                    let own = &self.types[i];
                    let opp = &self.types[1 - i];
                    let mut data = Vec::with_capacity(own.len() * opp.len());
                    for &mean in own {
                        data.extend(truncated_normal_masses(&tb.truncnorm, mean, opp)?);
                    }
                    BeliefKernel::new(own.len(), opp.len(), data)?
                }
            });
        }

        Ok(FiniteGame {
            state_grid,
            type_grids,
            action_grids,
            payoffs,
            beliefs,
        })
    }

    /// Decodes into a validated, finalized game.
    pub fn to_game(&self) -> Result<FiniteGame, Error> {
        let mut game = self.build_raw()?;
        game.finalize()?;
        Ok(game)
    }

    /// Encodes an in-memory game with generated state labels. Payoffs and
    /// beliefs are written as explicit tables, so the document reproduces
    /// the game bit for bit regardless of how it was first built.
    pub fn from_game(game: &FiniteGame) -> Self {
        let n = game.n_players();
        GameFile {
            players: n,
            states: game
                .state_grid
                .values()
                .iter()
                .enumerate()
                .map(|(k, &value)| StateEntry {
                    label: format!("s{k}"),
                    value,
                })
                .collect(),
            types: game.type_grids.iter().map(|g| g.values().to_vec()).collect(),
            actions: game
                .action_grids
                .iter()
                .map(|g| g.values().to_vec())
                .collect(),
            payoffs: game
                .payoffs
                .iter()
                .map(|t| PayoffSpec::Table(TablePayoff { table: t.clone() }))
                .collect(),
            beliefs: (0..n)
                .map(|i| {
                    let kernel = &game.beliefs[i];
                    let mut table = Vec::new();
                    for t in 0..game.num_types(i) {
                        table.extend_from_slice(kernel.row(t));
                    }
                    BeliefSpec::Table(TableBelief { table })
                })
                .collect(),
            nu: None,
        }
    }
}

/// Top-level strategy document: one row-major matrix per player, written
/// as a list of per-type rows over that player's actions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub strategies: Vec<Vec<Vec<f64>>>,
}

impl StrategyFile {
    pub fn from_profile(profile: &StrategyProfile) -> Self {
        StrategyFile {
            strategies: profile
                .strategies
                .iter()
                .map(|s| (0..s.n_types()).map(|t| s.row(t).to_vec()).collect())
                .collect(),
        }
    }

    /// Decodes against a game, rejecting any shape mismatch and any row
    /// that is not a probability vector.
    pub fn to_profile(&self, game: &FiniteGame) -> Result<StrategyProfile, Error> {
        count_check("strategy players", game.n_players(), self.strategies.len())?;
        let mut strategies = Vec::with_capacity(self.strategies.len());
        for (i, rows) in self.strategies.iter().enumerate() {
            count_check(
                &format!("player {i} strategy rows"),
                game.num_types(i),
                rows.len(),
            )?;
            let n_actions = game.num_actions(i);
            let mut data = Vec::with_capacity(rows.len() * n_actions);
            for (t, row) in rows.iter().enumerate() {
                count_check(
                    &format!("player {i} strategy row {t}"),
                    n_actions,
                    row.len(),
                )?;
                data.extend_from_slice(row);
            }
            strategies.push(BehavioralStrategy::new(game.num_types(i), n_actions, data)?);
        }
        let profile = StrategyProfile::new(strategies);
        game.check_profile(&profile)?;
        Ok(profile)
    }
}

/// Witness cell for a failed absolute-continuity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsContinuityWitness {
    pub player: usize,
    pub own_type: usize,
    pub state: usize,
    pub opponent_cell: usize,
    pub mass: f64,
}

impl AbsContinuityWitness {
    /// Extracts the witness fields when the error is an absolute-continuity
    /// failure.
    pub fn from_error(e: &Error) -> Option<Self> {
        match e {
            Error::NotAbsolutelyContinuous {
                player,
                own_type,
                state,
                opponent_cell,
                mass,
            } => Some(AbsContinuityWitness {
                player: *player,
                own_type: *own_type,
                state: *state,
                opponent_cell: *opponent_cell,
                mass: *mass,
            }),
            _ => None,
        }
    }
}

/// Absolute-continuity verdict with the offending cell when it fails.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsContinuityReport {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<AbsContinuityWitness>,
}

/// Report of `check`: structural validation, domination diagnostics, and
/// the common-prior search outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub well_formed: bool,
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absolute_continuity: Option<AbsContinuityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyResult>,
}

/// Equilibrium verdicts of the final profile of `solve`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveVerdicts {
    /// Every interim regret at most the tolerance.
    pub be: bool,
    /// Every measure-weighted regret at most the tolerance.
    pub ne_nu: Option<bool>,
}

/// Report of `solve`: solver outcome plus verdicts of the repaired profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub converged: bool,
    pub iterations: usize,
    pub max_interim_regret: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surrogate_regret: Option<Vec<f64>>,
    pub verdicts: SolveVerdicts,
}

/// One profile in an annotated set difference, with a note explaining why
/// it sits on only one side.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotatedProfile {
    /// Action index per (player, type).
    pub actions: Vec<Vec<usize>>,
    pub note: String,
}

/// Report of `enumerate`: pure equilibria of the game itself and, when a
/// measure is supplied, pure equilibria of the reweighted objective with
/// the set difference explained.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateReport {
    pub eps: f64,
    /// Pure profiles optimal at every type, as action indices.
    pub bayesian_equilibria: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surrogate_equilibria: Option<Vec<Vec<Vec<usize>>>>,
    /// Surrogate equilibria that are not per-type equilibria: optimality
    /// fails only where the measure puts zero weight, so each repairs into
    /// a per-type equilibrium by replacing null-type rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surrogate_only: Option<Vec<AnnotatedProfile>>,
    /// Per-type equilibria missing from the surrogate list. Empty whenever
    /// the measure dominates the beliefs, since typewise optimality makes
    /// every weighted average of regrets zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bayesian_only: Option<Vec<AnnotatedProfile>>,
}

/// One verified profile row in the coordination scenario report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BosProfileReport {
    pub name: String,
    /// Player, then own type, then the action row.
    pub rows: Vec<Vec<Vec<f64>>>,
    pub max_interim_regret: f64,
    pub verdict_be: bool,
}

/// One grid row in the shared-signal scenario report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharedSignalRow {
    pub m: usize,
    pub condition_number: f64,
}

/// Report of `reproduce`, tagged by scenario name.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case")]
pub enum ReproduceReport {
    Bos {
        c: f64,
        eps: f64,
        profiles: Vec<BosProfileReport>,
        pure_equilibrium_count: usize,
        consistency_feasible: bool,
        consistency_residual: f64,
    },
    PublicGood {
        sigma: [f64; 2],
        thresholds: [f64; 2],
        residual: f64,
        iterations: usize,
        converged: bool,
        grid_sizes: Vec<usize>,
        /// Largest interim regret of the induced threshold profile on each
        /// grid: the discretization error scale.
        discretization_eps: Vec<f64>,
    },
    Cournot {
        variant: String,
        /// Per player, then per own type: the quantity played.
        quantities: Vec<Vec<f64>>,
        /// Mutual best-response profiles found by brute force, each as one
        /// quantity per player (complete-information variant only).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        oracle: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matches_oracle: Option<bool>,
        converged: bool,
        max_interim_regret: f64,
        verdict_be: bool,
    },
    GaussianConsistency {
        s1: f64,
        s2: f64,
        criterion: f64,
        residual: f64,
        feasible: bool,
    },
    SharedSignal { rows: Vec<SharedSignalRow> },
}
