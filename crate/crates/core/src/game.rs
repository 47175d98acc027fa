//! Core data model: grids, payoff tensors, belief kernels, product measures,
//! and behavioral strategy profiles, plus validation and canonical layouts.
//!
//! Canonical flat layouts used throughout the crate:
//! - payoff tensor of player `i`: index runs over
//!   `(s, t_1, .., t_n, a_1, .., a_n)` with the state slowest and `a_n`
//!   fastest;
//! - belief kernel of player `i`: one row per own type `t_i`, columns over
//!   `(s, t_{-i})` with the state slowest and opponents in increasing player
//!   order;
//! - prior vectors: `(s, t_1, .., t_n)` with the state slowest.
//!
//! Stochastic rows (kernels, strategies, measure components) are
//! renormalized exactly once at load time when their sums are within
//! [`ROW_SUM_TOL`] of one, and rejected otherwise.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numeric::pairwise_sum;

/// Tolerance on stochastic row sums before the single load-time
/// renormalization; rows further from one than this are rejected.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// An ordered list of distinct finite real values discretizing a continuum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    values: Vec<f64>,
}

impl Grid {
    /// Wraps raw values; validity is checked by [`validate_game`].
    pub fn new(values: Vec<f64>) -> Self {
        Grid { values }
    }

    /// `m` evenly spaced points from `lo` to `hi` inclusive. With `m == 1`
    /// the single point is `lo`.
    pub fn linspace(lo: f64, hi: f64, m: usize) -> Self {
        assert!(m >= 1, "linspace needs at least one point");
        if m == 1 {
            return Grid { values: vec![lo] };
        }
        let step = (hi - lo) / (m - 1) as f64;
        let values = (0..m)
            .map(|k| if k == m - 1 { hi } else { lo + step * k as f64 })
            .collect();
        Grid { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// Index of the grid point closest to `x`; ties go to the earlier point.
    pub fn nearest_index(&self, x: f64) -> usize {
        let mut best = 0;
        let mut best_d = (self.values[0] - x).abs();
        for (k, &v) in self.values.iter().enumerate().skip(1) {
            let d = (v - x).abs();
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        best
    }

    fn violations(&self, what: &str, out: &mut Vec<String>) {
        if self.values.is_empty() {
            out.push(format!("{what}: grid is empty"));
            return;
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            out.push(format!("{what}: grid contains a non-finite value"));
        }
        for i in 0..self.values.len() {
            for j in (i + 1)..self.values.len() {
                if self.values[i] == self.values[j] {
                    out.push(format!(
                        "{what}: duplicate grid value {} at positions {i} and {j}",
                        self.values[i]
                    ));
                    return;
                }
            }
        }
    }
}

/// Belief kernel of one player: a stochastic row per own type over joint
/// `(state, opponent types)` cells in canonical column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefKernel {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl BeliefKernel {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch {
                what: "belief kernel data".into(),
                expected: n_rows * n_cols,
                got: data.len(),
            });
        }
        Ok(BeliefKernel {
            n_rows,
            n_cols,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.n_cols..(t + 1) * self.n_cols]
    }

    pub fn row_mut(&mut self, t: usize) -> &mut [f64] {
        &mut self.data[t * self.n_cols..(t + 1) * self.n_cols]
    }

    /// Renormalizes every row by its pairwise sum. Callers check row sums
    /// against [`ROW_SUM_TOL`] first; this is the single load-time pass.
    pub fn renormalize_rows(&mut self) {
        for t in 0..self.n_rows {
            let sum = pairwise_sum(self.row(t));
            if sum != 0.0 {
                for v in self.row_mut(t) {
                    *v /= sum;
                }
            }
        }
    }
}

/// Behavioral strategy of one player: a stochastic row per own type over
/// that player's actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehavioralStrategy {
    n_types: usize,
    n_actions: usize,
    data: Vec<f64>,
}

impl BehavioralStrategy {
    pub fn new(n_types: usize, n_actions: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != n_types * n_actions {
            return Err(Error::DimensionMismatch {
                what: "strategy data".into(),
                expected: n_types * n_actions,
                got: data.len(),
            });
        }
        Ok(BehavioralStrategy {
            n_types,
            n_actions,
            data,
        })
    }

    /// Uniform row at every type.
    pub fn uniform(n_types: usize, n_actions: usize) -> Self {
        let w = 1.0 / n_actions as f64;
        BehavioralStrategy {
            n_types,
            n_actions,
            data: vec![w; n_types * n_actions],
        }
    }

    /// Pure strategy from an action index per type.
    pub fn pure(n_actions: usize, actions: &[usize]) -> Self {
        let mut data = vec![0.0; actions.len() * n_actions];
        for (t, &a) in actions.iter().enumerate() {
            data[t * n_actions + a] = 1.0;
        }
        BehavioralStrategy {
            n_types: actions.len(),
            n_actions,
            data,
        }
    }

    pub fn n_types(&self) -> usize {
        self.n_types
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.n_actions..(t + 1) * self.n_actions]
    }

    pub fn row_mut(&mut self, t: usize) -> &mut [f64] {
        &mut self.data[t * self.n_actions..(t + 1) * self.n_actions]
    }

    pub fn set_row(&mut self, t: usize, row: &[f64]) {
        self.row_mut(t).copy_from_slice(row);
    }

    /// The action index played at `t` if the row is a vertex, else `None`.
    pub fn pure_action(&self, t: usize) -> Option<usize> {
        let row = self.row(t);
        let mut hit = None;
        for (a, &w) in row.iter().enumerate() {
            if w == 1.0 {
                if hit.is_some() {
                    return None;
                }
                hit = Some(a);
            } else if w != 0.0 {
                return None;
            }
        }
        hit
    }

    pub fn renormalize_rows(&mut self) {
        for t in 0..self.n_types {
            let sum = pairwise_sum(self.row(t));
            if sum != 0.0 {
                for v in self.row_mut(t) {
                    *v /= sum;
                }
            }
        }
    }
}

/// One behavioral strategy per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub strategies: Vec<BehavioralStrategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<BehavioralStrategy>) -> Self {
        StrategyProfile { strategies }
    }

    pub fn n_players(&self) -> usize {
        self.strategies.len()
    }

    pub fn player(&self, i: usize) -> &BehavioralStrategy {
        &self.strategies[i]
    }

    pub fn player_mut(&mut self, i: usize) -> &mut BehavioralStrategy {
        &mut self.strategies[i]
    }

    /// True when every row of every player is an action vertex.
    pub fn is_pure(&self) -> bool {
        self.strategies
            .iter()
            .all(|s| (0..s.n_types()).all(|t| s.pure_action(t).is_some()))
    }

    /// Action index per (player, type) when the profile is pure.
    pub fn pure_actions(&self) -> Option<Vec<Vec<usize>>> {
        self.strategies
            .iter()
            .map(|s| (0..s.n_types()).map(|t| s.pure_action(t)).collect())
            .collect()
    }
}

/// Product reference measure `nu = (nu_0, nu_1, .., nu_n)`: one distribution
/// over states and one over each player's types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductMeasure {
    pub state: Vec<f64>,
    pub types: Vec<Vec<f64>>,
}

impl ProductMeasure {
    /// Uniform components matching the game's grid sizes: the canonical
    /// dominating measure. Every belief kernel is absolutely continuous with
    /// respect to it because no cell has measure zero.
    pub fn canonical(game: &FiniteGame) -> Self {
        let state = vec![1.0 / game.num_states() as f64; game.num_states()];
        let types = (0..game.n_players())
            .map(|i| vec![1.0 / game.num_types(i) as f64; game.num_types(i)])
            .collect();
        ProductMeasure { state, types }
    }

    /// Checks shape against a game and stochasticity of each component
    /// within [`ROW_SUM_TOL`], then renormalizes each component once.
    pub fn finalize(&mut self, game: &FiniteGame) -> Result<(), Error> {
        if self.state.len() != game.num_states() {
            return Err(Error::DimensionMismatch {
                what: "measure state component".into(),
                expected: game.num_states(),
                got: self.state.len(),
            });
        }
        if self.types.len() != game.n_players() {
            return Err(Error::DimensionMismatch {
                what: "measure type components".into(),
                expected: game.n_players(),
                got: self.types.len(),
            });
        }
        let mut components: Vec<(&mut Vec<f64>, String)> = Vec::new();
        components.push((&mut self.state, "state".to_string()));
        for (i, t) in self.types.iter_mut().enumerate() {
            components.push((t, format!("player {i} types")));
        }
        for (component, name) in components {
            if component.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::invalid(format!(
                    "measure component {name} has a negative or non-finite entry"
                )));
            }
            let sum = pairwise_sum(component);
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::invalid(format!(
                    "measure component {name} sums to {sum}, outside tolerance"
                )));
            }
            for v in component.iter_mut() {
                *v /= sum;
            }
        }
        for (i, t) in self.types.iter().enumerate() {
            if t.len() != game.num_types(i) {
                return Err(Error::DimensionMismatch {
                    what: format!("measure component for player {i} types"),
                    expected: game.num_types(i),
                    got: t.len(),
                });
            }
        }
        Ok(())
    }

    /// True when every coordinate of every component is strictly positive.
    pub fn full_support(&self) -> bool {
        self.state.iter().all(|&v| v > 0.0)
            && self.types.iter().all(|t| t.iter().all(|&v| v > 0.0))
    }

    /// Weight of the `(state, opponent types)` cell seen from player `i`:
    /// `nu_0(s) * prod_{j != i} nu_j(t_j)`. `opp_types` lists type indices
    /// for players `j != i` in increasing `j`.
    pub fn opponent_cell_weight(&self, i: usize, s: usize, opp_types: &[usize]) -> f64 {
        let mut w = self.state[s];
        let mut k = 0;
        for (j, tj) in self.types.iter().enumerate() {
            if j == i {
                continue;
            }
            w *= tj[opp_types[k]];
            k += 1;
        }
        w
    }

    /// Joint weight of `(s, t_1, .., t_n)` under the product measure.
    pub fn joint_weight(&self, s: usize, types: &[usize]) -> f64 {
        let mut w = self.state[s];
        for (j, &t) in types.iter().enumerate() {
            w *= self.types[j][t];
        }
        w
    }
}

/// Validation outcome: a list of human-readable violations, empty when the
/// game is well-formed.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite incomplete-information game with one payoff tensor and one
/// belief kernel per player. Players may disagree: kernels need not be
/// conditionals of any common prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteGame {
    pub state_grid: Grid,
    pub type_grids: Vec<Grid>,
    pub action_grids: Vec<Grid>,
    /// Flat payoff tensor per player in canonical `(s, t, a)` order.
    pub payoffs: Vec<Vec<f64>>,
    pub beliefs: Vec<BeliefKernel>,
}

impl FiniteGame {
    pub fn n_players(&self) -> usize {
        self.type_grids.len()
    }

    pub fn num_states(&self) -> usize {
        self.state_grid.len()
    }

    pub fn num_types(&self, i: usize) -> usize {
        self.type_grids[i].len()
    }

    pub fn num_actions(&self, i: usize) -> usize {
        self.action_grids[i].len()
    }

    /// Product of all players' type-grid sizes.
    pub fn joint_type_count(&self) -> usize {
        self.type_grids.iter().map(|g| g.len()).product()
    }

    /// Product of all players' action-grid sizes.
    pub fn joint_action_count(&self) -> usize {
        self.action_grids.iter().map(|g| g.len()).product()
    }

    /// Product of type-grid sizes over players other than `i`.
    pub fn opponent_type_count(&self, i: usize) -> usize {
        self.type_grids
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.len())
            .product()
    }

    /// Product of action-grid sizes over players other than `i`.
    pub fn opponent_action_count(&self, i: usize) -> usize {
        self.action_grids
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.len())
            .product()
    }

    /// Number of columns in player `i`'s belief kernel.
    pub fn kernel_cols(&self, i: usize) -> usize {
        self.num_states() * self.opponent_type_count(i)
    }

    /// Length of each player's flat payoff tensor.
    pub fn payoff_len(&self) -> usize {
        self.num_states() * self.joint_type_count() * self.joint_action_count()
    }

    /// Flat index into a payoff tensor for `(s, types, actions)`.
    pub fn payoff_index(&self, s: usize, types: &[usize], actions: &[usize]) -> usize {
        let mut idx = s;
        for (j, &t) in types.iter().enumerate() {
            idx = idx * self.num_types(j) + t;
        }
        for (j, &a) in actions.iter().enumerate() {
            idx = idx * self.num_actions(j) + a;
        }
        idx
    }

    /// Flat column index in player `i`'s kernel for `(s, opponent types)`,
    /// opponents listed in increasing player order.
    pub fn kernel_col(&self, i: usize, s: usize, opp_types: &[usize]) -> usize {
        let mut idx = s;
        let mut k = 0;
        for j in 0..self.n_players() {
            if j == i {
                continue;
            }
            idx = idx * self.num_types(j) + opp_types[k];
            k += 1;
        }
        idx
    }

    /// Flat index into a prior vector for `(s, types)`.
    pub fn prior_index(&self, s: usize, types: &[usize]) -> usize {
        let mut idx = s;
        for (j, &t) in types.iter().enumerate() {
            idx = idx * self.num_types(j) + t;
        }
        idx
    }

    /// Length of a prior vector over `(s, t)`.
    pub fn prior_len(&self) -> usize {
        self.num_states() * self.joint_type_count()
    }

    /// Per-own-type payoff envelope of player `i`: entry `t_i` is the
    /// largest `|u_i|` over all cells with that own type fixed. Every
    /// interim quantity at `t_i` is bounded by this entry because beliefs
    /// and strategies are stochastic.
    pub fn payoff_bound(&self, i: usize) -> Vec<f64> {
        let n_types = self.num_types(i);
        let mut bound = vec![0.0_f64; n_types];
        // Own-type stride inside the flat payoff index.
        let below: usize = self
            .type_grids
            .iter()
            .skip(i + 1)
            .map(|g| g.len())
            .product::<usize>()
            * self.joint_action_count();
        let block = below * n_types;
        for (idx, &u) in self.payoffs[i].iter().enumerate() {
            let t = (idx % block) / below;
            bound[t] = bound[t].max(u.abs());
        }
        bound
    }

    /// Largest absolute payoff of player `i` over the whole grid.
    pub fn payoff_bound_overall(&self, i: usize) -> f64 {
        crate::numeric::max_abs(&self.payoffs[i])
    }

    /// Uniform behavioral profile (every row uniform over own actions).
    pub fn uniform_profile(&self) -> StrategyProfile {
        StrategyProfile::new(
            (0..self.n_players())
                .map(|i| BehavioralStrategy::uniform(self.num_types(i), self.num_actions(i)))
                .collect(),
        )
    }

    /// Checks whether a profile has the right shape and stochastic rows.
    pub fn check_profile(&self, profile: &StrategyProfile) -> Result<(), Error> {
        if profile.n_players() != self.n_players() {
            return Err(Error::DimensionMismatch {
                what: "profile players".into(),
                expected: self.n_players(),
                got: profile.n_players(),
            });
        }
        for (i, s) in profile.strategies.iter().enumerate() {
            if s.n_types() != self.num_types(i) || s.n_actions() != self.num_actions(i) {
                return Err(Error::Incompatible(format!(
                    "strategy shape for player {i} is {}x{}, game needs {}x{}",
                    s.n_types(),
                    s.n_actions(),
                    self.num_types(i),
                    self.num_actions(i)
                )));
            }
            for t in 0..s.n_types() {
                let row = s.row(t);
                if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::invalid(format!(
                        "strategy row has a negative or non-finite entry (player {i}, type {t})"
                    )));
                }
                let sum = pairwise_sum(row);
                if (sum - 1.0).abs() > ROW_SUM_TOL {
                    return Err(Error::invalid(format!(
                        "strategy row sums to {sum} (player {i}, type {t}), outside tolerance"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Validates structure and returns all violations found; never panics
    /// on malformed data. An empty report means the game is well-formed up
    /// to the row-sum tolerance (renormalization still pending).
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let n = self.n_players();
        if n == 0 {
            v.push("game has no players".to_string());
            return ValidationReport { violations: v };
        }
        if self.action_grids.len() != n {
            v.push(format!(
                "expected {n} action grids, found {}",
                self.action_grids.len()
            ));
        }
        if self.payoffs.len() != n {
            v.push(format!("expected {n} payoff tensors, found {}", self.payoffs.len()));
        }
        if self.beliefs.len() != n {
            v.push(format!("expected {n} belief kernels, found {}", self.beliefs.len()));
        }
        self.state_grid.violations("state grid", &mut v);
        for (i, g) in self.type_grids.iter().enumerate() {
            g.violations(&format!("type grid of player {i}"), &mut v);
        }
        for (i, g) in self.action_grids.iter().enumerate() {
            g.violations(&format!("action grid of player {i}"), &mut v);
        }
        if !v.is_empty() {
            // Shape errors make the index arithmetic below meaningless.
            return ValidationReport { violations: v };
        }
        let plen = self.payoff_len();
        for (i, u) in self.payoffs.iter().enumerate() {
            if u.len() != plen {
                v.push(format!(
                    "payoff tensor of player {i} has length {}, expected {plen}",
                    u.len()
                ));
            } else if u.iter().any(|x| !x.is_finite()) {
                v.push(format!("payoff tensor of player {i} has a non-finite entry"));
            }
        }
        for (i, k) in self.beliefs.iter().enumerate() {
            if k.n_rows() != self.num_types(i) || k.n_cols() != self.kernel_cols(i) {
                v.push(format!(
                    "belief kernel of player {i} is {}x{}, expected {}x{}",
                    k.n_rows(),
                    k.n_cols(),
                    self.num_types(i),
                    self.kernel_cols(i)
                ));
                continue;
            }
            for t in 0..k.n_rows() {
                let row = k.row(t);
                if row.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    v.push(format!(
                        "belief row has a negative or non-finite entry (player {i}, type {t})"
                    ));
                    continue;
                }
                let sum = pairwise_sum(row);
                if (sum - 1.0).abs() > ROW_SUM_TOL {
                    v.push(format!(
                        "belief row sums to {sum} (player {i}, type {t}), outside tolerance"
                    ));
                }
            }
        }
        ValidationReport { violations: v }
    }

    /// Validates and then renormalizes every kernel row exactly once.
    /// Builders and loaders call this; afterwards row sums are exact up to
    /// one final rounding.
    pub fn finalize(&mut self) -> Result<(), Error> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(Error::invalid(report.violations.join("; ")));
        }
        for k in &mut self.beliefs {
            k.renormalize_rows();
        }
        Ok(())
    }
}

/// Mixed-radix odometer for iterating joint index tuples in canonical order
/// (last coordinate fastest). `dims` must all be nonzero.
pub struct Odometer {
    dims: Vec<usize>,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(dims: Vec<usize>) -> Self {
        let done = dims.iter().any(|&d| d == 0);
        let current = vec![0; dims.len()];
        Odometer {
            dims,
            current,
            started: false,
            done,
        }
    }

    /// Advances to the next tuple and returns it, or `None` after the last.
    /// The first call returns the all-zeros tuple.
    pub fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        for k in (0..self.dims.len()).rev() {
            self.current[k] += 1;
            if self.current[k] < self.dims[k] {
                return Some(&self.current);
            }
            self.current[k] = 0;
        }
        self.done = true;
        None
    }

    /// Total number of tuples.
    pub fn count(&self) -> usize {
        self.dims.iter().product()
    }
}
