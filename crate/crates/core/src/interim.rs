//! Conditional payoff evaluation.
//!
//! A player who has observed their own type scores each action by averaging
//! the payoff tensor over states and opponent types under their personal
//! belief kernel, and over opponent actions under the opponents' behavioral
//! rows. This module tabulates those conditional values, the payoff a fixed
//! profile delivers at a given type, and the two aggregate objectives built
//! on top of them: the measure-weighted average maximized by the surrogate
//! game and the density-reweighted payoff grid that realizes the same
//! objective inside an ordinary common-prior game.
//!
//! All reductions run through [`crate::numeric::pairwise_sum`] so results do
//! not depend on incidental loop order, and the pure-profile fast path
//! returns values equal to the general mixed path entry for entry.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::game::{FiniteGame, Odometer, ProductMeasure, StrategyProfile};
use crate::measure::rn_density;
use crate::numeric::pairwise_sum;

/// Conditional action values of one player: `values[t * n_actions + a]` is
/// the expected payoff of committing to action `a` at own type `t` while
/// the opponents keep playing their rows from the evaluated profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterimTable {
    /// Player whose values these are.
    pub owner: usize,
    /// Number of own types (rows).
    pub n_types: usize,
    /// Number of own actions (columns).
    pub n_actions: usize,
    /// Row-major `(type, action)` value matrix.
    pub values: Vec<f64>,
}

impl InterimTable {
    /// Value row for own type `t`.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t * self.n_actions..(t + 1) * self.n_actions]
    }

    /// Single entry at `(t, a)`.
    pub fn value(&self, t: usize, a: usize) -> f64 {
        self.values[t * self.n_actions + a]
    }
}

/// Precomputed belief-weighted payoff blocks for one player.
///
/// Entry `(t, a, tc, ac)` holds the state sum of `eta_i(t, (s, tc)) *
/// u_i(s, types, actions)` with own type `t`, own action `a`, flattened
/// opponent types `tc` and flattened opponent actions `ac`. Conditional
/// action values then reduce over `(tc, ac)` only, which keeps repeated
/// evaluation against many profiles cheap.
pub(crate) struct ValueTable {
    pub owner: usize,
    pub n_types: usize,
    pub n_actions: usize,
    pub opp_type_count: usize,
    pub opp_action_count: usize,
    opp_players: Vec<usize>,
    opp_action_dims: Vec<usize>,
    type_tuples: Vec<Vec<usize>>,
    action_tuples: Vec<Vec<usize>>,
    data: Vec<f64>,
}

/// Opponent mixture weights for one profile: `w[tc * opp_action_count + ac]`
/// is the probability that the opponents at joint type cell `tc` jointly
/// play the action cell `ac`.
pub(crate) struct OppWeights {
    pub w: Vec<f64>,
    opp_action_count: usize,
}

fn index_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    if dims.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::with_capacity(dims.iter().product());
    let mut od = Odometer::new(dims.to_vec());
    while let Some(t) = od.next() {
        out.push(t.to_vec());
    }
    out
}

impl ValueTable {
    pub(crate) fn new(g: &FiniteGame, i: usize) -> Result<ValueTable, Error> {
        let n = g.n_players();
        if i >= n {
            return Err(Error::IndexOutOfRange {
                what: "player".into(),
                index: i,
                bound: n,
            });
        }
        let opp_players: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let opp_type_dims: Vec<usize> = opp_players.iter().map(|&j| g.num_types(j)).collect();
        let opp_action_dims: Vec<usize> = opp_players.iter().map(|&j| g.num_actions(j)).collect();
        let n_types = g.num_types(i);
        let n_actions = g.num_actions(i);
        let opp_type_count: usize = opp_type_dims.iter().product();
        let opp_action_count: usize = opp_action_dims.iter().product();
        let n_states = g.num_states();
        let type_tuples = index_tuples(&opp_type_dims);
        let action_tuples = index_tuples(&opp_action_dims);

        let mut data = vec![0.0; n_types * n_actions * opp_type_count * opp_action_count];
        let mut types = vec![0usize; n];
        let mut actions = vec![0usize; n];
        let mut by_state = vec![0.0; n_states];
        let u = &g.payoffs[i];
        for t in 0..n_types {
            let belief_row = g.beliefs[i].row(t);
            types[i] = t;
            for (tc, tt) in type_tuples.iter().enumerate() {
                for (k, &j) in opp_players.iter().enumerate() {
                    types[j] = tt[k];
                }
                for a in 0..n_actions {
                    actions[i] = a;
                    for (ac, aa) in action_tuples.iter().enumerate() {
                        for (k, &j) in opp_players.iter().enumerate() {
                            actions[j] = aa[k];
                        }
                        for (s, slot) in by_state.iter_mut().enumerate() {
                            // Kernel columns are state-major, so column
                            // s * opp_type_count + tc is the cell (s, tt).
                            *slot = belief_row[s * opp_type_count + tc]
                                * u[g.payoff_index(s, &types, &actions)];
                        }
                        let idx = ((t * n_actions + a) * opp_type_count + tc) * opp_action_count
                            + ac;
                        data[idx] = pairwise_sum(&by_state);
                    }
                }
            }
        }
        Ok(ValueTable {
            owner: i,
            n_types,
            n_actions,
            opp_type_count,
            opp_action_count,
            opp_players,
            opp_action_dims,
            type_tuples,
            action_tuples,
            data,
        })
    }

    /// Joint opponent mixture weights for the rows in `profile`.
    pub(crate) fn opp_weights(&self, profile: &StrategyProfile) -> OppWeights {
        let mut w = vec![0.0; self.opp_type_count * self.opp_action_count];
        for (tc, tt) in self.type_tuples.iter().enumerate() {
            for (ac, aa) in self.action_tuples.iter().enumerate() {
                let mut prob = 1.0;
                for (k, &j) in self.opp_players.iter().enumerate() {
                    prob *= profile.strategies[j].row(tt[k])[aa[k]];
                }
                w[tc * self.opp_action_count + ac] = prob;
            }
        }
        OppWeights {
            w,
            opp_action_count: self.opp_action_count,
        }
    }

    /// Flat opponent action cell per opponent type cell under a pure profile
    /// given as per-player action-index rows.
    pub(crate) fn pure_choice(&self, pure: &[Vec<usize>]) -> Vec<usize> {
        self.type_tuples
            .iter()
            .map(|tt| {
                let mut flat = 0usize;
                for (k, &j) in self.opp_players.iter().enumerate() {
                    flat = flat * self.opp_action_dims[k] + pure[j][tt[k]];
                }
                flat
            })
            .collect()
    }

    /// Conditional value row at own type `t` against mixed opponents.
    pub(crate) fn mixed_row(&self, weights: &OppWeights, t: usize, out: &mut Vec<f64>) {
        debug_assert_eq!(weights.opp_action_count, self.opp_action_count);
        out.clear();
        out.resize(self.n_actions, 0.0);
        let mut by_cell = vec![0.0; self.opp_action_count];
        let mut by_type = vec![0.0; self.opp_type_count];
        for (a, slot) in out.iter_mut().enumerate() {
            for (tc, acc) in by_type.iter_mut().enumerate() {
                let base =
                    ((t * self.n_actions + a) * self.opp_type_count + tc) * self.opp_action_count;
                let wrow = &weights.w[tc * self.opp_action_count..(tc + 1) * self.opp_action_count];
                for (ac, term) in by_cell.iter_mut().enumerate() {
                    *term = wrow[ac] * self.data[base + ac];
                }
                *acc = pairwise_sum(&by_cell);
            }
            *slot = pairwise_sum(&by_type);
        }
    }

    /// Conditional value row at own type `t` against pure opponents whose
    /// flat action cell per opponent type cell is listed in `choice`.
    pub(crate) fn pure_row(&self, choice: &[usize], t: usize, out: &mut Vec<f64>) {
        out.clear();
        out.resize(self.n_actions, 0.0);
        let mut by_type = vec![0.0; self.opp_type_count];
        for (a, slot) in out.iter_mut().enumerate() {
            for (tc, acc) in by_type.iter_mut().enumerate() {
                let base =
                    ((t * self.n_actions + a) * self.opp_type_count + tc) * self.opp_action_count;
                *acc = self.data[base + choice[tc]];
            }
            *slot = pairwise_sum(&by_type);
        }
    }

    /// Full interim table against the opponents in `profile`, taking the
    /// pure fast path when every row of the profile is a vertex.
    pub(crate) fn fill_table(&self, profile: &StrategyProfile) -> InterimTable {
        let mut values = vec![0.0; self.n_types * self.n_actions];
        let mut row = Vec::with_capacity(self.n_actions);
        if let Some(pure) = profile.pure_actions() {
            let choice = self.pure_choice(&pure);
            for t in 0..self.n_types {
                self.pure_row(&choice, t, &mut row);
                values[t * self.n_actions..(t + 1) * self.n_actions].copy_from_slice(&row);
            }
        } else {
            let weights = self.opp_weights(profile);
            for t in 0..self.n_types {
                self.mixed_row(&weights, t, &mut row);
                values[t * self.n_actions..(t + 1) * self.n_actions].copy_from_slice(&row);
            }
        }
        InterimTable {
            owner: self.owner,
            n_types: self.n_types,
            n_actions: self.n_actions,
            values,
        }
    }
}

/// Checks that a product measure matches the game's grid sizes without
/// touching its weights.
pub(crate) fn check_measure(g: &FiniteGame, nu: &ProductMeasure) -> Result<(), Error> {
    if nu.state.len() != g.num_states() {
        return Err(Error::DimensionMismatch {
            what: "measure state component".into(),
            expected: g.num_states(),
            got: nu.state.len(),
        });
    }
    if nu.types.len() != g.n_players() {
        return Err(Error::DimensionMismatch {
            what: "measure type components".into(),
            expected: g.n_players(),
            got: nu.types.len(),
        });
    }
    for (j, weights) in nu.types.iter().enumerate() {
        if weights.len() != g.num_types(j) {
            return Err(Error::DimensionMismatch {
                what: format!("measure component for player {j} types"),
                expected: g.num_types(j),
                got: weights.len(),
            });
        }
    }
    Ok(())
}

/// Conditional action values of player `i` at every own type, holding the
/// opponents to their rows in `others`. Player `i`'s own rows in `others`
/// are validated but never read.
pub fn interim_action_values(
    g: &FiniteGame,
    i: usize,
    others: &StrategyProfile,
) -> Result<InterimTable, Error> {
    g.check_profile(others)?;
    let table = ValueTable::new(g, i)?;
    Ok(table.fill_table(others))
}

/// Expected payoff of player `i` at own type `t_i` when everyone follows
/// `profile`, the owner included.
pub fn interim_payoff(
    g: &FiniteGame,
    i: usize,
    profile: &StrategyProfile,
    t_i: usize,
) -> Result<f64, Error> {
    g.check_profile(profile)?;
    let table = ValueTable::new(g, i)?;
    if t_i >= table.n_types {
        return Err(Error::IndexOutOfRange {
            what: format!("type (player {i})"),
            index: t_i,
            bound: table.n_types,
        });
    }
    let mut row = Vec::with_capacity(table.n_actions);
    if let Some(pure) = profile.pure_actions() {
        let choice = table.pure_choice(&pure);
        table.pure_row(&choice, t_i, &mut row);
    } else {
        let weights = table.opp_weights(profile);
        table.mixed_row(&weights, t_i, &mut row);
    }
    let own = profile.strategies[i].row(t_i);
    let terms: Vec<f64> = row.iter().zip(own).map(|(v, p)| p * v).collect();
    Ok(pairwise_sum(&terms))
}

/// Measure-weighted payoff of player `i`: their interim payoffs under
/// `profile` averaged over own types with the weights `nu` assigns to
/// player `i`'s types. This is the objective the surrogate game maximizes.
pub fn surrogate_payoff(
    g: &FiniteGame,
    i: usize,
    profile: &StrategyProfile,
    nu: &ProductMeasure,
) -> Result<f64, Error> {
    g.check_profile(profile)?;
    check_measure(g, nu)?;
    let table = ValueTable::new(g, i)?;
    let weights = table.opp_weights(profile);
    let mut row = Vec::with_capacity(table.n_actions);
    let mut by_type = vec![0.0; table.n_types];
    for (t, slot) in by_type.iter_mut().enumerate() {
        table.mixed_row(&weights, t, &mut row);
        let own = profile.strategies[i].row(t);
        let terms: Vec<f64> = row.iter().zip(own).map(|(v, p)| p * v).collect();
        *slot = nu.types[i][t] * pairwise_sum(&terms);
    }
    Ok(pairwise_sum(&by_type))
}

/// Payoff tensor of player `i` rescaled cell by cell with the density of
/// their belief kernel against the product measure `nu`. Playing the
/// rescaled tensor inside a common-prior game with prior `nu` reproduces
/// the measure-weighted payoff of the original game. Fails when the kernel
/// puts mass on a `nu`-null cell.
pub fn reweighted_payoff_grid(
    g: &FiniteGame,
    i: usize,
    nu: &ProductMeasure,
) -> Result<Vec<f64>, Error> {
    check_measure(g, nu)?;
    let density = rn_density(g, nu, i)?;
    let n = g.n_players();
    let joint_actions = g.joint_action_count();
    let joint_types = g.joint_type_count();
    let opp_type_count = g.opponent_type_count(i);

    // Map each flat joint-type index to the owner's type and the flat
    // opponent type cell, in one sweep.
    let type_dims: Vec<usize> = (0..n).map(|j| g.num_types(j)).collect();
    let mut split = Vec::with_capacity(joint_types);
    let mut od = Odometer::new(type_dims.clone());
    while let Some(tup) = od.next() {
        let own = tup[i];
        let mut tc = 0usize;
        for (j, &tj) in tup.iter().enumerate() {
            if j != i {
                tc = tc * type_dims[j] + tj;
            }
        }
        split.push((own, tc));
    }

    let u = &g.payoffs[i];
    let mut scaled = vec![0.0; u.len()];
    for (idx, slot) in scaled.iter_mut().enumerate() {
        let rest = idx / joint_actions;
        let tflat = rest % joint_types;
        let s = rest / joint_types;
        let (own, tc) = split[tflat];
        *slot = u[idx] * density.row(own)[s * opp_type_count + tc];
    }
    Ok(scaled)
}
