//! Equilibrium search for the surrogate game.
//!
//! Once a product measure is fixed, each player maximizes the measure
//! weighted average of their conditional payoffs, so equilibrium search
//! reduces to an ordinary Nash problem over behavioral profiles. Three
//! methods are provided: synchronous iterated best response, smoothed
//! fictitious play with a decaying temperature, and exhaustive enumeration
//! of pure profiles for small games. All of them measure progress with the
//! same quantity, the per-player surrogate regret, and all are fully
//! deterministic for a fixed configuration.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::game::{BehavioralStrategy, FiniteGame, Odometer, ProductMeasure, StrategyProfile};
use crate::interim::ValueTable;
use crate::measure::check_absolute_continuity;
use crate::numeric::{argmax_lowest, max_entry, pairwise_sum, softmax_shifted};

/// Ceiling on the number of pure profiles the exhaustive method will visit.
pub const ENUMERATION_GUARD: f64 = 1e6;

/// Search method for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Synchronous typewise best responses, optionally damped.
    IteratedBr,
    /// Running average of smoothed best responses with decaying weight.
    FictitiousPlay,
    /// Exhaustive scan over pure behavioral profiles.
    EnumeratePure,
}

/// Tie handling for argmax decisions. Only one rule is offered so results
/// are reproducible: the lowest action index wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    #[default]
    LowestIndex,
}

/// Configuration for [`solve`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveConfig {
    pub method: Method,
    /// Convergence tolerance on each player's surrogate regret.
    pub eps: f64,
    pub max_iters: usize,
    /// Recorded for reproducibility; the bundled methods are deterministic
    /// and do not draw from it.
    pub seed: u64,
    /// Step weight in `(0, 1]`. Iterated best response moves each row this
    /// far toward the response; fictitious play scales its `1/k` weight.
    pub damping: f64,
    pub tie_rule: TieRule,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            method: Method::IteratedBr,
            eps: 1e-6,
            max_iters: 10_000,
            seed: 0,
            damping: 1.0,
            tie_rule: TieRule::LowestIndex,
        }
    }
}

/// Outcome of [`solve`]. `converged` implies every entry of
/// `final_surrogate_regret` is at most the configured tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    pub profile: StrategyProfile,
    pub converged: bool,
    pub iterations: usize,
    pub final_surrogate_regret: Vec<f64>,
}

fn check_config(cfg: &SolveConfig) -> Result<(), Error> {
    if !(cfg.eps > 0.0) {
        return Err(Error::invalid(format!(
            "solve tolerance must be positive, got {}",
            cfg.eps
        )));
    }
    if cfg.max_iters == 0 {
        return Err(Error::invalid("max_iters must be at least 1"));
    }
    if !(cfg.damping > 0.0 && cfg.damping <= 1.0) {
        return Err(Error::invalid(format!(
            "damping must lie in (0, 1], got {}",
            cfg.damping
        )));
    }
    Ok(())
}

/// One-hot best response of player `i` at own type `t_i` against the
/// opponents' rows in `others`, ties going to the lowest action index.
pub fn best_response_row(
    g: &FiniteGame,
    i: usize,
    t_i: usize,
    others: &StrategyProfile,
) -> Result<Vec<f64>, Error> {
    g.check_profile(others)?;
    let table = ValueTable::new(g, i)?;
    if t_i >= table.n_types {
        return Err(Error::IndexOutOfRange {
            what: format!("type (player {i})"),
            index: t_i,
            bound: table.n_types,
        });
    }
    let mut row = Vec::with_capacity(table.n_actions);
    if let Some(pure) = others.pure_actions() {
        let choice = table.pure_choice(&pure);
        table.pure_row(&choice, t_i, &mut row);
    } else {
        let weights = table.opp_weights(others);
        table.mixed_row(&weights, t_i, &mut row);
    }
    let best = argmax_lowest(&row);
    let mut out = vec![0.0; table.n_actions];
    out[best] = 1.0;
    Ok(out)
}

/// Per-player surrogate regret of `profile`: the measure-weighted average
/// over own types of `max_a value(t, a) - played value(t)`.
fn surrogate_regrets(
    tables: &[ValueTable],
    nu: &ProductMeasure,
    profile: &StrategyProfile,
) -> Vec<f64> {
    let pure = profile.pure_actions();
    let mut out = Vec::with_capacity(tables.len());
    let mut row = Vec::new();
    for (i, table) in tables.iter().enumerate() {
        let choice = pure.as_ref().map(|p| table.pure_choice(p));
        let weights = choice.is_none().then(|| table.opp_weights(profile));
        let mut terms = vec![0.0; table.n_types];
        for (t, slot) in terms.iter_mut().enumerate() {
            match &choice {
                Some(c) => table.pure_row(c, t, &mut row),
                None => table.mixed_row(weights.as_ref().unwrap(), t, &mut row),
            }
            let best = max_entry(&row);
            let own = profile.strategies[i].row(t);
            let played: Vec<f64> = row.iter().zip(own).map(|(v, p)| p * v).collect();
            *slot = nu.types[i][t] * (best - pairwise_sum(&played));
        }
        out.push(pairwise_sum(&terms));
    }
    out
}

/// Solves the surrogate game induced by `nu` starting from the uniform
/// profile. See [`solve_from`] for the general entry point.
pub fn solve(g: &FiniteGame, nu: &ProductMeasure, cfg: &SolveConfig) -> Result<SolveResult, Error> {
    let start = g.uniform_profile();
    solve_from(g, nu, cfg, &start)
}

/// Solves the surrogate game induced by `nu` from a caller-chosen starting
/// profile. Enumeration ignores the starting point.
pub fn solve_from(
    g: &FiniteGame,
    nu: &ProductMeasure,
    cfg: &SolveConfig,
    start: &StrategyProfile,
) -> Result<SolveResult, Error> {
    check_config(cfg)?;
    crate::interim::check_measure(g, nu)?;
    check_absolute_continuity(g, nu)?;
    g.check_profile(start)?;

    if cfg.method == Method::EnumeratePure {
        return enumerate_first(g, nu, cfg);
    }

    let n = g.n_players();
    let tables: Vec<ValueTable> = (0..n)
        .map(|i| ValueTable::new(g, i))
        .collect::<Result<_, _>>()?;
    let mut profile = start.clone();
    let mut iterations = 0usize;
    let mut row = Vec::new();
    let mut smoothed = Vec::new();
    loop {
        let regrets = surrogate_regrets(&tables, nu, &profile);
        if regrets.iter().all(|&r| r <= cfg.eps) {
            return Ok(SolveResult {
                profile,
                converged: true,
                iterations,
                final_surrogate_regret: regrets,
            });
        }
        if iterations >= cfg.max_iters {
            return Ok(SolveResult {
                profile,
                converged: false,
                iterations,
                final_surrogate_regret: regrets,
            });
        }
        // Build every player's response against the current profile first,
        // then apply them together (synchronous update).
        let mut responses: Vec<BehavioralStrategy> = Vec::with_capacity(n);
        for (i, table) in tables.iter().enumerate() {
            let weights = table.opp_weights(&profile);
            let mut next = BehavioralStrategy::uniform(table.n_types, table.n_actions);
            for t in 0..table.n_types {
                table.mixed_row(&weights, t, &mut row);
                match cfg.method {
                    Method::IteratedBr => {
                        let best = argmax_lowest(&row);
                        let target = next.row_mut(t);
                        for (a, slot) in target.iter_mut().enumerate() {
                            let br = if a == best { 1.0 } else { 0.0 };
                            let old = profile.strategies[i].row(t)[a];
                            *slot = cfg.damping * br + (1.0 - cfg.damping) * old;
                        }
                    }
                    Method::FictitiousPlay => {
                        // Temperature 1/k sharpens the smoothed response as
                        // the run progresses; weight damping/k fades the
                        // step into the running average.
                        let k = (iterations + 1) as f64;
                        softmax_shifted(&row, 1.0 / k, &mut smoothed);
                        let alpha = (cfg.damping / k).min(1.0);
                        let target = next.row_mut(t);
                        for (a, slot) in target.iter_mut().enumerate() {
                            let old = profile.strategies[i].row(t)[a];
                            *slot = alpha * smoothed[a] + (1.0 - alpha) * old;
                        }
                    }
                    Method::EnumeratePure => unreachable!(),
                }
            }
            responses.push(next);
        }
        profile = StrategyProfile::new(responses);
        iterations += 1;
    }
}

fn pure_profile_space(g: &FiniteGame) -> f64 {
    let mut size = 1.0_f64;
    for i in 0..g.n_players() {
        size *= (g.num_actions(i) as f64).powi(g.num_types(i) as i32);
    }
    size
}

/// Digit layout shared by the enumeration routines: one action index per
/// `(player, type)` slot, players outermost, types inner, so the odometer
/// walks profiles in canonical order.
fn enumeration_dims(g: &FiniteGame) -> Vec<usize> {
    let mut dims = Vec::new();
    for i in 0..g.n_players() {
        dims.extend(std::iter::repeat(g.num_actions(i)).take(g.num_types(i)));
    }
    dims
}

fn digits_to_pure(g: &FiniteGame, digits: &[usize]) -> Vec<Vec<usize>> {
    let mut pure = Vec::with_capacity(g.n_players());
    let mut k = 0;
    for i in 0..g.n_players() {
        let nt = g.num_types(i);
        pure.push(digits[k..k + nt].to_vec());
        k += nt;
    }
    pure
}

fn pure_to_profile(g: &FiniteGame, pure: &[Vec<usize>]) -> StrategyProfile {
    StrategyProfile::new(
        (0..g.n_players())
            .map(|i| BehavioralStrategy::pure(g.num_actions(i), &pure[i]))
            .collect(),
    )
}

/// Surrogate regret of every player at a pure assignment, reusing
/// precomputed value tables.
fn pure_surrogate_regrets(
    tables: &[ValueTable],
    nu: &ProductMeasure,
    pure: &[Vec<usize>],
    row: &mut Vec<f64>,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(tables.len());
    for (i, table) in tables.iter().enumerate() {
        let choice = table.pure_choice(pure);
        let mut terms = vec![0.0; table.n_types];
        for (t, slot) in terms.iter_mut().enumerate() {
            table.pure_row(&choice, t, row);
            let best = max_entry(row);
            *slot = nu.types[i][t] * (best - row[pure[i][t]]);
        }
        out.push(pairwise_sum(&terms));
    }
    out
}

fn enumeration_guard(g: &FiniteGame) -> Result<(), Error> {
    let size = pure_profile_space(g);
    if size > ENUMERATION_GUARD {
        return Err(Error::SearchSpaceTooLarge {
            size,
            guard: ENUMERATION_GUARD,
        });
    }
    Ok(())
}

fn enumerate_first(
    g: &FiniteGame,
    nu: &ProductMeasure,
    cfg: &SolveConfig,
) -> Result<SolveResult, Error> {
    enumeration_guard(g)?;
    let n = g.n_players();
    let tables: Vec<ValueTable> = (0..n)
        .map(|i| ValueTable::new(g, i))
        .collect::<Result<_, _>>()?;
    let mut od = Odometer::new(enumeration_dims(g));
    let mut visited = 0usize;
    let mut row = Vec::new();
    while let Some(digits) = od.next() {
        visited += 1;
        let pure = digits_to_pure(g, digits);
        let regrets = pure_surrogate_regrets(&tables, nu, &pure, &mut row);
        if regrets.iter().all(|&r| r <= cfg.eps) {
            return Ok(SolveResult {
                profile: pure_to_profile(g, &pure),
                converged: true,
                iterations: visited,
                final_surrogate_regret: regrets,
            });
        }
    }
    // Nothing found: report the uniform profile with converged unset so the
    // caller still gets a well-formed result.
    let uniform = g.uniform_profile();
    let regrets = surrogate_regrets(&tables, nu, &uniform);
    Ok(SolveResult {
        profile: uniform,
        converged: false,
        iterations: visited,
        final_surrogate_regret: regrets,
    })
}

/// All pure profiles whose surrogate regret is at most `eps` for every
/// player, in canonical order.
pub fn enumerate_pure_equilibria(
    g: &FiniteGame,
    nu: &ProductMeasure,
    eps: f64,
) -> Result<Vec<StrategyProfile>, Error> {
    enumeration_guard(g)?;
    crate::interim::check_measure(g, nu)?;
    check_absolute_continuity(g, nu)?;
    let n = g.n_players();
    let tables: Vec<ValueTable> = (0..n)
        .map(|i| ValueTable::new(g, i))
        .collect::<Result<_, _>>()?;
    let mut found = Vec::new();
    let mut od = Odometer::new(enumeration_dims(g));
    let mut row = Vec::new();
    while let Some(digits) = od.next() {
        let pure = digits_to_pure(g, digits);
        let regrets = pure_surrogate_regrets(&tables, nu, &pure, &mut row);
        if regrets.iter().all(|&r| r <= eps) {
            found.push(pure_to_profile(g, &pure));
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{BeliefKernel, Grid};
    use crate::interim::surrogate_payoff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bimatrix(u1: [[f64; 2]; 2], u2: [[f64; 2]; 2]) -> FiniteGame {
        let flat = |m: [[f64; 2]; 2]| vec![m[0][0], m[0][1], m[1][0], m[1][1]];
        FiniteGame {
            state_grid: Grid::new(vec![0.0]),
            type_grids: vec![Grid::new(vec![0.0]), Grid::new(vec![0.0])],
            action_grids: vec![Grid::linspace(0.0, 1.0, 2), Grid::linspace(0.0, 1.0, 2)],
            payoffs: vec![flat(u1), flat(u2)],
            beliefs: vec![
                BeliefKernel::new(1, 1, vec![1.0]).unwrap(),
                BeliefKernel::new(1, 1, vec![1.0]).unwrap(),
            ],
        }
    }

    fn coordination(c: f64) -> FiniteGame {
        bimatrix([[1.0, 0.0], [0.0, c]], [[1.0, 0.0], [0.0, c]])
    }

    fn matching_pennies() -> FiniteGame {
        bimatrix([[1.0, -1.0], [-1.0, 1.0]], [[-1.0, 1.0], [1.0, -1.0]])
    }

    fn random_two_type_game(seed: u64) -> FiniteGame {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state_grid = Grid::linspace(-1.0, 1.0, 2);
        let type_grids = vec![Grid::linspace(0.0, 1.0, 2), Grid::linspace(0.0, 1.0, 2)];
        let action_grids = vec![Grid::linspace(0.0, 1.0, 2), Grid::linspace(0.0, 1.0, 2)];
        let plen = 2 * 4 * 4;
        let payoffs = (0..2)
            .map(|_| (0..plen).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut beliefs = Vec::new();
        for _ in 0..2 {
            let mut k = BeliefKernel::new(2, 4, vec![1.0; 8]).unwrap();
            for t in 0..2 {
                for v in k.row_mut(t) {
                    *v = rng.gen_range(0.05..1.0);
                }
            }
            k.renormalize_rows();
            beliefs.push(k);
        }
        FiniteGame {
            state_grid,
            type_grids,
            action_grids,
            payoffs,
            beliefs,
        }
    }

    #[test]
    fn coordination_all_first_action_is_a_fixed_point() {
        let g = coordination(2.0);
        let nu = ProductMeasure::canonical(&g);
        let start = pure_to_profile(&g, &[vec![0], vec![0]]);
        let cfg = SolveConfig::default();
        let res = solve_from(&g, &nu, &cfg, &start).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 0);
        assert_eq!(res.profile, start);
        assert!(res.final_surrogate_regret.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn best_response_picks_preferred_side() {
        // With the opponent playing the first action with probability 0.9,
        // the first action pays 0.9 and the second 0.1, so it wins.
        let g = coordination(1.0);
        let mut others = g.uniform_profile();
        others.strategies[1].set_row(0, &[0.9, 0.1]);
        let row = best_response_row(&g, 0, 0, &others).unwrap();
        assert_eq!(row, vec![1.0, 0.0]);

        // Equal values fall back to the lowest action index.
        others.strategies[1].set_row(0, &[0.5, 0.5]);
        let row = best_response_row(&g, 0, 0, &others).unwrap();
        assert_eq!(row, vec![1.0, 0.0]);
    }

    #[test]
    fn vertex_beats_seeded_mixed_rows() {
        let g = random_two_type_game(42);
        let nu = ProductMeasure::canonical(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let mut others = g.uniform_profile();
        others.strategies[1].set_row(0, &[0.3, 0.7]);
        others.strategies[1].set_row(1, &[0.8, 0.2]);
        for t in 0..2 {
            let br = best_response_row(&g, 0, t, &others).unwrap();
            let mut with_br = others.clone();
            with_br.strategies[0].set_row(t, &br);
            let br_value = surrogate_payoff(&g, 0, &with_br, &nu).unwrap();
            for _ in 0..1000 {
                let a = rng.gen_range(0.0..1.0);
                let mut mixed = others.clone();
                mixed.strategies[0].set_row(t, &[a, 1.0 - a]);
                let v = surrogate_payoff(&g, 0, &mixed, &nu).unwrap();
                assert!(v <= br_value + 1e-12);
            }
        }
    }

    #[test]
    fn iterated_br_solves_dominance_solvable_game() {
        let g = bimatrix([[2.0, 2.0], [0.0, 0.0]], [[1.0, 0.0], [3.0, 2.0]]);
        let nu = ProductMeasure::canonical(&g);
        let res = solve(&g, &nu, &SolveConfig::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.profile.pure_actions(), Some(vec![vec![0], vec![0]]));
    }

    #[test]
    fn fictitious_play_finds_the_mixed_point_of_matching_pennies() {
        let g = matching_pennies();
        let nu = ProductMeasure::canonical(&g);
        let cfg = SolveConfig {
            method: Method::FictitiousPlay,
            eps: 1e-3,
            max_iters: 100_000,
            ..SolveConfig::default()
        };
        let res = solve(&g, &nu, &cfg).unwrap();
        assert!(res.converged, "regrets {:?}", res.final_surrogate_regret);
        for i in 0..2 {
            let p = res.profile.strategies[i].row(0)[0];
            assert!((p - 0.5).abs() <= 1e-2, "player {i} at {p}");
        }
    }

    #[test]
    fn fictitious_play_keeps_symmetric_coordination_mixed() {
        // At c = 1 the uniform profile is already the mixed equilibrium, so
        // the run converges immediately and stays at one half.
        let g = coordination(1.0);
        let nu = ProductMeasure::canonical(&g);
        let cfg = SolveConfig {
            method: Method::FictitiousPlay,
            ..SolveConfig::default()
        };
        let res = solve(&g, &nu, &cfg).unwrap();
        assert!(res.converged);
        for i in 0..2 {
            let p = res.profile.strategies[i].row(0)[0];
            assert!((p - 0.5).abs() <= 1e-3);
        }
    }

    #[test]
    fn enumeration_lists_both_coordination_equilibria() {
        let g = coordination(2.0);
        let nu = ProductMeasure::canonical(&g);
        let eqs = enumerate_pure_equilibria(&g, &nu, 1e-9).unwrap();
        let actions: Vec<_> = eqs.iter().map(|p| p.pure_actions().unwrap()).collect();
        assert_eq!(actions, vec![vec![vec![0], vec![0]], vec![vec![1], vec![1]]]);
    }

    #[test]
    fn enumeration_of_matching_pennies_is_empty() {
        let g = matching_pennies();
        let nu = ProductMeasure::canonical(&g);
        assert!(enumerate_pure_equilibria(&g, &nu, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn enumeration_matches_deviation_oracle() {
        // Independent oracle: a pure assignment is an equilibrium when no
        // player can gain more than eps with any alternative pure strategy,
        // measured through the public surrogate payoff.
        for seed in 0..15 {
            let g = random_two_type_game(seed);
            let nu = ProductMeasure::canonical(&g);
            let eqs = enumerate_pure_equilibria(&g, &nu, 1e-9).unwrap();
            let fast: Vec<_> = eqs.iter().map(|p| p.pure_actions().unwrap()).collect();

            let mut slow = Vec::new();
            for bits in 0..16usize {
                // Same canonical order as the enumerator: player 0's types
                // are the leading digits, the last digit moves fastest.
                let pure = vec![
                    vec![(bits >> 3) & 1, (bits >> 2) & 1],
                    vec![(bits >> 1) & 1, bits & 1],
                ];
                let profile = pure_to_profile(&g, &pure);
                let mut is_eq = true;
                'dev: for i in 0..2 {
                    let base = surrogate_payoff(&g, i, &profile, &nu).unwrap();
                    for alt_bits in 0..4usize {
                        let alt = vec![alt_bits & 1, (alt_bits >> 1) & 1];
                        let mut dev = profile.clone();
                        dev.strategies[i] = BehavioralStrategy::pure(2, &alt);
                        let v = surrogate_payoff(&g, i, &dev, &nu).unwrap();
                        if v > base + 1e-9 {
                            is_eq = false;
                            break 'dev;
                        }
                    }
                }
                if is_eq {
                    slow.push(pure);
                }
            }
            assert_eq!(fast, slow, "seed {seed}");
        }
    }

    #[test]
    fn solve_results_are_bit_reproducible() {
        let g = random_two_type_game(7);
        let nu = ProductMeasure::canonical(&g);
        for method in [Method::IteratedBr, Method::FictitiousPlay, Method::EnumeratePure] {
            let cfg = SolveConfig {
                method,
                max_iters: 500,
                ..SolveConfig::default()
            };
            let a = solve(&g, &nu, &cfg).unwrap();
            let b = solve(&g, &nu, &cfg).unwrap();
            assert_eq!(a.converged, b.converged);
            assert_eq!(a.iterations, b.iterations);
            for i in 0..2 {
                let xa = &a.profile.strategies[i];
                let xb = &b.profile.strategies[i];
                for t in 0..2 {
                    for (va, vb) in xa.row(t).iter().zip(xb.row(t)) {
                        assert_eq!(va.to_bits(), vb.to_bits());
                    }
                }
            }
            for (ra, rb) in a
                .final_surrogate_regret
                .iter()
                .zip(&b.final_surrogate_regret)
            {
                assert_eq!(ra.to_bits(), rb.to_bits());
            }
        }
    }

    #[test]
    fn null_type_edits_change_no_surrogate_payoff() {
        // Absolute continuity forces every kernel to ignore a type the
        // measure rules out, so behavior there is payoff-irrelevant.
        let mut g = random_two_type_game(3);
        let mut nu = ProductMeasure {
            state: vec![0.5, 0.5],
            types: vec![vec![1.0, 0.0], vec![0.6, 0.4]],
        };
        nu.finalize(&g).unwrap();
        // Zero out kernel mass on player 0's second type for player 1 and
        // renormalize, so the game satisfies absolute continuity under nu.
        let opp_count = g.opponent_type_count(1);
        for t in 0..2 {
            let row = g.beliefs[1].row_mut(t);
            for s in 0..2 {
                row[s * opp_count + 1] = 0.0;
            }
        }
        g.beliefs[1].renormalize_rows();
        check_absolute_continuity(&g, &nu).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let base = {
            let mut p = g.uniform_profile();
            p.strategies[0].set_row(0, &[0.3, 0.7]);
            p.strategies[1].set_row(0, &[0.2, 0.8]);
            p.strategies[1].set_row(1, &[0.9, 0.1]);
            p
        };
        for _ in 0..20 {
            let a: f64 = rng.gen_range(0.0..1.0);
            let mut edited = base.clone();
            edited.strategies[0].set_row(1, &[a, 1.0 - a]);
            for i in 0..2 {
                let before = surrogate_payoff(&g, i, &base, &nu).unwrap();
                let after = surrogate_payoff(&g, i, &edited, &nu).unwrap();
                assert_eq!(before, after, "player {i} moved");
            }
        }
    }

    #[test]
    fn guard_rejects_large_profile_spaces() {
        let mut g = random_two_type_game(1);
        // Inflate the type count far beyond the guard: 2^21 > 1e6 profiles
        // for player 0 alone.
        g.type_grids[0] = Grid::linspace(0.0, 1.0, 21);
        for i in 0..2 {
            let rows = g.num_types(i);
            let cols = g.kernel_cols(i);
            g.beliefs[i] =
                BeliefKernel::new(rows, cols, vec![1.0 / cols as f64; rows * cols]).unwrap();
        }
        let plen = g.payoff_len();
        g.payoffs[0] = vec![0.0; plen];
        g.payoffs[1] = vec![0.0; plen];
        let nu = ProductMeasure::canonical(&g);
        assert!(matches!(
            enumerate_pure_equilibria(&g, &nu, 1e-9),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
        let cfg = SolveConfig {
            method: Method::EnumeratePure,
            ..SolveConfig::default()
        };
        assert!(matches!(
            solve(&g, &nu, &cfg),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let g = coordination(1.0);
        let nu = ProductMeasure::canonical(&g);
        for cfg in [
            SolveConfig {
                eps: 0.0,
                ..SolveConfig::default()
            },
            SolveConfig {
                max_iters: 0,
                ..SolveConfig::default()
            },
            SolveConfig {
                damping: 1.5,
                ..SolveConfig::default()
            },
        ] {
            assert!(matches!(solve(&g, &nu, &cfg), Err(Error::Invalid(_))));
        }
    }
}
