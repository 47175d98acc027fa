//! Verification, repair, and certification of equilibria.
//!
//! The verification currency is regret. A profile is a Bayesian equilibrium
//! when no player can gain at any own type by switching actions, and it is
//! an equilibrium of the surrogate game when the measure-weighted average
//! of those per-type gains vanishes for every player. This module computes
//! both views in one report, extracts the set of types where a profile is
//! already optimal, repairs a profile by replacing only its suboptimal
//! rows, and runs two certification drills: the two-directional equivalence
//! between the per-type and the measure-weighted verdicts, and the closure
//! of the Bayesian equilibrium set under edits at measure-null types.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::game::{BehavioralStrategy, FiniteGame, Odometer, ProductMeasure, StrategyProfile};
use crate::interim::{check_measure, ValueTable};
use crate::measure::check_absolute_continuity;
use crate::numeric::{max_entry, pairwise_sum};
use crate::solver::{best_response_row, enumerate_pure_equilibria, ENUMERATION_GUARD};

/// Default tolerance when verifying profiles that are exact by
/// construction; separates arithmetic noise from genuine regret.
pub const EPS_EXACT: f64 = 1e-9;

/// Default tolerance when verifying solver outputs.
pub const EPS_SOLVER: f64 = 1e-6;

/// Regret summary of one profile. `interim_regret[i][t]` is the gap between
/// player `i`'s best achievable value at type `t` and the value of the row
/// they actually play; the surrogate block is present when a product
/// measure was supplied.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegretReport {
    /// Tolerance the stored verdicts were computed at.
    pub eps: f64,
    /// Per player, per own type.
    pub interim_regret: Vec<Vec<f64>>,
    pub max_interim_regret: f64,
    /// Location of the largest interim regret, lowest indices on ties.
    pub worst_player: usize,
    pub worst_type: usize,
    /// Per player: measure-weighted average of the interim regrets.
    pub surrogate_regret: Option<Vec<f64>>,
    /// True when every interim regret is at most `eps`.
    pub verdict_be: bool,
    /// True when every player's surrogate regret is at most `eps`.
    pub verdict_ne_nu: Option<bool>,
}

impl RegretReport {
    /// Bayesian-equilibrium verdict at a different tolerance.
    pub fn verdict_be_at(&self, eps: f64) -> bool {
        self.max_interim_regret <= eps
    }

    /// Surrogate-equilibrium verdict at a different tolerance.
    pub fn verdict_ne_nu_at(&self, eps: f64) -> Option<bool> {
        self.surrogate_regret
            .as_ref()
            .map(|r| r.iter().all(|&x| x <= eps))
    }
}

fn regret_rows(
    tables: &[ValueTable],
    profile: &StrategyProfile,
) -> Vec<Vec<f64>> {
    let pure = profile.pure_actions();
    let mut out = Vec::with_capacity(tables.len());
    let mut row = Vec::new();
    for (i, table) in tables.iter().enumerate() {
        let choice = pure.as_ref().map(|p| table.pure_choice(p));
        let weights = choice.is_none().then(|| table.opp_weights(profile));
        let mut regrets = vec![0.0; table.n_types];
        for (t, slot) in regrets.iter_mut().enumerate() {
            match &choice {
                Some(c) => table.pure_row(c, t, &mut row),
                None => table.mixed_row(weights.as_ref().unwrap(), t, &mut row),
            }
            let best = max_entry(&row);
            let played = match &choice {
                // A pure row plays a single entry, so the gap is an exact
                // difference of two table values.
                Some(_) => row[profile.strategies[i].pure_action(t).unwrap()],
                None => {
                    let own = profile.strategies[i].row(t);
                    let terms: Vec<f64> = row.iter().zip(own).map(|(v, p)| p * v).collect();
                    pairwise_sum(&terms)
                }
            };
            *slot = best - played;
        }
        out.push(regrets);
    }
    out
}

/// Full regret report of `profile`, with the surrogate block filled in when
/// `nu` is given. Verdicts are stored at tolerance `eps`.
pub fn regret_report(
    g: &FiniteGame,
    profile: &StrategyProfile,
    nu: Option<&ProductMeasure>,
    eps: f64,
) -> Result<RegretReport, Error> {
    g.check_profile(profile)?;
    if let Some(nu) = nu {
        check_measure(g, nu)?;
    }
    let tables: Vec<ValueTable> = (0..g.n_players())
        .map(|i| ValueTable::new(g, i))
        .collect::<Result<_, _>>()?;
    let interim_regret = regret_rows(&tables, profile);

    let mut max_interim_regret = f64::NEG_INFINITY;
    let mut worst_player = 0;
    let mut worst_type = 0;
    for (i, regrets) in interim_regret.iter().enumerate() {
        for (t, &r) in regrets.iter().enumerate() {
            if r > max_interim_regret {
                max_interim_regret = r;
                worst_player = i;
                worst_type = t;
            }
        }
    }

    let surrogate_regret = nu.map(|nu| {
        interim_regret
            .iter()
            .enumerate()
            .map(|(i, regrets)| {
                let terms: Vec<f64> = regrets
                    .iter()
                    .zip(&nu.types[i])
                    .map(|(r, w)| w * r)
                    .collect();
                pairwise_sum(&terms)
            })
            .collect::<Vec<f64>>()
    });

    let verdict_be = max_interim_regret <= eps;
    let verdict_ne_nu = surrogate_regret
        .as_ref()
        .map(|r| r.iter().all(|&x| x <= eps));
    Ok(RegretReport {
        eps,
        interim_regret,
        max_interim_regret,
        worst_player,
        worst_type,
        surrogate_regret,
        verdict_be,
        verdict_ne_nu,
    })
}

/// Type indices where player `i`'s row in `profile` is already within `eps`
/// of optimal, in increasing order.
pub fn optimal_type_set(
    g: &FiniteGame,
    i: usize,
    profile: &StrategyProfile,
    eps: f64,
) -> Result<Vec<usize>, Error> {
    let report = regret_report(g, profile, None, eps)?;
    if i >= report.interim_regret.len() {
        return Err(Error::IndexOutOfRange {
            what: "player".into(),
            index: i,
            bound: report.interim_regret.len(),
        });
    }
    Ok(report.interim_regret[i]
        .iter()
        .enumerate()
        .filter(|(_, &r)| r <= eps)
        .map(|(t, _)| t)
        .collect())
}

/// Outcome of [`repair_with_report`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairOutcome {
    pub profile: StrategyProfile,
    /// `(player, type)` rows that were replaced.
    pub replaced: Vec<(usize, usize)>,
    /// When a measure was supplied: replaced rows at types the measure
    /// weights positively. Replacing such a row means the input was not an
    /// equilibrium of the surrogate game, so the repair guarantee does not
    /// apply.
    pub positive_weight_replacements: Option<Vec<(usize, usize)>>,
    /// When a measure was supplied: true exactly when the list above is
    /// non-empty.
    pub precondition_violated: Option<bool>,
    /// Bayesian-equilibrium verdict of the repaired profile at the repair
    /// tolerance.
    pub verdict_be_after: bool,
}

/// Replaces every row whose interim regret exceeds `eps` with a best
/// response computed against the ORIGINAL profile, and keeps every other
/// row untouched. Idempotent on Bayesian equilibria. The construction is
/// guaranteed to produce a Bayesian equilibrium when the input is an exact
/// equilibrium of a surrogate game, because then only measure-null rows
/// change and those rows influence nobody else's values.
pub fn repair(
    g: &FiniteGame,
    profile: &StrategyProfile,
    eps: f64,
) -> Result<StrategyProfile, Error> {
    Ok(repair_with_report(g, profile, None, eps)?.profile)
}

/// [`repair`] plus bookkeeping: which rows changed, whether any changed row
/// carries positive weight under `nu`, and the post-repair verdict.
pub fn repair_with_report(
    g: &FiniteGame,
    profile: &StrategyProfile,
    nu: Option<&ProductMeasure>,
    eps: f64,
) -> Result<RepairOutcome, Error> {
    let report = regret_report(g, profile, nu, eps)?;
    let mut repaired = profile.clone();
    let mut replaced = Vec::new();
    for (i, regrets) in report.interim_regret.iter().enumerate() {
        for (t, &r) in regrets.iter().enumerate() {
            if r > eps {
                let row = best_response_row(g, i, t, profile)?;
                repaired.strategies[i].set_row(t, &row);
                replaced.push((i, t));
            }
        }
    }
    let positive_weight_replacements = nu.map(|nu| {
        replaced
            .iter()
            .copied()
            .filter(|&(i, t)| nu.types[i][t] > 0.0)
            .collect::<Vec<_>>()
    });
    let precondition_violated = positive_weight_replacements
        .as_ref()
        .map(|v| !v.is_empty());
    let after = regret_report(g, &repaired, None, eps)?;
    Ok(RepairOutcome {
        profile: repaired,
        replaced,
        positive_weight_replacements,
        precondition_violated,
        verdict_be_after: after.verdict_be,
    })
}

/// All pure profiles whose largest interim regret is at most `eps`, in
/// canonical order: the Bayesian equilibria among pure profiles.
pub fn enumerate_pure_bayesian_equilibria(
    g: &FiniteGame,
    eps: f64,
) -> Result<Vec<StrategyProfile>, Error> {
    let mut size = 1.0_f64;
    for i in 0..g.n_players() {
        size *= (g.num_actions(i) as f64).powi(g.num_types(i) as i32);
    }
    if size > ENUMERATION_GUARD {
        return Err(Error::SearchSpaceTooLarge {
            size,
            guard: ENUMERATION_GUARD,
        });
    }
    let n = g.n_players();
    let tables: Vec<ValueTable> = (0..n)
        .map(|i| ValueTable::new(g, i))
        .collect::<Result<_, _>>()?;
    let mut dims = Vec::new();
    for i in 0..n {
        dims.extend(std::iter::repeat(g.num_actions(i)).take(g.num_types(i)));
    }
    let mut found = Vec::new();
    let mut od = Odometer::new(dims);
    let mut row = Vec::new();
    'profiles: while let Some(digits) = od.next() {
        let mut pure = Vec::with_capacity(n);
        let mut k = 0;
        for i in 0..n {
            let nt = g.num_types(i);
            pure.push(digits[k..k + nt].to_vec());
            k += nt;
        }
        for (i, table) in tables.iter().enumerate() {
            let choice = table.pure_choice(&pure);
            for t in 0..table.n_types {
                table.pure_row(&choice, t, &mut row);
                if max_entry(&row) - row[pure[i][t]] > eps {
                    continue 'profiles;
                }
            }
        }
        found.push(StrategyProfile::new(
            (0..n)
                .map(|i| BehavioralStrategy::pure(g.num_actions(i), &pure[i]))
                .collect(),
        ));
    }
    Ok(found)
}

/// One counterexample found by [`certify_characterization`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationViolation {
    /// "be_not_surrogate" when a Bayesian equilibrium failed the surrogate
    /// verdict under some measure; "repaired_not_be" when a repaired exact
    /// surrogate equilibrium failed the per-type verdict.
    pub direction: String,
    /// 0 is the canonical measure, 1.. are the seeded samples.
    pub measure_index: usize,
    pub pure_actions: Vec<Vec<usize>>,
    pub detail: String,
}

/// Result of [`certify_characterization`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationReport {
    pub eps: f64,
    /// Seeded full-support measures tested, the canonical one not counted.
    pub n_measures: usize,
    pub pure_be_count: usize,
    /// Exact surrogate equilibria found per measure (canonical first).
    pub ne_nu_counts: Vec<usize>,
    pub violations: Vec<CertificationViolation>,
    pub ok: bool,
}

fn seeded_full_support_measure(
    g: &FiniteGame,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> ProductMeasure {
    use rand::Rng;
    let mut draw = |len: usize| -> Vec<f64> {
        let mut v: Vec<f64> = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(rng.gen_range(0.1..1.0));
        }
        let sum = pairwise_sum(&v);
        for slot in v.iter_mut() {
            *slot /= sum;
        }
        v
    };
    let state = draw(g.num_states());
    let types = (0..g.n_players()).map(|i| draw(g.num_types(i))).collect();
    ProductMeasure { state, types }
}

/// Two-directional check between the per-type and measure-weighted
/// equilibrium notions on one game: every pure Bayesian equilibrium must
/// pass the surrogate verdict under every sampled full-support measure, and
/// every exact pure surrogate equilibrium must pass the per-type verdict
/// after repair. Measures are the canonical one plus `n_measures` seeded
/// full-support samples.
pub fn certify_characterization(
    g: &FiniteGame,
    eps: f64,
    n_measures: usize,
    seed: u64,
) -> Result<CertificationReport, Error> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut measures = vec![ProductMeasure::canonical(g)];
    for _ in 0..n_measures {
        measures.push(seeded_full_support_measure(g, &mut rng));
    }

    let be_profiles = enumerate_pure_bayesian_equilibria(g, eps)?;
    let mut violations = Vec::new();
    let mut ne_nu_counts = Vec::with_capacity(measures.len());

    for (m_idx, nu) in measures.iter().enumerate() {
        // Direction one: a profile optimal at every type stays optimal on
        // any weighted average of types.
        for profile in &be_profiles {
            let report = regret_report(g, profile, Some(nu), eps)?;
            if report.verdict_ne_nu != Some(true) {
                violations.push(CertificationViolation {
                    direction: "be_not_surrogate".into(),
                    measure_index: m_idx,
                    pure_actions: profile.pure_actions().unwrap_or_default(),
                    detail: format!(
                        "surrogate regrets {:?} exceed {eps}",
                        report.surrogate_regret
                    ),
                });
            }
        }
        // Direction two: exact surrogate equilibria, repaired, must verify
        // at every type.
        let exact = enumerate_pure_equilibria(g, nu, 0.0)?;
        ne_nu_counts.push(exact.len());
        for profile in &exact {
            let repaired = repair(g, profile, eps)?;
            let report = regret_report(g, &repaired, Some(nu), eps)?;
            if !report.verdict_be {
                violations.push(CertificationViolation {
                    direction: "repaired_not_be".into(),
                    measure_index: m_idx,
                    pure_actions: profile.pure_actions().unwrap_or_default(),
                    detail: format!(
                        "max interim regret {} at player {} type {} after repair",
                        report.max_interim_regret, report.worst_player, report.worst_type
                    ),
                });
            }
        }
    }

    Ok(CertificationReport {
        eps,
        n_measures,
        pure_be_count: be_profiles.len(),
        ne_nu_counts,
        violations: violations.clone(),
        ok: violations.is_empty(),
    })
}

/// Verdict pair of [`certify_nu_equivalence`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NuEquivalenceVerdict {
    pub verdict_first: bool,
    pub verdict_second: bool,
    pub agree: bool,
}

fn same_support(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (*x > 0.0) == (*y > 0.0))
}

/// Checks that two product measures with identical supports deliver the
/// same surrogate verdict on `profile`. At `eps = 0` the verdicts are
/// computed from the zero pattern of per-type regrets restricted to the
/// common support, which is the quantity support equivalence preserves;
/// weighted averages would differ in the last bits between measures. At
/// positive `eps` the usual surrogate threshold is used for both.
pub fn certify_nu_equivalence(
    g: &FiniteGame,
    profile: &StrategyProfile,
    nu: &ProductMeasure,
    nu_prime: &ProductMeasure,
    eps: f64,
) -> Result<NuEquivalenceVerdict, Error> {
    check_measure(g, nu)?;
    check_measure(g, nu_prime)?;
    if !same_support(&nu.state, &nu_prime.state)
        || nu
            .types
            .iter()
            .zip(&nu_prime.types)
            .any(|(a, b)| !same_support(a, b))
    {
        return Err(Error::Incompatible(
            "measures do not share a factorwise support, so they are not an \
             equivalence pair"
                .into(),
        ));
    }
    let verdict = |measure: &ProductMeasure| -> Result<bool, Error> {
        let report = regret_report(g, profile, Some(measure), eps)?;
        if eps == 0.0 {
            Ok(report
                .interim_regret
                .iter()
                .enumerate()
                .all(|(i, regrets)| {
                    regrets
                        .iter()
                        .zip(&measure.types[i])
                        .all(|(&r, &w)| w == 0.0 || r <= 0.0)
                }))
        } else {
            Ok(report.verdict_ne_nu.unwrap())
        }
    };
    let verdict_first = verdict(nu)?;
    let verdict_second = verdict(nu_prime)?;
    Ok(NuEquivalenceVerdict {
        verdict_first,
        verdict_second,
        agree: verdict_first == verdict_second,
    })
}

/// One failed closure probe: the seeded profile with this index disagreed
/// with every enumerated pure Bayesian equilibrium, and the recorded
/// `(player, own type)` is the first mismatch against the closest one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosureFailure {
    pub profile_index: usize,
    pub player: usize,
    pub own_type: usize,
}

/// Result of [`bne_closure_check`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosureReport {
    pub checked: usize,
    /// Exact pure surrogate equilibria available as bases.
    pub base_count: usize,
    pub be_count: usize,
    pub failures: Vec<ClosureFailure>,
    pub ok: bool,
}

/// First `(player, type)` with positive `nu` weight where `profile`
/// disagrees with every pure Bayesian equilibrium in `be_list`; `None`
/// when some equilibrium matches the profile's rows at all positive types.
pub fn closure_witness(
    profile: &StrategyProfile,
    nu: &ProductMeasure,
    be_list: &[StrategyProfile],
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, (usize, usize))> = None;
    for be in be_list {
        let mut mismatches = 0usize;
        let mut first = None;
        for (i, weights) in nu.types.iter().enumerate() {
            for (t, &w) in weights.iter().enumerate() {
                if w > 0.0 && profile.strategies[i].row(t) != be.strategies[i].row(t) {
                    mismatches += 1;
                    if first.is_none() {
                        first = Some((i, t));
                    }
                }
            }
        }
        match first {
            None => return None,
            Some(witness) => {
                if best.map_or(true, |(m, _)| mismatches < m) {
                    best = Some((mismatches, witness));
                }
            }
        }
    }
    // No equilibria at all counts as a failure at the first positive type.
    Some(best.map(|(_, w)| w).unwrap_or((0, 0)))
}

/// Probes whether the set of pure Bayesian equilibria is closed under
/// edits at `nu`-null types: each probe takes an exact pure surrogate
/// equilibrium, randomizes its rows at null types, and checks that the
/// probe still matches some enumerated Bayesian equilibrium at every type
/// the measure weights positively.
pub fn bne_closure_check(
    g: &FiniteGame,
    nu: &ProductMeasure,
    eps: f64,
    n_profiles: usize,
    seed: u64,
) -> Result<ClosureReport, Error> {
    use rand::{Rng, SeedableRng};
    check_measure(g, nu)?;
    check_absolute_continuity(g, nu)?;
    let bases = enumerate_pure_equilibria(g, nu, 0.0)?;
    let be_list = enumerate_pure_bayesian_equilibria(g, eps)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    if !bases.is_empty() {
        for k in 0..n_profiles {
            let mut probe = bases[k % bases.len()].clone();
            for (i, weights) in nu.types.iter().enumerate() {
                for (t, &w) in weights.iter().enumerate() {
                    if w == 0.0 {
                        let n_actions = probe.strategies[i].n_actions();
                        let mut row: Vec<f64> =
                            (0..n_actions).map(|_| rng.gen_range(0.01..1.0)).collect();
                        let sum = pairwise_sum(&row);
                        for v in row.iter_mut() {
                            *v /= sum;
                        }
                        probe.strategies[i].set_row(t, &row);
                    }
                }
            }
            checked += 1;
            if let Some((player, own_type)) = closure_witness(&probe, nu, &be_list) {
                failures.push(ClosureFailure {
                    profile_index: k,
                    player,
                    own_type,
                });
            }
        }
    }
    Ok(ClosureReport {
        checked,
        base_count: bases.len(),
        be_count: be_list.len(),
        failures: failures.clone(),
        ok: failures.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{BeliefKernel, Grid};
    use crate::interim::interim_action_values;
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

    fn random_game(seed: u64, types: [usize; 2]) -> FiniteGame {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state_grid = Grid::linspace(-1.0, 1.0, 2);
        let type_grids = vec![
            Grid::linspace(0.0, 1.0, types[0]),
            Grid::linspace(0.0, 1.0, types[1]),
        ];
        let action_grids = vec![Grid::linspace(0.0, 1.0, 2), Grid::linspace(0.0, 1.0, 2)];
        let plen = 2 * types[0] * types[1] * 4;
        let payoffs = (0..2)
            .map(|_| (0..plen).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut beliefs = Vec::new();
        for i in 0..2 {
            let rows = types[i];
            let cols = 2 * types[1 - i];
            let mut k = BeliefKernel::new(rows, cols, vec![1.0; rows * cols]).unwrap();
            for t in 0..rows {
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

    fn pure_profile(g: &FiniteGame, pure: &[Vec<usize>]) -> StrategyProfile {
        StrategyProfile::new(
            (0..g.n_players())
                .map(|i| BehavioralStrategy::pure(g.num_actions(i), &pure[i]))
                .collect(),
        )
    }

    /// A measure whose support excludes player 0's last type, paired with
    /// kernels that put no mass there so absolute continuity holds.
    fn game_with_null_type(seed: u64) -> (FiniteGame, ProductMeasure) {
        let mut g = random_game(seed, [2, 2]);
        let mut nu = ProductMeasure {
            state: vec![0.5, 0.5],
            types: vec![vec![1.0, 0.0], vec![0.5, 0.5]],
        };
        nu.finalize(&g).unwrap();
        let opp_count = g.opponent_type_count(1);
        for t in 0..g.num_types(1) {
            let row = g.beliefs[1].row_mut(t);
            for s in 0..2 {
                row[s * opp_count + 1] = 0.0;
            }
        }
        g.beliefs[1].renormalize_rows();
        check_absolute_continuity(&g, &nu).unwrap();
        (g, nu)
    }

    #[test]
    fn coordination_verdicts_and_exact_zero_regret() {
        let g = coordination(2.0);
        let nu = ProductMeasure::canonical(&g);
        let eq = pure_profile(&g, &[vec![1], vec![1]]);
        let report = regret_report(&g, &eq, Some(&nu), EPS_EXACT).unwrap();
        assert!(report.verdict_be);
        assert_eq!(report.verdict_ne_nu, Some(true));
        assert_eq!(report.max_interim_regret, 0.0);
        assert_eq!(report.interim_regret, vec![vec![0.0], vec![0.0]]);
        assert_eq!(report.surrogate_regret, Some(vec![0.0, 0.0]));

        let miscoordinated = pure_profile(&g, &[vec![0], vec![1]]);
        let report = regret_report(&g, &miscoordinated, Some(&nu), EPS_EXACT).unwrap();
        assert!(!report.verdict_be);
        assert_eq!(report.verdict_ne_nu, Some(false));
        // Switching to the second action gains c = 2 for player 0.
        assert_eq!(report.interim_regret[0][0], 2.0);
    }

    #[test]
    fn dirac_measure_reads_off_one_type() {
        let g = random_game(9, [2, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut profile = g.uniform_profile();
        for i in 0..2 {
            for t in 0..2 {
                let a = rng.gen_range(0.05..0.95);
                profile.strategies[i].set_row(t, &[a, 1.0 - a]);
            }
        }
        let mut nu = ProductMeasure {
            state: vec![0.5, 0.5],
            types: vec![vec![0.0, 1.0], vec![0.5, 0.5]],
        };
        nu.finalize(&g).unwrap();
        let report = regret_report(&g, &profile, Some(&nu), EPS_SOLVER).unwrap();
        let surrogate = report.surrogate_regret.as_ref().unwrap();
        assert!((surrogate[0] - report.interim_regret[0][1]).abs() <= 1e-15);
    }

    #[test]
    fn regret_invariants_hold_on_random_profiles() {
        for seed in 0..20 {
            let g = random_game(seed, [2, 3]);
            let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
            let mut profile = g.uniform_profile();
            for i in 0..2 {
                for t in 0..g.num_types(i) {
                    let a = rng.gen_range(0.0..1.0);
                    profile.strategies[i].set_row(t, &[a, 1.0 - a]);
                }
            }
            let nu = ProductMeasure::canonical(&g);
            let report = regret_report(&g, &profile, Some(&nu), EPS_SOLVER).unwrap();
            for regrets in &report.interim_regret {
                for &r in regrets {
                    assert!(r >= -1e-12, "negative regret {r}");
                }
            }
            for &s in report.surrogate_regret.as_ref().unwrap() {
                assert!(s <= report.max_interim_regret + 1e-12);
            }
        }
    }

    #[test]
    fn optimal_type_set_matches_regret_rows() {
        let g = coordination(2.0);
        let eq = pure_profile(&g, &[vec![0], vec![0]]);
        assert_eq!(optimal_type_set(&g, 0, &eq, EPS_EXACT).unwrap(), vec![0]);
        assert_eq!(optimal_type_set(&g, 1, &eq, EPS_EXACT).unwrap(), vec![0]);
        let bad = pure_profile(&g, &[vec![0], vec![1]]);
        assert!(optimal_type_set(&g, 0, &bad, EPS_EXACT).unwrap().is_empty());
    }

    #[test]
    fn repair_keeps_equilibria_untouched_and_is_idempotent() {
        let g = coordination(2.0);
        let eq = pure_profile(&g, &[vec![1], vec![1]]);
        let once = repair(&g, &eq, EPS_EXACT).unwrap();
        assert_eq!(once, eq);
        let (g2, nu) = game_with_null_type(21);
        let bases = enumerate_pure_equilibria(&g2, &nu, 0.0).unwrap();
        assert!(!bases.is_empty());
        let once = repair(&g2, &bases[0], EPS_EXACT).unwrap();
        let twice = repair(&g2, &once, EPS_EXACT).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn repair_restores_a_sabotaged_null_row() {
        for seed in [21, 22, 23, 25, 28] {
            let (g, nu) = game_with_null_type(seed);
            let bases = enumerate_pure_equilibria(&g, &nu, 0.0).unwrap();
            if bases.is_empty() {
                continue;
            }
            for base in &bases {
                // Force the worst action at the null type (player 0, type 1).
                let table = interim_action_values(&g, 0, base).unwrap();
                let row = table.row(1);
                let worst = if row[0] <= row[1] { 0 } else { 1 };
                let mut sabotaged = base.clone();
                sabotaged.strategies[0].set_row(1, &{
                    let mut r = vec![0.0; 2];
                    r[worst] = 1.0;
                    r
                });
                // Sabotage at a null type keeps the surrogate verdict.
                let rep = regret_report(&g, &sabotaged, Some(&nu), EPS_EXACT).unwrap();
                assert_eq!(rep.verdict_ne_nu, Some(true));

                let outcome =
                    repair_with_report(&g, &sabotaged, Some(&nu), EPS_EXACT).unwrap();
                assert!(outcome.verdict_be_after, "seed {seed}");
                assert_eq!(outcome.precondition_violated, Some(false));
                // The repaired profile agrees with the sabotaged input at
                // every positive-weight type.
                for (i, weights) in nu.types.iter().enumerate() {
                    for (t, &w) in weights.iter().enumerate() {
                        if w > 0.0 {
                            assert_eq!(
                                outcome.profile.strategies[i].row(t),
                                sabotaged.strategies[i].row(t)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn repair_flags_positive_weight_replacements() {
        let g = coordination(2.0);
        let nu = ProductMeasure::canonical(&g);
        let bad = pure_profile(&g, &[vec![0], vec![1]]);
        let outcome = repair_with_report(&g, &bad, Some(&nu), EPS_EXACT).unwrap();
        assert_eq!(outcome.precondition_violated, Some(true));
        assert!(!outcome.positive_weight_replacements.unwrap().is_empty());
    }

    #[test]
    fn certification_passes_on_seeded_games() {
        for seed in 0..10 {
            let g = random_game(100 + seed, [3, 3]);
            let report = certify_characterization(&g, EPS_EXACT, 5, 777 + seed).unwrap();
            assert!(report.ok, "seed {seed}: {:?}", report.violations);
            assert_eq!(report.ne_nu_counts.len(), 6);
        }
    }

    #[test]
    fn nu_equivalence_agrees_on_shared_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for seed in 0..10 {
            let g = random_game(200 + seed, [2, 2]);
            let nu = ProductMeasure::canonical(&g);
            let mut other = ProductMeasure {
                state: vec![rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0)],
                types: vec![
                    vec![rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0)],
                    vec![rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0)],
                ],
            };
            let norm = |v: &mut Vec<f64>| {
                let s: f64 = v.iter().sum();
                for x in v.iter_mut() {
                    *x /= s;
                }
            };
            norm(&mut other.state);
            for t in other.types.iter_mut() {
                norm(t);
            }
            for k in 0..20 {
                let pure = vec![
                    vec![k & 1, (k >> 1) & 1],
                    vec![(k >> 2) & 1, (k >> 3) & 1],
                ];
                let profile = pure_profile(&g, &pure);
                let v = certify_nu_equivalence(&g, &profile, &nu, &other, 0.0).unwrap();
                assert!(v.agree, "seed {seed} profile {k}");
            }
        }
    }

    #[test]
    fn nu_equivalence_rejects_support_mismatch() {
        let g = random_game(4, [2, 2]);
        let nu = ProductMeasure::canonical(&g);
        let mut other = nu.clone();
        other.types[0] = vec![1.0, 0.0];
        assert!(matches!(
            certify_nu_equivalence(&g, &g.uniform_profile(), &nu, &other, 0.0),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn nu_equivalence_ignores_regret_outside_support() {
        let (g, nu) = game_with_null_type(31);
        let mut scaled = nu.clone();
        scaled.types[1] = vec![0.3, 0.7];
        let bases = enumerate_pure_equilibria(&g, &nu, 0.0).unwrap();
        assert!(!bases.is_empty());
        // Sabotage the null type; both verdicts must stay positive.
        let table = interim_action_values(&g, 0, &bases[0]).unwrap();
        let row = table.row(1);
        let worst = if row[0] <= row[1] { 0 } else { 1 };
        let mut sabotaged = bases[0].clone();
        let mut r = vec![0.0; 2];
        r[worst] = 1.0;
        sabotaged.strategies[0].set_row(1, &r);
        let v = certify_nu_equivalence(&g, &sabotaged, &nu, &scaled, 0.0).unwrap();
        assert!(v.verdict_first && v.verdict_second && v.agree);
    }

    #[test]
    fn closure_check_full_support_and_null_type() {
        for seed in 0..5 {
            let g = random_game(300 + seed, [2, 2]);
            let nu = ProductMeasure::canonical(&g);
            let report = bne_closure_check(&g, &nu, EPS_EXACT, 10, 55).unwrap();
            assert!(report.ok, "seed {seed}");
        }
        for seed in [21, 22, 23, 25, 28] {
            let (g, nu) = game_with_null_type(seed);
            let report = bne_closure_check(&g, &nu, EPS_EXACT, 10, 55).unwrap();
            assert!(report.ok, "seed {seed}");
        }
    }

    #[test]
    fn closure_witness_names_a_type_for_non_equilibria() {
        let g = coordination(2.0);
        let nu = ProductMeasure::canonical(&g);
        let be_list = enumerate_pure_bayesian_equilibria(&g, EPS_EXACT).unwrap();
        assert_eq!(be_list.len(), 2);
        let bad = pure_profile(&g, &[vec![0], vec![1]]);
        assert!(closure_witness(&bad, &nu, &be_list).is_some());
        let good = pure_profile(&g, &[vec![1], vec![1]]);
        assert!(closure_witness(&good, &nu, &be_list).is_none());
    }

    #[test]
    fn opponent_values_ignore_null_type_edits() {
        let (g, nu) = game_with_null_type(17);
        let mut rng = ChaCha8Rng::seed_from_u64(170);
        let base = {
            let mut p = g.uniform_profile();
            p.strategies[0].set_row(0, &[0.4, 0.6]);
            p
        };
        let _ = nu;
        for _ in 0..10 {
            let a: f64 = rng.gen_range(0.0..1.0);
            let mut edited = base.clone();
            edited.strategies[0].set_row(1, &[a, 1.0 - a]);
            let before = interim_action_values(&g, 1, &base).unwrap();
            let after = interim_action_values(&g, 1, &edited).unwrap();
            assert_eq!(before.values, after.values);
        }
    }

    #[test]
    fn be_implies_surrogate_verdict_for_every_measure() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for seed in 0..10 {
            let g = random_game(400 + seed, [2, 2]);
            let be_list = enumerate_pure_bayesian_equilibria(&g, EPS_EXACT).unwrap();
            for profile in &be_list {
                for _ in 0..5 {
                    let nu = seeded_full_support_measure(&g, &mut rng);
                    let report = regret_report(&g, profile, Some(&nu), EPS_EXACT).unwrap();
                    assert_eq!(report.verdict_ne_nu, Some(true));
                }
            }
        }
    }
}
