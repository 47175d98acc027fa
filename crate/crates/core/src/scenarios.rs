//! Reference game families used by the test suite and the command line tool.
//!
//! The families cover the main phenomena the library is built to study: a
//! two-player coordination game with an outside option and disagreeing
//! Gaussian beliefs, a discretized public-good provision game with truncated
//! normal beliefs and threshold strategies, Cournot quantity competition with
//! an uncertain demand intercept, shared-signal games whose belief kernels
//! concentrate on the diagonal, and seeded random games for bulk
//! certification runs.
//!
//! Every builder is deterministic: the same arguments (including seeds)
//! produce bit-identical games.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expr::{parse_expr, tabulate, Expr, Var};
use crate::game::{
    BehavioralStrategy, BeliefKernel, FiniteGame, Grid, Odometer, StrategyProfile,
};
use crate::numeric::pairwise_sum;

/// Stopping tolerance for the public-good threshold fixed point, measured as
/// the max-abs gap between an iterate and its image.
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Iteration cap for the damped threshold fixed-point search.
pub const THRESHOLD_MAX_ITERS: usize = 100_000;

/// Standard normal distribution function.
///
/// For `x >= 0` this is `erfc(-x / sqrt(2)) / 2`, which stays in `[1/2, 1]`
/// and involves no cancellation. For `x < 0` the value is computed as
/// `1 - cdf(-x)`; that subtraction is exact in floating point because
/// `cdf(-x)` lies in `[1/2, 1]`, so `cdf(x) + cdf(-x) == 1` holds exactly
/// for every `x`. Absolute error is at the rounding level, far below the
/// 1e-10 the callers rely on.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 1.0 - std_normal_cdf(-x);
    }
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Distribution function of a normal with the given mean and scale.
fn normal_cdf(x: f64, mean: f64, sigma: f64) -> f64 {
    std_normal_cdf((x - mean) / sigma)
}

/// How a belief mean depends on the believer's own type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMap {
    /// Constant zero.
    Zero,
    /// The own type itself.
    Identity,
    /// `scale * t + shift`.
    Affine { scale: f64, shift: f64 },
}

impl MeanMap {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            MeanMap::Zero => 0.0,
            MeanMap::Identity => t,
            MeanMap::Affine { scale, shift } => scale * t + shift,
        }
    }

    fn is_finite_map(&self) -> bool {
        match *self {
            MeanMap::Zero | MeanMap::Identity => true,
            MeanMap::Affine { scale, shift } => scale.is_finite() && shift.is_finite(),
        }
    }
}

/// A two-player Gaussian belief family: conditional on own type `t`, the
/// pair `(s, t_opp)` is bivariate normal with mean
/// `(mean_s(t), mean_t(t))` and covariance `[[1, 1], [1, variance_own]]`.
/// The covariance is positive definite exactly when `variance_own > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianBeliefSpec {
    pub mean_s: MeanMap,
    pub mean_t: MeanMap,
    pub variance_own: f64,
}

/// Per-point cell widths of a strictly increasing grid. Each point stands
/// for a cell of one local grid spacing centered at the point; the edge
/// points keep their full neighbor spacing, so a uniform grid weights every
/// point equally. A singleton grid gets unit width.
fn cell_widths(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    if m == 1 {
        return vec![1.0];
    }
    let mut w = vec![0.0; m];
    w[0] = values[1] - values[0];
    w[m - 1] = values[m - 1] - values[m - 2];
    for k in 1..m - 1 {
        w[k] = (values[k + 1] - values[k - 1]) / 2.0;
    }
    w
}

fn require_increasing_grid(what: &str, values: &[f64], min_len: usize) -> Result<(), Error> {
    if values.len() < min_len {
        return Err(Error::invalid(format!(
            "{what}: need at least {min_len} grid points, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{what}: grid has a non-finite value")));
    }
    for k in 1..values.len() {
        if values[k] <= values[k - 1] {
            return Err(Error::invalid(format!(
                "{what}: grid must be strictly increasing, got {} then {}",
                values[k - 1],
                values[k]
            )));
        }
    }
    Ok(())
}

/// Discretizes the bivariate Gaussian family onto finite grids.
///
/// Row `t` of the returned kernel puts, on the `(s, t_opp)` cell, the
/// bivariate normal density at the grid point times the point's cell area,
/// and is then normalized to total mass one. Columns follow the canonical
/// state-major order. All three grids must be strictly increasing with at
/// least three points.
pub fn discretize_gaussian_beliefs(
    spec: &GaussianBeliefSpec,
    state_grid: &Grid,
    opp_type_grid: &Grid,
    own_type_grid: &Grid,
) -> Result<BeliefKernel, Error> {
    if !(spec.variance_own.is_finite() && spec.variance_own > 1.0) {
        return Err(Error::invalid(format!(
            "gaussian belief spec needs variance_own > 1 for a positive definite covariance, got {}",
            spec.variance_own
        )));
    }
    if !spec.mean_s.is_finite_map() || !spec.mean_t.is_finite_map() {
        return Err(Error::invalid("gaussian belief spec has a non-finite mean map"));
    }
    require_increasing_grid("gaussian state grid", state_grid.values(), 3)?;
    require_increasing_grid("gaussian opponent type grid", opp_type_grid.values(), 3)?;
    require_increasing_grid("gaussian own type grid", own_type_grid.values(), 3)?;

    let sv = state_grid.values();
    let tv = opp_type_grid.values();
    let ws = cell_widths(sv);
    let wt = cell_widths(tv);
    let det = spec.variance_own - 1.0;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());

    let n_cols = sv.len() * tv.len();
    let mut data = Vec::with_capacity(own_type_grid.len() * n_cols);
    let mut row = vec![0.0_f64; n_cols];
    for &own in own_type_grid.values() {
        let mean_s = spec.mean_s.eval(own);
        let mean_t = spec.mean_t.eval(own);
        for (si, &s) in sv.iter().enumerate() {
            let dx = s - mean_s;
            for (ti, &t) in tv.iter().enumerate() {
                let dy = t - mean_t;
                let q = (spec.variance_own * dx * dx - 2.0 * dx * dy + dy * dy) / det;
                row[si * tv.len() + ti] = norm * (-0.5 * q).exp() * ws[si] * wt[ti];
            }
        }
        let total = pairwise_sum(&row);
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Domain {
                context: "gaussian belief discretization".into(),
                message: format!(
                    "density mass for own type {own} is {total}; the grids sit too far from the mean"
                ),
            });
        }
        data.extend(row.iter().map(|&v| v / total));
    }
    BeliefKernel::new(own_type_grid.len(), n_cols, data)
}

/// A coordination game with an outside option. Both players pick side `L`
/// (action value 0) or side `R` (action value 1). Matching on `L` pays the
/// state-dependent amounts `(f(s), g(s))`, matching on `R` pays
/// `(c * f(s), c * g(s))`, and mismatching pays zero to both. Each player's
/// belief about `(s, t_opp)` is the discretized Gaussian family with mean
/// `(0, t_own)` and own variance from `variances`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BattleOfSexesSpec {
    /// Scale of the `R`-match payoffs relative to the `L`-match payoffs.
    pub c: f64,
    /// Payoff to player 1 when both pick `L`; a function of `s` alone.
    pub f_expr: String,
    /// Payoff to player 2 when both pick `L`; a function of `s` alone.
    pub g_expr: String,
    pub state_grid: Vec<f64>,
    pub type_grids: [Vec<f64>; 2],
    pub variances: [f64; 2],
}

fn expr_uses_only_state(e: &Expr) -> bool {
    match e {
        Expr::Num(_) => true,
        Expr::Var(v) => matches!(v, Var::State),
        Expr::Neg(a)
        | Expr::Abs(a)
        | Expr::Exp(a)
        | Expr::Log(a)
        | Expr::Sqrt(a)
        | Expr::Pos(a)
        | Expr::Step(a) => expr_uses_only_state(a),
        Expr::Pow(a, _) => expr_uses_only_state(a),
        Expr::Add(a, b)
        | Expr::Sub(a, b)
        | Expr::Mul(a, b)
        | Expr::Div(a, b)
        | Expr::Min(a, b)
        | Expr::Max(a, b) => expr_uses_only_state(a) && expr_uses_only_state(b),
    }
}

/// Evaluates a state-only expression on every state grid point and checks
/// the values are strictly positive and finite.
fn positive_state_table(what: &str, src: &str, state_grid: &Grid) -> Result<Vec<f64>, Error> {
    let e = parse_expr(src, 2)?;
    if !expr_uses_only_state(&e) {
        return Err(Error::invalid(format!(
            "{what} must depend on the state alone, got `{src}`"
        )));
    }
    let dummy = [0.0, 0.0];
    let mut vals = Vec::with_capacity(state_grid.len());
    for &s in state_grid.values() {
        let v = crate::expr::eval(&e, s, &dummy, &dummy)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain {
                context: what.into(),
                message: format!("value {v} at state {s} is not strictly positive"),
            });
        }
        vals.push(v);
    }
    Ok(vals)
}

/// Builds the coordination game described by [`BattleOfSexesSpec`].
pub fn build_battle_of_sexes(spec: &BattleOfSexesSpec) -> Result<FiniteGame, Error> {
    if !(spec.c.is_finite() && spec.c > 0.0) {
        return Err(Error::invalid(format!(
            "coordination scale c must be positive and finite, got {}",
            spec.c
        )));
    }
    let state_grid = Grid::new(spec.state_grid.clone());
    let type_grids = [
        Grid::new(spec.type_grids[0].clone()),
        Grid::new(spec.type_grids[1].clone()),
    ];
    let f_vals = positive_state_table("coordination payoff f", &spec.f_expr, &state_grid)?;
    let g_vals = positive_state_table("coordination payoff g", &spec.g_expr, &state_grid)?;

    let n_states = state_grid.len();
    let t1 = type_grids[0].len();
    let t2 = type_grids[1].len();
    let len = n_states * t1 * t2 * 4;
    let mut payoff1 = Vec::with_capacity(len);
    let mut payoff2 = Vec::with_capacity(len);
    let mut odo = Odometer::new(vec![n_states, t1, t2, 2, 2]);
    while let Some(ix) = odo.next() {
        let (s, a1, a2) = (ix[0], ix[3], ix[4]);
        let (u1, u2) = match (a1, a2) {
            (0, 0) => (f_vals[s], g_vals[s]),
            (1, 1) => (spec.c * f_vals[s], spec.c * g_vals[s]),
            _ => (0.0, 0.0),
        };
        payoff1.push(u1);
        payoff2.push(u2);
    }

    let mut beliefs = Vec::with_capacity(2);
    for i in 0..2 {
        let gspec = GaussianBeliefSpec {
            mean_s: MeanMap::Zero,
            mean_t: MeanMap::Identity,
            variance_own: spec.variances[i],
        };
        beliefs.push(discretize_gaussian_beliefs(
            &gspec,
            &state_grid,
            &type_grids[1 - i],
            &type_grids[i],
        )?);
    }

    let mut game = FiniteGame {
        state_grid,
        type_grids: type_grids.to_vec(),
        action_grids: vec![Grid::new(vec![0.0, 1.0]), Grid::new(vec![0.0, 1.0])],
        payoffs: vec![payoff1, payoff2],
        beliefs,
    };
    game.finalize()?;
    Ok(game)
}

/// The nine-point Gauss grid for a standard normal state: the roots of the
/// ninth probabilists' Hermite polynomial, the classical quadrature nodes
/// for integrals against the N(0, 1) density. Node values are frozen from a
/// high-precision eigenvalue computation.
pub fn gauss_hermite_grid_9() -> Grid {
    Grid::new(vec![
        -4.5127458633997835,
        -3.2054290028564703,
        -2.07684797867783,
        -1.0232556637891326,
        0.0,
        1.0232556637891326,
        2.07684797867783,
        3.2054290028564703,
        4.5127458633997835,
    ])
}

/// The canonical coordination instance used by the verification suite:
/// nine Gauss states, three types per player on `[-1/2, 1/2]`, payoffs
/// `f = g = exp(s)`, own variances 2 and 3. The narrow type grids keep
/// every best response type-independent, so the only pure equilibria are
/// the two constant ones.
pub fn battle_of_sexes_benchmark(c: f64) -> Result<FiniteGame, Error> {
    build_battle_of_sexes(&BattleOfSexesSpec {
        c,
        f_expr: "exp(s)".into(),
        g_expr: "exp(s)".into(),
        state_grid: gauss_hermite_grid_9().values().to_vec(),
        type_grids: [
            Grid::linspace(-0.5, 0.5, 3).values().to_vec(),
            Grid::linspace(-0.5, 0.5, 3).values().to_vec(),
        ],
        variances: [2.0, 3.0],
    })
}

/// The three candidate equilibria of the coordination game: everyone on
/// `L`, everyone on `R`, and the type-independent mixed profile that puts
/// weight `c / (1 + c)` on `L`.
pub fn battle_of_sexes_profiles(game: &FiniteGame, c: f64) -> [StrategyProfile; 3] {
    let q = c / (1.0 + c);
    let mut all_l = Vec::new();
    let mut all_r = Vec::new();
    let mut mixed = Vec::new();
    for i in 0..game.n_players() {
        let n_types = game.num_types(i);
        all_l.push(BehavioralStrategy::pure(2, &vec![0; n_types]));
        all_r.push(BehavioralStrategy::pure(2, &vec![1; n_types]));
        let mut rows = Vec::with_capacity(n_types * 2);
        for _ in 0..n_types {
            rows.push(q);
            rows.push(1.0 - q);
        }
        mixed.push(BehavioralStrategy::new(n_types, 2, rows).expect("stochastic rows"));
    }
    [
        StrategyProfile::new(all_l),
        StrategyProfile::new(all_r),
        StrategyProfile::new(mixed),
    ]
}

/// Truncated normal beliefs for the public-good game: conditional on own
/// type `t`, the opponent's type is normal with mean `t` and the given
/// scale, truncated to `[lower, upper]`. The game family requires
/// `lower == 0 < 1 < upper` so that the contribution cost of the marginal
/// type is interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedNormalSpec {
    pub lower: f64,
    pub upper: f64,
    pub sigma: f64,
}

fn validate_truncnorm(spec: &TruncatedNormalSpec) -> Result<(), Error> {
    if !(spec.sigma.is_finite() && spec.sigma > 0.0) {
        return Err(Error::invalid(format!(
            "truncated normal scale must be positive and finite, got {}",
            spec.sigma
        )));
    }
    if spec.lower != 0.0 || !(spec.upper.is_finite() && spec.upper > 1.0) {
        return Err(Error::invalid(format!(
            "public-good type domain must be [0, upper] with upper > 1, got [{}, {}]",
            spec.lower, spec.upper
        )));
    }
    Ok(())
}

/// Result of the threshold fixed-point search for the public-good game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFixedPoint {
    pub thresholds: [f64; 2],
    /// Max-abs gap between the returned thresholds and their image under
    /// the best-response threshold map.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// True when the damped iteration stalled and the symmetric bisection
    /// fallback produced the answer instead.
    pub used_bisection: bool,
}

/// The best-response threshold map: component `i` is the probability that
/// the opponent's type exceeds the opponent's threshold, as seen by own
/// marginal type `t[i]` under the truncated normal belief.
fn threshold_map(specs: &[TruncatedNormalSpec; 2], t: [f64; 2]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for i in 0..2 {
        let sp = specs[i];
        let top = normal_cdf(sp.upper, t[i], sp.sigma);
        let bottom = normal_cdf(sp.lower, t[i], sp.sigma);
        out[i] = (top - normal_cdf(t[1 - i], t[i], sp.sigma)) / (top - bottom);
    }
    out
}

/// Solves for the pair of threshold types at which both players are
/// indifferent between contributing and staying out.
///
/// Runs a half-damped fixed-point iteration from `(1/2, 1/2)` until the
/// max-abs residual drops to [`THRESHOLD_TOL`] or [`THRESHOLD_MAX_ITERS`]
/// passes. If the iteration stalls and the two specs are identical, a
/// bisection on the symmetric equation recovers the answer; otherwise the
/// last iterate is returned with `converged == false`.
pub fn solve_public_good_thresholds(
    spec1: &TruncatedNormalSpec,
    spec2: &TruncatedNormalSpec,
) -> Result<ThresholdFixedPoint, Error> {
    validate_truncnorm(spec1)?;
    validate_truncnorm(spec2)?;
    if spec1.lower != spec2.lower || spec1.upper != spec2.upper {
        return Err(Error::Incompatible(format!(
            "players must share the type domain, got [{}, {}] and [{}, {}]",
            spec1.lower, spec1.upper, spec2.lower, spec2.upper
        )));
    }
    let specs = [*spec1, *spec2];
    let mut t = [0.5, 0.5];
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    for k in 0..THRESHOLD_MAX_ITERS {
        let image = threshold_map(&specs, t);
        residual = (t[0] - image[0]).abs().max((t[1] - image[1]).abs());
        iterations = k;
        if residual <= THRESHOLD_TOL {
            return Ok(ThresholdFixedPoint {
                thresholds: t,
                residual,
                iterations,
                converged: true,
                used_bisection: false,
            });
        }
        t = [
            0.5 * t[0] + 0.5 * image[0],
            0.5 * t[1] + 0.5 * image[1],
        ];
    }
    if spec1 == spec2 {
        // Symmetric case: the threshold solves h(x) = map(x, x) - x = 0 on
        // [0, 1], where h(0) >= 0 and h(1) <= 0 because the map's range is
        // a probability.
        let h = |x: f64| threshold_map(&specs, [x, x])[0] - x;
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        let image = threshold_map(&specs, [x, x]);
        let residual = (x - image[0]).abs().max((x - image[1]).abs());
        return Ok(ThresholdFixedPoint {
            thresholds: [x, x],
            residual,
            iterations: THRESHOLD_MAX_ITERS,
            converged: residual <= THRESHOLD_TOL,
            used_bisection: true,
        });
    }
    Ok(ThresholdFixedPoint {
        thresholds: t,
        residual,
        iterations,
        converged: false,
        used_bisection: false,
    })
}

/// A discretized public-good game bundled with its threshold strategy
/// profile and the continuum fixed point the thresholds came from.
#[derive(Debug, Clone)]
pub struct PublicGoodScenario {
    pub game: FiniteGame,
    /// Contribute (action value 1) exactly at own types up to the snapped
    /// threshold; the type at the threshold contributes.
    pub threshold_profile: StrategyProfile,
    pub fixed_point: ThresholdFixedPoint,
    /// The continuum thresholds moved to their nearest type grid points.
    pub snapped_thresholds: [f64; 2],
}

/// Truncated-normal cell masses on a grid partition of `[lower, upper]`.
///
/// Cells are the midpoint intervals of the grid, so they tile the domain
/// exactly; masses are distribution-function differences for a normal with
/// the given mean and the spec's scale, normalized to total one. The grid
/// must be strictly increasing and stay inside the domain.
pub fn truncated_normal_masses(
    spec: &TruncatedNormalSpec,
    mean: f64,
    grid: &[f64],
) -> Result<Vec<f64>, Error> {
    if !(spec.sigma.is_finite() && spec.sigma > 0.0) {
        return Err(Error::invalid(format!(
            "truncated normal scale must be positive and finite, got {}",
            spec.sigma
        )));
    }
    if !(spec.lower.is_finite() && spec.upper.is_finite() && spec.lower < spec.upper) {
        return Err(Error::invalid(format!(
            "truncated normal domain [{}, {}] is not an interval",
            spec.lower, spec.upper
        )));
    }
    if !mean.is_finite() {
        return Err(Error::invalid("truncated normal mean must be finite".to_string()));
    }
    require_increasing_grid("truncated normal grid", grid, 1)?;
    if grid[0] < spec.lower || grid[grid.len() - 1] > spec.upper {
        return Err(Error::Domain {
            context: "truncated normal discretization".into(),
            message: format!(
                "grid [{}, {}] leaves the domain [{}, {}]",
                grid[0],
                grid[grid.len() - 1],
                spec.lower,
                spec.upper
            ),
        });
    }
    let m = grid.len();
    let mut edges = Vec::with_capacity(m + 1);
    edges.push(spec.lower);
    for k in 1..m {
        edges.push(0.5 * (grid[k - 1] + grid[k]));
    }
    edges.push(spec.upper);
    let mut row = Vec::with_capacity(m);
    for k in 0..m {
        let hi = normal_cdf(edges[k + 1], mean, spec.sigma);
        let lo = normal_cdf(edges[k], mean, spec.sigma);
        row.push((hi - lo).max(0.0));
    }
    let total = pairwise_sum(&row);
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Domain {
            context: "truncated normal discretization".into(),
            message: format!("cell masses for mean {mean} sum to {total}"),
        });
    }
    for v in &mut row {
        *v /= total;
    }
    Ok(row)
}

/// Builds the public-good provision game on an `m`-point type grid.
///
/// Both players pick contribute (action value 1) or stay out (action value
/// 0); payoffs are `max(a1, a2) - a_i * t_i`. Beliefs are truncated normal
/// cell masses centered at the own type. The bundled profile plays the
/// threshold rule at the snapped continuum fixed point. Needs `m >= 21` so
/// the thresholds resolve on the grid.
pub fn build_public_good_discretized(
    spec1: &TruncatedNormalSpec,
    spec2: &TruncatedNormalSpec,
    m: usize,
) -> Result<PublicGoodScenario, Error> {
    if m < 21 {
        return Err(Error::invalid(format!(
            "public-good discretization needs at least 21 type grid points, got {m}"
        )));
    }
    let fixed_point = solve_public_good_thresholds(spec1, spec2)?;
    let specs = [*spec1, *spec2];

    let type_grid = Grid::linspace(spec1.lower, spec1.upper, m);
    let state_grid = Grid::new(vec![0.0]);
    let action_grid = Grid::new(vec![0.0, 1.0]);

    let exprs = [
        parse_expr("max(a1, a2) - a1 * t1", 2)?,
        parse_expr("max(a1, a2) - a2 * t2", 2)?,
    ];
    let type_grids = vec![type_grid.clone(), type_grid.clone()];
    let action_grids = vec![action_grid.clone(), action_grid];
    let payoffs = exprs
        .iter()
        .map(|e| tabulate(e, &state_grid, &type_grids, &action_grids))
        .collect::<Result<Vec<_>, _>>()?;

    let mut beliefs = Vec::with_capacity(2);
    for i in 0..2 {
        let mut data = Vec::with_capacity(m * m);
        for &own in type_grid.values() {
            data.extend(truncated_normal_masses(&specs[i], own, type_grid.values())?);
        }
        beliefs.push(BeliefKernel::new(m, m, data)?);
    }

    let mut game = FiniteGame {
        state_grid,
        type_grids,
        action_grids,
        payoffs,
        beliefs,
    };
    game.finalize()?;

    let mut snapped = [0.0; 2];
    let mut strategies = Vec::with_capacity(2);
    for i in 0..2 {
        let idx = game.type_grids[i].nearest_index(fixed_point.thresholds[i]);
        snapped[i] = game.type_grids[i].value(idx);
        // Contribute (action index 1, value 1) at and below the snapped
        // threshold; the threshold type itself contributes.
        let actions: Vec<usize> = (0..m).map(|k| usize::from(k <= idx)).collect();
        strategies.push(BehavioralStrategy::pure(2, &actions));
    }
    Ok(PublicGoodScenario {
        game,
        threshold_profile: StrategyProfile::new(strategies),
        fixed_point,
        snapped_thresholds: snapped,
    })
}

/// Cournot quantity competition. Player `i` picks a quantity from their
/// action grid; the market price is an expression in the state and all
/// quantities (by default `pos(s - a1 - ... - an)`), and player `i` earns
/// `a_i * price - cost_i`. Costs may depend on own type and quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CournotSpec {
    /// Market price as an expression in `s` and `a1..an`; `None` selects
    /// the clipped linear demand `pos(s - a1 - ... - an)`.
    pub price_expr: Option<String>,
    /// One cost expression per player.
    pub cost_exprs: Vec<String>,
    pub state_grid: Vec<f64>,
    pub type_grids: Vec<Vec<f64>>,
    pub action_grids: Vec<Vec<f64>>,
}

/// The clipped linear inverse demand `pos(s - a1 - ... - an)`.
pub fn default_price_expr(n_players: usize) -> String {
    let mut s = String::from("pos(s");
    for i in 1..=n_players {
        s.push_str(&format!(" - a{i}"));
    }
    s.push(')');
    s
}

/// Tabulates an expression and errors if any value is negative or
/// non-finite, naming the first offender in canonical order.
fn nonnegative_table(
    what: &str,
    e: &Expr,
    state_grid: &Grid,
    type_grids: &[Grid],
    action_grids: &[Grid],
) -> Result<Vec<f64>, Error> {
    let vals = tabulate(e, state_grid, type_grids, action_grids)?;
    for (idx, &v) in vals.iter().enumerate() {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Domain {
                context: what.into(),
                message: format!("value {v} at flat grid index {idx} is negative or non-finite"),
            });
        }
    }
    Ok(vals)
}

/// Builds a Cournot game from the spec and per-player belief kernels.
///
/// Every action grid must contain the quantity 0, and both the price and
/// every cost must be nonnegative over the whole grid; violations are
/// reported as domain errors rather than silently clipped.
pub fn build_cournot(spec: &CournotSpec, beliefs: Vec<BeliefKernel>) -> Result<FiniteGame, Error> {
    let n = spec.type_grids.len();
    if n == 0 {
        return Err(Error::invalid("cournot game needs at least one player"));
    }
    if spec.action_grids.len() != n {
        return Err(Error::DimensionMismatch {
            what: "cournot action grids".into(),
            expected: n,
            got: spec.action_grids.len(),
        });
    }
    if spec.cost_exprs.len() != n {
        return Err(Error::DimensionMismatch {
            what: "cournot cost expressions".into(),
            expected: n,
            got: spec.cost_exprs.len(),
        });
    }
    if beliefs.len() != n {
        return Err(Error::DimensionMismatch {
            what: "cournot belief kernels".into(),
            expected: n,
            got: beliefs.len(),
        });
    }
    for (i, grid) in spec.action_grids.iter().enumerate() {
        if !grid.iter().any(|&v| v == 0.0) {
            return Err(Error::invalid(format!(
                "cournot action grid for player {} must contain the quantity 0",
                i + 1
            )));
        }
    }

    let state_grid = Grid::new(spec.state_grid.clone());
    let type_grids: Vec<Grid> = spec.type_grids.iter().cloned().map(Grid::new).collect();
    let action_grids: Vec<Grid> = spec.action_grids.iter().cloned().map(Grid::new).collect();

    let price_src = spec
        .price_expr
        .clone()
        .unwrap_or_else(|| default_price_expr(n));
    let price = parse_expr(&price_src, n)?;
    nonnegative_table("cournot price", &price, &state_grid, &type_grids, &action_grids)?;

    let mut payoffs = Vec::with_capacity(n);
    for i in 0..n {
        let cost = parse_expr(&spec.cost_exprs[i], n)?;
        nonnegative_table(
            &format!("cournot cost for player {}", i + 1),
            &cost,
            &state_grid,
            &type_grids,
            &action_grids,
        )?;
        let revenue = Expr::Mul(Box::new(Expr::Var(Var::Action(i))), Box::new(price.clone()));
        let payoff = Expr::Sub(Box::new(revenue), Box::new(cost));
        payoffs.push(tabulate(&payoff, &state_grid, &type_grids, &action_grids)?);
    }

    let mut game = FiniteGame {
        state_grid,
        type_grids,
        action_grids,
        payoffs,
        beliefs,
    };
    game.finalize()?;
    Ok(game)
}

/// Two firms, a known demand intercept of 10, and cost `2 q` each, on a
/// 101-point quantity grid over `[0, 5]`. The textbook duopoly quantity is
/// `8/3` per firm; on this grid the equilibrium sits within one step of it.
pub fn cournot_complete_info() -> Result<FiniteGame, Error> {
    let spec = CournotSpec {
        price_expr: None,
        cost_exprs: vec!["2 * a1".into(), "2 * a2".into()],
        state_grid: vec![10.0],
        type_grids: vec![vec![0.0], vec![0.0]],
        action_grids: vec![
            Grid::linspace(0.0, 5.0, 101).values().to_vec(),
            Grid::linspace(0.0, 5.0, 101).values().to_vec(),
        ],
    };
    let trivial = BeliefKernel::new(1, 1, vec![1.0])?;
    build_cournot(&spec, vec![trivial.clone(), trivial])
}

/// Same two firms with the demand intercept at 0, so the price is zero at
/// every quantity and staying out is the only equilibrium.
pub fn cournot_zero_demand() -> Result<FiniteGame, Error> {
    let spec = CournotSpec {
        price_expr: None,
        cost_exprs: vec!["2 * a1".into(), "2 * a2".into()],
        state_grid: vec![0.0],
        type_grids: vec![vec![0.0], vec![0.0]],
        action_grids: vec![
            Grid::linspace(0.0, 5.0, 101).values().to_vec(),
            Grid::linspace(0.0, 5.0, 101).values().to_vec(),
        ],
    };
    let trivial = BeliefKernel::new(1, 1, vec![1.0])?;
    build_cournot(&spec, vec![trivial.clone(), trivial])
}

/// Two firms with an uncertain demand intercept near 10. Each firm observes
/// a private signal (its type) and believes `(s, t_opp)` is Gaussian
/// centered at its own signal, with own variances 2 and 3. The variance
/// disagreement makes the two belief kernels inconsistent with every common
/// prior, yet the game still has an equilibrium on the quantity grid.
pub fn cournot_uncertain_demand() -> Result<FiniteGame, Error> {
    let signal_grid = Grid::linspace(8.0, 12.0, 5);
    let variances = [2.0, 3.0];
    let mut beliefs = Vec::with_capacity(2);
    for i in 0..2 {
        let gspec = GaussianBeliefSpec {
            mean_s: MeanMap::Identity,
            mean_t: MeanMap::Identity,
            variance_own: variances[i],
        };
        beliefs.push(discretize_gaussian_beliefs(
            &gspec,
            &signal_grid,
            &signal_grid,
            &signal_grid,
        )?);
    }
    let spec = CournotSpec {
        price_expr: None,
        cost_exprs: vec!["2 * a1".into(), "2 * a2".into()],
        state_grid: signal_grid.values().to_vec(),
        type_grids: vec![signal_grid.values().to_vec(), signal_grid.values().to_vec()],
        action_grids: vec![
            Grid::linspace(0.0, 5.0, 51).values().to_vec(),
            Grid::linspace(0.0, 5.0, 51).values().to_vec(),
        ],
    };
    build_cournot(&spec, beliefs)
}

/// Shape of a seeded random game: every player gets the same number of
/// types and actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomGameDims {
    pub players: usize,
    pub states: usize,
    pub types_per_player: usize,
    pub actions_per_player: usize,
}

/// Whether a random game's belief kernels are drawn freely or conditioned
/// from a sampled common prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomGameVariant {
    /// Independent Dirichlet rows; consistent only by accident.
    Default,
    /// Kernels are exact conditionals of one sampled prior, so a common
    /// prior exists by construction.
    Consistent,
}

fn unit_interval_grid(k: usize) -> Grid {
    Grid::linspace(0.0, 1.0, k)
}

/// A positive exponential draw, used to build Dirichlet rows; the uniform
/// input is bounded away from 0 and 1 so weights stay positive and finite.
fn exp_draw(rng: &mut ChaCha8Rng) -> f64 {
    -rng.gen_range(1e-12..1.0_f64).ln()
}

/// Generates a seeded random game: payoffs uniform on `[-1, 1]`, belief
/// rows Dirichlet, grids evenly spaced on `[0, 1]`. The same seed, dims,
/// and variant produce a bit-identical game.
pub fn generate_random_game(
    seed: u64,
    dims: RandomGameDims,
    variant: RandomGameVariant,
) -> Result<FiniteGame, Error> {
    if dims.players < 2 {
        return Err(Error::invalid(format!(
            "random game needs at least two players, got {}",
            dims.players
        )));
    }
    if dims.states == 0 || dims.types_per_player == 0 || dims.actions_per_player == 0 {
        return Err(Error::invalid(
            "random game dims must all be at least one".to_string(),
        ));
    }
    let n = dims.players;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let state_grid = unit_interval_grid(dims.states);
    let type_grids: Vec<Grid> = (0..n).map(|_| unit_interval_grid(dims.types_per_player)).collect();
    let action_grids: Vec<Grid> = (0..n)
        .map(|_| unit_interval_grid(dims.actions_per_player))
        .collect();

    let payoff_len = dims.states
        * dims.types_per_player.pow(n as u32)
        * dims.actions_per_player.pow(n as u32);
    let mut payoffs = Vec::with_capacity(n);
    for _ in 0..n {
        payoffs.push((0..payoff_len).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }

    // Uniform placeholder kernels give the game a valid shape; both
    // variants overwrite them below.
    let kernel_cols = dims.states * dims.types_per_player.pow(n as u32 - 1);
    let placeholder = BeliefKernel::new(
        dims.types_per_player,
        kernel_cols,
        vec![1.0 / kernel_cols as f64; dims.types_per_player * kernel_cols],
    )?;
    let mut game = FiniteGame {
        state_grid,
        type_grids,
        action_grids,
        payoffs,
        beliefs: vec![placeholder; n],
    };

    match variant {
        RandomGameVariant::Default => {
            for i in 0..n {
                let cols = game.kernel_cols(i);
                let mut data = Vec::with_capacity(dims.types_per_player * cols);
                for _ in 0..dims.types_per_player {
                    let start = data.len();
                    for _ in 0..cols {
                        data.push(exp_draw(&mut rng));
                    }
                    let total = pairwise_sum(&data[start..]);
                    for v in &mut data[start..] {
                        *v /= total;
                    }
                }
                game.beliefs[i] = BeliefKernel::new(dims.types_per_player, cols, data)?;
            }
        }
        RandomGameVariant::Consistent => {
            let mut prior: Vec<f64> = (0..game.prior_len()).map(|_| exp_draw(&mut rng)).collect();
            let total = pairwise_sum(&prior);
            for v in &mut prior {
                *v /= total;
            }
            let nu = crate::measure::canonical_dominating_measure(&game);
            for i in 0..n {
                game.beliefs[i] = crate::measure::derive_belief_from_prior(&game, &prior, &nu, i)?;
            }
        }
    }

    game.finalize()?;
    Ok(game)
}

/// Two players who both observe one shared signal with `m` possible values:
/// each is certain the opponent saw exactly what they saw, so every belief
/// row is a point mass on the diagonal. Against the canonical uniform
/// dominating measure the density is `m` on the diagonal and 0 elsewhere,
/// so the domination condition number is exactly `m` whenever `1/m` is a
/// dyadic rational. Payoffs reward matching actions.
pub fn build_shared_signal(m: usize) -> Result<FiniteGame, Error> {
    if m < 2 {
        return Err(Error::invalid(format!(
            "shared-signal game needs at least two signal values, got {m}"
        )));
    }
    let type_grid = unit_interval_grid(m);
    let mut kernel = vec![0.0; m * m];
    for k in 0..m {
        kernel[k * m + k] = 1.0;
    }
    let belief = BeliefKernel::new(m, m, kernel)?;

    let mut payoff = Vec::with_capacity(m * m * 4);
    let mut odo = Odometer::new(vec![1, m, m, 2, 2]);
    while let Some(ix) = odo.next() {
        payoff.push(f64::from(u8::from(ix[3] == ix[4])));
    }

    let mut game = FiniteGame {
        state_grid: Grid::new(vec![0.0]),
        type_grids: vec![type_grid.clone(), type_grid],
        action_grids: vec![Grid::new(vec![0.0, 1.0]), Grid::new(vec![0.0, 1.0])],
        payoffs: vec![payoff.clone(), payoff],
        beliefs: vec![belief.clone(), belief],
    };
    game.finalize()?;
    Ok(game)
}
