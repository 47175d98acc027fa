//! The five commands behind the `priorless` binary.
//!
//! Every command prints one JSON report document to standard output and a
//! short human-readable summary to standard error. Exit codes are shared
//! across commands: 0 success or verified, 1 semantic negative (not an
//! equilibrium, domination failure), 2 input error, 3 solver
//! non-convergence. `NO_COLOR` disables the markers on standard error;
//! nothing else is read from the environment.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use priorless_core::equilibrium::{
    enumerate_pure_bayesian_equilibria, regret_report, repair, EPS_EXACT, EPS_SOLVER,
};
use priorless_core::error::Error;
use priorless_core::game::{
    BehavioralStrategy, FiniteGame, Grid, ProductMeasure, StrategyProfile,
};
use priorless_core::measure::{
    canonical_dominating_measure, check_absolute_continuity, domination_condition_number,
    find_common_prior, gaussian_consistency_criterion,
};
use priorless_core::scenarios::{
    battle_of_sexes_benchmark, battle_of_sexes_profiles, build_public_good_discretized,
    build_shared_signal, cournot_complete_info, cournot_uncertain_demand,
    discretize_gaussian_beliefs, solve_public_good_thresholds, GaussianBeliefSpec, MeanMap,
    TruncatedNormalSpec,
};
use priorless_core::solver::{
    enumerate_pure_equilibria, solve_from, Method, SolveConfig, TieRule,
};

use crate::format::{
    AbsContinuityReport, AbsContinuityWitness, AnnotatedProfile, BosProfileReport, CheckReport,
    EnumerateReport, GameFile, MeasureSpec, ReproduceReport, SharedSignalRow, SolveReport,
    SolveVerdicts, StrategyFile,
};

/// Command-line interface definition.
#[derive(Debug, Parser)]
#[command(
    name = "priorless",
    version,
    about = "Solve, verify, and diagnose finite incomplete-information games \
             whose players hold heterogeneous beliefs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a game file and report domination and common-prior
    /// diagnostics.
    Check(CheckArgs),
    /// Compute an equilibrium of the reweighted game, repair it, and write
    /// the strategy profile.
    Solve(SolveArgs),
    /// Verify a strategy file against a game and print its regret report.
    Verify(VerifyArgs),
    /// Enumerate pure equilibria, optionally alongside the measure-weighted
    /// equilibria of a reference measure.
    Enumerate(EnumerateArgs),
    /// Rebuild a bundled scenario and print its headline table.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Game file (JSON).
    pub game: PathBuf,
    /// Reference measure: `canonical`, `embedded`, or a path to a measure
    /// file `{"s": [..], "t": [[..], ..]}`.
    #[arg(long, default_value = "canonical")]
    pub nu: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Game file (JSON).
    pub game: PathBuf,
    /// Solver: `iterated_br`, `fictitious_play`, or `enumerate_pure`.
    #[arg(long, default_value = "iterated_br")]
    pub method: String,
    /// Convergence tolerance on every player's measure-weighted regret.
    #[arg(long, default_value_t = EPS_SOLVER)]
    pub eps: f64,
    /// Recorded in the solver configuration for reproducibility.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    /// Step weight in (0, 1] toward each round's best response.
    #[arg(long, default_value_t = 1.0)]
    pub damping: f64,
    /// Starting profile: `uniform`, `first` (lowest action everywhere), or
    /// `last` (highest action everywhere).
    #[arg(long, default_value = "uniform")]
    pub start: String,
    /// Reference measure, as in `check`.
    #[arg(long, default_value = "canonical")]
    pub nu: String,
    /// Strategy output path; defaults to the game path with the extension
    /// replaced by `strategy.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Game file (JSON).
    pub game: PathBuf,
    /// Strategy file (JSON).
    pub strategy: PathBuf,
    /// Verification tolerance on every interim regret.
    #[arg(long, default_value_t = EPS_EXACT)]
    pub eps: f64,
    /// Reference measure, as in `check`.
    #[arg(long, default_value = "canonical")]
    pub nu: String,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Game file (JSON).
    pub game: PathBuf,
    /// Optimality tolerance.
    #[arg(long, default_value_t = EPS_EXACT)]
    pub eps: f64,
    /// When given, also enumerate the pure equilibria of the objective
    /// reweighted by this measure and annotate the set difference.
    #[arg(long)]
    pub nu: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// One of: bos, public-good, cournot, gaussian-consistency,
    /// shared-signal.
    pub scenario: String,
    /// Outside-option weight for `bos`.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Comma-separated grid sizes for `public-good` (default 201) and
    /// `shared-signal` (default 4,8,16).
    #[arg(long)]
    pub m: Option<String>,
    /// First player's type scale for `public-good`.
    #[arg(long, default_value_t = 1.0)]
    pub sigma1: f64,
    /// Second player's type scale for `public-good`.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// First player's belief variance for `gaussian-consistency`.
    #[arg(long, default_value_t = 2.0)]
    pub s1: f64,
    /// Second player's belief variance for `gaussian-consistency`.
    #[arg(long, default_value_t = 3.0)]
    pub s2: f64,
    /// Cournot variant: `complete` or `uncertain`.
    #[arg(long, default_value = "complete")]
    pub variant: String,
}

/// A command failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotAbsolutelyContinuous { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Dispatches a parsed invocation and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{} {}", paint("error:", RED), f.message);
            f.code
        }
    }
}

const GREEN: &str = "32";
const RED: &str = "31";

fn paint(text: &str, color: &str) -> String {
    if std::env::var_os("NO_COLOR").is_none() {
        format!("\x1b[{color}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn mark(ok: bool) -> String {
    if ok {
        paint("ok", GREEN)
    } else {
        paint("FAIL", RED)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::input(format!(
            "{}: line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Failure::input(format!("report serialization failed: {e}")))
}

fn print_report<T: Serialize>(report: &T) -> Result<(), Failure> {
    println!("{}", to_pretty(report)?);
    Ok(())
}

fn load_game(path: &Path) -> Result<(GameFile, FiniteGame), Failure> {
    let gf: GameFile = read_json(path)?;
    let game = gf.to_game()?;
    Ok((gf, game))
}

fn resolve_nu(arg: &str, gf: &GameFile, game: &FiniteGame) -> Result<ProductMeasure, Failure> {
    match arg {
        "canonical" => Ok(canonical_dominating_measure(game)),
        "embedded" => match &gf.nu {
            Some(spec) => Ok(spec.to_measure(game)?),
            None => Err(Failure::input(
                "--nu embedded requires a `nu` block in the game file",
            )),
        },
        path => {
            let spec: MeasureSpec = read_json(Path::new(path))?;
            Ok(spec.to_measure(game)?)
        }
    }
}

fn cmd_check(args: &CheckArgs) -> Result<i32, Failure> {
    let gf: GameFile = read_json(&args.game)?;
    let mut game = gf.build_raw()?;
    let validation = game.validate();
    if !validation.is_ok() {
        let report = CheckReport {
            well_formed: false,
            violations: validation.violations.clone(),
            absolute_continuity: None,
            condition_number: None,
            consistency: None,
        };
        print_report(&report)?;
        eprintln!(
            "validation {}: {} violation(s)",
            mark(false),
            validation.violations.len()
        );
        for v in &validation.violations {
            eprintln!("  {v}");
        }
        return Ok(2);
    }
    game.finalize()?;
    let nu = resolve_nu(&args.nu, &gf, &game)?;

    let (holds, witness) = match check_absolute_continuity(&game, &nu) {
        Ok(()) => (true, None),
        Err(e @ Error::NotAbsolutelyContinuous { .. }) => {
            (false, AbsContinuityWitness::from_error(&e))
        }
        Err(e) => return Err(e.into()),
    };
    let condition_number = if holds {
        Some(domination_condition_number(&game, &nu)?)
    } else {
        None
    };
    let consistency = find_common_prior(&game);

    let report = CheckReport {
        well_formed: true,
        violations: Vec::new(),
        absolute_continuity: Some(AbsContinuityReport {
            holds,
            witness: witness.clone(),
        }),
        condition_number,
        consistency: Some(consistency.clone()),
    };
    print_report(&report)?;

    eprintln!("validation {}", mark(true));
    if let Some(w) = &witness {
        eprintln!(
            "absolute continuity {}: player {} puts mass {:e} on null cell \
             (state {}, opponent cell {}) at own type {}",
            mark(false),
            w.player,
            w.mass,
            w.state,
            w.opponent_cell,
            w.own_type
        );
    } else {
        eprintln!("absolute continuity {}", mark(true));
    }
    if let Some(k) = condition_number {
        eprintln!("domination condition number {k}");
    }
    eprintln!(
        "common prior: {} (residual={:e})",
        if consistency.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        consistency.residual
    );
    Ok(if holds { 0 } else { 1 })
}

fn parse_method(name: &str) -> Result<Method, Failure> {
    match name {
        "iterated_br" => Ok(Method::IteratedBr),
        "fictitious_play" => Ok(Method::FictitiousPlay),
        "enumerate_pure" => Ok(Method::EnumeratePure),
        other => Err(Failure::input(format!(
            "unknown method `{other}`; valid methods: iterated_br, \
             fictitious_play, enumerate_pure"
        ))),
    }
}

fn start_profile(game: &FiniteGame, name: &str) -> Result<StrategyProfile, Failure> {
    match name {
        "uniform" => Ok(game.uniform_profile()),
        "first" | "last" => {
            let strategies = (0..game.n_players())
                .map(|i| {
                    let a = if name == "first" {
                        0
                    } else {
                        game.num_actions(i) - 1
                    };
                    BehavioralStrategy::pure(game.num_actions(i), &vec![a; game.num_types(i)])
                })
                .collect();
            Ok(StrategyProfile::new(strategies))
        }
        other => Err(Failure::input(format!(
            "unknown start `{other}`; valid starts: uniform, first, last"
        ))),
    }
}

fn default_out(game_path: &Path) -> PathBuf {
    game_path.with_extension("strategy.json")
}

fn cmd_solve(args: &SolveArgs) -> Result<i32, Failure> {
    let (gf, game) = load_game(&args.game)?;
    let nu = resolve_nu(&args.nu, &gf, &game)?;
    check_absolute_continuity(&game, &nu)?;

    let cfg = SolveConfig {
        method: parse_method(&args.method)?,
        eps: args.eps,
        max_iters: args.max_iters,
        seed: args.seed,
        damping: args.damping,
        tie_rule: TieRule::LowestIndex,
    };
    let start = start_profile(&game, &args.start)?;
    let result = solve_from(&game, &nu, &cfg, &start)?;

    let final_profile = if result.converged {
        repair(&game, &result.profile, args.eps)?
    } else {
        result.profile.clone()
    };
    let rr = regret_report(&game, &final_profile, Some(&nu), args.eps)?;

    let out_path = args.out.clone().unwrap_or_else(|| default_out(&args.game));
    let sf = StrategyFile::from_profile(&final_profile);
    fs::write(&out_path, to_pretty(&sf)? + "\n")
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", out_path.display())))?;

    let report = SolveReport {
        converged: result.converged,
        iterations: result.iterations,
        max_interim_regret: rr.max_interim_regret,
        surrogate_regret: rr.surrogate_regret.clone(),
        verdicts: SolveVerdicts {
            be: rr.verdict_be,
            ne_nu: rr.verdict_ne_nu,
        },
    };
    print_report(&report)?;

    eprintln!(
        "solver {} after {} iteration(s); strategy written to {}",
        if result.converged {
            "converged"
        } else {
            "did not converge"
        },
        result.iterations,
        out_path.display()
    );
    eprintln!(
        "equilibrium {}: max interim regret {:e} at eps {:e}",
        mark(rr.verdict_be),
        rr.max_interim_regret,
        args.eps
    );

    Ok(if !result.converged {
        3
    } else if rr.verdict_be {
        0
    } else {
        1
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let (gf, game) = load_game(&args.game)?;
    let sf: StrategyFile = read_json(&args.strategy)?;
    let profile = sf.to_profile(&game)?;
    let nu = resolve_nu(&args.nu, &gf, &game)?;
    let report = regret_report(&game, &profile, Some(&nu), args.eps)?;
    print_report(&report)?;
    if report.verdict_be {
        eprintln!("equilibrium {} at eps {:e}", mark(true), args.eps);
        Ok(0)
    } else {
        eprintln!(
            "equilibrium {} at eps {:e}: worst regret {:e} at player {}, type {}",
            mark(false),
            args.eps,
            report.max_interim_regret,
            report.worst_player,
            report.worst_type
        );
        Ok(1)
    }
}

fn pure_actions_of(profile: &StrategyProfile) -> Vec<Vec<usize>> {
    profile
        .pure_actions()
        .expect("enumeration yields pure profiles")
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<i32, Failure> {
    let (gf, game) = load_game(&args.game)?;
    let be = enumerate_pure_bayesian_equilibria(&game, args.eps)?;
    let be_actions: Vec<Vec<Vec<usize>>> = be.iter().map(pure_actions_of).collect();

    let mut surrogate_actions = None;
    let mut surrogate_only = None;
    let mut bayesian_only = None;
    if let Some(nu_arg) = &args.nu {
        let nu = resolve_nu(nu_arg, &gf, &game)?;
        let ne = enumerate_pure_equilibria(&game, &nu, args.eps)?;
        let ne_actions: Vec<Vec<Vec<usize>>> = ne.iter().map(pure_actions_of).collect();

        let mut only_ne = Vec::new();
        for (profile, actions) in ne.iter().zip(&ne_actions) {
            if be_actions.contains(actions) {
                continue;
            }
            let rr = regret_report(&game, profile, Some(&nu), args.eps)?;
            let mut null_failures = Vec::new();
            let mut positive_failures = Vec::new();
            for (i, regrets) in rr.interim_regret.iter().enumerate() {
                for (t, &r) in regrets.iter().enumerate() {
                    if r > args.eps {
                        if nu.types[i][t] == 0.0 {
                            null_failures.push((i, t));
                        } else {
                            positive_failures.push((i, t));
                        }
                    }
                }
            }
            let note = if positive_failures.is_empty() {
                format!(
                    "optimality fails only at measure-null (player, type) \
                     cells {null_failures:?}; replacing those rows with best \
                     responses repairs it into a typewise equilibrium"
                )
            } else {
                format!(
                    "approximate only: (player, type) cells \
                     {positive_failures:?} carry positive measure yet exceed \
                     the tolerance"
                )
            };
            only_ne.push(AnnotatedProfile {
                actions: actions.clone(),
                note,
            });
        }

        let only_be = be_actions
            .iter()
            .filter(|actions| !ne_actions.contains(actions))
            .map(|actions| AnnotatedProfile {
                actions: actions.clone(),
                note: "typewise optimal, yet its measure-weighted regret \
                       exceeds the tolerance under the supplied measure"
                    .to_string(),
            })
            .collect::<Vec<_>>();

        surrogate_actions = Some(ne_actions);
        surrogate_only = Some(only_ne);
        bayesian_only = Some(only_be);
    }

    let report = EnumerateReport {
        eps: args.eps,
        bayesian_equilibria: be_actions.clone(),
        surrogate_equilibria: surrogate_actions.clone(),
        surrogate_only: surrogate_only.clone(),
        bayesian_only: bayesian_only.clone(),
    };
    print_report(&report)?;

    eprintln!("pure equilibria of the game: {}", be_actions.len());
    for a in &be_actions {
        eprintln!("  {a:?}");
    }
    if let Some(ne_actions) = &surrogate_actions {
        eprintln!("pure equilibria of the reweighted objective: {}", ne_actions.len());
        for a in ne_actions {
            eprintln!("  {a:?}");
        }
        for entry in surrogate_only.as_deref().unwrap_or(&[]) {
            eprintln!("  only surrogate {:?}: {}", entry.actions, entry.note);
        }
        for entry in bayesian_only.as_deref().unwrap_or(&[]) {
            eprintln!("  only typewise {:?}: {}", entry.actions, entry.note);
        }
    }
    Ok(0)
}

const SCENARIO_NAMES: [&str; 5] = [
    "bos",
    "public-good",
    "cournot",
    "gaussian-consistency",
    "shared-signal",
];

fn cmd_reproduce(args: &ReproduceArgs) -> Result<i32, Failure> {
    match args.scenario.as_str() {
        "bos" => reproduce_bos(args),
        "public-good" => reproduce_public_good(args),
        "cournot" => reproduce_cournot(args),
        "gaussian-consistency" => reproduce_gaussian_consistency(args),
        "shared-signal" => reproduce_shared_signal(args),
        other => Err(Failure::input(format!(
            "unknown scenario `{other}`; valid scenarios: {}",
            SCENARIO_NAMES.join(", ")
        ))),
    }
}

fn parse_m_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<usize>()
                .map_err(|e| Failure::input(format!("bad grid size `{piece}`: {e}")))
        })
        .collect()
}

fn reproduce_bos(args: &ReproduceArgs) -> Result<i32, Failure> {
    let game = battle_of_sexes_benchmark(args.c)?;
    let profiles = battle_of_sexes_profiles(&game, args.c);
    let names = ["pure-first", "pure-second", "mixed"];
    let mut rows = Vec::new();
    for (name, profile) in names.iter().zip(profiles.iter()) {
        let rr = regret_report(&game, profile, None, EPS_EXACT)?;
        rows.push(BosProfileReport {
            name: (*name).to_string(),
            rows: StrategyFile::from_profile(profile).strategies,
            max_interim_regret: rr.max_interim_regret,
            verdict_be: rr.verdict_be,
        });
    }
    let pure = enumerate_pure_bayesian_equilibria(&game, EPS_EXACT)?;
    let consistency = find_common_prior(&game);

    let report = ReproduceReport::Bos {
        c: args.c,
        eps: EPS_EXACT,
        profiles: rows.clone(),
        pure_equilibrium_count: pure.len(),
        consistency_feasible: consistency.feasible,
        consistency_residual: consistency.residual,
    };
    print_report(&report)?;

    eprintln!("coordination game with outside option, c = {}", args.c);
    eprintln!("{:<12} {:>13} {:>6}", "profile", "max regret", "BE");
    for row in &rows {
        eprintln!(
            "{:<12} {:>13.3e} {:>6}",
            row.name,
            row.max_interim_regret,
            mark(row.verdict_be)
        );
    }
    eprintln!("pure equilibria found: {}", pure.len());
    eprintln!(
        "common prior: {} (residual={:e})",
        if consistency.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        consistency.residual
    );
    Ok(0)
}

fn reproduce_public_good(args: &ReproduceArgs) -> Result<i32, Failure> {
    let spec1 = TruncatedNormalSpec {
        lower: 0.0,
        upper: 2.0,
        sigma: args.sigma1,
    };
    let spec2 = TruncatedNormalSpec {
        lower: 0.0,
        upper: 2.0,
        sigma: args.sigma2,
    };
    let fp = solve_public_good_thresholds(&spec1, &spec2)?;

    let grid_sizes = parse_m_list(args.m.as_deref().unwrap_or("201"))?;
    let mut eps_list = Vec::with_capacity(grid_sizes.len());
    for &m in &grid_sizes {
        let scenario = build_public_good_discretized(&spec1, &spec2, m)?;
        let rr = regret_report(&scenario.game, &scenario.threshold_profile, None, EPS_EXACT)?;
        eps_list.push(rr.max_interim_regret);
    }

    let report = ReproduceReport::PublicGood {
        sigma: [args.sigma1, args.sigma2],
        thresholds: fp.thresholds,
        residual: fp.residual,
        iterations: fp.iterations,
        converged: fp.converged,
        grid_sizes: grid_sizes.clone(),
        discretization_eps: eps_list.clone(),
    };
    print_report(&report)?;

    eprintln!(
        "public good provision, sigma = ({}, {}), types on [0, 2]",
        args.sigma1, args.sigma2
    );
    eprintln!(
        "threshold fixed point: ({}, {}), residual {:e}, {} iteration(s)",
        fp.thresholds[0], fp.thresholds[1], fp.residual, fp.iterations
    );
    eprintln!("{:>6} {:>14}", "m", "verified eps");
    for (m, eps) in grid_sizes.iter().zip(&eps_list) {
        eprintln!("{m:>6} {eps:>14.3e}");
    }
    Ok(0)
}

/// Expected quantity per (player, own type): the profile row folded against
/// that player's action grid.
fn expected_quantities(game: &FiniteGame, profile: &StrategyProfile) -> Vec<Vec<f64>> {
    (0..game.n_players())
        .map(|i| {
            let grid = game.action_grids[i].values();
            (0..game.num_types(i))
                .map(|t| {
                    profile.strategies[i]
                        .row(t)
                        .iter()
                        .zip(grid)
                        .map(|(p, q)| p * q)
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Mutual best-response profiles of a one-state, one-type-per-player
/// two-player game, found by scanning every pure action pair.
fn complete_info_oracle(game: &FiniteGame) -> Vec<Vec<f64>> {
    let m1 = game.num_actions(0);
    let m2 = game.num_actions(1);
    let u = |i: usize, a1: usize, a2: usize| {
        game.payoffs[i][game.payoff_index(0, &[0, 0], &[a1, a2])]
    };
    let mut fixed = Vec::new();
    for a1 in 0..m1 {
        for a2 in 0..m2 {
            let best1 = (0..m1)
                .map(|b| u(0, b, a2))
                .fold(f64::NEG_INFINITY, f64::max);
            let best2 = (0..m2)
                .map(|b| u(1, a1, b))
                .fold(f64::NEG_INFINITY, f64::max);
            if u(0, a1, a2) == best1 && u(1, a1, a2) == best2 {
                fixed.push(vec![
                    game.action_grids[0].values()[a1],
                    game.action_grids[1].values()[a2],
                ]);
            }
        }
    }
    fixed
}

fn reproduce_cournot(args: &ReproduceArgs) -> Result<i32, Failure> {
    let (game, eps, damping) = match args.variant.as_str() {
        "complete" => (cournot_complete_info()?, EPS_EXACT, 1.0),
        // Undamped best-response iteration limit-cycles between adjacent
        // grid quantities on this instance; half steps settle it.
        "uncertain" => (cournot_uncertain_demand()?, 1e-3, 0.5),
        other => {
            return Err(Failure::input(format!(
                "unknown cournot variant `{other}`; valid variants: complete, uncertain"
            )))
        }
    };
    let nu = canonical_dominating_measure(&game);
    let cfg = SolveConfig {
        method: Method::IteratedBr,
        eps,
        max_iters: 10_000,
        seed: 0,
        damping,
        tie_rule: TieRule::LowestIndex,
    };
    let result = solve_from(&game, &nu, &cfg, &game.uniform_profile())?;
    let final_profile = if result.converged {
        repair(&game, &result.profile, eps)?
    } else {
        result.profile.clone()
    };
    let rr = regret_report(&game, &final_profile, Some(&nu), eps)?;
    let quantities = expected_quantities(&game, &final_profile);

    let (oracle, matches_oracle) = if args.variant == "complete" {
        let oracle = complete_info_oracle(&game);
        let ours = vec![quantities[0][0], quantities[1][0]];
        let matches = oracle.contains(&ours);
        (Some(oracle), Some(matches))
    } else {
        (None, None)
    };

    let report = ReproduceReport::Cournot {
        variant: args.variant.clone(),
        quantities: quantities.clone(),
        oracle: oracle.clone(),
        matches_oracle,
        converged: result.converged,
        max_interim_regret: rr.max_interim_regret,
        verdict_be: rr.verdict_be,
    };
    print_report(&report)?;

    eprintln!("quantity competition, {} variant", args.variant);
    for (i, qs) in quantities.iter().enumerate() {
        eprintln!("player {i} quantities: {qs:?}");
    }
    if let Some(oracle) = &oracle {
        eprintln!(
            "brute-force mutual best responses: {oracle:?} (match {})",
            mark(matches_oracle == Some(true))
        );
    }
    eprintln!(
        "solver {}; equilibrium {} at eps {:e}",
        if result.converged {
            "converged"
        } else {
            "did not converge"
        },
        mark(rr.verdict_be),
        eps
    );
    Ok(0)
}

/// A two-player game with zero payoffs and discretized conditional Gaussian
/// beliefs on 9-point grids over [-4, 4]: the smallest instance on which the
/// closed-form consistency criterion can be compared against the
/// common-prior search.
pub fn gaussian_shell_game(s1: f64, s2: f64) -> Result<FiniteGame, Error> {
    let grid = Grid::linspace(-4.0, 4.0, 9);
    let state_grid = grid.clone();
    let type_grids = vec![grid.clone(), grid];
    let action_grids = vec![Grid::new(vec![0.0]), Grid::new(vec![0.0])];
    let cells = state_grid.len() * type_grids[0].len() * type_grids[1].len();
    let payoffs = vec![vec![0.0; cells]; 2];
    let mut beliefs = Vec::with_capacity(2);
    for (i, variance) in [s1, s2].into_iter().enumerate() {
        let spec = GaussianBeliefSpec {
            mean_s: MeanMap::Zero,
            mean_t: MeanMap::Identity,
            variance_own: variance,
        };
        beliefs.push(discretize_gaussian_beliefs(
            &spec,
            &state_grid,
            &type_grids[1 - i],
            &type_grids[i],
        )?);
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

fn reproduce_gaussian_consistency(args: &ReproduceArgs) -> Result<i32, Failure> {
    let criterion = gaussian_consistency_criterion(args.s1, args.s2)?;
    let game = gaussian_shell_game(args.s1, args.s2)?;
    let consistency = find_common_prior(&game);

    let report = ReproduceReport::GaussianConsistency {
        s1: args.s1,
        s2: args.s2,
        criterion,
        residual: consistency.residual,
        feasible: consistency.feasible,
    };
    print_report(&report)?;

    eprintln!(
        "conditional Gaussian beliefs, variances ({}, {})",
        args.s1, args.s2
    );
    eprintln!("closed-form criterion: {criterion} (zero iff a common prior exists)");
    eprintln!(
        "discretized search: {} (residual={:e})",
        if consistency.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        consistency.residual
    );
    Ok(0)
}

fn reproduce_shared_signal(args: &ReproduceArgs) -> Result<i32, Failure> {
    let grid_sizes = parse_m_list(args.m.as_deref().unwrap_or("4,8,16"))?;
    let mut rows = Vec::with_capacity(grid_sizes.len());
    for &m in &grid_sizes {
        let game = build_shared_signal(m)?;
        let nu = canonical_dominating_measure(&game);
        let condition_number = domination_condition_number(&game, &nu)?;
        rows.push(SharedSignalRow {
            m,
            condition_number,
        });
    }

    let report = ReproduceReport::SharedSignal { rows: rows.clone() };
    print_report(&report)?;

    eprintln!("perfectly correlated types, identity belief kernels");
    eprintln!("{:>6} {:>18}", "m", "condition number");
    for row in &rows {
        eprintln!("{:>6} {:>18}", row.m, row.condition_number);
    }
    Ok(0)
}
