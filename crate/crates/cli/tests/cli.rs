//! End-to-end tests of the `priorless` binary: exit codes, report shapes,
//! and the round-trip guarantee that every emitted JSON document parses
//! back through the crate's own format types.

use std::path::PathBuf;
use std::process::Command;

use priorless_cli::format::{
    CheckReport, EnumerateReport, GameFile, ReproduceReport, SolveReport, StrategyFile,
};
use priorless_core::equilibrium::RegretReport;
use priorless_core::game::{BeliefKernel, FiniteGame, Grid};
use priorless_core::scenarios::{
    battle_of_sexes_benchmark, battle_of_sexes_profiles, build_public_good_discretized,
    generate_random_game, RandomGameDims, RandomGameVariant, TruncatedNormalSpec,
};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_priorless"));
    cmd.env("NO_COLOR", "1");
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("binary exits normally"),
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
    )
}

/// Scratch directory scoped to one test, removed on drop.
struct Workspace {
    dir: PathBuf,
}

impl Workspace {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!(
            "priorless-cli-{name}-{}",
            std::process::id()
        ));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        Workspace { dir }
    }

    fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }

    fn write(&self, file: &str, text: &str) -> PathBuf {
        let path = self.path(file);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn write_game(&self, file: &str, game: &FiniteGame) -> PathBuf {
        self.write(file, &serde_json::to_string(&GameFile::from_game(game)).unwrap())
    }
}

impl Drop for Workspace {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

const GAUSSIAN_COORD: &str = r#"{
  "players": 2,
  "states": [{"label": "s0", "value": -1.0}, {"label": "s1", "value": 0.0}, {"label": "s2", "value": 1.0}],
  "types": [[-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0]],
  "actions": [[0.0, 1.0], [0.0, 1.0]],
  "payoffs": [
    {"expr": "exp(s) * (1 - a1) * (1 - a2) + 2 * exp(s) * a1 * a2"},
    {"expr": "exp(s) * (1 - a1) * (1 - a2) + 2 * exp(s) * a1 * a2"}
  ],
  "beliefs": [
    {"gaussian": {"mean_s": "zero", "mean_t": "identity", "variance_own": 2.0}},
    {"gaussian": {"mean_s": "zero", "mean_t": "identity", "variance_own": 3.0}}
  ]
}"#;

const MATCHING_PENNIES: &str = r#"{
  "players": 2,
  "states": [{"label": "only", "value": 0.0}],
  "types": [[0.0], [0.0]],
  "actions": [[0.0, 1.0], [0.0, 1.0]],
  "payoffs": [{"table": [1.0, -1.0, -1.0, 1.0]}, {"table": [-1.0, 1.0, 1.0, -1.0]}],
  "beliefs": [{"table": [1.0]}, {"table": [1.0]}]
}"#;

const PRISONERS_DILEMMA: &str = r#"{
  "players": 2,
  "states": [{"label": "only", "value": 0.0}],
  "types": [[0.0], [0.0]],
  "actions": [[0.0, 1.0], [0.0, 1.0]],
  "payoffs": [{"table": [3.0, 0.0, 5.0, 1.0]}, {"table": [3.0, 5.0, 0.0, 1.0]}],
  "beliefs": [{"table": [1.0]}, {"table": [1.0]}]
}"#;

/// Two-type coordination game whose second type of the first player is
/// invisible to the opponent, so a measure can null it without breaking
/// domination. Carries that measure in its `nu` block.
const NULL_TYPE_COORD: &str = r#"{
  "players": 2,
  "states": [{"label": "only", "value": 0.0}],
  "types": [[0.0, 1.0], [0.0]],
  "actions": [[0.0, 1.0], [0.0, 1.0]],
  "payoffs": [{"expr": "a1 * a2"}, {"expr": "a1 * a2"}],
  "beliefs": [{"table": [1.0, 1.0]}, {"table": [1.0, 0.0]}],
  "nu": {"s": [1.0], "t": [[1.0, 0.0], [1.0]]}
}"#;

#[test]
fn check_accepts_a_gaussian_game_and_reports_no_common_prior() {
    let ws = Workspace::new("check-gaussian");
    let game = ws.write("coord.json", GAUSSIAN_COORD);
    let (code, stdout, stderr) = run(bin().arg("check").arg(&game));
    assert_eq!(code, 0, "stderr: {stderr}");
    let report: CheckReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.well_formed);
    assert!(report.violations.is_empty());
    assert!(report.absolute_continuity.unwrap().holds);
    assert!(report.condition_number.unwrap() > 1.0);
    let consistency = report.consistency.unwrap();
    assert!(!consistency.feasible);
    assert!(consistency.residual > 1e-8);
    assert!(stderr.contains("infeasible"));
}

#[test]
fn check_names_the_null_cell_when_domination_fails() {
    let ws = Workspace::new("check-witness");
    let game = ws.write(
        "game.json",
        &NULL_TYPE_COORD.replace(
            r#"{"table": [1.0, 0.0]}"#,
            r#"{"table": [0.5, 0.5]}"#,
        ),
    );
    let (code, stdout, _) = run(bin().arg("check").arg(&game).args(["--nu", "embedded"]));
    assert_eq!(code, 1);
    let report: CheckReport = serde_json::from_str(&stdout).unwrap();
    let abs = report.absolute_continuity.unwrap();
    assert!(!abs.holds);
    let w = abs.witness.unwrap();
    assert_eq!((w.player, w.own_type, w.state, w.opponent_cell), (1, 0, 0, 1));
    assert_eq!(w.mass, 0.5);

    // The canonical measure dominates everything, so the same game passes.
    let (code, _, _) = run(bin().arg("check").arg(&game));
    assert_eq!(code, 0);
}

#[test]
fn check_rejects_a_truncated_file_with_a_position() {
    let ws = Workspace::new("check-truncated");
    let game = ws.write("broken.json", "{\n  \"players\": 2,");
    let (code, _, stderr) = run(bin().arg("check").arg(&game));
    assert_eq!(code, 2);
    assert!(stderr.contains("line"), "stderr: {stderr}");
}

#[test]
fn check_rejects_unknown_keys() {
    let ws = Workspace::new("check-unknown-key");
    let game = ws.write(
        "game.json",
        &MATCHING_PENNIES.replace("\"players\": 2,", "\"players\": 2, \"spice\": 1,"),
    );
    let (code, _, stderr) = run(bin().arg("check").arg(&game));
    assert_eq!(code, 2);
    assert!(stderr.contains("spice"), "stderr: {stderr}");
}

#[test]
fn solve_start_flag_picks_the_coordination_side() {
    let ws = Workspace::new("solve-start");
    let game = ws.write_game("bos.json", &battle_of_sexes_benchmark(1.0).unwrap());

    for (start, winning_action) in [("first", 0usize), ("last", 1usize)] {
        let out = ws.path(&format!("{start}.strategy.json"));
        let (code, stdout, stderr) = run(bin()
            .arg("solve")
            .arg(&game)
            .args(["--start", start, "--eps", "1e-9"])
            .arg("--out")
            .arg(&out));
        assert_eq!(code, 0, "stderr: {stderr}");
        let report: SolveReport = serde_json::from_str(&stdout).unwrap();
        assert!(report.converged);
        assert!(report.verdicts.be);
        let sf: StrategyFile =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        for player in &sf.strategies {
            for row in player {
                assert_eq!(row[winning_action], 1.0);
            }
        }
    }
}

#[test]
fn solve_writes_next_to_the_game_by_default() {
    let ws = Workspace::new("solve-default-out");
    let game = ws.write("pd.json", PRISONERS_DILEMMA);
    let (code, _, stderr) = run(bin().arg("solve").arg(&game));
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(ws.path("pd.strategy.json").exists());
}

#[test]
fn solve_reports_non_convergence_on_a_cycler() {
    let ws = Workspace::new("solve-cycler");
    let game = ws.write("pennies.json", MATCHING_PENNIES);
    let (code, stdout, _) = run(bin()
        .arg("solve")
        .arg(&game)
        .args(["--method", "iterated_br", "--max-iters", "50", "--start", "first"]));
    assert_eq!(code, 3);
    let report: SolveReport = serde_json::from_str(&stdout).unwrap();
    assert!(!report.converged);
    assert_eq!(report.iterations, 50);
}

#[test]
fn verify_accepts_the_mixed_profile_and_rejects_a_perturbation() {
    let ws = Workspace::new("verify-mixed");
    let game_obj = battle_of_sexes_benchmark(1.0).unwrap();
    let game = ws.write_game("bos.json", &game_obj);
    let mixed = &battle_of_sexes_profiles(&game_obj, 1.0)[2];

    let strategy = ws.write(
        "mixed.strategy.json",
        &serde_json::to_string(&StrategyFile::from_profile(mixed)).unwrap(),
    );
    let (code, stdout, _) = run(bin().arg("verify").arg(&game).arg(&strategy));
    assert_eq!(code, 0);
    let report: RegretReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.verdict_be);

    // Shift one row off the indifference point and renormalize.
    let mut perturbed = StrategyFile::from_profile(mixed);
    perturbed.strategies[0][0][0] += 0.1;
    perturbed.strategies[0][0][1] -= 0.1;
    let strategy = ws.write(
        "perturbed.strategy.json",
        &serde_json::to_string(&perturbed).unwrap(),
    );
    let (code, stdout, stderr) = run(bin().arg("verify").arg(&game).arg(&strategy));
    assert_eq!(code, 1);
    let report: RegretReport = serde_json::from_str(&stdout).unwrap();
    assert!(!report.verdict_be);
    assert!(report.max_interim_regret > 1e-9);
    assert!(
        stderr.contains(&format!(
            "player {}, type {}",
            report.worst_player, report.worst_type
        )),
        "stderr names the worst cell: {stderr}"
    );
}

#[test]
fn verify_rejects_a_wrong_action_count() {
    let ws = Workspace::new("verify-shape");
    let game = ws.write("pennies.json", MATCHING_PENNIES);
    let strategy = ws.write(
        "bad.strategy.json",
        r#"{"strategies": [[[0.5, 0.25, 0.25]], [[0.5, 0.5]]]}"#,
    );
    let (code, _, stderr) = run(bin().arg("verify").arg(&game).arg(&strategy));
    assert_eq!(code, 2);
    assert!(stderr.contains("dimension mismatch"), "stderr: {stderr}");
}

#[test]
fn enumerate_finds_nothing_pure_in_matching_pennies() {
    let ws = Workspace::new("enumerate-pennies");
    let game = ws.write("pennies.json", MATCHING_PENNIES);
    let (code, stdout, _) = run(bin()
        .arg("enumerate")
        .arg(&game)
        .args(["--nu", "canonical"]));
    assert_eq!(code, 0);
    let report: EnumerateReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.bayesian_equilibria.is_empty());
    assert!(report.surrogate_equilibria.unwrap().is_empty());
}

#[test]
fn enumerate_agrees_with_itself_on_a_dominance_solvable_game() {
    let ws = Workspace::new("enumerate-pd");
    let game = ws.write("pd.json", PRISONERS_DILEMMA);
    let (code, stdout, _) = run(bin()
        .arg("enumerate")
        .arg(&game)
        .args(["--nu", "canonical"]));
    assert_eq!(code, 0);
    let report: EnumerateReport = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report.bayesian_equilibria, vec![vec![vec![1], vec![1]]]);
    assert_eq!(report.surrogate_equilibria.unwrap(), report.bayesian_equilibria);
    assert!(report.surrogate_only.unwrap().is_empty());
    assert!(report.bayesian_only.unwrap().is_empty());
}

#[test]
fn enumerate_annotates_the_extra_equilibria_of_a_null_type_measure() {
    let ws = Workspace::new("enumerate-null-type");
    let game = ws.write("coord.json", NULL_TYPE_COORD);
    let (code, stdout, _) = run(bin()
        .arg("enumerate")
        .arg(&game)
        .args(["--nu", "embedded"]));
    assert_eq!(code, 0);
    let report: EnumerateReport = serde_json::from_str(&stdout).unwrap();
    assert_eq!(
        report.bayesian_equilibria,
        vec![
            vec![vec![0, 0], vec![0]],
            vec![vec![0, 1], vec![0]],
            vec![vec![1, 1], vec![1]],
        ]
    );
    let ne = report.surrogate_equilibria.unwrap();
    assert_eq!(ne.len(), 4);
    let extra = report.surrogate_only.unwrap();
    assert_eq!(extra.len(), 1);
    assert_eq!(extra[0].actions, vec![vec![1, 0], vec![1]]);
    assert!(extra[0].note.contains("measure-null"), "note: {}", extra[0].note);
    assert!(report.bayesian_only.unwrap().is_empty());
}

#[test]
fn enumerate_includes_every_typewise_equilibrium_in_the_weighted_list() {
    let ws = Workspace::new("enumerate-subset");
    let dims = RandomGameDims {
        players: 2,
        states: 2,
        types_per_player: 2,
        actions_per_player: 2,
    };
    for seed in [3u64, 11, 29] {
        let game_obj = generate_random_game(seed, dims, RandomGameVariant::Default).unwrap();
        let game = ws.write_game(&format!("seeded-{seed}.json"), &game_obj);
        let (code, stdout, _) = run(bin()
            .arg("enumerate")
            .arg(&game)
            .args(["--nu", "canonical"]));
        assert_eq!(code, 0);
        let report: EnumerateReport = serde_json::from_str(&stdout).unwrap();
        let ne = report.surrogate_equilibria.unwrap();
        for be in &report.bayesian_equilibria {
            assert!(ne.contains(be), "seed {seed}: {be:?} missing");
        }
        assert!(report.bayesian_only.unwrap().is_empty());
    }
}

#[test]
fn enumerate_refuses_an_oversized_profile_space() {
    let ws = Workspace::new("enumerate-guard");
    let m_types = 10;
    let m_actions = 4;
    let cells = m_types * m_types;
    let mut game_obj = FiniteGame {
        state_grid: Grid::new(vec![0.0]),
        type_grids: vec![
            Grid::linspace(0.0, 1.0, m_types),
            Grid::linspace(0.0, 1.0, m_types),
        ],
        action_grids: vec![
            Grid::linspace(0.0, 1.0, m_actions),
            Grid::linspace(0.0, 1.0, m_actions),
        ],
        payoffs: vec![vec![0.0; cells * m_actions * m_actions]; 2],
        beliefs: vec![
            BeliefKernel::new(m_types, m_types, vec![1.0 / m_types as f64; cells]).unwrap(),
            BeliefKernel::new(m_types, m_types, vec![1.0 / m_types as f64; cells]).unwrap(),
        ],
    };
    game_obj.finalize().unwrap();
    let game = ws.write_game("big.json", &game_obj);
    let (code, _, stderr) = run(bin().arg("enumerate").arg(&game));
    assert_eq!(code, 2);
    assert!(stderr.contains("too large"), "stderr: {stderr}");
}

#[test]
fn solve_verifies_the_threshold_profile_on_a_discretized_public_good_game() {
    let ws = Workspace::new("public-good-file");
    let spec = TruncatedNormalSpec {
        lower: 0.0,
        upper: 2.0,
        sigma: 1.0,
    };
    let scenario = build_public_good_discretized(&spec, &spec, 41).unwrap();
    let game = ws.write_game("pg41.json", &scenario.game);

    let strategy = ws.write(
        "threshold.strategy.json",
        &serde_json::to_string(&StrategyFile::from_profile(&scenario.threshold_profile)).unwrap(),
    );
    let (code, _, stderr) = run(bin()
        .arg("verify")
        .arg(&game)
        .arg(&strategy)
        .args(["--eps", "0.1"]));
    assert_eq!(code, 0, "stderr: {stderr}");

    let (code, stdout, stderr) = run(bin().arg("solve").arg(&game).args(["--eps", "0.1"]));
    assert_eq!(code, 0, "stderr: {stderr}");
    let report: SolveReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.converged);
    assert!(report.verdicts.be);
}

#[test]
fn reproduce_bos_reports_the_even_mixture_at_unit_weight() {
    let (code, stdout, _) = run(bin().args(["reproduce", "bos", "--c", "1"]));
    assert_eq!(code, 0);
    let report: ReproduceReport = serde_json::from_str(&stdout).unwrap();
    match report {
        ReproduceReport::Bos {
            profiles,
            pure_equilibrium_count,
            consistency_feasible,
            ..
        } => {
            assert_eq!(profiles.len(), 3);
            assert_eq!(profiles[2].rows[0][0], vec![0.5, 0.5]);
            assert!(profiles.iter().all(|p| p.verdict_be));
            assert_eq!(pure_equilibrium_count, 2);
            assert!(!consistency_feasible);
        }
        _ => panic!("wrong scenario tag"),
    }
}

#[test]
fn reproduce_public_good_converges_on_the_shared_threshold() {
    let (code, stdout, _) = run(bin().args(["reproduce", "public-good", "--m", "41"]));
    assert_eq!(code, 0);
    let report: ReproduceReport = serde_json::from_str(&stdout).unwrap();
    match report {
        ReproduceReport::PublicGood {
            thresholds,
            residual,
            converged,
            discretization_eps,
            ..
        } => {
            assert!(converged);
            assert!(residual <= 1e-10);
            assert!((thresholds[0] - 0.6354230206896142).abs() < 1e-9);
            assert_eq!(thresholds[0], thresholds[1]);
            assert!(discretization_eps[0] <= 0.1);
        }
        _ => panic!("wrong scenario tag"),
    }
}

#[test]
fn reproduce_cournot_matches_the_brute_force_oracle() {
    let (code, stdout, _) = run(bin().args(["reproduce", "cournot"]));
    assert_eq!(code, 0);
    let report: ReproduceReport = serde_json::from_str(&stdout).unwrap();
    match report {
        ReproduceReport::Cournot {
            matches_oracle,
            converged,
            verdict_be,
            oracle,
            ..
        } => {
            assert_eq!(matches_oracle, Some(true));
            assert!(converged);
            assert!(verdict_be);
            assert!(!oracle.unwrap().is_empty());
        }
        _ => panic!("wrong scenario tag"),
    }
}

#[test]
fn reproduce_gaussian_consistency_splits_formula_and_search() {
    let (code, stdout, _) = run(bin().args([
        "reproduce",
        "gaussian-consistency",
        "--s1",
        "2",
        "--s2",
        "3",
    ]));
    assert_eq!(code, 0);
    let report: ReproduceReport = serde_json::from_str(&stdout).unwrap();
    match report {
        ReproduceReport::GaussianConsistency {
            criterion,
            residual,
            feasible,
            ..
        } => {
            assert_eq!(criterion, -0.5);
            assert!(residual > 1e-8);
            assert!(!feasible);
        }
        _ => panic!("wrong scenario tag"),
    }
}

#[test]
fn reproduce_shared_signal_reports_exact_condition_numbers() {
    let (code, stdout, _) = run(bin().args(["reproduce", "shared-signal", "--m", "4,8,16"]));
    assert_eq!(code, 0);
    let report: ReproduceReport = serde_json::from_str(&stdout).unwrap();
    match report {
        ReproduceReport::SharedSignal { rows } => {
            let got: Vec<(usize, f64)> = rows.iter().map(|r| (r.m, r.condition_number)).collect();
            assert_eq!(got, vec![(4, 4.0), (8, 8.0), (16, 16.0)]);
        }
        _ => panic!("wrong scenario tag"),
    }
}

#[test]
fn reproduce_rejects_unknown_scenarios_and_lists_the_valid_ones() {
    let (code, _, stderr) = run(bin().args(["reproduce", "mystery"]));
    assert_eq!(code, 2);
    for name in [
        "bos",
        "public-good",
        "cournot",
        "gaussian-consistency",
        "shared-signal",
    ] {
        assert!(stderr.contains(name), "stderr lists {name}: {stderr}");
    }
}
