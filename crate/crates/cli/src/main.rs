//! `persuade`: solve, verify, simulate and sweep the attention-persuasion game.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 an equilibrium
//! condition fails, 4 a verification check fails.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use persuasion::analysis;
use persuasion::equilibrium::{no_persuasion_profile, solve_smpe_with, KnifeEdge, SolveError, SolveOptions};
use persuasion::model::ModelParams;
use persuasion::simulate;
use persuasion::verify;
use persuasion::Profile;

use config::Config;
use output::{num, opt_num, profile_json, to_value, value_table, Sink, Table};

#[derive(Parser, Debug)]
#[command(name = "persuade", version, about = "Dynamic persuasion with costly attention")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Solve for the equilibrium and tabulate its values.
    Solve,
    /// Solve, then check the sender's equation, kinks and deviations.
    Verify,
    /// Monte Carlo estimate of payoffs from the prior.
    Simulate,
    /// Equilibrium payoffs across attention costs.
    Sweep,
    /// Equilibrium payoffs across persuasion targets.
    Frontier,
    /// Print the effective configuration as TOML.
    Config,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Frontier => "frontier",
            Command::Config => "config",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseOverride {
    Direct,
    Interior,
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Prior belief.
    #[arg(long, global = true, allow_negative_numbers = true)]
    p0: Option<f64>,
    /// Persuasion target.
    #[arg(long = "p-star", global = true, allow_negative_numbers = true)]
    p_star: Option<f64>,
    /// Attention cost per unit time.
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Simulation period length.
    #[arg(long, global = true, allow_negative_numbers = true)]
    dt: Option<f64>,
    #[arg(long, global = true)]
    paths: Option<usize>,
    /// Belief grid size: the value table for `solve`, the deviation
    /// search for `verify`, the number of targets for `frontier`.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Tolerance on the sender's equation residual.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Use the profile in which the sender never persuades.
    #[arg(long = "no-persuasion", global = true)]
    no_persuasion: bool,
    /// Regime chosen when `p*` sits on the boundary between them.
    #[arg(long = "case-override", value_enum, global = true)]
    case_override: Option<CaseOverride>,
    /// Directory receiving `report.json` and the command's CSV dataset.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Invalid(String),
    Condition(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Condition(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Invalid(m) | Failure::Condition(m) | Failure::Verification(m) => m,
        }
    }
}

fn load(cmd: Command, o: &Overrides) -> Result<Config, Failure> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Config::parse(&text).map_err(|e| Failure::Invalid(e.to_string()))?
        }
        None => Config::default(),
    };
    if let Some(p0) = o.p0 {
        cfg.simulation.p0 = p0;
        cfg.sweep.p0 = p0;
        cfg.frontier.p0 = p0;
    }
    if let Some(p) = o.p_star {
        cfg.model.p_star = p;
    }
    if let Some(c) = o.c {
        cfg.model.c = c;
        cfg.frontier.c = c;
    }
    if let Some(s) = o.seed {
        cfg.simulation.seed = s;
    }
    if let Some(dt) = o.dt {
        cfg.simulation.dt = dt;
    }
    if let Some(n) = o.paths {
        cfg.simulation.paths = n;
    }
    if let Some(n) = o.grid {
        match cmd {
            Command::Verify => cfg.verify.search_grid = n,
            Command::Frontier => cfg.frontier.points = n,
            _ => cfg.solve.grid = n,
        }
    }
    if let Some(t) = o.tol {
        cfg.verify.hjb_tol = t;
    }
    if let Some(k) = o.case_override {
        cfg.solve.knife_edge = match k {
            CaseOverride::Direct => KnifeEdge::Direct,
            CaseOverride::Interior => KnifeEdge::Interior,
        };
    }
    cfg.check().map_err(|e| Failure::Invalid(e.to_string()))?;
    Ok(cfg)
}

fn solve(cfg: &Config, no_persuasion: bool) -> Result<Profile, Failure> {
    let solved = if no_persuasion {
        no_persuasion_profile(&cfg.model)
    } else {
        let opts = SolveOptions { knife_edge: cfg.solve.knife_edge, allow_failed_diagnostics: true, ..Default::default() };
        solve_smpe_with(&cfg.model, opts)
    };
    match solved {
        Ok(e) => Ok(e),
        Err(SolveError::Model(e)) => Err(Failure::Invalid(e.to_string())),
        Err(e) => Err(Failure::Condition(e.to_string())),
    }
}

fn check_diagnostics(e: &Profile) -> Result<(), Failure> {
    let failed: Vec<&str> = e.failed_diagnostics().iter().map(|d| d.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Condition(format!("equilibrium conditions fail: {}", failed.join(", "))))
    }
}

fn print_profile(e: &Profile) {
    println!("case: {}", e.case.as_str());
    for (name, c) in e.cutoffs.entries() {
        if let Some(v) = c.value() {
            println!("  {name:<11} {v:.12}");
        }
    }
    let (lo, hi) = e.waiting_region();
    println!("waiting region: [{lo:.6}, {hi:.6})");
    for d in e.failed_diagnostics() {
        println!("FAILED {}: {}", d.name, d.detail);
    }
}

fn run_solve(cfg: &Config, o: &Overrides, sink: &Sink) -> Result<(), Failure> {
    let e = solve(cfg, o.no_persuasion)?;
    print_profile(&e);
    let table = value_table(&e, cfg.solve.grid);
    sink.emit("solve", cfg, profile_json(&e), Some(("values.csv", &table))).map_err(Failure::Io)?;
    check_diagnostics(&e)
}

fn run_verify(cfg: &Config, o: &Overrides, sink: &Sink) -> Result<(), Failure> {
    if o.no_persuasion {
        let r = analysis::no_persuasion_report(&cfg.model, cfg.verify.search_beliefs, cfg.verify.search_grid)
            .map_err(|e| Failure::Condition(e.to_string()))?;
        println!(
            "no-persuasion profile: {} beliefs, {} receiver and {} sender failures, flow at lower cutoff {:.3e}",
            r.beliefs,
            r.receiver_failures.len(),
            r.sender_failures.len(),
            r.flow_at_low
        );
        sink.emit("verify", cfg, to_value(&r), None).map_err(Failure::Io)?;
        return if r.passed { Ok(()) } else { Err(Failure::Verification("no-persuasion checks fail".into())) };
    }
    let e = solve(cfg, false)?;
    print_profile(&e);
    check_diagnostics(&e)?;
    let r = verify::verify_profile(&e, &cfg.verify.options()).map_err(|x| Failure::Verification(x.to_string()))?;
    println!(
        "sender equation: max |residual| {:.3e} over {} beliefs",
        r.hjb.max_abs_residual, r.hjb.points
    );
    println!("kinks: {} checked, {} failed", r.kinks.len(), r.kinks.iter().filter(|k| !k.passed).count());
    println!(
        "deviation search: {} beliefs, max excess {:.3e}, {} stray targets",
        r.search.beliefs,
        r.search.max_excess,
        r.search.stray_targets.len()
    );
    println!(
        "receiver deviations: {}; full-attention dominance failures: {}",
        r.receiver_failures.len(),
        r.full_attention_failures.len()
    );
    let mut table = Table::new(vec!["belief", "left_slope", "right_slope", "convex", "max_excess", "passed"]);
    for k in &r.kinks {
        table.push(vec![
            num(k.belief),
            num(k.left_slope),
            num(k.right_slope),
            k.convex.to_string(),
            num(k.max_excess),
            k.passed.to_string(),
        ]);
    }
    let result = json!({ "profile": profile_json(&e), "verification": to_value(&r) });
    sink.emit("verify", cfg, result, Some(("kinks.csv", &table))).map_err(Failure::Io)?;
    if r.passed {
        println!("verification passed");
        Ok(())
    } else {
        Err(Failure::Verification("verification checks fail".into()))
    }
}

fn run_simulate(cfg: &Config, o: &Overrides, sink: &Sink) -> Result<(), Failure> {
    let e = solve(cfg, o.no_persuasion)?;
    check_diagnostics(&e)?;
    let p0 = cfg.simulation.p0;
    let sim = cfg.simulation.sim_config();
    let r = simulate::simulate(&e, p0, &sim).map_err(|x| Failure::Invalid(x.to_string()))?;
    let v = e.sender_value(p0).map_err(|x| Failure::Condition(x.to_string()))?;
    let u = e.receiver_value(p0).map_err(|x| Failure::Condition(x.to_string()))?;
    println!("case: {}, prior {p0}", e.case.as_str());
    println!("sender:   {:.6} (se {:.2e}), closed form {v:.6}", r.sender_mean, r.sender_se);
    println!("receiver: {:.6} (se {:.2e}), closed form {u:.6}", r.receiver_mean, r.receiver_se);
    println!(
        "mean listening time {:.4}, P(r) {:.4}, censored {}",
        r.mean_listening_time, r.prob_r, r.censored
    );
    let mut table = Table::new(vec![
        "paths",
        "sender_mean",
        "sender_se",
        "sender_closed_form",
        "receiver_mean",
        "receiver_se",
        "receiver_closed_form",
        "mean_listening_time",
        "prob_r",
        "censored",
    ]);
    table.push(vec![
        r.paths.to_string(),
        num(r.sender_mean),
        num(r.sender_se),
        num(v),
        num(r.receiver_mean),
        num(r.receiver_se),
        num(u),
        num(r.mean_listening_time),
        num(r.prob_r),
        r.censored.to_string(),
    ]);
    let result = json!({
        "case": e.case,
        "simulation": to_value(&r),
        "closed_form": { "sender": v, "receiver": u },
    });
    sink.emit("simulate", cfg, result, Some(("simulation.csv", &table))).map_err(Failure::Io)
}

fn run_sweep(cfg: &Config, sink: &Sink) -> Result<(), Failure> {
    let rows = analysis::c_sweep(&cfg.model, cfg.sweep.p0, &cfg.sweep.costs);
    let mut table = Table::new(vec![
        "c",
        "case",
        "p_low",
        "sender_value",
        "receiver_value",
        "sender_limit",
        "receiver_limit",
        "error",
    ]);
    for r in &rows {
        println!(
            "c = {:.3e}: {} p_low {} V {} U {}",
            r.c,
            r.case.map_or("-", |c| c.as_str()),
            r.p_low.map_or("-".into(), |x| format!("{x:.4e}")),
            r.sender_value.map_or("-".into(), |x| format!("{x:.6}")),
            r.receiver_value.map_or("-".into(), |x| format!("{x:.6}")),
        );
        table.push(vec![
            num(r.c),
            r.case.map_or("", |c| c.as_str()).to_owned(),
            opt_num(r.p_low),
            opt_num(r.sender_value),
            opt_num(r.receiver_value),
            num(r.sender_limit),
            num(r.receiver_limit),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    sink.emit("sweep", cfg, json!({ "rows": rows }), Some(("sweep.csv", &table))).map_err(Failure::Io)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Condition(format!("{failed} costs could not be solved")))
    }
}

fn frontier_targets(cfg: &Config) -> Vec<f64> {
    let f = &cfg.frontier;
    if !f.p_star.is_empty() {
        return f.p_star.clone();
    }
    let lo = f.p0.max(cfg.model.phat());
    (1..=f.points).map(|i| lo + (1.0 - lo) * i as f64 / (f.points + 1) as f64).collect()
}

fn run_frontier(cfg: &Config, sink: &Sink) -> Result<(), Failure> {
    let f = &cfg.frontier;
    let rows = analysis::frontier(&cfg.model, f.p0, &frontier_targets(cfg), f.c);
    let mut table = Table::new(vec![
        "p_star",
        "sender_value",
        "receiver_value",
        "sender_limit",
        "receiver_limit",
        "within_bounds",
        "error",
    ]);
    for r in &rows {
        table.push(vec![
            num(r.p_star),
            opt_num(r.sender_value),
            opt_num(r.receiver_value),
            num(r.sender_limit),
            num(r.receiver_limit),
            r.within_bounds.map(|b| b.to_string()).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    let point = analysis::no_persuasion_point(&ModelParams { c: f.c, ..cfg.model }, f.p0);
    println!("{} targets at c = {:.3e}, prior {}", rows.len(), f.c, f.p0);
    if let Some((v, u)) = point {
        println!("no-persuasion payoffs: ({v:.6}, {u:.6})");
    }
    let result = json!({ "rows": rows, "no_persuasion_point": point });
    sink.emit("frontier", cfg, result, Some(("frontier.csv", &table))).map_err(Failure::Io)?;
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let outside = rows.iter().filter(|r| r.within_bounds == Some(false)).count();
    println!("{errors} unsolved targets, {outside} outside payoff bounds");
    if errors > 0 {
        Err(Failure::Condition(format!("{errors} targets could not be solved")))
    } else if outside > 0 {
        Err(Failure::Verification(format!("{outside} targets fall outside the payoff bounds")))
    } else {
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = load(cli.command, &cli.overrides)?;
    let sink = Sink { dir: cli.overrides.out.clone() };
    match cli.command {
        Command::Solve => run_solve(&cfg, &cli.overrides, &sink),
        Command::Verify => run_verify(&cfg, &cli.overrides, &sink),
        Command::Simulate => run_simulate(&cfg, &cli.overrides, &sink),
        Command::Sweep => run_sweep(&cfg, &sink),
        Command::Frontier => run_frontier(&cfg, &sink),
        Command::Config => {
            print!("{}", cfg.to_toml());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("persuade {}: {}", cli.command.name(), f.message());
            ExitCode::from(f.code())
        }
    }
}
