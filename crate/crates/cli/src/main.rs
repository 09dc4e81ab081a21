use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nashcad::aouc::Tally;
use nashcad::cad::{representative_sample, sign_vector_at, CadConfig};
use nashcad::nash::{nash_solve, DepthSchedule, Game, NashConfig};
use nashcad::poly::text::{interval_to_json, poly_from_json, rational_to_json, system_from_json};
use nashcad::reals::{parse_rational, ApproxReal, Interval, Precision, Rational, Truth};
use nashcad::roots::{broot, BrootStatus};
use nashcad::solve::{
    bmroot, bpineq, presolve, refute_box, IneqSystem, Refutation, SolveConfig, SolveOutcome,
};
use nashcad::Error;

#[derive(Parser, Debug)]
#[command(
    name = "nashcad",
    version,
    about = "Nash equilibria and polynomial systems over the unit cube"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Output precision in bits.
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
    precision: u32,
    /// Stages an AoUC instance may take to collapse before the default point is used.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    stage_budget: u64,
    /// First refutation depth.
    #[arg(long, global = true, default_value_t = 4)]
    depth_start: u32,
    /// Depth increase per refutation round.
    #[arg(long, global = true, default_value_t = 2)]
    depth_step: u32,
    /// Number of refutation rounds.
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    depth_rounds: u32,
    /// Tolerance for equilibrium verification, as a rational.
    #[arg(long, global = true, default_value = "1/1048576", value_parser = parse_epsilon)]
    epsilon: Rational,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    if q <= Rational::from_integer(0.into()) {
        return Err("epsilon must be positive".into());
    }
    Ok(q)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a Nash equilibrium of a game.
    SolveGame { file: PathBuf },
    /// Find a root of a polynomial in the unit cube.
    FindRoot {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Uni)]
        mode: Mode,
    },
    /// Find a point satisfying every `P_i ≥ 0` of a system.
    SolveSystem { file: PathBuf },
    /// Representative sample points for a system's polynomials.
    CadSample { file: PathBuf },
    /// Same as `cad-sample`.
    Cad {
        #[command(subcommand)]
        action: CadAction,
    },
    /// Same as `solve-system`.
    System {
        #[command(subcommand)]
        action: SystemAction,
    },
}

#[derive(Subcommand, Debug)]
enum CadAction {
    Sample { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SystemAction {
    Solve { file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Uni,
    Multi,
}

impl RunConfig {
    fn schedule(&self) -> DepthSchedule {
        DepthSchedule {
            start: self.depth_start,
            step: self.depth_step,
            rounds: self.depth_rounds,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "precision": self.precision,
            "stage_budget": self.stage_budget,
            "depth_start": self.depth_start,
            "depth_step": self.depth_step,
            "depth_rounds": self.depth_rounds,
            "epsilon": rational_to_json(&self.epsilon),
        })
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn enclosure(x: &ApproxReal, p: Precision) -> Value {
    interval_to_json(&x.enclosure_at(p))
}

fn point_json(x: &[ApproxReal], p: Precision) -> Value {
    Value::Array(x.iter().map(|c| enclosure(c, p)).collect())
}

fn intervals_json(r: &[Interval]) -> Value {
    Value::Array(r.iter().map(interval_to_json).collect())
}

fn truth_str(t: Truth) -> &'static str {
    match t {
        Truth::True => "true",
        Truth::False => "false",
        Truth::Unknown => "unknown",
    }
}

fn counts(depth: Option<u32>, boxes: Option<usize>) -> Value {
    let t = Tally::current();
    json!({
        "aouc_created": t.created,
        "aouc_resolved": t.resolved,
        "aouc_collapsed": t.collapsed,
        "refutation_depth": depth,
        "refutation_boxes": boxes,
    })
}

fn solve_game(cfg: &RunConfig, file: &Path) -> Result<Value, Error> {
    let game = Game::from_json(&read_json(file)?)?;
    let ncfg = NashConfig {
        precision: cfg.precision,
        stage_budget: cfg.stage_budget,
        schedule: cfg.schedule(),
        epsilon: cfg.epsilon.clone(),
    };
    let out = nash_solve(&game, &ncfg)?;
    let profile: Vec<Value> = out
        .profile
        .sigma
        .iter()
        .map(|s| point_json(s, cfg.precision))
        .collect();
    Ok(json!({
        "command": "solve-game",
        "profile": profile,
        "support": out.support.0,
        "eps_verified": out.verified == Truth::True,
        "verification": truth_str(out.verified),
        "status": out.status.as_str(),
        "support_unique": out.support_unique,
        "supports_total": out.supports_total,
        "supports_surviving": out.supports_surviving,
        "supports_tried": out.supports_tried,
        "stages_used": out.stages_used,
        "candidates_total": out.candidates_total,
        "counts": counts(Some(out.refutation_depth), Some(out.refutation_boxes)),
    }))
}

fn outcome_json(out: &SolveOutcome, p: Precision) -> Value {
    json!({
        "point": point_json(&out.point, p),
        "residuals": intervals_json(&out.residuals),
        "status": out.status.as_str(),
        "stages_used": out.stages_used,
        "candidates_total": out.candidates_total,
        "survivors": out.survivors,
        "eliminated_variables": out.eliminated_variables,
    })
}

fn find_root(cfg: &RunConfig, file: &Path, mode: Mode) -> Result<Value, Error> {
    let (vars, f) = poly_from_json(&read_json(file)?)?;
    let scfg = SolveConfig {
        precision: cfg.precision,
        stage_budget: cfg.stage_budget,
    };
    let mut report = match mode {
        Mode::Uni => {
            if vars.len() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    got: vars.len(),
                });
            }
            let out = broot(&f.substitute_prefix(&[])?, cfg.precision, cfg.stage_budget);
            let (status, stage) = match out.status {
                BrootStatus::Collapsed { stage } => ("collapsed", Some(stage)),
                BrootStatus::AllCase => ("all-case", None),
            };
            json!({
                "point": point_json(std::slice::from_ref(&out.point), cfg.precision),
                "status": status,
                "stage": stage,
                "certified_root": out.certified,
            })
        }
        Mode::Multi => outcome_json(&bmroot(&f, &scfg)?, cfg.precision),
    };
    let obj = report.as_object_mut().expect("object");
    obj.insert("command".into(), json!("find-root"));
    obj.insert("vars".into(), json!(vars));
    obj.insert("counts".into(), counts(None, None));
    Ok(report)
}

fn read_system(file: &Path) -> Result<(Vec<String>, IneqSystem), Error> {
    let (vars, polys) = system_from_json(&read_json(file)?)?;
    if vars.is_empty() {
        return Err(Error::Parse("a system needs at least one variable".into()));
    }
    let s = IneqSystem::new(vars.len(), polys)?;
    Ok((vars, s))
}

fn solve_system(cfg: &RunConfig, file: &Path) -> Result<Value, Error> {
    let (vars, s) = read_system(file)?;
    let scfg = SolveConfig {
        precision: cfg.precision,
        stage_budget: cfg.stage_budget,
    };
    let depth = cfg.schedule().depths().last().unwrap_or(cfg.depth_start);
    let refutation = refute_box(&presolve(&s)?.system, depth);
    let out = bpineq(&s, &scfg)?;
    let (verdict, boxes, reached) = match refutation {
        Refutation::Infeasible {
            boxes,
            depth_reached,
        } => ("infeasible", boxes, depth_reached),
        Refutation::Unknown {
            boxes,
            depth_reached,
        } => ("unknown", boxes, depth_reached),
    };
    let mut report = outcome_json(&out, cfg.precision);
    let obj = report.as_object_mut().expect("object");
    obj.insert("command".into(), json!("solve-system"));
    obj.insert("vars".into(), json!(vars));
    obj.insert("refutation".into(), json!(verdict));
    obj.insert("counts".into(), counts(Some(reached), Some(boxes)));
    Ok(report)
}

fn cad_sample(cfg: &RunConfig, file: &Path) -> Result<Value, Error> {
    let (vars, s) = read_system(file)?;
    let ccfg = CadConfig {
        precision: cfg.precision,
        stage_budget: cfg.stage_budget,
    };
    let set = representative_sample(&s.polys, s.level, &ccfg)?;
    let samples = set
        .resolve(&ccfg)
        .into_iter()
        .map(|sp| {
            let signs = sign_vector_at(&s.polys, &sp.point, cfg.precision)?;
            Ok(json!({
                "status": if sp.determined { "determined" } else { "all" },
                "point": point_json(&sp.point, cfg.precision),
                "signs": signs.to_string(),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({
        "command": "cad-sample",
        "vars": vars,
        "samples": samples,
        "counts": counts(None, None),
    }))
}

fn run(cli: &Cli) -> Result<Value, Error> {
    let cfg = &cli.config;
    Tally::reset();
    let mut report = match &cli.command {
        Command::SolveGame { file } => solve_game(cfg, file)?,
        Command::FindRoot { file, mode } => find_root(cfg, file, *mode)?,
        Command::SolveSystem { file }
        | Command::System {
            action: SystemAction::Solve { file },
        } => solve_system(cfg, file)?,
        Command::CadSample { file }
        | Command::Cad {
            action: CadAction::Sample { file },
        } => cad_sample(cfg, file)?,
    };
    report
        .as_object_mut()
        .expect("object")
        .insert("config".into(), cfg.to_json());
    Ok(report)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::DimensionMismatch { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    let written = match &cli.config.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
