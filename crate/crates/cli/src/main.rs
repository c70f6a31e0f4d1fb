mod orbit;
mod output;
mod periodic;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ch2_billiards::geometry::{from_ball, BallPoint, Point};
use ch2_billiards::hypersurface::{Scene, SceneSpec};
use ch2_billiards::tolerances::Tolerances;
use ch2_billiards::verify;

/// Outer billiards in the complex hyperbolic plane.
#[derive(Parser)]
#[command(name = "ch2bill", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite on a scene and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Iterate the billiard map and write the orbit as CSV.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Start point in ball coordinates.
        #[arg(long, value_parser = parse_start)]
        start: BallPoint,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        /// Also plot the orbit.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search for a periodic orbit.
    Periodic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        period: usize,
        /// Seed point in ball coordinates; defaults to the sphere prediction.
        #[arg(long, value_parser = parse_start)]
        start: Option<BallPoint>,
    },
}

#[derive(Args)]
struct Common {
    /// Scene JSON file.
    #[arg(long)]
    scene: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a tolerance, e.g. `newton_tol=1e-12`. Repeatable.
    #[arg(long = "tol-override", value_parser = parse_override)]
    tol_override: Vec<(String, f64)>,
    /// Seed of the random samples drawn by `verify`; the other commands are
    /// deterministic and accept it for a uniform interface.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_FOUND: u8 = 3;

fn parse_start(s: &str) -> Result<BallPoint, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let c: [f64; 4] = parts.try_into().map_err(|_| "expected four comma-separated numbers x,y,u,v".to_string())?;
    Ok(BallPoint::from_coords(c))
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VAL")?;
    let v = v.parse::<f64>().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Failure carrying its exit status.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl std::fmt::Display) -> Self {
        Self { code: EXIT_INPUT, message: message.to_string() }
    }
}

fn load_scene(common: &Common) -> Result<Scene, Failure> {
    let text = std::fs::read_to_string(&common.scene)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", common.scene.display())))?;
    let spec: SceneSpec =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("invalid scene {}: {e}", common.scene.display())))?;
    let mut tol = Tolerances::default();
    for (k, v) in &common.tol_override {
        tol.set(k, *v).map_err(Failure::input)?;
    }
    Scene::with_tolerances(spec, tol).map_err(|e| Failure::input(format!("scene rejected: {e}")))
}

fn start_point(b: &BallPoint) -> Result<Point, Failure> {
    from_ball(b).map_err(|e| Failure::input(format!("invalid start point: {e}")))
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(path) => output::write_atomic(path, contents.as_bytes())
            .map_err(|e| Failure { code: EXIT_FAILURE, message: format!("cannot write {}: {e}", path.display()) }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify { common } => {
            let scene = load_scene(&common)?;
            let checks = verify::suite(&scene, common.seed);
            let report = output::VerifyReport::new(scene.spec(), checks);
            emit(common.out.as_deref(), &output::to_json(&report))?;
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.check.as_str()).collect();
            if failed.is_empty() {
                Ok(EXIT_OK)
            } else {
                eprintln!("failed checks: {}", failed.join(", "));
                Ok(EXIT_FAILURE)
            }
        }
        Command::Orbit { common, start, iters, svg } => {
            let scene = load_scene(&common)?;
            let q0 = start_point(&start)?;
            match scene.is_exterior(&q0) {
                Ok(true) => {}
                Ok(false) => return Err(Failure::input("start point is not in the exterior")),
                Err(e) => return Err(Failure::input(format!("start point: {e}"))),
            }
            let orbit = ch2_billiards::dynamics::iterate(&scene, &q0, iters);
            emit(common.out.as_deref(), &orbit::to_csv(&orbit))?;
            if let Some(path) = svg {
                let picture = svg::plot_orbit(&scene, &orbit);
                output::write_atomic(&path, picture.as_bytes())
                    .map_err(|e| Failure { code: EXIT_FAILURE, message: format!("cannot write {}: {e}", path.display()) })?;
            }
            match &orbit.stopped {
                None => Ok(EXIT_OK),
                Some(e) => {
                    eprintln!("orbit stopped after {} steps: {e}", orbit.points.len() - 1);
                    Ok(EXIT_FAILURE)
                }
            }
        }
        Command::Periodic { common, period, start } => {
            if period < 2 {
                return Err(Failure::input(format!("--period must be at least 2, got {period}")));
            }
            let scene = load_scene(&common)?;
            let start = start.as_ref().map(start_point).transpose()?;
            let (report, code) = periodic::run(&scene, period, start.as_ref())?;
            emit(common.out.as_deref(), &output::to_json(&report))?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
