use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ifs_hull::format::parse_target;
use ifs_hull::report::{hull_csv, hull_json, info_json, maximize_json};
use ifs_hull::svg::{default_level, render_svg};
use ifs_hull::{
    compute_hull, loaf, parse_ifs_file, HullConfig, HullResult, IfsFile, LoafConfig, MethodChoice,
    Target,
};

/// Exact convex hulls of IFS fractals of unity.
#[derive(Parser)]
#[command(name = "ifs-hull", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the extremal points of the attractor.
    Hull {
        #[command(flatten)]
        common: Common,
        /// Candidate target direction for the Armadillo method.
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        target: Option<String>,
        /// One `re,im,b,x` line per vertex instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Find the point(s) of the attractor maximizing <target, z>.
    Maximize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        target: String,
    },
    /// Draw the point cloud and hull as SVG.
    Render {
        #[command(flatten)]
        common: Common,
        /// Address length of the point cloud.
        #[arg(long)]
        level: Option<u32>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the angle data, classification and bounding circle.
    Info { file: PathBuf },
}

#[derive(Args)]
struct Common {
    file: PathBuf,
    /// Absolute geometric tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Node and point cap.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, default_value = "auto", value_parser = ["auto", "general", "armadillo", "equiangular", "heuristic"])]
    method: String,
    /// Comma-separated index strings.
    #[arg(long)]
    long_form: bool,
}

struct Failure {
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            message: e.to_string(),
        }
    }
}

/// Writes to stdout; a reader that hangs up early is not an error.
fn write_stdout(text: &str) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
    {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn load(path: &Path) -> Result<IfsFile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::from(format!("{}: {e}", path.display())))?;
    parse_ifs_file(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn config(file: &IfsFile, common: &Common) -> Result<HullConfig, Failure> {
    let mut cfg = HullConfig::default();
    if let Some(tol) = common.tol.or(file.settings.tol) {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err("tolerance must be a nonnegative number".into());
        }
        cfg.tol = Some(tol);
    }
    if let Some(cap) = common.cap.or(file.settings.cap) {
        cfg.node_cap = cap;
        cfg.loaf = LoafConfig {
            node_cap: cap,
            ..cfg.loaf
        };
    }
    Ok(cfg)
}

fn target(text: &str) -> Result<Target, Failure> {
    let z = parse_target(text)?;
    if z.norm() == 0.0 {
        return Err("usage: the target direction must be nonzero".into());
    }
    Ok(Target::new(z)?)
}

fn hull(file: &IfsFile, common: &Common, tau: Option<&str>) -> Result<HullResult, Failure> {
    let mut cfg = config(file, common)?;
    cfg.candidate = tau.map(target).transpose()?;
    let method: MethodChoice = common.method.parse()?;
    Ok(compute_hull(&file.system, method, &cfg)?)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Hull {
            common,
            target,
            csv,
        } => {
            let file = load(&common.file)?;
            let result = hull(&file, &common, target.as_deref())?;
            if csv {
                write_stdout(&hull_csv(&file.system, &result, common.long_form)?)?;
            } else {
                write_stdout(&(hull_json(&file.system, &result, common.long_form)? + "\n"))?;
            }
            Ok(if result.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Maximize { common, target: t } => {
            let tau = target(&t)?;
            let file = load(&common.file)?;
            let cfg = config(&file, &common)?;
            let result = loaf(&tau, &file.system, &cfg.loaf)?;
            write_stdout(&(maximize_json(&file.system, &tau, &result, common.long_form)? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { common, level, out } => {
            let file = load(&common.file)?;
            let result = hull(&file, &common, None)?;
            let level = level
                .or(file.settings.level)
                .unwrap_or_else(|| default_level(file.system.len()));
            let cap = common.cap.or(file.settings.cap).unwrap_or(1 << 22);
            let seed = file.settings.seed.unwrap_or(0);
            let svg = render_svg(&file.system, &result, level, seed, cap)?;
            match out {
                Some(path) => fs::write(&path, svg)
                    .map_err(|e| Failure::from(format!("{}: {e}", path.display())))?,
                None => write_stdout(&svg)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Info { file } => {
            let file = load(&file)?;
            write_stdout(&(info_json(&file.system)? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("ifs-hull: {}", f.message);
            ExitCode::FAILURE
        }
    }
}
