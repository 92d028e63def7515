//! `upv` command line: run checks, dump artifacts, list check ids.
//!
//! Configuration layers, later ones winning: built-in defaults, a key=value
//! file (`--config`), `UPV_<KEY>` environment variables, then flags.
//! Keys: primes, seed, nu, lambda, max_degree, draws, threads, output, deterministic.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks::{run_check, select, ConfigError, Context, RunConfig, REGISTRY};
use crate::cover::enumerate::{dump_points, enumerate_surface, SurfaceEquations};
use crate::exactalg::Scalar;
use crate::invariants::{HilbertProfile, DEFAULT_BUDGET};
use crate::report::Status;
use crate::unproj::build_t_ideal;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "upv", version, about = "Exact verification suite for parallel-unprojection surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a check id, a module name, or `all`; one JSON record per check.
    Run {
        target: String,
        #[command(flatten)]
        opts: ConfigOpts,
    },
    /// Write an artifact in its external format.
    Dump {
        artifact: Artifact,
        #[command(flatten)]
        opts: ConfigOpts,
    },
    /// List check ids with short descriptions.
    List,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum Artifact {
    Ideal,
    Points,
    Hilbert,
}

#[derive(Args, Debug, Default, Clone)]
pub struct ConfigOpts {
    /// Primes ≡ 1 mod 4 (comma separated or repeated).
    #[arg(long = "prime", alias = "primes", value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Five rationals ν0..ν4, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Burniat parameter λ as a rational.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Random ν per prime for the freeness certification.
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// key=value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Zero wall times so report streams are byte-identical across runs.
    #[arg(long)]
    pub deterministic: bool,
}

/// RunConfig plus process-level settings.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub run: RunConfig,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("config key '{0}': {1}")]
    BadValue(String, String),
    #[error("unknown config key '{0}'")]
    UnknownKey(String),
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn parse_nu(v: &str) -> Result<[Scalar; 5], String> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(format!("expected 5 values, got {}", parts.len()));
    }
    let mut out = Vec::with_capacity(5);
    for p in parts {
        out.push(Scalar::parse(p).map_err(|e| e.to_string())?);
    }
    Ok(out.try_into().unwrap())
}

impl Settings {
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        let bad = |e: String| UsageError::BadValue(key.into(), e);
        let value = value.trim();
        match key {
            "primes" | "prime" => {
                self.run.primes = value
                    .split(',')
                    .map(|p| p.trim().parse::<u64>().map_err(|e| bad(e.to_string())))
                    .collect::<Result<_, _>>()?
            }
            "seed" => self.run.seed = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "nu" => self.run.nu = Some(parse_nu(value).map_err(bad)?),
            "lambda" => self.run.lambda = Scalar::parse(value).map_err(|e| bad(e.to_string()))?,
            "max_degree" => self.run.max_degree = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "draws" => self.run.draws = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "threads" => self.threads = Some(value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            "output" => self.output = Some(PathBuf::from(value)),
            "deterministic" => {
                self.run.deterministic = matches!(value, "1" | "true" | "yes" | "on");
            }
            _ => return Err(UsageError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn apply_file_text(&mut self, text: &str) -> Result<(), UsageError> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| UsageError::BadValue(line.into(), "expected key=value".into()))?;
            self.apply(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<(), UsageError> {
        let mut vars: Vec<(String, String)> = vars.into_iter().filter(|(k, _)| k.starts_with("UPV_")).collect();
        vars.sort();
        for (k, v) in vars {
            self.apply(&k["UPV_".len()..].to_lowercase(), &v)?;
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, o: &ConfigOpts) -> Result<(), UsageError> {
        if !o.primes.is_empty() {
            self.run.primes = o.primes.clone();
        }
        let pairs = [
            ("seed", o.seed.map(|v| v.to_string())),
            ("nu", o.nu.clone()),
            ("lambda", o.lambda.clone()),
            ("max_degree", o.max_degree.map(|v| v.to_string())),
            ("draws", o.draws.map(|v| v.to_string())),
            ("threads", o.threads.map(|v| v.to_string())),
            ("output", o.output.as_ref().map(|p| p.display().to_string())),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                self.apply(k, &v)?;
            }
        }
        if o.deterministic {
            self.run.deterministic = true;
        }
        Ok(())
    }

    /// Defaults ← file ← environment ← flags.
    pub fn resolve(o: &ConfigOpts, env: impl IntoIterator<Item = (String, String)>) -> Result<Settings, UsageError> {
        let mut s = Settings::default();
        if let Some(path) = &o.config {
            let text = fs::read_to_string(path).map_err(|e| UsageError::Io(path.clone(), e.to_string()))?;
            s.apply_file_text(&text)?;
        }
        s.apply_env(env)?;
        s.apply_flags(o)?;
        s.run.validate()?;
        Ok(s)
    }
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn setup(opts: &ConfigOpts) -> Result<(Context, Option<PathBuf>), i32> {
    let settings = Settings::resolve(opts, std::env::vars()).map_err(|e| {
        eprintln!("upv: {e}");
        EXIT_USAGE
    })?;
    if let Some(n) = settings.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let ctx = Context::new(settings.run).map_err(|e| {
        eprintln!("upv: {e}");
        EXIT_USAGE
    })?;
    Ok((ctx, settings.output))
}

fn run(target: &str, opts: &ConfigOpts) -> i32 {
    let specs = match select(target) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("upv: {e}");
            return EXIT_USAGE;
        }
    };
    let (ctx, output) = match setup(opts) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let mut out = match open_output(&output) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("upv: {e}");
            return EXIT_USAGE;
        }
    };
    let mut failed = 0;
    for spec in &specs {
        let r = run_check(spec, &ctx);
        if matches!(r.status, Status::Fail | Status::Unstable) {
            failed += 1;
        }
        if writeln!(out, "{}", r.to_json_line()).and_then(|_| out.flush()).is_err() {
            return EXIT_USAGE;
        }
    }
    eprintln!("upv: {} checks, {} passed, {} failed", specs.len(), specs.len() - failed, failed);
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Text of a dump artifact under the given context.
pub fn dump_text(artifact: Artifact, ctx: &Context) -> Result<String, String> {
    match artifact {
        Artifact::Ideal => Ok(build_t_ideal(&ctx.rational_nu()).dump()),
        Artifact::Points => {
            let f = ctx.first_field();
            let nu = ctx.nus(f, 1).remove(0);
            let eq = SurfaceEquations::new(f, &nu);
            Ok(dump_points(f, &nu, &enumerate_surface(&eq)))
        }
        Artifact::Hilbert => {
            let f = ctx.first_field();
            let nu = ctx.nus(f, 1).remove(0);
            HilbertProfile::compute(&build_t_ideal(&nu), f, ctx.cfg.max_degree, false, DEFAULT_BUDGET)
                .map(|p| p.table())
                .map_err(|e| e.to_string())
        }
    }
}

fn dump(artifact: Artifact, opts: &ConfigOpts) -> i32 {
    let (ctx, output) = match setup(opts) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let text = match dump_text(artifact, &ctx) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("upv: {e}");
            return EXIT_USAGE;
        }
    };
    match open_output(&output).and_then(|mut o| o.write_all(text.as_bytes()).and_then(|_| o.flush())) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("upv: {e}");
            EXIT_USAGE
        }
    }
}

fn list() -> i32 {
    let width = REGISTRY.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in REGISTRY {
        println!("{:width$}  [{}] {}", c.id, c.topic, c.description);
    }
    EXIT_OK
}

/// Entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match &cli.command {
        Command::Run { target, opts } => run(target, opts),
        Command::Dump { artifact, opts } => dump(*artifact, opts),
        Command::List => list(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let opts = ConfigOpts { seed: Some(9), ..Default::default() };
        let env = vec![("UPV_SEED".to_string(), "4".to_string()), ("UPV_PRIMES".to_string(), "13,17".to_string())];
        let s = Settings::resolve(&opts, env).unwrap();
        assert_eq!(s.run.seed, 9);
        assert_eq!(s.run.primes, vec![13, 17]);
        let mut s = Settings::default();
        s.apply_file_text("# c\nlambda = -2/3\nmax_degree=3\n").unwrap();
        assert_eq!(s.run.lambda, Scalar::frac(-2, 3));
        assert!(s.apply_file_text("colour=blue").is_err());
    }

    #[test]
    fn bad_prime_is_usage_error() {
        assert_eq!(main_with_args(["upv", "run", "cover.free_action", "--prime", "5"]), EXIT_USAGE);
        assert_eq!(main_with_args(["upv", "run", "cover.free_action", "--prime", "7"]), EXIT_USAGE);
        assert_eq!(main_with_args(["upv", "dump", "graph"]), EXIT_USAGE);
        assert_eq!(main_with_args(["upv", "run", "no.such"]), EXIT_USAGE);
    }
}
