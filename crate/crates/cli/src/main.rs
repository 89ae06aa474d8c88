use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use superopt::approx::{best_approx, check_sv_identity, default_degree, superoptimal_approx, ApproxOptions};
use superopt::certify::{Certifier, CertifyConfig};
use superopt::error::Error;
use superopt::factory::{compose_canonical, paper_example, random_recipe, CanonicalRecipe, EXAMPLE_NAMES};
use superopt::hankel::{hankel_norm, kernel_stabilize};
use superopt::laurent::{default_grid_size, MatrixLaurentPoly, SymbolFile};
use superopt::weights::weight_report;

#[derive(Parser)]
#[command(name = "superopt", version, about = "Certify and approximate matrix Laurent polynomial symbols")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Grid size (power of two); default max(256, 8K + 8)
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Kernel tolerance, relative to the sup norm
    #[arg(long, global = true, default_value_t = 1e-6)]
    eps: f64,
    /// Smallest degree tried; default 2K + 2
    #[arg(long, global = true)]
    dmin: Option<usize>,
    #[arg(long, global = true, default_value_t = 64)]
    dmax: usize,
    /// Relative flatness tolerance for singular values
    #[arg(long = "tol-c1", global = true, default_value_t = 1e-6)]
    tol_c1: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// JSON only (no text summary)
    #[arg(long, global = true)]
    json: bool,
    /// Pretty-print JSON
    #[arg(long, global = true)]
    pretty: bool,
    /// Also write the JSON report here
    #[arg(long, short = 'o', global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run all certification checks on a symbol file
    Certify { symbol: PathBuf },
    /// Multiply out a canonical recipe (file or --random)
    Compose {
        recipe: Option<PathBuf>,
        /// Use a seeded random recipe instead of a file
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 5)]
        max_band: usize,
        /// Write the composed symbol here
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// List the built-in examples or emit one
    Examples {
        #[arg(long)]
        name: Option<String>,
        /// Write the example symbol here
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Numerical best or superoptimal approximation
    Approx {
        symbol: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Nehari)]
        mode: Mode,
        /// Approximant degree; default 2K + 4
        #[arg(long)]
        degree: Option<usize>,
        /// Singular indices to minimize in superoptimal mode; default min(m, n)
        #[arg(long)]
        stages: Option<usize>,
        #[arg(long, default_value_t = 400)]
        max_iter: usize,
    },
    /// Weighted Hankel estimate for the weight at one singular level
    Weights {
        symbol: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Polynomial degree of the test space; default 2K + 4
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Hankel norm or Toeplitz kernel
    Hankel {
        symbol: PathBuf,
        /// Stabilized Hankel norm (the default)
        #[arg(long, conflicts_with = "kernel")]
        norm: bool,
        /// Stabilized ε-kernel of the Toeplitz operator
        #[arg(long)]
        kernel: bool,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Nehari,
    Superoptimal,
}

#[derive(Serialize)]
struct RunConfig {
    grid: Option<usize>,
    eps: f64,
    dmin: Option<usize>,
    dmax: usize,
    tol_c1: f64,
    seed: u64,
    output: Option<String>,
}

enum Failure {
    Invalid(String),
    Inconclusive(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Run = Result<(Value, bool), Failure>;

impl Common {
    fn config(&self, band: Option<usize>) -> Result<RunConfig, Failure> {
        for (name, v) in [("--eps", self.eps), ("--tol-c1", self.tol_c1)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Failure::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.dmax == 0 || self.dmin.is_some_and(|d| d > self.dmax) {
            return Err(Failure::Invalid("need 0 < dmin ≤ dmax".into()));
        }
        let grid = match (self.grid, band) {
            (Some(n), Some(k)) => {
                if !n.is_power_of_two() {
                    return Err(Failure::Invalid(format!("--grid {n} is not a power of two")));
                }
                if n < 2 * k + 2 {
                    return Err(Failure::Invalid(format!("--grid {n} is below {} for band {k}", 2 * k + 2)));
                }
                Some(n)
            }
            (None, Some(k)) => Some(default_grid_size(k)),
            (g, None) => g,
        };
        Ok(RunConfig {
            grid,
            eps: self.eps,
            dmin: self.dmin.or(band.map(|k| 2 * k + 2)),
            dmax: self.dmax,
            tol_c1: self.tol_c1,
            seed: self.seed,
            output: self.out.as_ref().map(|p| p.display().to_string()),
        })
    }

    fn certify_config(&self, rc: &RunConfig) -> CertifyConfig {
        CertifyConfig { grid: rc.grid, eps: rc.eps, dmin: rc.dmin, dmax: rc.dmax, tol_c1: rc.tol_c1 }
    }
}

fn read_symbol(path: &Path) -> Result<MatrixLaurentPoly, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    MatrixLaurentPoly::from_json_str(&s).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn symbol_value(phi: &MatrixLaurentPoly) -> Value {
    serde_json::to_value(SymbolFile::from_poly(phi)).expect("symbol serializes")
}

fn with_config(rc: &RunConfig, body: Value) -> Value {
    let mut v = json!({ "config": rc });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn cmd_certify(c: &Common, path: &Path) -> Run {
    let phi = read_symbol(path)?;
    let rc = c.config(Some(phi.band()))?;
    let cert = Certifier::new(&phi, &c.certify_config(&rc))?.certify_all()?;
    if !c.json {
        eprintln!("{}: {}x{} symbol, band {}, grid {}", path.display(), phi.rows(), phi.cols(), phi.band(), cert.budgets.grid);
        eprintln!("  levels {:?} multiplicities {:?}", cert.profile.levels, cert.profile.multiplicities);
        eprintln!("  ‖Φ‖_∞ = {:.12}  ‖H_Φ‖ = {:.12}", cert.sup_norm, cert.hankel_norm);
        for (name, v) in cert.verdicts() {
            eprintln!("  {name:<24} {}", v.symbol());
        }
    }
    let inconclusive = cert.any_inconclusive();
    Ok((with_config(&rc, json!({ "certificate": cert })), inconclusive))
}

fn cmd_compose(c: &Common, recipe: Option<&Path>, random: bool, max_size: usize, max_band: usize, emit: Option<&Path>) -> Run {
    let rc = match (recipe, random) {
        (Some(p), false) => {
            let s = std::fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            CanonicalRecipe::from_json_str(&s).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?
        }
        (None, true) => {
            if max_size == 0 || max_band == 0 {
                return Err(Failure::Invalid("--max-size and --max-band must be positive".into()));
            }
            random_recipe(c.seed, max_size, max_band)
        }
        _ => return Err(Failure::Invalid("give a recipe file or --random, not both".into())),
    };
    let composed = compose_canonical(&rc)?;
    if let Some(p) = emit {
        write_file(p, &serde_json::to_string_pretty(&SymbolFile::from_poly(&composed.phi)).expect("serializes"))?;
    }
    let run = c.config(Some(composed.phi.band()))?;
    let body = json!({
        "recipe": rc,
        "symbol": symbol_value(&composed.phi),
        "levels": composed.levels,
        "multiplicities": composed.multiplicities,
    });
    Ok((with_config(&run, body), false))
}

fn cmd_examples(c: &Common, name: Option<&str>, emit: Option<&Path>) -> Run {
    let Some(name) = name else {
        if emit.is_some() {
            return Err(Failure::Invalid("--emit needs --name".into()));
        }
        return Ok((with_config(&c.config(None)?, json!({ "examples": EXAMPLE_NAMES })), false));
    };
    let (phi, expected) = paper_example(name)?;
    if let Some(p) = emit {
        write_file(p, &serde_json::to_string_pretty(&SymbolFile::from_poly(&phi)).expect("serializes"))?;
    }
    let rc = c.config(Some(phi.band()))?;
    Ok((with_config(&rc, json!({ "name": name, "symbol": symbol_value(&phi), "expected": expected })), false))
}

fn cmd_approx(c: &Common, path: &Path, mode: Mode, degree: Option<usize>, stages: Option<usize>, max_iter: usize) -> Run {
    let phi = read_symbol(path)?;
    let rc = c.config(Some(phi.band()))?;
    let degree = degree.unwrap_or_else(|| default_degree(&phi));
    let grid = rc.grid.map(|n| n.max(default_grid_size(phi.band().max(degree))));
    let opts = ApproxOptions { degree: Some(degree), grid, max_iter, start: None };
    let (res, sv) = match mode {
        Mode::Nehari => (best_approx(&phi, &opts)?, None),
        Mode::Superoptimal => {
            let k = stages.unwrap_or(phi.rows().min(phi.cols()));
            if k == 0 {
                return Err(Failure::Invalid("--stages must be positive".into()));
            }
            let r = superoptimal_approx(&phi, k, &opts)?;
            let sv = check_sv_identity(&phi, &r)?;
            (r, Some(sv))
        }
    };
    let inconclusive = !res.converged;
    let body = json!({ "mode": mode, "profile": res.profile, "result": res, "sv_identity": sv });
    Ok((with_config(&rc, body), inconclusive))
}

fn cmd_weights(c: &Common, path: &Path, level: usize, degree: Option<usize>) -> Run {
    let phi = read_symbol(path)?;
    let rc = c.config(Some(phi.band()))?;
    let d = degree.unwrap_or_else(|| default_degree(&phi));
    let grid = rc.grid.map(|n| n.max(default_grid_size(phi.band().max(d))));
    let rep = weight_report(&phi, level, d, grid)?;
    let inconclusive = !rep.admissible.stabilized;
    Ok((with_config(&rc, json!({ "weights": rep })), inconclusive))
}

fn cmd_hankel(c: &Common, path: &Path, kernel: bool) -> Run {
    let phi = read_symbol(path)?;
    let rc = c.config(Some(phi.band()))?;
    if !kernel {
        let h = hankel_norm(&phi)?;
        let body = json!({ "norm": h.norm, "stabilized_at": h.stabilized_at, "maximizer": h.maximizer.to_json() });
        return Ok((with_config(&rc, body), false));
    }
    let scale = superopt::laurent::sup_norm(&phi).max(f64::MIN_POSITIVE);
    match kernel_stabilize(&phi, rc.eps * scale, rc.dmin.unwrap_or(0), rc.dmax) {
        Ok(st) => {
            let trajectory: Vec<Value> = st
                .trajectory
                .iter()
                .map(|r| json!({ "degree": r.degree, "dimension": r.dimension, "smallest_excluded": r.smallest_excluded }))
                .collect();
            let body = json!({
                "dimension": st.dimension,
                "stabilized_at": st.degree,
                "basis": st.basis.to_json(),
                "trajectory": trajectory,
            });
            Ok((with_config(&rc, body), false))
        }
        Err(Error::DegreeBudgetExhausted { dmax, trajectory }) => {
            let body = json!({ "verdict": "inconclusive", "dmax": dmax, "trajectory": trajectory });
            Err(Failure::Inconclusive(with_config(&rc, body)))
        }
        Err(e) => Err(e.into()),
    }
}

fn threads_from_env() -> Result<(), String> {
    let Ok(v) = std::env::var("SUPEROPT_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("SUPEROPT_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("SUPEROPT_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn emit(c: &Common, v: &Value) -> Result<(), Failure> {
    let text = if c.pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }.expect("json");
    if let Some(p) = &c.out {
        write_file(p, &text)?;
    }
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Invalid(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    // usage errors are validation errors; clap would exit with 2
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = threads_from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let c = &cli.common;
    let run = match &cli.cmd {
        Cmd::Certify { symbol } => cmd_certify(c, symbol),
        Cmd::Compose { recipe, random, max_size, max_band, emit } => {
            cmd_compose(c, recipe.as_deref(), *random, *max_size, *max_band, emit.as_deref())
        }
        Cmd::Examples { name, emit } => cmd_examples(c, name.as_deref(), emit.as_deref()),
        Cmd::Approx { symbol, mode, degree, stages, max_iter } => cmd_approx(c, symbol, *mode, *degree, *stages, *max_iter),
        Cmd::Weights { symbol, level, degree } => cmd_weights(c, symbol, *level, *degree),
        Cmd::Hankel { symbol, norm: _, kernel } => cmd_hankel(c, symbol, *kernel),
    };
    let (value, inconclusive) = match run {
        Ok(r) => r,
        Err(Failure::Inconclusive(v)) => (v, true),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(Failure::Invalid(msg)) = emit(c, &value) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(if inconclusive { 2 } else { 0 })
}
