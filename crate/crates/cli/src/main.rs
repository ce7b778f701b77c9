//! `mzv`: batch evaluation of zeta values, relation checks, relation
//! search and harmonic-sum checks with machine-readable reports.
//!
//! Exit codes: 0 when every check passes, 1 when one fails, 2 for usage
//! and input errors, 3 when the output cannot be written.

mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use mzv_core::algebra::parse::field_spec_with_modulus;
use mzv_core::power_sums::ExactCache;
use mzv_core::{FieldSpec, Fq, PolyRing, PowerSums, Result, ZetaEngine};

use commands::{ComputeArgs, HarmonicArgs, PrimesArgs, SearchArgs, VerifyArgs};
use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "mzv", version, about = "Multiple zeta values over F_q[t]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Size of the constant field.
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Defining polynomial of F_q over F_p, in x.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one zeta value.
    Compute {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: ComputeArgs,
    },
    /// Generate a relation and evaluate it.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: VerifyArgs,
    },
    /// Find relations among v-adic values and compare with the universal families.
    Search {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: SearchArgs,
    },
    /// Check harmonic-sum identities on random instances.
    Harmonic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: HarmonicArgs,
    },
    /// List monic irreducibles up to a degree.
    Primes {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: PrimesArgs,
    },
}

fn field_spec(common: &Common) -> Result<FieldSpec> {
    match &common.modulus {
        Some(m) => field_spec_with_modulus(common.q, m),
        None => FieldSpec::with_q(common.q),
    }
}

fn cache_path(spec: &FieldSpec) -> Option<PathBuf> {
    let dir = std::env::var_os("MZV_CACHE_DIR")?;
    let name: String = spec.to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    Some(Path::new(&dir).join(format!("power-sums-{name}.json")))
}

fn load_engine(spec: &FieldSpec) -> ZetaEngine {
    let sums = PowerSums::from_spec(spec.clone());
    if let Some(path) = cache_path(spec) {
        let cache = fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str::<ExactCache>(&t).ok());
        if let Some(cache) = cache {
            if let Err(e) = sums.import_exact(&cache) {
                eprintln!("warning: ignoring cache {}: {e}", path.display());
            }
        }
    }
    ZetaEngine::with_power_sums(Arc::new(sums))
}

fn save_engine(engine: &ZetaEngine) {
    let Some(path) = cache_path(engine.field().spec()) else { return };
    let text = serde_json::to_string(&engine.power_sums().export_exact()).expect("cache serializes");
    let tmp = path.with_extension("json.tmp");
    let written = fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))
        .and_then(|_| fs::write(&tmp, text))
        .and_then(|_| fs::rename(&tmp, &path));
    if let Err(e) = written {
        eprintln!("warning: cannot update cache {}: {e}", path.display());
    }
}

fn run(command: &Command) -> Result<(Output, &Common)> {
    let with_engine = |common: &Common, f: &dyn Fn(&ZetaEngine) -> Result<Output>| -> Result<Output> {
        let engine = load_engine(&field_spec(common)?);
        let out = f(&engine)?;
        save_engine(&engine);
        Ok(out)
    };
    Ok(match command {
        Command::Compute { common, args } => (with_engine(common, &|e| commands::compute(e, args))?, common),
        Command::Verify { common, args } => (with_engine(common, &|e| commands::verify(e, args))?, common),
        Command::Search { common, args } => (with_engine(common, &|e| commands::search(e, args))?, common),
        Command::Harmonic { common, args } => (commands::harmonic(&args.ring, common.seed, args)?, common),
        Command::Primes { common, args } => {
            let ring = PolyRing::new(Fq::new(field_spec(common)?));
            (commands::primes(&ring, args)?, common)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, common) = match run(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = output.render(common.format);
    let written = match &common.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(if output.passed { 0 } else { 1 })
}
