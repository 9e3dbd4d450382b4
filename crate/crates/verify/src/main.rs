use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harmspace::distance::{distance_bound_check, DistanceSettings};
use harmspace::harmonic_fn::{CoefficientField, HarmonicFunction};
use harmspace::norms::{space_norm_of, NormSettings, SpaceSpec};
use harmspace_verify::export::{export_report, to_json};
use harmspace_verify::{registry, Format, Result, SuiteConfig, Tier, VerifyError};

#[derive(Parser)]
#[command(name = "harmverify", version, about = "Numerical verification of harmonic function space estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite.
    Verify {
        suite: String,
        /// JSON config; empty fields fall back to suite defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum)]
        tier: Option<Tier>,
    },
    /// List the available suites.
    List,
    /// Norm of a harmonic function given by its coefficients.
    Norm {
        /// Coefficient field as JSON.
        #[arg(long)]
        coeffs: PathBuf,
        /// Space as inline JSON or a path, e.g. '{"family":"A","p":2,"alpha":0.5}'.
        #[arg(long)]
        space: String,
    },
    /// Distance-bound check over an eps grid.
    Distance {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
        /// Comma separated, e.g. "0.5,0.25,0.125".
        #[arg(long)]
        eps_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("harmverify: {e}");
            ExitCode::from(match e {
                VerifyError::Usage(_) | VerifyError::Config(_) => 2,
                VerifyError::Core(harmspace::Error::Domain(_) | harmspace::Error::Unsupported(_)) => 2,
                _ => 1,
            })
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { suite, config, seed, out, format, tier } => {
            registry::find(&suite)?;
            let mut cfg = match &config {
                Some(path) => SuiteConfig::load(path)?,
                None => SuiteConfig::new(&suite),
            };
            cfg.suite = suite;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = tier {
                cfg.tier = t;
            }
            let report = registry::run_suite(&cfg)?;
            export_report(&report, format, out.as_deref())?;
            if let Some(t) = report.timing {
                eprintln!(
                    "{}: {} cases, {} failed, {:.2} s",
                    report.suite,
                    report.cases.len(),
                    report.failures().count(),
                    t.as_secs_f64()
                );
            }
            Ok(report.verdict)
        }
        Command::List => {
            for s in registry::suites() {
                println!("{:<24}{}", s.name, s.anchor);
                println!("{:<24}params: {}", "", s.params);
            }
            Ok(true)
        }
        Command::Norm { coeffs, space } => {
            let f = load_function(&coeffs)?;
            let text = if space.trim_start().starts_with('{') {
                space
            } else {
                std::fs::read_to_string(&space).map_err(|e| VerifyError::io(&space, e))?
            };
            let spec: SpaceSpec =
                serde_json::from_str(&text).map_err(|e| VerifyError::Config(format!("invalid space: {e}")))?;
            let result = space_norm_of(&f, &spec, &NormSettings::default())?;
            let doc = serde_json::json!({ "space": spec, "norm": result });
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| VerifyError::Format(e.to_string()))?);
            Ok(true)
        }
        Command::Distance { coeffs, p, alpha, eps_grid, out, format } => {
            let f = load_function(&coeffs)?;
            let eps = parse_grid(&eps_grid)?;
            let est = distance_bound_check(&f, p, alpha, &eps, &DistanceSettings::default())?;
            let mut report = est.to_report("distance");
            report.config = serde_json::json!({ "coeffs": f.coefficients(), "p": p, "alpha": alpha, "eps": eps });
            match format {
                Format::Json if out.is_none() => print!("{}", to_json(&report)?),
                _ => export_report(&report, format, out.as_deref())?,
            }
            Ok(report.verdict)
        }
    }
}

fn load_function(path: &Path) -> Result<HarmonicFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| VerifyError::io(path, e))?;
    Ok(HarmonicFunction::new(CoefficientField::from_json(&text)?)?)
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let v: f64 = s.trim().parse().map_err(|_| VerifyError::Usage(format!("invalid eps value '{s}'")))?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(VerifyError::Usage(format!("eps must be positive, got {v}")))
            }
        })
        .collect()
}
