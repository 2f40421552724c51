//! Command-line entry point for the star-product engine: operator expansion,
//! verification suites, and pointwise evaluation, all with deterministic JSON
//! output.

use clap::{Args, Parser, Subcommand};
use monopole_star::fourier::DegreeCap;
use monopole_star::kontsevich;
use monopole_star::parse;
use monopole_star::rational::{rat_from_string, GaussianRational};
use monopole_star::representation::{self, KernelPoint, SampleConfig};
use monopole_star::star::StarProduct;
use monopole_star::zassenhaus;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "monopole-star",
    version,
    about = "Star-product engine for a charged particle in a monopole field"
)]
struct Cli {
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Force the sequential code path even in parallel builds.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the product operators B_0 ..= B_N.
    Expand {
        /// Truncation order of the expansion.
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Bind the coupling parameter to an exact rational value
        /// (e.g. `0` for the field-free limit); default keeps it symbolic.
        #[arg(long, value_name = "RATIONAL")]
        mu_bind: Option<String>,
        /// Cap on intermediate polynomial degrees.
        #[arg(long, default_value_t = 24)]
        degree_cap: u32,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Evaluate the product or its integral kernel at explicit inputs.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
}

#[derive(Args)]
struct SampleArgs {
    /// Number of seeded sample configurations.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Base seed of the deterministic sample streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

impl SampleArgs {
    fn config(&self) -> SampleConfig {
        SampleConfig {
            samples: self.samples,
            seed: self.seed,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Exhaustive associativity check of the truncated product on a family.
    Assoc {
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Family name (`coordinate`, `quadratic`) or `;`-separated exprs.
        #[arg(long, default_value = "quadratic")]
        family: String,
        #[arg(long, default_value_t = 24)]
        degree_cap: u32,
    },
    /// Compare the second-order product with the generic deformation formula.
    Kontsevich {
        #[arg(long, default_value = "quadratic")]
        family: String,
    },
    /// Exponential-splitting identity, Lie certification, and ground truths.
    Zassenhaus {
        /// Highest free-algebra degree carried by the identity check.
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
    /// Closed-form geometric phase against the quadrature oracle.
    Phase {
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Pointwise 2-cocycle identity of the translation multiplier.
    Cocycle {
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Composition law of the weak projective representation.
    Weakrep {
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Composition law of the phase-space translation operators.
    Tproduct {
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, default_value_t = 0.1)]
        hbar: f64,
    },
    /// Convergence of the truncated multiplier exponent to the exact one.
    Multiplier {
        /// Truncation orders to fit, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        orders: Vec<usize>,
        /// Deformation-parameter values of the fit, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
        hbars: Vec<f64>,
        /// Number of seeded configurations.
        #[arg(long, default_value_t = 10)]
        configs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Modulus, degeneration, and phase consistency of the integral kernel.
    Kernel {
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Run every verification suite with its defaults.
    All {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Family used by the symbolic suites.
        #[arg(long, default_value = "coordinate")]
        family: String,
    },
}

#[derive(Subcommand)]
enum EvalTarget {
    /// Star product of two symbol expressions, as a coefficient series.
    Star {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Bind the coupling parameter to an exact rational value.
        #[arg(long, value_name = "RATIONAL")]
        mu_bind: Option<String>,
    },
    /// Integral kernel at an explicit phase-space configuration.
    Kernel {
        /// JSON object with keys p1,q1,p2,q2,p,q (each {x,y,z}) and hbar.
        #[arg(long, value_name = "JSON")]
        point: Option<String>,
        /// Read the same JSON object from a file.
        #[arg(long, value_name = "PATH", conflicts_with = "point")]
        point_file: Option<PathBuf>,
        /// Also evaluate the truncated (leading-phase) kernel.
        #[arg(long)]
        approx: bool,
    },
}

/// Configuration failure: reported on stderr, exit code 2.
struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(ConfigError(message)) = configure_threads() {
        eprintln!("{}", json!({ "error": message }));
        return ExitCode::from(2);
    }
    let parallel = !cli.sequential && cfg!(feature = "parallel");
    match run(&cli.command, parallel) {
        Ok((report, passed)) => {
            if let Err(e) = emit(&report, cli.out.as_deref(), cli.pretty) {
                eprintln!("{}", json!({ "error": e.to_string() }));
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(ConfigError(message)) => {
            eprintln!("{}", json!({ "error": message }));
            ExitCode::from(2)
        }
    }
}

/// Apply `MONOPOLE_STAR_THREADS` to the global worker pool.
fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("MONOPOLE_STAR_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        ConfigError(format!(
            "MONOPOLE_STAR_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    if threads == 0 {
        return Err(ConfigError(String::from(
            "MONOPOLE_STAR_THREADS must be at least 1",
        )));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ConfigError(e.to_string()))?;
    Ok(())
}

fn emit(
    report: &serde_json::Value,
    out: Option<&std::path::Path>,
    pretty: bool,
) -> std::io::Result<()> {
    let mut text = if pretty {
        serde_json::to_string_pretty(report)?
    } else {
        serde_json::to_string(report)?
    };
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn to_value(report: &impl Serialize) -> Result<serde_json::Value, ConfigError> {
    Ok(serde_json::to_value(report)?)
}

fn parse_mu(raw: &Option<String>) -> Result<Option<GaussianRational>, ConfigError> {
    match raw {
        None => Ok(None),
        Some(text) => {
            let r = rat_from_string(text)
                .ok_or_else(|| ConfigError(format!("invalid rational for --mu-bind: {text:?}")))?;
            Ok(Some(GaussianRational::from_rat(r)))
        }
    }
}

fn build_family(spec: &str) -> Result<Vec<monopole_star::symbol::SymbolFunction>, ConfigError> {
    parse::parse_family(spec).map_err(|e| ConfigError(format!("invalid --family: {e}")))
}

fn run(command: &Command, parallel: bool) -> Result<(serde_json::Value, bool), ConfigError> {
    match command {
        Command::Expand {
            order,
            mu_bind,
            degree_cap,
        } => {
            let mut star = StarProduct::new(*order, DegreeCap(*degree_cap))?;
            let mu = parse_mu(mu_bind)?;
            if let Some(value) = &mu {
                star = star.bind_mu(value);
            }
            let rendered: Vec<String> = star.ops().iter().map(|op| op.to_string()).collect();
            let report = json!({
                "schema_version": monopole_star::SCHEMA_VERSION,
                "order": order,
                "mu_bound": mu.is_some(),
                "operators": star.ops(),
                "rendered": rendered,
            });
            Ok((report, true))
        }
        Command::Verify { suite } => run_verify(suite, parallel),
        Command::Eval { target } => run_eval(target),
    }
}

fn run_verify(
    suite: &VerifySuite,
    parallel: bool,
) -> Result<(serde_json::Value, bool), ConfigError> {
    match suite {
        VerifySuite::Assoc {
            order,
            family,
            degree_cap,
        } => {
            let star = StarProduct::new(*order, DegreeCap(*degree_cap))?;
            let family = build_family(family)?;
            let report = star.check_associativity(&family, parallel);
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Kontsevich { family } => {
            let star = StarProduct::new(2, DegreeCap::default())?;
            let family = build_family(family)?;
            let report = kontsevich::check_equivalence(&family, &star, parallel);
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Zassenhaus { degree } => {
            if *degree < 3 {
                return Err(ConfigError(String::from("--degree must be at least 3")));
            }
            let report = zassenhaus::verify_splitting(*degree, DegreeCap::default())?;
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Phase { sampling } => {
            let report = representation::verify_phase_oracle(&sampling.config(), parallel);
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Cocycle { sampling } => {
            let report = representation::verify_cocycle(&sampling.config(), parallel);
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Weakrep { sampling } => {
            let report = representation::verify_weak_rep(&sampling.config(), parallel);
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Tproduct { sampling, hbar } => {
            if *hbar <= 0.0 {
                return Err(ConfigError(String::from("--hbar must be positive")));
            }
            let report = representation::verify_t_product(&sampling.config(), *hbar, parallel);
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Multiplier {
            orders,
            hbars,
            configs,
            seed,
        } => {
            if orders.is_empty() || hbars.len() < 2 {
                return Err(ConfigError(String::from(
                    "need at least one order and two deformation values",
                )));
            }
            if hbars.iter().any(|&h| h <= 0.0) {
                return Err(ConfigError(String::from("--hbars must be positive")));
            }
            let cfg = SampleConfig {
                samples: *configs,
                seed: *seed,
                ..SampleConfig::default()
            };
            let report = representation::verify_multiplier(orders, hbars, &cfg, parallel)?;
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::Kernel { sampling } => {
            let report = representation::verify_kernel(&sampling.config(), parallel);
            let passed = report.passed;
            Ok((to_value(&report)?, passed))
        }
        VerifySuite::All { seed, family } => {
            let family = build_family(family)?;
            let cfg = SampleConfig {
                seed: *seed,
                ..SampleConfig::default()
            };
            let star = StarProduct::new(2, DegreeCap::default())?;
            let assoc = star.check_associativity(&family, parallel);
            let equivalence = kontsevich::check_equivalence(&family, &star, parallel);
            let splitting = zassenhaus::verify_splitting(5, DegreeCap::default())?;
            let phase = representation::verify_phase_oracle(&cfg, parallel);
            let cocycle = representation::verify_cocycle(&cfg, parallel);
            let weakrep = representation::verify_weak_rep(&cfg, parallel);
            let tproduct = representation::verify_t_product(&cfg, 0.1, parallel);
            let multiplier = representation::verify_multiplier(
                &[1, 2],
                &[0.1, 0.05, 0.025],
                &SampleConfig {
                    samples: 10,
                    seed: *seed,
                    ..SampleConfig::default()
                },
                parallel,
            )?;
            let kernel = representation::verify_kernel(&cfg, parallel);
            let passed = assoc.passed
                && equivalence.passed
                && splitting.passed
                && phase.passed
                && cocycle.passed
                && weakrep.passed
                && tproduct.passed
                && multiplier.passed
                && kernel.passed;
            let report = json!({
                "schema_version": monopole_star::SCHEMA_VERSION,
                "assoc": assoc,
                "kontsevich": equivalence,
                "zassenhaus": splitting,
                "phase": phase,
                "cocycle": cocycle,
                "weakrep": weakrep,
                "tproduct": tproduct,
                "multiplier": multiplier,
                "kernel": kernel,
                "passed": passed,
            });
            Ok((report, passed))
        }
    }
}

fn run_eval(target: &EvalTarget) -> Result<(serde_json::Value, bool), ConfigError> {
    match target {
        EvalTarget::Star {
            left,
            right,
            order,
            mu_bind,
        } => {
            let f = parse::parse_symbol(left)
                .map_err(|e| ConfigError(format!("invalid --left: {e}")))?;
            let g = parse::parse_symbol(right)
                .map_err(|e| ConfigError(format!("invalid --right: {e}")))?;
            let mut star = StarProduct::new(*order, DegreeCap::default())?;
            if let Some(value) = parse_mu(mu_bind)? {
                star = star.bind_mu(&value);
            }
            let series = star.star(&f, &g);
            let rendered: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
            let report = json!({
                "schema_version": monopole_star::SCHEMA_VERSION,
                "order": order,
                "left": left,
                "right": right,
                "coefficients": series.coeffs(),
                "rendered": rendered,
            });
            Ok((report, true))
        }
        EvalTarget::Kernel {
            point,
            point_file,
            approx,
        } => {
            let text = match (point, point_file) {
                (Some(t), None) => t.clone(),
                (None, Some(path)) => std::fs::read_to_string(path)
                    .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?,
                _ => {
                    return Err(ConfigError(String::from(
                        "provide exactly one of --point or --point-file",
                    )))
                }
            };
            let k: KernelPoint = serde_json::from_str(&text)
                .map_err(|e| ConfigError(format!("invalid kernel point: {e}")))?;
            if k.hbar <= 0.0 {
                return Err(ConfigError(String::from("hbar must be positive")));
            }
            let value = representation::kernel_eval(&k)
                .map_err(|e| ConfigError(format!("kernel evaluation failed: {e}")))?;
            let mut report = json!({
                "schema_version": monopole_star::SCHEMA_VERSION,
                "point": k,
                "value": { "re": value.re, "im": value.im },
                "modulus": value.norm(),
            });
            if *approx {
                let approx_value = representation::kernel_approx_eval(&k)
                    .map_err(|e| ConfigError(format!("kernel evaluation failed: {e}")))?;
                report["approx_value"] = json!({ "re": approx_value.re, "im": approx_value.im });
                report["leading_phase"] =
                    json!(representation::kernel_leading_phase(k.q, k.q1, k.q2));
            }
            Ok((report, true))
        }
    }
}
