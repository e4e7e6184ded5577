//! `qcoh` — measure quantum coherence, discord, and dissonance; verify the
//! trade-off inequalities they satisfy; reproduce the published reference
//! values; and sweep the Werner family.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 state/channel
//! validation error, 4 verification failure.

use clap::{Args, Parser, Subcommand};
use qcoh::basis::SearchConfig;
use qcoh::ensembles::{parse_named, EnsembleKind, EnsembleSpec};
use qcoh::error::Error;
use qcoh::measures::{
    ck_decomposition, coherence, one_way_discord, one_way_dissonance, qi_coherence,
    symmetric_discord, zurek_discord,
};
use qcoh::report::{
    ensemble_summary_csv, ensemble_summary_line, reference_table, write_reports_jsonl,
};
use qcoh::state::{DensityMatrix, ProductBasis};
use qcoh::verifier::{
    check_measured_tradeoff, reproduce_reference_values, verify_ensemble_with_reports, RowStatus,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "qcoh",
    version,
    about = "Coherence, discord, and dissonance measures with verified trade-off bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute measures of one state.
    Measure(MeasureArgs),
    /// Check a registered inequality family over a random ensemble.
    Verify(VerifyArgs),
    /// Recompute the published reference values and compare.
    Reference(ReferenceArgs),
    /// Sweep the Werner family and emit a CSV of measures.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct SearchFlags {
    /// Random multistart count for basis searches.
    #[arg(long, default_value_t = 32)]
    starts: usize,
    /// Iteration cap per search start.
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Convergence tolerance for basis searches.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for all randomness (searches and ensembles).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sections (default: all available).
    #[arg(long)]
    jobs: Option<usize>,
}

impl SearchFlags {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            random_starts: self.starts,
            max_iterations: self.max_iter,
            tolerance: self.tol,
            seed: self.seed,
        }
    }

    fn apply_jobs(&self) {
        if let Some(n) = self.jobs {
            qcoh::par::configure_threads(n);
        }
    }
}

#[derive(Args)]
struct InputFlags {
    /// Read the state from a JSON file ({"dims": [...], "matrix": [[[re,im],...],...]}).
    #[arg(long, conflicts_with = "state")]
    file: Option<PathBuf>,
    /// Use a named state: plus_plus, bell, datta, werner, ghz, w, maximally_mixed.
    #[arg(long)]
    state: Option<String>,
    /// Parameter for parametrized named states (werner).
    #[arg(long)]
    p: Option<f64>,
    /// Subsystem dimensions, comma separated (e.g. 2,2,2).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
}

impl InputFlags {
    fn load(&self) -> Result<(DensityMatrix, String), Error> {
        match (&self.file, &self.state) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)?;
                let rho = qcoh::io::parse_state_json(&text)?;
                Ok((rho, path.display().to_string()))
            }
            (None, Some(name)) => {
                let named = parse_named(name, self.p, self.dims.as_deref())?;
                let rho = qcoh::ensembles::named_state(&named)?;
                Ok((rho, name.clone()))
            }
            _ => Err(Error::BadParameter(
                "exactly one of --file or --state is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    input: InputFlags,
    /// Measures to compute, comma separated:
    /// C,Q,D,L,C_qi,Q_oneway,D_oneway,theta,theta_sym,mutual_info,total_corr.
    #[arg(long, required = true, value_delimiter = ',')]
    measure: Vec<String>,
    /// Subsystems measured by the one-way quantities (default 0).
    #[arg(long, value_delimiter = ',', default_value = "0")]
    measured: Vec<usize>,
    /// Reference basis (only "computational" is supported).
    #[arg(long, default_value = "computational")]
    basis: String,
    #[command(flatten)]
    search: SearchFlags,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Inequality family: 1, 2, 3, 4, 5, 6, oneway, or bounds.
    #[arg(long)]
    theorem: String,
    /// Ensemble kind: haar_pure, induced, product_pure, classical.
    #[arg(long, default_value = "induced")]
    ensemble: String,
    /// Subsystem dimensions (default 2,2; theorems 4-6 default 2,2,2).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Number of trials.
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[command(flatten)]
    search: SearchFlags,
    /// Base path for reports: writes <out>.json, <out>.jsonl, <out>.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReferenceArgs {
    /// Only rows whose name starts with this prefix.
    #[arg(long)]
    rows: Option<String>,
    #[command(flatten)]
    search: SearchFlags,
    /// Write the rows as JSON here in addition to the table on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// First mixing parameter.
    #[arg(long, default_value_t = 0.0)]
    p_start: f64,
    /// Last mixing parameter.
    #[arg(long, default_value_t = 1.0)]
    p_stop: f64,
    /// Number of rows (>= 2).
    #[arg(long, default_value_t = 11)]
    steps: usize,
    #[command(flatten)]
    search: SearchFlags,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_)
        | Error::Io(_)
        | Error::UnknownName(_)
        | Error::UnknownTheorem(_)
        | Error::BadParameter(_) => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_measure(args: &MeasureArgs) -> Result<u8, Error> {
    args.search.apply_jobs();
    if args.basis != "computational" {
        return Err(Error::BadParameter(format!(
            "unsupported reference basis `{}` (only \"computational\")",
            args.basis
        )));
    }
    let (rho, label) = args.input.load()?;
    let reference = ProductBasis::computational(rho.dims());
    let config = args.search.config();
    let measured = &args.measured;

    let needs_decomposition = args
        .measure
        .iter()
        .any(|m| matches!(m.as_str(), "Q" | "D" | "L"));
    let decomposition = if needs_decomposition {
        Some(ck_decomposition(&rho, &reference, &config)?)
    } else {
        None
    };

    let mut measures = serde_json::Map::new();
    for name in &args.measure {
        let mut entry = serde_json::Map::new();
        let mut witness_distance: Option<f64> = None;
        let value = match name.as_str() {
            "C" => coherence(&rho, &reference)?.value,
            "Q" | "D" | "L" => {
                let d = decomposition.as_ref().expect("computed above");
                witness_distance = Some(d.witness.distance_from_computational());
                match name.as_str() {
                    "Q" => d.discord,
                    "D" => d.dissonance,
                    _ => d.entropic_cost,
                }
            }
            "C_qi" => qi_coherence(&rho, measured, &reference)?.value,
            "Q_oneway" => {
                let m = one_way_discord(&rho, measured, &config)?;
                witness_distance = m.witness.as_ref().map(|w| w.distance_from_computational());
                m.value
            }
            "D_oneway" => one_way_dissonance(&rho, measured, &reference, &config)?.value,
            "theta" => {
                let m = zurek_discord(&rho, measured, &config)?;
                witness_distance = m.witness.as_ref().map(|w| w.distance_from_computational());
                m.value
            }
            "theta_sym" => symmetric_discord(&rho, &config)?.value,
            "mutual_info" => rho.mutual_information(measured)?,
            "total_corr" => rho.total_correlation(),
            other => {
                return Err(Error::BadParameter(format!(
                    "unknown measure `{other}` (expected C, Q, D, L, C_qi, Q_oneway, \
                     D_oneway, theta, theta_sym, mutual_info, or total_corr)"
                )))
            }
        };
        entry.insert("value".into(), serde_json::json!(value));
        if let Some(d) = witness_distance {
            entry.insert("witness_distance".into(), serde_json::json!(d));
        }
        measures.insert(name.clone(), serde_json::Value::Object(entry));
    }

    let output = serde_json::json!({ "state": label, "measures": measures });
    write_or_print(&args.out, &serde_json::to_string_pretty(&output).unwrap())?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Error> {
    args.search.apply_jobs();
    let kind: EnsembleKind = args.ensemble.parse()?;
    let dims = args.dims.clone().unwrap_or_else(|| {
        if matches!(args.theorem.as_str(), "4" | "5" | "6") {
            vec![2, 2, 2]
        } else {
            vec![2, 2]
        }
    });
    let spec = EnsembleSpec {
        kind,
        dims,
        count: args.count,
        seed: args.search.seed,
    };
    let config = args.search.config();
    let (ensemble, reports) = verify_ensemble_with_reports(&args.theorem, &spec, &config)?;

    if let Some(base) = &args.out {
        let json = serde_json::to_string_pretty(&ensemble).unwrap();
        std::fs::write(base.with_extension("json"), json)?;
        let mut jsonl = Vec::new();
        write_reports_jsonl(&mut jsonl, &reports)?;
        std::fs::write(base.with_extension("jsonl"), jsonl)?;
        std::fs::write(
            base.with_extension("csv"),
            ensemble_summary_csv(std::slice::from_ref(&ensemble)),
        )?;
    }

    println!("{}", ensemble_summary_line(&ensemble));
    for finding in &ensemble.findings {
        eprintln!("finding: {finding}");
    }
    if ensemble.failures.is_empty() {
        Ok(0)
    } else {
        eprintln!("replay keys of failing trials:");
        for key in &ensemble.failures {
            eprintln!("  --seed {} index {}", key.seed, key.index);
        }
        Ok(EXIT_VERIFICATION)
    }
}

fn cmd_reference(args: &ReferenceArgs) -> Result<u8, Error> {
    args.search.apply_jobs();
    let config = args.search.config();
    let mut rows = reproduce_reference_values(&config)?;
    if let Some(prefix) = &args.rows {
        rows.retain(|r| r.name.starts_with(prefix.as_str()));
        if rows.is_empty() {
            return Err(Error::BadParameter(format!(
                "no reference rows start with `{prefix}`"
            )));
        }
    }
    print!("{}", reference_table(&rows));
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&rows).unwrap())?;
    }
    let mut failed = false;
    for row in &rows {
        match row.status {
            RowStatus::Fail => {
                eprintln!("FAIL: {} deviates by {:.3e} (tol {:.0e})", row.name, row.delta, row.tolerance);
                failed = true;
            }
            RowStatus::Finding => {
                eprintln!(
                    "finding: {} deviates by {:.3e} (tol {:.0e}); within reporting window",
                    row.name, row.delta, row.tolerance
                );
            }
            RowStatus::Pass => {}
        }
    }
    Ok(if failed { EXIT_VERIFICATION } else { 0 })
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, Error> {
    args.search.apply_jobs();
    if args.steps < 2 {
        return Err(Error::BadParameter("sweep needs at least 2 steps".into()));
    }
    if !(0.0..=1.0).contains(&args.p_start)
        || !(0.0..=1.0).contains(&args.p_stop)
        || args.p_start > args.p_stop
    {
        return Err(Error::BadParameter(format!(
            "sweep range [{}, {}] must lie within [0, 1]",
            args.p_start, args.p_stop
        )));
    }
    let config = args.search.config();
    let reference = ProductBasis::computational(&[2, 2]);
    let mut csv = String::from("p,C,theta_ab,theta,equality_gap\n");
    for i in 0..args.steps {
        let t = i as f64 / (args.steps - 1) as f64;
        let p = args.p_start + t * (args.p_stop - args.p_start);
        let rho = qcoh::ensembles::named_state(&qcoh::ensembles::NamedState::Werner(p))?;
        let c = coherence(&rho, &reference)?.value;
        let theta_ab = zurek_discord(&rho, &[0], &config)?.value;
        let theta = symmetric_discord(&rho, &config)?.value;
        let gap = check_measured_tradeoff(&rho, &reference, &config)?.bounds[0].slack.abs();
        let _ = writeln!(csv, "{p:.6},{c:.12},{theta_ab:.12},{theta:.12},{gap:.12}");
    }
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reference(args) => cmd_reference(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
