//! The `sparse-prime` command line: JSON in, one JSON report out.
//!
//! Exit codes: 0 on success, 2 when an enumeration or point budget is
//! exceeded, 1 for every other error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decider::{decide_with, prime_certificate, DecideOptions};
use crate::dmit::{is_dmit, DmitReport};
use crate::error::{Error, Result};
use crate::ff_oracle::{bkk_experiment, CountMethod, FieldSpec, RootCountReport, DEFAULT_Q};
use crate::linalg::LatticePoint;
use crate::polytope::{restricted_mixed_volume, system_mixed_volume};
use crate::supports::{normalize, parse_file, SubsetWitness, SupportSystem, SystemFile};
use crate::transversal::{max_partial_transversal, DEFAULT_ENUMERATION_LIMIT};
use crate::tropical::{corollary_check, stable_intersection, LiftSampler, MixedCell, TropicalData};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)");

#[derive(Parser, Debug)]
#[command(name = "sparse-prime", version = VERSION, about = "Generic primeness of sparse polynomial systems")]
struct Cli {
    /// Worker threads for data-parallel steps.
    #[arg(long, global = true, value_name = "THREADS", default_value_t = 1)]
    parallel: usize,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Largest number of supports for subset enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    max_k: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide generic primeness.
    Decide {
        input: Option<PathBuf>,
        /// For prime verdicts, include the reduced system and its DMIT witnesses.
        #[arg(long)]
        certificate: bool,
    },
    /// Maximum partial independent transversal.
    Transversal { input: Option<PathBuf> },
    /// Check the DMIT condition.
    Dmit { input: Option<PathBuf> },
    /// Mixed volume of the full system or of a 1-based subset.
    Mixedvol {
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// Count torus solutions for random coefficients over F_q.
    Oracle {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_Q)]
        q: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exact2d)]
        mode: Mode,
    },
    /// Stable intersection of the tropical hypersurfaces and its connectivity.
    Tropical {
        input: Option<PathBuf>,
        /// Ignore lifts in the input and draw them from this seed.
        #[arg(long, value_name = "SEED")]
        random_lifts: Option<u64>,
        /// Random lifts lie in [-BOUND, BOUND].
        #[arg(long, default_value_t = LiftSampler::default().bound)]
        lift_bound: i64,
        /// Random lifts are multiples of 1/DENOMINATOR.
        #[arg(long, default_value_t = LiftSampler::default().denominator)]
        lift_denominator: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Rational,
    Exact2d,
}

impl From<Mode> for CountMethod {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Rational => CountMethod::Rational,
            Mode::Exact2d => CountMethod::Exact2d,
        }
    }
}

#[derive(Serialize)]
struct Report<P: Serialize> {
    command: &'static str,
    schema: &'static str,
    input: SystemFile,
    #[serde(flatten)]
    payload: P,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

#[derive(Serialize)]
struct Timing {
    elapsed_us: u128,
}

#[derive(Serialize)]
struct DecidePayload {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mixed_volume: Option<u64>,
    char_note: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificatePayload>,
}

#[derive(Serialize)]
struct CertificatePayload {
    maximal_subset: Vec<usize>,
    reduced: SystemFile,
    reduced_dmit: DmitPayload,
}

#[derive(Serialize)]
struct Choice {
    support: usize,
    point: LatticePoint,
}

#[derive(Serialize)]
struct TransversalPayload {
    has_transversal: bool,
    size: usize,
    choices: Vec<Choice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violating_set: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct DmitWitnessPayload {
    support: usize,
    earlier: Vec<LatticePoint>,
    first: LatticePoint,
    second: LatticePoint,
}

#[derive(Serialize)]
struct DmitPayload {
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violating_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Vec<DmitWitnessPayload>>,
}

impl From<DmitReport> for DmitPayload {
    fn from(r: DmitReport) -> Self {
        DmitPayload {
            holds: r.holds,
            violating_set: r.violating_set.map(|j| j.one_based()),
            certificate: r.certificate.map(|ws| {
                ws.into_iter()
                    .map(|w| DmitWitnessPayload {
                        support: w.index + 1,
                        earlier: w.earlier,
                        first: w.first,
                        second: w.second,
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Serialize)]
struct MixedVolPayload {
    subset: Vec<usize>,
    mixed_volume: u64,
}

#[derive(Serialize)]
struct OraclePayload {
    #[serde(flatten)]
    report: RootCountReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    bkk_bound: Option<u64>,
}

#[derive(Serialize)]
struct CellPayload {
    pieces: Vec<Vec<LatticePoint>>,
    piece_dims: Vec<usize>,
    dual_dim: usize,
}

#[derive(Serialize)]
struct TropicalPayload {
    facets: Vec<CellPayload>,
    ridges: Vec<CellPayload>,
    incidence: Vec<(usize, usize)>,
    ctc1: bool,
    verdict: &'static str,
    condition_holds: bool,
    consistent: bool,
}

fn cell_payload(system: &SupportSystem, cell: &MixedCell) -> CellPayload {
    CellPayload {
        pieces: cell.piece_points(system),
        piece_dims: cell.piece_dims.clone(),
        dual_dim: cell.dual_dim,
    }
}

impl Command {
    fn input(&self) -> &Option<PathBuf> {
        match self {
            Command::Decide { input, .. }
            | Command::Transversal { input }
            | Command::Dmit { input }
            | Command::Mixedvol { input, .. }
            | Command::Oracle { input, .. }
            | Command::Tropical { input, .. } => input,
        }
    }
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String> {
    Ok(match path.as_ref().filter(|p| p.as_os_str() != "-") {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
            s
        }
    })
}

fn load_system(text: &str) -> Result<SupportSystem> {
    normalize(&parse_file(text)?.to_system()?)
}

fn to_json<P: Serialize>(command: &'static str, input: SystemFile, payload: P, timing: Option<Timing>) -> String {
    let report = Report {
        command,
        schema: crate::supports::SCHEMA_VERSION,
        input,
        payload,
        timing,
    };
    serde_json::to_string(&report).expect("reports serialize")
}

fn subset_from_one_based(system: &SupportSystem, indices: &[usize]) -> Result<SubsetWitness> {
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > system.k()) {
        return Err(Error::Parse(format!(
            "subset index {bad} is outside 1..={}",
            system.k()
        )));
    }
    Ok(SubsetWitness::from_one_based(indices))
}

fn execute(cli: &Cli, text: &str) -> Result<String> {
    let start = Instant::now();
    let timing = || {
        cli.timing.then(|| Timing {
            elapsed_us: start.elapsed().as_micros(),
        })
    };
    let options = DecideOptions {
        enumeration_limit: cli.max_k,
        ..DecideOptions::default()
    };
    match &cli.command {
        Command::Decide { certificate, .. } => {
            let system = load_system(text)?;
            let verdict = decide_with(&system, &options)?;
            let certificate = if *certificate && verdict.is_prime() {
                let c = prime_certificate(&system, &options)?;
                Some(CertificatePayload {
                    maximal_subset: c.maximal_subset.one_based(),
                    reduced: SystemFile::from_system(&c.reduced),
                    reduced_dmit: c.reduced_dmit.into(),
                })
            } else {
                None
            };
            let payload = DecidePayload {
                verdict: verdict.kind.as_str(),
                witness: verdict.witness.map(|w| w.one_based()),
                mixed_volume: verdict.mixed_volume.map(|m| m.value()),
                char_note: verdict.char_note,
                certificate,
            };
            Ok(to_json("decide", SystemFile::from_system(&system), payload, timing()))
        }
        Command::Transversal { .. } => {
            let system = load_system(text)?;
            let t = max_partial_transversal(&system);
            let payload = TransversalPayload {
                has_transversal: t.size == system.k(),
                size: t.size,
                choices: t
                    .choices
                    .into_iter()
                    .map(|(j, point)| Choice { support: j + 1, point })
                    .collect(),
                violating_set: t.tight_set.map(|j| j.one_based()),
            };
            Ok(to_json(
                "transversal",
                SystemFile::from_system(&system),
                payload,
                timing(),
            ))
        }
        Command::Dmit { .. } => {
            let system = load_system(text)?;
            let payload: DmitPayload = is_dmit(&system)?.into();
            Ok(to_json("dmit", SystemFile::from_system(&system), payload, timing()))
        }
        Command::Mixedvol { subset, .. } => {
            let system = load_system(text)?;
            let (subset, mv) = match subset {
                Some(indices) => {
                    let j = subset_from_one_based(&system, indices)?;
                    let mv = restricted_mixed_volume(&system, &j)?;
                    (j.one_based(), mv)
                }
                None => ((1..=system.k()).collect(), system_mixed_volume(&system)?),
            };
            let payload = MixedVolPayload {
                subset,
                mixed_volume: mv.value(),
            };
            Ok(to_json("mixedvol", SystemFile::from_system(&system), payload, timing()))
        }
        Command::Oracle {
            q, trials, seed, mode, ..
        } => {
            let system = load_system(text)?;
            let field = FieldSpec::new(*q)?;
            let report = bkk_experiment(&system, field, *trials, *seed, (*mode).into())?;
            let bkk_bound = if system.n() == system.k() {
                Some(system_mixed_volume(&system)?.value())
            } else {
                None
            };
            let payload = OraclePayload { report, bkk_bound };
            Ok(to_json("oracle", SystemFile::from_system(&system), payload, timing()))
        }
        Command::Tropical {
            random_lifts,
            lift_bound,
            lift_denominator,
            ..
        } => {
            let file = parse_file(text)?;
            let data = match random_lifts {
                Some(seed) => {
                    if *lift_bound < 0 || *lift_denominator < 1 {
                        return Err(Error::Parse(
                            "lift bound must be nonnegative and the denominator positive".into(),
                        ));
                    }
                    let sampler = LiftSampler {
                        bound: *lift_bound,
                        denominator: *lift_denominator,
                    };
                    sampler.seeded(&file.to_system()?, *seed)
                }
                None => TropicalData::from_file(&file)?,
            }
            .normalized()?;
            let complex = stable_intersection(&data)?;
            let corollary = corollary_check(&data)?;
            let system = data.system();
            let payload = TropicalPayload {
                facets: complex.facets.iter().map(|c| cell_payload(system, c)).collect(),
                ridges: complex.ridges.iter().map(|c| cell_payload(system, c)).collect(),
                incidence: complex.incidence.clone(),
                ctc1: corollary.ctc1,
                verdict: corollary.verdict.as_str(),
                condition_holds: corollary.condition_holds,
                consistent: corollary.consistent,
            };
            Ok(to_json("tropical", data.to_file(), payload, timing()))
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.parallel.max(1)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let result = read_input(cli.command.input(), stdin).and_then(|text| pool.install(|| execute(&cli, &text)));
    match result {
        Ok(json) => {
            if writeln!(stdout, "{json}").is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_budget() {
                2
            } else {
                1
            }
        }
    }
}
