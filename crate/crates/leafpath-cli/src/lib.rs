//! Command-line front end for the `leafpath` library.

pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use leafpath::walks::View;
use leafpath::Direction;

use commands::{Failure, Input, Outcome, SimArgs};
use output::{Cell, Format, Report, Table};

#[derive(Parser, Debug)]
#[command(name = "leafpath", version, about = "Root-to-leaf path walks, normalized Hodge Laplacians and Cheeger bounds")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,
    /// Worker threads for brute-force searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ViewArg {
    Quotient,
    Cover,
}

impl From<ViewArg> for View {
    fn from(v: ViewArg) -> Self {
        match v {
            ViewArg::Quotient => View::Quotient,
            ViewArg::Cover => View::Cover,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirArg {
    Up,
    Down,
}

impl From<DirArg> for Direction {
    fn from(d: DirArg) -> Self {
        match d {
            DirArg::Up => Direction::Up,
            DirArg::Down => Direction::Down,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Leaf-path and root-path counts per node.
    Lp { input: PathBuf },
    /// Closed-form stationary distribution on every component.
    Stationary {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "quotient")]
        view: ViewArg,
    },
    /// Exact transition matrix of the full walk, or of a conditional walk with -k.
    Walk {
        input: PathBuf,
        #[arg(short = 'k', long = "dim")]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "up")]
        direction: DirArg,
        #[arg(long, value_enum, default_value = "quotient")]
        view: ViewArg,
    },
    /// Seeded Monte Carlo run of the full walk against the stationary law.
    WalkSim {
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start node, by name or index (default: the first node).
        #[arg(long)]
        start: Option<String>,
        #[arg(long, value_enum, default_value = "quotient")]
        view: ViewArg,
        /// Total-variation threshold reported as `within_tolerance`.
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
    },
    /// Spectra of the walk operators; with -k, of the conditional operators.
    Spectrum {
        input: PathBuf,
        #[arg(short = 'k', long = "dim")]
        k: Option<usize>,
    },
    /// Up, down and total Laplacian in dimension k.
    Laplacian {
        input: PathBuf,
        #[arg(short = 'k', long = "dim")]
        k: usize,
        /// Use the unnormalized Hodge Laplacian.
        #[arg(long)]
        combinatorial: bool,
    },
    /// Ranks, harmonic dimensions and Betti numbers.
    Hodge {
        input: PathBuf,
        #[arg(long)]
        combinatorial: bool,
    },
    /// Up- and down-components with coherence verdicts and witnesses.
    Coherent {
        input: PathBuf,
        #[arg(short = 'k', long = "dim")]
        k: Option<usize>,
    },
    /// Vertex partitions of the down-components in dimension k.
    Partition {
        input: PathBuf,
        #[arg(short = 'k', long = "dim")]
        k: usize,
    },
    /// Cheeger constants and combined spectral-gap bounds in dimension k.
    Cheeger {
        input: PathBuf,
        #[arg(short = 'k', long = "dim")]
        k: usize,
    },
    /// Bound tables over all dimensions.
    Report {
        input: PathBuf,
        /// Only k = 1, 2 and the columns of the tetrahedron tables.
        #[arg(long)]
        paper_tables: bool,
    },
    /// Run every invariant check; exit 3 on any violation.
    Verify { input: PathBuf },
    /// Run every verb on the bundled fixtures.
    SelfTest,
}

fn dispatch(cmd: &Command) -> Outcome {
    let load = |p: &PathBuf| Input::load(p);
    match cmd {
        Command::Lp { input } => commands::lp(&load(input)?),
        Command::Stationary { input, view } => commands::stationary_cmd(&load(input)?, (*view).into()),
        Command::Walk { input, k, direction, view } => {
            commands::walk(&load(input)?, *k, (*direction).into(), (*view).into())
        }
        Command::WalkSim { input, steps, seed, start, view, tolerance } => commands::walk_sim(
            &load(input)?,
            &SimArgs { steps: *steps, seed: *seed, start: start.clone(), view: (*view).into(), tolerance: *tolerance },
        ),
        Command::Spectrum { input, k } => commands::spectrum(&load(input)?, *k),
        Command::Laplacian { input, k, combinatorial } => commands::laplacian(&load(input)?, *k, !combinatorial),
        Command::Hodge { input, combinatorial } => commands::hodge_cmd(&load(input)?, !combinatorial),
        Command::Coherent { input, k } => commands::coherent(&load(input)?, *k),
        Command::Partition { input, k } => commands::partition(&load(input)?, *k),
        Command::Cheeger { input, k } => commands::cheeger(&load(input)?, *k),
        Command::Report { input, paper_tables } => commands::report(&load(input)?, *paper_tables),
        Command::Verify { input } => commands::verify(&load(input)?),
        Command::SelfTest => self_test(),
    }
}

const TETRAHEDRON: &str = include_str!("../../../fixtures/tetrahedron.cx");
const EVEN_CYCLE: &str = include_str!("../../../fixtures/even_cycle.cx");
const SMALL_COVER: &str = include_str!("../../../fixtures/small_strong.cover");

/// Library operations reached by each verb.
const COVERAGE: &[(&str, &str)] = &[
    ("lp", "parse_complex cover_from_complex parse_cover_spec path_weights"),
    ("stationary", "components stationary path_count expected_path_length"),
    ("walk", "transition_full transition_conditional"),
    ("walk-sim", "simulate total_variation"),
    ("spectrum", "build_bundle build_conditional min_eigenvalue_bound convergence_rate symmetric_eigen"),
    ("laplacian", "hodge coboundary normalization_weights"),
    ("hodge", "hodge_decomposition"),
    ("coherent", "detect_coherent"),
    ("partition", "find_partition"),
    ("cheeger", "build_aux aux_laplacian aux_spectrum check_aux_identity cheeger_quotient cheeger_signed combined_report"),
    ("report", "combined_report"),
    (
        "verify",
        "audit_complex audit_cover bundle_identities verify_split conditional_identities conditional_spectral_checks \
         coherent_spectrum_check verify_hodge_properties check_laplacian_walk_identity check_graph_specialization \
         component_correspondence",
    ),
];

fn self_test() -> Outcome {
    let tet = Input::from_text("tetrahedron.cx", "cx", TETRAHEDRON)?;
    let cyc = Input::from_text("even_cycle.cx", "cx", EVEN_CYCLE)?;
    let cov = Input::from_text("small_strong.cover", "cover", SMALL_COVER)?;
    let sim = SimArgs { steps: 20_000, seed: 1, start: None, view: View::Cover, tolerance: 0.05 };
    let runs: Vec<(&str, &Input, Outcome)> = vec![
        ("lp", &tet, commands::lp(&tet)),
        ("lp", &cov, commands::lp(&cov)),
        ("stationary", &cov, commands::stationary_cmd(&cov, View::Cover)),
        ("walk", &tet, commands::walk(&tet, Some(0), Direction::Up, View::Quotient)),
        ("walk-sim", &tet, commands::walk_sim(&tet, &sim)),
        ("spectrum", &tet, commands::spectrum(&tet, None)),
        ("spectrum", &tet, commands::spectrum(&tet, Some(1))),
        ("laplacian", &tet, commands::laplacian(&tet, 1, true)),
        ("hodge", &cyc, commands::hodge_cmd(&cyc, false)),
        ("coherent", &cyc, commands::coherent(&cyc, None)),
        ("partition", &cyc, commands::partition(&cyc, 1)),
        ("cheeger", &tet, commands::cheeger(&tet, 1)),
        ("report", &tet, commands::report(&tet, true)),
        ("verify", &tet, commands::verify(&tet)),
        ("verify", &cov, commands::verify(&cov)),
    ];
    let mut t = Table::new("self-test", &["verb", "input", "status", "rows"]);
    let mut failed = 0;
    for (verb, input, outcome) in runs {
        let (status, rows) = match outcome {
            Ok((r, 0)) => ("ok".to_string(), r.tables.iter().map(|t| t.rows.len()).sum::<usize>()),
            Ok((_, code)) => (format!("exit {code}"), 0),
            Err(e) => (e.message().to_string(), 0),
        };
        failed += usize::from(status != "ok");
        t.push(vec![verb.into(), input.name.clone().into(), status.into(), rows.into()]);
    }
    let mut cov_t = Table::new("coverage", &["verb", "operations"]);
    for (verb, ops) in COVERAGE {
        cov_t.push(vec![(*verb).into(), Cell::text(*ops)]);
    }
    let mut r = Report::new("self-test", None);
    r.add(t);
    r.add(cov_t);
    Ok((r, if failed == 0 { 0 } else { 3 }))
}

/// Parse `argv` (program name first), run the command and write its report to `out`.
/// Returns the process exit code: 0 success, 1 invalid input, 2 computation guard,
/// 3 verification failure.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::Input(format!("--threads: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    match outcome {
        Ok((report, code)) => {
            if out.write_all(report.render(cli.format).as_bytes()).is_err() {
                return 1;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}
