//! Command-line front end for the cat map laboratory.
//!
//! Exit codes: 0 on success, 1 on domain/format failures, 2 on usage
//! errors. Errors print a single-line diagnostic to stderr and never leave
//! partial output behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use catlab_core::bound::{self, PeriodReport};
use catlab_core::image::{self, Configuration, RecurrenceReport};
use catlab_core::map::{self, LatticePoint, Modulus};
use catlab_core::pgm;
use catlab_core::qualia::{self, LinearSpanArray, MatchGraph, NetworkKind};

#[derive(Parser)]
#[command(
    name = "catlab",
    version,
    about = "Exact periods, bounds, image recurrence, and the matching calculus for the discrete cat map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact period, Dyson-Falk bound, and per-factor terms for one n.
    Period {
        /// Lattice side (n >= 2).
        n: u64,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// CSV table of N,period,bound over an inclusive range.
    Table {
        /// First lattice side (>= 2).
        from: u64,
        /// Last lattice side (<= 10000).
        to: u64,
        /// Write the CSV to a file instead of stdout.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Iterate a square PGM image and write snapshot files.
    Iterate {
        /// Input image (P2 or P5, square).
        #[arg(long, value_name = "PGM")]
        input: PathBuf,
        /// Number of iterations to run.
        #[arg(long)]
        steps: u64,
        /// Write every j-th iterate (default 1).
        #[arg(long, default_value_t = 1, value_name = "J")]
        every: u64,
        /// Directory for step_XXXX.pgm files.
        #[arg(long, value_name = "DIR")]
        outdir: PathBuf,
    },
    /// Exact recurrence time of an image, with period and bound.
    Recurrence {
        /// Input image (P2 or P5, square).
        #[arg(long, value_name = "PGM")]
        input: PathBuf,
    },
    /// Orbit of a single lattice point under the map.
    Orbit {
        /// Lattice side.
        #[arg(long)]
        n: u64,
        /// Start column in [0, n).
        #[arg(long)]
        x: u64,
        /// Start row in [0, n).
        #[arg(long)]
        y: u64,
        /// Print every point of the orbit.
        #[arg(long)]
        points: bool,
    },
    /// CSV of the mean drift of initially adjacent pixel pairs.
    Dispersion {
        /// Lattice side (n >= 2).
        #[arg(long)]
        n: u64,
        /// Number of iterations to track.
        #[arg(long)]
        steps: u64,
    },
    /// Matching-calculus queries on match graphs.
    Qualia {
        #[command(subcommand)]
        command: QualiaCommand,
    },
}

#[derive(Subcommand)]
enum QualiaCommand {
    /// The manor of one quale: the quale plus everything matching it.
    Manor {
        /// Match-graph document (JSON with "qualia" and "matches").
        #[arg(long, value_name = "PATH")]
        file: PathBuf,
        /// Quale identifier.
        #[arg(long)]
        quale: String,
    },
    /// Maximal clans (connected components of the match relation).
    Clans {
        #[arg(long, value_name = "PATH")]
        file: PathBuf,
    },
    /// Quale-categories; identical sets to the maximal clans.
    Categories {
        #[arg(long, value_name = "PATH")]
        file: PathBuf,
    },
    /// Closed-form maximum manor size for a regular network.
    Maxmanor {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Matching distance.
        #[arg(long)]
        n: u64,
    },
    /// Manors of a linear span array (i matches j iff |i-j| <= span).
    Span {
        /// Number of qualia, labeled 1..count.
        #[arg(long)]
        count: u64,
        /// Maximum label distance at which two qualia match.
        #[arg(long)]
        span: u64,
        /// Print only this quale's manor.
        #[arg(long)]
        quale: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Square,
    Triangular,
    Cubical,
}

impl From<KindArg> for NetworkKind {
    fn from(kind: KindArg) -> NetworkKind {
        match kind {
            KindArg::Square => NetworkKind::SquareCell,
            KindArg::Triangular => NetworkKind::TriangularCell,
            KindArg::Cubical => NetworkKind::CubicalCell,
        }
    }
}

enum RunError {
    /// Bad arguments; exit code 2.
    Usage(String),
    /// Domain, format, or I/O failure; exit code 1.
    Failure(String),
}

impl From<catlab_core::Error> for RunError {
    fn from(e: catlab_core::Error) -> RunError {
        RunError::Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.render().to_string();
            let line = rendered.lines().find(|l| !l.is_empty()).unwrap_or("error");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(RunError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), RunError> {
    match command {
        Command::Period { n, json } => cmd_period(n, json),
        Command::Table { from, to, csv } => cmd_table(from, to, csv.as_deref()),
        Command::Iterate {
            input,
            steps,
            every,
            outdir,
        } => cmd_iterate(&input, steps, every, &outdir),
        Command::Recurrence { input } => cmd_recurrence(&input),
        Command::Orbit { n, x, y, points } => cmd_orbit(n, x, y, points),
        Command::Dispersion { n, steps } => cmd_dispersion(n, steps),
        Command::Qualia { command } => match command {
            QualiaCommand::Manor { file, quale } => cmd_qualia_manor(&file, &quale),
            QualiaCommand::Clans { file } => cmd_qualia_groups(&file, "clan", "clans"),
            QualiaCommand::Categories { file } => {
                cmd_qualia_groups(&file, "category", "categories")
            }
            QualiaCommand::Maxmanor { kind, n } => cmd_qualia_maxmanor(kind.into(), n),
            QualiaCommand::Span { count, span, quale } => {
                cmd_qualia_span(count, span, quale.as_deref())
            }
        },
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, RunError> {
    fs::read(path).map_err(|e| RunError::Failure(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, RunError> {
    fs::read_to_string(path).map_err(|e| RunError::Failure(format!("{}: {e}", path.display())))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    fs::write(path, bytes).map_err(|e| RunError::Failure(format!("{}: {e}", path.display())))
}

fn load_image(path: &Path) -> Result<Configuration, RunError> {
    let bytes = read_bytes(path)?;
    let (configuration, rescaled) = pgm::load_pgm_lenient(&bytes)?;
    if let Some(maxval) = rescaled {
        eprintln!(
            "warning: {}: samples rescaled from maxval {maxval} to 255",
            path.display()
        );
    }
    Ok(configuration)
}

fn power_str(prime: u64, exponent: u32) -> String {
    if exponent == 1 {
        prime.to_string()
    } else {
        format!("{prime}^{exponent}")
    }
}

fn render_period_report(report: &PeriodReport) -> String {
    let factorization = report
        .terms
        .iter()
        .map(|t| power_str(t.prime, t.exponent))
        .collect::<Vec<_>>()
        .join(" * ");
    let mut out = String::new();
    let _ = writeln!(out, "n        = {} = {factorization}", report.n);
    for term in &report.terms {
        let _ = writeln!(
            out,
            "term {:<6} class {:<11} value {}",
            power_str(term.prime, term.exponent),
            term.class.to_string(),
            term.value
        );
    }
    let values = report
        .terms
        .iter()
        .map(|t| t.value.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let _ = writeln!(out, "2*m_star = lcm({values}) = {}", report.lcm);
    let _ = writeln!(out, "m_star   = {}", report.bound);
    let _ = writeln!(out, "m_N      = {}", report.period);
    let _ = writeln!(
        out,
        "ratio    = {}/{}  (m_N / m_star)",
        report.ratio.0, report.ratio.1
    );
    if report.rounded_bound {
        let _ = writeln!(out, "note: term lcm was odd; m_star rounded up");
    }
    out
}

fn cmd_period(n: u64, json: bool) -> Result<(), RunError> {
    let report = bound::period_report(n)?;
    if json {
        let text =
            serde_json::to_string_pretty(&report).map_err(|e| RunError::Failure(e.to_string()))?;
        println!("{text}");
    } else {
        print!("{}", render_period_report(&report));
    }
    Ok(())
}

fn cmd_table(from: u64, to: u64, csv: Option<&Path>) -> Result<(), RunError> {
    if from < 2 {
        return Err(RunError::Usage(format!(
            "FROM must be at least 2, got {from}"
        )));
    }
    if to < from {
        return Err(RunError::Usage(format!(
            "TO ({to}) must not be less than FROM ({from})"
        )));
    }
    if to > 10_000 {
        return Err(RunError::Usage(format!(
            "TO must be at most 10000, got {to}"
        )));
    }
    let mut out = String::from("N,period,bound\n");
    for n in from..=to {
        let period = map::exact_period_factored(Modulus::new(n)?)?;
        let bound = bound::dyson_falk_bound(n)?;
        let _ = writeln!(out, "{n},{period},{bound}");
    }
    match csv {
        Some(path) => write_bytes(path, out.as_bytes())?,
        None => print!("{out}"),
    }
    Ok(())
}

fn cmd_iterate(input: &Path, steps: u64, every: u64, outdir: &Path) -> Result<(), RunError> {
    if every == 0 {
        return Err(RunError::Usage("--every must be at least 1".into()));
    }
    let configuration = load_image(input)?;
    fs::create_dir_all(outdir)
        .map_err(|e| RunError::Failure(format!("{}: {e}", outdir.display())))?;
    let mut written = 0u64;
    let mut step = 0u64;
    while step <= steps {
        let snapshot = image::iterate_configuration(&configuration, step);
        write_bytes(
            &outdir.join(pgm::snapshot_filename(step)),
            &pgm::save_pgm(&snapshot),
        )?;
        written += 1;
        match step.checked_add(every) {
            Some(next) => step = next,
            None => break,
        }
    }
    println!("wrote {written} snapshots to {}", outdir.display());
    Ok(())
}

fn render_recurrence_report(report: &RecurrenceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n          = {}", report.n);
    let _ = writeln!(out, "recurrence = {}", report.recurrence);
    let _ = writeln!(out, "m_N        = {}", report.period);
    match report.bound {
        Some(bound) => {
            let _ = writeln!(out, "m_star     = {bound}");
        }
        None => {
            let _ = writeln!(out, "m_star     = n/a (defined for n >= 2)");
        }
    }
    let _ = writeln!(out, "cycles (length, value period, count):");
    for cycle in &report.cycles {
        let _ = writeln!(
            out,
            "  {} {} {}",
            cycle.cycle_length, cycle.value_period, cycle.count
        );
    }
    out
}

fn cmd_recurrence(input: &Path) -> Result<(), RunError> {
    let configuration = load_image(input)?;
    let report = image::configuration_recurrence(&configuration)?;
    print!("{}", render_recurrence_report(&report));
    Ok(())
}

fn cmd_orbit(n: u64, x: u64, y: u64, points: bool) -> Result<(), RunError> {
    let modulus = Modulus::new(n)?;
    let start = LatticePoint::checked(x, y, modulus)?;
    println!("n      = {n}");
    println!("start  = ({x}, {y})");
    println!("length = {}", map::orbit_length(start, modulus));
    if points {
        println!("points:");
        for p in map::orbit_iter(start, modulus) {
            println!("  ({}, {})", p.x, p.y);
        }
    }
    Ok(())
}

fn cmd_dispersion(n: u64, steps: u64) -> Result<(), RunError> {
    let samples = image::dispersion_curve(Modulus::new(n)?, steps)?;
    let mut out = String::from("step,mean_distance\n");
    for sample in samples {
        let _ = writeln!(out, "{},{:.6}", sample.step, sample.mean_distance);
    }
    print!("{out}");
    Ok(())
}

fn load_graph(path: &Path) -> Result<MatchGraph, RunError> {
    Ok(MatchGraph::from_json(&read_text(path)?)?)
}

fn manor_lines(graph: &MatchGraph, quale: &str) -> Result<String, RunError> {
    let manor = qualia::manor_of(graph, quale)?;
    Ok(format!(
        "manor({}) = {}\nsize = {}\n",
        manor.center,
        manor.members.join(" + "),
        manor.members.len()
    ))
}

fn cmd_qualia_manor(file: &Path, quale: &str) -> Result<(), RunError> {
    let graph = load_graph(file)?;
    print!("{}", manor_lines(&graph, quale)?);
    Ok(())
}

fn cmd_qualia_groups(file: &Path, label: &str, plural: &str) -> Result<(), RunError> {
    let graph = load_graph(file)?;
    let groups = qualia::clan_partition(&graph).clans;
    println!("{plural} = {}", groups.len());
    for (i, group) in groups.iter().enumerate() {
        println!(
            "{label} {} (size {}): {}",
            i + 1,
            group.len(),
            group.join(" ")
        );
    }
    Ok(())
}

fn cmd_qualia_maxmanor(kind: NetworkKind, n: u64) -> Result<(), RunError> {
    println!("{}", qualia::max_manor_size(kind, n)?);
    Ok(())
}

fn cmd_qualia_span(count: u64, span: u64, quale: Option<&str>) -> Result<(), RunError> {
    let graph = qualia::expand_linear_span(&LinearSpanArray { count, span });
    match quale {
        Some(q) => print!("{}", manor_lines(&graph, q)?),
        None => {
            for q in graph.qualia() {
                let manor = qualia::manor_of(&graph, q)?;
                println!("manor({q}) = {}", manor.members.join(" + "));
            }
        }
    }
    Ok(())
}
