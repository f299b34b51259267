mod sink;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qeuler_core::identities::{self, CheckReport, CheckSpec, Params, CHECKS};
use qeuler_core::paths::{
    diagonal_word, dinv, enumerate_all_decorated, enumerate_decorated, enumerate_dyck,
    enumerate_labellings, DecoratedLabelledPath,
};
use qeuler_core::perm::{
    chebikin_ihat, count_31_2, euler_poly, inv, inv3, is_alternating, maj, monot, permutations,
    revmaj,
};
use qeuler_core::schedule::{enumerate_sched_1n, schedule_by_cyclic_runs};
use qeuler_core::trees::{phi, phi_inverse, t1_address, t1_level};
use qeuler_core::{DecoratedPermutation, Polynomial, Schedule, TreeAddress};
use serde_json::json;

use sink::{csv_field, Cell, Format, Sink};

#[derive(Parser)]
#[command(
    name = "qeuler",
    version,
    about = "Exhaustive checks of the q = -1 identities for valley-decorated parking functions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print progress counters to standard error.
    #[arg(long, global = true)]
    progress: bool,
    /// Report elapsed times (makes output run dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List Dyck paths, parking functions or decorated labelled paths.
    Enumerate(EnumerateArgs),
    /// Permutation statistics, for given permutations or all of S_n.
    Stats(StatsArgs),
    /// Schedule numbers of a decorated permutation, or the schedule-1^n set.
    Schedules(SchedulesArgs),
    /// The bijection between schedule-1^n decorated permutations and S_n.
    Bijection(BijectionArgs),
    /// Run identity checks.
    Verify(VerifyArgs),
    /// Print one of the generating polynomials.
    Poly(PolyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Dyck,
    ParkingFunctions,
    Decorated,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Number of decorations (decorated paths only; default: any).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Kind::Decorated)]
    kind: Kind,
}

#[derive(Args)]
struct StatsArgs {
    /// Permutations such as 3142.
    perms: Vec<String>,
    /// All permutations of this size instead.
    #[arg(long, conflicts_with = "perms")]
    n: Option<usize>,
}

#[derive(Args)]
struct SchedulesArgs {
    /// Decorated permutation, `*` before each decorated letter.
    tau: Option<String>,
    /// List schedule-1^n decorated permutations of this size.
    #[arg(long, conflicts_with = "tau")]
    n: Option<usize>,
    /// Only those with this many decorations.
    #[arg(long, requires = "n")]
    k: Option<usize>,
    /// List every decorated permutation with its schedule and weight.
    #[arg(long, requires = "n", conflicts_with = "k")]
    all: bool,
}

#[derive(Args)]
struct BijectionArgs {
    /// Decorated permutation of schedule 1^n, or a permutation with --inverse.
    word: Option<String>,
    /// Tabulate the whole level `n`, in generating-tree order.
    #[arg(long, conflicts_with = "word")]
    n: Option<usize>,
    #[arg(long, requires = "word")]
    inverse: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    /// Run every size from this one up to `n`.
    #[arg(long)]
    from: Option<usize>,
    /// Check name, or `all`.
    #[arg(long, default_value = "all")]
    check: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    j: Option<i64>,
    /// List the available checks and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    /// Σ q^dinv t^area z^dec over decorated labelled paths.
    Delta,
    /// The same at q = -1; with --k, the coefficient of z^k.
    QMinus1,
    /// Σ t^inv3 z^monot over S_n.
    Perm,
    /// Σ t^revmaj z^dec over schedule-1^n decorated permutations.
    Sched,
    /// D_{n,j}.
    Dnj,
    TFactorial,
    Euler,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    j: Option<i64>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(qeuler_core::Error),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<qeuler_core::Error> for CliError {
    fn from(e: qeuler_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Outcome = Result<bool, CliError>;

fn in_range(name: &str, value: usize, lo: usize, hi: usize) -> Result<(), CliError> {
    if value < lo || value > hi {
        return Err(CliError::Usage(format!(
            "{name}={value} outside supported range {lo}..={hi}"
        )));
    }
    Ok(())
}

fn parse_word(s: &str) -> Result<DecoratedPermutation, CliError> {
    s.parse().map_err(CliError::Core)
}

fn plain(values: &[u8]) -> String {
    DecoratedPermutation::undecorated(values.to_vec())
        .expect("a permutation")
        .to_string()
}

fn address_text(a: &TreeAddress) -> String {
    if a.0.is_empty() {
        "-".to_string()
    } else {
        a.0.iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn digits(word: &[u8]) -> String {
    word.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(if word.iter().any(|&v| v > 9) { " " } else { "" })
}

struct Progress {
    enabled: bool,
}

impl Progress {
    fn note(&self, msg: &str) {
        if self.enabled {
            eprintln!("{msg}");
        }
    }

    fn tick(&self, label: &str, count: usize) {
        if self.enabled && count.is_multiple_of(100_000) && count > 0 {
            eprintln!("{label}: {count}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        builder = builder.num_threads(t as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| run(&cli));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let mut out: Box<dyn Write> = match &cli.global.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let progress = Progress {
        enabled: cli.global.progress,
    };
    let g = &cli.global;
    let ok = match &cli.command {
        Command::Enumerate(a) => enumerate(a, g, &progress, &mut *out)?,
        Command::Stats(a) => stats(a, g, &progress, &mut *out)?,
        Command::Schedules(a) => schedules(a, g, &progress, &mut *out)?,
        Command::Bijection(a) => bijection(a, g, &mut *out)?,
        Command::Verify(a) => verify(a, g, &progress, &mut *out)?,
        Command::Poly(a) => poly(a, g, &mut *out)?,
    };
    out.flush()?;
    Ok(ok)
}

fn enumerate(a: &EnumerateArgs, g: &Global, progress: &Progress, out: &mut dyn Write) -> Outcome {
    let n = a.n;
    match a.kind {
        Kind::Dyck => {
            in_range("n", n, 0, 12)?;
            let mut sink = Sink::new(
                out,
                g.format,
                &[("area_word", n), ("steps", 2 * n), ("area", 0)],
            )?;
            for p in enumerate_dyck(n) {
                sink.row(vec![
                    Cell::Str(digits(p.area_word())),
                    Cell::Str(p.to_steps()),
                    Cell::int(p.area()),
                ])?;
                progress.tick("dyck paths", sink.rows());
            }
            sink.finish()?;
        }
        Kind::ParkingFunctions | Kind::Decorated => {
            in_range("n", n, 0, 7)?;
            if let Some(k) = a.k {
                if a.kind == Kind::ParkingFunctions {
                    return Err(CliError::Usage(
                        "--k applies to decorated paths only".into(),
                    ));
                }
                in_range("k", k, 0, n.saturating_sub(1))?;
            }
            let columns = [
                ("area_word", n),
                ("labels", n),
                ("dv", 2 * n),
                ("area", 4),
                ("dinv", 4),
                ("diagonal_word", 0),
            ];
            let mut sink = Sink::new(out, g.format, &columns)?;
            let emit = |p: DecoratedLabelledPath, sink: &mut Sink| -> io::Result<()> {
                sink.row(vec![
                    Cell::Str(digits(p.path().area_word())),
                    Cell::Str(digits(p.labels())),
                    Cell::List(p.decorations()),
                    Cell::int(p.area()),
                    Cell::int(dinv(&p)),
                    Cell::Str(diagonal_word(&p).to_string()),
                ])?;
                progress.tick("paths", sink.rows());
                Ok(())
            };
            match (a.kind, a.k) {
                (Kind::ParkingFunctions, _) => {
                    for path in enumerate_dyck(n) {
                        for p in enumerate_labellings(&path) {
                            emit(p, &mut sink)?;
                        }
                    }
                }
                (_, Some(k)) => {
                    for p in enumerate_decorated(n, k) {
                        emit(p, &mut sink)?;
                    }
                }
                (_, None) => {
                    for p in enumerate_all_decorated(n) {
                        emit(p, &mut sink)?;
                    }
                }
            }
            progress.note(&format!("{} paths", sink.rows()));
            sink.finish()?;
        }
    }
    Ok(true)
}

fn stats(a: &StatsArgs, g: &Global, progress: &Progress, out: &mut dyn Write) -> Outcome {
    let perms: Vec<Vec<u8>> = match a.n {
        Some(n) => {
            in_range("n", n, 0, 9)?;
            permutations(n).collect()
        }
        None => {
            if a.perms.is_empty() {
                return Err(CliError::Usage("give permutations or --n".into()));
            }
            a.perms
                .iter()
                .map(|s| parse_word(s).map(DecoratedPermutation::into_values))
                .collect::<Result<_, _>>()?
        }
    };
    let width = perms.iter().map(|w| plain(w).len()).max().unwrap_or(0);
    let columns = [
        ("sigma", width),
        ("maj", 3),
        ("revmaj", 3),
        ("inv", 3),
        ("inv3", 3),
        ("monot", 3),
        ("ihat", 3),
        ("31-2", 3),
        ("alternating", 0),
    ];
    let mut sink = Sink::new(out, g.format, &columns)?;
    for w in &perms {
        sink.row(vec![
            Cell::Str(plain(w)),
            Cell::int(maj(w)),
            Cell::int(revmaj(w)),
            Cell::int(inv(w)),
            Cell::int(inv3(w)),
            Cell::int(monot(w)),
            Cell::int(chebikin_ihat(w)),
            Cell::int(count_31_2(w)),
            Cell::Bool(is_alternating(w)),
        ])?;
        progress.tick("permutations", sink.rows());
    }
    sink.finish()?;
    Ok(true)
}

fn schedules(a: &SchedulesArgs, g: &Global, progress: &Progress, out: &mut dyn Write) -> Outcome {
    if let Some(tau) = &a.tau {
        let tau = parse_word(tau)?;
        let s = schedule_by_cyclic_runs(&tau);
        match g.format {
            Format::Table => writeln!(out, "{s}")?,
            Format::Csv => writeln!(out, "tau,schedule\n{},{}", csv_field(&tau.to_string()), s)?,
            Format::Json => writeln!(out, "{}", json!({"tau": tau.to_string(), "schedule": s}))?,
        }
        return Ok(true);
    }
    let n =
        a.n.ok_or_else(|| CliError::Usage("give a decorated permutation or --n".into()))?;
    if a.all {
        in_range("n", n, 0, 6)?;
        let columns = [("tau", 2 * n), ("schedule", 2 * n), ("weight", 0)];
        let mut sink = Sink::new(out, g.format, &columns)?;
        for w in permutations(n) {
            for mask in 0..1u32 << n {
                let tau = DecoratedPermutation::new(w.clone(), mask)?;
                let s: Schedule = schedule_by_cyclic_runs(&tau);
                sink.row(vec![
                    Cell::Str(tau.to_string()),
                    Cell::List(s.0.clone()),
                    Cell::Poly(identities::schedule_product(&tau)),
                ])?;
                progress.tick("decorated permutations", sink.rows());
            }
        }
        sink.finish()?;
        return Ok(true);
    }
    in_range("n", n, 0, 9)?;
    if let Some(k) = a.k {
        in_range("k", k, 0, n.saturating_sub(1))?;
    }
    let mut sink = Sink::new(out, g.format, &[("tau", 2 * n), ("revmaj", 6), ("dec", 0)])?;
    for tau in enumerate_sched_1n(n, a.k) {
        sink.row(vec![
            Cell::Str(tau.to_string()),
            Cell::int(revmaj(tau.values())),
            Cell::int(tau.dec()),
        ])?;
        progress.tick("schedule-1^n permutations", sink.rows());
    }
    sink.finish()?;
    Ok(true)
}

fn bijection(a: &BijectionArgs, g: &Global, out: &mut dyn Write) -> Outcome {
    if let Some(word) = &a.word {
        let w = parse_word(word)?;
        let (tau, sigma) = if a.inverse {
            if w.dec() > 0 {
                return Err(CliError::Usage(
                    "--inverse takes an undecorated permutation".into(),
                ));
            }
            let tau = phi_inverse(w.values())?;
            (tau, w.into_values())
        } else {
            let sigma = phi(&w)?;
            (w, sigma)
        };
        let address = t1_address(&tau)?;
        let shown = if a.inverse {
            tau.to_string()
        } else {
            plain(&sigma)
        };
        match g.format {
            Format::Table => writeln!(out, "{shown}")?,
            Format::Csv => writeln!(
                out,
                "tau,sigma,address\n{},{},{}",
                csv_field(&tau.to_string()),
                plain(&sigma),
                address_text(&address)
            )?,
            Format::Json => writeln!(
                out,
                "{}",
                json!({"tau": tau.to_string(), "sigma": plain(&sigma), "address": address})
            )?,
        }
        return Ok(true);
    }
    let n =
        a.n.ok_or_else(|| CliError::Usage("give a word or --n".into()))?;
    in_range("n", n, 1, 8)?;
    let columns = [
        ("address", 2 * n),
        ("tau", 2 * n),
        ("sigma", n),
        ("revmaj", 6),
        ("dec", 3),
        ("inv3", 4),
        ("monot", 0),
    ];
    let mut sink = Sink::new(out, g.format, &columns)?;
    for tau in t1_level(n) {
        let sigma = phi(&tau)?;
        sink.row(vec![
            Cell::Str(address_text(&t1_address(&tau)?)),
            Cell::Str(tau.to_string()),
            Cell::Str(plain(&sigma)),
            Cell::int(revmaj(tau.values())),
            Cell::int(tau.dec()),
            Cell::int(inv3(&sigma)),
            Cell::int(monot(&sigma)),
        ])?;
    }
    sink.finish()?;
    Ok(true)
}

fn selected_checks(name: &str) -> Result<Vec<&'static CheckSpec>, CliError> {
    if name == "all" {
        return Ok(CHECKS.iter().collect());
    }
    identities::find_check(name)
        .map(|c| vec![c])
        .ok_or_else(|| {
            let names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
            CliError::Usage(format!(
                "unknown check {name:?}; available: all, {}",
                names.join(", ")
            ))
        })
}

fn verify(a: &VerifyArgs, g: &Global, progress: &Progress, out: &mut dyn Write) -> Outcome {
    if a.list {
        for c in CHECKS {
            writeln!(
                out,
                "{:<22} n in {}..={}  {}",
                c.name, c.min_n, c.max_n, c.about
            )?;
        }
        return Ok(true);
    }
    let checks = selected_checks(&a.check)?;
    let all = a.check == "all";
    let from = a.from.unwrap_or(a.n);
    if from > a.n {
        return Err(CliError::Usage(format!(
            "--from {from} exceeds --n {}",
            a.n
        )));
    }
    let top = CHECKS.iter().map(|c| c.max_n).max().unwrap_or(0);
    in_range("n", a.n, 1, if all { top } else { checks[0].max_n })?;

    let mut plan: Vec<(&CheckSpec, Params)> = Vec::new();
    for n in from..=a.n {
        let mut any = false;
        for &c in &checks {
            if all {
                if n < c.min_n || n > c.max_n || (c.name == "golden" && n != from) {
                    continue;
                }
            } else {
                in_range("n", n, c.min_n, c.max_n)?;
            }
            let params = Params {
                n,
                k: if c.takes_k || !all { a.k } else { None },
                j: if c.takes_j || !all { a.j } else { None },
            };
            plan.push((c, params));
            any = true;
        }
        if !any {
            return Err(CliError::Usage(format!("no check supports n={n}")));
        }
    }

    let mut reports: Vec<CheckReport> = Vec::with_capacity(plan.len());
    for (c, params) in plan {
        progress.note(&format!("running {} n={}", c.name, params.n));
        let report = c.run(&params)?;
        progress.note(&format!(
            "{} {} n={} ({:.1} ms)",
            if report.passed { "pass" } else { "FAIL" },
            report.name,
            report.params.n,
            report.elapsed.as_secs_f64() * 1000.0
        ));
        reports.push(report);
    }
    write_reports(&reports, g, out)?;
    Ok(reports.iter().all(|r| r.passed))
}

fn write_reports(reports: &[CheckReport], g: &Global, out: &mut dyn Write) -> io::Result<()> {
    match g.format {
        Format::Json => {
            let values: Vec<_> = reports.iter().map(|r| r.to_json(g.timings)).collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&values).expect("reports serialize")
            )?;
        }
        Format::Csv => {
            writeln!(out, "name,n,k,j,passed,lhs,rhs,witness,elapsed_ms")?;
            for r in reports {
                let opt = |v: Option<String>| v.unwrap_or_default();
                let witness = r.witness.as_ref().map(|w| w.to_string());
                let elapsed = g
                    .timings
                    .then(|| format!("{:.3}", r.elapsed.as_secs_f64() * 1000.0));
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.name,
                    r.params.n,
                    opt(r.params.k.map(|k| k.to_string())),
                    opt(r.params.j.map(|j| j.to_string())),
                    r.passed,
                    csv_field(&r.lhs.to_string()),
                    csv_field(&r.rhs.to_string()),
                    csv_field(&opt(witness)),
                    opt(elapsed),
                )?;
            }
        }
        Format::Table => {
            for r in reports {
                let mut label = format!("{} n={}", r.name, r.params.n);
                if let Some(k) = r.params.k {
                    label.push_str(&format!(" k={k}"));
                }
                if let Some(j) = r.params.j {
                    label.push_str(&format!(" j={j}"));
                }
                writeln!(out, "{}  {label}", if r.passed { "PASS" } else { "FAIL" })?;
                writeln!(out, "  lhs: {}", r.lhs)?;
                writeln!(out, "  rhs: {}", r.rhs)?;
                if let Some(w) = &r.witness {
                    writeln!(out, "  witness: {w}")?;
                }
                if g.timings {
                    writeln!(out, "  elapsed: {:.3} ms", r.elapsed.as_secs_f64() * 1000.0)?;
                }
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            writeln!(out, "{} passed, {} failed", reports.len() - failed, failed)?;
        }
    }
    Ok(())
}

fn poly(a: &PolyArgs, g: &Global, out: &mut dyn Write) -> Outcome {
    let n = a.n;
    let p: Polynomial = match a.which {
        Which::Delta => {
            in_range("n", n, 0, 8)?;
            identities::delta_side(n)
        }
        Which::QMinus1 => {
            in_range("n", n, 0, 8)?;
            match a.k {
                Some(k) => {
                    in_range("k", k, 0, n.saturating_sub(1))?;
                    identities::lhs_q_minus1(n, k)
                }
                None => identities::delta_side_q_minus1(n),
            }
        }
        Which::Perm => {
            in_range("n", n, 0, 10)?;
            identities::perm_side(n)
        }
        Which::Sched => {
            in_range("n", n, 0, 10)?;
            identities::sched_side(n)
        }
        Which::Dnj => {
            in_range("n", n, 1, 10)?;
            let j =
                a.j.ok_or_else(|| CliError::Usage("--which dnj needs --j".into()))?;
            identities::dnj(n, j)
        }
        Which::TFactorial => {
            in_range("n", n, 0, 20)?;
            Polynomial::t_factorial(n as u32)
        }
        Which::Euler => {
            in_range("n", n, 0, 10)?;
            euler_poly(n)
        }
    };
    match g.format {
        Format::Table => writeln!(out, "{p}")?,
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&p).expect("polynomials serialize")
        )?,
        Format::Csv => {
            writeln!(out, "q,t,z,c")?;
            for (m, c) in p.terms() {
                writeln!(out, "{},{},{},{}", m.q, m.t, m.z, c)?;
            }
        }
    }
    Ok(true)
}
