use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use mertens_core::checkpoint::{checkpoint_read, checkpoint_write, merge};
use mertens_core::criterion::{geometric_grid, scan_difference_with, scan_double_sum};
use mertens_core::doublesum::{double_sum, DoubleSumResult, Method};
use mertens_core::emit::{emit_csv, emit_json, Field, Record};
use mertens_core::mertens::{CheckpointRecord, MertensSource, SegmentedMertens};
use mertens_core::verify::{self, SweepReport, VerifyPlan};
use mertens_core::Error;

use crate::{
    Cli, Command, DoubleSumArgs, Format, GridArgs, MertensArgs, MethodArg, ResumeArgs, ScanDArgs,
    ScanSArgs, VerifyArgs,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

/// `auto` switches from the naive to the blocked double sum above this n.
pub const AUTO_NAIVE_MAX: u64 = 64;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Core(Error::Io(_) | Error::Parse { .. }) => EXIT_IO,
            Failure::Core(Error::Domain(_) | Error::Precondition(_)) => EXIT_USAGE,
            Failure::Core(Error::Resource { .. }) => EXIT_RESOURCE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => format!("I/O error: {e}"),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn thread_count(cli: &Cli) -> Result<usize, Failure> {
    match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be ≥ 1".into())),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn run(cli: &Cli) -> u8 {
    let result = thread_count(cli).and_then(|threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::Io(io::Error::other(e)))?;
        pool.install(|| dispatch(cli))
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("mertens: {}", f.message());
            f.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    if cli.segment_len == 0 {
        return Err(Failure::Usage("--segment-len must be ≥ 1".into()));
    }
    match &cli.command {
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Mertens(a) => cmd_mertens(cli, a),
        Command::Doublesum(a) => cmd_doublesum(cli, a),
        Command::ScanS(a) => cmd_scan_s(cli, a),
        Command::ScanD(a) => cmd_scan_d(cli, a),
        Command::Resume(a) => cmd_resume(cli, a),
    }
}

fn render<R: Record>(format: Format, records: &[R]) -> String {
    match format {
        Format::Csv => emit_csv(records),
        Format::Json => {
            let mut s = emit_json(records);
            s.push('\n');
            s
        }
    }
}

fn write_records<R: Record>(cli: &Cli, records: &[R]) -> Result<(), Failure> {
    let text = render(cli.format, records);
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn rate_line(cli: &Cli, what: &str, count: usize, started: Instant) {
    if !cli.quiet {
        let secs = started.elapsed().as_secs_f64();
        eprintln!(
            "{what}: {count} records in {secs:.3} s ({:.1} records/s)",
            count as f64 / secs.max(1e-9)
        );
    }
}

struct SweepRow<'a>(&'a SweepReport);

impl Record for SweepRow<'_> {
    const COLUMNS: &'static [&'static str] = &["suite", "cases", "status", "counterexample"];

    fn fields(&self) -> Vec<Field<'_>> {
        let r = self.0;
        vec![
            Field::Text(&r.name),
            Field::Unsigned(r.cases),
            Field::Text(if r.passed() { "pass" } else { "FAIL" }),
            Field::Text(r.counterexample.as_deref().unwrap_or("")),
        ]
    }
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Outcome {
    if a.m_max == 0
        || a.meissel_max == 0
        || a.random_m_max == 0
        || a.floor_max == 0
        || a.bracket_max == 0
    {
        return Err(Failure::Usage("sweep bounds must be ≥ 1".into()));
    }
    let started = Instant::now();
    let plan = VerifyPlan {
        m_max: a.m_max,
        meissel_max: a.meissel_max,
        random_cases: a.random,
        random_m_max: a.random_m_max,
        nested_floor_max: a.floor_max,
        nested_floor_random: a.floor_random,
        bracket_max: a.bracket_max,
        seed: a.seed,
    };
    let mut reports = plan.run()?;
    if a.extended {
        let n_max = 500;
        let ns: Vec<u64> = (2..=n_max).collect();
        reports.push(verify::sweep_double_sum_oracle(n_max)?);
        reports.push(verify::sweep_main_identity(
            format!("main identity 2<=n<={n_max} naive"),
            &ns,
            Method::Naive,
        )?);
        reports.push(verify::sweep_partial_sums(a.meissel_max)?);
        reports.push(verify::sweep_bridging_bound(300)?);
    }
    let rows: Vec<SweepRow<'_>> = reports.iter().map(SweepRow).collect();
    write_records(cli, &rows)?;
    rate_line(cli, "verify", rows.len(), started);
    Ok(if reports.iter().all(SweepReport::passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn read_checkpoint_if_present(path: &Path) -> Result<Vec<CheckpointRecord>, Failure> {
    if path.exists() {
        Ok(checkpoint_read(path)?)
    } else {
        Ok(Vec::new())
    }
}

fn cmd_mertens(cli: &Cli, a: &MertensArgs) -> Outcome {
    let started = Instant::now();
    let source = SegmentedMertens::new(cli.segment_len)?;
    let records = source.mertens_many(&a.points)?;
    if let Some(path) = &a.checkpoint {
        let merged = merge(&read_checkpoint_if_present(path)?, &records)?;
        checkpoint_write(&merged, path)?;
    }
    write_records(cli, &records)?;
    rate_line(cli, "mertens", records.len(), started);
    Ok(EXIT_OK)
}

fn cmd_doublesum(cli: &Cli, a: &DoubleSumArgs) -> Outcome {
    let methods: Vec<Method> = if a.check {
        vec![Method::Naive, Method::Blocked]
    } else {
        vec![match a.method {
            MethodArg::Naive => Method::Naive,
            MethodArg::Blocked => Method::Blocked,
            MethodArg::Auto if a.n <= AUTO_NAIVE_MAX => Method::Naive,
            MethodArg::Auto => Method::Blocked,
        }]
    };
    let results: Vec<DoubleSumResult> = methods
        .into_iter()
        .map(|m| double_sum(a.n, m))
        .collect::<Result<_, _>>()?;
    write_records(cli, &results)?;
    if !cli.quiet {
        for r in &results {
            eprintln!(
                "doublesum: n = {} via {} in {:.3} s",
                r.n,
                r.method,
                r.elapsed.as_secs_f64()
            );
        }
    }
    let agree = results.windows(2).all(|w| w[0].s == w[1].s);
    if !agree {
        eprintln!("mertens: naive and blocked double sums disagree");
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_scan_s(cli: &Cli, a: &ScanSArgs) -> Outcome {
    let started = Instant::now();
    let records = scan_double_sum(a.n_min, a.n_max, a.stride)?;
    write_records(cli, &records)?;
    rate_line(cli, "scan-s", records.len(), started);
    Ok(EXIT_OK)
}

fn grid_points(g: &GridArgs) -> Result<Vec<u64>, Failure> {
    let x_max = g
        .x_max
        .ok_or_else(|| Failure::Usage("give --x-max or --points".into()))?;
    if x_max == 0 {
        return Err(Failure::Usage("--x-max must be ≥ 1".into()));
    }
    Ok(geometric_grid(x_max, g.per_decade, g.budget)?)
}

fn difference_scan(
    cli: &Cli,
    what: &str,
    known: &[CheckpointRecord],
    points: &[u64],
    checkpoint: Option<&Path>,
) -> Outcome {
    let started = Instant::now();
    let source = SegmentedMertens::new(cli.segment_len)?;
    let scan = scan_difference_with(&source, known, points)?;
    if let Some(path) = checkpoint {
        checkpoint_write(&merge(known, &scan.checkpoints)?, path)?;
    }
    write_records(cli, &scan.records)?;
    rate_line(cli, what, scan.records.len(), started);
    Ok(EXIT_OK)
}

fn cmd_scan_d(cli: &Cli, a: &ScanDArgs) -> Outcome {
    let points = match &a.points {
        Some(p) => p.clone(),
        None => grid_points(&a.grid)?,
    };
    difference_scan(cli, "scan-d", &[], &points, a.checkpoint.as_deref())
}

fn cmd_resume(cli: &Cli, a: &ResumeArgs) -> Outcome {
    let known = checkpoint_read(&a.checkpoint)?;
    let points = grid_points(&a.grid)?;
    difference_scan(cli, "resume", &known, &points, Some(&a.checkpoint))
}
