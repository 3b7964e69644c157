use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::json;

use oneround::matrix::DEFAULT_BRUTE_CAP;
use oneround::optimal::{k_exact, k_report, tail_bound_scan, no_gap_values, verify_k_theorem, verify_sum_identities, LemmaRegionScan, TailExponent};
use oneround::oracles::{verify_majority_property, verify_no_gaps, verify_shape_theorem, verify_symmetry, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_MAJORITY_CAP, NOGAP_CAP};
use oneround::simulate::{simulate, SimConfig};
use oneround::strategy::DEFAULT_SHAPE_CAP;
use oneround::{
    binomial, exhaustive_optimal, lap_optimal, majority_strategy, no_gap_strategy, objective, strategy_from_string, verify_structural_lemmas,
    BigRational, BuildMethod, Error, Strategy, ThrowString, TrickMatrix, VerificationReport,
};

/// `println!` that exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! say_raw {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if write!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

const TAIL_OVER_N: &str = include_str!("../../data/tail_over_n.csv");
const TAIL_OVER_N_PLUS_K: &str = include_str!("../../data/tail_over_n_plus_k.csv");
const TAIL_RECORDED: RangeInclusive<usize> = 8..=60;

#[derive(Parser)]
#[command(name = "oneround", version, about = "Exact analysis of N-card one-round War")]
struct Cli {
    /// Override every enumeration cap (brute-force matrices, exhaustive
    /// search, deal enumeration). Large values can take a very long time.
    #[arg(long, global = true)]
    max_brute: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the trick matrix.
    Pmatrix {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Stern)]
        method: Method,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Pretty)]
        format: MatrixFormat,
    },
    /// Find an optimal strategy.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SolveMode::Formula)]
        mode: SolveMode,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite over a range of N.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// `a..b` (inclusive) or a single N.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
    },
    /// Tabulate the optimal number of throws.
    Ktable {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Play random deals with a fixed strategy.
    Simulate {
        #[arg(long)]
        n: usize,
        /// `optimal`, `identity`, `majority`, a throw string like `1101`, or a
        /// JSON permutation like `[3,1,2]`.
        #[arg(long, default_value = "optimal")]
        strategy: String,
        #[arg(long, default_value_t = 100_000)]
        deals: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Stern,
    Antidiag,
    Hooksum,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    Exhaustive,
    Lap,
    Formula,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Structural,
    Shape,
    Symmetry,
    Nogaps,
    Ktheorem,
    Tailbound,
    Majority,
    All,
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `a..b` or a single N, got `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok(a..=b)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("ONEROUND_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignore the error if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let caps = Caps::new(cli.max_brute);
    let outcome = match cli.command {
        Command::Pmatrix { n, method, format } => pmatrix(n, method, format, caps),
        Command::Solve { n, mode, format } => solve(n, mode, format, caps),
        Command::Verify { suite, n } => verify(suite, n, caps),
        Command::Ktable { n, format } => ktable(n, format),
        Command::Simulate { n, strategy, deals, seed, format } => run_simulation(n, &strategy, deals, seed, format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[derive(Clone, Copy)]
struct Caps {
    brute: usize,
    exhaustive: usize,
    majority: usize,
}

impl Caps {
    fn new(max_brute: Option<usize>) -> Self {
        Caps {
            brute: max_brute.unwrap_or(DEFAULT_BRUTE_CAP),
            exhaustive: max_brute.unwrap_or(DEFAULT_EXHAUSTIVE_CAP),
            majority: max_brute.unwrap_or(DEFAULT_MAJORITY_CAP),
        }
    }
}

fn print_matrix(p: &TrickMatrix, format: MatrixFormat) {
    match format {
        MatrixFormat::Json => say!("{}", p.to_json()),
        MatrixFormat::Csv => say_raw!("{}", p.to_csv()),
        MatrixFormat::Pretty => say_raw!("{}", p.pretty()),
    }
}

fn pmatrix(n: usize, method: Method, format: MatrixFormat, caps: Caps) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("N must be at least 1".into()));
    }
    let single = match method {
        Method::Brute => Some(BuildMethod::Brute),
        Method::Stern => Some(BuildMethod::Stern),
        Method::Antidiag => Some(BuildMethod::Antidiagonal),
        Method::Hooksum => Some(BuildMethod::HookSum),
        Method::All => None,
    };
    if let Some(m) = single {
        print_matrix(&m.build(n, caps.brute)?, format);
        return Ok(());
    }

    let methods: Vec<BuildMethod> = BuildMethod::ALL.into_iter().filter(|&m| m != BuildMethod::Brute || n <= caps.brute).collect();
    let built = methods.iter().map(|m| m.build(n, caps.brute)).collect::<oneround::Result<Vec<_>>>()?;
    let agree = built.windows(2).all(|w| w[0] == w[1]);
    let reference = built.iter().find(|_| true).expect("the formula builders always run");
    let names: Vec<&str> = methods.iter().map(|m| m.name()).collect();
    if let MatrixFormat::Json = format {
        say!("{}", json!({"matrix": reference.to_json(), "methods": names, "agree": agree}));
    } else {
        print_matrix(reference, format);
        let agreeing = if agree { built.len() } else { built.iter().filter(|p| *p == reference).count() };
        let verb = if agree { "agree" } else { "disagree" };
        let skipped = if methods.len() < 4 { format!(" (brute skipped above cap {})", caps.brute) } else { String::new() };
        say!("{agreeing}/{} methods {verb}{skipped}", built.len());
    }
    if agree {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn solve(n: usize, mode: SolveMode, format: Format, caps: Caps) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("N must be at least 1".into()));
    }
    let scale = binomial(2 * n as u64, n as i64);
    let (value, strategies, tie): (BigInt, Vec<Strategy>, Option<bool>) = match mode {
        SolveMode::Formula => {
            let k = k_exact(n)?;
            (no_gap_values(n)?.swap_remove(k), vec![no_gap_strategy(n, k)?], None)
        }
        SolveMode::Exhaustive => {
            let r = exhaustive_optimal(&TrickMatrix::stern(n)?, caps.exhaustive)?;
            (r.value, r.argmax, Some(r.tie))
        }
        SolveMode::Lap => {
            let r = lap_optimal(&TrickMatrix::stern(n)?);
            (r.value, r.argmax, Some(r.tie))
        }
    };
    let best = &strategies[0];
    let k = ThrowString::of(best).count();
    let expected = BigRational::new(value.clone(), scale.clone());
    let mean = expected.to_f64().unwrap_or(f64::NAN);
    match format {
        Format::Json => {
            let all: Vec<&[usize]> = strategies.iter().map(Strategy::as_slice).collect();
            say!(
                "{}",
                json!({"n": n, "k": k, "strategy": best.as_slice(), "maximisers": all, "f": value.to_string(),
                       "scale": scale.to_string(), "expected_tricks": mean, "fraction": mean / n as f64, "tie": tie})
            );
        }
        Format::Text => {
            say!("N={n}");
            say!("k*={k}");
            say!("strategy={best}");
            for other in &strategies[1..] {
                say!("also optimal={other}");
            }
            if tie == Some(true) {
                say!("tie=true");
            }
            say!("F={value}/{scale}");
            say!("expected_tricks={mean:.6}");
            say!("fraction={:.6}", mean / n as f64);
        }
    }
    Ok(())
}

fn report_lines(reports: &[VerificationReport]) -> bool {
    for r in reports {
        say!("{}", r.line());
    }
    reports.iter().all(|r| r.pass)
}

fn tail_bound(range: RangeInclusive<usize>) -> oneround::Result<bool> {
    let lo = (*range.start()).max(*TAIL_RECORDED.start());
    let hi = (*range.end()).min(*TAIL_RECORDED.end());
    if lo > hi {
        return Err(Error::Domain(format!("the recorded tail-bound frontier covers N = {TAIL_RECORDED:?}")));
    }
    let mut ok = true;
    for (mode, recorded) in [(TailExponent::OverN, TAIL_OVER_N), (TailExponent::OverNPlusK, TAIL_OVER_N_PLUS_K)] {
        let scan = tail_bound_scan(lo..=hi, mode)?;
        let expected: Vec<_> = LemmaRegionScan::cells_from_csv(recorded)?.into_iter().filter(|c| (lo..=hi).contains(&c.n)).collect();
        let matches = scan.cells == expected;
        ok &= matches;
        let frontier: Vec<String> = scan.exceptions.iter().map(|(n, k)| format!("({n},{k})")).collect();
        say!("INFO tail-bound-{} N={lo}..{hi} fails at {} of {} cells: {}", mode.name(), frontier.len(), scan.cells.len(), frontier.join(" "));
        let verdict = if matches { "PASS" } else { "FAIL" };
        say!("{verdict} tail-bound-{} N={lo}..{hi} matches recorded frontier (checked {})", mode.name(), scan.cells.len());
    }
    Ok(ok)
}

fn run_suite(suite: Suite, range: RangeInclusive<usize>, caps: Caps, clamp: bool) -> oneround::Result<bool> {
    let domain = |lo: usize, hi: usize, odd: bool| -> oneround::Result<Vec<usize>> {
        let ns: Vec<usize> = range.clone().filter(|n| !odd || n % 2 == 1).collect();
        if !clamp {
            if let Some(&bad) = ns.iter().find(|&&n| n < lo || n > hi) {
                return Err(Error::Domain(format!("this suite runs for {lo} <= N <= {hi}, got {bad}")));
            }
        }
        Ok(ns.into_iter().filter(|n| (lo..=hi).contains(n)).collect())
    };
    let mut ok = true;
    match suite {
        Suite::Structural => {
            for n in domain(1, usize::MAX, false)? {
                let p = TrickMatrix::stern(n)?;
                let mut reports = verify_structural_lemmas(&p);
                reports.push(verify_sum_identities(&p)?);
                ok &= report_lines(&reports);
            }
        }
        Suite::Shape => {
            for n in domain(3, DEFAULT_SHAPE_CAP, false)? {
                ok &= report_lines(&[verify_shape_theorem(n, caps.exhaustive)?]);
            }
        }
        Suite::Symmetry => {
            for n in domain(3, DEFAULT_SHAPE_CAP.max(caps.exhaustive), false)? {
                ok &= report_lines(&[verify_symmetry(n, caps.exhaustive)?]);
            }
        }
        Suite::Nogaps => {
            for n in domain(3, NOGAP_CAP, false)? {
                ok &= report_lines(&[verify_no_gaps(n)?]);
            }
        }
        Suite::Ktheorem => {
            for n in domain(3, usize::MAX, false)? {
                ok &= report_lines(&[verify_k_theorem(n)?]);
            }
        }
        Suite::Majority => {
            for n in domain(3, caps.majority, true)? {
                ok &= report_lines(&[verify_majority_property(n, caps.majority)?]);
            }
        }
        Suite::Tailbound => {
            let overlaps = *range.start() <= *TAIL_RECORDED.end() && *range.end() >= *TAIL_RECORDED.start();
            if !clamp || overlaps {
                ok &= tail_bound(range.clone())?;
            }
        }
        Suite::All => {
            for s in [Suite::Structural, Suite::Shape, Suite::Symmetry, Suite::Nogaps, Suite::Ktheorem, Suite::Majority, Suite::Tailbound] {
                ok &= run_suite(s, range.clone(), caps, true)?;
            }
        }
    }
    Ok(ok)
}

fn verify(suite: Suite, range: RangeInclusive<usize>, caps: Caps) -> Outcome {
    if run_suite(suite, range, caps, suite == Suite::All)? {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn ktable(range: RangeInclusive<usize>, format: TableFormat) -> Outcome {
    if *range.start() < 3 {
        return Err(Failure::Usage("the k table starts at N = 3".into()));
    }
    let rows = range.map(k_report).collect::<oneround::Result<Vec<_>>>()?;
    let violation = |r: &oneround::optimal::KReport| match r.bound_violation {
        Some(side) => serde_json::to_value(side).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
        None => "-".into(),
    };
    match format {
        TableFormat::Json => say!("{}", serde_json::to_string(&rows).expect("k rows serialize")),
        TableFormat::Csv => {
            say!("n,k_approx,k_exact,lower,upper,ratio,violation");
            for r in &rows {
                let v = violation(r);
                let v = if v == "-" { "" } else { v.as_str() };
                say!("{},{},{},{:.6},{:.6},{:.6},{v}", r.n, r.k_approx, r.k_exact, r.lower_bound, r.upper_bound, r.ratio);
            }
        }
        TableFormat::Text => {
            say!("{:>6} {:>8} {:>7} {:>10} {:>10} {:>8}  violation", "N", "k_approx", "k_exact", "lower", "upper", "ratio");
            for r in &rows {
                say!(
                    "{:>6} {:>8} {:>7} {:>10.4} {:>10.4} {:>8.3}  {}",
                    r.n,
                    r.k_approx,
                    r.k_exact,
                    r.lower_bound,
                    r.upper_bound,
                    r.ratio,
                    violation(r)
                );
            }
        }
    }
    Ok(())
}

fn parse_strategy(n: usize, spec: &str) -> oneround::Result<Strategy> {
    let spec = spec.trim();
    let s = match spec {
        "optimal" if n >= 3 => no_gap_strategy(n, k_exact(n)?)?,
        "optimal" => lap_optimal(&TrickMatrix::stern(n)?).argmax.swap_remove(0),
        "identity" => Strategy::identity(n),
        "majority" => majority_strategy(n)?,
        bits if !bits.is_empty() && bits.chars().all(|c| c == '0' || c == '1') => strategy_from_string(&ThrowString::parse(n, bits)?),
        text if text.starts_with('[') => {
            let map: Vec<usize> = serde_json::from_str(text).map_err(|e| Error::Parse(format!("permutation `{text}`: {e}")))?;
            Strategy::new(map)?
        }
        other => return Err(Error::Parse(format!("unknown strategy `{other}`"))),
    };
    if s.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: s.n() });
    }
    Ok(s)
}

fn run_simulation(n: usize, spec: &str, deals: u64, seed: u64, format: Format) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("N must be at least 1".into()));
    }
    let strategy = parse_strategy(n, spec)?;
    let exact = BigRational::new(objective(&TrickMatrix::stern(n)?, &strategy)?, binomial(2 * n as u64, n as i64));
    let exact = exact.to_f64().unwrap_or(f64::NAN);
    let report = simulate(&SimConfig::new(strategy.clone(), deals, seed)?)?;
    match format {
        Format::Json => say!("{}", serde_json::to_string(&report).expect("report serializes")),
        Format::Text => {
            say!("N={} strategy={strategy} deals={} seed={}", report.n, report.deals, report.seed);
            say!("mean_tricks={:.6} stderr={:.6} exact={exact:.6}", report.mean_tricks, report.stderr);
            say!("majority_win_rate={:.6}", report.majority_win_rate);
        }
    }
    Ok(())
}
