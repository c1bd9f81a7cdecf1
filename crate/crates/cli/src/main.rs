use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partstab::bench::{bench_tail, BenchOptions};
use partstab::laurent::verify_two_sided;
use partstab::output;
use partstab::overpartitions::verify_pop_stabilization;
use partstab::stabilization::{verify_lower_shift, verify_periodic_shift, verify_upper, HypothesisCheck};
use partstab::subsums::{lambda_table, verify_g22_convolution, verify_single_family_props, verify_subsum_shift};
use partstab::{
    check_hypotheses, coefficient_by_enumeration, expand_laurent_product, expand_product, fast_tail_coefficient,
    limiting_sequence, Certification, Error, HypothesisKind, LaurentPolynomial, PolynomialSequence, ProductSpec,
    StabilizationReport, ZPolynomial,
};

/// Largest `n` the `--check` oracle comparison visits.
const CHECK_LIMIT: usize = 25;

#[derive(Parser, Debug)]
#[command(name = "partstab", version)]
#[command(about = "Expand partition products and verify coefficient stabilization")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print timings and progress to stderr
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args, Debug, Default)]
struct SpecSource {
    /// Preset name, e.g. `partitions`, `crank`, `subsums(3,2)`
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,

    /// Path to a JSON spec
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Sink {
    /// Write to this file instead of stdout
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Upper,
    Lower,
    Periodic,
    Laurent,
    SubsumShift,
    G22,
    Prop3,
    Pop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Subsums,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit F_0 ..= F_N
    Expand {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Compare with brute-force enumeration for n <= 25
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        sink: Sink,
    },
    /// Check a stabilization statement and emit its report
    Verify {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        order: usize,
        /// Modulus; defaults to the one found by the hypothesis check
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        i: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        /// Compare the expansion with brute-force enumeration for n <= 25
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        sink: Sink,
    },
    /// Emit the limiting sequence up to z^K
    Limit {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        sink: Sink,
    },
    /// Emit the subsum table Lambda_{m,i}(n, k)
    Table {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        i: i64,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        sink: Sink,
    },
    /// Print [z^(n-ell)] F_n from the limiting sequence
    FastTail {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Time fast-tail against bivariate expansions
    Bench {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ell: u64,
        /// n for the full expansion cross-check
        #[arg(long, default_value_t = 2000)]
        full_n: u64,
        #[arg(long)]
        no_full: bool,
        #[arg(long)]
        no_windowed: bool,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[command(flatten)]
        sink: Sink,
    },
}

/// Ways a run can fail, each with its own exit status.
#[derive(Debug)]
enum Failure {
    /// A certified (or checked-to-order) identity did not hold.
    Violation,
    Input(Error),
    Hypothesis(String),
    Mismatch(String),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation | Failure::Other(_) => 1,
            Failure::Input(_) => 2,
            Failure::Hypothesis(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesisFailed(why) => Failure::Hypothesis(why),
            e => Failure::Input(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.into())
    }
}

type Outcome = Result<(), Failure>;

impl SpecSource {
    fn load(&self) -> Result<ProductSpec, Failure> {
        match (&self.preset, &self.spec) {
            (Some(name), _) => Ok(ProductSpec::preset(name)?),
            (None, Some(path)) => {
                let text =
                    fs::read_to_string(path).map_err(|e| Failure::Other(anyhow::anyhow!("{}: {e}", path.display())))?;
                Ok(ProductSpec::from_json(&text)?)
            }
            (None, None) => Err(Failure::Input(Error::InvalidParameters("pass --preset or --spec".into()))),
        }
    }
}

/// What a command produced, and how it should exit after emitting it.
#[derive(Debug)]
struct Finished {
    text: String,
    output: Option<PathBuf>,
    status: Outcome,
}

impl Finished {
    fn ok(text: String, sink: &Sink) -> Self {
        Self { text, output: sink.output.clone(), status: Ok(()) }
    }

    fn emit(self) -> Outcome {
        let mut text = self.text;
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        self.status
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("PARTSTAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn oracle_check(spec: &ProductSpec, order: usize, verbose: bool) -> Outcome {
    let top = order.min(CHECK_LIMIT);
    if spec.laurent {
        let seq = expand_laurent_product(spec, top)?;
        for n in 0..=top {
            let e: LaurentPolynomial = coefficient_by_enumeration(spec, n)?;
            if &e != seq.poly(n) {
                return Err(Failure::Mismatch(format!("F_{n}: expansion {} vs enumeration {e}", seq.poly(n))));
            }
        }
    } else {
        let seq = expand_product(spec, top)?;
        for n in 0..=top {
            let e: ZPolynomial = coefficient_by_enumeration(spec, n)?;
            if &e != seq.poly(n) {
                return Err(Failure::Mismatch(format!("F_{n}: expansion {} vs enumeration {e}", seq.poly(n))));
            }
        }
    }
    if verbose {
        eprintln!("enumeration agrees with the expansion for n <= {top}");
    }
    Ok(())
}

fn hypothesis_notes(report: &mut StabilizationReport, hyp: &HypothesisCheck) {
    for v in &hyp.violations {
        let rule = v.rule.map_or_else(|| "-".to_string(), |r| r.to_string());
        report.notes.push(format!("hypothesis: rule {rule}, j = {}, b = {}, c = {}: {}", v.j, v.b, v.c, v.reason));
    }
}

fn demote(mut report: StabilizationReport, hyp: &HypothesisCheck) -> StabilizationReport {
    if !hyp.satisfied {
        report.status = Certification::EmpiricalOnly;
        hypothesis_notes(&mut report, hyp);
    }
    report
}

fn need(v: Option<i64>, flag: &str, theorem: &str) -> Result<i64, Failure> {
    v.ok_or_else(|| Failure::Input(Error::InvalidParameters(format!("--theorem {theorem} needs --{flag}"))))
}

fn verify(
    source: &SpecSource,
    theorem: Theorem,
    order: usize,
    (m, i, b): (Option<i64>, Option<i64>, Option<i64>),
    check: bool,
    verbose: bool,
) -> Result<StabilizationReport, Failure> {
    let spec_based = matches!(theorem, Theorem::Upper | Theorem::Lower | Theorem::Periodic | Theorem::Laurent);
    let spec = if spec_based { Some(source.load()?) } else { None };
    if let (Some(spec), true) = (&spec, check) {
        oracle_check(spec, order, verbose)?;
    }
    let report = match theorem {
        Theorem::Upper => {
            let spec = spec.expect("spec loaded");
            let hyp = check_hypotheses(&spec, HypothesisKind::UpperTail, order)?;
            let seq = expand_product(&spec, order)?;
            match hyp.m.filter(|_| hyp.satisfied) {
                Some(valid) => {
                    let m = m.unwrap_or(valid);
                    let limit = limiting_sequence(&spec, order)?;
                    let mut report = verify_upper(&seq, m, Some(&limit))?;
                    if m > valid {
                        report.status = Certification::EmpiricalOnly;
                        report.notes.push(format!("m = {m} exceeds the largest valid modulus {valid}"));
                    }
                    report
                }
                None => demote(verify_upper(&seq, m.unwrap_or(2), None)?, &hyp),
            }
        }
        Theorem::Lower => {
            let spec = spec.expect("spec loaded");
            let hyp = check_hypotheses(&spec, HypothesisKind::LowerTail, order)?;
            let seq = expand_product(&spec, order)?;
            let c1 = hyp.c1.unwrap_or(1).max(1) as usize;
            let valid = hyp.m.unwrap_or(1);
            let mut report = demote(verify_lower_shift(&seq, c1, m.unwrap_or(valid)), &hyp);
            if m.is_some_and(|m| m < valid) && hyp.satisfied {
                report.status = Certification::EmpiricalOnly;
                report.notes.push(format!("m below the smallest valid modulus {valid}"));
            }
            report
        }
        Theorem::Periodic => {
            let spec = spec.expect("spec loaded");
            let hyp = check_hypotheses(&spec, HypothesisKind::Periodic, order)?;
            demote(verify_periodic_shift(&expand_product(&spec, order)?), &hyp)
        }
        Theorem::Laurent => verify_two_sided(&expand_laurent_product(&spec.expect("spec loaded"), order)?)?,
        Theorem::SubsumShift => {
            verify_subsum_shift(need(m, "m", "subsum-shift")?, need(i, "i", "subsum-shift")?, order)?
        }
        Theorem::G22 => verify_g22_convolution(order)?,
        Theorem::Prop3 => verify_single_family_props(need(m, "m", "prop3")?, need(b, "b", "prop3")?, order)?,
        Theorem::Pop => verify_pop_stabilization(order)?,
    };
    Ok(report)
}

fn execute(cli: &Cli) -> Result<Finished, Failure> {
    let verbose = cli.verbose > 0;
    let started = std::time::Instant::now();
    let finished = match &cli.command {
        Command::Expand { source, order, format, check, sink } => {
            let spec = source.load()?;
            if *check {
                oracle_check(&spec, *order, verbose)?;
            }
            let text = if spec.laurent {
                let seq = expand_laurent_product(&spec, *order)?;
                match format {
                    Format::Json => output::laurent_json(&seq),
                    Format::Csv => output::laurent_csv(&seq),
                }
            } else {
                let seq = expand_product(&spec, *order)?;
                match format {
                    Format::Json => output::sequence_json(&seq),
                    Format::Csv => output::sequence_csv(&seq),
                }
            };
            Finished::ok(text, sink)
        }
        Command::Verify { source, theorem, order, m, i, b, check, sink } => {
            let report = verify(source, *theorem, *order, (*m, *i, *b), *check, verbose)?;
            if verbose {
                eprintln!("verified in {:.3}s", started.elapsed().as_secs_f64());
            }
            let status = if report.status == Certification::EmpiricalOnly {
                Err(Failure::Hypothesis("report is empirical only".into()))
            } else if !report.all_hold() {
                Err(Failure::Violation)
            } else {
                Ok(())
            };
            Finished { text: report.to_json(), output: sink.output.clone(), status }
        }
        Command::Limit { source, kmax, format, sink } => {
            let spec = source.load()?;
            let hyp = check_hypotheses(&spec, HypothesisKind::UpperTail, (*kmax).max(1))?;
            if !hyp.satisfied {
                let why = hyp.violations.first().map_or_else(String::new, |v| v.reason.clone());
                return Err(Failure::Hypothesis(why));
            }
            let limit = limiting_sequence(&spec, *kmax)?;
            let text = match format {
                Format::Json => output::limit_json(&spec.label(), &limit),
                Format::Csv => output::limit_csv(&limit),
            };
            Finished::ok(text, sink)
        }
        Command::Table { family: Family::Subsums, m, i, order, format, sink } => {
            let table = lambda_table(*m, *i, *order)?;
            let text = match format {
                Format::Csv => output::lambda_csv(&table),
                Format::Json => {
                    let spec = ProductSpec::preset(&format!("subsums({m},{i})"))?;
                    output::sequence_json(&PolynomialSequence::new(Some(spec), table.rows().to_vec()))
                }
            };
            Finished::ok(text, sink)
        }
        Command::FastTail { source, n, ell } => {
            let spec = source.load()?;
            let value = fast_tail_coefficient(&spec, *n, *ell)?;
            if verbose {
                eprintln!("computed in {:.6}s", started.elapsed().as_secs_f64());
            }
            Finished { text: value.to_string(), output: None, status: Ok(()) }
        }
        Command::Bench { source, n, ell, full_n, no_full, no_windowed, repeats, sink } => {
            let spec = source.load()?;
            let opts =
                BenchOptions { windowed: !no_windowed, full_n: (!no_full).then_some(*full_n), repeats: *repeats };
            let report = bench_tail(&spec, *n, *ell, opts)?;
            let status = if report.agree {
                Ok(())
            } else {
                Err(Failure::Mismatch("fast path and comparison values differ".into()))
            };
            Finished { text: report.to_json(), output: sink.output.clone(), status }
        }
    };
    Ok(finished)
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match execute(&cli).and_then(Finished::emit) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Violation => eprintln!("error: identity violated inside the guaranteed range"),
                Failure::Input(e) => eprintln!("error: {e}"),
                Failure::Hypothesis(why) => eprintln!("hypotheses not satisfied: {why}"),
                Failure::Mismatch(why) => eprintln!("internal disagreement: {why}"),
                Failure::Other(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Finished, Failure> {
        let argv = std::iter::once("partstab").chain(args.iter().copied());
        execute(&Cli::try_parse_from(argv).expect("arguments parse"))
    }

    fn code(r: &Result<Finished, Failure>) -> u8 {
        match r {
            Ok(f) => f.status.as_ref().map_or_else(Failure::code, |_| 0),
            Err(f) => f.code(),
        }
    }

    fn text(args: &[&str]) -> String {
        let f = run(args).expect("command runs");
        assert!(f.status.is_ok(), "{args:?}: {:?}", f.status);
        f.text
    }

    fn write_temp(name: &str, body: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!("partstab-{}-{name}", std::process::id()));
        fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn expand_json_and_csv() {
        let v: serde_json::Value =
            serde_json::from_str(&text(&["expand", "--preset", "partitions", "--order", "5"])).unwrap();
        assert_eq!(v["order"], 5);
        assert_eq!(v["polys"][5]["coeffs"], serde_json::json!(["0", "1", "2", "2", "1", "1"]));
        let csv = text(&["expand", "--preset", "partitions", "--order", "3", "--format", "csv"]);
        assert_eq!(csv, "n,k,value\n0,0,1\n1,0,0\n1,1,1\n2,0,0\n2,1,1\n2,2,1\n3,0,0\n3,1,1\n3,2,1\n3,3,1\n");
    }

    #[test]
    fn expand_is_deterministic() {
        for preset in ["crank", "subsums(3,2)", "plane_overpartitions"] {
            let args = ["expand", "--preset", preset, "--order", "18"];
            assert_eq!(text(&args), text(&args), "{preset}");
        }
    }

    #[test]
    fn expand_check_passes_on_presets() {
        for preset in ["partitions", "dt", "crank", "subsums(2,2)"] {
            let r = run(&["expand", "--preset", preset, "--order", "12", "--check"]);
            assert_eq!(code(&r), 0, "{preset}");
        }
    }

    #[test]
    fn expand_from_spec_file() {
        let spec = ProductSpec::preset("no_ones").unwrap();
        let path = write_temp("spec.json", &spec.to_json());
        let from_file = text(&["expand", "--spec", path.to_str().unwrap(), "--order", "10"]);
        let from_preset = text(&["expand", "--preset", "no_ones", "--order", "10"]);
        assert_eq!(from_file, from_preset);
        fs::remove_file(path).unwrap();
    }

    #[test]
    fn output_flag_names_the_sink() {
        let path = std::env::temp_dir().join(format!("partstab-{}-out.csv", std::process::id()));
        let f = run(&[
            "table",
            "--family",
            "subsums",
            "--m",
            "2",
            "--i",
            "2",
            "--order",
            "4",
            "-o",
            path.to_str().unwrap(),
        ])
        .unwrap();
        f.emit().unwrap();
        let body = fs::read_to_string(&path).unwrap();
        assert!(body.starts_with("n,k,value\n0,0,1\n"));
        assert!(body.ends_with("4,2,2\n"));
        fs::remove_file(path).unwrap();
    }

    #[test]
    fn bad_input_exits_two() {
        assert_eq!(code(&run(&["expand", "--preset", "nope", "--order", "3"])), 2);
        assert_eq!(code(&run(&["expand", "--order", "3"])), 2);
        let path = write_temp("bad.json", r#"{"rules": [{"a": "1", "b": "j +", "c": "j", "sign": -1}]}"#);
        assert_eq!(code(&run(&["expand", "--spec", path.to_str().unwrap(), "--order", "3"])), 2);
        fs::remove_file(path).unwrap();
        // ell beyond n / m
        assert_eq!(code(&run(&["fast-tail", "--preset", "partitions", "--n", "10", "--ell", "6"])), 2);
        assert_eq!(code(&run(&["verify", "--theorem", "prop3", "--order", "20"])), 2);
    }

    #[test]
    fn missing_file_exits_one() {
        assert_eq!(code(&run(&["expand", "--spec", "/nonexistent/spec.json", "--order", "3"])), 1);
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(code(&run(&["verify", "--preset", "partitions", "--theorem", "upper", "--order", "40"])), 0);
        assert_eq!(code(&run(&["verify", "--preset", "crank", "--theorem", "laurent", "--order", "30"])), 0);
        assert_eq!(code(&run(&["verify", "--preset", "no_ones", "--theorem", "periodic", "--order", "40"])), 0);
        assert_eq!(code(&run(&["verify", "--theorem", "g22", "--order", "30"])), 0);
        assert_eq!(code(&run(&["verify", "--theorem", "pop", "--order", "24"])), 0);
        // outside the proven range: reported, but empirical only
        assert_eq!(code(&run(&["verify", "--theorem", "subsum-shift", "--m", "2", "--i", "2", "--order", "30"])), 3);
        // part (1) of the single-family statement fails for b >= 2
        assert_eq!(code(&run(&["verify", "--theorem", "prop3", "--m", "3", "--b", "2", "--order", "30"])), 1);
        assert_eq!(code(&run(&["verify", "--theorem", "prop3", "--m", "3", "--b", "1", "--order", "30"])), 0);
    }

    #[test]
    fn verify_upper_on_unsuitable_spec_is_empirical() {
        let r = run(&["verify", "--preset", "crank", "--theorem", "upper", "--order", "20"]);
        assert!(matches!(code(&r), 2 | 3), "{r:?}");
        let path = write_temp("double.json", r#"{"rules": [{"a": "2", "b": "j", "c": "j", "sign": -1}]}"#);
        let r = run(&["verify", "--spec", path.to_str().unwrap(), "--theorem", "upper", "--order", "20"]);
        fs::remove_file(path).unwrap();
        assert_eq!(code(&r), 3);
        let v: serde_json::Value = serde_json::from_str(&r.unwrap().text).unwrap();
        assert_eq!(v["status"], "empirical-only");
    }

    #[test]
    fn report_fields() {
        let v: serde_json::Value =
            serde_json::from_str(&text(&["verify", "--preset", "partitions", "--theorem", "upper", "--order", "30"]))
                .unwrap();
        assert_eq!(v["kind"], "upper");
        assert_eq!(v["m"], 2);
        assert_eq!(v["identity_holds"], true);
        assert_eq!(v["status"], "certified");
    }

    #[test]
    fn limit_output() {
        let v: serde_json::Value =
            serde_json::from_str(&text(&["limit", "--preset", "partitions", "--kmax", "6"])).unwrap();
        assert_eq!(v["coeffs"], serde_json::json!(["1", "1", "2", "3", "5", "7", "11"]));
        assert_eq!(
            text(&["limit", "--preset", "partitions", "--kmax", "2", "--format", "csv"]),
            "k,value\n0,1\n1,1\n2,2\n"
        );
        assert_eq!(code(&run(&["limit", "--preset", "crank", "--kmax", "4"])), 3);
    }

    #[test]
    fn fast_tail_values() {
        assert_eq!(text(&["fast-tail", "--preset", "partitions", "--n", "1000000", "--ell", "0"]), "1");
        assert_eq!(text(&["fast-tail", "--preset", "partitions", "--n", "1000", "--ell", "50"]), "204226");
    }

    #[test]
    fn small_bench_agrees() {
        let v: serde_json::Value = serde_json::from_str(&text(&[
            "bench",
            "--preset",
            "partitions",
            "--n",
            "400",
            "--ell",
            "12",
            "--full-n",
            "80",
            "--repeats",
            "1",
        ]))
        .unwrap();
        assert_eq!(v["agree"], true);
        assert_eq!(v["fast"]["value"], "77");
        assert_eq!(v["full"]["n"], 80);
    }
}
