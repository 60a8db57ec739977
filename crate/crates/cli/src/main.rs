use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fewdist_core::casecheck::{builtin_catalog, load_catalog_dir, run_case, run_suite, CaseSpec, Suite};
use fewdist_core::census::{count_distinct, CensusMode, CensusResult, PointSet, DEFAULT_MERGE_TOL};
use fewdist_core::classifier::{classify, Classification, DEFAULT_TOL};
use fewdist_core::constructions::{build_point_sets, FewDistanceConfig, FewKind, ALL_KINDS};
use fewdist_core::curves::CurveSpec;
use fewdist_core::derivtest::{derivtest_report, DerivConfig, DerivReport, Family, VANISHING};
use fewdist_core::real::{bits_for_digits, Real};
use fewdist_core::CoreError;
use serde::{Deserialize, Serialize};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "fewdist", version, about = "Distinct distances between points on two curves")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Working precision in decimal digits.
    #[arg(long = "prec", global = true, env = "FEWDIST_PRECISION", default_value_t = 60,
          value_parser = clap::value_parser!(u32).range(30..))]
    precision_digits: u32,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Derivative test on a curve pair.
    Derivtest {
        #[arg(long)]
        config: PathBuf,
        /// Coefficient `a,b` of `s^a t^b` to report; repeatable.
        #[arg(long = "coeff", value_parser = parse_coeff)]
        coeffs: Vec<(u32, u32)>,
        /// Number of random finite-difference cross-checks.
        #[arg(long, default_value_t = 0)]
        crosscheck: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Few-distance point sets of a given kind.
    Construct {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Construction parameter `key=value`; repeatable.
        #[arg(long = "params", value_parser = parse_param, num_args = 1..)]
        params: Vec<(String, String)>,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count distinct distances between the two point sets of a points file.
    Census {
        /// Points file; standard input when absent or `-`.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Clustered)]
        mode: Mode,
        /// Relative merge tolerance.
        #[arg(long, default_value_t = DEFAULT_MERGE_TOL)]
        tol: f64,
        /// Also write the histogram as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two curves form a few-distance configuration.
    Classify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the polynomial case analysis.
    Casecheck {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        /// Run a single case.
        #[arg(long)]
        case: Option<String>,
        /// Directory of case files replacing the built-in catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Include per-case timings (makes the output nondeterministic).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Case analysis, vanishing families and construction bounds in one report.
    Report {
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Clustered,
}

fn parse_coeff(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or("expected `key=value`")?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A check did not hold: exit 1.
    Verification(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        match e {
            CoreError::InvalidConfig(_)
            | CoreError::UnsupportedKind(_)
            | CoreError::Io(_)
            | CoreError::Json(_)
            | CoreError::Exact(_)
            | CoreError::SharedCurveVariable => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_text(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T, Failure> {
    let text = read_text(path)?;
    let name = path.map_or("stdin".into(), |p| p.display().to_string());
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{name}: {e}")))
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn emit<T: Serialize>(body: T, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&Versioned { schema_version: SCHEMA_VERSION, body })
        .map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn derivtest(run: &RunConfig, config: &Path, coeffs: &[(u32, u32)], crosscheck: usize, out: Option<&Path>) -> Outcome {
    let cfg: DerivConfig = read_json(Some(config))?;
    let report: DerivReport = derivtest_report(&cfg, coeffs, crosscheck, run.seed)?;
    emit(&report, out)?;
    Ok(true)
}

#[derive(Serialize, Deserialize)]
struct PointsFile {
    #[serde(default)]
    kind: Option<FewKind>,
    #[serde(default)]
    config: Option<FewDistanceConfig>,
    #[serde(default)]
    m: usize,
    #[serde(default)]
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    predicted_distinct: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
    #[serde(default)]
    crosses_turning_point: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    curves: Vec<CurveSpec>,
    points1: Vec<[String; 3]>,
    points2: Vec<[String; 3]>,
}

fn construct_config(
    run: &RunConfig,
    kind: &str,
    params: &[(String, String)],
    epsilon: Option<&str>,
) -> Result<FewDistanceConfig, CoreError> {
    let mut cfg = FewDistanceConfig::new(kind.parse()?);
    for (k, v) in params {
        cfg = cfg.with(k, v)?;
    }
    cfg.epsilon = epsilon.map(str::to_string);
    cfg.precision_digits = run.precision_digits;
    Ok(cfg)
}

fn construct(
    run: &RunConfig,
    kind: &str,
    m: usize,
    n: usize,
    params: &[(String, String)],
    epsilon: Option<&str>,
    out: Option<&Path>,
) -> Outcome {
    let cfg = construct_config(run, kind, params, epsilon)?;
    let built = build_point_sets(&cfg, m, n)?;
    let digits = run.precision_digits;
    let file = PointsFile {
        kind: Some(cfg.kind),
        config: Some(cfg),
        m,
        n,
        predicted_distinct: Some(built.predicted_distinct),
        epsilon: Some(built.epsilon.to_decimal(digits)),
        crosses_turning_point: built.crosses_turning_point,
        max_residual: Some(built.max_residual.to_f64()),
        curves: vec![built.curves.0.to_spec(digits), built.curves.1.to_spec(digits)],
        points1: built.p1.to_strings(digits),
        points2: built.p2.to_strings(digits),
    };
    emit(&file, out)?;
    Ok(true)
}

fn real_points(points: &[[String; 3]], bits: usize) -> Result<PointSet, CoreError> {
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        out.push([Real::parse(&p[0], bits)?, Real::parse(&p[1], bits)?, Real::parse(&p[2], bits)?]);
    }
    Ok(PointSet::from_reals(out))
}

#[derive(Serialize)]
struct CensusOutput {
    #[serde(flatten)]
    result: CensusResult,
    pairs: usize,
    quadruple_count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_distinct: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    within_bound: Option<bool>,
}

fn census(
    run: &RunConfig,
    points: Option<&Path>,
    mode: Mode,
    tol: f64,
    csv: Option<&Path>,
    out: Option<&Path>,
) -> Outcome {
    let file: PointsFile = read_json(points)?;
    let bits = bits_for_digits(run.precision_digits);
    let (p1, p2, mode) = match mode {
        Mode::Exact => (
            PointSet::from_strings(&file.points1, bits)?,
            PointSet::from_strings(&file.points2, bits)?,
            CensusMode::Exact,
        ),
        Mode::Clustered => (
            real_points(&file.points1, bits)?,
            real_points(&file.points2, bits)?,
            CensusMode::Clustered { precision_digits: run.precision_digits, merge_tolerance: tol },
        ),
    };
    let result = count_distinct(&p1, &p2, mode)?;
    if let Some(path) = csv {
        write_text(&result.to_csv()?, Some(path))?;
    }
    let within_bound = file.predicted_distinct.map(|p| result.distinct_count <= p);
    let output = CensusOutput {
        pairs: result.pairs(),
        quadruple_count: result.quadruple_count().to_string(),
        predicted_distinct: file.predicted_distinct,
        within_bound,
        result,
    };
    emit(&output, out)?;
    Ok(within_bound != Some(false))
}

fn classify_cmd(a: &Path, b: &Path, tol: f64, out: Option<&Path>) -> Outcome {
    if !(tol >= 0.0) {
        return Err(Failure::Usage("tolerance must be nonnegative".into()));
    }
    let c1: CurveSpec = read_json(Some(a))?;
    let c2: CurveSpec = read_json(Some(b))?;
    let c: Classification = classify(&c1, &c2, tol)?;
    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(flatten)]
        c: &'a Classification,
        #[serde(skip_serializing_if = "Option::is_none")]
        construction: Option<FewDistanceConfig>,
    }
    emit(Out { construction: c.to_config(), c: &c }, out)?;
    Ok(true)
}

fn catalog(dir: Option<&Path>) -> Result<Vec<CaseSpec>, Failure> {
    match dir {
        Some(d) => Ok(load_catalog_dir(d)?),
        None => Ok(builtin_catalog()),
    }
}

fn casecheck(suite: Suite, case: Option<&str>, dir: Option<&Path>, timings: bool, out: Option<&Path>) -> Outcome {
    let catalog = catalog(dir)?;
    if let Some(id) = case {
        let spec = catalog
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Failure::Usage(format!("no case `{id}`")))?;
        let mut report = run_case(spec)?;
        if !timings {
            report.elapsed_ms = None;
        }
        let pass = report.passed();
        emit(&report, out)?;
        return Ok(pass);
    }
    let mut summary = run_suite(suite, &catalog);
    if !timings {
        for c in &mut summary.cases {
            c.elapsed_ms = None;
        }
    }
    let pass = summary.all_pass();
    emit(&summary, out)?;
    Ok(pass)
}

#[derive(Serialize)]
struct SuiteLine {
    suite: String,
    total: usize,
    passed: usize,
    failed: Vec<String>,
}

#[derive(Serialize)]
struct FamilyLine {
    family: Family,
    rho_n_zero: bool,
    rho_n_terms: usize,
}

#[derive(Serialize)]
struct ConstructionLine {
    kind: FewKind,
    predicted: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    actual: Option<usize>,
    within_bound: bool,
    crosses_turning_point: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct Report {
    pass: bool,
    casecheck: Vec<SuiteLine>,
    derivtest: Vec<FamilyLine>,
    constructions: Vec<ConstructionLine>,
}

fn report(run: &RunConfig, m: usize, n: usize, out: Option<&Path>) -> Outcome {
    let catalog = builtin_catalog();
    let casecheck: Vec<SuiteLine> = [Suite::A, Suite::C]
        .into_iter()
        .map(|s| {
            let r = run_suite(s, &catalog);
            SuiteLine { suite: r.suite, total: r.total, passed: r.passed, failed: r.failed }
        })
        .collect();
    let mut derivtest = Vec::new();
    for family in VANISHING {
        let r = derivtest_report(&DerivConfig::Family { family }, &[], 0, run.seed)?;
        derivtest.push(FamilyLine { family, rho_n_zero: r.rho_n_zero, rho_n_terms: r.rho_n_terms });
    }
    let mode = CensusMode::Clustered { precision_digits: run.precision_digits, merge_tolerance: DEFAULT_MERGE_TOL };
    let constructions: Vec<ConstructionLine> = ALL_KINDS
        .into_iter()
        .map(|kind| {
            let mut cfg = FewDistanceConfig::new(kind);
            cfg.precision_digits = run.precision_digits;
            let line = |actual, crosses, error| ConstructionLine {
                kind,
                predicted: m + n - 1,
                actual,
                within_bound: actual.is_some_and(|a| a <= m + n - 1),
                crosses_turning_point: crosses,
                error,
            };
            match build_point_sets(&cfg, m, n) {
                Ok(b) => match count_distinct(&b.p1, &b.p2, mode) {
                    Ok(c) => line(Some(c.distinct_count), b.crosses_turning_point, None),
                    Err(e) => line(None, b.crosses_turning_point, Some(e.to_string())),
                },
                Err(e) => line(None, false, Some(e.to_string())),
            }
        })
        .collect();
    let pass = casecheck.iter().all(|s| s.failed.is_empty())
        && derivtest.iter().all(|f| f.rho_n_zero)
        && constructions.iter().all(|c| c.within_bound);
    emit(Report { pass, casecheck, derivtest, constructions }, out)?;
    Ok(pass)
}

fn dispatch(cli: Cli) -> Outcome {
    let run = &cli.run;
    if run.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(run.threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Derivtest { config, coeffs, crosscheck, out } => {
            derivtest(run, config, coeffs, *crosscheck, out.as_deref())
        }
        Command::Construct { kind, m, n, params, epsilon, out } => {
            construct(run, kind, *m, *n, params, epsilon.as_deref(), out.as_deref())
        }
        Command::Census { points, mode, tol, csv, out } => {
            census(run, points.as_deref(), *mode, *tol, csv.as_deref(), out.as_deref())
        }
        Command::Classify { a, b, tol, out } => classify_cmd(a, b, *tol, out.as_deref()),
        Command::Casecheck { suite, case, catalog, timings, out } => {
            casecheck(*suite, case.as_deref(), catalog.as_deref(), *timings, out.as_deref())
        }
        Command::Report { m, n, out } => report(run, *m, *n, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("fewdist: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("fewdist: {msg}");
            ExitCode::from(2)
        }
    }
}
