//! Command line driver: one subcommand per experiment, flags validated
//! before execution, a JSON result record (or a CSV table) on stdout or
//! `--out`. Exit codes: 0 success, 2 validation error, 3 numerical abort.
//!
//! Every record echoes the seed and parameters; re-running an identical
//! configuration reproduces the mean field bit-for-bit at any thread count
//! (all reductions are chunked in fixed order).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use curvestat::bargmann_fock::{
    bf_area_band, bf_truncation_degree, bf_zero_samples, f0_reference, prop1_event_probability,
    BallRegion, WORKING_RADIUS,
};
use curvestat::bergman::{kernel_convergence, rate_fit};
use curvestat::crofton::{
    curvature_histogram, expected_kappa_curves_scan, gauss_bonnet_scan, sample_curve_points,
    tail_bound_check, CurvatureSample,
};
use curvestat::curvature::{phi_mc, CurvatureBand, PhiParams};
use curvestat::error::Error;
use curvestat::inflection::inflection_count;
use curvestat::poly::{read_poly, sample_kostlan, HomPoly3};
use curvestat::rng::RngStream;
use curvestat::stats::MeanAcc;
use curvestat::Result;

#[derive(Parser)]
#[command(name = "curvestat", version, about = "Curvature statistics of random complex plane curves")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Root seed for every random stream of the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the chunked reductions (results do not depend on it).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// json: result record; csv: table (where the command produces one).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Curve input: a polynomial JSON file instead of a random draw
    /// (gauss-bonnet and inflections only).
    #[arg(long, global = true)]
    poly: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimate of the limit constant phi_{r,R}.
    Phi(PhiArgs),
    /// Ensemble mean fraction of curve area with curvature in
    /// [2 pi - R d, 2 pi - r d].
    #[command(name = "expected-kappa")]
    ExpectedKappa(ExpectedKappaArgs),
    /// Curvature histogram over random degree-d curves.
    #[command(name = "curvature-hist")]
    CurvatureHist(HistArgs),
    /// Total curvature of one curve against 2 pi (2 - (d-1)(d-2)).
    #[command(name = "gauss-bonnet")]
    GaussBonnet(GaussBonnetArgs),
    /// Inflection point counts of random degree-d curves.
    Inflections(InflectionsArgs),
    /// Markov bound check: P(kappa > eta) <= phi_{r,R} / eta.
    #[command(name = "tail-bound")]
    TailBound(TailBoundArgs),
    /// Probability that the flat-curvature band captures more than a
    /// threshold fraction of the local zero-set area.
    #[command(name = "bf-event")]
    BfEvent(BfEventArgs),
    /// Deterministic area/curvature oracle on the reference function
    /// z w - 1/4.
    #[command(name = "lemma-f0")]
    LemmaF0(LemmaF0Args),
    /// Convergence rate of the rescaled degree-d kernel to its flat limit.
    Bergman(BergmanArgs),
}

#[derive(Args)]
struct PhiArgs {
    /// Lower band parameter (0 < r < R).
    #[arg(long)]
    r: f64,
    /// Upper band parameter.
    #[arg(long = "R")]
    big_r: f64,
    /// Monte Carlo draws (scientific notation accepted, e.g. 1e6).
    #[arg(long, value_parser = parse_count)]
    n: u64,
}

#[derive(Args)]
struct ExpectedKappaArgs {
    /// Curve degree.
    #[arg(long)]
    d: u32,
    /// Lower band parameter (0 < r < R).
    #[arg(long)]
    r: f64,
    /// Upper band parameter.
    #[arg(long = "R")]
    big_r: f64,
    /// Number of random curves.
    #[arg(long, value_parser = parse_count)]
    curves: u64,
    /// Random lines per curve.
    #[arg(long, value_parser = parse_count)]
    lines: u64,
}

#[derive(Args)]
struct HistArgs {
    /// Curve degree.
    #[arg(long)]
    d: u32,
    /// Number of random curves.
    #[arg(long, value_parser = parse_count)]
    curves: u64,
    /// Random lines per curve.
    #[arg(long, value_parser = parse_count)]
    lines: u64,
    /// Number of equal-width bins between lo and hi.
    #[arg(long, default_value_t = 32)]
    bins: u32,
    /// Lowest bin edge (curvatures below land in an underflow row).
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    /// Highest bin edge, at most 2 pi.
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
}

#[derive(Args)]
struct GaussBonnetArgs {
    /// Curve degree for a random draw (omit when --poly is given).
    #[arg(long)]
    d: Option<u32>,
    /// Random lines.
    #[arg(long, value_parser = parse_count)]
    lines: u64,
}

#[derive(Args)]
struct InflectionsArgs {
    /// Curve degree for random draws (omit when --poly is given).
    #[arg(long)]
    d: Option<u32>,
    /// Number of random curves.
    #[arg(long, value_parser = parse_count, default_value = "1")]
    curves: u64,
    /// Clustering tolerance for coincident roots.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct TailBoundArgs {
    /// Curve degree.
    #[arg(long)]
    d: u32,
    /// Lower band parameter (0 < r < R).
    #[arg(long)]
    r: f64,
    /// Upper band parameter.
    #[arg(long = "R")]
    big_r: f64,
    /// Concentration threshold eta in (0, 1).
    #[arg(long)]
    eta: f64,
    /// Number of random curves.
    #[arg(long, value_parser = parse_count)]
    curves: u64,
    /// Random lines per curve.
    #[arg(long, value_parser = parse_count)]
    lines: u64,
}

#[derive(Args)]
struct BfEventArgs {
    /// Number of random field draws.
    #[arg(long, value_parser = parse_count)]
    n: u64,
    /// Lower edge of the flat-curvature band.
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    /// Upper edge of the flat-curvature band.
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
    /// Area fraction the band must exceed for the event to hold.
    #[arg(long)]
    threshold: f64,
    /// Covariance error tolerance deciding the truncation degree.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct LemmaF0Args {
    /// Radial grid resolution of the quadrature.
    #[arg(long, value_parser = parse_count, default_value = "512")]
    grid: u64,
    /// Radius of the sampled ball (the unit ball carries the exact
    /// pi sqrt(3) area oracle).
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Lower edge of the flat-curvature band.
    #[arg(long, default_value_t = -2.0 - 1e-6, allow_hyphen_values = true)]
    lo: f64,
    /// Upper edge of the flat-curvature band.
    #[arg(long, default_value_t = -0.25 + 1e-6, allow_hyphen_values = true)]
    hi: f64,
}

#[derive(Args)]
struct BergmanArgs {
    /// Comma-separated strictly increasing degrees.
    #[arg(long = "d-list", default_value = "64,128,256,512")]
    d_list: String,
    /// Random point pairs in the unit ball.
    #[arg(long, value_parser = parse_count, default_value = "1000")]
    pairs: u64,
    /// Derivative order of the comparison (0, 1, or 2).
    #[arg(long, default_value_t = 0)]
    k: u32,
}

/// Count parser accepting plain integers and scientific notation ("2e5").
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 9.0e15) {
        return Err(format!("`{s}` is not a whole nonnegative count"));
    }
    Ok(v as u64)
}

#[derive(Serialize)]
struct ResultRecord {
    command: &'static str,
    params: Value,
    mean: f64,
    stderr: f64,
    n: u64,
    n_discarded: u64,
    elapsed_ms: u64,
    seed: u64,
    artifact_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

fn validate(cli: &Cli) -> Vec<String> {
    let mut v = Vec::new();
    let g = &cli.global;
    if g.threads == 0 {
        v.push("threads must be at least 1".into());
    }
    let poly_allowed = matches!(cli.command, Command::GaussBonnet(_) | Command::Inflections(_));
    if g.poly.is_some() && !poly_allowed {
        v.push("--poly is only used by gauss-bonnet and inflections".into());
    }
    let csv_allowed = matches!(
        cli.command,
        Command::CurvatureHist(_)
            | Command::GaussBonnet(_)
            | Command::Inflections(_)
            | Command::LemmaF0(_)
            | Command::Bergman(_)
    );
    if g.format == Format::Csv && !csv_allowed {
        v.push("format csv is not available for this command; the result is a single record".into());
    }
    let check_band = |v: &mut Vec<String>, r: f64, big_r: f64| {
        if !(r > 0.0) {
            v.push("r must be positive".into());
        }
        if !(r < big_r) {
            v.push("r must be < R".into());
        }
    };
    match &cli.command {
        Command::Phi(a) => {
            check_band(&mut v, a.r, a.big_r);
            if a.n == 0 {
                v.push("n must be at least 1".into());
            }
        }
        Command::ExpectedKappa(a) => {
            if a.d == 0 {
                v.push("d must be at least 1".into());
            }
            check_band(&mut v, a.r, a.big_r);
            if a.curves == 0 {
                v.push("curves must be at least 1".into());
            }
            if a.lines == 0 {
                v.push("lines must be at least 1".into());
            }
        }
        Command::CurvatureHist(a) => {
            if a.d == 0 {
                v.push("d must be at least 1".into());
            }
            if a.curves == 0 {
                v.push("curves must be at least 1".into());
            }
            if a.lines == 0 {
                v.push("lines must be at least 1".into());
            }
            if a.bins == 0 {
                v.push("bins must be at least 1".into());
            }
            if !(a.lo < a.hi) {
                v.push("lo must be < hi".into());
            }
            if a.hi > 2.0 * std::f64::consts::PI {
                v.push("hi must be at most 2 pi (the structural curvature bound)".into());
            }
        }
        Command::GaussBonnet(a) => {
            match (&a.d, &g.poly) {
                (None, None) => v.push("one of --d and --poly is required".into()),
                (Some(_), Some(_)) => v.push("--d conflicts with --poly; give one".into()),
                (Some(0), None) => v.push("d must be at least 1".into()),
                _ => {}
            }
            if a.lines == 0 {
                v.push("lines must be at least 1".into());
            }
        }
        Command::Inflections(a) => {
            match (&a.d, &g.poly) {
                (None, None) => v.push("one of --d and --poly is required".into()),
                (Some(_), Some(_)) => v.push("--d conflicts with --poly; give one".into()),
                (Some(d), None) if !(2..=6).contains(d) => {
                    v.push("d must be between 2 and 6".into());
                }
                _ => {}
            }
            if a.curves == 0 {
                v.push("curves must be at least 1".into());
            }
            if !(a.tol > 0.0 && a.tol < 0.1) {
                v.push("tol must lie in (0, 0.1)".into());
            }
        }
        Command::TailBound(a) => {
            if a.d == 0 {
                v.push("d must be at least 1".into());
            }
            check_band(&mut v, a.r, a.big_r);
            if !(a.eta > 0.0 && a.eta < 1.0) {
                v.push("eta must lie in (0, 1)".into());
            }
            if a.curves == 0 {
                v.push("curves must be at least 1".into());
            }
            if a.lines == 0 {
                v.push("lines must be at least 1".into());
            }
        }
        Command::BfEvent(a) => {
            if a.n == 0 {
                v.push("n must be at least 1".into());
            }
            if !(a.lo < a.hi) {
                v.push("lo must be < hi".into());
            }
            if !(a.threshold > 0.0 && a.threshold < 1.0) {
                v.push("threshold must lie in (0, 1)".into());
            }
            if !(a.tol > 0.0 && a.tol.is_finite()) {
                v.push("tol must be positive and finite".into());
            }
        }
        Command::LemmaF0(a) => {
            if a.grid < 8 {
                v.push("grid must be at least 8".into());
            }
            if !(a.radius > 0.0 && a.radius.is_finite()) {
                v.push("radius must be positive and finite".into());
            }
            if !(a.lo < a.hi) {
                v.push("lo must be < hi".into());
            }
        }
        Command::Bergman(a) => {
            match parse_d_list(&a.d_list) {
                Ok(ds) => {
                    if ds.is_empty() || ds[0] == 0 || !ds.windows(2).all(|p| p[0] < p[1]) {
                        v.push(
                            "d-list must be a nonempty, strictly increasing list of degrees"
                                .into(),
                        );
                    }
                }
                Err(msg) => v.push(format!("d-list: {msg}")),
            }
            if a.pairs == 0 {
                v.push("pairs must be at least 1".into());
            }
            if a.k > 2 {
                v.push("k must be 0, 1, or 2".into());
            }
        }
    }
    v
}

fn parse_d_list(s: &str) -> std::result::Result<Vec<u32>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("`{t}` is not a degree")))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let violations = validate(&cli);
    if !violations.is_empty() {
        for msg in &violations {
            eprintln!("error: {msg}");
        }
        return ExitCode::from(2);
    }
    // Chunked reductions make results independent of the pool size.
    if rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global().is_err() {
        eprintln!("error: worker pool was already initialized");
        return ExitCode::from(3);
    }
    match run(&cli) {
        Ok(output) => match write_output(&cli.global.out, &output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::MalformedInput(_) | Error::Io(_) | Error::Json(_) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let g = &cli.global;
    let start = Instant::now();
    let root = RngStream::root(g.seed);
    let record = |command: &'static str, params: Value, mean: f64, stderr: f64, n: u64, n_discarded: u64, details: Option<Value>| {
        let rec = ResultRecord {
            command,
            params,
            mean,
            stderr,
            n,
            n_discarded,
            elapsed_ms: start.elapsed().as_millis() as u64,
            seed: g.seed,
            artifact_version: env!("CARGO_PKG_VERSION"),
            details,
        };
        let mut s = serde_json::to_string_pretty(&rec).expect("record serializes");
        s.push('\n');
        s
    };

    match &cli.command {
        Command::Phi(a) => {
            let params = PhiParams::new(a.r, a.big_r)?;
            let est = phi_mc(&params, a.n, &root.derive_stream("phi", 0));
            Ok(record(
                "phi",
                json!({"r": a.r, "R": a.big_r, "n": a.n}),
                est.mean,
                est.stderr,
                est.n,
                0,
                None,
            ))
        }
        Command::ExpectedKappa(a) => {
            let band = scaled_band(a.d, a.r, a.big_r)?;
            let (est, _, n_discarded) = expected_kappa_curves_scan(
                a.d,
                &band,
                a.curves,
                a.lines,
                &root.derive_stream("kappa", 0),
            )?;
            Ok(record(
                "expected-kappa",
                json!({"d": a.d, "r": a.r, "R": a.big_r, "curves": a.curves, "lines": a.lines}),
                est.mean,
                est.stderr,
                est.n,
                n_discarded,
                Some(json!({"band_lo": band.lo, "band_hi": band.hi})),
            ))
        }
        Command::CurvatureHist(a) => {
            let edges = linspace(a.lo, a.hi, a.bins);
            let rows =
                curvature_histogram(a.d, a.curves, a.lines, &edges, &root.derive_stream("hist", 0))?;
            let params =
                json!({"d": a.d, "curves": a.curves, "lines": a.lines, "bins": a.bins, "lo": a.lo, "hi": a.hi});
            if g.format == Format::Csv {
                let mut table = String::from("bin_lo,bin_hi,mass,count\n");
                for r in &rows {
                    table.push_str(&format!("{},{},{},{}\n", r.lo, r.hi, r.mass, r.count));
                }
                return Ok(table);
            }
            let in_range: f64 =
                rows.iter().filter(|r| r.lo >= a.lo && r.hi <= a.hi).map(|r| r.mass).sum();
            let n: u64 = rows.iter().map(|r| r.count).sum();
            Ok(record("curvature-hist", params, in_range, f64::NAN, n, 0, None))
        }
        Command::GaussBonnet(a) => {
            let (p, params) = curve_input(a.d, &g.poly, &root)?;
            let lines_stream = root.derive_stream("lines", 0);
            if g.format == Format::Csv {
                let samples = sample_curve_points(&p, a.lines, &lines_stream)?;
                return Ok(sample_table(&samples));
            }
            let (total, target, k_stats, n_discarded) =
                gauss_bonnet_scan(&p, a.lines, &lines_stream)?;
            let mut params = params;
            params["lines"] = json!(a.lines);
            Ok(record(
                "gauss-bonnet",
                params,
                total.mean,
                total.stderr,
                total.n,
                n_discarded,
                Some(json!({"target": target, "max_k": k_stats.max_k})),
            ))
        }
        Command::Inflections(a) => {
            let mut counts: Vec<(u64, usize)> = Vec::new();
            let mut n_failed = 0u64;
            let params;
            match &g.poly {
                Some(path) => {
                    let p = read_poly(path)?;
                    params = json!({"poly": path.display().to_string(), "d": p.degree(), "tol": a.tol});
                    counts.push((0, inflection_count(&p, a.tol)?));
                }
                None => {
                    let d = a.d.expect("validated");
                    params = json!({"d": d, "curves": a.curves, "tol": a.tol});
                    for t in 0..a.curves {
                        let p: HomPoly3<f64> = sample_kostlan(d, &root.derive_stream("poly", t));
                        match inflection_count(&p, a.tol) {
                            Ok(c) => counts.push((t, c)),
                            Err(Error::IllConditioned(_)) => n_failed += 1,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
            if g.format == Format::Csv {
                let mut table = String::from("curve,count\n");
                for (t, c) in &counts {
                    table.push_str(&format!("{t},{c}\n"));
                }
                return Ok(table);
            }
            let mut acc = MeanAcc::default();
            for (_, c) in &counts {
                acc.push(*c as f64);
            }
            let est = acc.estimate(g.seed);
            Ok(record("inflections", params, est.mean, est.stderr, est.n, n_failed, None))
        }
        Command::TailBound(a) => {
            let params = PhiParams::new(a.r, a.big_r)?;
            let (est, bound) = tail_bound_check(
                a.d,
                &params,
                a.curves,
                a.lines,
                a.eta,
                &root.derive_stream("tail", 0),
            )?;
            Ok(record(
                "tail-bound",
                json!({"d": a.d, "r": a.r, "R": a.big_r, "eta": a.eta, "curves": a.curves, "lines": a.lines}),
                est.mean,
                est.stderr,
                est.n,
                0,
                Some(json!({"bound": bound})),
            ))
        }
        Command::BfEvent(a) => {
            let band = CurvatureBand::new(a.lo, a.hi)?;
            let est =
                prop1_event_probability(a.n, &band, a.threshold, a.tol, &root.derive_stream("bf", 0))?;
            let trunc = bf_truncation_degree(WORKING_RADIUS, a.tol)?;
            Ok(record(
                "bf-event",
                json!({"n": a.n, "lo": a.lo, "hi": a.hi, "threshold": a.threshold, "tol": a.tol}),
                est.mean,
                est.stderr,
                est.n,
                0,
                Some(json!({"truncation_degree": trunc})),
            ))
        }
        Command::LemmaF0(a) => {
            let f = f0_reference();
            let region = BallRegion::new(a.radius)?;
            let band = CurvatureBand::new(a.lo, a.hi)?;
            if g.format == Format::Csv {
                let samples = bf_zero_samples(&f, &region, a.grid as usize)?;
                return Ok(bf_sample_table(&samples));
            }
            let report = bf_area_band(&f, &region, &band, a.grid as usize)?;
            Ok(record(
                "lemma-f0",
                json!({"grid": a.grid, "radius": a.radius, "lo": a.lo, "hi": a.hi}),
                report.area_in_band / report.total_area,
                0.0,
                report.n_retained,
                report.n_discarded,
                Some(json!({
                    "area_in_band": report.area_in_band,
                    "total_area": report.total_area,
                    "min_k": report.min_k,
                    "max_k": report.max_k,
                })),
            ))
        }
        Command::Bergman(a) => {
            let ds = parse_d_list(&a.d_list).map_err(Error::MalformedInput)?;
            let comps =
                kernel_convergence(&ds, a.pairs as usize, a.k, &root.derive_stream("bergman", 0))?;
            if g.format == Format::Csv {
                let mut table = String::from("d,sup_err,k\n");
                for c in &comps {
                    table.push_str(&format!("{},{},{}\n", c.d, c.sup_err, c.k));
                }
                return Ok(table);
            }
            let fit = rate_fit(&comps)?;
            let errs: Vec<Value> = comps.iter().map(|c| json!([c.d, c.sup_err])).collect();
            Ok(record(
                "bergman",
                json!({"d_list": ds, "pairs": a.pairs, "k": a.k}),
                fit.slope,
                0.0,
                ds.len() as u64,
                0,
                Some(json!({"residual": fit.residual, "sup_errs": errs})),
            ))
        }
    }
}

/// The curvature band [2 pi - R d, 2 pi - r d] of the band parameters.
fn scaled_band(d: u32, r: f64, big_r: f64) -> Result<CurvatureBand> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let df = d as f64;
    CurvatureBand::new(two_pi - big_r * df, two_pi - r * df)
}

fn linspace(lo: f64, hi: f64, bins: u32) -> Vec<f64> {
    let mut edges: Vec<f64> =
        (0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect();
    *edges.last_mut().expect("bins >= 1") = hi;
    edges
}

fn curve_input(
    d: Option<u32>,
    poly: &Option<PathBuf>,
    root: &RngStream,
) -> Result<(HomPoly3<f64>, Value)> {
    match poly {
        Some(path) => {
            let p = read_poly(Path::new(path))?;
            let params = json!({"poly": path.display().to_string(), "d": p.degree()});
            Ok((p, params))
        }
        None => {
            let d = d.expect("validated");
            let p = sample_kostlan(d, &root.derive_stream("poly", 0));
            Ok((p, json!({"d": d})))
        }
    }
}

fn sample_table(samples: &[CurvatureSample]) -> String {
    let mut table = String::from("re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,K,discarded\n");
    for s in samples {
        let x = s.point.rep();
        table.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            x[0].re, x[0].im, x[1].re, x[1].im, x[2].re, x[2].im, s.k, s.discarded
        ));
    }
    table
}

/// Bargmann-Fock samples in the affine chart: the projective representative
/// of an affine point (z, w) is [1 : z : w].
fn bf_sample_table(samples: &[curvestat::bargmann_fock::BfSample]) -> String {
    let mut table = String::from("re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,K,discarded\n");
    for s in samples {
        table.push_str(&format!(
            "1,0,{},{},{},{},{},{}\n",
            s.z.re, s.z.im, s.w.re, s.w.im, s.k, s.discarded
        ));
    }
    table
}
