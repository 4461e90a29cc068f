use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use cusptaylor::acceptance::{self, AcceptanceConfig, Status};
use cusptaylor::cmdata::{all_specs, chowla_selberg, registry};
use cusptaylor::exactalg::{QuadElt, QuadRat};
use cusptaylor::numerics::{coeff_via_cm_exact, coeff_via_derivatives, coeff_via_theorem41, SeriesContext};
use cusptaylor::periodicity::{self, Budget, Verdict};
use cusptaylor::petersson::{self, TruncationPolicy};
use cusptaylor::zerofinder::{self, SearchRegion};
use cusptaylor::Error;

#[derive(Parser, Serialize)]
#[command(name = "cusptaylor", version, about = "Taylor coefficients of Delta at points of the upper half-plane")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report wall-clock times (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    /// Step limit for periodicity searches.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    max_steps: u64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Registry of CM points with exact constants and periods.
    Table,
    /// c_z(Delta, m) by one or all routes.
    Coeff(CoeffArgs),
    /// Non-vanishing certificate for (D, l).
    Certify(CertifyArgs),
    /// Period data and the Psi map for (D, l).
    Period(PairArgs),
    /// Residue criterion over primes up to lmax.
    ScanResidue(ScanArgs),
    /// Zeros of E_m in the fundamental domain.
    Zeros(ZerosArgs),
    /// Numeric check of a Poincare series identity.
    AvgCheck(AvgArgs),
    /// Full acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Serialize)]
struct CoeffArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    m: u32,
    #[arg(long, value_enum, default_value_t = Route::All)]
    route: Route,
    /// CM point for the exact route; also fixes the point when x, y are omitted.
    #[arg(long, allow_hyphen_values = true)]
    disc: Option<i64>,
    #[arg(long, default_value_t = 25)]
    terms: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Route {
    All,
    Theorem,
    Derivative,
    Cm,
}

#[derive(Args, Serialize)]
struct PairArgs {
    #[arg(long, allow_hyphen_values = true)]
    disc: i64,
    #[arg(long)]
    prime: u32,
}

#[derive(Args, Serialize)]
struct CertifyArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum)]
    expect: Option<Expect>,
    /// Re-check the period at this many random indices by direct recursion.
    #[arg(long, default_value_t = 0)]
    verify: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Expect {
    Nonzero,
    TendsToZero,
    HasZero,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    disc: i64,
    #[arg(long, default_value_t = 100)]
    lmax: u32,
}

#[derive(Args, Serialize)]
struct ZerosArgs {
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Emit {
    Json,
    Csv,
}

#[derive(Args, Serialize)]
struct AvgArgs {
    #[arg(long, value_enum)]
    kind: AvgKind,
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long)]
    y0: f64,
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<f64>,
    #[arg(long)]
    y1: Option<f64>,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    /// Truncation size for all coset bounds (default policy when omitted).
    #[arg(long)]
    cmax: Option<u32>,
    /// Relative discrepancy above which the check fails.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum AvgKind {
    ParabolicElliptic,
    EllipticElliptic,
}

#[derive(Args, Serialize)]
struct SelftestArgs {
    /// Run only these criteria (comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
    #[arg(long)]
    skip_petersson: bool,
    /// Step cap for the direct re-check of the extreme period (0 skips it).
    #[arg(long, default_value_t = 30_000_000)]
    verify_steps: u64,
}

enum Failure {
    Usage(String),
    Verification(Value),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownDiscriminant(_) | Error::BadModulus(_) | Error::OutOfRange(_) | Error::NotReduced(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Compute(e),
        }
    }
}

struct Out {
    lines: Vec<Value>,
    timing: bool,
}

impl Out {
    fn emit(&mut self, v: impl Serialize) {
        let mut v = serde_json::to_value(v).expect("serializable");
        if !self.timing {
            strip_times(&mut v);
        }
        self.lines.push(v);
    }
}

fn strip_times(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if k == "wall_time_ms" || k == "elapsed_ms" {
                    *x = Value::Null;
                } else {
                    strip_times(x);
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(strip_times),
        _ => {}
    }
}

fn budget(cli: &Cli) -> Budget {
    let deadline = budget_ms().map(|ms| Instant::now() + Duration::from_millis(ms));
    Budget { max_steps: cli.max_steps, deadline }
}

fn budget_ms() -> Option<u64> {
    std::env::var("CUSPTAYLOR_BUDGET_MS").ok()?.parse().ok()
}

fn int(x: &BigInt) -> Value {
    i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string()))
}

fn quad(x: &QuadElt) -> Value {
    json!([int(&x.a), int(&x.b)])
}

fn quad_rat(x: &QuadRat) -> Value {
    json!([x.a.to_string(), x.b.to_string()])
}

fn cplx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn table(out: &mut Out) -> Result<(), Failure> {
    for s in all_specs() {
        let p = s.point();
        out.emit(json!({
            "disc": s.disc,
            "field": s.field.to_string(),
            "point": cplx(p),
            "k0": quad(&s.k0),
            "k1": quad(&s.k1),
            "k2": quad(&s.k2),
            "k3": quad_rat(&s.k3),
            "m1": quad(&s.m1),
            "m2": quad(&s.m2),
            "class_number": [s.class_number.0, s.class_number.1],
            "elliptic_order": s.elliptic_order,
            "omega": chowla_selberg(s.disc)?,
        }));
    }
    Ok(())
}

fn coeff(a: &CoeffArgs, out: &mut Out) -> Result<(), Failure> {
    let spec = a.disc.map(registry).transpose()?;
    let z = match (a.x, a.y, &spec) {
        (Some(x), Some(y), _) => Complex64::new(x, y),
        (None, None, Some(s)) => s.point(),
        _ => return Err(Failure::Usage("give --x and --y, or --disc".into())),
    };
    let ctx = SeriesContext::new(a.terms);
    let want = |r: Route| a.route == Route::All || a.route == r;
    let mut routes = serde_json::Map::new();
    let mut vals = Vec::new();
    if want(Route::Theorem) {
        let v = coeff_via_theorem41(z, a.m, &ctx)?;
        routes.insert("theorem".into(), cplx(v));
        vals.push(v);
    }
    if want(Route::Derivative) {
        let v = coeff_via_derivatives(z, a.m, &ctx)?;
        routes.insert("derivative".into(), cplx(v));
        vals.push(v);
    }
    if want(Route::Cm) || (a.route == Route::All && spec.is_some()) {
        let Some(s) = &spec else {
            return Err(Failure::Usage("the cm route needs --disc".into()));
        };
        if (s.point() - z).norm() > 1e-12 {
            return Err(Failure::Usage(format!("point is not the CM point of D = {}", s.disc)));
        }
        let v = coeff_via_cm_exact(s, a.m, &ctx)?;
        routes.insert("cm".into(), cplx(v));
        vals.push(v);
    }
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            if scale > 0.0 {
                worst = worst.max((vals[i] - vals[j]).norm() / scale);
            }
        }
    }
    out.emit(json!({
        "m": a.m,
        "point": cplx(z),
        "value": cplx(vals[0]),
        "route": a.route,
        "routes": routes,
        "max_rel_disagreement": worst,
        "tail_bound": ctx.tail_bound(z.im),
    }));
    Ok(())
}

fn certify(cli: &Cli, a: &CertifyArgs, out: &mut Out) -> Result<(), Failure> {
    let spec = registry(a.pair.disc)?;
    let cert = periodicity::certify_nonvanishing(&spec, a.pair.prime, &budget(cli))?;
    out.emit(&cert);
    if a.verify > 0 {
        let rep = periodicity::verify_certificate(&spec, &cert, a.verify, cli.seed, cli.max_steps)?;
        out.emit(json!({ "soundness": rep, "ok": rep.ok() }));
        if !rep.ok() {
            return Err(Failure::Verification(json!({ "reason": "direct recursion disagrees" })));
        }
    }
    if let Some(e) = a.expect {
        let got = match cert.verdict {
            Verdict::AllNonzero => Expect::Nonzero,
            Verdict::TendsToZero => Expect::TendsToZero,
            Verdict::HasZeroAt(_) => Expect::HasZero,
        };
        if got != e {
            return Err(Failure::Verification(json!({ "reason": "verdict differs from --expect", "expected": e })));
        }
    }
    Ok(())
}

fn period(cli: &Cli, a: &PairArgs, out: &mut Out) -> Result<(), Failure> {
    let spec = registry(a.disc)?;
    let b = budget(cli);
    let an = periodicity::analyze(&spec, a.prime, &b)?;
    let psi = periodicity::build_psi(&spec, a.prime)?;
    let orbit = periodicity::psi_orbit_period(&psi, &b)?;
    let compact = psi.compact.as_ref().map(|(x, y)| json!({ "a": x.to_pairs(), "b": y.to_pairs() }));
    out.emit(json!({
        "disc": a.disc,
        "prime": a.prime,
        "alpha": an.alpha,
        "beta": an.beta,
        "constant_period": an.constant_period,
        "constant_preperiod": an.constant_preperiod,
        "shortcut": an.shortcut(),
        "tends_to_zero": an.tends_to_zero(),
        "psi": { "compact": compact, "orbit": orbit },
    }));
    Ok(())
}

fn scan(cli: &Cli, a: &ScanArgs, out: &mut Out) -> Result<(), Failure> {
    let rows = periodicity::residue_criterion_scan(a.disc, a.lmax, &budget(cli))?;
    let mismatches: Vec<u32> = rows.iter().filter(|r| !r.agrees).map(|r| r.prime).collect();
    for r in &rows {
        out.emit(r);
    }
    out.emit(json!({ "rows": rows.len(), "mismatches": mismatches }));
    if !mismatches.is_empty() {
        return Err(Failure::Verification(json!({ "reason": "residue criterion mismatch" })));
    }
    Ok(())
}

fn zeros(a: &ZerosArgs, out: &mut Out) -> Result<(), Failure> {
    let region = SearchRegion { tolerance: a.tol, ..SearchRegion::default() };
    let set = zerofinder::find_zeros(a.m, &SeriesContext::default(), &region)?;
    match a.emit {
        Emit::Json => {
            for r in &set.records {
                out.emit(r);
            }
            out.emit(json!({ "m": set.m, "count": set.count, "clear_above_cutoff": set.clear_above_cutoff }));
        }
        Emit::Csv => {
            let mut rows = vec!["m,kind,x,y,residual".to_string()];
            for r in &set.records {
                rows.push(format!(
                    "{},{},{},{},{:e}",
                    r.m,
                    r.kind.as_str(),
                    r.location.x,
                    r.location.y,
                    r.residual_norm
                ));
                if let Some(w) = r.mirror {
                    rows.push(format!("{},{},{},{},{:e}", r.m, r.kind.as_str(), w.x, w.y, r.residual_norm));
                }
            }
            out.emit(json!({ "csv": rows }));
        }
    }
    Ok(())
}

fn avg_check(a: &AvgArgs, out: &mut Out) -> Result<(), Failure> {
    let policy = a.cmax.map(TruncationPolicy::uniform).unwrap_or_default();
    let z0 = Complex64::new(a.x0, a.y0);
    let rep = match a.kind {
        AvgKind::ParabolicElliptic => petersson::verify_parabolic_elliptic(z0, a.m, a.n as u64, &policy)?,
        AvgKind::EllipticElliptic => {
            let z1 = match (a.x1, a.y1) {
                (Some(x), Some(y)) => Complex64::new(x, y),
                (None, None) => z0,
                _ => return Err(Failure::Usage("give both --x1 and --y1".into())),
            };
            petersson::verify_elliptic_elliptic(z0, z1, a.m, a.n, &policy)?
        }
    };
    let ok = rep.rel_err < a.tol;
    out.emit(&rep);
    if !ok {
        return Err(Failure::Verification(json!({ "reason": "discrepancy above tolerance", "tol": a.tol })));
    }
    Ok(())
}

fn selftest(cli: &Cli, a: &SelftestArgs, out: &mut Out) -> Result<(), Failure> {
    // a short global budget leaves no room for the series checks
    let short = budget_ms().is_some_and(|ms| ms < 600_000);
    let cfg = AcceptanceConfig {
        seed: cli.seed,
        budget: budget(cli),
        verify_steps: a.verify_steps,
        petersson: (!a.skip_petersson && !short).then(TruncationPolicy::default),
        ..AcceptanceConfig::default()
    };
    let ids: Vec<u32> = if a.only.is_empty() { (1..=12).collect() } else { a.only.clone() };
    let mut failed = Vec::new();
    for id in ids {
        let r = acceptance::run_criterion(id, &cfg);
        eprintln!("{r}");
        if r.status == Status::Fail {
            failed.push(id);
        }
        out.emit(&r);
    }
    if !failed.is_empty() {
        return Err(Failure::Verification(json!({ "reason": "criteria failed", "criteria": failed })));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("thread pool: {e}");
    }
    let mut out = Out { lines: Vec::new(), timing: cli.timing };
    let mut header = serde_json::to_value(&cli).expect("serializable");
    header["threads"] = threads.into();
    header["version"] = env!("CARGO_PKG_VERSION").into();
    header["budget_ms"] = budget_ms().into();
    out.emit(json!({ "config": header }));

    let res = match &cli.command {
        Command::Table => table(&mut out),
        Command::Coeff(a) => coeff(a, &mut out),
        Command::Certify(a) => certify(&cli, a, &mut out),
        Command::Period(a) => period(&cli, a, &mut out),
        Command::ScanResidue(a) => scan(&cli, a, &mut out),
        Command::Zeros(a) => zeros(a, &mut out),
        Command::AvgCheck(a) => avg_check(a, &mut out),
        Command::Selftest(a) => selftest(&cli, a, &mut out),
    };
    let code = match res {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            out.emit(json!({ "error": { "kind": "usage", "message": msg } }));
            2
        }
        Err(Failure::Verification(v)) => {
            out.emit(json!({ "error": { "kind": "verification", "detail": v } }));
            1
        }
        Err(Failure::Compute(e)) => {
            let kind = match e {
                Error::BudgetExceeded { .. } | Error::DeadlineExceeded => "budget",
                _ => "compute",
            };
            out.emit(json!({ "error": { "kind": kind, "message": e.to_string() } }));
            1
        }
    };
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    // CSV output keeps the JSON lines as comments
    let csv = out.lines.iter().any(|l| l.get("csv").is_some());
    for line in &out.lines {
        if let Some(Value::Array(rows)) = line.get("csv") {
            for r in rows {
                let _ = writeln!(w, "{}", r.as_str().unwrap_or_default());
            }
        } else if csv {
            let _ = writeln!(w, "# {line}");
        } else {
            let _ = writeln!(w, "{line}");
        }
    }
    ExitCode::from(code)
}
