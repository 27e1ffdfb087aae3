mod output;

/// `println!` that ignores a closed stdout instead of panicking.
macro_rules! out {
    () => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout());
    }};
    ($($t:tt)+) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)+);
    }};
}

use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delbound_core::constructions::{
    baselines, bound_for_s, bound_value, distance_to_s, lev_even_poly, lev_odd_poly, mrrw_bound_closed, mrrw_poly, BoundMethod,
    BoundPolynomial, BoundResult, Method,
};
use delbound_core::feasibility::{cone_certificate, ConeCertificate, Tolerances};
use delbound_core::lp_oracle::{delsarte_lp, LpMode, LpSolution, MAX_LP_N};
use delbound_core::nrt::{shape_table, weight_distribution};
use delbound_core::report::{distance_table, linspace, parse_methods, s_table, TableRow};
use delbound_core::spaces::{MeasureSpec, MeasureVariant, SpaceDescriptor};
use delbound_core::spectral::{
    build_tk, spectral_bound_fixed, spectral_recover_bound, top_eigenpair, EigenPair, JacobiOperator, SignVariant,
};
use delbound_core::{Error, Result};
use serde::Serialize;

use output::{csv_rows, json, report_error, Failure, Format};

/// Environment variable holding default tolerance overrides, e.g.
/// `coeff=1e-8,pos=1e-12,sign=1e-9`.
const TOL_ENV: &str = "DELBOUND_TOL";

#[derive(Parser)]
#[command(name = "delbound", version, about = "Delsarte-type upper bounds on code size")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified bound at one distance d or inner product s.
    Bound(BoundArgs),
    /// Sweep over all distances (Hamming) or an s-grid.
    Table(TableArgs),
    /// Cone audit of a polynomial given by descriptor or coefficient file.
    Verify(VerifyArgs),
    /// Delsarte LP optimum for binary codes, n <= 14.
    Lp(LpArgs),
    /// Shape table or weight distribution of the ordered Hamming space.
    Nrt(NrtArgs),
    /// Recurrence coefficients of an orthonormal system.
    Coeffs(CoeffsArgs),
}

#[derive(Args)]
struct SpaceArgs {
    /// `hamming:<n>` or `sphere:<d>`.
    #[arg(long, value_parser = parse_space)]
    space: SpaceDescriptor,
    /// Highest polynomial degree tabulated for sphere spaces.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Tolerance overrides `coeff=..,pos=..,sign=..`; applied after DELBOUND_TOL.
    #[arg(long)]
    tol: Option<String>,
}

impl SpaceArgs {
    fn build(&self) -> Result<MeasureSpec> {
        let mut desc = self.space.clone();
        if let Some(m) = self.max_degree {
            match &mut desc {
                SpaceDescriptor::Sphere { max_degree, .. } => *max_degree = Some(m),
                _ => return Err(Error::InvalidInput("--max-degree applies to sphere spaces only".into())),
            }
        }
        desc.build()
    }

    fn tolerances(&self) -> Result<Tolerances> {
        let mut tol = Tolerances::default();
        if let Ok(env) = std::env::var(TOL_ENV) {
            tol = tol.with_overrides(&env)?;
        }
        if let Some(t) = &self.tol {
            tol = tol.with_overrides(t)?;
        }
        Ok(tol)
    }
}

/// `hamming:<n>`, `sphere:<d>`, an inline JSON descriptor
/// `{"kind": .., "params": ..}`, or `@file.json` holding one.
fn parse_space(s: &str) -> std::result::Result<SpaceDescriptor, String> {
    let from_json = |text: &str, origin: &str| {
        serde_json::from_str(text).map_err(|e| format!("{origin}: line {}, column {}: {e}", e.line(), e.column()))
    };
    if let Some(path) = s.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        from_json(&text, path)
    } else if s.trim_start().starts_with('{') {
        from_json(s, "space descriptor")
    } else {
        s.parse().map_err(|e: Error| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundCliMethod {
    Mrrw,
    Lev,
    Spectral,
    SpectralFixed,
    Lp,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Base,
    Minus,
    Plusminus,
}

impl From<BasisArg> for MeasureVariant {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Base => MeasureVariant::Base,
            BasisArg::Minus => MeasureVariant::Minus,
            BasisArg::Plusminus => MeasureVariant::PlusMinus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Subtractive,
    Additive,
}

impl From<SignArg> for SignVariant {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Subtractive => SignVariant::Subtractive,
            SignArg::Additive => SignVariant::Additive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LpModeArg {
    Float,
    Exact,
}

impl From<LpModeArg> for LpMode {
    fn from(m: LpModeArg) -> Self {
        match m {
            LpModeArg::Float => LpMode::Float,
            LpModeArg::Exact => LpMode::Exact,
        }
    }
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, value_enum, default_value = "lev")]
    method: BoundCliMethod,
    /// Minimum distance (Hamming spaces).
    #[arg(long, conflicts_with = "s")]
    d: Option<usize>,
    /// Maximal inner product.
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Kernel degree for mrrw, spectral and spectral-fixed; chosen
    /// automatically when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// System for spectral recovery with an explicit --k.
    #[arg(long, value_enum, default_value = "base")]
    basis: BasisArg,
    /// Corner sign of the fixed operator.
    #[arg(long, value_enum, default_value = "subtractive")]
    sign_variant: SignArg,
    #[arg(long, value_enum, default_value = "float")]
    lp_mode: LpModeArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// `all` or a comma-separated subset of mrrw,lev,spectral,lp.
    #[arg(long, default_value = "all")]
    methods: String,
    /// `lo:hi:count` grid of s for spaces without a distance.
    #[arg(long, default_value = "-0.9:0.5:15", allow_hyphen_values = true)]
    s_grid: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMethod {
    Mrrw,
    LevOdd,
    LevEven,
    Spectral,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Polynomial descriptor; needs --k and --s.
    #[arg(long, value_enum, conflicts_with = "coeffs")]
    method: Option<VerifyMethod>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, value_enum, default_value = "base")]
    basis: BasisArg,
    /// File of base-system Fourier coefficients f̂_0, f̂_1, ... separated by
    /// commas, whitespace or newlines; `#` starts a comment.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct LpArgs {
    #[arg(long)]
    n: usize,
    /// All distances 1..=n when omitted.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_enum, default_value = "float")]
    mode: LpModeArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct NrtArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Aggregate by NRT weight instead of listing shapes.
    #[arg(long)]
    distribution: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, value_enum, default_value = "base")]
    basis: BasisArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = match cli.command {
        Command::Bound(a) => (a.format, run_bound(&a)),
        Command::Table(a) => (a.format, run_table(&a)),
        Command::Verify(a) => (a.format, run_verify(&a)),
        Command::Lp(a) => (a.format, run_lp(&a)),
        Command::Nrt(a) => (a.format, run_nrt(&a)),
        Command::Coeffs(a) => (a.format, run_coeffs(&a)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => ExitCode::from(report_error(format, None, &e) as u8),
    }
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidInput(format!("output failed: {e}"))
}

#[derive(Serialize)]
struct BoundCsvRow {
    space: String,
    method: String,
    basis: String,
    n: Option<usize>,
    d: Option<usize>,
    s: f64,
    k: usize,
    degree: usize,
    bound: f64,
    certificate_id: String,
    closed_form: Option<f64>,
}

impl From<&BoundResult> for BoundCsvRow {
    fn from(r: &BoundResult) -> Self {
        Self {
            space: r.space.to_string(),
            method: r.method.to_string(),
            basis: r.basis.to_string(),
            n: r.n,
            d: r.d,
            s: r.s,
            k: r.k,
            degree: r.degree,
            bound: r.bound,
            certificate_id: r.certificate_id.clone(),
            closed_form: r.closed_form,
        }
    }
}

fn print_bound_text(r: &BoundResult) {
    out!("space         {}", r.space);
    out!("method        {} ({} system)", r.method, r.basis);
    if let Some(d) = r.d {
        out!("d             {d}");
    }
    out!("s             {}", r.s);
    out!("k / degree    {} / {}", r.k, r.degree);
    out!("bound         {}", r.bound);
    if let Some(c) = r.closed_form {
        out!("closed form   {c}");
    }
    if let Some(b) = &r.baselines {
        out!("singleton     {}", b.singleton);
        out!("sphere pack.  {}", b.sphere_packing);
        if let Some(p) = b.plotkin {
            out!("plotkin       {p}");
        }
    }
    out!("certificate   {}", r.certificate_id);
}

fn emit_bounds(format: Format, results: &[BoundResult]) -> Result<()> {
    match format {
        Format::Json => unreachable!("json is emitted by the caller"),
        Format::Csv => csv_rows(&results.iter().map(BoundCsvRow::from).collect::<Vec<_>>()).map_err(io_err),
        Format::Text => {
            for (i, r) in results.iter().enumerate() {
                if i > 0 {
                    out!();
                }
                print_bound_text(r);
            }
            Ok(())
        }
    }
}

fn with_distance(mut r: BoundResult, n: Option<usize>, d: Option<usize>) -> BoundResult {
    if let (Some(n), Some(d)) = (n, d) {
        r.d = Some(d);
        r.baselines = Some(baselines(n, d));
    }
    r
}

fn one_bound(
    spec: &MeasureSpec,
    method: BoundCliMethod,
    a: &BoundArgs,
    s: f64,
    d: Option<usize>,
    tol: Tolerances,
) -> Result<BoundResult> {
    let n = spec.hamming_n();
    let r = match (method, a.k) {
        (BoundCliMethod::Mrrw, Some(k)) => {
            let mut r = BoundResult::certified(spec, mrrw_poly(spec, k, s)?, tol)?;
            r.closed_form = mrrw_bound_closed(spec, k, s).ok();
            r
        }
        (BoundCliMethod::Mrrw, None) => bound_for_s(spec, s, BoundMethod::Mrrw, tol)?,
        (BoundCliMethod::Lev, None) => bound_for_s(spec, s, BoundMethod::Lev, tol)?,
        (BoundCliMethod::Lev, Some(_)) => {
            return Err(Error::InvalidInput("--k is chosen by the window for lev; omit it".into()))
        }
        (BoundCliMethod::Spectral, Some(k)) => spectral_recover_bound(spec, a.basis.into(), k, s, tol)?,
        (BoundCliMethod::Spectral, None) => bound_for_s(spec, s, BoundMethod::Spectral, tol)?,
        _ => unreachable!("dispatched elsewhere"),
    };
    Ok(with_distance(r, n, d))
}

#[derive(Serialize)]
struct AllResults {
    results: Vec<BoundResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lp: Option<LpSolution>,
    failures: Vec<Failure>,
}

fn run_bound(a: &BoundArgs) -> Result<u8> {
    let spec = a.space.build()?;
    let tol = a.space.tolerances()?;
    if a.method == BoundCliMethod::SpectralFixed {
        if a.d.is_some() || a.s.is_some() {
            return Err(Error::InvalidInput("spectral-fixed fixes s itself; omit --d and --s".into()));
        }
        let r = match a.k {
            Some(k) => spectral_bound_fixed(&spec, k, a.sign_variant.into(), tol)?,
            None => delbound_core::spectral::spectral_bound_fixed_best(&spec, a.sign_variant.into(), tol)?,
        };
        return emit_single(a.format, r);
    }
    let (s, d) = match (a.d, a.s) {
        (Some(d), None) => {
            let n = spec
                .hamming_n()
                .ok_or_else(|| Error::InvalidInput("--d needs a Hamming space; use --s".into()))?;
            if d == 0 || d > n {
                return Err(Error::InvalidInput(format!("distance d = {d} must satisfy 1 <= d <= n = {n}")));
            }
            (distance_to_s(n, d), Some(d))
        }
        (None, Some(s)) => (s, None),
        _ => return Err(Error::InvalidInput("give exactly one of --d or --s".into())),
    };
    match a.method {
        BoundCliMethod::Lp => {
            let (Some(n), Some(d)) = (spec.hamming_n(), d) else {
                return Err(Error::InvalidInput("the LP oracle needs a Hamming space and --d".into()));
            };
            let sol = delsarte_lp(n, d, a.lp_mode.into())?;
            emit_lp(a.format, &[sol])?;
            Ok(0)
        }
        BoundCliMethod::All => {
            let mut results = Vec::new();
            let mut failures = Vec::new();
            for m in [BoundCliMethod::Mrrw, BoundCliMethod::Lev, BoundCliMethod::Spectral] {
                let name = format!("{m:?}").to_lowercase();
                let args_k = BoundArgs { k: None, ..clone_bound_args(a) };
                match one_bound(&spec, m, &args_k, s, d, tol) {
                    Ok(r) => results.push(r),
                    Err(e) => failures.push(Failure::new(Some(name), &e)),
                }
            }
            let lp = match (spec.hamming_n(), d) {
                (Some(n), Some(d)) if n <= MAX_LP_N => Some(delsarte_lp(n, d, a.lp_mode.into())?),
                _ => None,
            };
            let code = if results.is_empty() { 3 } else { 0 };
            match a.format {
                Format::Json => json(AllResults { results, lp, failures }).map_err(io_err)?,
                f => {
                    emit_bounds(f, &results)?;
                    for fl in &failures {
                        eprintln!("{}: {}", fl.method.as_deref().unwrap_or("?"), fl.message);
                    }
                    if let Some(sol) = lp {
                        eprintln!("lp: {}", sol.value);
                    }
                }
            }
            Ok(code)
        }
        m => emit_single(a.format, one_bound(&spec, m, a, s, d, tol)?),
    }
}

fn clone_bound_args(a: &BoundArgs) -> BoundArgs {
    BoundArgs {
        space: SpaceArgs { space: a.space.space.clone(), max_degree: a.space.max_degree, tol: a.space.tol.clone() },
        method: a.method,
        d: a.d,
        s: a.s,
        k: a.k,
        basis: a.basis,
        sign_variant: a.sign_variant,
        lp_mode: a.lp_mode,
        format: a.format,
    }
}

fn emit_single(format: Format, r: BoundResult) -> Result<u8> {
    match format {
        Format::Json => json(&r).map_err(io_err)?,
        f => emit_bounds(f, std::slice::from_ref(&r))?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct TableBody<'a> {
    space: String,
    rows: &'a [TableRow],
}

fn run_table(a: &TableArgs) -> Result<u8> {
    let spec = a.space.build()?;
    let tol = a.space.tolerances()?;
    let methods = parse_methods(&a.methods)?;
    let rows = if spec.hamming_n().is_some() {
        distance_table(&spec, &methods, tol)?
    } else {
        s_table(&spec, &parse_grid(&a.s_grid)?, &methods, tol)?
    };
    match a.format {
        Format::Json => json(TableBody { space: spec.descriptor().to_string(), rows: &rows }).map_err(io_err)?,
        Format::Csv => csv_rows(&rows).map_err(io_err)?,
        Format::Text => {
            out!("{:>4} {:>10} {:>9} {:>10} {:>14} {:>4} {:>14}  note", "d", "s", "method", "status", "bound", "deg", "lp");
            for r in &rows {
                let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
                out!(
                    "{:>4} {:>10.6} {:>9} {:>10} {:>14} {:>4} {:>14}  {}",
                    r.d.map_or("-".into(), |d| d.to_string()),
                    r.s,
                    r.method.to_string(),
                    format!("{:?}", r.status).to_lowercase(),
                    opt(r.bound),
                    r.degree.map_or("-".into(), |d| d.to_string()),
                    opt(r.lp),
                    r.note.as_deref().unwrap_or("")
                );
            }
        }
    }
    Ok(0)
}

fn parse_grid(g: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = g.split(':').collect();
    let bad = || Error::InvalidInput(format!("s-grid `{g}` is not lo:hi:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(linspace(lo, hi, count))
}

/// Base-system coefficients from a text file; errors name the line and field.
fn read_coefficients(path: &PathBuf) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for (field, tok) in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).enumerate() {
            let v: f64 = tok.parse().map_err(|_| {
                Error::InvalidInput(format!(
                    "{}: line {}, field {}: `{tok}` is not a number",
                    path.display(),
                    ln + 1,
                    field + 1
                ))
            })?;
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput(format!("{}: no coefficients found", path.display())));
    }
    Ok(out)
}

#[derive(Serialize)]
struct OperatorDump {
    matrix: Vec<Vec<f64>>,
    #[serde(flatten)]
    operator: JacobiOperator,
    top: EigenPair,
}

#[derive(Serialize)]
struct VerifyReport {
    space: String,
    source: String,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
    certificate: ConeCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator: Option<OperatorDump>,
}

fn run_verify(a: &VerifyArgs) -> Result<u8> {
    let spec = a.space.build()?;
    let tol = a.space.tolerances()?;
    let mut operator = None;
    let (f, source) = match (&a.coeffs, a.method) {
        (Some(path), None) => {
            let coeffs = read_coefficients(path)?;
            (BoundPolynomial::from_fourier(&spec, Method::Custom, a.s, &coeffs)?, format!("coefficients from {}", path.display()))
        }
        (None, Some(m)) => {
            let k = a.k.ok_or_else(|| Error::InvalidInput("--method needs --k".into()))?;
            let f = match m {
                VerifyMethod::Mrrw => mrrw_poly(&spec, k, a.s)?,
                VerifyMethod::LevOdd => lev_odd_poly(&spec, k, a.s)?,
                VerifyMethod::LevEven => lev_even_poly(&spec, k, a.s)?,
                VerifyMethod::Spectral => {
                    let basis: MeasureVariant = a.basis.into();
                    let op = build_tk(&spec, basis, k, a.s)?;
                    let top = top_eigenpair(&op)?;
                    let plus_one = basis == MeasureVariant::PlusMinus;
                    let f = BoundPolynomial::factored(&spec, Method::Spectral, basis, top.vector.clone(), plus_one, a.s)?;
                    operator = Some(OperatorDump { matrix: op.dense(), operator: op, top });
                    f
                }
            };
            let name = m.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            (f, format!("{name} k={k} s={}", a.s))
        }
        _ => return Err(Error::InvalidInput("give exactly one of --method or --coeffs".into())),
    };
    let certificate = cone_certificate(&spec, &f, a.s, tol);
    let passed = certificate.passed();
    let bound = if passed { Some(bound_value(&spec, &f, tol)?) } else { None };
    let verdict = if passed { "pass".to_string() } else { format!("fail: {}", certificate.reason()) };
    let report = VerifyReport { space: spec.descriptor().to_string(), source, verdict, bound, certificate, operator };
    match a.format {
        Format::Json => json(&report).map_err(io_err)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct CoeffRow {
                i: usize,
                coefficient: f64,
            }
            let rows: Vec<CoeffRow> =
                report.certificate.fourier.iter().enumerate().map(|(i, &c)| CoeffRow { i, coefficient: c }).collect();
            csv_rows(&rows).map_err(io_err)?;
            eprintln!("{}", report.verdict);
        }
        Format::Text => {
            out!("space       {}", report.space);
            out!("polynomial  {}", report.source);
            out!("s           {}", a.s);
            out!("verdict     {}", if passed { "PASS" } else { "FAIL" });
            if !passed {
                out!("reason      {}", report.certificate.reason());
            }
            if let Some(b) = report.bound {
                out!("bound       {b}");
            }
            out!("max f on [-1, s]  {:e} at x = {}", report.certificate.max_on_interval, report.certificate.argmax);
            out!("certificate {}", report.certificate.id);
            out!("  i  f̂_i");
            for (i, c) in report.certificate.fourier.iter().enumerate() {
                out!("{i:>3}  {c:+.6e}");
            }
        }
    }
    Ok(if passed { 0 } else { 3 })
}

#[derive(Serialize)]
struct LpCsvRow {
    n: usize,
    d: usize,
    mode: String,
    status: String,
    value: f64,
    exact: Option<String>,
    distribution: String,
}

fn emit_lp(format: Format, sols: &[LpSolution]) -> Result<()> {
    match format {
        Format::Json if sols.len() == 1 => json(&sols[0]).map_err(io_err),
        Format::Json => {
            #[derive(Serialize)]
            struct Many<'a> {
                n: usize,
                solutions: &'a [LpSolution],
            }
            json(Many { n: sols[0].n, solutions: sols }).map_err(io_err)
        }
        Format::Csv => {
            let rows: Vec<LpCsvRow> = sols
                .iter()
                .map(|s| LpCsvRow {
                    n: s.n,
                    d: s.d,
                    mode: format!("{:?}", s.mode).to_lowercase(),
                    status: s.status.to_string(),
                    value: s.value,
                    exact: s.exact.clone(),
                    distribution: s.distribution.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";"),
                })
                .collect();
            csv_rows(&rows).map_err(io_err)
        }
        Format::Text => {
            for s in sols {
                out!("n={} d={} {} value={}{}", s.n, s.d, s.status, s.value, s.exact.as_ref().map_or(String::new(), |e| format!(" ({e})")));
            }
            Ok(())
        }
    }
}

fn run_lp(a: &LpArgs) -> Result<u8> {
    let ds: Vec<usize> = match a.d {
        Some(d) => vec![d],
        None => (1..=a.n).collect(),
    };
    let sols = ds.into_iter().map(|d| delsarte_lp(a.n, d, a.mode.into())).collect::<Result<Vec<_>>>()?;
    emit_lp(a.format, &sols)?;
    Ok(0)
}

#[derive(Serialize)]
struct WeightRow {
    weight: usize,
    fraction: String,
    fraction_f64: f64,
}

fn run_nrt(a: &NrtArgs) -> Result<u8> {
    if a.distribution {
        let dist = weight_distribution(a.r, a.n, a.q)?;
        let rows: Vec<WeightRow> = dist
            .iter()
            .enumerate()
            .map(|(w, f)| WeightRow {
                weight: w,
                fraction: f.to_string(),
                fraction_f64: num_to_f64(f),
            })
            .collect();
        match a.format {
            Format::Json => json(NrtBody { r: a.r, n: a.n, q: a.q, rows: &rows }).map_err(io_err)?,
            Format::Csv => csv_rows(&rows).map_err(io_err)?,
            Format::Text => rows.iter().for_each(|r| out!("{:>3}  {}", r.weight, r.fraction)),
        }
    } else {
        let rows = shape_table(a.r, a.n, a.q)?;
        match a.format {
            Format::Json => json(NrtBody { r: a.r, n: a.n, q: a.q, rows: &rows }).map_err(io_err)?,
            Format::Csv => csv_rows(&rows).map_err(io_err)?,
            Format::Text => rows.iter().for_each(|r| out!("{:<16} e0={:<3} w={:<3} {}", r.shape, r.e0, r.nrt_weight, r.weight)),
        }
    }
    Ok(0)
}

fn num_to_f64(r: &num::BigRational) -> f64 {
    num::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

#[derive(Serialize)]
struct NrtBody<'a, T: Serialize> {
    r: usize,
    n: usize,
    q: u32,
    rows: &'a [T],
}

#[derive(Serialize)]
struct CoeffRow {
    i: usize,
    a: Option<f64>,
    b: f64,
}

fn run_coeffs(a: &CoeffsArgs) -> Result<u8> {
    let spec = a.space.build()?;
    let basis: MeasureVariant = a.basis.into();
    let t = spec.table(basis)?;
    let rows: Vec<CoeffRow> =
        t.b.iter().enumerate().map(|(i, &b)| CoeffRow { i, a: t.a.get(i).copied(), b }).collect();
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                space: String,
                basis: String,
                mass: f64,
                rows: &'a [CoeffRow],
            }
            json(Body { space: spec.descriptor().to_string(), basis: basis.to_string(), mass: t.mass, rows: &rows })
                .map_err(io_err)?
        }
        Format::Csv => csv_rows(&rows).map_err(io_err)?,
        Format::Text => rows.iter().for_each(|r| out!("{:>3}  a={:<22} b={}", r.i, r.a.map_or("-".into(), |v| v.to_string()), r.b)),
    }
    Ok(0)
}
