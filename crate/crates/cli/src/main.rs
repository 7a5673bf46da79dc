use std::fmt::{Debug, Write as _};
use std::io::Read;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use bldgzeta::algebra::{format_rational, parse_rational, MultiPoly, PolyMatrix, Q};
use bldgzeta::complex::{positions_up_to, verify_product_law, QuotientComplex, QuotientGraph, ThinQuotient};
use bldgzeta::cones::{decompose_cone, verify_bijection, ConeDecomposition, RationalLattice, SharpCone};
use bldgzeta::coxeter::{
    alternating_coset_sum, poincare_rational, poincare_truncated, CoxeterSystem, CustomSystem, HeckeRepresentation,
    Restriction,
};
use bldgzeta::cusp::{pade_fit, zeta_series, CuspidalQuotient};
use bldgzeta::zeta::{lefschetz_check_with, s_function_probe, series_expand, trace_series, zeta_closed_form, OracleOptions};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bldgzeta", version, about = "Exact zeta functions of building quotients")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexKind {
    Graph,
    Thin,
}

#[derive(Subcommand)]
enum Command {
    /// Poincaré series of a Coxeter system.
    Poincare {
        /// Type tag such as A~2, C~2, G~2, B3.
        #[arg(long = "type", conflicts_with = "matrix")]
        ty: Option<String>,
        /// Coxeter matrix as JSON ({"m": [[1,3],[3,1]]}), a file, or `-`.
        #[arg(long)]
        matrix: Option<String>,
        /// trivial, sign, reflection, or a JSON list of generator matrices.
        #[arg(long, default_value = "trivial")]
        rep: String,
        #[arg(long, default_value_t = 10)]
        degree: u32,
        /// Emit the closed rational form instead of the series.
        #[arg(long)]
        rational: bool,
        /// Also check that the alternating sum of parabolic series vanishes.
        #[arg(long)]
        alternating: bool,
    },
    /// Axes and residue set of a sharp cone in a lattice.
    Cone {
        /// Rows of the functional matrix, `;`-separated.
        #[arg(long)]
        alphas: String,
        /// Rows of a lattice basis, `;`-separated.
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long = "verify-radius", default_value_t = 10)]
        verify_radius: u32,
    },
    /// Trace series and closed form of a quotient.
    Zeta {
        #[arg(value_enum)]
        kind: ComplexKind,
        file: String,
        #[arg(long, default_value_t = 5)]
        series: u32,
        #[arg(long = "closed-form")]
        closed_form: bool,
    },
    /// Spectral traces against counted closed geodesics.
    Lefschetz {
        file: String,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// Admit tailed paths (negative control).
        #[arg(long)]
        tailed: bool,
        /// Compare both normalizations of the spectral series.
        #[arg(long)]
        probe: bool,
    },
    /// Chambers, positions and translation traces of a thin quotient.
    Thin {
        file: String,
        #[arg(long = "max-position", default_value_t = 3)]
        max_position: u64,
    },
    /// Stationary traces of a cuspidal quotient.
    Cusp {
        file: String,
        #[arg(long, default_value_t = 20)]
        coeffs: u32,
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        pade: Option<Vec<usize>>,
    },
}

struct Failure {
    code: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: "UsageError".into(), message: message.into() }
    }

    fn from_error<E: Debug + std::fmt::Display>(e: E) -> Self {
        Self { code: error_code(&format!("{e:?}")), message: e.to_string() }
    }
}

/// Innermost variant name of a (possibly wrapped) library error.
fn error_code(debug: &str) -> String {
    let mut s = debug;
    loop {
        let end = s.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(s.len());
        let name = &s[..end];
        let rest = &s[end..];
        if matches!(name, "Complex" | "Cone" | "Algebra" | "Coxeter" | "Zeta" | "Cusp") && rest.starts_with('(') {
            s = &rest[1..];
        } else {
            return name.to_string();
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure { code: "IoError".into(), message: e.to_string() })?;
    } else {
        s = std::fs::read_to_string(path)
            .map_err(|e| Failure { code: "IoError".into(), message: format!("{path}: {e}") })?;
    }
    Ok(s)
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure { code: "MalformedDocument".into(), message: e.to_string() })
}

/// Inline JSON, or else a path (or `-`).
fn json_arg(arg: &str) -> Result<Value, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        parse_json(t)
    } else {
        parse_json(&read_input(arg)?)
    }
}

fn parse_rows(s: &str) -> Result<Vec<Vec<Q>>, Failure> {
    s.split(';')
        .map(|row| row.split_whitespace().map(|x| parse_rational(x).map_err(Failure::from_error)).collect())
        .collect::<Result<Vec<Vec<Q>>, _>>()
        .and_then(|rows| {
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                Err(Failure::usage(format!("expected a square matrix, got {s:?}")))
            } else {
                Ok(rows)
            }
        })
}

/// Integers as JSON numbers, other rationals as `"p/q"`.
fn q_value(q: &Q) -> Value {
    if q.is_integer() {
        if let Ok(n) = i64::try_from(q.numer()) {
            return json!(n);
        }
    }
    Value::String(format_rational(q))
}

fn vectors(vs: &[Vec<Q>]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(q_value).collect())).collect())
}

fn system_from(ty: Option<&str>, matrix: Option<&str>) -> Result<CoxeterSystem, Failure> {
    match (ty, matrix) {
        (Some(t), _) => CoxeterSystem::from_tag_str(t).map_err(Failure::from_error),
        (None, Some(m)) => {
            let v = json_arg(m)?;
            let spec: CustomSystem = serde_json::from_value(v)
                .map_err(|e| Failure { code: "MalformedMatrix".into(), message: e.to_string() })?;
            CoxeterSystem::from_custom(&spec).map_err(Failure::from_error)
        }
        (None, None) => Err(Failure::usage("one of --type or --matrix is required")),
    }
}

fn representation(sys: &CoxeterSystem, rep: &str) -> Result<HeckeRepresentation, Failure> {
    let v = match rep {
        "trivial" | "sign" | "reflection" => Value::String(rep.to_string()),
        other => json_arg(other)?,
    };
    HeckeRepresentation::from_json(sys, &v).map_err(Failure::from_error)
}

fn univariate_coeffs(p: &MultiPoly, n: u32) -> Vec<Q> {
    (0..=n).map(|k| p.coeff(&[k])).collect()
}

fn matrix_json(m: &PolyMatrix) -> Value {
    if m.nrows() == 1 && m.ncols() == 1 {
        m.get(0, 0).to_json()
    } else {
        Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(MultiPoly::to_json).collect())).collect())
    }
}

fn poincare(
    ty: Option<&str>,
    matrix: Option<&str>,
    rep: &str,
    degree: u32,
    rational: bool,
    alternating: bool,
) -> Outcome {
    let sys = system_from(ty, matrix)?;
    let rep = representation(&sys, rep)?;
    let mut table = String::new();
    let mut out = if rational {
        let r = poincare_rational(&sys, &rep).map_err(Failure::from_error)?;
        match r.scalar() {
            Some(f) => {
                writeln!(table, "P(u) = ({}) / ({})", f.numerator(), f.denominator()).ok();
                json!({"num": f.numerator().to_json(), "den": f.denominator().to_json()})
            }
            None => {
                writeln!(table, "P(u) = N(u) / ({})", r.denominator).ok();
                json!({"num": matrix_json(&r.numerator), "den": r.denominator.to_json()})
            }
        }
    } else {
        let s = poincare_truncated(&sys, &Restriction::Full, &rep, degree as usize).map_err(Failure::from_error)?;
        if s.nrows() == 1 {
            writeln!(table, "{:>4}  coefficient", "k").ok();
            for (k, c) in univariate_coeffs(s.get(0, 0), degree).iter().enumerate() {
                writeln!(table, "{k:>4}  {}", format_rational(c)).ok();
            }
        } else {
            writeln!(table, "matrix-valued series of size {}; use --format json", s.nrows()).ok();
        }
        json!({"series": matrix_json(&s), "degree": degree})
    };
    if alternating {
        let zero = alternating_coset_sum(&sys, &rep, degree as usize).is_zero();
        writeln!(table, "alternating sum vanishes to degree {degree}: {zero}").ok();
        out.as_object_mut().expect("object").insert("alternating_zero".into(), json!(zero));
    }
    Ok((out, table))
}

fn cone_report(dec: &ConeDecomposition) -> Value {
    json!({
        "axes": vectors(&dec.axes()),
        "E": vectors(&dec.residues()),
        "index": dec.index().to_string().parse::<u64>().map_or_else(|_| json!(dec.index().to_string()), |n| json!(n)),
    })
}

fn cone(alphas: &str, lattice: Option<&str>, radius: u32) -> Outcome {
    let alphas = parse_rows(alphas)?;
    let lat = match lattice {
        Some(l) => RationalLattice::new(parse_rows(l)?).map_err(Failure::from_error)?,
        None => RationalLattice::standard(alphas.len()),
    };
    let cone = SharpCone::new(alphas).map_err(Failure::from_error)?;
    let dec = decompose_cone(&lat, &cone).map_err(Failure::from_error)?;
    let report = verify_bijection(&dec, radius);
    let mut out = cone_report(&dec);
    let obj = out.as_object_mut().expect("object");
    obj.insert("verified".into(), json!(report.verified()));
    obj.insert("verify_radius".into(), json!(radius));
    if let Some(c) = &report.first_counterexample {
        obj.insert("counterexample".into(), json!({"point": vectors(std::slice::from_ref(&c.point))[0], "reason": c.reason}));
    }
    let mut table = String::new();
    let show = |vs: &[Vec<Q>]| {
        vs.iter()
            .map(|v| format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(table, "axes   {}", show(&dec.axes())).ok();
    writeln!(table, "E      {}", show(&dec.residues())).ok();
    writeln!(table, "index  {}", dec.index()).ok();
    writeln!(table, "verified in box {radius}: {}", report.verified()).ok();
    Ok((out, table))
}

fn series_rows(p: &MultiPoly, rank: usize, n: u32) -> Vec<(Vec<u32>, Q)> {
    if rank == 1 {
        (1..=n).map(|k| (vec![k], p.coeff(&[k]))).collect()
    } else {
        let mut rows: Vec<(Vec<u32>, Q)> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        rows.sort_by(|a, b| (a.0.iter().sum::<u32>(), &a.0).cmp(&(b.0.iter().sum::<u32>(), &b.0)));
        rows
    }
}

fn zeta_of<C: QuotientComplex>(c: &C, n: u32, closed: bool) -> Outcome {
    let series = trace_series(c, n).map_err(Failure::from_error)?;
    let rows = series_rows(&series, c.rank(), n);
    let mut table = format!("{:>12}  trace\n", "k");
    for (k, v) in &rows {
        writeln!(table, "{:>12}  {}", format!("{k:?}"), format_rational(v)).ok();
    }
    let mut out = json!({
        "rank": c.rank(),
        "chambers": c.chamber_count(),
        "series": rows.iter().map(|(k, v)| json!({"k": k, "c": format_rational(v)})).collect::<Vec<_>>(),
    });
    if closed {
        let f = zeta_closed_form(c).map_err(Failure::from_error)?;
        let agrees = series_expand(&f, n).map_err(Failure::from_error)? == series;
        writeln!(table, "closed form: ({}) / ({})", f.numerator(), f.denominator()).ok();
        writeln!(table, "closed form agrees to degree {n}: {agrees}").ok();
        let obj = out.as_object_mut().expect("object");
        obj.insert("closed_form".into(), f.to_json());
        obj.insert("agrees".into(), json!(agrees));
    }
    Ok((out, table))
}

fn zeta(kind: ComplexKind, file: &str, n: u32, closed: bool) -> Outcome {
    let doc = parse_json(&read_input(file)?)?;
    match kind {
        ComplexKind::Graph => {
            let g = QuotientGraph::from_json(&doc).map_err(Failure::from_error)?;
            zeta_of(&g, n, closed)
        }
        ComplexKind::Thin => {
            let t = ThinQuotient::from_json(&doc).map_err(Failure::from_error)?;
            zeta_of(&t, n, closed)
        }
    }
}

fn lefschetz(file: &str, depth: u32, tailed: bool, probe: bool) -> Outcome {
    let g = QuotientGraph::from_json(&parse_json(&read_input(file)?)?).map_err(Failure::from_error)?;
    let report = lefschetz_check_with(&g, depth, OracleOptions { tailless: !tailed }).map_err(Failure::from_error)?;
    let mut table = format!("{:>4}  {:>14}  {:>14}\n", "k", "spectral", "geometric");
    for r in &report.rows {
        writeln!(table, "{:>4}  {:>14}  {:>14}", r.k, r.spectral, r.geometric).ok();
    }
    writeln!(table, "holds: {}", report.holds()).ok();
    let mut out = json!({
        "rows": report.rows.iter().map(|r| json!({"k": r.k, "spectral": r.spectral.to_string(), "geometric": r.geometric.to_string()})).collect::<Vec<_>>(),
        "holds": report.holds(),
        "first_mismatch": report.first_mismatch(),
    });
    if probe {
        let p = s_function_probe(&g, depth).map_err(Failure::from_error)?;
        writeln!(table, "normalization matching the geometric series: {}", p.matching()).ok();
        out.as_object_mut().expect("object").insert(
            "probe".into(),
            json!({"q": p.q, "matching": p.matching(), "plain": p.plain_matches, "weighted": p.weighted_matches}),
        );
    }
    Ok((out, table))
}

fn thin(file: &str, max_position: u64) -> Outcome {
    let t = ThinQuotient::from_json(&parse_json(&read_input(file)?)?).map_err(Failure::from_error)?;
    let ks = positions_up_to(&t, max_position);
    let traces = ks
        .iter()
        .map(|k| Ok((k.clone(), t.translation(k)?.trace())))
        .collect::<Result<Vec<_>, bldgzeta::complex::ComplexError>>()
        .map_err(Failure::from_error)?;
    let law = verify_product_law(&t, &ks).map_err(Failure::from_error)?;
    let orthant: Vec<Vec<i64>> = (0..t.rank()).map(|i| (0..t.rank()).map(|j| i64::from(i == j)).collect()).collect();
    let cone = SharpCone::from_integers(&orthant).map_err(Failure::from_error)?;
    let dec = decompose_cone(&t.position_lattice(), &cone).map_err(Failure::from_error)?;
    let mut table = format!(
        "chambers {}  index {}  steps {:?}\n{:>12}  trace\n",
        t.chamber_count(),
        t.sublattice_index(),
        t.position_steps(),
        "k"
    );
    for (k, tr) in &traces {
        writeln!(table, "{:>12}  {tr}", format!("{k:?}")).ok();
    }
    writeln!(table, "product law on {} pairs: {}", law.checked, law.holds()).ok();
    let out = json!({
        "chambers": t.chamber_count(),
        "index": t.sublattice_index().to_string(),
        "steps": t.position_steps(),
        "traces": traces.iter().map(|(k, tr)| json!({"k": k, "trace": tr.to_string()})).collect::<Vec<_>>(),
        "product_law": law.holds(),
        "positions": cone_report(&dec),
    });
    Ok((out, table))
}

fn cusp(file: &str, k: u32, pade: Option<&[usize]>) -> Outcome {
    let cq = CuspidalQuotient::from_json(&parse_json(&read_input(file)?)?).map_err(Failure::from_error)?;
    let series = zeta_series(&cq, k).map_err(Failure::from_error)?;
    let mut table = format!("{:>4}  trace\n", "k");
    for (i, c) in series.iter().enumerate() {
        writeln!(table, "{:>4}  {c}", i + 1).ok();
    }
    let mut out = json!({
        "coeffs": series.iter().map(i128::to_string).collect::<Vec<_>>(),
        "fit": Value::Null,
        "clean": Value::Null,
    });
    if let Some(&[p, q]) = pade {
        let mut coeffs = vec![Q::from_integer(0.into())];
        coeffs.extend(series.iter().map(|&c| Q::from_integer(c.into())));
        let fit = pade_fit(&coeffs, p, q).map_err(Failure::from_error)?;
        let as_list = |u: &bldgzeta::algebra::UniPoly| u.coeffs().iter().map(format_rational).collect::<Vec<_>>();
        writeln!(table, "[{p}/{q}] fit clean: {}", fit.clean).ok();
        if let Some(m) = fit.first_mismatch {
            writeln!(table, "first mismatch at u^{m}").ok();
        }
        let obj = out.as_object_mut().expect("object");
        obj.insert(
            "fit".into(),
            json!({
                "p": p,
                "q": q,
                "num": as_list(&fit.numerator),
                "den": as_list(&fit.denominator),
                "first_mismatch": fit.first_mismatch,
            }),
        );
        obj.insert("clean".into(), json!(fit.clean));
    }
    Ok((out, table))
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Poincare { ty, matrix, rep, degree, rational, alternating } => {
            poincare(ty.as_deref(), matrix.as_deref(), rep, *degree, *rational, *alternating)
        }
        Command::Cone { alphas, lattice, verify_radius } => cone(alphas, lattice.as_deref(), *verify_radius),
        Command::Zeta { kind, file, series, closed_form } => zeta(*kind, file, *series, *closed_form),
        Command::Lefschetz { file, depth, tailed, probe } => lefschetz(file, *depth, *tailed, *probe),
        Command::Thin { file, max_position } => thin(file, *max_position),
        Command::Cusp { file, coeffs, pade } => cusp(file, *coeffs, pade.as_deref()),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("BLDGZETA_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("BLDGZETA_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure { code: "ThreadPool".into(), message: e.to_string() })
}

fn fail(f: &Failure, exit: u8) -> ExitCode {
    println!("{}", json!({"error": {"code": f.code, "message": f.message}}));
    ExitCode::from(exit)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::usage(e.to_string().trim_end()), 1),
    };
    if let Err(f) = configure_threads() {
        return fail(&f, 1);
    }
    panic::set_hook(Box::new(|_| {}));
    match panic::catch_unwind(AssertUnwindSafe(|| dispatch(&cli))) {
        Ok(Ok((value, table))) => {
            match cli.format {
                Format::Json => println!("{value}"),
                Format::Table => print!("{table}"),
            }
            ExitCode::SUCCESS
        }
        Ok(Err(f)) => fail(&f, 1),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal invariant violated".into());
            println!("{}", json!({"error": {"code": "InternalError", "message": msg, "argv": argv}}));
            ExitCode::from(2)
        }
    }
}
