//! `ffht`: heights over Q(t) from the command line.
//!
//! Every subcommand reads an optional JSON input (`--input`, inline or a
//! path), lets flags override its fields, and prints `{"config", "result"}`.
//! Exit status: 0 success, 2 domain or input error, 3 budget exceeded.

mod input;
mod render;

use clap::{Parser, Subcommand};
use ffht::arith::fmt_q;
use ffht::constants::{constants_table, gotzmann_number, HilbertPolynomial};
use ffht::elliptic::{
    bad_places, canonical_height_dyn, canonical_height_local, duplication_extension, faltings_height,
    hindry_silverman_check, local_heights, torsion_points, ReductionKind, WeierstrassCurve,
};
use ffht::goodbasis::good_basis;
use ffht::green::{global_green_identity, green_value};
use ffht::projheights::weil_height;
use input::InputDoc;
use render::{Format, Report};
use serde::Serialize;
use serde_json::{json, Value};

const DEFAULT_K: usize = 12;

#[derive(Debug)]
pub struct CliError {
    code: String,
    message: String,
    offset: Option<usize>,
    exit: i32,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        CliError { code: code.into(), message: message.into(), offset: None, exit: 2 }
    }
}

impl From<ffht::Error> for CliError {
    fn from(e: ffht::Error) -> Self {
        let offset = match &e {
            ffht::Error::Parse { offset, .. } => Some(*offset),
            _ => None,
        };
        let exit = if matches!(e, ffht::Error::BudgetExceeded(_)) { 3 } else { 2 };
        CliError { code: e.code().into(), message: e.to_string(), offset, exit }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ffht", version, about = "Exact heights over the rational function field Q(t)")]
struct Cli {
    /// JSON input document, inline or a file path
    #[arg(long, global = true)]
    input: Option<String>,
    /// output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// iterations for escape-rate intervals (default 12)
    #[arg(long, global = true)]
    k: Option<usize>,
    /// size budget in coefficient digits (overrides FFHT_BUDGET)
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// a curve: inline JSON of a-invariants, or "legendre" / "kubert5"
    #[arg(long, global = true)]
    curve: Option<String>,
    /// comma-separated coordinates
    #[arg(long, global = true, allow_hyphen_values = true)]
    point: Option<String>,
    /// a place: "inf" or a monic irreducible polynomial in t
    #[arg(long, global = true)]
    place: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Cmd {
    /// Weil height of a projective point
    Weil,
    /// invariants, bad places and reduction types
    CurveInfo,
    /// exact local-height total against the dynamical interval
    CanonicalHeight,
    /// local heights at every place where they can be nonzero
    LocalHeights,
    /// the K-rational torsion subgroup
    Torsion {
        #[arg(long)]
        max_order: Option<u32>,
    },
    /// stable Faltings height
    Faltings,
    /// Faltings height against the Arakelov-type bound
    ArakelovCheck,
    /// pairwise local-height average against (1/12) log+|j|_v
    HindrySilverman,
    /// g_n at one place for a tuple
    Green {
        #[arg(long)]
        n: Option<u32>,
    },
    /// sum over places of g_n against the average canonical height
    GreenGlobal {
        #[arg(long)]
        n: Option<u32>,
    },
    /// Gotzmann number of a Hilbert polynomial
    Gotzmann {
        #[arg(long)]
        poly: Option<String>,
    },
    /// table of effective constants over a (d, g) grid
    Constants {
        /// comma-separated polarization degrees
        #[arg(long)]
        d: Option<String>,
        /// comma-separated dimensions
        #[arg(long)]
        g: Option<String>,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Weil => "weil",
            Cmd::CurveInfo => "curve-info",
            Cmd::CanonicalHeight => "canonical-height",
            Cmd::LocalHeights => "local-heights",
            Cmd::Torsion { .. } => "torsion",
            Cmd::Faltings => "faltings",
            Cmd::ArakelovCheck => "arakelov-check",
            Cmd::HindrySilverman => "hindry-silverman",
            Cmd::Green { .. } => "green",
            Cmd::GreenGlobal { .. } => "green-global",
            Cmd::Gotzmann { .. } => "gotzmann",
            Cmd::Constants { .. } => "constants",
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn resolve_budget(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("FFHT_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::new("invalid_input", format!("FFHT_BUDGET={s} is not a count"))),
        Err(_) => Ok(ffht::budget::DEFAULT_BUDGET),
    }
}

/// Folds the flags into the input document.
fn merge(cli: &Cli) -> Result<InputDoc, CliError> {
    let mut doc = input::load(cli.input.as_deref())?;
    if let Some(c) = &cli.curve {
        doc.curve = Some(input::curve_flag(c)?);
    }
    if let Some(p) = &cli.point {
        doc.point = Some(input::split_list(p));
    }
    if let Some(v) = &cli.place {
        doc.place = Some(v.clone());
    }
    if let Some(k) = cli.k {
        doc.k = Some(k);
    }
    match &cli.cmd {
        Cmd::Torsion { max_order: Some(m) } => doc.max_order = Some(*m),
        Cmd::Green { n: Some(n) } | Cmd::GreenGlobal { n: Some(n) } => doc.n = Some(*n),
        Cmd::Gotzmann { poly: Some(p) } => doc.poly = Some(p.clone()),
        Cmd::Constants { d, g } => {
            if let Some(d) = d {
                doc.d = Some(input::parse_u64_list(d)?);
            }
            if let Some(g) = g {
                doc.g = Some(input::parse_u64_list(g)?);
            }
        }
        _ => {}
    }
    Ok(doc)
}

fn curve_header(e: &WeierstrassCurve) -> Value {
    json!({
        "a_invariants": to_value(e),
        "discriminant": e.disc.to_string(),
        "j": e.j.to_string(),
    })
}

fn run(cmd: &Cmd, doc: &InputDoc) -> Result<Report, CliError> {
    let k = doc.k.unwrap_or(DEFAULT_K);
    let plain = |result: Value| Report { result, rows: None };
    let report = match cmd {
        Cmd::Weil => {
            let p = doc.projective_point()?;
            plain(json!({ "point": to_value(&p), "height": fmt_q(&weil_height(&p)) }))
        }
        Cmd::CurveInfo => {
            let e = doc.curve()?;
            let bad = bad_places(&e);
            let faltings = if e.is_isotrivial() { Value::Null } else { to_value(&faltings_height(&e)?) };
            let mut r = curve_header(&e);
            r["isotrivial"] = json!(e.is_isotrivial());
            r["bad_places"] = to_value(&bad);
            r["faltings"] = faltings;
            Report { result: r, rows: Some("bad_places") }
        }
        Cmd::CanonicalHeight => {
            let e = doc.curve()?;
            let p = doc.curve_point(&e)?;
            let exact = canonical_height_local(&e, &p)?;
            let dynamic = canonical_height_dyn(&e, &p, k)?;
            let iv = dynamic.interval();
            plain(json!({
                "point": to_value(&p),
                "exact": fmt_q(&exact),
                "dynamical": { "approx": fmt_q(&dynamic.approx), "error_bound": fmt_q(&dynamic.error_bound), "interval": to_value(&iv) },
                "contained": iv.contains(&exact),
            }))
        }
        Cmd::LocalHeights => {
            let e = doc.curve()?;
            let p = doc.curve_point(&e)?;
            let places = local_heights(&e, &p)?;
            let total = canonical_height_local(&e, &p)?;
            Report {
                result: json!({ "point": to_value(&p), "places": to_value(&places), "canonical_height": fmt_q(&total) }),
                rows: Some("places"),
            }
        }
        Cmd::Torsion { .. } => {
            let e = doc.curve()?;
            let t = torsion_points(&e, doc.max_order.unwrap_or(12))?;
            let mut r = to_value(&t);
            r["group_order"] = json!(t.group_order());
            r["max_point_order"] = json!(t.max_point_order());
            Report { result: r, rows: Some("points") }
        }
        Cmd::Faltings => plain(to_value(&faltings_height(&doc.curve()?)?)),
        Cmd::ArakelovCheck => plain(to_value(&ffht::elliptic::arakelov_check(&doc.curve()?)?)),
        Cmd::HindrySilverman => {
            let e = doc.curve()?;
            let pts = doc.curve_points(&e)?;
            let places = match doc.place()? {
                Some(v) => vec![v],
                None => bad_places(&e)
                    .into_iter()
                    .filter(|r| matches!(r.kind, ReductionKind::Multiplicative(_)))
                    .map(|r| r.place)
                    .collect(),
            };
            let reports = places.iter().map(|v| hindry_silverman_check(&e, &pts, v)).collect::<Result<Vec<_>, _>>()?;
            let pass = reports.iter().all(|r| r.pass);
            Report { result: json!({ "checks": to_value(&reports), "pass": pass }), rows: Some("checks") }
        }
        Cmd::Green { .. } | Cmd::GreenGlobal { .. } => {
            let e = if doc.has_curve() { Some(doc.curve()?) } else { None };
            let f = match (doc.map()?, &e) {
                (Some(f), _) => f,
                (None, Some(e)) => duplication_extension(e)?,
                (None, None) => return Err(CliError::new("missing_input", "a map or a curve is required")),
            };
            let target = doc.target(e.as_ref())?;
            let n = doc.n.ok_or_else(|| CliError::new("missing_input", "the basis degree n is required"))?;
            let basis = good_basis(&f, n, &target)?;
            let tuple = doc.tuple(e.as_ref())?;
            let sections: Vec<Value> = basis.sections.iter().map(|s| to_value(&s.descriptor)).collect();
            if matches!(cmd, Cmd::Green { .. }) {
                let v = doc.place()?.ok_or_else(|| CliError::new("missing_input", "a place is required"))?;
                let g = green_value(&basis, &f, &tuple, &v, k)?;
                plain(json!({ "place": to_value(&v), "map": to_value(&f), "basis": sections, "green": to_value(&g) }))
            } else {
                let g = global_green_identity(&basis, &f, &tuple, k)?;
                let mut r = to_value(&g);
                r["map"] = to_value(&f);
                r["basis"] = Value::Array(sections);
                if !g.applicable {
                    r["note"] = json!("identity not applicable: the evaluation determinant vanishes");
                }
                Report { result: r, rows: Some("per_place") }
            }
        }
        Cmd::Gotzmann { .. } => {
            let s = doc.poly.as_deref().ok_or_else(|| CliError::new("missing_input", "a Hilbert polynomial is required"))?;
            let p = HilbertPolynomial::parse(s)?;
            plain(json!({
                "poly": p.poly().to_string(),
                "decomposition": p.gotzmann_decomposition()?,
                "gotzmann_number": gotzmann_number(&p)?,
            }))
        }
        Cmd::Constants { .. } => {
            let ds = doc.d.clone().unwrap_or_else(|| (1..=5).collect());
            let gs = doc.g.clone().unwrap_or_else(|| vec![1, 2, 3]);
            if ds.contains(&0) || gs.contains(&0) {
                return Err(CliError::new("invalid_input", "d and g must be positive"));
            }
            Report { result: json!({ "rows": to_value(&constants_table(&ds, &gs)) }), rows: Some("rows") }
        }
    };
    Ok(report)
}

fn emit_error(e: &CliError) -> ! {
    let mut err = json!({ "code": e.code, "message": e.message });
    if let Some(o) = e.offset {
        err["offset"] = json!(o);
    }
    eprintln!("{}", json!({ "error": err }));
    std::process::exit(e.exit)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => emit_error(&CliError::new("usage", e.to_string().trim_end())),
    };
    let outcome = (|| {
        let budget = resolve_budget(cli.budget)?;
        ffht::budget::set_size_budget(budget);
        let doc = merge(&cli)?;
        let config = json!({
            "command": cli.cmd.name(),
            "format": cli.format,
            "k": doc.k.unwrap_or(DEFAULT_K),
            "budget": budget,
            "input": to_value(&doc),
        });
        let report = run(&cli.cmd, &doc)?;
        Ok::<_, CliError>(render::render(&config, &report, cli.format))
    })();
    match outcome {
        Ok(s) => print!("{s}"),
        Err(e) => emit_error(&e),
    }
}
