//! `tropskel`: batch interface over the tropskel engine.
//!
//! Commands read JSON inputs, run the polyhedral builders and criteria, and
//! emit deterministic text or JSON reports. Exit codes: 0 criterion passes
//! (or is vacuous), 1 criterion fails (witnesses printed), 2 input or
//! validation error.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tropskel::criteria::{
    check_continuity, check_limit_hypothesis, check_proper, check_skeleton_closed, Status, Verdict,
};
use tropskel::error::Error;
use tropskel::hk::{build_hk, validate_st_formula};
use tropskel::json::{ComplexJson, FanJson, HkJson, PolynomialJson, VerdictJson};
use tropskel::polyhedron::{union_covers, Polyhedron};
use tropskel::tropical::{extend_to_orbits, trop_hypersurface, ExtendedTropicalComplex, Mult};

mod par;

#[derive(Parser)]
#[command(
    name = "tropskel",
    version,
    about = "polyhedral criteria for tropicalizations over toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Explain, per witness, which criterion hypothesis failed.
    #[arg(long)]
    explain: bool,
    /// Worker threads for per-cone checks; results are collected in
    /// deterministic order regardless of the value.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Cross-validate derived strata against recomputation from the dense
    /// stratum before running checks.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Tropicalize a hypersurface: polynomial JSON in, dense complex out.
    Hypersurface {
        poly: PathBuf,
        /// Write the dense-stratum complex JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Extend a dense complex across the orbit strata of a fan.
    Extend {
        complex: PathBuf,
        fan: PathBuf,
        /// Write the extended complex JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run a criterion: proper, closed, continuity, or limit.
    Check {
        kind: CheckKind,
        complex: PathBuf,
        fan: PathBuf,
        /// Dense cell name (P1, P2, ...) for the limit check.
        #[arg(long)]
        cell: Option<String>,
        /// Cone id for the limit check.
        #[arg(long)]
        cone: Option<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Validate a Helm-Katz parameterizing complex file.
    Hk {
        input: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Proper,
    Closed,
    Continuity,
    Limit,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Hypersurface { poly, out, flags } => {
            cmd_hypersurface(&poly, out.as_deref(), &flags)
        }
        Command::Extend { complex, fan, out, flags } => {
            cmd_extend(&complex, &fan, out.as_deref(), &flags)
        }
        Command::Check { kind, complex, fan, cell, cone, flags } => {
            cmd_check(kind, &complex, &fan, cell.as_deref(), cone.as_deref(), &flags)
        }
        Command::Hk { input, flags } => cmd_hk(&input, &flags),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(
    path: &std::path::Path,
) -> Result<T, Box<dyn std::error::Error>> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?)
}

fn mult_str(m: &Mult) -> String {
    match m {
        Mult::Known(v) => v.to_string(),
        Mult::Unknown => "unknown".to_string(),
    }
}

fn describe_cell(p: &Polyhedron) -> String {
    let row = |a: &[tropskel::exact::Rat], b: &tropskel::exact::Rat, op: &str| {
        let coeffs: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("[{}] {op} {b}", coeffs.join(", "))
    };
    let mut parts: Vec<String> =
        p.equalities().iter().map(|(a, b)| row(a, b, "=")).collect();
    parts.extend(p.inequalities().iter().map(|(a, b)| row(a, b, ">=")));
    if parts.is_empty() {
        format!("R^{}", p.ambient_rank())
    } else {
        parts.join("; ")
    }
}

#[derive(Serialize)]
struct HypersurfaceReport {
    command: &'static str,
    ambient_rank: usize,
    cell_count: usize,
    dims: Vec<i64>,
    multiplicities: BTreeMap<String, usize>,
}

fn cmd_hypersurface(
    poly: &std::path::Path,
    out: Option<&std::path::Path>,
    flags: &CommonFlags,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pj: PolynomialJson = read_json(poly)?;
    let f = pj.to_poly()?;
    let cells = trop_hypersurface(&f)?;
    let complex = ComplexJson::dense_only(f.ambient_rank(), &cells);
    let text = serde_json::to_string_pretty(&complex)? + "\n";
    if let Some(path) = out {
        fs::write(path, &text)?;
    }

    let mut mult_table: BTreeMap<String, usize> = BTreeMap::new();
    for c in &cells {
        *mult_table.entry(mult_str(&c.mult)).or_insert(0) += 1;
    }
    if flags.json {
        let report = HypersurfaceReport {
            command: "hypersurface",
            ambient_rank: f.ambient_rank(),
            cell_count: cells.len(),
            dims: cells.iter().map(|c| c.poly.dimension()).collect(),
            multiplicities: mult_table,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "hypersurface tropicalization: {} cells in rank {}",
            cells.len(),
            f.ambient_rank()
        );
        for (i, c) in cells.iter().enumerate() {
            println!(
                "  P{}: dim {}, mult {}: {}",
                i + 1,
                c.poly.dimension(),
                mult_str(&c.mult),
                describe_cell(&c.poly)
            );
        }
        let table: Vec<String> =
            mult_table.iter().map(|(k, v)| format!("{v} cell(s) of mult {k}")).collect();
        println!("multiplicity table: {}", table.join(", "));
        if out.is_none() {
            println!("{text}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_complex(
    complex: &std::path::Path,
    fan: &std::path::Path,
) -> Result<ExtendedTropicalComplex, Box<dyn std::error::Error>> {
    let cj: ComplexJson = read_json(complex)?;
    let fj: FanJson = read_json(fan)?;
    let fan = fj.to_fan()?;
    Ok(cj.to_complex(&fan)?)
}

/// The strict cross-check: derived strata must reproduce the closure formula
/// from the dense stratum, as equality of supports in both directions.
fn strict_validate(etc: &ExtendedTropicalComplex) -> Result<(), Error> {
    let recomputed = extend_to_orbits(etc.dense_stratum(), &etc.fan)?;
    for fc in etc.fan.cones() {
        let got: Vec<Polyhedron> = etc.stratum(&fc.id).iter().map(|c| c.poly.clone()).collect();
        let want: Vec<Polyhedron> =
            recomputed.stratum(&fc.id).iter().map(|c| c.poly.clone()).collect();
        if got.is_empty() != want.is_empty() {
            return Err(Error::DataInconsistent(format!(
                "stratum {}: emptiness disagrees with the closure formula",
                fc.id
            )));
        }
        if got.is_empty() {
            continue;
        }
        if !(union_covers(&got, &want)? && union_covers(&want, &got)?) {
            return Err(Error::DataInconsistent(format!(
                "stratum {}: support disagrees with the closure of the dense stratum",
                fc.id
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExtendReport {
    command: &'static str,
    strata: BTreeMap<String, usize>,
}

fn cmd_extend(
    complex: &std::path::Path,
    fan: &std::path::Path,
    out: Option<&std::path::Path>,
    flags: &CommonFlags,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cj: ComplexJson = read_json(complex)?;
    let fj: FanJson = read_json(fan)?;
    let fan = fj.to_fan()?;
    if cj.ambient_rank != fan.ambient_rank() {
        return Err(Box::new(Error::DimensionMismatch {
            expected: fan.ambient_rank(),
            got: cj.ambient_rank,
            context: "complex vs fan".into(),
        }));
    }
    // Resolving the strata through the fan validates every stratum key and
    // picks up the dense stratum whatever the zero cone is called.
    let input = cj.to_complex(&fan)?;
    let etc = extend_to_orbits(input.dense_stratum(), &fan)?;
    let out_json = ComplexJson::from_complex(&etc);
    let text = serde_json::to_string_pretty(&out_json)? + "\n";
    if let Some(path) = out {
        fs::write(path, &text)?;
    }
    if flags.json {
        let report = ExtendReport {
            command: "extend",
            strata: etc.strata.iter().map(|(k, v)| (k.clone(), v.len())).collect(),
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("extended complex over {} cones:", etc.fan.cones().len());
        for fc in etc.fan.cones() {
            let cells = etc.stratum(&fc.id);
            if cells.is_empty() {
                println!("  stratum {}: (empty)", fc.id);
            } else {
                let dims: Vec<String> =
                    cells.iter().map(|c| c.poly.dimension().to_string()).collect();
                println!(
                    "  stratum {}: {} cell(s), dims [{}]",
                    fc.id,
                    cells.len(),
                    dims.join(", ")
                );
            }
        }
        if out.is_none() {
            println!("{text}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// What an `--explain` line should say for each criterion.
fn explanation(criterion: &str) -> &'static str {
    match criterion {
        "proper-intersection" => {
            "hypothesis: every dense cell whose recession cone meets the cone's relative \
             interior projects onto the orbit stratum with dimension d - dim(cone)"
        }
        "skeleton-closed" => {
            "hypothesis: every maximal stratum cell reaching a smaller orbit projects onto \
             it with that stratum's dimension"
        }
        "section-continuity" => {
            "hypothesis: every dense cell reaching an orbit stratum projects onto it with \
             the stratum's dimension"
        }
        "limit-point" => {
            "hypothesis: the projected cell is d-maximal at every face sample point of its \
             projection"
        }
        _ => "hypothesis: see the criterion documentation",
    }
}

fn print_verdict(label: &str, v: &Verdict, flags: &CommonFlags) {
    let status = match v.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Vacuous => "VACUOUS",
        Status::InsufficientData => "INSUFFICIENT_DATA",
    };
    println!("{label}: {status}");
    for t in &v.trace {
        println!("    note: {t}");
    }
    if v.status == Status::Fail {
        for w in &v.witnesses {
            println!(
                "    witness (cone {}, cell {}): computed dim {}, required {}",
                w.cone, w.cell, w.computed_dim, w.required_dim
            );
            if flags.explain {
                println!("      {}", explanation(&v.criterion));
            }
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    command: &'static str,
    kind: String,
    results: Vec<NamedVerdict>,
    overall: String,
}

#[derive(Serialize)]
struct NamedVerdict {
    target: String,
    verdict: VerdictJson,
}

fn cmd_check(
    kind: CheckKind,
    complex: &std::path::Path,
    fan: &std::path::Path,
    cell: Option<&str>,
    cone: Option<&str>,
    flags: &CommonFlags,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let etc = load_complex(complex, fan)?;
    if flags.strict {
        strict_validate(&etc)?;
    }
    let mut results: Vec<(String, Verdict)> = Vec::new();
    match kind {
        CheckKind::Proper => {
            // One verdict per nonzero cone, evaluated in parallel when asked,
            // collected in fan order.
            let ids: Vec<String> = etc
                .fan
                .cones()
                .iter()
                .map(|c| c.id.clone())
                .filter(|id| id != etc.fan.zero_cone_id())
                .collect();
            let verdicts = par::ordered_map(flags.jobs, &ids, |id| check_proper(&etc, id))?;
            for (id, v) in ids.into_iter().zip(verdicts) {
                results.push((format!("cone {id}"), v));
            }
        }
        CheckKind::Closed => {
            results.push(("skeleton".into(), check_skeleton_closed(&etc, None)?));
        }
        CheckKind::Continuity => {
            results.push(("section".into(), check_continuity(&etc, None)?));
        }
        CheckKind::Limit => {
            let cell = cell.ok_or("check limit requires --cell")?;
            let cone = cone.ok_or("check limit requires --cone")?;
            let index = cell
                .strip_prefix('P')
                .and_then(|s| s.parse::<usize>().ok())
                .and_then(|i| i.checked_sub(1))
                .ok_or_else(|| format!("bad cell name {cell:?}; expected P1, P2, ..."))?;
            results.push((
                format!("cell {cell} into cone {cone}"),
                check_limit_hypothesis(&etc, index, cone)?,
            ));
        }
    }
    let insufficient = results.iter().any(|(_, v)| v.status == Status::InsufficientData);
    if insufficient {
        for (t, v) in &results {
            if v.status == Status::InsufficientData {
                eprintln!("error: {t}: {}", v.trace.join("; "));
            }
        }
        return Ok(ExitCode::from(2));
    }
    let overall_fail = results.iter().any(|(_, v)| !v.passed());
    let kind_name = match kind {
        CheckKind::Proper => "proper",
        CheckKind::Closed => "closed",
        CheckKind::Continuity => "continuity",
        CheckKind::Limit => "limit",
    };
    if flags.json {
        let report = CheckReport {
            command: "check",
            kind: kind_name.into(),
            results: results
                .iter()
                .map(|(t, v)| NamedVerdict {
                    target: t.clone(),
                    verdict: VerdictJson::from_verdict(v),
                })
                .collect(),
            overall: if overall_fail { "FAIL".into() } else { "PASS".into() },
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "criterion: {}",
            results.first().map(|(_, v)| v.criterion.as_str()).unwrap_or(kind_name)
        );
        for (t, v) in &results {
            print_verdict(&format!("  {t}"), v, flags);
        }
        println!("overall: {}", if overall_fail { "FAIL" } else { "PASS" });
    }
    Ok(if overall_fail { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

#[derive(Serialize)]
struct HkReport {
    command: &'static str,
    f_vector: Vec<usize>,
    connected_components: usize,
    st_formula: Vec<NamedVerdict>,
    overall: String,
}

fn cmd_hk(
    input: &std::path::Path,
    flags: &CommonFlags,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let hj: HkJson = read_json(input)?;
    let hk = build_hk(hj.to_input()?)?;
    let maximal: Vec<String> = hk.maximal_cells().iter().map(|s| s.to_string()).collect();
    let mut verdicts = Vec::new();
    for id in &maximal {
        if hk.input.mtrop.contains_key(id) {
            verdicts.push((id.clone(), validate_st_formula(&hk, id)?));
        }
    }
    let overall_fail = verdicts.iter().any(|(_, v)| !v.passed());
    if flags.json {
        let report = HkReport {
            command: "hk",
            f_vector: hk.f_vector(),
            connected_components: hk.connected_components(),
            st_formula: verdicts
                .iter()
                .map(|(t, v)| NamedVerdict {
                    target: t.clone(),
                    verdict: VerdictJson::from_verdict(v),
                })
                .collect(),
            overall: if overall_fail { "FAIL".into() } else { "PASS".into() },
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        let f: Vec<String> = hk.f_vector().iter().map(|v| v.to_string()).collect();
        println!("parameterizing complex: f-vector ({})", f.join(", "));
        println!("connected components: {}", hk.connected_components());
        for (t, v) in &verdicts {
            print_verdict(&format!("  skeletal multiplicity at {t}"), v, flags);
        }
        println!("overall: {}", if overall_fail { "FAIL" } else { "PASS" });
    }
    Ok(if overall_fail { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
