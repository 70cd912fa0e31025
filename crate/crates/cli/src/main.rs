//! knotchar: exact stratification data of torus knot character varieties.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use knotchar_core::{
    brute_tr_census, build_incidence, chi_formula, chi_strata, circle_path, circle_point_census,
    circle_points, count_components, count_tr_intersections, enumerate_components,
    euler_from_graph, homology_n2, CirclePath, Component, EigenData, PointClass, SimplexPoint,
    StratumClass, TorusKnot,
};

const DEFAULT_MAX_MN: i64 = 10_000;

#[derive(Parser)]
#[command(name = "knotchar", version, about = "Exact stratification, counting and homology of torus knot character varieties", disable_help_subcommand = true)]
struct Cli {
    /// Emit compact JSON (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Emit indented JSON for reading.
    #[arg(long, global = true)]
    pretty: bool,
    /// Cap on mn for enumeration commands (overrides KNOTCHAR_MAX_MN);
    /// for `verify`, the sweep bound on n and m.
    #[arg(long, global = true)]
    max: Option<i64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Component counts and enumeration for every stratum class.
    Strata { n: i64, m: i64 },
    /// Euler characteristic with compact support, stratum sum vs formula.
    Euler { n: i64, m: i64 },
    /// Integral homology of the SU(3) character variety for n = 2, odd m.
    Homology { m: i64 },
    /// Closure-incidence graph with multiplicities.
    Incidence {
        n: i64,
        m: i64,
        /// Also write the graph in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// The circle traced in the reducible triangle by alpha = zeta_mn^k.
    Circle {
        n: i64,
        m: i64,
        k: i64,
        /// Write a deterministic SVG diagram of the triangle and circle.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run every formula-vs-oracle check for all coprime pairs up to --max.
    Verify,
}

#[derive(Serialize)]
struct Report {
    command: String,
    knot: Option<(i64, i64)>,
    payload: Value,
    version: String,
}

enum CmdError {
    /// Bad input: exit code 2.
    Usage(String),
    /// A module error or a failed verification: exit code 3.
    Verification(String, Value),
}

impl CmdError {
    fn verification(message: impl Into<String>) -> Self {
        CmdError::Verification(message.into(), Value::Null)
    }
}

fn max_mn(cli: &Cli) -> i64 {
    cli.max
        .or_else(|| std::env::var("KNOTCHAR_MAX_MN").ok()?.parse().ok())
        .unwrap_or(DEFAULT_MAX_MN)
}

fn parse_knot(n: i64, m: i64, cap: i64) -> Result<TorusKnot, CmdError> {
    let knot = TorusKnot::new(n, m).map_err(|e| CmdError::Usage(e.to_string()))?;
    if knot.mn() > cap {
        return Err(CmdError::verification(format!(
            "mn = {} exceeds the configured bound {cap}",
            knot.mn()
        )));
    }
    Ok(knot)
}

fn class_name(class: StratumClass) -> &'static str {
    match class {
        StratumClass::Tr => "Tr",
        StratumClass::PartialCylinder => "PartialCylinder",
        StratumClass::PartialMobius => "PartialMobius",
        StratumClass::Irr3a => "Irr3a",
        StratumClass::Irr3bA => "Irr3bA",
        StratumClass::Irr3bB => "Irr3bB",
    }
}

fn component_label(c: &Component) -> String {
    fn roots(rs: &[knotchar_core::Root]) -> String {
        rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
    }
    match &c.data {
        EigenData::TotallyReducible => "TR".into(),
        EigenData::Partial { eps, ups } => format!("Partial[eps={eps}; ups={ups}]"),
        EigenData::Irr3a { lambda, nu } => {
            format!("Irr3a[lambda={}; nu={}]", roots(lambda), roots(nu))
        }
        EigenData::Irr3bA { lambda, nu } => {
            format!("Irr3bA[lambda={lambda}; nu={}]", roots(nu))
        }
        EigenData::Irr3bB { nu, lambda } => {
            format!("Irr3bB[nu={nu}; lambda={}]", roots(lambda))
        }
    }
}

fn cmd_strata(knot: &TorusKnot) -> Result<Value, CmdError> {
    let mut counts = BTreeMap::new();
    let mut enumerated = BTreeMap::new();
    let mut components = BTreeMap::new();
    let mut agreement = true;
    for class in StratumClass::ALL {
        let count = count_components(knot, class);
        let comps = enumerate_components(knot, class);
        agreement &= comps.len() as i64 == count;
        counts.insert(class_name(class), count);
        enumerated.insert(class_name(class), comps.len() as i64);
        components.insert(
            class_name(class),
            comps.iter().map(component_label).collect::<Vec<_>>(),
        );
    }
    let payload = json!({
        "counts": counts,
        "enumerated": enumerated,
        "components": components,
        "agreement": agreement,
    });
    if !agreement {
        return Err(CmdError::Verification(
            "enumeration disagrees with closed-form counts".into(),
            payload,
        ));
    }
    Ok(payload)
}

fn cmd_euler(knot: &TorusKnot) -> Result<Value, CmdError> {
    let report = chi_strata(knot);
    let formula = chi_formula(knot).map_err(|e| CmdError::verification(e.to_string()))?;
    let agreement = report.total == formula;
    let payload = json!({
        "per_class": report.per_class,
        "total": report.total,
        "formula": formula,
        "agreement": agreement,
    });
    if !agreement {
        return Err(CmdError::Verification(
            "stratum sum disagrees with closed formula".into(),
            payload,
        ));
    }
    Ok(payload)
}

fn cmd_homology(m: i64) -> Result<Value, CmdError> {
    let profile = homology_n2(m).map_err(|e| CmdError::verification(e.to_string()))?;
    Ok(serde_json::to_value(profile).expect("serializable"))
}

fn cmd_incidence(knot: &TorusKnot, cap: i64, dot: Option<&PathBuf>) -> Result<Value, CmdError> {
    let graph = build_incidence(knot, cap).map_err(|e| CmdError::verification(e.to_string()))?;
    if let Some(path) = dot {
        std::fs::write(path, graph.to_dot())
            .map_err(|e| CmdError::verification(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut node_counts: BTreeMap<&str, i64> = BTreeMap::new();
    for node in &graph.nodes {
        let key = match node {
            knotchar_core::NodeKind::Component(_) => "components",
            knotchar_core::NodeKind::TrPoint { .. } => "points",
            knotchar_core::NodeKind::Circle { .. } => "circles",
        };
        *node_counts.entry(key).or_insert(0) += 1;
    }
    let euler = euler_from_graph(&graph);
    let formula = chi_formula(knot).map_err(|e| CmdError::verification(e.to_string()))?;
    let payload = json!({
        "summary": {
            "nodes": node_counts,
            "edges": graph.edges.len(),
            "euler": euler,
            "euler_formula": formula,
            "agreement": euler == formula,
        },
        "nodes": serde_json::to_value(&graph.nodes).expect("serializable"),
        "edges": serde_json::to_value(&graph.edges).expect("serializable"),
    });
    if euler != formula {
        return Err(CmdError::Verification(
            "graph Euler characteristic disagrees with closed formula".into(),
            payload,
        ));
    }
    Ok(payload)
}

fn cmd_circle(knot: &TorusKnot, k: i64, svg: Option<&PathBuf>) -> Result<Value, CmdError> {
    let path = circle_path(knot, k).map_err(|e| CmdError::verification(e.to_string()))?;
    let points = circle_points(knot, k).map_err(|e| CmdError::verification(e.to_string()))?;
    let census = circle_point_census(knot, k).map_err(|e| CmdError::verification(e.to_string()))?;
    if let Some(out) = svg {
        std::fs::write(out, render_svg(&path, &points))
            .map_err(|e| CmdError::verification(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(json!({
        "k": path.k,
        "census": census,
        "rational_points": points.len(),
        "boundary_hits": serde_json::to_value(&path.boundary_hits).expect("serializable"),
        "vertices": serde_json::to_value(&path.vertices).expect("serializable"),
    }))
}

/// Barycentric to Cartesian in an equilateral triangle of side 1000, with
/// the u3 = 1 corner on top. Coordinates stay rational until formatting.
fn svg_xy(u: &SimplexPoint) -> (f64, f64) {
    const HEIGHT: f64 = 866.025_403_784_438_6;
    let u2: f64 = *u.u[1].numer() as f64 / *u.u[1].denom() as f64;
    let u3: f64 = *u.u[2].numer() as f64 / *u.u[2].denom() as f64;
    let x = 1000.0 * (u2 + 0.5 * u3);
    let y = HEIGHT * (1.0 - u3);
    (x, y)
}

fn render_svg(path: &CirclePath, points: &[(SimplexPoint, PointClass)]) -> String {
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-20 -20 1040 910\">\n");
    s.push_str("  <polygon points=\"0.00,866.03 1000.00,866.03 500.00,0.00\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n");
    let _ = write!(s, "  <polyline points=\"");
    for v in path.vertices.iter().chain(path.vertices.first()) {
        let (x, y) = svg_xy(v);
        let _ = write!(s, "{x:.2},{y:.2} ");
    }
    s.pop();
    s.push_str("\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1.5\"/>\n");
    for (p, class) in points {
        let (x, y) = svg_xy(p);
        let color = match class {
            PointClass::Irr3aPoint => "#d62728",
            PointClass::Irr3bPoint => "#1f77b4",
            PointClass::ReduciblePoint => "#2ca02c",
        };
        let _ = writeln!(s, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"/>");
    }
    for hit in &path.boundary_hits {
        let (x, y) = svg_xy(hit);
        let _ = writeln!(
            s,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"8\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>"
        );
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_verify(max: i64, cap: i64) -> Result<Value, CmdError> {
    let mut checks: Vec<Value> = Vec::new();
    let mut failure: Option<Value> = None;
    let mut run = |name: &str, result: (i64, Option<String>)| {
        let (count, err) = result;
        let pass = err.is_none();
        checks.push(json!({"name": name, "cases": count, "pass": pass}));
        if let (Some(message), None) = (err, failure.as_ref()) {
            failure = Some(json!({"check": name, "counterexample": message}));
        }
    };

    let pairs: Vec<TorusKnot> = {
        let mut v = Vec::new();
        for n in 2..=max {
            for m in (n + 1)..=max {
                if let Ok(knot) = TorusKnot::new(n, m) {
                    v.push(knot);
                }
            }
        }
        v
    };

    run("chi_strata_vs_formula", {
        let mut count = 0;
        let mut err = None;
        for knot in &pairs {
            count += 1;
            if chi_strata(knot).total != chi_formula(knot).unwrap_or(i64::MIN) {
                err = Some(format!("{knot:?}"));
                break;
            }
        }
        (count, err)
    });

    run("enumeration_vs_counts", {
        let mut count = 0;
        let mut err = None;
        'outer: for knot in &pairs {
            count += 1;
            for class in StratumClass::ALL {
                if enumerate_components(knot, class).len() as i64 != count_components(knot, class)
                {
                    err = Some(format!("{knot:?} {class:?}"));
                    break 'outer;
                }
            }
        }
        (count, err)
    });

    run("tr_census_vs_formulas", {
        let mut count = 0;
        let mut err = None;
        for knot in pairs.iter().filter(|k| k.mn() <= cap) {
            count += 1;
            match brute_tr_census(knot, cap) {
                Ok(census)
                    if census.irr3a == count_tr_intersections(knot, StratumClass::Irr3a)
                        && census.irr3b
                            == count_tr_intersections(knot, StratumClass::Irr3bA) => {}
                _ => {
                    err = Some(format!("{knot:?}"));
                    break;
                }
            }
        }
        (count, err)
    });

    run("incidence_multiplicities", {
        let mut count = 0;
        let mut err = None;
        for knot in pairs.iter().filter(|k| k.mn() <= cap) {
            count += 1;
            match build_incidence(knot, cap) {
                Ok(graph) if euler_from_graph(&graph) == chi_formula(knot).unwrap_or(i64::MIN) => {
                }
                _ => {
                    err = Some(format!("{knot:?}"));
                    break;
                }
            }
        }
        (count, err)
    });

    run("circle_censuses", {
        let mut count = 0;
        let mut err = None;
        'outer: for knot in pairs
            .iter()
            .filter(|k| k.n() % 2 == 1 && k.m() % 2 == 1 && k.mn() <= cap.min(300))
        {
            let (n, m) = (knot.n(), knot.m());
            for k in 1..knot.mn() {
                if k % n == 0 || k % m == 0 {
                    continue;
                }
                count += 1;
                match circle_point_census(knot, k) {
                    Ok(c)
                        if c.irr3a == 3 * n * m - 6 * n - 6 * m + 12
                            && c.irr3b == 6 * n + 6 * m - 24 => {}
                    _ => {
                        err = Some(format!("{knot:?} k={k}"));
                        break 'outer;
                    }
                }
            }
        }
        (count, err)
    });

    run("homology_n2", {
        let mut count = 0;
        let mut err = None;
        for m in (3..=max).step_by(2) {
            count += 1;
            match homology_n2(m) {
                Ok(profile)
                    if profile.betti == vec![1, 0, (m - 1) * (m - 2) / 2]
                        && profile.torsion.iter().all(|t| t.is_empty()) => {}
                _ => {
                    err = Some(format!("m={m}"));
                    break;
                }
            }
        }
        (count, err)
    });

    let all_pass = failure.is_none();
    let payload = json!({"max": max, "checks": checks, "all_pass": all_pass});
    match failure {
        None => Ok(payload),
        Some(f) => Err(CmdError::Verification(
            format!("verification failed: {f}"),
            payload,
        )),
    }
}

fn run(cli: &Cli) -> Result<Report, CmdError> {
    let cap = max_mn(cli);
    let (command, knot, payload) = match &cli.command {
        Command::Strata { n, m } => {
            let knot = parse_knot(*n, *m, cap)?;
            ("strata", Some((*n, *m)), cmd_strata(&knot)?)
        }
        Command::Euler { n, m } => {
            let knot = parse_knot(*n, *m, cap)?;
            ("euler", Some((*n, *m)), cmd_euler(&knot)?)
        }
        Command::Homology { m } => ("homology", Some((2, *m)), cmd_homology(*m)?),
        Command::Incidence { n, m, dot } => {
            let knot = parse_knot(*n, *m, cap)?;
            ("incidence", Some((*n, *m)), cmd_incidence(&knot, cap, dot.as_ref())?)
        }
        Command::Circle { n, m, k, svg } => {
            let knot = parse_knot(*n, *m, cap)?;
            ("circle", Some((*n, *m)), cmd_circle(&knot, *k, svg.as_ref())?)
        }
        Command::Verify => {
            let max = cli.max.unwrap_or(12);
            ("verify", None, cmd_verify(max, DEFAULT_MAX_MN.min(900))?)
        }
    };
    Ok(Report {
        command: command.to_string(),
        knot,
        payload,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn emit(value: &impl Serialize, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            println!("{}", emit(&report, cli.pretty));
            ExitCode::SUCCESS
        }
        Err(CmdError::Usage(message)) => {
            eprintln!("{}", emit(&json!({"error": {"kind": "usage", "message": message}}), cli.pretty));
            ExitCode::from(2)
        }
        Err(CmdError::Verification(message, payload)) => {
            eprintln!(
                "{}",
                emit(
                    &json!({"error": {"kind": "verification", "message": message, "payload": payload}}),
                    cli.pretty
                )
            );
            ExitCode::from(3)
        }
    }
}
