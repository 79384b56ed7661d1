//! Command line front end. Every subcommand prints human-readable text
//! by default and a single line of JSON with `--json`; diagnostics go
//! to stderr. Exit codes: 0 success, 1 usage, 2 domain/range problems,
//! 3 verification failures.

use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::process;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use univjac_core::arith::{invariants, normalize_degree, poincare_exists};
use univjac_core::balanced::{
    enumerate_balanced_mode, format_ratio, is_d_special_graph, is_d_special_vine,
    is_properly_balanced, is_properly_balanced_mode, is_strictly_balanced_mode, Multidegree,
};
use univjac_core::compare::{compare_report, pic_j0};
use univjac_core::dualgraph::{DualGraph, SubcurveMode};
use univjac_core::families::{all_families, independence_matrix, IndependenceMatrix};
use univjac_core::picard::{
    boundary_table, chi_d, presentation, reduce_k, reduce_lambda, res_weight, theta_relation,
    topo_class, xi_element, xi_exponents, KClass, PicElement, Space,
};
use univjac_core::verify::{run_selected, CriterionResult, GridSpec};
use univjac_core::{Error, Result, GD};

#[derive(Parser)]
#[command(
    name = "univjac",
    version,
    about = "Exact Picard-group presentations for universal Jacobians over moduli of stable curves"
)]
struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GdArgs {
    /// Genus of the fibers (at least 3)
    #[arg(short = 'g', long = "genus")]
    g: i64,
    /// Relative degree
    #[arg(short = 'd', long = "degree")]
    d: i64,
}

impl GdArgs {
    fn gd(&self) -> Result<GD> {
        GD::new(self.g, self.d)
    }
}

#[derive(Args)]
struct GraphArg {
    /// Dual graph as JSON: inline, a file path, or - for stdin
    #[arg(long, value_name = "JSON|PATH|-")]
    graph: String,
}

impl GraphArg {
    fn load(&self) -> Result<DualGraph> {
        DualGraph::from_json(&read_payload(&self.graph, "graph")?)
    }
}

#[derive(Args)]
struct ElementArg {
    /// Picard class as JSON ({"space":...,"coeffs":{...}}): inline, a
    /// file path, or - for stdin
    #[arg(long = "class", value_name = "JSON|PATH|-")]
    element: String,
}

impl ElementArg {
    fn load(&self, gd: GD) -> Result<PicElement> {
        let elem: PicElement = serde_json::from_str(&read_payload(&self.element, "class")?)
            .map_err(|e| Error::Domain(format!("invalid class JSON: {e}")))?;
        elem.validate_labels_for(gd)?;
        Ok(elem)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Numeric invariants of a (genus, degree) pair
    Invariants {
        #[command(flatten)]
        gd: GdArgs,
        /// Also report whether an m-fold Poincare bundle exists
        #[arg(long, value_name = "M")]
        poincare: Option<i64>,
    },
    /// Classify a dual graph (stable, quasistable, ...)
    Classify(GraphArg),
    /// Contract exceptional components to the stable model
    Stabilize(GraphArg),
    /// Enumerate balanced multidegrees on a graph, or check one
    Balanced {
        #[command(flatten)]
        graph: GraphArg,
        /// Total degree
        #[arg(short = 'd', long = "degree")]
        d: i64,
        /// Use strict balance instead of proper balance
        #[arg(long)]
        strict: bool,
        /// Subcurves to test: connected (default) or all
        #[arg(long, value_name = "MODE", default_value = "connected")]
        mode: String,
        /// Check this comma-separated multidegree instead of enumerating
        #[arg(long, value_name = "D1,D2,...")]
        md: Option<String>,
    },
    /// Decide degree-speciality of a vine type or a stable graph
    Dspecial {
        /// Genus (required with --vine)
        #[arg(short = 'g', long = "genus")]
        g: Option<i64>,
        /// Relative degree
        #[arg(short = 'd', long = "degree")]
        d: i64,
        /// Vine type: genus of one component and number of nodes
        #[arg(long, num_args = 2, value_names = ["I", "K"], conflicts_with = "graph")]
        vine: Option<Vec<i64>>,
        /// Stable dual graph as JSON, a file path, or - for stdin
        #[arg(long, value_name = "JSON|PATH|-")]
        graph: Option<String>,
    },
    /// Boundary divisor table with representative multidegrees
    Boundary(GdArgs),
    /// Reduce a determinant class to the free basis
    Reduce {
        #[command(flatten)]
        gd: GdArgs,
        /// Twist exponent along the section direction
        #[arg(short = 'n', long, allow_hyphen_values = true, conflicts_with = "class")]
        n: Option<i64>,
        /// Twist exponent along the fiber direction
        #[arg(short = 'm', long, allow_hyphen_values = true, conflicts_with = "class")]
        m: Option<i64>,
        /// Reduce one of the canonical pairing classes (k10, k01, k-12)
        #[arg(long, value_name = "NAME")]
        class: Option<String>,
    },
    /// The distinguished weight-0 generator and its exponents
    Xi(GdArgs),
    /// Residual weight of the scalar automorphisms on an element
    Res {
        #[command(flatten)]
        gd: GdArgs,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Multiple of the principal polarisation cut out by an element
    Chi {
        #[command(flatten)]
        gd: GdArgs,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Coordinates in the topological basis (lambda, zeta, kappa_12)
    Topo {
        #[command(flatten)]
        gd: GdArgs,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Theta exponent and the pairing identity behind it
    Theta(GdArgs),
    /// Rank and basis of one of the four Picard groups
    Presentation {
        #[command(flatten)]
        gd: GdArgs,
        /// One of jac, j, barjac, barj
        #[arg(long, value_name = "SPACE")]
        space: String,
    },
    /// Test families with their boundary intersection rows
    Families {
        #[command(flatten)]
        gd: GdArgs,
        /// Re-check every constructed fiber before printing
        #[arg(long)]
        verify: bool,
    },
    /// Family-by-boundary matrix with its independence certificate
    Independence(GdArgs),
    /// Compare divisor lattices with the associated moduli scheme
    Compare(GdArgs),
    /// Degree-0 Picard group of the rigidified stack
    Picj0 {
        /// Genus of the fibers (at least 3)
        #[arg(short = 'g', long = "genus")]
        g: i64,
        /// Relative degree (the result does not depend on it)
        #[arg(short = 'd', long = "degree", default_value_t = 0)]
        d: i64,
    },
    /// Run the ten-part verification sweep
    Verify {
        /// Grid clauses, e.g. --grid g=3..8 d=0..max
        #[arg(long, num_args = 1.., value_name = "CLAUSE")]
        grid: Option<Vec<String>>,
        /// Run only these criteria, e.g. --only 1,5,9
        #[arg(long, value_name = "LIST", value_delimiter = ',')]
        only: Option<Vec<usize>>,
        /// Output format: pretty, json or tsv
        #[arg(long, value_name = "FMT", default_value = "pretty")]
        format: String,
        /// Write the report here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
}

fn read_payload(arg: &str, what: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Domain(format!("cannot read {what} from stdin: {e}")))?;
        Ok(s)
    } else if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg)
            .map_err(|e| Error::Domain(format!("cannot read {what} file `{arg}`: {e}")))
    }
}

fn emit_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output serialization cannot fail")
    );
}

/// Multiplicative rendering in basis-label order, e.g. `L10^12 * d0^-1`.
fn pretty_element(elem: &PicElement) -> String {
    if elem.is_zero() {
        return "1".to_string();
    }
    elem.coeffs()
        .iter()
        .map(|(label, c)| format!("{label}^{c}"))
        .collect::<Vec<_>>()
        .join(" * ")
}

fn pretty_multidegree(md: &[i64]) -> String {
    let inner = md
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("({inner})")
}

fn pretty_graph(graph: &DualGraph) -> String {
    let vertices = (0..graph.n_vertices())
        .map(|v| format!("{}({})", graph.id(v), graph.genus(v)))
        .collect::<Vec<_>>()
        .join(" ");
    let edges = graph
        .edges()
        .iter()
        .map(|&(a, b)| format!("{}-{}", graph.id(a), graph.id(b)))
        .collect::<Vec<_>>()
        .join(" ");
    format!("vertices: {vertices}\nedges: {edges}")
}

fn parse_mode(raw: &str) -> Result<SubcurveMode> {
    match raw {
        "connected" => Ok(SubcurveMode::ConnectedBothSides),
        "all" => Ok(SubcurveMode::All),
        other => Err(Error::Domain(format!(
            "unknown mode `{other}` (expected connected or all)"
        ))),
    }
}

fn parse_md(raw: &str) -> Result<Multidegree> {
    let parts: std::result::Result<Vec<i64>, _> =
        raw.split(',').map(|p| p.trim().parse::<i64>()).collect();
    parts
        .map(Multidegree)
        .map_err(|e| Error::Domain(format!("invalid multidegree `{raw}`: {e}")))
}

fn pretty_matrix(m: &IndependenceMatrix) -> String {
    let mut widths: Vec<usize> = m.cols.iter().map(|c| c.to_string().len()).collect();
    let name_width = m
        .rows
        .iter()
        .map(|r| r.family.to_string().len())
        .max()
        .unwrap_or(1);
    for row in &m.rows {
        for (ci, col) in m.cols.iter().enumerate() {
            widths[ci] = widths[ci].max(row.entries[col].to_string().len());
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{:name_width$}", "");
    for (ci, col) in m.cols.iter().enumerate() {
        let _ = write!(out, "  {:>w$}", col.to_string(), w = widths[ci]);
    }
    out.push('\n');
    for row in &m.rows {
        let _ = write!(out, "{:name_width$}", row.family.to_string());
        for (ci, col) in m.cols.iter().enumerate() {
            let _ = write!(out, "  {:>w$}", row.entries[col].to_string(), w = widths[ci]);
        }
        out.push('\n');
    }
    let _ = write!(out, "verdict: {}", m.verdict);
    out
}

fn render_verify(results: &[CriterionResult], format: &str) -> Result<String> {
    let mut out = String::new();
    match format {
        "json" => {
            out = serde_json::to_string(results).expect("report serialization cannot fail");
        }
        "tsv" => {
            out.push_str("index\tname\tpassed\tmillis\tdetail\n");
            for r in results {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.index, r.name, r.passed, r.millis, r.detail
                );
            }
            out.pop();
        }
        "pretty" => {
            for r in results {
                let _ = writeln!(
                    out,
                    "criterion {:>2}: {} [{:>5} ms] {} - {}",
                    r.index,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.millis,
                    r.name,
                    r.detail
                );
            }
            out.pop();
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown format `{other}` (expected pretty, json or tsv)"
            )))
        }
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::Invariants { gd, poincare } => {
            let p = gd.gd()?;
            let inv = invariants(p);
            let exists = poincare.map(|m| poincare_exists(p, m)).transpose()?;
            if cli.json {
                #[derive(serde::Serialize)]
                struct Out {
                    #[serde(flatten)]
                    invariants: univjac_core::arith::Invariants,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    poincare_multiplier: Option<i64>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    poincare_exists: Option<bool>,
                }
                emit_json(&Out {
                    invariants: inv,
                    poincare_multiplier: *poincare,
                    poincare_exists: exists,
                });
            } else {
                println!("g = {}, d = {}, 2g-2 = {}", gd.g, gd.d, inv.twog2);
                println!("k = {}", inv.k);
                println!("e = {}", inv.e);
                println!("gerbe order = {}", inv.gerbe_order);
                if let (Some(m), Some(e)) = (poincare, exists) {
                    println!(
                        "{m}-fold Poincare bundle: {}",
                        if e { "exists" } else { "does not exist" }
                    );
                }
            }
            Ok(0)
        }
        Cmd::Classify(arg) => {
            let class = arg.load()?.classify()?;
            if cli.json {
                emit_json(&serde_json::json!({ "class": class }));
            } else {
                println!("{class}");
            }
            Ok(0)
        }
        Cmd::Stabilize(arg) => {
            let stable = arg.load()?.stabilize()?;
            if cli.json {
                println!("{}", stable.to_json());
            } else {
                println!("{}", pretty_graph(&stable));
            }
            Ok(0)
        }
        Cmd::Balanced {
            graph,
            d,
            strict,
            mode,
            md,
        } => {
            let graph = graph.load()?;
            let mode = parse_mode(mode)?;
            match md {
                Some(raw) => {
                    let md = parse_md(raw)?;
                    if md.total() != *d {
                        return Err(Error::Domain(format!(
                            "multidegree sums to {}, not the requested degree {d}",
                            md.total()
                        )));
                    }
                    let check = is_properly_balanced_mode(&graph, &md, mode)?;
                    let strictly = if *strict && check.balanced {
                        Some(is_strictly_balanced_mode(&graph, &md, mode)?)
                    } else {
                        None
                    };
                    let balanced = if *strict {
                        strictly == Some(true)
                    } else {
                        check.balanced
                    };
                    if cli.json {
                        emit_json(&serde_json::json!({
                            "balanced": balanced,
                            "strict": strict,
                            "witness": check.witness,
                        }));
                    } else if balanced {
                        println!("balanced");
                    } else {
                        println!("not balanced");
                        if let Some(w) = &check.witness {
                            println!("witness: {}", serde_json::to_string(w).unwrap());
                        }
                    }
                    Ok(0)
                }
                None => {
                    let found = enumerate_balanced_mode(&graph, *d, *strict, mode)?;
                    if cli.json {
                        emit_json(&serde_json::json!({
                            "degree": d,
                            "strict": strict,
                            "multidegrees": found,
                        }));
                    } else {
                        for md in &found {
                            println!("{}", pretty_multidegree(&md.0));
                        }
                        eprintln!("{} multidegree(s)", found.len());
                    }
                    Ok(0)
                }
            }
        }
        Cmd::Dspecial { g, d, vine, graph } => {
            let (special, method) = match (vine, graph) {
                (Some(ik), None) => {
                    let g = g.ok_or_else(|| {
                        Error::Domain("--vine needs an explicit genus (-g)".into())
                    })?;
                    let gd = GD::new(g, *d)?;
                    (is_d_special_vine(gd, ik[0], ik[1])?, "divisibility")
                }
                (None, Some(src)) => {
                    let graph = DualGraph::from_json(&read_payload(src, "graph")?)?;
                    (is_d_special_graph(&graph, *d)?, "enumeration")
                }
                _ => {
                    return Err(Error::Domain(
                        "pass exactly one of --vine I K or --graph".into(),
                    ))
                }
            };
            if cli.json {
                emit_json(&serde_json::json!({ "special": special, "method": method }));
            } else {
                println!("{}", if special { "special" } else { "not special" });
            }
            Ok(0)
        }
        Cmd::Boundary(gd) => {
            let table = boundary_table(gd.gd()?);
            if cli.json {
                emit_json(&table);
            } else {
                for e in &table.entries {
                    println!(
                        "{:<6} vine ({}, {})  md {}{}",
                        e.label.to_string(),
                        e.vine.0,
                        e.vine.1,
                        pretty_multidegree(&e.multidegree),
                        if e.split { "  (split)" } else { "" }
                    );
                }
                eprintln!("{} boundary label(s)", table.count());
            }
            Ok(0)
        }
        Cmd::Reduce { gd, n, m, class } => {
            let p = gd.gd()?;
            let elem = match (n, m, class) {
                (_, _, Some(name)) => reduce_k(p, KClass::from_str(name)?),
                (Some(n), Some(m), None) => reduce_lambda(p, *n, *m)?,
                _ => {
                    return Err(Error::Domain(
                        "pass both -n and -m, or --class".into(),
                    ))
                }
            };
            if cli.json {
                emit_json(&elem);
            } else {
                println!("{}", pretty_element(&elem));
            }
            Ok(0)
        }
        Cmd::Xi(gd) => {
            let p = gd.gd()?;
            let (px, qx, big) = xi_exponents(p);
            let elem = xi_element(p);
            if cli.json {
                emit_json(&serde_json::json!({
                    "p": px,
                    "q": qx,
                    "gerbe_order": big,
                    "element": elem,
                }));
            } else {
                println!("Xi = {}  (p = {px}, q = {qx}, G = {big})", pretty_element(&elem));
            }
            Ok(0)
        }
        Cmd::Res { gd, element } => {
            let p = gd.gd()?;
            let elem = element.load(p)?;
            let weight = res_weight(p, &elem)?;
            if cli.json {
                emit_json(&serde_json::json!({ "weight": weight }));
            } else {
                println!("weight = {weight}");
            }
            Ok(0)
        }
        Cmd::Chi { gd, element } => {
            let p = gd.gd()?;
            let value = chi_d(p, &element.load(p)?)?;
            if cli.json {
                emit_json(&serde_json::json!({ "chi": value }));
            } else {
                println!("chi = {value}");
            }
            Ok(0)
        }
        Cmd::Topo { gd, element } => {
            let p = gd.gd()?;
            // j-basis elements are welcome: spell Xi out first
            let elem = element.load(p)?.expand_xi(p)?;
            let t = topo_class(p, &elem)?;
            if cli.json {
                emit_json(&t);
            } else {
                println!(
                    "lambda = {}, zeta = {}, kappa_12 = {}{}",
                    format_ratio(t.lambda),
                    format_ratio(t.zeta),
                    format_ratio(t.kappa_12),
                    if t.integral { " (integral)" } else { "" }
                );
                match t.eta {
                    Some(e) => println!("eta decomposition: lambda = {}, eta = {}", e.lambda, e.eta),
                    None => println!("eta decomposition: none (nonzero residual weight)"),
                }
            }
            Ok(0)
        }
        Cmd::Theta(gd) => {
            let t = theta_relation(gd.gd()?);
            if cli.json {
                emit_json(&t);
            } else {
                println!(
                    "exponent = {} (k = {}, e = {}): {}",
                    t.exponent,
                    t.k,
                    t.e,
                    if t.verified { "verified" } else { "NOT verified" }
                );
            }
            Ok(0)
        }
        Cmd::Presentation { gd, space } => {
            let pres = presentation(gd.gd()?, Space::from_str(space)?);
            if cli.json {
                emit_json(&pres);
            } else {
                println!(
                    "rank {} = {} open + {} boundary",
                    pres.rank,
                    pres.rank - pres.boundary_count,
                    pres.boundary_count
                );
                println!("basis: {}", pres.basis.join(" "));
                println!("residual weight image: {}", pres.res_image_generator);
            }
            Ok(0)
        }
        Cmd::Families { gd, verify } => {
            let (d0, shift) = normalize_degree(gd.gd()?);
            if shift != 0 {
                eprintln!(
                    "note: degree {} normalized to {d0} (shift by {shift} twists)",
                    gd.d
                );
            }
            let p = GD::new(gd.g, d0)?;
            let statuses = all_families(p)?;
            if *verify {
                for s in &statuses {
                    if let Some(r) = &s.report {
                        let check = is_properly_balanced(&r.graph, &r.multidegree)?;
                        if !check.balanced {
                            return Err(Error::Verification(format!(
                                "family {} carries an unbalanced fiber",
                                r.family
                            )));
                        }
                    }
                }
                eprintln!("all constructed fibers re-checked");
            }
            if cli.json {
                emit_json(&serde_json::json!({
                    "g": gd.g,
                    "d": d0,
                    "families": statuses,
                }));
            } else {
                for s in &statuses {
                    match &s.report {
                        Some(r) => {
                            let row = r
                                .row
                                .iter()
                                .map(|(col, e)| format!("{col}:{e}"))
                                .collect::<Vec<_>>()
                                .join(" ");
                            println!(
                                "{:<5} md {}  row [{}]  ({})",
                                r.family.to_string(),
                                pretty_multidegree(&r.multidegree.0),
                                row,
                                r.condition
                            );
                        }
                        None => println!(
                            "{:<5} not applicable: {}",
                            s.family.to_string(),
                            s.reason.as_deref().unwrap_or("")
                        ),
                    }
                }
            }
            Ok(0)
        }
        Cmd::Independence(gd) => {
            let m = independence_matrix(gd.gd()?)?;
            if cli.json {
                emit_json(&m);
            } else {
                println!("{}", pretty_matrix(&m));
            }
            Ok(0)
        }
        Cmd::Compare(gd) => {
            let r = compare_report(gd.gd()?);
            if cli.json {
                emit_json(&r);
            } else {
                println!(
                    "rank Cl = {}, rank Pic = {} ({} boundary labels)",
                    r.rank_cl_bar, r.rank_pic_bar, r.boundary_count
                );
                println!(
                    "elementary divisors: {:?}; cokernel: free rank {}, torsion {:?}",
                    r.elementary_divisors, r.coker_free_rank, r.coker_torsion
                );
                for c in &r.columns {
                    println!("  column {} ({}): cokernel {}", c.i, c.kind, c.coker);
                }
                println!(
                    "boundary map matches the pullback: {}",
                    if r.alpha_consistent { "yes" } else { "NO" }
                );
            }
            Ok(0)
        }
        Cmd::Picj0 { g, d } => {
            let pic = pic_j0(GD::new(*g, *d)?);
            if cli.json {
                emit_json(&pic);
            } else {
                let parts: Vec<String> = pic
                    .torsion
                    .iter()
                    .zip(&pic.relations)
                    .map(|(order, (label, _))| format!("Z/{order} on {label}"))
                    .chain(std::iter::once(match pic.free_rank {
                        1 => format!("Z on {}", pic.generators[1]),
                        r => format!("Z^{r} on {}", pic
                            .generators
                            .iter()
                            .map(|l| l.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")),
                    }))
                    .collect();
                println!("{}", parts.join(" + "));
            }
            Ok(0)
        }
        Cmd::Verify {
            grid,
            only,
            format,
            out,
        } => {
            let grid_spec = match grid {
                Some(clauses) => Some(GridSpec::parse(&clauses.join(" "))?),
                None => None,
            };
            let results = run_selected(grid_spec, only.as_deref());
            if results.is_empty() {
                return Err(Error::Domain(
                    "--only selected no criteria (valid indices are 1..=10)".into(),
                ));
            }
            let format = if cli.json && format == "pretty" {
                "json"
            } else {
                format.as_str()
            };
            let rendered = render_verify(&results, format)?;
            match out {
                Some(path) => {
                    fs::write(path, rendered + "\n")
                        .map_err(|e| Error::Domain(format!("cannot write `{path}`: {e}")))?;
                    eprintln!("report written to {path}");
                }
                None => println!("{rendered}"),
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                eprintln!("{failed} of {} criteria failed", results.len());
                Ok(3)
            } else {
                Ok(0)
            }
        }
    }
}

fn init_thread_pool() {
    #[cfg(feature = "parallel")]
    if let Ok(raw) = std::env::var("UNIVJAC_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid UNIVJAC_THREADS value `{raw}`"),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => 3,
        _ => 2,
    }
}

fn main() {
    // die silently on a closed pipe (e.g. `univjac ... | head`) instead of
    // panicking inside println!
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                process::exit(0);
            }
            eprint!("{e}");
            process::exit(1);
        }
    };
    init_thread_pool();
    match run(&cli) {
        Ok(code) => process::exit(code),
        Err(e) => {
            eprintln!("{e}");
            process::exit(exit_code(&e));
        }
    }
}
