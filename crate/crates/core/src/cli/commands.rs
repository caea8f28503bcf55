use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::circuits::{
    enumerate_circuits, exhaustive_imbalance, is_circuit, validate_walk, walk_bfs, CircuitDecision, ConstraintSystem,
    EnumerationOptions, WalkOptions,
};
use crate::coloring::{
    coloring_system, difference_is_circuit, proper_walk_bfs, reconfiguration_graph, Adjacency, Coloring,
};
use crate::error::{Error, Result};
use crate::forest::{
    balanced_sets, classify_01, lower_bound_check, mwf_system, walk_forest_to_forest, Route, SignedEdgeVector,
};
use crate::gadgets::{
    gadget, gadget_with_family, verify_halving, zigzag_system, ConstraintFamilyKind, GadgetKind, ZigzagParams,
};
use crate::graph::Graph;
use crate::ratmat::{kernel_basis, normalize_coprime, rank, solve_unique, RatMatrix, RatVector, Rational};

use super::{
    edge_list_arg, emit, json_arg, named_graph, run_claim, verify_evidence_json, Caps, ClaimId, Format, Params,
};

#[derive(Parser, Debug)]
#[command(name = "circuitkit", version, about = "Circuits, circuit walks and reconfiguration on graph polyhedra")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add wall_time to claim reports (makes output time dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true)]
    max_vars: Option<usize>,
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    #[arg(long, global = true)]
    depth_cap: Option<usize>,
    #[arg(long, global = true)]
    subset_cap: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a claim driver; comma-separated values sweep a parameter.
    Claim {
        id: String,
        #[arg(short, long = "param", value_name = "KEY=VALUE")]
        param: Vec<String>,
    },
    /// List claim ids.
    Claims,
    /// Recheck the certificates in a saved report (or array of reports).
    VerifyEvidence { file: String },
    #[command(subcommand)]
    Ratmat(RatmatCmd),
    #[command(subcommand)]
    Circuits(CircuitsCmd),
    #[command(subcommand)]
    Gadgets(GadgetsCmd),
    #[command(subcommand)]
    Coloring(ColoringCmd),
    #[command(subcommand)]
    Forest(ForestCmd),
}

#[derive(Subcommand, Debug)]
enum RatmatCmd {
    /// Kernel basis, each vector scaled to coprime integers.
    Kernel {
        /// Rows as JSON, inline or a file.
        #[arg(long)]
        matrix: String,
    },
    Rank {
        #[arg(long)]
        matrix: String,
    },
    /// Unique solution of `M x = rhs`; fails when there is none or many.
    Solve {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        rhs: String,
    },
}

#[derive(Subcommand, Debug)]
enum CircuitsCmd {
    /// Decide whether a vector is a circuit; fails when it is not.
    Test {
        #[arg(long)]
        system: String,
        #[arg(long)]
        vector: String,
    },
    Enumerate {
        #[arg(long)]
        system: String,
    },
    Imbalance {
        #[arg(long)]
        system: String,
    },
    /// Shortest maximal-step walk between two feasible points.
    Walk {
        #[arg(long)]
        system: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Restrict steps to circuits with entries in {0, ±1}.
        #[arg(long)]
        zero_one: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum KindArg {
    Thm21,
    Thm22,
    Thm23,
    Thm24,
    Coloring,
}

impl From<KindArg> for GadgetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Thm21 => GadgetKind::Thm21,
            KindArg::Thm22 => GadgetKind::Thm22,
            KindArg::Thm23 => GadgetKind::Thm23,
            KindArg::Thm24 => GadgetKind::Thm24,
            KindArg::Coloring => GadgetKind::Coloring,
        }
    }
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Constraint family: induced5, paths4, size3, paths3, cycles4, stars2, maxstars.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Subcommand, Debug)]
enum GadgetsCmd {
    /// Emit the constraint system; `--sidecar` also writes the designated entries.
    Build {
        #[command(flatten)]
        gadget: GadgetArgs,
        #[arg(long)]
        sidecar: Option<String>,
    },
    /// Check the forced halving relations; fails when one breaks.
    Halving {
        #[command(flatten)]
        gadget: GadgetArgs,
    },
    Zigzag {
        #[arg(long = "M", default_value = "2")]
        m: String,
        #[arg(long, default_value = "1")]
        eps: String,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AdjacencyArg {
    Circuit,
    Kempe,
}

#[derive(Subcommand, Debug)]
enum ColoringCmd {
    /// Whether `c2 - c1` is a circuit; fails when it is not.
    CircuitTest {
        /// Graph file or name such as K4, C5, P3, star3, prism.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        palette: usize,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
    },
    /// Shortest walk through proper colorings.
    Walk {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        palette: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    ReconfigGraph {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        palette: usize,
        #[arg(long, value_enum, default_value_t = AdjacencyArg::Circuit)]
        adjacency: AdjacencyArg,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RouteArg {
    General,
    Complete,
}

#[derive(Subcommand, Debug)]
enum ForestCmd {
    /// Circuit, or a smaller-support witness with its structure.
    Classify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        vector: String,
    },
    /// Walk between two forests given as edge-id lists such as `0,2`.
    Walk {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value = "")]
        from: String,
        #[arg(long, default_value = "")]
        to: String,
        #[arg(long, value_enum, default_value_t = RouteArg::General)]
        route: RouteArg,
    },
    BalancedSets {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        vector: String,
    },
    /// Check that a spanning tree is not within two steps of 0; fails when it is.
    LowerBound {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        tree: Option<String>,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>, env_caps: Option<String>, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, env_caps, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("circuitkit: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::Parse { .. }
        | Error::Io(_)
        | Error::BadParameter(_)
        | Error::UnknownClaim(_)
        | Error::DimensionMismatch(_)
        | Error::LoopEdge { .. }
        | Error::DuplicateEdge { .. } => 2,
        _ => 1,
    }
}

fn caps(g: &Global, env: Option<String>) -> Result<Caps> {
    let mut c = Caps::default();
    if let Some(spec) = env.filter(|s| !s.trim().is_empty()) {
        c.apply_overrides(&spec)?;
    }
    if let Some(v) = g.max_vars {
        c.max_vars = v;
    }
    if let Some(v) = g.max_vertices {
        c.max_vertices = v;
    }
    if let Some(v) = g.depth_cap {
        c.depth_cap = v;
    }
    if let Some(v) = g.subset_cap {
        c.subset_cap = Some(v);
    }
    if let Some(v) = g.seed {
        c.seed = v;
    }
    Ok(c)
}

fn execute(cli: Cli, env_caps: Option<String>, out: &mut dyn Write) -> Result<bool> {
    let caps = caps(&cli.global, env_caps)?;
    let format = cli.global.format;
    let (doc, ok) = match cli.command {
        Command::Claim { id, param } => claim(&id, &param, &caps, cli.global.timing)?,
        Command::Claims => (json!(ClaimId::ALL.iter().map(|c| c.as_str()).collect::<Vec<_>>()), true),
        Command::VerifyEvidence { file } => {
            let reports = verify_evidence_json(&json_arg(&file)?)?;
            let ok = reports.iter().all(|r| r.verified);
            let doc = serde_json::to_value(&reports).expect("reports serialize");
            (if reports.len() == 1 { doc[0].clone() } else { doc }, ok)
        }
        Command::Ratmat(c) => ratmat(c)?,
        Command::Circuits(c) => circuits(c, &caps)?,
        Command::Gadgets(c) => gadgets(c, &caps)?,
        Command::Coloring(c) => coloring(c, &caps)?,
        Command::Forest(c) => forest(c, &caps)?,
    };
    out.write_all(&emit(&doc, format)).map_err(|e| Error::Io(e.to_string()))?;
    Ok(ok)
}

fn claim(id: &str, pairs: &[String], caps: &Caps, timing: bool) -> Result<(Value, bool)> {
    let id: ClaimId = id.parse()?;
    let points = Params::parse_pairs(pairs)?.expand();
    let mut reports = Vec::new();
    for p in &points {
        let start = Instant::now();
        let mut r = run_claim(id, p, caps)?;
        if timing {
            r.wall_time = Some(start.elapsed().as_secs_f64());
        }
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.passed());
    let mut docs: Vec<Value> = reports.iter().map(|r| serde_json::to_value(r).expect("report serializes")).collect();
    Ok((if docs.len() == 1 { docs.remove(0) } else { Value::Array(docs) }, ok))
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    serde_json::from_value(json_arg(arg)?).map_err(|e| Error::Parse { line: e.line(), msg: format!("{what}: {e}") })
}

fn matrix(arg: &str) -> Result<RatMatrix> {
    let rows: Vec<RatVector> = parse_json(arg, "matrix")?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("matrix rows differ in length".into()));
    }
    Ok(RatMatrix::from_rows(cols, rows))
}

fn system(arg: &str) -> Result<ConstraintSystem> {
    ConstraintSystem::from_json(&json_arg(arg)?)
}

fn vector(arg: &str) -> Result<RatVector> {
    parse_json(arg, "vector")
}

fn ratmat(c: RatmatCmd) -> Result<(Value, bool)> {
    Ok(match c {
        RatmatCmd::Kernel { matrix: m } => {
            let basis: Vec<RatVector> = kernel_basis(&matrix(&m)?)
                .iter()
                .map(|v| normalize_coprime(v).expect("basis vectors are nonzero"))
                .collect();
            (json!({ "dimension": basis.len(), "basis": basis }), true)
        }
        RatmatCmd::Rank { matrix: m } => (json!({ "rank": rank(&matrix(&m)?) }), true),
        RatmatCmd::Solve { matrix: m, rhs } => {
            let m = matrix(&m)?;
            let rhs = vector(&rhs)?;
            if rhs.len() != m.rows() {
                return Err(Error::DimensionMismatch(format!("{} right-hand sides for {} rows", rhs.len(), m.rows())));
            }
            let sol = solve_unique(&m, &rhs);
            (json!({ "unique": sol.is_some(), "solution": sol }), sol.is_some())
        }
    })
}

fn enumeration(caps: &Caps) -> EnumerationOptions {
    EnumerationOptions { max_vars: caps.max_vars, ..Default::default() }
}

fn circuits(c: CircuitsCmd, caps: &Caps) -> Result<(Value, bool)> {
    Ok(match c {
        CircuitsCmd::Test { system: s, vector: v } => {
            let (s, v) = (system(&s)?, vector(&v)?);
            match is_circuit(&s, &v)? {
                CircuitDecision::Circuit(c) => {
                    (json!({ "circuit": true, "canonical": c.vector, "zero_rows": c.zero_rows }), true)
                }
                CircuitDecision::NotCircuit { witness } => (json!({ "circuit": false, "witness": witness }), false),
                CircuitDecision::NotInKernel => (json!({ "circuit": false, "in_kernel": false }), false),
            }
        }
        CircuitsCmd::Enumerate { system: s } => {
            let cs = enumerate_circuits(&system(&s)?, &enumeration(caps))?;
            (json!(cs.iter().map(|c| &c.vector).collect::<Vec<_>>()), true)
        }
        CircuitsCmd::Imbalance { system: s } => {
            let (rep, visited) = exhaustive_imbalance(&system(&s)?, &enumeration(caps), None)?;
            (
                json!({ "kappa": rep.kappa, "witness": rep.witness_circuit.vector, "indices": rep.witness_indices, "circuits": visited }),
                true,
            )
        }
        CircuitsCmd::Walk { system: s, from, to, zero_one } => {
            let s = system(&s)?;
            let (from, to) = (vector(&from)?, vector(&to)?);
            let mut pool = enumerate_circuits(&s, &enumeration(caps))?;
            if zero_one {
                pool.retain(|c| c.is_01());
            }
            let opts = WalkOptions { depth_cap: caps.depth_cap, ..Default::default() };
            let t = walk_bfs(&s, &from, &to, &pool, &opts)?;
            (json!({ "steps": t.len(), "trace": t }), true)
        }
    })
}

fn gadget_instance(a: &GadgetArgs) -> Result<crate::gadgets::GadgetInstance> {
    match &a.family {
        Some(f) => {
            let fam =
                ConstraintFamilyKind::parse(f).ok_or_else(|| Error::BadParameter(format!("unknown family {f:?}")))?;
            gadget_with_family(a.kind.into(), a.k, fam)
        }
        None => gadget(a.kind.into(), a.k),
    }
}

fn rational(s: &str, what: &str) -> Result<Rational> {
    s.parse().map_err(|_| Error::BadParameter(format!("{what} expects a rational, got {s:?}")))
}

fn gadgets(c: GadgetsCmd, caps: &Caps) -> Result<(Value, bool)> {
    Ok(match c {
        GadgetsCmd::Build { gadget, sidecar } => {
            let inst = gadget_instance(&gadget)?;
            if let Some(path) = sidecar {
                let text = serde_json::to_string_pretty(&inst.sidecar_json()).expect("sidecar serializes") + "\n";
                std::fs::write(&path, text).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            }
            (inst.system.to_json(), true)
        }
        GadgetsCmd::Halving { gadget } => {
            let inst = gadget_instance(&gadget)?;
            match verify_halving(&inst) {
                Ok(r) => (json!({ "halving": true, "report": r, "sidecar": inst.sidecar_json() }), true),
                Err(c) => (json!({ "halving": false, "counterexample": c }), false),
            }
        }
        GadgetsCmd::Zigzag { m, eps } => {
            let p = ZigzagParams::new(rational(&m, "M")?, rational(&eps, "eps")?)?;
            let (sys, vertices) = zigzag_system(&p)?;
            let circuits = enumerate_circuits(&sys, &enumeration(caps))?;
            (
                json!({ "params": p, "system": sys.to_json(), "vertices": vertices,
                     "circuits": circuits.iter().map(|c| &c.vector).collect::<Vec<_>>() }),
                true,
            )
        }
    })
}

fn graph(arg: &str, caps: &Caps) -> Result<Graph> {
    let g = named_graph(arg)?;
    if g.vertex_count() > caps.max_vertices {
        return Err(Error::CapExceeded { cap: "max-vertices", limit: caps.max_vertices, requested: g.vertex_count() });
    }
    Ok(g)
}

/// Coloring JSON, inline or a file, or a comma list of colors by vertex.
fn coloring_arg(g: &Graph, palette: usize, arg: &str) -> Result<Coloring> {
    let t = arg.trim();
    let c = if t.starts_with('{') || std::path::Path::new(t).is_file() {
        Coloring::from_json(g, &json_arg(t)?)?
    } else {
        let colors = edge_list_arg(t).map_err(|_| Error::BadParameter(format!("bad coloring {t:?}")))?;
        Coloring::new(colors, palette)?
    };
    if c.assignment.len() != g.vertex_count() || c.palette != palette {
        return Err(Error::DimensionMismatch("coloring does not match the graph and palette".into()));
    }
    Ok(c)
}

fn coloring(c: ColoringCmd, caps: &Caps) -> Result<(Value, bool)> {
    let cap = caps.subset_cap.unwrap_or(8);
    Ok(match c {
        ColoringCmd::CircuitTest { graph: gs, palette, c1, c2 } => {
            let g = graph(&gs, caps)?;
            let (a, b) = (coloring_arg(&g, palette, &c1)?, coloring_arg(&g, palette, &c2)?);
            let (circuit, dg) = difference_is_circuit(&g, &a, &b)?;
            (json!({ "circuit": circuit, "difference_graph": dg }), circuit)
        }
        ColoringCmd::Walk { graph: gs, palette, from, to } => {
            let g = graph(&gs, caps)?;
            let (a, b) = (coloring_arg(&g, palette, &from)?, coloring_arg(&g, palette, &to)?);
            let (dist, t) = proper_walk_bfs(&g, &a, &b, cap)?;
            let valid = validate_walk(&coloring_system(&g, palette), &t).is_ok();
            (json!({ "steps": dist, "valid": valid, "trace": t }), valid)
        }
        ColoringCmd::ReconfigGraph { graph: gs, palette, adjacency } => {
            let g = graph(&gs, caps)?;
            let adj = match adjacency {
                AdjacencyArg::Circuit => Adjacency::Circuit,
                AdjacencyArg::Kempe => Adjacency::Kempe,
            };
            let r = reconfiguration_graph(&g, palette, adj, cap)?;
            (
                json!({ "components": r.component_count(), "nodes": r.nodes.iter().map(|c| &c.assignment).collect::<Vec<_>>(),
                     "edges": r.edges }),
                true,
            )
        }
    })
}

fn edge_vector(g: &Graph, arg: &str) -> Result<SignedEdgeVector> {
    let t = arg.trim();
    if t.starts_with('{') || std::path::Path::new(t).is_file() {
        return SignedEdgeVector::from_json(g, &json_arg(t)?);
    }
    let v: RatVector = parse_json(t, "edge vector")?;
    if v.len() != g.edge_count() {
        return Err(Error::DimensionMismatch(format!("{} entries for {} edges", v.len(), g.edge_count())));
    }
    Ok(SignedEdgeVector::new(v))
}

fn forest(c: ForestCmd, caps: &Caps) -> Result<(Value, bool)> {
    Ok(match c {
        ForestCmd::Classify { graph: gs, vector: v } => {
            let g = graph(&gs, caps)?;
            let x = edge_vector(&g, &v)?;
            let cls = classify_01(&g, &x)?;
            (json!({ "circuit": cls.is_circuit(), "classification": cls }), true)
        }
        ForestCmd::Walk { graph: gs, from, to, route } => {
            let g = graph(&gs, caps)?;
            let (f1, f2) = (edge_list_arg(&from)?, edge_list_arg(&to)?);
            let route = match route {
                RouteArg::General => Route::General,
                RouteArg::Complete => Route::Complete,
            };
            let t = walk_forest_to_forest(&g, &f1, &f2, route)?;
            let valid = validate_walk(&mwf_system(&g)?, &t).is_ok();
            (json!({ "steps": t.len(), "valid": valid, "trace": t }), valid)
        }
        ForestCmd::BalancedSets { graph: gs, vector: v } => {
            let g = graph(&gs, caps)?;
            let x = edge_vector(&g, &v)?;
            (serde_json::to_value(balanced_sets(&g, &x)?).expect("report serializes"), true)
        }
        ForestCmd::LowerBound { graph: gs, tree } => {
            let g = graph(&gs, caps)?;
            let f = match tree {
                Some(t) => edge_list_arg(&t)?,
                None => {
                    let mut dsu = crate::graph::Dsu::new(g.vertex_count());
                    (0..g.edge_count()).filter(|&e| dsu.union(g.edge(e).0, g.edge(e).1)).collect()
                }
            };
            let rep = lower_bound_check(&g, &f, &enumeration(caps))?;
            (json!({ "tree": f, "report": rep }), !rep.reached_within_two)
        }
    })
}
