use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::circuits::{
    enumerate_circuits, exhaustive_imbalance, is_circuit, strictly_smaller_support, validate_walk, vector_ratio,
    walk_bfs, zero_rows, CircuitDecision, ConstraintSystem, EnumerationOptions, WalkOptions, WalkTrace,
};
use crate::coloring::{
    chromatic_number, coloring_system, difference_is_circuit, difference_vector, feasible_01_circuits_at,
    proper_colorings, proper_walk_bfs, reconfiguration_graph, two_step_construction, Adjacency, Coloring,
};
use crate::error::{Error, Result};
use crate::forest::{
    lower_bound_check, mixed_drop_search, noncircuit_smaller_circuit, rank_system, rank_system_capped,
    split_low_diameter, structure_recognizer, walk_forest_to_forest, DropKind, RankIndex, Route, SignedEdgeVector,
    StructureKind, DEFAULT_DROP_LIMIT,
};
use crate::gadgets::{
    gadget, gadget_with_family, verify_halving, zigzag_system, ConstraintFamilyKind, GadgetKind, ZigzagParams,
};
use crate::graph::{connected_graphs, graphs_up_to_isomorphism, Dsu, Graph};
use crate::ratmat::{kernel_basis, normalize_coprime, solve_unique, RatMatrix, RatVector, Rational};

use super::evidence::Certificate;
use super::{ingest_graph, Caps, ClaimId, Params, Report, Verdict};

const COLORING_SUBSET_CAP: usize = 8;

/// Parameter access that records the value used, so reports list defaults too.
struct Ctx<'a> {
    params: &'a Params,
    caps: &'a Caps,
    used: BTreeMap<String, String>,
}

impl<'a> Ctx<'a> {
    fn raw(&mut self, key: &str, default: &str) -> String {
        let v = self.params.get(key).unwrap_or(default).to_string();
        self.used.insert(key.to_string(), v.clone());
        v
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        let v = self.raw(key, &default.to_string());
        v.parse().map_err(|_| Error::BadParameter(format!("{key} expects an unsigned integer, got {v:?}")))
    }

    fn rational(&mut self, key: &str, default: &str) -> Result<Rational> {
        let v = self.raw(key, default);
        v.parse().map_err(|_| Error::BadParameter(format!("{key} expects a rational, got {v:?}")))
    }

    fn optional(&mut self, key: &str) -> Option<String> {
        let v = self.params.get(key)?.to_string();
        self.used.insert(key.to_string(), v.clone());
        Some(v)
    }

    fn graph(&mut self, key: &str, default: &str) -> Result<Graph> {
        let name = self.raw(key, default);
        let g = named_graph(&name)?;
        if g.vertex_count() > self.caps.max_vertices {
            return Err(Error::CapExceeded {
                cap: "max-vertices",
                limit: self.caps.max_vertices,
                requested: g.vertex_count(),
            });
        }
        Ok(g)
    }

    fn enumeration(&self) -> EnumerationOptions {
        EnumerationOptions { max_vars: self.caps.max_vars, ..Default::default() }
    }

    fn vertices(&self, key: &'static str, n: usize) -> Result<()> {
        if n > self.caps.max_vertices {
            return Err(Error::CapExceeded { cap: "max-vertices", limit: self.caps.max_vertices, requested: n });
        }
        let _ = key;
        Ok(())
    }

    fn coloring_cap(&self) -> usize {
        self.caps.subset_cap.unwrap_or(COLORING_SUBSET_CAP)
    }
}

/// `K4`, `P5` (vertices), `C6`, `star3` (leaves), `prism`, or a graph file.
pub fn named_graph(name: &str) -> Result<Graph> {
    let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    if name == "prism" {
        return Ok(Graph::triangular_prism());
    }
    if let Some(n) = name.strip_prefix("star").and_then(num) {
        return Ok(Graph::star(n));
    }
    if let Some(n) = name.strip_prefix('K').and_then(num) {
        return Ok(Graph::complete(n));
    }
    if let Some(n) = name.strip_prefix('P').and_then(num) {
        return Ok(Graph::path(n));
    }
    if let Some(n) = name.strip_prefix('C').and_then(num).filter(|&n| n >= 3) {
        return Ok(Graph::cycle(n));
    }
    if std::path::Path::new(name).is_file() {
        return ingest_graph(name);
    }
    Err(Error::BadParameter(format!("unknown graph {name:?}")))
}

/// Random forest: edges in shuffled order, each kept with probability 1/2 when it closes no cycle.
pub fn random_forest(g: &Graph, rng: &mut impl Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut dsu = Dsu::new(g.vertex_count());
    let mut f: Vec<usize> = order
        .into_iter()
        .filter(|&e| {
            let (u, v) = g.edge(e);
            rng.gen_bool(0.5) && dsu.union(u, v)
        })
        .collect();
    f.sort_unstable();
    f
}

struct Outcome {
    pass: bool,
    summary: Value,
    detail: Map<String, Value>,
    certificates: Vec<Certificate>,
    rerun: bool,
}

impl Outcome {
    fn new(pass: bool, summary: Value) -> Self {
        Outcome { pass, summary, detail: Map::new(), certificates: Vec::new(), rerun: false }
    }

    fn detail(mut self, key: &str, v: impl Serialize) -> Self {
        self.detail.insert(key.to_string(), serde_json::to_value(v).expect("serializable detail"));
        self
    }

    fn cert(mut self, c: Certificate) -> Self {
        self.certificates.push(c);
        self
    }

    fn certs(mut self, cs: impl IntoIterator<Item = Certificate>) -> Self {
        self.certificates.extend(cs);
        self
    }

    /// Adds a certificate that reruns the driver, for the exhaustive part of the claim.
    fn exhaustive(mut self) -> Self {
        self.rerun = true;
        self
    }
}

pub(super) fn run(id: ClaimId, params: &Params, caps: &Caps) -> Result<Report> {
    let mut ctx = Ctx { params, caps, used: BTreeMap::new() };
    let out = match id {
        ClaimId::Thm21 => gadget_claim(&mut ctx, GadgetKind::Thm21)?,
        ClaimId::Thm22 => gadget_claim(&mut ctx, GadgetKind::Thm22)?,
        ClaimId::Thm23 => gadget_claim(&mut ctx, GadgetKind::Thm23)?,
        ClaimId::Thm24 => gadget_claim(&mut ctx, GadgetKind::Thm24)?,
        ClaimId::Eq1 => eq1(&mut ctx)?,
        ClaimId::Colcir => colcir(&mut ctx)?,
        ClaimId::PropKem => prop_kem(&mut ctx)?,
        ClaimId::ColoringWalks => coloring_walks(&mut ctx)?,
        ClaimId::LongProperWalk => long_proper_walk(&mut ctx)?,
        ClaimId::TwoStep => two_step(&mut ctx)?,
        ClaimId::ColoringImbalance => coloring_imbalance(&mut ctx)?,
        ClaimId::UnitVector => unit_vector(&mut ctx)?,
        ClaimId::SingleDrop => single_drop(&mut ctx)?,
        ClaimId::Alts => alts(&mut ctx)?,
        ClaimId::Rooted => rooted(&mut ctx)?,
        ClaimId::Pseudo => pseudo(&mut ctx)?,
        ClaimId::Discon => discon(&mut ctx)?,
        ClaimId::DiameterDecomp => diameter_decomp(&mut ctx)?,
        ClaimId::NotACircuit => not_a_circuit(&mut ctx)?,
        ClaimId::Ub9 => upper_bound(&mut ctx, Route::General)?,
        ClaimId::Ub7 => upper_bound(&mut ctx, Route::Complete)?,
        ClaimId::Lb3 => lb3(&mut ctx)?,
        ClaimId::Zigzag => zigzag(&mut ctx)?,
    };
    if let Some(k) = params.keys().find(|k| !ctx.used.contains_key(*k)) {
        return Err(Error::BadParameter(format!("claim {} takes no parameter {k:?}", id.as_str())));
    }
    let mut certificates = out.certificates;
    if out.rerun {
        certificates.push(Certificate::Rerun {
            claim: id.as_str().to_string(),
            parameters: ctx.used.clone(),
            caps: caps.clone(),
            summary: out.summary.clone(),
        });
    }
    let mut evidence = Map::new();
    evidence.insert("summary".into(), out.summary);
    evidence.extend(out.detail);
    evidence.insert("certificates".into(), serde_json::to_value(certificates).expect("certificates serialize"));
    Ok(Report {
        claim: id,
        parameters: ctx.used,
        verdict: if out.pass { Verdict::Pass } else { Verdict::Fail },
        evidence: Value::Object(evidence),
        wall_time: None,
    })
}

fn gadget_claim(ctx: &mut Ctx, kind: GadgetKind) -> Result<Outcome> {
    let k = ctx.usize("k", 2)?;
    if k >= 63 {
        return Err(Error::BadParameter("k too large".into()));
    }
    let inst = match ctx.optional("family") {
        Some(f) => {
            let fam =
                ConstraintFamilyKind::parse(&f).ok_or_else(|| Error::BadParameter(format!("unknown family {f:?}")))?;
            gadget_with_family(kind, k, fam)?
        }
        None => gadget(kind, k)?,
    };
    let target = Rational::from_int(1 << k);
    let (rep, visited) = exhaustive_imbalance(&inst.system, &ctx.enumeration(), Some(&target))?;
    let halving = verify_halving(&inst);
    let reached = rep.kappa >= target;
    let summary = json!({
        "kappa": rep.kappa,
        "target": target,
        "reached": reached,
        "circuits_visited": visited,
        "enumeration_complete": !reached,
        "halving": halving.is_ok(),
        "kernel_dimension": halving.as_ref().map(|h| h.kernel_dimension).ok(),
        "edges": inst.graph.edge_count(),
        "rows": inst.system.m_b(),
    });
    let w = &rep.witness_circuit.vector;
    let (big, small) = rep.witness_indices;
    let out = Outcome::new(reached && halving.is_ok(), summary)
        .detail("gadget", inst.sidecar_json())
        .detail("witness_circuit", w)
        .detail("witness_entries", [&inst.system.variable_labels[big], &inst.system.variable_labels[small]])
        .cert(Certificate::circuit(&inst.system, w))
        .cert(Certificate::Ratio { vector: w.clone(), big, small, at_least: rep.kappa.clone() })
        .cert(Certificate::Relations {
            system: inst.system.to_json(),
            seed: inst.seed_vector.clone(),
            relations: inst.relations.clone(),
        });
    let out = match &halving {
        Err(c) => out.detail("halving_counterexample", c),
        Ok(_) => out,
    };
    // below target the whole circuit set was streamed; only a rerun can confirm the maximum
    Ok(if reached { out } else { out.exhaustive() })
}

fn eq1(ctx: &mut Ctx) -> Result<Outcome> {
    let a = ctx.rational("a", "1")?;
    let pairs = RatMatrix::from_i64_rows(3, &[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
    let rhs = vec![a.clone(); 3];
    let sol = solve_unique(&pairs, &rhs).ok_or_else(|| Error::BadInstance("pair-sum system is singular".into()))?;
    let half = &a / &Rational::from_int(2);
    let homogeneous: Vec<RatVector> = [[-1, 1, 1, 0], [-1, 1, 0, 1], [-1, 0, 1, 1]]
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
        .collect();
    let basis = kernel_basis(&RatMatrix::from_rows(4, homogeneous.clone()));
    let line = normalize_coprime(&basis[0]).expect("nonzero basis vector");
    let pass = sol.iter().all(|x| *x == half) && basis.len() == 1;
    let summary = json!({ "a": a, "b": sol[0], "c": sol[1], "d": sol[2], "kernel_dimension": basis.len() });
    Ok(Outcome::new(pass, summary)
        .detail("kernel_line_abcd", &line)
        .cert(Certificate::Solution { rows: pairs.row_iter().map(<[Rational]>::to_vec).collect(), rhs, solution: sol })
        .cert(Certificate::KernelLine { rows: homogeneous, vector: line }))
}

fn colcir(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.usize("n", 4)?;
    let palette = ctx.usize("palette", 3)?;
    if n * palette > ctx.caps.max_vars {
        return Err(Error::CapExceeded { cap: "max-vars", limit: ctx.caps.max_vars, requested: n * palette });
    }
    let (mut graphs, mut pairs, mut circuits, mut disagreements) = (0usize, 0usize, 0usize, Vec::new());
    let mut examples: Vec<Certificate> = Vec::new();
    let (mut seen_circuit, mut seen_non) = (false, false);
    for size in 1..=n {
        for g in connected_graphs(size) {
            graphs += 1;
            let sys = coloring_system(&g, palette);
            let cs = proper_colorings(&g, palette);
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    pairs += 1;
                    let (conn, _) = difference_is_circuit(&g, &cs[i], &cs[j])?;
                    let s = difference_vector(&cs[i], &cs[j]);
                    let decision = is_circuit(&sys, &s)?;
                    if decision.is_circuit() {
                        circuits += 1;
                    }
                    if conn != decision.is_circuit() {
                        disagreements
                            .push(json!({ "edges": g.edges(), "c1": cs[i].assignment, "c2": cs[j].assignment }));
                    }
                    match decision {
                        CircuitDecision::Circuit(_) if !seen_circuit && size > 1 => {
                            seen_circuit = true;
                            examples.push(Certificate::circuit(&sys, &s));
                        }
                        CircuitDecision::NotCircuit { witness } if !seen_non => {
                            seen_non = true;
                            examples.push(Certificate::NotCircuit { system: sys.to_json(), vector: s, witness });
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let summary = json!({
        "graphs": graphs, "pairs": pairs, "circuits": circuits,
        "non_circuits": pairs - circuits, "disagreements": disagreements.len(),
    });
    disagreements.truncate(5);
    Ok(Outcome::new(disagreements.is_empty(), summary)
        .detail("disagreement_examples", disagreements)
        .certs(examples)
        .exhaustive())
}

fn prop_kem(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.graph("graph", "prism")?;
    let palette = ctx.usize("palette", 3)?;
    let cap = ctx.coloring_cap();
    let sys = coloring_system(&g, palette);
    let (mut colorings, mut steps, mut multi, mut literal, mut violations) =
        (0usize, 0usize, 0usize, 0usize, Vec::new());
    let mut example = None;
    for c in proper_colorings(&g, palette) {
        colorings += 1;
        for s in feasible_01_circuits_at(&g, &c, cap)? {
            steps += 1;
            let mut t = WalkTrace::empty(crate::coloring::char_vector(&c));
            t.push(s.vector.clone(), Rational::one());
            let walk_ok = validate_walk(&sys, &t).is_ok();
            let ok = s.target.is_proper(&g) && s.conditions_hold && walk_ok;
            if !ok {
                violations.push(json!({ "from": c.assignment, "to": s.target.assignment }));
            }
            if !s.is_two_color() {
                multi += 1;
                if example.is_none() && ok {
                    example = Some(Certificate::walk(&sys, &t, Some(1), Some(1)));
                }
            }
            if s.literal_chain {
                literal += 1;
            }
        }
    }
    let summary = json!({
        "colorings": colorings, "circuit_steps": steps, "multi_color_steps": multi,
        "literal_chain_steps": literal, "violations": violations.len(), "subset_cap": cap,
    });
    violations.truncate(5);
    Ok(Outcome::new(violations.is_empty() && steps > 0, summary)
        .detail("violation_examples", violations)
        .certs(example)
        .exhaustive())
}

fn coloring_walks(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.graph("graph", "prism")?;
    let palette = ctx.usize("palette", 3)?;
    let n = ctx.usize("n", 4)?;
    let cap = ctx.coloring_cap();
    let circuit = reconfiguration_graph(&g, palette, Adjacency::Circuit, cap)?;
    let kempe = reconfiguration_graph(&g, palette, Adjacency::Kempe, cap)?;
    let mut swept = 0usize;
    let mut disconnected = Vec::new();
    for size in 1..=n {
        for h in graphs_up_to_isomorphism(size) {
            let chi = chromatic_number(&h);
            for p in chi..=chi + 1 {
                swept += 1;
                if reconfiguration_graph(&h, p, Adjacency::Circuit, cap)?.component_count() != 1 {
                    disconnected.push(json!({ "edges": h.edges(), "palette": p }));
                }
            }
        }
    }
    let summary = json!({
        "colorings": circuit.nodes.len(),
        "circuit_components": circuit.component_count(),
        "kempe_components": kempe.component_count(),
        "circuit_edges": circuit.edges.len(),
        "kempe_edges": kempe.edges.len(),
        "sweep_instances": swept,
        "sweep_disconnected": disconnected.len(),
    });
    let pass = circuit.component_count() == 1 && disconnected.is_empty();
    Ok(Outcome::new(pass, summary).detail("sweep_disconnected_examples", disconnected).exhaustive())
}

fn long_proper_walk(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.usize("n", 3)?;
    if n < 2 {
        return Err(Error::BadParameter("n must be at least 2".into()));
    }
    let g = Graph::complete(n);
    let c1 = Coloring::new((0..n).collect(), 2 * n)?;
    let c2 = Coloring::new((n..2 * n).collect(), 2 * n)?;
    let (dist, trace) = proper_walk_bfs(&g, &c1, &c2, ctx.coloring_cap())?;
    let sys = coloring_system(&g, 2 * n);
    let summary = json!({ "n": n, "palette": 2 * n, "distance": dist });
    Ok(Outcome::new(dist == n, summary).cert(Certificate::walk(&sys, &trace, None, Some(dist))).exhaustive())
}

fn two_step(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.usize("n", 4)?;
    let g = Graph::complete(n);
    let sys = coloring_system(&g, n);
    let cs = proper_colorings(&g, n);
    let (mut pairs, mut lengths, mut invalid) = (0usize, [0usize; 3], Vec::new());
    let mut example = None;
    for a in &cs {
        for b in cs.iter().filter(|b| *b != a) {
            pairs += 1;
            let t = two_step_construction(&g, a, b)?;
            let ok = t.len() <= 2 && validate_walk(&sys, &t).is_ok() && *t.end() == crate::coloring::char_vector(b);
            if ok {
                lengths[t.len()] += 1;
                if t.len() == 2 && example.is_none() {
                    example = Some(Certificate::walk(&sys, &t, None, Some(2)));
                }
            } else {
                invalid.push(json!({ "c1": a.assignment, "c2": b.assignment, "steps": t.len() }));
            }
        }
    }
    let summary = json!({ "n": n, "ordered_pairs": pairs, "one_step": lengths[1], "two_step": lengths[2], "invalid": invalid.len() });
    invalid.truncate(5);
    Ok(Outcome::new(invalid.is_empty(), summary).detail("invalid_examples", invalid).certs(example).exhaustive())
}

fn coloring_imbalance(ctx: &mut Ctx) -> Result<Outcome> {
    let k = ctx.usize("k", 3)?;
    let inst = gadget(GadgetKind::Coloring, k)?;
    let sys = &inst.system;
    let halving = verify_halving(&inst);
    let zero = zero_rows(sys, &inst.seed_vector);
    let basis = kernel_basis(&sys.a.vstack(&sys.ineq.select_rows(&zero)));
    let mut found = None;
    for h in &basis {
        let h = normalize_coprime(h).expect("basis vectors are nonzero");
        if is_circuit(sys, &h)?.is_circuit() && strictly_not_larger(sys, &h, &inst.seed_vector) {
            found = Some(h);
            break;
        }
    }
    let (d0, d1) = (inst.designated_entries[0], inst.designated_entries[1]);
    let four = Rational::from_int(4);
    let ratio = found.as_ref().map(|h| (&h[d0] / &h[d1]).abs());
    let kappa = found.as_ref().and_then(|h| vector_ratio(h)).map(|r| r.0);
    let pass = halving.is_ok() && ratio.as_ref().is_some_and(|r| *r >= four);
    let summary = json!({
        "k": k,
        "variables": sys.n(),
        "kernel_dimension": basis.len(),
        "halving": halving.is_ok(),
        "designated_ratio": ratio,
        "kappa_of_circuit": kappa,
    });
    let mut out = Outcome::new(pass, summary).detail("gadget", inst.sidecar_json()).cert(Certificate::Relations {
        system: sys.to_json(),
        seed: inst.seed_vector.clone(),
        relations: inst.relations.clone(),
    });
    if let Some(h) = found {
        out = out
            .cert(Certificate::circuit(sys, &h))
            .cert(Certificate::Ratio { vector: h.clone(), big: d0, small: d1, at_least: four })
            .detail("circuit", h);
    }
    Ok(out)
}

/// `supp(B h) ⊆ supp(B g)`.
fn strictly_not_larger(sys: &ConstraintSystem, h: &[Rational], g: &[Rational]) -> bool {
    let zh = zero_rows(sys, h);
    zero_rows(sys, g).iter().all(|r| zh.contains(r))
}

fn sv(signs: &[i64]) -> SignedEdgeVector {
    SignedEdgeVector::from_signs(signs)
}

fn masks_of(x: &SignedEdgeVector) -> (u128, u128) {
    x.masks().expect("0/±1 vector")
}

/// Generic oracle certificate for a 0/±1 vector on a small graph.
fn rank_certificate(g: &Graph, x: &SignedEdgeVector) -> Result<Certificate> {
    let sys = rank_system(g)?;
    Ok(match is_circuit(&sys, &x.values)? {
        CircuitDecision::Circuit(_) => Certificate::circuit(&sys, &x.values),
        CircuitDecision::NotCircuit { witness } => {
            Certificate::NotCircuit { system: sys.to_json(), vector: x.values.clone(), witness }
        }
        CircuitDecision::NotInKernel => unreachable!("rank systems have no equalities"),
    })
}

fn graphs_up_to(n: usize) -> Vec<Graph> {
    (1..=n).flat_map(graphs_up_to_isomorphism).collect()
}

fn unit_vector(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.usize("n", 5)?;
    ctx.vertices("n", n)?;
    let (mut graphs, mut vectors, mut circuits, mut violations) = (0usize, 0usize, 0usize, Vec::new());
    for g in graphs_up_to(n) {
        graphs += 1;
        let idx = RankIndex::new(&g)?;
        for mask in 1u128..1 << g.edge_count() {
            for (p, m) in [(mask, 0), (0, mask)] {
                vectors += 1;
                let c = idx.is_circuit(p, m);
                circuits += c as usize;
                if c != (mask.count_ones() == 1) {
                    violations.push(json!({ "edges": g.edges(), "plus": p.to_string(), "minus": m.to_string() }));
                }
            }
        }
    }
    let summary =
        json!({ "graphs": graphs, "uniform_vectors": vectors, "circuits": circuits, "violations": violations.len() });
    violations.truncate(5);
    let p3 = Graph::path(3);
    Ok(Outcome::new(violations.is_empty(), summary)
        .detail("violation_examples", violations)
        .cert(rank_certificate(&p3, &sv(&[1, 0]))?)
        .cert(rank_certificate(&p3, &sv(&[1, 1]))?)
        .cert(rank_certificate(&p3, &sv(&[-1, -1]))?)
        .exhaustive())
}

/// Every 0/±1 vector over the edges of `g` with support size in `sizes`, as sign masks.
fn signed_vectors(m: usize, sizes: std::ops::RangeInclusive<usize>, mut f: impl FnMut(u128, u128)) {
    for supp in 1u128..1 << m {
        let s = supp.count_ones() as usize;
        if !sizes.contains(&s) {
            continue;
        }
        let bits: Vec<usize> = (0..m).filter(|&e| supp >> e & 1 == 1).collect();
        for signs in 0u32..1 << s {
            let plus =
                bits.iter().enumerate().filter(|(i, _)| signs >> i & 1 == 1).fold(0u128, |acc, (_, &e)| acc | 1 << e);
            f(plus, supp & !plus);
        }
    }
}

fn single_drop(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.usize("n", 5)?;
    let max_supp = ctx.usize("max-supp", 4)?;
    let cross = ctx.usize("cross-check-n", 4)?;
    ctx.vertices("n", n)?;
    let (mut vectors, mut edges, mut droppable) = (0usize, 0usize, 0usize);
    let (mut balanced_fail, mut unit_fail, mut cross_fail, mut crossed) = (Vec::new(), Vec::new(), 0usize, 0usize);
    for g in graphs_up_to(n) {
        let idx = RankIndex::new(&g)?;
        let sys = if g.vertex_count() <= cross { Some(rank_system(&g)?) } else { None };
        signed_vectors(g.edge_count(), 2..=max_supp, |p, m| {
            vectors += 1;
            let free = idx.unit_drop_edges(p, m);
            for e in (0..g.edge_count()).filter(|&e| (p | m) >> e & 1 == 1) {
                edges += 1;
                let bit = 1u128 << e;
                let dropped = idx.reduces((p & !bit, m & !bit), (p, m)).is_some();
                let unit = idx.reduces((bit, 0), (p, m)).is_some();
                droppable += dropped as usize;
                if dropped != (free & bit != 0) {
                    balanced_fail
                        .push(json!({ "edges": g.edges(), "plus": p.to_string(), "minus": m.to_string(), "edge": e }));
                }
                if dropped != unit {
                    unit_fail
                        .push(json!({ "edges": g.edges(), "plus": p.to_string(), "minus": m.to_string(), "edge": e }));
                }
                if let Some(sys) = &sys {
                    crossed += 1;
                    let x = signed_from_masks(g.edge_count(), p, m);
                    let mut y = x.values.clone();
                    y[e] = Rational::zero();
                    if strictly_smaller_support(sys, &y, &x.values) != dropped {
                        cross_fail += 1;
                    }
                }
            }
        });
    }
    let summary = json!({
        "vectors": vectors, "support_edges": edges, "droppable": droppable,
        "balanced_set_violations": balanced_fail.len(), "unit_vector_violations": unit_fail.len(),
        "oracle_cross_checks": crossed, "oracle_disagreements": cross_fail,
    });
    let pass = balanced_fail.is_empty() && unit_fail.is_empty() && cross_fail == 0;
    balanced_fail.truncate(5);
    unit_fail.truncate(5);
    let p5 = Graph::path(5);
    let x = sv(&[1, -1, -1, -1]);
    let mut y = x.values.clone();
    y[2] = Rational::zero();
    let sys = rank_system(&p5)?;
    Ok(Outcome::new(pass, summary)
        .detail("balanced_set_violation_examples", balanced_fail)
        .detail("unit_vector_violation_examples", unit_fail)
        .cert(Certificate::NotCircuit { system: sys.to_json(), vector: x.values, witness: y })
        .exhaustive())
}

fn signed_from_masks(m: usize, plus: u128, minus: u128) -> SignedEdgeVector {
    let p: Vec<usize> = (0..m).filter(|&e| plus >> e & 1 == 1).collect();
    let q: Vec<usize> = (0..m).filter(|&e| minus >> e & 1 == 1).collect();
    SignedEdgeVector::from_sets(m, &p, &q)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KindTally {
    pub recognized: usize,
    pub confirmed: usize,
}

/// Exhaustive pass over mixed-sign 0/±1 vectors on every graph up to `max_n` vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Sweep01 {
    pub max_n: usize,
    pub max_supp: usize,
    pub graphs: usize,
    pub vectors: usize,
    pub circuits: usize,
    pub non_circuits: usize,
    /// Non-circuits with a support edge in no balanced set.
    pub case1: usize,
    /// Remaining non-circuits with connected support split into two connected parts of diameter at most 5.
    pub case2: usize,
    pub neither: usize,
    pub max_part_diameter: usize,
    pub kinds: BTreeMap<String, KindTally>,
    pub examples_neither: Vec<Value>,
    pub examples_unconfirmed: Vec<Value>,
}

impl Sweep01 {
    fn tally(&self, kind: StructureKind) -> KindTally {
        self.kinds.get(&format!("{kind:?}")).cloned().unwrap_or_default()
    }
}

static SWEEPS: Mutex<Option<HashMap<(usize, usize), Sweep01>>> = Mutex::new(None);

/// Runs (or returns the remembered result of) the exhaustive 0/±1 sweep.
pub fn sweep_01(max_n: usize, max_supp: usize) -> Result<Sweep01> {
    if let Some(s) = SWEEPS.lock().expect("sweep cache").get_or_insert_with(HashMap::new).get(&(max_n, max_supp)) {
        return Ok(s.clone());
    }
    let mut s = Sweep01 { max_n, max_supp, ..Default::default() };
    for g in (2..=max_n).flat_map(graphs_up_to_isomorphism) {
        s.graphs += 1;
        let idx = RankIndex::new(&g)?;
        let m = g.edge_count();
        signed_vectors(m, 2..=max_supp, |p, q| {
            if p == 0 || q == 0 {
                return;
            }
            s.vectors += 1;
            let x = signed_from_masks(m, p, q);
            let circuit = idx.is_circuit(p, q);
            let kind = structure_recognizer(&g, &x);
            if kind != StructureKind::None {
                let t = s.kinds.entry(format!("{kind:?}")).or_default();
                t.recognized += 1;
                t.confirmed += circuit as usize;
                if !circuit && s.examples_unconfirmed.len() < 5 {
                    s.examples_unconfirmed.push(json!({ "edges": g.edges(), "vector": x.values }));
                }
            }
            if circuit {
                s.circuits += 1;
                return;
            }
            s.non_circuits += 1;
            if idx.unit_drop_edges(p, q) != 0 {
                s.case1 += 1;
                return;
            }
            let supp = x.support();
            match split_low_diameter(&g, &supp) {
                Some((_, (d1, d2))) if g.edge_components(&supp).len() == 1 => {
                    s.case2 += 1;
                    s.max_part_diameter = s.max_part_diameter.max(d1).max(d2);
                }
                _ => {
                    s.neither += 1;
                    if s.examples_neither.len() < 5 {
                        s.examples_neither.push(json!({ "edges": g.edges(), "vector": x.values }));
                    }
                }
            }
        });
    }
    SWEEPS.lock().expect("sweep cache").get_or_insert_with(HashMap::new).insert((max_n, max_supp), s.clone());
    Ok(s)
}

struct Instance {
    name: &'static str,
    graph: Graph,
    vector: SignedEdgeVector,
    expect_kind: StructureKind,
    expect_circuit: bool,
}

fn inst(name: &'static str, graph: Graph, signs: &[i64], expect_kind: StructureKind, expect_circuit: bool) -> Instance {
    Instance { name, graph, vector: sv(signs), expect_kind, expect_circuit }
}

/// Checks named instances and the sweep slice for `kinds`.
fn structure_claim(ctx: &mut Ctx, kinds: &[StructureKind], instances: Vec<Instance>) -> Result<Outcome> {
    let n = ctx.usize("n", 6)?;
    let max_supp = ctx.usize("max-supp", 6)?;
    ctx.vertices("n", n)?;
    let sweep = sweep_01(n, max_supp)?;
    let mut pass = true;
    let mut slice = Map::new();
    for &k in kinds {
        let t = sweep.tally(k);
        pass &= t.recognized == t.confirmed;
        slice.insert(format!("{k:?}"), json!(t));
    }
    let mut rows = Vec::new();
    let mut certs = Vec::new();
    for i in &instances {
        let kind = structure_recognizer(&i.graph, &i.vector);
        let circuit = RankIndex::new(&i.graph)?.is_circuit(masks_of(&i.vector).0, masks_of(&i.vector).1);
        let ok = kind == i.expect_kind && circuit == i.expect_circuit;
        pass &= ok;
        rows.push(json!({
            "name": i.name, "edges": i.graph.edges(), "vector": i.vector.values,
            "kind": format!("{kind:?}"), "circuit": circuit, "as_expected": ok,
        }));
        if i.graph.vertex_count() <= 8 {
            certs.push(rank_certificate(&i.graph, &i.vector)?);
        }
    }
    let summary = json!({ "sweep_vectors": sweep.vectors, "recognized": slice, "instances": instances.len() });
    Ok(Outcome::new(pass, summary).detail("instances", rows).certs(certs).exhaustive())
}

fn alts(ctx: &mut Ctx) -> Result<Outcome> {
    use StructureKind::*;
    let instances = vec![
        inst("alternating path, 4 edges", Graph::path(5), &[1, -1, 1, -1], AltPath, true),
        inst("alternating path, 6 edges", Graph::path(7), &[-1, 1, -1, 1, -1, 1], AltPath, true),
        inst("alternating 4-cycle", Graph::cycle(4), &[1, -1, 1, -1], AltEvenCycle, true),
        inst("alternating 6-cycle", Graph::cycle(6), &[1, -1, 1, -1, 1, -1], AltEvenCycle, true),
        inst("uniform 2-edge path", Graph::path(3), &[1, 1], None, false),
        inst("uniform 2 disjoint edges", Graph::from_edges(4, &[(0, 1), (2, 3)])?, &[-1, -1], None, false),
        inst("+ then --- path", Graph::path(5), &[1, -1, -1, -1], None, false),
    ];
    structure_claim(ctx, &[AltPath, AltEvenCycle], instances)
}

fn rooted(ctx: &mut Ctx) -> Result<Outcome> {
    use StructureKind::*;
    let instances = vec![
        inst("rooted 5-cycle", Graph::cycle(5), &[1, -1, 1, -1, 1], RootedAltCycle, true),
        inst("rooted 5-cycle, minus root", Graph::cycle(5), &[-1, 1, -1, 1, -1], RootedAltCycle, true),
        inst("rooted 7-cycle", Graph::cycle(7), &[1, -1, 1, -1, 1, -1, 1], RootedAltCycle, true),
        inst("rooted 3-cycle", Graph::cycle(3), &[1, -1, 1], None, false),
    ];
    structure_claim(ctx, &[RootedAltCycle], instances)
}

fn pseudo(ctx: &mut Ctx) -> Result<Outcome> {
    use StructureKind::*;
    let instances = vec![
        inst("pseudo path 2-2-2-2", Graph::path(9), &[1, 1, -1, -1, 1, 1, -1, -1], PseudoAltPath, true),
        inst("pseudo path 3-2-2-3", Graph::path(11), &[-1, -1, -1, 1, 1, -1, -1, 1, 1, 1], PseudoAltPath, true),
        inst("pseudo cycle 2-3-2-3", Graph::cycle(10), &[1, 1, -1, -1, -1, 1, 1, -1, -1, -1], PseudoAltCycle, true),
        inst(
            "7-cycle 2-2-2-1, circuit outside the recognized shapes",
            Graph::cycle(7),
            &[1, 1, -1, -1, 1, 1, -1],
            None,
            true,
        ),
    ];
    structure_claim(ctx, &[PseudoAltPath, PseudoAltCycle], instances)
}

fn discon(ctx: &mut Ctx) -> Result<Outcome> {
    use StructureKind::*;
    let lone = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (5, 6)])?;
    let two_paths = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)])?;
    let instances = vec![
        inst("alternating path and a lone + edge", lone, &[1, -1, 1, -1, 1], DisconnectedComposite, true),
        inst("two alternating 2-paths", two_paths, &[1, -1, -1, 1], DisconnectedComposite, true),
        inst(
            "+ edge and - edge apart",
            Graph::from_edges(4, &[(0, 1), (2, 3)])?,
            &[1, -1],
            DisconnectedComposite,
            true,
        ),
    ];
    structure_claim(ctx, &[DisconnectedComposite], instances)
}

/// Edges 12 23 34 45 56 36 37 17 over vertices 1..7, ids 0..7.
fn eight_edge_example() -> (Graph, SignedEdgeVector) {
    let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 5), (2, 6), (0, 6)]).expect("simple");
    (g, sv(&[1, 1, 1, 1, -1, -1, -1, -1]))
}

fn diameter_decomp(ctx: &mut Ctx) -> Result<Outcome> {
    let max_len = ctx.usize("max-length", 13)?;
    ctx.vertices("max-length", max_len + 1)?;
    let (g, x) = eight_edge_example();
    let w = mixed_drop_search(&g, &x, ctx.caps.subset_cap.unwrap_or(DEFAULT_DROP_LIMIT))?
        .ok_or_else(|| Error::BadInstance("no mixed drop on the 8-edge example".into()))?;
    let DropKind::MixedSet(s) = &w.kind else { unreachable!("mixed search returns mixed sets") };
    let idx = RankIndex::new(&g)?;
    let restrict = |keep: &dyn Fn(usize) -> bool| {
        let mut y = x.values.clone();
        for (e, v) in y.iter_mut().enumerate() {
            if !keep(e) {
                *v = Rational::zero();
            }
        }
        SignedEdgeVector::new(y)
    };
    let on_s = restrict(&|e| s.contains(&e));
    let off_s = restrict(&|e| !s.contains(&e));
    let parts_circuits = [&on_s, &off_s].iter().all(|y| {
        let (p, m) = masks_of(y);
        idx.is_circuit(p, m)
    });
    let smaller = noncircuit_smaller_circuit(&g, &x)?;
    let mut long = Vec::new();
    let mut long_ok = true;
    for len in 11..=max_len {
        let p = Graph::path(len + 1);
        let signs: Vec<i64> = (0..len).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let y = sv(&signs);
        let (a, b) = masks_of(&y);
        let pidx = RankIndex::new(&p)?;
        let circuit = pidx.is_circuit(a, b);
        let free = pidx.unit_drop_edges(a, b) == 0;
        let diam = p.edge_set_diameter(&y.support());
        long_ok &= circuit && free && diam.is_some_and(|d| d > 10);
        long.push(json!({ "edges": len, "diameter": diam, "no_droppable_edge": free, "circuit": circuit }));
    }
    let pass = parts_circuits && long_ok;
    let sys = rank_system(&g)?;
    let summary = json!({
        "drop_set": s, "restrictions_are_circuits": parts_circuits,
        "long_paths_checked": long.len(), "long_paths_ok": long_ok,
    });
    Ok(Outcome::new(pass, summary)
        .detail("drop_witness", &w)
        .detail("smaller_circuit", &smaller.vector)
        .detail("long_alternating_paths", long)
        .cert(Certificate::NotCircuit { system: sys.to_json(), vector: x.values.clone(), witness: w.y.values.clone() })
        .cert(Certificate::circuit(&sys, &on_s.values))
        .cert(Certificate::circuit(&sys, &off_s.values))
        .cert(Certificate::circuit(&sys, &smaller.vector))
        .exhaustive())
}

fn not_a_circuit(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.usize("n", 6)?;
    let max_supp = ctx.usize("max-supp", 6)?;
    ctx.vertices("n", n)?;
    let s = sweep_01(n, max_supp)?;
    let summary = json!({
        "graphs": s.graphs, "mixed_vectors": s.vectors, "circuits": s.circuits, "non_circuits": s.non_circuits,
        "case1": s.case1, "case2": s.case2, "neither": s.neither, "max_part_diameter": s.max_part_diameter,
    });
    let (g, x) = eight_edge_example();
    let w = mixed_drop_search(&g, &x, DEFAULT_DROP_LIMIT)?.ok_or_else(|| Error::BadInstance("no mixed drop".into()))?;
    let sys = rank_system(&g)?;
    Ok(Outcome::new(s.neither == 0, summary)
        .detail("neither_examples", &s.examples_neither)
        .cert(Certificate::NotCircuit { system: sys.to_json(), vector: x.values, witness: w.y.values })
        .exhaustive())
}

fn upper_bound(ctx: &mut Ctx, route: Route) -> Result<Outcome> {
    let (n, bound) = match route {
        Route::General => (ctx.usize("n", 5)?, 9),
        Route::Complete => (ctx.usize("n", 5)?, 7),
    };
    let pairs = ctx.usize("pairs", 50)?;
    ctx.vertices("n", n)?;
    let seed = ctx.caps.seed;
    ctx.used.insert("seed".into(), seed.to_string());
    let graphs = match route {
        Route::General => connected_graphs(n),
        Route::Complete => vec![Graph::complete(n)],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut walks, mut max_len, mut violations) = (0usize, 0usize, Vec::new());
    let mut longest: Option<(Graph, WalkTrace)> = None;
    for g in &graphs {
        let sys = crate::forest::mwf_system(g)?;
        for _ in 0..pairs {
            let f1 = random_forest(g, &mut rng);
            let f2 = random_forest(g, &mut rng);
            let t = walk_forest_to_forest(g, &f1, &f2, route)?;
            walks += 1;
            let ok = t.len() <= bound && validate_walk(&sys, &t).is_ok();
            if !ok {
                violations.push(json!({ "edges": g.edges(), "f1": f1, "f2": f2, "steps": t.len() }));
            }
            if longest.as_ref().is_none_or(|(_, l)| t.len() > l.len()) {
                longest = Some((g.clone(), t.clone()));
            }
            max_len = max_len.max(t.len());
        }
    }
    let summary = json!({
        "graphs": graphs.len(), "walks": walks, "max_steps": max_len, "bound": bound,
        "violations": violations.len(), "seed": seed,
    });
    let mut out = Outcome::new(violations.is_empty(), summary).detail("violation_examples", violations);
    if let Some((g, t)) = longest {
        out = out.cert(Certificate::walk(&crate::forest::mwf_system(&g)?, &t, None, Some(bound)));
    }
    Ok(out.exhaustive())
}

fn spanning_tree(g: &Graph) -> Vec<usize> {
    let mut dsu = Dsu::new(g.vertex_count());
    (0..g.edge_count()).filter(|&e| dsu.union(g.edge(e).0, g.edge(e).1)).collect()
}

fn lb3(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.graph("graph", "K4")?;
    rank_system_capped(&g, ctx.caps.max_vertices)?;
    let f = match ctx.optional("tree") {
        Some(t) => super::edge_list_arg(&t)?,
        None => {
            let t = spanning_tree(&g);
            ctx.used.insert("tree".into(), t.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
            t
        }
    };
    let rep = lower_bound_check(&g, &f, &ctx.enumeration())?;
    let summary = json!({
        "vertices": g.vertex_count(), "tree": f, "circuits": rep.circuits,
        "explored_states": rep.explored_states, "reached_within_two": rep.reached_within_two,
        "three_step_walk": rep.three_step_walk.is_some(),
    });
    let mut out = Outcome::new(!rep.reached_within_two, summary);
    if let Some(t) = &rep.three_step_walk {
        out = out.cert(Certificate::walk(&crate::forest::mwf_system(&g)?, t, Some(3), Some(3)));
    }
    Ok(out.exhaustive())
}

fn zigzag(ctx: &mut Ctx) -> Result<Outcome> {
    let m = ctx.rational("M", "2")?;
    let eps = ctx.rational("eps", "1")?;
    let p = ZigzagParams::new(m.clone(), eps.clone())?;
    let (sys, vertices) = zigzag_system(&p)?;
    let circuits = enumerate_circuits(&sys, &ctx.enumeration())?;
    let (zero_one, other): (Vec<_>, Vec<_>) = circuits.iter().cloned().partition(|c| c.is_01());
    let opts = WalkOptions { depth_cap: ctx.caps.depth_cap, ..Default::default() };
    let target = p.target();
    let trace = walk_bfs(&sys, &vertices[0], &target, &zero_one, &opts)?;
    let full = walk_bfs(&sys, &vertices[0], &target, &circuits, &opts)?;
    let ratio = Rational::from_bigint((&m / &eps).floor())
        .to_i64()
        .ok_or_else(|| Error::BadParameter("M/eps too large".into()))?;
    let bound = 2 * ratio;
    let pass = trace.len() as i64 >= bound && !other.is_empty();
    let summary = json!({
        "M": m, "eps": eps, "zero_one_circuits": zero_one.len(), "other_circuits": other.len(),
        "zero_one_walk_steps": trace.len(), "unrestricted_walk_steps": full.len(), "bound": bound,
    });
    let mut out = Outcome::new(pass, summary)
        .detail("vertices", &vertices)
        .detail("zero_one_circuits", zero_one.iter().map(|c| &c.vector).collect::<Vec<_>>())
        .detail("other_circuits", other.iter().map(|c| &c.vector).collect::<Vec<_>>())
        .cert(Certificate::walk(&sys, &trace, None, Some(trace.len())))
        .cert(Certificate::walk(&sys, &full, None, Some(full.len())));
    for c in other.iter().take(1) {
        out = out.cert(Certificate::circuit(&sys, &c.vector));
    }
    Ok(out.exhaustive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_names() {
        assert_eq!(named_graph("K4").unwrap().edge_count(), 6);
        assert_eq!(named_graph("P3").unwrap().edge_count(), 2);
        assert_eq!(named_graph("C5").unwrap().edge_count(), 5);
        assert_eq!(named_graph("star3").unwrap().vertex_count(), 4);
        assert_eq!(named_graph("prism").unwrap().edge_count(), 9);
        assert!(matches!(named_graph("C2"), Err(Error::BadParameter(_))));
        assert!(matches!(named_graph("Q7"), Err(Error::BadParameter(_))));
    }

    #[test]
    fn random_forests_are_sorted_forests() {
        let g = Graph::complete(6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_forest(&g, &mut rng);
            assert!(g.is_forest(&f) && f.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn parameters_are_recorded_and_checked() {
        let r = run(ClaimId::Eq1, &Params::new(), &Caps::default()).unwrap();
        assert_eq!(r.parameters.get("a").map(String::as_str), Some("1"));
        let bad = Params::new().with("b", 2);
        assert!(matches!(run(ClaimId::Eq1, &bad, &Caps::default()), Err(Error::BadParameter(_))));
        let neg = Params::new().with("k", "x");
        assert!(matches!(run(ClaimId::Thm24, &neg, &Caps::default()), Err(Error::BadParameter(_))));
    }

    #[test]
    fn signed_vector_counts() {
        let mut n = 0;
        signed_vectors(4, 2..=3, |p, m| {
            assert_eq!(p & m, 0);
            n += 1;
        });
        // C(4,2)·4 + C(4,3)·8
        assert_eq!(n, 56);
    }
}
