//! One line per acceptance criterion. Criteria listed in `KNOWN_RED` are
//! expected to fail (see the README); any other failure fails the run.

mod common;

use std::time::Instant;

use circuitkit::circuits::{
    enumerate_circuits, exhaustive_imbalance, is_circuit, strictly_smaller_support, CircuitDecision, EnumerationMethod,
    EnumerationOptions,
};
use circuitkit::cli::{run_claim, sweep_01, verify_report, Caps, ClaimId, Params};
use circuitkit::coloring::{proper_walk_bfs, reconfiguration_graph, Adjacency, Coloring};
use circuitkit::forest::{classify_01, rank_system, Classification, DropKind, SignedEdgeVector};
use circuitkit::gadgets::{gadget, verify_halving, GadgetKind};
use circuitkit::graph::Graph;
use circuitkit::ratmat::{is_zero_vector, solve_unique, RatMatrix, Rational};

const KNOWN_RED: &[u32] = &[2];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Runs a claim and requires a pass whose certificates all recheck.
fn claim(id: ClaimId, params: &[(&str, &str)]) -> Result<serde_json::Value, String> {
    let p = params.iter().fold(Params::new(), |p, (k, v)| p.with(k, v));
    let r = run_claim(id, &p, &Caps::default()).map_err(|e| format!("{}: {e}", id.as_str()))?;
    let v = verify_report(&r).map_err(|e| e.to_string())?;
    let summary = r.evidence["summary"].clone();
    if !v.verified {
        return Err(format!(
            "{} {params:?}: verdict {:?}, certificates consistent {}: {summary}",
            id.as_str(),
            r.verdict,
            v.consistent
        ));
    }
    Ok(summary)
}

fn c1_oracle() -> Outcome {
    let brute = EnumerationOptions {
        max_bruteforce_rows: 24,
        ..EnumerationOptions::with_method(EnumerationMethod::SupportBruteForce)
    };
    let (mut circuits, mut witnesses) = (0, 0);
    for seed in 0..100 {
        let sys = common::random_system(seed);
        let a = enumerate_circuits(&sys, &EnumerationOptions::default()).map_err(|e| e.to_string())?;
        let b = enumerate_circuits(&sys, &brute).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("seed {seed}: methods disagree ({} vs {})", a.len(), b.len()));
        }
        for c in &a {
            if !is_circuit(&sys, &c.vector).unwrap().is_circuit() {
                return Err(format!("seed {seed}: enumerated vector rejected"));
            }
        }
        circuits += a.len();
        for pair in a.windows(2) {
            let g: Vec<Rational> = pair[0].vector.iter().zip(&pair[1].vector).map(|(x, y)| x + y).collect();
            if is_zero_vector(&g) {
                continue;
            }
            if let CircuitDecision::NotCircuit { witness } = is_circuit(&sys, &g).unwrap() {
                witnesses += 1;
                if !strictly_smaller_support(&sys, &witness, &g) {
                    return Err(format!("seed {seed}: witness support not smaller"));
                }
            }
        }
    }
    Ok(format!("100 systems, {circuits} circuits agree across methods, {witnesses} witnesses checked"))
}

fn c2_gadgets() -> Outcome {
    let runs = [
        (GadgetKind::Thm21, 1..=2),
        (GadgetKind::Thm22, 1..=3),
        (GadgetKind::Thm23, 1..=2),
        (GadgetKind::Thm24, 1..=3),
    ];
    let mut short = Vec::new();
    let mut seen = Vec::new();
    for (kind, ks) in runs {
        for k in ks {
            let inst = gadget(kind, k).map_err(|e| e.to_string())?;
            let target = Rational::from_int(1 << k);
            let (rep, _) = exhaustive_imbalance(&inst.system, &EnumerationOptions::default(), Some(&target))
                .map_err(|e| e.to_string())?;
            seen.push(format!("{kind:?}/{k}={}", rep.kappa));
            if rep.kappa < target {
                short.push(format!("{kind:?} k={k} kappa {} < {target}", rep.kappa));
            }
        }
        for k in 1..=4 {
            if verify_halving(&gadget(kind, k).map_err(|e| e.to_string())?).is_err() {
                short.push(format!("{kind:?} k={k} halving broken"));
            }
        }
    }
    check(
        short.is_empty(),
        format!("kappa {}; {}", seen.join(" "), if short.is_empty() { "all reached".into() } else { short.join("; ") }),
    )
}

fn c3_identity() -> Outcome {
    let m = RatMatrix::from_i64_rows(3, &[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
    for a in [Rational::from_int(1), Rational::from_int(-7), Rational::new(5, 3)] {
        let half = &a / &Rational::from_int(2);
        let sol = solve_unique(&m, &vec![a.clone(); 3]).ok_or("singular system")?;
        if sol.iter().any(|x| *x != half) {
            return Err(format!("a = {a}: got {sol:?}"));
        }
    }
    let s = claim(ClaimId::Eq1, &[])?;
    Ok(format!("b = c = d = a/2 for a in 1, -7, 5/3; kernel line {}", s["kernel_dimension"]))
}

fn c4_colcir() -> Outcome {
    let s = claim(ClaimId::Colcir, &[("n", "4"), ("palette", "3")])?;
    check(
        s["disagreements"] == 0,
        format!("{} pairs over {} graphs, {} disagreements", s["pairs"], s["graphs"], s["disagreements"]),
    )
}

fn c5_prism() -> Outcome {
    let prism = Graph::triangular_prism();
    let kempe = reconfiguration_graph(&prism, 3, Adjacency::Kempe, 8).map_err(|e| e.to_string())?.component_count();
    let circ = reconfiguration_graph(&prism, 3, Adjacency::Circuit, 8).map_err(|e| e.to_string())?.component_count();
    check(kempe > 1 && circ == 1, format!("Kempe components {kempe}, circuit components {circ}"))
}

fn c6_proper_walks() -> Outcome {
    let mut parts = Vec::new();
    for n in 2..=3 {
        let g = Graph::complete(n);
        let a = Coloring::new((0..n).collect(), 2 * n).unwrap();
        let b = Coloring::new((n..2 * n).collect(), 2 * n).unwrap();
        let (d, _) = proper_walk_bfs(&g, &a, &b, 8).map_err(|e| e.to_string())?;
        if d != n {
            return Err(format!("K{n}: distance {d}"));
        }
        parts.push(format!("K{n} distance {d}"));
    }
    for n in ["3", "4"] {
        let s = claim(ClaimId::TwoStep, &[("n", n)])?;
        parts.push(format!("K{n} {} pairs within 2", s["ordered_pairs"]));
    }
    Ok(parts.join(", "))
}

fn c7_coloring_imbalance() -> Outcome {
    let s = claim(ClaimId::ColoringImbalance, &[("k", "3")])?;
    Ok(format!("kernel dimension {}, designated ratio {}", s["kernel_dimension"], s["designated_ratio"]))
}

fn named_witnesses() -> Result<String, String> {
    let cases = [
        ("rooted 3-cycle", Graph::cycle(3), vec![1, -1, 1]),
        ("uniform 2-edge path", Graph::path(3), vec![1, 1]),
        ("uniform 2-edge path, minus", Graph::path(3), vec![-1, -1]),
        ("+--- path", Graph::path(5), vec![1, -1, -1, -1]),
    ];
    let mut out = Vec::new();
    for (name, g, signs) in cases {
        let x = SignedEdgeVector::from_signs(&signs);
        let sys = rank_system(&g).unwrap();
        match classify_01(&g, &x).map_err(|e| e.to_string())? {
            Classification::IsCircuit => return Err(format!("{name} classified as a circuit")),
            Classification::NonCircuit { witness, .. } => {
                if !strictly_smaller_support(&sys, &witness.y.values, &x.values) {
                    return Err(format!("{name}: witness does not shrink support"));
                }
                let DropKind::UnitEdge(e) = witness.kind else { return Err(format!("{name}: no droppable edge")) };
                out.push(format!("{name} drops edge {e}"));
            }
        }
    }
    Ok(out.join(", "))
}

fn c8_structures() -> Outcome {
    let sweep = sweep_01(6, 6).map_err(|e| e.to_string())?;
    let unconfirmed: Vec<String> = sweep
        .kinds
        .iter()
        .filter(|(_, t)| t.recognized != t.confirmed)
        .map(|(k, t)| format!("{k} {}/{}", t.confirmed, t.recognized))
        .collect();
    if !unconfirmed.is_empty() {
        return Err(format!("unconfirmed: {}", unconfirmed.join(", ")));
    }
    for id in [ClaimId::Alts, ClaimId::Rooted, ClaimId::Pseudo, ClaimId::Discon] {
        claim(id, &[])?;
    }
    let counts: Vec<String> = sweep.kinds.iter().map(|(k, t)| format!("{k} {}", t.recognized)).collect();
    Ok(format!("{}; {}", counts.join(", "), named_witnesses()?))
}

fn c9_dichotomy() -> Outcome {
    let s = sweep_01(6, 6).map_err(|e| e.to_string())?;
    check(
        s.neither == 0,
        format!(
            "{} mixed vectors on {} graphs: {} non-circuits, case 1 {}, case 2 {}, neither {}",
            s.vectors, s.graphs, s.non_circuits, s.case1, s.case2, s.neither
        ),
    )
}

fn c10_diameter() -> Outcome {
    let ub9 = claim(ClaimId::Ub9, &[("n", "5"), ("pairs", "50")])?;
    let ub7 = claim(ClaimId::Ub7, &[("n", "5"), ("pairs", "50")])?;
    let k4 = claim(ClaimId::Lb3, &[("graph", "K4")])?;
    let k5 = claim(ClaimId::Lb3, &[("graph", "K5")])?;
    Ok(format!(
        "general max {} over {} walks, K5 max {}, K4/K5 trees not within two steps ({} / {} states)",
        ub9["max_steps"], ub9["walks"], ub7["max_steps"], k4["explored_states"], k5["explored_states"]
    ))
}

fn c11_zigzag() -> Outcome {
    let s = claim(ClaimId::Zigzag, &[("M", "2"), ("eps", "1")])?;
    check(
        s["zero_one_walk_steps"] == 8,
        format!(
            "0/1 walk {} steps (bound {}), {} non-0/1 circuits",
            s["zero_one_walk_steps"], s["bound"], s["other_circuits"]
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "oracle soundness", c1_oracle),
        (2, "gadget imbalance", c2_gadgets),
        (3, "pair-sum identity", c3_identity),
        (4, "coloring characterization", c4_colcir),
        (5, "prism reconfiguration", c5_prism),
        (6, "proper walks on complete graphs", c6_proper_walks),
        (7, "coloring gadget imbalance", c7_coloring_imbalance),
        (8, "recognized structures", c8_structures),
        (9, "non-circuit dichotomy", c9_dichotomy),
        (10, "forest circuit diameter", c10_diameter),
        (11, "zig-zag", c11_zigzag),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match &res {
            Ok(d) => println!("criterion {n:>2} PASS {name} ({secs:.1}s): {d}"),
            Err(d) => {
                let note = if KNOWN_RED.contains(&n) { " [known red]" } else { "" };
                println!("criterion {n:>2} FAIL{note} {name} ({secs:.1}s): {d}");
            }
        }
        if res.is_ok() == KNOWN_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
