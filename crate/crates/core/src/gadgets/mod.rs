//! Exponential-imbalance gadgets, edge-family systems and the zig-zag polygon.

mod family;
mod zigzag;

pub use family::{
    build_family_system, build_family_system_with_rhs, family_members, vertex_subsets, ConstraintFamilyKind,
};
pub use zigzag::{zigzag_system, ZigzagParams};

use serde::{Deserialize, Serialize};

use crate::circuits::{zero_rows, ConstraintSystem};
use crate::coloring::coloring_system;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratmat::{kernel_basis, q, RatVector, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// Induced 5-sets, 4-paths or all 3-sets.
    Thm21,
    /// Paths with 3 edges.
    Thm22,
    /// Cycles of length at most 4.
    Thm23,
    /// Stars with at least 2 edges.
    Thm24,
    /// Fractional coloring system with 4 colors.
    Coloring,
}

impl GadgetKind {
    pub fn default_family(self) -> Option<ConstraintFamilyKind> {
        match self {
            GadgetKind::Thm21 => Some(ConstraintFamilyKind::Induced5Sets),
            GadgetKind::Thm22 => Some(ConstraintFamilyKind::Paths3),
            GadgetKind::Thm23 => Some(ConstraintFamilyKind::CyclesUpTo4),
            GadgetKind::Thm24 => Some(ConstraintFamilyKind::StarsAtLeast2),
            GadgetKind::Coloring => None,
        }
    }
}

/// `h[big] = factor · h[small]` for every kernel vector `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub big: usize,
    pub small: usize,
    pub factor: Rational,
}

#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    pub k: usize,
    pub graph: Graph,
    pub system: ConstraintSystem,
    pub seed_vector: RatVector,
    /// Variable index pairs `(big, small)` whose entries differ by the forced factor.
    pub halving_pairs: Vec<(usize, usize)>,
    /// Variables along which the geometric sequence runs.
    pub designated_entries: Vec<usize>,
    pub relations: Vec<Relation>,
}

impl GadgetInstance {
    /// Sidecar document naming the designated entries.
    pub fn sidecar_json(&self) -> serde_json::Value {
        let labels = &self.system.variable_labels;
        serde_json::json!({
            "kind": format!("{:?}", self.kind),
            "k": self.k,
            "designated_entries": self.designated_entries.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
            "relations": self.relations.iter().map(|r| serde_json::json!({
                "big": labels[r.big], "small": labels[r.small], "factor": r.factor,
            })).collect::<Vec<_>>(),
            "seed_vector": self.seed_vector,
        })
    }
}

fn neg_half_pow(i: usize) -> Rational {
    q(-2, 1).pow(-(i as i32))
}

fn half_pow(i: usize) -> Rational {
    q(2, 1).pow(-(i as i32))
}

struct Builder {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    values: Vec<Rational>,
}

impl Builder {
    fn new() -> Self {
        Builder { names: Vec::new(), edges: Vec::new(), values: Vec::new() }
    }

    fn v(&mut self, name: &str) -> usize {
        match self.names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    fn e(&mut self, a: &str, b: &str, value: Rational) -> usize {
        let (x, y) = (self.v(a), self.v(b));
        self.edges.push((x, y));
        self.values.push(value);
        self.edges.len() - 1
    }

    fn graph(&self) -> Graph {
        Graph::from_edges(self.names.len(), &self.edges)
            .expect("gadget graphs are simple")
            .with_vertex_names(self.names.clone())
    }
}

fn chain_relations(designated: &[usize], factor: Rational) -> Vec<Relation> {
    designated.windows(2).map(|w| Relation { big: w[0], small: w[1], factor: factor.clone() }).collect()
}

fn finish(
    kind: GadgetKind,
    k: usize,
    b: Builder,
    family: ConstraintFamilyKind,
    designated: Vec<usize>,
    factor: Rational,
) -> GadgetInstance {
    let graph = b.graph();
    let system = build_family_system(&graph, family);
    let relations = chain_relations(&designated, factor);
    GadgetInstance {
        kind,
        k,
        graph,
        system,
        seed_vector: b.values,
        halving_pairs: relations.iter().map(|r| (r.big, r.small)).collect(),
        designated_entries: designated,
        relations,
    }
}

/// The gadget of the given kind and size with its default edge family.
pub fn gadget(kind: GadgetKind, k: usize) -> Result<GadgetInstance> {
    match kind.default_family() {
        Some(f) => gadget_with_family(kind, k, f),
        None => coloring_gadget(k),
    }
}

/// Gadget whose system uses `family` in place of the default.
pub fn gadget_with_family(kind: GadgetKind, k: usize, family: ConstraintFamilyKind) -> Result<GadgetInstance> {
    if k < 1 {
        return Err(Error::BadParameter("k must be at least 1".into()));
    }
    let mut b = Builder::new();
    let mut designated = Vec::new();
    let factor = match kind {
        GadgetKind::Thm21 => {
            for i in 1..=k {
                designated.push(b.e(&format!("w{}", i - 1), &format!("t{i}"), neg_half_pow(i - 1)));
                b.e(&format!("t{i}"), &format!("u{i}"), Rational::zero());
                b.e(&format!("t{i}"), &format!("v{i}"), Rational::zero());
                b.e(&format!("u{i}"), &format!("w{i}"), neg_half_pow(i));
                b.e(&format!("v{i}"), &format!("w{i}"), neg_half_pow(i));
            }
            q(-2, 1)
        }
        GadgetKind::Thm22 => {
            for i in 1..=k {
                designated.push(b.e(&format!("u{}", i - 1), &format!("t{i}"), neg_half_pow(i - 1)));
                b.e(&format!("t{i}"), &format!("u{i}"), neg_half_pow(i));
                b.e(&format!("u{i}"), &format!("v{i}"), neg_half_pow(i));
                b.e(&format!("v{i}"), &format!("w{i}"), neg_half_pow(i - 1));
            }
            q(-2, 1)
        }
        GadgetKind::Thm23 => {
            for i in 0..k {
                let (ui, vi, uj, vj) = (format!("u{i}"), format!("v{i}"), format!("u{}", i + 1), format!("v{}", i + 1));
                designated.push(b.e(&ui, &vi, neg_half_pow(i)));
                b.e(&ui, &uj, neg_half_pow(i + 1));
                b.e(&ui, &vj, Rational::zero());
                b.e(&vi, &uj, neg_half_pow(i + 1));
                b.e(&vi, &vj, Rational::zero());
            }
            designated.push(b.e(&format!("u{k}"), &format!("v{k}"), neg_half_pow(k)));
            q(-2, 1)
        }
        GadgetKind::Thm24 => {
            for i in 0..k {
                let (ui, vi, uj, vj) = (format!("u{i}"), format!("v{i}"), format!("u{}", i + 1), format!("v{}", i + 1));
                designated.push(b.e(&ui, &vi, half_pow(i)));
                b.e(&vi, &uj, -half_pow(i + 1));
                b.e(&vi, &vj, -half_pow(i + 1));
            }
            designated.push(b.e(&format!("u{k}"), &format!("v{k}"), half_pow(k)));
            q(2, 1)
        }
        GadgetKind::Coloring => return coloring_gadget(k),
    };
    Ok(finish(kind, k, b, family, designated, factor))
}

const COLORS: [&str; 4] = ["a", "b", "c", "d"];

/// Odd `t >= 3`: triangles `u_i v_i w_i` joined by `v_i u_{i+1}`, 4 colors.
fn coloring_gadget(t: usize) -> Result<GadgetInstance> {
    if t < 3 || t.is_multiple_of(2) {
        return Err(Error::BadParameter("coloring gadget needs odd k >= 3".into()));
    }
    let mut names = Vec::new();
    for i in 0..=t {
        for p in ["u", "v", "w"] {
            names.push(format!("{p}{i}"));
        }
    }
    let (u, v, w) = (|i: usize| 3 * i, |i: usize| 3 * i + 1, |i: usize| 3 * i + 2);
    let mut edges = Vec::new();
    for i in 0..=t {
        edges.extend([(u(i), v(i)), (v(i), w(i)), (w(i), u(i))]);
        if i < t {
            edges.push((v(i), u(i + 1)));
        }
    }
    let graph = Graph::from_edges(names.len(), &edges).expect("simple").with_vertex_names(names.clone());
    let mut system = coloring_system(&graph, 4);
    for vtx in 0..names.len() {
        for (c, cname) in COLORS.iter().enumerate() {
            system.variable_labels[vtx * 4 + c] = format!("({},{cname})", names[vtx]);
        }
    }
    let var = |vtx: usize, c: usize| vtx * 4 + c;
    let mut seed = vec![Rational::zero(); names.len() * 4];
    let p = |e: usize| half_pow(e);
    let mut set = |vtx: usize, vals: [Rational; 4]| {
        for (c, x) in vals.into_iter().enumerate() {
            seed[var(vtx, c)] = x;
        }
    };
    let z = Rational::zero;
    for i in (0..t).step_by(2) {
        set(u(i), [p(i), -p(i + 1), -p(i + 1), z()]);
        set(v(i), [z(), p(i + 1), -p(i + 1), z()]);
        set(w(i), [z(), -p(i + 1), p(i + 1), z()]);
        set(u(i + 1), [-p(i + 2), z(), p(i + 1), -p(i + 2)]);
        set(v(i + 1), [-p(i + 2), z(), z(), p(i + 2)]);
        set(w(i + 1), [p(i + 2), z(), z(), -p(i + 2)]);
    }
    let designated: Vec<usize> = (0..t).step_by(2).map(|i| var(u(i), 0)).collect();
    let relations = chain_relations(&designated, q(4, 1));
    Ok(GadgetInstance {
        kind: GadgetKind::Coloring,
        k: t,
        graph,
        system,
        seed_vector: seed,
        halving_pairs: relations.iter().map(|r| (r.big, r.small)).collect(),
        designated_entries: designated,
        relations,
    })
}

/// A vector breaking one forced relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalvingCounterexample {
    pub vector: RatVector,
    pub relation: Relation,
    /// Whether the offending vector is the seed itself rather than a kernel vector.
    pub in_seed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalvingReport {
    pub kernel_dimension: usize,
    pub relations_checked: usize,
}

/// Checks every relation on the seed and on a basis of `ker [A; B_0]`, where
/// `B_0` are the rows of `B` annihilating the seed.
pub fn verify_halving(inst: &GadgetInstance) -> std::result::Result<HalvingReport, HalvingCounterexample> {
    check_relations(&inst.system, &inst.seed_vector, &inst.relations)
}

/// [`verify_halving`] for an arbitrary system, seed and relation list.
pub fn check_relations(
    sys: &ConstraintSystem,
    seed: &[Rational],
    relations: &[Relation],
) -> std::result::Result<HalvingReport, HalvingCounterexample> {
    let holds = |h: &[Rational], r: &Relation| h[r.big] == &r.factor * &h[r.small];
    for r in relations {
        if !holds(seed, r) {
            return Err(HalvingCounterexample { vector: seed.to_vec(), relation: r.clone(), in_seed: true });
        }
    }
    let zero = zero_rows(sys, seed);
    let m = sys.a.vstack(&sys.ineq.select_rows(&zero));
    let basis = kernel_basis(&m);
    for h in &basis {
        for r in relations {
            if !holds(h, r) {
                return Err(HalvingCounterexample { vector: h.clone(), relation: r.clone(), in_seed: false });
            }
        }
    }
    Ok(HalvingReport { kernel_dimension: basis.len(), relations_checked: relations.len() * (basis.len() + 1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{is_circuit, CircuitDecision};

    fn value(inst: &GadgetInstance, a: &str, b: &str) -> Rational {
        inst.seed_vector[inst.graph.edge_by_names(a, b).unwrap()].clone()
    }

    #[test]
    fn thm21_k2_shape_and_seed() {
        let g = gadget(GadgetKind::Thm21, 2).unwrap();
        assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (9, 10));
        assert_eq!(value(&g, "w0", "t1"), q(1, 1));
        for (a, b) in [("u1", "w1"), ("v1", "w1"), ("w1", "t2")] {
            assert_eq!(value(&g, a, b), q(-1, 2));
        }
        assert_eq!(value(&g, "u2", "w2"), q(1, 4));
        assert_eq!(value(&g, "t1", "u1"), q(0, 1));
    }

    #[test]
    fn thm24_k1_seed() {
        let g = gadget(GadgetKind::Thm24, 1).unwrap();
        assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (4, 4));
        assert_eq!(value(&g, "u0", "v0"), q(1, 1));
        assert_eq!(value(&g, "v0", "u1"), q(-1, 2));
        assert_eq!(value(&g, "v0", "v1"), q(-1, 2));
        assert_eq!(value(&g, "u1", "v1"), q(1, 2));
    }

    #[test]
    fn coloring_seed_entries() {
        let g = gadget(GadgetKind::Coloring, 3).unwrap();
        assert_eq!(g.seed_vector[g.designated_entries[0]], q(1, 1));
        assert_eq!(g.seed_vector[g.designated_entries[1]], q(1, 4));
        assert!(gadget(GadgetKind::Coloring, 4).is_err());
        assert!(gadget(GadgetKind::Thm21, 0).is_err());
    }

    #[test]
    fn relations_hold_on_the_seed_kernel() {
        for (kind, k) in [
            (GadgetKind::Thm21, 3),
            (GadgetKind::Thm22, 3),
            (GadgetKind::Thm23, 3),
            (GadgetKind::Thm24, 3),
            (GadgetKind::Coloring, 3),
        ] {
            let g = gadget(kind, k).unwrap();
            let rep = verify_halving(&g).unwrap_or_else(|e| panic!("{kind:?}: {e:?}"));
            let seed_is_circuit = matches!(is_circuit(&g.system, &g.seed_vector).unwrap(), CircuitDecision::Circuit(_));
            // the last block of the path-like gadgets keeps one free direction
            let expect_dim = if matches!(kind, GadgetKind::Thm21 | GadgetKind::Thm22) { 2 } else { 1 };
            assert_eq!(rep.kernel_dimension, expect_dim, "{kind:?}");
            assert_eq!(seed_is_circuit, expect_dim == 1, "{kind:?}");
        }
    }

    #[test]
    fn perturbed_seed_is_caught() {
        let mut g = gadget(GadgetKind::Thm22, 2).unwrap();
        let e = g.designated_entries[1];
        g.seed_vector[e] = &g.seed_vector[e] * &q(3, 1);
        let bad = verify_halving(&g).unwrap_err();
        assert!(bad.in_seed);
    }
}
