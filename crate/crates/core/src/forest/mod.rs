//! Forest polytope: rank rows over vertex subsets, balanced sets, 0/±1 circuit
//! structure and constructive walks between forests.

mod index;
mod structure;
mod walks;

pub use index::RankIndex;
pub use structure::{
    classify_01, droppable_edge, mixed_drop_search, noncircuit_smaller_circuit, split_low_diameter,
    structure_recognizer, Classification, DropKind, DropWitness, PartitionSource, Split, StructureKind,
    StructureReport, DEFAULT_DROP_LIMIT,
};
pub use walks::{
    forest_vector, lower_bound_check, walk_forest_to_forest, walk_zero_to_forest, LowerBoundReport, Route,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuits::ConstraintSystem;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratmat::{RatVector, Rational};

/// Largest vertex count for which subset rows are materialized.
pub const VERTEX_CAP: usize = 14;

pub(crate) fn check_vertices(g: &Graph, cap: usize) -> Result<()> {
    if g.vertex_count() > cap {
        return Err(Error::CapExceeded { cap: "max-vertices", limit: cap, requested: g.vertex_count() });
    }
    Ok(())
}

/// Row index of the subset with vertex bitmask `u` (nonzero) in [`rank_system`].
pub fn subset_row(u: u64) -> usize {
    u as usize - 1
}

/// Vertices of the subset behind row `row`.
pub fn row_subset(row: usize) -> Vec<usize> {
    let u = row as u64 + 1;
    (0..64).filter(|&v| u >> v & 1 == 1).collect()
}

fn subset_label(g: &Graph, u: u64) -> String {
    let names: Vec<String> = (0..g.vertex_count()).filter(|&v| u >> v & 1 == 1).map(|v| g.vertex_name(v)).collect();
    format!("U={{{}}}", names.join(","))
}

/// `sum_{e in E(G[U])} x(e) <= |U| - 1` for every nonempty `U`, row `subset_row(U)`.
/// Subsets inducing no edge give zero rows; they are kept so row indices stay aligned.
pub fn rank_system(g: &Graph) -> Result<ConstraintSystem> {
    rank_system_capped(g, VERTEX_CAP)
}

pub fn rank_system_capped(g: &Graph, cap: usize) -> Result<ConstraintSystem> {
    check_vertices(g, cap.min(VERTEX_CAP))?;
    let m = g.edge_count();
    let mut sys = ConstraintSystem::with_labels((0..m).map(|e| format!("x({})", g.edge_name(e))).collect());
    for u in 1..1u64 << g.vertex_count() {
        let mut row = vec![Rational::zero(); m];
        for e in g.induced_edges(u) {
            row[e] = Rational::one();
        }
        sys.add_inequality(&row, Rational::from_int(u.count_ones() as i64 - 1), subset_label(g, u));
    }
    Ok(sys)
}

/// [`rank_system`] followed by `-x(e) <= 0` for every edge, in edge order.
pub fn mwf_system(g: &Graph) -> Result<ConstraintSystem> {
    let mut sys = rank_system(g)?;
    let m = g.edge_count();
    for e in 0..m {
        let mut row = vec![Rational::zero(); m];
        row[e] = -Rational::one();
        sys.add_inequality(&row, Rational::zero(), format!("x({}) >= 0", g.edge_name(e)));
    }
    Ok(sys)
}

/// Edge vector, entry `e` for edge id `e`; usually `X(F1) - X(F2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedEdgeVector {
    pub values: RatVector,
}

impl SignedEdgeVector {
    pub fn new(values: RatVector) -> Self {
        SignedEdgeVector { values }
    }

    pub fn from_signs(signs: &[i64]) -> Self {
        SignedEdgeVector { values: signs.iter().map(|&s| Rational::from_int(s)).collect() }
    }

    /// `+1` on `plus`, `-1` on `minus`, over `m` edges.
    pub fn from_sets(m: usize, plus: &[usize], minus: &[usize]) -> Self {
        let mut values = vec![Rational::zero(); m];
        for &e in plus {
            values[e] = Rational::one();
        }
        for &e in minus {
            values[e] = -Rational::one();
        }
        SignedEdgeVector { values }
    }

    /// `X(f1) - X(f2)`.
    pub fn difference(m: usize, f1: &[usize], f2: &[usize]) -> Self {
        let mut values = vec![Rational::zero(); m];
        for &e in f1 {
            values[e] = &values[e] + &Rational::one();
        }
        for &e in f2 {
            values[e] = &values[e] - &Rational::one();
        }
        SignedEdgeVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| !self.values[e].is_zero()).collect()
    }

    pub fn plus_edges(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| self.values[e].is_positive()).collect()
    }

    pub fn minus_edges(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| self.values[e].is_negative()).collect()
    }

    pub fn is_mixed_sign(&self) -> bool {
        self.values.iter().any(Rational::is_positive) && self.values.iter().any(Rational::is_negative)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Rational::is_zero)
    }

    /// Every entry in {-1, 0, 1}.
    pub fn is_01(&self) -> bool {
        self.values.iter().all(|x| x.is_zero() || x.abs() == Rational::one())
    }

    /// Edge bitmasks of the `+1` and `-1` entries, for 0/±1 vectors on at most 128 edges.
    pub fn masks(&self) -> Option<(u128, u128)> {
        if !self.is_01() || self.values.len() > 128 {
            return None;
        }
        let mut plus = 0u128;
        let mut minus = 0u128;
        for (e, x) in self.values.iter().enumerate() {
            if x.is_positive() {
                plus |= 1 << e;
            } else if x.is_negative() {
                minus |= 1 << e;
            }
        }
        Some((plus, minus))
    }

    /// `{"edges": {"eid": value}}` with nonzero entries only.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: serde_json::Map<String, serde_json::Value> = self
            .support()
            .into_iter()
            .map(|e| (e.to_string(), serde_json::to_value(&self.values[e]).expect("rational")))
            .collect();
        serde_json::json!({ "edges": edges })
    }

    /// Keys are edge ids, or edge names such as `0-1` or `12` as printed by the graph.
    pub fn from_json(g: &Graph, v: &serde_json::Value) -> Result<Self> {
        let bad = |m: String| Error::BadInstance(format!("edge vector json: {m}"));
        let edges = v.get("edges").and_then(|e| e.as_object()).ok_or_else(|| bad("missing edges".into()))?;
        let mut values = vec![Rational::zero(); g.edge_count()];
        for (key, val) in edges {
            let id = key
                .parse::<usize>()
                .ok()
                .filter(|&id| id < g.edge_count())
                .or_else(|| (0..g.edge_count()).find(|&e| g.edge_name(e) == *key))
                .ok_or_else(|| bad(format!("unknown edge {key}")))?;
            let x: Rational = serde_json::from_value(val.clone()).map_err(|e| bad(e.to_string()))?;
            values[id] = x;
        }
        Ok(SignedEdgeVector { values })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedSetReport {
    pub vector: SignedEdgeVector,
    /// Vertex sets with zero induced sum, in bitmask order.
    pub balanced: Vec<Vec<usize>>,
    /// Support edges mapped to whether some balanced set contains them.
    pub edge_in_some_balanced_set: BTreeMap<usize, bool>,
    /// `(e, f)`, `e < f`, that are the only support edges of some balanced set.
    pub balanced_pairs: Vec<(usize, usize)>,
}

/// Induced sum of `x` over `U`, edge by edge.
pub(crate) fn induced_sum(g: &Graph, x: &[Rational], u: u64) -> Rational {
    g.induced_edges(u).map(|e| &x[e]).sum()
}

pub fn balanced_sets(g: &Graph, x: &SignedEdgeVector) -> Result<BalancedSetReport> {
    check_vertices(g, VERTEX_CAP)?;
    if x.len() != g.edge_count() {
        return Err(Error::DimensionMismatch(format!("{} entries for {} edges", x.len(), g.edge_count())));
    }
    let support = x.support();
    let mut in_balanced: BTreeMap<usize, bool> = support.iter().map(|&e| (e, false)).collect();
    let mut balanced = Vec::new();
    let mut pairs = std::collections::BTreeSet::new();
    for u in 1..1u64 << g.vertex_count() {
        if !induced_sum(g, &x.values, u).is_zero() {
            continue;
        }
        let inside: Vec<usize> = g.induced_edges(u).filter(|&e| !x.values[e].is_zero()).collect();
        for e in &inside {
            in_balanced.insert(*e, true);
        }
        if let [e, f] = inside[..] {
            pairs.insert((e, f));
        }
        balanced.push((0..g.vertex_count()).filter(|&v| u >> v & 1 == 1).collect());
    }
    Ok(BalancedSetReport {
        vector: x.clone(),
        balanced,
        edge_in_some_balanced_set: in_balanced,
        balanced_pairs: pairs.into_iter().collect(),
    })
}
