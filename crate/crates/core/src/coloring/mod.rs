//! Fractional coloring systems, difference graphs, generalized Kempe swaps
//! and walks between proper colorings.

mod kempe;
mod walks;

pub use kempe::{apply_generalized_swap, feasible_01_circuits_at, kempe_chains, GeneralizedSwap, KempeChain};
pub use walks::{
    chromatic_number, kempe_neighbors, proper_colorings, proper_walk_bfs, reconfiguration_graph, swap_neighbors,
    two_step_construction, Adjacency, ReconfigurationGraph,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuits::ConstraintSystem;
use crate::error::{Error, Result};
use crate::graph::{Dsu, Graph};
use crate::ratmat::{RatVector, Rational};

/// Vertex `v` gets color `assignment[v]` from `0..palette`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coloring {
    pub assignment: Vec<usize>,
    pub palette: usize,
}

impl Coloring {
    pub fn new(assignment: Vec<usize>, palette: usize) -> Result<Self> {
        if let Some(&c) = assignment.iter().find(|&&c| c >= palette) {
            return Err(Error::BadColorSet(format!("color {c} outside palette of size {palette}")));
        }
        Ok(Coloring { assignment, palette })
    }

    pub fn color(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().iter().all(|&(u, v)| self.assignment[u] != self.assignment[v])
    }

    /// Colors actually used, sorted.
    pub fn used_colors(&self) -> Vec<usize> {
        let mut c = self.assignment.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// `{"palette": [...], "assignment": {"v": color}}`.
    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        let assignment: serde_json::Map<String, serde_json::Value> =
            (0..self.assignment.len()).map(|v| (g.vertex_name(v), self.assignment[v].into())).collect();
        serde_json::json!({ "palette": (0..self.palette).collect::<Vec<_>>(), "assignment": assignment })
    }

    /// Parses the JSON form; palette entries may be any distinct integers or strings
    /// and are mapped to their positions.
    pub fn from_json(g: &Graph, v: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::BadInstance(format!("coloring json: {m}"));
        let palette = v.get("palette").and_then(|p| p.as_array()).ok_or_else(|| bad("missing palette"))?;
        let keys: Vec<String> = palette.iter().map(json_key).collect();
        let assignment = v.get("assignment").and_then(|a| a.as_object()).ok_or_else(|| bad("missing assignment"))?;
        let mut out = vec![usize::MAX; g.vertex_count()];
        for (name, color) in assignment {
            let vtx = (0..g.vertex_count())
                .find(|&x| g.vertex_name(x) == *name)
                .ok_or_else(|| bad(&format!("unknown vertex {name}")))?;
            let key = json_key(color);
            let idx = keys.iter().position(|k| *k == key).ok_or_else(|| bad(&format!("color {key} not in palette")))?;
            out[vtx] = idx;
        }
        if out.contains(&usize::MAX) {
            return Err(bad("every vertex needs a color"));
        }
        Coloring::new(out, keys.len())
    }
}

fn json_key(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Index of variable `x(v, i)`.
pub fn var_index(palette: usize, v: usize, i: usize) -> usize {
    v * palette + i
}

/// `A`: per-vertex color sums equal to 1. `B`: per-edge per-color rows
/// `x(u,i) + x(v,i) <= 1`, then `-x(v,i) <= 0`.
pub fn coloring_system(g: &Graph, palette: usize) -> ConstraintSystem {
    let n = g.vertex_count();
    let labels = (0..n)
        .flat_map(|v| (0..palette).map(move |i| (v, i)))
        .map(|(v, i)| format!("({},{i})", g.vertex_name(v)))
        .collect();
    let mut sys = ConstraintSystem::with_labels(labels);
    let dim = n * palette;
    let one = Rational::one();
    for v in 0..n {
        let mut row = vec![Rational::zero(); dim];
        for i in 0..palette {
            row[var_index(palette, v, i)] = one.clone();
        }
        sys.add_equality(&row, one.clone(), format!("sum {}", g.vertex_name(v)));
    }
    for e in 0..g.edge_count() {
        let (u, v) = g.edge(e);
        for i in 0..palette {
            let mut row = vec![Rational::zero(); dim];
            row[var_index(palette, u, i)] = one.clone();
            row[var_index(palette, v, i)] = one.clone();
            sys.add_inequality(&row, one.clone(), format!("edge {} color {i}", g.edge_name(e)));
        }
    }
    for v in 0..n {
        for i in 0..palette {
            let mut row = vec![Rational::zero(); dim];
            row[var_index(palette, v, i)] = -&one;
            sys.add_inequality(&row, Rational::zero(), format!("nonneg ({},{i})", g.vertex_name(v)));
        }
    }
    sys
}

/// 0/1 characteristic vector.
pub fn char_vector(c: &Coloring) -> RatVector {
    let mut x = vec![Rational::zero(); c.assignment.len() * c.palette];
    for (v, &i) in c.assignment.iter().enumerate() {
        x[var_index(c.palette, v, i)] = Rational::one();
    }
    x
}

/// Inverse of [`char_vector`] on integral points of the coloring polytope.
pub fn decode(x: &[Rational], palette: usize) -> Result<Coloring> {
    if palette == 0 || !x.len().is_multiple_of(palette) {
        return Err(Error::DimensionMismatch(format!("length {} is not a multiple of {palette}", x.len())));
    }
    let mut out = Vec::with_capacity(x.len() / palette);
    for chunk in x.chunks(palette) {
        if chunk.iter().any(|e| !e.is_zero() && *e != Rational::one()) {
            return Err(Error::NotIntegral);
        }
        let ones: Vec<usize> = (0..palette).filter(|&i| !chunk[i].is_zero()).collect();
        match ones.as_slice() {
            [i] => out.push(*i),
            _ => return Err(Error::NotIntegral),
        }
    }
    Coloring::new(out, palette)
}

/// `G(s)` for `s = X(c2) - X(c1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferenceGraph {
    pub vertices: Vec<usize>,
    /// Edge ids of `G`.
    pub edges: Vec<usize>,
    pub s: RatVector,
}

impl DifferenceGraph {
    /// Built from `s` by the vertex and edge rules, entry by entry.
    pub fn from_vector(g: &Graph, palette: usize, s: &[Rational]) -> Self {
        let x = |v: usize, i: usize| &s[var_index(palette, v, i)];
        let vertices: Vec<usize> =
            (0..g.vertex_count()).filter(|&v| (0..palette).any(|i| !x(v, i).is_zero())).collect();
        let edges = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.edge(e);
                (0..palette).any(|i| !x(u, i).is_zero() && (x(u, i) + x(v, i)).is_zero())
            })
            .collect();
        DifferenceGraph { vertices, edges, s: s.to_vec() }
    }

    pub fn is_connected(&self, g: &Graph) -> bool {
        let Some(&root) = self.vertices.first() else {
            return false;
        };
        let mut dsu = Dsu::new(g.vertex_count());
        for &e in &self.edges {
            let (u, v) = g.edge(e);
            dsu.union(u, v);
        }
        let r = dsu.find(root);
        self.vertices.iter().all(|&v| dsu.find(v) == r)
    }
}

pub(crate) fn check_pair(g: &Graph, c1: &Coloring, c2: &Coloring) -> Result<()> {
    if c1.assignment.len() != g.vertex_count() || c2.assignment.len() != g.vertex_count() || c1.palette != c2.palette {
        return Err(Error::DimensionMismatch("colorings do not match the graph or each other".into()));
    }
    if !c1.is_proper(g) || !c2.is_proper(g) {
        return Err(Error::ImproperColoring);
    }
    Ok(())
}

pub fn difference_vector(c1: &Coloring, c2: &Coloring) -> RatVector {
    char_vector(c2).iter().zip(char_vector(c1)).map(|(a, b)| a - &b).collect()
}

/// Connectivity of `G(s)` for `s = X(c2) - X(c1)`.
pub fn difference_is_circuit(g: &Graph, c1: &Coloring, c2: &Coloring) -> Result<(bool, DifferenceGraph)> {
    check_pair(g, c1, c2)?;
    if c1 == c2 {
        return Err(Error::EqualColorings);
    }
    let dg = DifferenceGraph::from_vector(g, c1.palette, &difference_vector(c1, c2));
    Ok((dg.is_connected(g), dg))
}

/// Changed vertices mapped to their new colors.
pub fn changes(c1: &Coloring, c2: &Coloring) -> BTreeMap<usize, usize> {
    (0..c1.assignment.len()).filter(|&v| c1.assignment[v] != c2.assignment[v]).map(|v| (v, c2.assignment[v])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::is_circuit;

    fn col(a: &[usize], p: usize) -> Coloring {
        Coloring::new(a.to_vec(), p).unwrap()
    }

    #[test]
    fn system_row_counts() {
        let s = coloring_system(&Graph::complete(2), 2);
        assert_eq!((s.m_a(), s.m_b()), (2, 2 + 4));
        let s = coloring_system(&Graph::new(1), 3);
        assert_eq!((s.m_a(), s.m_b()), (1, 3));
        let s = coloring_system(&Graph::complete(3), 3);
        assert_eq!((s.m_a(), s.m_b()), (3, 9 + 9));
        assert_eq!(s.variable_labels[4], "(1,1)");
    }

    #[test]
    fn char_vector_round_trip() {
        let c = col(&[0, 1], 2);
        assert_eq!(char_vector(&c), crate::ratmat::ivec(&[1, 0, 0, 1]));
        assert_eq!(decode(&char_vector(&c), 2).unwrap(), c);
        let half = crate::ratmat::q(1, 2);
        assert_eq!(decode(&[half.clone(), half.clone(), half.clone(), half], 2), Err(Error::NotIntegral));
    }

    #[test]
    fn one_vertex_change_is_circuit() {
        let g = Graph::path(3);
        let (ok, dg) = difference_is_circuit(&g, &col(&[0, 1, 0], 3), &col(&[0, 1, 2], 3)).unwrap();
        assert!(ok);
        assert_eq!(dg.vertices, vec![2]);
    }

    #[test]
    fn two_far_changes_are_not() {
        let g = Graph::path(3);
        let (ok, _) = difference_is_circuit(&g, &col(&[0, 1, 0], 3), &col(&[2, 1, 2], 3)).unwrap();
        assert!(!ok);
        assert!(!is_circuit(&coloring_system(&g, 3), &difference_vector(&col(&[0, 1, 0], 3), &col(&[2, 1, 2], 3)))
            .unwrap()
            .is_circuit());
    }

    #[test]
    fn errors() {
        let g = Graph::complete(2);
        assert_eq!(difference_is_circuit(&g, &col(&[0, 0], 2), &col(&[0, 1], 2)).unwrap_err(), Error::ImproperColoring);
        assert_eq!(difference_is_circuit(&g, &col(&[0, 1], 2), &col(&[0, 1], 2)).unwrap_err(), Error::EqualColorings);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::path(3);
        let c = col(&[0, 1, 0], 2);
        assert_eq!(Coloring::from_json(&g, &c.to_json(&g)).unwrap(), c);
        let named = serde_json::json!({"palette": ["r", "g"], "assignment": {"0": "g", "1": "r", "2": "g"}});
        assert_eq!(Coloring::from_json(&g, &named).unwrap(), col(&[1, 0, 1], 2));
    }
}
