use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{
    char_vector, check_pair, difference_is_circuit, difference_vector, feasible_01_circuits_at, kempe_chains, Coloring,
};
use crate::circuits::WalkTrace;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratmat::Rational;

/// All proper colorings with colors `0..palette`, in lexicographic order.
pub fn proper_colorings(g: &Graph, palette: usize) -> Vec<Coloring> {
    fn rec(g: &Graph, palette: usize, v: usize, cur: &mut Vec<usize>, out: &mut Vec<Coloring>) {
        if v == g.vertex_count() {
            out.push(Coloring { assignment: cur.clone(), palette });
            return;
        }
        for c in 0..palette {
            if g.neighbors(v).iter().any(|&w| w < v && cur[w] == c) {
                continue;
            }
            cur.push(c);
            rec(g, palette, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(g, palette, 0, &mut Vec::new(), &mut out);
    out
}

/// Smallest palette admitting a proper coloring, by exhaustive search.
pub fn chromatic_number(g: &Graph) -> usize {
    (1..=g.vertex_count().max(1)).find(|&k| !proper_colorings(g, k).is_empty()).unwrap_or(g.vertex_count())
}

/// Targets of ordinary two-color Kempe swaps at `c`.
pub fn kempe_neighbors(g: &Graph, c: &Coloring) -> Result<Vec<Coloring>> {
    let mut out = BTreeSet::new();
    for a in 0..c.palette {
        for b in a + 1..c.palette {
            for chain in kempe_chains(g, c, &[a, b])? {
                let mut next = c.clone();
                for &v in &chain.component_vertices {
                    next.assignment[v] = if c.color(v) == a { b } else { a };
                }
                out.insert(next);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Proper colorings one 0/1 circuit step from `c`.
pub fn swap_neighbors(g: &Graph, c: &Coloring, subset_cap: usize) -> Result<Vec<Coloring>> {
    Ok(feasible_01_circuits_at(g, c, subset_cap)?.into_iter().map(|s| s.target).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    /// Differences that are circuits.
    Circuit,
    /// Ordinary two-color Kempe swaps.
    Kempe,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconfigurationGraph {
    pub nodes: Vec<Coloring>,
    pub edges: Vec<(usize, usize)>,
}

impl ReconfigurationGraph {
    pub fn component_count(&self) -> usize {
        let mut dsu = crate::graph::Dsu::new(self.nodes.len());
        let mut count = self.nodes.len();
        for &(a, b) in &self.edges {
            if dsu.union(a, b) {
                count -= 1;
            }
        }
        count
    }
}

/// Proper colorings as nodes, joined under the chosen adjacency.
pub fn reconfiguration_graph(
    g: &Graph,
    palette: usize,
    adj: Adjacency,
    subset_cap: usize,
) -> Result<ReconfigurationGraph> {
    let nodes = proper_colorings(g, palette);
    let index: HashMap<&Coloring, usize> = nodes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges = BTreeSet::new();
    for (i, c) in nodes.iter().enumerate() {
        let nbrs = match adj {
            Adjacency::Circuit => swap_neighbors(g, c, subset_cap)?,
            Adjacency::Kempe => kempe_neighbors(g, c)?,
        };
        for t in nbrs {
            let j = index[&t];
            if i != j {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    Ok(ReconfigurationGraph { nodes, edges: edges.into_iter().collect() })
}

fn step_trace(colorings: &[Coloring]) -> WalkTrace {
    let mut t = WalkTrace::empty(char_vector(&colorings[0]));
    for w in colorings.windows(2) {
        t.push(difference_vector(&w[0], &w[1]), Rational::one());
    }
    t
}

/// Shortest walk through proper colorings where consecutive colorings differ by a circuit.
pub fn proper_walk_bfs(g: &Graph, c1: &Coloring, c2: &Coloring, subset_cap: usize) -> Result<(usize, WalkTrace)> {
    check_pair(g, c1, c2)?;
    let mut parent: HashMap<Coloring, Option<Coloring>> = HashMap::from([(c1.clone(), None)]);
    let mut queue = VecDeque::from([c1.clone()]);
    while let Some(c) = queue.pop_front() {
        if c == *c2 {
            let mut path = vec![c];
            while let Some(Some(p)) = parent.get(path.last().expect("nonempty")) {
                path.push(p.clone());
            }
            path.reverse();
            return Ok((path.len() - 1, step_trace(&path)));
        }
        for t in swap_neighbors(g, &c, subset_cap)? {
            if !parent.contains_key(&t) {
                parent.insert(t.clone(), Some(c.clone()));
                queue.push_back(t);
            }
        }
    }
    Err(Error::Unreachable)
}

/// Walk of length at most 2 between proper colorings of `K_n` with `n` colors,
/// through the coloring that rotates colors along all cycles of the difference at once.
pub fn two_step_construction(g: &Graph, c1: &Coloring, c2: &Coloring) -> Result<WalkTrace> {
    let n = g.vertex_count();
    if !g.is_complete() || c1.palette != n {
        return Err(Error::BadInstance("needs K_n with exactly n colors".into()));
    }
    check_pair(g, c1, c2)?;
    if c1 == c2 {
        return Ok(step_trace(std::slice::from_ref(c1)));
    }
    if difference_is_circuit(g, c1, c2)?.0 {
        return Ok(step_trace(&[c1.clone(), c2.clone()]));
    }
    // succ(u) = v when v's new color is u's old color
    let holder: HashMap<usize, usize> = (0..n).map(|v| (c1.color(v), v)).collect();
    let mut succ = vec![usize::MAX; n];
    for v in (0..n).filter(|&v| c1.color(v) != c2.color(v)) {
        succ[holder[&c2.color(v)]] = v;
    }
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    for start in (0..n).filter(|&v| succ[v] != usize::MAX) {
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            order.push(v);
            v = succ[v];
        }
    }
    let mut mid = c1.clone();
    for k in 0..order.len() {
        let prev = order[(k + order.len() - 1) % order.len()];
        mid.assignment[order[k]] = c1.color(prev);
    }
    for (a, b) in [(c1, &mid), (&mid, c2)] {
        if !difference_is_circuit(g, a, b)?.0 {
            return Err(Error::BadInstance("rotation step is not a circuit".into()));
        }
    }
    Ok(step_trace(&[c1.clone(), mid, c2.clone()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::validate_walk;
    use crate::coloring::coloring_system;

    fn col(a: &[usize], p: usize) -> Coloring {
        Coloring::new(a.to_vec(), p).unwrap()
    }

    #[test]
    fn k3_six_colors_needs_three_steps() {
        let g = Graph::complete(3);
        let (len, trace) = proper_walk_bfs(&g, &col(&[0, 1, 2], 6), &col(&[3, 4, 5], 6), 8).unwrap();
        assert_eq!(len, 3);
        validate_walk(&coloring_system(&g, 6), &trace).unwrap();
    }

    #[test]
    fn k3_three_colors_at_most_two() {
        let g = Graph::complete(3);
        let all = proper_colorings(&g, 3);
        assert_eq!(all.len(), 6);
        for a in &all {
            for b in &all {
                assert!(proper_walk_bfs(&g, a, b, 8).unwrap().0 <= 2);
            }
        }
        assert_eq!(proper_walk_bfs(&g, &all[0], &all[0], 8).unwrap().0, 0);
    }

    #[test]
    fn two_step_on_k4() {
        let g = Graph::complete(4);
        let sys = coloring_system(&g, 4);
        let t = two_step_construction(&g, &col(&[0, 1, 2, 3], 4), &col(&[1, 0, 3, 2], 4)).unwrap();
        assert_eq!(t.len(), 2);
        validate_walk(&sys, &t).unwrap();
        let t = two_step_construction(&g, &col(&[0, 1, 2, 3], 4), &col(&[1, 0, 2, 3], 4)).unwrap();
        assert_eq!(t.len(), 1);
        assert!(two_step_construction(&Graph::path(4), &col(&[0, 1, 0, 1], 4), &col(&[0, 1, 0, 1], 4)).is_err());
    }

    #[test]
    fn prism_kempe_gap() {
        let g = Graph::triangular_prism();
        assert_eq!(chromatic_number(&g), 3);
        assert!(reconfiguration_graph(&g, 3, Adjacency::Kempe, 8).unwrap().component_count() > 1);
        assert_eq!(reconfiguration_graph(&g, 3, Adjacency::Circuit, 8).unwrap().component_count(), 1);
    }
}
