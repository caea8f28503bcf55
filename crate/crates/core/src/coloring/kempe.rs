use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::{changes, check_pair, difference_vector, Coloring, DifferenceGraph};
use crate::error::{Error, Result, SwapCondition};
use crate::graph::{Dsu, Graph};
use crate::ratmat::RatVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KempeChain {
    pub colors: Vec<usize>,
    pub component_vertices: Vec<usize>,
}

/// Connected components of the subgraph induced by vertices colored within `colors`.
pub fn kempe_chains(g: &Graph, c: &Coloring, colors: &[usize]) -> Result<Vec<KempeChain>> {
    if !c.is_proper(g) {
        return Err(Error::ImproperColoring);
    }
    let set: BTreeSet<usize> = colors.iter().copied().collect();
    if colors.len() < 2 || set.len() != colors.len() {
        return Err(Error::BadColorSet("need at least two distinct colors".into()));
    }
    if let Some(&x) = set.iter().find(|&&x| x >= c.palette) {
        return Err(Error::BadColorSet(format!("color {x} not in palette")));
    }
    let inside = |v: usize| set.contains(&c.color(v));
    let mut dsu = Dsu::new(g.vertex_count());
    for &(u, v) in g.edges() {
        if inside(u) && inside(v) {
            dsu.union(u, v);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in (0..g.vertex_count()).filter(|&v| inside(v)) {
        comps.entry(dsu.find(v)).or_default().push(v);
    }
    let mut out: Vec<KempeChain> =
        comps.into_values().map(|vs| KempeChain { colors: colors.to_vec(), component_vertices: vs }).collect();
    out.sort_by(|a, b| a.component_vertices.cmp(&b.component_vertices));
    Ok(out)
}

/// First violated condition of a generalized swap from `c` to `next` on `chain`.
pub(crate) fn swap_violation(g: &Graph, c: &Coloring, chain: &[usize], next: &Coloring) -> Option<SwapCondition> {
    let inside: HashSet<usize> = chain.iter().copied().collect();
    let n = g.vertex_count();
    if (0..n).any(|v| !inside.contains(&v) && next.color(v) != c.color(v)) {
        return Some(SwapCondition::OutsideChanged);
    }
    if chain.iter().any(|&v| next.color(v) == c.color(v)) {
        return Some(SwapCondition::ChainUnchanged);
    }
    for &(u, v) in g.edges() {
        if inside.contains(&u) && inside.contains(&v) && next.color(u) != c.color(v) && next.color(v) != c.color(u) {
            return Some(SwapCondition::EdgeInheritance);
        }
    }
    if !next.is_proper(g) {
        return Some(SwapCondition::Properness);
    }
    None
}

/// Applies `new_assignment` to `c` and checks it is a generalized swap on `chain`.
pub fn apply_generalized_swap(
    g: &Graph,
    c: &Coloring,
    chain: &KempeChain,
    new_assignment: &BTreeMap<usize, usize>,
) -> Result<Coloring> {
    if !c.is_proper(g) {
        return Err(Error::ImproperColoring);
    }
    let mut next = c.clone();
    for (&v, &col) in new_assignment {
        if v >= g.vertex_count() || col >= c.palette {
            return Err(Error::BadInstance(format!("assignment {v} -> {col} out of range")));
        }
        next.assignment[v] = col;
    }
    match swap_violation(g, c, &chain.component_vertices, &next) {
        Some(cond) => Err(Error::SwapInvalid(cond)),
        None => Ok(next),
    }
}

/// A proper coloring one 0/1 circuit step away, with how it reads as a swap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizedSwap {
    pub target: Coloring,
    pub vector: RatVector,
    /// Colors carried by the vector, old and new.
    pub colors: Vec<usize>,
    /// Vertices that change color.
    pub vertices: Vec<usize>,
    /// Swap conditions hold with the changed vertices taken as the chain.
    pub conditions_hold: bool,
    /// The changed vertices form a whole component of the subgraph induced by `colors`.
    pub literal_chain: bool,
}

impl GeneralizedSwap {
    pub fn is_two_color(&self) -> bool {
        self.colors.len() == 2
    }
}

/// Connected vertex subsets of size at most `cap`, as bitmasks.
pub(crate) fn connected_subsets(g: &Graph, cap: usize) -> Vec<u64> {
    let adj: Vec<u64> = (0..g.vertex_count()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut frontier: Vec<u64> = (0..g.vertex_count()).map(|v| 1u64 << v).collect();
    seen.extend(frontier.iter().copied());
    for _ in 1..cap {
        let mut next = Vec::new();
        for &s in &frontier {
            let mut border = (0..g.vertex_count()).filter(|&v| s >> v & 1 == 1).fold(0u64, |m, v| m | adj[v]) & !s;
            while border != 0 {
                let w = border.trailing_zeros();
                border &= border - 1;
                let t = s | 1 << w;
                if seen.insert(t) {
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable_by_key(|&m| (m.count_ones(), m));
    out
}

/// Every proper coloring whose difference with `c` is a circuit, found by recoloring
/// each connected vertex subset of size at most `subset_cap` in every way that
/// changes all of its vertices.
pub fn feasible_01_circuits_at(g: &Graph, c: &Coloring, subset_cap: usize) -> Result<Vec<GeneralizedSwap>> {
    check_pair(g, c, c)?;
    let n = g.vertex_count();
    if n > 64 {
        return Err(Error::CapExceeded { cap: "max-vertices", limit: 64, requested: n });
    }
    let biggest = g_components_max(g);
    if biggest > subset_cap {
        return Err(Error::CapExceeded { cap: "subset-cap", limit: subset_cap, requested: biggest });
    }
    let mut out = Vec::new();
    for mask in connected_subsets(g, subset_cap) {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut next = c.clone();
        recolor(g, c, &verts, 0, &mut next, &mut |t: &Coloring| {
            let s = difference_vector(c, t);
            let dg = DifferenceGraph::from_vector(g, c.palette, &s);
            if dg.is_connected(g) {
                out.push(describe(g, c, t.clone(), s));
            }
        });
    }
    out.sort_by(|a, b| a.target.cmp(&b.target));
    Ok(out)
}

fn g_components_max(g: &Graph) -> usize {
    let mut dsu = Dsu::new(g.vertex_count());
    for &(u, v) in g.edges() {
        dsu.union(u, v);
    }
    let mut size = vec![0usize; g.vertex_count()];
    for v in 0..g.vertex_count() {
        size[dsu.find(v)] += 1;
    }
    size.into_iter().max().unwrap_or(0)
}

fn recolor(g: &Graph, c: &Coloring, verts: &[usize], k: usize, next: &mut Coloring, emit: &mut dyn FnMut(&Coloring)) {
    if k == verts.len() {
        emit(next);
        return;
    }
    let v = verts[k];
    for col in 0..c.palette {
        if col == c.color(v) {
            continue;
        }
        // neighbors already fixed: outside the subset, or earlier in it
        let clash = g.neighbors(v).iter().any(|&w| {
            let fixed = !verts.contains(&w) || verts[..k].contains(&w);
            fixed && next.color(w) == col
        });
        if clash {
            continue;
        }
        next.assignment[v] = col;
        recolor(g, c, verts, k + 1, next, emit);
    }
    next.assignment[v] = c.color(v);
}

fn describe(g: &Graph, c: &Coloring, target: Coloring, vector: RatVector) -> GeneralizedSwap {
    let changed = changes(c, &target);
    let vertices: Vec<usize> = changed.keys().copied().collect();
    let colors: BTreeSet<usize> = changed.iter().flat_map(|(&v, &new)| [c.color(v), new]).collect();
    let colors: Vec<usize> = colors.into_iter().collect();
    let conditions_hold = swap_violation(g, c, &vertices, &target).is_none();
    let literal_chain = kempe_chains(g, c, &colors)
        .map(|chains| chains.iter().any(|ch| ch.component_vertices == vertices))
        .unwrap_or(false);
    GeneralizedSwap { target, vector, colors, vertices, conditions_hold, literal_chain }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(a: &[usize], p: usize) -> Coloring {
        Coloring::new(a.to_vec(), p).unwrap()
    }

    #[test]
    fn chains_on_small_graphs() {
        let k2 = Graph::complete(2);
        assert_eq!(kempe_chains(&k2, &col(&[0, 1], 2), &[0, 1]).unwrap().len(), 1);
        let e2 = Graph::new(2);
        assert_eq!(kempe_chains(&e2, &col(&[0, 1], 2), &[0, 1]).unwrap().len(), 2);
        let p = Graph::path(3);
        let ch = kempe_chains(&p, &col(&[0, 1, 0], 2), &[0, 1]).unwrap();
        assert_eq!(ch[0].component_vertices, vec![0, 1, 2]);
        assert!(matches!(kempe_chains(&p, &col(&[0, 1, 0], 2), &[0]), Err(Error::BadColorSet(_))));
    }

    #[test]
    fn classical_swap_and_violations() {
        let p = Graph::path(3);
        let c = col(&[0, 1, 0], 3);
        let chain = &kempe_chains(&p, &c, &[0, 1]).unwrap()[0];
        let swapped = apply_generalized_swap(&p, &c, chain, &BTreeMap::from([(0, 1), (1, 0), (2, 1)])).unwrap();
        assert_eq!(swapped.assignment, vec![1, 0, 1]);
        let e = apply_generalized_swap(&p, &c, chain, &BTreeMap::from([(0, 1), (1, 0)])).unwrap_err();
        assert_eq!(e, Error::SwapInvalid(SwapCondition::ChainUnchanged));
        let e = apply_generalized_swap(&p, &c, chain, &BTreeMap::from([(0, 1), (1, 0), (2, 0)])).unwrap_err();
        assert_eq!(e, Error::SwapInvalid(SwapCondition::ChainUnchanged));
        let e = apply_generalized_swap(&p, &c, chain, &BTreeMap::from([(0, 2), (1, 2), (2, 2)])).unwrap_err();
        assert_eq!(e, Error::SwapInvalid(SwapCondition::EdgeInheritance));
        let c = col(&[0, 1, 2], 3);
        let chain = &kempe_chains(&p, &c, &[0, 1]).unwrap()[0];
        let e = apply_generalized_swap(&p, &c, chain, &BTreeMap::from([(0, 1), (1, 2)])).unwrap_err();
        assert_eq!(e, Error::SwapInvalid(SwapCondition::Properness));
    }

    #[test]
    fn isolated_vertex_recolorings() {
        let g = Graph::new(1);
        let r = feasible_01_circuits_at(&g, &col(&[0], 3), 8).unwrap();
        let targets: Vec<usize> = r.iter().map(|s| s.target.color(0)).collect();
        assert_eq!(targets, vec![1, 2]);
    }

    #[test]
    fn k2_two_colors_single_swap() {
        let g = Graph::complete(2);
        let r = feasible_01_circuits_at(&g, &col(&[0, 1], 2), 8).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].target.assignment, vec![1, 0]);
        assert!(r[0].literal_chain && r[0].conditions_hold);
    }

    #[test]
    fn subset_cap_is_explicit() {
        let g = Graph::path(4);
        assert!(matches!(feasible_01_circuits_at(&g, &col(&[0, 1, 0, 1], 2), 3), Err(Error::CapExceeded { .. })));
    }
}
