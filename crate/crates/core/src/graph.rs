//! Small simple graphs with stable vertex and edge ids.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
    pub vertex_names: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), lookup: HashMap::new(), vertex_names: None }
    }

    /// Graph on `n` vertices with the given edges in id order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for (line, &(u, v)) in edges.iter().enumerate() {
            g.add_edge(u, v).map_err(|e| match e {
                Error::LoopEdge { .. } => Error::LoopEdge { line: line + 1 },
                Error::DuplicateEdge { .. } => Error::DuplicateEdge { line: line + 1 },
                other => other,
            })?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("simple");
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).expect("simple")
    }

    pub fn cycle(n: usize) -> Self {
        let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        e.push((n - 1, 0));
        Graph::from_edges(n, &e).expect("simple")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &e).expect("simple")
    }

    /// Two triangles `0 1 2` and `3 4 5` joined by `i, i+3`.
    pub fn triangular_prism() -> Self {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).expect("simple")
    }

    /// Graph whose edges are the set bits of `mask` over the pairs of `K_n` in id order.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::new(n);
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> k & 1 == 1 {
                    g.add_edge(u, v).expect("simple");
                }
                k += 1;
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(Error::LoopEdge { line: 0 });
        }
        if u >= self.n || v >= self.n {
            return Err(Error::BadInstance(format!("edge {u}-{v} outside {} vertices", self.n)));
        }
        let key = (u.min(v), u.max(v));
        if self.lookup.contains_key(&key) {
            return Err(Error::DuplicateEdge { line: 0 });
        }
        let id = self.edges.len();
        self.edges.push(key);
        self.lookup.insert(key, id);
        Ok(id)
    }

    pub fn with_vertex_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n);
        self.vertex_names = Some(names);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.lookup.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn vertex_name(&self, v: usize) -> String {
        match &self.vertex_names {
            Some(n) => n[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn edge_name(&self, id: usize) -> String {
        let (u, v) = self.edges[id];
        match &self.vertex_names {
            Some(_) => format!("{}{}", self.vertex_name(u), self.vertex_name(v)),
            None => format!("{u}-{v}"),
        }
    }

    /// Edge id between named vertices.
    pub fn edge_by_names(&self, a: &str, b: &str) -> Option<usize> {
        let names = self.vertex_names.as_ref()?;
        let u = names.iter().position(|x| x == a)?;
        let v = names.iter().position(|x| x == b)?;
        self.edge_id(u, v)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Edge ids with both endpoints in the vertex bitmask `u`.
    pub fn induced_edges(&self, u: u64) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(move |(_, &(a, b))| u >> a & 1 == 1 && u >> b & 1 == 1).map(|(i, _)| i)
    }

    pub fn is_connected(&self) -> bool {
        let mut dsu = Dsu::new(self.n);
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        (0..self.n).all(|v| dsu.find(v) == 0)
    }

    /// Whether the edge ids form an acyclic set.
    pub fn is_forest(&self, edges: &[usize]) -> bool {
        let mut dsu = Dsu::new(self.n);
        edges.iter().all(|&e| {
            let (u, v) = self.edges[e];
            dsu.union(u, v)
        })
    }

    /// Vertices touched by the given edges, sorted.
    pub fn vertices_of(&self, edges: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = edges.iter().flat_map(|&e| [self.edges[e].0, self.edges[e].1]).collect();
        s.into_iter().collect()
    }

    /// Connected components of the subgraph formed by `edges` (as edge id lists).
    pub fn edge_components(&self, edges: &[usize]) -> Vec<Vec<usize>> {
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&e| self.edges[e]).collect();
        edge_set_components(self.n, &pairs)
            .into_iter()
            .map(|comp| comp.into_iter().map(|i| edges[i]).collect())
            .collect()
    }

    /// Diameter of the graph formed by `edges`; `None` when it is disconnected or empty.
    pub fn edge_set_diameter(&self, edges: &[usize]) -> Option<usize> {
        if edges.is_empty() {
            return None;
        }
        let verts = self.vertices_of(edges);
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in edges {
            let (u, v) = self.edges[e];
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut diam = 0;
        for &s in &verts {
            let dist = bfs(&adj, s);
            if dist.len() != verts.len() {
                return None;
            }
            diam = diam.max(*dist.values().max().expect("nonempty"));
        }
        Some(diam)
    }

    /// All vertex relabelings of edge sets, used to canonicalize small graphs.
    fn canonical_mask(&self, perms: &[Vec<usize>]) -> u64 {
        let idx = pair_index(self.n);
        perms
            .iter()
            .map(|p| {
                self.edges.iter().fold(0u64, |m, &(u, v)| {
                    let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                    m | 1 << idx[a][b]
                })
            })
            .min()
            .unwrap_or(0)
    }
}

fn bfs(adj: &HashMap<usize, Vec<usize>>, s: usize) -> HashMap<usize, usize> {
    let mut dist = HashMap::new();
    dist.insert(s, 0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        let du = dist[&u];
        for &w in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(du + 1);
                q.push_back(w);
            }
        }
    }
    dist
}

/// Components of an edge list, as index lists into `pairs`.
fn edge_set_components(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut dsu = Dsu::new(n);
    for &(u, v) in pairs {
        dsu.union(u, v);
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &(u, _)) in pairs.iter().enumerate() {
        by_root.entry(dsu.find(u)).or_default().push(i);
    }
    by_root.into_values().collect()
}

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![0; n]; n];
    let mut k = 0;
    for (u, row) in idx.iter_mut().enumerate() {
        for cell in row.iter_mut().skip(u + 1) {
            *cell = k;
            k += 1;
        }
    }
    idx
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative per isomorphism class of graphs on exactly `n` vertices.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "exhaustive isomorphism classes are limited to 7 vertices");
    let pairs = n * n.saturating_sub(1) / 2;
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    for mask in 0u64..(1u64 << pairs) {
        let g = Graph::from_pair_mask(n, mask);
        seen.insert(g.canonical_mask(&perms));
    }
    seen.into_iter().map(|m| Graph::from_pair_mask(n, m)).collect()
}

/// Connected representatives on exactly `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    graphs_up_to_isomorphism(n).into_iter().filter(Graph::is_connected).collect()
}

/// Union-find over vertices.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Merges the classes; false when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::from_edges(2, &[(0, 0)]), Err(Error::LoopEdge { line: 1 }));
        assert_eq!(Graph::from_edges(2, &[(0, 1), (1, 0)]), Err(Error::DuplicateEdge { line: 2 }));
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| graphs_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
        let conn: Vec<usize> = (1..=5).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(conn, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn forests_and_diameters() {
        let k4 = Graph::complete(4);
        let tri: Vec<usize> = [(0, 1), (1, 2), (0, 2)].iter().map(|&(u, v)| k4.edge_id(u, v).unwrap()).collect();
        assert!(!k4.is_forest(&tri));
        assert!(k4.is_forest(&tri[..2]));
        let p = Graph::path(5);
        assert_eq!(p.edge_set_diameter(&[0, 1, 2, 3]), Some(4));
        assert_eq!(p.edge_set_diameter(&[0, 2]), None);
        assert_eq!(p.edge_components(&[0, 2, 3]), vec![vec![0], vec![2, 3]]);
    }
}
