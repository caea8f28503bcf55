use std::collections::BTreeSet;

use crate::circuits::ConstraintSystem;
use crate::graph::Graph;
use crate::ratmat::Rational;

/// Edge-set families whose characteristic vectors form the rows of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintFamilyKind {
    /// `E[U]` for every 5-vertex set `U`.
    Induced5Sets,
    /// Edge sets of paths with 4 edges.
    Paths4,
    /// Every set of 3 edges.
    AllSize3Sets,
    /// Edge sets of paths with 3 edges.
    Paths3,
    /// Edge sets of cycles of length 3 or 4.
    CyclesUpTo4,
    /// Edge sets of stars with at least 2 edges.
    StarsAtLeast2,
    /// `δ(v)` for every non-isolated vertex.
    MaximalStars,
}

impl ConstraintFamilyKind {
    pub const ALL: [ConstraintFamilyKind; 7] = [
        Self::Induced5Sets,
        Self::Paths4,
        Self::AllSize3Sets,
        Self::Paths3,
        Self::CyclesUpTo4,
        Self::StarsAtLeast2,
        Self::MaximalStars,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Induced5Sets => "induced5",
            Self::Paths4 => "paths4",
            Self::AllSize3Sets => "size3",
            Self::Paths3 => "paths3",
            Self::CyclesUpTo4 => "cycles4",
            Self::StarsAtLeast2 => "stars2",
            Self::MaximalStars => "maxstars",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Family members as sorted edge-id lists, deduplicated, empty sets dropped.
pub fn family_members(g: &Graph, kind: ConstraintFamilyKind) -> Vec<Vec<usize>> {
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    match kind {
        ConstraintFamilyKind::Induced5Sets => {
            for u in vertex_subsets(g.vertex_count(), 5) {
                out.insert(g.induced_edges(u).collect());
            }
        }
        ConstraintFamilyKind::Paths4 => out.extend(paths(g, 4)),
        ConstraintFamilyKind::Paths3 => out.extend(paths(g, 3)),
        ConstraintFamilyKind::AllSize3Sets => {
            let m = g.edge_count();
            for a in 0..m {
                for b in a + 1..m {
                    for c in b + 1..m {
                        out.insert(vec![a, b, c]);
                    }
                }
            }
        }
        ConstraintFamilyKind::CyclesUpTo4 => out.extend(short_cycles(g)),
        ConstraintFamilyKind::StarsAtLeast2 => {
            for v in 0..g.vertex_count() {
                let inc = incident(g, v);
                for mask in 0u64..(1u64 << inc.len()) {
                    if mask.count_ones() >= 2 {
                        let mut s: Vec<usize> = (0..inc.len()).filter(|i| mask >> i & 1 == 1).map(|i| inc[i]).collect();
                        s.sort_unstable();
                        out.insert(s);
                    }
                }
            }
        }
        ConstraintFamilyKind::MaximalStars => {
            for v in 0..g.vertex_count() {
                out.insert(incident(g, v));
            }
        }
    }
    out.into_iter().filter(|s| !s.is_empty()).collect()
}

/// `B = [family rows; I]` with duplicate rows removed and every rhs set to `rhs`.
pub fn build_family_system(g: &Graph, kind: ConstraintFamilyKind) -> ConstraintSystem {
    build_family_system_with_rhs(g, kind, Rational::one())
}

pub fn build_family_system_with_rhs(g: &Graph, kind: ConstraintFamilyKind, rhs: Rational) -> ConstraintSystem {
    let m = g.edge_count();
    let mut sys = ConstraintSystem::with_labels((0..m).map(|e| g.edge_name(e)).collect());
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let members = family_members(g, kind);
    let identity = (0..m).map(|e| vec![e]);
    for set in members.into_iter().chain(identity) {
        if !seen.insert(set.clone()) {
            continue;
        }
        let mut row = vec![Rational::zero(); m];
        for &e in &set {
            row[e] = Rational::one();
        }
        let label = format!("{{{}}}", set.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(","));
        sys.add_inequality(&row, rhs.clone(), label);
    }
    sys
}

fn incident(g: &Graph, v: usize) -> Vec<usize> {
    (0..g.edge_count()).filter(|&e| g.edge(e).0 == v || g.edge(e).1 == v).collect()
}

/// Bitmasks of all `size`-subsets of `0..n`.
pub fn vertex_subsets(n: usize, size: usize) -> Vec<u64> {
    fn rec(start: usize, n: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for v in start..n {
            if n - v < left {
                break;
            }
            rec(v + 1, n, left - 1, cur | 1 << v, out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, 0, &mut out);
    out
}

/// Edge sets of simple paths with exactly `len` edges.
fn paths(g: &Graph, len: usize) -> BTreeSet<Vec<usize>> {
    fn rec(
        g: &Graph,
        v: usize,
        visited: &mut Vec<bool>,
        edges: &mut Vec<usize>,
        len: usize,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if edges.len() == len {
            let mut s = edges.clone();
            s.sort_unstable();
            out.insert(s);
            return;
        }
        for w in g.neighbors(v) {
            if visited[w] {
                continue;
            }
            visited[w] = true;
            edges.push(g.edge_id(v, w).expect("adjacent"));
            rec(g, w, visited, edges, len, out);
            edges.pop();
            visited[w] = false;
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.vertex_count() {
        let mut visited = vec![false; g.vertex_count()];
        visited[s] = true;
        rec(g, s, &mut visited, &mut Vec::new(), len, &mut out);
    }
    out
}

/// Edge sets of all 3- and 4-cycles.
fn short_cycles(g: &Graph) -> BTreeSet<Vec<usize>> {
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    let e = |a: usize, b: usize| g.edge_id(a, b);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a == b || b == c || a == c {
                    continue;
                }
                if let (Some(x), Some(y), Some(z)) = (e(a, b), e(b, c), e(c, a)) {
                    let mut s = vec![x, y, z];
                    s.sort_unstable();
                    out.insert(s);
                }
                for d in 0..n {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    if let (Some(x), Some(y), Some(z), Some(w)) = (e(a, b), e(b, c), e(c, d), e(d, a)) {
                        let mut s = vec![x, y, z, w];
                        s.sort_unstable();
                        out.insert(s);
                    }
                }
            }
        }
    }
    out
}
