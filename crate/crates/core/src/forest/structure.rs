use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::circuits::{circuit_record, is_circuit, Circuit, CircuitDecision};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratmat::{axpy, is_zero_vector, support, RatVector, Rational};

use super::{
    balanced_sets, check_vertices, induced_sum, rank_system, row_subset, subset_row, RankIndex, SignedEdgeVector,
    VERTEX_CAP,
};

/// Largest support searched by [`mixed_drop_search`] by default.
pub const DEFAULT_DROP_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DropKind {
    UnitEdge(usize),
    MixedSet(Vec<usize>),
}

/// `y` has strictly smaller rank-row support than `g`; `extra_zero_row` is a
/// row nonzero for `g` and zero for `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DropWitness {
    pub kind: DropKind,
    pub y: SignedEdgeVector,
    pub extra_zero_row: usize,
    pub extra_zero_set: Vec<usize>,
}

/// First subset imbalanced for `x` and balanced for `y`, provided no subset
/// balanced for `x` is imbalanced for `y`.
fn reducing_row(g: &Graph, y: &[Rational], x: &[Rational]) -> Option<u64> {
    let mut extra = None;
    for u in 1..1u64 << g.vertex_count() {
        let (sy, sx) = (induced_sum(g, y, u), induced_sum(g, x, u));
        if sx.is_zero() && !sy.is_zero() {
            return None;
        }
        if extra.is_none() && !sx.is_zero() && sy.is_zero() {
            extra = Some(u);
        }
    }
    extra
}

fn witness(g: &Graph, kind: DropKind, y: RatVector, x: &[Rational]) -> Option<DropWitness> {
    let u = reducing_row(g, &y, x)?;
    let row = subset_row(u);
    Some(DropWitness { kind, y: SignedEdgeVector::new(y), extra_zero_row: row, extra_zero_set: row_subset(row) })
}

fn check_input(g: &Graph, x: &SignedEdgeVector) -> Result<()> {
    check_vertices(g, VERTEX_CAP)?;
    if x.len() != g.edge_count() {
        return Err(Error::DimensionMismatch(format!("{} entries for {} edges", x.len(), g.edge_count())));
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Lowest support edge contained in no balanced set, dropped.
pub fn droppable_edge(g: &Graph, x: &SignedEdgeVector) -> Result<Option<DropWitness>> {
    check_input(g, x)?;
    let report = balanced_sets(g, x)?;
    let Some((&e, _)) = report.edge_in_some_balanced_set.iter().find(|(_, &inside)| !inside) else {
        return Ok(None);
    };
    let mut y = x.values.clone();
    y[e] = Rational::zero();
    Ok(Some(witness(g, DropKind::UnitEdge(e), y, &x.values).expect("an edge in no balanced set is droppable")))
}

/// Mixed-sign sets `S` of the support, smallest first, whose complement is also
/// mixed-sign and whose zeroing reduces the rank-row support.
pub fn mixed_drop_search(g: &Graph, x: &SignedEdgeVector, limit: usize) -> Result<Option<DropWitness>> {
    check_input(g, x)?;
    if !x.is_01() {
        return Err(Error::NotIntegral);
    }
    if !x.is_mixed_sign() {
        return Err(Error::NotMixedSign);
    }
    let supp = x.support();
    if supp.len() > limit {
        return Err(Error::CapExceeded { cap: "subset-cap", limit, requested: supp.len() });
    }
    let idx = RankIndex::new(g)?;
    let (plus, minus) = x.masks().expect("0/±1");
    for k in 2..=supp.len().saturating_sub(2) {
        for s in supp.iter().copied().combinations(k) {
            let sm = s.iter().fold(0u128, |acc, &e| acc | 1 << e);
            let mixed = |p: u128, m: u128| p != 0 && m != 0;
            if !mixed(plus & sm, minus & sm) || !mixed(plus & !sm, minus & !sm) {
                continue;
            }
            if idx.reduces((plus & !sm, minus & !sm), (plus, minus)).is_some() {
                let mut y = x.values.clone();
                for &e in &s {
                    y[e] = Rational::zero();
                }
                return Ok(witness(g, DropKind::MixedSet(s), y, &x.values));
            }
        }
    }
    Ok(None)
}

/// Circuit `y` with `supp(By) ⊊ supp(Bx)` and `supp(y) ⊊ supp(x)`.
///
/// Tries a unit vector on a droppable edge, then the restriction left by a
/// mixed drop, then repeatedly replaces a full-support witness `w` of the current
/// vector `c` by `c - (c(e)/w(e)) w`, which zeroes `e`.
pub fn noncircuit_smaller_circuit(g: &Graph, x: &SignedEdgeVector) -> Result<Circuit> {
    check_input(g, x)?;
    let sys = rank_system(g)?;
    if is_circuit(&sys, &x.values)?.is_circuit() {
        return Err(Error::IsActuallyCircuit);
    }
    let finish = |y: &[Rational]| -> Result<Circuit> {
        let c = circuit_record(&sys, y);
        let smaller = support(y).iter().all(|&e| !x.values[e].is_zero()) && support(y).len() < x.support().len();
        if !smaller || reducing_row(g, y, &x.values).is_none() {
            return Err(Error::BadInstance("smaller circuit failed verification".into()));
        }
        Ok(c)
    };
    if let Some(w) = droppable_edge(g, x)? {
        let DropKind::UnitEdge(e) = w.kind else { unreachable!() };
        let mut unit = vec![Rational::zero(); x.len()];
        unit[e] = Rational::one();
        return finish(&unit);
    }
    let mut cur = x.values.clone();
    if x.is_01() && x.is_mixed_sign() {
        if let Ok(Some(w)) = mixed_drop_search(g, x, DEFAULT_DROP_LIMIT) {
            cur = w.y.values;
        }
    }
    loop {
        match is_circuit(&sys, &cur)? {
            CircuitDecision::Circuit(_) => return finish(&cur),
            CircuitDecision::NotCircuit { witness: w } => {
                cur = if support(&w) == support(&cur) {
                    support(&cur)
                        .into_iter()
                        .map(|e| axpy(&cur, &-(&cur[e] / &w[e]), &w))
                        .find(|z| !is_zero_vector(z))
                        .expect("witness is not parallel to the vector")
                } else {
                    w
                };
            }
            CircuitDecision::NotInKernel => unreachable!("rank systems have no equalities"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StructureKind {
    AltPath,
    AltEvenCycle,
    RootedAltCycle,
    PseudoAltPath,
    PseudoAltCycle,
    DisconnectedComposite,
    None,
}

/// Support edges of one connected piece walked in order, with their signs,
/// or `None` when the piece is not a path or cycle.
fn ordered_signs(g: &Graph, edges: &[usize], sign: &dyn Fn(usize) -> i32) -> Option<(Vec<i32>, bool)> {
    let verts = g.vertices_of(edges);
    let mut inc: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in edges {
        let (u, v) = g.edge(e);
        inc.entry(u).or_default().push(e);
        inc.entry(v).or_default().push(e);
    }
    if inc.values().any(|es| es.len() > 2) {
        return None;
    }
    let cycle = edges.len() == verts.len();
    let start = if cycle { verts[0] } else { *inc.iter().find(|(_, es)| es.len() == 1)?.0 };
    let mut order = Vec::with_capacity(edges.len());
    let (mut at, mut prev) = (start, usize::MAX);
    while order.len() < edges.len() {
        let &e = inc[&at].iter().find(|&&e| e != prev)?;
        order.push(sign(e));
        let (u, v) = g.edge(e);
        at = if u == at { v } else { u };
        prev = e;
    }
    Some((order, cycle))
}

/// Lengths and signs of maximal same-sign runs; cyclic runs start at a sign change.
fn runs(signs: &[i32], cyclic: bool) -> Vec<(i32, usize)> {
    let mut s = signs.to_vec();
    if cyclic {
        if let Some(k) = (0..s.len()).find(|&i| s[i] != s[(i + s.len() - 1) % s.len()]) {
            s.rotate_left(k);
        }
    }
    let mut out: Vec<(i32, usize)> = Vec::new();
    for x in s {
        match out.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn connected_kind(g: &Graph, edges: &[usize], sign: &dyn Fn(usize) -> i32) -> StructureKind {
    let Some((signs, cycle)) = ordered_signs(g, edges, sign) else {
        return StructureKind::None;
    };
    let r = runs(&signs, cycle);
    if r.len() < 2 {
        return StructureKind::None;
    }
    let all_single = r.iter().all(|&(_, n)| n == 1);
    if !cycle {
        if all_single {
            return StructureKind::AltPath;
        }
        if r.len() >= 4 && r.iter().all(|&(_, n)| n >= 2) {
            return StructureKind::PseudoAltPath;
        }
        return StructureKind::None;
    }
    let len = signs.len();
    if all_single && len >= 4 {
        return StructureKind::AltEvenCycle;
    }
    if len % 2 == 1 && len >= 5 && r.iter().filter(|&&(_, n)| n == 2).count() == 1 && r.iter().all(|&(_, n)| n <= 2) {
        return StructureKind::RootedAltCycle;
    }
    // either sign may play the role of the runs of length >= 2
    let fits = |short: i32| r.iter().all(|&(s, n)| if s == short { n >= 2 } else { n >= 3 });
    if r.len() >= 4 && (fits(1) || fits(-1)) {
        return StructureKind::PseudoAltCycle;
    }
    StructureKind::None
}

/// Which circuit-guaranteeing shape the signed support has.
pub fn structure_recognizer(g: &Graph, x: &SignedEdgeVector) -> StructureKind {
    if x.len() != g.edge_count() || !x.is_01() || !x.is_mixed_sign() {
        return StructureKind::None;
    }
    let sign = |e: usize| x.values[e].signum();
    let comps = g.edge_components(&x.support());
    if comps.len() == 1 {
        return connected_kind(g, &comps[0], &sign);
    }
    let ok = comps.iter().all(|c| {
        let uniform = c.iter().all(|&e| sign(e) == sign(c[0]));
        uniform || connected_kind(g, c, &sign) != StructureKind::None
    });
    if ok {
        StructureKind::DisconnectedComposite
    } else {
        StructureKind::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PartitionSource {
    /// Split by sign across the dropped set and its complement.
    DropSet,
    /// Found by trying every bipartition.
    BruteForce,
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub support_connected: bool,
    pub parts: Option<(Vec<usize>, Vec<usize>)>,
    pub diameters: Option<(usize, usize)>,
    pub source: PartitionSource,
}

impl StructureReport {
    /// Connected support split into two connected parts of diameter at most 5.
    pub fn holds(&self) -> bool {
        self.support_connected && self.parts.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Classification {
    IsCircuit,
    NonCircuit { witness: DropWitness, structure: Option<StructureReport> },
}

impl Classification {
    pub fn is_circuit(&self) -> bool {
        matches!(self, Classification::IsCircuit)
    }
}

fn small_diameter(g: &Graph, part: &[usize]) -> Option<usize> {
    g.edge_set_diameter(part).filter(|&d| d <= 5)
}

/// Two edge sets and their diameters.
pub type Split = ((Vec<usize>, Vec<usize>), (usize, usize));

/// Bipartitions of `supp` into two connected parts of diameter at most 5.
pub fn split_low_diameter(g: &Graph, supp: &[usize]) -> Option<Split> {
    let k = supp.len();
    if !(2..=24).contains(&k) {
        return None;
    }
    for mask in 1u64..1 << (k - 1) {
        let (a, b): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| mask >> i & 1 == 1);
        let a: Vec<usize> = a.into_iter().map(|i| supp[i]).collect();
        let b: Vec<usize> = b.into_iter().map(|i| supp[i]).collect();
        if let (Some(da), Some(db)) = (small_diameter(g, &a), small_diameter(g, &b)) {
            return Some(((a, b), (da, db)));
        }
    }
    None
}

/// Circuit, or a witness of smaller support: a droppable edge when one exists,
/// otherwise a mixed drop together with the low-diameter split of the support.
pub fn classify_01(g: &Graph, x: &SignedEdgeVector) -> Result<Classification> {
    check_input(g, x)?;
    if !x.is_01() {
        return Err(Error::NotIntegral);
    }
    let sys = rank_system(g)?;
    if is_circuit(&sys, &x.values)?.is_circuit() {
        return Ok(Classification::IsCircuit);
    }
    if let Some(w) = droppable_edge(g, x)? {
        return Ok(Classification::NonCircuit { witness: w, structure: None });
    }
    let w = match mixed_drop_search(g, x, DEFAULT_DROP_LIMIT) {
        Ok(Some(w)) => w,
        _ => {
            let y = noncircuit_smaller_circuit(g, x)?.vector;
            let s: Vec<usize> = x.support().into_iter().filter(|&e| y[e].is_zero()).collect();
            witness(g, DropKind::MixedSet(s), y, &x.values).expect("smaller circuit reduces the support")
        }
    };
    let supp = x.support();
    let DropKind::MixedSet(s) = &w.kind else { unreachable!() };
    let in_s = |e: &usize| s.contains(e);
    let (r1, r2): (Vec<usize>, Vec<usize>) =
        supp.iter().partition(|&e| (in_s(e) && x.values[*e].is_negative()) || (!in_s(e) && x.values[*e].is_positive()));
    let support_connected = g.edge_components(&supp).len() == 1;
    let (parts, diameters, source) = match (small_diameter(g, &r1), small_diameter(g, &r2)) {
        (Some(d1), Some(d2)) => (Some((r1, r2)), Some((d1, d2)), PartitionSource::DropSet),
        _ => match split_low_diameter(g, &supp) {
            Some((p, d)) => (Some(p), Some(d), PartitionSource::BruteForce),
            None => (None, None, PartitionSource::NotFound),
        },
    };
    Ok(Classification::NonCircuit {
        witness: w,
        structure: Some(StructureReport { support_connected, parts, diameters, source }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &[i64]) -> SignedEdgeVector {
        SignedEdgeVector::from_signs(s)
    }

    /// Edges 12 23 34 45 56 36 37 17 on vertices 1..7 (ids 0..6).
    fn eight_edge_example() -> (Graph, SignedEdgeVector) {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 5), (2, 6), (0, 6)]).unwrap();
        (g, sv(&[1, 1, 1, 1, -1, -1, -1, -1]))
    }

    #[test]
    fn plus_then_minuses_path() {
        let g = Graph::path(5);
        let x = sv(&[1, -1, -1, -1]);
        let w = droppable_edge(&g, &x).unwrap().unwrap();
        assert_eq!(w.kind, DropKind::UnitEdge(2));
        let y = noncircuit_smaller_circuit(&g, &x).unwrap();
        assert_eq!(y.vector, sv(&[0, 0, 1, 0]).values);
    }

    #[test]
    fn alternating_path_has_no_drop() {
        let g = Graph::path(5);
        let x = sv(&[1, -1, 1, -1]);
        assert!(droppable_edge(&g, &x).unwrap().is_none());
        assert!(mixed_drop_search(&g, &x, 10).unwrap().is_none());
        assert_eq!(structure_recognizer(&g, &x), StructureKind::AltPath);
        assert!(classify_01(&g, &x).unwrap().is_circuit());
    }

    #[test]
    fn uniform_vectors() {
        let g = Graph::path(3);
        let x = sv(&[1, 1]);
        assert_eq!(droppable_edge(&g, &x).unwrap().unwrap().kind, DropKind::UnitEdge(0));
        assert_eq!(mixed_drop_search(&g, &x, 10), Err(Error::NotMixedSign));
        assert_eq!(noncircuit_smaller_circuit(&g, &x).unwrap().vector, sv(&[1, 0]).values);
        assert!(classify_01(&g, &sv(&[0, -1])).unwrap().is_circuit());
    }

    #[test]
    fn rooted_cycles() {
        let c5 = Graph::cycle(5);
        let x = sv(&[1, -1, 1, -1, 1]);
        assert_eq!(structure_recognizer(&c5, &x), StructureKind::RootedAltCycle);
        assert!(classify_01(&c5, &x).unwrap().is_circuit());
        let c3 = Graph::cycle(3);
        let t = sv(&[1, -1, 1]);
        assert_eq!(structure_recognizer(&c3, &t), StructureKind::None);
        assert!(!classify_01(&c3, &t).unwrap().is_circuit());
    }

    #[test]
    fn pseudo_cycle_length_rule() {
        let c7 = Graph::cycle(7);
        assert_eq!(structure_recognizer(&c7, &sv(&[1, 1, -1, -1, 1, 1, -1])), StructureKind::None);
        let c10 = Graph::cycle(10);
        assert_eq!(
            structure_recognizer(&c10, &sv(&[1, 1, -1, -1, -1, 1, 1, -1, -1, -1])),
            StructureKind::PseudoAltCycle
        );
    }

    #[test]
    fn composite_with_a_lone_edge() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (5, 6)]).unwrap();
        let x = sv(&[1, -1, 1, -1, 1]);
        assert_eq!(structure_recognizer(&g, &x), StructureKind::DisconnectedComposite);
        assert!(classify_01(&g, &x).unwrap().is_circuit());
    }

    #[test]
    fn eight_edge_mixed_drop() {
        let (g, x) = eight_edge_example();
        assert!(droppable_edge(&g, &x).unwrap().is_none());
        let w = mixed_drop_search(&g, &x, 10).unwrap().unwrap();
        assert_eq!(w.kind, DropKind::MixedSet(vec![0, 3, 4, 7]));
        let y = noncircuit_smaller_circuit(&g, &x).unwrap();
        assert_eq!(support(&y.vector), vec![1, 2, 5, 6]);
        match classify_01(&g, &x).unwrap() {
            Classification::NonCircuit { structure: Some(s), .. } => assert!(s.holds()),
            other => panic!("{other:?}"),
        }
    }
}
