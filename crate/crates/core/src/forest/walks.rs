use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::circuits::{enumerate_circuits, validate_walk, EnumerationOptions, WalkTrace};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratmat::{axpy, RatVector, Rational};

use super::mwf_system;

type EdgeSet = BTreeSet<usize>;

pub fn forest_vector(m: usize, edges: &[usize]) -> RatVector {
    let mut x = vec![Rational::zero(); m];
    for &e in edges {
        x[e] = Rational::one();
    }
    x
}

fn check_forest(g: &Graph, f: &[usize]) -> Result<EdgeSet> {
    let set: EdgeSet = f.iter().copied().collect();
    if set.len() != f.len() || f.iter().any(|&e| e >= g.edge_count()) || !g.is_forest(f) {
        return Err(Error::NotAForest);
    }
    Ok(set)
}

fn f_degree(g: &Graph, f: &EdgeSet, v: usize) -> usize {
    f.iter().filter(|&&e| g.edge(e).0 == v || g.edge(e).1 == v).count()
}

/// Edge sets visited from the empty set to `f`: add a leaf edge `e = uv`, trade it
/// for the other edges at `v`, add it back, trade it for the remaining edges,
/// add it back. Empty trades are skipped.
fn zero_to_sets(g: &Graph, f: &EdgeSet) -> Vec<EdgeSet> {
    let mut seq = vec![EdgeSet::new()];
    let Some(&e) = f.iter().find(|&&e| f_degree(g, f, g.edge(e).0) == 1 || f_degree(g, f, g.edge(e).1) == 1) else {
        return seq;
    };
    let (a, b) = g.edge(e);
    let v = if f_degree(g, f, a) == 1 { b } else { a };
    let at_v: EdgeSet = f.iter().copied().filter(|&x| x != e && (g.edge(x).0 == v || g.edge(x).1 == v)).collect();
    let rest: EdgeSet = f.iter().copied().filter(|&x| x != e && !at_v.contains(&x)).collect();
    seq.push(EdgeSet::from([e]));
    let mut done = EdgeSet::new();
    for part in [at_v, rest] {
        if part.is_empty() {
            continue;
        }
        done.extend(part);
        seq.push(done.clone());
        let mut with_e = done.clone();
        with_e.insert(e);
        seq.push(with_e);
    }
    seq
}

fn trace_of(m: usize, seq: &[EdgeSet]) -> WalkTrace {
    let pts: Vec<RatVector> = seq.iter().map(|s| forest_vector(m, &s.iter().copied().collect::<Vec<_>>())).collect();
    let mut t = WalkTrace::empty(pts[0].clone());
    for w in pts.windows(2) {
        t.push(w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect(), Rational::one());
    }
    t
}

fn validated(g: &Graph, seq: &[EdgeSet]) -> Result<WalkTrace> {
    let sys = mwf_system(g)?;
    let trace = trace_of(g.edge_count(), seq);
    if let Err(v) = validate_walk(&sys, &trace) {
        return Err(Error::BadInstance(format!("constructed walk rejected: {v}")));
    }
    Ok(trace)
}

/// Walk of at most 5 unit-length steps from `0` to `X(f)` through forests.
pub fn walk_zero_to_forest(g: &Graph, f: &[usize]) -> Result<WalkTrace> {
    let set = check_forest(g, f)?;
    validated(g, &zero_to_sets(g, &set))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Through `0`, merging the two middle steps: at most 9 steps.
    General,
    /// Through 3-edge paths in a complete graph on at least 5 vertices: at most 7 steps.
    Complete,
}

fn general_sets(g: &Graph, f1: &EdgeSet, f2: &EdgeSet) -> Vec<EdgeSet> {
    let mut a = zero_to_sets(g, f1);
    a.reverse();
    let b = zero_to_sets(g, f2);
    let mut seq: Vec<EdgeSet> = Vec::new();
    let joined = if f1.is_empty() || f2.is_empty() {
        a.into_iter().chain(b.into_iter().skip(1)).collect::<Vec<_>>()
    } else {
        a.pop();
        a.into_iter().chain(b.into_iter().skip(1)).collect()
    };
    for s in joined {
        if seq.last() != Some(&s) {
            seq.push(s);
        }
    }
    seq
}

fn leaves(g: &Graph, f: &EdgeSet) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| f_degree(g, f, v) == 1).collect()
}

fn edge_at(g: &Graph, f: &EdgeSet, v: usize) -> usize {
    *f.iter().find(|&&e| g.edge(e).0 == v || g.edge(e).1 == v).expect("leaf has an edge")
}

fn other(g: &Graph, e: usize, v: usize) -> usize {
    let (a, b) = g.edge(e);
    if a == v {
        b
    } else {
        a
    }
}

/// Lowest-id edge `u w` with `w` outside `avoid`.
fn edge_from(g: &Graph, u: usize, avoid: &[usize]) -> Result<usize> {
    (0..g.edge_count())
        .find(|&e| {
            let (a, b) = g.edge(e);
            (a == u || b == u) && !avoid.contains(&other(g, e, u))
        })
        .ok_or_else(|| Error::BadInstance("needs at least 5 vertices".into()))
}

/// From `f` to a forest whose edges form a path of length 3, in at most 2 steps.
fn to_path3(g: &Graph, f: &EdgeSet) -> Result<Vec<EdgeSet>> {
    if f.len() <= 3 {
        return Ok(vec![f.clone()]);
    }
    let l = leaves(g, f);
    let (u, v) = (l[0], l[1]);
    let e = g.edge_id(u, v).expect("complete graph");
    let (fe, he) = (edge_at(g, f, u), edge_at(g, f, v));
    if f.contains(&e) {
        let fp = edge_from(g, u, &[u, v])?;
        let w = other(g, fp, u);
        let hp = edge_from(g, v, &[v, u, w])?;
        let mut tilde: EdgeSet = f.iter().copied().filter(|&x| x != e).collect();
        tilde.extend([fp, hp]);
        return Ok(vec![f.clone(), tilde, EdgeSet::from([e, fp, hp])]);
    }
    let (a, b) = (other(g, fe, u), other(g, he, v));
    if a != b {
        return Ok(vec![f.clone(), EdgeSet::from([fe, e, he])]);
    }
    // u and v hang off the same vertex a: move u's edge off a first
    let fp = edge_from(g, u, &[u, v, a])?;
    let mut moved: EdgeSet = f.iter().copied().filter(|&x| x != fe).collect();
    moved.insert(fp);
    Ok(vec![f.clone(), moved, EdgeSet::from([e, fp, he])])
}

/// Shortest sequence from `a` to `b` through forests inside `a ∪ b`, moving
/// by adding, removing or exchanging a single edge.
fn exchange_bfs(g: &Graph, a: &EdgeSet, b: &EdgeSet) -> Vec<EdgeSet> {
    let pool: Vec<usize> = a.union(b).copied().collect();
    let mut parent: HashMap<EdgeSet, Option<EdgeSet>> = HashMap::from([(a.clone(), None)]);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(s) = queue.pop_front() {
        if &s == b {
            let mut path = vec![s];
            while let Some(Some(p)) = parent.get(path.last().expect("nonempty")) {
                path.push(p.clone());
            }
            path.reverse();
            return path;
        }
        let mut next = Vec::new();
        for &x in &pool {
            let mut t = s.clone();
            if !t.remove(&x) {
                t.insert(x);
            }
            next.push(t);
        }
        for &x in s.iter() {
            for &y in pool.iter().filter(|y| !s.contains(y)) {
                let mut t = s.clone();
                t.remove(&x);
                t.insert(y);
                next.push(t);
            }
        }
        for t in next {
            if !parent.contains_key(&t) && g.is_forest(&t.iter().copied().collect::<Vec<_>>()) {
                parent.insert(t.clone(), Some(s.clone()));
                queue.push_back(t);
            }
        }
    }
    unreachable!("removing and adding edges one at a time always connects two forests")
}

/// Walk from `X(f1)` to `X(f2)` along 0/±1 circuits with unit steps.
pub fn walk_forest_to_forest(g: &Graph, f1: &[usize], f2: &[usize], route: Route) -> Result<WalkTrace> {
    let s1 = check_forest(g, f1)?;
    let s2 = check_forest(g, f2)?;
    if s1 == s2 {
        return validated(g, &[s1]);
    }
    let seq = match route {
        Route::General => general_sets(g, &s1, &s2),
        Route::Complete => {
            if !g.is_complete() || g.vertex_count() < 5 {
                return Err(Error::BadInstance("the short route needs a complete graph on at least 5 vertices".into()));
            }
            let mut head = to_path3(g, &s1)?;
            let mut tail = to_path3(g, &s2)?;
            tail.reverse();
            let mid = exchange_bfs(g, head.last().expect("nonempty"), &tail[0]);
            head.extend(mid.into_iter().skip(1));
            head.extend(tail.into_iter().skip(1));
            head
        }
    };
    validated(g, &seq)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub circuits: usize,
    /// Distinct points reached from `0` within two maximal steps, `0` included.
    pub explored_states: usize,
    pub reached_within_two: bool,
    /// A 3-step walk when one was constructed.
    pub three_step_walk: Option<WalkTrace>,
}

/// Confirms `X(f)` is not within two circuit steps of `0` by expanding every
/// feasible maximal step along every circuit of the forest polytope, twice.
pub fn lower_bound_check(g: &Graph, f: &[usize], opts: &EnumerationOptions) -> Result<LowerBoundReport> {
    let set = check_forest(g, f)?;
    let spanning_size = {
        let mut dsu = crate::graph::Dsu::new(g.vertex_count());
        g.edges().iter().filter(|&&(u, v)| dsu.union(u, v)).count()
    };
    if g.vertex_count() < 4 || set.len() < 3 || set.len() != spanning_size {
        return Err(Error::BadInstance("needs |V| >= 4 and a spanning forest with at least 3 edges".into()));
    }
    let sys = mwf_system(g)?;
    let pool = enumerate_circuits(&sys, opts)?;
    let dirs: Vec<(RatVector, RatVector)> = pool
        .iter()
        .flat_map(|c| [c.vector.clone(), c.negated()])
        .map(|d| {
            let bd = sys.ineq.mul_vec(&d);
            (d, bd)
        })
        .collect();
    let target = forest_vector(g.edge_count(), f);
    let start = vec![Rational::zero(); g.edge_count()];
    let mut seen: HashSet<RatVector> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    for _ in 0..2 {
        let mut next = Vec::new();
        for x in &frontier {
            let bx = sys.ineq.mul_vec(x);
            for (d, bd) in &dirs {
                let mut eps: Option<Rational> = None;
                let mut blocked = false;
                for ((bxi, bdi), di) in bx.iter().zip(bd).zip(&sys.d) {
                    if bdi.is_positive() {
                        if bxi == di {
                            blocked = true;
                            break;
                        }
                        let t = &(di - bxi) / bdi;
                        if eps.as_ref().is_none_or(|b| &t < b) {
                            eps = Some(t);
                        }
                    }
                }
                if blocked {
                    continue;
                }
                let Some(eps) = eps else {
                    continue;
                };
                let y = axpy(x, &eps, d);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let reached = seen.contains(&target);
    let three_step_walk = if set.len() == 3 {
        let seq: Vec<EdgeSet> = (0..=3).map(|k| set.iter().copied().take(k).collect()).collect();
        Some(validated(g, &seq)?)
    } else {
        Some(walk_zero_to_forest(g, f)?).filter(|t| t.len() == 3)
    };
    Ok(LowerBoundReport {
        circuits: pool.len(),
        explored_states: seen.len(),
        reached_within_two: reached,
        three_step_walk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(g: &Graph, pairs: &[(usize, usize)]) -> Vec<usize> {
        pairs.iter().map(|&(u, v)| g.edge_id(u, v).unwrap()).collect()
    }

    #[test]
    fn zero_to_forest_lengths() {
        let p5 = Graph::path(5);
        assert_eq!(walk_zero_to_forest(&p5, &[0]).unwrap().len(), 1);
        assert_eq!(walk_zero_to_forest(&p5, &[0, 1, 2, 3]).unwrap().len(), 5);
        let star = Graph::star(3);
        assert_eq!(walk_zero_to_forest(&star, &[0, 1, 2]).unwrap().len(), 3);
        assert_eq!(walk_zero_to_forest(&star, &[]).unwrap().len(), 0);
        let k3 = Graph::complete(3);
        assert_eq!(walk_zero_to_forest(&k3, &[0, 1, 2]).unwrap_err(), Error::NotAForest);
    }

    #[test]
    fn forest_to_forest_on_k5() {
        let g = Graph::complete(5);
        let a = ids(&g, &[(0, 1)]);
        let b = ids(&g, &[(2, 3)]);
        assert_eq!(walk_forest_to_forest(&g, &a, &b, Route::General).unwrap().len(), 1);
        assert_eq!(walk_forest_to_forest(&g, &a, &a, Route::Complete).unwrap().len(), 0);
        let t1 = ids(&g, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let t2 = ids(&g, &[(0, 2), (2, 4), (4, 1), (1, 3)]);
        assert!(walk_forest_to_forest(&g, &t1, &t2, Route::General).unwrap().len() <= 9);
        assert!(walk_forest_to_forest(&g, &t1, &t2, Route::Complete).unwrap().len() <= 7);
        assert!(walk_forest_to_forest(&Graph::path(5), &[0], &[1], Route::Complete).is_err());
    }

    #[test]
    fn lower_bound_on_small_graphs() {
        let opts = EnumerationOptions::default();
        let k4 = Graph::complete(4);
        let r = lower_bound_check(&k4, &ids(&k4, &[(0, 1), (1, 2), (2, 3)]), &opts).unwrap();
        assert!(!r.reached_within_two);
        assert_eq!(r.three_step_walk.map(|t| t.len()), Some(3));
        let star = Graph::star(3);
        let r = lower_bound_check(&star, &[0, 1, 2], &opts).unwrap();
        assert!(!r.reached_within_two);
        assert!(r.three_step_walk.is_some());
    }
}
