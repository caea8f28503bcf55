use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratmat::{axpy, dot, is_coprime_integral, is_zero_vector, RatVector, Rational};

use super::oracle::{is_circuit, Circuit, CircuitDecision};
use super::ConstraintSystem;

/// Points `x_0..x_k`, signed directions `g_i` and step lengths with
/// `x_{i+1} = x_i + ε_i g_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub points: Vec<RatVector>,
    /// Coprime integer directions in the sign actually walked.
    pub circuits_used: Vec<RatVector>,
    pub step_lengths: Vec<Rational>,
}

impl WalkTrace {
    pub fn empty(start: RatVector) -> Self {
        WalkTrace { points: vec![start], circuits_used: Vec::new(), step_lengths: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.circuits_used.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits_used.is_empty()
    }

    pub fn start(&self) -> &RatVector {
        &self.points[0]
    }

    pub fn end(&self) -> &RatVector {
        self.points.last().expect("trace has a start point")
    }

    pub fn push(&mut self, dir: RatVector, eps: Rational) {
        let next = axpy(self.end(), &eps, &dir);
        self.points.push(next);
        self.circuits_used.push(dir);
        self.step_lengths.push(eps);
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self) -> Self {
        WalkTrace {
            points: self.points.iter().rev().cloned().collect(),
            circuits_used: self.circuits_used.iter().rev().map(|g| g.iter().map(|x| -x).collect()).collect(),
            step_lengths: self.step_lengths.iter().rev().cloned().collect(),
        }
    }
}

/// Positive step bound along `g` from `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepBound {
    Finite(Rational),
    Unbounded,
}

/// Whether a positive step along `dir` stays feasible at feasible `x`.
pub fn direction_feasible(sys: &ConstraintSystem, x: &[Rational], dir: &[Rational]) -> bool {
    is_zero_vector(&sys.a.mul_vec(dir))
        && sys.ineq.row_iter().zip(&sys.d).all(|(r, rhs)| &dot(r, x) != rhs || !dot(r, dir).is_positive())
}

/// Pool circuits (either sign) along which a positive step is feasible at `x`.
pub fn feasible_circuits_at(sys: &ConstraintSystem, x: &[Rational], pool: &[Circuit]) -> Result<Vec<(Circuit, i8)>> {
    sys.check_len(x)?;
    if !sys.is_feasible(x) {
        return Err(Error::InfeasiblePoint);
    }
    let tight = sys.tight_rows(x);
    let mut out = Vec::new();
    for c in pool {
        if !is_zero_vector(&sys.a.mul_vec(&c.vector)) {
            continue;
        }
        let bg: Vec<Rational> = tight.iter().map(|&i| dot(sys.ineq.row(i), &c.vector)).collect();
        if bg.iter().all(|v| !v.is_positive()) {
            out.push((c.clone(), 1));
        }
        if bg.iter().all(|v| !v.is_negative()) {
            out.push((c.clone(), -1));
        }
    }
    Ok(out)
}

/// Largest `ε` with `x + ε·dir` feasible.
pub fn max_step(sys: &ConstraintSystem, x: &[Rational], dir: &[Rational]) -> Result<StepBound> {
    sys.check_len(x)?;
    sys.check_len(dir)?;
    if !direction_feasible(sys, x, dir) {
        return Err(Error::InfeasibleDirection);
    }
    Ok(step_from_products(&sys.ineq.mul_vec(x), &sys.ineq.mul_vec(dir), &sys.d))
}

fn step_from_products(bx: &[Rational], bg: &[Rational], d: &[Rational]) -> StepBound {
    let mut best: Option<Rational> = None;
    for ((bxi, bgi), di) in bx.iter().zip(bg).zip(d) {
        if bgi.is_positive() {
            let eps = &(di - bxi) / bgi;
            if best.as_ref().is_none_or(|b| &eps < b) {
                best = Some(eps);
            }
        }
    }
    best.map_or(StepBound::Unbounded, StepBound::Finite)
}

#[derive(Debug, Clone, Copy)]
pub struct WalkOptions {
    pub depth_cap: usize,
    pub integral_only: bool,
    /// Upper bound on stored states before giving up with `CapExceeded`.
    pub max_states: usize,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions { depth_cap: 12, integral_only: false, max_states: 2_000_000 }
    }
}

/// Shortest circuit walk from `start` to `target` using maximal steps along
/// pool circuits in either sign.
pub fn walk_bfs(
    sys: &ConstraintSystem,
    start: &[Rational],
    target: &[Rational],
    pool: &[Circuit],
    opts: &WalkOptions,
) -> Result<WalkTrace> {
    sys.check_len(start)?;
    sys.check_len(target)?;
    if !sys.is_feasible(start) || !sys.is_feasible(target) {
        return Err(Error::InfeasiblePoint);
    }
    if start == target {
        return Ok(WalkTrace::empty(start.to_vec()));
    }
    let dirs: Vec<(RatVector, RatVector)> = pool
        .iter()
        .filter(|c| is_zero_vector(&sys.a.mul_vec(&c.vector)))
        .flat_map(|c| [c.vector.clone(), c.negated()])
        .map(|g| {
            let bg = sys.ineq.mul_vec(&g);
            (g, bg)
        })
        .collect();

    // node -> (parent, direction index, step)
    let mut nodes: Vec<RatVector> = vec![start.to_vec()];
    let mut parent: Vec<Option<(usize, usize, Rational)>> = vec![None];
    let mut index: HashMap<RatVector, usize> = HashMap::new();
    index.insert(start.to_vec(), 0);
    let mut frontier = vec![0usize];
    for _depth in 0..opts.depth_cap {
        let mut next = Vec::new();
        for &u in &frontier {
            let x = nodes[u].clone();
            let bx = sys.ineq.mul_vec(&x);
            for (di, (g, bg)) in dirs.iter().enumerate() {
                let blocked = bx.iter().zip(bg).zip(&sys.d).any(|((a, b), d)| a == d && b.is_positive());
                if blocked {
                    continue;
                }
                let StepBound::Finite(eps) = step_from_products(&bx, bg, &sys.d) else {
                    continue;
                };
                let y = axpy(&x, &eps, g);
                let is_target = y.as_slice() == target;
                if opts.integral_only && !is_target && !y.iter().all(Rational::is_integer) {
                    continue;
                }
                if index.contains_key(&y) {
                    continue;
                }
                let id = nodes.len();
                index.insert(y.clone(), id);
                nodes.push(y);
                parent.push(Some((u, di, eps)));
                if is_target {
                    return Ok(rebuild(&nodes, &parent, &dirs, id));
                }
                if nodes.len() > opts.max_states {
                    return Err(Error::CapExceeded {
                        cap: "max-states",
                        limit: opts.max_states,
                        requested: nodes.len(),
                    });
                }
                next.push(id);
            }
        }
        if next.is_empty() {
            return Err(Error::NotFound);
        }
        frontier = next;
    }
    Err(Error::CapExceeded { cap: "depth-cap", limit: opts.depth_cap, requested: opts.depth_cap + 1 })
}

fn rebuild(
    nodes: &[RatVector],
    parent: &[Option<(usize, usize, Rational)>],
    dirs: &[(RatVector, RatVector)],
    mut id: usize,
) -> WalkTrace {
    let mut steps = Vec::new();
    while let Some((p, di, eps)) = &parent[id] {
        steps.push((dirs[*di].0.clone(), eps.clone()));
        id = *p;
    }
    let mut trace = WalkTrace::empty(nodes[0].clone());
    for (g, eps) in steps.into_iter().rev() {
        trace.push(g, eps);
    }
    trace
}

/// First violated walk condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkViolation {
    Shape,
    Infeasible(usize),
    NotACircuit(usize),
    NonPositiveStep(usize),
    InfeasibleDirection(usize),
    NotMaximal(usize),
    PointMismatch(usize),
}

impl fmt::Display for WalkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkViolation::Shape => write!(f, "trace lengths are inconsistent"),
            WalkViolation::Infeasible(i) => write!(f, "point {i} infeasible"),
            WalkViolation::NotACircuit(i) => write!(f, "g_{i} not a circuit"),
            WalkViolation::NonPositiveStep(i) => write!(f, "step {i} not positive"),
            WalkViolation::InfeasibleDirection(i) => write!(f, "g_{i} not feasible at x_{i}"),
            WalkViolation::NotMaximal(i) => write!(f, "step {i} not maximal"),
            WalkViolation::PointMismatch(i) => write!(f, "x_{} != x_{i} + eps_{i} g_{i}", i + 1),
        }
    }
}

/// Checks feasibility, circuit membership and maximality of every step.
pub fn validate_walk(sys: &ConstraintSystem, trace: &WalkTrace) -> std::result::Result<(), WalkViolation> {
    let k = trace.circuits_used.len();
    if trace.points.len() != k + 1 || trace.step_lengths.len() != k {
        return Err(WalkViolation::Shape);
    }
    if trace.points.iter().any(|x| x.len() != sys.n()) || trace.circuits_used.iter().any(|g| g.len() != sys.n()) {
        return Err(WalkViolation::Shape);
    }
    for (i, x) in trace.points.iter().enumerate() {
        if !sys.is_feasible(x) {
            return Err(WalkViolation::Infeasible(i));
        }
    }
    for i in 0..k {
        let (x, g, eps) = (&trace.points[i], &trace.circuits_used[i], &trace.step_lengths[i]);
        if !is_coprime_integral(g) || !matches!(is_circuit(sys, g), Ok(CircuitDecision::Circuit(_))) {
            return Err(WalkViolation::NotACircuit(i));
        }
        if !eps.is_positive() {
            return Err(WalkViolation::NonPositiveStep(i));
        }
        if axpy(x, eps, g) != trace.points[i + 1] {
            return Err(WalkViolation::PointMismatch(i));
        }
        match max_step(sys, x, g) {
            Ok(StepBound::Finite(m)) if &m == eps => {}
            Ok(_) => return Err(WalkViolation::NotMaximal(i)),
            Err(_) => return Err(WalkViolation::InfeasibleDirection(i)),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{enumerate_circuits, EnumerationOptions};
    use crate::ratmat::{ivec, q};

    fn unit_box() -> ConstraintSystem {
        ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, 0], 0), (vec![0, -1], 0)])
    }

    #[test]
    fn max_step_cases() {
        let s = unit_box();
        let x = vec![q(1, 4), q(1, 2)];
        assert_eq!(max_step(&s, &x, &ivec(&[1, 0])).unwrap(), StepBound::Finite(q(3, 4)));
        let half = ConstraintSystem::from_i64(1, &[], &[(vec![-1], 0)]);
        assert_eq!(max_step(&half, &ivec(&[0]), &ivec(&[1])).unwrap(), StepBound::Unbounded);
        assert_eq!(max_step(&half, &ivec(&[0]), &ivec(&[-1])), Err(Error::InfeasibleDirection));
    }

    #[test]
    fn feasible_at_interior_is_everything() {
        let s = unit_box();
        let pool = enumerate_circuits(&s, &EnumerationOptions::default()).unwrap();
        let f = feasible_circuits_at(&s, &[q(1, 2), q(1, 2)], &pool).unwrap();
        assert_eq!(f.len(), 2 * pool.len());
        assert_eq!(feasible_circuits_at(&s, &ivec(&[2, 0]), &pool), Err(Error::InfeasiblePoint));
    }

    #[test]
    fn bfs_and_validation() {
        let s = unit_box();
        let pool = enumerate_circuits(&s, &EnumerationOptions::default()).unwrap();
        let t = walk_bfs(&s, &ivec(&[0, 0]), &ivec(&[1, 1]), &pool, &WalkOptions::default()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(validate_walk(&s, &t), Ok(()));
        assert_eq!(validate_walk(&s, &t.reversed()), Ok(()));
        let mut bad = t.clone();
        bad.step_lengths[1] = q(1, 2);
        bad.points[2] = axpy(&bad.points[1], &q(1, 2), &bad.circuits_used[1]);
        assert_eq!(validate_walk(&s, &bad), Err(WalkViolation::NotMaximal(1)));
        let mut bad = t.clone();
        bad.circuits_used[0] = ivec(&[2, 0]);
        bad.step_lengths[0] = q(1, 2);
        assert_eq!(validate_walk(&s, &bad), Err(WalkViolation::NotACircuit(0)));
        let same = walk_bfs(&s, &ivec(&[0, 0]), &ivec(&[0, 0]), &pool, &WalkOptions::default()).unwrap();
        assert!(same.is_empty());
    }

    #[test]
    fn depth_cap_is_distinct_from_not_found() {
        let s = unit_box();
        let pool = enumerate_circuits(&s, &EnumerationOptions::default()).unwrap();
        let opts = WalkOptions { depth_cap: 1, ..Default::default() };
        assert!(matches!(walk_bfs(&s, &ivec(&[0, 0]), &ivec(&[1, 1]), &pool, &opts), Err(Error::CapExceeded { .. })));
        let axis: Vec<Circuit> = pool.into_iter().filter(|c| c.vector == ivec(&[1, 0])).collect();
        assert_eq!(walk_bfs(&s, &ivec(&[0, 0]), &ivec(&[1, 1]), &axis, &WalkOptions::default()), Err(Error::NotFound));
    }
}
