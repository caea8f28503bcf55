use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::circuits::{
    is_circuit, strictly_smaller_support, validate_walk, CircuitDecision, ConstraintSystem, WalkTrace,
};
use crate::error::{Error, Result};
use crate::gadgets::{check_relations, Relation};
use crate::ratmat::{dot, is_zero_vector, rank, RatMatrix, RatVector, Rational};

use super::{run_claim, Caps, ClaimId, Params, Report, Verdict};

/// A statement about concrete data that can be rechecked without the driver that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Certificate {
    /// `vector` is a circuit of `system`.
    Circuit { system: Value, vector: RatVector },
    /// `vector` is a kernel vector and `witness` has strictly smaller `B`-support.
    NotCircuit { system: Value, vector: RatVector, witness: RatVector },
    /// `|vector[big] / vector[small]| >= at_least`.
    Ratio { vector: RatVector, big: usize, small: usize, at_least: Rational },
    /// A valid circuit walk from `from` to `to` whose length lies in the bounds.
    Walk {
        system: Value,
        trace: WalkTrace,
        from: RatVector,
        to: RatVector,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_steps: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_steps: Option<usize>,
    },
    /// The kernel of `rows` is the line through `vector`.
    KernelLine { rows: Vec<RatVector>, vector: RatVector },
    /// `solution` is the unique solution of `rows · x = rhs`.
    Solution { rows: Vec<RatVector>, rhs: RatVector, solution: RatVector },
    /// Every relation holds on `seed` and on `ker [A; B_0]` for the rows `B_0` annihilating it.
    Relations { system: Value, seed: RatVector, relations: Vec<Relation> },
    /// Exhaustive part of a claim: rerunning the driver reproduces `summary`.
    Rerun { claim: String, parameters: BTreeMap<String, String>, caps: Caps, summary: Value },
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::Circuit { .. } => "circuit",
            Certificate::NotCircuit { .. } => "not_circuit",
            Certificate::Ratio { .. } => "ratio",
            Certificate::Walk { .. } => "walk",
            Certificate::KernelLine { .. } => "kernel_line",
            Certificate::Solution { .. } => "solution",
            Certificate::Relations { .. } => "relations",
            Certificate::Rerun { .. } => "rerun",
        }
    }

    pub fn circuit(sys: &ConstraintSystem, vector: &[Rational]) -> Self {
        Certificate::Circuit { system: sys.to_json(), vector: vector.to_vec() }
    }

    pub fn walk(sys: &ConstraintSystem, trace: &WalkTrace, min_steps: Option<usize>, max_steps: Option<usize>) -> Self {
        Certificate::Walk {
            system: sys.to_json(),
            from: trace.start().clone(),
            to: trace.end().clone(),
            trace: trace.clone(),
            min_steps,
            max_steps,
        }
    }

    /// `Ok(())` when the statement holds, else the reason it does not.
    pub fn check(&self) -> std::result::Result<(), String> {
        let sys = |v: &Value| ConstraintSystem::from_json(v).map_err(|e| format!("bad system: {e}"));
        match self {
            Certificate::Circuit { system, vector } => {
                match is_circuit(&sys(system)?, vector).map_err(|e| e.to_string())? {
                    CircuitDecision::Circuit(_) => Ok(()),
                    CircuitDecision::NotCircuit { .. } => Err("not a circuit".into()),
                    CircuitDecision::NotInKernel => Err("not in the kernel of A".into()),
                }
            }
            Certificate::NotCircuit { system, vector, witness } => {
                let s = sys(system)?;
                s.check_len(vector).and_then(|_| s.check_len(witness)).map_err(|e| e.to_string())?;
                if is_zero_vector(vector) || is_zero_vector(witness) {
                    return Err("zero vector".into());
                }
                if !is_zero_vector(&s.a.mul_vec(vector)) || !is_zero_vector(&s.a.mul_vec(witness)) {
                    return Err("not in the kernel of A".into());
                }
                if !strictly_smaller_support(&s, witness, vector) {
                    return Err("witness support is not strictly smaller".into());
                }
                Ok(())
            }
            Certificate::Ratio { vector, big, small, at_least } => {
                let (Some(b), Some(s)) = (vector.get(*big), vector.get(*small)) else {
                    return Err("index out of range".into());
                };
                if s.is_zero() {
                    return Err("small entry is zero".into());
                }
                let r = (b / s).abs();
                if r < *at_least {
                    return Err(format!("ratio {r} below {at_least}"));
                }
                Ok(())
            }
            Certificate::Walk { system, trace, from, to, min_steps, max_steps } => {
                let s = sys(system)?;
                validate_walk(&s, trace).map_err(|v| v.to_string())?;
                if trace.start() != from || trace.end() != to {
                    return Err("walk endpoints differ from the stated ones".into());
                }
                let len = trace.len();
                if min_steps.is_some_and(|m| len < m) || max_steps.is_some_and(|m| len > m) {
                    return Err(format!("walk length {len} outside [{min_steps:?}, {max_steps:?}]"));
                }
                Ok(())
            }
            Certificate::KernelLine { rows, vector } => {
                let m = matrix(rows, vector.len())?;
                if is_zero_vector(vector) {
                    return Err("zero vector".into());
                }
                if rows.iter().any(|r| !dot(r, vector).is_zero()) {
                    return Err("vector is not in the kernel".into());
                }
                if rank(&m) + 1 != vector.len() {
                    return Err("kernel has dimension above one".into());
                }
                Ok(())
            }
            Certificate::Solution { rows, rhs, solution } => {
                let m = matrix(rows, solution.len())?;
                if rows.len() != rhs.len() || rows.iter().zip(rhs).any(|(r, b)| dot(r, solution) != *b) {
                    return Err("solution does not satisfy the rows".into());
                }
                if rank(&m) != solution.len() {
                    return Err("solution is not unique".into());
                }
                Ok(())
            }
            Certificate::Relations { system, seed, relations } => {
                let s = sys(system)?;
                s.check_len(seed).map_err(|e| e.to_string())?;
                if relations.iter().any(|r| r.big >= seed.len() || r.small >= seed.len()) {
                    return Err("relation index out of range".into());
                }
                check_relations(&s, seed, relations)
                    .map(|_| ())
                    .map_err(|c| format!("relation broken: {:?}", c.relation))
            }
            Certificate::Rerun { claim, parameters, caps, summary } => {
                let id = ClaimId::parse(claim).ok_or_else(|| format!("unknown claim {claim:?}"))?;
                let params = Params::from_map(parameters.clone());
                let report = run_claim(id, &params, caps).map_err(|e| format!("rerun failed: {e}"))?;
                if report.evidence.get("summary") != Some(summary) {
                    return Err("rerun produced a different summary".into());
                }
                Ok(())
            }
        }
    }
}

fn matrix(rows: &[RatVector], cols: usize) -> std::result::Result<RatMatrix, String> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err("row length differs from vector length".into());
    }
    Ok(RatMatrix::from_rows(cols, rows.to_vec()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateOutcome {
    pub index: usize,
    pub check: &'static str,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub claim: String,
    pub recorded_verdict: Verdict,
    pub certificates: Vec<CertificateOutcome>,
    /// Every certificate holds.
    pub consistent: bool,
    /// Consistent and the recorded verdict is a pass.
    pub verified: bool,
}

/// Rechecks every certificate of a report.
pub fn verify_report(report: &Report) -> Result<VerifyReport> {
    let certs = report.evidence.get("certificates").cloned().unwrap_or(Value::Array(Vec::new()));
    let certs: Vec<Certificate> = serde_json::from_value(certs)
        .map_err(|e| Error::Parse { line: e.line(), msg: format!("certificates: {e}") })?;
    let outcomes: Vec<CertificateOutcome> = certs
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let res = c.check();
            CertificateOutcome { index, check: c.name(), ok: res.is_ok(), reason: res.err() }
        })
        .collect();
    let consistent = outcomes.iter().all(|o| o.ok);
    Ok(VerifyReport {
        claim: report.claim.as_str().to_string(),
        recorded_verdict: report.verdict,
        verified: consistent && report.verdict == Verdict::Pass,
        certificates: outcomes,
        consistent,
    })
}

/// Parses one report or an array of reports and verifies each.
pub fn verify_evidence_json(v: &Value) -> Result<Vec<VerifyReport>> {
    let reports: Vec<Report> = match v {
        Value::Array(items) => items.iter().map(Report::from_json).collect::<Result<_>>()?,
        other => vec![Report::from_json(other)?],
    };
    reports.iter().map(verify_report).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::{ivec, q};

    fn square() -> ConstraintSystem {
        ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, 0], 0), (vec![0, -1], 0)])
    }

    #[test]
    fn circuit_certificates() {
        let s = square();
        assert!(Certificate::circuit(&s, &ivec(&[1, 0])).check().is_ok());
        assert!(Certificate::circuit(&s, &ivec(&[1, 1])).check().is_err());
        let nc = Certificate::NotCircuit { system: s.to_json(), vector: ivec(&[1, 1]), witness: ivec(&[0, 1]) };
        assert!(nc.check().is_ok());
        let bad = Certificate::NotCircuit { system: s.to_json(), vector: ivec(&[0, 1]), witness: ivec(&[1, 1]) };
        assert!(bad.check().is_err());
    }

    #[test]
    fn ratio_and_linear_certificates() {
        let r = Certificate::Ratio { vector: vec![q(1, 1), q(-1, 4)], big: 0, small: 1, at_least: q(4, 1) };
        assert!(r.check().is_ok());
        let r = Certificate::Ratio { vector: vec![q(1, 1), q(-1, 2)], big: 0, small: 1, at_least: q(4, 1) };
        assert!(r.check().is_err());
        let rows = vec![ivec(&[1, 1, 0]), ivec(&[1, 0, 1]), ivec(&[0, 1, 1])];
        let ok = Certificate::Solution { rows: rows.clone(), rhs: ivec(&[1, 1, 1]), solution: vec![q(1, 2); 3] };
        assert!(ok.check().is_ok());
        let wrong = Certificate::Solution { rows, rhs: ivec(&[1, 1, 1]), solution: ivec(&[1, 0, 0]) };
        assert!(wrong.check().is_err());
        let line = Certificate::KernelLine { rows: vec![ivec(&[1, -1])], vector: ivec(&[1, 1]) };
        assert!(line.check().is_ok());
    }

    #[test]
    fn certificates_round_trip_through_json() {
        let c = Certificate::circuit(&square(), &ivec(&[0, 1]));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["check"], "circuit");
        assert_eq!(serde_json::from_value::<Certificate>(v).unwrap(), c);
    }
}
