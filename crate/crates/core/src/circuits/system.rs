use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratmat::{dot, RatMatrix, RatVector, Rational};

/// Polyhedron `{x : A x = b, B x <= d}` with labelled variables and rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub a: RatMatrix,
    pub b: RatVector,
    pub ineq: RatMatrix,
    pub d: RatVector,
    pub variable_labels: Vec<String>,
    /// Equality labels first, then inequality labels.
    pub row_labels: Vec<String>,
}

impl ConstraintSystem {
    /// System on `n` variables labelled `x0..x{n-1}` with no rows.
    pub fn new(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| format!("x{i}")).collect())
    }

    pub fn with_labels(variable_labels: Vec<String>) -> Self {
        let n = variable_labels.len();
        ConstraintSystem {
            a: RatMatrix::zeros(0, n),
            b: Vec::new(),
            ineq: RatMatrix::zeros(0, n),
            d: Vec::new(),
            variable_labels,
            row_labels: Vec::new(),
        }
    }

    /// Builds a system from integer data: `a_rows · x = b`, `b_rows · x <= d`.
    pub fn from_i64(n: usize, eq: &[(Vec<i64>, i64)], ineq: &[(Vec<i64>, i64)]) -> Self {
        let mut s = Self::new(n);
        for (k, (r, rhs)) in eq.iter().enumerate() {
            s.add_equality(&to_rat(r), Rational::from_int(*rhs), format!("eq{k}"));
        }
        for (k, (r, rhs)) in ineq.iter().enumerate() {
            s.add_inequality(&to_rat(r), Rational::from_int(*rhs), format!("row{k}"));
        }
        s
    }

    pub fn n(&self) -> usize {
        self.variable_labels.len()
    }

    pub fn m_a(&self) -> usize {
        self.a.rows()
    }

    pub fn m_b(&self) -> usize {
        self.ineq.rows()
    }

    pub fn add_equality(&mut self, coeffs: &[Rational], rhs: Rational, label: String) {
        self.a.push_row(coeffs);
        self.b.push(rhs);
        self.row_labels.insert(self.a.rows() - 1, label);
    }

    pub fn add_inequality(&mut self, coeffs: &[Rational], rhs: Rational, label: String) {
        self.ineq.push_row(coeffs);
        self.d.push(rhs);
        self.row_labels.push(label);
    }

    pub fn ineq_label(&self, i: usize) -> &str {
        &self.row_labels[self.m_a() + i]
    }

    pub fn check_len(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} but system has {} variables",
                x.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `A x = b` and `B x <= d`.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.n()
            && self.a.row_iter().zip(&self.b).all(|(r, rhs)| &dot(r, x) == rhs)
            && self.ineq.row_iter().zip(&self.d).all(|(r, rhs)| &dot(r, x) <= rhs)
    }

    /// Inequality rows satisfied with equality at `x`.
    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        self.ineq
            .row_iter()
            .zip(&self.d)
            .enumerate()
            .filter(|(_, (r, rhs))| &dot(r, x) == *rhs)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = SystemDoc {
            n: self.n(),
            variables: self.variable_labels.clone(),
            equalities: (0..self.m_a())
                .map(|i| RowDoc {
                    coeffs: self.a.row(i).to_vec(),
                    rhs: self.b[i].clone(),
                    label: Some(self.row_labels[i].clone()),
                })
                .collect(),
            inequalities: (0..self.m_b())
                .map(|i| RowDoc {
                    coeffs: self.ineq.row(i).to_vec(),
                    rhs: self.d[i].clone(),
                    label: Some(self.ineq_label(i).to_string()),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("system serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: SystemDoc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        if doc.variables.len() != doc.n {
            return Err(Error::DimensionMismatch("variables length differs from n".into()));
        }
        let mut s = Self::with_labels(doc.variables);
        for (k, r) in doc.equalities.into_iter().enumerate() {
            s.check_len(&r.coeffs)?;
            s.add_equality(&r.coeffs, r.rhs, r.label.unwrap_or_else(|| format!("eq{k}")));
        }
        for (k, r) in doc.inequalities.into_iter().enumerate() {
            s.check_len(&r.coeffs)?;
            s.add_inequality(&r.coeffs, r.rhs, r.label.unwrap_or_else(|| format!("row{k}")));
        }
        Ok(s)
    }
}

fn to_rat(v: &[i64]) -> RatVector {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

#[derive(Serialize, Deserialize)]
struct SystemDoc {
    n: usize,
    variables: Vec<String>,
    #[serde(default)]
    equalities: Vec<RowDoc>,
    #[serde(default)]
    inequalities: Vec<RowDoc>,
}

#[derive(Serialize, Deserialize)]
struct RowDoc {
    coeffs: Vec<Rational>,
    rhs: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::{ivec, q};

    #[test]
    fn labels_track_rows() {
        let mut s = ConstraintSystem::new(2);
        s.add_inequality(&ivec(&[1, 0]), q(1, 1), "a".into());
        s.add_equality(&ivec(&[1, 1]), q(1, 1), "e".into());
        s.add_inequality(&ivec(&[0, 1]), q(1, 1), "b".into());
        assert_eq!(s.row_labels, vec!["e", "a", "b"]);
        assert_eq!(s.ineq_label(1), "b");
    }

    #[test]
    fn feasibility_and_tight_rows() {
        let s = ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, 0], 0)]);
        assert!(s.is_feasible(&[q(1, 1), q(1, 2)]));
        assert!(!s.is_feasible(&[q(2, 1), q(0, 1)]));
        assert_eq!(s.tight_rows(&[q(1, 1), q(1, 2)]), vec![0]);
    }

    #[test]
    fn json_round_trip() {
        let s = ConstraintSystem::from_i64(2, &[(vec![1, 1], 1)], &[(vec![1, -2], 3)]);
        let j = s.to_json();
        assert_eq!(j["equalities"][0]["coeffs"][1], "1");
        assert_eq!(ConstraintSystem::from_json(&j).unwrap(), s);
    }
}
