use serde::Serialize;

use crate::circuits::ConstraintSystem;
use crate::error::{Error, Result};
use crate::ratmat::{RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZigzagParams {
    #[serde(rename = "M")]
    pub m: Rational,
    pub eps: Rational,
}

impl ZigzagParams {
    pub fn new(m: Rational, eps: Rational) -> Result<Self> {
        if !eps.is_positive() || eps > m {
            return Err(Error::BadParameter("zig-zag needs 0 < eps <= M".into()));
        }
        Ok(ZigzagParams { m, eps })
    }

    /// The far vertex `(M+1+eps, M+eps)`.
    pub fn target(&self) -> RatVector {
        let one = Rational::one();
        vec![&(&self.m + &one) + &self.eps, &self.m + &self.eps]
    }
}

/// The quadrilateral `conv{(0,0), (eps,0), (M+1+eps,M), (M+1+eps,M+eps)}` by its
/// four facets, and the vertices in that order.
pub fn zigzag_system(p: &ZigzagParams) -> Result<(ConstraintSystem, Vec<RatVector>)> {
    let p = ZigzagParams::new(p.m.clone(), p.eps.clone())?;
    let (m, e) = (&p.m, &p.eps);
    let one = Rational::one();
    let zero = Rational::zero();
    let m1 = m + &one;
    let far_x = &m1 + e;
    let mut sys = ConstraintSystem::with_labels(vec!["x".into(), "y".into()]);
    sys.add_inequality(&[zero.clone(), -&one], zero.clone(), "bottom".into());
    sys.add_inequality(&[m.clone(), -&m1], m * e, "lower slope".into());
    sys.add_inequality(&[one.clone(), zero.clone()], far_x.clone(), "right".into());
    sys.add_inequality(&[-(m + e), far_x.clone()], zero.clone(), "upper slope".into());
    let vertices = vec![
        vec![zero.clone(), zero.clone()],
        vec![e.clone(), zero.clone()],
        vec![far_x.clone(), m.clone()],
        vec![far_x, m + e],
    ];
    Ok((sys, vertices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::q;

    #[test]
    fn vertices_are_feasible_and_tight_twice() {
        let p = ZigzagParams::new(q(2, 1), q(1, 1)).unwrap();
        let (sys, vs) = zigzag_system(&p).unwrap();
        for v in &vs {
            assert!(sys.is_feasible(v));
            assert_eq!(sys.tight_rows(v).len(), 2, "{v:?}");
        }
        assert!(ZigzagParams::new(q(1, 1), q(2, 1)).is_err());
        assert!(ZigzagParams::new(q(1, 1), q(0, 1)).is_err());
    }
}
