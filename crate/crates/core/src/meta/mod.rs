//! Polymorphism detection: indicator structures, heap and Maltsev checks,
//! coset-generating polymorphisms and the promise metaproblem algorithms.

mod coset;
mod indicator;
mod promise;

use serde::{Deserialize, Serialize};

use crate::identities::Interpretation;
use crate::{Error, OperationTable, Result};

pub use coset::{has_coset_polymorphism, has_coset_polymorphism_with, CosetVerdict, SearchPath};
pub use indicator::{has_polymorphism, has_polymorphism_with, indicator_structure, indicator_structure_with, Indicator};
pub use promise::{
    pcreameta_generic, pmeta_abheap_maltsev, pmeta_generic, uniform_solve_via_witness, AipSolver,
    ExactSolver, FixingSession, UniformSolver,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

/// Outcome of a metaproblem decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaVerdict {
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Interpretation>,
    /// Set when a solver accepted but the extracted witness failed the final
    /// check, i.e. the input violated the solver's promise.
    #[serde(default)]
    pub promise_violation: bool,
}

impl MetaVerdict {
    pub fn yes(witness: Interpretation) -> Self {
        MetaVerdict {
            answer: Answer::Yes,
            witness: Some(witness),
            promise_violation: false,
        }
    }

    pub fn no() -> Self {
        MetaVerdict {
            answer: Answer::No,
            witness: None,
            promise_violation: false,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: MetaVerdict =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        if v.witness.is_some() && v.answer == Answer::No {
            return Err(Error::parse(1, "a \"no\" verdict cannot carry a witness"));
        }
        Ok(v)
    }
}

fn ternary(m: &OperationTable) -> Result<usize> {
    if m.arity() != 3 {
        return Err(Error::Arity(format!("expected a ternary operation, got arity {}", m.arity())));
    }
    Ok(m.domain())
}

/// `m(x,x,y) = y = m(y,x,x)` for all `x, y`.
pub fn is_maltsev(m: &OperationTable) -> Result<bool> {
    let n = ternary(m)?;
    Ok((0..n).all(|x| (0..n).all(|y| m.apply3(x, x, y) == y && m.apply3(y, x, x) == y)))
}

/// Maltsev and `m(u,x,m(v,y,w)) = m(m(u,x,v),y,w)` for all five variables.
pub fn is_heap(m: &OperationTable) -> Result<bool> {
    let n = ternary(m)?;
    if !is_maltsev(m)? {
        return Ok(false);
    }
    for u in 0..n {
        for x in 0..n {
            for v in 0..n {
                let left_inner = m.apply3(u, x, v);
                for y in 0..n {
                    for w in 0..n {
                        if m.apply3(u, x, m.apply3(v, y, w)) != m.apply3(left_inner, y, w) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// A heap with `m(x,y,z) = m(z,y,x)`.
pub fn is_abelian_heap(m: &OperationTable) -> Result<bool> {
    let n = ternary(m)?;
    let commutative =
        (0..n).all(|x| (0..n).all(|y| (0..x).all(|z| m.apply3(x, y, z) == m.apply3(z, y, x))));
    Ok(commutative && is_heap(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, dihedral, heap_from_group};

    #[test]
    fn heap_checks() {
        for n in 1..6 {
            let m = OperationTable::from_fn(n, 3, |a| (a[0] + n - a[1] + a[2]) % n).unwrap();
            assert!(is_maltsev(&m).unwrap());
            assert!(is_heap(&m).unwrap());
            assert!(is_abelian_heap(&m).unwrap());
        }
        let d10 = heap_from_group(&dihedral(10).unwrap());
        assert!(is_heap(&d10).unwrap());
        assert!(!is_abelian_heap(&d10).unwrap());
        let first = OperationTable::projection(3, 3, 0).unwrap();
        assert!(!is_maltsev(&first).unwrap());
        assert!(is_maltsev(&OperationTable::projection(2, 2, 0).unwrap()).is_err());
        assert!(is_heap(&heap_from_group(&cyclic(4).unwrap())).unwrap());
    }

    #[test]
    fn maltsev_but_not_heap() {
        // x - y + z on Z_3 with m(0,1,2) changed to 0.
        let mut values = heap_from_group(&cyclic(3).unwrap()).values().to_vec();
        values[9 * 2 + 3] = 0;
        let m = OperationTable::new(3, 3, values).unwrap();
        assert!(is_maltsev(&m).unwrap());
        assert!(!is_heap(&m).unwrap());
    }

    #[test]
    fn verdict_json() {
        let mut w = Interpretation::new();
        w.insert("m".into(), OperationTable::projection(2, 3, 2).unwrap());
        let v = MetaVerdict::yes(w);
        assert_eq!(MetaVerdict::from_json(&v.to_json()).unwrap(), v);
        let no = MetaVerdict::no();
        assert_eq!(no.to_json(), r#"{"answer":"no","promise_violation":false}"#);
        assert_eq!(MetaVerdict::from_json(&no.to_json()).unwrap(), no);
    }
}
