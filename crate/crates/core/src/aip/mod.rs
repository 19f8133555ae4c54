//! Exact integer linear algebra and the affine integer relaxation of
//! homomorphism problems.
//!
//! [`encode_aip`] writes the relaxation out in full; [`aip_decide`] decides
//! the same system but eliminates the constraint weights relation by
//! relation first, falling back to the full encoding only if machine
//! integers overflow.

mod hnf;
pub(crate) mod relax;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::structures::Structure;
use crate::{Error, Result};

pub use hnf::{determinant, hnf, is_hermite, mul, solve_z, transpose, Matrix};

/// A system `M·x = b` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystemZ {
    pub matrix: Matrix,
    pub rhs: Vec<BigInt>,
    pub columns: usize,
}

impl LinearSystemZ {
    pub fn new(columns: usize) -> Self {
        LinearSystemZ {
            matrix: Vec::new(),
            rhs: Vec::new(),
            columns,
        }
    }

    /// Appends `Σ coefficient·x_index = rhs`; repeated indices add up.
    pub fn push_sparse(&mut self, terms: &[(usize, i64)], rhs: i64) {
        let mut row = vec![BigInt::zero(); self.columns];
        for &(i, a) in terms {
            row[i] += a;
        }
        self.matrix.push(row);
        self.rhs.push(BigInt::from(rhs));
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn solve(&self) -> Option<Vec<BigInt>> {
        solve_z(&self.matrix, self.columns, &self.rhs)
    }
}

/// One equation per line: the coefficients, then the right-hand side.
impl fmt::Display for LinearSystemZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, b) in self.matrix.iter().zip(&self.rhs) {
            for a in row {
                write!(f, "{a} ")?;
            }
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

fn check_signature(a: &Structure, b: &Structure) -> Result<()> {
    if a.same_signature(b) {
        Ok(())
    } else {
        Err(Error::SignatureMismatch(
            "instance and template have different signatures".into(),
        ))
    }
}

/// The affine relaxation of `a → b` written out in full.
///
/// Unknowns are `w(v, x)` at index `v·|B| + x`, followed by one block
/// `w(c, t)` per constraint `c` (relations of `a` in order, tuples in
/// order) indexed by the tuples of the template relation. Equations are:
/// `Σ_x w(v, x) = 1` for each element, `Σ_t w(c, t) = 1` for each
/// constraint, and `Σ_{t[i] = x} w(c, t) = w(vᵢ, x)` for each constraint,
/// position and value.
pub fn encode_aip(a: &Structure, b: &Structure) -> Result<LinearSystemZ> {
    check_signature(a, b)?;
    let n = b.size();
    let mut columns = a.size() * n;
    let mut blocks = Vec::new();
    for (ra, rb) in a.relations().iter().zip(b.relations()) {
        for t in ra.tuples() {
            blocks.push((t.clone(), rb, columns));
            columns += rb.len();
        }
    }
    let mut sys = LinearSystemZ::new(columns);
    for v in 0..a.size() {
        let terms: Vec<(usize, i64)> = (0..n).map(|x| (v * n + x, 1)).collect();
        sys.push_sparse(&terms, 1);
    }
    for (_, rb, offset) in &blocks {
        let terms: Vec<(usize, i64)> = (0..rb.len()).map(|j| (offset + j, 1)).collect();
        sys.push_sparse(&terms, 1);
    }
    for (scope, rb, offset) in &blocks {
        for (i, &v) in scope.iter().enumerate() {
            for x in 0..n {
                let mut terms: Vec<(usize, i64)> = rb
                    .tuples()
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t[i] == x)
                    .map(|(j, _)| (offset + j, 1))
                    .collect();
                terms.push((v * n + x, -1));
                sys.push_sparse(&terms, 0);
            }
        }
    }
    Ok(sys)
}

/// Whether the affine relaxation of `a → b` has an integer solution.
///
/// Sound for every template: a homomorphism gives a 0/1 solution. When `b`
/// has an abelian heap polymorphism the relaxation is also exact.
pub fn aip_decide(a: &Structure, b: &Structure) -> Result<bool> {
    check_signature(a, b)?;
    match relax::Prepared::new(a, b).and_then(|p| p.feasible()) {
        Ok(answer) => Ok(answer),
        Err(relax::Overflow) => aip_decide_dense(a, b),
    }
}

/// [`aip_decide`] through the full encoding and one Hermite reduction.
pub fn aip_decide_dense(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(encode_aip(a, b)?.solve().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Relation;

    fn xor_template() -> Structure {
        Structure::new(
            2,
            vec![
                Relation::new("E0", 2, vec![vec![0, 0], vec![1, 1]]),
                Relation::new("E1", 2, vec![vec![0, 1], vec![1, 0]]),
            ],
        )
    }

    #[test]
    fn encoding_shape() {
        let a = Structure::new(1, vec![]);
        let b = Structure::new(2, vec![]);
        let sys = encode_aip(&a, &b).unwrap();
        assert_eq!(sys.to_string(), "1 1 1\n");
        let b = Structure::new(
            2,
            vec![Relation::new("R", 2, vec![vec![0, 1], vec![1, 0], vec![1, 1]])],
        );
        let a = Structure::new(1, vec![Relation::new("R", 2, vec![vec![0, 0]])]);
        let sys = encode_aip(&a, &b).unwrap();
        assert_eq!(sys.rows(), 1 + 1 + 2 * 2);
        assert_eq!(sys.columns, 2 + 3);
    }

    #[test]
    fn odd_xor_cycle_is_infeasible() {
        let a = Structure::new(
            3,
            vec![
                Relation::new("E0", 2, vec![]),
                Relation::new("E1", 2, vec![vec![0, 1], vec![1, 2], vec![2, 0]]),
            ],
        );
        assert!(!aip_decide(&a, &xor_template()).unwrap());
        assert!(!aip_decide_dense(&a, &xor_template()).unwrap());
    }

    #[test]
    fn linear_equations_mod_three() {
        let rel = |c: usize| -> Vec<Vec<usize>> {
            (0..3).flat_map(|x| (0..3).map(move |y| vec![x, y])).filter(|t| (t[0] + t[1]) % 3 == c).collect()
        };
        let b = Structure::new(
            3,
            vec![
                Relation::new("S0", 2, rel(0)),
                Relation::new("S1", 2, rel(1)),
            ],
        );
        let a = Structure::new(
            3,
            vec![
                Relation::new("S0", 2, vec![vec![0, 2]]),
                Relation::new("S1", 2, vec![vec![0, 1], vec![1, 2]]),
            ],
        );
        assert!(aip_decide(&a, &b).unwrap());
        assert!(aip_decide_dense(&a, &b).unwrap());
    }

    #[test]
    fn empty_template_relation() {
        let b = Structure::new(2, vec![Relation::new("R", 1, vec![])]);
        let a = Structure::new(1, vec![Relation::new("R", 1, vec![vec![0]])]);
        assert!(!aip_decide(&a, &b).unwrap());
        assert!(!aip_decide_dense(&a, &b).unwrap());
        let unused = Structure::new(1, vec![Relation::new("R", 1, vec![])]);
        assert!(aip_decide(&unused, &b).unwrap());
    }

    #[test]
    fn signature_mismatch() {
        let a = Structure::new(1, vec![Relation::new("R", 1, vec![])]);
        let b = Structure::new(1, vec![]);
        assert!(matches!(aip_decide(&a, &b), Err(Error::SignatureMismatch(_))));
        assert!(encode_aip(&a, &b).is_err());
    }
}
