//! Finitary operations on `{0, …, n-1}` stored as explicit tables.

use serde::{Deserialize, Serialize};

use crate::structures::Structure;
use crate::{Error, Result};

/// A `k`-ary operation on `{0, …, n-1}`.
///
/// Arguments are encoded in mixed radix `n`, least-significant argument
/// first, the same convention [`crate::structures::power`] uses for tuples.
/// The restriction of a homomorphism `B^k → B` to a copy of `B^k` is thus
/// exactly the `values` vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperationTable {
    domain: usize,
    arity: usize,
    values: Vec<usize>,
}

impl OperationTable {
    pub fn new(domain: usize, arity: usize, values: Vec<usize>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Arity("operations must have arity at least 1".into()));
        }
        if domain == 0 {
            return Err(Error::Domain("empty domain".into()));
        }
        let size = table_size(domain, arity)?;
        if values.len() != size {
            return Err(Error::Arity(format!(
                "{arity}-ary table on {domain} elements needs {size} values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v >= domain) {
            return Err(Error::Domain(format!("value {v} outside domain of size {domain}")));
        }
        Ok(OperationTable {
            domain,
            arity,
            values,
        })
    }

    /// Tabulates `f` on every argument tuple.
    pub fn from_fn(domain: usize, arity: usize, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let size = table_size(domain, arity)?;
        let mut args = vec![0; arity];
        let mut values = Vec::with_capacity(size);
        for code in 0..size {
            decode_into(code, domain, &mut args);
            values.push(f(&args));
        }
        Self::new(domain, arity, values)
    }

    pub fn projection(domain: usize, arity: usize, index: usize) -> Result<Self> {
        if index >= arity {
            return Err(Error::Arity(format!("projection {index} of arity {arity}")));
        }
        Self::from_fn(domain, arity, |a| a[index])
    }

    pub fn constant(domain: usize, arity: usize, value: usize) -> Result<Self> {
        Self::from_fn(domain, arity, |_| value)
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn index_of(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter()
            .rev()
            .fold(0, |acc, &a| acc * self.domain + a)
    }

    pub fn apply(&self, args: &[usize]) -> usize {
        self.values[self.index_of(args)]
    }

    /// Ternary shorthand used by the heap checks.
    #[inline]
    pub fn apply3(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.domain;
        self.values[x + n * (y + n * z)]
    }

    /// Restriction to `{0, …, size-1}`; `None` if that set is not closed.
    pub fn restrict(&self, size: usize) -> Option<OperationTable> {
        if size == 0 || size > self.domain {
            return None;
        }
        let mut ok = true;
        let restricted = OperationTable::from_fn(size, self.arity, |args| {
            let v = self.apply(args);
            if v >= size {
                ok = false;
                0
            } else {
                v
            }
        })
        .ok()?;
        ok.then_some(restricted)
    }

    /// Whether the operation, applied componentwise, preserves every relation.
    pub fn is_polymorphism_of(&self, structure: &Structure) -> Result<bool> {
        if self.domain != structure.size() {
            return Err(Error::Domain(format!(
                "operation on {} elements, structure on {}",
                self.domain,
                structure.size()
            )));
        }
        for rel in structure.relations() {
            let tuples = rel.tuples();
            if tuples.is_empty() {
                continue;
            }
            let members: std::collections::HashSet<&[usize]> =
                tuples.iter().map(Vec::as_slice).collect();
            let mut choice = vec![0usize; self.arity];
            let mut args = vec![0usize; self.arity];
            let mut image = vec![0usize; rel.arity()];
            loop {
                for (pos, slot) in image.iter_mut().enumerate() {
                    for (j, &c) in choice.iter().enumerate() {
                        args[j] = tuples[c][pos];
                    }
                    *slot = self.apply(&args);
                }
                if !members.contains(image.as_slice()) {
                    return Ok(false);
                }
                if !advance(&mut choice, tuples.len()) {
                    break;
                }
            }
        }
        Ok(true)
    }
}

/// `n^k`, or an error if it does not fit in memory-sized arithmetic.
pub(crate) fn table_size(domain: usize, arity: usize) -> Result<usize> {
    u32::try_from(arity)
        .ok()
        .and_then(|k| domain.checked_pow(k))
        .ok_or_else(|| Error::bound("operation table", u128::MAX, usize::MAX))
}

pub(crate) fn decode_into(mut code: usize, radix: usize, out: &mut [usize]) {
    for slot in out.iter_mut() {
        *slot = code % radix;
        code /= radix;
    }
}

/// Odometer increment, least-significant position first. Returns `false`
/// after the last tuple.
pub(crate) fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{Relation, Structure};

    #[test]
    fn encoding_is_lsb_first() {
        let op = OperationTable::from_fn(3, 2, |a| (a[0] + 2 * a[1]) % 3).unwrap();
        assert_eq!(op.index_of(&[1, 0]), 1);
        assert_eq!(op.index_of(&[0, 1]), 3);
        assert_eq!(op.apply(&[2, 1]), 1);
        assert_eq!(op.apply3(0, 0, 0), 0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(OperationTable::new(2, 2, vec![0, 1, 1]).is_err());
        assert!(OperationTable::new(2, 1, vec![0, 2]).is_err());
        assert!(OperationTable::new(2, 0, vec![0]).is_err());
    }

    #[test]
    fn minority_preserves_affine_relation() {
        let xor3 = OperationTable::from_fn(2, 3, |a| a[0] ^ a[1] ^ a[2]).unwrap();
        let s = Structure::new(
            2,
            vec![Relation::new("ne", 2, vec![vec![0, 1], vec![1, 0]])],
        );
        assert!(xor3.is_polymorphism_of(&s).unwrap());
        let nand = Structure::new(
            2,
            vec![Relation::new("r", 2, vec![vec![0, 0], vec![0, 1], vec![1, 0]])],
        );
        assert!(!xor3.is_polymorphism_of(&nand).unwrap());
    }

    #[test]
    fn restriction() {
        let m = OperationTable::from_fn(3, 3, |a| (a[0] + 3 - a[1] + a[2]) % 3).unwrap();
        assert!(m.restrict(2).is_none());
        let p = OperationTable::projection(3, 2, 1).unwrap();
        assert_eq!(p.restrict(2).unwrap(), OperationTable::projection(2, 2, 1).unwrap());
    }
}
