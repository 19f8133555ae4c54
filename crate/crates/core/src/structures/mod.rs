//! Finite relational structures, power structures and homomorphisms.
//!
//! Domains are always `{0, …, n-1}`. A structure carries an ordered list of
//! named relations; two structures have the same signature when the lists of
//! `(name, arity)` pairs agree position by position.

mod format;
mod search;

use std::collections::HashSet;
use std::fmt;

use crate::operation::advance;
use crate::{Error, Limits, Result};

pub use format::StructureFile;
pub use search::hom_search;

/// Ordered `(name, arity)` list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    entries: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(entries: Vec<(String, usize)>) -> Self {
        Signature { entries }
    }

    pub fn entries(&self) -> &[(String, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    name: String,
    arity: usize,
    tuples: Vec<Vec<usize>>,
}

impl Relation {
    pub fn new(name: impl Into<String>, arity: usize, tuples: Vec<Vec<usize>>) -> Self {
        Relation {
            name: name.into(),
            arity,
            tuples,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// A finite relational structure on `{0, …, size-1}`.
///
/// Construction does not validate; call [`Structure::validate`] (or build
/// through [`Structure::checked`]) for untrusted input.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    size: usize,
    relations: Vec<Relation>,
}

/// One broken invariant of a [`Structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyDomain,
    ZeroArity { relation: String },
    DuplicateName { relation: String },
    ArityMismatch { relation: String, tuple: Vec<usize>, expected: usize },
    OutOfDomain { relation: String, tuple: Vec<usize>, coordinate: usize },
    DuplicateTuple { relation: String, tuple: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDomain => write!(f, "domain must have at least one element"),
            Violation::ZeroArity { relation } => write!(f, "relation {relation}: arity must be at least 1"),
            Violation::DuplicateName { relation } => write!(f, "relation name {relation} used twice"),
            Violation::ArityMismatch { relation, tuple, expected } => {
                write!(f, "relation {relation}: arity mismatch, tuple {tuple:?} should have length {expected}")
            }
            Violation::OutOfDomain { relation, tuple, coordinate } => {
                write!(f, "relation {relation}: coordinate {coordinate} out of domain in tuple {tuple:?}")
            }
            Violation::DuplicateTuple { relation, tuple } => {
                write!(f, "relation {relation}: duplicate tuple {tuple:?}")
            }
        }
    }
}

impl Structure {
    pub fn new(size: usize, relations: Vec<Relation>) -> Self {
        Structure { size, relations }
    }

    /// Builds and validates, reporting every violation.
    pub fn checked(size: usize, relations: Vec<Relation>) -> Result<Self, Vec<Violation>> {
        let s = Structure::new(size, relations);
        s.validate().map(|()| s)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn signature(&self) -> Signature {
        Signature::new(
            self.relations
                .iter()
                .map(|r| (r.name.clone(), r.arity))
                .collect(),
        )
    }

    pub fn same_signature(&self, other: &Structure) -> bool {
        self.relations.len() == other.relations.len()
            && self
                .relations
                .iter()
                .zip(&other.relations)
                .all(|(a, b)| a.name == b.name && a.arity == b.arity)
    }

    /// `|A| + k + Σ arity·|R|`.
    pub fn representation_size(&self) -> usize {
        self.size
            + self.relations.len()
            + self
                .relations
                .iter()
                .map(|r| r.arity * r.tuples.len())
                .sum::<usize>()
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        if self.size == 0 {
            violations.push(Violation::EmptyDomain);
        }
        let mut names = HashSet::new();
        for rel in &self.relations {
            if !names.insert(rel.name.as_str()) {
                violations.push(Violation::DuplicateName {
                    relation: rel.name.clone(),
                });
            }
            if rel.arity == 0 {
                violations.push(Violation::ZeroArity {
                    relation: rel.name.clone(),
                });
            }
            let mut seen = HashSet::new();
            for t in &rel.tuples {
                if t.len() != rel.arity {
                    violations.push(Violation::ArityMismatch {
                        relation: rel.name.clone(),
                        tuple: t.clone(),
                        expected: rel.arity,
                    });
                    continue;
                }
                if let Some(&c) = t.iter().find(|&&c| c >= self.size) {
                    violations.push(Violation::OutOfDomain {
                        relation: rel.name.clone(),
                        tuple: t.clone(),
                        coordinate: c,
                    });
                    continue;
                }
                if !seen.insert(t.as_slice()) {
                    violations.push(Violation::DuplicateTuple {
                        relation: rel.name.clone(),
                        tuple: t.clone(),
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }
}

/// Encodes an `m`-tuple over `{0, …, n-1}` in mixed radix, least-significant
/// coordinate first.
pub fn encode_tuple(coords: &[usize], radix: usize) -> usize {
    coords.iter().rev().fold(0, |acc, &c| acc * radix + c)
}

pub fn decode_tuple(code: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    crate::operation::decode_into(code, radix, &mut out);
    out
}

/// The `m`-th power `A^m` under the default size bound.
pub fn power(a: &Structure, m: usize) -> Result<Structure> {
    power_with(a, m, &Limits::default())
}

/// The `m`-th power `A^m`.
///
/// Elements are `m`-tuples encoded by [`encode_tuple`]. A tuple of `R^{A^m}`
/// is obtained from a choice of `m` tuples `t_1, …, t_m ∈ R^A`: its `i`-th
/// entry encodes `(t_1[i], …, t_m[i])`.
pub fn power_with(a: &Structure, m: usize, limits: &Limits) -> Result<Structure> {
    if m == 0 {
        return Err(Error::Precondition("power exponent must be positive".into()));
    }
    let n = a.size;
    let size = checked_pow(n, m).filter(|&s| s <= limits.power_elements).ok_or_else(|| {
        Error::bound(
            "power structure",
            (n as u128).saturating_pow(m as u32),
            limits.power_elements,
        )
    })?;
    let mut relations = Vec::with_capacity(a.relations.len());
    for rel in &a.relations {
        let count = checked_pow(rel.tuples.len(), m)
            .filter(|&c| c.saturating_mul(rel.arity.max(1)) <= limits.power_elements.saturating_mul(64))
            .ok_or_else(|| {
                Error::bound(
                    "power relation",
                    (rel.tuples.len() as u128).saturating_pow(m as u32),
                    limits.power_elements.saturating_mul(64),
                )
            })?;
        let mut tuples = Vec::with_capacity(count);
        if !rel.tuples.is_empty() {
            let mut choice = vec![0usize; m];
            let mut coords = vec![0usize; m];
            loop {
                let t: Vec<usize> = (0..rel.arity)
                    .map(|i| {
                        for (j, &c) in choice.iter().enumerate() {
                            coords[j] = rel.tuples[c][i];
                        }
                        encode_tuple(&coords, n)
                    })
                    .collect();
                tuples.push(t);
                if !advance(&mut choice, rel.tuples.len()) {
                    break;
                }
            }
        }
        relations.push(Relation::new(rel.name.clone(), rel.arity, tuples));
    }
    Ok(Structure::new(size, relations))
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// A total map between two finite domains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub source_size: usize,
    pub target_size: usize,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(source_size: usize, target_size: usize, map: Vec<usize>) -> Self {
        Homomorphism {
            source_size,
            target_size,
            map,
        }
    }

    pub fn compose(&self, then: &Homomorphism) -> Result<Homomorphism> {
        if self.target_size != then.source_size {
            return Err(Error::InvalidMap("composition of incompatible maps".into()));
        }
        Ok(Homomorphism::new(
            self.source_size,
            then.target_size,
            self.map.iter().map(|&x| then.map[x]).collect(),
        ))
    }
}

/// Whether `h` maps every tuple of every relation of `a` into `b`.
pub fn is_homomorphism(h: &Homomorphism, a: &Structure, b: &Structure) -> Result<bool> {
    if !a.same_signature(b) {
        return Err(Error::SignatureMismatch(
            "source and target have different signatures".into(),
        ));
    }
    if h.source_size != a.size || h.target_size != b.size || h.map.len() != a.size {
        return Err(Error::InvalidMap(format!(
            "map of length {} between sizes {} and {} does not fit structures of sizes {} and {}",
            h.map.len(),
            h.source_size,
            h.target_size,
            a.size,
            b.size
        )));
    }
    if let Some(&v) = h.map.iter().find(|&&v| v >= b.size) {
        return Err(Error::InvalidMap(format!("image {v} outside target domain")));
    }
    for (ra, rb) in a.relations.iter().zip(&b.relations) {
        let members: HashSet<&[usize]> = rb.tuples.iter().map(Vec::as_slice).collect();
        let mut image = vec![0; ra.arity];
        for t in &ra.tuples {
            for (slot, &x) in image.iter_mut().zip(t) {
                *slot = h.map[x];
            }
            if !members.contains(image.as_slice()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Name of the binary equality relation added by [`add_singleton_relations`].
pub const EQUALITY: &str = "$eq";

/// Name of the unary relation `{b}` added by [`add_singleton_relations`].
pub fn singleton_name(b: usize) -> String {
    format!("$is{b}")
}

/// Expands `b` by the equality relation and one unary relation `{x}` per
/// domain element, in that order after the original relations.
pub fn add_singleton_relations(b: &Structure) -> Structure {
    let mut relations = b.relations.clone();
    relations.push(Relation::new(
        EQUALITY,
        2,
        (0..b.size).map(|x| vec![x, x]).collect(),
    ));
    relations.extend((0..b.size).map(|x| Relation::new(singleton_name(x), 1, vec![vec![x]])));
    Structure::new(b.size, relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_flip() -> Structure {
        Structure::new(2, vec![Relation::new("R", 2, vec![vec![0, 1], vec![1, 0]])])
    }

    #[test]
    fn validate_reports_violations() {
        assert!(edge_flip().validate().is_ok());
        let bad = Structure::new(2, vec![Relation::new("R", 2, vec![vec![0, 2]])]);
        let v = bad.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("coordinate 2 out of domain"));
        let bad = Structure::new(2, vec![Relation::new("R", 2, vec![vec![0, 1, 1]])]);
        assert!(bad.validate().unwrap_err()[0].to_string().contains("arity mismatch"));
        let dup = Structure::new(2, vec![Relation::new("R", 1, vec![vec![0], vec![0]])]);
        assert!(matches!(dup.validate().unwrap_err()[0], Violation::DuplicateTuple { .. }));
    }

    #[test]
    fn square_of_edge_flip() {
        // Hand enumeration: ((a1,a2),(b1,b2)) with (a1,b1),(a2,b2) ∈ R.
        // Pairs encode as a1 + 2·a2.
        let sq = power(&edge_flip(), 2).unwrap();
        assert_eq!(sq.size(), 4);
        let mut got: Vec<Vec<usize>> = sq.relations()[0].tuples().to_vec();
        got.sort();
        let expected = vec![
            vec![encode_tuple(&[0, 0], 2), encode_tuple(&[1, 1], 2)],
            vec![encode_tuple(&[0, 1], 2), encode_tuple(&[1, 0], 2)],
            vec![encode_tuple(&[1, 0], 2), encode_tuple(&[0, 1], 2)],
            vec![encode_tuple(&[1, 1], 2), encode_tuple(&[0, 0], 2)],
        ];
        let mut expected = expected;
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn first_power_is_identity() {
        let a = edge_flip();
        assert_eq!(power(&a, 1).unwrap(), a);
    }

    #[test]
    fn power_of_one_point() {
        let a = Structure::new(1, vec![Relation::new("R", 3, vec![vec![0, 0, 0]])]);
        let p = power(&a, 5).unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(p.relations()[0].tuples(), &[vec![0, 0, 0]]);
    }

    #[test]
    fn power_respects_bound() {
        let a = Structure::new(10, vec![]);
        let limits = Limits {
            power_elements: 999,
            ..Limits::default()
        };
        assert!(matches!(power_with(&a, 3, &limits), Err(Error::SizeBound { .. })));
        assert!(power(&a, 6).is_ok());
        assert!(power(&a, 7).is_err());
    }

    #[test]
    fn singleton_expansion_counts() {
        let c = add_singleton_relations(&edge_flip());
        assert_eq!(c.relations().len(), 1 + 1 + 2);
        let one = add_singleton_relations(&Structure::new(1, vec![]));
        assert_eq!(one.relation(EQUALITY).unwrap().tuples(), &[vec![0, 0]]);
        assert_eq!(one.relation("$is0").unwrap().tuples(), &[vec![0]]);
    }

    #[test]
    fn homomorphism_checks() {
        let s = edge_flip();
        let id = Homomorphism::new(2, 2, vec![0, 1]);
        assert!(is_homomorphism(&id, &s, &s).unwrap());
        let constant = Homomorphism::new(2, 2, vec![1, 1]);
        assert!(!is_homomorphism(&constant, &s, &s).unwrap());
        let partial = Homomorphism::new(2, 2, vec![0]);
        assert!(is_homomorphism(&partial, &s, &s).is_err());
        let other = Structure::new(2, vec![Relation::new("S", 2, vec![])]);
        assert!(matches!(
            is_homomorphism(&id, &s, &other),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn representation_size() {
        assert_eq!(edge_flip().representation_size(), 2 + 1 + 4);
    }
}
