//! Finite groups as Cayley tables.
//!
//! Elements are `0, …, n-1`. Constructed families document how their
//! elements are indexed; powers `G^k` are never tabulated by the subgroup and
//! coset routines, which work on tuples componentwise.

mod enumerate;
mod families;
mod isomorphism;
mod subgroups;

use serde::{Deserialize, Serialize};

use crate::{Error, OperationTable, Result};

pub use enumerate::{enumerate_groups_on_set, enumerate_groups_with};
pub use families::{
    candidates_order_4p, classify_order_4p, cp_c4_faithful, cp_c4_faithful_with, cyclic,
    dicyclic_4p, dihedral, dihedral_index, direct_product, is_prime, semidirect,
};
pub use isomorphism::{find_isomorphism, is_isomorphic};
pub use subgroups::{
    all_subgroups, all_subgroups_with, coset_graph, cosets_of_order2, is_coset, subgroups_of_order,
    subgroups_of_order_with,
};

/// How a table was built, when that matters to later checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `dihedral(order)`: element `k·(order/2) + l` is `s^k d^l`.
    Dihedral { order: usize },
}

#[derive(Debug, Clone, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    family: Option<Family>,
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl std::hash::Hash for GroupTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.mul.hash(state);
    }
}

/// File form: `{"order": n, "mul": [[…], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Validates a flat row-major table: Latin square, identity, associativity.
    pub fn from_flat(order: usize, mul: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        if mul.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table of order {order} needs {} entries, got {}",
                order * order,
                mul.len()
            )));
        }
        if let Some(v) = mul.iter().find(|&&v| v >= order) {
            return Err(Error::InvalidGroup(format!("entry {v} out of range")));
        }
        for x in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for y in 0..order {
                let r = mul[x * order + y];
                let c = mul[y * order + x];
                if row[r] || col[c] {
                    return Err(Error::InvalidGroup(format!(
                        "row or column {x} repeats an entry (not a Latin square)"
                    )));
                }
                row[r] = true;
                col[c] = true;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for x in 0..order {
            for y in 0..order {
                let xy = mul[x * order + y];
                for z in 0..order {
                    if mul[xy * order + z] != mul[x * order + mul[y * order + z]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(Self::assemble(order, mul, identity))
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        Self::from_flat(order, rows.into_iter().flatten().collect())
    }

    /// Builds without validation; the caller guarantees the group axioms.
    pub(crate) fn assemble(order: usize, mul: Vec<usize>, identity: usize) -> Self {
        let inverse = (0..order)
            .map(|x| {
                (0..order)
                    .find(|&y| mul[x * order + y] == identity)
                    .expect("Latin square has inverses")
            })
            .collect();
        GroupTable {
            order,
            mul,
            identity,
            inverse,
            family: None,
        }
    }

    pub(crate) fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Number of elements of each order, indexed by order.
    pub fn order_census(&self) -> Vec<usize> {
        let mut census = vec![0; self.order + 1];
        for x in 0..self.order {
            census[self.element_order(x)] += 1;
        }
        census
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Elements of the subgroup generated by `gens`, as a membership mask.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push(y);
                }
            }
        }
        member
    }

    /// Relabels so that element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidMap("relabelling is not a permutation".into()));
        }
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[perm[x] * n + perm[y]] = perm[self.mul(x, y)];
            }
        }
        Ok(Self::assemble(n, mul, perm[self.identity]))
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            order: self.order,
            mul: self.rows(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("group serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        if file.mul.len() != file.order {
            return Err(Error::InvalidGroup(format!(
                "order {} but {} rows",
                file.order,
                file.mul.len()
            )));
        }
        Self::from_rows(file.mul)
    }
}

/// The heap `(x, y, z) ↦ x·y⁻¹·z` of a group.
pub fn heap_from_group(g: &GroupTable) -> OperationTable {
    let n = g.order;
    let mut values = Vec::with_capacity(n * n * n);
    for z in 0..n {
        for y in 0..n {
            let yi = g.inv(y);
            for x in 0..n {
                values.push(g.mul(g.mul(x, yi), z));
            }
        }
    }
    OperationTable::new(n, 3, values).expect("valid heap table")
}

/// The group `x·y := m(x, e, y)` with identity `e`.
///
/// Fails unless `m` is the heap of that group, which happens exactly when
/// `m` satisfies the heap identities.
pub fn group_from_heap(m: &OperationTable, e: usize) -> Result<GroupTable> {
    if m.arity() != 3 {
        return Err(Error::Arity(format!("heap must be ternary, got arity {}", m.arity())));
    }
    let n = m.domain();
    if e >= n {
        return Err(Error::Domain(format!("identity {e} outside domain of size {n}")));
    }
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            mul.push(m.apply3(x, e, y));
        }
    }
    let g = GroupTable::from_flat(n, mul).map_err(|err| {
        Error::InvalidGroup(format!("m(x,{e},y) is not a group operation: {err}"))
    })?;
    if g.identity != e {
        return Err(Error::InvalidGroup(format!("{e} is not the identity of m(x,{e},y)")));
    }
    for x in 0..n {
        if m.apply3(e, x, e) != g.inv(x) {
            return Err(Error::InvalidGroup(format!("m({e},{x},{e}) is not the inverse of {x}")));
        }
    }
    if heap_from_group(&g) != *m {
        return Err(Error::InvalidGroup("operation is not the heap of m(x,e,y)".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation() {
        assert!(GroupTable::from_rows(vec![vec![0, 1], vec![1, 0]]).is_ok());
        assert!(GroupTable::from_rows(vec![vec![0, 1], vec![1, 1]]).is_err());
        // A Latin square with identity that is not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = GroupTable::from_rows(loop5).unwrap_err();
        assert!(err.to_string().contains("associativity"));
    }

    #[test]
    fn json_round_trip() {
        let g = dihedral(8).unwrap();
        let back = GroupTable::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.identity(), 0);
    }

    #[test]
    fn heaps() {
        let c2 = cyclic(2).unwrap();
        let h = heap_from_group(&c2);
        assert_eq!(h, OperationTable::from_fn(2, 3, |a| a[0] ^ a[1] ^ a[2]).unwrap());
        let c3 = cyclic(3).unwrap();
        assert_eq!(heap_from_group(&c3).apply3(1, 2, 1), 0);
        let g = group_from_heap(&h, 1).unwrap();
        assert_eq!(g.identity(), 1);
        assert!(is_isomorphic(&g, &c2));
        assert_eq!(g.mul(0, 0), 1);
    }

    #[test]
    fn heap_round_trip_every_identity() {
        let g = dihedral(10).unwrap();
        let m = heap_from_group(&g);
        for e in 0..10 {
            assert_eq!(heap_from_group(&group_from_heap(&m, e).unwrap()), m);
        }
    }

    #[test]
    fn non_heap_rejected() {
        let first = OperationTable::projection(3, 3, 0).unwrap();
        assert!(group_from_heap(&first, 0).is_err());
        // x - y + z with a twist on one entry.
        let mut values = heap_from_group(&cyclic(3).unwrap()).values().to_vec();
        values[5] = (values[5] + 1) % 3;
        let broken = OperationTable::new(3, 3, values).unwrap();
        assert!(group_from_heap(&broken, 0).is_err());
    }
}
