//! Enumeration of all groups of a given order, up to isomorphism, by search
//! over Cayley tables.
//!
//! Tables are searched in a canonical labelling: identity `0`, chosen
//! generators `1, …, r`, and every other element labelled in the order in
//! which it first appears when the generator columns are read row by row.
//! Every group has such a labelling for each of its generating sequences of
//! length `r`, so searching `r = 1, …, ⌊log₂ n⌋` finds every group; the
//! survivors are deduplicated by isomorphism. Associativity is propagated
//! through all four positions a known product can occupy in
//! `(x·y)·z = x·(y·z)`, together with the Latin-square constraints.

use super::{is_isomorphic, GroupTable};
use crate::{Error, Limits, Result};

const NONE: usize = usize::MAX;

struct TableSearch {
    n: usize,
    r: usize,
    t: Vec<usize>,
    row_inv: Vec<usize>,
    col_inv: Vec<usize>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl TableSearch {
    fn new(n: usize, r: usize) -> Self {
        TableSearch {
            n,
            r,
            t: vec![NONE; n * n],
            row_inv: vec![NONE; n * n],
            col_inv: vec![NONE; n * n],
            trail: Vec::new(),
            queue: Vec::new(),
            found: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, x: usize, y: usize) -> usize {
        self.t[x * self.n + y]
    }

    fn set(&mut self, x: usize, y: usize, v: usize) -> bool {
        let n = self.n;
        let cell = x * n + y;
        let current = self.t[cell];
        if current != NONE {
            return current == v;
        }
        if self.row_inv[x * n + v] != NONE || self.col_inv[y * n + v] != NONE {
            return false;
        }
        self.t[cell] = v;
        self.row_inv[x * n + v] = y;
        self.col_inv[y * n + v] = x;
        self.trail.push(cell);
        self.queue.push(cell);
        true
    }

    fn undo(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            let cell = self.trail.pop().expect("trail entry");
            let (x, y, v) = (cell / n, cell % n, self.t[cell]);
            self.row_inv[x * n + v] = NONE;
            self.col_inv[y * n + v] = NONE;
            self.t[cell] = NONE;
        }
        self.queue.clear();
    }

    /// Sets whichever side of `t[p][q] = t[r][s]` is unknown.
    fn equate(&mut self, p: usize, q: usize, r: usize, s: usize) -> bool {
        match (self.get(p, q), self.get(r, s)) {
            (NONE, NONE) => true,
            (u, NONE) => self.set(r, s, u),
            (NONE, u) => self.set(p, q, u),
            (u, w) => u == w,
        }
    }

    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some(cell) = self.queue.pop() {
            let (a, b, c) = (cell / n, cell % n, self.t[cell]);
            for z in 0..n {
                // (a·b)·z = a·(b·z)
                let w = self.get(b, z);
                if w != NONE && !self.equate(c, z, a, w) {
                    return false;
                }
                // (z·a)·b = z·(a·b)
                let d = self.get(z, a);
                if d != NONE && !self.equate(d, b, z, c) {
                    return false;
                }
                // a = z·y, so (z·y)·b = z·(y·b) = c
                let y = self.row_inv[z * n + a];
                if y != NONE {
                    let w = self.get(y, b);
                    let ok = if w != NONE {
                        self.set(z, w, c)
                    } else {
                        let w = self.row_inv[z * n + c];
                        w == NONE || self.set(y, b, w)
                    };
                    if !ok {
                        return false;
                    }
                }
                // b = z·y', so a·(z·y') = (a·z)·y' = c
                let yp = self.row_inv[z * n + b];
                if yp != NONE {
                    let d = self.get(a, z);
                    let ok = if d != NONE {
                        self.set(d, yp, c)
                    } else {
                        let d = self.col_inv[yp * n + c];
                        d == NONE || self.set(a, z, d)
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, x: usize, y: usize, v: usize) -> bool {
        let ok = self.set(x, y, v) && self.propagate();
        if !ok {
            self.queue.clear();
        }
        ok
    }

    /// Fills generator cells in canonical order; `max_label` is the largest
    /// label seen so far in that order.
    fn generators(&mut self, pos: usize, max_label: usize) {
        let (n, r) = (self.n, self.r);
        if pos == n * r {
            if max_label + 1 == n {
                self.complete();
            }
            return;
        }
        let (x, j) = (pos / r, pos % r + 1);
        if x > max_label {
            return;
        }
        let known = self.get(x, j);
        if known != NONE {
            if known <= max_label + 1 {
                self.generators(pos + 1, max_label.max(known));
            }
            return;
        }
        for v in 0..=(max_label + 1).min(n - 1) {
            let mark = self.trail.len();
            if self.assign(x, j, v) {
                self.generators(pos + 1, max_label.max(v));
            }
            self.undo(mark);
        }
    }

    fn complete(&mut self) {
        let Some(cell) = self.t.iter().position(|&v| v == NONE) else {
            self.found.push(self.t.clone());
            return;
        };
        let (x, y) = (cell / self.n, cell % self.n);
        for v in 0..self.n {
            let mark = self.trail.len();
            if self.assign(x, y, v) {
                self.complete();
            }
            self.undo(mark);
        }
    }
}

/// Every group of order `n` up to isomorphism, identity at index 0, under
/// the default order bound.
pub fn enumerate_groups_on_set(n: usize) -> Result<Vec<GroupTable>> {
    enumerate_groups_with(n, &Limits::default())
}

pub fn enumerate_groups_with(n: usize, limits: &Limits) -> Result<Vec<GroupTable>> {
    if n == 0 {
        return Err(Error::InvalidGroup("no group has order 0".into()));
    }
    if n > limits.group_enumeration_order {
        return Err(Error::bound(
            "group enumeration",
            n as u128,
            limits.group_enumeration_order,
        ));
    }
    if n == 1 {
        return Ok(vec![GroupTable::assemble(1, vec![0], 0)]);
    }
    let mut groups: Vec<GroupTable> = Vec::new();
    let max_r = (usize::BITS - 1 - n.leading_zeros()) as usize;
    for r in 1..=max_r.min(n - 1) {
        let mut search = TableSearch::new(n, r);
        let mut ok = true;
        for y in 0..n {
            ok &= search.set(0, y, y) && search.set(y, 0, y);
        }
        if !ok || !search.propagate() {
            continue;
        }
        search.generators(r, r);
        for table in search.found {
            let g = GroupTable::from_flat(n, table).expect("search yields groups");
            if !groups.iter().any(|h| is_isomorphic(h, &g)) {
                groups.push(g);
            }
        }
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let expected = [1, 1, 1, 2, 1, 2, 1, 5];
        for (i, &count) in expected.iter().enumerate() {
            let groups = enumerate_groups_on_set(i + 1).unwrap();
            assert_eq!(groups.len(), count, "order {}", i + 1);
            assert!(groups.iter().all(|g| g.identity() == 0));
        }
    }

    #[test]
    fn bound() {
        assert!(enumerate_groups_on_set(13).is_err());
    }
}
