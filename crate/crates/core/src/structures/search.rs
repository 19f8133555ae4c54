//! Backtracking homomorphism search with generalized arc consistency.
//!
//! Every tuple of every relation of the source becomes a constraint whose
//! allowed tuples are the corresponding target relation. Domains are bitsets
//! over the target; changes are recorded word by word on a trail so that
//! backtracking costs only what was changed.

use std::collections::VecDeque;

use super::{Homomorphism, Structure};
use crate::{Error, Result};

struct Constraint {
    relation: usize,
    scope: Vec<usize>,
    /// Position pairs `(i, j)`, `i < j`, holding the same variable.
    repeats: Vec<(usize, usize)>,
}

struct Solver<'a> {
    target: &'a Structure,
    words: usize,
    domains: Vec<u64>,
    trail: Vec<(usize, u64)>,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
    queued: Vec<bool>,
    queue: VecDeque<usize>,
    support: Vec<u64>,
}

impl<'a> Solver<'a> {
    fn new(source: &Structure, target: &'a Structure) -> Self {
        let words = target.size.div_ceil(64).max(1);
        let mut domains = vec![0u64; source.size * words];
        for v in 0..source.size {
            for b in 0..target.size {
                domains[v * words + b / 64] |= 1 << (b % 64);
            }
        }
        let mut constraints = Vec::new();
        let mut watch = vec![Vec::new(); source.size];
        for (ri, rel) in source.relations.iter().enumerate() {
            for t in &rel.tuples {
                let id = constraints.len();
                let mut repeats = Vec::new();
                for i in 0..t.len() {
                    for j in i + 1..t.len() {
                        if t[i] == t[j] {
                            repeats.push((i, j));
                        }
                    }
                    if !t[..i].contains(&t[i]) {
                        watch[t[i]].push(id);
                    }
                }
                constraints.push(Constraint {
                    relation: ri,
                    scope: t.clone(),
                    repeats,
                });
            }
        }
        let max_arity = source.relations.iter().map(|r| r.arity).max().unwrap_or(0);
        Solver {
            target,
            words,
            domains,
            trail: Vec::new(),
            queued: vec![false; constraints.len()],
            constraints,
            watch,
            queue: VecDeque::new(),
            support: vec![0; max_arity * words],
        }
    }

    fn contains(&self, v: usize, b: usize) -> bool {
        self.domains[v * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn first_value_from(&self, v: usize, from: usize) -> Option<usize> {
        (from..self.target.size).find(|&b| self.contains(v, b))
    }

    fn set_word(&mut self, index: usize, value: u64) {
        let old = self.domains[index];
        if old != value {
            self.trail.push((index, old));
            self.domains[index] = value;
        }
    }

    fn restore(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (index, old) = self.trail.pop().expect("trail entry");
            self.domains[index] = old;
        }
    }

    fn assign(&mut self, v: usize, b: usize) {
        for w in 0..self.words {
            let value = if w == b / 64 {
                self.domains[v * self.words + w] & (1 << (b % 64))
            } else {
                0
            };
            self.set_word(v * self.words + w, value);
        }
    }

    fn enqueue_var(&mut self, v: usize) {
        for k in 0..self.watch[v].len() {
            let c = self.watch[v][k];
            if !self.queued[c] {
                self.queued[c] = true;
                self.queue.push_back(c);
            }
        }
    }

    fn enqueue_all(&mut self) {
        for c in 0..self.constraints.len() {
            if !self.queued[c] {
                self.queued[c] = true;
                self.queue.push_back(c);
            }
        }
    }

    fn clear_queue(&mut self) {
        for c in self.queue.drain(..) {
            self.queued[c] = false;
        }
    }

    /// Runs the queue to a fixpoint; `false` on a domain wipe-out.
    fn propagate(&mut self) -> bool {
        while let Some(c) = self.queue.pop_front() {
            self.queued[c] = false;
            if !self.revise(c) {
                self.clear_queue();
                return false;
            }
        }
        true
    }

    fn revise(&mut self, c: usize) -> bool {
        let words = self.words;
        let arity = self.constraints[c].scope.len();
        self.support[..arity * words].fill(0);
        let allowed = &self.target.relations[self.constraints[c].relation].tuples;
        let constraint = &self.constraints[c];
        'tuples: for t in allowed {
            for (i, &b) in t.iter().enumerate() {
                let v = constraint.scope[i];
                if self.domains[v * words + b / 64] >> (b % 64) & 1 == 0 {
                    continue 'tuples;
                }
            }
            for &(i, j) in &constraint.repeats {
                if t[i] != t[j] {
                    continue 'tuples;
                }
            }
            for (i, &b) in t.iter().enumerate() {
                self.support[i * words + b / 64] |= 1 << (b % 64);
            }
        }
        for i in 0..arity {
            let v = self.constraints[c].scope[i];
            let mut changed = false;
            let mut empty = true;
            for w in 0..words {
                let old = self.domains[v * words + w];
                let new = old & self.support[i * words + w];
                if new != old {
                    changed = true;
                    self.set_word(v * words + w, new);
                }
                empty &= new == 0;
            }
            if empty {
                return false;
            }
            if changed {
                self.enqueue_var(v);
            }
        }
        true
    }
}

/// Searches for a homomorphism `a → b` extending `seed`.
///
/// The search is complete: arc consistency prunes, backtracking decides.
/// Variables are visited in ascending order of constraint degree (ties by
/// index) and values in ascending order, so the result is deterministic.
pub fn hom_search(
    a: &Structure,
    b: &Structure,
    seed: Option<&[Option<usize>]>,
) -> Result<Option<Homomorphism>> {
    if !a.same_signature(b) {
        return Err(Error::SignatureMismatch(
            "instance and template have different signatures".into(),
        ));
    }
    if let Some(seed) = seed {
        if seed.len() != a.size {
            return Err(Error::InvalidMap(format!(
                "seed has length {}, source has {} elements",
                seed.len(),
                a.size
            )));
        }
        if let Some(v) = seed.iter().flatten().find(|&&v| v >= b.size) {
            return Err(Error::InvalidMap(format!("seed value {v} outside target domain")));
        }
    }
    if a.size == 0 {
        return Ok(Some(Homomorphism::new(0, b.size, Vec::new())));
    }
    if b.size == 0 {
        return Ok(None);
    }
    let mut solver = Solver::new(a, b);
    if let Some(seed) = seed {
        for (v, value) in seed.iter().enumerate() {
            if let Some(value) = value {
                solver.assign(v, *value);
            }
        }
    }
    solver.enqueue_all();
    if !solver.propagate() {
        return Ok(None);
    }

    let mut order: Vec<usize> = (0..a.size).collect();
    let degree: Vec<usize> = solver.watch.iter().map(Vec::len).collect();
    order.sort_by_key(|&v| (degree[v], v));

    // Frame: (position in order, trail mark before the branch, next value to try).
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, solver.trail.len(), 0)];
    while let Some(frame) = stack.last_mut() {
        let (pos, mark, next) = *frame;
        if pos == order.len() {
            let map = (0..a.size)
                .map(|v| solver.first_value_from(v, 0).expect("nonempty domain"))
                .collect();
            return Ok(Some(Homomorphism::new(a.size, b.size, map)));
        }
        solver.restore(mark);
        let v = order[pos];
        let Some(value) = solver.first_value_from(v, next) else {
            stack.pop();
            continue;
        };
        frame.2 = value + 1;
        solver.assign(v, value);
        solver.enqueue_var(v);
        if solver.propagate() {
            stack.push((pos + 1, solver.trail.len(), 0));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{is_homomorphism, Relation};

    fn digraph(n: usize, edges: &[(usize, usize)]) -> Structure {
        Structure::new(
            n,
            vec![Relation::new("E", 2, edges.iter().map(|&(u, v)| vec![u, v]).collect())],
        )
    }

    #[test]
    fn edge_into_two_cycle() {
        let a = digraph(2, &[(0, 1)]);
        let b = digraph(2, &[(0, 1), (1, 0)]);
        let h = hom_search(&a, &b, None).unwrap().unwrap();
        assert!(is_homomorphism(&h, &a, &b).unwrap());
    }

    #[test]
    fn odd_cycle_not_into_two_cycle() {
        let a = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let b = digraph(2, &[(0, 1), (1, 0)]);
        assert!(hom_search(&a, &b, None).unwrap().is_none());
    }

    #[test]
    fn seeded_identity() {
        let a = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let h = hom_search(&a, &a, Some(&[None, Some(1), None])).unwrap().unwrap();
        assert_eq!(h.map, vec![0, 1, 2]);
        let h = hom_search(&a, &a, Some(&[Some(2), None, None])).unwrap().unwrap();
        assert_eq!(h.map, vec![2, 0, 1]);
    }

    #[test]
    fn repeated_variables_in_scope() {
        let a = digraph(1, &[(0, 0)]);
        let b = digraph(2, &[(0, 1), (1, 1)]);
        assert_eq!(hom_search(&a, &b, None).unwrap().unwrap().map, vec![1]);
        let b = digraph(2, &[(0, 1), (1, 0)]);
        assert!(hom_search(&a, &b, None).unwrap().is_none());
    }

    #[test]
    fn empty_target_relation() {
        let a = digraph(2, &[(0, 1)]);
        let b = digraph(3, &[]);
        assert!(hom_search(&a, &b, None).unwrap().is_none());
        let a = digraph(2, &[]);
        assert_eq!(hom_search(&a, &b, None).unwrap().unwrap().map, vec![0, 0]);
    }

    #[test]
    fn wide_target_domain() {
        // 130 values spans three bitset words.
        let n = 130;
        let b = digraph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>());
        let a = digraph(3, &[(0, 1), (1, 2)]);
        let h = hom_search(&a, &b, Some(&[Some(128), None, None])).unwrap().unwrap();
        assert_eq!(h.map, vec![128, 129, 0]);
    }

    #[test]
    fn signature_mismatch() {
        let a = digraph(2, &[(0, 1)]);
        let b = Structure::new(2, vec![]);
        assert!(matches!(hom_search(&a, &b, None), Err(Error::SignatureMismatch(_))));
    }
}
