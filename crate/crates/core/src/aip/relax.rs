//! The affine relaxation solved by sparse elimination.
//!
//! For a constraint with scope `(v₁, …, v_k)` over a template relation `R`,
//! the relaxation asks for integer weights on `R` summing to one whose
//! marginals are the vectors `w(vᵢ, ·)`. Eliminating the constraint weights
//! leaves the condition that the concatenated marginals lie in the affine
//! lattice spanned by the one-hot encodings of the tuples of `R`. Each
//! template relation's lattice is diagonalized once; constraints then become
//! sparse equations and congruences on the element unknowns, most of which
//! have a unit coefficient and are eliminated by substitution. Whatever is
//! left is handed to the exact dense solver.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::hnf::{hnf, solve_z, transpose, Matrix};
use crate::structures::{Relation, Structure};

/// Marker for arithmetic that left `i64`; callers fall back to the dense
/// encoding.
#[derive(Debug)]
pub(crate) struct Overflow;

type Row = (Vec<(usize, i64)>, i64);

/// Lattice conditions of one template relation on local coordinates
/// `(position, value)`, indexed `position·n + value`.
#[derive(Debug, Clone)]
struct RelationLattice {
    base: Vec<i64>,
    /// `(coefficients, modulus)`: `coefficients·(y - base)` must be zero
    /// when the modulus is 0 and divisible by it otherwise.
    rows: Vec<(Vec<i64>, i64)>,
}

impl RelationLattice {
    fn new(rel: &Relation, n: usize) -> Result<Self, Overflow> {
        let k = rel.arity();
        let dim = k * n;
        let one_hot = |t: &[usize]| -> Vec<i64> {
            let mut v = vec![0; dim];
            for (i, &x) in t.iter().enumerate() {
                v[i * n + x] = 1;
            }
            v
        };
        let tuples = rel.tuples();
        let base = one_hot(&tuples[0]);
        let columns: Vec<Vec<i64>> = tuples[1..]
            .iter()
            .map(|t| one_hot(t).iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        // M has one column per difference vector.
        let m: Matrix = (0..dim)
            .map(|i| columns.iter().map(|c| BigInt::from(c[i])).collect())
            .collect();
        let (u, d) = diagonalize(m, columns.len())?;
        let mut rows = Vec::new();
        for (i, urow) in u.iter().enumerate() {
            let pivot = d[i].iter().find(|x| !x.is_zero());
            let modulus = match pivot {
                None => 0,
                Some(p) => to_i64(p)?.abs(),
            };
            if modulus == 1 {
                continue;
            }
            let coeffs = urow.iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
            if coeffs.iter().any(|&c| c != 0) {
                rows.push((coeffs, modulus));
            }
        }
        Ok(RelationLattice { base, rows })
    }
}

fn to_i64(x: &BigInt) -> Result<i64, Overflow> {
    x.to_i64().ok_or(Overflow)
}

/// Finds unimodular `U` with `U·M·V` having at most one nonzero entry per
/// row and column, by alternating row and column Hermite reductions.
fn diagonalize(m: Matrix, columns: usize) -> Result<(Matrix, Matrix), Overflow> {
    let rows = m.len();
    let (mut d, mut u) = hnf(&m, columns);
    for _ in 0..64 {
        if is_diagonal(&d) {
            return Ok((u, d));
        }
        let (t, _) = hnf(&transpose(&d, columns), rows);
        let (d2, u2) = hnf(&transpose(&t, rows), columns);
        u = super::hnf::mul(&u2, &u, rows);
        d = d2;
    }
    Err(Overflow)
}

fn is_diagonal(d: &Matrix) -> bool {
    let mut used = HashSet::new();
    d.iter().all(|row| {
        let nz: Vec<usize> = (0..row.len()).filter(|&j| !row[j].is_zero()).collect();
        nz.len() <= 1 && nz.first().is_none_or(|&j| used.insert(j))
    })
}

/// Sparse integer elimination with unit pivots.
///
/// Pivot expressions are kept fully reduced: every pivot is written in
/// terms of non-pivot unknowns only.
#[derive(Debug, Clone, Default)]
struct Eliminator {
    /// `expr[p] = Some((terms, c))` means `x_p = Σ terms + c`.
    expr: Vec<Option<Row>>,
    occurs: Vec<Vec<usize>>,
    hard: Vec<Row>,
    scratch: Vec<i64>,
}

fn checked_muladd(acc: i64, a: i64, b: i64) -> Result<i64, Overflow> {
    a.checked_mul(b).and_then(|p| acc.checked_add(p)).ok_or(Overflow)
}

/// Rewrites `Σ terms + c` in non-pivot unknowns; `scratch` must be zero on
/// entry and is left zero.
fn reduce(expr: &[Option<Row>], scratch: &mut [i64], terms: &[(usize, i64)], c: i64) -> Result<Row, Overflow> {
    let mut touched = Vec::new();
    let mut constant = c;
    let mut bump = |scratch: &mut [i64], w: usize, a: i64, b: i64| -> Result<(), Overflow> {
        if scratch[w] == 0 {
            touched.push(w);
        }
        scratch[w] = checked_muladd(scratch[w], a, b)?;
        Ok(())
    };
    for &(v, a) in terms {
        match &expr[v] {
            Some((e, ec)) => {
                constant = checked_muladd(constant, a, *ec)?;
                for &(w, b) in e {
                    bump(scratch, w, a, b)?;
                }
            }
            None => bump(scratch, v, a, 1)?,
        }
    }
    touched.sort_unstable();
    touched.dedup();
    let mut out = Vec::with_capacity(touched.len());
    for w in touched {
        let a = std::mem::take(&mut scratch[w]);
        if a != 0 {
            out.push((w, a));
        }
    }
    Ok((out, constant))
}

impl Eliminator {
    fn reduce(&mut self, terms: &[(usize, i64)], c: i64) -> Result<Row, Overflow> {
        reduce(&self.expr, &mut self.scratch, terms, c)
    }

    fn fresh(&mut self) -> usize {
        self.expr.push(None);
        self.occurs.push(Vec::new());
        self.scratch.push(0);
        self.expr.len() - 1
    }

    /// Adds `Σ terms + c = 0`; returns `false` on a contradiction.
    fn add(&mut self, terms: &[(usize, i64)], c: i64) -> Result<bool, Overflow> {
        let (row, constant) = self.reduce(terms, c)?;
        if row.is_empty() {
            return Ok(constant == 0);
        }
        let unit = row
            .iter()
            .filter(|(_, a)| a.abs() == 1)
            .min_by_key(|(v, _)| self.occurs[*v].len())
            .copied();
        let Some((p, a)) = unit else {
            self.hard.push((row, constant));
            return Ok(true);
        };
        // x_p = -a·(Σ others + c) since a = ±1.
        let e: Vec<(usize, i64)> = row
            .iter()
            .filter(|(v, _)| *v != p)
            .map(|&(v, b)| (v, -a * b))
            .collect();
        let ec = -a * constant;
        let users = std::mem::take(&mut self.occurs[p]);
        for q in users {
            let Some((qe, qc)) = self.expr[q].take() else { continue };
            let Some(coef) = qe.iter().find(|(v, _)| *v == p).map(|&(_, b)| b) else {
                self.expr[q] = Some((qe, qc));
                continue;
            };
            let mut merged: Vec<(usize, i64)> = qe.into_iter().filter(|(v, _)| *v != p).collect();
            let before: HashSet<usize> = merged.iter().map(|(v, _)| *v).collect();
            for &(v, b) in &e {
                merged.push((v, coef.checked_mul(b).ok_or(Overflow)?));
            }
            let (terms, c0) = self.reduce(&merged, checked_muladd(qc, coef, ec)?)?;
            for &(v, _) in &terms {
                if !before.contains(&v) {
                    self.occurs[v].push(q);
                }
            }
            self.expr[q] = Some((terms, c0));
        }
        for &(v, _) in &e {
            self.occurs[v].push(p);
        }
        self.expr[p] = Some((e, ec));
        Ok(true)
    }

    /// Decides the remaining non-unit rows exactly.
    fn feasible(&self) -> Result<bool, Overflow> {
        let mut scratch = vec![0; self.expr.len()];
        let mut rows = Vec::new();
        for (terms, c) in &self.hard {
            let (t, c) = reduce(&self.expr, &mut scratch, terms, *c)?;
            if t.is_empty() {
                if c != 0 {
                    return Ok(false);
                }
            } else {
                rows.push((t, c));
            }
        }
        if rows.is_empty() {
            return Ok(true);
        }
        let mut index: HashMap<usize, usize> = HashMap::new();
        for (t, _) in &rows {
            for &(v, _) in t {
                let next = index.len();
                index.entry(v).or_insert(next);
            }
        }
        let columns = index.len();
        let mut m: Matrix = Vec::with_capacity(rows.len());
        let mut b = Vec::with_capacity(rows.len());
        for (t, c) in &rows {
            let mut row = vec![BigInt::zero(); columns];
            for &(v, a) in t {
                row[index[&v]] = BigInt::from(a);
            }
            m.push(row);
            b.push(BigInt::from(-c));
        }
        Ok(solve_z(&m, columns, &b).is_some())
    }
}

enum Kind {
    /// `{(b, b) : b ∈ B}`: the two marginals coincide.
    Diagonal,
    /// `{b}`: the marginal is the unit vector at `b`.
    Point(usize),
    Empty,
    Lattice(RelationLattice),
}

fn classify(rel: &Relation, n: usize) -> Result<Kind, Overflow> {
    let t = rel.tuples();
    if t.is_empty() {
        return Ok(Kind::Empty);
    }
    if rel.arity() == 1 && t.len() == 1 {
        return Ok(Kind::Point(t[0][0]));
    }
    if rel.arity() == 2 && t.len() == n {
        let mut seen = vec![false; n];
        if t.iter().all(|p| p[0] == p[1] && !std::mem::replace(&mut seen[p[0]], true)) {
            return Ok(Kind::Diagonal);
        }
    }
    RelationLattice::new(rel, n).map(Kind::Lattice)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The relaxation of an instance, reduced once so that further unit-vector
/// constraints can be added cheaply.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    n: usize,
    class: Vec<usize>,
    /// Per class root: `Ok(first unknown)` or `Err(fixed value)`.
    slot: Vec<Result<usize, usize>>,
    elim: Eliminator,
    contradiction: bool,
}

impl Prepared {
    pub(crate) fn new(a: &Structure, b: &Structure) -> Result<Self, Overflow> {
        let n = b.size();
        let size = a.size();
        let kinds = b
            .relations()
            .iter()
            .map(|r| classify(r, n))
            .collect::<Result<Vec<_>, _>>()?;
        let mut parent: Vec<usize> = (0..size).collect();
        let mut contradiction = false;
        for (ra, kind) in a.relations().iter().zip(&kinds) {
            match kind {
                Kind::Diagonal => {
                    for t in ra.tuples() {
                        let (x, y) = (find(&mut parent, t[0]), find(&mut parent, t[1]));
                        parent[x.max(y)] = x.min(y);
                    }
                }
                Kind::Empty => contradiction |= !ra.is_empty(),
                _ => {}
            }
        }
        let class: Vec<usize> = (0..size).map(|x| find(&mut parent, x)).collect();
        let mut fixed: Vec<Option<usize>> = vec![None; size];
        for (ra, kind) in a.relations().iter().zip(&kinds) {
            if let Kind::Point(v) = kind {
                for t in ra.tuples() {
                    let c = class[t[0]];
                    match fixed[c] {
                        Some(w) if w != *v => contradiction = true,
                        _ => fixed[c] = Some(*v),
                    }
                }
            }
        }
        let mut elim = Eliminator::default();
        let mut slot = vec![Err(0); size];
        for x in 0..size {
            if class[x] != x {
                continue;
            }
            slot[x] = match fixed[x] {
                Some(v) => Err(v),
                None => {
                    let first = elim.expr.len();
                    for _ in 0..n {
                        elim.fresh();
                    }
                    Ok(first)
                }
            };
        }
        let mut prepared = Prepared {
            n,
            class,
            slot,
            elim,
            contradiction,
        };
        if prepared.contradiction {
            return Ok(prepared);
        }
        for x in 0..size {
            if let Ok(first) = prepared.slot[x] {
                let terms: Vec<(usize, i64)> = (first..first + n).map(|v| (v, 1)).collect();
                if !prepared.elim.add(&terms, -1)? {
                    prepared.contradiction = true;
                    return Ok(prepared);
                }
            }
        }
        let mut seen: HashSet<(Vec<(usize, i64)>, i64, i64)> = HashSet::new();
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (ra, kind) in a.relations().iter().zip(&kinds) {
            let Kind::Lattice(lattice) = kind else { continue };
            for t in ra.tuples() {
                for (coeffs, modulus) in &lattice.rows {
                    acc.clear();
                    let mut constant: i64 = 0;
                    for (i, &x) in t.iter().enumerate() {
                        let slot = prepared.slot[prepared.class[x]];
                        for v in 0..n {
                            let c = coeffs[i * n + v];
                            if c == 0 {
                                continue;
                            }
                            constant = checked_muladd(constant, -c, lattice.base[i * n + v])?;
                            match slot {
                                Ok(first) => *acc.entry(first + v).or_insert(0) += c,
                                Err(w) if w == v => constant = checked_muladd(constant, c, 1)?,
                                Err(_) => {}
                            }
                        }
                    }
                    let mut terms: Vec<(usize, i64)> =
                        acc.iter().filter(|(_, &c)| c != 0).map(|(&v, &c)| (v, c)).collect();
                    terms.sort_unstable();
                    if terms.is_empty() {
                        let ok = if *modulus == 0 {
                            constant == 0
                        } else {
                            constant % modulus == 0
                        };
                        if !ok {
                            prepared.contradiction = true;
                            return Ok(prepared);
                        }
                        continue;
                    }
                    let key_constant = if *modulus == 0 {
                        constant
                    } else {
                        constant.rem_euclid(*modulus)
                    };
                    if !seen.insert((terms.clone(), key_constant, *modulus)) {
                        continue;
                    }
                    if *modulus != 0 {
                        let q = prepared.elim.fresh();
                        terms.push((q, -modulus));
                    }
                    if !prepared.elim.add(&terms, constant)? {
                        prepared.contradiction = true;
                        return Ok(prepared);
                    }
                }
            }
        }
        Ok(prepared)
    }

    /// Adds `w(x, ·) = e_value` for each pair.
    pub(crate) fn fix(&mut self, fixed: &[(usize, usize)]) -> Result<(), Overflow> {
        for &(x, value) in fixed {
            if self.contradiction {
                return Ok(());
            }
            if x >= self.class.len() || value >= self.n {
                self.contradiction = true;
                return Ok(());
            }
            match self.slot[self.class[x]] {
                Err(w) => self.contradiction |= w != value,
                Ok(first) => {
                    for v in 0..self.n {
                        let rhs = -i64::from(v == value);
                        if !self.elim.add(&[(first + v, 1)], rhs)? {
                            self.contradiction = true;
                            break;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn feasible(&self) -> Result<bool, Overflow> {
        if self.contradiction {
            return Ok(false);
        }
        self.elim.feasible()
    }
}
