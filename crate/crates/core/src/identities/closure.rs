//! The substitution-closed equivalence generated by a linear identity set,
//! and the procedures built on it: entailment of `x = y`, consistency and
//! the one-point domain extension of a model.
//!
//! The equivalence lives on linear terms over a countable variable set. It is
//! represented by its restriction to terms over a finite pool `x_0, …, x_{N-1}`
//! with `N = max(2, largest arity)`. Any derivation chain between two pool
//! terms can be pushed into the pool by a substitution that fixes their
//! variables, so the restriction is generated by the instances of the
//! identities whose variables range over the pool.

use std::collections::BTreeMap;

use super::{check_interpretation, satisfies, Identity, IdentitySet, Interpretation, Term};
use crate::operation::advance;
use crate::{Error, OperationTable, Result};

const MAX_TERMS: usize = 4_000_000;
const MAX_INSTANCES: u128 = 20_000_000;

#[derive(Debug, Clone)]
pub struct TermEquivalence {
    symbols: Vec<(String, usize)>,
    pool: usize,
    offsets: Vec<usize>,
    class: Vec<usize>,
    /// A variable belonging to each class (indexed by class representative).
    class_var: Vec<Option<u32>>,
    collapsed: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

impl TermEquivalence {
    pub fn pool_size(&self) -> usize {
        self.pool
    }

    pub fn term_count(&self) -> usize {
        self.class.len()
    }

    /// Index of a linear term whose variables all lie in the pool.
    fn index(&self, term: &Term) -> Option<usize> {
        match term {
            Term::Var(v) => ((*v as usize) < self.pool).then_some(*v as usize),
            Term::App { symbol, args } => {
                let s = self.symbols.iter().position(|(n, _)| n == symbol)?;
                if args.len() != self.symbols[s].1 {
                    return None;
                }
                let mut code = 0;
                for a in args.iter().rev() {
                    let Term::Var(v) = a else { return None };
                    if *v as usize >= self.pool {
                        return None;
                    }
                    code = code * self.pool + *v as usize;
                }
                Some(self.offsets[s] + code)
            }
        }
    }

    fn term_at(&self, index: usize) -> Term {
        if index < self.pool {
            return Term::Var(index as u32);
        }
        let s = self
            .offsets
            .iter()
            .rposition(|&o| o <= index)
            .expect("index past the variables");
        let mut code = index - self.offsets[s];
        let args = (0..self.symbols[s].1)
            .map(|_| {
                let v = code % self.pool;
                code /= self.pool;
                Term::Var(v as u32)
            })
            .collect();
        Term::app(self.symbols[s].0.clone(), args)
    }

    /// Whether `s ≡ t`. The joint variables are renamed injectively into the
    /// pool; `None` if there are too many of them or a term is not linear
    /// over the known symbols.
    pub fn equivalent(&self, s: &Term, t: &Term) -> Option<bool> {
        let mut vars = Vec::new();
        s.variables(&mut vars);
        t.variables(&mut vars);
        if vars.len() > self.pool {
            return None;
        }
        let rename = |term: &Term| rename_vars(term, &vars);
        let (a, b) = (self.index(&rename(s))?, self.index(&rename(t))?);
        Some(self.class[a] == self.class[b])
    }

    /// For `symbol` applied to variables `args` (any ids), the argument
    /// position whose variable the term is equivalent to, if any.
    pub fn collapse(&self, symbol: &str, args: &[u32]) -> Option<usize> {
        let mut vars: Vec<u32> = Vec::new();
        for v in args {
            if !vars.contains(v) {
                vars.push(*v);
            }
        }
        let pattern: Vec<u32> = args
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("collected") as u32)
            .collect();
        let idx = self.index(&Term::apply_vars(symbol, &pattern))?;
        let var = self.class_var[self.class[idx]]?;
        pattern.iter().position(|&p| p == var)
    }

    /// Whether two distinct variables are equivalent.
    pub fn collapses_variables(&self) -> bool {
        self.collapsed
    }

    /// The classes with at least two members, each sorted by term index.
    pub fn nontrivial_classes(&self) -> Vec<Vec<Term>> {
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in self.class.iter().enumerate() {
            by_class.entry(c).or_default().push(i);
        }
        by_class
            .into_values()
            .filter(|m| m.len() > 1)
            .map(|m| m.into_iter().map(|i| self.term_at(i)).collect())
            .collect()
    }

    /// Class representative of every pool term, in term-index order.
    pub fn pool_terms(&self) -> Vec<(Term, usize)> {
        (0..self.class.len())
            .map(|i| (self.term_at(i), self.class[i]))
            .collect()
    }
}

fn rename_vars(term: &Term, vars: &[u32]) -> Term {
    match term {
        Term::Var(v) => Term::Var(vars.iter().position(|w| w == v).expect("collected") as u32),
        Term::App { symbol, args } => Term::app(
            symbol.clone(),
            args.iter().map(|a| rename_vars(a, vars)).collect(),
        ),
    }
}

fn substitute(term: &Term, vars: &[u32], values: &[usize]) -> Term {
    match term {
        Term::Var(v) => Term::Var(values[vars.iter().position(|w| w == v).expect("collected")] as u32),
        Term::App { symbol, args } => Term::app(
            symbol.clone(),
            args.iter().map(|a| substitute(a, vars, values)).collect(),
        ),
    }
}

/// The least equivalence on linear terms containing `sigma` and closed under
/// substituting variables for variables.
pub fn term_equiv_closure(sigma: &IdentitySet) -> Result<TermEquivalence> {
    if !sigma.is_linear() {
        return Err(Error::NonLinear);
    }
    let pool = sigma.max_arity().max(2);
    let mut offsets = Vec::new();
    let mut total = pool;
    for (_, arity) in sigma.symbols() {
        offsets.push(total);
        let block = crate::structures::checked_pow(pool, *arity)
            .filter(|&b| b <= MAX_TERMS)
            .ok_or_else(|| Error::bound("term closure", u128::MAX, MAX_TERMS))?;
        total += block;
        if total > MAX_TERMS {
            return Err(Error::bound("term closure", total as u128, MAX_TERMS));
        }
    }
    let instances: u128 = sigma
        .identities()
        .iter()
        .map(|id| (pool as u128).saturating_pow(id.variables().len() as u32))
        .sum();
    if instances > MAX_INSTANCES {
        return Err(Error::SizeBound {
            what: "closure instances",
            needed: instances,
            limit: MAX_INSTANCES,
        });
    }
    let mut eq = TermEquivalence {
        symbols: sigma.symbols().to_vec(),
        pool,
        offsets,
        class: Vec::new(),
        class_var: Vec::new(),
        collapsed: false,
    };
    let mut uf = UnionFind {
        parent: (0..total).collect(),
    };
    for Identity { lhs, rhs } in sigma.identities() {
        let mut vars = Vec::new();
        lhs.variables(&mut vars);
        rhs.variables(&mut vars);
        let mut values = vec![0usize; vars.len()];
        loop {
            let a = eq.index(&substitute(lhs, &vars, &values)).expect("pool term");
            let b = eq.index(&substitute(rhs, &vars, &values)).expect("pool term");
            uf.union(a, b);
            if !advance(&mut values, pool) {
                break;
            }
        }
    }
    eq.class = (0..total).map(|i| uf.find(i)).collect();
    eq.class_var = vec![None; total];
    for v in 0..pool {
        let c = eq.class[v];
        if eq.class_var[c].is_some() {
            eq.collapsed = true;
        } else {
            eq.class_var[c] = Some(v as u32);
        }
    }
    Ok(eq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entailment {
    Yes,
    No,
    Unknown,
}

/// Whether `sigma` forces every model to have at most one element.
///
/// "Yes" comes from the closure equating two variables. Otherwise the
/// one-element model is extended to `{0,1}` by [`extend_operations`] and the
/// result is checked exhaustively; a verified two-element model gives "No".
/// "Unknown" is returned when the closure exceeds its size bound.
pub fn entails_x_eq_y(sigma: &IdentitySet) -> Result<Entailment> {
    if !sigma.is_linear() {
        return Err(Error::NonLinear);
    }
    let closure = match term_equiv_closure(sigma) {
        Ok(c) => c,
        Err(Error::SizeBound { .. }) => return Ok(Entailment::Unknown),
        Err(e) => return Err(e),
    };
    if closure.collapses_variables() {
        return Ok(Entailment::Yes);
    }
    match two_element_model(sigma, &closure)? {
        Some(_) => Ok(Entailment::No),
        None => Ok(Entailment::Unknown),
    }
}

fn two_element_model(sigma: &IdentitySet, closure: &TermEquivalence) -> Result<Option<Interpretation>> {
    let mut ops = Interpretation::new();
    for (name, arity) in sigma.symbols() {
        ops.insert(name.clone(), OperationTable::constant(1, *arity, 0)?);
    }
    let extended = extend_with(&ops, 1, &[0, 0], closure)?;
    Ok(satisfies(&extended, sigma)?.then_some(extended))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    /// Carries idempotent operations on `{0,1}` satisfying the set.
    Consistent(Interpretation),
    Inconsistent,
    Unknown,
}

/// Whether idempotent operations satisfying `sigma` exist on every finite
/// domain.
///
/// This holds exactly when `sigma` together with `f(x,…,x) = x` for every
/// symbol does not entail `x = y`. For height-one sets this is the same as
/// `sigma` not entailing `f(x) = g(y)`, which the closure of `sigma` alone
/// detects directly when it equates two diagonal terms in distinct variables.
pub fn consistency_check(sigma: &IdentitySet) -> Result<Consistency> {
    if !sigma.is_linear() {
        return Err(Error::NonLinear);
    }
    if sigma.classify().height_one {
        if let Ok(closure) = term_equiv_closure(sigma) {
            if diagonals_merge(sigma, &closure) {
                return Ok(Consistency::Inconsistent);
            }
        }
    }
    let augmented = sigma.with_idempotence();
    let closure = match term_equiv_closure(&augmented) {
        Ok(c) => c,
        Err(Error::SizeBound { .. }) => return Ok(Consistency::Unknown),
        Err(e) => return Err(e),
    };
    if closure.collapses_variables() {
        return Ok(Consistency::Inconsistent);
    }
    match two_element_model(&augmented, &closure)? {
        Some(model) => Ok(Consistency::Consistent(model)),
        None => Ok(Consistency::Unknown),
    }
}

/// Whether some `f(x,…,x) ≡ g(y,…,y)` with `x ≠ y`.
fn diagonals_merge(sigma: &IdentitySet, closure: &TermEquivalence) -> bool {
    let diag = |name: &str, arity: usize, v: u32| Term::apply_vars(name, &vec![v; arity]);
    sigma.symbols().iter().any(|(f, a)| {
        sigma.symbols().iter().any(|(g, b)| {
            closure.equivalent(&diag(f, *a, 0), &diag(g, *b, 1)) == Some(true)
        })
    })
}

/// Extends operations on `C = {0, …, n-1}` to `C ∪ {n}`.
///
/// `fresh` must be `n`. The retraction `π` (length `n+1`, identity on `C`)
/// defaults to sending the fresh element to 0. For arguments `a_1, …, a_k`,
/// if renaming the distinct arguments to distinct variables makes
/// `f(a_1, …, a_k)` equivalent to the variable of `a_i`, the value is `a_i`;
/// otherwise it is `f(π(a_1), …, π(a_k))`. Symbols of `ops` that do not occur
/// in `sigma` use the second rule only.
pub fn extend_operations(
    ops: &Interpretation,
    sigma: &IdentitySet,
    fresh: usize,
    retraction: Option<&[usize]>,
) -> Result<Interpretation> {
    if !sigma.is_linear() {
        return Err(Error::NonLinear);
    }
    let mut n = check_interpretation(ops, sigma)?;
    for op in ops.values() {
        if n == 0 {
            n = op.domain();
        } else if op.domain() != n {
            return Err(Error::Domain("operations on different domains".into()));
        }
    }
    if ops.is_empty() {
        n = fresh;
    }
    if fresh != n {
        return Err(Error::Precondition(format!(
            "element {fresh} is not fresh for a domain of size {n}"
        )));
    }
    let pi: Vec<usize> = match retraction {
        Some(p) => p.to_vec(),
        None => (0..n).chain(std::iter::once(0)).collect(),
    };
    if pi.len() != n + 1 || (0..n).any(|c| pi[c] != c) || pi[n] >= n.max(1) {
        return Err(Error::Precondition(
            "retraction must be the identity on the old domain and map the fresh element into it"
                .into(),
        ));
    }
    if !satisfies(ops, sigma)? {
        return Err(Error::Precondition("operations do not satisfy the identities".into()));
    }
    let closure = term_equiv_closure(sigma)?;
    if closure.collapses_variables() {
        return Err(Error::Precondition("the identities entail x = y".into()));
    }
    extend_with(ops, n, &pi, &closure)
}

fn extend_with(
    ops: &Interpretation,
    n: usize,
    pi: &[usize],
    closure: &TermEquivalence,
) -> Result<Interpretation> {
    let mut out = Interpretation::new();
    for (name, op) in ops {
        let k = op.arity();
        let known = closure.symbols.iter().any(|(s, _)| s == name);
        let mut projected = vec![0usize; k];
        let mut vars = vec![0u32; k];
        let table = OperationTable::from_fn(n + 1, k, |args| {
            if known {
                for (slot, a) in vars.iter_mut().zip(args) {
                    *slot = *a as u32;
                }
                if let Some(i) = closure.collapse(name, &vars) {
                    return args[i];
                }
            }
            for (slot, a) in projected.iter_mut().zip(args) {
                *slot = pi[*a];
            }
            op.apply(&projected)
        })?;
        out.insert(name.clone(), table);
    }
    Ok(out)
}
