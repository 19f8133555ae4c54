//! Identity sets over function symbols.
//!
//! Terms are stored as trees so that non-linear identities (the heap
//! associativity law, for example) can still be parsed and evaluated; every
//! procedure that relies on linearity rejects them with [`Error::NonLinear`].

mod closure;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::operation::advance;
use crate::{Error, OperationTable, Result};

pub use closure::{
    consistency_check, entails_x_eq_y, extend_operations, term_equiv_closure, Consistency,
    Entailment, TermEquivalence,
};

/// An interpretation of function symbols by operations on a common domain.
pub type Interpretation = BTreeMap<String, OperationTable>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    App { symbol: String, args: Vec<Term> },
}

impl Term {
    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App {
            symbol: symbol.into(),
            args,
        }
    }

    /// Application of `symbol` to the given variables.
    pub fn apply_vars(symbol: impl Into<String>, vars: &[u32]) -> Self {
        Term::app(symbol, vars.iter().map(|&v| Term::Var(v)).collect())
    }

    /// Number of nested symbol occurrences on the deepest path.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn variables(&self, out: &mut Vec<u32>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.variables(out)),
        }
    }

    pub fn symbols<'a>(&'a self, out: &mut Vec<(&'a str, usize)>) {
        if let Term::App { symbol, args } = self {
            out.push((symbol, args.len()));
            args.iter().for_each(|a| a.symbols(out));
        }
    }

    /// Evaluates under `ops` with `value(v)` giving each variable.
    pub fn eval(&self, ops: &Interpretation, value: &impl Fn(u32) -> usize) -> usize {
        match self {
            Term::Var(v) => value(*v),
            Term::App { symbol, args } => {
                let vals: Vec<usize> = args.iter().map(|a| a.eval(ops, value)).collect();
                ops[symbol].apply(&vals)
            }
        }
    }
}

fn var_name(v: u32) -> String {
    if v < 26 {
        char::from(b'a' + v as u8).to_string()
    } else {
        format!("x{v}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&var_name(*v)),
            Term::App { symbol, args } => {
                write!(f, "{symbol}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn variables(&self) -> Vec<u32> {
        let mut vars = Vec::new();
        self.lhs.variables(&mut vars);
        self.rhs.variables(&mut vars);
        vars
    }

    pub fn is_linear(&self) -> bool {
        self.lhs.depth() <= 1 && self.rhs.depth() <= 1
    }

    pub fn is_height_one(&self) -> bool {
        self.lhs.depth() == 1 && self.rhs.depth() == 1
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A finite set of identities together with the symbols they may use.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdentitySet {
    symbols: Vec<(String, usize)>,
    identities: Vec<Identity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub linear: bool,
    pub height_one: bool,
    pub idempotent: bool,
}

impl IdentitySet {
    /// Checks that every symbol occurrence is declared with the right arity.
    pub fn new(symbols: Vec<(String, usize)>, identities: Vec<Identity>) -> Result<Self> {
        for (i, (name, arity)) in symbols.iter().enumerate() {
            if *arity == 0 {
                return Err(Error::Arity(format!("symbol {name} has arity 0")));
            }
            if symbols[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::Arity(format!("symbol {name} declared twice")));
            }
        }
        for id in &identities {
            let mut used = Vec::new();
            id.lhs.symbols(&mut used);
            id.rhs.symbols(&mut used);
            for (name, arity) in used {
                match symbols.iter().find(|(n, _)| n == name) {
                    None => return Err(Error::Arity(format!("undeclared symbol {name}"))),
                    Some((_, a)) if *a != arity => {
                        return Err(Error::Arity(format!(
                            "symbol {name} declared with arity {a}, used with {arity}"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(IdentitySet {
            symbols,
            identities,
        })
    }

    /// Declares symbols in order of first occurrence.
    pub fn from_identities(identities: Vec<Identity>) -> Result<Self> {
        let mut symbols: Vec<(String, usize)> = Vec::new();
        for id in &identities {
            let mut used = Vec::new();
            id.lhs.symbols(&mut used);
            id.rhs.symbols(&mut used);
            for (name, arity) in used {
                if !symbols.iter().any(|(n, _)| n == name) {
                    symbols.push((name.to_string(), arity));
                }
            }
        }
        IdentitySet::new(symbols, identities)
    }

    /// Parses the line-based identity syntax, e.g. `m(x,x,y) = y`.
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_identities(text)
    }

    /// `m(x,x,y) = y`, `m(y,x,x) = y`.
    pub fn maltsev() -> Self {
        let (x, y) = (Term::Var(23), Term::Var(24));
        IdentitySet::from_identities(vec![
            Identity::new(Term::app("m", vec![x.clone(), x.clone(), y.clone()]), y.clone()),
            Identity::new(Term::app("m", vec![y.clone(), x.clone(), x]), y),
        ])
        .expect("well-formed")
    }

    /// The Maltsev identities together with `m(u,x,m(v,y,w)) = m(m(u,x,v),y,w)`.
    pub fn heap() -> Self {
        let v = |c: u8| Term::Var(u32::from(c - b'a'));
        let m = |a: Term, b: Term, c: Term| Term::app("m", vec![a, b, c]);
        let mut set = IdentitySet::maltsev();
        set.identities.push(Identity::new(
            m(v(b'u'), v(b'x'), m(v(b'v'), v(b'y'), v(b'w'))),
            m(m(v(b'u'), v(b'x'), v(b'v')), v(b'y'), v(b'w')),
        ));
        set
    }

    /// `s(a,r,e,a) = s(r,a,r,e)`.
    pub fn siggers() -> Self {
        let v = |c: u8| u32::from(c - b'a');
        IdentitySet::from_identities(vec![Identity::new(
            Term::apply_vars("s", &[v(b'a'), v(b'r'), v(b'e'), v(b'a')]),
            Term::apply_vars("s", &[v(b'r'), v(b'a'), v(b'r'), v(b'e')]),
        )])
        .expect("well-formed")
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn arity_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().find(|(n, _)| n == symbol).map(|&(_, a)| a)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|&(_, a)| a).max().unwrap_or(0)
    }

    pub fn is_linear(&self) -> bool {
        self.identities.iter().all(Identity::is_linear)
    }

    /// Whether `f(x,…,x) = x` (in either orientation) is present for `symbol`.
    pub fn has_idempotence_for(&self, symbol: &str) -> bool {
        let diagonal = |t: &Term, x: u32| match t {
            Term::App { symbol: s, args } => {
                s == symbol && args.iter().all(|a| *a == Term::Var(x))
            }
            Term::Var(_) => false,
        };
        self.identities.iter().any(|id| match (&id.lhs, &id.rhs) {
            (Term::Var(x), t) | (t, Term::Var(x)) => diagonal(t, *x),
            _ => false,
        })
    }

    pub fn classify(&self) -> Classification {
        Classification {
            linear: self.is_linear(),
            height_one: self.identities.iter().all(Identity::is_height_one),
            idempotent: self.symbols.iter().all(|(s, _)| self.has_idempotence_for(s)),
        }
    }

    /// Adds `f(x,…,x) = x` for every symbol that lacks it.
    pub fn with_idempotence(&self) -> Self {
        let mut out = self.clone();
        for (name, arity) in &self.symbols {
            if !self.has_idempotence_for(name) {
                out.identities.push(Identity::new(
                    Term::apply_vars(name.clone(), &vec![23; *arity]),
                    Term::Var(23),
                ));
            }
        }
        out
    }

    /// Union with `other`; shared symbols must agree on arity.
    pub fn union(&self, other: &IdentitySet) -> Result<Self> {
        let mut symbols = self.symbols.clone();
        for s in &other.symbols {
            match symbols.iter().find(|(n, _)| *n == s.0) {
                Some((_, a)) if *a != s.1 => {
                    return Err(Error::Arity(format!("symbol {} used with two arities", s.0)))
                }
                Some(_) => {}
                None => symbols.push(s.clone()),
            }
        }
        let mut identities = self.identities.clone();
        identities.extend(other.identities.iter().cloned());
        IdentitySet::new(symbols, identities)
    }

    /// Renders one identity per line in the parseable syntax.
    pub fn to_text(&self) -> String {
        self.identities.iter().map(|id| format!("{id}\n")).collect()
    }
}

/// Checks that `ops` interprets every symbol with the right arity on one
/// common domain, returning that domain size.
pub(crate) fn check_interpretation(ops: &Interpretation, sigma: &IdentitySet) -> Result<usize> {
    let mut domain = None;
    for (name, arity) in &sigma.symbols {
        let op = ops
            .get(name)
            .ok_or_else(|| Error::Arity(format!("no operation for symbol {name}")))?;
        if op.arity() != *arity {
            return Err(Error::Arity(format!(
                "symbol {name} has arity {arity}, operation has arity {}",
                op.arity()
            )));
        }
        match domain {
            None => domain = Some(op.domain()),
            Some(d) if d != op.domain() => {
                return Err(Error::Domain("operations on different domains".into()))
            }
            Some(_) => {}
        }
    }
    Ok(domain.unwrap_or(0))
}

/// Whether `ops` satisfies every identity under every variable assignment.
pub fn satisfies(ops: &Interpretation, sigma: &IdentitySet) -> Result<bool> {
    let n = check_interpretation(ops, sigma)?;
    if n == 0 {
        return Ok(true);
    }
    for id in &sigma.identities {
        let vars = id.variables();
        let mut values = vec![0usize; vars.len()];
        loop {
            let value = |v: u32| values[vars.iter().position(|&w| w == v).expect("collected")];
            if id.lhs.eval(ops, &value) != id.rhs.eval(ops, &value) {
                return Ok(false);
            }
            if !advance(&mut values, n) {
                break;
            }
        }
    }
    Ok(true)
}

/// Whether projections on `{0,1}` satisfy `sigma`.
///
/// Over a set with at least two elements an identity holds for projections
/// exactly when both sides reduce to the same variable, so the search is
/// over projection indices with symbolic evaluation.
pub fn is_trivial(sigma: &IdentitySet) -> bool {
    let mut choice: BTreeMap<&str, usize> = BTreeMap::new();
    trivial_search(sigma, 0, &mut choice)
}

fn project(t: &Term, choice: &BTreeMap<&str, usize>) -> Option<u32> {
    match t {
        Term::Var(v) => Some(*v),
        Term::App { symbol, args } => project(&args[*choice.get(symbol.as_str())?], choice),
    }
}

fn trivial_search<'a>(
    sigma: &'a IdentitySet,
    next: usize,
    choice: &mut BTreeMap<&'a str, usize>,
) -> bool {
    // Reject as soon as an identity whose symbols are all chosen fails.
    for id in &sigma.identities {
        if let (Some(l), Some(r)) = (project(&id.lhs, choice), project(&id.rhs, choice)) {
            if l != r {
                return false;
            }
        }
    }
    let Some((name, arity)) = sigma.symbols.get(next) else {
        return true;
    };
    for i in 0..*arity {
        choice.insert(name, i);
        if trivial_search(sigma, next + 1, choice) {
            return true;
        }
    }
    choice.remove(name.as_str());
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(entries: Vec<(&str, OperationTable)>) -> Interpretation {
        entries.into_iter().map(|(n, o)| (n.to_string(), o)).collect()
    }

    #[test]
    fn classification() {
        let c = IdentitySet::maltsev().classify();
        assert!(c.linear && !c.height_one && !c.idempotent);
        let c = IdentitySet::siggers().classify();
        assert!(c.linear && c.height_one);
        let c = IdentitySet::parse("f(x,x) = x").unwrap().classify();
        assert!(c.linear && c.idempotent);
        assert!(IdentitySet::maltsev().with_idempotence().classify().idempotent);
        assert!(!IdentitySet::heap().classify().linear);
    }

    #[test]
    fn satisfaction() {
        let minority = OperationTable::from_fn(2, 3, |a| a[0] ^ a[1] ^ a[2]).unwrap();
        let first = OperationTable::projection(2, 3, 0).unwrap();
        let sigma = IdentitySet::maltsev();
        assert!(satisfies(&ops(vec![("m", minority.clone())]), &sigma).unwrap());
        assert!(!satisfies(&ops(vec![("m", first)]), &sigma).unwrap());
        assert!(satisfies(&ops(vec![("m", minority.clone())]), &IdentitySet::heap()).unwrap());
        assert!(satisfies(&Interpretation::new(), &IdentitySet::default()).unwrap());
        let binary = OperationTable::projection(2, 2, 0).unwrap();
        assert!(matches!(
            satisfies(&ops(vec![("m", binary)]), &sigma),
            Err(Error::Arity(_))
        ));
    }

    #[test]
    fn triviality() {
        assert!(!is_trivial(&IdentitySet::parse("f(x,y) = f(y,x)").unwrap()));
        assert!(!is_trivial(&IdentitySet::maltsev()));
        assert!(is_trivial(&IdentitySet::parse("f(x,y) = x").unwrap()));
        assert!(!is_trivial(&IdentitySet::siggers()));
        assert!(is_trivial(&IdentitySet::parse("f(x,y,z) = f(x,z,y)\ng(x,y) = f(x,y,y)").unwrap()));
        assert!(is_trivial(&IdentitySet::default()));
    }

    #[test]
    fn idempotent_augmentation_is_idempotent_on_unused_orientation() {
        let s = IdentitySet::parse("x = f(x,x)\ng(x,y) = g(y,x)").unwrap();
        assert!(s.has_idempotence_for("f"));
        assert!(!s.has_idempotence_for("g"));
        assert_eq!(s.with_idempotence().identities().len(), 3);
    }
}
