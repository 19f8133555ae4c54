use std::collections::BTreeSet;

use crate::identities::{satisfies, IdentitySet, Interpretation, Term};
use crate::structures::{
    add_singleton_relations, checked_pow, hom_search, singleton_name, Relation, Structure, EQUALITY,
};
use crate::{Error, Limits, OperationTable, Result};

use super::MetaVerdict;

/// An indicator instance `I` with its template `C`.
///
/// `I` contains one copy of `B^k` per `k`-ary symbol, laid out in the order
/// the symbols are declared, plus one extra element when some identity
/// equates two distinct variables. Homomorphisms `I → C` restricted to the
/// copies are exactly the interpretations of `Σ` by polymorphisms of `B`.
#[derive(Debug, Clone)]
pub struct Indicator {
    pub instance: Structure,
    pub template: Structure,
    /// `(symbol, arity, offset of its copy)`.
    pub blocks: Vec<(String, usize, usize)>,
}

impl Indicator {
    /// Reads the operations off a map `I → C`.
    pub fn extract(&self, map: &[usize]) -> Interpretation {
        let n = self.template.size();
        self.blocks
            .iter()
            .map(|(name, arity, offset)| {
                let size = n.pow(*arity as u32);
                let table = OperationTable::new(n, *arity, map[*offset..offset + size].to_vec())
                    .expect("map values lie in the template");
                (name.clone(), table)
            })
            .collect()
    }

    /// Inverse of [`Indicator::extract`]; the extra element, if any, maps to 0.
    pub fn embed(&self, ops: &Interpretation) -> Vec<usize> {
        let mut map = vec![0; self.instance.size()];
        for (name, _, offset) in &self.blocks {
            let values = ops[name].values();
            map[*offset..offset + values.len()].copy_from_slice(values);
        }
        map
    }
}

pub fn indicator_structure(b: &Structure, sigma: &IdentitySet) -> Result<Indicator> {
    indicator_structure_with(b, sigma, &Limits::default())
}

pub fn indicator_structure_with(b: &Structure, sigma: &IdentitySet, limits: &Limits) -> Result<Indicator> {
    if !sigma.is_linear() {
        return Err(Error::NonLinear);
    }
    let n = b.size();
    let mut blocks = Vec::new();
    let mut total: u128 = 0;
    for (name, arity) in sigma.symbols() {
        let size = checked_pow(n, *arity)
            .filter(|&s| s <= limits.indicator_elements)
            .ok_or_else(|| Error::bound("indicator structure", u128::MAX, limits.indicator_elements))?;
        blocks.push((name.clone(), *arity, total as usize));
        total += size as u128;
    }
    if total > limits.indicator_elements as u128 {
        return Err(Error::bound("indicator structure", total, limits.indicator_elements));
    }
    let mut size = total as usize;

    let offset_of = |symbol: &str| -> usize {
        blocks.iter().find(|(s, _, _)| s == symbol).expect("declared symbol").2
    };
    // Element of I designated by a linear side under an assignment, or the
    // assigned value itself for a bare variable.
    enum Side {
        Element(usize),
        Value(usize),
    }
    let designate = |t: &Term, value: &dyn Fn(u32) -> usize| -> Side {
        match t {
            Term::Var(v) => Side::Value(value(*v)),
            Term::App { symbol, args } => {
                let code = args.iter().rev().fold(0, |acc, a| match a {
                    Term::Var(v) => acc * n + value(*v),
                    Term::App { .. } => unreachable!("linear identity"),
                });
                Side::Element(offset_of(symbol) + code)
            }
        }
    };

    let mut equal: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut fixed: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut needs_contradiction = false;
    for id in sigma.identities() {
        let vars = id.variables();
        let count = checked_pow(n, vars.len())
            .ok_or_else(|| Error::bound("identity assignments", u128::MAX, usize::MAX))?;
        let mut values = vec![0usize; vars.len()];
        for code in 0..count {
            crate::operation::decode_into(code, n, &mut values);
            let value = |v: u32| values[vars.iter().position(|&w| w == v).expect("collected")];
            match (designate(&id.lhs, &value), designate(&id.rhs, &value)) {
                (Side::Element(x), Side::Element(y)) => {
                    if x != y {
                        equal.insert((x.min(y), x.max(y)));
                    }
                }
                (Side::Element(x), Side::Value(v)) | (Side::Value(v), Side::Element(x)) => {
                    fixed[v].insert(x);
                }
                (Side::Value(u), Side::Value(v)) => needs_contradiction |= u != v,
            }
        }
    }
    if needs_contradiction {
        let extra = size;
        size += 1;
        fixed[0].insert(extra);
        fixed[1].insert(extra);
    }

    let mut relations = Vec::with_capacity(b.relations().len() + n + 1);
    for rel in b.relations() {
        let mut tuples = Vec::new();
        for (_, arity, offset) in &blocks {
            power_tuples(rel, n, *arity, *offset, &mut tuples);
        }
        relations.push(Relation::new(rel.name(), rel.arity(), tuples));
    }
    relations.push(Relation::new(
        EQUALITY,
        2,
        equal.into_iter().map(|(x, y)| vec![x, y]).collect(),
    ));
    for (v, elements) in fixed.into_iter().enumerate() {
        relations.push(Relation::new(
            singleton_name(v),
            1,
            elements.into_iter().map(|x| vec![x]).collect(),
        ));
    }
    Ok(Indicator {
        instance: Structure::new(size, relations),
        template: add_singleton_relations(b),
        blocks,
    })
}

/// Appends the tuples of `rel` in `B^k`, shifted by `offset`.
fn power_tuples(rel: &Relation, n: usize, k: usize, offset: usize, out: &mut Vec<Vec<usize>>) {
    let tuples = rel.tuples();
    if tuples.is_empty() {
        return;
    }
    let mut choice = vec![0usize; k];
    loop {
        let tuple = (0..rel.arity())
            .map(|pos| offset + choice.iter().rev().fold(0, |acc, &c| acc * n + tuples[c][pos]))
            .collect();
        out.push(tuple);
        if !crate::operation::advance(&mut choice, tuples.len()) {
            break;
        }
    }
}

/// Decides whether polymorphisms of `b` satisfy `sigma`, with a witness.
pub fn has_polymorphism(b: &Structure, sigma: &IdentitySet) -> Result<MetaVerdict> {
    has_polymorphism_with(b, sigma, &Limits::default())
}

pub fn has_polymorphism_with(b: &Structure, sigma: &IdentitySet, limits: &Limits) -> Result<MetaVerdict> {
    let ind = indicator_structure_with(b, sigma, limits)?;
    let Some(h) = hom_search(&ind.instance, &ind.template, None)? else {
        return Ok(MetaVerdict::no());
    };
    let witness = ind.extract(&h.map);
    if !satisfies(&witness, sigma)? || !all_polymorphisms(&witness, b)? {
        return Err(Error::InvalidMap("indicator homomorphism gave an invalid witness".into()));
    }
    Ok(MetaVerdict::yes(witness))
}

pub(crate) fn all_polymorphisms(ops: &Interpretation, b: &Structure) -> Result<bool> {
    for op in ops.values() {
        if !op.is_polymorphism_of(b)? {
            return Ok(false);
        }
    }
    Ok(true)
}
