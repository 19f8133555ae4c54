//! Subgroups, cosets in powers `G^k`, and coset graphs.

use std::collections::{BTreeSet, HashSet};

use super::{dihedral_index, Family, GroupTable};
use crate::graph::Graph;
use crate::{Error, Limits, Result};

fn mask_to_elements(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect()
}

/// All subgroups under the default order bound.
pub fn all_subgroups(g: &GroupTable) -> Result<Vec<Vec<usize>>> {
    all_subgroups_with(g, &Limits::default())
}

/// All subgroups as sorted element lists, ordered by size then elements.
///
/// Starting from the trivial subgroup, each found subgroup `H` is joined
/// with one element from every double coset `HgH` outside `H`. Every
/// subgroup is reached by adding its generators one at a time, so the
/// enumeration is complete.
pub fn all_subgroups_with(g: &GroupTable, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let n = g.order();
    if n > limits.subgroup_order {
        return Err(Error::bound("subgroup enumeration", n as u128, limits.subgroup_order));
    }
    let trivial = g.generated(&[]);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(trivial.clone());
    let mut queue: Vec<(Vec<usize>, Vec<bool>)> = vec![(Vec::new(), trivial)];
    let mut i = 0;
    while i < queue.len() {
        let (gens, member) = queue[i].clone();
        i += 1;
        let elements = mask_to_elements(&member);
        let mut done = member.clone();
        for x in 0..n {
            if done[x] {
                continue;
            }
            for &a in &elements {
                let ax = g.mul(a, x);
                for &b in &elements {
                    done[g.mul(ax, b)] = true;
                }
            }
            let mut next_gens = gens.clone();
            next_gens.push(x);
            let joined = g.generated(&next_gens);
            if seen.insert(joined.clone()) {
                queue.push((next_gens, joined));
            }
        }
    }
    let mut out: Vec<Vec<usize>> = queue.into_iter().map(|(_, m)| mask_to_elements(&m)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

pub fn subgroups_of_order(g: &GroupTable, m: usize) -> Result<Vec<Vec<usize>>> {
    subgroups_of_order_with(g, m, &Limits::default())
}

pub fn subgroups_of_order_with(g: &GroupTable, m: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    if m == 0 || g.order() % m != 0 {
        return Ok(Vec::new());
    }
    Ok(all_subgroups_with(g, limits)?
        .into_iter()
        .filter(|s| s.len() == m)
        .collect())
}

/// Whether `r ⊆ G^k` is a coset of a subgroup of `G^k` (componentwise
/// operations).
///
/// For any `y ∈ r` this holds exactly when `y⁻¹r` is closed under products
/// and inverses.
pub fn is_coset(r: &[Vec<usize>], g: &GroupTable, k: usize) -> Result<bool> {
    if r.is_empty() {
        return Err(Error::Precondition("is_coset needs a nonempty set".into()));
    }
    let n = g.order();
    for t in r {
        if t.len() != k {
            return Err(Error::Arity(format!("tuple {t:?} does not have length {k}")));
        }
        if let Some(&x) = t.iter().find(|&&x| x >= n) {
            return Err(Error::Domain(format!("{x} is not an element of a group of order {n}")));
        }
    }
    let distinct: HashSet<&[usize]> = r.iter().map(Vec::as_slice).collect();
    let size = distinct.len() as u128;
    let total = (n as u128).checked_pow(k as u32);
    if total.is_some_and(|t| t % size != 0) {
        return Ok(false);
    }
    let y = &r[0];
    let shifted: HashSet<Vec<usize>> = distinct
        .iter()
        .map(|t| t.iter().zip(y).map(|(&a, &b)| g.mul(g.inv(b), a)).collect())
        .collect();
    let mut product = vec![0; k];
    for a in &shifted {
        let inverse: Vec<usize> = a.iter().map(|&x| g.inv(x)).collect();
        if !shifted.contains(&inverse) {
            return Ok(false);
        }
        for b in &shifted {
            for i in 0..k {
                product[i] = g.mul(a[i], b[i]);
            }
            if !shifted.contains(&product) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Graph on the elements whose edges are the 2-element cosets of subgroups
/// of order two, i.e. the pairs `{x, x·t}` for involutions `t`.
pub fn coset_graph(g: &GroupTable) -> Graph {
    let n = g.order();
    let mut graph = Graph::empty(n);
    for t in (0..n).filter(|&t| t != g.identity() && g.mul(t, t) == g.identity()) {
        for x in 0..n {
            graph.add_edge(x, g.mul(x, t)).expect("distinct elements");
        }
    }
    graph
}

/// The cosets of order-two subgroups of `dihedral(4m)`, written directly as
/// `{d^k, s d^l}` for all `k, l` together with `{a, a d^m}` for all `a`.
pub fn cosets_of_order2(g: &GroupTable) -> Result<BTreeSet<(usize, usize)>> {
    let order = match g.family() {
        Some(Family::Dihedral { order }) if order % 4 == 0 => order,
        _ => {
            return Err(Error::Precondition(
                "expects a table built by dihedral(4m)".into(),
            ))
        }
    };
    let m = order / 4;
    let pair = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut out = BTreeSet::new();
    for k in 0..2 * m {
        for l in 0..2 * m {
            out.insert(pair(dihedral_index(order, 0, k), dihedral_index(order, 1, l)));
        }
    }
    let dm = dihedral_index(order, 0, m);
    for a in 0..order {
        out.insert(pair(a, g.mul(a, dm)));
    }
    Ok(out)
}
