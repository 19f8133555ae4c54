use std::collections::HashSet;

use crate::graph::{find_embedding, Graph};
use crate::groups::{
    candidates_order_4p, coset_graph, cyclic, enumerate_groups_with, heap_from_group, is_coset, is_prime,
    GroupTable,
};
use crate::identities::Interpretation;
use crate::structures::{checked_pow, Structure};
use crate::{Error, Limits, OperationTable, Result};

use super::{is_heap, MetaVerdict};

/// Which procedure settled a coset-polymorphism question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPath {
    /// Every relation is empty or full.
    Trivial,
    /// Some relation's size does not divide `|B|^k`.
    Lagrange,
    /// Unary relations of size at most two on `4p` elements, decided by
    /// embedding the relation graph into coset graphs.
    Structural,
    /// Exhaustive search over groups and relabellings.
    General,
}

/// Outcome of [`has_coset_polymorphism`]; on success the heap is that of
/// `group`, both on the domain of the input structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetVerdict {
    pub group: Option<GroupTable>,
    pub heap: Option<OperationTable>,
    pub path: SearchPath,
}

impl CosetVerdict {
    pub fn is_yes(&self) -> bool {
        self.heap.is_some()
    }

    /// The verdict with the heap as witness for the symbol `m`.
    pub fn to_meta(&self) -> MetaVerdict {
        match &self.heap {
            Some(h) => {
                let mut w = Interpretation::new();
                w.insert("m".into(), h.clone());
                MetaVerdict::yes(w)
            }
            None => MetaVerdict::no(),
        }
    }

    fn no(path: SearchPath) -> Self {
        CosetVerdict {
            group: None,
            heap: None,
            path,
        }
    }
}

/// Decides whether `b` has a coset-generating (heap) polymorphism, i.e.
/// whether some group structure on its domain makes every relation a coset.
pub fn has_coset_polymorphism(b: &Structure) -> Result<CosetVerdict> {
    has_coset_polymorphism_with(b, &Limits::default())
}

pub fn has_coset_polymorphism_with(b: &Structure, limits: &Limits) -> Result<CosetVerdict> {
    let n = b.size();
    let relations: Vec<_> = b.relations().iter().filter(|r| !r.is_empty()).collect();
    let mut all_full = true;
    for r in &relations {
        let total = checked_pow(n, r.arity()).map(|t| t as u128);
        if total.is_some_and(|t| t % r.len() as u128 != 0) {
            return Ok(CosetVerdict::no(SearchPath::Lagrange));
        }
        all_full &= total == Some(r.len() as u128);
    }
    if all_full {
        return witness(b, cyclic(n)?, &(0..n).collect::<Vec<_>>(), SearchPath::Trivial);
    }

    let structural = n % 4 == 0
        && n / 4 >= 5
        && is_prime(n / 4)
        && relations.iter().all(|r| r.arity() == 1 && r.len() <= 2);
    if structural {
        let mut pattern = Graph::empty(n);
        for r in &relations {
            if let [u, v] = r.tuples() {
                pattern.add_edge(u[0], v[0])?;
            }
        }
        for (_, g) in candidates_order_4p(n / 4)? {
            if let Some(phi) = find_embedding(&pattern, &coset_graph(&g), true) {
                return witness(b, g, &phi, SearchPath::Structural);
            }
        }
        return Ok(CosetVerdict::no(SearchPath::Structural));
    }

    if n > limits.coset_search_order {
        return Err(Error::bound("coset polymorphism search", n as u128, limits.coset_search_order));
    }
    let groups = enumerate_groups_with(n, &Limits {
        group_enumeration_order: limits.group_enumeration_order.max(n),
        ..*limits
    })?;
    for g in groups {
        let mut search = Relabelling::new(b, &g);
        if let Some(phi) = search.run() {
            return witness(b, g, &phi, SearchPath::General);
        }
    }
    Ok(CosetVerdict::no(SearchPath::General))
}

/// Transports `g` along `phi: B → G` and validates the resulting heap.
fn witness(b: &Structure, g: GroupTable, phi: &[usize], path: SearchPath) -> Result<CosetVerdict> {
    let mut back = vec![0; phi.len()];
    for (x, &gx) in phi.iter().enumerate() {
        back[gx] = x;
    }
    let group = g.relabel(&back)?;
    let heap = heap_from_group(&group);
    if !is_heap(&heap)? || !heap.is_polymorphism_of(b)? {
        return Err(Error::InvalidMap("coset search produced an invalid heap".into()));
    }
    Ok(CosetVerdict {
        group: Some(group),
        heap: Some(heap),
        path,
    })
}

/// Backtracking over bijections `φ: B → G` with `φ(0) = e`.
///
/// For each relation `R`, pick its first completed tuple `y`; the subgroup
/// generated by `y⁻¹t` over completed tuples `t` must stay inside the final
/// subgroup `y⁻¹φ(R)`, so its order divides `|R|` and every element of
/// `y·⟨…⟩` whose coordinates are all assigned must come from `R`.
struct Relabelling<'a> {
    g: &'a GroupTable,
    n: usize,
    relations: Vec<RelationState>,
    order: Vec<usize>,
    phi: Vec<usize>,
    psi: Vec<usize>,
}

struct RelationState {
    arity: usize,
    tuples: Vec<Vec<usize>>,
    members: HashSet<Vec<usize>>,
    /// Whether the subgroup closure fits in memory; otherwise only the final
    /// check applies.
    prunable: bool,
}

const UNSET: usize = usize::MAX;

impl<'a> Relabelling<'a> {
    fn new(b: &Structure, g: &'a GroupTable) -> Self {
        let n = b.size();
        let mut occurrences = vec![0usize; n];
        let relations = b
            .relations()
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                for t in r.tuples() {
                    for &x in t {
                        occurrences[x] += 1;
                    }
                }
                RelationState {
                    arity: r.arity(),
                    tuples: r.tuples().to_vec(),
                    members: r.tuples().iter().cloned().collect(),
                    prunable: checked_pow(n, r.arity()).is_some_and(|s| s <= 1 << 20),
                }
            })
            .collect();
        let mut order: Vec<usize> = (1..n).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(occurrences[x]));
        let mut phi = vec![UNSET; n];
        let mut psi = vec![UNSET; n];
        phi[0] = g.identity();
        psi[g.identity()] = 0;
        Relabelling {
            g,
            n,
            relations,
            order,
            phi,
            psi,
        }
    }

    fn run(&mut self) -> Option<Vec<usize>> {
        if !self.consistent() {
            return None;
        }
        self.extend(0).then(|| self.phi.clone())
    }

    fn extend(&mut self, depth: usize) -> bool {
        let Some(&x) = self.order.get(depth) else {
            return self.complete();
        };
        for gx in 0..self.n {
            if self.psi[gx] != UNSET {
                continue;
            }
            self.phi[x] = gx;
            self.psi[gx] = x;
            if self.consistent() && self.extend(depth + 1) {
                return true;
            }
            self.phi[x] = UNSET;
            self.psi[gx] = UNSET;
        }
        false
    }

    fn complete(&self) -> bool {
        self.relations.iter().all(|r| {
            let image: Vec<Vec<usize>> = r
                .tuples
                .iter()
                .map(|t| t.iter().map(|&x| self.phi[x]).collect())
                .collect();
            is_coset(&image, self.g, r.arity).unwrap_or(false)
        })
    }

    fn consistent(&self) -> bool {
        self.relations.iter().filter(|r| r.prunable).all(|r| self.relation_consistent(r))
    }

    fn relation_consistent(&self, r: &RelationState) -> bool {
        let g = self.g;
        let k = r.arity;
        let images: Vec<Vec<usize>> = r
            .tuples
            .iter()
            .filter(|t| t.iter().all(|&x| self.phi[x] != UNSET))
            .map(|t| t.iter().map(|&x| self.phi[x]).collect())
            .collect();
        let Some(y) = images.first() else {
            return true;
        };
        let y_inv: Vec<usize> = y.iter().map(|&a| g.inv(a)).collect();
        let gens: Vec<Vec<usize>> = images[1..]
            .iter()
            .map(|t| (0..k).map(|i| g.mul(y_inv[i], t[i])).collect())
            .collect();
        let mut subgroup: HashSet<Vec<usize>> = HashSet::new();
        let mut frontier = vec![vec![g.identity(); k]];
        subgroup.insert(frontier[0].clone());
        while let Some(h) = frontier.pop() {
            for s in &gens {
                let p: Vec<usize> = (0..k).map(|i| g.mul(h[i], s[i])).collect();
                if subgroup.insert(p.clone()) {
                    if subgroup.len() > r.tuples.len() {
                        return false;
                    }
                    frontier.push(p);
                }
            }
        }
        if r.tuples.len() % subgroup.len() != 0 {
            return false;
        }
        subgroup.iter().all(|h| {
            let preimage: Option<Vec<usize>> = (0..k)
                .map(|i| {
                    let x = self.psi[g.mul(y[i], h[i])];
                    (x != UNSET).then_some(x)
                })
                .collect();
            preimage.is_none_or(|t| r.members.contains(&t))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{dihedral, direct_product};
    use crate::structures::Relation;

    #[test]
    fn full_relations_use_cyclic_group() {
        let b = Structure::new(
            15,
            vec![Relation::new("U", 1, (0..15).map(|x| vec![x]).collect())],
        );
        let v = has_coset_polymorphism(&b).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.path, SearchPath::Trivial);
    }

    #[test]
    fn lagrange_rejects() {
        let b = Structure::new(5, vec![Relation::new("U", 1, vec![vec![0], vec![1]])]);
        let v = has_coset_polymorphism(&b).unwrap();
        assert_eq!(v, CosetVerdict::no(SearchPath::Lagrange));
    }

    #[test]
    fn planted_klein_cosets() {
        let k4 = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap());
        // A non-cyclic structure: three distinct order-2 subgroups plus a
        // coset of one of them, relabelled by a fixed permutation.
        let perm = [2, 0, 3, 1];
        let rel = |pairs: &[[usize; 2]]| -> Vec<Vec<usize>> {
            pairs.iter().map(|p| vec![perm[p[0]], perm[p[1]]]).collect()
        };
        let mut relations = Vec::new();
        for (i, t) in (1..4).enumerate() {
            relations.push(Relation::new(
                format!("S{i}"),
                1,
                vec![vec![perm[0]], vec![perm[t]]],
            ));
        }
        relations.push(Relation::new(
            "E",
            2,
            rel(&[[0, 1], [1, 0], [2, 3], [3, 2]]),
        ));
        let b = Structure::new(4, relations);
        let v = has_coset_polymorphism(&b).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.path, SearchPath::General);
        assert!(crate::groups::is_isomorphic(v.group.as_ref().unwrap(), &k4));
    }

    #[test]
    fn three_cycle_is_affine_over_klein_group() {
        // Every permutation of four points is affine over C_2 x C_2, but a
        // 3-cycle is not affine over C_4.
        let b = Structure::new(
            4,
            vec![Relation::new("R", 2, vec![vec![0, 1], vec![1, 2], vec![2, 0], vec![3, 3]])],
        );
        let v = has_coset_polymorphism(&b).unwrap();
        let g = v.group.unwrap();
        assert!((0..4).all(|x| g.element_order(x) <= 2));
        // A triangle of 2-element cosets needs three involutions whose
        // pairwise products are involutions; no group of order 6 has them.
        let triangle = Structure::new(
            6,
            [[0, 1], [0, 2], [1, 2]]
                .iter()
                .enumerate()
                .map(|(i, p)| Relation::new(format!("U{i}"), 1, vec![vec![p[0]], vec![p[1]]]))
                .collect(),
        );
        let v = has_coset_polymorphism(&triangle).unwrap();
        assert!(!v.is_yes());
        assert_eq!(v.path, SearchPath::General);
    }

    #[test]
    fn structural_path_on_dihedral_twenty() {
        // Edges {x, x·t} of a dihedral coset graph, with isolated leftovers.
        let g = dihedral(20).unwrap();
        let cg = coset_graph(&g);
        let relations = cg
            .edges()
            .take(12)
            .enumerate()
            .map(|(i, (u, v))| Relation::new(format!("E{i}"), 1, vec![vec![u], vec![v]]))
            .collect();
        let b = Structure::new(20, relations);
        let v = has_coset_polymorphism(&b).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.path, SearchPath::Structural);
        let k5 = Graph::complete(5);
        let relations = k5
            .edges()
            .enumerate()
            .map(|(i, (u, v))| Relation::new(format!("E{i}"), 1, vec![vec![u], vec![v]]))
            .collect();
        let b = Structure::new(20, relations);
        assert!(!has_coset_polymorphism(&b).unwrap().is_yes());
    }

    #[test]
    fn bound_is_enforced() {
        let b = Structure::new(14, vec![Relation::new("U", 1, vec![vec![0], vec![1]])]);
        assert!(matches!(has_coset_polymorphism(&b), Err(Error::SizeBound { .. })));
    }
}
