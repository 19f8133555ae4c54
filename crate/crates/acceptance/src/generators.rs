//! Instance generators and brute-force oracles shared by the checks.

use std::collections::{BTreeSet, HashSet};

use polymeta::graph::Graph;
use polymeta::groups::{enumerate_groups_on_set, heap_from_group, GroupTable};
use polymeta::structures::{Relation, Structure};
use polymeta::OperationTable;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Bit `pair_index(u, v)` of a graph code stands for the edge `{u, v}`.
fn pair_index(u: usize, v: usize) -> usize {
    let (a, b) = (u.min(v), u.max(v));
    b * (b - 1) / 2 + a
}

fn code_of(n: usize, adj: &[Vec<bool>], perm: &[usize]) -> u64 {
    let mut code = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            if adj[u][v] {
                code |= 1 << pair_index(perm[u], perm[v]);
            }
        }
    }
    code
}

/// Least code over the relabellings that list vertices by decreasing
/// degree; degree classes are permuted internally in every way.
fn canonical_code(g: &Graph) -> u64 {
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let degrees = g.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(degrees[v]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if degrees[c[0]] == degrees[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = vec![0usize; n];
    let mut current: Vec<Vec<usize>> = classes.clone();
    loop {
        let mut slot = 0;
        for class in &current {
            for &v in class {
                perm[v] = slot;
                slot += 1;
            }
        }
        best = best.min(code_of(n, &adj, &perm));
        // Advance the classes like an odometer of permutations.
        let mut i = 0;
        loop {
            if i == current.len() {
                return best;
            }
            if next_permutation(&mut current[i]) {
                break;
            }
            current[i].sort();
            i += 1;
        }
    }
}

/// One graph per isomorphism class on exactly `n` vertices, built by adding
/// a vertex with every neighbourhood to each class on `n - 1` vertices.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<Graph> {
    if n == 0 {
        return vec![Graph::empty(0)];
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for smaller in graphs_up_to_isomorphism(n - 1) {
        for mask in 0..1u32 << (n - 1) {
            let mut g = smaller.disjoint_union(&Graph::empty(1));
            for u in (0..n - 1).filter(|u| mask >> u & 1 == 1) {
                g.add_edge(u, n - 1).expect("valid edge");
            }
            if seen.insert(canonical_code(&g)) {
                out.push(g);
            }
        }
    }
    out
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}

pub fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All tuples of `G^k` in mixed-radix order.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(|c| (0..k).map(|i| c / n.pow(i as u32) % n).collect()).collect()
}

/// The subgroup of `G^k` generated by `gens`, by closing under products.
pub fn generated_subgroup(g: &GroupTable, k: usize, gens: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let mut subgroup = BTreeSet::new();
    let mut frontier = vec![vec![g.identity(); k]];
    while let Some(x) = frontier.pop() {
        if subgroup.insert(x.clone()) {
            for s in gens {
                frontier.push((0..k).map(|i| g.mul(x[i], s[i])).collect());
            }
        }
    }
    subgroup
}

/// The left coset `shift · H` in `G^k`.
pub fn left_coset(g: &GroupTable, shift: &[usize], h: &BTreeSet<Vec<usize>>) -> Vec<Vec<usize>> {
    h.iter()
        .map(|t| t.iter().zip(shift).map(|(&x, &s)| g.mul(s, x)).collect())
        .collect()
}

/// A coset of a subgroup with up to two random generators.
pub fn random_coset(rng: &mut ChaCha8Rng, g: &GroupTable, k: usize) -> Vec<Vec<usize>> {
    let n = g.order();
    let gens: Vec<Vec<usize>> = (0..rng.gen_range(0..=2))
        .map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let shift: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    let mut coset = left_coset(g, &shift, &generated_subgroup(g, k, &gens));
    coset.sort();
    coset
}

/// A structure on `Z_d` whose relations are random cosets.
pub fn abelian_coset_structure(rng: &mut ChaCha8Rng, d: usize, relations: usize, max_arity: usize) -> Structure {
    let g = polymeta::groups::cyclic(d).expect("d ≥ 1");
    let rels = (0..relations)
        .map(|i| {
            let k = rng.gen_range(1..=max_arity);
            Relation::new(format!("R{i}"), k, random_coset(rng, &g, k))
        })
        .collect();
    Structure::new(d, rels)
}

pub fn random_relation(rng: &mut ChaCha8Rng, n: usize, arity: usize, density: f64) -> Vec<Vec<usize>> {
    all_tuples(n, arity).into_iter().filter(|_| rng.gen_bool(density)).collect()
}

/// A random instance over the signature of `template`.
pub fn random_instance(rng: &mut ChaCha8Rng, template: &Structure, size: usize) -> Structure {
    let relations = template
        .relations()
        .iter()
        .map(|r| {
            let tuples: BTreeSet<Vec<usize>> = (0..rng.gen_range(0..=size + 1))
                .map(|_| (0..r.arity()).map(|_| rng.gen_range(0..size)).collect())
                .collect();
            Relation::new(r.name(), r.arity(), tuples.into_iter().collect())
        })
        .collect();
    Structure::new(size, relations)
}

/// Whether any map `a → b` preserves every relation, by enumeration.
pub fn brute_hom_exists(a: &Structure, b: &Structure) -> bool {
    let members: Vec<HashSet<&[usize]>> =
        b.relations().iter().map(|r| r.tuples().iter().map(Vec::as_slice).collect()).collect();
    let mut map = vec![0usize; a.size()];
    let mut image = Vec::new();
    loop {
        let ok = a.relations().iter().zip(&members).all(|(r, m)| {
            r.tuples().iter().all(|t| {
                image.clear();
                image.extend(t.iter().map(|&x| map[x]));
                m.contains(image.as_slice())
            })
        });
        if ok {
            return true;
        }
        let Some(i) = (0..map.len()).find(|&i| map[i] + 1 < b.size()) else {
            return false;
        };
        map[i] += 1;
        map[..i].fill(0);
    }
}

/// All ternary operations on `{0,1}`, by their 8-bit value tables.
pub fn ternary_boolean_operations() -> Vec<OperationTable> {
    (0..256u32)
        .map(|bits| OperationTable::new(2, 3, (0..8).map(|c| (bits >> c & 1) as usize).collect()).expect("valid"))
        .collect()
}

/// Checks `m(x,y,y) = x = m(y,y,x)` on every pair.
pub fn is_maltsev_by_definition(m: &OperationTable) -> bool {
    let n = m.domain();
    (0..n).all(|x| (0..n).all(|y| m.apply3(x, y, y) == x && m.apply3(y, y, x) == x))
}

/// Whether `op` maps every choice of tuples from each relation, applied
/// coordinatewise, back into the relation.
pub fn preserves(op: &OperationTable, b: &Structure) -> bool {
    let k = op.arity();
    b.relations().iter().all(|r| {
        let members: HashSet<&[usize]> = r.tuples().iter().map(Vec::as_slice).collect();
        let tuples = r.tuples();
        if tuples.is_empty() {
            return true;
        }
        let mut choice = vec![0usize; k];
        let mut args = vec![0usize; k];
        loop {
            let image: Vec<usize> = (0..r.arity())
                .map(|pos| {
                    for (a, &c) in args.iter_mut().zip(&choice) {
                        *a = tuples[c][pos];
                    }
                    op.apply(&args)
                })
                .collect();
            if !members.contains(image.as_slice()) {
                return false;
            }
            let Some(i) = (0..k).find(|&i| choice[i] + 1 < tuples.len()) else {
                return true;
            };
            choice[i] += 1;
            choice[..i].fill(0);
        }
    })
}

/// Every two-colouring, accepting when each vertex has at most one
/// neighbour of its own colour.
pub fn brute_decomposable(g: &Graph) -> bool {
    let n = g.vertex_count();
    let adj = g.adjacency();
    (0..1u64 << n).any(|mask| {
        (0..n).all(|v| adj[v].iter().filter(|&&u| (mask >> u & 1) == (mask >> v & 1)).count() <= 1)
    })
}

/// Whether some group on the domain, under some labelling, has a heap that
/// preserves every relation.
pub fn brute_coset_polymorphism(b: &Structure) -> bool {
    let n = b.size();
    let groups = enumerate_groups_on_set(n).expect("small order");
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for g in &groups {
            let heap = heap_from_group(&g.relabel(&perm).expect("permutation"));
            if heap.is_polymorphism_of(b).expect("same domain") {
                return true;
            }
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| graphs_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let h = Graph::new(5, [(4, 3), (3, 2), (2, 1), (3, 0)]).unwrap();
        assert_eq!(canonical_code(&g), canonical_code(&h));
        assert_ne!(canonical_code(&g), canonical_code(&Graph::cycle(5)));
    }
}
