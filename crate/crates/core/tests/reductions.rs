use std::time::Instant;

use polymeta::graph::Graph;
use polymeta::groups::{dihedral, dihedral_index, enumerate_groups_on_set, heap_from_group, is_coset};
use polymeta::meta::{has_coset_polymorphism, is_heap};
use polymeta::reductions::{
    add_fresh_element, decompose_matching_bipartite, embed_decomposition, gadget, graph_to_structure,
    nae3sat_to_graph, nae_brute, NaeInstance,
};
use polymeta::structures::{Relation, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Assignment by recursion on variables, checking clauses once all their
/// variables are set.
fn nae_recursive(n: usize, clauses: &[[usize; 3]], sigma: &mut Vec<bool>) -> bool {
    if sigma.len() == n {
        return clauses.iter().all(|c| {
            let ones = c.iter().filter(|&&x| sigma[x]).count();
            ones > 0 && ones < 3
        });
    }
    for b in [false, true] {
        sigma.push(b);
        if nae_recursive(n, clauses, sigma) {
            return true;
        }
        sigma.pop();
    }
    false
}

/// Every two-colouring, accepting when each vertex has at most one
/// neighbour of its own colour.
fn brute_decomposable(g: &Graph) -> bool {
    let n = g.vertex_count();
    let adj = g.adjacency();
    (0..1u32 << n).any(|mask| {
        (0..n).all(|v| adj[v].iter().filter(|&&u| (mask >> u & 1) == (mask >> v & 1)).count() <= 1)
    })
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn all_instances(n: usize, m: usize) -> Vec<NaeInstance> {
    let triples: Vec<[usize; 3]> = (0..n * n * n).map(|c| [c % n, c / n % n, c / (n * n)]).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; m];
    if m > 0 && triples.is_empty() {
        return out;
    }
    loop {
        out.push(NaeInstance::new(n, choice.iter().map(|&i| triples[i]).collect()).unwrap());
        let Some(i) = (0..m).find(|&i| choice[i] + 1 < triples.len()) else {
            return out;
        };
        choice[i] += 1;
        choice[..i].fill(0);
    }
}

#[test]
fn nae_brute_force_matches_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..300 {
        let n = rng.gen_range(1..=4);
        let clauses: Vec<[usize; 3]> = (0..rng.gen_range(0..=6))
            .map(|_| [0; 3].map(|_| rng.gen_range(0..n)))
            .collect();
        let phi = NaeInstance::new(n, clauses.clone()).unwrap();
        assert_eq!(nae_brute(&phi).unwrap(), nae_recursive(n, &clauses, &mut Vec::new()));
    }
}

#[test]
fn nae_reduction_preserves_answers() {
    let start = Instant::now();
    let mut count = 0;
    for n in 1..=3 {
        for m in 0..=2 {
            for phi in all_instances(n, m) {
                let g = nae3sat_to_graph(&phi);
                let dec = decompose_matching_bipartite(&g).unwrap();
                assert_eq!(nae_brute(&phi).unwrap(), dec.is_some(), "{phi}");
                count += 1;
            }
        }
    }
    assert!(count > 700);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let clauses = (0..rng.gen_range(1..=4)).map(|_| [0; 3].map(|_| rng.gen_range(0..n))).collect();
        let phi = NaeInstance::new(n, clauses).unwrap();
        let dec = decompose_matching_bipartite(&nae3sat_to_graph(&phi)).unwrap();
        assert_eq!(nae_brute(&phi).unwrap(), dec.is_some(), "{phi}");
    }
    assert!(start.elapsed().as_secs() < 120);
}

#[test]
fn graph_edge_counts_follow_the_construction() {
    let phi = NaeInstance::new(4, vec![[0, 1, 2], [1, 2, 3], [0, 0, 3]]).unwrap();
    let repeated = phi.with_repeated_clauses();
    let m = repeated.clauses().len();
    let g = nae3sat_to_graph(&phi);
    assert_eq!(g.vertex_count(), 3 * m + 2 * 4);
    // Triangles, both copies per literal, and one edge per variable; a
    // repeated literal inside a clause still gives distinct vertices.
    assert_eq!(g.edge_count(), 3 * m + 6 * m + 4);
}

#[test]
fn decomposition_matches_colouring_oracle() {
    for n in 0..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0..1u32 << pairs.len() {
            let g = Graph::new(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e))
                .unwrap();
            let dec = decompose_matching_bipartite(&g).unwrap();
            assert_eq!(dec.is_some(), brute_decomposable(&g), "{g:?}");
            if let Some(dec) = dec {
                dec.validate(&g).unwrap();
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..300 {
        let n = rng.gen_range(6..=14);
        let density = rng.gen_range(0.15..0.6);
        let g = random_graph(&mut rng, n, density);
        assert_eq!(decompose_matching_bipartite(&g).unwrap().is_some(), brute_decomposable(&g), "{g:?}");
    }
}

#[test]
fn k5_has_no_decomposition_over_any_matching() {
    let k5 = Graph::complete(5);
    let edges: Vec<(usize, usize)> = k5.edges().collect();
    for mask in 0..1u32 << edges.len() {
        let matching: Vec<(usize, usize)> =
            edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let mut covered = [0; 5];
        for &(u, v) in &matching {
            covered[u] += 1;
            covered[v] += 1;
        }
        if covered.iter().any(|&c| c > 1) {
            continue;
        }
        let rest = Graph::new(5, edges.iter().copied().filter(|e| !matching.contains(e))).unwrap();
        assert!(!rest.is_bipartite());
    }
    assert!(decompose_matching_bipartite(&k5).unwrap().is_none());
}

/// Pulls the `D_{4p}` heap back along a bijection extending `image` and
/// checks it against every relation.
fn pulled_back_heap_preserves(reduced: &Structure, image: &[usize], p: usize) -> bool {
    let g = dihedral(4 * p).unwrap();
    let mut to_group = image.to_vec();
    let mut unused: Vec<usize> = (0..4 * p).filter(|x| !image.contains(x)).collect();
    while to_group.len() < 4 * p {
        to_group.push(unused.pop().unwrap());
    }
    let mut from_group = vec![0; 4 * p];
    for (x, &y) in to_group.iter().enumerate() {
        from_group[y] = x;
    }
    reduced.relations().iter().all(|r| {
        let t = r.tuples();
        t.iter().all(|a| {
            t.iter().all(|b| {
                t.iter().all(|c| {
                    let (x, y, z) = (to_group[a[0]], to_group[b[0]], to_group[c[0]]);
                    let value = from_group[g.mul(g.mul(x, g.inv(y)), z)];
                    t.contains(&vec![value])
                })
            })
        })
    })
}

fn check_equivalence(g: &Graph) {
    let reduced = graph_to_structure(g);
    let dec = decompose_matching_bipartite(&reduced.graph).unwrap();
    assert_eq!(dec.is_some(), decompose_matching_bipartite(g).unwrap().is_some());
    let verdict = has_coset_polymorphism(&reduced.structure).unwrap();
    assert_eq!(verdict.is_yes(), dec.is_some(), "{g:?}");
    if let Some(heap) = &verdict.heap {
        assert!(is_heap(heap).unwrap());
        assert!(heap.is_polymorphism_of(&reduced.structure).unwrap());
    }
    if let Some(dec) = dec {
        let image = embed_decomposition(&dec, &reduced.graph, reduced.p).unwrap();
        assert!(pulled_back_heap_preserves(&reduced.structure, &image, reduced.p));
    }
}

#[test]
fn coset_polymorphisms_match_decompositions() {
    for n in 0..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0..1u32 << pairs.len() {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            check_equivalence(&Graph::new(n, edges).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..40 {
        let n = rng.gen_range(5..=8);
        let density = rng.gen_range(0.3..0.8);
        check_equivalence(&random_graph(&mut rng, n, density));
    }
    check_equivalence(&Graph::complete(5));
    check_equivalence(&gadget());
}

#[test]
fn reduction_examples() {
    let k5 = graph_to_structure(&Graph::complete(5));
    assert_eq!(k5.p, 5);
    assert!(!has_coset_polymorphism(&k5.structure).unwrap().is_yes());
    let c5_apex = gadget();
    let r = graph_to_structure(&c5_apex);
    assert!(!r.gadget_added);
    assert!(has_coset_polymorphism(&r.structure).unwrap().is_yes());
    assert_eq!(graph_to_structure(&Graph::complete(11)).p, 7);
}

#[test]
fn embedded_edges_are_cosets() {
    let g = gadget();
    let dec = decompose_matching_bipartite(&g).unwrap().unwrap();
    let image = embed_decomposition(&dec, &g, 5).unwrap();
    let d20 = dihedral(20).unwrap();
    for (u, v) in g.edges() {
        assert!(is_coset(&[vec![image[u]], vec![image[v]]], &d20, 1).unwrap());
    }
    let mut sorted = image.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), image.len());
    assert!(image.iter().all(|&x| x < 20));
    assert_eq!(dihedral_index(20, 1, 0), 10);
}

/// Every group of order `n` under every labelling.
fn brute_coset_exists(b: &Structure) -> bool {
    let n = b.size();
    let groups = enumerate_groups_on_set(n).unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if groups.iter().any(|g| heap_from_group(&g.relabel(&perm).unwrap()).is_polymorphism_of(b).unwrap()) {
            return true;
        }
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return false;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

#[test]
fn fresh_element_kills_coset_polymorphisms() {
    let four = add_fresh_element(&Structure::new(4, vec![]));
    assert!(!has_coset_polymorphism(&four).unwrap().is_yes());
    assert!(!brute_coset_exists(&four));
    let one = add_fresh_element(&Structure::new(1, vec![]));
    assert!(has_coset_polymorphism(&one).unwrap().is_yes());
    let three = add_fresh_element(&Structure::new(3, vec![Relation::new("R", 2, vec![vec![0, 1], vec![1, 2]])]));
    assert!(!has_coset_polymorphism(&three).unwrap().is_yes());
    assert!(!brute_coset_exists(&three));
}
