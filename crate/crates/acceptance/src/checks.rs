use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use polymeta::aip::{aip_decide, determinant, hnf, is_hermite, mul};
use polymeta::graph::Graph;
use polymeta::groups::{
    all_subgroups_with, candidates_order_4p, coset_graph, cosets_of_order2, cyclic, dihedral, dihedral_index,
    direct_product, enumerate_groups_on_set, group_from_heap, heap_from_group, is_coset, GroupTable,
};
use polymeta::identities::{extend_operations, IdentitySet, Interpretation};
use polymeta::meta::{has_coset_polymorphism, has_polymorphism, is_heap, pmeta_abheap_maltsev};
use polymeta::reductions::{
    add_fresh_element, decompose_matching_bipartite, embed_decomposition, graph_to_structure, nae3sat_to_graph,
    nae_brute, NaeInstance,
};
use polymeta::structures::{Relation, Structure};
use polymeta::{Limits, OperationTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generators::*;

type Check = Result<String, String>;

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn lib<T>(r: polymeta::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn dihedral_cosets() -> Check {
    let mut total = 0;
    for m in [1, 2, 3, 5] {
        let g = lib(dihedral(4 * m))?;
        let n = g.order();
        // {a, b} is a coset when some {e, t} is a subgroup and x{e, t} = {a, b}.
        let mut expected = BTreeSet::new();
        for t in 0..n {
            let closed = g.mul(t, t) == g.identity() && t != g.identity();
            if !closed {
                continue;
            }
            for x in 0..n {
                let (a, b) = (x, g.mul(x, t));
                expected.insert((a.min(b), a.max(b)));
            }
        }
        let found = lib(cosets_of_order2(&g))?;
        ensure(found == expected, || format!("D_{}: {} cosets listed, {} by enumeration", 4 * m, found.len(), expected.len()))?;
        total += found.len();
    }
    Ok(format!("{total} cosets over m = 1, 2, 3, 5"))
}

pub fn coset_graph_shape() -> Check {
    let d20 = lib(dihedral(20))?;
    let graph = coset_graph(&d20);
    ensure(graph.edge_count() == 110, || format!("D_20 coset graph has {} edges", graph.edge_count()))?;
    let mut expected = Graph::empty(20);
    for k in 0..10 {
        for l in 0..10 {
            expected.add_edge(dihedral_index(20, 0, k), dihedral_index(20, 1, l)).map_err(|e| e.to_string())?;
        }
    }
    for side in 0..2 {
        for l in 0..5 {
            expected
                .add_edge(dihedral_index(20, side, l), dihedral_index(20, side, l + 5))
                .map_err(|e| e.to_string())?;
        }
    }
    ensure(graph == expected, || "D_20 coset graph is not K_10,10 plus two perfect matchings".into())?;
    for r in [3, 5, 7] {
        let g = coset_graph(&lib(dihedral(2 * r))?);
        let bipartite_complete = g.edge_count() == r * r
            && g.edges().all(|(u, v)| (u < r) != (v < r));
        ensure(bipartite_complete, || format!("D_{} coset graph is not K_{r},{r}", 2 * r))?;
    }
    Ok("D_20 has 110 edges; D_6, D_10, D_14 give K_r,r".into())
}

pub fn graph_reduction() -> Check {
    let mut graphs: Vec<Graph> = (0..=7).flat_map(graphs_up_to_isomorphism).collect();
    let classes = graphs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    graphs.extend((0..200).map(|_| random_graph(&mut rng, 8, 0.5)));
    let (mut yes, mut no) = (0, 0);
    for g in &graphs {
        let reduced = graph_to_structure(g);
        let decomposable = brute_decomposable(&reduced.graph);
        ensure(decomposable == brute_decomposable(g), || format!("preprocessing changed the answer for {g:?}"))?;
        let dec = lib(decompose_matching_bipartite(&reduced.graph))?;
        ensure(dec.is_some() == decomposable, || format!("decomposition search is wrong on {g:?}"))?;
        let verdict = lib(has_coset_polymorphism(&reduced.structure))?;
        ensure(verdict.is_yes() == decomposable, || format!("coset answer {} for {g:?}", verdict.is_yes()))?;
        if let Some(heap) = &verdict.heap {
            ensure(lib(is_heap(heap))? && preserves(heap, &reduced.structure), || {
                format!("invalid heap witness for {g:?}")
            })?;
        }
        if let Some(dec) = dec {
            lib(embed_decomposition(&dec, &reduced.graph, reduced.p))?;
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("{classes} isomorphism classes and 200 random graphs; {yes} yes, {no} no"))
}

fn all_nae_instances(n: usize, m: usize) -> Vec<NaeInstance> {
    let triples: Vec<[usize; 3]> = (0..n * n * n).map(|c| [c % n, c / n % n, c / (n * n)]).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; m];
    loop {
        out.push(NaeInstance::new(n, choice.iter().map(|&i| triples[i]).collect()).expect("in range"));
        let Some(i) = (0..m).find(|&i| choice[i] + 1 < triples.len()) else {
            return out;
        };
        choice[i] += 1;
        choice[..i].fill(0);
    }
}

/// Clause-by-clause check of every assignment, independent of the bit-mask
/// implementation.
fn nae_by_assignments(phi: &NaeInstance) -> bool {
    let n = phi.variables();
    let mut sigma = vec![false; n];
    loop {
        if phi.clauses().iter().all(|c| {
            let ones = c.iter().filter(|&&x| sigma[x]).count();
            (1..=2).contains(&ones)
        }) {
            return true;
        }
        let Some(i) = sigma.iter().position(|&b| !b) else {
            return false;
        };
        sigma[i] = true;
        sigma[..i].fill(false);
    }
}

pub fn nae_reduction() -> Check {
    let mut instances: Vec<NaeInstance> =
        (1..=3).flat_map(|n| (0..=2).flat_map(move |m| all_nae_instances(n, m))).collect();
    let exhaustive = instances.len();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let clauses = (0..rng.gen_range(1..=4)).map(|_| [0; 3].map(|_| rng.gen_range(0..n))).collect();
        instances.push(NaeInstance::new(n, clauses).expect("in range"));
    }
    let mut satisfiable = 0;
    for phi in &instances {
        let expected = nae_by_assignments(phi);
        ensure(lib(nae_brute(phi))? == expected, || format!("brute force disagrees on {phi}"))?;
        let graph = nae3sat_to_graph(phi);
        let dec = lib(decompose_matching_bipartite(&graph))?;
        ensure(dec.is_some() == expected, || format!("reduction disagrees on {phi}"))?;
        if let Some(dec) = dec {
            lib(dec.validate(&graph))?;
            satisfiable += 1;
        }
    }
    Ok(format!("{exhaustive} exhaustive and 100 random instances; {satisfiable} satisfiable"))
}

/// Finds `a, b, c ∈ r` with `a·b⁻¹·c ∉ r`.
fn violating_triple(g: &GroupTable, r: &BTreeSet<Vec<usize>>) -> bool {
    r.iter().any(|a| {
        r.iter().any(|b| {
            r.iter().any(|c| {
                let d: Vec<usize> = (0..a.len()).map(|i| g.mul(g.mul(a[i], g.inv(b[i])), c[i])).collect();
                !r.contains(&d)
            })
        })
    })
}

pub fn coset_characterisation() -> Check {
    let c2 = lib(cyclic(2))?;
    let groups = [
        ("C_6", lib(cyclic(6))?),
        ("C_2xC_2", direct_product(&c2, &c2)),
        ("D_8", lib(dihedral(8))?),
        ("C_12", lib(cyclic(12))?),
        ("D_12", lib(dihedral(12))?),
    ];
    let limits = Limits { subgroup_order: 144, ..Limits::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut cosets_checked, mut non_cosets) = (0, 0);
    for (name, g) in &groups {
        let n = g.order();
        let heap = heap_from_group(g);
        for k in 1..=2usize {
            // Subgroups of G^k come from the tabulated power, whose element
            // (x, y) has index x·n + y.
            let power = if k == 1 { g.clone() } else { direct_product(g, g) };
            let as_tuple = |x: usize| if k == 1 { vec![x] } else { vec![x / n, x % n] };
            let mut cosets: HashSet<Vec<Vec<usize>>> = HashSet::new();
            for h in lib(all_subgroups_with(&power, &limits))? {
                let h: BTreeSet<Vec<usize>> = h.into_iter().map(as_tuple).collect();
                for shift in all_tuples(n, k) {
                    let mut coset = left_coset(g, &shift, &h);
                    coset.sort();
                    cosets.insert(coset);
                }
            }
            for coset in &cosets {
                ensure(lib(is_coset(coset, g, k))?, || format!("{name}^{k}: coset {coset:?} rejected"))?;
                let structure = Structure::new(n, vec![Relation::new("R", k, coset.clone())]);
                let set: BTreeSet<Vec<usize>> = coset.iter().cloned().collect();
                ensure(!violating_triple(g, &set) && lib(heap.is_polymorphism_of(&structure))?, || {
                    format!("{name}^{k}: heap does not preserve {coset:?}")
                })?;
            }
            cosets_checked += cosets.len();
            let universe = all_tuples(n, k);
            let mut found = 0;
            while found < 100 {
                let size = rng.gen_range(1..=universe.len());
                let mut subset: Vec<Vec<usize>> = universe.choose_multiple(&mut rng, size).cloned().collect();
                subset.sort();
                if cosets.contains(&subset) {
                    continue;
                }
                ensure(!lib(is_coset(&subset, g, k))?, || format!("{name}^{k}: non-coset {subset:?} accepted"))?;
                let set: BTreeSet<Vec<usize>> = subset.into_iter().collect();
                ensure(violating_triple(g, &set), || format!("{name}^{k}: no violating triple in {set:?}"))?;
                found += 1;
            }
            non_cosets += found;
        }
    }
    Ok(format!("{cosets_checked} cosets accepted, {non_cosets} non-cosets rejected"))
}

/// Groups of order at most 24 that the library builds: all enumerated
/// groups up to order 12, their direct products, cyclic and dihedral groups,
/// and the order-20 candidates.
fn constructed_groups() -> polymeta::Result<Vec<GroupTable>> {
    let small: Vec<GroupTable> = (1..=12)
        .map(enumerate_groups_on_set)
        .collect::<polymeta::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut out = small.clone();
    for g in small.iter().filter(|g| g.order() > 1) {
        for h in small.iter().filter(|h| h.order() > 1 && g.order() * h.order() <= 24) {
            out.push(direct_product(g, h));
        }
    }
    for n in 13..=24 {
        out.push(cyclic(n)?);
        if n % 2 == 0 {
            out.push(dihedral(n)?);
        }
    }
    out.extend(candidates_order_4p(5)?.into_iter().map(|(_, g)| g));
    Ok(out)
}

pub fn heap_round_trip() -> Check {
    let groups = lib(constructed_groups())?;
    let mut pairs = 0;
    for g in &groups {
        let heap = heap_from_group(g);
        for e in 0..g.order() {
            let back = heap_from_group(&lib(group_from_heap(&heap, e))?);
            ensure(back == heap, || format!("round trip through identity {e} changed a group of order {}", g.order()))?;
            pairs += 1;
        }
    }
    Ok(format!("{} groups, {pairs} identity choices", groups.len()))
}

pub fn domain_extension() -> Check {
    let sigma = IdentitySet::maltsev();
    let mut ops = Interpretation::new();
    ops.insert("m".into(), lib(OperationTable::from_fn(2, 3, |a| a[0] ^ a[1] ^ a[2]))?);
    for fresh in 2..5 {
        let previous = ops["m"].clone();
        ops = lib(extend_operations(&ops, &sigma, fresh, None))?;
        let m = &ops["m"];
        ensure(m.domain() == fresh + 1 && is_maltsev_by_definition(m), || {
            format!("extension to {} elements is not Maltsev", fresh + 1)
        })?;
        let old = (0..fresh).all(|x| (0..fresh).all(|y| (0..fresh).all(|z| m.apply3(x, y, z) == previous.apply3(x, y, z))));
        ensure(old, || format!("extension to {} elements changed old values", fresh + 1))?;
    }
    Ok("three extensions from {0,1} to five elements stay Maltsev".into())
}

fn relation_from_bits(bits: u32, arity: usize) -> Vec<Vec<usize>> {
    (0..1usize << arity)
        .filter(|&c| bits >> c & 1 == 1)
        .map(|c| (0..arity).map(|i| c >> i & 1).collect())
        .collect()
}

pub fn maltsev_indicator() -> Check {
    let maltsev: Vec<OperationTable> =
        ternary_boolean_operations().into_iter().filter(is_maltsev_by_definition).collect();
    ensure(maltsev.len() == 4, || format!("{} Maltsev operations on two elements", maltsev.len()))?;
    let sigma = IdentitySet::maltsev().with_idempotence();
    let mut structures = Vec::new();
    for bits in 0..16 {
        structures.push(vec![Relation::new("R", 2, relation_from_bits(bits, 2))]);
    }
    for bits in 0..256 {
        structures.push(vec![Relation::new("T", 3, relation_from_bits(bits, 3))]);
    }
    for pair in 0..256u32 {
        structures.push(vec![
            Relation::new("R", 2, relation_from_bits(pair & 15, 2)),
            Relation::new("S", 2, relation_from_bits(pair >> 4, 2)),
        ]);
    }
    let mut yes = 0;
    for relations in &structures {
        let b = Structure::new(2, relations.clone());
        let expected = maltsev.iter().any(|m| preserves(m, &b));
        let verdict = lib(has_polymorphism(&b, &sigma))?;
        ensure(verdict.is_yes() == expected, || format!("indicator answer {} on {b:?}", verdict.is_yes()))?;
        if let Some(w) = &verdict.witness {
            ensure(is_maltsev_by_definition(&w["m"]) && preserves(&w["m"], &b), || format!("bad witness on {b:?}"))?;
            yes += 1;
        }
    }
    Ok(format!(
        "16 binary relations, 256 ternary relations, 256 pairs of binary relations; {yes} with a Maltsev polymorphism"
    ))
}

/// Structures on `{0,1}` with no Maltsev polymorphism among all 256
/// ternary operations, starting with NAND.
fn no_maltsev_structures(count: usize) -> Vec<Structure> {
    let ops = ternary_boolean_operations();
    let nand = Structure::new(2, vec![Relation::new("R", 2, vec![vec![0, 0], vec![0, 1], vec![1, 0]])]);
    let mut out = vec![nand];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    while out.len() < count + 1 {
        let relations = (0..rng.gen_range(1..=2))
            .map(|i| {
                let arity = rng.gen_range(1..=3);
                Relation::new(format!("R{i}"), arity, random_relation(&mut rng, 2, arity, 0.5))
            })
            .collect();
        let b = Structure::new(2, relations);
        let certified = !ops.iter().any(|m| is_maltsev_by_definition(m) && preserves(m, &b));
        if certified && !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

pub fn abelian_pipeline() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..50 {
        let d = rng.gen_range(2..=6);
        let relations = rng.gen_range(1..=4);
        let b = abelian_coset_structure(&mut rng, d, relations, 2);
        let verdict = lib(pmeta_abheap_maltsev(&b))?;
        ensure(verdict.is_yes(), || format!("abelian structure {i} rejected: {b:?}"))?;
        let m = &verdict.witness.as_ref().ok_or("yes without a witness")?["m"];
        ensure(is_maltsev_by_definition(m) && preserves(m, &b), || format!("invalid witness on {b:?}"))?;
    }
    let negatives = no_maltsev_structures(20);
    for b in &negatives {
        let verdict = lib(pmeta_abheap_maltsev(b))?;
        ensure(!verdict.is_yes(), || format!("accepted {b:?}"))?;
    }
    Ok(format!("50 abelian coset structures accepted, {} certified negatives rejected", negatives.len()))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> (usize, Vec<Vec<BigInt>>) {
    let (rows, columns) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let m = (0..rows)
        .map(|_| (0..columns).map(|_| BigInt::from(rng.gen_range(-10i64..=10))).collect())
        .collect();
    (columns, m)
}

pub fn affine_relaxation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut rejected = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let relations = (0..rng.gen_range(1..=2))
            .map(|i| {
                let arity = rng.gen_range(1..=2);
                Relation::new(format!("R{i}"), arity, random_relation(&mut rng, n, arity, 0.5))
            })
            .collect();
        let b = Structure::new(n, relations);
        let size = rng.gen_range(1..=5);
        let a = random_instance(&mut rng, &b, size);
        if !lib(aip_decide(&a, &b))? {
            rejected += 1;
            ensure(!brute_hom_exists(&a, &b), || format!("relaxation rejected a solvable pair {a:?} → {b:?}"))?;
        }
    }
    let (mut yes, mut no) = (0, 0);
    for _ in 0..100 {
        let d = rng.gen_range(2..=4);
        let relations = rng.gen_range(1..=3);
        let b = abelian_coset_structure(&mut rng, d, relations, 2);
        let size = rng.gen_range(2..=6);
        let a = random_instance(&mut rng, &b, size);
        let exact = brute_hom_exists(&a, &b);
        ensure(lib(aip_decide(&a, &b))? == exact, || format!("relaxation is inexact on {a:?} → {b:?}"))?;
        if exact {
            yes += 1;
        } else {
            no += 1;
        }
    }
    for _ in 0..100 {
        let (columns, m) = random_matrix(&mut rng);
        let (h, u) = hnf(&m, columns);
        ensure(mul(&u, &m, columns) == h, || format!("U·M ≠ H for {m:?}"))?;
        ensure(determinant(&u).abs() == BigInt::one(), || format!("U is not unimodular for {m:?}"))?;
        ensure(is_hermite(&h), || format!("H is not in Hermite form for {m:?}"))?;
    }
    Ok(format!(
        "200 random pairs ({rejected} rejected, all unsolvable); 100 coset templates ({yes} yes, {no} no); 100 HNF checks"
    ))
}

pub fn fresh_element() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(2..=4);
        let relations = (0..rng.gen_range(0..=2))
            .map(|i| {
                let arity = rng.gen_range(1..=2);
                Relation::new(format!("R{i}"), arity, random_relation(&mut rng, n, arity, 0.5))
            })
            .collect();
        let a = Structure::new(n, relations);
        let b = add_fresh_element(&a);
        ensure(b.size() == n + 1, || "domain did not grow by one".into())?;
        ensure(!lib(has_coset_polymorphism(&b))?.is_yes(), || format!("coset polymorphism found for {b:?}"))?;
        ensure(!brute_coset_polymorphism(&b), || format!("relabelled group heap preserves {b:?}"))?;
    }
    Ok("50 extended structures, none with a coset-generating polymorphism".into())
}
