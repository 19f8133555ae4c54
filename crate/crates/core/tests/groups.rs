use std::collections::BTreeSet;

use polymeta::groups::{
    all_subgroups, cyclic, dicyclic_4p, dihedral, direct_product, enumerate_groups_on_set,
    group_from_heap, heap_from_group, is_coset, is_isomorphic, GroupTable,
};
use polymeta::meta::is_heap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Associativity, identity and inverses by exhaustive check.
fn satisfies_axioms(g: &GroupTable) -> bool {
    let n = g.order();
    let e = g.identity();
    (0..n).all(|x| g.mul(e, x) == x && g.mul(x, e) == x && g.mul(x, g.inv(x)) == e)
        && (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z))))
        })
}

#[test]
fn classical_group_counts() {
    let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5];
    for (i, &count) in expected.iter().enumerate() {
        let n = i + 1;
        let groups = enumerate_groups_on_set(n).unwrap();
        assert_eq!(groups.len(), count, "groups of order {n}");
        for (j, g) in groups.iter().enumerate() {
            assert!(satisfies_axioms(g));
            assert_eq!(g.identity(), 0);
            assert!(groups[..j].iter().all(|h| !is_isomorphic(g, h)));
        }
    }
}

#[test]
fn enumeration_contains_known_groups() {
    let twelve = enumerate_groups_on_set(12).unwrap();
    let known = [
        cyclic(12).unwrap(),
        dihedral(12).unwrap(),
        direct_product(&cyclic(2).unwrap(), &cyclic(6).unwrap()),
    ];
    for g in &known {
        assert!(twelve.iter().any(|h| is_isomorphic(g, h)));
    }
    let abelian = twelve.iter().filter(|g| g.is_abelian()).count();
    assert_eq!(abelian, 2);
}

fn constructed() -> Vec<GroupTable> {
    let mut out = vec![
        cyclic(1).unwrap(),
        cyclic(7).unwrap(),
        dihedral(10).unwrap(),
        dihedral(24).unwrap(),
        dicyclic_4p(5).unwrap(),
        direct_product(&dihedral(6).unwrap(), &cyclic(2).unwrap()),
    ];
    out.extend(enumerate_groups_on_set(8).unwrap());
    out
}

#[test]
fn constructed_heaps_are_heaps() {
    for g in constructed() {
        assert!(satisfies_axioms(&g));
        let m = heap_from_group(&g);
        assert!(is_heap(&m).unwrap());
        for e in 0..g.order() {
            assert_eq!(heap_from_group(&group_from_heap(&m, e).unwrap()), m);
        }
    }
}

fn heap_preserves(g: &GroupTable, r: &BTreeSet<Vec<usize>>) -> bool {
    r.iter().all(|a| {
        r.iter().all(|b| {
            r.iter().all(|c| {
                let t: Vec<usize> = (0..a.len())
                    .map(|i| g.mul(g.mul(a[i], g.inv(b[i])), c[i]))
                    .collect();
                r.contains(&t)
            })
        })
    })
}

#[test]
fn cosets_and_non_cosets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in [cyclic(6).unwrap(), dihedral(8).unwrap(), dihedral(12).unwrap()] {
        let n = g.order();
        let subgroups = all_subgroups(&g).unwrap();
        let mut cosets = BTreeSet::new();
        for h in &subgroups {
            for a in 0..n {
                let coset: BTreeSet<Vec<usize>> = h.iter().map(|&x| vec![g.mul(a, x)]).collect();
                let list: Vec<Vec<usize>> = coset.iter().cloned().collect();
                assert!(is_coset(&list, &g, 1).unwrap());
                assert!(heap_preserves(&g, &coset));
                cosets.insert(list);
            }
        }
        let mut tried = 0;
        while tried < 100 {
            let size = rng.gen_range(1..=n);
            let set: BTreeSet<Vec<usize>> = (0..size).map(|_| vec![rng.gen_range(0..n)]).collect();
            let list: Vec<Vec<usize>> = set.iter().cloned().collect();
            if cosets.contains(&list) {
                continue;
            }
            tried += 1;
            assert!(!is_coset(&list, &g, 1).unwrap());
            assert!(!heap_preserves(&g, &set));
        }
    }
}
