//! Isomorphism testing by backtracking over generator images.

use super::GroupTable;

/// A small generating sequence, largest element orders first.
fn generators(g: &GroupTable) -> Vec<usize> {
    let mut by_order: Vec<usize> = (0..g.order()).collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(g.element_order(x)), x));
    let mut gens = Vec::new();
    let mut member = g.generated(&gens);
    for x in by_order {
        if !member[x] {
            gens.push(x);
            member = g.generated(&gens);
        }
    }
    gens
}

/// Extends `map` along right multiplication by the first `count` generators.
/// Returns `false` on a contradiction or a collision.
fn extend(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[usize],
    images: &[usize],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    map.fill(usize::MAX);
    used.fill(false);
    map[g.identity()] = h.identity();
    used[h.identity()] = true;
    let mut queue = vec![g.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&a, &b) in gens.iter().zip(images) {
            let y = g.mul(x, a);
            let image = h.mul(map[x], b);
            if map[y] == usize::MAX {
                if used[image] {
                    return false;
                }
                map[y] = image;
                used[image] = true;
                queue.push(y);
            } else if map[y] != image {
                return false;
            }
        }
    }
    true
}

/// An isomorphism `G → H` as an element map, if one exists.
pub fn find_isomorphism(g: &GroupTable, h: &GroupTable) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.order_census() != h.order_census() {
        return None;
    }
    if g.is_abelian() != h.is_abelian() {
        return None;
    }
    let gens = generators(g);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            let ord = g.element_order(x);
            (0..h.order()).filter(|&y| h.element_order(y) == ord).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    let mut map = vec![usize::MAX; g.order()];
    let mut used = vec![false; h.order()];
    if search(g, h, &gens, &candidates, &mut images, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn search(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        return extend(g, h, gens, images, map, used);
    }
    for &c in &candidates[depth] {
        images.push(c);
        if extend(g, h, &gens[..=depth], images, map, used)
            && search(g, h, gens, candidates, images, map, used)
        {
            return true;
        }
        images.pop();
    }
    false
}

pub fn is_isomorphic(g: &GroupTable, h: &GroupTable) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, dihedral, direct_product};

    #[test]
    fn isomorphism_is_a_homomorphism() {
        let g = direct_product(&cyclic(3).unwrap(), &cyclic(4).unwrap());
        let h = cyclic(12).unwrap();
        let f = find_isomorphism(&g, &h).unwrap();
        for x in 0..12 {
            for y in 0..12 {
                assert_eq!(f[g.mul(x, y)], h.mul(f[x], f[y]));
            }
        }
        assert!(!is_isomorphic(&cyclic(8).unwrap(), &dihedral(8).unwrap()));
        let c2 = cyclic(2).unwrap();
        let c2c4 = direct_product(&c2, &cyclic(4).unwrap());
        assert!(!is_isomorphic(&c2c4, &dihedral(8).unwrap()));
    }

    #[test]
    fn relabelled_copies_are_isomorphic() {
        let g = dihedral(12).unwrap();
        let perm: Vec<usize> = (0..12).map(|x| (x * 5 + 3) % 12).collect();
        let h = g.relabel(&perm).unwrap();
        assert!(is_isomorphic(&g, &h));
        assert!(is_isomorphic(&h, &g));
    }
}
