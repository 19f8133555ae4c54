use crate::graph::Graph;
use crate::groups::{dihedral, dihedral_index, is_coset, is_prime};
use crate::structures::{Relation, Structure};
use crate::{Error, Result};

use super::decompose::Decomposition;

/// Name of the unary relation added by [`add_fresh_element`].
pub const DOMAIN_RELATION: &str = "Dom";

/// The structure built from a graph, with what preprocessing did.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub structure: Structure,
    pub p: usize,
    pub gadget_added: bool,
    /// The graph actually encoded: the input, possibly plus [`gadget`] on
    /// the last six vertices.
    pub graph: Graph,
}

/// A 5-cycle plus an apex joined to four of its vertices: non-bipartite,
/// with a vertex of degree four, and decomposable.
pub fn gadget() -> Graph {
    let mut g = Graph::cycle(5).disjoint_union(&Graph::empty(1));
    for v in 0..4 {
        g.add_edge(5, v).expect("gadget edges are valid");
    }
    g
}

/// Smallest prime `p ≥ 5` with `n ≤ 2p`.
pub fn smallest_prime_for(n: usize) -> usize {
    (n.div_ceil(2).max(5)..).find(|&p| is_prime(p)).expect("primes are unbounded")
}

/// Encodes a graph as a structure on `{0, …, 4p-1}` with one unary relation
/// `{u, v}` per edge, named `E{u}_{v}`.
///
/// Graphs that are bipartite or have no vertex of degree four first get a
/// disjoint copy of [`gadget`]. The structure then has a coset-generating
/// polymorphism iff the graph splits into a matching and a bipartite graph.
pub fn graph_to_structure(g: &Graph) -> Reduced {
    let gadget_added = g.is_bipartite() || g.max_degree() < 4;
    let graph = if gadget_added { g.disjoint_union(&gadget()) } else { g.clone() };
    let p = smallest_prime_for(graph.vertex_count());
    let relations = graph
        .edges()
        .map(|(u, v)| Relation::new(format!("E{u}_{v}"), 1, vec![vec![u], vec![v]]))
        .collect();
    Reduced {
        structure: Structure::new(4 * p, relations),
        p,
        gadget_added,
        graph,
    }
}

/// Places the vertices in `D_{4p}` (as indexed by [`dihedral`]) so that every
/// edge becomes a two-element coset.
///
/// Colour-`false` vertices go to rotations `d^l`, colour-`true` vertices to
/// reflections `s d^l`. Matching edges inside a side occupy `l` and `l + p`;
/// crossing edges are cosets of a reflection subgroup automatically.
pub fn embed_decomposition(dec: &Decomposition, g: &Graph, p: usize) -> Result<Vec<usize>> {
    dec.validate(g)?;
    let order = 4 * p;
    let mut mate = vec![None; g.vertex_count()];
    for &(u, v) in &dec.matching {
        if dec.coloring[u] == dec.coloring[v] {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
    }
    let mut image = vec![usize::MAX; g.vertex_count()];
    let (rotations, reflections) = dec.sides();
    for (k, side) in [(0, rotations), (1, reflections)] {
        let mut next_pair = 0;
        let mut singles = Vec::new();
        for &v in &side {
            match mate[v] {
                Some(u) if u < v => {}
                Some(u) => {
                    if next_pair == p {
                        return Err(Error::Precondition(format!("side {k} overflows {p} pair slots")));
                    }
                    image[v] = dihedral_index(order, k, next_pair);
                    image[u] = dihedral_index(order, k, next_pair + p);
                    next_pair += 1;
                }
                None => singles.push(v),
            }
        }
        let free = (next_pair..p).flat_map(|l| [l, l + p]);
        let mut free = free.collect::<Vec<_>>().into_iter();
        for v in singles {
            let l = free
                .next()
                .ok_or_else(|| Error::Precondition(format!("side {k} overflows {} slots", 2 * p)))?;
            image[v] = dihedral_index(order, k, l);
        }
    }
    let group = dihedral(order)?;
    for (u, v) in g.edges() {
        if !is_coset(&[vec![image[u]], vec![image[v]]], &group, 1)? {
            return Err(Error::InvalidMap(format!("edge {{{u},{v}}} does not land on a coset")));
        }
    }
    Ok(image)
}

/// Adds one element outside every relation, and the unary relation
/// [`DOMAIN_RELATION`] holding the old domain. With at least two old
/// elements the result has no coset-generating polymorphism: the new
/// relation's size does not divide the new domain size.
pub fn add_fresh_element(a: &Structure) -> Structure {
    let mut relations = a.relations().to_vec();
    relations.push(Relation::new(
        DOMAIN_RELATION,
        1,
        (0..a.size()).map(|x| vec![x]).collect(),
    ));
    Structure::new(a.size() + 1, relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::decompose_matching_bipartite;

    #[test]
    fn primes() {
        assert_eq!(smallest_prime_for(0), 5);
        assert_eq!(smallest_prime_for(10), 5);
        assert_eq!(smallest_prime_for(11), 7);
        assert_eq!(smallest_prime_for(15), 11);
    }

    #[test]
    fn preprocessing() {
        let k5 = graph_to_structure(&Graph::complete(5));
        assert!(!k5.gadget_added);
        assert_eq!((k5.p, k5.structure.size(), k5.structure.relations().len()), (5, 20, 10));
        let path = graph_to_structure(&Graph::new(2, [(0, 1)]).unwrap());
        assert!(path.gadget_added);
        assert_eq!(path.graph.vertex_count(), 8);
        assert!(!path.graph.is_bipartite() && path.graph.max_degree() >= 4);
        assert!(decompose_matching_bipartite(&gadget()).unwrap().is_some());
    }

    #[test]
    fn single_edge_and_matched_pair() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let crossing = Decomposition { matching: vec![], coloring: vec![false, true] };
        assert_eq!(embed_decomposition(&crossing, &g, 5).unwrap(), vec![0, 10]);
        let matched = Decomposition { matching: vec![(0, 1)], coloring: vec![false, false] };
        assert_eq!(embed_decomposition(&matched, &g, 5).unwrap(), vec![0, 5]);
    }

    #[test]
    fn side_overflow() {
        let g = Graph::empty(12);
        let dec = Decomposition { matching: vec![], coloring: vec![false; 12] };
        assert!(matches!(embed_decomposition(&dec, &g, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn fresh_element() {
        let a = Structure::new(4, vec![]);
        let b = add_fresh_element(&a);
        assert_eq!(b.size(), 5);
        assert_eq!(b.relation(DOMAIN_RELATION).unwrap().len(), 4);
    }
}
