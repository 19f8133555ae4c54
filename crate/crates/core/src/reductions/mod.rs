//! The two hardness reductions as instance generators: NAE-3SAT to
//! matching+bipartite decomposition, and decomposition to coset
//! polymorphism existence. Also the exact decomposition solver and the
//! one-element extension that destroys coset polymorphisms.

mod decompose;
mod groupcsp;
mod nae;

pub use decompose::{decompose_matching_bipartite, decompose_matching_bipartite_with, Decomposition};
pub use groupcsp::{
    add_fresh_element, embed_decomposition, gadget, graph_to_structure, smallest_prime_for, Reduced,
    DOMAIN_RELATION,
};
pub use nae::{nae3sat_to_graph, nae_brute, nae_brute_with, NaeInstance};
