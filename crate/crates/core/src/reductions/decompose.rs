use crate::graph::Graph;
use crate::{Error, Limits, Result};

/// An edge partition into a matching and a bipartite graph.
///
/// `coloring` is a two-colouring in which every edge either crosses or lies
/// in `matching`; matching edges are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub matching: Vec<(usize, usize)>,
    pub coloring: Vec<bool>,
}

impl Decomposition {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.vertex_count();
        if self.coloring.len() != n {
            return Err(Error::InvalidMap(format!(
                "colouring has {} entries for {n} vertices",
                self.coloring.len()
            )));
        }
        let mut covered = vec![false; n];
        for &(u, v) in &self.matching {
            if !g.has_edge(u, v) {
                return Err(Error::InvalidMap(format!("matching edge {{{u},{v}}} is not an edge")));
            }
            for x in [u, v] {
                if std::mem::replace(&mut covered[x], true) {
                    return Err(Error::InvalidMap(format!("vertex {x} is covered twice by the matching")));
                }
            }
        }
        for (u, v) in g.edges() {
            let matched = self.matching.iter().any(|&(a, b)| (a, b) == (u, v) || (b, a) == (u, v));
            if !matched && self.coloring[u] == self.coloring[v] {
                return Err(Error::InvalidMap(format!(
                    "edge {{{u},{v}}} is neither matched nor crossing"
                )));
            }
        }
        Ok(())
    }

    /// Vertices of colour `false`, then of colour `true`.
    pub fn sides(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.coloring.len()).partition(|&v| !self.coloring[v])
    }
}

pub fn decompose_matching_bipartite(g: &Graph) -> Result<Option<Decomposition>> {
    decompose_matching_bipartite_with(g, &Limits::default())
}

/// Exact search for a [`Decomposition`].
///
/// Equivalently, a two-colouring in which every vertex has at most one
/// neighbour of its own colour; the monochromatic edges form the matching.
/// Bipartite graphs get a proper colouring and an empty matching. Otherwise
/// components are coloured independently, each by backtracking with unit
/// propagation.
pub fn decompose_matching_bipartite_with(g: &Graph, limits: &Limits) -> Result<Option<Decomposition>> {
    let n = g.vertex_count();
    if n > limits.decompose_vertices {
        return Err(Error::bound("decomposition search", n as u128, limits.decompose_vertices));
    }
    if let Some(coloring) = g.two_coloring() {
        return Ok(Some(Decomposition { matching: Vec::new(), coloring }));
    }
    let adj = g.adjacency();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for comp in g.components() {
        let mut search = Search { adj: &adj, colour: colour.clone(), trail: Vec::new() };
        if !search.assign(comp[0], false) || !search.solve(&comp) {
            return Ok(None);
        }
        colour = search.colour;
    }
    let coloring: Vec<bool> = colour.into_iter().map(|c| c.unwrap_or(false)).collect();
    let matching = g.edges().filter(|&(u, v)| coloring[u] == coloring[v]).collect();
    let dec = Decomposition { matching, coloring };
    dec.validate(g)?;
    Ok(Some(dec))
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    colour: Vec<Option<bool>>,
    trail: Vec<usize>,
}

impl Search<'_> {
    fn same(&self, v: usize, c: bool) -> usize {
        self.adj[v].iter().filter(|&&u| self.colour[u] == Some(c)).count()
    }

    /// Colours `v` and propagates; false on conflict. Assignments stay on
    /// the trail either way.
    fn assign(&mut self, v: usize, c: bool) -> bool {
        let mut queue = vec![(v, c)];
        while let Some((v, c)) = queue.pop() {
            match self.colour[v] {
                Some(d) if d == c => continue,
                Some(_) => return false,
                None => {}
            }
            self.colour[v] = Some(c);
            self.trail.push(v);
            if self.same(v, c) > 1 {
                return false;
            }
            // A vertex with its mate forces its other neighbours across; a
            // vertex with two neighbours of one colour must take the other.
            for &u in &self.adj[v] {
                if self.colour[u] == Some(c) {
                    if self.same(u, c) > 1 {
                        return false;
                    }
                    for &w in &self.adj[u] {
                        if self.colour[w].is_none() {
                            queue.push((w, !c));
                        }
                    }
                    for &w in &self.adj[v] {
                        if self.colour[w].is_none() {
                            queue.push((w, !c));
                        }
                    }
                } else if self.colour[u].is_none() && self.same(u, c) > 1 {
                    queue.push((u, !c));
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.colour[v] = None;
        }
    }

    fn solve(&mut self, comp: &[usize]) -> bool {
        let next = comp
            .iter()
            .copied()
            .filter(|&v| self.colour[v].is_none())
            .max_by_key(|&v| {
                let coloured = self.adj[v].iter().filter(|&&u| self.colour[u].is_some()).count();
                (coloured, self.adj[v].len())
            });
        let Some(v) = next else {
            return true;
        };
        for c in [false, true] {
            let mark = self.trail.len();
            if self.assign(v, c) && self.solve(comp) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}
