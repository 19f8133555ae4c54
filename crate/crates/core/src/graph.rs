//! Simple undirected graphs, the DIMACS edge format and injective embeddings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::{Error, Result};

/// An undirected graph on `{0, …, n-1}` without loops or multi-edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(vertices: usize) -> Self {
        Graph {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from an edge list; repeated edges collapse.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(vertices);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.edges.insert((u, v));
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for u in 0..n {
                let v = (u + 1) % n;
                g.edges.insert((u.min(v), u.max(v)));
            }
        }
        g
    }

    /// Returns `true` if the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u == v {
            return Err(Error::InvalidMap(format!("loop at vertex {u}")));
        }
        if u >= self.vertices || v >= self.vertices {
            return Err(Error::InvalidMap(format!(
                "edge {{{u},{v}}} outside {} vertices",
                self.vertices
            )));
        }
        Ok(self.edges.insert((u.min(v), u.max(v))))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// A proper 2-colouring (`false`/`true` per vertex) if one exists.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let adj = self.adjacency();
        let mut color: Vec<Option<bool>> = vec![None; self.vertices];
        for start in 0..self.vertices {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = color[u].expect("coloured");
                for &w in &adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.expect("coloured")).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut out = Vec::new();
        for start in 0..self.vertices {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &w in &adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Places `other` after `self`, shifting its vertices by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertices;
        let mut g = self.clone();
        g.vertices += other.vertices;
        g.edges
            .extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        g
    }

    /// `p edge n m` followed by `e u v` lines, 1-indexed.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.vertices, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }

    /// Parses the DIMACS edge format. Lines starting with `c` are comments.
    pub fn from_dimacs(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut graph = Graph::empty(0);
        let mut listed = 0;
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "p" => {
                    if header.is_some() {
                        return Err(Error::parse(line_no, "second problem line"));
                    }
                    if fields.len() != 4 || fields[1] != "edge" {
                        return Err(Error::parse(line_no, "expected `p edge <n> <m>`"));
                    }
                    let n = parse_count(fields[2], line_no)?;
                    let m = parse_count(fields[3], line_no)?;
                    header = Some((n, m));
                    graph = Graph::empty(n);
                }
                "e" => {
                    let Some((n, _)) = header else {
                        return Err(Error::parse(line_no, "edge before problem line"));
                    };
                    if fields.len() != 3 {
                        return Err(Error::parse(line_no, "expected `e <u> <v>`"));
                    }
                    let u = parse_count(fields[1], line_no)?;
                    let v = parse_count(fields[2], line_no)?;
                    if u == 0 || v == 0 || u > n || v > n {
                        return Err(Error::parse(
                            line_no,
                            format!("endpoint out of range 1..={n}"),
                        ));
                    }
                    if u == v {
                        return Err(Error::parse(line_no, "loop edge"));
                    }
                    if !graph.add_edge(u - 1, v - 1).expect("checked endpoints") {
                        return Err(Error::parse(line_no, "duplicate edge"));
                    }
                    listed += 1;
                }
                other => {
                    return Err(Error::parse(line_no, format!("unknown line type `{other}`")));
                }
            }
        }
        let Some((_, m)) = header else {
            return Err(Error::parse(1, "missing `p edge` line"));
        };
        if listed != m {
            return Err(Error::parse(
                text.lines().count().max(1),
                format!("header announces {m} edges, found {listed}"),
            ));
        }
        Ok(graph)
    }
}

fn parse_count(field: &str, line: usize) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("`{field}` is not a non-negative integer")))
}

/// Neighbourhood bitsets of a target graph.
struct Target {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl Target {
    fn new(g: &Graph) -> Self {
        let words = g.vertices.div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; g.vertices];
        for (u, v) in g.edges() {
            rows[u][v / 64] |= 1 << (v % 64);
            rows[v][u / 64] |= 1 << (u % 64);
        }
        Target { words, rows }
    }

    fn full(&self, n: usize) -> Vec<u64> {
        let mut s = vec![0u64; self.words];
        for b in 0..n {
            s[b / 64] |= 1 << (b % 64);
        }
        s
    }
}

fn count(set: &[u64]) -> u32 {
    set.iter().map(|w| w.count_ones()).sum()
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(wi, &w)| {
        (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
    })
}

/// Searches for an injective map `f: V(pattern) → V(target)` sending edges to
/// edges (not necessarily induced).
///
/// With `vertex_transitive` set, the caller promises that the automorphism
/// group of `target` acts transitively on vertices; each connected component
/// is then first tested on its own with its smallest vertex pinned to 0, and
/// the full search pins the first vertex to 0.
pub fn find_embedding(pattern: &Graph, target: &Graph, vertex_transitive: bool) -> Option<Vec<usize>> {
    if pattern.vertices > target.vertices {
        return None;
    }
    if pattern.max_degree() > target.max_degree() {
        return None;
    }
    let t = Target::new(target);
    let padj = pattern.adjacency();
    let tdeg = target.degrees();
    if vertex_transitive {
        for comp in pattern.components() {
            if comp.len() < 2 {
                continue;
            }
            let mut sub = vec![false; pattern.vertices];
            for &v in &comp {
                sub[v] = true;
            }
            if embed(&padj, &sub, &t, &tdeg, target.vertices, Some(comp[0])).is_none() {
                return None;
            }
        }
    }
    let all = vec![true; pattern.vertices];
    let pin = (vertex_transitive && pattern.vertices > 0).then_some(0);
    embed(&padj, &all, &t, &tdeg, target.vertices, pin)
}

/// Embeds the sub-pattern of vertices with `active[v]`; inactive vertices map
/// to `usize::MAX` in the result.
fn embed(
    padj: &[Vec<usize>],
    active: &[bool],
    t: &Target,
    tdeg: &[usize],
    tn: usize,
    pin: Option<usize>,
) -> Option<Vec<usize>> {
    let n = padj.len();
    let pdeg: Vec<usize> = (0..n)
        .map(|v| padj[v].iter().filter(|&&w| active[w]).count())
        .collect();
    let mut initial = vec![t.full(tn); n];
    for v in 0..n {
        if !active[v] {
            continue;
        }
        for c in 0..tn {
            if tdeg[c] < pdeg[v] {
                initial[v][c / 64] &= !(1 << (c % 64));
            }
        }
    }
    if let Some(p) = pin {
        let mut only = vec![0u64; t.words];
        if initial[p][0] & 1 == 0 {
            return None;
        }
        only[0] = 1;
        initial[p] = only;
    }
    let mut state = EmbedState {
        padj,
        active,
        t,
        assignment: vec![usize::MAX; n],
        used: vec![0u64; t.words],
        candidates: vec![initial],
    };
    let remaining = active.iter().filter(|&&a| a).count();
    if state.search(remaining) {
        Some(state.assignment)
    } else {
        None
    }
}

struct EmbedState<'a> {
    padj: &'a [Vec<usize>],
    active: &'a [bool],
    t: &'a Target,
    assignment: Vec<usize>,
    used: Vec<u64>,
    /// One snapshot of candidate sets per depth.
    candidates: Vec<Vec<Vec<u64>>>,
}

impl EmbedState<'_> {
    fn search(&mut self, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        let depth = self.candidates.len() - 1;
        // Fewest free candidates first, then most unassigned neighbours.
        let mut best: Option<(u32, usize, usize)> = None;
        for v in 0..self.padj.len() {
            if !self.active[v] || self.assignment[v] != usize::MAX {
                continue;
            }
            let free: Vec<u64> = self.candidates[depth][v]
                .iter()
                .zip(&self.used)
                .map(|(c, u)| c & !u)
                .collect();
            let size = count(&free);
            if size == 0 {
                return false;
            }
            let unassigned_nbrs = self.padj[v]
                .iter()
                .filter(|&&w| self.active[w] && self.assignment[w] == usize::MAX)
                .count();
            let key = (size, usize::MAX - unassigned_nbrs, v);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, v) = best.expect("an unassigned vertex remains");
        let free: Vec<u64> = self.candidates[depth][v]
            .iter()
            .zip(&self.used)
            .map(|(c, u)| c & !u)
            .collect();
        for c in members(&free).collect::<Vec<_>>() {
            let mut next = self.candidates[depth].clone();
            let mut ok = true;
            for &w in &self.padj[v] {
                if !self.active[w] || self.assignment[w] != usize::MAX {
                    continue;
                }
                for (x, r) in next[w].iter_mut().zip(&self.t.rows[c]) {
                    *x &= r;
                }
                let mut avail = 0;
                for (x, u) in next[w].iter().zip(&self.used) {
                    avail += (x & !u).count_ones();
                }
                if avail == 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            self.assignment[v] = c;
            self.used[c / 64] |= 1 << (c % 64);
            self.candidates.push(next);
            if self.search(remaining - 1) {
                return true;
            }
            self.candidates.pop();
            self.used[c / 64] &= !(1 << (c % 64));
            self.assignment[v] = usize::MAX;
        }
        false
    }
}
