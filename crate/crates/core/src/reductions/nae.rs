use std::fmt;

use crate::graph::Graph;
use crate::{Error, Limits, Result};

/// Positive NAE-3SAT: each clause must contain a true and a false variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeInstance {
    variables: usize,
    clauses: Vec<[usize; 3]>,
}

impl NaeInstance {
    /// Variables are 0-indexed here and 1-indexed in the text format.
    pub fn new(variables: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        if let Some(c) = clauses.iter().find(|c| c.iter().any(|&x| x >= variables)) {
            return Err(Error::Domain(format!(
                "clause {c:?} mentions a variable outside 0..{variables}"
            )));
        }
        Ok(NaeInstance { variables, clauses })
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// Parses `nae n m` followed by `m` lines of three 1-indexed variables.
    /// Blank lines and lines starting with `c` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
        let (line_no, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let number = |s: &str, line: usize| -> Result<usize> {
            s.parse().map_err(|_| Error::parse(line, format!("expected a number, got {s:?}")))
        };
        if fields.len() != 3 || fields[0] != "nae" {
            return Err(Error::parse(line_no, "header must be `nae <variables> <clauses>`"));
        }
        let (n, m) = (number(fields[1], line_no)?, number(fields[2], line_no)?);
        let mut clauses = Vec::with_capacity(m);
        let mut last = line_no;
        for (line_no, line) in lines {
            last = line_no;
            let vars: Vec<usize> = line
                .split_whitespace()
                .map(|s| number(s, line_no))
                .collect::<Result<_>>()?;
            let [a, b, c] = vars[..] else {
                return Err(Error::parse(line_no, "a clause has exactly three variables"));
            };
            let mut clause = [0; 3];
            for (slot, x) in clause.iter_mut().zip([a, b, c]) {
                if x == 0 || x > n {
                    return Err(Error::parse(line_no, format!("variable {x} outside 1..={n}")));
                }
                *slot = x - 1;
            }
            clauses.push(clause);
        }
        if clauses.len() != m {
            return Err(Error::parse(last, format!("header announces {m} clauses, found {}", clauses.len())));
        }
        NaeInstance::new(n, clauses)
    }

    /// Repeats the whole clause list until every variable that occurs at
    /// all occurs at least three times.
    pub fn with_repeated_clauses(&self) -> NaeInstance {
        let mut occurrences = vec![0usize; self.variables];
        for c in &self.clauses {
            for &x in c {
                occurrences[x] += 1;
            }
        }
        let copies = occurrences
            .iter()
            .filter(|&&o| o > 0)
            .map(|&o| 3usize.div_ceil(o))
            .max()
            .unwrap_or(1);
        NaeInstance {
            variables: self.variables,
            clauses: self.clauses.repeat(copies),
        }
    }
}

impl fmt::Display for NaeInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nae {} {}", self.variables, self.clauses.len())?;
        for [a, b, c] in &self.clauses {
            writeln!(f, "{} {} {}", a + 1, b + 1, c + 1)?;
        }
        Ok(())
    }
}

pub fn nae_brute(phi: &NaeInstance) -> Result<bool> {
    nae_brute_with(phi, &Limits::default())
}

/// Tries all assignments as bit masks.
pub fn nae_brute_with(phi: &NaeInstance, limits: &Limits) -> Result<bool> {
    let n = phi.variables;
    if n > limits.nae_variables {
        return Err(Error::bound("NAE brute force", n as u128, limits.nae_variables));
    }
    let masks: Vec<u64> = phi
        .clauses
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &x| m | 1 << x))
        .collect();
    Ok((0..1u64 << n).any(|sigma| masks.iter().all(|&m| sigma & m != 0 && !sigma & m != 0)))
}

/// The graph whose matching+bipartite decompositions correspond to NAE
/// assignments.
///
/// Clause lists are first repeated (see
/// [`NaeInstance::with_repeated_clauses`]). Vertex `3i + j` is the `j`-th
/// literal of clause `i`; vertex `3m + 2k + l` is the `l`-th copy of
/// variable `k`. Each clause is a triangle, the two copies of a variable are
/// adjacent, and a literal is adjacent to both copies of its variable.
pub fn nae3sat_to_graph(phi: &NaeInstance) -> Graph {
    let phi = phi.with_repeated_clauses();
    let m = phi.clauses.len();
    let var = |k: usize, l: usize| 3 * m + 2 * k + l;
    let mut g = Graph::empty(3 * m + 2 * phi.variables);
    let mut add = |u: usize, v: usize| {
        g.add_edge(u, v).expect("distinct in-range vertices");
    };
    for (i, clause) in phi.clauses.iter().enumerate() {
        add(3 * i, 3 * i + 1);
        add(3 * i, 3 * i + 2);
        add(3 * i + 1, 3 * i + 2);
        for (j, &x) in clause.iter().enumerate() {
            add(3 * i + j, var(x, 0));
            add(3 * i + j, var(x, 1));
        }
    }
    for k in 0..phi.variables {
        add(var(k, 0), var(k, 1));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_examples() {
        assert!(nae_brute(&NaeInstance::new(3, vec![[0, 1, 2]]).unwrap()).unwrap());
        assert!(!nae_brute(&NaeInstance::new(1, vec![[0, 0, 0]]).unwrap()).unwrap());
        assert!(nae_brute(&NaeInstance::new(0, vec![]).unwrap()).unwrap());
        let too_big = NaeInstance::new(30, vec![]).unwrap();
        assert!(matches!(nae_brute(&too_big), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn single_clause_graph() {
        let g = nae3sat_to_graph(&NaeInstance::new(3, vec![[0, 1, 2]]).unwrap());
        assert_eq!(g.vertex_count(), 15);
        assert_eq!(g.edge_count(), 30);
        assert_eq!(nae3sat_to_graph(&NaeInstance::new(0, vec![]).unwrap()), Graph::empty(0));
    }

    #[test]
    fn text_format() {
        let phi = NaeInstance::parse("c example\nnae 4 2\n1 2 3\n2 3 4\n").unwrap();
        assert_eq!(phi.clauses(), &[[0, 1, 2], [1, 2, 3]]);
        assert_eq!(NaeInstance::parse(&phi.to_string()).unwrap(), phi);
        let err = NaeInstance::parse("nae 2 1\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(NaeInstance::parse("nae 2 2\n1 2 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(NaeInstance::parse("sat 2 2\n"), Err(Error::Parse { line: 1, .. })));
    }
}
