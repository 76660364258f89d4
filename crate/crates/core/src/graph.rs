//! Unweighted MaxCut instances and the exhaustive cut oracle.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Largest vertex count accepted by [`brute_force_maxcut`].
pub const MAXCUT_ENUMERATION_LIMIT: usize = 24;

/// Attempts made by the pairing-model generator before giving up.
pub const REGULAR_GRAPH_ATTEMPTS: usize = 10_000;

/// Simple undirected graph. Edges are stored as `(i, j)` with `i < j`,
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    regularity: Option<usize>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop on vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            regularity: None,
        })
    }

    /// Declares the graph `d`-regular, checking every degree.
    pub fn with_regularity(mut self, d: usize) -> Result<Self> {
        if let Some(v) = self.degrees().iter().position(|&deg| deg != d) {
            return Err(Error::InvalidInstance(format!(
                "vertex {v} has degree {} but graph was declared {d}-regular",
                self.degrees()[v]
            )));
        }
        self.regularity = Some(d);
        Ok(self)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn regularity(&self) -> Option<usize> {
        self.regularity
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Number of edges whose endpoints get different sides.
    pub fn cut_value(&self, side: impl Fn(usize) -> bool) -> usize {
        self.edges.iter().filter(|&&(a, b)| side(a) != side(b)).count()
    }

    /// Applies a vertex relabeling `v -> perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let g = Graph::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))?;
        Ok(Graph {
            regularity: self.regularity,
            ..g
        })
    }

    /// Parses the `n m` + `i j` edge-list format.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push((line, parse_pair(line, l)?));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                reason: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let mut seen = BTreeSet::new();
        for &(line, (a, b)) in &edges {
            if a == b {
                return Err(Error::Parse {
                    line,
                    reason: format!("self-loop on vertex {a}"),
                });
            }
            if a >= n || b >= n {
                return Err(Error::Parse {
                    line,
                    reason: format!("vertex out of range for n = {n}"),
                });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Parse {
                    line,
                    reason: format!("duplicate edge ({a}, {b})"),
                });
            }
        }
        Graph::new(n, edges.into_iter().map(|(_, e)| e))
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for (a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let bad = |reason: String| Error::Parse { line, reason };
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| bad("expected two integers".into()))?;
        tok.parse().map_err(|_| bad(format!("not a non-negative integer: `{tok}`")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(bad("trailing tokens".into()));
    }
    Ok((a, b))
}

/// Cycle `0-1-...-(n-1)-0`.
pub fn ring_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!("ring needs n >= 3, got {n}")));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?.with_regularity(2)
}

/// Complete graph on `n` vertices.
pub fn complete_graph(n: usize) -> Result<Graph> {
    let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
    let g = Graph::new(n, edges)?;
    g.with_regularity(n - 1)
}

/// Simple `d`-regular graph from the pairing model with full rejection.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n {
        return Err(Error::InvalidInstance(format!("degree {d} must be below n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidInstance(format!("n * d = {} must be even", n * d)));
    }
    let mut rng = rng::substream(seed, rng::Stream::GraphGeneration);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..REGULAR_GRAPH_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut set = BTreeSet::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !set.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
        }
        return Graph::new(n, set)?.with_regularity(d);
    }
    Err(Error::GenerationFailed {
        attempts: REGULAR_GRAPH_ATTEMPTS,
    })
}

/// Side assignment for every vertex; `bits[v]` is vertex `v`'s side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub bits: Vec<bool>,
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCut {
    pub value: usize,
    pub witness: Bipartition,
}

/// Exact maximum cut by enumerating all `2^n` assignments.
///
/// Ties resolve to the lexicographically smallest bitstring, reading
/// vertex 0 first.
pub fn brute_force_maxcut(g: &Graph) -> Result<MaxCut> {
    let n = g.num_vertices();
    if n > MAXCUT_ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "maxcut enumeration limited to {MAXCUT_ENUMERATION_LIMIT} vertices, got {n}"
        )));
    }
    // `x` enumerates bitstrings in lexicographic order: vertex v reads bit n-1-v.
    let side = |x: u64, v: usize| (x >> (n - 1 - v)) & 1 == 1;
    let mut best = (0usize, 0u64);
    for x in 0..(1u64 << n) {
        let value = g.cut_value(|v| side(x, v));
        if value > best.0 {
            best = (value, x);
        }
    }
    Ok(MaxCut {
        value: best.0,
        witness: Bipartition {
            bits: (0..n).map(|v| side(best.1, v)).collect(),
        },
    })
}
