//! Simple digraphs on the vertex set `0..n`.
//!
//! Self-loops and parallel arcs are rejected; 2-cycles are allowed. Both
//! adjacency directions are kept sorted so that arc lookup is a binary search.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Digraph {
    n: usize,
    m: usize,
    out_adj: Vec<Vec<Vertex>>,
    in_adj: Vec<Vec<Vertex>>,
}

impl Digraph {
    /// Builds a digraph, rejecting self-loops, duplicates and out-of-range endpoints.
    pub fn new<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for (index, (u, v)) in arcs.into_iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { index, vertex: u });
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateArc {
                    index,
                    tail: u,
                    head: v,
                });
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        let m = seen.len();
        Ok(Digraph {
            n,
            m,
            out_adj,
            in_adj,
        })
    }

    /// Digraph with `n` vertices and no arcs.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            m: 0,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.in_adj[v]
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.out_adj[u].binary_search(&v).is_ok()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Copy of this digraph keeping only the arcs accepted by `keep`.
    pub fn filter_arcs(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> Digraph {
        let mut out_adj = vec![Vec::new(); self.n];
        let mut in_adj = vec![Vec::new(); self.n];
        let mut m = 0;
        for (u, v) in self.arcs() {
            if keep(u, v) {
                out_adj[u].push(v);
                in_adj[v].push(u);
                m += 1;
            }
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        Digraph {
            n: self.n,
            m,
            out_adj,
            in_adj,
        }
    }

    /// The same digraph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            m: self.m,
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
        }
    }

    /// True if every arc `uv` has its reverse `vu`.
    pub fn is_bioriented(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    /// Parses the edge-list text format: `#` comments, a header line `n m`,
    /// then `m` lines `u v`.
    pub fn parse(text: &str) -> Result<Digraph> {
        let mut lines = data_lines(text);
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing header line \"n m\"".into(),
        })?;
        let [n, m] = parse_fields::<2>(line, header)?;
        let mut arcs = Vec::with_capacity(m);
        for (line, body) in lines.by_ref().take(m) {
            let [u, v] = parse_fields::<2>(line, body)?;
            arcs.push((u, v));
        }
        if arcs.len() != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("header announces {m} arcs, found {}", arcs.len()),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                message: "unexpected data after the last arc".into(),
            });
        }
        Digraph::new(n, arcs)
    }

    /// Serializes to the edge-list text format with arcs sorted lexicographically.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m);
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// Graphviz rendering of the digraph.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph D {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  {v};");
        }
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "  {u} -> {v};");
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_fields<const K: usize>(line: usize, body: &str) -> Result<[usize; K]> {
    let mut out = [0usize; K];
    let mut fields = body.split_whitespace();
    for slot in out.iter_mut() {
        let tok = fields.next().ok_or_else(|| Error::Parse {
            line,
            message: format!("expected {K} integers"),
        })?;
        *slot = tok.parse().map_err(|_| Error::Parse {
            line,
            message: format!("not a non-negative integer: {tok:?}"),
        })?;
    }
    if fields.next().is_some() {
        return Err(Error::Parse {
            line,
            message: format!("expected exactly {K} integers"),
        });
    }
    Ok(out)
}
