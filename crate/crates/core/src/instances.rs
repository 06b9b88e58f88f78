//! Generators: the gap construction with few balanced forward bi-trees, the
//! binary-tree request instance, circuits, bi-orientations and seeded random
//! families.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectivity::is_strong;
use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::ordering::VertexOrdering;
use crate::requests::RequestSet;

/// Directed circuit `0 -> 1 -> ... -> n-1 -> 0`.
pub fn gen_circuit(n: usize) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    Digraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Replaces every edge `{u, v}` by the arcs `uv` and `vu`. The graph must be connected.
pub fn gen_bioriented(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Digraph> {
    let d = Digraph::new(n, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]))?;
    if !is_strong(&d) {
        return Err(Error::Disconnected);
    }
    Ok(d)
}

/// A Hamiltonian circuit through a random permutation plus `extra_arcs`
/// further distinct random arcs. Identical seeds give identical digraphs.
pub fn gen_random_strong(n: usize, extra_arcs: usize, seed: u64) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let capacity = n * (n - 2);
    if extra_arcs > capacity {
        return Err(Error::InvalidParameter(format!(
            "{extra_arcs} extra arcs requested, only {capacity} fit"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut arcs: Vec<(Vertex, Vertex)> = (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect();
    let mut used: HashSet<(Vertex, Vertex)> = arcs.iter().copied().collect();
    if n == 2 {
        // The circuit already holds both possible arcs.
        return Digraph::new(n, arcs);
    }
    if 2 * extra_arcs <= capacity {
        while arcs.len() < n + extra_arcs {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && used.insert((u, v)) {
                arcs.push((u, v));
            }
        }
    } else {
        let mut candidates: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && !used.contains(&(u, v)))
            .collect();
        let (chosen, _) = candidates.partial_shuffle(&mut rng, extra_arcs);
        arcs.extend_from_slice(chosen);
    }
    Digraph::new(n, arcs)
}

/// Edges of a uniformly grown random tree: vertices are attached in a random
/// order, each to a random earlier one.
pub fn random_tree_edges(n: usize, seed: u64) -> Vec<(Vertex, Vertex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    (1..n)
        .map(|i| {
            let p = order[rng.gen_range(0..i)];
            (p.min(order[i]), p.max(order[i]))
        })
        .collect()
}

/// Random tree edges plus `extra_edges` further distinct edges.
pub fn random_connected_edges(n: usize, extra_edges: usize, seed: u64) -> Result<Vec<(Vertex, Vertex)>> {
    let capacity = (n * n.saturating_sub(1) / 2).saturating_sub(n.saturating_sub(1));
    if extra_edges > capacity {
        return Err(Error::InvalidParameter(format!(
            "{extra_edges} extra edges requested, only {capacity} fit"
        )));
    }
    let mut edges = random_tree_edges(n, seed);
    let mut used: HashSet<(Vertex, Vertex)> = edges.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    if 2 * extra_edges <= capacity {
        while used.len() < n - 1 + extra_edges {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && used.insert((u.min(v), u.max(v))) {
                edges.push((u.min(v), u.max(v)));
            }
        }
    } else {
        let mut candidates: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|e| !used.contains(e))
            .collect();
        let (chosen, _) = candidates.partial_shuffle(&mut rng, extra_edges);
        edges.extend_from_slice(chosen);
    }
    Ok(edges)
}

/// Bi-orientation of a random tree on `n` vertices.
pub fn gen_random_tree(n: usize, seed: u64) -> Result<Digraph> {
    gen_bioriented(n, &random_tree_edges(n, seed))
}

/// Bi-orientation of a random connected graph with `n - 1 + extra_edges` edges.
pub fn gen_random_connected(n: usize, extra_edges: usize, seed: u64) -> Result<Digraph> {
    gen_bioriented(n, &random_connected_edges(n, extra_edges, seed)?)
}

/// Minimally strong digraph with quadratically many forward couples under its
/// canonical enumeration, yet only small balanced bi-trees of forward arcs.
///
/// Numbering: `x`, then `A` (block `A_i` after block `A_{i-1}`), `A'`, `X`
/// (row-major in `x_{i,j}`), `B'`, `B` (block `B_j` after `B_{j-1}`), `y`.
/// The canonical enumeration is therefore the identity.
#[derive(Clone, Debug)]
pub struct Prop2Instance {
    pub k: usize,
    pub digraph: Digraph,
    pub x: Vertex,
    pub y: Vertex,
    /// `a_blocks[i]` is `A_i`.
    pub a_blocks: Vec<Vec<Vertex>>,
    /// `a_prime[i]` is `a_i`.
    pub a_prime: Vec<Vertex>,
    /// `x_grid[i][j]` is `x_{i,j}`.
    pub x_grid: Vec<Vec<Vertex>>,
    /// `b_prime[j]` is `b_j`.
    pub b_prime: Vec<Vertex>,
    /// `b_blocks[j]` is `B_j`.
    pub b_blocks: Vec<Vec<Vertex>>,
    pub canonical: VertexOrdering,
}

pub fn gen_prop2(k: usize) -> Result<Prop2Instance> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let kk = k * k;
    let n = 3 * kk + 2 * k + 2;
    let x = 0;
    let a_start = 1;
    let ap_start = a_start + kk;
    let x_start = ap_start + k;
    let bp_start = x_start + kk;
    let b_start = bp_start + k;
    let y = b_start + kk;
    debug_assert_eq!(y, n - 1);

    let a_blocks: Vec<Vec<Vertex>> = (0..k)
        .map(|i| (0..k).map(|t| a_start + i * k + t).collect())
        .collect();
    let a_prime: Vec<Vertex> = (0..k).map(|i| ap_start + i).collect();
    let x_grid: Vec<Vec<Vertex>> = (0..k)
        .map(|i| (0..k).map(|j| x_start + i * k + j).collect())
        .collect();
    let b_prime: Vec<Vertex> = (0..k).map(|j| bp_start + j).collect();
    let b_blocks: Vec<Vec<Vertex>> = (0..k)
        .map(|j| (0..k).map(|t| b_start + j * k + t).collect())
        .collect();

    let mut arcs = Vec::with_capacity(6 * kk + 1);
    for i in 0..k {
        for &a in &a_blocks[i] {
            arcs.push((x, a));
            arcs.push((a, a_prime[i]));
        }
        for j in 0..k {
            arcs.push((a_prime[i], x_grid[i][j]));
            arcs.push((x_grid[i][j], b_prime[j]));
        }
    }
    for j in 0..k {
        for &b in &b_blocks[j] {
            arcs.push((b_prime[j], b));
            arcs.push((b, y));
        }
    }
    arcs.push((y, x));

    Ok(Prop2Instance {
        k,
        digraph: Digraph::new(n, arcs)?,
        x,
        y,
        a_blocks,
        a_prime,
        x_grid,
        b_prime,
        b_blocks,
        canonical: VertexOrdering::identity(n),
    })
}

/// How each internal node pairs its left-descendant leaves with its
/// right-descendant leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingMode {
    /// The i-th left leaf with the i-th right leaf, left to right.
    Identity,
    /// Leaves whose indices differ exactly in the bit of the node's height;
    /// the requests then form a hypercube on the leaves.
    Hypercube,
    /// A seeded uniformly random perfect matching per node.
    Random(u64),
}

/// The requests contributed by one internal node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMatching {
    pub node: Vertex,
    /// Pairs `(left leaf, right leaf)`.
    pub pairs: Vec<(Vertex, Vertex)>,
}

/// Bi-oriented complete binary tree of height `h` in heap numbering (root 0,
/// children `2v+1` and `2v+2`) with recursively matched leaf requests.
#[derive(Clone, Debug)]
pub struct RequestInstance {
    pub h: usize,
    pub digraph: Digraph,
    pub requests: RequestSet,
    /// One record per internal node, in heap order.
    pub matchings: Vec<NodeMatching>,
}

impl RequestInstance {
    pub fn n_leaves(&self) -> usize {
        1 << self.h
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> std::ops::Range<Vertex> {
        (1 << self.h) - 1..(1 << (self.h + 1)) - 1
    }

    /// Rebuilds an instance from a digraph and request list read from files,
    /// checking the tree shape and that requests decompose into per-node
    /// perfect matchings.
    pub fn from_parts(digraph: Digraph, requests: RequestSet) -> Result<Self> {
        let n = digraph.n();
        if n < 3 || (n + 1).count_ones() != 1 {
            return Err(Error::InvalidRequest(format!(
                "{n} vertices is not a complete binary tree of height at least 1"
            )));
        }
        let h = (n + 1).trailing_zeros() as usize - 1;
        let tree = binary_tree(h)?;
        if tree != digraph {
            return Err(Error::InvalidRequest(
                "digraph is not the bi-oriented complete binary tree in heap numbering".into(),
            ));
        }
        let leaves = (1 << h) - 1..n;
        let mut matchings: Vec<NodeMatching> = (0..(1 << h) - 1)
            .map(|node| NodeMatching { node, pairs: Vec::new() })
            .collect();
        for &(u, v) in requests.pairs() {
            if !leaves.contains(&u) || !leaves.contains(&v) {
                return Err(Error::InvalidRequest(format!("request {{{u},{v}}} is not between leaves")));
            }
            let node = lca(u, v);
            let (l, r) = if u < v { (u, v) } else { (v, u) };
            matchings[node].pairs.push((l, r));
        }
        for m in &mut matchings {
            m.pairs.sort_unstable();
            let (left, right) = (subtree_leaves(2 * m.node + 1, n), subtree_leaves(2 * m.node + 2, n));
            let mut lefts: Vec<Vertex> = m.pairs.iter().map(|p| p.0).collect();
            let mut rights: Vec<Vertex> = m.pairs.iter().map(|p| p.1).collect();
            lefts.sort_unstable();
            rights.sort_unstable();
            if lefts != left || rights != right {
                return Err(Error::InvalidRequest(format!(
                    "requests at node {} are not a perfect matching of its two leaf sets",
                    m.node
                )));
            }
        }
        Ok(RequestInstance {
            h,
            digraph,
            requests,
            matchings,
        })
    }
}

fn binary_tree(h: usize) -> Result<Digraph> {
    let n = (1usize << (h + 1)) - 1;
    let edges: Vec<(Vertex, Vertex)> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
    gen_bioriented(n, &edges)
}

/// Lowest common ancestor in heap numbering.
fn lca(mut u: Vertex, mut v: Vertex) -> Vertex {
    while u != v {
        if u > v {
            u = (u - 1) / 2;
        } else {
            v = (v - 1) / 2;
        }
    }
    u
}

/// Leaves below `v`, left to right, in a complete binary tree on `n` vertices.
fn subtree_leaves(v: Vertex, n: usize) -> Vec<Vertex> {
    let (mut lo, mut hi) = (v, v);
    while 2 * lo + 1 < n {
        lo = 2 * lo + 1;
        hi = 2 * hi + 2;
    }
    (lo..=hi).collect()
}

pub fn gen_binary_tree_requests(h: usize, mode: MatchingMode) -> Result<RequestInstance> {
    if h < 1 {
        return Err(Error::InvalidParameter("height must be at least 1".into()));
    }
    if h > 20 {
        return Err(Error::TooLarge { n: h, max: 20 });
    }
    let digraph = binary_tree(h)?;
    let n = digraph.n();
    let first_leaf = (1 << h) - 1;
    let mut rng = match mode {
        MatchingMode::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut matchings = Vec::with_capacity(first_leaf);
    for node in 0..first_leaf {
        let left = subtree_leaves(2 * node + 1, n);
        let mut right = subtree_leaves(2 * node + 2, n);
        let pairs: Vec<(Vertex, Vertex)> = match mode {
            MatchingMode::Identity => left.iter().copied().zip(right.iter().copied()).collect(),
            MatchingMode::Hypercube => {
                let bit = left.len();
                left.iter()
                    .map(|&l| (l, first_leaf + ((l - first_leaf) ^ bit)))
                    .collect()
            }
            MatchingMode::Random(_) => {
                right.shuffle(rng.as_mut().expect("rng exists in random mode"));
                left.iter().copied().zip(right.iter().copied()).collect()
            }
        };
        matchings.push(NodeMatching { node, pairs });
    }
    let requests = RequestSet::new(matchings.iter().flat_map(|m| m.pairs.iter().copied()).collect())?;
    Ok(RequestInstance {
        h,
        digraph,
        requests,
        matchings,
    })
}
