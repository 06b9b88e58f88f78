//! Bi-trees: an in-tree and an out-tree glued at a common center.
//!
//! A bi-tree with large sides is built in three moves. A balanced (I, C, O)
//! decomposition is spanned by its cycle plus in-trees hanging into `C` from
//! `I` and out-trees hanging from `C` into `O`. The bi-labels of those trees
//! are then transferred onto their cycle roots. A bi-tree on the bare cycle
//! takes half of each label total, and it is unfolded back through the
//! transfers.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::separator::{balanced_ico, verify_ico, weighted_balanced_ico, IcoDecomposition, Part};

/// Per-vertex pair `(i(x), o(x))` of non-negative weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiLabel {
    pub inward: Vec<u64>,
    pub outward: Vec<u64>,
}

impl BiLabel {
    pub fn unit(n: usize) -> Self {
        BiLabel {
            inward: vec![1; n],
            outward: vec![1; n],
        }
    }

    /// Both components equal to the given vertex weights.
    pub fn from_weights(weights: &[u64]) -> Self {
        BiLabel {
            inward: weights.to_vec(),
            outward: weights.to_vec(),
        }
    }

    pub fn weight(&self) -> (u64, u64) {
        (self.inward.iter().sum(), self.outward.iter().sum())
    }
}

/// A bi-label carried by the positions of a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleLabels {
    /// Cycle vertices in order; the last one has an arc back to the first.
    pub cycle: Vec<Vertex>,
    pub inward: Vec<u64>,
    pub outward: Vec<u64>,
}

impl CycleLabels {
    pub fn weight(&self) -> (u64, u64) {
        (self.inward.iter().sum(), self.outward.iter().sum())
    }
}

/// The cycle of a decomposition with in-trees spanning `I` and out-trees spanning `O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningStructure {
    /// Cycle over `C`, rotated to start at its smallest vertex.
    pub cycle: Vec<Vertex>,
    /// For `I` vertices: the chosen out-neighbor, one step closer to `C`.
    pub in_parent: Vec<Option<Vertex>>,
    /// For `O` vertices: the chosen in-neighbor, one step closer to `C`.
    pub out_parent: Vec<Option<Vertex>>,
    /// Cycle vertex each vertex hangs from; `C` vertices map to themselves.
    pub root: Vec<Vertex>,
    /// Position of each cycle vertex in `cycle`.
    pub cycle_pos: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiTree {
    pub center: Vertex,
    /// Pairs `(child, target)`: the in-tree arc leaving `child` enters `target`.
    pub in_tree: Vec<(Vertex, Vertex)>,
    /// Pairs `(child, parent)`: the out-tree arc entering `child` leaves `parent`.
    pub out_tree: Vec<(Vertex, Vertex)>,
    /// `(Σ i over B⁻, Σ o over B⁺)` under the labels the tree was built with.
    pub value: (u64, u64),
}

impl BiTree {
    /// `B⁻`, center included.
    pub fn in_vertices(&self) -> Vec<Vertex> {
        std::iter::once(self.center)
            .chain(self.in_tree.iter().map(|&(c, _)| c))
            .collect()
    }

    /// `B⁺`, center included.
    pub fn out_vertices(&self) -> Vec<Vertex> {
        std::iter::once(self.center)
            .chain(self.out_tree.iter().map(|&(c, _)| c))
            .collect()
    }

    pub fn in_size(&self) -> usize {
        self.in_tree.len() + 1
    }

    pub fn out_size(&self) -> usize {
        self.out_tree.len() + 1
    }

    /// Value of the tree under an arbitrary bi-label.
    pub fn value_under(&self, labels: &BiLabel) -> (u64, u64) {
        (
            self.in_vertices().iter().map(|&v| labels.inward[v]).sum(),
            self.out_vertices().iter().map(|&v| labels.outward[v]).sum(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("bi-tree serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Graphviz rendering: `B⁻` blue, `B⁺` red, center gold, tree arcs bold.
    pub fn to_dot(&self, d: &Digraph) -> String {
        let mut color = vec!["white"; d.n()];
        for (c, _) in &self.in_tree {
            color[*c] = "lightblue";
        }
        for (c, _) in &self.out_tree {
            color[*c] = "lightpink";
        }
        color[self.center] = "gold";
        let mut tree_arcs: Vec<(Vertex, Vertex)> = self.in_tree.clone();
        tree_arcs.extend(self.out_tree.iter().map(|&(c, p)| (p, c)));
        let mut s = String::from("digraph B {\n");
        for (v, c) in color.iter().enumerate() {
            let _ = writeln!(s, "  {v} [style=filled, fillcolor={c}];");
        }
        for (u, v) in d.arcs() {
            if tree_arcs.contains(&(u, v)) {
                let _ = writeln!(s, "  {u} -> {v} [penwidth=2.5];");
            } else {
                let _ = writeln!(s, "  {u} -> {v} [color=gray];");
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BiTreeViolation {
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("vertex {0} appears twice on the same side")]
    Repeated(Vertex),
    #[error("vertex {0} lies on both sides")]
    Shared(Vertex),
    #[error("arc ({0},{1}) is not in the digraph")]
    MissingArc(Vertex, Vertex),
    #[error("vertex {0} is attached to a vertex outside its side")]
    Dangling(Vertex),
    #[error("vertex {0} is not connected to the center through its side")]
    NotRooted(Vertex),
}

/// Structural check of a bi-tree against the digraph.
pub fn verify_bitree(d: &Digraph, b: &BiTree) -> Result<(), BiTreeViolation> {
    let n = d.n();
    if b.center >= n {
        return Err(BiTreeViolation::OutOfRange(b.center));
    }
    check_side(d, b.center, &b.in_tree, true)?;
    check_side(d, b.center, &b.out_tree, false)?;
    let mut side = vec![false; n];
    for &(c, _) in &b.in_tree {
        side[c] = true;
    }
    if let Some(&(c, _)) = b.out_tree.iter().find(|&&(c, _)| side[c]) {
        return Err(BiTreeViolation::Shared(c));
    }
    Ok(())
}

/// One side: `pairs` are `(child, next)` where `next` is one step closer to the center.
fn check_side(
    d: &Digraph,
    center: Vertex,
    pairs: &[(Vertex, Vertex)],
    inward: bool,
) -> Result<(), BiTreeViolation> {
    let n = d.n();
    let mut next = vec![None; n];
    for &(c, p) in pairs {
        for v in [c, p] {
            if v >= n {
                return Err(BiTreeViolation::OutOfRange(v));
            }
        }
        if c == center || next[c].is_some() {
            return Err(BiTreeViolation::Repeated(c));
        }
        let (u, v) = if inward { (c, p) } else { (p, c) };
        if !d.has_arc(u, v) {
            return Err(BiTreeViolation::MissingArc(u, v));
        }
        next[c] = Some(p);
    }
    for &(c, p) in pairs {
        if p != center && next[p].is_none() {
            return Err(BiTreeViolation::Dangling(c));
        }
    }
    for &(c, _) in pairs {
        let mut v = c;
        let mut steps = 0;
        while v != center {
            v = next[v].ok_or(BiTreeViolation::Dangling(c))?;
            steps += 1;
            if steps > pairs.len() {
                return Err(BiTreeViolation::NotRooted(c));
            }
        }
    }
    Ok(())
}

/// In-forest over `I` and out-forest over `O` hanging from the cycle of `dec`.
/// Each `I` vertex points to the out-neighbor minimizing (distance to `C`
/// inside `I ∪ C`, vertex id); `O` vertices symmetrically.
pub fn spanning_structure(d: &Digraph, dec: &IcoDecomposition) -> Result<SpanningStructure> {
    verify_ico(d, dec).map_err(|e| Error::InvalidDecomposition(e.to_string()))?;
    let n = d.n();
    let parts = dec.parts(n);
    let in_parent = hang_forest(d, dec, &parts, Part::In)?;
    let out_parent = hang_forest(&d.reversed(), dec, &parts, Part::Out)?;

    let mut cycle = dec.cycle.clone();
    let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(start);
    let mut cycle_pos = vec![None; n];
    for (i, &c) in cycle.iter().enumerate() {
        cycle_pos[c] = Some(i);
    }

    let mut root = vec![usize::MAX; n];
    for &c in &cycle {
        root[c] = c;
    }
    for v in 0..n {
        let mut chain = Vec::new();
        let mut w = v;
        while root[w] == usize::MAX {
            chain.push(w);
            w = in_parent[w].or(out_parent[w]).expect("forests reach the cycle");
        }
        let r = root[w];
        for u in chain {
            root[u] = r;
        }
    }
    Ok(SpanningStructure {
        cycle,
        in_parent,
        out_parent,
        root,
        cycle_pos,
    })
}

/// BFS layering from `C` over reversed arcs of `d` restricted to `side`;
/// returns each `side` vertex's chosen out-neighbor in `d`.
fn hang_forest(
    d: &Digraph,
    dec: &IcoDecomposition,
    parts: &[Option<Part>],
    side: Part,
) -> Result<Vec<Option<Vertex>>> {
    let n = d.n();
    let mut dist = vec![usize::MAX; n];
    let mut queue: VecDeque<Vertex> = dec.cycle.iter().copied().collect();
    for &c in &dec.cycle {
        dist[c] = 0;
    }
    while let Some(u) = queue.pop_front() {
        for &p in d.in_neighbors(u) {
            if parts[p] == Some(side) && dist[p] == usize::MAX {
                dist[p] = dist[u] + 1;
                queue.push_back(p);
            }
        }
    }
    let mut parent = vec![None; n];
    for v in (0..n).filter(|&v| parts[v] == Some(side)) {
        if dist[v] == usize::MAX {
            return Err(Error::InvalidDecomposition(format!(
                "vertex {v} is not connected to the cycle inside its part"
            )));
        }
        parent[v] = d
            .out_neighbors(v)
            .iter()
            .copied()
            .find(|&w| dist[w] != usize::MAX && dist[w] + 1 == dist[v]);
    }
    Ok(parent)
}

/// Moves the `i` labels of `I ∪ C` and the `o` labels of `O ∪ C` onto the
/// cycle roots; other label mass is dropped.
pub fn transfer_to_cycle(s: &SpanningStructure, labels: &BiLabel) -> CycleLabels {
    let len = s.cycle.len();
    let mut inward = vec![0; len];
    let mut outward = vec![0; len];
    for v in 0..s.root.len() {
        let pos = s.cycle_pos[s.root[v]].expect("roots lie on the cycle");
        let on_cycle = s.cycle_pos[v].is_some();
        if on_cycle || s.in_parent[v].is_some() {
            inward[pos] += labels.inward[v];
        }
        if on_cycle || s.out_parent[v].is_some() {
            outward[pos] += labels.outward[v];
        }
    }
    CycleLabels {
        cycle: s.cycle.clone(),
        inward,
        outward,
    }
}

/// Bi-tree on a bi-labelled cycle with value at least `(w_i/2, w_o/2)`.
///
/// Takes the shortest run `P` of consecutive cycle vertices with
/// `2·i(P) >= w_i` or `2·o(P) >= w_o` (earliest start on ties). In the first
/// case `P` becomes the in-side ending at its last vertex and the rest of the
/// cycle the out-side; otherwise `P` is the out-side starting at its first
/// vertex and the rest of the cycle runs into it. Minimality of `P` bounds the
/// other side.
pub fn cycle_bitree(labels: &CycleLabels) -> Result<BiTree> {
    let len = labels.cycle.len();
    if len == 0 {
        return Err(Error::EmptyCycle);
    }
    let (wi, wo) = labels.weight();
    let prefix = |vals: &[u64]| -> Vec<u64> {
        let mut p = vec![0u64; 2 * len + 1];
        for j in 0..2 * len {
            p[j + 1] = p[j] + vals[j % len];
        }
        p
    };
    let pi = prefix(&labels.inward);
    let po = prefix(&labels.outward);

    let (start, k, inward_case) = (1..=len)
        .find_map(|k| {
            (0..len).find_map(|s| {
                let i_sum = pi[s + k] - pi[s];
                let o_sum = po[s + k] - po[s];
                if 2 * i_sum >= wi {
                    Some((s, k, true))
                } else if 2 * o_sum >= wo {
                    Some((s, k, false))
                } else {
                    None
                }
            })
        })
        .expect("the whole cycle always qualifies");

    let at = |j: usize| labels.cycle[j % len];
    let mut in_tree = Vec::new();
    let mut out_tree = Vec::new();
    let (center, value) = if inward_case {
        for j in start..start + k - 1 {
            in_tree.push((at(j), at(j + 1)));
        }
        for j in start + k - 1..start + len - 1 {
            out_tree.push((at(j + 1), at(j)));
        }
        let b = po[start + len] - po[start + k - 1];
        (at(start + k - 1), (pi[start + k] - pi[start], b))
    } else {
        for j in start..start + k - 1 {
            out_tree.push((at(j + 1), at(j)));
        }
        for j in start + k..start + len {
            in_tree.push((at(j), at(j + 1)));
        }
        let a = pi[start + len + 1] - pi[start + k];
        (at(start), (a, po[start + k] - po[start]))
    };
    Ok(BiTree {
        center,
        in_tree,
        out_tree,
        value,
    })
}

/// Re-attaches to each cycle vertex of `cb` the whole in-tree (on the in-side)
/// or out-tree (on the out-side) that was transferred onto it.
pub fn unfold(s: &SpanningStructure, cb: &BiTree) -> Result<BiTree> {
    let on_cycle = |v: Vertex| s.cycle_pos.get(v).copied().flatten().is_some();
    let mut in_side = vec![false; s.root.len()];
    let mut out_side = vec![false; s.root.len()];
    for v in cb.in_vertices() {
        if !on_cycle(v) {
            return Err(Error::InvalidBiTree(format!("vertex {v} is not on the cycle")));
        }
        in_side[v] = true;
    }
    for v in cb.out_vertices() {
        if !on_cycle(v) {
            return Err(Error::InvalidBiTree(format!("vertex {v} is not on the cycle")));
        }
        out_side[v] = true;
    }
    let mut tree = cb.clone();
    for v in 0..s.root.len() {
        if let Some(p) = s.in_parent[v] {
            if in_side[s.root[v]] {
                tree.in_tree.push((v, p));
            }
        }
        if let Some(p) = s.out_parent[v] {
            if out_side[s.root[v]] {
                tree.out_tree.push((v, p));
            }
        }
    }
    Ok(tree)
}

/// Bi-tree of a strong digraph with both sides of size at least `n/6`, or,
/// given vertex weights of total `W`, of weight at least `W/6` each.
pub fn balanced_bitree(d: &Digraph, weights: Option<&[u64]>) -> Result<BiTree> {
    let (dec, labels) = match weights {
        None => (balanced_ico(d)?, BiLabel::unit(d.n())),
        Some(w) => (weighted_balanced_ico(d, w)?, BiLabel::from_weights(w)),
    };
    let s = spanning_structure(d, &dec)?;
    let on_cycle = transfer_to_cycle(&s, &labels);
    let cb = cycle_bitree(&on_cycle)?;
    unfold(&s, &cb)
}
