//! Balanced separators spanned by a directed cycle.
//!
//! An (I, C, O) decomposition partitions the vertices so that `C` is spanned
//! by a directed cycle and no arc goes from `I` to `O`. It is balanced when
//! both `I ∪ C` and `O ∪ C` hold more than a third of the vertices. The
//! balanced one is read off a left subtree of a left-maximal DFS tree.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::is_strong;
use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::left_dfs::{left_maximal_dfs, left_maximal_dfs_weighted, left_path, left_subtree, DfsTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    In,
    Cycle,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcoDecomposition {
    /// `I`, sorted.
    #[serde(rename = "I")]
    pub in_part: Vec<Vertex>,
    /// The vertices of `C` in cycle order; the last one closes back to the first.
    #[serde(rename = "C_cycle")]
    pub cycle: Vec<Vertex>,
    /// `O`, sorted.
    #[serde(rename = "O")]
    pub out_part: Vec<Vertex>,
    #[serde(default)]
    pub closing_arc: Option<(Vertex, Vertex)>,
}

impl IcoDecomposition {
    /// Assembles a decomposition from a cycle and the vertex set that must
    /// lie in `I ∪ C`; every other vertex goes to `O`.
    fn from_cycle(n: usize, cycle: Vec<Vertex>, in_side: impl IntoIterator<Item = Vertex>) -> Self {
        let mut part = vec![Part::Out; n];
        for v in in_side {
            part[v] = Part::In;
        }
        for &v in &cycle {
            part[v] = Part::Cycle;
        }
        let pick = |p: Part| (0..n).filter(|&v| part[v] == p).collect::<Vec<_>>();
        let closing_arc = closing(&cycle);
        IcoDecomposition {
            in_part: pick(Part::In),
            out_part: pick(Part::Out),
            cycle,
            closing_arc,
        }
    }

    pub fn n(&self) -> usize {
        self.in_part.len() + self.cycle.len() + self.out_part.len()
    }

    /// Part of every vertex; vertices listed nowhere are reported as `None`.
    pub fn parts(&self, n: usize) -> Vec<Option<Part>> {
        let mut part = vec![None; n];
        for (list, p) in [
            (&self.in_part, Part::In),
            (&self.cycle, Part::Cycle),
            (&self.out_part, Part::Out),
        ] {
            for &v in list {
                if v < n {
                    part[v] = Some(p);
                }
            }
        }
        part
    }

    /// `|I ∪ C|`.
    pub fn in_side_size(&self) -> usize {
        self.in_part.len() + self.cycle.len()
    }

    /// `|O ∪ C|`.
    pub fn out_side_size(&self) -> usize {
        self.out_part.len() + self.cycle.len()
    }

    /// Total weights of `I ∪ C` and `O ∪ C`.
    pub fn side_weights(&self, weights: &[u64]) -> (u64, u64) {
        let sum = |vs: &[Vertex]| vs.iter().map(|&v| weights[v]).sum::<u64>();
        let c = sum(&self.cycle);
        (sum(&self.in_part) + c, sum(&self.out_part) + c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Graphviz rendering with `I`, `C` and `O` in distinct colors and cycle arcs bold.
    pub fn to_dot(&self, d: &Digraph) -> String {
        let parts = self.parts(d.n());
        let mut s = String::from("digraph ICO {\n");
        for (v, p) in parts.iter().enumerate() {
            let color = match p {
                Some(Part::In) => "lightblue",
                Some(Part::Cycle) => "gold",
                Some(Part::Out) => "lightpink",
                None => "white",
            };
            let _ = writeln!(s, "  {v} [style=filled, fillcolor={color}];");
        }
        let cycle_arcs: Vec<(Vertex, Vertex)> = cycle_arcs(&self.cycle).collect();
        for (u, v) in d.arcs() {
            if cycle_arcs.contains(&(u, v)) {
                let _ = writeln!(s, "  {u} -> {v} [penwidth=2.5];");
            } else {
                let _ = writeln!(s, "  {u} -> {v} [color=gray];");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn closing(cycle: &[Vertex]) -> Option<(Vertex, Vertex)> {
    match cycle {
        [first, .., last] => Some((*last, *first)),
        _ => None,
    }
}

/// Consecutive arcs of a cycle, the closing arc last. Empty for cycles of length below 2.
pub(crate) fn cycle_arcs(cycle: &[Vertex]) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
    let len = if cycle.len() >= 2 { cycle.len() } else { 0 };
    (0..len).map(move |i| (cycle[i], cycle[(i + 1) % cycle.len()]))
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum IcoViolation {
    #[error("vertex {0} is missing or listed in more than one part")]
    NotPartition(Vertex),
    #[error("the cycle is empty")]
    EmptyCycle,
    #[error("arc ({0},{1}) of the cycle is not in the digraph")]
    MissingCycleArc(Vertex, Vertex),
    #[error("recorded closing arc does not close the cycle")]
    WrongClosingArc,
    #[error("arc ({0},{1}) goes from I to O")]
    ArcFromInToOut(Vertex, Vertex),
    #[error("unbalanced: |I∪C| = {in_side}, |O∪C| = {out_side}, n = {n}")]
    Unbalanced {
        in_side: usize,
        out_side: usize,
        n: usize,
    },
}

/// Checks the partition, the cycle spanning `C`, and the absence of `I → O` arcs.
pub fn verify_ico(d: &Digraph, dec: &IcoDecomposition) -> Result<(), IcoViolation> {
    let n = d.n();
    let mut count = vec![0usize; n];
    for &v in dec.in_part.iter().chain(&dec.cycle).chain(&dec.out_part) {
        if v >= n {
            return Err(IcoViolation::NotPartition(v));
        }
        count[v] += 1;
    }
    if let Some(v) = (0..n).find(|&v| count[v] != 1) {
        return Err(IcoViolation::NotPartition(v));
    }
    if dec.cycle.is_empty() {
        return Err(IcoViolation::EmptyCycle);
    }
    if dec.cycle.len() == 1 && n > 1 {
        // A lone vertex only spans a cycle in the one-vertex digraph.
        return Err(IcoViolation::MissingCycleArc(dec.cycle[0], dec.cycle[0]));
    }
    for (u, v) in cycle_arcs(&dec.cycle) {
        if !d.has_arc(u, v) {
            return Err(IcoViolation::MissingCycleArc(u, v));
        }
    }
    if dec.closing_arc != closing(&dec.cycle) {
        return Err(IcoViolation::WrongClosingArc);
    }
    let parts = dec.parts(n);
    for &u in &dec.in_part {
        if let Some(&v) = d.out_neighbors(u).iter().find(|&&v| parts[v] == Some(Part::Out)) {
            return Err(IcoViolation::ArcFromInToOut(u, v));
        }
    }
    Ok(())
}

/// [`verify_ico`] plus the balance condition `3|I∪C| > n` and `3|O∪C| > n`.
pub fn verify_ico_balanced(d: &Digraph, dec: &IcoDecomposition) -> Result<(), IcoViolation> {
    verify_ico(d, dec)?;
    let n = d.n();
    let (in_side, out_side) = (dec.in_side_size(), dec.out_side_size());
    if 3 * in_side <= n || 3 * out_side <= n {
        return Err(IcoViolation::Unbalanced {
            in_side,
            out_side,
            n,
        });
    }
    Ok(())
}

/// A left subtree `T_{x,y}` with `n/3 < |T_{x,y}| < 2n/3`.
///
/// Walks the left path to the first `z` with `|T_z| <= n/3`; `x` is its
/// parent. If `|T_z| = n/3` the answer is `(x, z)`, otherwise the rightmost
/// child `y` of `x` keeping `|T_{x,y}| < 2n/3`.
pub fn balanced_left_subtree(t: &DfsTree) -> Result<(Vertex, Vertex)> {
    let n = t.n();
    if n < 4 {
        return Err(Error::TooSmall { n, min: 4 });
    }
    let path = left_path(t);
    let z = *path
        .iter()
        .find(|&&z| 3 * t.subtree_size[z] <= n)
        .expect("the leaf of the left path has size 1 <= n/3");
    let x = t.parent[z].expect("the root has size n > n/3");
    if 3 * t.subtree_size[z] == n {
        return Ok((x, z));
    }
    let mut size = 1;
    let mut best = None;
    for &c in &t.children[x] {
        size += t.subtree_size[c];
        if 3 * size < 2 * n {
            best = Some(c);
        }
    }
    Ok((x, best.expect("the leftmost child keeps the subtree below 2n/3")))
}

/// Weighted counterpart of [`balanced_left_subtree`] for a tree that is
/// left-maximal with respect to `weights`.
///
/// The returned `(x, y)` guarantees, with `W` the total weight, that
/// `w(T_{x,y}) >= W/3` and `w(V - T_{x,y}) + w(x) >= W/3`; when the left path
/// ends in a single vertex heavier than `W/3` it returns the leaf's parent
/// and the leaf, whose decomposition puts that vertex on the cycle.
pub fn weighted_balanced_left_subtree(t: &DfsTree, weights: &[u64]) -> Result<(Vertex, Vertex)> {
    let n = t.n();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let sub = t.subtree_weights(weights);
    let total = sub[t.root];
    let path = left_path(t);
    let x = *path
        .iter()
        .rev()
        .find(|&&v| 3 * sub[v] > total)
        .unwrap_or(&t.root);
    if t.children[x].is_empty() {
        let p = t.parent[x].expect("n >= 2 so the leaf is not the root");
        return Ok((p, x));
    }
    let mut prefix = 0;
    let mut best = t.children[x][0];
    for &c in &t.children[x] {
        prefix += sub[c];
        if 3 * prefix <= 2 * total {
            best = c;
        }
    }
    Ok((x, best))
}

/// The decomposition attached to the left subtree `T_{x,y}` of a DFS tree:
/// `C` is the tree path from `v` down to `u` closed by the arc `uv`, where
/// `uv` leaves `T_{x,y} - x` towards the left path and `v` is as close to the
/// root as possible (ties: smallest `u`). `T_{x,y} ⊆ I ∪ C` and the rest of
/// the vertices lie in `O ∪ C`.
pub fn ico_from_left_subtree(
    d: &Digraph,
    t: &DfsTree,
    x: Vertex,
    y: Vertex,
) -> Result<IcoDecomposition> {
    let n = d.n();
    let path = left_path(t);
    let mut path_depth = vec![None; n];
    for (i, &v) in path.iter().enumerate() {
        path_depth[v] = Some(i);
    }
    let x_depth = path_depth
        .get(x)
        .copied()
        .flatten()
        .ok_or(Error::NotOnLeftPath { vertex: x })?;
    let subtree = left_subtree(t, x, y)?;
    let mut in_subtree = vec![false; n];
    for &v in &subtree {
        in_subtree[v] = true;
    }

    let mut best: Option<(usize, Vertex, Vertex)> = None;
    for &u in subtree.iter().filter(|&&u| u != x) {
        for &v in d.out_neighbors(u) {
            if let Some(dv) = path_depth[v].filter(|&dv| dv <= x_depth) {
                if best.is_none_or(|(bd, bu, _)| (dv, u) < (bd, bu)) {
                    best = Some((dv, u, v));
                }
            }
        }
    }
    let (_, u, v) = best.ok_or(Error::NoClosingArc)?;

    let mut cycle = vec![u];
    let mut w = u;
    while w != v {
        w = t.parent[w].ok_or(Error::NoClosingArc)?;
        cycle.push(w);
    }
    cycle.reverse();
    Ok(IcoDecomposition::from_cycle(n, cycle, subtree))
}

/// A balanced decomposition of a strong digraph, from a left-maximal DFS tree
/// rooted at vertex 0. Digraphs with at most 3 vertices use the shortest
/// cycle through vertex 0 and put any leftover vertex in `I`.
pub fn balanced_ico(d: &Digraph) -> Result<IcoDecomposition> {
    let n = d.n();
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    if n <= 3 {
        let cycle = shortest_cycle_through(d, 0);
        return Ok(IcoDecomposition::from_cycle(n, cycle, 0..n));
    }
    let t = left_maximal_dfs(d, 0)?;
    let (x, y) = balanced_left_subtree(&t)?;
    ico_from_left_subtree(d, &t, x, y)
}

/// A decomposition of a strong digraph with `w(I ∪ C) >= W/3` and
/// `w(O ∪ C) >= W/3` for non-negative vertex weights of total `W`.
pub fn weighted_balanced_ico(d: &Digraph, weights: &[u64]) -> Result<IcoDecomposition> {
    let n = d.n();
    if weights.len() != n {
        return Err(Error::InvalidParameter(format!(
            "expected {n} weights, got {}",
            weights.len()
        )));
    }
    if n <= 1 || weights.iter().all(|&w| w == 0) {
        return balanced_ico(d);
    }
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    let t = left_maximal_dfs_weighted(d, 0, weights)?;
    let (x, y) = weighted_balanced_left_subtree(&t, weights)?;
    ico_from_left_subtree(d, &t, x, y)
}

/// Shortest directed cycle through `s` (BFS, smallest ids first); `[s]` when
/// `s` lies on no cycle.
fn shortest_cycle_through(d: &Digraph, s: Vertex) -> Vec<Vertex> {
    let n = d.n();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if d.has_arc(u, s) {
            let mut cycle = vec![u];
            let mut w = u;
            while let Some(p) = parent[w] {
                cycle.push(p);
                w = p;
            }
            cycle.reverse();
            return cycle;
        }
        for &w in d.out_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    vec![s]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_bioriented, gen_circuit, gen_random_strong};
    use crate::left_dfs::left_subtree_size;

    #[test]
    fn circuit_six_window() {
        let c = gen_circuit(6).unwrap();
        let t = left_maximal_dfs(&c, 0).unwrap();
        let (x, y) = balanced_left_subtree(&t).unwrap();
        assert_eq!((x, y), (3, 4));
        assert_eq!(left_subtree_size(&t, x, y).unwrap(), 3);
        let dec = ico_from_left_subtree(&c, &t, x, y).unwrap();
        assert!(dec.in_part.is_empty() && dec.out_part.is_empty());
        assert_eq!(dec.cycle, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(dec.closing_arc, Some((5, 0)));
    }

    #[test]
    fn star_of_two_cycles() {
        let edges: Vec<(usize, usize)> = (1..=9).map(|l| (0, l)).collect();
        let star = gen_bioriented(10, &edges).unwrap();
        let t = left_maximal_dfs(&star, 0).unwrap();
        let (x, y) = balanced_left_subtree(&t).unwrap();
        assert_eq!(x, 0);
        let size = left_subtree_size(&t, x, y).unwrap();
        assert!((4..=6).contains(&size));
        assert_eq!(size, 6);
        let dec = ico_from_left_subtree(&star, &t, x, y).unwrap();
        assert!(verify_ico_balanced(&star, &dec).is_ok());
    }

    #[test]
    fn too_small_for_window() {
        let t = left_maximal_dfs(&gen_circuit(3).unwrap(), 0).unwrap();
        assert_eq!(balanced_left_subtree(&t), Err(Error::TooSmall { n: 3, min: 4 }));
    }

    #[test]
    fn small_cases() {
        let two = gen_circuit(2).unwrap();
        let dec = balanced_ico(&two).unwrap();
        assert_eq!(dec.cycle, vec![0, 1]);
        assert!(dec.in_part.is_empty() && dec.out_part.is_empty());

        let three = gen_circuit(3).unwrap();
        assert_eq!(balanced_ico(&three).unwrap().cycle, vec![0, 1, 2]);

        // Bi-oriented path 1 - 0 - 2: shortest cycle through 0 is 0 <-> 1.
        let p = gen_bioriented(3, &[(0, 1), (0, 2)]).unwrap();
        let dec = balanced_ico(&p).unwrap();
        assert_eq!(dec.cycle, vec![0, 1]);
        assert_eq!(dec.in_part, vec![2]);
        assert!(verify_ico_balanced(&p, &dec).is_ok());

        let one = Digraph::empty(1);
        let dec = balanced_ico(&one).unwrap();
        assert_eq!(dec.cycle, vec![0]);
        assert_eq!(dec.closing_arc, None);
        assert!(verify_ico_balanced(&one, &dec).is_ok());
    }

    #[test]
    fn rejects_non_strong() {
        let d = Digraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(balanced_ico(&d), Err(Error::NotStrong));
    }

    #[test]
    fn verify_catches_corruption() {
        let d = gen_random_strong(30, 25, 7).unwrap();
        let dec = balanced_ico(&d).unwrap();
        assert!(verify_ico_balanced(&d, &dec).is_ok());

        let mut moved = dec.clone();
        let v = moved.cycle.pop().unwrap();
        moved.in_part.push(v);
        moved.closing_arc = closing(&moved.cycle);
        assert!(verify_ico(&d, &moved).is_err());

        if let (Some(&i), Some(&o)) = (dec.in_part.first(), dec.out_part.first()) {
            let arcs: Vec<_> = d.arcs().chain([(i, o)]).collect();
            let d2 = Digraph::new(d.n(), arcs).unwrap();
            assert_eq!(verify_ico(&d2, &dec), Err(IcoViolation::ArcFromInToOut(i, o)));
        }
    }

    #[test]
    fn closing_arc_may_end_at_x() {
        // Hub x = 1 on the left path; its left subtree only links back to x itself.
        let d = Digraph::new(
            7,
            [(0, 1), (1, 0), (1, 2), (2, 3), (3, 1), (1, 4), (4, 1), (1, 5), (5, 6), (6, 0)],
        )
        .unwrap();
        let t = left_maximal_dfs(&d, 0).unwrap();
        let x = 1;
        let y = t.children[x][0];
        let dec = ico_from_left_subtree(&d, &t, x, y).unwrap();
        assert_eq!(dec.closing_arc.unwrap().1, x);
        assert!(verify_ico(&d, &dec).is_ok());
    }

    #[test]
    fn json_shape() {
        let dec = balanced_ico(&gen_circuit(5).unwrap()).unwrap();
        let json = dec.to_json();
        assert!(json.contains("\"C_cycle\""));
        assert!(json.contains("\"closing_arc\":[4,0]"));
        assert_eq!(IcoDecomposition::from_json(&json).unwrap(), dec);
    }

    #[test]
    fn weighted_balance_with_heavy_vertex() {
        let d = gen_random_strong(12, 10, 2).unwrap();
        let mut weights = vec![0u64; 12];
        weights[7] = 10;
        weights[3] = 1;
        let dec = weighted_balanced_ico(&d, &weights).unwrap();
        assert!(verify_ico(&d, &dec).is_ok());
        let (a, b) = dec.side_weights(&weights);
        assert!(3 * a >= 11 && 3 * b >= 11);
    }
}
