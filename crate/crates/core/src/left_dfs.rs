//! Left-maximal depth-first search trees.
//!
//! A DFS tree here is a spanning out-tree whose children carry a left-to-right
//! order such that every arc between two disjoint sibling subtrees points from
//! right to left. It is *left-maximal* when child subtree sizes never increase
//! from left to right.
//!
//! Construction peels off, at each step, the largest out-section of
//! `D[S] - x` hanging below the current root `x`, makes it the next child
//! subtree and recurses on both parts. An explicit work stack replaces the
//! recursion so path-like inputs cannot overflow the call stack.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::{condense_within, scc_within};
use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DfsTree {
    pub root: Vertex,
    pub parent: Vec<Option<Vertex>>,
    /// Children of each vertex, leftmost first.
    pub children: Vec<Vec<Vertex>>,
    pub subtree_size: Vec<usize>,
    /// Preorder visit number with children taken left to right.
    pub dfs_index: Vec<usize>,
}

#[derive(Deserialize)]
struct TreeShape {
    root: Vertex,
    children: Vec<Vec<Vertex>>,
}

impl DfsTree {
    /// Builds a tree from its ordered child lists, deriving parents, subtree
    /// sizes and preorder numbers. Fails unless the lists describe an
    /// out-tree spanning `0..children.len()` from `root`.
    pub fn from_children(root: Vertex, children: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = children.len();
        if root >= n {
            return Err(Error::InvalidTree(format!("root {root} out of range")));
        }
        let mut parent = vec![None; n];
        let mut dfs_index = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if dfs_index[v] != usize::MAX {
                return Err(Error::InvalidTree(format!("vertex {v} reached twice")));
            }
            dfs_index[v] = order.len();
            order.push(v);
            for &c in children[v].iter().rev() {
                if c >= n {
                    return Err(Error::InvalidTree(format!("child {c} out of range")));
                }
                if c == root || parent[c].is_some() {
                    return Err(Error::InvalidTree(format!("vertex {c} has two parents")));
                }
                parent[c] = Some(v);
                stack.push(c);
            }
        }
        if order.len() != n {
            let missing = (0..n).find(|&v| dfs_index[v] == usize::MAX).unwrap();
            return Err(Error::InvalidTree(format!("vertex {missing} not spanned")));
        }
        let mut subtree_size = vec![1; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                subtree_size[p] += subtree_size[v];
            }
        }
        Ok(DfsTree {
            root,
            parent,
            children,
            subtree_size,
            dfs_index,
        })
    }

    /// Reads the JSON form; only `root` and `children` are used, the rest is rederived.
    pub fn from_json(text: &str) -> Result<Self> {
        let shape: TreeShape = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        DfsTree::from_children(shape.root, shape.children)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serializes")
    }

    pub fn n(&self) -> usize {
        self.children.len()
    }

    /// Vertices in preorder.
    pub fn preorder(&self) -> Vec<Vertex> {
        let mut order = vec![0; self.n()];
        for (v, &i) in self.dfs_index.iter().enumerate() {
            order[i] = v;
        }
        order
    }

    /// True if `a` is an ancestor of `b` (or equal to it).
    pub fn is_ancestor(&self, a: Vertex, b: Vertex) -> bool {
        let (ia, ib) = (self.dfs_index[a], self.dfs_index[b]);
        ia <= ib && ib < ia + self.subtree_size[a]
    }

    pub fn depth(&self, mut v: Vertex) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
        }
        d
    }

    /// Vertices of the subtree rooted at `v`.
    pub fn subtree(&self, v: Vertex) -> Vec<Vertex> {
        let order = self.preorder();
        let start = self.dfs_index[v];
        order[start..start + self.subtree_size[v]].to_vec()
    }

    /// Total weight of each subtree.
    pub fn subtree_weights(&self, weights: &[u64]) -> Vec<u64> {
        let mut total = weights.to_vec();
        for v in self.preorder().into_iter().rev() {
            if let Some(p) = self.parent[v] {
                total[p] += total[v];
            }
        }
        total
    }

    /// Graphviz rendering: tree arcs solid, other arcs dashed, siblings kept
    /// in left-to-right order by invisible rank constraints.
    pub fn to_dot(&self, d: &Digraph) -> String {
        let mut s = String::from("digraph T {\n  ordering=out;\n");
        for v in 0..self.n() {
            let _ = writeln!(s, "  {v} [label=\"{v} ({})\"];", self.dfs_index[v]);
        }
        for (u, v) in d.arcs() {
            if self.parent[v] == Some(u) {
                let _ = writeln!(s, "  {u} -> {v};");
            } else {
                let _ = writeln!(s, "  {u} -> {v} [style=dashed, color=gray, constraint=false];");
            }
        }
        for kids in self.children.iter().filter(|k| k.len() > 1) {
            let chain: Vec<String> = kids.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                s,
                "  {{ rank=same; {} [style=invis]; }}",
                chain.join(" -> ")
            );
        }
        s.push_str("}\n");
        s
    }
}

/// First violated clause of a DFS-tree or left-maximality check.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DfsViolation {
    #[error("tree has {tree} vertices but the digraph has {digraph}")]
    SizeMismatch { tree: usize, digraph: usize },
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("stored {field} disagrees with the child lists at vertex {vertex}")]
    Inconsistent { field: &'static str, vertex: Vertex },
    #[error("tree arc ({0},{1}) is not an arc of the digraph")]
    TreeArcMissing(Vertex, Vertex),
    #[error("arc ({0},{1}) goes from a left subtree to a right one")]
    LeftToRight(Vertex, Vertex),
    #[error("children {left} and {right} of {parent} are not in non-increasing size order")]
    NotLeftMaximal {
        parent: Vertex,
        left: Vertex,
        right: Vertex,
    },
}

/// Checks that `t` is a spanning out-tree of `d` built from arcs of `d` and
/// that every arc between disjoint subtrees runs right to left.
pub fn verify_dfs_tree(d: &Digraph, t: &DfsTree) -> Result<(), DfsViolation> {
    if t.n() != d.n() || t.parent.len() != d.n() {
        return Err(DfsViolation::SizeMismatch {
            tree: t.n(),
            digraph: d.n(),
        });
    }
    let rebuilt = DfsTree::from_children(t.root, t.children.clone())
        .map_err(|e| DfsViolation::Malformed(e.to_string()))?;
    for v in 0..d.n() {
        if rebuilt.parent[v] != t.parent[v] {
            return Err(DfsViolation::Inconsistent { field: "parent", vertex: v });
        }
        if rebuilt.subtree_size[v] != t.subtree_size[v] {
            return Err(DfsViolation::Inconsistent {
                field: "subtree_size",
                vertex: v,
            });
        }
        if rebuilt.dfs_index[v] != t.dfs_index[v] {
            return Err(DfsViolation::Inconsistent {
                field: "dfs_index",
                vertex: v,
            });
        }
        if let Some(p) = t.parent[v] {
            if !d.has_arc(p, v) {
                return Err(DfsViolation::TreeArcMissing(p, v));
            }
        }
    }
    for (u, v) in d.arcs() {
        let related = t.is_ancestor(u, v) || t.is_ancestor(v, u);
        if !related && t.dfs_index[v] > t.dfs_index[u] {
            return Err(DfsViolation::LeftToRight(u, v));
        }
    }
    Ok(())
}

/// Checks that child subtree sizes are non-increasing from left to right.
pub fn verify_left_maximal(t: &DfsTree) -> Result<(), DfsViolation> {
    let sizes: Vec<u64> = t.subtree_size.iter().map(|&s| s as u64).collect();
    check_non_increasing(t, &sizes)
}

/// Left-maximality with respect to subtree weights instead of sizes.
pub fn verify_left_maximal_weighted(t: &DfsTree, weights: &[u64]) -> Result<(), DfsViolation> {
    check_non_increasing(t, &t.subtree_weights(weights))
}

fn check_non_increasing(t: &DfsTree, measure: &[u64]) -> Result<(), DfsViolation> {
    for (parent, kids) in t.children.iter().enumerate() {
        for w in kids.windows(2) {
            if measure[w[0]] < measure[w[1]] {
                return Err(DfsViolation::NotLeftMaximal {
                    parent,
                    left: w[0],
                    right: w[1],
                });
            }
        }
    }
    Ok(())
}

/// Left-maximal DFS tree of `d` rooted at `root`.
pub fn left_maximal_dfs(d: &Digraph, root: Vertex) -> Result<DfsTree> {
    left_maximal_dfs_weighted(d, root, &vec![1; d.n()])
}

/// Left-maximal DFS tree where subtrees are compared by total vertex weight.
///
/// Ties between candidate out-sections go to the source component with the
/// smallest vertex id, and inside it to the smallest out-neighbor of the root.
pub fn left_maximal_dfs_weighted(d: &Digraph, root: Vertex, weights: &[u64]) -> Result<DfsTree> {
    let n = d.n();
    d.check_vertex(root)?;
    if weights.len() != n {
        return Err(Error::InvalidParameter(format!(
            "expected {n} weights, got {}",
            weights.len()
        )));
    }
    if !out_generates(d, root) {
        return Err(Error::RootNotGenerating { root });
    }

    let mut group = vec![0usize; n];
    let mut next_group = 1;
    let mut children: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut work: Vec<(Vertex, usize, Vec<Vertex>)> = vec![(root, 0, (0..n).collect())];

    while let Some((x, id, set)) = work.pop() {
        let rest: Vec<Vertex> = set.into_iter().filter(|&v| v != x).collect();
        if rest.is_empty() {
            continue;
        }
        let member = |v: Vertex| group[v] == id && v != x;
        let partition = scc_within(d, &rest, member);
        let cond = condense_within(d, &rest, partition);
        let reach = cond.component_reach();
        let comp_weight: Vec<u64> = cond
            .partition
            .components
            .iter()
            .map(|c| c.iter().map(|&v| weights[v]).sum())
            .collect();
        let section_weight = |c: usize| -> u64 { reach[c].ones().map(|k| comp_weight[k]).sum() };

        let chosen = cond
            .sources()
            .map(|c| (section_weight(c), c))
            .max_by(|a, b| {
                a.0.cmp(&b.0)
                    .then_with(|| cond.partition.components[b.1][0].cmp(&cond.partition.components[a.1][0]))
            })
            .map(|(_, c)| c)
            .expect("non-empty remainder has a source component");
        let y = d
            .out_neighbors(x)
            .iter()
            .copied()
            .find(|&v| cond.partition.component_of[v] == Some(chosen))
            .ok_or(Error::RootNotGenerating { root: x })?;

        let section: Vec<Vertex> = reach[chosen]
            .ones()
            .flat_map(|c| cond.partition.components[c].iter().copied())
            .collect();
        let section_id = next_group;
        next_group += 1;
        for &v in &section {
            group[v] = section_id;
        }
        children[x].push(y);

        let remaining: Vec<Vertex> = std::iter::once(x)
            .chain(rest.into_iter().filter(|&v| group[v] == id))
            .collect();
        work.push((x, id, remaining));
        work.push((y, section_id, section));
    }

    DfsTree::from_children(root, children)
}

fn out_generates(d: &Digraph, root: Vertex) -> bool {
    let mut seen = vec![false; d.n()];
    seen[root] = true;
    let mut stack = vec![root];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in d.out_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == d.n()
}

/// The root-to-leaf path that always follows the leftmost child.
pub fn left_path(t: &DfsTree) -> Vec<Vertex> {
    let mut path = vec![t.root];
    let mut v = t.root;
    while let Some(&c) = t.children[v].first() {
        path.push(c);
        v = c;
    }
    path
}

/// `x` together with the subtrees of its children up to and including `y`,
/// sorted by vertex id.
pub fn left_subtree(t: &DfsTree, x: Vertex, y: Vertex) -> Result<Vec<Vertex>> {
    if x >= t.n() || !left_path(t).contains(&x) {
        return Err(Error::NotOnLeftPath { vertex: x });
    }
    let pos = t.children[x]
        .iter()
        .position(|&c| c == y)
        .ok_or(Error::NotAChild { parent: x, child: y })?;
    let mut set = vec![x];
    for &c in &t.children[x][..=pos] {
        set.extend(t.subtree(c));
    }
    set.sort_unstable();
    Ok(set)
}

/// Size of a left subtree without materializing it.
pub fn left_subtree_size(t: &DfsTree, x: Vertex, y: Vertex) -> Result<usize> {
    let pos = t.children[x]
        .iter()
        .position(|&c| c == y)
        .ok_or(Error::NotAChild { parent: x, child: y })?;
    Ok(1 + t.children[x][..=pos].iter().map(|&c| t.subtree_size[c]).sum::<usize>())
}
