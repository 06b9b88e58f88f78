//! Strong components, condensations, out-section sizes and reachability counts.
//!
//! Reachability is stored as one [`FixedBitSet`] row per component (or vertex),
//! so the transitive closure of an `n`-vertex digraph costs about `n²/8` bytes.

use fixedbitset::FixedBitSet;

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

/// Maximal strongly connected sets, numbered in reverse topological order:
/// every arc between distinct components goes from a larger id to a smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    /// Component id per vertex; `None` for vertices left out of the computation.
    pub component_of: Vec<Option<usize>>,
    /// Sorted vertex list per component.
    pub components: Vec<Vec<Vertex>>,
}

impl SccPartition {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

/// The acyclic quotient of a digraph by its strong components.
#[derive(Clone, Debug)]
pub struct Condensation {
    pub partition: SccPartition,
    /// Digraph on component ids.
    pub dag: Digraph,
    pub sizes: Vec<usize>,
}

impl Condensation {
    /// Components with no incoming arc in the condensation.
    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dag.n()).filter(|&c| self.dag.in_neighbors(c).is_empty())
    }

    /// Per component, the set of components it reaches (itself included).
    pub fn component_reach(&self) -> Vec<FixedBitSet> {
        let k = self.dag.n();
        let mut reach: Vec<FixedBitSet> = Vec::with_capacity(k);
        // Ids are reverse-topological: successors are already final.
        for c in 0..k {
            let mut row = FixedBitSet::with_capacity(k);
            row.insert(c);
            for &s in self.dag.out_neighbors(c) {
                row.union_with(&reach[s]);
            }
            reach.push(row);
        }
        reach
    }
}

/// Tarjan's algorithm restricted to the vertices accepted by `member`,
/// run without recursion.
pub(crate) fn scc_within(
    d: &Digraph,
    vertices: &[Vertex],
    member: impl Fn(Vertex) -> bool,
) -> SccPartition {
    let n = d.n();
    let mut index = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component_of = vec![None; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    let mut call: Vec<(Vertex, usize)> = Vec::new();
    let mut next = 0;

    for &start in vertices {
        if !member(start) || index[start] != NONE {
            continue;
        }
        call.push((start, 0));
        index[start] = next;
        low[start] = next;
        next += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = d.out_neighbors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if !member(w) {
                    continue;
                }
                if index[w] == NONE {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = Some(id);
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    SccPartition {
        component_of,
        components,
    }
}

pub fn scc(d: &Digraph) -> SccPartition {
    let all: Vec<Vertex> = (0..d.n()).collect();
    scc_within(d, &all, |_| true)
}

pub fn is_strong(d: &Digraph) -> bool {
    scc(d).count() <= 1
}

/// Condensation of the subdigraph induced by `vertices`, given its partition.
pub(crate) fn condense_within(
    d: &Digraph,
    vertices: &[Vertex],
    partition: SccPartition,
) -> Condensation {
    let k = partition.count();
    let mut arcs = Vec::new();
    for &u in vertices {
        let Some(cu) = partition.component_of[u] else {
            continue;
        };
        for &v in d.out_neighbors(u) {
            if let Some(cv) = partition.component_of[v] {
                if cu != cv {
                    arcs.push((cu, cv));
                }
            }
        }
    }
    arcs.sort_unstable();
    arcs.dedup();
    let dag = Digraph::new(k, arcs).expect("condensation arcs are simple");
    let sizes = partition.components.iter().map(Vec::len).collect();
    Condensation {
        partition,
        dag,
        sizes,
    }
}

/// Condensation of `d`, or of `d` minus `excluded` when given.
pub fn condensation_of(d: &Digraph, excluded: Option<Vertex>) -> Result<Condensation> {
    if let Some(x) = excluded {
        d.check_vertex(x)?;
    }
    let all: Vec<Vertex> = (0..d.n()).collect();
    let partition = scc_within(d, &all, |v| Some(v) != excluded);
    Ok(condense_within(d, &all, partition))
}

/// For every vertex other than `excluded`, the number of vertices it reaches in
/// `d - excluded` (itself included). The excluded vertex maps to `None`.
pub fn out_section_sizes(d: &Digraph, excluded: Vertex) -> Result<Vec<Option<usize>>> {
    let cond = condensation_of(d, Some(excluded))?;
    let reach = cond.component_reach();
    let comp_size: Vec<usize> = reach
        .iter()
        .map(|row| row.ones().map(|c| cond.sizes[c]).sum())
        .collect();
    Ok(cond
        .partition
        .component_of
        .iter()
        .map(|c| c.map(|c| comp_size[c]))
        .collect())
}

/// Per-vertex reachability rows: bit `v` of row `u` is set iff `u != v` and
/// there is a directed path from `u` to `v`.
pub fn reach_sets(d: &Digraph) -> Vec<FixedBitSet> {
    let n = d.n();
    let all: Vec<Vertex> = (0..n).collect();
    let cond = condense_within(d, &all, scc(d));
    let k = cond.dag.n();
    let mut comp_rows: Vec<FixedBitSet> = Vec::with_capacity(k);
    for c in 0..k {
        let mut row = FixedBitSet::with_capacity(n);
        for &v in &cond.partition.components[c] {
            row.insert(v);
        }
        for &s in cond.dag.out_neighbors(c) {
            row.union_with(&comp_rows[s]);
        }
        comp_rows.push(row);
    }
    (0..n)
        .map(|v| {
            let c = cond.partition.component_of[v].expect("every vertex has a component");
            let mut row = comp_rows[c].clone();
            row.set(v, false);
            row
        })
        .collect()
}

/// Number of ordered pairs `(u, v)`, `u != v`, joined by a directed path.
pub fn reach_pair_count(d: &Digraph) -> u64 {
    reach_sets(d).iter().map(|row| row.count_ones(..) as u64).sum()
}

/// Removes arcs in ascending `(u, v)` order whenever strong connectivity
/// survives the removal. The result is arc-minimal: an arc essential in a
/// digraph stays essential in every spanning subdigraph of it.
pub fn minimalize_strong(d: &Digraph) -> Result<Digraph> {
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    let mut current = d.clone();
    for (u, v) in d.arcs() {
        let candidate = current.filter_arcs(|a, b| (a, b) != (u, v));
        if is_strong(&candidate) {
            current = candidate;
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_circuit, gen_prop2};

    fn path(n: usize) -> Digraph {
        Digraph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn bfs_count(d: &Digraph, from: Vertex, excluded: Option<Vertex>) -> usize {
        let mut seen = vec![false; d.n()];
        let mut queue = vec![from];
        seen[from] = true;
        while let Some(u) = queue.pop() {
            for &w in d.out_neighbors(u) {
                if !seen[w] && Some(w) != excluded {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    }

    #[test]
    fn scc_examples() {
        assert_eq!(scc(&gen_circuit(5).unwrap()).count(), 1);
        assert_eq!(scc(&path(3)).count(), 3);
        assert!(is_strong(&gen_prop2(2).unwrap().digraph));
        assert!(!is_strong(&path(3)));
    }

    #[test]
    fn reverse_topological_ids() {
        let d = path(4);
        let p = scc(&d);
        for (u, v) in d.arcs() {
            assert!(p.component_of[u] > p.component_of[v]);
        }
    }

    #[test]
    fn condensation_examples() {
        let c = gen_circuit(6).unwrap();
        let cond = condensation_of(&c, Some(0)).unwrap();
        assert_eq!(cond.dag.n(), 5);
        assert_eq!(cond.dag.m(), 4);
        assert!(cond.sizes.iter().all(|&s| s == 1));
        let whole = condensation_of(&c, None).unwrap();
        assert_eq!((whole.dag.n(), whole.dag.m()), (1, 0));
        assert_eq!(cond.sources().count(), 1);
    }

    #[test]
    fn out_sections_on_circuit() {
        let c = gen_circuit(5).unwrap();
        let sizes = out_section_sizes(&c, 0).unwrap();
        assert_eq!(sizes, vec![None, Some(4), Some(3), Some(2), Some(1)]);
        let two = gen_circuit(2).unwrap();
        assert_eq!(out_section_sizes(&two, 0).unwrap(), vec![None, Some(1)]);
        assert!(out_section_sizes(&two, 2).is_err());
    }

    #[test]
    fn out_sections_on_prop2_match_bfs() {
        let inst = gen_prop2(2).unwrap();
        let d = &inst.digraph;
        let x = inst.x;
        let sizes = out_section_sizes(d, x).unwrap();
        assert_eq!(sizes[inst.y], Some(1));
        for (v, &size) in sizes.iter().enumerate().filter(|&(v, _)| v != x) {
            assert_eq!(size, Some(bfs_count(d, v, Some(x))), "vertex {v}");
        }
    }

    #[test]
    fn out_sections_use_set_union() {
        // Diamond 1 -> {2,3} -> 4 after excluding 0: additive accumulation would give 5 for vertex 1.
        let d = Digraph::new(5, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 0)]).unwrap();
        let sizes = out_section_sizes(&d, 0).unwrap();
        assert_eq!(sizes[1], Some(4));
        assert_eq!(sizes[4], Some(1));
    }

    #[test]
    fn reach_counts() {
        assert_eq!(reach_pair_count(&path(4)), 6);
        assert_eq!(reach_pair_count(&gen_circuit(7).unwrap()), 42);
        assert_eq!(reach_pair_count(&Digraph::empty(3)), 0);
    }

    #[test]
    fn minimalize_complete_three() {
        let k3 = Digraph::new(
            3,
            (0..3).flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v))),
        )
        .unwrap();
        let min = minimalize_strong(&k3).unwrap();
        assert!(is_strong(&min));
        assert!(min.m() <= 4);
        for (u, v) in min.arcs() {
            assert!(!is_strong(&min.filter_arcs(|a, b| (a, b) != (u, v))));
        }
        let c = gen_circuit(5).unwrap();
        assert_eq!(minimalize_strong(&c).unwrap(), c);
        assert_eq!(minimalize_strong(&path(3)), Err(Error::NotStrong));
    }
}
