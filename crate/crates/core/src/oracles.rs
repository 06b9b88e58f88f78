//! Exhaustive reference computations for small inputs. They share no code
//! with the algorithms they check beyond the digraph type.

use itertools::Itertools;

use crate::bitree::CycleLabels;
use crate::connectivity::{reach_sets, scc};
use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::ordering::VertexOrdering;

pub const MAX_BRUTE_FORCE_N: usize = 8;
pub const MAX_ORACLE_CYCLE: usize = 12;

/// `(center position, in-path length, out-path length, value)`.
pub type CycleBiTreeValue = (usize, usize, usize, (u64, u64));

/// Forward couples of the ordering `perm` counted with bitmask closures.
fn forward_couples_by_mask(d: &Digraph, perm: &[Vertex]) -> u64 {
    let n = perm.len();
    let mut pos = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        pos[v] = i;
    }
    let mut reach = vec![0u32; n];
    for &u in perm.iter().rev() {
        for &v in d.out_neighbors(u) {
            if pos[u] < pos[v] {
                reach[u] |= 1 << v | reach[v];
            }
        }
    }
    reach.iter().map(|r| r.count_ones() as u64).sum()
}

/// The maximum number of forward couples over all orderings, and the first
/// ordering in lexicographic order attaining it.
pub fn brute_force_t(d: &Digraph) -> Result<(u64, VertexOrdering)> {
    let n = d.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::TooLarge { n, max: MAX_BRUTE_FORCE_N });
    }
    let mut best: Option<(u64, Vec<Vertex>)> = None;
    for perm in (0..n).permutations(n) {
        let c = forward_couples_by_mask(d, &perm);
        if best.as_ref().is_none_or(|b| c > b.0) {
            best = Some((c, perm));
        }
    }
    let (t, perm) = best.unwrap_or((0, Vec::new()));
    Ok((t, VertexOrdering::new(perm)?))
}

/// Largest balanced bi-tree `2·min(ancestors, descendants) + 1` over all
/// centers of an acyclic digraph.
pub fn dag_balanced_bitree_max(d: &Digraph) -> Result<usize> {
    if scc(d).count() != d.n() {
        return Err(Error::Cyclic);
    }
    let reach = reach_sets(d);
    let mut ancestors = vec![0usize; d.n()];
    for row in &reach {
        for v in row.ones() {
            ancestors[v] += 1;
        }
    }
    Ok((0..d.n())
        .map(|r| 2 * ancestors[r].min(reach[r].count_ones(..)) + 1)
        .max()
        .unwrap_or(0))
}

/// True if every vertex of `set` other than `root` reaches `root` inside `set`.
fn reaches_within(d: &Digraph, set: u32, root: Vertex, backwards: bool) -> bool {
    let mut seen = 1u32 << root;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let next = if backwards { d.in_neighbors(v) } else { d.out_neighbors(v) };
        for &w in next {
            if set >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen == set
}

/// Largest balanced bi-tree of any digraph by trying every center and every
/// pair of disjoint equal-size vertex sets. Exponential; for `n <= 10`.
pub fn balanced_bitree_max_exhaustive(d: &Digraph) -> Result<usize> {
    let n = d.n();
    if n > 10 {
        return Err(Error::TooLarge { n, max: 10 });
    }
    let mut best = 0;
    for r in 0..n {
        let others: Vec<Vertex> = (0..n).filter(|&v| v != r).collect();
        for ins in 0u32..1 << others.len() {
            let in_set = others.iter().enumerate().filter(|(i, _)| ins >> i & 1 == 1).fold(1u32 << r, |m, (_, &v)| m | 1 << v);
            let side = in_set.count_ones() as usize - 1;
            if 2 * side < best || !reaches_within(d, in_set, r, true) {
                continue;
            }
            let free: Vec<Vertex> = others.iter().copied().filter(|&v| in_set >> v & 1 == 0).collect();
            let found = free.iter().copied().combinations(side).any(|outs| {
                let out_set = outs.iter().fold(1u32 << r, |m, &v| m | 1 << v);
                reaches_within(d, out_set, r, false)
            });
            if found {
                best = 2 * side + 1;
            }
        }
    }
    Ok(best)
}

/// Every bi-tree on a labelled cycle as `(center position, in-path length,
/// out-path length, value)`. The in-path runs backwards from the center and
/// the out-path forwards; together they use at most the whole cycle.
pub fn cycle_bitree_values(labels: &CycleLabels) -> Result<Vec<CycleBiTreeValue>> {
    let len = labels.cycle.len();
    if len == 0 {
        return Err(Error::EmptyCycle);
    }
    if len > MAX_ORACLE_CYCLE {
        return Err(Error::TooLarge { n: len, max: MAX_ORACLE_CYCLE });
    }
    let mut all = Vec::new();
    for c in 0..len {
        for a in 0..len {
            for b in 0..len - a {
                let i: u64 = (0..=a).map(|t| labels.inward[(c + len - t) % len]).sum();
                let o: u64 = (0..=b).map(|t| labels.outward[(c + t) % len]).sum();
                all.push((c, a, b, (i, o)));
            }
        }
    }
    Ok(all)
}

/// The bi-tree value on a cycle maximizing `min(a, b)`, ties broken by the
/// larger `a + b`.
pub fn best_cycle_bitree(labels: &CycleLabels) -> Result<(u64, u64)> {
    Ok(cycle_bitree_values(labels)?
        .into_iter()
        .map(|(_, _, _, v)| v)
        .max_by_key(|&(a, b)| (a.min(b), a + b))
        .expect("a non-empty cycle has bi-trees"))
}
