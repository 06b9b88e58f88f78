//! Vertex orderings, forward pairs and arc schedules.

use std::collections::HashSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::bitree::{balanced_bitree, verify_bitree, BiTree};
use crate::connectivity::reach_pair_count;
use crate::digraph::{data_lines, Digraph, Vertex};
use crate::error::{Error, Result};

/// A vertex enumeration `perm` together with its inverse `pos`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrdering {
    perm: Vec<Vertex>,
    pos: Vec<usize>,
}

impl VertexOrdering {
    pub fn new(perm: Vec<Vertex>) -> Result<Self> {
        let n = perm.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in perm.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::InvalidPermutation { n });
            }
            pos[v] = i;
        }
        Ok(VertexOrdering { perm, pos })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering {
            perm: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[Vertex] {
        &self.perm
    }

    /// Position of `v`, from 0.
    pub fn pos(&self, v: Vertex) -> usize {
        self.pos[v]
    }

    pub fn is_forward(&self, u: Vertex, v: Vertex) -> bool {
        self.pos[u] < self.pos[v]
    }

    pub fn reversed(&self) -> Self {
        let mut perm = self.perm.clone();
        perm.reverse();
        VertexOrdering::new(perm).expect("reversal keeps a permutation")
    }

    /// One line of space-separated vertex ids.
    pub fn to_text(&self) -> String {
        let ids: Vec<String> = self.perm.iter().map(|v| v.to_string()).collect();
        format!("{}\n", ids.join(" "))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (line, body) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty ordering".into(),
        })?;
        if let Some((extra, _)) = lines.next() {
            return Err(Error::Parse {
                line: extra,
                message: "an ordering is a single line".into(),
            });
        }
        let perm = body
            .split_whitespace()
            .map(|tok| {
                tok.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("not a vertex id: {tok:?}"),
                })
            })
            .collect::<Result<Vec<Vertex>>>()?;
        VertexOrdering::new(perm)
    }
}

fn check_len(d: &Digraph, ord: &VertexOrdering) -> Result<()> {
    if ord.n() != d.n() {
        return Err(Error::InvalidPermutation { n: d.n() });
    }
    Ok(())
}

/// The forward arcs of `d` under `ord`.
pub fn forward_dag(d: &Digraph, ord: &VertexOrdering) -> Result<Digraph> {
    check_len(d, ord)?;
    Ok(d.filter_arcs(|u, v| ord.is_forward(u, v)))
}

/// Forward reachability rows: bit `v` of row `u` is set iff `(u, v)` is a forward couple.
pub fn forward_reach(d: &Digraph, ord: &VertexOrdering) -> Result<Vec<FixedBitSet>> {
    check_len(d, ord)?;
    let n = d.n();
    let mut rows = vec![FixedBitSet::with_capacity(n); n];
    for &u in ord.perm().iter().rev() {
        let mut row = FixedBitSet::with_capacity(n);
        for &v in d.out_neighbors(u) {
            if ord.is_forward(u, v) {
                row.insert(v);
                row.union_with(&rows[v]);
            }
        }
        rows[u] = row;
    }
    Ok(rows)
}

/// Number of forward couples of `d` under `ord`.
pub fn count_forward_pairs(d: &Digraph, ord: &VertexOrdering) -> Result<u64> {
    Ok(reach_pair_count(&forward_dag(d, ord)?))
}

/// Ordering in which every `B⁻ × B⁺` couple is forward: `B⁻` in post-order
/// (each vertex before the one it points to), the center, `B⁺` in pre-order,
/// then the remaining vertices by id. Children are visited by ascending id.
pub fn ordering_from_bitree(d: &Digraph, b: &BiTree) -> Result<VertexOrdering> {
    verify_bitree(d, b).map_err(|e| Error::InvalidBiTree(e.to_string()))?;
    let n = d.n();
    let children = |pairs: &[(Vertex, Vertex)]| {
        let mut kids = vec![Vec::new(); n];
        for &(c, p) in pairs {
            kids[p].push(c);
        }
        for k in &mut kids {
            k.sort_unstable();
        }
        kids
    };
    let mut perm = Vec::with_capacity(n);

    let in_kids = children(&b.in_tree);
    let mut stack = vec![(b.center, 0usize)];
    while let Some((v, i)) = stack.pop() {
        if i < in_kids[v].len() {
            stack.push((v, i + 1));
            stack.push((in_kids[v][i], 0));
        } else if v != b.center {
            perm.push(v);
        }
    }
    perm.push(b.center);

    let out_kids = children(&b.out_tree);
    let mut stack: Vec<Vertex> = out_kids[b.center].iter().rev().copied().collect();
    while let Some(v) = stack.pop() {
        perm.push(v);
        stack.extend(out_kids[v].iter().rev());
    }

    let mut placed = vec![false; n];
    for &v in &perm {
        placed[v] = true;
    }
    perm.extend((0..n).filter(|&v| !placed[v]));
    VertexOrdering::new(perm)
}

/// An injective labelling of the arcs by positive integers, sorted by arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    entries: Vec<(Vertex, Vertex, u64)>,
}

impl Schedule {
    /// Validates that `entries` label every arc of `d` exactly once with
    /// distinct positive labels.
    pub fn new(d: &Digraph, mut entries: Vec<(Vertex, Vertex, u64)>) -> Result<Self> {
        entries.sort_unstable();
        let mut labels = HashSet::new();
        for (i, &(u, v, label)) in entries.iter().enumerate() {
            if !d.has_arc(u, v) {
                return Err(Error::ScheduleMismatch(format!("({u},{v}) is not an arc")));
            }
            if i > 0 && (entries[i - 1].0, entries[i - 1].1) == (u, v) {
                return Err(Error::ScheduleMismatch(format!("arc ({u},{v}) labelled twice")));
            }
            if label == 0 {
                return Err(Error::ScheduleMismatch(format!("arc ({u},{v}) has label 0")));
            }
            if !labels.insert(label) {
                return Err(Error::DuplicateLabel { label });
            }
        }
        if entries.len() != d.m() {
            return Err(Error::ScheduleMismatch(format!(
                "{} of {} arcs labelled",
                entries.len(),
                d.m()
            )));
        }
        Ok(Schedule { entries })
    }

    pub fn entries(&self) -> &[(Vertex, Vertex, u64)] {
        &self.entries
    }

    pub fn label(&self, u: Vertex, v: Vertex) -> Option<u64> {
        self.entries
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&(u, v)))
            .ok()
            .map(|i| self.entries[i].2)
    }

    /// Lines `u v label`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (u, v, l) in &self.entries {
            let _ = writeln!(s, "{u} {v} {l}");
        }
        s
    }

    pub fn parse(d: &Digraph, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (line, body) in data_lines(text) {
            let fields: Vec<&str> = body.split_whitespace().collect();
            let bad = || Error::Parse {
                line,
                message: "expected \"u v label\"".into(),
            };
            if fields.len() != 3 {
                return Err(bad());
            }
            let u = fields[0].parse().map_err(|_| bad())?;
            let v = fields[1].parse().map_err(|_| bad())?;
            let l = fields[2].parse().map_err(|_| bad())?;
            entries.push((u, v, l));
        }
        Schedule::new(d, entries)
    }
}

/// Labels each arc `xy` with `n·g(x) + g(y) + 1`, `g` the position in `ord`.
/// Every forward couple of `ord` is then connected by a label-increasing path.
pub fn schedule_from_ordering(d: &Digraph, ord: &VertexOrdering) -> Result<Schedule> {
    check_len(d, ord)?;
    let n = d.n() as u64;
    let entries = d
        .arcs()
        .map(|(u, v)| (u, v, n * ord.pos(u) as u64 + ord.pos(v) as u64 + 1))
        .collect();
    Schedule::new(d, entries)
}

/// Number of ordered pairs `(x, y)`, `x != y`, joined by a path whose labels
/// strictly increase.
///
/// Arcs are replayed by ascending label while each vertex keeps the set of
/// vertices that reach it temporally; labels are distinct, so every set is
/// final for all arcs that may extend it.
pub fn count_temporal_pairs(d: &Digraph, sched: &Schedule) -> Result<u64> {
    let n = d.n();
    let mut arcs: Vec<(u64, Vertex, Vertex)> =
        sched.entries().iter().map(|&(u, v, l)| (l, u, v)).collect();
    arcs.sort_unstable();
    if let Some(w) = arcs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateLabel { label: w[0].0 });
    }
    let mut reached_by = vec![FixedBitSet::with_capacity(n); n];
    for (_, u, v) in arcs {
        d.check_vertex(u)?;
        d.check_vertex(v)?;
        let mut incoming = reached_by[u].clone();
        incoming.insert(u);
        reached_by[v].union_with(&incoming);
    }
    Ok(reached_by
        .iter()
        .enumerate()
        .map(|(v, row)| (row.count_ones(..) - row.contains(v) as usize) as u64)
        .sum())
}

#[derive(Clone, Debug)]
pub struct FcppResult {
    pub ordering: VertexOrdering,
    pub forward_pairs: u64,
    pub bitree: BiTree,
}

/// Guaranteed forward pairs of [`fcpp_approx`]: `⌈n/6⌉² − 1`.
pub fn fcpp_lower_bound(n: usize) -> u64 {
    let side = n.div_ceil(6) as u64;
    (side * side).saturating_sub(1)
}

/// Ordering of a strong digraph extending a balanced bi-tree; it has at least
/// `⌈n/6⌉² − 1` forward couples, within a factor 18 of the optimum.
pub fn fcpp_approx(d: &Digraph) -> Result<FcppResult> {
    let bitree = balanced_bitree(d, None)?;
    let ordering = ordering_from_bitree(d, &bitree)?;
    let forward_pairs = count_forward_pairs(d, &ordering)?;
    Ok(FcppResult {
        ordering,
        forward_pairs,
        bitree,
    })
}

/// Machine-readable summary of an ordering's quality.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OrderingSummary {
    pub n: usize,
    pub forward_pairs: u64,
    pub lower_bound: u64,
    /// `forward_pairs / (n(n−1)/2)`.
    pub ratio_of_max: f64,
}

impl OrderingSummary {
    pub fn new(n: usize, forward_pairs: u64) -> Self {
        let max = (n * n.saturating_sub(1) / 2) as f64;
        OrderingSummary {
            n,
            forward_pairs,
            lower_bound: fcpp_lower_bound(n),
            ratio_of_max: if max > 0.0 { forward_pairs as f64 / max } else { 1.0 },
        }
    }
}
