//! Request satisfaction, the exact optimum on binary-tree request instances,
//! and forward covers of bi-oriented graphs.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::connectivity::reach_sets;
use crate::digraph::{data_lines, parse_fields, Digraph, Vertex};
use crate::error::{Error, Result};
use crate::instances::RequestInstance;
use crate::ordering::{forward_reach, VertexOrdering};

/// Requests `{x, y}`, kept in input order. In couple mode the stored order
/// `(x, y)` is the required direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RequestSet {
    pairs: Vec<(Vertex, Vertex)>,
}

impl RequestSet {
    pub fn new(pairs: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for &(u, v) in &pairs {
            if u == v {
                return Err(Error::InvalidRequest(format!("request {{{u},{v}}} joins a vertex to itself")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidRequest(format!("request {{{u},{v}}} given twice")));
            }
        }
        Ok(RequestSet { pairs })
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Lines `u v`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (u, v) in &self.pairs {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let pairs = data_lines(text)
            .map(|(line, body)| parse_fields::<2>(line, body).map(|[u, v]| (u, v)))
            .collect::<Result<Vec<_>>>()?;
        RequestSet::new(pairs)
    }
}

/// Whether a request needs a forward path in either direction or only from
/// its first vertex to its second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RequestMode {
    #[default]
    Pair,
    Couple,
}

/// Number of requests joined by a forward path under `ord`.
pub fn count_satisfied_requests(
    d: &Digraph,
    ord: &VertexOrdering,
    requests: &RequestSet,
    mode: RequestMode,
) -> Result<u64> {
    for &(u, v) in requests.pairs() {
        d.check_vertex(u)?;
        d.check_vertex(v)?;
    }
    let rows = forward_reach(d, ord)?;
    Ok(requests
        .pairs()
        .iter()
        .filter(|&&(u, v)| rows[u].contains(v) || (mode == RequestMode::Pair && rows[v].contains(u)))
        .count() as u64)
}

/// Per-node quantities of a tree orientation: leaves below the node, requests
/// realized among them, leaves reaching the node and leaves it reaches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeStats {
    pub node: Vertex,
    pub leaves: u64,
    pub rf: u64,
    #[serde(rename = "in")]
    pub inward: u64,
    #[serde(rename = "out")]
    pub outward: u64,
}

impl NodeStats {
    /// `rf + in <= leaves` and `rf + out <= leaves`.
    pub fn bounded(&self) -> bool {
        self.rf + self.inward <= self.leaves && self.rf + self.outward <= self.leaves
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumMethod {
    /// Every orientation of the tree edges was evaluated by reachability.
    Exhaustive,
    /// Dynamic programming over (in-leaves, out-leaves) states per node.
    Dynamic,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeOptimum {
    pub max: u64,
    pub method: OptimumMethod,
    /// `up[v]` is true when the edge between `v` and its parent points to the
    /// parent; the entry of the root is unused.
    pub up: Vec<bool>,
    /// Vertex order realizing the witness orientation.
    #[serde(skip)]
    pub ordering: VertexOrdering,
    /// Stats of every internal node under the witness orientation.
    pub nodes: Vec<NodeStats>,
    /// With exhaustive search, whether every orientation satisfied the per-node bounds.
    pub bounded_everywhere: Option<bool>,
}

/// Cap on the number of orientations evaluated one by one.
pub const ORIENTATION_CAP: u64 = 1 << 22;

fn parent(v: Vertex) -> Vertex {
    (v - 1) / 2
}

fn oriented(d: &Digraph, up: &[bool]) -> Digraph {
    d.filter_arcs(|u, v| (u > 0 && v == parent(u) && up[u]) || (v > 0 && u == parent(v) && !up[v]))
}

/// Smallest-id-first topological order of an oriented tree.
fn topological_order(o: &Digraph) -> VertexOrdering {
    let mut indeg: Vec<usize> = (0..o.n()).map(|v| o.in_neighbors(v).len()).collect();
    let mut ready: BTreeSet<Vertex> = (0..o.n()).filter(|&v| indeg[v] == 0).collect();
    let mut perm = Vec::with_capacity(o.n());
    while let Some(v) = ready.pop_first() {
        perm.push(v);
        for &w in o.out_neighbors(v) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    VertexOrdering::new(perm).expect("an oriented tree is acyclic")
}

/// Satisfied requests and per-node stats of one orientation, by reachability.
fn evaluate_orientation(inst: &RequestInstance, up: &[bool]) -> (u64, Vec<NodeStats>) {
    let o = oriented(&inst.digraph, up);
    let reach = reach_sets(&o);
    let internal = inst.leaves().start;
    let mut nodes: Vec<NodeStats> = (0..internal)
        .map(|node| NodeStats {
            node,
            leaves: 0,
            rf: 0,
            inward: 0,
            outward: 0,
        })
        .collect();
    for leaf in inst.leaves() {
        let mut a = leaf;
        while a > 0 {
            a = parent(a);
            let s = &mut nodes[a];
            s.leaves += 1;
            s.inward += reach[leaf].contains(a) as u64;
            s.outward += reach[a].contains(leaf) as u64;
        }
    }
    let mut total = 0;
    for m in &inst.matchings {
        for &(u, v) in &m.pairs {
            if reach[u].contains(v) || reach[v].contains(u) {
                total += 1;
                let mut a = m.node;
                loop {
                    nodes[a].rf += 1;
                    if a == 0 {
                        break;
                    }
                    a = parent(a);
                }
            }
        }
    }
    (total, nodes)
}

fn optimum_from(inst: &RequestInstance, up: Vec<bool>, method: OptimumMethod, bounded: Option<bool>) -> TreeOptimum {
    let (max, nodes) = evaluate_orientation(inst, &up);
    let ordering = topological_order(&oriented(&inst.digraph, &up));
    TreeOptimum {
        max,
        method,
        up,
        ordering,
        nodes,
        bounded_everywhere: bounded,
    }
}

/// Maximum number of requests any vertex ordering satisfies on a binary-tree
/// request instance, with a witness.
///
/// Orderings of a bi-oriented tree induce exactly the orientations of its
/// edges, so heights up to 3 are solved by evaluating every orientation;
/// height 4 exceeds [`ORIENTATION_CAP`] and is solved by
/// [`max_requests_by_dp`].
pub fn max_requests_on_tree(inst: &RequestInstance) -> Result<TreeOptimum> {
    let edges = inst.digraph.n() - 1;
    if (edges as u32) < 64 && (1u64 << edges) <= ORIENTATION_CAP {
        max_requests_exhaustive(inst)
    } else if inst.h <= 4 {
        max_requests_by_dp(inst)
    } else {
        Err(Error::TooLarge { n: inst.h, max: 4 })
    }
}

/// Evaluates all `2^(n-1)` orientations.
pub fn max_requests_exhaustive(inst: &RequestInstance) -> Result<TreeOptimum> {
    let n = inst.digraph.n();
    let edges = n - 1;
    if edges >= 64 || (1u64 << edges) > ORIENTATION_CAP {
        return Err(Error::TooLarge {
            n: edges,
            max: ORIENTATION_CAP.trailing_zeros() as usize,
        });
    }
    let unpack = |mask: u64| -> Vec<bool> { (0..n).map(|v| v > 0 && mask >> (v - 1) & 1 == 1).collect() };
    let mut best = (0u64, 0u64);
    let mut bounded = true;
    for mask in 0..1u64 << edges {
        let (count, nodes) = evaluate_orientation(inst, &unpack(mask));
        bounded &= nodes.iter().all(NodeStats::bounded);
        if count > best.0 {
            best = (count, mask);
        }
    }
    Ok(optimum_from(inst, unpack(best.1), OptimumMethod::Exhaustive, Some(bounded)))
}

#[derive(Clone, Copy)]
struct DpState {
    inward: u32,
    outward: u32,
    rf: u64,
    /// Orientation of the two child edges and the chosen child states.
    back: Option<(bool, bool, usize, usize)>,
}

/// Exact optimum by dynamic programming. Below a node, only the leaves that
/// reach it and the leaves it reaches matter to the rest of the tree, so each
/// node keeps the best realized-request count per such pair of leaf sets.
/// The root only needs one side of each child, which keeps height 4 cheap.
pub fn max_requests_by_dp(inst: &RequestInstance) -> Result<TreeOptimum> {
    if inst.h > 4 {
        return Err(Error::TooLarge { n: inst.h, max: 4 });
    }
    let n = inst.digraph.n();
    let first_leaf = inst.leaves().start;
    let bit = |leaf: Vertex| 1u32 << (leaf - first_leaf);
    // partner[node][leaf index] = matched leaf at that node.
    let mut partner: Vec<HashMap<u32, u32>> = vec![HashMap::new(); first_leaf];
    for m in &inst.matchings {
        for &(u, v) in &m.pairs {
            partner[m.node].insert(bit(u), bit(v));
            partner[m.node].insert(bit(v), bit(u));
        }
    }
    let cross = |node: Vertex, from: u32, to: u32| -> u64 {
        let mut c = 0;
        let mut rest = from;
        while rest != 0 {
            let b = rest & rest.wrapping_neg();
            rest ^= b;
            if partner[node].get(&b).is_some_and(|&p| to & p != 0) {
                c += 1;
            }
        }
        c
    };

    let mut states: Vec<Vec<DpState>> = vec![Vec::new(); n];
    for leaf in inst.leaves() {
        states[leaf] = vec![DpState {
            inward: bit(leaf),
            outward: bit(leaf),
            rf: 0,
            back: None,
        }];
    }
    for x in (1..first_leaf).rev() {
        let (y, z) = (2 * x + 1, 2 * x + 2);
        let mut index: HashMap<(u32, u32), usize> = HashMap::new();
        let mut out: Vec<DpState> = Vec::new();
        for (iy, sy) in states[y].iter().enumerate() {
            for (iz, sz) in states[z].iter().enumerate() {
                for (uy, uz) in [(true, true), (true, false), (false, true), (false, false)] {
                    let inward = if uy { sy.inward } else { 0 } | if uz { sz.inward } else { 0 };
                    let outward = if uy { 0 } else { sy.outward } | if uz { 0 } else { sz.outward };
                    let extra = match (uy, uz) {
                        (true, false) => cross(x, sy.inward, sz.outward),
                        (false, true) => cross(x, sz.inward, sy.outward),
                        _ => 0,
                    };
                    let cand = DpState {
                        inward,
                        outward,
                        rf: sy.rf + sz.rf + extra,
                        back: Some((uy, uz, iy, iz)),
                    };
                    match index.get(&(inward, outward)) {
                        Some(&i) if out[i].rf >= cand.rf => {}
                        Some(&i) => out[i] = cand,
                        None => {
                            index.insert((inward, outward), out.len());
                            out.push(cand);
                        }
                    }
                }
            }
        }
        states[x] = out;
    }

    // Root: project each child onto the one leaf set a combination can use.
    let (y, z) = (1, 2);
    let best_by = |side: &[DpState], key: fn(&DpState) -> u32| -> Vec<(u32, u64, usize)> {
        let mut m: HashMap<u32, (u64, usize)> = HashMap::new();
        for (i, s) in side.iter().enumerate() {
            let e = m.entry(key(s)).or_insert((s.rf, i));
            if s.rf > e.0 {
                *e = (s.rf, i);
            }
        }
        let mut v: Vec<(u32, u64, usize)> = m.into_iter().map(|(k, (rf, i))| (k, rf, i)).collect();
        v.sort_unstable();
        v
    };
    let in_of = |s: &DpState| s.inward;
    let out_of = |s: &DpState| s.outward;
    let rf_only = |side: &[DpState]| -> (u64, usize) {
        side.iter()
            .enumerate()
            .map(|(i, s)| (s.rf, i))
            .fold((0, 0), |a, b| if b.0 > a.0 { b } else { a })
    };
    let (ry, iy) = rf_only(&states[y]);
    let (rz, iz) = rf_only(&states[z]);
    // Same direction on both root edges: no request through the root.
    let mut best = (ry + rz, true, true, iy, iz);
    for (uy, uz) in [(true, false), (false, true)] {
        let (from_side, to_side) = if uy { (y, z) } else { (z, y) };
        let froms = best_by(&states[from_side], in_of);
        let tos = best_by(&states[to_side], out_of);
        for &(fin, frf, fi) in &froms {
            for &(tout, trf, ti) in &tos {
                let total = frf + trf + cross(0, fin, tout);
                if total > best.0 {
                    let (iy, iz) = if uy { (fi, ti) } else { (ti, fi) };
                    best = (total, uy, uz, iy, iz);
                }
            }
        }
    }

    let mut up = vec![false; n];
    let mut stack = vec![(y, best.3), (z, best.4)];
    up[y] = best.1;
    up[z] = best.2;
    while let Some((v, i)) = stack.pop() {
        if let Some((uy, uz, iy, iz)) = states[v][i].back {
            up[2 * v + 1] = uy;
            up[2 * v + 2] = uz;
            stack.push((2 * v + 1, iy));
            stack.push((2 * v + 2, iz));
        }
    }
    let opt = optimum_from(inst, up, OptimumMethod::Dynamic, None);
    assert_eq!(opt.max, best.0, "witness orientation disagrees with the recurrence");
    Ok(opt)
}

/// Family of orderings of a bi-oriented connected graph in which every pair
/// of vertices is forward-connected in at least one member.
///
/// Works on a breadth-first spanning tree. Each level splits the current tree
/// at a centroid `c` into `T1` and `T2` sharing only `c`, both with at least a
/// third of the vertices: components of `T - c` go to `T1` largest first until
/// `T1` is big enough. One ordering puts `T1` (deepest first) before `c`
/// before `T2` (shallowest first), so every `T1` vertex reaches every `T2`
/// vertex through `c`. The families of both sides are then merged pairwise,
/// each merged ordering keeping the relative order of both parts.
pub fn forward_cover_bioriented(d: &Digraph) -> Result<Vec<VertexOrdering>> {
    if let Some((u, v)) = d.arcs().find(|&(u, v)| !d.has_arc(v, u)) {
        return Err(Error::NotBioriented { tail: u, head: v });
    }
    let n = d.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in d.out_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                adj[u].push(w);
                adj[w].push(u);
                queue.push_back(w);
            }
        }
    }
    if count != n {
        return Err(Error::Disconnected);
    }
    let all: Vec<Vertex> = (0..n).collect();
    let family = cover_tree(&adj, &all);
    if family.is_empty() {
        return Ok(vec![VertexOrdering::identity(n)]);
    }
    family.into_iter().map(VertexOrdering::new).collect()
}

/// Cover of the subtree induced by `vertices`, as sequences over `vertices`.
fn cover_tree(adj: &[Vec<Vertex>], vertices: &[Vertex]) -> Vec<Vec<Vertex>> {
    let n = vertices.len();
    if n <= 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![vertices.to_vec()];
    }
    let inside: HashSet<Vertex> = vertices.iter().copied().collect();
    let nbrs = |v: Vertex| adj[v].iter().copied().filter(|w| inside.contains(w));

    // Subtree sizes from an arbitrary root, then the centroid.
    let root = vertices[0];
    let mut order = vec![root];
    let mut par: HashMap<Vertex, Vertex> = HashMap::new();
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for w in nbrs(v) {
            if par.get(&v) != Some(&w) {
                par.insert(w, v);
                order.push(w);
            }
        }
        i += 1;
    }
    let mut size: HashMap<Vertex, usize> = vertices.iter().map(|&v| (v, 1)).collect();
    for &v in order.iter().rev() {
        if let Some(&p) = par.get(&v) {
            *size.get_mut(&p).unwrap() += size[&v];
        }
    }
    let centroid = order
        .iter()
        .copied()
        .find(|&v| {
            let below = nbrs(v).filter(|w| par.get(w) == Some(&v)).map(|w| size[&w]).max().unwrap_or(0);
            2 * below <= n && 2 * (n - size[&v]) <= n
        })
        .expect("every tree has a centroid");

    // Components of T - c, largest first, ties by smallest member.
    let mut comps: Vec<Vec<Vertex>> = nbrs(centroid)
        .map(|start| {
            let mut comp = vec![start];
            let mut member: HashSet<Vertex> = HashSet::from([centroid, start]);
            let mut j = 0;
            while j < comp.len() {
                for w in nbrs(comp[j]) {
                    if member.insert(w) {
                        comp.push(w);
                    }
                }
                j += 1;
            }
            comp
        })
        .collect();
    comps.sort_by_key(|c| (std::cmp::Reverse(c.len()), *c.iter().min().unwrap()));

    let mut t1: Vec<Vertex> = Vec::new();
    let mut t2: Vec<Vertex> = Vec::new();
    for comp in comps {
        if t1.is_empty() || 3 * (t1.len() + 1) < n {
            t1.extend(comp);
        } else {
            t2.extend(comp);
        }
    }

    let by_depth = |side: &[Vertex]| -> Vec<Vertex> {
        let members: HashSet<Vertex> = side.iter().copied().collect();
        let mut layer = vec![centroid];
        let mut visited: HashSet<Vertex> = HashSet::from([centroid]);
        let mut out = Vec::new();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &v in &layer {
                for w in nbrs(v) {
                    if members.contains(&w) && visited.insert(w) {
                        next.push(w);
                    }
                }
            }
            out.extend(next.iter().copied());
            layer = next;
        }
        out
    };
    let mut top: Vec<Vertex> = by_depth(&t1);
    top.reverse();
    top.push(centroid);
    top.extend(by_depth(&t2));

    let mut side1 = t1.clone();
    side1.push(centroid);
    side1.sort_unstable();
    let mut side2 = t2.clone();
    side2.push(centroid);
    side2.sort_unstable();
    let f1 = cover_tree(adj, &side1);
    let f2 = cover_tree(adj, &side2);

    let mut family = vec![top];
    for i in 0..f1.len().max(f2.len()) {
        let a = f1.get(i).cloned().unwrap_or_else(|| side1.clone());
        let b = f2.get(i).cloned().unwrap_or_else(|| side2.clone());
        family.push(glue(&a, &b, centroid));
    }
    family
}

/// `a = P1 c Q1`, `b = P2 c Q2` merged into `P1 P2 c Q1 Q2`.
fn glue(a: &[Vertex], b: &[Vertex], c: Vertex) -> Vec<Vertex> {
    let ia = a.iter().position(|&v| v == c).expect("shared vertex present");
    let ib = b.iter().position(|&v| v == c).expect("shared vertex present");
    let mut out = Vec::with_capacity(a.len() + b.len() - 1);
    out.extend_from_slice(&a[..ia]);
    out.extend_from_slice(&b[..ib]);
    out.push(c);
    out.extend_from_slice(&a[ia + 1..]);
    out.extend_from_slice(&b[ib + 1..]);
    out
}

/// `⌈log_{3/2} n⌉ + 2`, an upper bound on the size of the cover built by
/// [`forward_cover_bioriented`], computed in integer arithmetic.
pub fn cover_size_bound(n: usize) -> usize {
    let (mut k, mut three, mut two) = (0usize, 1u128, 1u128);
    while three < n as u128 * two {
        k += 1;
        three *= 3;
        two *= 2;
    }
    k + 2
}

/// True when every pair of distinct vertices is forward-connected, in some
/// direction, under at least one of `orderings`.
pub fn verify_forward_cover(d: &Digraph, orderings: &[VertexOrdering]) -> bool {
    let n = d.n();
    let mut covered = vec![fixedbitset::FixedBitSet::with_capacity(n); n];
    for ord in orderings {
        let Ok(rows) = forward_reach(d, ord) else {
            return false;
        };
        for (u, row) in rows.iter().enumerate() {
            for v in row.ones() {
                covered[u.min(v)].insert(u.max(v));
            }
        }
    }
    (0..n).all(|u| covered[u].count_ones(u + 1..) == n - u - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_bioriented, gen_binary_tree_requests, gen_circuit, gen_random_tree, MatchingMode};
    use itertools::Itertools;

    #[test]
    fn request_set_validation() {
        assert!(RequestSet::new(vec![(0, 1), (2, 1)]).is_ok());
        assert!(RequestSet::new(vec![(0, 0)]).is_err());
        assert!(RequestSet::new(vec![(0, 1), (1, 0)]).is_err());
        let r = RequestSet::parse("# r\n0 1\n2 3\n").unwrap();
        assert_eq!(RequestSet::parse(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn all_pairs_on_circuit() {
        let n = 6;
        let c = gen_circuit(n).unwrap();
        let all = RequestSet::new((0..n).tuple_combinations().collect()).unwrap();
        let id = VertexOrdering::identity(n);
        assert_eq!(count_satisfied_requests(&c, &id, &all, RequestMode::Pair).unwrap(), 15);
        let bad = RequestSet::new(vec![(0, 9)]).unwrap();
        assert!(count_satisfied_requests(&c, &id, &bad, RequestMode::Pair).is_err());
    }

    #[test]
    fn circuit_backward_couples() {
        for n in 3..=6 {
            let c = gen_circuit(n).unwrap();
            let r = RequestSet::new((0..n).map(|i| ((i + 1) % n, i)).collect()).unwrap();
            let id = VertexOrdering::identity(n);
            assert_eq!(count_satisfied_requests(&c, &id, &r, RequestMode::Pair).unwrap(), n as u64);
            let best = (0..n)
                .permutations(n)
                .map(|p| {
                    let o = VertexOrdering::new(p).unwrap();
                    count_satisfied_requests(&c, &o, &r, RequestMode::Couple).unwrap()
                })
                .max()
                .unwrap();
            assert_eq!(best, 1, "n = {n}");
        }
    }

    #[test]
    fn tree_optimum_small() {
        let i2 = gen_binary_tree_requests(2, MatchingMode::Identity).unwrap();
        let opt = max_requests_on_tree(&i2).unwrap();
        assert_eq!(opt.method, OptimumMethod::Exhaustive);
        assert!(opt.max <= 4);
        assert_eq!(opt.bounded_everywhere, Some(true));
        assert!(opt.nodes.iter().all(NodeStats::bounded));
        assert_eq!(
            count_satisfied_requests(&i2.digraph, &opt.ordering, &i2.requests, RequestMode::Pair).unwrap(),
            opt.max
        );
    }

    #[test]
    fn dp_matches_exhaustive() {
        for h in 1..=3 {
            for mode in [MatchingMode::Identity, MatchingMode::Random(h as u64)] {
                let inst = gen_binary_tree_requests(h, mode).unwrap();
                let ex = max_requests_exhaustive(&inst).unwrap();
                let dp = max_requests_by_dp(&inst).unwrap();
                assert_eq!(ex.max, dp.max, "h = {h}");
                assert!(ex.max <= 1 << h);
            }
        }
    }

    #[test]
    fn height_four_uses_dp() {
        let inst = gen_binary_tree_requests(4, MatchingMode::Hypercube).unwrap();
        let opt = max_requests_on_tree(&inst).unwrap();
        assert_eq!(opt.method, OptimumMethod::Dynamic);
        assert!(opt.max <= 16);
        assert!(opt.nodes.iter().all(NodeStats::bounded));
        let five = gen_binary_tree_requests(5, MatchingMode::Identity).unwrap();
        assert!(max_requests_on_tree(&five).is_err());
    }

    #[test]
    fn cover_small_cases() {
        let edge = gen_bioriented(2, &[(0, 1)]).unwrap();
        let f = forward_cover_bioriented(&edge).unwrap();
        assert_eq!(f.len(), 1);
        assert!(verify_forward_cover(&edge, &f));

        let path = gen_bioriented(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let f = forward_cover_bioriented(&path).unwrap();
        assert!(f.len() <= 3);
        assert!(verify_forward_cover(&path, &f));

        let single = gen_bioriented(1, &[]).unwrap();
        assert!(verify_forward_cover(&single, &forward_cover_bioriented(&single).unwrap()));
    }

    #[test]
    fn star_needs_two_orderings() {
        let star = gen_bioriented(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        for p in (0..4).permutations(4) {
            assert!(!verify_forward_cover(&star, &[VertexOrdering::new(p).unwrap()]));
        }
        assert!(!verify_forward_cover(&star, &[]));
        let f = forward_cover_bioriented(&star).unwrap();
        assert!(verify_forward_cover(&star, &f));
    }

    #[test]
    fn cover_random_trees() {
        for seed in 0..20 {
            let n = 30 + 20 * seed as usize;
            let t = gen_random_tree(n, seed).unwrap();
            let f = forward_cover_bioriented(&t).unwrap();
            assert!(verify_forward_cover(&t, &f));
            assert!(f.len() <= cover_size_bound(n), "n = {n}: {} orderings", f.len());
        }
    }

    #[test]
    fn size_bound_values() {
        assert_eq!(cover_size_bound(1), 2);
        assert_eq!(cover_size_bound(2), 4);
        assert_eq!(cover_size_bound(512), 18);
    }

    #[test]
    fn cover_rejects_one_way_arcs() {
        let c = gen_circuit(3).unwrap();
        assert!(matches!(forward_cover_bioriented(&c), Err(Error::NotBioriented { .. })));
    }
}
