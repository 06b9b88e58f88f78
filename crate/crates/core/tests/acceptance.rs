//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Every comparison is exact integer arithmetic; the only tolerances are the
//! wall-clock budgets pinned below.

use std::time::{Duration, Instant};

use forward_pairs::bitree::{balanced_bitree, cycle_bitree, verify_bitree, BiLabel, CycleLabels};
use forward_pairs::connectivity::{is_strong, minimalize_strong};
use forward_pairs::instances::{
    gen_binary_tree_requests, gen_prop2, gen_random_connected, gen_random_strong, gen_random_tree, MatchingMode,
};
use forward_pairs::left_dfs::{
    left_maximal_dfs, left_maximal_dfs_weighted, left_subtree_size, verify_dfs_tree, verify_left_maximal,
    verify_left_maximal_weighted, DfsTree,
};
use forward_pairs::oracles::{best_cycle_bitree, brute_force_t, dag_balanced_bitree_max};
use forward_pairs::ordering::{
    count_forward_pairs, count_temporal_pairs, fcpp_approx, fcpp_lower_bound, forward_dag, schedule_from_ordering,
    VertexOrdering,
};
use forward_pairs::requests::{
    cover_size_bound, forward_cover_bioriented, max_requests_on_tree, verify_forward_cover, OptimumMethod,
};
use forward_pairs::separator::{balanced_ico, balanced_left_subtree, verify_ico};
use forward_pairs::Digraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SIZE: usize = 200;
const CORPUS_MIN_N: usize = 4;
const CORPUS_MAX_N: usize = 200;
const CORPUS_SEED: u64 = 0x5eed_c0de;
const CYCLE_TRIALS: usize = 500;
const CYCLE_MAX_LEN: usize = 12;
const CYCLE_MAX_LABEL: u64 = 20;
const SMALL_TRIALS: usize = 100;
const SMALL_MAX_N: usize = 8;
const APPROX_FACTOR: u64 = 18;
const COVER_TRIALS: usize = 50;
const COVER_MAX_N: usize = 512;
const BUDGET_SEPARATOR: Duration = Duration::from_secs(30);
const BUDGET_FCPP: Duration = Duration::from_secs(60);
const BUDGET_REQUESTS: Duration = Duration::from_secs(120);

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("{} [{id:>2}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

/// Tree checks collected for the last criterion.
#[derive(Default)]
struct TreeLog {
    checked: usize,
    bad: Vec<String>,
}

impl TreeLog {
    fn unit(&mut self, what: &str, d: &Digraph, t: &DfsTree) {
        self.checked += 1;
        if let Err(e) = verify_dfs_tree(d, t).and_then(|_| verify_left_maximal(t)) {
            self.bad.push(format!("{what}: {e}"));
        }
    }

    fn weighted(&mut self, what: &str, d: &Digraph, t: &DfsTree, w: &[u64]) {
        self.checked += 1;
        if let Err(e) = verify_dfs_tree(d, t).and_then(|_| verify_left_maximal_weighted(t, w)) {
            self.bad.push(format!("{what}: {e}"));
        }
    }
}

struct Scheduled {
    checked: usize,
    bad: Vec<String>,
}

impl Scheduled {
    fn check(&mut self, what: &str, d: &Digraph, ord: &VertexOrdering) {
        self.checked += 1;
        let fwd = count_forward_pairs(d, ord).unwrap();
        let tmp = schedule_from_ordering(d, ord).and_then(|s| count_temporal_pairs(d, &s));
        match tmp {
            Ok(t) if t >= fwd => {}
            Ok(t) => self.bad.push(format!("{what}: temporal {t} < forward {fwd}")),
            Err(e) => self.bad.push(format!("{what}: {e}")),
        }
    }
}

fn first<T: std::fmt::Display>(v: &[T]) -> String {
    v.first().map_or_else(String::new, |s| format!("; first: {s}"))
}

fn corpus() -> Vec<(u64, Digraph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|i| {
            // Spread sizes over the whole range, then randomize density.
            let n = CORPUS_MIN_N + i * (CORPUS_MAX_N - CORPUS_MIN_N) / (CORPUS_SIZE - 1);
            let extra = rng.gen_range(0..=2 * n).min(n * (n - 2));
            let seed = rng.gen();
            (seed, gen_random_strong(n, extra, seed).unwrap())
        })
        .collect()
}

fn main() {
    let mut report = Report { failures: 0 };
    let mut trees = TreeLog::default();
    let mut scheduled = Scheduled {
        checked: 0,
        bad: Vec::new(),
    };
    let corpus = corpus();

    // 1 and 2: separator balance and the left-subtree window.
    let start = Instant::now();
    let mut bad_sep = Vec::new();
    let mut bad_window = Vec::new();
    for (seed, d) in &corpus {
        let n = d.n();
        let t = left_maximal_dfs(d, 0).unwrap();
        trees.unit(&format!("corpus seed {seed}"), d, &t);
        let (x, y) = balanced_left_subtree(&t).unwrap();
        let size = left_subtree_size(&t, x, y).unwrap();
        if !(n < 3 * size && 3 * size < 2 * n) {
            bad_window.push(format!("seed {seed}: n = {n}, |T_xy| = {size}"));
        }
        match balanced_ico(d) {
            Ok(dec) => {
                let (a, b) = (dec.in_side_size(), dec.out_side_size());
                if let Err(e) = verify_ico(d, &dec) {
                    bad_sep.push(format!("seed {seed}: {e}"));
                } else if !(3 * a > n && 3 * b > n) {
                    bad_sep.push(format!("seed {seed}: n = {n}, sides {a}/{b}"));
                }
            }
            Err(e) => bad_sep.push(format!("seed {seed}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    report.line(
        1,
        "separator balance",
        bad_sep.is_empty() && elapsed < BUDGET_SEPARATOR,
        format!(
            "{} digraphs, n in [{CORPUS_MIN_N},{CORPUS_MAX_N}], {} violations, {:.2?} (budget {:?}){}",
            corpus.len(),
            bad_sep.len(),
            elapsed,
            BUDGET_SEPARATOR,
            first(&bad_sep)
        ),
    );
    report.line(
        2,
        "left-subtree window",
        bad_window.is_empty(),
        format!(
            "n/3 < |T_xy| < 2n/3 on {} trees, {} violations{}",
            corpus.len(),
            bad_window.len(),
            first(&bad_window)
        ),
    );

    // 3: bi-tree sizes, unit and 0/1-weighted.
    let mut bad_bitree = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 3);
    for (seed, d) in &corpus {
        let n = d.n();
        match balanced_bitree(d, None) {
            Ok(b) if verify_bitree(d, &b).is_ok() && 6 * b.in_size().min(b.out_size()) >= n => {}
            Ok(b) => bad_bitree.push(format!("seed {seed}: sides {}/{} for n = {n}", b.in_size(), b.out_size())),
            Err(e) => bad_bitree.push(format!("seed {seed}: {e}")),
        }
        let w: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
        let marked: u64 = w.iter().sum();
        if marked > 0 {
            let t = left_maximal_dfs_weighted(d, 0, &w).unwrap();
            trees.weighted(&format!("weighted seed {seed}"), d, &t, &w);
        }
        match balanced_bitree(d, Some(&w)) {
            Ok(b) => {
                let (a, c) = b.value_under(&BiLabel::from_weights(&w));
                // a >= ceil(n'/6) is 6a >= n' for integers.
                if verify_bitree(d, &b).is_err() || 6 * a < marked || 6 * c < marked {
                    bad_bitree.push(format!("weighted seed {seed}: marked {a}/{c} of {marked}"));
                }
            }
            Err(e) => bad_bitree.push(format!("weighted seed {seed}: {e}")),
        }
    }
    report.line(
        3,
        "bi-tree size",
        bad_bitree.is_empty(),
        format!(
            "6*min(|B-|,|B+|) >= n and weighted sides >= ceil(n'/6) on {} digraphs, {} violations{}",
            corpus.len(),
            bad_bitree.len(),
            first(&bad_bitree)
        ),
    );

    // 4: the cycle bi-tree against the exhaustive optimum.
    let mut bad_cycle = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 4);
    for trial in 0..CYCLE_TRIALS {
        let len = rng.gen_range(1..=CYCLE_MAX_LEN);
        let labels = CycleLabels {
            cycle: (0..len).collect(),
            inward: (0..len).map(|_| rng.gen_range(0..=CYCLE_MAX_LABEL)).collect(),
            outward: (0..len).map(|_| rng.gen_range(0..=CYCLE_MAX_LABEL)).collect(),
        };
        let (wi, wo) = labels.weight();
        let (a, b) = cycle_bitree(&labels).unwrap().value;
        let (oa, ob) = best_cycle_bitree(&labels).unwrap();
        if 2 * a < wi || 2 * b < wo || a.min(b) > oa.min(ob) {
            bad_cycle.push(format!("trial {trial}: value ({a},{b}), weight ({wi},{wo}), optimum ({oa},{ob})"));
        }
    }
    let q = 5;
    let uniform = CycleLabels {
        cycle: vec![0, 1, 2, 3],
        inward: vec![q; 4],
        outward: vec![q; 4],
    };
    let (ua, ub) = cycle_bitree(&uniform).unwrap().value;
    let (oa, ob) = best_cycle_bitree(&uniform).unwrap();
    let sharp = ua.min(ub) == 2 * q && oa.min(ob) == 2 * q;
    report.line(
        4,
        "cycle bi-tree",
        bad_cycle.is_empty() && sharp,
        format!(
            "{CYCLE_TRIALS} cycles: value >= half the weight and min <= optimum min, {} violations; \
             uniform 4-cycle w = {}: algorithm min {}, optimum min {}{}",
            bad_cycle.len(),
            4 * q,
            ua.min(ub),
            oa.min(ob),
            first(&bad_cycle)
        ),
    );

    // 5: the quadratic lower bound and the factor-18 approximation.
    let start = Instant::now();
    let mut bad_fcpp = Vec::new();
    for (seed, d) in &corpus {
        match fcpp_approx(d) {
            Ok(res) => {
                if res.forward_pairs < fcpp_lower_bound(d.n()) {
                    bad_fcpp.push(format!("seed {seed}: {} < {}", res.forward_pairs, fcpp_lower_bound(d.n())));
                }
                scheduled.check(&format!("corpus seed {seed}"), d, &res.ordering);
            }
            Err(e) => bad_fcpp.push(format!("seed {seed}: {e}")),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 5);
    // Smallest count/t(D) ratio seen, as a fraction.
    let mut worst: Option<(u64, u64)> = None;
    for trial in 0..SMALL_TRIALS {
        let n = rng.gen_range(2..=SMALL_MAX_N);
        let extra = rng.gen_range(0..=n * (n - 2));
        let d = gen_random_strong(n, extra, rng.gen()).unwrap();
        if n >= 4 {
            trees.unit(&format!("small trial {trial}"), &d, &left_maximal_dfs(&d, 0).unwrap());
        }
        let got = fcpp_approx(&d).unwrap();
        let (t, best) = brute_force_t(&d).unwrap();
        if APPROX_FACTOR * got.forward_pairs < t || got.forward_pairs > t {
            bad_fcpp.push(format!("small trial {trial}: {} vs t = {t}", got.forward_pairs));
        }
        if t > 0 && worst.is_none_or(|(a, b)| got.forward_pairs * b < a * t) {
            worst = Some((got.forward_pairs, t));
        }
        scheduled.check(&format!("small trial {trial}"), &d, &got.ordering);
        scheduled.check(&format!("small trial {trial} optimum"), &d, &best);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        scheduled.check(&format!("small trial {trial} random"), &d, &VertexOrdering::new(perm).unwrap());
    }
    let elapsed = start.elapsed();
    report.line(
        5,
        "FCPP bound",
        bad_fcpp.is_empty() && elapsed < BUDGET_FCPP,
        format!(
            "count >= ceil(n/6)^2 - 1 on {} digraphs; {APPROX_FACTOR}*count >= t(D) on {SMALL_TRIALS} digraphs \
             with n <= {SMALL_MAX_N} (worst ratio {}); {} violations, {:.2?} (budget {:?}){}",
            corpus.len(),
            worst.map_or("n/a".to_string(), |(a, b)| format!("{a}/{b}")),
            bad_fcpp.len(),
            elapsed,
            BUDGET_FCPP,
            first(&bad_fcpp)
        ),
    );

    // 7 before 6 so its canonical orderings join the schedule check.
    let mut bad_prop2 = Vec::new();
    let mut dag_values = Vec::new();
    for k in 1..=3usize {
        let inst = gen_prop2(k).unwrap();
        let d = &inst.digraph;
        let n = d.n();
        let f = forward_dag(d, &inst.canonical).unwrap();
        let backward: Vec<(usize, usize)> = d.arcs().filter(|&(u, v)| !f.has_arc(u, v)).collect();
        let pairs = count_forward_pairs(d, &inst.canonical).unwrap();
        let dag_max = dag_balanced_bitree_max(&f).unwrap();
        dag_values.push(dag_max);
        let checks = [
            ("n", n == 3 * k * k + 2 * k + 2),
            ("strong", is_strong(d)),
            ("minimal", minimalize_strong(d).unwrap() == *d),
            ("backward arcs", backward == vec![(inst.y, inst.x)]),
            ("forward pairs", pairs >= (k as u64).pow(4)),
            ("dag bi-tree", dag_max == 2 * k + 5),
        ];
        for (what, ok) in checks {
            if !ok {
                bad_prop2.push(format!("k = {k}: {what}"));
            }
        }
        trees.unit(&format!("gap instance k = {k}"), d, &left_maximal_dfs(d, 0).unwrap());
        scheduled.check(&format!("gap instance k = {k} canonical"), d, &inst.canonical);
    }

    report.line(
        6,
        "ordering to schedule",
        scheduled.bad.is_empty(),
        format!(
            "temporal >= forward for {} (digraph, ordering) pairs, {} violations{}",
            scheduled.checked,
            scheduled.bad.len(),
            first(&scheduled.bad)
        ),
    );
    report.line(
        7,
        "gap instance",
        bad_prop2.is_empty(),
        format!(
            "k = 1..3: sizes, strong, arc-minimal, only yx backward, >= k^4 forward pairs, \
             forward bi-tree maxima {dag_values:?} (expected [7, 9, 11]){}",
            first(&bad_prop2)
        ),
    );

    // 8: binary-tree request instances.
    let start = Instant::now();
    let mut bad_req = Vec::new();
    let mut maxima = Vec::new();
    for h in 2..=4usize {
        for mode in [MatchingMode::Identity, MatchingMode::Hypercube, MatchingMode::Random(h as u64)] {
            let inst = gen_binary_tree_requests(h, mode).unwrap();
            let tag = format!("h = {h}, {mode:?}");
            if inst.digraph.n() != (1 << (h + 1)) - 1 || inst.requests.len() != h << (h - 1) {
                bad_req.push(format!("{tag}: sizes"));
            }
            match max_requests_on_tree(&inst) {
                Ok(opt) => {
                    maxima.push(opt.max);
                    let method_ok = if h <= 3 {
                        opt.method == OptimumMethod::Exhaustive && opt.bounded_everywhere == Some(true)
                    } else {
                        opt.method == OptimumMethod::Dynamic
                    };
                    if opt.max > 1 << h || !opt.nodes.iter().all(|s| s.bounded()) || !method_ok {
                        bad_req.push(format!("{tag}: max {} ({:?})", opt.max, opt.method));
                    }
                }
                Err(e) => bad_req.push(format!("{tag}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    report.line(
        8,
        "binary-tree requests",
        bad_req.is_empty() && elapsed < BUDGET_REQUESTS,
        format!(
            "h = 2..4 x 3 matchings: maxima {maxima:?} <= 2^h, rf+in <= l and rf+out <= l at the optimum, \
             exhaustive for h <= 3, dynamic programming for h = 4; {:.2?} (budget {:?}){}",
            elapsed,
            BUDGET_REQUESTS,
            first(&bad_req)
        ),
    );

    // 9: forward covers.
    let mut bad_cover = Vec::new();
    let mut largest = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 9);
    for trial in 0..2 * COVER_TRIALS {
        let n = rng.gen_range(2..=COVER_MAX_N);
        let seed = rng.gen();
        let g = if trial < COVER_TRIALS {
            gen_random_tree(n, seed).unwrap()
        } else {
            let cap = n * (n - 1) / 2 - (n - 1);
            gen_random_connected(n, rng.gen_range(0..=n).min(cap), seed).unwrap()
        };
        match forward_cover_bioriented(&g) {
            Ok(f) => {
                largest = largest.max(f.len());
                if !verify_forward_cover(&g, &f) || f.len() > cover_size_bound(n) {
                    bad_cover.push(format!("trial {trial}: n = {n}, {} orderings", f.len()));
                }
            }
            Err(e) => bad_cover.push(format!("trial {trial}: {e}")),
        }
    }
    report.line(
        9,
        "forward cover",
        bad_cover.is_empty(),
        format!(
            "{COVER_TRIALS} trees + {COVER_TRIALS} connected graphs, n <= {COVER_MAX_N}: complete and \
             <= ceil(log_1.5 n) + 2 orderings (largest family {largest}), {} violations{}",
            bad_cover.len(),
            first(&bad_cover)
        ),
    );

    report.line(
        10,
        "DFS validity",
        trees.bad.is_empty(),
        format!(
            "{} constructed trees are DFS trees and left-maximal, {} violations{}",
            trees.checked,
            trees.bad.len(),
            first(&trees.bad)
        ),
    );

    if report.failures > 0 {
        println!("{} criteria failed", report.failures);
        std::process::exit(1);
    }
}
