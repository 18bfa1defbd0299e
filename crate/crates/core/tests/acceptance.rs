//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line. Run with `--nocapture` to see the lines.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use max2csp_core::algo_a::{phase1_sequence, solve_a};
use max2csp_core::algo_b::{build_reduction_tree, iii_depth, solve_b};
use max2csp_core::encode::{encode_max_cut, encode_mis};
use max2csp_core::forest::solve_via_induced_forest;
use max2csp_core::generate::{cubic, gnm, random_csp, union_k5};
use max2csp_core::lp::{
    beta4_of_alpha, beta_of_alpha, lp_alpha_table, lp_maximize, rational, table_a, table_b, verify_dual,
};
use max2csp_core::mis::solve_mis;
use max2csp_core::oracle::brute_force_solve;
use max2csp_core::treewidth::{
    decomposition_from_reduction_tree, export_pace, parse_pace, solve_dp, validate_decomposition,
};
use max2csp_core::{score_assignment, Instance, Score};

/// A test graph with a label, vertex count and edge list.
type Labeled = (String, usize, Vec<(usize, usize)>);

/// Print the verdict line, then fail the test if any check failed.
fn report(n: u32, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n}: PASS");
    } else {
        println!("criterion {n}: FAIL ({} problem(s))", failures.len());
        for f in failures.iter().take(10) {
            println!("  - {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn degrees(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(u, v) in edges {
        d[u] += 1;
        d[v] += 1;
    }
    d
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for seed in 0..520u64 {
        let n = 1 + (seed % 10) as usize;
        let m = (seed as usize * 7 + 3) % ((n * (n - 1) / 2).min(20) + 1);
        let r = 2 + (seed % 2) as usize;
        let inst = random_csp(n, m, r, -5, 5, seed).unwrap();
        let (best, _) = brute_force_solve(&inst).unwrap();
        let runs = [
            ("a", solve_a(&inst)),
            ("b", solve_b(&inst)),
            ("dp", solve_dp(&inst).map(|(s, _)| s)),
            ("forest", solve_via_induced_forest(&inst)),
        ];
        for (name, res) in runs {
            match res {
                Ok(sol) => {
                    check(&mut failures, sol.score == best, || {
                        format!("seed {seed} {name}: score {} vs oracle {best}", sol.score)
                    });
                    check(&mut failures, score_assignment(&inst, &sol.assignment) == Ok(sol.score), || {
                        format!("seed {seed} {name}: assignment does not rescore")
                    });
                }
                Err(e) => failures.push(format!("seed {seed} {name}: {e}")),
            }
        }
        count += 1;
    }
    let elapsed = start.elapsed();
    check(&mut failures, count >= 500, || format!("only {count} instances"));
    check(&mut failures, elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"));
    println!("criterion 1: {count} instances in {:.1}s", elapsed.as_secs_f64());
    report(1, &failures);
}

#[test]
fn criterion_2_k5_worst_case() {
    let mut failures = Vec::new();
    let k5 = encode_max_cut(5, &union_k5(1), None).unwrap();
    let seq = phase1_sequence(&k5);
    check(&mut failures, seq.iii_count == 2, || format!("A uses {} III-reductions", seq.iii_count));
    let b = solve_b(&k5).unwrap();
    check(&mut failures, b.stats.iii_depth == 2, || format!("B depth {}", b.stats.iii_depth));
    check(&mut failures, b.score == 6, || format!("B score {}", b.score));
    check(&mut failures, solve_a(&k5).unwrap().score == 6, || "A score".into());
    check(&mut failures, brute_force_solve(&k5).unwrap().0 == 6, || "oracle score".into());
    report(2, &failures);
}

/// Mixed test graphs: gnm, cubic and unions of K5, all with m ≤ 60.
fn depth_graphs() -> Vec<Labeled> {
    let mut out = Vec::new();
    for seed in 0..210u64 {
        let s = seed as usize;
        let (label, n, edges) = match seed % 3 {
            0 => {
                let n = 5 + s % 16;
                let m = (7 * s + 5) % ((n * (n - 1) / 2).min(60) + 1);
                ("gnm", n, gnm(n, m, seed).unwrap())
            }
            1 => {
                let n = 4 + 2 * (s % 19);
                ("cubic", n, cubic(n, seed).unwrap())
            }
            _ => {
                let k = 1 + s % 6;
                ("union-k5", 5 * k, union_k5(k))
            }
        };
        out.push((format!("{label} seed {seed}"), n, edges));
    }
    out
}

#[test]
fn criterion_3_depth_bounds() {
    let mut failures = Vec::new();
    let graphs = depth_graphs();
    let (mut low_degree, mut cubic_count) = (0, 0);
    for (label, n, edges) in &graphs {
        let m = edges.len();
        let inst = encode_max_cut(*n, edges, None).unwrap();
        let a = phase1_sequence(&inst).iii_count;
        check(&mut failures, a <= m / 5, || format!("{label}: A count {a} > m/5 with m = {m}"));
        let d = iii_depth(&build_reduction_tree(&inst));
        check(&mut failures, d <= 2 + 19 * m / 100, || format!("{label}: B depth {d}, m = {m}"));
        let deg = degrees(*n, edges);
        let max_deg = deg.iter().copied().max().unwrap_or(0);
        if max_deg <= 4 {
            low_degree += 1;
            check(&mut failures, d <= 1 + 3 * m / 16, || format!("{label}: degree ≤ 4 depth {d}, m = {m}"));
        }
        if deg.iter().all(|&x| x == 3) {
            cubic_count += 1;
            check(&mut failures, d <= m / 6, || format!("{label}: cubic depth {d}, m = {m}"));
        }
    }
    check(&mut failures, graphs.len() >= 200, || "fewer than 200 graphs".into());
    println!(
        "criterion 3: {} graphs, {low_degree} with max degree ≤ 4, {cubic_count} cubic",
        graphs.len()
    );
    report(3, &failures);
}

#[test]
fn criterion_4_lp_certificates() {
    let start = Instant::now();
    let q = |s: &str| rational(s).unwrap();
    let mut failures = Vec::new();
    let a = lp_maximize(&table_a()).unwrap().value;
    check(&mut failures, a == q("1/5"), || format!("table A optimum {a}"));
    let b = lp_maximize(&table_b()).unwrap().value;
    check(&mut failures, b == q("19/100"), || format!("table B optimum {b}"));
    let ya = ["1/5", "0", "-1/20", "-1/5", "-1/10"].map(q);
    check(&mut failures, verify_dual(&table_a(), &ya, &q("1/5")), || "table A dual rejected".into());
    let yb = ["19/100", "-1/200", "-7/200", "0", "0", "-3/20"].map(q);
    check(&mut failures, verify_dual(&table_b(), &yb, &q("19/100")), || {
        "table B dual (19/100, -1/200, -7/200, 0, 0, -3/20) rejected".into()
    });
    for s in ["0", "1/20", "1/9", "1/8", "1/7", "1/6", "1/5"] {
        let alpha = q(s);
        let lp = lp_maximize(&lp_alpha_table(&alpha).unwrap()).unwrap().value;
        let closed = beta_of_alpha(&alpha).unwrap();
        check(&mut failures, lp == closed, || format!("alpha {s}: LP {lp} vs closed form {closed}"));
    }
    check(&mut failures, beta_of_alpha(&q("1/9")).unwrap() == q("13/75"), || "beta(1/9)".into());
    check(&mut failures, beta4_of_alpha(&q("1/9")).unwrap() == q("1/6"), || "beta4(1/9)".into());
    let elapsed = start.elapsed();
    check(&mut failures, elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"));
    report(4, &failures);
}

#[test]
fn criterion_5_tree_decompositions() {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut instances: Vec<(String, Instance)> = depth_graphs()
        .into_iter()
        .map(|(label, n, edges)| (label, encode_max_cut(n, &edges, None).unwrap()))
        .collect();
    for seed in 0..100 {
        let n = 2 + seed as usize % 12;
        let m = (seed as usize * 5) % ((n * (n - 1) / 2).min(30) + 1);
        instances.push((format!("csp seed {seed}"), random_csp(n, m, 2, -3, 3, seed).unwrap()));
    }
    for (label, inst) in &instances {
        let m = inst.num_edges();
        let tree = build_reduction_tree(inst);
        let d = iii_depth(&tree);
        let td = match decomposition_from_reduction_tree(inst, &tree) {
            Ok(td) => td,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let problems = validate_decomposition(inst, &td);
        check(&mut failures, problems.is_empty(), || format!("{label}: {problems:?}"));
        let w = td.width();
        check(&mut failures, w <= d + 2, || format!("{label}: width {w} > depth {d} + 2"));
        check(&mut failures, w <= 4 + 19 * m / 100, || format!("{label}: width {w}, m = {m}"));
        check(&mut failures, parse_pace(&export_pace(&td)).as_ref() == Ok(&td), || {
            format!("{label}: PACE round trip differs")
        });
        count += 1;
    }
    println!("criterion 5: {count} decompositions");
    report(5, &failures);
}

/// Random series-parallel graph: repeatedly subdivide an edge or add a
/// parallel path of length two.
fn series_parallel(steps: usize, seed: u64) -> (usize, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![(0, 1)];
    let mut n = 2;
    for _ in 0..steps {
        let i = rng.gen_range(0..edges.len());
        let (u, v) = edges[i];
        if rng.gen_bool(0.5) {
            edges[i] = (u, n);
            edges.push((n, v));
        } else {
            edges.push((u, n));
            edges.push((n, v));
        }
        n += 1;
    }
    (n, edges)
}

#[test]
fn criterion_6_structural_zero_cases() {
    let mut failures = Vec::new();
    let mut graphs: Vec<Labeled> = Vec::new();
    for n in 2..12 {
        graphs.push((format!("path {n}"), n, (1..n).map(|v| (v - 1, v)).collect()));
    }
    for n in 3..12 {
        let mut c: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        c.push((0, n - 1));
        graphs.push((format!("cycle {n}"), n, c));
    }
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..15);
        let edges = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        graphs.push((format!("tree seed {seed}"), n, edges));
    }
    for seed in 0..30u64 {
        let (n, edges) = series_parallel(3 + seed as usize % 12, seed);
        graphs.push((format!("series-parallel seed {seed}"), n, edges));
    }
    for (label, n, edges) in &graphs {
        let inst = encode_max_cut(*n, edges, None).unwrap();
        let b = solve_b(&inst).unwrap();
        check(&mut failures, b.stats.iii_depth == 0, || format!("{label}: depth {}", b.stats.iii_depth));
        check(&mut failures, b.stats.color_branches == 0, || {
            format!("{label}: {} color branches", b.stats.color_branches)
        });
        let best = brute_force_solve(&inst).unwrap().0;
        check(&mut failures, b.score == best, || format!("{label}: score {} vs {best}", b.score));
    }
    println!("criterion 6: {} graphs", graphs.len());
    report(6, &failures);
}

/// Direct independent-set enumeration, independent of the CSP encoding.
fn best_independent_set(n: usize, edges: &[(usize, usize)], w: &[Score]) -> Score {
    (0u32..1 << n)
        .filter(|s| edges.iter().all(|&(u, v)| s & (1 << u) == 0 || s & (1 << v) == 0))
        .map(|s| (0..n).filter(|&v| s & (1 << v) != 0).map(|v| w[v]).sum())
        .max()
        .unwrap_or(0)
}

#[test]
fn criterion_7_mis() {
    let mut failures = Vec::new();
    let mut count = 0;
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=12);
        let m = rng.gen_range(0..=n * (n - 1) / 2);
        let edges = gnm(n, m, seed).unwrap();
        let weights: Vec<Score> = if seed % 2 == 0 {
            vec![1; n]
        } else {
            (0..n).map(|_| rng.gen_range(0..10)).collect()
        };
        let (s, set) = solve_mis(n, &edges, &weights).unwrap();
        let best = best_independent_set(n, &edges, &weights);
        check(&mut failures, s == best, || format!("seed {seed}: {s} vs {best}"));
        let independent = edges.iter().all(|(u, v)| !(set.contains(u) && set.contains(v)));
        let weight: Score = set.iter().map(|&v| weights[v]).sum();
        check(&mut failures, independent && weight == s, || format!("seed {seed}: bad set {set:?}"));
        count += 1;
    }
    let petersen = [
        (0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
    ];
    let (p, _) = solve_mis(10, &petersen, &[1; 10]).unwrap();
    check(&mut failures, p == 4, || format!("Petersen {p}"));
    let via_csp = brute_force_solve(&encode_mis(10, &petersen, &[1; 10]).unwrap()).unwrap().0;
    check(&mut failures, via_csp == 4, || format!("Petersen via encoding {via_csp}"));
    println!("criterion 7: {count} random graphs");
    report(7, &failures);
}

#[test]
fn criterion_8_cubic_runtime() {
    let mut failures = Vec::new();
    let edges = cubic(24, 2024).unwrap();
    let inst = encode_max_cut(24, &edges, None).unwrap();
    let start = Instant::now();
    let sol = solve_b(&inst).unwrap();
    let elapsed = start.elapsed();
    check(&mut failures, edges.len() == 36, || format!("m = {}", edges.len()));
    check(&mut failures, elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"));
    check(&mut failures, sol.stats.iii_depth <= 6, || format!("depth {}", sol.stats.iii_depth));
    check(&mut failures, score_assignment(&inst, &sol.assignment) == Ok(sol.score), || "rescore".into());
    println!(
        "criterion 8: score {} depth {} in {:.1} ms",
        sol.score,
        sol.stats.iii_depth,
        elapsed.as_secs_f64() * 1e3
    );
    report(8, &failures);
}
