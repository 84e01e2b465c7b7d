//! Acceptance suite: one test per headline property, each printing a
//! PASS/FAIL line with its runtime (visible with `--nocapture`). Expected
//! values are either forced small cases, closed forms committed by the
//! constructions, or results of the independent brute-force oracles in this
//! file and in `cubepack::oracle`.

use std::time::{Duration, Instant};

use cubepack::antipodal::ramras_decomposition;
use cubepack::audit::{
    classify_codim1_intersection, codim2_coverage_check, separating_audit, verify_multiset,
    verify_packing, Codim1Class,
};
use cubepack::certfile::cover_to_text;
use cubepack::grid::{validate_placement, Grid, Mode, PatternGraph, Placement, Vertex};
use cubepack::hampath::{pack_any_path_power, predicted_uncovered, HamOrderedBlock};
use cubepack::induced::{induced_path_power_packing, staircase_partition};
use cubepack::modcover::{
    congruence_cover_solve, lift_to_path_power, one_mod_l_partition, shift_l_partition,
    SolveOutcome,
};
use cubepack::oracle::{
    check_window_path, consecutive_induced_hamilton, exact_cover_search, greedy_pack,
    p3_power_copies, subgraph_embeddings, Budget, SearchOutcome,
};

fn finish(criterion: usize, label: &str, started: Instant, limit: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {criterion} ({label}): PASS in {:.2?}", elapsed);
    assert!(
        elapsed < limit,
        "criterion {criterion} exceeded its runtime limit: {elapsed:?} >= {limit:?}"
    );
}

fn q(n: usize) -> Grid {
    Grid::hypercube(n).unwrap()
}

fn edge_pattern() -> PatternGraph {
    PatternGraph::induced(q(1), &[Vertex(vec![0]), Vertex(vec![1])]).unwrap()
}

fn corner_path() -> PatternGraph {
    PatternGraph::induced(
        q(2),
        &[Vertex(vec![0, 0]), Vertex(vec![0, 1]), Vertex(vec![1, 1])],
    )
    .unwrap()
}

fn square_pattern() -> PatternGraph {
    PatternGraph::induced_from_indices(q(2), vec![0, 1, 2, 3]).unwrap()
}

/// the 4-vertex path spanning the square, carried as explicit edges
fn spanning_p4() -> PatternGraph {
    PatternGraph::with_edges_from_indices(q(2), vec![0, 1, 3, 2], vec![(0, 1), (1, 2), (2, 3)])
        .unwrap()
}

fn p3_power_pattern(k: usize) -> PatternGraph {
    let b = Grid::path_power(3, k).unwrap();
    let verts: Vec<u64> = b.vertices().collect();
    PatternGraph::induced_from_indices(b, verts).unwrap()
}

#[test]
fn criterion_01_shift_partitions_cover_exactly_l() {
    let started = Instant::now();
    let six_verts: Vec<u64> = (0..6).collect();
    let patterns: Vec<PatternGraph> = vec![
        edge_pattern(),
        corner_path(),
        square_pattern(),
        PatternGraph::induced_from_indices(q(3), six_verts).unwrap(),
    ];
    for pattern in &patterns {
        let k = pattern.ambient().ndim();
        let l = pattern.len() as u64;
        for n in k..=k + 2 {
            let cover = shift_l_partition(pattern, n).unwrap();
            let report = verify_multiset(&cover);
            assert!(report.valid, "shift cover invalid for l={l}, n={n}");
            assert_eq!(
                report.coverage_counts.keys().copied().collect::<Vec<_>>(),
                vec![l],
                "coverage must be exactly {l} everywhere (n={n})"
            );
            let lifted = lift_to_path_power(&cover, l as u32).unwrap();
            let report = verify_multiset(&lifted);
            assert!(report.valid, "lifted cover invalid for l={l}, n={n}");
            assert_eq!(
                report.coverage_counts.keys().copied().collect::<Vec<_>>(),
                vec![l]
            );
            assert_eq!(lifted.host.vertex_count(), (2 * l).pow(n as u32));
        }
    }
    // the exact-coverage property does not depend on which 6-vertex subset
    for start in 0..28u64 {
        let subset = six_subset(start);
        let pattern = PatternGraph::induced_from_indices(q(3), subset).unwrap();
        let cover = shift_l_partition(&pattern, 3).unwrap();
        let report = verify_multiset(&cover);
        assert!(report.valid);
        assert_eq!(
            report.coverage_counts.keys().copied().collect::<Vec<_>>(),
            vec![6]
        );
    }
    finish(
        1,
        "shift covers with exact coverage",
        started,
        Duration::from_secs(10),
    );
}

/// the `i`-th 6-element subset of Q_3's vertices (complement of a pair)
fn six_subset(i: u64) -> Vec<u64> {
    let mut skip = Vec::new();
    for a in 0..8u64 {
        for b in (a + 1)..8 {
            skip.push((a, b));
        }
    }
    let (a, b) = skip[i as usize];
    (0..8).filter(|&v| v != a && v != b).collect()
}

#[test]
fn criterion_02_residue_one_covers() {
    let overall = Instant::now();
    for (pattern, l) in [
        (edge_pattern(), 2u64),
        (corner_path(), 3),
        (spanning_p4(), 4),
    ] {
        let started = Instant::now();
        let cover = one_mod_l_partition(&pattern).unwrap();
        assert_eq!(cover.modulus, l);
        assert_eq!(cover.residue, 1);
        let report = verify_multiset(&cover);
        assert!(
            report.valid,
            "residue-1 cover invalid for l={l}: {:?}",
            report.failures.first()
        );
        for entry in &cover.entries {
            let rep = validate_placement(&cover.host, &pattern, &entry.placement.image).unwrap();
            assert!(rep.isometric, "placement not isometric for l={l}");
        }
        // independent route: the congruence solver over all isometric copies
        let generators =
            cubepack::grid::enumerate_placements(&pattern, &cover.host, Mode::Isometric);
        match congruence_cover_solve(&cover.host, &[pattern.clone()], &generators, l, 1).unwrap() {
            SolveOutcome::Solved(solved) => {
                let report = verify_multiset(&solved);
                assert!(report.valid, "solver cover invalid for l={l}");
            }
            SolveOutcome::Unsolvable => panic!("solver must reach a solution for l={l}"),
        }
        assert!(
            started.elapsed() < Duration::from_secs(60),
            "l={l} case too slow"
        );
    }
    finish(
        2,
        "residue-1 covers, solver cross-checked",
        overall,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_03_path_power_packings_match_the_closed_form() {
    let started = Instant::now();
    for (l, t) in [(3u64, 1usize), (3, 2), (5, 1), (5, 2), (6, 1), (6, 2)] {
        let min = cubepack::hampath::any_power_min(l, t).unwrap();
        for n in min..=14 {
            let pack = pack_any_path_power(l, t, n).unwrap();
            for copy in &pack.copies {
                copy.validate(&pack.host).unwrap();
                for block in &copy.blocks {
                    assert_eq!(block.order.len() as u64, l);
                }
            }
            let cert = pack.certificate();
            let report = verify_packing(&cert);
            assert!(report.valid, "pack invalid for l={l}, t={t}, n={n}");
            let p = &pack.params;
            let expected = predicted_uncovered(p.m, p.r, p.a, t, p.valuation);
            assert_eq!(
                pack.uncovered.len() as u64,
                expected,
                "uncovered count must equal the closed form (l={l}, t={t}, n={n})"
            );
        }
    }
    // the forced value from the smallest interesting instance
    assert_eq!(pack_any_path_power(3, 1, 4).unwrap().uncovered.len(), 1);
    finish(
        3,
        "path-power packings, exact remainders",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_antipodal_path_partitions() {
    let started = Instant::now();
    for s in 1..=3u32 {
        check_ramras(s);
    }
    let q15_started = Instant::now();
    check_ramras(4);
    let q15_elapsed = q15_started.elapsed();
    assert!(
        q15_elapsed < Duration::from_secs(5),
        "Q_15 case took {q15_elapsed:?}"
    );
    finish(
        4,
        "antipodal path partitions",
        started,
        Duration::from_secs(30),
    );
}

fn check_ramras(s: u32) {
    let dec = ramras_decomposition(s).unwrap();
    let n = dec.n;
    assert_eq!(
        dec.paths.len() as u64,
        dec.host.vertex_count() / (n as u64 + 1)
    );
    let cert = dec.certificate();
    let report = verify_packing(&cert);
    assert!(report.valid, "s={s}: {:?}", report.failures.first());
    assert!(report.uncovered.is_empty(), "s={s} must partition");
    for mode in &report.mode_verified {
        assert!(mode >= &Some(Mode::Induced), "all paths induced (s={s})");
    }
    for path in &dec.paths {
        assert_eq!(
            dec.host.distance_idx(path[0], path[n]),
            n as u64,
            "endpoints antipodal (s={s})"
        );
    }
}

#[test]
fn criterion_05_staircase_partitions_every_block() {
    let overall = Instant::now();
    for l in 2usize..=5 {
        let started = Instant::now();
        let d = ceil_log2(l) + 1;
        let host = q(d);
        let mut blocks_checked = 0usize;
        let mut subset = Vec::new();
        enumerate_k_subsets(host.vertex_count(), l, &mut subset, &mut |verts| {
            for order in hamilton_orders(&host, verts) {
                let block = HamOrderedBlock {
                    sub_box: host.clone(),
                    host_coords: (0..d).collect(),
                    order,
                };
                let cert = staircase_partition(&block).unwrap();
                assert_eq!(cert.placements.len(), l - 1);
                let report = verify_packing(&cert);
                assert!(report.valid, "staircase failed for a block of size {l}");
                for mode in &report.mode_verified {
                    assert!(mode >= &Some(Mode::Induced));
                }
                // covered cells are exactly block x path
                assert_eq!(
                    report.uncovered.len() as u64,
                    (host.vertex_count() - l as u64) * (l as u64 - 1)
                );
                blocks_checked += 1;
            }
        });
        assert!(
            blocks_checked > 0,
            "no Hamilton-ordered blocks of size {l} found"
        );
        println!("  l={l}: {blocks_checked} ordered blocks staircased");
        assert!(
            started.elapsed() < Duration::from_secs(30),
            "l={l} exhaustive pass too slow"
        );
    }
    finish(5, "staircase partitions", overall, Duration::from_secs(120));
}

fn ceil_log2(l: usize) -> usize {
    (usize::BITS - (l - 1).leading_zeros()) as usize
}

fn enumerate_k_subsets(n: u64, k: usize, prefix: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if prefix.len() == k {
        f(prefix);
        return;
    }
    let start = prefix.last().map_or(0, |&p| p + 1);
    for v in start..n {
        prefix.push(v);
        enumerate_k_subsets(n, k, prefix, f);
        prefix.pop();
    }
}

/// all Hamilton path orders of the induced subgraph on `verts`
fn hamilton_orders(host: &Grid, verts: &[u64]) -> Vec<Vec<u64>> {
    let mut orders = Vec::new();
    let mut path = Vec::with_capacity(verts.len());
    for &start in verts {
        path.push(start);
        extend_order(host, verts, &mut path, &mut orders);
        path.pop();
    }
    orders
}

fn extend_order(host: &Grid, verts: &[u64], path: &mut Vec<u64>, orders: &mut Vec<Vec<u64>>) {
    if path.len() == verts.len() {
        orders.push(path.clone());
        return;
    }
    let last = *path.last().unwrap();
    for &v in verts {
        if path.contains(&v) || !host.adjacent_idx(last, v) {
            continue;
        }
        path.push(v);
        extend_order(host, verts, path, orders);
        path.pop();
    }
}

#[test]
fn criterion_06_induced_path_power_packings() {
    let started = Instant::now();
    // t = 1: the remainder is a constant over the whole range
    let mut max_unc = 0u64;
    for n in 7..=13 {
        let pack = induced_path_power_packing(3, 1, n, Some(2)).unwrap();
        let cert = pack.certificate();
        let report = verify_packing(&cert);
        assert!(report.valid, "induced pack invalid at n={n}");
        for mode in &report.mode_verified {
            assert!(
                mode >= &Some(Mode::Induced),
                "copies must be induced at n={n}"
            );
        }
        let expected = pack.base_params.predicted_uncovered << 3; // cube factor Q_3
        assert_eq!(pack.uncovered.len() as u64, expected);
        assert_eq!(pack.uncovered.len() as u64, pack.predicted_uncovered());
        max_unc = max_unc.max(pack.uncovered.len() as u64);
    }
    assert!(
        max_unc <= 16,
        "t=1 remainder must stay constant, got {max_unc}"
    );
    println!("  t=1: uncovered bounded by {max_unc} over n=7..13");

    // t = 2: linear remainder with a pinned constant
    const K: u64 = 121;
    for n in 14..=18 {
        let pack = induced_path_power_packing(3, 2, n, Some(2)).unwrap();
        let cert = pack.certificate();
        let report = verify_packing(&cert);
        assert!(report.valid, "induced pack invalid at n={n} (t=2)");
        for mode in &report.mode_verified {
            assert!(mode >= &Some(Mode::Induced));
        }
        let expected = pack.base_params.predicted_uncovered << 6; // cube factors (Q_3)^2
        assert_eq!(pack.uncovered.len() as u64, expected);
        let unc = pack.uncovered.len() as u64;
        assert!(
            unc <= K * n as u64,
            "uncovered {unc} exceeds {K}*n at n={n}"
        );
        println!(
            "  t=2 n={n}: uncovered={unc}, uncovered/n={:.1}",
            unc as f64 / n as f64
        );
    }
    finish(
        6,
        "induced path-power packings",
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_07_codim1_classification_is_exhaustive() {
    let started = Instant::now();
    // all four classes must occur somewhere across the whole enumeration
    let mut seen = [false; 4];
    for (k, n) in [(1usize, 2usize), (1, 3), (2, 4)] {
        let pattern = p3_power_pattern(k);
        let host = q(n);
        let embeddings = subgraph_embeddings(&pattern, &host, 1_000_000).unwrap();
        assert!(!embeddings.is_empty());
        for image in &embeddings {
            let placement = Placement {
                pattern: 0,
                mode: Mode::Subgraph,
                image: image.clone(),
            };
            for coord in 0..n {
                for side in 0..2u32 {
                    let class =
                        classify_codim1_intersection(&host, &pattern, &placement, coord, side)
                            .unwrap_or_else(|e| {
                                panic!("classification failed for (k={k}, n={n}): {e}")
                            });
                    seen[match class {
                        Codim1Class::Empty => 0,
                        Codim1Class::P3PowKm1 => 1,
                        Codim1Class::P2xP3PowKm1 => 2,
                        Codim1Class::P3PowK => 3,
                    }] = true;
                }
            }
        }
    }
    assert_eq!(
        seen, [true; 4],
        "all four classes must occur across the enumeration"
    );
    finish(
        7,
        "codimension-1 intersection classes",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_08_uncovered_sets_separate() {
    let started = Instant::now();
    for n in [6usize, 7] {
        let (pattern, copies) = p3_power_copies(3, n).unwrap();
        let host = q(n);
        let cert = greedy_pack(&host, &pattern, &copies);
        let report = verify_packing(&cert);
        assert!(report.valid, "greedy packing invalid for n={n}");
        assert!(
            !cert.placements.is_empty(),
            "greedy packing must place something"
        );

        let sep = separating_audit(n, &report.uncovered, 1);
        assert!(
            sep.is_separating,
            "uncovered set must separate (n={n}): {:?}",
            sep.witness
        );
        assert!(
            sep.size >= 3,
            "at least ceil(log2 {n}) = 3 uncovered vertices"
        );

        let codim2 = codim2_coverage_check(&cert).unwrap();
        assert!(codim2.pass, "codim-2 checks failed for n={n}");
    }
    finish(
        8,
        "separating-family lower bound",
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_09_oracle_sanity() {
    let started = Instant::now();
    // divisibility refutation with no search at all
    let refute_started = Instant::now();
    assert_eq!(
        exact_cover_search(&q(2), &corner_path(), Mode::Induced, &Budget::nodes(0), 0),
        SearchOutcome::Exhausted
    );
    assert!(refute_started.elapsed() < Duration::from_millis(100));

    // the two antipodal paths tile Q_3
    let p4 = PatternGraph::induced_from_indices(q(3), vec![0, 1, 3, 7]).unwrap();
    match exact_cover_search(&q(3), &p4, Mode::Induced, &Budget::default(), 0) {
        SearchOutcome::Found(cert) => {
            assert_eq!(cert.placements.len(), 2);
            assert!(verify_packing(&cert).valid);
        }
        other => panic!("expected SAT on (Q_3, induced P_4), got {other:?}"),
    }

    // the window-4 question on Q_3 is decided exhaustively
    match consecutive_induced_hamilton(3, 4, &Budget::nodes(100_000_000), 0).unwrap() {
        SearchOutcome::Found(path) => assert!(check_window_path(3, 4, &path)),
        SearchOutcome::Exhausted => {}
        SearchOutcome::OverBudget => panic!("(n=3, l=4) must be decided within budget"),
    }

    // window-3 fast path returns the Gray path up to n = 10
    for n in 1..=10 {
        match consecutive_induced_hamilton(n, 3, &Budget::nodes(1), 0).unwrap() {
            SearchOutcome::Found(path) => {
                assert_eq!(path, cubepack::hampath::gray_cycle(n).unwrap());
                assert!(check_window_path(n, 3, &path));
            }
            other => panic!("fast path failed for n={n}: {other:?}"),
        }
    }
    finish(9, "oracle sanity", started, Duration::from_secs(60));
}

#[test]
fn criterion_10_certificates_are_byte_stable() {
    let started = Instant::now();
    // every constructor of criteria 1-6, built twice from scratch
    let shift = || {
        let cover = shift_l_partition(&corner_path(), 3).unwrap();
        let lifted = lift_to_path_power(&cover, 3).unwrap();
        format!("{}{}", cover_to_text(&cover), cover_to_text(&lifted))
    };
    let residue = || cover_to_text(&one_mod_l_partition(&corner_path()).unwrap());
    let odd = || {
        cubepack::hampath::pack_odd_path_power(3, 1, 4)
            .unwrap()
            .certificate()
            .to_text()
    };
    let any = || {
        pack_any_path_power(6, 1, 4)
            .unwrap()
            .certificate()
            .to_text()
    };
    let ramras = || ramras_decomposition(3).unwrap().certificate().to_text();
    let staircase = || {
        let block = HamOrderedBlock {
            sub_box: q(2),
            host_coords: vec![0, 1],
            order: vec![0, 1, 3],
        };
        staircase_partition(&block).unwrap().to_text()
    };
    let induced = || {
        induced_path_power_packing(3, 1, 7, Some(2))
            .unwrap()
            .certificate()
            .to_text()
    };
    let induced_t2 = || {
        induced_path_power_packing(3, 2, 14, Some(2))
            .unwrap()
            .certificate()
            .to_text()
    };

    let builders: Vec<(&str, Box<dyn Fn() -> String>)> = vec![
        ("shift-l(+lift)", Box::new(shift)),
        ("one-mod-l", Box::new(residue)),
        ("odd-power", Box::new(odd)),
        ("any-power", Box::new(any)),
        ("ramras", Box::new(ramras)),
        ("staircase", Box::new(staircase)),
        ("induced-power", Box::new(induced)),
        ("induced-power t=2", Box::new(induced_t2)),
    ];
    for (name, build) in &builders {
        let first = build();
        let second = build();
        assert_eq!(first, second, "{name} certificates differ between runs");
        assert!(!first.is_empty());
    }
    finish(
        10,
        "byte-stable certificates",
        started,
        Duration::from_secs(120),
    );
}
