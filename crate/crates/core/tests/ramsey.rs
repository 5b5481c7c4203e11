mod common;

use std::time::{Duration, Instant};

use common::*;
use gridramsey::graph::{build_graph, grid_graph, Graph, GridSpec};
use gridramsey::ramsey::Strategy;
use gridramsey::ramsey::*;
use proptest::prelude::*;

/// Injective homomorphism search over all vertex maps.
fn brute_contains(h: &Graph, f: &Graph) -> bool {
    fn go(h: &Graph, f: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = map.len();
        if k == f.n() {
            return f.edges().all(|(a, b)| h.has_edge(map[a], map[b]));
        }
        for v in 0..h.n() {
            if !used[v] {
                used[v] = true;
                map.push(v);
                if go(h, f, map, used) {
                    return true;
                }
                map.pop();
                used[v] = false;
            }
        }
        false
    }
    go(h, f, &mut Vec::new(), &mut vec![false; h.n()])
}

/// Every colouring of `g`, no symmetry reduction.
fn brute_arrows(g: &Graph, f: &Graph) -> bool {
    let m = g.edge_count();
    (0u64..1 << m).all(|mask| {
        let bits: Vec<u8> = (0..m).map(|e| (mask >> e & 1) as u8).collect();
        [0u8, 1].iter().any(|&c| {
            let mut i = 0;
            let class = g.spanning_subgraph(|_, _| {
                let keep = bits[i] == c;
                i += 1;
                keep
            });
            brute_contains(&class, f)
        })
    })
}

fn brute_c4_cycles(h: &Graph) -> u64 {
    let n = h.n();
    let mut labelled = 0u64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                    if distinct
                        && h.has_edge(a, b)
                        && h.has_edge(b, c)
                        && h.has_edge(c, d)
                        && h.has_edge(d, a)
                    {
                        labelled += 1;
                    }
                }
            }
        }
    }
    labelled / 8
}

#[test]
fn k6_arrows_c4_within_five_seconds() {
    let start = Instant::now();
    let r = arrows_exhaustive(
        &Graph::complete(6),
        &Graph::cycle(4).unwrap(),
        ArrowsOptions::default(),
    )
    .unwrap();
    assert_eq!(r.outcome, ArrowsOutcome::Yes);
    assert_eq!(r.colourings_total, 1 << 14);
    assert!(start.elapsed() < Duration::from_secs(5));
}

#[test]
fn k5_escapes_c4_with_a_verified_witness() {
    let (g, f) = (Graph::complete(5), Graph::cycle(4).unwrap());
    let start = Instant::now();
    let r = arrows_exhaustive(&g, &f, ArrowsOptions::default()).unwrap();
    assert!(start.elapsed() < Duration::from_secs(5));
    let ArrowsOutcome::No { witness } = r.outcome else {
        panic!("{:?}", r.outcome)
    };
    assert_eq!(witness.len(), 10);
    verify_escape(&g, &f, &witness).unwrap();
    for c in [0u8, 1] {
        let kept: Vec<(usize, usize)> = g
            .edges()
            .zip(&witness)
            .filter(|(_, &b)| b == c)
            .map(|(e, _)| e)
            .collect();
        assert_eq!(brute_c4_cycles(&build_graph(5, &kept).unwrap()), 0);
    }
}

#[test]
fn verify_escape_rejects_a_monochromatic_colouring() {
    let (g, f) = (Graph::complete(5), Graph::cycle(4).unwrap());
    assert!(verify_escape(&g, &f, &[0; 10]).is_err());
}

#[test]
fn symmetry_reduction_agrees_with_full_enumeration() {
    let cases = [
        (Graph::complete(5), Graph::cycle(4).unwrap()),
        (Graph::complete(6), Graph::cycle(4).unwrap()),
        (Graph::complete(5), Graph::complete(3)),
        (Graph::complete(6), Graph::complete(3)),
        (
            grid_graph(GridSpec::new(3, 3).unwrap()),
            parse_pattern("path:3").unwrap(),
        ),
    ];
    for (g, f) in &cases {
        let on = arrows_exhaustive(g, f, ArrowsOptions::default()).unwrap();
        let off = arrows_exhaustive(
            g,
            f,
            ArrowsOptions {
                budget: None,
                symmetry: false,
            },
        )
        .unwrap();
        assert_eq!(
            on.outcome == ArrowsOutcome::Yes,
            off.outcome == ArrowsOutcome::Yes
        );
        if let ArrowsOutcome::No { witness } = &off.outcome {
            verify_escape(g, f, witness).unwrap();
        }
    }
}

#[test]
fn arrows_matches_full_enumeration_on_small_hosts() {
    let patterns = [
        parse_pattern("path:3").unwrap(),
        Graph::cycle(3).unwrap(),
        parse_pattern("path:4").unwrap(),
    ];
    for seed in 0..12 {
        let g = random_graph(6, 0.5, seed);
        if g.edge_count() > 12 {
            continue;
        }
        for f in &patterns {
            let r = arrows_exhaustive(&g, f, ArrowsOptions::default()).unwrap();
            assert_eq!(
                r.outcome == ArrowsOutcome::Yes,
                brute_arrows(&g, f),
                "seed {seed}"
            );
        }
    }
}

#[test]
fn r33_is_six() {
    let k3 = Graph::complete(3);
    assert_eq!(
        arrows_exhaustive(&Graph::complete(6), &k3, ArrowsOptions::default())
            .unwrap()
            .outcome,
        ArrowsOutcome::Yes
    );
    assert!(matches!(
        arrows_exhaustive(&Graph::complete(5), &k3, ArrowsOptions::default())
            .unwrap()
            .outcome,
        ArrowsOutcome::No { .. }
    ));
}

#[test]
fn oversized_host_is_rejected() {
    let r = arrows_exhaustive(
        &Graph::complete(9),
        &Graph::cycle(4).unwrap(),
        ArrowsOptions::default(),
    );
    assert!(r.is_err());
}

#[test]
fn majority_holds_at_least_half() {
    for strategy in [
        Strategy::Random { seed: 3 },
        Strategy::GreedyAntigrid,
        Strategy::BalancedByVertex { seed: 3 },
        Strategy::AllRed,
    ] {
        let g = random_graph(60, 0.3, 17);
        let c = colour_edges(&g, &strategy);
        assert_eq!(c.bits.len(), g.edge_count());
        let (h, colour) = majority_subgraph(&g, &c).unwrap();
        assert!(2 * h.edge_count() >= g.edge_count());
        assert_eq!(h.edge_count(), c.count(colour));
        assert!(h.edges().all(|(u, v)| g.has_edge(u, v)));
    }
    assert!(majority_subgraph(
        &Graph::empty(4),
        &colour_edges(&Graph::empty(4), &Strategy::AllRed)
    )
    .is_err());
}

#[test]
fn monochromatic_c4_count_matches_enumeration() {
    for seed in 0..10 {
        let g = random_graph(12, 0.6, seed);
        let c = colour_edges(&g, &Strategy::Random { seed });
        let direct: u64 = [Colour::Red, Colour::Blue]
            .iter()
            .map(|&k| brute_c4_cycles(&colour_class(&g, &c, k)))
            .sum();
        assert_eq!(monochromatic_c4_count(&g, &c), direct);
    }
}

#[test]
fn greedy_antigrid_beats_all_red_on_c4s() {
    let g = random_graph(30, 0.5, 2);
    let greedy = monochromatic_c4_count(&g, &colour_edges(&g, &Strategy::GreedyAntigrid));
    let red = monochromatic_c4_count(&g, &colour_edges(&g, &Strategy::AllRed));
    assert!(greedy < red);
}

#[test]
fn strategy_names() {
    assert_eq!(
        Strategy::parse("random", 4).unwrap(),
        Strategy::Random { seed: 4 }
    );
    assert_eq!(Strategy::parse("all-red", 4).unwrap(), Strategy::AllRed);
    assert!(Strategy::parse("rainbow", 0).is_err());
}

#[test]
fn witness_size_is_the_smallest_host() {
    let floor = |big_c: f64, x: f64| big_c * (x.ln() / x).sqrt();
    for (n, c, big_c) in [
        (10u64, 0.6, 448.0),
        (100, 0.6, 448.0),
        (1000, 0.6, 448.0),
        (50, 1.0, 2.0),
    ] {
        let w = size_ramsey_witness(n, c, big_c).unwrap();
        let p = c / n as f64;
        assert_eq!(w.p, p);
        assert!(floor(big_c, w.big_n as f64) <= p);
        if w.big_n > 3 {
            assert!(floor(big_c, (w.big_n - 1) as f64) > p);
        }
        let x = w.big_n as f64;
        assert!((w.expected_edges - p * x * (x - 1.0) / 2.0).abs() <= 1e-9 * w.expected_edges);
    }
    assert!(size_ramsey_witness(1, 0.6, 448.0).is_err());
    assert!(size_ramsey_witness(10, -1.0, 448.0).is_err());
    assert!(size_ramsey_witness(2, 3.0, 1.0).is_err());
}

#[test]
fn witness_growth_is_near_cubic() {
    let ns = [100u64, 1000, 10000];
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            (
                n as f64,
                size_ramsey_witness(n, 0.6, 448.0).unwrap().expected_edges,
            )
        })
        .collect();
    let slope = loglog_slope(&pts).unwrap();
    assert!((2.9..=3.2).contains(&slope), "{slope}");
    // doubling n multiplies the edge count by roughly 2^3 times a log factor
    let r = size_ramsey_witness(2000, 0.6, 448.0)
        .unwrap()
        .expected_edges
        / size_ramsey_witness(1000, 0.6, 448.0)
            .unwrap()
            .expected_edges;
    assert!(r > 8.0 && r < 9.5, "{r}");
}

#[test]
fn loglog_slope_of_power_laws() {
    let pts: Vec<(f64, f64)> = [1.0, 10.0, 100.0]
        .iter()
        .map(|&x: &f64| (x, 5.0 * x.powf(2.5)))
        .collect();
    assert!((loglog_slope(&pts).unwrap() - 2.5).abs() < 1e-12);
    assert!(loglog_slope(&[(1.0, 1.0)]).is_err());
    assert!(loglog_slope(&[(1.0, 1.0), (2.0, 0.0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn subgraph_search_matches_brute(n in 3usize..8, q in 0.1f64..0.9, seed in any::<u64>(), k in 0usize..4) {
        let h = random_graph(n, q, seed);
        let f = [Graph::cycle(3).unwrap(), Graph::cycle(4).unwrap(), parse_pattern("path:4").unwrap(),
                 grid_graph(GridSpec::new(2, 2).unwrap())][k].clone();
        let found = subgraph_contains(&h, &f).unwrap();
        prop_assert_eq!(found.is_some(), brute_contains(&h, &f));
        if let Some(map) = found {
            prop_assert!(is_embedding(&h, &f, &map));
        }
    }
}
