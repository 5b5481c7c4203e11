mod common;

use common::*;
use gridramsey::bitset::VertexSet;
use gridramsey::graph::Graph;
use gridramsey::props::*;
use gridramsey::random::{gnp, RandomModel};
use proptest::prelude::*;

fn direct_degree_pass(g: &Graph, p: f64, delta: f64) -> bool {
    let e = p * g.n() as f64;
    (0..g.n()).all(|v| {
        let d = (0..g.n()).filter(|&u| g.has_edge(u, v)).count() as f64;
        d > (1.0 - delta) * e && d < (1.0 + delta) * e
    })
}

fn direct_codegree_pass(g: &Graph, p: f64, delta: f64) -> bool {
    let e = p * p * g.n() as f64;
    for u in 0..g.n() {
        for w in (u + 1)..g.n() {
            let c = (0..g.n())
                .filter(|&v| g.has_edge(u, v) && g.has_edge(w, v))
                .count() as f64;
            if !(c > (1.0 - delta) * e && c < (1.0 + delta) * e) {
                return false;
            }
        }
    }
    true
}

#[test]
fn complete_graph_passes_degrees_and_codegrees() {
    let g = Graph::complete(12);
    assert!(verify_degrees(&g, 1.0, 0.15).unwrap().pass);
    assert!(verify_codegrees(&g, 1.0, 0.2, None).unwrap().pass);
}

#[test]
fn star_fails_degrees_and_names_the_leaves() {
    let edges: Vec<(usize, usize)> = (1..10).map(|v| (0, v)).collect();
    let g = gridramsey::graph::build_graph(10, &edges).unwrap();
    let r = verify_degrees(&g, 0.5, 0.2).unwrap();
    assert!(!r.pass);
    assert_eq!(r.counts["violations"], 10);
    assert!(r.violations.iter().all(|v| v.ids.len() == 1));
}

#[test]
fn bad_parameters_are_rejected() {
    let g = Graph::complete(5);
    assert!(verify_degrees(&g, 0.0, 0.1).is_err());
    assert!(verify_degrees(&g, 1.5, 0.1).is_err());
    assert!(verify_degrees(&g, 0.5, 0.0).is_err());
    assert!(verify_degrees(&g, 0.5, 2.0).is_err());
    assert!(Property::parse_list("vii").is_err());
    assert_eq!(Property::parse_list("i,vi").unwrap().len(), 3);
    assert_eq!(Property::parse_list("all").unwrap(), Property::ALL.to_vec());
}

#[test]
fn heavy_counts_match_direct_scan() {
    let (n, p, delta) = (300usize, 0.2, 0.5);
    let g = random_graph(n, p, 4);
    let u = VertexSet::from_ids(n, 0..(n / 2)).unwrap();
    let (count, r) = count_heavy_into_set(&g, p, delta, &u).unwrap();
    let cut = (1.0 + delta) * p * u.len() as f64;
    let direct = (0..n)
        .filter(|&y| (0..n / 2).filter(|&x| g.has_edge(x, y)).count() as f64 > cut)
        .count();
    assert_eq!(count, direct);
    assert_eq!(r.pass, direct as f64 <= 7.0 / (delta.powi(3) * p));

    let v = 7;
    let nv = g.neighbours(v);
    let (count, _) = count_heavy_into_neighbourhood(&g, p, delta, v, &nv).unwrap();
    let ids: Vec<usize> = nv.iter().collect();
    let cut = (1.0 + delta) * p * ids.len() as f64;
    let direct = (0..n)
        .filter(|&y| ids.iter().filter(|&&x| g.has_edge(x, y)).count() as f64 > cut)
        .count();
    assert_eq!(count, direct);
}

#[test]
fn heavy_preconditions() {
    let g = random_graph(100, 0.3, 1);
    let small = set(100, &[0, 1]);
    assert!(count_heavy_into_set(&g, 0.3, 0.2, &small).is_err());
    let outside = VertexSet::full(100).difference(&g.neighbours(3));
    assert!(count_heavy_into_neighbourhood(&g, 0.3, 0.2, 3, &outside).is_err());
}

#[test]
fn global_concentration_matches_direct_counts() {
    let (n, p) = (200usize, 0.3);
    let g = random_graph(n, p, 8);
    let a_ids: Vec<usize> = (0..n).step_by(2).collect();
    let b_ids: Vec<usize> = (1..n).step_by(2).collect();
    let r = verify_global_concentration(&g, p, 0.2, &set(n, &a_ids), &set(n, &b_ids)).unwrap();
    let within = a_ids
        .iter()
        .enumerate()
        .map(|(k, &x)| a_ids[k + 1..].iter().filter(|&&y| g.has_edge(x, y)).count())
        .sum::<usize>() as f64;
    let la = a_ids.len() as f64;
    let between = edges_between(&g, &a_ids, &b_ids) as f64;
    let ok = |v: f64, e: f64| v > 0.8 * e && v < 1.2 * e;
    assert_eq!(
        r.pass,
        ok(within, p * la * (la - 1.0) / 2.0) && ok(between, p * la * b_ids.len() as f64)
    );
    assert!(verify_global_concentration(&g, p, 0.2, &set(n, &a_ids), &set(n, &a_ids)).is_err());
}

#[test]
fn c4_bound_counts_with_the_brute_oracle() {
    let (n, p) = (40usize, 0.5);
    let g = random_graph(n, p, 21);
    let (u, v) = (0, 1);
    let (nu, nv) = (g.neighbours(u), g.neighbours(v));
    let x = nu.difference(&nv);
    let y = nv.difference(&nu);
    let a: Vec<usize> = (0..20).collect();
    let b: Vec<usize> = (20..40).collect();
    let r = verify_c4_bound(&g, p, 0.15, u, v, &x, &y, &set(n, &a), &set(n, &b)).unwrap();
    let xs: Vec<usize> = x.iter().collect();
    let ys: Vec<usize> = y.iter().collect();
    let brute = brute_c4(&g, &xs, &ys, &a, &b);
    assert_eq!(r.counts["c4_count"], brute);
    let bound = 2.0 * p.powi(4) * (xs.len() * ys.len() * a.len() * b.len()) as f64;
    assert_eq!(r.pass, brute as f64 <= bound);
}

#[test]
fn nbhd_concentration_records_or_enforces_preconditions() {
    let g = random_graph(60, 0.5, 2);
    let tiny = set(60, &[g.neighbours(0).first().unwrap()]);
    let w = g.neighbours(1);
    let r =
        verify_nbhd_edge_concentration(&g, 0.5, 0.2, 0, 1, &tiny, &w, PreconditionPolicy::Record)
            .unwrap();
    assert!(!r.precondition_met);
    assert!(verify_nbhd_edge_concentration(
        &g,
        0.5,
        0.2,
        0,
        1,
        &tiny,
        &w,
        PreconditionPolicy::Enforce
    )
    .is_err());
    let full = g.neighbours(0);
    let r =
        verify_nbhd_edge_concentration(&g, 0.5, 0.2, 0, 1, &full, &w, PreconditionPolicy::Record)
            .unwrap();
    let e = g.edge_count_between(&full, &w) as f64;
    let expected = 0.5 * (full.len() * w.len()) as f64;
    assert_eq!(r.pass, e > 0.8 * expected && e < 1.2 * expected);
}

#[test]
fn chernoff_tail_values() {
    assert!((chernoff_tail(300.0, 0.5, 0.1).unwrap() - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
    assert_eq!(chernoff_tail(0.0, 0.5, 0.1).unwrap(), 2.0);
    assert!(chernoff_tail(-1.0, 0.5, 0.1).is_err());
}

#[test]
fn first_moment_threshold_closed_form() {
    // n = 10^6, p = 0.5·n^{-1/2}: log E(s) < 0 iff s − 1 > ln n / (2 ln 2), so s* = 11
    let n = 1e6f64;
    let s = first_moment_threshold(n, 0.5 / n.sqrt()).unwrap().unwrap();
    assert_eq!(s, 11);
    assert!((s - 1) as f64 > n.ln() / (2.0 * 2f64.ln()));
    assert!(((s - 2) as f64) <= n.ln() / (2.0 * 2f64.ln()));
    assert_eq!(first_moment_threshold(n, 1.0 / n.sqrt()).unwrap(), None);
    assert_eq!(first_moment_threshold(n, 0.1).unwrap(), None);
    assert!(first_moment_threshold(n, 1.0).is_err());
}

#[test]
fn run_properties_is_seed_deterministic() {
    let model = RandomModel::new(400, 0.3, 3);
    let g = gnp(&model).unwrap();
    let run = PropertyRun {
        seed: 9,
        ..PropertyRun::default()
    };
    let a = run_properties(&g, 0.3, &run).unwrap();
    let b = run_properties(&g, 0.3, &run).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn degree_and_codegree_verdicts_match_definitions(
        n in 4usize..30,
        q in 0.2f64..1.0,
        seed in any::<u64>(),
        delta in 0.05f64..1.0,
    ) {
        let g = random_graph(n, q, seed);
        prop_assert_eq!(verify_degrees(&g, q, delta).unwrap().pass, direct_degree_pass(&g, q, delta));
        prop_assert_eq!(verify_codegrees(&g, q, delta, None).unwrap().pass, direct_codegree_pass(&g, q, delta));
    }

    #[test]
    fn first_moment_threshold_is_the_first_sign_change(logn in 2.0f64..20.0, k in 0.05f64..0.95) {
        let n = logn.exp();
        let p = k / n.sqrt();
        let log_e = |s: f64| s * s * n.ln() + 2.0 * s * (s - 1.0) * p.ln();
        let s = first_moment_threshold(n, p).unwrap().unwrap() as f64;
        prop_assert!(log_e(s) < 0.0);
        prop_assert!(s == 2.0 || log_e(s - 1.0) >= 0.0);
    }
}
