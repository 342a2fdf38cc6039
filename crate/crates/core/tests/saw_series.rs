mod common;

use lacelab::lattice::canonical;
use lacelab::saw::*;
use proptest::prelude::*;

#[test]
fn d2_n10_table_matches_naive_enumerator() {
    let naive = common::naive_saw(2, 10);
    let s = enumerate_saw(2, 10, DEFAULT_NODE_CAP).unwrap();
    for ((n, x), c) in &naive {
        assert_eq!(s.get(*n, x), *c as u128, "c_{n}({x:?})");
    }
    for n in 0..=10 {
        let t: u64 = naive.iter().filter(|((m, _), _)| *m == n).map(|(_, c)| c).sum();
        assert_eq!(s.total(n), t as u128, "c_{n}");
    }
}

#[test]
fn d3_n7_table_matches_naive_enumerator() {
    let naive = common::naive_saw(3, 7);
    let s = enumerate_saw(3, 7, DEFAULT_NODE_CAP).unwrap();
    for ((n, x), c) in &naive {
        assert_eq!(s.get(*n, x), *c as u128);
    }
}

#[test]
fn first_two_counts() {
    for d in 2..=6 {
        let s = enumerate_saw(d, 2, DEFAULT_NODE_CAP).unwrap();
        let td = 2 * d as u128;
        assert_eq!(s.total(0), 1);
        assert_eq!(s.total(1), td);
        assert_eq!(s.total(2), td * (td - 1));
    }
}

#[test]
fn known_square_lattice_counts() {
    let s = enumerate_saw(2, 12, DEFAULT_NODE_CAP).unwrap();
    let known = [1u128, 4, 12, 36, 100, 284, 780, 2172, 5916, 16268, 44100, 120292, 324932];
    assert_eq!(s.totals(), known);
}

#[test]
fn pi_matches_naive_series_inversion() {
    for (d, order) in [(2usize, 6usize), (3, 6)] {
        let naive = common::naive_saw(d, order);
        let want = common::naive_pi(d, &naive, order);
        let pi = extract_pi_series(&enumerate_saw(d, order, DEFAULT_NODE_CAP).unwrap()).unwrap();
        for (n, coeffs) in want.iter().enumerate() {
            for (x, v) in coeffs {
                assert_eq!(pi.get(n, x), *v, "d={d} Π_{n}({x:?})");
            }
            assert_eq!(pi.total(n), coeffs.values().sum::<i128>());
        }
    }
}

#[test]
fn roundtrip_is_exact() {
    for (d, n) in [(2, 12), (3, 9), (4, 7), (5, 6), (6, 5)] {
        let s = enumerate_saw(d, n, DEFAULT_NODE_CAP).unwrap();
        let pi = extract_pi_series(&s).unwrap();
        assert!(pi.coeffs[0].is_empty() && pi.coeffs[1].is_empty());
        assert_eq!(series_roundtrip_residual(&s, &pi).unwrap(), 0, "d={d}");
    }
}

#[test]
fn pc_lower_band() {
    for (d, n) in [(3, 10), (4, 8), (5, 8), (6, 7)] {
        let pi = extract_pi_series(&enumerate_saw(d, n, DEFAULT_NODE_CAP).unwrap()).unwrap();
        let e = estimate_pc(&pi).unwrap();
        assert!(e.band_ok && e.two_d_pc >= 1.0, "d={d}: 2dp_c = {}", e.two_d_pc);
        assert!(e.p_c < 2.0 / (2.0 * d as f64));
    }
}

#[test]
fn g_series_basics() {
    let s = enumerate_saw(5, 6, DEFAULT_NODE_CAP).unwrap();
    let g0 = g_series_eval(&s, 0.0, None).unwrap();
    assert_eq!(g0.field.sum(), 1.0);
    let g = g_series_eval(&s, 0.1, None).unwrap();
    assert_eq!(g.field.get(&[0, 0, 0, 0, 0]), 1.0);
    let l = lambda_check(&g0.field).unwrap();
    assert_eq!((l.g_bar2, l.b_bar), (0.0, 0.0));
    assert!(l.pass);
}

#[test]
fn cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("lacelab-saw-cache-{}", std::process::id()));
    let (a, hit_a) = enumerate_saw_cached(3, 6, DEFAULT_NODE_CAP, Some(&dir)).unwrap();
    let (b, hit_b) = enumerate_saw_cached(3, 6, DEFAULT_NODE_CAP, Some(&dir)).unwrap();
    assert!(!hit_a && hit_b);
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn node_cap_is_enforced() {
    assert!(matches!(enumerate_saw(6, 20, 1e6), Err(lacelab::Error::Budget(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn support_and_parity(d in 2usize..=4, n in 1usize..=6) {
        let s = enumerate_saw(d, n, DEFAULT_NODE_CAP).unwrap();
        for (m, layer) in s.coeffs.iter().enumerate() {
            for x in layer.keys() {
                let l1: i64 = x.iter().map(|c| c.abs()).sum();
                prop_assert!(l1 as usize <= m && (m as i64 - l1) % 2 == 0);
                prop_assert_eq!(x, &canonical(x));
            }
        }
        let t = s.totals();
        for m in 1..n {
            prop_assert!(t[m + 1] <= (2 * d as u128 - 1) * t[m]);
        }
    }

    #[test]
    fn g_monotone_in_p(p1 in 0.0f64..0.2, dp in 0.0f64..0.05) {
        let s = enumerate_saw(3, 6, DEFAULT_NODE_CAP).unwrap();
        let a = g_series_eval(&s, p1, None).unwrap().field;
        let b = g_series_eval(&s, p1 + dp, None).unwrap().field;
        prop_assert!(a.values.iter().zip(&b.values).all(|(x, y)| x <= y));
    }

    #[test]
    fn pure_walk_pc(d in 2usize..=8, order in 2usize..=12) {
        let e = estimate_pc(&PiSeries::zero(d, order)).unwrap();
        prop_assert_eq!(e.p_c, 1.0 / (2.0 * d as f64));
    }
}
