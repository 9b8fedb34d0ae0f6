use std::collections::HashMap;

use dselim::bounds::{BoundConfig, BoundValue, Bounds, SplitTable, SyntheticBDelta};
use proptest::prelude::*;

fn le(a: &BoundValue, b: &BoundValue) -> bool {
    a.le_within(b, 1e-9)
}

fn modes() -> [Bounds; 2] {
    [Bounds::default(), Bounds::new(BoundConfig::magnitude())]
}

#[test]
fn g_f_c_l_are_monotone() {
    for b in modes() {
        for n in 1..=2u64 {
            for r in 0..=1u64 {
                for d in 0..4u64 {
                    assert!(le(&b.g_bound(n, r, d), &b.g_bound(n, r, d + 1)));
                    assert!(le(&b.g_bound(n, r, d), &b.g_bound(n + 1, r, d)));
                    assert!(le(&b.g_bound(n, r, d), &b.g_bound(n, r + 1, d)));
                    for m in 0..=2u64 {
                        assert!(le(&b.f_bound(n, r, m, d), &b.f_bound(n, r, m, d + 1)));
                        assert!(le(&b.f_bound(n, r, m, d), &b.f_bound(n, r, m + 1, d)));
                        assert!(le(&b.f_bound(n, r, m, d), &b.f_bound(n + 1, r, m, d)));
                        assert!(le(&b.c_bound(n, r, m, d), &b.c_bound(n, r, m, d + 1)));
                        assert!(le(&b.c_bound(n, r, m, d), &b.c_bound(n, r, m + 1, d)));
                        assert!(le(&b.c_bound(n, r, m, d), &b.c_bound(n, r + 1, m, d)));
                    }
                }
                for d in 0..2u64 {
                    assert!(le(&b.l_bound(n, r, d), &b.l_bound(n, r, d + 1)));
                }
            }
        }
    }
}

#[test]
fn magnitude_bounds_exact() {
    let (e, m) = (Bounds::default(), Bounds::new(BoundConfig::magnitude()));
    let mut compared = 0;
    for n in 1..=3u64 {
        for r in 0..=2u64 {
            for d in 0..=4u64 {
                let pairs = [(e.g_bound(n, r, d), m.g_bound(n, r, d))];
                let more = (0..=2u64).flat_map(|k| {
                    [(e.f_bound(n, r, k, d), m.f_bound(n, r, k, d)), (e.c_bound(n, r, k, d), m.c_bound(n, r, k, d))]
                });
                for (x, y) in pairs.into_iter().chain(more) {
                    if x.is_exact() {
                        compared += 1;
                        assert!(le(&x, &y), "{} > {}", x, y);
                    }
                }
            }
        }
    }
    assert!(compared > 50);
}

#[test]
fn degree_zero_degeneracies() {
    for b in modes() {
        for n in 1..=3 {
            for r in 0..=2 {
                assert!(b.l_bound(n, r, 0).is_zero());
                assert!(b.g_bound(n, r, 0).is_zero());
            }
        }
        for (n, s, h) in [(1, 1, 1), (2, 1, 0), (1, 2, 2), (3, 0, 1)] {
            let t = b.train(n, s, h, 0);
            assert!(t.a.iter().all(BoundValue::is_one));
            assert!(t.result.is_one());
        }
    }
}

#[test]
fn train_a0_golden() {
    let t = Bounds::default().train(1, 1, 1, 1);
    // X_3 = F(2,1,3,G(2,1,1)); every later step only adds below f64
    // resolution at the top of the tower
    let g1 = 10_690_696f64;
    let ll_x3 = 2.0 + 64.0 * g1.log2() + g1.log2().log2();
    let top = (5.0 + 9f64.log2() + ll_x3).log2();
    let a0 = t.a[0].tower().unwrap();
    assert_eq!(a0.height, 6);
    assert!((a0.top - top).abs() < 1e-9 * top, "{} vs {}", a0.top, top);
    assert!((a0.top - 10.559478260136).abs() < 1e-9);
}

#[test]
fn final_b_monotone_with_monotone_plug() {
    let b = Bounds::new(BoundConfig::magnitude());
    let plug = SyntheticBDelta::Power { coef: 2, exp: 3 };
    for r in 1..=2 {
        for s in 0..=1 {
            for h in 0..=1 {
                for d in 0..=1 {
                    let v = b.final_b(r, s, h, d, &plug);
                    assert!(le(&v, &b.final_b(r + 1, s, h, d, &plug)));
                    assert!(le(&v, &b.final_b(r, s + 1, h, d, &plug)));
                    assert!(le(&v, &b.final_b(r, s, h + 1, d, &plug)));
                    assert!(le(&v, &b.final_b(r, s, h, d + 1, &plug)));
                }
            }
        }
    }
}

/// Maximum over all partitions of `d` into at least two parts of the sum
/// of `c` over the parts.
fn best_partition(d: u64, c: &dyn Fn(u64) -> u64) -> Option<u64> {
    fn go(rest: u64, max_part: u64, parts: usize, c: &dyn Fn(u64) -> u64, best: &mut Option<u64>, acc: u64) {
        if rest == 0 {
            if parts >= 2 {
                *best = Some(best.map_or(acc, |b| b.max(acc)));
            }
            return;
        }
        for p in (1..=rest.min(max_part)).rev() {
            go(rest - p, p, parts + 1, c, best, acc + c(p));
        }
    }
    let mut best = None;
    go(d, d.saturating_sub(1), 0, c, &mut best, 0);
    best
}

/// The recursion with full partitions, memoized by hand.
fn full_partition_c(m: u64, d: u64, inner: &dyn Fn(u64, u64) -> u64, memo: &mut HashMap<(u64, u64), u64>) -> u64 {
    if d == 0 {
        return 0;
    }
    if m == 0 {
        return d;
    }
    if let Some(&v) = memo.get(&(m, d)) {
        return v;
    }
    for k in 1..d {
        full_partition_c(m, k, inner, memo);
    }
    let smaller: HashMap<u64, u64> = (1..d).map(|k| (k, memo[&(m, k)])).collect();
    let split = best_partition(d, &|k| smaller[&k]);
    let irr = 1 + full_partition_c(m - 1, inner(m, d), inner, memo);
    let v = split.map_or(irr, |s| s.max(irr));
    memo.insert((m, d), v);
    v
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn binary_splits_equal_full_partitions(table in proptest::collection::vec(0u64..=6, 18)) {
        let inner = move |m: u64, d: u64| table[((m - 1) * 6 + (d - 1)) as usize % 18];
        let boxed = inner.clone();
        let mut st = SplitTable::new(
            Bounds::default(),
            6,
            Box::new(move |m, d| BoundValue::from(boxed(m, d))),
            None,
        );
        let mut memo = HashMap::new();
        for m in 0..=3u64 {
            for d in 0..=6u64 {
                let fast = st.eval(m, &BoundValue::from(d));
                let full = full_partition_c(m, d, &inner, &mut memo);
                prop_assert_eq!(fast, BoundValue::from(full));
            }
        }
        prop_assert!(st.well_founded());
    }
}
