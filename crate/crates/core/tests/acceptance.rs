//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use dselim::bounds::{BoundConfig, BoundValue, Bounds};
use dselim::ddpoly::{DSPolynomial, Family, PolySystem, VarRef};
use dselim::elim::{
    deepening_consistency, iterative_deepening_eliminate, sigma_power_membership, witness_refute, ElimOptions, Level,
    Verdict,
};
use dselim::field::{FieldElement, GroundField, UPoly};
use dselim::seq::{is_partial_solution, unroll_recurrence, SequencePoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use common::*;

fn ensure(ok: bool, msg: impl Into<String>) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Check {
    let e = start.elapsed();
    ensure(e < limit, format!("took {:.2?}, limit {:?}", e, limit))
}

fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_cases<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> Check {
    runner(cases)
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

fn y() -> DSPolynomial {
    DSPolynomial::var(GroundField::Q, VarRef::y(1))
}

fn worked_example() -> Check {
    let start = Instant::now();
    let y = y();
    let sys = PolySystem::univariate(vec![&(&y * &y) - &y.sigma_shift(), &(&y * &y) - &y.sigma_shift_by(2)]);
    let f = &(&y * &y) - &y;
    let opts = ElimOptions::default();

    let r = sigma_power_membership(&f, &sys, 3, 0, &opts).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Found && r.power == Some(1), format!("membership verdict {:?}", r.verdict))?;
    ensure(r.last_level() == Some(Level::new(0, 1)), "membership not at sigma-level 1")?;
    ensure(r.replay() == Some(f.sigma_shift()), "certificate does not replay to S(f)")?;

    let w = SequencePoint::univariate([-1, 1, 1, 1].iter().map(|&n| FieldElement::from_int(n)).collect());
    ensure(witness_refute(&f, &sys, &w).map_err(|e| e.to_string())?, "witness does not refute f")?;

    let r = deepening_consistency(&sys, 3, &opts).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::ConsistentUpToLevel, "not consistent")?;
    ensure(r.levels == (0..=3).map(Level::coupled).collect::<Vec<_>>(), "levels 0..3 not all tried")?;
    within(start, Duration::from_secs(5))
}

fn elimination_smoke() -> Check {
    let start = Instant::now();
    let q = GroundField::Q;
    let x = DSPolynomial::var(q, VarRef::x(1));
    let sys = PolySystem::new(q, 1, 1, vec![&y() - &x, &(&y() * &y()) - &x.sigma_shift()]);
    let r = iterative_deepening_eliminate(&sys, 1, &ElimOptions::default()).map_err(|e| e.to_string())?;
    let g = r.consequence.clone().ok_or("no consequence")?;
    let expected = &x.sigma_shift() - &(&x * &x);
    ensure(g == expected || g == -&expected, format!("consequence {}", g))?;
    ensure(r.levels == vec![Level::coupled(0)], "not found at level 0")?;
    ensure(r.replay() == Some(g), "certificate does not replay")?;
    within(start, Duration::from_secs(1))
}

fn tpoly(cs: &[i64]) -> FieldElement {
    FieldElement::from_upoly(UPoly::from_coeffs(cs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()))
}

fn delay_ode() -> Check {
    let g = GroundField::Qt;
    let y = DSPolynomial::var(g, VarRef::y(1));
    let f = &(&DSPolynomial::constant(g, FieldElement::t()) * &y.delta_derive()) + &y.sigma_shift();
    let sys = PolySystem::new(g, 0, 1, vec![f]);
    let seed = SequencePoint::univariate(vec![tpoly(&[0, 0, 1])]);
    let w = unroll_recurrence(&sys, &seed, 2).map_err(|e| e.to_string())?;
    let win = w.window((Family::Y, 1)).ok_or("missing y1")?;
    ensure(win == [tpoly(&[0, 0, 1]), tpoly(&[0, 0, -2]), tpoly(&[0, 4, 4])], format!("window {:?}", win))?;
    ensure(is_partial_solution(&sys, &w, 2).map_err(|e| e.to_string())?, "not a partial solution")
}

fn bound_goldens() -> Check {
    let e = Bounds::default();
    let m = Bounds::new(BoundConfig::magnitude());
    for n in 1..=3u64 {
        for s in 0..=2u64 {
            for h in 0..=2u64 {
                ensure(e.tau0(n, s, h) == BoundValue::from(n * s * (h + 1)), format!("tau0({},{},{})", n, s, h))?;
            }
        }
    }
    for (n, r) in [(1, 0), (2, 1), (3, 2)] {
        for d in 0..=10 {
            ensure(e.c_bound(n, r, 0, d) == BoundValue::from(d), format!("C({},{},0,{})", n, r, d))?;
        }
    }
    ensure(e.g_bound(1, 0, 1) == BoundValue::from(10), "G(1,0,1)")?;
    ensure(e.g_bound(1, 0, 2) == BoundValue::from(68), "G(1,0,2)")?;
    for b in [e, m] {
        for (n, r) in [(1, 0), (1, 1), (2, 0), (2, 2)] {
            ensure(b.l_bound(n, r, 0).is_zero(), format!("L({},{},0)", n, r))?;
        }
        for (n, s, h) in [(1, 1, 1), (2, 1, 2), (1, 3, 0)] {
            let t = b.train(n, s, h, 0);
            ensure(t.a.iter().all(BoundValue::is_one), format!("A_i at ({},{},{},0)", n, s, h))?;
        }
    }
    let mut compared = 0;
    for n in 1..=3u64 {
        for r in 0..=2u64 {
            for d in 0..=4u64 {
                let mut pairs = vec![(e.g_bound(n, r, d), m.g_bound(n, r, d)), (e.l_bound(n, r, d), m.l_bound(n, r, d))];
                for k in 0..=2u64 {
                    pairs.push((e.f_bound(n, r, k, d), m.f_bound(n, r, k, d)));
                    pairs.push((e.c_bound(n, r, k, d), m.c_bound(n, r, k, d)));
                }
                for (x, y) in pairs.into_iter().filter(|(x, _)| x.is_exact()) {
                    compared += 1;
                    ensure(x.le_within(&y, 1e-9), format!("magnitude {} below exact {}", y, x))?;
                }
            }
        }
    }
    ensure(compared > 0, "no grid point completed in exact mode")
}

fn groebner_engine() -> Check {
    let start = Instant::now();
    run_cases(200, gb_case(), |(gens, target)| groebner_properties(&gens, &target))?;
    within(start, Duration::from_secs(60))
}

fn algebra_laws() -> Check {
    let pair = |g: GroundField| {
        let pool = var_pool(1, 2, 2);
        (poly(g, pool.clone(), 3, 2), poly(g, pool, 3, 2))
    };
    let ground = prop_oneof![Just(GroundField::Q), Just(GroundField::Qt)];
    run_cases(500, ground.clone().prop_flat_map(pair), |(p, _)| delta_sigma_commute(&p))?;
    run_cases(500, ground.clone().prop_flat_map(pair), |(p, q)| leibniz(&p, &q))?;
    run_cases(500, ground.clone().prop_flat_map(pair), |(p, q)| sigma_homomorphism(&p, &q))?;
    let eval_case = ground.prop_flat_map(|g| {
        let pool = var_pool(1, 2, 2);
        (poly(g, pool.clone(), 3, 2), poly(g, pool, 3, 2), window(g, 2, 4))
    });
    run_cases(500, eval_case, |(p, q, w)| evaluation_homomorphism(&p, &q, &w))?;
    let reindex_case = (0usize..=3, 1usize..=4).prop_flat_map(|(h, ell)| (window(GroundField::Qt, 2, h + ell), Just(h)));
    run_cases(500, reindex_case, |(w, h)| reindex_roundtrip(&w, h))
}

fn radical_intersection() -> Check {
    for (i, (p1, p2)) in intersection_pairs().into_iter().enumerate() {
        for s in 0..=1 {
            intersection_containment(&p1, &p2, s).map_err(|e| format!("pair {}: {}", i + 1, e))?;
        }
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 7] = [
        ("worked example: shifted membership, witness, consistency 0..3", worked_example),
        ("elimination smoke test", elimination_smoke),
        ("delay ODE unrolling", delay_ode),
        ("bound tower goldens", bound_goldens),
        ("Groebner engine on 200 random systems", groebner_engine),
        ("algebra laws, 500 cases each", algebra_laws),
        ("intersection of radicals containment", radical_intersection),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  criterion {}: {} ({:.2} s)", i + 1, name, secs),
            Err(e) => {
                failed += 1;
                println!("FAIL  criterion {}: {} ({:.2} s): {}", i + 1, name, secs, e);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
