#![allow(dead_code)]

use std::collections::BTreeMap;

use dselim::ddpoly::{DSPolynomial, Family, Monomial, VarRef};
use dselim::field::{FieldElement, GroundField, UPoly};
use dselim::seq::SequencePoint;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn upoly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    proptest::collection::vec(rational(), 1..=max_deg + 1).prop_map(UPoly::from_coeffs)
}

/// Rationals, or quotients of small polynomials in `t` for `Qt`.
pub fn element(ground: GroundField) -> BoxedStrategy<FieldElement> {
    match ground {
        GroundField::Q => rational().prop_map(FieldElement::from_rational).boxed(),
        GroundField::Qt => prop_oneof![
            rational().prop_map(FieldElement::from_rational),
            upoly(2).prop_map(FieldElement::from_upoly),
            (upoly(2), upoly(1)).prop_filter_map("nonzero denominator", |(n, d)| {
                (!d.is_zero()).then(|| FieldElement::from_fraction(n, d))
            }),
        ]
        .boxed(),
    }
}

pub fn var_pool(max_delta: u32, max_sigma: u32, unknowns: u32) -> Vec<VarRef> {
    let mut out = Vec::new();
    for k in 1..=unknowns {
        for d in 0..=max_delta {
            for s in 0..=max_sigma {
                out.push(VarRef::new(Family::Y, k, d, s));
            }
        }
    }
    out
}

pub fn monomial(pool: Vec<VarRef>, min_deg: u32, max_deg: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(proptest::sample::select(pool), min_deg as usize..=max_deg as usize)
        .prop_map(|vs| vs.into_iter().fold(Monomial::one(), |m, v| m.mul(&Monomial::var(v))))
}

pub fn poly(ground: GroundField, pool: Vec<VarRef>, max_terms: usize, max_deg: u32) -> impl Strategy<Value = DSPolynomial> {
    proptest::collection::vec((monomial(pool, 0, max_deg), element(ground)), 0..=max_terms)
        .prop_map(move |ts| DSPolynomial::from_terms(ground, ts).with_ground(ground))
}

/// Integer-coefficient polynomials over `Q` in the given variables.
pub fn int_poly(pool: Vec<VarRef>, max_terms: usize, min_deg: u32, max_deg: u32) -> impl Strategy<Value = DSPolynomial> {
    proptest::collection::vec((monomial(pool, min_deg, max_deg), -5i64..=5), 1..=max_terms).prop_map(|ts| {
        DSPolynomial::from_terms(GroundField::Q, ts.into_iter().map(|(m, c)| (m, FieldElement::from_int(c))))
    })
}

pub fn window(ground: GroundField, unknowns: u32, width: usize) -> impl Strategy<Value = SequencePoint> {
    proptest::collection::vec(proptest::collection::vec(element(ground), width), unknowns as usize).prop_map(|ws| {
        let windows: BTreeMap<_, _> = ws.into_iter().enumerate().map(|(k, w)| ((Family::Y, k as u32 + 1), w)).collect();
        SequencePoint::new(Default::default(), windows).expect("equal widths")
    })
}

use dselim::budget::{Budget, Meter};
use dselim::groebner::{default_order, macaulay_membership_oracle, GbOptions, GroebnerBasis, MacaulayAnswer};
use dselim::seq::{evaluate, reindex_from_triple, reindex_to_triple};

pub type Check = Result<(), String>;

fn expect(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn delta_sigma_commute(p: &DSPolynomial) -> Check {
    let a = p.sigma_shift().delta_derive();
    let b = p.delta_derive().sigma_shift();
    expect(a == b, || format!("D(S(p)) = {} but S(D(p)) = {} for p = {}", a, b, p))
}

pub fn leibniz(p: &DSPolynomial, q: &DSPolynomial) -> Check {
    let lhs = (p * q).delta_derive();
    let rhs = &(&p.delta_derive() * q) + &(p * &q.delta_derive());
    expect(lhs == rhs, || format!("Leibniz fails for p = {}, q = {}", p, q))
}

pub fn sigma_homomorphism(p: &DSPolynomial, q: &DSPolynomial) -> Check {
    expect((p * q).sigma_shift() == &p.sigma_shift() * &q.sigma_shift(), || format!("S(pq) != S(p)S(q) for {}, {}", p, q))?;
    expect((p + q).sigma_shift() == &p.sigma_shift() + &q.sigma_shift(), || format!("S(p+q) != S(p)+S(q) for {}, {}", p, q))
}

/// Ring operations, the shift and the derivation all commute with
/// evaluation. Needs the window to reach one past the largest shift of `p`.
pub fn evaluation_homomorphism(p: &DSPolynomial, q: &DSPolynomial, w: &SequencePoint) -> Check {
    let ev = |f: &DSPolynomial| evaluate(f, w).map_err(|e| e.to_string());
    let (ep, eq) = (ev(p)?, ev(q)?);
    expect(ev(&(p + q))? == &ep + &eq, || format!("eval(p+q) for {}, {}", p, q))?;
    expect(ev(&(p * q))? == &ep * &eq, || format!("eval(pq) for {}, {}", p, q))?;
    let shifted_coeffs = p.map_coefficients(FieldElement::shift);
    let rhs = evaluate(&shifted_coeffs, &w.shifted()).map_err(|e| e.to_string())?;
    expect(ev(&p.sigma_shift())? == rhs, || format!("eval(S p) for {}", p))?;
    expect(ev(&p.delta_derive())? == ep.derive(), || format!("eval(D p) for {}", p))
}

pub fn reindex_roundtrip(w: &SequencePoint, h: usize) -> Check {
    let ell = w.width() - h;
    let pts = reindex_to_triple(w, h, ell).map_err(|e| e.to_string())?;
    expect(pts.len() == ell, || "wrong number of points".into())?;
    let back = reindex_from_triple(&pts).map_err(|e| e.to_string())?;
    expect(&back == w, || "roundtrip changed the window".into())
}

/// Buchberger's criterion, permutation invariance of the reduced basis, and
/// agreement with the Macaulay oracle on `target`.
pub fn groebner_properties(gens: &[DSPolynomial], target: &DSPolynomial) -> Check {
    let order = default_order(gens.iter().chain(std::iter::once(target)));
    let mut meter = Meter::new(Budget::unlimited());
    let gb = GroebnerBasis::compute(gens, order.clone(), GbOptions::tracked(), &mut meter).map_err(|e| e.to_string())?;
    expect(gb.satisfies_buchberger_criterion(), || "an S-polynomial does not reduce to 0".into())?;

    let mut rev: Vec<DSPolynomial> = gens.to_vec();
    rev.reverse();
    rev.rotate_left(gens.len() / 2);
    let gb2 = GroebnerBasis::compute(&rev, order, GbOptions::default(), &mut meter).map_err(|e| e.to_string())?;
    expect(gb.polys() == gb2.polys(), || "reduced basis depends on generator order".into())?;

    let cert = gb.certificate(target).map_err(|e| e.to_string())?;
    let cap = match &cert {
        Some(cs) => cs
            .iter()
            .zip(gens)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, g)| c.total_degree() + g.total_degree())
            .chain(std::iter::once(target.total_degree()))
            .max()
            .unwrap_or(0),
        None => target.total_degree() + 1,
    };
    let oracle = macaulay_membership_oracle(target, gens, cap).map_err(|e| e.to_string())?;
    match (&cert, &oracle) {
        (Some(cs), MacaulayAnswer::Member { .. }) => {
            let replay = cs.iter().zip(gens).fold(DSPolynomial::zero(target.ground()), |acc, (c, g)| &acc + &(c * g));
            expect(&replay == target, || "certificate does not replay".into())
        }
        (None, MacaulayAnswer::NotMemberUpToCap) => Ok(()),
        (Some(_), MacaulayAnswer::NotMemberUpToCap) => Err(format!("oracle misses member {} at cap {}", target, cap)),
        (None, MacaulayAnswer::Member { .. }) => Err(format!("engine misses member {}", target)),
    }
}

pub fn gb_pool() -> Vec<VarRef> {
    vec![VarRef::y(1), VarRef::y(1).shifted(1), VarRef::y(1).derived(1), VarRef::y(2)]
}

/// Two or three generators without constant terms in at most four variables
/// of degree at most three, and a target that is half the time a
/// combination of them.
pub fn gb_case() -> impl Strategy<Value = (Vec<DSPolynomial>, DSPolynomial)> {
    let pool = gb_pool();
    (
        proptest::collection::vec(int_poly(pool.clone(), 3, 1, 3), 2..=3),
        proptest::collection::vec(int_poly(pool.clone(), 2, 0, 1), 3),
        int_poly(pool, 3, 0, 3),
        any::<bool>(),
    )
        .prop_map(|(gens, mults, random, combine)| {
            let target = if combine {
                gens.iter().zip(&mults).fold(DSPolynomial::zero(GroundField::Q), |acc, (g, h)| &acc + &(g * h))
            } else {
                random
            };
            (gens, target)
        })
}

use dselim::ddpoly::prolong;
use dselim::groebner::{intersect_ideals, radical_membership};

/// Every generator of `P1^(s) ∩ P2^(s)` lies in the radical of
/// `(P1 ∩ P2)^(2s)`. Since the intersection of the radicals is the radical
/// of the intersection, this is the containment for the radicals.
pub fn intersection_containment(p1: &[DSPolynomial], p2: &[DSPolynomial], s: u32) -> Check {
    let err = |e: dselim::groebner::GroebnerError| e.to_string();
    let a = prolong(p1, s, 0);
    let b = prolong(p2, s, 0);
    let lhs = intersect_ideals(&a, &b).map_err(err)?;
    let base = intersect_ideals(p1, p2).map_err(err)?;
    let rhs = prolong(&base, 2 * s, 0);
    for g in &lhs {
        expect(radical_membership(g, &rhs).map_err(err)?, || format!("{} not in the radical at s = {}", g, s))?;
    }
    expect(!lhs.is_empty(), || "empty intersection basis".into())
}

/// Three pairs of ideals in y-variables of order at most one.
pub fn intersection_pairs() -> Vec<(Vec<DSPolynomial>, Vec<DSPolynomial>)> {
    let q = GroundField::Q;
    let y1 = DSPolynomial::var(q, VarRef::y(1));
    let y2 = DSPolynomial::var(q, VarRef::y(2));
    let one = DSPolynomial::one(q);
    vec![
        (vec![y1.clone()], vec![&y1 - &one]),
        (vec![y1.clone(), y2.clone()], vec![&y1 - &one]),
        (vec![&y1 * &y1, y2.clone()], vec![&y1.delta_derive() - &one]),
    ]
}
