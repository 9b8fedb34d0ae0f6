//! Degree-truncated ideal membership by exact linear algebra.
//!
//! The rows are all products `u * g` with `g` a generator, `u` a monomial and
//! `deg(u * g) <= cap`; membership up to the cap is the question whether the
//! target lies in their row span. This shares no code with the Buchberger
//! engine and serves as its test oracle.

use std::collections::{BTreeMap, BTreeSet};

use crate::ddpoly::{DSPolynomial, Monomial, VarRef};
use crate::field::GroundField;

use super::GroebnerError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MacaulayAnswer {
    /// `target = sum_k cofactors[k] * generators[k]` with every product of
    /// degree at most the cap.
    Member { cofactors: Vec<DSPolynomial> },
    /// No representation within the degree cap; says nothing beyond it.
    NotMemberUpToCap,
}

impl MacaulayAnswer {
    pub fn is_member(&self) -> bool {
        matches!(self, MacaulayAnswer::Member { .. })
    }
}

/// All monomials in `vars` of total degree at most `max_degree`.
fn monomials_up_to(vars: &[VarRef], max_degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (k, &v) in vars.iter().enumerate().skip(*start) {
                let mm = m.mul(&Monomial::var(v));
                out.push(mm.clone());
                next.push((mm, k));
            }
        }
        frontier = next;
    }
    out
}

struct Row {
    poly: DSPolynomial,
    combo: Vec<DSPolynomial>,
}

pub fn macaulay_membership_oracle(
    target: &DSPolynomial,
    generators: &[DSPolynomial],
    cap: u32,
) -> Result<MacaulayAnswer, GroebnerError> {
    let degree = target.total_degree();
    if cap < degree {
        return Err(GroebnerError::CapTooSmall { cap, degree });
    }
    let ground = generators.iter().fold(target.ground(), |g, p| g.join(p.ground()));
    let zero = DSPolynomial::zero(ground);
    if target.is_zero() {
        return Ok(MacaulayAnswer::Member { cofactors: vec![zero; generators.len()] });
    }
    let vars: Vec<VarRef> = generators
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|p| p.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    // echelon rows keyed by their largest monomial
    let mut pivots: BTreeMap<Monomial, Row> = BTreeMap::new();
    let reduce = |pivots: &BTreeMap<Monomial, Row>, mut row: Row| -> Row {
        loop {
            let Some((lead, c)) = row.poly.max_term().map(|(m, c)| (m.clone(), c.clone())) else {
                return row;
            };
            let Some(p) = pivots.get(&lead) else { return row };
            let (_, pc) = p.poly.max_term().expect("pivot rows are nonzero");
            let k = c.div(pc).expect("nonzero pivot");
            row.poly = &row.poly - &p.poly.scale(&k);
            for (a, b) in row.combo.iter_mut().zip(&p.combo) {
                *a = &*a - &b.scale(&k);
            }
        }
    };

    for (gi, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let gd = g.total_degree();
        if gd > cap {
            continue;
        }
        for u in monomials_up_to(&vars, cap - gd) {
            let um = DSPolynomial::term(ground, crate::field::FieldElement::one(), u);
            let mut combo = vec![zero.clone(); generators.len()];
            combo[gi] = um.clone();
            let row = reduce(&pivots, Row { poly: &um * g, combo });
            if let Some((lead, _)) = row.poly.max_term() {
                pivots.insert(lead.clone(), row);
            }
        }
    }

    let start = Row { poly: target.clone(), combo: vec![zero.clone(); generators.len()] };
    let done = reduce(&pivots, start);
    if done.poly.is_zero() {
        // target - sum combo_k g_k = 0
        let cofactors = done.combo.iter().map(|c| -c).collect();
        Ok(MacaulayAnswer::Member { cofactors })
    } else {
        Ok(MacaulayAnswer::NotMemberUpToCap)
    }
}

/// `sum_k cofactors[k] * generators[k]`.
pub fn replay(cofactors: &[DSPolynomial], generators: &[DSPolynomial], ground: GroundField) -> DSPolynomial {
    cofactors
        .iter()
        .zip(generators)
        .fold(DSPolynomial::zero(ground), |acc, (c, g)| &acc + &(c * g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> DSPolynomial {
        DSPolynomial::var(GroundField::Q, VarRef::y(1))
    }

    #[test]
    fn generator_is_member_at_its_degree() {
        let g = &(&y() * &y()) - &y().sigma_shift();
        let ans = macaulay_membership_oracle(&g, std::slice::from_ref(&g), 2).unwrap();
        assert!(ans.is_member());
    }

    #[test]
    fn shifted_example_has_expected_certificate() {
        let y = y();
        let g1 = &(&y * &y) - &y.sigma_shift();
        let g2 = &(&y * &y) - &y.sigma_shift_by(2);
        let g3 = g1.sigma_shift();
        let f = (&(&y * &y) - &y).sigma_shift();
        // sigma(f) expands to sigma(g1) + g1 - g2
        assert_eq!(&(&g3 + &g1) - &g2, f);
        let gens = vec![g1, g2, g3];
        match macaulay_membership_oracle(&f, &gens, 2).unwrap() {
            MacaulayAnswer::Member { cofactors } => {
                assert_eq!(replay(&cofactors, &gens, GroundField::Q), f);
            }
            other => panic!("expected member, got {:?}", other),
        }
    }

    #[test]
    fn one_is_not_in_y_up_to_cap() {
        let one = DSPolynomial::one(GroundField::Q);
        assert_eq!(macaulay_membership_oracle(&one, &[y()], 1).unwrap(), MacaulayAnswer::NotMemberUpToCap);
    }

    #[test]
    fn cap_below_degree_is_an_error() {
        let f = &y() * &y();
        assert_eq!(
            macaulay_membership_oracle(&f, &[y()], 1),
            Err(GroebnerError::CapTooSmall { cap: 1, degree: 2 })
        );
    }

    #[test]
    fn monomial_count() {
        let vars = [VarRef::y(1), VarRef::y(2), VarRef::y(3)];
        // C(3 + 2, 2) = 10
        assert_eq!(monomials_up_to(&vars, 2).len(), 10);
    }
}
