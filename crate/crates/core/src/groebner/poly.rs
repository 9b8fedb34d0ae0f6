use std::cmp::Ordering;

use crate::ddpoly::{DSPolynomial, Monomial};
use crate::field::{FieldElement, GroundField};

use super::order::{MonomialOrder, Var};
use super::GroebnerError;

pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exps: Exps,
    pub coeff: FieldElement,
}

/// A polynomial as a list of terms sorted strictly decreasing under the
/// order it was built for. Never holds zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: Vec<Term>,
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

pub fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0)
}

pub fn exps_sub(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn degree(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(n: usize, c: FieldElement) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![Term { exps: vec![0; n], coeff: c }] }
    }

    pub fn monomial(exps: Exps, coeff: FieldElement) -> Self {
        if coeff.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![Term { exps, coeff }] }
    }

    pub fn from_terms(order: &MonomialOrder, mut terms: Vec<Term>) -> Self {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by(|a, b| order.cmp(&b.exps, &a.exps));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.exps == t.exps => {
                    last.coeff = &last.coeff + &t.coeff;
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].exps.iter().all(|&e| e == 0)
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn lm(&self) -> &[u32] {
        &self.terms[0].exps
    }

    pub fn lc(&self) -> &FieldElement {
        &self.terms[0].coeff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|t| Term { exps: t.exps.clone(), coeff: &t.coeff * c }).collect() }
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(t) => self.scale(&t.coeff.inv().expect("nonzero lead")),
        }
    }

    /// `c * x^shift * self`; multiplication by a monomial preserves the order.
    pub fn mul_term(&self, shift: &[u32], c: &FieldElement) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.iter().zip(shift).map(|(a, b)| a + b).collect(),
                    coeff: &t.coeff * c,
                })
                .collect(),
        }
    }

    /// `self + c * x^shift * other`, merging the sorted term lists.
    pub fn add_scaled(&self, order: &MonomialOrder, other: &Poly, shift: &[u32], c: &FieldElement) -> Poly {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |t: &Term| -> Exps { t.exps.iter().zip(shift).map(|(a, b)| a + b).collect() };
        let mut pending: Option<Exps> = other.terms.first().map(shifted);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), &pending) {
                (Some(a), Some(b)) => order.cmp(&a.exps, b),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => break,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let exps = pending.take().expect("pending term");
                    out.push(Term { exps, coeff: &other.terms[j].coeff * c });
                    j += 1;
                    pending = other.terms.get(j).map(shifted);
                }
                Ordering::Equal => {
                    let exps = pending.take().expect("pending term");
                    let coeff = &self.terms[i].coeff + &(&other.terms[j].coeff * c);
                    if !coeff.is_zero() {
                        out.push(Term { exps, coeff });
                    }
                    i += 1;
                    j += 1;
                    pending = other.terms.get(j).map(shifted);
                }
            }
        }
        Poly { terms: out }
    }

    pub fn add(&self, order: &MonomialOrder, other: &Poly) -> Poly {
        let n = self.lead().or(other.lead()).map_or(0, |t| t.exps.len());
        self.add_scaled(order, other, &vec![0; n], &FieldElement::one())
    }

    pub fn sub(&self, order: &MonomialOrder, other: &Poly) -> Poly {
        let n = self.lead().or(other.lead()).map_or(0, |t| t.exps.len());
        self.add_scaled(order, other, &vec![0; n], &-FieldElement::one())
    }

    pub fn mul(&self, order: &MonomialOrder, other: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for t in &other.terms {
            acc = acc.add_scaled(order, self, &t.exps, &t.coeff);
        }
        acc
    }

    pub fn uses_var(&self, idx: usize) -> bool {
        self.terms.iter().any(|t| t.exps[idx] > 0)
    }

    /// Converts from the external representation; fails on variables the
    /// order does not know.
    pub fn from_ds(order: &MonomialOrder, p: &DSPolynomial) -> Result<Poly, GroebnerError> {
        let n = order.num_vars();
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let mut exps = vec![0u32; n];
            for &(v, e) in m.pairs() {
                let idx = order.index_of(Var::Ds(v)).ok_or(GroebnerError::UnknownVariable(v))?;
                exps[idx] = e;
            }
            terms.push(Term { exps, coeff: c.clone() });
        }
        Ok(Poly::from_terms(order, terms))
    }

    /// Converts back; fails if an auxiliary variable occurs.
    pub fn to_ds(&self, order: &MonomialOrder, ground: GroundField) -> Result<DSPolynomial, GroebnerError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut pairs = Vec::new();
            for (idx, &e) in t.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match order.vars()[idx] {
                    Var::Ds(v) => pairs.push((v, e)),
                    Var::Aux(_) => return Err(GroebnerError::AuxiliaryVariableLeaked),
                }
            }
            terms.push((Monomial::from_pairs(pairs), t.coeff.clone()));
        }
        Ok(DSPolynomial::from_terms(ground, terms).with_ground(ground))
    }
}
