//! Differential-difference polynomials.
//!
//! A variable is `D^i S^j v_k` where `D` is the derivation, `S` the shift and
//! `v` one of the two unknown families `x` (to be kept by elimination) or `y`
//! (to be eliminated). Polynomials are sparse maps from monomials to exact
//! [`FieldElement`] coefficients and are always stored in canonical form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{FieldElement, GroundField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    X,
    Y,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::X => 'x',
            Family::Y => 'y',
        }
    }
}

/// The variable `D^delta S^sigma v_index` of family `family`.
///
/// Ordering is lexicographic on `(family, index, delta, sigma)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarRef {
    pub family: Family,
    /// 1-based component index.
    pub index: u32,
    pub delta: u32,
    pub sigma: u32,
}

impl VarRef {
    pub fn new(family: Family, index: u32, delta: u32, sigma: u32) -> Self {
        VarRef { family, index, delta, sigma }
    }

    pub fn x(index: u32) -> Self {
        VarRef::new(Family::X, index, 0, 0)
    }

    pub fn y(index: u32) -> Self {
        VarRef::new(Family::Y, index, 0, 0)
    }

    pub fn shifted(self, by: u32) -> Self {
        VarRef { sigma: self.sigma + by, ..self }
    }

    pub fn derived(self, by: u32) -> Self {
        VarRef { delta: self.delta + by, ..self }
    }

    pub fn order(self) -> u32 {
        self.delta + self.sigma
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = format!("{}{}", self.family.letter(), self.index);
        let inner = match self.sigma {
            0 => base,
            1 => format!("S({})", base),
            s => format!("S^{}({})", s, base),
        };
        match self.delta {
            0 => write!(f, "{}", inner),
            1 => write!(f, "D({})", inner),
            d => write!(f, "D^{}({})", d, inner),
        }
    }
}

/// A power product of variables; exponents are positive and variables sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(VarRef, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarRef) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarRef, u32)>) -> Self {
        let mut map: BTreeMap<VarRef, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn pairs(&self) -> &[(VarRef, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, family: Family) -> u32 {
        self.0.iter().filter(|(v, _)| v.family == family).map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarRef) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.0.iter().chain(other.0.iter()).copied())
    }

    fn map_vars(&self, f: impl Fn(VarRef) -> VarRef) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    /// The monomial with one factor of `v` removed (panics if absent).
    fn without_one(&self, v: VarRef) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len());
        for &(w, e) in &self.0 {
            if w == v {
                if e > 1 {
                    out.push((w, e - 1));
                }
            } else {
                out.push((w, e));
            }
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        // highest variables first
        for (n, (v, e)) in self.0.iter().rev().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

/// Orders and degrees of a polynomial. Orders are `None` for constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measure {
    pub ord: Option<u32>,
    pub ord_delta: Option<u32>,
    pub ord_sigma: Option<u32>,
    pub deg_y: u32,
    pub deg_x: u32,
}

/// A sparse differential-difference polynomial over `Q` or `Q(t)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DSPolynomial {
    ground: GroundField,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl DSPolynomial {
    pub fn zero(ground: GroundField) -> Self {
        DSPolynomial { ground, terms: BTreeMap::new() }
    }

    pub fn constant(ground: GroundField, c: FieldElement) -> Self {
        let ground = if c.is_rational() { ground } else { GroundField::Qt };
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DSPolynomial { ground, terms }
    }

    pub fn one(ground: GroundField) -> Self {
        DSPolynomial::constant(ground, FieldElement::one())
    }

    pub fn from_int(ground: GroundField, n: i64) -> Self {
        DSPolynomial::constant(ground, FieldElement::from_int(n))
    }

    pub fn var(ground: GroundField, v: VarRef) -> Self {
        DSPolynomial::term(ground, FieldElement::one(), Monomial::var(v))
    }

    pub fn term(ground: GroundField, c: FieldElement, m: Monomial) -> Self {
        let mut p = DSPolynomial::zero(ground);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(ground: GroundField, terms: impl IntoIterator<Item = (Monomial, FieldElement)>) -> Self {
        let mut p = DSPolynomial::zero(ground);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        if !c.is_rational() {
            self.ground = GroundField::Qt;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn ground(&self) -> GroundField {
        self.ground
    }

    /// The same polynomial regarded over a (possibly larger) ground field.
    pub fn with_ground(mut self, ground: GroundField) -> Self {
        self.ground = self.ground.join(ground);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    /// The term with the largest monomial under the storage order.
    pub fn max_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(FieldElement::is_one)
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(FieldElement::zero)
    }

    /// All variables that occur.
    pub fn vars(&self) -> BTreeSet<VarRef> {
        self.terms.keys().flat_map(|m| m.pairs().iter().map(|&(v, _)| v)).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True when every coefficient lies in `Q`.
    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(FieldElement::is_rational)
    }

    pub fn scale(&self, c: &FieldElement) -> DSPolynomial {
        DSPolynomial::from_terms(self.ground, self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
            .with_ground(self.ground)
    }

    pub fn pow(&self, e: u32) -> DSPolynomial {
        let mut acc = DSPolynomial::one(self.ground);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Applies the shift: `D^i S^j v -> D^i S^(j+1) v` on variables and
    /// `t -> t + 1` on coefficients.
    pub fn sigma_shift(&self) -> DSPolynomial {
        DSPolynomial::from_terms(
            self.ground,
            self.terms.iter().map(|(m, c)| (m.map_vars(|v| v.shifted(1)), c.shift())),
        )
        .with_ground(self.ground)
    }

    pub fn sigma_shift_by(&self, times: u32) -> DSPolynomial {
        (0..times).fold(self.clone(), |p, _| p.sigma_shift())
    }

    /// Applies the derivation by the Leibniz rule, with `D(D^i S^j v) = D^(i+1) S^j v`.
    pub fn delta_derive(&self) -> DSPolynomial {
        let mut out = DSPolynomial::zero(self.ground);
        for (m, c) in &self.terms {
            let dc = c.derive();
            if !dc.is_zero() {
                out.add_term(m.clone(), dc);
            }
            for &(v, e) in m.pairs() {
                let rest = m.without_one(v);
                let mono = rest.mul(&Monomial::var(v.derived(1)));
                out.add_term(mono, c * &FieldElement::from_int(e as i64));
            }
        }
        out
    }

    pub fn delta_derive_by(&self, times: u32) -> DSPolynomial {
        (0..times).fold(self.clone(), |p, _| p.delta_derive())
    }

    pub fn measure(&self) -> Measure {
        let vars = self.vars();
        Measure {
            ord: vars.iter().map(|v| v.order()).max(),
            ord_delta: vars.iter().map(|v| v.delta).max(),
            ord_sigma: vars.iter().map(|v| v.sigma).max(),
            deg_y: self.terms.keys().map(|m| m.degree_in(Family::Y)).max().unwrap_or(0),
            deg_x: self.terms.keys().map(|m| m.degree_in(Family::X)).max().unwrap_or(0),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&FieldElement) -> FieldElement) -> DSPolynomial {
        DSPolynomial::from_terms(self.ground, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
            .with_ground(self.ground)
    }

    /// Divides by the leading coefficient under the storage order, so that the
    /// result is a canonical representative of the line through `self`.
    pub fn normalized(&self) -> DSPolynomial {
        match self.terms.values().next_back() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero")),
        }
    }
}

/// `{ D^a S^b f : f in system, a <= delta_levels, b <= sigma_levels }`,
/// zero polynomials dropped, duplicates removed, first occurrence kept.
///
/// Generation order is `f`, then `b`, then `a`, which keeps certificate
/// indices stable across levels.
pub fn prolong(system: &[DSPolynomial], delta_levels: u32, sigma_levels: u32) -> Vec<DSPolynomial> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in system {
        let mut shifted = f.clone();
        for b in 0..=sigma_levels {
            if b > 0 {
                shifted = shifted.sigma_shift();
            }
            let mut derived = shifted.clone();
            for a in 0..=delta_levels {
                if a > 0 {
                    derived = derived.delta_derive();
                }
                if !derived.is_zero() && seen.insert(derived.clone()) {
                    out.push(derived.clone());
                }
            }
        }
    }
    out
}

/// A system of equations `F = 0` together with its declared unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    pub ground: GroundField,
    /// Number of `x` unknowns.
    pub num_x: u32,
    /// Number of `y` unknowns.
    pub num_y: u32,
    pub equations: Vec<DSPolynomial>,
}

impl PolySystem {
    pub fn new(ground: GroundField, num_x: u32, num_y: u32, equations: Vec<DSPolynomial>) -> Self {
        PolySystem { ground, num_x, num_y, equations }
    }

    /// A system in one `y` unknown over `Q`.
    pub fn univariate(equations: Vec<DSPolynomial>) -> Self {
        let ground = equations.iter().fold(GroundField::Q, |g, p| g.join(p.ground()));
        PolySystem::new(ground, 0, 1, equations)
    }

    pub fn vars(&self) -> BTreeSet<VarRef> {
        self.equations.iter().flat_map(|p| p.vars()).collect()
    }

    /// Largest shift order over the equations (`h` in the partial-solution
    /// definition); 0 for constant systems.
    pub fn max_sigma_order(&self) -> u32 {
        self.equations.iter().filter_map(|p| p.measure().ord_sigma).max().unwrap_or(0)
    }
}

impl<'a> Add<&'a DSPolynomial> for &'a DSPolynomial {
    type Output = DSPolynomial;
    fn add(self, rhs: &DSPolynomial) -> DSPolynomial {
        let mut out = self.clone().with_ground(rhs.ground);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DSPolynomial> for &'a DSPolynomial {
    type Output = DSPolynomial;
    fn sub(self, rhs: &DSPolynomial) -> DSPolynomial {
        let mut out = self.clone().with_ground(rhs.ground);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &DSPolynomial {
    type Output = DSPolynomial;
    fn neg(self) -> DSPolynomial {
        self.map_coefficients(|c| -c)
    }
}

impl<'a> Mul<&'a DSPolynomial> for &'a DSPolynomial {
    type Output = DSPolynomial;
    fn mul(self, rhs: &DSPolynomial) -> DSPolynomial {
        let mut out = DSPolynomial::zero(self.ground.join(rhs.ground));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<DSPolynomial> for DSPolynomial {
            type Output = DSPolynomial;
            fn $method(self, rhs: DSPolynomial) -> DSPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for DSPolynomial {
    /// Terms by decreasing total degree, then decreasing storage order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
        for (n, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                if abs.is_compound() {
                    write!(f, "({})", abs)?;
                } else {
                    write!(f, "{}", abs)?;
                }
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else if abs.is_compound() {
                write!(f, "({})*{}", abs, m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> DSPolynomial {
        DSPolynomial::var(GroundField::Q, VarRef::y(1))
    }

    fn yt() -> DSPolynomial {
        DSPolynomial::var(GroundField::Qt, VarRef::y(1))
    }

    fn t() -> DSPolynomial {
        DSPolynomial::constant(GroundField::Qt, FieldElement::t())
    }

    fn c(n: i64) -> DSPolynomial {
        DSPolynomial::from_int(GroundField::Q, n)
    }

    #[test]
    fn sigma_on_variable() {
        assert_eq!(y().sigma_shift(), DSPolynomial::var(GroundField::Q, VarRef::y(1).shifted(1)));
        assert_eq!(c(5).sigma_shift(), c(5));
    }

    #[test]
    fn sigma_over_qt_shifts_coefficients() {
        // t*D(y) + S(y)  ->  (t+1)*D(S(y)) + S^2(y)
        let p = &(&t() * &yt().delta_derive()) + &yt().sigma_shift();
        let one = DSPolynomial::one(GroundField::Qt);
        let expect = &(&(&t() + &one) * &yt().sigma_shift().delta_derive()) + &yt().sigma_shift_by(2);
        assert_eq!(p.sigma_shift(), expect);
        // cross-check: shift of the product is the product of the shifts
        let lhs = (&t() * &yt().delta_derive()).sigma_shift();
        let rhs = &t().sigma_shift() * &yt().delta_derive().sigma_shift();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_examples() {
        let y2 = &y() * &y();
        let expect = (&c(2) * &y()) * y().delta_derive();
        assert_eq!(y2.delta_derive(), expect);
        assert!(c(7).delta_derive().is_zero());
        // t*y -> y + t*D(y)
        let ty = &t() * &yt();
        assert_eq!(ty.delta_derive(), &yt() + &(&t() * &yt().delta_derive()));
    }

    #[test]
    fn measure_examples() {
        let f = &(&t() * &yt().delta_derive()) + &yt().sigma_shift();
        let m = f.measure();
        assert_eq!((m.ord, m.ord_delta, m.ord_sigma, m.deg_y), (Some(1), Some(1), Some(1), 1));

        let g = &(&y() * &y()) - &y().sigma_shift_by(2);
        let m = g.measure();
        assert_eq!((m.ord, m.ord_delta, m.ord_sigma, m.deg_y), (Some(2), Some(0), Some(2), 2));

        let m = c(1).measure();
        assert_eq!((m.ord, m.ord_delta, m.ord_sigma, m.deg_y, m.deg_x), (None, None, None, 0, 0));
    }

    #[test]
    fn prolong_examples() {
        let p = prolong(&[y()], 1, 1);
        let ys = y().sigma_shift();
        let expect = vec![y(), y().delta_derive(), ys.clone(), ys.delta_derive()];
        assert_eq!(p, expect);

        let g = &(&y() * &y()) - &y().sigma_shift();
        let p = prolong(std::slice::from_ref(&g), 0, 1);
        let sy = y().sigma_shift();
        let g1 = &(&sy * &sy) - &y().sigma_shift_by(2);
        assert_eq!(p, vec![g, g1]);

        assert!(prolong(&[], 3, 3).is_empty());
    }

    #[test]
    fn prolong_deduplicates() {
        // a constant prolongs to itself and zero
        let p = prolong(&[c(1), c(1)], 2, 2);
        assert_eq!(p, vec![c(1)]);
    }

    #[test]
    fn display_is_readable() {
        let g = &(&y() * &y()) - &y().sigma_shift();
        assert_eq!(g.to_string(), "y1^2 - S(y1)");
        let f = &(&t() * &yt().delta_derive()) + &yt().sigma_shift();
        assert_eq!(f.to_string(), "t*D(y1) + S(y1)");
        let h = &DSPolynomial::var(GroundField::Q, VarRef::new(Family::X, 2, 2, 3)) - &c(1);
        assert_eq!(h.to_string(), "D^2(S^3(x2)) - 1");
    }
}
