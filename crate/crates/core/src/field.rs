//! Ground fields: the rationals `Q` and the rational function field `Q(t)`.
//!
//! On `Q(t)` the derivation is `d/dt` and the shift is the automorphism
//! `t -> t + 1`; on `Q` both act trivially. Every element is kept in a unique
//! canonical form so that polynomial equality is plain structural equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which ground field a polynomial or problem lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum GroundField {
    #[default]
    Q,
    Qt,
}

impl GroundField {
    /// The smallest field containing both.
    pub fn join(self, other: GroundField) -> GroundField {
        self.max(other)
    }
}

impl fmt::Display for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundField::Q => write!(f, "QQ"),
            GroundField::Qt => write!(f, "QQ_t"),
        }
    }
}

/// Dense univariate polynomial in `t` over `Q`, coefficients low to high,
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        UPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => UPoly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `p(t) -> p(t + 1)`, by Horner's scheme.
    pub fn shift_one(&self) -> UPoly {
        let mut acc = UPoly::zero();
        let t_plus_one = UPoly::from_coeffs(vec![BigRational::one(), BigRational::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &t_plus_one) + &UPoly::constant(c.clone());
        }
        acc
    }

    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lc_inv;
            let shift = top - dd;
            for (k, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] -= &c * dc;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = rhs.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UPoly::from_coeffs(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            if i == 0 {
                write!(f, "{}", abs)?;
                continue;
            }
            if !unit {
                write!(f, "{}*", abs)?;
            }
            if i == 1 {
                write!(f, "t")?;
            } else {
                write!(f, "t^{}", i)?;
            }
        }
        Ok(())
    }
}

/// A reduced fraction `num / den` with `gcd(num, den) = 1`, `den` monic and
/// at least one of them non-constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn numerator(&self) -> &UPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UPoly {
        &self.den
    }
}

/// An exact element of `Q` or `Q(t)`.
///
/// Constants are always stored as [`FieldElement::Rat`], so the representation
/// of every element is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Rat(BigRational),
    Fun(RatFunc),
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        FieldElement::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        FieldElement::Rat(q)
    }

    /// The element `t` of `Q(t)`.
    pub fn t() -> Self {
        FieldElement::from_fraction(UPoly::t(), UPoly::constant(BigRational::one()))
    }

    pub fn from_upoly(p: UPoly) -> Self {
        FieldElement::from_fraction(p, UPoly::constant(BigRational::one()))
    }

    /// Builds `num / den` in canonical form. Panics on a zero denominator.
    pub fn from_fraction(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return FieldElement::zero();
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = den.leading().expect("nonzero").clone();
        let num = num.scale(&lc.recip());
        let den = den.monic();
        if den.is_constant() && num.is_constant() {
            FieldElement::Rat(num.constant_term())
        } else {
            FieldElement::Fun(RatFunc { num, den })
        }
    }

    fn parts(&self) -> (UPoly, UPoly) {
        match self {
            FieldElement::Rat(q) => (UPoly::constant(q.clone()), UPoly::constant(BigRational::one())),
            FieldElement::Fun(r) => (r.num.clone(), r.den.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FieldElement::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, FieldElement::Rat(q) if q.is_one())
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        matches!(self, FieldElement::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rat(q) => Some(q),
            FieldElement::Fun(_) => None,
        }
    }

    /// Sign of the leading coefficient of the numerator; used by printers.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElement::Rat(q) => q.is_negative(),
            FieldElement::Fun(r) => r.num.leading().is_some_and(|c| c.is_negative()),
        }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        match self {
            FieldElement::Rat(q) if q.is_zero() => None,
            FieldElement::Rat(q) => Some(FieldElement::Rat(q.recip())),
            FieldElement::Fun(r) => Some(FieldElement::from_fraction(r.den.clone(), r.num.clone())),
        }
    }

    pub fn div(&self, rhs: &FieldElement) -> Option<FieldElement> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut acc = FieldElement::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The derivation `d/dt` (zero on `Q`).
    pub fn derive(&self) -> FieldElement {
        match self {
            FieldElement::Rat(_) => FieldElement::zero(),
            FieldElement::Fun(r) => {
                let num = &(&r.num.derivative() * &r.den) - &(&r.num * &r.den.derivative());
                let den = &r.den * &r.den;
                FieldElement::from_fraction(num, den)
            }
        }
    }

    /// The shift `t -> t + 1` (identity on `Q`).
    pub fn shift(&self) -> FieldElement {
        match self {
            FieldElement::Rat(_) => self.clone(),
            FieldElement::Fun(r) => FieldElement::from_fraction(r.num.shift_one(), r.den.shift_one()),
        }
    }

    pub fn shift_by(&self, times: u32) -> FieldElement {
        let mut out = self.clone();
        for _ in 0..times {
            out = out.shift();
        }
        out
    }

    /// Whether printing needs parentheses when used as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        match self {
            FieldElement::Rat(q) => !q.is_integer(),
            FieldElement::Fun(r) => {
                !r.den.is_constant() || r.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
            }
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a + b),
            _ => {
                let (an, ad) = self.parts();
                let (bn, bd) = rhs.parts();
                if ad == bd {
                    FieldElement::from_fraction(&an + &bn, ad)
                } else {
                    FieldElement::from_fraction(&(&an * &bd) + &(&bn * &ad), &ad * &bd)
                }
            }
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a - b),
            _ => self + &(-rhs),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a * b),
            (FieldElement::Rat(a), FieldElement::Fun(r)) | (FieldElement::Fun(r), FieldElement::Rat(a)) => {
                if a.is_zero() {
                    FieldElement::zero()
                } else {
                    FieldElement::Fun(RatFunc { num: r.num.scale(a), den: r.den.clone() })
                }
            }
            _ => {
                let (an, ad) = self.parts();
                let (bn, bd) = rhs.parts();
                FieldElement::from_fraction(&an * &bn, &ad * &bd)
            }
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rat(q) => FieldElement::Rat(-q),
            FieldElement::Fun(r) => FieldElement::Fun(RatFunc { num: -&r.num, den: r.den.clone() }),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rat(q) => write!(f, "{}", q),
            FieldElement::Fun(r) => {
                if r.den.is_constant() {
                    write!(f, "{}", r.num)
                } else {
                    let num_simple = r.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
                    if num_simple {
                        write!(f, "{}", r.num)?;
                    } else {
                        write!(f, "({})", r.num)?;
                    }
                    write!(f, "/({})", r.den)
                }
            }
        }
    }
}
