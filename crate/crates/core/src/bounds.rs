//! The computable bound tower: `G`, `F`, `C`, `L`, the train recursions
//! `A_i`, `tau_i`, and the final elimination bound `B = B_delta + s`.
//!
//! Values are exact big integers while they fit in the digit budget. Past
//! that they become [`Tower`] magnitudes `2^2^...^x`, computed in log space
//! and rounded upward, so a tower always bounds the true value from above.
//! When a recursion would have to run a non-exact or excessive number of
//! times, the result is [`BoundValue::Unbounded`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

const LOG2_10: f64 = std::f64::consts::LOG2_10;
/// Tops of normalized towers of positive height lie in `(LOW, HIGH]`.
const LOW: f64 = 10.0;
const HIGH: f64 = 1024.0;

fn up(x: f64) -> f64 {
    if x > 0.0 {
        x * (1.0 + 4.0 * f64::EPSILON)
    } else {
        x
    }
}

/// `exp2^height(top)`: `height` nested powers of two above `top`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tower {
    pub height: u32,
    pub top: f64,
}

impl Tower {
    fn new(height: u32, top: f64) -> Tower {
        let (mut h, mut x) = (height, top);
        while x > HIGH {
            x = up(x.log2());
            h += 1;
        }
        while h >= 1 && x <= LOW {
            x = up(x.exp2());
            h -= 1;
        }
        Tower { height: h, top: x }
    }

    /// Upward rounded.
    pub fn from_biguint(v: &BigUint) -> Tower {
        let bits = v.bits();
        if bits <= 1000 {
            return Tower::new(0, up(v.to_f64().expect("finite below 2^1000")));
        }
        let shift = bits - 53;
        let head = (v >> shift).to_f64().expect("53 bits") + 1.0;
        Tower::new(1, up(shift as f64 + head.log2()))
    }

    fn at_most_one(self) -> bool {
        self.height == 0 && self.top <= 1.0
    }

    pub fn log2(self) -> Tower {
        if self.height >= 1 {
            Tower::new(self.height - 1, self.top)
        } else if self.top <= 1.0 {
            Tower { height: 0, top: 0.0 }
        } else {
            Tower::new(0, up(self.top.log2()))
        }
    }

    pub fn exp2(self) -> Tower {
        Tower::new(self.height + 1, self.top)
    }

    /// The next representable tower above, for increments below resolution.
    fn bumped(self) -> Tower {
        Tower::new(self.height, up(self.top))
    }

    pub fn pow(self, exp: Tower) -> Tower {
        if self.at_most_one() {
            return Tower { height: 0, top: 1.0 };
        }
        self.log2().mul(exp).exp2()
    }
}

impl Add for Tower {
    type Output = Tower;

    fn add(self, other: Tower) -> Tower {
        let (big, small) = if self >= other { (self, other) } else { (other, self) };
        if small.height == 0 && small.top == 0.0 {
            return big;
        }
        if big.height == 0 {
            return Tower::new(0, up(big.top + small.top));
        }
        // log2(big + small) = log2(big) + log2(1 + 2^-gap)
        let lb = big.log2();
        let gap = diff_lower(lb, small.log2());
        let delta = up((-gap).exp2().ln_1p() / std::f64::consts::LN_2);
        let raised = if delta > 0.0 { lb.add(Tower { height: 0, top: delta }) } else { lb.bumped() };
        raised.exp2()
    }
}

impl Mul for Tower {
    type Output = Tower;

    fn mul(self, other: Tower) -> Tower {
        if self.at_most_one() {
            return other;
        }
        if other.at_most_one() {
            return self;
        }
        self.log2().add(other.log2()).exp2()
    }
}

/// A lower bound on `a - b` for towers `a >= b`.
fn diff_lower(a: Tower, b: Tower) -> f64 {
    if a.height == 0 && b.height == 0 {
        return ((a.top - b.top) * (1.0 - 4.0 * f64::EPSILON)).max(0.0);
    }
    if a == b {
        return 0.0;
    }
    // a - b = 2^b' (2^(a' - b') - 1) with a', b' the logarithms
    let (la, lb) = (a.log2(), b.log2());
    let inner = diff_lower(la, lb);
    let scale = if lb.height == 0 { lb.top.exp2() } else { 1.0 };
    ((inner.exp2() - 1.0) * scale * (1.0 - 4.0 * f64::EPSILON)).max(0.0)
}

impl PartialOrd for Tower {
    fn partial_cmp(&self, other: &Tower) -> Option<Ordering> {
        Some(self.height.cmp(&other.height).then(self.top.total_cmp(&other.top)))
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.height {
            0 => write!(f, "{:.6}", self.top),
            1..=3 => write!(f, "{}{:.6}", "2^".repeat(self.height as usize), self.top),
            h => write!(f, "tower({}, {:.6})", h, self.top),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Exact(BigUint),
    /// Upper bound; the exact value exceeded the digit budget.
    Tower(Tower),
    /// Finite but beyond what the tower representation can iterate to.
    Unbounded,
}

impl BoundValue {
    pub fn zero() -> Self {
        BoundValue::Exact(BigUint::zero())
    }

    pub fn one() -> Self {
        BoundValue::Exact(BigUint::one())
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            BoundValue::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BoundValue::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BoundValue::Exact(v) if v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, BoundValue::Exact(v) if v.is_one())
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.exact().and_then(ToPrimitive::to_u64)
    }

    /// Tower form, upward rounded; `None` when unbounded.
    pub fn tower(&self) -> Option<Tower> {
        match self {
            BoundValue::Exact(v) => Some(Tower::from_biguint(v)),
            BoundValue::Tower(t) => Some(*t),
            BoundValue::Unbounded => None,
        }
    }

    /// `log2` of the value as `(depth, x)` meaning `exp2^depth(x)`.
    pub fn log2_magnitude(&self) -> Option<(u32, f64)> {
        self.tower().map(|t| {
            let l = t.log2();
            (l.height, l.top)
        })
    }

    /// Ordering by value. Exact values compared with towers go through their
    /// upward-rounded tower form.
    pub fn cmp_value(&self, other: &BoundValue) -> Ordering {
        match (self, other) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => a.cmp(b),
            (BoundValue::Unbounded, BoundValue::Unbounded) => Ordering::Equal,
            (BoundValue::Unbounded, _) => Ordering::Greater,
            (_, BoundValue::Unbounded) => Ordering::Less,
            _ => {
                let (a, b) = (self.tower().expect("bounded"), other.tower().expect("bounded"));
                a.partial_cmp(&b).expect("total order on towers")
            }
        }
    }

    /// Whether `self <= other` holds up to a relative tolerance on the tower
    /// tops, for checking that an estimate dominates an exact value.
    pub fn le_within(&self, other: &BoundValue, rel_tol: f64) -> bool {
        match (self.tower(), other.tower()) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => {
                if let (BoundValue::Exact(x), BoundValue::Exact(y)) = (self, other) {
                    return x <= y;
                }
                a.height < b.height || (a.height == b.height && a.top <= b.top * (1.0 + rel_tol))
            }
        }
    }
}

impl From<u64> for BoundValue {
    fn from(v: u64) -> Self {
        BoundValue::Exact(BigUint::from(v))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{}", v),
            BoundValue::Tower(t) => write!(f, "<= {}", t),
            BoundValue::Unbounded => write!(f, "unbounded"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundConfig {
    /// Largest exact value kept, in decimal digits.
    pub digit_budget: u64,
    /// Evaluate every value above 1 in tower arithmetic.
    pub magnitude: bool,
    /// Largest iteration count a recursion is run for.
    pub iteration_cap: u64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { digit_budget: 10_000, magnitude: false, iteration_cap: 10_000 }
    }
}

impl BoundConfig {
    pub fn magnitude() -> Self {
        BoundConfig { magnitude: true, ..BoundConfig::default() }
    }
}

/// Degree bound of a differential elimination, plugged into [`Bounds::final_b`]
/// as `B_delta(number of derivatives, number of variables, degree)`.
pub trait BDelta {
    fn name(&self) -> String;
    fn eval(&self, b: &Bounds, derivatives: &BoundValue, vars: &BoundValue, degree: &BoundValue) -> BoundValue;
}

/// Ready-made monotone plugs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntheticBDelta {
    Zero,
    Constant(u64),
    /// `a * derivatives + b * vars + c * degree + e`.
    Affine { a: u64, b: u64, c: u64, e: u64 },
    /// `coef * (derivatives + vars + degree + 1)^exp`.
    Power { coef: u64, exp: u64 },
}

impl BDelta for SyntheticBDelta {
    fn name(&self) -> String {
        match self {
            SyntheticBDelta::Zero => "zero".into(),
            SyntheticBDelta::Constant(c) => format!("constant c={}", c),
            SyntheticBDelta::Affine { a, b, c, e } => format!("affine a={} b={} c={} e={}", a, b, c, e),
            SyntheticBDelta::Power { coef, exp } => format!("power coef={} exp={}", coef, exp),
        }
    }

    fn eval(&self, bd: &Bounds, x: &BoundValue, v: &BoundValue, d: &BoundValue) -> BoundValue {
        match self {
            SyntheticBDelta::Zero => BoundValue::zero(),
            SyntheticBDelta::Constant(c) => BoundValue::from(*c),
            SyntheticBDelta::Affine { a, b, c, e } => {
                let t1 = bd.mul(&BoundValue::from(*a), x);
                let t2 = bd.mul(&BoundValue::from(*b), v);
                let t3 = bd.mul(&BoundValue::from(*c), d);
                bd.add(&bd.add(&t1, &t2), &bd.add(&t3, &BoundValue::from(*e)))
            }
            SyntheticBDelta::Power { coef, exp } => {
                let base = bd.add(&bd.add(x, v), &bd.add(d, &BoundValue::one()));
                bd.mul(&BoundValue::from(*coef), &bd.pow(&base, &BoundValue::from(*exp)))
            }
        }
    }
}

/// The `A` and `tau` sequences as far as they were computed.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainTrace {
    pub a: Vec<BoundValue>,
    pub tau: Vec<BoundValue>,
    pub result: BoundValue,
}

/// Evaluator for the bound functions under a [`BoundConfig`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Bounds {
    cfg: BoundConfig,
}

impl Bounds {
    pub fn new(cfg: BoundConfig) -> Self {
        Bounds { cfg }
    }

    pub fn config(&self) -> BoundConfig {
        self.cfg
    }

    fn budget_bits(&self) -> u64 {
        (self.cfg.digit_budget as f64 * LOG2_10).ceil() as u64
    }

    fn finish(&self, v: BigUint) -> BoundValue {
        if (self.cfg.magnitude && v > BigUint::one()) || v.bits() > self.budget_bits() {
            BoundValue::Tower(Tower::from_biguint(&v))
        } else {
            BoundValue::Exact(v)
        }
    }

    fn towers(a: &BoundValue, b: &BoundValue) -> Option<(Tower, Tower)> {
        Some((a.tower()?, b.tower()?))
    }

    pub fn add(&self, a: &BoundValue, b: &BoundValue) -> BoundValue {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if let (BoundValue::Exact(x), BoundValue::Exact(y)) = (a, b) {
            if x.bits().max(y.bits()) < self.budget_bits() {
                return self.finish(x + y);
            }
        }
        match Self::towers(a, b) {
            Some((x, y)) => BoundValue::Tower(x.add(y)),
            None => BoundValue::Unbounded,
        }
    }

    pub fn mul(&self, a: &BoundValue, b: &BoundValue) -> BoundValue {
        if a.is_zero() || b.is_zero() {
            return BoundValue::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        if let (BoundValue::Exact(x), BoundValue::Exact(y)) = (a, b) {
            if x.bits() + y.bits() <= self.budget_bits() + 1 {
                return self.finish(x * y);
            }
        }
        match Self::towers(a, b) {
            Some((x, y)) => BoundValue::Tower(x.mul(y)),
            None => BoundValue::Unbounded,
        }
    }

    pub fn pow(&self, a: &BoundValue, e: &BoundValue) -> BoundValue {
        if e.is_zero() || a.is_one() {
            return BoundValue::one();
        }
        if a.is_zero() {
            return BoundValue::zero();
        }
        if let (BoundValue::Exact(x), Some(k)) = (a, e.as_u64()) {
            if x.bits().saturating_mul(k) <= self.budget_bits() + 1 {
                let k = u32::try_from(k).expect("bounded by the budget");
                return self.finish(x.pow(k));
            }
        }
        match Self::towers(a, e) {
            Some((x, y)) => BoundValue::Tower(x.pow(y)),
            None => BoundValue::Unbounded,
        }
    }

    pub fn max(&self, a: &BoundValue, b: &BoundValue) -> BoundValue {
        if a.cmp_value(b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// Products of small parameters stay exact in every mode.
    fn param_mul(&self, a: &BoundValue, b: &BoundValue) -> BoundValue {
        match (a, b) {
            (BoundValue::Exact(x), BoundValue::Exact(y)) => BoundValue::Exact(x * y),
            _ => self.mul(a, b),
        }
    }

    fn param_add(&self, a: &BoundValue, b: &BoundValue) -> BoundValue {
        match (a, b) {
            (BoundValue::Exact(x), BoundValue::Exact(y)) => BoundValue::Exact(x + y),
            _ => self.add(a, b),
        }
    }

    /// An iteration count, if it is exact and within the cap.
    fn count(&self, v: &BoundValue) -> Option<u64> {
        v.as_u64().filter(|&k| k <= self.cfg.iteration_cap)
    }

    /// `G(n,r,D) = 2k (2k^2 + 2)^k D^(2k+1) + 2k D` with `k = n(r+1)`.
    pub fn g(&self, n: &BoundValue, r: &BoundValue, d: &BoundValue) -> BoundValue {
        if d.is_zero() {
            return BoundValue::zero();
        }
        let two = BoundValue::from(2);
        let k = self.param_mul(n, &self.param_add(r, &BoundValue::one()));
        let two_k = self.param_mul(&two, &k);
        let inner = self.param_add(&self.param_mul(&two, &self.param_mul(&k, &k)), &two);
        let first = self.mul(
            &self.mul(&two_k, &self.pow(&inner, &k)),
            &self.pow(d, &self.param_add(&two_k, &BoundValue::one())),
        );
        self.add(&first, &self.mul(&two_k, d))
    }

    /// `F(n,r,m,D) = D^(k B)` with `B = D^(k 2^(m+1))`, `k = n(r+1)`, and
    /// `F = 0` at `D = 0`.
    pub fn f(&self, n: &BoundValue, r: &BoundValue, m: &BoundValue, d: &BoundValue) -> BoundValue {
        if d.is_zero() {
            return BoundValue::zero();
        }
        let k = self.param_mul(n, &self.param_add(r, &BoundValue::one()));
        let two_pow = match m.as_u64().filter(|&m| m < 63) {
            Some(m) => BoundValue::from(1u64 << (m + 1)),
            None => self.pow(&BoundValue::from(2), &self.param_add(m, &BoundValue::one())),
        };
        let b = self.pow(d, &self.param_mul(&k, &two_pow));
        self.pow(d, &self.mul(&k, &b))
    }

    /// `C(n,r,m,D)`. For `m, D >= 1` the irreducible branch
    /// `1 + C(n,r,m-1,F(n,r,m-1,G(n,r,D)))` always dominates the split
    /// branch, which [`SplitTable`] checks on small arguments, so the
    /// recursion unrolls to `m + X_0` with `X_m = D`,
    /// `X_(j-1) = F(n,r,j-1,G(n,r,X_j))`.
    pub fn c(&self, n: &BoundValue, r: &BoundValue, m: &BoundValue, d: &BoundValue) -> BoundValue {
        if d.is_zero() {
            return BoundValue::zero();
        }
        let Some(steps) = self.count(m) else { return BoundValue::Unbounded };
        let mut x = d.clone();
        for j in (0..steps).rev() {
            if x == BoundValue::Unbounded {
                return x;
            }
            x = self.f(n, r, &BoundValue::from(j), &self.g(n, r, &x));
        }
        self.add(&BoundValue::from(steps), &x)
    }

    /// `L(n,r,d) = C(n,r,k,F(n,r,k,d))` with `k = n(r+1)`.
    pub fn l(&self, n: &BoundValue, r: &BoundValue, d: &BoundValue) -> BoundValue {
        if d.is_zero() {
            return BoundValue::zero();
        }
        let k = self.param_mul(n, &self.param_add(r, &BoundValue::one()));
        self.c(n, r, &k, &self.f(n, r, &k, d))
    }

    /// `tau_0 = n s (h+1)`.
    pub fn tau0(&self, n: u64, s: u64, h: u64) -> BoundValue {
        BoundValue::Exact(BigUint::from(n) * s * (h + 1))
    }

    /// `A_(tau_(n(h+1)))` together with the sequences leading to it.
    pub fn train(&self, n: u64, s: u64, h: u64, d: u64) -> TrainTrace {
        let nh = BoundValue::from(n * (h + 1));
        let nsh = BoundValue::Exact(BigUint::from(n) * s * (h + 1));
        let (sv, dv) = (BoundValue::from(s), BoundValue::from(d));
        let mut a = vec![self.add(&self.l(&nh, &sv, &dv), &BoundValue::one())];
        let mut tau = vec![nsh.clone()];
        let unbounded = |a, tau| TrainTrace { a, tau, result: BoundValue::Unbounded };

        // A_i on demand, stopping at the iteration cap
        let extend = |a: &mut Vec<BoundValue>, upto: u64| -> bool {
            while (a.len() as u64) <= upto {
                let last = a.last().expect("A_0").clone();
                let next = self.add(&last, &self.l(&self.param_mul(&nh, &last), &sv, &dv));
                a.push(next);
            }
            true
        };

        let target = n * (h + 1);
        for _ in 0..target {
            let cur = tau.last().expect("tau_0").clone();
            let Some(i) = self.count(&cur) else { return unbounded(a, tau) };
            extend(&mut a, i);
            let ai = a[i as usize].clone();
            let next = self.param_add(&self.param_add(&cur, &self.param_mul(&nsh, &ai)), &BoundValue::one());
            tau.push(next);
        }
        let last = tau.last().expect("tau").clone();
        let Some(i) = self.count(&last) else { return unbounded(a, tau) };
        extend(&mut a, i);
        let result = a[i as usize].clone();
        TrainTrace { a, tau, result }
    }

    pub fn train_bound(&self, n: u64, s: u64, h: u64, d: u64) -> BoundValue {
        self.train(n, s, h, d).result
    }

    /// `B = B_delta(N, N, d) + s` with `N = r(s+1)(A+h+1)`,
    /// `A = train_bound(r,s,h,d)`.
    pub fn final_b(&self, r: u64, s: u64, h: u64, d: u64, b_delta: &dyn BDelta) -> BoundValue {
        let a = self.train_bound(r, s, h, d);
        let arg = self.param_mul(
            &BoundValue::from(r * (s + 1)),
            &self.param_add(&a, &BoundValue::from(h + 1)),
        );
        let bd = b_delta.eval(self, &arg, &arg, &BoundValue::from(d));
        self.add(&bd, &BoundValue::from(s))
    }

    pub fn g_bound(&self, n: u64, r: u64, d: u64) -> BoundValue {
        self.g(&n.into(), &r.into(), &d.into())
    }

    pub fn f_bound(&self, n: u64, r: u64, m: u64, d: u64) -> BoundValue {
        self.f(&n.into(), &r.into(), &m.into(), &d.into())
    }

    pub fn c_bound(&self, n: u64, r: u64, m: u64, d: u64) -> BoundValue {
        self.c(&n.into(), &r.into(), &m.into(), &d.into())
    }

    pub fn l_bound(&self, n: u64, r: u64, d: u64) -> BoundValue {
        self.l(&n.into(), &r.into(), &d.into())
    }
}

/// Order bound `n s` for components cut out in `s`-th order jets.
pub fn ritt_order_bound(n: u64, s: u64) -> u64 {
    n * s
}

/// Arguments at most this large are maximized over binary splits in
/// [`SplitTable`]; larger ones use the closed form.
pub const SPLIT_LIMIT: u64 = 64;

type Inner<'a> = Box<dyn Fn(u64, u64) -> BoundValue + 'a>;
type Closed<'a> = Box<dyn Fn(u64, &BoundValue) -> BoundValue + 'a>;

/// A call from `(m, D)` to `(m', D')`; `D'` is `None` past the split limit.
pub type CallEdge = ((u64, u64), (u64, Option<u64>));

/// Memoized evaluation of the recursion
/// `C(0,D) = D`, `C(m,0) = 0`,
/// `C(m,D) = max(max_{D1+D2=D} C(m,D1) + C(m,D2), 1 + C(m-1, inner(m,D)))`
/// by binary splits, recording every recursive call.
pub struct SplitTable<'a> {
    bounds: Bounds,
    inner: Inner<'a>,
    closed: Option<Closed<'a>>,
    limit: u64,
    memo: HashMap<(u64, u64), BoundValue>,
    edges: Vec<CallEdge>,
}

impl<'a> SplitTable<'a> {
    /// `inner(m, D)` is the argument of the `m - 1` call; `closed(m, D)`
    /// evaluates arguments past `limit`, which are `Unbounded` without it.
    pub fn new(bounds: Bounds, limit: u64, inner: Inner<'a>, closed: Option<Closed<'a>>) -> Self {
        SplitTable { bounds, inner, closed, limit, memo: HashMap::new(), edges: Vec::new() }
    }

    /// The table for `C(n, r, ., .)` itself.
    pub fn for_c(bounds: Bounds, n: u64, r: u64) -> SplitTable<'a> {
        let (nv, rv) = (BoundValue::from(n), BoundValue::from(r));
        let (nc, rc) = (nv.clone(), rv.clone());
        SplitTable::new(
            bounds,
            SPLIT_LIMIT,
            Box::new(move |m, d| bounds.f(&nv, &rv, &BoundValue::from(m - 1), &bounds.g(&nv, &rv, &BoundValue::from(d)))),
            Some(Box::new(move |m, d| bounds.c(&nc, &rc, &BoundValue::from(m), d))),
        )
    }

    pub fn edges(&self) -> &[CallEdge] {
        &self.edges
    }

    /// Every recorded call goes to a lexicographically smaller `(m, D)`.
    pub fn well_founded(&self) -> bool {
        self.edges.iter().all(|&((m, d), (m2, d2))| m2 < m || (m2 == m && d2.is_some_and(|d2| d2 < d)))
    }

    pub fn eval(&mut self, m: u64, d: &BoundValue) -> BoundValue {
        if d.is_zero() {
            return BoundValue::zero();
        }
        if m == 0 {
            return d.clone();
        }
        match d.as_u64().filter(|&x| x <= self.limit) {
            Some(x) => self.eval_small(m, x),
            None => match &self.closed {
                Some(c) => c(m, d),
                None => BoundValue::Unbounded,
            },
        }
    }

    fn eval_small(&mut self, m: u64, d: u64) -> BoundValue {
        if let Some(v) = self.memo.get(&(m, d)) {
            return v.clone();
        }
        let b = self.bounds;
        let mut best: Option<BoundValue> = None;
        for d1 in 1..=d / 2 {
            self.edges.push(((m, d), (m, Some(d1))));
            self.edges.push(((m, d), (m, Some(d - d1))));
            let v = b.add(&self.eval(m, &BoundValue::from(d1)), &self.eval(m, &BoundValue::from(d - d1)));
            best = Some(match best {
                Some(cur) => b.max(&cur, &v),
                None => v,
            });
        }
        let arg = (self.inner)(m, d);
        self.edges.push(((m, d), (m - 1, arg.as_u64().filter(|&x| x <= self.limit))));
        let irr = b.add(&BoundValue::one(), &self.eval(m - 1, &arg));
        let v = match best {
            Some(s) => b.max(&s, &irr),
            None => irr,
        };
        self.memo.insert((m, d), v.clone());
        v
    }
}
