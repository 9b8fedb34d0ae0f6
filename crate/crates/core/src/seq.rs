//! Finite windows of sequences over the ground field.
//!
//! A [`SequencePoint`] holds, for every unknown, the entries at offsets
//! `0..W` of a sequence. A polynomial is evaluated by sending
//! `D^i S^j v` to the `i`-th derivative of entry `j` of `v`; coefficients are
//! used as they stand, so evaluating `S^n(f)` at a window gives the value of
//! `f` at index `n` of the sequence.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ddpoly::{DSPolynomial, Family, PolySystem, VarRef};
use crate::field::{FieldElement, GroundField};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Side {
    /// One-sided, indexed by the naturals.
    #[default]
    N,
    /// Two-sided, indexed by the integers; the window sits at some base index.
    Z,
}

/// An unknown component, e.g. `(Y, 1)` for `y1`.
pub type Component = (Family, u32);

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("window of width {width} is too small, need at least {needed}")]
    WindowTooSmall { needed: usize, width: usize },
    #[error("component windows have different widths")]
    WidthMismatch,
    #[error("no window given for {0}{1}")]
    MissingComponent(char, u32),
    #[error("system is not in explicit recurrence form: {0}")]
    NonSolvable(String),
    #[error("leading coefficient vanishes when computing entry {index}")]
    VanishingLeadingCoefficient { index: usize },
    #[error("consecutive points {index} and {next} do not overlap", next = .index + 1)]
    OverlapMismatch { index: usize },
    #[error("empty point list")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePoint {
    side: Side,
    width: usize,
    windows: BTreeMap<Component, Vec<FieldElement>>,
}

impl SequencePoint {
    pub fn new(side: Side, windows: BTreeMap<Component, Vec<FieldElement>>) -> Result<Self, SeqError> {
        let mut widths = windows.values().map(Vec::len);
        let width = widths.next().unwrap_or(0);
        if widths.any(|w| w != width) {
            return Err(SeqError::WidthMismatch);
        }
        Ok(SequencePoint { side, width, windows })
    }

    /// A window for the single unknown `y1`.
    pub fn univariate(entries: Vec<FieldElement>) -> Self {
        let mut windows = BTreeMap::new();
        windows.insert((Family::Y, 1), entries);
        SequencePoint::new(Side::N, windows).expect("one component")
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.windows.keys()
    }

    pub fn window(&self, c: Component) -> Option<&[FieldElement]> {
        self.windows.get(&c).map(Vec::as_slice)
    }

    pub fn ground(&self) -> GroundField {
        if self.windows.values().flatten().all(FieldElement::is_rational) {
            GroundField::Q
        } else {
            GroundField::Qt
        }
    }

    /// Entries `start..start + len` of every component.
    pub fn slice(&self, start: usize, len: usize) -> SequencePoint {
        let windows = self.windows.iter().map(|(c, w)| (*c, w[start..start + len].to_vec())).collect();
        SequencePoint { side: self.side, width: len, windows }
    }

    /// The window seen from one index further: drops the first entry.
    pub fn shifted(&self) -> SequencePoint {
        self.slice(1, self.width - 1)
    }

    /// Entrywise derivative.
    pub fn derived(&self) -> SequencePoint {
        let windows =
            self.windows.iter().map(|(c, w)| (*c, w.iter().map(FieldElement::derive).collect())).collect();
        SequencePoint { side: self.side, width: self.width, windows }
    }

    fn value(&self, v: VarRef) -> Result<FieldElement, SeqError> {
        let w = self.windows.get(&(v.family, v.index)).ok_or(SeqError::MissingComponent(v.family.letter(), v.index))?;
        let j = v.sigma as usize;
        if j >= w.len() {
            return Err(SeqError::WindowTooSmall { needed: j + 1, width: w.len() });
        }
        let mut e = w[j].clone();
        for _ in 0..v.delta {
            e = e.derive();
        }
        Ok(e)
    }
}

/// The value of `p` at the window.
pub fn evaluate(p: &DSPolynomial, w: &SequencePoint) -> Result<FieldElement, SeqError> {
    let mut cache: BTreeMap<VarRef, FieldElement> = BTreeMap::new();
    let mut acc = FieldElement::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for &(v, e) in m.pairs() {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(v) {
                e.insert(w.value(v)?);
            }
            t = &t * &cache[&v].pow(e);
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Whether `S^i(f)` vanishes at the window for every equation `f` and every
/// `0 <= i < ell`. Needs `W >= ell + h`, `h` the largest shift order.
pub fn is_partial_solution(system: &PolySystem, w: &SequencePoint, ell: usize) -> Result<bool, SeqError> {
    if ell == 0 {
        return Ok(true);
    }
    let h = system.max_sigma_order() as usize;
    if w.width() < ell + h {
        return Err(SeqError::WindowTooSmall { needed: ell + h, width: w.width() });
    }
    for f in &system.equations {
        let mut g = f.clone();
        for i in 0..ell {
            if i > 0 {
                g = g.sigma_shift();
            }
            if !evaluate(&g, w)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An equation solved for its unique highest-shift variable:
/// `lead * target + rest = 0`.
struct Explicit {
    target: VarRef,
    lead: DSPolynomial,
    rest: DSPolynomial,
}

fn explicit_form(f: &DSPolynomial) -> Result<Explicit, SeqError> {
    let vars = f.vars();
    let h = vars.iter().map(|v| v.sigma).max().ok_or_else(|| SeqError::NonSolvable(format!("{} is constant", f)))?;
    let top: Vec<VarRef> = vars.iter().copied().filter(|v| v.sigma == h).collect();
    if top.len() != 1 || top[0].delta != 0 {
        return Err(SeqError::NonSolvable(format!("{} has no unique underived highest shift", f)));
    }
    let target = top[0];
    let ground = f.ground();
    let mut lead = DSPolynomial::zero(ground);
    let mut rest = DSPolynomial::zero(ground);
    for (m, c) in f.terms() {
        match m.exponent(target) {
            0 => rest = &rest + &DSPolynomial::term(ground, c.clone(), m.clone()),
            1 => {
                let others = crate::ddpoly::Monomial::from_pairs(m.pairs().iter().copied().filter(|(v, _)| *v != target));
                lead = &lead + &DSPolynomial::term(ground, c.clone(), others);
            }
            _ => return Err(SeqError::NonSolvable(format!("{} is not linear in {}", f, target))),
        }
    }
    Ok(Explicit { target, lead, rest })
}

/// Extends `seed` by `steps` entries using each equation as an explicit
/// recurrence for its highest-shift variable.
pub fn unroll_recurrence(system: &PolySystem, seed: &SequencePoint, steps: usize) -> Result<SequencePoint, SeqError> {
    if steps == 0 {
        return Ok(seed.clone());
    }
    let forms = system.equations.iter().map(explicit_form).collect::<Result<Vec<_>, _>>()?;
    let mut solved = BTreeSet::new();
    for e in &forms {
        if !solved.insert((e.target.family, e.target.index)) {
            return Err(SeqError::NonSolvable(format!("several equations solve for {}{}", e.target.family.letter(), e.target.index)));
        }
    }
    for c in seed.components() {
        if !solved.contains(c) {
            return Err(SeqError::NonSolvable(format!("no equation determines {}{}", c.0.letter(), c.1)));
        }
    }
    for c in &solved {
        if seed.window(*c).is_none() {
            return Err(SeqError::MissingComponent(c.0.letter(), c.1));
        }
    }
    let h = forms.iter().map(|e| e.target.sigma as usize).max().unwrap_or(0);
    if seed.width() < h {
        return Err(SeqError::WindowTooSmall { needed: h, width: seed.width() });
    }

    let mut w = seed.clone();
    for _ in 0..steps {
        let n = w.width();
        let mut new_entries = Vec::with_capacity(forms.len());
        for e in &forms {
            let i = (n - e.target.sigma as usize) as u32;
            let lead = evaluate(&e.lead.sigma_shift_by(i), &w)?;
            let rest = evaluate(&e.rest.sigma_shift_by(i), &w)?;
            let value = (-rest).div(&lead).ok_or(SeqError::VanishingLeadingCoefficient { index: n })?;
            new_entries.push(((e.target.family, e.target.index), value));
        }
        for (c, v) in new_entries {
            w.windows.get_mut(&c).expect("checked above").push(v);
        }
        w.width += 1;
    }
    Ok(w)
}

/// The points `p_i = (a_{i-1}, ..., a_{i-1+h})` for `i = 1..=ell`.
pub fn reindex_to_triple(w: &SequencePoint, h: usize, ell: usize) -> Result<Vec<SequencePoint>, SeqError> {
    if w.width() != ell + h {
        return Err(SeqError::WindowTooSmall { needed: ell + h, width: w.width() });
    }
    Ok((0..ell).map(|i| w.slice(i, h + 1)).collect())
}

/// Glues overlapping points back into one window; inverse of
/// [`reindex_to_triple`].
pub fn reindex_from_triple(points: &[SequencePoint]) -> Result<SequencePoint, SeqError> {
    let first = points.first().ok_or(SeqError::Empty)?;
    let width = first.width();
    if points.iter().any(|p| p.width() != width || p.windows.keys().ne(first.windows.keys())) {
        return Err(SeqError::WidthMismatch);
    }
    if width == 0 {
        return Err(SeqError::WindowTooSmall { needed: 1, width: 0 });
    }
    let h = width - 1;
    let mut out = first.clone();
    for (idx, pair) in points.windows(2).enumerate() {
        if pair[1].slice(0, h) != pair[0].slice(1, h) {
            return Err(SeqError::OverlapMismatch { index: idx + 1 });
        }
        for (c, win) in out.windows.iter_mut() {
            win.push(pair[1].windows[c][h].clone());
        }
        out.width += 1;
    }
    Ok(out)
}

/// Whether each `p_i` satisfies the `(i-1)`-times shifted equations, read in
/// the variables `v, S(v), ..., S^h(v)`.
pub fn triple_is_partial_solution(system: &PolySystem, points: &[SequencePoint]) -> Result<bool, SeqError> {
    for (i, p) in points.iter().enumerate() {
        for f in &system.equations {
            let g = f.map_coefficients(|c| c.shift_by(i as u32));
            if !evaluate(&g, p)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
