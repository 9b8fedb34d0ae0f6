//! Polynomial ideal computations over the ground field.
//!
//! Differential-difference polynomials are treated here as ordinary
//! polynomials in the finitely many variables they mention. Everything runs
//! through [`GroebnerBasis`]; the free functions are the ideal-theoretic
//! operations built on top of it (triviality, elimination, radical
//! membership, saturation, intersection). [`macaulay`] is an independent
//! linear-algebra membership oracle used to cross-check the engine.

mod buchberger;
pub mod macaulay;
mod order;
mod poly;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded, Meter};
use crate::ddpoly::{DSPolynomial, VarRef};
use crate::field::{FieldElement, GroundField};

pub use buchberger::{GbOptions, GbStats, GroebnerBasis};
pub use macaulay::{macaulay_membership_oracle, MacaulayAnswer};
pub use order::{rank_vars, MonomialOrder, OrderKind, Var};
pub use poly::{Poly, Term};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("variable {0} is not part of the monomial order")]
    UnknownVariable(VarRef),
    #[error("auxiliary variable left in a result that should be free of it")]
    AuxiliaryVariableLeaked,
    #[error("basis was computed without cofactor tracking")]
    NotTracked,
    #[error("cannot saturate by the zero polynomial")]
    ZeroSaturator,
    #[error("degree cap {cap} is below the degree {degree} of the target")]
    CapTooSmall { cap: u32, degree: u32 },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

fn all_vars<'a>(polys: impl IntoIterator<Item = &'a DSPolynomial>) -> BTreeSet<VarRef> {
    polys.into_iter().flat_map(|p| p.vars()).collect()
}

fn ground_of<'a>(polys: impl IntoIterator<Item = &'a DSPolynomial>) -> GroundField {
    polys.into_iter().fold(GroundField::Q, |g, p| g.join(p.ground()))
}

/// Degrevlex over the default ranking of the variables occurring in `polys`.
pub fn default_order<'a>(polys: impl IntoIterator<Item = &'a DSPolynomial>) -> MonomialOrder {
    MonomialOrder::degrevlex(rank_vars(&all_vars(polys)))
}

/// Reduced Gröbner basis of `system` under `order`.
pub fn buchberger(system: &[DSPolynomial], order: MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    GroebnerBasis::compute(system, order, GbOptions::default(), &mut Meter::new(Budget::unlimited()))
}

/// The remainder of `f` modulo `basis`.
pub fn normal_form(f: &DSPolynomial, basis: &GroebnerBasis) -> Result<DSPolynomial, GroebnerError> {
    basis.normal_form(f)
}

/// True iff `1` lies in the ideal generated by `system`.
pub fn is_trivial_ideal(system: &[DSPolynomial]) -> Result<bool, GroebnerError> {
    is_trivial_ideal_metered(system, &mut Meter::new(Budget::unlimited()))
}

pub fn is_trivial_ideal_metered(system: &[DSPolynomial], meter: &mut Meter) -> Result<bool, GroebnerError> {
    let gb = GroebnerBasis::compute(system, default_order(system), GbOptions::default(), meter)?;
    Ok(gb.is_unit_ideal())
}

/// Generators of an elimination ideal together with the basis they came from.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// Basis elements supported on the kept variables, increasing order.
    pub generators: Vec<DSPolynomial>,
    pub basis: GroebnerBasis,
}

/// Block order eliminating every variable of `system` outside `keep`.
pub fn elimination_order(system: &[DSPolynomial], keep: &BTreeSet<VarRef>) -> MonomialOrder {
    let vars = all_vars(system);
    let eliminate: BTreeSet<VarRef> = vars.difference(keep).copied().collect();
    let keep_all: BTreeSet<VarRef> = keep.iter().copied().collect();
    MonomialOrder::block(rank_vars(&eliminate), rank_vars(&keep_all))
}

/// Generators of `<system> ∩ k[keep]`; empty iff the intersection is `{0}`.
pub fn elimination_intersection(
    system: &[DSPolynomial],
    keep: &BTreeSet<VarRef>,
    opts: GbOptions,
    meter: &mut Meter,
) -> Result<Elimination, GroebnerError> {
    let order = elimination_order(system, keep);
    let k = order.eliminated();
    let basis = GroebnerBasis::compute(system, order, opts, meter)?;
    let generators = basis
        .polys()
        .iter()
        .filter(|p| (0..k).all(|i| !p.uses_var(i)))
        .map(|p| p.to_ds(basis.order(), basis.ground()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Elimination { generators, basis })
}

fn rabinowitsch(system: &[DSPolynomial], f: &DSPolynomial, order: &MonomialOrder) -> Result<Vec<Poly>, GroebnerError> {
    let n = order.num_vars();
    let z = order.index_of(Var::Aux(0)).expect("aux variable in order");
    let mut inputs = system.iter().map(|p| Poly::from_ds(order, p)).collect::<Result<Vec<_>, _>>()?;
    let fz = Poly::from_ds(order, f)?;
    let mut zexp = vec![0; n];
    zexp[z] = 1;
    let one = Poly::constant(n, FieldElement::one());
    inputs.push(one.add_scaled(order, &fz, &zexp, &-FieldElement::one()));
    Ok(inputs)
}

/// Decides `f ∈ sqrt(<system>)` by testing `1 ∈ <system, 1 - z f>`.
pub fn radical_membership(f: &DSPolynomial, system: &[DSPolynomial]) -> Result<bool, GroebnerError> {
    radical_membership_metered(f, system, &mut Meter::new(Budget::unlimited()))
}

pub fn radical_membership_metered(
    f: &DSPolynomial,
    system: &[DSPolynomial],
    meter: &mut Meter,
) -> Result<bool, GroebnerError> {
    if f.is_zero() {
        return Ok(true);
    }
    let mut vars = vec![Var::Aux(0)];
    vars.extend(rank_vars(&all_vars(system.iter().chain(std::iter::once(f)))));
    let order = MonomialOrder::degrevlex(vars);
    let inputs = rabinowitsch(system, f, &order)?;
    let ground = ground_of(system.iter().chain(std::iter::once(f)));
    let gb = GroebnerBasis::compute_polys(inputs, order, ground, GbOptions::default(), meter)?;
    Ok(gb.is_unit_ideal())
}

/// Generators of the saturation `<system> : f^∞`.
pub fn saturate(system: &[DSPolynomial], f: &DSPolynomial) -> Result<Vec<DSPolynomial>, GroebnerError> {
    if f.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    let rest = rank_vars(&all_vars(system.iter().chain(std::iter::once(f))));
    let order = MonomialOrder::block(vec![Var::Aux(0)], rest);
    let inputs = rabinowitsch(system, f, &order)?;
    let ground = ground_of(system.iter().chain(std::iter::once(f)));
    let gb = GroebnerBasis::compute_polys(
        inputs,
        order,
        ground,
        GbOptions::default(),
        &mut Meter::new(Budget::unlimited()),
    )?;
    gb.polys()
        .iter()
        .filter(|p| !p.uses_var(0))
        .map(|p| p.to_ds(gb.order(), ground))
        .collect()
}

/// Generators of `<a> ∩ <b>`, via `(w a + (1 - w) b) ∩ k[vars]`.
pub fn intersect_ideals(a: &[DSPolynomial], b: &[DSPolynomial]) -> Result<Vec<DSPolynomial>, GroebnerError> {
    let rest = rank_vars(&all_vars(a.iter().chain(b)));
    let order = MonomialOrder::block(vec![Var::Aux(0)], rest);
    let n = order.num_vars();
    let mut w = vec![0; n];
    w[0] = 1;
    let one = FieldElement::one();
    let mut inputs = Vec::with_capacity(a.len() + b.len());
    for p in a {
        inputs.push(Poly::from_ds(&order, p)?.mul_term(&w, &one));
    }
    for p in b {
        let q = Poly::from_ds(&order, p)?;
        inputs.push(q.add_scaled(&order, &q, &w, &-one.clone()));
    }
    let ground = ground_of(a.iter().chain(b));
    let gb = GroebnerBasis::compute_polys(
        inputs,
        order,
        ground,
        GbOptions::default(),
        &mut Meter::new(Budget::unlimited()),
    )?;
    gb.polys()
        .iter()
        .filter(|p| !p.uses_var(0))
        .map(|p| p.to_ds(gb.order(), ground))
        .collect()
}
