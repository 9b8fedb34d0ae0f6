//! Finite-level decision procedures: consistency, elimination of the
//! x-variables, and the shifted-power membership test, each run on a
//! truncated prolongation and each returning a replayable certificate.
//!
//! Positive answers (inconsistent, consequence found, member found) are
//! proofs. Negative answers only hold up to the levels that were tried.

use std::collections::BTreeSet;
use std::time::Duration;

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded, Meter};
use crate::ddpoly::{prolong, DSPolynomial, Family, PolySystem, VarRef};
use crate::field::GroundField;
use crate::groebner::{default_order, elimination_order, GbOptions, GroebnerBasis, GroebnerError, MonomialOrder};
use crate::seq::{evaluate, SeqError, SequencePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level {
    pub delta: u32,
    pub sigma: u32,
}

impl Level {
    pub fn new(delta: u32, sigma: u32) -> Self {
        Level { delta, sigma }
    }

    pub fn coupled(l: u32) -> Self {
        Level { delta: l, sigma: l }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Consistency,
    Eliminate,
    SigmaPowerMembership,
    /// `f^m` against the unshifted prolongation.
    PlainPowerMembership,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Consistency => "consistency",
            Mode::Eliminate => "eliminate",
            Mode::SigmaPowerMembership => "sigma_power_membership",
            Mode::PlainPowerMembership => "plain_power_membership",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Inconsistent,
    ConsistentUpToLevel,
    Found,
    NoConsequenceUpToLevel,
    NotFoundUpTo,
}

impl Verdict {
    /// Whether the verdict is a proof rather than a statement about the
    /// levels tried.
    pub fn is_definitive(self) -> bool {
        matches!(self, Verdict::Inconsistent | Verdict::Found)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Inconsistent => "inconsistent",
            Verdict::ConsistentUpToLevel => "consistent-up-to-level",
            Verdict::Found => "found",
            Verdict::NoConsequenceUpToLevel => "no-consequence-up-to-level",
            Verdict::NotFoundUpTo => "not-found-up-to",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub cofactor: DSPolynomial,
    pub generator: DSPolynomial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Resources {
    pub reduction_steps: u64,
    pub pairs_reduced: u64,
    /// Generators of the last prolongation tried.
    pub generators: usize,
    /// Size of the last Gröbner basis computed.
    pub basis_size: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationReport {
    pub mode: Mode,
    pub levels: Vec<Level>,
    pub verdict: Verdict,
    /// The proven element of the ideal: `1` for inconsistency, the
    /// x-polynomial for elimination, `S^m(f^m)` (or `f^m`) for membership.
    pub consequence: Option<DSPolynomial>,
    /// The exponent `m` of a membership answer.
    pub power: Option<u32>,
    /// Nonzero cofactors only.
    pub certificate: Option<Vec<CertificateEntry>>,
    pub resources: Resources,
}

impl EliminationReport {
    /// `sum cofactor * generator`, or `None` without a certificate.
    pub fn replay(&self) -> Option<DSPolynomial> {
        let cert = self.certificate.as_ref()?;
        let ground = cert.iter().fold(GroundField::Q, |g, e| g.join(e.cofactor.ground()).join(e.generator.ground()));
        Some(cert.iter().fold(DSPolynomial::zero(ground), |acc, e| &acc + &(&e.cofactor * &e.generator)))
    }

    pub fn last_level(&self) -> Option<Level> {
        self.levels.last().copied()
    }
}

/// Order in which (delta, sigma) levels are visited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// `(L, L)` for `L = 0, 1, ...`.
    #[default]
    Coupled,
    /// Every `(a, b)` with `a, b <= L`, box by box, by `a + b` then `a`
    /// inside each box.
    Independent,
}

impl Schedule {
    pub fn levels(self, max_level: u32) -> Vec<Level> {
        match self {
            Schedule::Coupled => (0..=max_level).map(Level::coupled).collect(),
            Schedule::Independent => {
                let mut out: Vec<Level> =
                    (0..=max_level).flat_map(|a| (0..=max_level).map(move |b| Level::new(a, b))).collect();
                out.sort_by_key(|l| (l.delta.max(l.sigma), l.delta + l.sigma, l.delta));
                out
            }
        }
    }
}

/// Which of the two loops of the membership search runs innermost.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchOrder {
    /// At each level try every `m` before deepening.
    #[default]
    PowerFirst,
    /// For each `m` try every level before raising `m`.
    LevelFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElimOptions {
    /// Applied afresh to every level.
    pub budget: Budget,
    pub certificate: bool,
    pub schedule: Schedule,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions { budget: Budget::default(), certificate: true, schedule: Schedule::Coupled }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ElimError {
    #[error("{exceeded}; last completed level: {}", fmt_level(.last_completed))]
    Budget { last_completed: Option<Level>, exceeded: BudgetExceeded },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Window(#[from] SeqError),
    #[error(transparent)]
    Groebner(GroebnerError),
}

fn fmt_level(l: &Option<Level>) -> String {
    match l {
        Some(l) => format!("({}, {})", l.delta, l.sigma),
        None => "none".into(),
    }
}

fn lift(e: GroebnerError, last_completed: Option<Level>) -> ElimError {
    match e {
        GroebnerError::Budget(exceeded) => ElimError::Budget { last_completed, exceeded },
        other => ElimError::Groebner(other),
    }
}

fn gb_options(opts: &ElimOptions) -> GbOptions {
    GbOptions { track_cofactors: opts.certificate }
}

fn certificate_from(cofactors: Vec<DSPolynomial>, generators: &[DSPolynomial]) -> Vec<CertificateEntry> {
    cofactors
        .into_iter()
        .zip(generators)
        .filter(|(c, _)| !c.is_zero())
        .map(|(cofactor, g)| CertificateEntry { cofactor, generator: g.clone() })
        .collect()
}

fn element_certificate(
    basis: &GroebnerBasis,
    i: usize,
    generators: &[DSPolynomial],
) -> Result<Vec<CertificateEntry>, GroebnerError> {
    let cofactors = basis.element_cofactors(i).ok_or(GroebnerError::NotTracked)?;
    let ground = generators.iter().fold(basis.ground(), |g, p| g.join(p.ground()));
    let cs = cofactors.iter().map(|c| c.to_ds(basis.order(), ground)).collect::<Result<Vec<_>, _>>()?;
    Ok(certificate_from(cs, generators))
}

fn accumulate(res: &mut Resources, basis: &GroebnerBasis, generators: usize) {
    let s = basis.stats();
    res.reduction_steps += s.reduction_steps;
    res.pairs_reduced += s.pairs_reduced;
    res.generators = generators;
    res.basis_size = basis.len();
}

fn uses_family(p: &DSPolynomial, family: Family) -> bool {
    p.vars().iter().any(|v| v.family == family)
}

fn require_y_only(system: &PolySystem) -> Result<(), ElimError> {
    if system.equations.iter().any(|f| uses_family(f, Family::X)) {
        return Err(ElimError::InvalidInput("consistency expects a system in y-variables only".into()));
    }
    Ok(())
}

/// Decides whether `1` lies in the ideal of the `(level, level)`
/// prolongation.
pub fn truncated_consistency(system: &PolySystem, level: u32, opts: &ElimOptions) -> Result<EliminationReport, ElimError> {
    require_y_only(system)?;
    let mut report = EliminationReport {
        mode: Mode::Consistency,
        levels: Vec::new(),
        verdict: Verdict::ConsistentUpToLevel,
        consequence: None,
        power: None,
        certificate: None,
        resources: Resources::default(),
    };
    consistency_at(system, Level::coupled(level), opts, &mut report, None)?;
    Ok(report)
}

/// Runs the consistency check at every level of the schedule up to
/// `max_level`, stopping at the first inconsistency.
pub fn deepening_consistency(system: &PolySystem, max_level: u32, opts: &ElimOptions) -> Result<EliminationReport, ElimError> {
    require_y_only(system)?;
    let mut report = EliminationReport {
        mode: Mode::Consistency,
        levels: Vec::new(),
        verdict: Verdict::ConsistentUpToLevel,
        consequence: None,
        power: None,
        certificate: None,
        resources: Resources::default(),
    };
    let mut last = None;
    for level in opts.schedule.levels(max_level) {
        consistency_at(system, level, opts, &mut report, last)?;
        if report.verdict == Verdict::Inconsistent {
            break;
        }
        last = Some(level);
    }
    Ok(report)
}

fn consistency_at(
    system: &PolySystem,
    level: Level,
    opts: &ElimOptions,
    report: &mut EliminationReport,
    last_completed: Option<Level>,
) -> Result<(), ElimError> {
    let mut meter = Meter::new(opts.budget);
    let gens = prolong(&system.equations, level.delta, level.sigma);
    let basis = GroebnerBasis::compute(&gens, default_order(&gens), gb_options(opts), &mut meter)
        .map_err(|e| lift(e, last_completed))?;
    accumulate(&mut report.resources, &basis, gens.len());
    report.resources.elapsed += meter.elapsed();
    report.levels.push(level);
    if basis.is_unit_ideal() {
        report.verdict = Verdict::Inconsistent;
        report.consequence = Some(DSPolynomial::one(system.ground));
        if opts.certificate {
            report.certificate = Some(element_certificate(&basis, 0, &gens).map_err(|e| lift(e, last_completed))?);
        }
    }
    Ok(())
}

/// Searches for a nonzero element of the prolonged ideal involving only
/// x-variables, deepening the level until one appears or `max_level` is
/// exhausted.
pub fn iterative_deepening_eliminate(
    system: &PolySystem,
    max_level: u32,
    opts: &ElimOptions,
) -> Result<EliminationReport, ElimError> {
    if system.num_x == 0 {
        return Err(ElimError::InvalidInput("elimination needs at least one x-variable".into()));
    }
    let mut report = EliminationReport {
        mode: Mode::Eliminate,
        levels: Vec::new(),
        verdict: Verdict::NoConsequenceUpToLevel,
        consequence: None,
        power: None,
        certificate: None,
        resources: Resources::default(),
    };
    let mut last = None;
    for level in opts.schedule.levels(max_level) {
        let mut meter = Meter::new(opts.budget);
        let gens = prolong(&system.equations, level.delta, level.sigma);
        let keep: BTreeSet<VarRef> = gens.iter().flat_map(|g| g.vars()).filter(|v| v.family == Family::X).collect();
        let order = elimination_order(&gens, &keep);
        let k = order.eliminated();
        let basis =
            GroebnerBasis::compute(&gens, order, gb_options(opts), &mut meter).map_err(|e| lift(e, last))?;
        accumulate(&mut report.resources, &basis, gens.len());
        report.resources.elapsed += meter.elapsed();
        report.levels.push(level);
        // the basis is sorted by increasing leading monomial, so the first
        // x-only element is the minimal one
        if let Some(i) = basis.polys().iter().position(|p| (0..k).all(|v| !p.uses_var(v))) {
            let g = basis.polys()[i].to_ds(basis.order(), basis.ground()).map_err(|e| lift(e, last))?;
            report.verdict = Verdict::Found;
            report.consequence = Some(g);
            if opts.certificate {
                report.certificate = Some(element_certificate(&basis, i, &gens).map_err(|e| lift(e, last))?);
            }
            return Ok(report);
        }
        last = Some(level);
    }
    Ok(report)
}

fn require_y_poly(f: &DSPolynomial) -> Result<(), ElimError> {
    if uses_family(f, Family::X) {
        return Err(ElimError::InvalidInput("membership target must be in y-variables only".into()));
    }
    Ok(())
}

fn membership_order(gens: &[DSPolynomial], target: &DSPolynomial) -> MonomialOrder {
    default_order(gens.iter().chain(std::iter::once(target)))
}

/// One membership test of `target` against `gens`; on success fills in the
/// report.
fn member_at(
    target: DSPolynomial,
    gens: &[DSPolynomial],
    m: u32,
    level: Level,
    opts: &ElimOptions,
    report: &mut EliminationReport,
    last_completed: Option<Level>,
) -> Result<bool, ElimError> {
    let mut meter = Meter::new(opts.budget);
    let order = membership_order(gens, &target);
    let basis = GroebnerBasis::compute(gens, order, gb_options(opts), &mut meter)
        .map_err(|e| lift(e, last_completed))?;
    let member = if opts.certificate {
        let p = crate::groebner::Poly::from_ds(basis.order(), &target).map_err(|e| lift(e, last_completed))?;
        match basis.certificate_poly(&p, &mut meter).map_err(|e| lift(e, last_completed))? {
            None => None,
            Some(cs) => {
                let ground = gens.iter().fold(target.ground(), |g, p| g.join(p.ground()));
                let cs = cs
                    .iter()
                    .map(|c| c.to_ds(basis.order(), ground))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| lift(e, last_completed))?;
                Some(Some(certificate_from(cs, gens)))
            }
        }
    } else {
        let p = crate::groebner::Poly::from_ds(basis.order(), &target).map_err(|e| lift(e, last_completed))?;
        let r = basis.reduce_poly(&p, &mut meter).map_err(|e| lift(e, last_completed))?;
        r.is_zero().then_some(None)
    };
    accumulate(&mut report.resources, &basis, gens.len());
    report.resources.elapsed += meter.elapsed();
    report.levels.push(level);
    match member {
        None => Ok(false),
        Some(cert) => {
            report.verdict = Verdict::Found;
            report.consequence = Some(target);
            report.power = Some(m);
            report.certificate = cert;
            Ok(true)
        }
    }
}

fn membership_report(mode: Mode) -> EliminationReport {
    EliminationReport {
        mode,
        levels: Vec::new(),
        verdict: Verdict::NotFoundUpTo,
        consequence: None,
        power: None,
        certificate: None,
        resources: Resources::default(),
    }
}

/// Least `m <= m_max` with `S^m(f^m)` in the ideal of
/// `prolong(F, level, level + m)`.
pub fn sigma_power_membership(
    f: &DSPolynomial,
    system: &PolySystem,
    m_max: u32,
    level: u32,
    opts: &ElimOptions,
) -> Result<EliminationReport, ElimError> {
    require_y_poly(f)?;
    let mut report = membership_report(Mode::SigmaPowerMembership);
    let mut last = None;
    for m in 1..=m_max {
        let lv = Level::new(level, level + m);
        if shifted_step(f, system, m, lv, opts, &mut report, last)? {
            break;
        }
        last = Some(lv);
    }
    Ok(report)
}

fn shifted_step(
    f: &DSPolynomial,
    system: &PolySystem,
    m: u32,
    lv: Level,
    opts: &ElimOptions,
    report: &mut EliminationReport,
    last: Option<Level>,
) -> Result<bool, ElimError> {
    let gens = prolong(&system.equations, lv.delta, lv.sigma);
    member_at(f.pow(m).sigma_shift_by(m), &gens, m, lv, opts, report, last)
}

/// Least `m <= m_max` with `f^m` in the ideal of `prolong(F, level, level)`.
pub fn plain_power_membership(
    f: &DSPolynomial,
    system: &PolySystem,
    m_max: u32,
    level: u32,
    opts: &ElimOptions,
) -> Result<EliminationReport, ElimError> {
    require_y_poly(f)?;
    let mut report = membership_report(Mode::PlainPowerMembership);
    let lv = Level::coupled(level);
    let gens = prolong(&system.equations, level, level);
    let mut last = None;
    for m in 1..=m_max {
        if member_at(f.pow(m), &gens, m, lv, opts, &mut report, last)? {
            break;
        }
        last = Some(lv);
    }
    Ok(report)
}

/// The shifted-power search over both `m <= m_max` and base levels
/// `<= max_level`, in the given nesting.
pub fn sigma_power_search(
    f: &DSPolynomial,
    system: &PolySystem,
    m_max: u32,
    max_level: u32,
    order: SearchOrder,
    opts: &ElimOptions,
) -> Result<EliminationReport, ElimError> {
    require_y_poly(f)?;
    let pairs: Vec<(u32, u32)> = match order {
        SearchOrder::PowerFirst => (0..=max_level).flat_map(|l| (1..=m_max).map(move |m| (l, m))).collect(),
        SearchOrder::LevelFirst => (1..=m_max).flat_map(|m| (0..=max_level).map(move |l| (l, m))).collect(),
    };
    let mut report = membership_report(Mode::SigmaPowerMembership);
    let mut last = None;
    for (l, m) in pairs {
        let lv = Level::new(l, l + m);
        if shifted_step(f, system, m, lv, opts, &mut report, last)? {
            break;
        }
        last = Some(lv);
    }
    Ok(report)
}

/// True iff every shift of an equation that fits in the window vanishes at
/// `w` while `f` does not, so `f` is not a consequence of the system.
///
/// Derivatives of the equations need no separate check: evaluation commutes
/// with the derivation, so they vanish wherever the equations do.
pub fn witness_refute(f: &DSPolynomial, system: &PolySystem, w: &SequencePoint) -> Result<bool, ElimError> {
    let width = w.width();
    let reach = |p: &DSPolynomial| p.vars().iter().map(|v| v.sigma as usize + 1).max().unwrap_or(0);
    let needed = system.equations.iter().map(reach).chain(std::iter::once(reach(f))).max().unwrap_or(0);
    if needed > width {
        return Err(SeqError::WindowTooSmall { needed, width }.into());
    }
    for g in &system.equations {
        let mut shifted = g.clone();
        for b in 0..=(width - reach(g)) {
            if b > 0 {
                shifted = shifted.sigma_shift();
            }
            if !evaluate(&shifted, w)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(!evaluate(f, w)?.is_zero())
}
