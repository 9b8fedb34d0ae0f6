use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::ddpoly::VarRef;

/// A variable of a Gröbner computation: either a differential-difference
/// variable or an auxiliary one introduced for saturation, radical membership
/// or ideal intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Ds(VarRef),
    Aux(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Ds(v) => write!(f, "{}", v),
            Var::Aux(n) => write!(f, "_z{}", n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    DegRevLex,
    Lex,
    /// The first `eliminate` variables form a block ranked above the rest;
    /// both blocks are compared by degrevlex.
    Block { eliminate: usize },
}

/// A monomial order on exponent vectors over a fixed ranked variable list.
/// `vars[0]` is the highest-ranked variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    vars: Vec<Var>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, vars: Vec<Var>) -> Self {
        if let OrderKind::Block { eliminate } = kind {
            assert!(eliminate <= vars.len(), "block larger than variable list");
        }
        MonomialOrder { kind, vars }
    }

    pub fn degrevlex(vars: Vec<Var>) -> Self {
        MonomialOrder::new(OrderKind::DegRevLex, vars)
    }

    pub fn lex(vars: Vec<Var>) -> Self {
        MonomialOrder::new(OrderKind::Lex, vars)
    }

    /// Block order with `eliminate` ranked above `keep`.
    pub fn block(eliminate: Vec<Var>, keep: Vec<Var>) -> Self {
        let k = eliminate.len();
        let mut vars = eliminate;
        vars.extend(keep);
        MonomialOrder::new(OrderKind::Block { eliminate: k }, vars)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    /// Number of leading variables in the eliminated block (0 if none).
    pub fn eliminated(&self) -> usize {
        match self.kind {
            OrderKind::Block { eliminate } => eliminate,
            _ => 0,
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self.kind {
            OrderKind::DegRevLex => degrevlex(a, b),
            OrderKind::Lex => a.cmp(b),
            OrderKind::Block { eliminate } => degrevlex(&a[..eliminate], &b[..eliminate])
                .then_with(|| degrevlex(&a[eliminate..], &b[eliminate..])),
        }
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Default ranking of differential-difference variables: higher total order
/// first, then higher shift, then family and index. Deterministic.
pub fn rank_vars(vars: &BTreeSet<VarRef>) -> Vec<Var> {
    let mut v: Vec<VarRef> = vars.iter().copied().collect();
    v.sort_by(|a, b| {
        b.order()
            .cmp(&a.order())
            .then(b.sigma.cmp(&a.sigma))
            .then(b.family.cmp(&a.family))
            .then(b.index.cmp(&a.index))
    });
    v.into_iter().map(Var::Ds).collect()
}
