//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller pair criteria, optionally tracking how every basis element
//! is expressed through the input generators.

use crate::budget::{Budget, Meter};
use crate::ddpoly::DSPolynomial;
use crate::field::{FieldElement, GroundField};

use super::order::MonomialOrder;
use super::poly::{coprime, degree, divides, exps_sub, lcm, Exps, Poly};
use super::GroebnerError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GbOptions {
    /// Record cofactors so that membership answers come with certificates.
    pub track_cofactors: bool,
}

impl GbOptions {
    pub fn tracked() -> Self {
        GbOptions { track_cofactors: true }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GbStats {
    pub reduction_steps: u64,
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
}

/// A reduced Gröbner basis together with the order it was computed for.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    ground: GroundField,
    /// Monic, inter-reduced, sorted by increasing leading monomial.
    polys: Vec<Poly>,
    reduced: bool,
    inputs: Vec<Poly>,
    /// `polys[i] = sum_k cofactors[i][k] * inputs[k]`.
    cofactors: Option<Vec<Vec<Poly>>>,
    stats: GbStats,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
}

struct Engine<'a> {
    order: &'a MonomialOrder,
    track: bool,
    num_inputs: usize,
    polys: Vec<Poly>,
    reps: Vec<Vec<Poly>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GbStats,
}

/// Full reduction of `p` by `divisors`. When `quotients` is given, the
/// multiplier used for each divisor is accumulated there.
pub(crate) fn reduce(
    order: &MonomialOrder,
    p: &Poly,
    divisors: &[&Poly],
    meter: &mut Meter,
    mut quotients: Option<&mut Vec<Poly>>,
) -> Result<Poly, GroebnerError> {
    let mut p = p.clone();
    let mut rem = Vec::new();
    let one = match divisors.first().and_then(|d| d.lead()) {
        Some(t) => Poly::constant(t.exps.len(), FieldElement::one()),
        None => return Ok(p),
    };
    while let Some(lead) = p.terms.first() {
        let hit = divisors.iter().position(|d| divides(d.lm(), &lead.exps));
        match hit {
            Some(k) => {
                meter.tick()?;
                let d = divisors[k];
                let c = lead.coeff.div(d.lc()).expect("nonzero lead");
                let shift = exps_sub(&lead.exps, d.lm());
                if let Some(q) = quotients.as_deref_mut() {
                    q[k] = q[k].add_scaled(order, &one, &shift, &c);
                }
                p = p.add_scaled(order, d, &shift, &-c);
            }
            None => {
                rem.push(p.terms.remove(0));
            }
        }
    }
    Ok(Poly { terms: rem })
}

impl<'a> Engine<'a> {
    fn lcm_key(&self, a: &Exps, b: &Exps) -> std::cmp::Ordering {
        degree(a).cmp(&degree(b)).then_with(|| self.order.cmp(a, b))
    }

    fn combine_reps(&self, base: Vec<Poly>, quotients: &[Poly], divisor_ids: &[usize]) -> Vec<Poly> {
        let mut rep = base;
        for (q, &id) in quotients.iter().zip(divisor_ids) {
            if q.is_zero() {
                continue;
            }
            for (k, r) in rep.iter_mut().enumerate() {
                let prod = self.reps[id][k].mul(self.order, q);
                *r = r.sub(self.order, &prod);
            }
        }
        rep
    }

    /// Reduces `h` by the active set and, if nonzero, inserts it.
    /// Returns true when the ideal turned out to be the unit ideal.
    fn insert(&mut self, h: Poly, rep: Vec<Poly>, meter: &mut Meter) -> Result<bool, GroebnerError> {
        let ids = self.active.clone();
        let divisors: Vec<&Poly> = ids.iter().map(|&i| &self.polys[i]).collect();
        let mut quotients = vec![Poly::zero(); divisors.len()];
        let r = reduce(
            self.order,
            &h,
            &divisors,
            meter,
            if self.track { Some(&mut quotients) } else { None },
        )?;
        if r.is_zero() {
            self.stats.zero_reductions += 1;
            return Ok(false);
        }
        let inv = r.lc().inv().expect("nonzero");
        let r = r.scale(&inv);
        let rep = if self.track {
            self.combine_reps(rep, &quotients, &ids).iter().map(|p| p.scale(&inv)).collect()
        } else {
            Vec::new()
        };
        let unit = r.is_unit();
        self.polys.push(r);
        self.reps.push(rep);
        let idx = self.polys.len() - 1;
        if unit {
            self.active = vec![idx];
            self.pairs.clear();
            return Ok(true);
        }
        self.update(idx);
        Ok(false)
    }

    /// Gebauer–Möller update of the pair list and the active set.
    fn update(&mut self, h: usize) {
        let lt_h = self.polys[h].lm().to_vec();
        let candidates: Vec<(usize, Exps)> =
            self.active.iter().map(|&g| (g, lcm(&lt_h, self.polys[g].lm()))).collect();
        let mut kept: Vec<(usize, Exps)> = Vec::new();
        for (pos, (g1, l1)) in candidates.iter().enumerate() {
            let disjoint = coprime(&lt_h, self.polys[*g1].lm());
            let dominated = candidates[pos + 1..].iter().any(|(_, l2)| divides(l2, l1))
                || kept.iter().any(|(_, l2)| divides(l2, l1));
            if disjoint || !dominated {
                kept.push((*g1, l1.clone()));
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !coprime(&lt_h, self.polys[*g].lm()))
            .map(|(g, l)| Pair { i: g, j: h, lcm: l })
            .collect();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(divides(&lt_h, &p.lcm)
                && lcm(polys[p.i].lm(), &lt_h) != p.lcm
                && lcm(&lt_h, polys[p.j].lm()) != p.lcm)
        });
        self.pairs.extend(new_pairs);
        self.active.retain(|&g| !divides(&lt_h, polys[g].lm()));
        self.active.push(h);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let ord = self.lcm_key(&a.lcm, &b.lcm).then((a.i, a.j).cmp(&(b.i, b.j)));
            if ord == std::cmp::Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn s_poly(&self, pair: &Pair) -> (Poly, Vec<Poly>) {
        let (gi, gj) = (&self.polys[pair.i], &self.polys[pair.j]);
        let mi = exps_sub(&pair.lcm, gi.lm());
        let mj = exps_sub(&pair.lcm, gj.lm());
        let one = FieldElement::one();
        let s = gi.mul_term(&mi, &one).add_scaled(self.order, gj, &mj, &-one.clone());
        let rep = if self.track {
            (0..self.num_inputs)
                .map(|k| {
                    self.reps[pair.i][k]
                        .mul_term(&mi, &one)
                        .add_scaled(self.order, &self.reps[pair.j][k], &mj, &-one.clone())
                })
                .collect()
        } else {
            Vec::new()
        };
        (s, rep)
    }
}

impl GroebnerBasis {
    /// Computes the reduced Gröbner basis of the ideal generated by `inputs`.
    pub fn compute(
        inputs: &[DSPolynomial],
        order: MonomialOrder,
        opts: GbOptions,
        meter: &mut Meter,
    ) -> Result<GroebnerBasis, GroebnerError> {
        let ground = inputs.iter().fold(GroundField::Q, |g, p| g.join(p.ground()));
        let polys = inputs.iter().map(|p| Poly::from_ds(&order, p)).collect::<Result<Vec<_>, _>>()?;
        GroebnerBasis::compute_polys(polys, order, ground, opts, meter)
    }

    pub(crate) fn compute_polys(
        inputs: Vec<Poly>,
        order: MonomialOrder,
        ground: GroundField,
        opts: GbOptions,
        meter: &mut Meter,
    ) -> Result<GroebnerBasis, GroebnerError> {
        let start_steps = meter.steps();
        let n = order.num_vars();
        let num_inputs = inputs.len();
        let mut eng = Engine {
            order: &order,
            track: opts.track_cofactors,
            num_inputs,
            polys: Vec::new(),
            reps: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            stats: GbStats::default(),
        };
        let mut unit = false;
        for (k, f) in inputs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let rep = if eng.track {
                (0..num_inputs)
                    .map(|m| if m == k { Poly::constant(n, FieldElement::one()) } else { Poly::zero() })
                    .collect()
            } else {
                Vec::new()
            };
            if eng.insert(f.clone(), rep, meter)? {
                unit = true;
                break;
            }
        }
        while !unit {
            let Some(pair) = eng.next_pair() else { break };
            eng.stats.pairs_reduced += 1;
            let (s, rep) = eng.s_poly(&pair);
            if eng.insert(s, rep, meter)? {
                unit = true;
            }
        }

        // inter-reduce the (already minimal) active set
        let mut active = eng.active.clone();
        active.sort_by(|&a, &b| order.cmp(eng.polys[a].lm(), eng.polys[b].lm()));
        let mut polys = Vec::with_capacity(active.len());
        let mut cofactors = Vec::with_capacity(active.len());
        for &g in &active {
            let others: Vec<usize> = active.iter().copied().filter(|&o| o != g).collect();
            let divisors: Vec<&Poly> = others.iter().map(|&o| &eng.polys[o]).collect();
            let head = Poly { terms: vec![eng.polys[g].terms[0].clone()] };
            let tail = Poly { terms: eng.polys[g].terms[1..].to_vec() };
            let mut quotients = vec![Poly::zero(); divisors.len()];
            let r = reduce(
                &order,
                &tail,
                &divisors,
                meter,
                if eng.track { Some(&mut quotients) } else { None },
            )?;
            let reduced = head.add(&order, &r);
            if eng.track {
                cofactors.push(eng.combine_reps(eng.reps[g].clone(), &quotients, &others));
            }
            polys.push(reduced);
        }
        let mut stats = eng.stats;
        stats.reduction_steps = meter.steps() - start_steps;
        Ok(GroebnerBasis {
            order,
            ground,
            polys,
            reduced: true,
            inputs,
            cofactors: if opts.track_cofactors { Some(cofactors) } else { None },
            stats,
        })
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn ground(&self) -> GroundField {
        self.ground
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn inputs(&self) -> &[Poly] {
        &self.inputs
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn stats(&self) -> GbStats {
        self.stats
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True iff the basis is `{1}`.
    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_unit()
    }

    /// The basis as differential-difference polynomials. Fails if an
    /// auxiliary variable survives.
    pub fn generators(&self) -> Result<Vec<DSPolynomial>, GroebnerError> {
        self.polys.iter().map(|p| p.to_ds(&self.order, self.ground)).collect()
    }

    pub fn reduce_poly(&self, p: &Poly, meter: &mut Meter) -> Result<Poly, GroebnerError> {
        let divisors: Vec<&Poly> = self.polys.iter().collect();
        reduce(&self.order, p, &divisors, meter, None)
    }

    /// The remainder of `f` modulo the basis.
    pub fn normal_form(&self, f: &DSPolynomial) -> Result<DSPolynomial, GroebnerError> {
        let p = Poly::from_ds(&self.order, f)?;
        let r = self.reduce_poly(&p, &mut Meter::new(Budget::unlimited()))?;
        r.to_ds(&self.order, self.ground.join(f.ground()))
    }

    pub fn contains(&self, f: &DSPolynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Cofactors `c_k` with `p = sum_k c_k * inputs[k]` if `p` lies in the
    /// ideal. Requires a basis computed with cofactor tracking.
    pub fn certificate_poly(&self, p: &Poly, meter: &mut Meter) -> Result<Option<Vec<Poly>>, GroebnerError> {
        let cof = self.cofactors.as_ref().ok_or(GroebnerError::NotTracked)?;
        let divisors: Vec<&Poly> = self.polys.iter().collect();
        let mut quotients = vec![Poly::zero(); divisors.len()];
        let r = reduce(&self.order, p, &divisors, meter, Some(&mut quotients))?;
        if !r.is_zero() {
            return Ok(None);
        }
        let mut out = vec![Poly::zero(); self.inputs.len()];
        for (q, rep) in quotients.iter().zip(cof) {
            if q.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(rep) {
                *o = o.add(&self.order, &r.mul(&self.order, q));
            }
        }
        Ok(Some(out))
    }

    /// Cofactors over the input generators expressing `f`, or `None` if `f`
    /// is not in the ideal.
    pub fn certificate(&self, f: &DSPolynomial) -> Result<Option<Vec<DSPolynomial>>, GroebnerError> {
        let p = Poly::from_ds(&self.order, f)?;
        let ground = self.ground.join(f.ground());
        match self.certificate_poly(&p, &mut Meter::new(Budget::unlimited()))? {
            None => Ok(None),
            Some(cs) => cs.iter().map(|c| c.to_ds(&self.order, ground)).collect::<Result<Vec<_>, _>>().map(Some),
        }
    }

    /// Cofactors expressing basis element `i` through the inputs.
    pub fn element_cofactors(&self, i: usize) -> Option<&[Poly]> {
        self.cofactors.as_ref().map(|c| c[i].as_slice())
    }

    /// Checks Buchberger's criterion: every S-polynomial of two basis
    /// elements reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let mut meter = Meter::new(Budget::unlimited());
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                let (gi, gj) = (&self.polys[i], &self.polys[j]);
                let l = lcm(gi.lm(), gj.lm());
                let s = gi
                    .mul_term(&exps_sub(&l, gi.lm()), &gj.lc().clone())
                    .add_scaled(&self.order, gj, &exps_sub(&l, gj.lm()), &-gi.lc().clone());
                match self.reduce_poly(&s, &mut meter) {
                    Ok(r) if r.is_zero() => {}
                    _ => return false,
                }
            }
        }
        true
    }
}
