//! Buchberger engine over free modules `k[x]^r` with a position-over-term
//! order. Polynomial ideals are the rank-one case.
//!
//! Vectors are kept as term lists sorted ascending, so the leading term is
//! the last entry. Elements can carry cofactors expressing them in terms of
//! the tracked input generators; these are what zero-module certificates are
//! made from.

use std::cmp::Ordering;

use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// Resource guards shared by Gröbner computations and Hom enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: u32,
    pub max_terms: usize,
    pub max_homs: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_degree: 64, max_terms: 100_000, max_homs: 10_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Term {
    pub pos: usize,
    pub mono: Monomial,
}

pub(crate) type SVec = Vec<(Term, Scalar)>;

#[derive(Debug, Clone)]
pub(crate) struct Elem {
    pub v: SVec,
    pub cof: Vec<SVec>,
    pub sugar: u32,
}

impl Elem {
    pub fn lead(&self) -> &(Term, Scalar) {
        self.v.last().expect("nonzero element")
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_empty()
    }
}

pub(crate) struct Engine<'a> {
    pub order: MonomialOrder,
    pub limits: Limits,
    pub rank: usize,
    /// Rank-one reduced basis used to keep cofactors reduced modulo the ideal.
    pub cof_ideal: Option<&'a [Elem]>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Term,
    sugar: u32,
}

fn degree_of(v: &SVec) -> u32 {
    v.iter().map(|(t, _)| t.mono.degree()).max().unwrap_or(0)
}

impl<'a> Engine<'a> {
    pub fn new(order: &MonomialOrder, limits: Limits, rank: usize) -> Self {
        Engine { order: order.inner().clone(), limits, rank, cof_ideal: None }
    }

    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        self.order.cmp_terms((a.pos, &a.mono), (b.pos, &b.mono))
    }

    pub fn normalize(&self, mut terms: Vec<(Term, Scalar)>) -> SVec {
        terms.sort_by(|a, b| self.cmp(&a.0, &b.0));
        let mut out: SVec = Vec::with_capacity(terms.len());
        for (t, c) in terms {
            match out.last_mut() {
                Some((lt, lc)) if *lt == t => *lc = lc.add(&c),
                _ => out.push((t, c)),
            }
            if out.last().is_some_and(|(_, c)| c.is_zero()) {
                out.pop();
            }
        }
        out
    }

    /// `a - c * shift * b`.
    fn axpy(&self, a: &SVec, c: &Scalar, shift: &Monomial, b: &SVec) -> SVec {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut ia = a.iter().peekable();
        let mut ib = b
            .iter()
            .map(|(t, x)| (Term { pos: t.pos, mono: t.mono.mul(shift) }, x.mul(c).neg()))
            .peekable();
        loop {
            match (ia.peek(), ib.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(ia.next().unwrap().clone()),
                (None, Some(_)) => out.push(ib.next().unwrap()),
                (Some(x), Some(y)) => match self.cmp(&x.0, &y.0) {
                    Ordering::Less => out.push(ia.next().unwrap().clone()),
                    Ordering::Greater => out.push(ib.next().unwrap()),
                    Ordering::Equal => {
                        let (t, x) = ia.next().unwrap().clone();
                        let (_, y) = ib.next().unwrap();
                        let s = x.add(&y);
                        if !s.is_zero() {
                            out.push((t, s));
                        }
                    }
                },
            }
        }
        out
    }

    fn check_limits(&self, v: &SVec) -> Result<()> {
        if v.len() > self.limits.max_terms {
            return Err(Error::ResourceLimit(format!(
                "intermediate vector has {} terms (limit {})",
                v.len(),
                self.limits.max_terms
            )));
        }
        let d = degree_of(v);
        if d > self.limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "intermediate degree {d} exceeds limit {}",
                self.limits.max_degree
            )));
        }
        Ok(())
    }

    fn sub_multiple(&self, p: &mut Elem, c: &Scalar, shift: &Monomial, g: &Elem) -> Result<()> {
        p.v = self.axpy(&p.v, c, shift, &g.v);
        self.check_limits(&p.v)?;
        for (pc, gc) in p.cof.iter_mut().zip(&g.cof) {
            if !gc.is_empty() {
                *pc = self.axpy(pc, c, shift, gc);
            }
        }
        p.sugar = p.sugar.max(shift.degree() + g.sugar);
        Ok(())
    }

    fn scale(&self, p: &mut Elem, c: &Scalar) {
        for (_, x) in p.v.iter_mut() {
            *x = x.mul(c);
        }
        for v in p.cof.iter_mut() {
            for (_, x) in v.iter_mut() {
                *x = x.mul(c);
            }
        }
    }

    pub fn make_monic(&self, p: &mut Elem) -> Result<()> {
        if let Some((_, lc)) = p.v.last() {
            let inv = lc.inv()?;
            self.scale(p, &inv);
        }
        Ok(())
    }

    fn find_divisor<'b>(&self, t: &Term, basis: &[&'b Elem]) -> Option<&'b Elem> {
        basis
            .iter()
            .find(|g| {
                let (gt, _) = g.lead();
                gt.pos == t.pos && gt.mono.divides(&t.mono)
            })
            .copied()
    }

    /// Full reduction: no term of the result is divisible by a leading term of `basis`.
    pub fn reduce(&self, mut p: Elem, basis: &[&Elem]) -> Result<Elem> {
        let mut rem: SVec = Vec::new();
        while let Some((t, c)) = p.v.last().cloned() {
            match self.find_divisor(&t, basis) {
                Some(g) => {
                    let (gt, gc) = g.lead();
                    let q = c.div(gc)?;
                    let shift = gt.mono.quotient_of(&t.mono);
                    self.sub_multiple(&mut p, &q, &shift, g)?;
                }
                None => {
                    rem.push(p.v.pop().unwrap());
                }
            }
        }
        rem.reverse();
        p.v = rem;
        self.reduce_cofactors(&mut p)?;
        Ok(p)
    }

    fn reduce_cofactors(&self, p: &mut Elem) -> Result<()> {
        let Some(ideal) = self.cof_ideal else { return Ok(()) };
        if ideal.is_empty() {
            return Ok(());
        }
        let sub = Engine { order: self.order.clone(), limits: self.limits, rank: 1, cof_ideal: None };
        let basis: Vec<&Elem> = ideal.iter().collect();
        for c in p.cof.iter_mut() {
            if c.is_empty() {
                continue;
            }
            let e = Elem { v: std::mem::take(c), cof: Vec::new(), sugar: 0 };
            *c = sub.reduce(e, &basis)?.v;
        }
        Ok(())
    }

    pub fn spoly(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let (ta, ca) = a.lead();
        let (tb, cb) = b.lead();
        debug_assert_eq!(ta.pos, tb.pos);
        let l = ta.mono.lcm(&tb.mono);
        let sa = ta.mono.quotient_of(&l);
        let sb = tb.mono.quotient_of(&l);
        let zero_cof = a.cof.iter().map(|_| Vec::new()).collect();
        let mut p = Elem { v: Vec::new(), cof: zero_cof, sugar: 0 };
        let neg_inv_a = ca.inv()?.neg();
        self.sub_multiple(&mut p, &neg_inv_a, &sa, a)?;
        let inv_b = cb.inv()?;
        self.sub_multiple(&mut p, &inv_b, &sb, b)?;
        Ok(p)
    }

    fn pair_sugar(&self, a: &Elem, b: &Elem, lcm: &Monomial) -> u32 {
        let da = a.lead().0.mono.degree();
        let db = b.lead().0.mono.degree();
        (a.sugar + lcm.degree() - da).max(b.sugar + lcm.degree() - db)
    }

    fn lcm_term(&self, a: &Elem, b: &Elem) -> Option<Term> {
        let (ta, _) = a.lead();
        let (tb, _) = b.lead();
        (ta.pos == tb.pos).then(|| Term { pos: ta.pos, mono: ta.mono.lcm(&tb.mono) })
    }

    fn coprime(&self, a: &Elem, b: &Elem) -> bool {
        self.rank == 1 && a.lead().0.mono.is_coprime(&b.lead().0.mono)
    }

    /// Gebauer–Möller update: installs `polys[t]`, prunes pairs with the
    /// product and chain criteria and drops redundant basis elements.
    fn update(&self, polys: &[Elem], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, t: usize) {
        let h = &polys[t];
        let cands: Vec<(usize, Term)> = active
            .iter()
            .filter_map(|&g| self.lcm_term(h, &polys[g]).map(|l| (g, l)))
            .collect();
        let mut kept: Vec<(usize, Term)> = Vec::new();
        for (k, (g1, l1)) in cands.iter().enumerate() {
            let divides = |l2: &Term| l2.mono.divides(&l1.mono);
            let dominated = cands[k + 1..].iter().any(|(_, l2)| divides(l2)) || kept.iter().any(|(_, l2)| divides(l2));
            if self.coprime(h, &polys[*g1]) || !dominated {
                kept.push((*g1, l1.clone()));
            }
        }
        let lt_h = &h.lead().0;
        pairs.retain(|p| {
            let hits = lt_h.pos == p.lcm.pos && lt_h.mono.divides(&p.lcm.mono);
            if !hits {
                return true;
            }
            let l_ih = self.lcm_term(&polys[p.i], h);
            let l_jh = self.lcm_term(&polys[p.j], h);
            l_ih.as_ref() == Some(&p.lcm) || l_jh.as_ref() == Some(&p.lcm)
        });
        for (g, l) in kept {
            if self.coprime(h, &polys[g]) {
                continue;
            }
            let sugar = self.pair_sugar(&polys[g], h, &l.mono);
            pairs.push(Pair { i: g, j: t, lcm: l, sugar });
        }
        active.retain(|&g| {
            let lg = &polys[g].lead().0;
            !(lg.pos == lt_h.pos && lt_h.mono.divides(&lg.mono))
        });
        active.push(t);
    }

    fn select(&self, pairs: &mut Vec<Pair>) -> Option<Pair> {
        if pairs.is_empty() {
            return None;
        }
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (p, q) = (&pairs[a], &pairs[b]);
                p.sugar
                    .cmp(&q.sugar)
                    .then_with(|| self.cmp(&p.lcm, &q.lcm))
                    .then_with(|| (p.i, p.j).cmp(&(q.i, q.j)))
            })
            .unwrap();
        Some(pairs.swap_remove(best))
    }

    /// Reduced Gröbner basis of the submodule spanned by `gens`, sorted with
    /// the largest leading term first.
    pub fn buchberger(&self, gens: Vec<Elem>) -> Result<Vec<Elem>> {
        let mut polys: Vec<Elem> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut gens: Vec<Elem> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            self.check_limits(&g.v)?;
        }
        gens.sort_by(|a, b| self.cmp(&a.lead().0, &b.lead().0));
        for mut g in gens {
            g.sugar = g.sugar.max(degree_of(&g.v));
            {
                let basis: Vec<&Elem> = active.iter().map(|&i| &polys[i]).collect();
                g = self.reduce(g, &basis)?;
            }
            if g.is_zero() {
                continue;
            }
            self.make_monic(&mut g)?;
            polys.push(g);
            self.update(&polys, &mut active, &mut pairs, polys.len() - 1);
        }
        while let Some(pair) = self.select(&mut pairs) {
            let mut s = self.spoly(&polys[pair.i], &polys[pair.j])?;
            s.sugar = pair.sugar;
            let h = {
                let basis: Vec<&Elem> = active.iter().map(|&i| &polys[i]).collect();
                self.reduce(s, &basis)?
            };
            if h.is_zero() {
                continue;
            }
            let mut h = h;
            self.make_monic(&mut h)?;
            polys.push(h);
            self.update(&polys, &mut active, &mut pairs, polys.len() - 1);
        }
        self.interreduce(active.into_iter().map(|i| polys[i].clone()).collect())
    }

    fn interreduce(&self, mut elems: Vec<Elem>) -> Result<Vec<Elem>> {
        elems.sort_by(|a, b| self.cmp(&a.lead().0, &b.lead().0));
        let mut minimal: Vec<Elem> = Vec::new();
        for e in elems {
            let t = &e.lead().0;
            let redundant = minimal.iter().any(|m| {
                let mt = &m.lead().0;
                mt.pos == t.pos && mt.mono.divides(&t.mono)
            });
            if !redundant {
                minimal.push(e);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<&Elem> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, e)| e).collect();
            let mut r = self.reduce(minimal[k].clone(), &others)?;
            self.make_monic(&mut r)?;
            out.push(r);
        }
        out.sort_by(|a, b| self.cmp(&b.lead().0, &a.lead().0));
        Ok(out)
    }
}
