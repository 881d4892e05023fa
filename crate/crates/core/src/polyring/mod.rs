//! Multivariate polynomials over ℚ and 𝔽ₚ, Buchberger's algorithm and the
//! quotient-ring helpers built on it.

pub(crate) mod engine;
mod monomial;
mod parse;
mod poly;

use std::sync::Arc;

pub use engine::Limits;
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_scalar};
pub use poly::{poly_mul, PolyRing, Polynomial};

use engine::{Elem, Engine, SVec, Term};
use poly::same_ring;

use crate::error::{Error, Result};

/// A reduced Gröbner basis: monic elements, largest leading monomial first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
}

pub(crate) fn to_svec(p: &Polynomial, pos: usize, engine: &Engine) -> SVec {
    engine.normalize(
        p.terms()
            .map(|(m, c)| (Term { pos, mono: m.clone() }, c.clone()))
            .collect(),
    )
}

pub(crate) fn from_svec(v: &SVec, ring: &Arc<PolyRing>) -> Polynomial {
    Polynomial::from_terms(ring, v.iter().map(|(t, c)| (t.mono.clone(), c.clone())))
}

pub(crate) fn elem_of(p: &Polynomial, engine: &Engine) -> Elem {
    Elem { v: to_svec(p, 0, engine), cof: Vec::new(), sugar: p.degree().unwrap_or(0) }
}

impl GroebnerBasis {
    pub fn compute(ring: &Arc<PolyRing>, gens: &[Polynomial], order: &MonomialOrder, limits: Limits) -> Result<Self> {
        if !ring.base().is_field() {
            return Err(Error::NonFieldBase);
        }
        if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::MixedContext);
        }
        let engine = Engine::new(order, limits, 1);
        let elems = gens.iter().map(|g| elem_of(g, &engine)).collect();
        let basis = engine.buchberger(elems)?;
        Ok(GroebnerBasis {
            ring: ring.clone(),
            order: order.inner().clone(),
            elements: basis.iter().map(|e| from_svec(&e.v, ring)).collect(),
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| g.leading_term(&self.order).expect("nonzero").0.clone())
            .collect()
    }

    /// True for the unit ideal.
    pub fn is_unit_ideal(&self) -> bool {
        self.elements.iter().any(Polynomial::is_constant)
    }

    pub(crate) fn engine(&self, limits: Limits) -> Engine<'static> {
        Engine::new(&self.order, limits, 1)
    }

    pub(crate) fn elems(&self, engine: &Engine) -> Vec<Elem> {
        self.elements.iter().map(|g| elem_of(g, engine)).collect()
    }

    /// S-polynomial of elements `i` and `j` (not reduced).
    pub fn s_polynomial(&self, i: usize, j: usize) -> Result<Polynomial> {
        let engine = self.engine(Limits::default());
        let a = elem_of(&self.elements[i], &engine);
        let b = elem_of(&self.elements[j], &engine);
        Ok(from_svec(&engine.spoly(&a, &b)?.v, &self.ring))
    }
}

/// Reduced Gröbner basis of the ideal `(gens)` under the default limits.
pub fn buchberger(ring: &Arc<PolyRing>, gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis> {
    GroebnerBasis::compute(ring, gens, order, Limits::default())
}

/// Unique remainder of `f` modulo `basis`.
pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    normal_form_with_limits(f, basis, Limits::default())
}

pub fn normal_form_with_limits(f: &Polynomial, basis: &GroebnerBasis, limits: Limits) -> Result<Polynomial> {
    if !same_ring(f.ring(), &basis.ring) {
        return Err(Error::MixedContext);
    }
    if f.is_zero() || basis.elements.is_empty() {
        return Ok(f.clone());
    }
    let engine = basis.engine(limits);
    let elems = basis.elems(&engine);
    let refs: Vec<&Elem> = elems.iter().collect();
    let r = engine.reduce(elem_of(f, &engine), &refs)?;
    Ok(from_svec(&r.v, &basis.ring))
}

pub fn ideal_member(f: &Polynomial, gens: &[Polynomial], order: &MonomialOrder) -> Result<bool> {
    let g = buchberger(f.ring(), gens, order)?;
    Ok(normal_form(f, &g)?.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientBasis {
    Finite(Vec<Monomial>),
    Infinite,
}

impl QuotientBasis {
    pub fn finite(&self) -> Option<&[Monomial]> {
        match self {
            QuotientBasis::Finite(v) => Some(v),
            QuotientBasis::Infinite => None,
        }
    }
}

/// Standard monomials of a reduced basis, ordered by degree and then with
/// earlier variables first. `Infinite` unless every variable has a pure
/// power among the leading monomials.
pub fn quotient_basis(basis: &GroebnerBasis) -> QuotientBasis {
    let n = basis.ring.nvars();
    let lms = basis.leading_monomials();
    if lms.iter().any(Monomial::is_one) {
        return QuotientBasis::Finite(Vec::new());
    }
    let mut bounds = vec![u32::MAX; n];
    for m in &lms {
        let ex = m.exponents();
        let nz: Vec<usize> = (0..n).filter(|&i| ex[i] > 0).collect();
        if let [i] = nz[..] {
            bounds[i] = bounds[i].min(ex[i]);
        }
    }
    if bounds.iter().any(|&b| b == u32::MAX) {
        return QuotientBasis::Infinite;
    }
    let mut out = Vec::new();
    let mut ex = vec![0u32; n];
    loop {
        let m = Monomial::new(ex.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        // odometer over the box below the pure-power bounds
        let mut k = 0;
        loop {
            if k == n {
                out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.exponents().cmp(a.exponents())));
                return QuotientBasis::Finite(out);
            }
            ex[k] += 1;
            if ex[k] < bounds[k] {
                break;
            }
            ex[k] = 0;
            k += 1;
        }
    }
}

/// Matrix with one row per variable and one column per relation,
/// entry `(i, j) = ∂f_j/∂x_i`.
pub fn jacobian(relations: &[Polynomial], ring: &Arc<PolyRing>) -> Vec<Vec<Polynomial>> {
    (0..ring.nvars())
        .map(|i| relations.iter().map(|f| f.derivative(i)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::BaseKind;
    use proptest::prelude::*;

    fn ring(vars: &[&str], base: BaseKind) -> Arc<PolyRing> {
        PolyRing::new(vars.iter().map(|s| s.to_string()).collect(), base)
    }

    fn polys(texts: &[&str], r: &Arc<PolyRing>) -> Vec<Polynomial> {
        texts.iter().map(|t| parse_poly(t, r).unwrap()).collect()
    }

    fn dp() -> MonomialOrder {
        MonomialOrder::DegRevLex
    }

    #[test]
    fn buchberger_examples() {
        let r = ring(&["x"], BaseKind::Rat);
        let g = buchberger(&r, &polys(&["x"], &r), &dp()).unwrap();
        assert_eq!(g.elements(), polys(&["x"], &r).as_slice());
        // x^3 - 1 - x(x^2 - 1) = x - 1, and x^2 - 1 reduces to zero by x - 1
        let g = buchberger(&r, &polys(&["x^2 - 1", "x^3 - 1"], &r), &dp()).unwrap();
        assert_eq!(g.elements(), polys(&["x - 1"], &r).as_slice());
        let g = buchberger(&r, &[], &dp()).unwrap();
        assert!(g.elements().is_empty());
        let z = ring(&["x"], BaseKind::Int);
        assert_eq!(buchberger(&z, &polys(&["x"], &z), &dp()), Err(Error::NonFieldBase));
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x", "y"], BaseKind::Rat);
        let g = buchberger(&r, &polys(&["x - 1"], &r), &dp()).unwrap();
        assert_eq!(normal_form(&parse_poly("x^2", &r).unwrap(), &g).unwrap(), Polynomial::one(&r));
        assert!(normal_form(&Polynomial::zero(&r), &g).unwrap().is_zero());
        let empty = buchberger(&r, &[], &dp()).unwrap();
        let f = parse_poly("x^2 + y", &r).unwrap();
        assert_eq!(normal_form(&f, &empty).unwrap(), f);
    }

    #[test]
    fn membership_examples() {
        let r = ring(&["x"], BaseKind::Rat);
        let gens = polys(&["x - 1"], &r);
        assert!(ideal_member(&parse_poly("x^2 - 1", &r).unwrap(), &gens, &dp()).unwrap());
        assert!(!ideal_member(&Polynomial::one(&r), &polys(&["x"], &r), &dp()).unwrap());
        assert!(ideal_member(&Polynomial::zero(&r), &gens, &dp()).unwrap());
    }

    #[test]
    fn quotient_basis_examples() {
        let r = ring(&["x", "y"], BaseKind::Rat);
        let g = buchberger(&r, &polys(&["x^2", "x*y", "y^3"], &r), &dp()).unwrap();
        let mons = |v: &[[u32; 2]]| v.iter().map(|e| Monomial::new(e.to_vec())).collect::<Vec<_>>();
        assert_eq!(quotient_basis(&g), QuotientBasis::Finite(mons(&[[0, 0], [1, 0], [0, 1], [0, 2]])));
        let g = buchberger(&r, &polys(&["x"], &r), &dp()).unwrap();
        assert_eq!(quotient_basis(&g), QuotientBasis::Infinite);
        let r1 = ring(&["x"], BaseKind::Rat);
        let g = buchberger(&r1, &polys(&["x^2"], &r1), &dp()).unwrap();
        assert_eq!(quotient_basis(&g), QuotientBasis::Finite(vec![Monomial::new(vec![0]), Monomial::new(vec![1])]));
        let g = buchberger(&r1, &polys(&["x", "x - 1"], &r1), &dp()).unwrap();
        assert!(g.is_unit_ideal());
        assert_eq!(quotient_basis(&g), QuotientBasis::Finite(vec![]));
    }

    #[test]
    fn jacobian_examples() {
        let r = ring(&["x"], BaseKind::Rat);
        assert_eq!(jacobian(&polys(&["x^2 - 2"], &r), &r), vec![polys(&["2*x"], &r)]);
        let r2 = ring(&["x", "y"], BaseKind::Rat);
        let j = jacobian(&polys(&["x^2 + y^2", "x*y"], &r2), &r2);
        assert_eq!(j, vec![polys(&["2*x", "y"], &r2), polys(&["2*y", "x"], &r2)]);
        let j = jacobian(&[], &r);
        assert_eq!(j.len(), 1);
        assert!(j[0].is_empty());
    }

    #[test]
    fn resource_limit_trips() {
        let r = ring(&["x", "y"], BaseKind::Rat);
        let limits = Limits { max_degree: 3, ..Limits::default() };
        let res = GroebnerBasis::compute(&r, &polys(&["x^5 - y"], &r), &dp(), limits);
        assert!(matches!(res, Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn lex_elimination() {
        let r = ring(&["x", "y"], BaseKind::Rat);
        let g = buchberger(&r, &polys(&["x - y^2", "y^3 - 1"], &r), &MonomialOrder::Lex).unwrap();
        assert_eq!(g.elements(), polys(&["x - y^2", "y^3 - 1"], &r).as_slice());
    }

    fn s_pairs_reduce(g: &GroebnerBasis) -> bool {
        let n = g.elements().len();
        (0..n).all(|i| (i + 1..n).all(|j| normal_form(&g.s_polynomial(i, j).unwrap(), g).unwrap().is_zero()))
    }

    fn arb_poly(r: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
        let base = r.base();
        proptest::collection::vec((-4i64..5, 0u32..4, 0u32..4), 1..5).prop_map(move |ts| {
            Polynomial::from_terms(&r, ts.into_iter().map(|(c, a, b)| (Monomial::new(vec![a, b]), base.from_i64(c))))
        })
    }

    fn gens_strategy(base: BaseKind) -> impl Strategy<Value = (Vec<Polynomial>, Polynomial, Polynomial)> {
        let r = ring(&["x", "y"], base);
        (
            proptest::collection::vec(arb_poly(r.clone()), 1..4),
            arb_poly(r.clone()),
            arb_poly(r),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn groebner_invariants_q((gens, f, h) in gens_strategy(BaseKind::Rat)) {
            check_invariants(&gens, &f, &h)?;
        }

        #[test]
        fn groebner_invariants_f3((gens, f, h) in gens_strategy(BaseKind::Fp(3))) {
            check_invariants(&gens, &f, &h)?;
        }
    }

    fn check_invariants(gens: &[Polynomial], f: &Polynomial, h: &Polynomial) -> std::result::Result<(), TestCaseError> {
        let r = f.ring().clone();
        let g = match buchberger(&r, gens, &dp()) {
            Ok(g) => g,
            Err(Error::ResourceLimit(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(s_pairs_reduce(&g));
        // every generator and every combination lies in the ideal
        for x in gens {
            prop_assert!(normal_form(x, &g).unwrap().is_zero());
        }
        let comb = &(&gens[0] * f) + &(&gens[gens.len() - 1] * h);
        prop_assert!(normal_form(&comb, &g).unwrap().is_zero());
        // idempotence and compatibility with differences
        let nf = normal_form(f, &g).unwrap();
        prop_assert_eq!(normal_form(&nf, &g).unwrap(), nf.clone());
        let shifted = &comb + f;
        prop_assert_eq!(normal_form(&shifted, &g).unwrap(), nf);
        // reduced: monic, and no term divisible by another element's leading monomial
        let lms = g.leading_monomials();
        for (k, e) in g.elements().iter().enumerate() {
            prop_assert!(e.leading_term(g.order()).unwrap().1.is_one());
            for (m, _) in e.terms() {
                for (l, lm) in lms.iter().enumerate() {
                    prop_assert!(l == k || !lm.divides(m));
                }
            }
        }
        Ok(())
    }
}
