use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{AlgebraPresentation, FiniteRingTable, RingMap};
use crate::error::{Error, Result};
use crate::exactnum::{BaseKind, Scalar};
use crate::polyring::{normal_form, Limits, Monomial, Polynomial};

/// Largest table `to_finite_table` will build; axiom checks are cubic in size.
pub const MAX_TABLE_SIZE: usize = 1024;

/// A zero-dimensional 𝔽ₚ-algebra as a table, remembering the standard
/// monomial basis so polynomials can be converted to element indices.
/// Element `Σ cₖ·basis[k]` has index `Σ cₖ·pᵏ`.
#[derive(Debug, Clone)]
pub struct QuotientTable {
    presentation: Arc<AlgebraPresentation>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    p: u32,
    table: Arc<FiniteRingTable>,
}

impl QuotientTable {
    pub fn presentation(&self) -> &Arc<AlgebraPresentation> {
        &self.presentation
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn table(&self) -> &Arc<FiniteRingTable> {
        &self.table
    }

    fn encode(&self, coords: &[u32]) -> usize {
        coords.iter().rev().fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    fn decode(&self, mut e: usize) -> Vec<u32> {
        (0..self.basis.len())
            .map(|_| {
                let c = (e % self.p as usize) as u32;
                e /= self.p as usize;
                c
            })
            .collect()
    }

    /// Element index of the class of `f`.
    pub fn element_of(&self, f: &Polynomial) -> Result<usize> {
        let nf = normal_form(f, self.presentation.groebner()?)?;
        let mut coords = vec![0u32; self.basis.len()];
        for (m, c) in nf.terms() {
            let Scalar::Fp { value, .. } = c else { return Err(Error::MixedContext) };
            coords[self.index[m]] = *value;
        }
        Ok(self.encode(&coords))
    }

    /// Canonical representative of element `e`.
    pub fn polynomial_of(&self, e: usize) -> Polynomial {
        let ring = self.presentation.ring();
        let base = ring.base();
        Polynomial::from_terms(
            ring,
            self.decode(e)
                .into_iter()
                .zip(&self.basis)
                .map(|(c, m)| (m.clone(), base.from_i64(c as i64))),
        )
    }

    /// Images of the generators, i.e. the identity hom `B → B_table`.
    pub fn generator_images(&self) -> Vec<usize> {
        let ring = self.presentation.ring();
        (0..ring.nvars())
            .map(|i| self.element_of(&Polynomial::var(ring, i)).expect("generator reduces"))
            .collect()
    }
}

pub fn to_finite_table(p: &Arc<AlgebraPresentation>) -> Result<QuotientTable> {
    let prime = match p.base() {
        BaseKind::Fp(q) => q,
        BaseKind::Rat => return Err(Error::NonFiniteBase),
        BaseKind::Int => return Err(Error::NonFieldBase),
    };
    let basis = p.quotient_basis()?.finite().ok_or(Error::InfiniteDimensional)?.to_vec();
    let d = basis.len();
    let size = (prime as u128).checked_pow(d as u32).filter(|&s| s <= MAX_TABLE_SIZE as u128).ok_or_else(|| {
        Error::ResourceLimit(format!("table of size {prime}^{d} exceeds {MAX_TABLE_SIZE} elements"))
    })? as usize;
    let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let mut qt = QuotientTable { presentation: p.clone(), basis, index, p: prime, table: Arc::new(placeholder()) };

    // mult[a][b] = coordinates of basis[a]·basis[b]
    let ring = p.ring();
    let gb = p.groebner()?;
    let mut mult = vec![vec![vec![0u32; d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            let prod = Polynomial::term(ring, qt.basis[a].mul(&qt.basis[b]), p.base().one());
            for (m, c) in normal_form(&prod, gb)?.terms() {
                if let Scalar::Fp { value, .. } = c {
                    mult[a][b][qt.index[m]] = *value;
                }
            }
        }
    }
    let pm = prime as u64;
    let vecs: Vec<Vec<u32>> = (0..size).map(|e| qt.decode(e)).collect();
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for u in &vecs {
        // left multiplication by u as a d×d matrix (column b = u·basis[b])
        let mut lu = vec![vec![0u64; d]; d];
        for (a, &ua) in u.iter().enumerate() {
            if ua == 0 {
                continue;
            }
            for b in 0..d {
                for k in 0..d {
                    lu[b][k] = (lu[b][k] + ua as u64 * mult[a][b][k] as u64) % pm;
                }
            }
        }
        for v in &vecs {
            let s: Vec<u32> = u.iter().zip(v).map(|(&x, &y)| ((x as u64 + y as u64) % pm) as u32).collect();
            add.push(qt.encode(&s) as u32);
            let mut w = vec![0u64; d];
            for (b, &vb) in v.iter().enumerate() {
                if vb == 0 {
                    continue;
                }
                for k in 0..d {
                    w[k] = (w[k] + vb as u64 * lu[b][k]) % pm;
                }
            }
            let w: Vec<u32> = w.into_iter().map(|x| x as u32).collect();
            mul.push(qt.encode(&w) as u32);
        }
    }
    let one = if d == 0 { 0 } else { qt.element_of(&Polynomial::one(ring))? };
    let labels = (0..size).map(|e| qt.polynomial_of(e).to_string()).collect();
    qt.table = Arc::new(FiniteRingTable::new(size, add, mul, 0, one, p.base(), Some(labels))?);
    Ok(qt)
}

fn placeholder() -> FiniteRingTable {
    FiniteRingTable::integers_mod(1, BaseKind::Int).expect("zero ring")
}

/// An `A`-algebra hom from a presented algebra into a finite table, given by
/// generator images. Relations are checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraHom {
    domain: Arc<AlgebraPresentation>,
    codomain: Arc<FiniteRingTable>,
    images: Vec<usize>,
}

impl AlgebraHom {
    pub fn new(domain: Arc<AlgebraPresentation>, codomain: Arc<FiniteRingTable>, images: Vec<usize>) -> Result<Self> {
        if !codomain.accepts_base(domain.base()) {
            return Err(Error::MixedContext);
        }
        if images.len() != domain.generators().len() || images.iter().any(|&x| x >= codomain.size()) {
            return Err(Error::NotARingHom("one image per generator required".into()));
        }
        let h = AlgebraHom { domain, codomain, images };
        for f in h.domain.relations() {
            if h.apply(f)? != h.codomain.zero() {
                return Err(Error::NotARingHom(format!("relation {f} does not vanish")));
            }
        }
        Ok(h)
    }

    pub fn domain(&self) -> &Arc<AlgebraPresentation> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteRingTable> {
        &self.codomain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of a polynomial over the domain ring.
    pub fn apply(&self, f: &Polynomial) -> Result<usize> {
        let t = &self.codomain;
        for (_, c) in f.terms() {
            t.scalar(c)?;
        }
        Ok(f.eval(
            &self.images,
            t.zero(),
            |c| t.scalar(c).expect("checked above"),
            |a, b| t.add(*a, *b),
            |a, b| t.mul(*a, *b),
        ))
    }

    /// `q ∘ self`.
    pub fn then(&self, q: &RingMap) -> Result<AlgebraHom> {
        if q.source() != &self.codomain {
            return Err(Error::MixedContext);
        }
        Ok(AlgebraHom {
            domain: self.domain.clone(),
            codomain: q.target().clone(),
            images: self.images.iter().map(|&x| q.apply(x)).collect(),
        })
    }
}

/// Materialized, sorted, duplicate-free `Hom(B, D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSet {
    domain: Arc<AlgebraPresentation>,
    codomain: Arc<FiniteRingTable>,
    homs: Vec<Vec<usize>>,
}

impl HomSet {
    pub fn domain(&self) -> &Arc<AlgebraPresentation> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteRingTable> {
        &self.codomain
    }

    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    /// Generator images of the `i`-th hom.
    pub fn images(&self, i: usize) -> &[usize] {
        &self.homs[i]
    }

    pub fn all_images(&self) -> &[Vec<usize>] {
        &self.homs
    }

    pub fn get(&self, i: usize) -> AlgebraHom {
        AlgebraHom { domain: self.domain.clone(), codomain: self.codomain.clone(), images: self.homs[i].clone() }
    }

    pub fn iter(&self) -> impl Iterator<Item = AlgebraHom> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub fn index_of(&self, images: &[usize]) -> Option<usize> {
        self.homs.binary_search_by(|h| h.as_slice().cmp(images)).ok()
    }
}

/// A relation compiled for fast evaluation in one table.
struct Compiled {
    terms: Vec<(usize, Vec<u32>)>,
    /// Relation can be checked once generators `0..=last` are assigned.
    last: Option<usize>,
}

pub fn enumerate_homs(b: &Arc<AlgebraPresentation>, d: &Arc<FiniteRingTable>) -> Result<HomSet> {
    enumerate_homs_with_limits(b, d, Limits::default())
}

pub fn enumerate_homs_with_limits(b: &Arc<AlgebraPresentation>, d: &Arc<FiniteRingTable>, limits: Limits) -> Result<HomSet> {
    if !d.accepts_base(b.base()) {
        return Err(Error::MixedContext);
    }
    let n = b.generators().len();
    let space = (d.size() as u128).checked_pow(n as u32);
    if space.is_none_or(|s| s > limits.max_homs as u128) {
        return Err(Error::ResourceLimit(format!(
            "{}^{} candidate assignments exceed the bound {}",
            d.size(),
            n,
            limits.max_homs
        )));
    }
    let mut compiled = Vec::new();
    for f in b.relations() {
        let mut terms = Vec::new();
        for (m, c) in f.terms() {
            terms.push((d.scalar(c)?, m.exponents().to_vec()));
        }
        let last = (0..n).rev().find(|&i| f.terms().any(|(m, _)| m.exponents()[i] > 0));
        compiled.push(Compiled { terms, last });
    }
    let mut by_level: Vec<Vec<&Compiled>> = vec![Vec::new(); n];
    for c in &compiled {
        match c.last {
            Some(i) => by_level[i].push(c),
            None => {
                if eval(d, c, &[]) != d.zero() {
                    return Ok(HomSet { domain: b.clone(), codomain: d.clone(), homs: Vec::new() });
                }
            }
        }
    }
    let homs = if n == 0 {
        vec![Vec::new()]
    } else {
        (0..d.size())
            .into_par_iter()
            .map(|v0| {
                let mut out = Vec::new();
                let mut assign = vec![v0];
                if by_level[0].iter().all(|c| eval(d, c, &assign) == d.zero()) {
                    dfs(d, &by_level, &mut assign, n, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    Ok(HomSet { domain: b.clone(), codomain: d.clone(), homs })
}

fn eval(d: &FiniteRingTable, c: &Compiled, assign: &[usize]) -> usize {
    let mut acc = d.zero();
    for (coef, ex) in &c.terms {
        let mut t = *coef;
        for (i, &e) in ex.iter().enumerate() {
            if e > 0 {
                t = d.mul(t, d.pow(assign[i], e));
            }
        }
        acc = d.add(acc, t);
    }
    acc
}

fn dfs(d: &FiniteRingTable, by_level: &[Vec<&Compiled>], assign: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
    let level = assign.len();
    if level == n {
        out.push(assign.clone());
        return;
    }
    for v in 0..d.size() {
        assign.push(v);
        if by_level[level].iter().all(|c| eval(d, c, assign) == d.zero()) {
            dfs(d, by_level, assign, n, out);
        }
        assign.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpalg::{find_ring_isomorphism, search_ring_homs};

    fn alg(base: BaseKind, gens: &[&str], rels: &[&str]) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::parse(base, gens, rels).unwrap())
    }

    fn f2() -> Arc<FiniteRingTable> {
        Arc::new(FiniteRingTable::integers_mod(2, BaseKind::Fp(2)).unwrap())
    }

    #[test]
    fn finite_table_examples() {
        let q = to_finite_table(&alg(BaseKind::Fp(2), &["x"], &["x^2"])).unwrap();
        assert_eq!(q.table().size(), 4);
        assert_eq!(q.table().labels().unwrap(), ["0", "1", "x", "x + 1"]);
        assert_eq!(q.table().mul(2, 2), 0);

        let q = to_finite_table(&alg(BaseKind::Fp(3), &[], &[])).unwrap();
        assert_eq!(q.table().size(), 3);

        let q = to_finite_table(&alg(BaseKind::Fp(2), &["x"], &["x^2 + x"])).unwrap();
        let prod = {
            // F2 × F2, index a + 2b
            let n = 4;
            let add = (0..n * n).map(|k| ((k / n) ^ (k % n)) as u32).collect();
            let mul = (0..n * n).map(|k| ((k / n) & (k % n)) as u32).collect();
            FiniteRingTable::new(4, add, mul, 0, 3, BaseKind::Fp(2), None).unwrap()
        };
        assert!(find_ring_isomorphism(q.table(), &prod).is_some());

        assert!(matches!(to_finite_table(&alg(BaseKind::Fp(2), &["x"], &[])), Err(Error::InfiniteDimensional)));
        assert!(matches!(to_finite_table(&alg(BaseKind::Rat, &["x"], &["x^2"])), Err(Error::NonFiniteBase)));
        // unit ideal: the zero ring
        let q = to_finite_table(&alg(BaseKind::Fp(5), &["x"], &["x", "x - 1"])).unwrap();
        assert_eq!(q.table().size(), 1);
    }

    #[test]
    fn element_round_trip() {
        let q = to_finite_table(&alg(BaseKind::Fp(3), &["x", "y"], &["x^2", "y^2 - x", "x*y"])).unwrap();
        for e in 0..q.table().size() {
            assert_eq!(q.element_of(&q.polynomial_of(e)).unwrap(), e);
        }
    }

    #[test]
    fn hom_examples() {
        let h = enumerate_homs(&alg(BaseKind::Fp(2), &["x"], &["x^2"]), &f2()).unwrap();
        assert_eq!(h.all_images(), [vec![0]]);
        let h = enumerate_homs(&alg(BaseKind::Fp(2), &[], &[]), &f2()).unwrap();
        assert_eq!(h.len(), 1);
        let h = enumerate_homs(&alg(BaseKind::Fp(2), &["x"], &["x^2 + x"]), &f2()).unwrap();
        assert_eq!(h.all_images(), [vec![0], vec![1]]);
        // base Z into Z/4
        let z4 = Arc::new(FiniteRingTable::integers_mod(4, BaseKind::Int).unwrap());
        let h = enumerate_homs(&alg(BaseKind::Int, &["t"], &["t^2 - 1"]), &z4).unwrap();
        assert_eq!(h.all_images(), [vec![1], vec![3]]);
        let h = enumerate_homs(&alg(BaseKind::Int, &[], &["2"]), &z4).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn resource_limit() {
        let t = to_finite_table(&alg(BaseKind::Fp(2), &["x"], &["x^4"])).unwrap();
        let b = alg(BaseKind::Fp(2), &["a", "b", "c"], &[]);
        let lim = Limits { max_homs: 1000, ..Limits::default() };
        assert!(matches!(enumerate_homs_with_limits(&b, t.table(), lim), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn homs_match_table_search() {
        let cases = [
            (BaseKind::Fp(2), vec!["x"], vec!["x^2"]),
            (BaseKind::Fp(2), vec!["x"], vec!["x^2 + x"]),
            (BaseKind::Fp(3), vec!["x"], vec!["x^3 - x"]),
            (BaseKind::Fp(2), vec!["x", "y"], vec!["x^2", "y^2", "x*y"]),
        ];
        let targets: Vec<_> = cases.iter().map(|(b, g, r)| to_finite_table(&alg(*b, g, r)).unwrap()).collect();
        for (src, (b, g, r)) in targets.iter().zip(&cases) {
            let pres = alg(*b, g, r);
            for dst in &targets {
                if dst.table().base() != *b {
                    continue;
                }
                let all: Vec<usize> = (0..dst.table().size()).collect();
                let oracle = search_ring_homs(src.table(), dst.table(), &|_| all.clone(), usize::MAX);
                let homs = enumerate_homs(&pres, dst.table()).unwrap();
                assert_eq!(homs.len(), oracle.len(), "{r:?}");
            }
        }
    }

    #[test]
    fn post_composition_lands_in_homset() {
        let b = alg(BaseKind::Fp(2), &["t"], &["t^2"]);
        let d = to_finite_table(&alg(BaseKind::Fp(2), &["x"], &["x^3"])).unwrap();
        let c = to_finite_table(&alg(BaseKind::Fp(2), &["x"], &["x^2"])).unwrap();
        let map = (0..d.table().size())
            .map(|e| c.element_of(&d.polynomial_of(e).map_into(c.presentation().ring(), |s| Ok(s.clone())).unwrap()).unwrap())
            .collect();
        let q = RingMap::new(d.table().clone(), c.table().clone(), map).unwrap();
        let hd = enumerate_homs(&b, d.table()).unwrap();
        let hc = enumerate_homs(&b, c.table()).unwrap();
        for h in hd.iter() {
            assert!(hc.index_of(h.then(&q).unwrap().images()).is_some());
        }
    }
}
