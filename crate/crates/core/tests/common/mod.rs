//! Brute-force linear-algebra oracles shared by the integration tests. They
//! avoid the Gröbner engines entirely except where noted.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use beckdiff::exactnum::{BaseKind, Scalar};
use beckdiff::fpalg::AlgebraPresentation;
use beckdiff::modgb::FpModulePresentation;
use beckdiff::polyring::{normal_form, quotient_basis, GroebnerBasis, Monomial, Polynomial};

/// Row-echelon span of vectors over a field, kept reduced against its pivots.
pub struct Span {
    base: BaseKind,
    /// pivot column → normalized row (pivot entry 1)
    rows: Vec<(usize, Vec<Scalar>)>,
    width: usize,
}

impl Span {
    pub fn new(base: BaseKind, width: usize) -> Self {
        Span { base, rows: Vec::new(), width }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.width);
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].inv().expect("field element");
        let v: Vec<Scalar> = v.iter().map(|x| x.mul(&inv)).collect();
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x = x.sub(&c.mul(r));
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: Vec<Scalar>) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![self.base.zero(); self.width]
    }
}

/// All monomials in `n` variables of total degree at most `d`.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == n {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Macaulay matrix of an ideal truncated at degree `d`: the span of
/// `m·g` over monomials `m` and generators `g` with `deg(m·g) ≤ d`.
pub struct Macaulay {
    pub degree: u32,
    index: HashMap<Monomial, usize>,
    pub span: Span,
}

impl Macaulay {
    pub fn new(gens: &[Polynomial], nvars: usize, base: BaseKind, d: u32) -> Self {
        let mons = monomials_up_to(nvars, d);
        let index: HashMap<Monomial, usize> = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = Span::new(base, mons.len());
        for g in gens {
            let Some(gd) = g.degree() else { continue };
            if gd > d {
                continue;
            }
            for m in monomials_up_to(nvars, d - gd) {
                let mut v = span.zero_vec();
                for (t, c) in g.terms() {
                    v[index[&t.mul(&m)]] = c.clone();
                }
                span.insert(v);
            }
        }
        Macaulay { degree: d, index, span }
    }

    pub fn vector(&self, f: &Polynomial) -> Option<Vec<Scalar>> {
        let mut v = self.span.zero_vec();
        for (t, c) in f.terms() {
            v[*self.index.get(t)?] = c.clone();
        }
        Some(v)
    }

    /// Sound membership: a `true` answer is a proof that `f ∈ I`.
    pub fn contains(&self, f: &Polynomial) -> bool {
        self.vector(f).is_some_and(|v| self.span.contains(v))
    }

    /// Dimension of the image of `k[x]_{≤e}` in `k[x]_{≤d} / M_d`. Non-increasing
    /// in `d`; equals `dim k[x]/I` once `d` is large and `e` covers a basis.
    pub fn image_dim(&self, nvars: usize, e: u32) -> usize {
        let mut s = Span::new(self.span.base, self.span.width);
        for (_, row) in &self.span.rows {
            s.insert(row.clone());
        }
        let before = s.rank();
        for m in monomials_up_to(nvars, e) {
            let mut v = s.zero_vec();
            v[self.index[&m]] = s.base.one();
            s.insert(v);
        }
        s.rank() - before
    }
}

/// `B^n / ⟨relations⟩` as an explicit vector space over the standard monomial
/// basis of `B`; returns its dimension. Products inside `B` are reduced with
/// the ambient algebra's normal form (the ideal engine, not the module engine).
pub fn module_quotient_dim(p: &FpModulePresentation) -> usize {
    let b: &Arc<AlgebraPresentation> = p.ambient();
    let qb = b.quotient_basis().unwrap();
    let basis = qb.finite().expect("finite ambient").to_vec();
    let gb = b.groebner().unwrap();
    let d = basis.len();
    let n = p.rank();
    let pos: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut span = Span::new(b.base(), n * d);
    for r in p.relations() {
        for s in &basis {
            let mut v = span.zero_vec();
            for (i, c) in r.coords().iter().enumerate() {
                let prod = c.mul_term(s, &b.base().one());
                let nf = normal_form(&prod, gb).unwrap();
                for (m, x) in nf.terms() {
                    v[i * d + pos[m]] = x.clone();
                }
            }
            span.insert(v);
        }
    }
    n * d - span.rank()
}

pub fn s_pairs_reduce(g: &GroebnerBasis) -> bool {
    let n = g.elements().len();
    (0..n).all(|i| (i + 1..n).all(|j| normal_form(&g.s_polynomial(i, j).unwrap(), g).unwrap().is_zero()))
}

/// Dimension check: the image of low-degree monomials in the truncated
/// quotient never drops below `|standard monomials|` and reaches it.
pub fn check_dimension(gens: &[Polynomial], g: &GroebnerBasis, max_d: u32) -> Result<(), String> {
    let r = g.ring();
    let qb = quotient_basis(g);
    let Some(std) = qb.finite() else { return Ok(()) };
    let d = std.len();
    let e = std.iter().map(Monomial::degree).max().unwrap_or(0);
    let gdeg = gens.iter().filter_map(Polynomial::degree).max().unwrap_or(0);
    let start = e.max(gdeg);
    let mut last = usize::MAX;
    for deg in start..=max_d.max(start) {
        let m = Macaulay::new(gens, r.nvars(), r.base(), deg);
        let img = m.image_dim(r.nvars(), e);
        if img < d {
            return Err(format!("degree {deg}: quotient image {img} below basis size {d}"));
        }
        last = img;
        if img == d {
            return Ok(());
        }
    }
    Err(format!("truncated quotient stuck at {last}, basis size {d}"))
}
