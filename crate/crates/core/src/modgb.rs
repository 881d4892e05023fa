//! Finitely presented modules over `B = k[x]/I`.
//!
//! Submodule questions are answered in the free module `k[x]^n` after
//! adjoining `g·eᵢ` for every element `g` of the reduced basis of `I`.
//! The module order is position-over-term (lower index larger) with the
//! DegRevLex inner order.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpalg::AlgebraPresentation;
use crate::polyring::engine::{Elem, Engine, SVec, Term};
use crate::polyring::{
    elem_of, from_svec, jacobian, normal_form, parse_poly, GroebnerBasis, Limits, Monomial, MonomialOrder, PolyRing,
    Polynomial,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModuleElement {
    coords: Vec<Polynomial>,
}

impl FreeModuleElement {
    pub fn new(coords: Vec<Polynomial>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::RankMismatch);
        }
        let ring = coords[0].ring();
        if coords.iter().any(|c| c.ring() != ring) {
            return Err(Error::MixedContext);
        }
        Ok(FreeModuleElement { coords })
    }

    pub fn zero(ring: &Arc<PolyRing>, rank: usize) -> Self {
        FreeModuleElement { coords: vec![Polynomial::zero(ring); rank] }
    }

    /// Standard basis vector `e_i`.
    pub fn unit(ring: &Arc<PolyRing>, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.coords[i] = Polynomial::one(ring);
        v
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.coords[0].ring()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, f: &Polynomial) -> Self {
        FreeModuleElement { coords: self.coords.iter().map(|c| c * f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        FreeModuleElement { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FreeModuleElement { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    fn to_svec(&self, engine: &Engine) -> SVec {
        let mut terms = Vec::new();
        for (pos, c) in self.coords.iter().enumerate() {
            for (m, x) in c.terms() {
                terms.push((Term { pos, mono: m.clone() }, x.clone()));
            }
        }
        engine.normalize(terms)
    }

    fn from_svec(v: &SVec, ring: &Arc<PolyRing>, rank: usize) -> Self {
        let mut buckets: Vec<Vec<(Monomial, crate::exactnum::Scalar)>> = vec![Vec::new(); rank];
        for (t, c) in v {
            buckets[t.pos].push((t.mono.clone(), c.clone()));
        }
        FreeModuleElement { coords: buckets.into_iter().map(|b| Polynomial::from_terms(ring, b)).collect() }
    }
}

impl fmt::Display for FreeModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn pot() -> MonomialOrder {
    MonomialOrder::PositionOverTerm(Box::new(MonomialOrder::DegRevLex))
}

/// Reduced Gröbner basis of a submodule of `k[x]^rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleBasis {
    ring: Arc<PolyRing>,
    rank: usize,
    order: MonomialOrder,
    elements: Vec<FreeModuleElement>,
}

impl ModuleBasis {
    pub fn elements(&self) -> &[FreeModuleElement] {
        &self.elements
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Leading `(position, monomial)` of every basis element.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        let engine = Engine::new(&self.order, Limits::default(), self.rank);
        self.elements
            .iter()
            .map(|e| {
                let v = e.to_svec(&engine);
                let t = &v.last().expect("nonzero").0;
                (t.pos, t.mono.clone())
            })
            .collect()
    }

    fn elems(&self, engine: &Engine) -> Vec<Elem> {
        self.elements.iter().map(|e| Elem { v: e.to_svec(engine), cof: Vec::new(), sugar: 0 }).collect()
    }
}

fn check_gens(ring: &Arc<PolyRing>, rank: usize, gens: &[FreeModuleElement]) -> Result<()> {
    if !ring.base().is_field() {
        return Err(Error::NonFieldBase);
    }
    for g in gens {
        if g.rank() != rank {
            return Err(Error::RankMismatch);
        }
        if g.ring().as_ref() != ring.as_ref() {
            return Err(Error::MixedContext);
        }
    }
    Ok(())
}

pub fn module_buchberger(
    ring: &Arc<PolyRing>,
    rank: usize,
    gens: &[FreeModuleElement],
    order: &MonomialOrder,
    limits: Limits,
) -> Result<ModuleBasis> {
    check_gens(ring, rank, gens)?;
    let engine = Engine::new(order, limits, rank);
    let elems: Vec<Elem> = gens
        .iter()
        .map(|g| {
            let v = g.to_svec(&engine);
            let sugar = g.coords.iter().filter_map(Polynomial::degree).max().unwrap_or(0);
            Elem { v, cof: Vec::new(), sugar }
        })
        .collect();
    let basis = engine.buchberger(elems)?;
    Ok(ModuleBasis {
        ring: ring.clone(),
        rank,
        order: order.clone(),
        elements: basis.iter().map(|e| FreeModuleElement::from_svec(&e.v, ring, rank)).collect(),
    })
}

pub fn module_normal_form(v: &FreeModuleElement, basis: &ModuleBasis) -> Result<FreeModuleElement> {
    if v.rank() != basis.rank {
        return Err(Error::RankMismatch);
    }
    if v.ring().as_ref() != basis.ring.as_ref() {
        return Err(Error::MixedContext);
    }
    let engine = Engine::new(&basis.order, Limits::default(), basis.rank);
    let elems = basis.elems(&engine);
    let refs: Vec<&Elem> = elems.iter().collect();
    let r = engine.reduce(Elem { v: v.to_svec(&engine), cof: Vec::new(), sugar: 0 }, &refs)?;
    Ok(FreeModuleElement::from_svec(&r.v, &basis.ring, basis.rank))
}

/// A module over an algebra `B`, given by generators and relation vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpModulePresentation {
    ambient: Arc<AlgebraPresentation>,
    generators: Vec<String>,
    relations: Vec<FreeModuleElement>,
}

/// JSON shape: `{ "generators": [...], "relations": [[...], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleJson {
    pub generators: Vec<String>,
    pub relations: Vec<Vec<String>>,
}

impl FpModulePresentation {
    pub fn new(ambient: Arc<AlgebraPresentation>, generators: Vec<String>, relations: Vec<FreeModuleElement>) -> Result<Self> {
        for r in &relations {
            if r.rank() != generators.len() {
                return Err(Error::RankMismatch);
            }
            if r.ring().as_ref() != ambient.ring().as_ref() {
                return Err(Error::MixedContext);
            }
        }
        Ok(FpModulePresentation { ambient, generators, relations })
    }

    pub fn from_json(ambient: Arc<AlgebraPresentation>, j: &ModuleJson) -> Result<Self> {
        let ring = ambient.ring().clone();
        let relations = j
            .relations
            .iter()
            .map(|row| {
                if row.len() != j.generators.len() {
                    return Err(Error::RankMismatch);
                }
                let coords = row.iter().map(|t| parse_poly(t, &ring)).collect::<Result<Vec<_>>>()?;
                FreeModuleElement::new(coords)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, j.generators.clone(), relations)
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            generators: self.generators.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| r.coords().iter().map(|c| c.to_string()).collect())
                .collect(),
        }
    }

    pub fn ambient(&self) -> &Arc<AlgebraPresentation> {
        &self.ambient
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[FreeModuleElement] {
        &self.relations
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Relation vectors together with `g·eᵢ` for the ideal basis elements `g`.
    fn all_generators(&self) -> Result<Vec<FreeModuleElement>> {
        let ring = self.ambient.ring();
        let gb = self.ambient.groebner()?;
        let n = self.rank();
        let mut out = self.relations.clone();
        for g in gb.elements() {
            for i in 0..n {
                out.push(FreeModuleElement::unit(ring, n, i).scale(g));
            }
        }
        Ok(out)
    }

    /// Gröbner basis of the full submodule `(relations) + I·k[x]^n`.
    pub fn submodule_basis(&self, limits: Limits) -> Result<ModuleBasis> {
        module_buchberger(self.ambient.ring(), self.rank(), &self.all_generators()?, &pot(), limits)
    }

    /// Standard `(position, monomial)` pairs: a k-basis of the module when `B`
    /// is finite dimensional.
    pub fn standard_terms(&self, limits: Limits) -> Result<Vec<(usize, Monomial)>> {
        let qb = self.ambient.quotient_basis()?;
        let mons = qb.finite().ok_or(Error::InfiniteDimensional)?.to_vec();
        let basis = self.submodule_basis(limits)?;
        let lts = basis.leading_terms();
        let mut out = Vec::new();
        for pos in 0..self.rank() {
            for m in &mons {
                if !lts.iter().any(|(p, l)| *p == pos && l.divides(m)) {
                    out.push((pos, m.clone()));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FpModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generators [{}]", self.generators.join(", "))?;
        for r in &self.relations {
            let terms: Vec<String> = r
                .coords()
                .iter()
                .zip(&self.generators)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, g)| if c.num_terms() > 1 { format!("({c})*{g}") } else { format!("{c}*{g}") })
                .collect();
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            write!(f, "\n  relation {body} = 0")?;
        }
        Ok(())
    }
}

/// Evidence for a zero-module verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroCertificate {
    /// `combinations[i][j]` is the coefficient of relation `j` in an
    /// expression of `eᵢ` modulo `I·k[x]^n`.
    Zero { combinations: Vec<Vec<Polynomial>> },
    /// Generator `generator` survives with the given nonzero normal form.
    Nonzero { generator: usize, remainder: FreeModuleElement },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroTest {
    pub is_zero: bool,
    pub certificate: ZeroCertificate,
}

/// Decides whether the presented module is zero, with a certificate.
pub fn is_zero_module(p: &FpModulePresentation) -> Result<ZeroTest> {
    is_zero_module_with_limits(p, Limits::default())
}

pub fn is_zero_module_with_limits(p: &FpModulePresentation, limits: Limits) -> Result<ZeroTest> {
    let ring = p.ambient.ring().clone();
    let gb: &GroebnerBasis = p.ambient.groebner()?;
    let n = p.rank();
    let m = p.relations.len();
    if n == 0 {
        return Ok(ZeroTest { is_zero: true, certificate: ZeroCertificate::Zero { combinations: Vec::new() } });
    }
    let order = pot();
    let ideal_engine = gb.engine(limits);
    let ideal_elems = gb.elems(&ideal_engine);
    let mut engine = Engine::new(&order, limits, n);
    engine.cof_ideal = Some(&ideal_elems);

    let unit_cof = |j: usize| -> Vec<SVec> {
        (0..m)
            .map(|k| if k == j { to_poly_svec(&Polynomial::one(&ring), &engine) } else { Vec::new() })
            .collect()
    };
    let mut gens = Vec::new();
    for (j, r) in p.relations.iter().enumerate() {
        let sugar = r.coords.iter().filter_map(Polynomial::degree).max().unwrap_or(0);
        gens.push(Elem { v: r.to_svec(&engine), cof: unit_cof(j), sugar });
    }
    for g in gb.elements() {
        for i in 0..n {
            let v = FreeModuleElement::unit(&ring, n, i).scale(g);
            gens.push(Elem { v: v.to_svec(&engine), cof: vec![Vec::new(); m], sugar: g.degree().unwrap_or(0) });
        }
    }
    let basis = engine.buchberger(gens)?;
    let refs: Vec<&Elem> = basis.iter().collect();

    let mut combinations = Vec::with_capacity(n);
    for i in 0..n {
        let e = FreeModuleElement::unit(&ring, n, i);
        let start = Elem { v: e.to_svec(&engine), cof: vec![Vec::new(); m], sugar: 0 };
        let r = engine.reduce(start, &refs)?;
        if !r.is_zero() {
            return Ok(ZeroTest {
                is_zero: false,
                certificate: ZeroCertificate::Nonzero {
                    generator: i,
                    remainder: FreeModuleElement::from_svec(&r.v, &ring, n),
                },
            });
        }
        // e_i - 0 ≡ -Σ cof_j r_j
        combinations.push(r.cof.iter().map(|c| from_svec(c, &ring).neg()).collect());
    }
    Ok(ZeroTest { is_zero: true, certificate: ZeroCertificate::Zero { combinations } })
}

fn to_poly_svec(p: &Polynomial, engine: &Engine) -> SVec {
    elem_of(p, engine).v
}

/// Re-checks a certificate by direct multiplication and ideal reduction,
/// without touching the module Gröbner basis.
pub fn verify_zero_certificate(p: &FpModulePresentation, cert: &ZeroCertificate) -> Result<bool> {
    let gb = p.ambient.groebner()?;
    let ring = p.ambient.ring();
    let n = p.rank();
    match cert {
        ZeroCertificate::Zero { combinations } => {
            if combinations.len() != n {
                return Ok(false);
            }
            for (i, combo) in combinations.iter().enumerate() {
                if combo.len() != p.relations.len() {
                    return Ok(false);
                }
                let mut acc = FreeModuleElement::unit(ring, n, i).scale(&Polynomial::one(ring).neg());
                for (b, r) in combo.iter().zip(&p.relations) {
                    acc = acc.add(&r.scale(b));
                }
                for c in acc.coords() {
                    if !normal_form(c, gb)?.is_zero() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        ZeroCertificate::Nonzero { generator, remainder } => {
            // e_i − remainder must lie in the submodule and the remainder must be nonzero
            if *generator >= n || remainder.is_zero() {
                return Ok(false);
            }
            let basis = p.submodule_basis(Limits::default())?;
            let diff = FreeModuleElement::unit(ring, n, *generator).sub(remainder);
            Ok(module_normal_form(&diff, &basis)?.is_zero() && module_normal_form(remainder, &basis)? == *remainder)
        }
    }
}

/// Packages a matrix with `n` rows as the cokernel presentation with
/// generators `dx₁..dxₙ` and one relation per column.
pub fn cokernel_presentation(j: &[Vec<Polynomial>], ambient: Arc<AlgebraPresentation>) -> Result<FpModulePresentation> {
    let n = ambient.generators().len();
    if j.len() != n {
        return Err(Error::ShapeMismatch(format!("matrix has {} rows, algebra has {n} generators", j.len())));
    }
    let cols = j.first().map_or(0, Vec::len);
    if j.iter().any(|row| row.len() != cols) {
        return Err(Error::ShapeMismatch("ragged matrix".into()));
    }
    let generators: Vec<String> = ambient.generators().iter().map(|x| format!("d{x}")).collect();
    let relations = (0..cols)
        .map(|c| FreeModuleElement::new(j.iter().map(|row| row[c].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    FpModulePresentation::new(ambient, generators, relations)
}

/// Jacobian presentation of `Ω_{B/A}`.
pub fn jacobian_presentation(ambient: &Arc<AlgebraPresentation>) -> Result<FpModulePresentation> {
    let j = jacobian(ambient.relations(), ambient.ring());
    cokernel_presentation(&j, ambient.clone())
}
