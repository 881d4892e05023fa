use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::fpalg::{to_finite_table, AlgebraPresentation, ModuleTable, QuotientTable, MAX_TABLE_SIZE};
use crate::modgb::{
    is_zero_module_with_limits, jacobian_presentation, module_normal_form, FpModulePresentation, FreeModuleElement,
    ModuleBasis, ZeroTest,
};
use crate::polyring::{normal_form, Limits, Monomial, Polynomial};

/// `Ω_{B/A}` presented as the cokernel of the Jacobian, with the universal
/// derivation `d`.
#[derive(Debug, Clone)]
pub struct KahlerModule {
    presentation: FpModulePresentation,
    basis: ModuleBasis,
    limits: Limits,
}

pub fn kahler(b: &Arc<AlgebraPresentation>) -> Result<KahlerModule> {
    kahler_with_limits(b, Limits::default())
}

pub fn kahler_with_limits(b: &Arc<AlgebraPresentation>, limits: Limits) -> Result<KahlerModule> {
    if !b.base().is_field() {
        return Err(Error::NonFieldBase);
    }
    let presentation = jacobian_presentation(b)?;
    let basis = presentation.submodule_basis(limits)?;
    Ok(KahlerModule { presentation, basis, limits })
}

impl KahlerModule {
    pub fn presentation(&self) -> &FpModulePresentation {
        &self.presentation
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        self.presentation.ambient()
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }

    pub fn zero_test(&self) -> Result<ZeroTest> {
        is_zero_module_with_limits(&self.presentation, self.limits)
    }

    /// Canonical representative of `v` in `Ω`.
    pub fn reduce(&self, v: &FreeModuleElement) -> Result<FreeModuleElement> {
        if self.rank() == 0 {
            return Ok(v.clone());
        }
        module_normal_form(v, &self.basis)
    }

    pub fn is_zero_element(&self, v: &FreeModuleElement) -> Result<bool> {
        Ok(self.rank() == 0 || self.reduce(v)?.is_zero())
    }

    /// `d g = Σ (∂g/∂xᵢ) dxᵢ`, reduced.
    pub fn d(&self, g: &Polynomial) -> Result<FreeModuleElement> {
        let ring = self.algebra().ring();
        if self.rank() == 0 {
            return Ok(FreeModuleElement::zero(ring, 0));
        }
        let v = FreeModuleElement::new((0..self.rank()).map(|i| g.derivative(i)).collect())?;
        self.reduce(&v)
    }
}

/// An element of `B ⊕ Ω` in symbolic form, multiplied by
/// `(b, m)(b', m') = (bb', b·m' + b'·m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymElem {
    pub b: Polynomial,
    pub m: FreeModuleElement,
}

impl SymElem {
    fn add(&self, o: &SymElem) -> SymElem {
        SymElem { b: &self.b + &o.b, m: self.m.add(&o.m) }
    }

    fn mul(&self, o: &SymElem) -> SymElem {
        SymElem { b: &self.b * &o.b, m: o.m.scale(&self.b).add(&self.m.scale(&o.b)) }
    }
}

/// Two distinct homs `B → B ⊕ Ω` over `B`: the unit section and the graph of `d`.
#[derive(Debug, Clone)]
pub struct LiftWitness {
    /// Generator images under the unit section `x ↦ (x, 0)`.
    pub s0: Vec<SymElem>,
    /// Generator images under `x ↦ (x, dx)`.
    pub s1: Vec<SymElem>,
    /// A generator whose images differ, i.e. `dxᵢ ≠ 0` in `Ω`.
    pub differing_generator: usize,
}

#[derive(Debug, Clone)]
pub struct UnramifiedReport {
    pub unramified: bool,
    pub zero_test: ZeroTest,
    pub witness: Option<LiftWitness>,
    /// Set when `Ω ≠ 0` but `B` is infinite dimensional.
    pub witness_error: Option<Error>,
}

pub fn unramified_check(b: &Arc<AlgebraPresentation>) -> Result<UnramifiedReport> {
    unramified_check_with_limits(b, Limits::default())
}

pub fn unramified_check_with_limits(b: &Arc<AlgebraPresentation>, limits: Limits) -> Result<UnramifiedReport> {
    let omega = kahler_with_limits(b, limits)?;
    let zero_test = omega.zero_test()?;
    if zero_test.is_zero {
        return Ok(UnramifiedReport { unramified: true, zero_test, witness: None, witness_error: None });
    }
    if b.dimension()?.is_none() {
        return Ok(UnramifiedReport {
            unramified: false,
            zero_test,
            witness: None,
            witness_error: Some(Error::WitnessUnavailable),
        });
    }
    let witness = build_witness(&omega)?;
    if !verify_witness(&omega, &witness)? {
        return Err(Error::NotARingHom("constructed lift failed verification".into()));
    }
    Ok(UnramifiedReport { unramified: false, zero_test, witness: Some(witness), witness_error: None })
}

fn build_witness(omega: &KahlerModule) -> Result<LiftWitness> {
    let ring = omega.algebra().ring();
    let n = omega.rank();
    let mut s0 = Vec::with_capacity(n);
    let mut s1 = Vec::with_capacity(n);
    let mut differing = None;
    for i in 0..n {
        let x = Polynomial::var(ring, i);
        let dx = omega.d(&x)?;
        if differing.is_none() && !dx.is_zero() {
            differing = Some(i);
        }
        s0.push(SymElem { b: x.clone(), m: FreeModuleElement::zero(ring, n) });
        s1.push(SymElem { b: x, m: dx });
    }
    let differing_generator = differing.ok_or(Error::WitnessUnavailable)?;
    Ok(LiftWitness { s0, s1, differing_generator })
}

/// Checks that both assignments kill every relation of `B` inside `B ⊕ Ω`,
/// that both project to the identity, and that they differ.
pub fn verify_witness(omega: &KahlerModule, w: &LiftWitness) -> Result<bool> {
    let b = omega.algebra();
    let ring = b.ring();
    let gb = b.groebner()?;
    let n = omega.rank();
    for s in [&w.s0, &w.s1] {
        if s.len() != n {
            return Ok(false);
        }
        for (i, img) in s.iter().enumerate() {
            if !normal_form(&(&img.b - &Polynomial::var(ring, i)), gb)?.is_zero() {
                return Ok(false);
            }
        }
        for f in b.relations() {
            let zero = SymElem { b: Polynomial::zero(ring), m: FreeModuleElement::zero(ring, n) };
            let v = f.eval(
                s,
                zero,
                |c| SymElem { b: Polynomial::constant(ring, c.clone()), m: FreeModuleElement::zero(ring, n) },
                SymElem::add,
                SymElem::mul,
            );
            if !normal_form(&v.b, gb)?.is_zero() || !omega.is_zero_element(&v.m)? {
                return Ok(false);
            }
        }
    }
    let i = w.differing_generator;
    if i >= n {
        return Ok(false);
    }
    Ok(!omega.is_zero_element(&w.s1[i].m.sub(&w.s0[i].m))?)
}

/// `Ω` of a finite 𝔽ₚ-algebra as a module table over `B`'s table, with `d`
/// tabulated on elements.
#[derive(Debug, Clone)]
pub struct KahlerTable {
    pub quotient: QuotientTable,
    pub omega: ModuleTable,
    /// `k`-basis of `Ω` as standard `(position, monomial)` pairs.
    pub terms: Vec<(usize, Monomial)>,
    /// `d[e]` is the element of `omega` equal to `d` of `B`-element `e`.
    pub d: Vec<usize>,
}

pub fn kahler_table(b: &Arc<AlgebraPresentation>) -> Result<KahlerTable> {
    let quotient = to_finite_table(b)?;
    let omega_sym = kahler(b)?;
    let bt = quotient.table().clone();
    let p = b.base().characteristic() as usize;
    let n = omega_sym.rank();
    let ring = b.ring();
    let terms = if n == 0 { Vec::new() } else { omega_sym.presentation().standard_terms(omega_sym.limits)? };
    let t = terms.len();
    let size = (p as u128)
        .checked_pow(t as u32)
        .filter(|&s| s <= MAX_TABLE_SIZE as u128)
        .ok_or_else(|| Error::ResourceLimit(format!("Ω table of size {p}^{t} exceeds {MAX_TABLE_SIZE}")))?
        as usize;
    let index: HashMap<(usize, Monomial), usize> = terms.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
    let encode = |v: &[usize]| v.iter().rev().fold(0usize, |acc, &c| acc * p + c);
    let decode = |mut e: usize| -> Vec<usize> {
        (0..t)
            .map(|_| {
                let c = e % p;
                e /= p;
                c
            })
            .collect()
    };
    let coords = |v: &FreeModuleElement| -> Vec<usize> {
        let mut out = vec![0usize; t];
        for (pos, c) in v.coords().iter().enumerate() {
            for (m, x) in c.terms() {
                if let Scalar::Fp { value, .. } = x {
                    out[index[&(pos, m.clone())]] = *value as usize;
                }
            }
        }
        out
    };
    // basis[a] · term[s] in Ω coordinates
    let bb = quotient.basis().to_vec();
    let mut act_basis = vec![vec![vec![0usize; t]; t]; bb.len()];
    for (a, mono) in bb.iter().enumerate() {
        for (s, (pos, m)) in terms.iter().enumerate() {
            let mut v = FreeModuleElement::zero(ring, n);
            let unit = FreeModuleElement::unit(ring, n, *pos);
            v = v.add(&unit.scale(&Polynomial::term(ring, mono.mul(m), b.base().one())));
            act_basis[a][s] = coords(&omega_sym.reduce(&v)?);
        }
    }
    let mut add = Vec::with_capacity(size * size);
    for x in 0..size {
        let u = decode(x);
        for y in 0..size {
            let w: Vec<usize> = u.iter().zip(decode(y)).map(|(a, b)| (a + b) % p).collect();
            add.push(encode(&w) as u32);
        }
    }
    let mut action = Vec::with_capacity(bt.size() * size);
    for e in 0..bt.size() {
        let be = quotient.polynomial_of(e);
        let bcoef: Vec<(usize, usize)> = be
            .terms()
            .filter_map(|(m, c)| match c {
                Scalar::Fp { value, .. } => Some((bb.iter().position(|x| x == m).expect("standard"), *value as usize)),
                _ => None,
            })
            .collect();
        for x in 0..size {
            let u = decode(x);
            let mut w = vec![0usize; t];
            for &(a, ca) in &bcoef {
                for (s, &us) in u.iter().enumerate() {
                    if us == 0 {
                        continue;
                    }
                    for k in 0..t {
                        w[k] = (w[k] + ca * us * act_basis[a][s][k]) % p;
                    }
                }
            }
            action.push(encode(&w) as u32);
        }
    }
    let labels = (0..size)
        .map(|x| {
            let u = decode(x);
            let mut v = FreeModuleElement::zero(ring, n);
            for (s, &c) in u.iter().enumerate() {
                if c > 0 {
                    let (pos, m) = &terms[s];
                    v = v.add(&FreeModuleElement::unit(ring, n, *pos).scale(&Polynomial::term(
                        ring,
                        m.clone(),
                        b.base().from_i64(c as i64),
                    )));
                }
            }
            format_omega(&v, omega_sym.presentation().generators())
        })
        .collect();
    let omega = ModuleTable::new(bt.clone(), size, add, 0, action, Some(labels))?;
    let d = (0..bt.size())
        .map(|e| {
            let de = omega_sym.d(&quotient.polynomial_of(e))?;
            Ok(if n == 0 { 0 } else { encode(&coords(&de)) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KahlerTable { quotient, omega, terms, d })
}

/// `Σ cᵢ·dxᵢ` in the input grammar; `0` for the zero element.
pub fn format_omega(v: &FreeModuleElement, generators: &[String]) -> String {
    let parts: Vec<String> = v
        .coords()
        .iter()
        .zip(generators)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, g)| if *c == Polynomial::one(c.ring()) { g.clone() } else if c.num_terms() > 1 { format!("({c})*{g}") } else { format!("{c}*{g}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::BaseKind;

    fn alg(base: BaseKind, gens: &[&str], rels: &[&str]) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::parse(base, gens, rels).unwrap())
    }

    #[test]
    fn golden_kahler() {
        let b = alg(BaseKind::Rat, &["x"], &["x^2"]);
        let om = kahler(&b).unwrap();
        assert_eq!(om.presentation().generators(), ["dx"]);
        assert_eq!(om.presentation().relations()[0].coords()[0].to_string(), "2*x");
        assert!(!om.zero_test().unwrap().is_zero);

        let om = kahler(&alg(BaseKind::Rat, &[], &[])).unwrap();
        assert_eq!(om.rank(), 0);
        assert!(om.zero_test().unwrap().is_zero);

        let om = kahler(&alg(BaseKind::Fp(5), &["x"], &["x^2 - 2"])).unwrap();
        assert!(om.zero_test().unwrap().is_zero);
        assert!(matches!(kahler(&alg(BaseKind::Int, &["x"], &[])), Err(Error::NonFieldBase)));
    }

    #[test]
    fn witness_for_dual_numbers() {
        let b = alg(BaseKind::Rat, &["x"], &["x^2"]);
        let r = unramified_check(&b).unwrap();
        assert!(!r.unramified);
        let w = r.witness.unwrap();
        assert_eq!(w.s1[0].m.coords()[0].to_string(), "1");
        assert_eq!(w.s0[0].m.coords()[0].to_string(), "0");
    }

    #[test]
    fn unramified_examples() {
        assert!(unramified_check(&alg(BaseKind::Rat, &[], &[])).unwrap().unramified);
        assert!(unramified_check(&alg(BaseKind::Fp(2), &["x"], &["x^2 + x"])).unwrap().unramified);
        let r = unramified_check(&alg(BaseKind::Rat, &["x"], &[])).unwrap();
        assert!(!r.unramified);
        assert!(matches!(r.witness_error, Some(Error::WitnessUnavailable)));
    }

    #[test]
    fn derivation_laws() {
        let b = alg(BaseKind::Fp(3), &["x", "y"], &["x^2 - y", "y^2"]);
        let om = kahler(&b).unwrap();
        let ring = b.ring();
        let c = Polynomial::constant(ring, BaseKind::Fp(3).from_i64(2));
        assert!(om.d(&c).unwrap().is_zero());
        let x = Polynomial::var(ring, 0);
        let y = Polynomial::var(ring, 1);
        for (f, g) in [(&x, &y), (&x, &x), (&(&x + &y), &(&x * &y))] {
            let lhs = om.d(&(f * g)).unwrap();
            let rhs = om.d(g).unwrap().scale(f).add(&om.d(f).unwrap().scale(g));
            assert!(om.is_zero_element(&lhs.sub(&rhs)).unwrap());
        }
    }

    #[test]
    fn finite_table_of_omega() {
        let b = alg(BaseKind::Fp(3), &["x"], &["x^2"]);
        let kt = kahler_table(&b).unwrap();
        // Ω = B dx / (2x dx) ≅ F3
        assert_eq!(kt.omega.size(), 3);
        let x = kt.quotient.element_of(&Polynomial::var(b.ring(), 0)).unwrap();
        assert_ne!(kt.d[x], 0);
        let kt = kahler_table(&alg(BaseKind::Fp(5), &["x"], &["x^2 - 2"])).unwrap();
        assert_eq!(kt.omega.size(), 1);
    }
}
