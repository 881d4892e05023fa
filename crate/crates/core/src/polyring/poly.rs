use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};
use crate::exactnum::{BaseKind, Scalar};

/// Ambient polynomial ring `base[variables]`. Variable order fixes the
/// exponent-vector layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    variables: Vec<String>,
    base: BaseKind,
}

impl PolyRing {
    pub fn new(variables: Vec<String>, base: BaseKind) -> Arc<Self> {
        Arc::new(PolyRing { variables, base })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn base(&self) -> BaseKind {
        self.base
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A polynomial with exact coefficients. Immutable: every operation returns
/// a fresh value. No stored coefficient is zero.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.base().one())
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i, 1), ring.base().one())
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length");
        assert_eq!(c.kind(), ring.base(), "coefficient kind");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(ring: &Arc<PolyRing>, it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in it {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length");
            add_term(&mut terms, m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn base(&self) -> BaseKind {
        self.ring.base()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_coeff(&self) -> Scalar {
        self.terms
            .get(&Monomial::one(self.ring.nvars()))
            .cloned()
            .unwrap_or_else(|| self.base().zero())
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::MixedContext)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_term(&mut terms, m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn neg(&self) -> Polynomial {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.mul(m), v.mul(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let base = self.base();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[i];
            if e == 0 {
                return None;
            }
            let mut ex = m.exponents().to_vec();
            ex[i] -= 1;
            Some((Monomial::new(ex), c.mul(&base.from_i64(e as i64))))
        });
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Same coefficients read in another ring with the same variables,
    /// mapping each through `f` (used for reduction mod p).
    pub fn map_into(&self, ring: &Arc<PolyRing>, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Polynomial> {
        if ring.nvars() != self.ring.nvars() {
            return Err(Error::MixedContext);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Ok(Polynomial::from_terms(ring, terms))
    }

    /// Evaluate with variables sent to values of some ring `T`.
    pub fn eval<T: Clone>(
        &self,
        values: &[T],
        zero: T,
        scalar: impl Fn(&Scalar) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = scalar(c);
            for (v, &e) in values.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = mul(&t, v);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Exact product; fails with `MixedContext` when the rings differ.
pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.checked_mul(g)
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomials from the same ring")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomials from the same ring")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomials from the same ring")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending degrevlex order, in the input grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let order = MonomialOrder::DegRevLex;
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let pp = m.format_with(self.ring.variables());
            match (pp.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{pp}")?,
                (false, false) => write!(f, "{abs}*{pp}")?,
            }
        }
        Ok(())
    }
}
