use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::BaseKind;
use crate::polyring::{
    parse_poly, quotient_basis, GroebnerBasis, Limits, MonomialOrder, PolyRing, Polynomial, QuotientBasis,
};

/// `A[x₁..xₙ]/(f₁..fₘ)` together with its structure map from the base `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    ring: Arc<PolyRing>,
    relations: Vec<Polynomial>,
    groebner: Option<GroebnerBasis>,
}

/// JSON shape: `{ "base": {...}, "generators": [...], "relations": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub base: BaseKind,
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

impl AlgebraPresentation {
    /// Validates generators and relations; for field bases also computes and
    /// caches the reduced DegRevLex Gröbner basis of the relation ideal.
    pub fn new(base: BaseKind, generators: Vec<String>, relations: Vec<Polynomial>) -> Result<Self> {
        Self::with_limits(base, generators, relations, Limits::default())
    }

    pub fn with_limits(base: BaseKind, generators: Vec<String>, relations: Vec<Polynomial>, limits: Limits) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.as_str()) {
                return Err(Error::DuplicateGenerator(g.clone()));
            }
        }
        let ring = PolyRing::new(generators, base);
        for f in &relations {
            if f.ring().as_ref() != ring.as_ref() {
                return Err(Error::UnknownVariableInRelation(f.to_string()));
            }
        }
        // re-home relations on the shared ring handle
        let relations: Vec<Polynomial> = relations
            .into_iter()
            .map(|f| f.map_into(&ring, |c| Ok(c.clone())))
            .collect::<Result<_>>()?;
        let groebner = if base.is_field() {
            Some(GroebnerBasis::compute(&ring, &relations, &MonomialOrder::DegRevLex, limits)?)
        } else {
            None
        };
        Ok(AlgebraPresentation { ring, relations, groebner })
    }

    /// Parses relation strings against the generator list.
    pub fn parse(base: BaseKind, generators: &[&str], relations: &[&str]) -> Result<Self> {
        Self::parse_with_limits(base, generators, relations, Limits::default())
    }

    pub fn parse_with_limits(base: BaseKind, generators: &[&str], relations: &[&str], limits: Limits) -> Result<Self> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let mut seen = HashSet::new();
        for g in &gens {
            if !seen.insert(g.as_str()) {
                return Err(Error::DuplicateGenerator(g.clone()));
            }
        }
        let ring = PolyRing::new(gens.clone(), base);
        let rels = relations
            .iter()
            .map(|t| {
                parse_poly(t, &ring).map_err(|e| match e {
                    Error::UnknownVariable(v) => Error::UnknownVariableInRelation(format!("`{v}` in `{t}`")),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_limits(base, gens, rels, limits)
    }

    pub fn from_json(j: &AlgebraJson, limits: Limits) -> Result<Self> {
        let gens: Vec<&str> = j.generators.iter().map(String::as_str).collect();
        let rels: Vec<&str> = j.relations.iter().map(String::as_str).collect();
        Self::parse_with_limits(j.base, &gens, &rels, limits)
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            base: self.base(),
            generators: self.generators().to_vec(),
            relations: self.relations.iter().map(|f| f.to_string()).collect(),
        }
    }

    /// The base ring with no generators.
    pub fn base_only(base: BaseKind) -> Self {
        Self::new(base, Vec::new(), Vec::new()).expect("empty presentation is valid")
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn base(&self) -> BaseKind {
        self.ring.base()
    }

    pub fn generators(&self) -> &[String] {
        self.ring.variables()
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Cached reduced basis of the relation ideal (field bases only).
    pub fn groebner(&self) -> Result<&GroebnerBasis> {
        self.groebner.as_ref().ok_or(Error::NonFieldBase)
    }

    pub fn quotient_basis(&self) -> Result<QuotientBasis> {
        Ok(quotient_basis(self.groebner()?))
    }

    /// Vector-space dimension of `B` over a field base, if finite.
    pub fn dimension(&self) -> Result<Option<usize>> {
        Ok(self.quotient_basis()?.finite().map(<[_]>::len))
    }
}

/// Validation plus the cached Gröbner basis.
pub fn validate_presentation(base: BaseKind, generators: &[&str], relations: &[&str]) -> Result<AlgebraPresentation> {
    AlgebraPresentation::parse(base, generators, relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        let b = validate_presentation(BaseKind::Rat, &["x"], &["x^2"]).unwrap();
        assert_eq!(b.groebner().unwrap().elements()[0].to_string(), "x^2");
        assert_eq!(
            validate_presentation(BaseKind::Rat, &["x", "x"], &[]),
            Err(Error::DuplicateGenerator("x".into()))
        );
        assert!(validate_presentation(BaseKind::Fp(5), &["x"], &["x^2 - 2"]).is_ok());
        assert!(matches!(
            validate_presentation(BaseKind::Rat, &["x"], &["y"]),
            Err(Error::UnknownVariableInRelation(_))
        ));
        let z = validate_presentation(BaseKind::Int, &["t"], &["t^2"]).unwrap();
        assert!(matches!(z.groebner(), Err(Error::NonFieldBase)));
    }

    #[test]
    fn json_round_trip() {
        let j: AlgebraJson =
            serde_json::from_str(r#"{ "base": {"kind":"Fp","p":5}, "generators": ["x"], "relations": ["x^2 - 2"] }"#)
                .unwrap();
        let b = AlgebraPresentation::from_json(&j, Limits::default()).unwrap();
        assert_eq!(b.to_json().relations, vec!["x^2 + 3".to_string()]);
        assert_eq!(b.dimension().unwrap(), Some(2));
    }
}
