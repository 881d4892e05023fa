use std::sync::Arc;

use super::{trivial_extension, BeckModule};
use crate::error::{Error, Result};
use crate::fpalg::{
    enumerate_homs_with_limits, find_ring_isomorphism, to_finite_table, AlgebraHom, AlgebraPresentation,
    FiniteRingTable, ModuleTable, RingMap,
};
use crate::polyring::Limits;

/// `ψ*M = X ×_Y (Y ⊕ M)` together with its two projections.
#[derive(Debug, Clone)]
pub struct Pullback {
    /// The fiber product ring, elements listed in order of `(x, w)` pairs.
    pub fiber: Arc<FiniteRingTable>,
    pub pairs: Vec<(usize, usize)>,
    pub to_x: RingMap,
    pub to_total: RingMap,
    /// `X ⊕ ψ*M`, isomorphic to `fiber` via `(x, (ψx, m)) ↦ (x, m)`.
    pub beck: BeckModule,
}

/// Pullback along a verified table map `ψ: X → Y`.
pub fn pullback_along(psi: &RingMap, m: &BeckModule) -> Result<Pullback> {
    if psi.target() != m.base() {
        return Err(Error::MixedContext);
    }
    let x = psi.source().clone();
    let total = m.total();
    let mut pairs = Vec::new();
    for a in 0..x.size() {
        for w in 0..total.size() {
            if m.projection().apply(w) == psi.apply(a) {
                pairs.push((a, w));
            }
        }
    }
    let n = pairs.len();
    let idx = |p: (usize, usize)| pairs.binary_search(&p).expect("fiber product is closed");
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for &(a1, w1) in &pairs {
        for &(a2, w2) in &pairs {
            add.push(idx((x.add(a1, a2), total.add(w1, w2))) as u32);
            mul.push(idx((x.mul(a1, a2), total.mul(w1, w2))) as u32);
        }
    }
    let labels = pairs.iter().map(|&(a, w)| format!("({}, {})", x.label(a), total.label(w))).collect();
    let fiber = Arc::new(FiniteRingTable::new(
        n,
        add,
        mul,
        idx((x.zero(), total.zero())),
        idx((x.one(), total.one())),
        x.base(),
        Some(labels),
    )?);
    let to_x = RingMap::new(fiber.clone(), x.clone(), pairs.iter().map(|p| p.0).collect())?;
    let to_total = RingMap::new(fiber.clone(), total.clone(), pairs.iter().map(|p| p.1).collect())?;

    // ψ*M: M with X acting through ψ
    let mm = m.module();
    let nm = mm.size();
    let madd = (0..nm * nm).map(|k| mm.add(k / nm, k % nm) as u32).collect();
    let act = (0..x.size() * nm).map(|k| mm.act(psi.apply(k / nm), k % nm) as u32).collect();
    let pulled = ModuleTable::new(x.clone(), nm, madd, mm.zero(), act, None)?;
    let beck = trivial_extension(x, pulled)?;
    let iso: Vec<usize> = pairs.iter().map(|&(a, w)| beck.pair(a, m.split(w).1)).collect();
    RingMap::new(fiber.clone(), beck.total().clone(), iso)?;
    Ok(Pullback { fiber, pairs, to_x, to_total, beck })
}

/// Pullback along `ψ: X → Y` given on a finite presented `X`.
pub fn pullback_module(psi: &AlgebraHom, m: &BeckModule) -> Result<Pullback> {
    let qt = to_finite_table(psi.domain()).map_err(|e| match e {
        Error::InfiniteDimensional | Error::NonFiniteBase | Error::NonFieldBase => Error::NonFinite,
        other => other,
    })?;
    if psi.codomain() != m.base() {
        return Err(Error::MixedContext);
    }
    let map = (0..qt.table().size())
        .map(|e| psi.apply(&qt.polynomial_of(e)))
        .collect::<Result<Vec<_>>>()?;
    let table_map = RingMap::new(qt.table().clone(), psi.codomain().clone(), map)?;
    pullback_along(&table_map, m)
}

/// For each test object `W`: every pair `(α: W → X, β: W → Y⊕M)` agreeing
/// over `Y` has exactly one hom `W → ψ*M` over both. Returns the number of
/// pairs checked.
pub fn verify_pullback_universal(
    pb: &Pullback,
    psi: &RingMap,
    m: &BeckModule,
    tests: &[Arc<AlgebraPresentation>],
    limits: Limits,
) -> Result<usize> {
    let mut checked = 0;
    for w in tests {
        let hx = enumerate_homs_with_limits(w, pb.to_x.target(), limits)?;
        let ht = enumerate_homs_with_limits(w, m.total(), limits)?;
        let hp = enumerate_homs_with_limits(w, &pb.fiber, limits)?;
        for a in hx.all_images() {
            for b in ht.all_images() {
                let agree = a.iter().zip(b).all(|(&u, &v)| psi.apply(u) == m.projection().apply(v));
                if !agree {
                    continue;
                }
                checked += 1;
                let count = hp
                    .all_images()
                    .iter()
                    .filter(|h| {
                        h.iter().zip(a).all(|(&e, &u)| pb.to_x.apply(e) == u)
                            && h.iter().zip(b).all(|(&e, &v)| pb.to_total.apply(e) == v)
                    })
                    .count();
                if count != 1 {
                    return Err(Error::NotARingHom(format!("{count} mediating homs for a cone over the pullback")));
                }
            }
        }
    }
    Ok(checked)
}

/// Whether the pullback along the identity reproduces `M` up to isomorphism.
pub fn identity_pullback_matches(m: &BeckModule) -> Result<bool> {
    let pb = pullback_along(&RingMap::identity(m.base().clone()), m)?;
    Ok(find_ring_isomorphism(&pb.fiber, m.total()).is_some())
}
