use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{trivial_extension, BeckModule};
use crate::error::{Error, Result};
use crate::fpalg::{
    enumerate_homs_with_limits, kernel_of_surjection, search_ring_homs, AlgebraPresentation, FiniteRingTable,
    HomSet, RingMap, RingTableJson,
};
use crate::polyring::Limits;

/// A verified Beck torsor `γ: Z → Y` under the module `K = ker γ`.
#[derive(Debug, Clone)]
pub struct TorsorCandidate {
    map: RingMap,
    kernel: Vec<usize>,
    beck_module: BeckModule,
    section: Option<Vec<usize>>,
    fiber_product_size: usize,
}

/// `{ "total": <table>, "base": <table>, "map": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorsorJson {
    pub total: RingTableJson,
    pub base: RingTableJson,
    pub map: Vec<usize>,
}

impl TorsorJson {
    pub fn to_map(&self) -> Result<RingMap> {
        let z = Arc::new(FiniteRingTable::from_json(&self.total)?);
        let y = Arc::new(FiniteRingTable::from_json(&self.base)?);
        RingMap::new(z, y, self.map.clone())
    }

    pub fn from_map(q: &RingMap) -> Self {
        TorsorJson { total: q.source().to_json(), base: q.target().to_json(), map: q.map().to_vec() }
    }
}

pub fn verify_torsor(q: &RingMap) -> Result<TorsorCandidate> {
    let kd = kernel_of_surjection(q)?;
    if let Some((a, b, product)) = kd.square_violation {
        return Err(Error::KernelSquareNonzero { a, b, product });
    }
    let module = kd.module.expect("square-zero kernel carries a module");
    let beck_module = trivial_extension(q.target().clone(), module)?;
    let section = search_ring_homs(q.target(), q.source(), &|c| q.fiber(c), 1).into_iter().next();
    let mut t = TorsorCandidate { map: q.clone(), kernel: kd.elements, beck_module, section, fiber_product_size: 0 };
    t.fiber_product_size = t.verify_action()?;
    t.verify_coequalizer()?;
    Ok(t)
}

impl TorsorCandidate {
    pub fn map(&self) -> &RingMap {
        &self.map
    }

    pub fn total(&self) -> &Arc<FiniteRingTable> {
        self.map.source()
    }

    pub fn base(&self) -> &Arc<FiniteRingTable> {
        self.map.target()
    }

    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    pub fn beck_module(&self) -> &BeckModule {
        &self.beck_module
    }

    pub fn is_split(&self) -> bool {
        self.section.is_some()
    }

    pub fn section(&self) -> Option<&[usize]> {
        self.section.as_deref()
    }

    /// `|M ×_Y Z|`, equal to `|Z ×_Y Z|` once verified.
    pub fn fiber_product_size(&self) -> usize {
        self.fiber_product_size
    }

    /// `τ((c, k), z) = z + k`, defined when `γ(z) = c`.
    pub fn act(&self, w: usize, z: usize) -> usize {
        let (c, k) = self.beck_module.split(w);
        debug_assert_eq!(self.map.apply(z), c);
        self.total().add(z, self.kernel[k])
    }

    /// Checks τ lies over `Y`, the action laws, and that `(τ, π)` is a
    /// bijection `M ×_Y Z → Z ×_Y Z`. Returns the common cardinality.
    fn verify_action(&self) -> Result<usize> {
        let z = self.total();
        let y = self.base();
        let bm = &self.beck_module;
        let m = bm.module();
        let bad = |s: String| Err(Error::NotAModule(s));
        let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); y.size()];
        for e in 0..z.size() {
            fibers[self.map.apply(e)].push(e);
        }
        let mut lhs = 0usize;
        let mut rhs = 0usize;
        for (c, fib) in fibers.iter().enumerate() {
            rhs += fib.len() * fib.len();
            let mut hit = vec![false; z.size() * z.size()];
            for &e in fib {
                if self.act(bm.pair(c, m.zero()), e) != e {
                    return bad(format!("zero of the fiber over {c} moves {e}"));
                }
                for k1 in 0..m.size() {
                    let w1 = bm.pair(c, k1);
                    let t = self.act(w1, e);
                    if self.map.apply(t) != c {
                        return bad(format!("action leaves the fiber over {c}"));
                    }
                    lhs += 1;
                    let slot = &mut hit[t * z.size() + e];
                    if std::mem::replace(slot, true) {
                        return bad(format!("(τ, π) is not injective over {c}"));
                    }
                    for k2 in 0..m.size() {
                        let w2 = bm.pair(c, k2);
                        if self.act(bm.fiber_add(w1, w2), e) != self.act(w1, self.act(w2, e)) {
                            return bad(format!("τ(m + m', z) != τ(m, τ(m', z)) over {c}"));
                        }
                    }
                }
            }
            for &a in fib {
                for &b in fib {
                    if !hit[a * z.size() + b] {
                        return bad(format!("(τ, π) misses ({a}, {b})"));
                    }
                }
            }
        }
        debug_assert_eq!(lhs, rhs);
        Ok(lhs)
    }

    /// The quotient of `Z` by the equivalence generated by the kernel pair
    /// `Z ×_Y Z` must be `Y`, via `γ`.
    fn verify_coequalizer(&self) -> Result<()> {
        let z = self.total();
        let mut parent: Vec<usize> = (0..z.size()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let n = p[x];
                p[x] = r;
                x = n;
            }
            r
        }
        for a in 0..z.size() {
            for b in 0..z.size() {
                if self.map.apply(a) == self.map.apply(b) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        let mut class_image = BTreeMap::new();
        for a in 0..z.size() {
            let r = find(&mut parent, a);
            let img = self.map.apply(a);
            if *class_image.entry(r).or_insert(img) != img {
                return Err(Error::NotSurjective);
            }
        }
        let mut images: Vec<usize> = class_image.values().copied().collect();
        images.sort_unstable();
        images.dedup();
        if images.len() != class_image.len() || images.len() != self.base().size() {
            return Err(Error::NotSurjective);
        }
        Ok(())
    }
}

/// Cardinalities and outcome of the Hom-level fiber-product bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberBijectionReport {
    /// `|Hom(X, M) ×_{Hom(X, Y)} Hom(X, Z)|`.
    pub lhs: usize,
    /// `|Hom(X, Z) ×_{Hom(X, Y)} Hom(X, Z)|`.
    pub rhs: usize,
    pub bijective: bool,
    pub hom_m: usize,
    pub hom_y: usize,
    pub hom_z: usize,
}

fn project(set: &HomSet, q: &RingMap, target: &HomSet) -> Result<Vec<usize>> {
    set.all_images()
        .iter()
        .map(|h| {
            let img: Vec<usize> = h.iter().map(|&v| q.apply(v)).collect();
            target
                .index_of(&img)
                .ok_or_else(|| Error::NotARingHom("post-composition left the Hom set".into()))
        })
        .collect()
}

pub fn torsor_fiber_bijection(x: &Arc<AlgebraPresentation>, t: &TorsorCandidate) -> Result<FiberBijectionReport> {
    torsor_fiber_bijection_with_limits(x, t, Limits::default())
}

pub fn torsor_fiber_bijection_with_limits(
    x: &Arc<AlgebraPresentation>,
    t: &TorsorCandidate,
    limits: Limits,
) -> Result<FiberBijectionReport> {
    let bm = t.beck_module();
    let hm = enumerate_homs_with_limits(x, bm.total(), limits)?;
    let hz = enumerate_homs_with_limits(x, t.total(), limits)?;
    let hy = enumerate_homs_with_limits(x, t.base(), limits)?;
    let m_over = project(&hm, bm.projection(), &hy)?;
    let z_over = project(&hz, t.map(), &hy)?;
    let mut z_by_y: Vec<Vec<usize>> = vec![Vec::new(); hy.len()];
    for (i, &y) in z_over.iter().enumerate() {
        z_by_y[y].push(i);
    }
    let mut lhs = 0usize;
    let mut seen = std::collections::HashSet::new();
    let mut injective = true;
    for (i, &y) in m_over.iter().enumerate() {
        for &j in &z_by_y[y] {
            lhs += 1;
            let acted: Vec<usize> = hm.images(i).iter().zip(hz.images(j)).map(|(&w, &z)| t.act(w, z)).collect();
            let k = hz
                .index_of(&acted)
                .ok_or_else(|| Error::NotARingHom("τ ∘ (α, β) is not a hom".into()))?;
            if z_over[k] != y {
                injective = false;
            }
            injective &= seen.insert((k, j));
        }
    }
    let rhs: usize = z_by_y.iter().map(|v| v.len() * v.len()).sum();
    Ok(FiberBijectionReport {
        lhs,
        rhs,
        bijective: injective && seen.len() == rhs,
        hom_m: hm.len(),
        hom_y: hy.len(),
        hom_z: hz.len(),
    })
}

/// Outcome of `Hom(B, Z) → Hom(B, Y)` by post-composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub hom_z: usize,
    pub hom_y: usize,
    pub injective: bool,
    /// Two distinct homs into `Z` with the same image, as generator images.
    pub collision: Option<(Vec<usize>, Vec<usize>)>,
    /// Present when a section of `Z → Y` was supplied.
    pub surjective: Option<bool>,
    /// A hom into `Y` with no lift, when not surjective.
    pub missing: Option<Vec<usize>>,
}

impl LiftReport {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective == Some(true)
    }
}

/// Post-composition along `q`; with a section `u` also checks surjectivity,
/// building the preimage of each `h` as `u ∘ h`.
pub fn lift_check(b: &Arc<AlgebraPresentation>, q: &RingMap, section: Option<&RingMap>, limits: Limits) -> Result<LiftReport> {
    let hz = enumerate_homs_with_limits(b, q.source(), limits)?;
    let hy = enumerate_homs_with_limits(b, q.target(), limits)?;
    let over = project(&hz, q, &hy)?;
    let mut first: Vec<Option<usize>> = vec![None; hy.len()];
    let mut collision = None;
    for (i, &y) in over.iter().enumerate() {
        match first[y] {
            None => first[y] = Some(i),
            Some(j) if collision.is_none() => collision = Some((hz.images(j).to_vec(), hz.images(i).to_vec())),
            Some(_) => {}
        }
    }
    let (surjective, missing) = match section {
        None => (None, None),
        Some(u) => {
            let mut missing = None;
            for (y, f) in first.iter().enumerate() {
                let lifted: Vec<usize> = hy.images(y).iter().map(|&v| u.apply(v)).collect();
                let ok = f.is_some() && hz.index_of(&lifted).is_some_and(|k| over[k] == y);
                if !ok && missing.is_none() {
                    missing = Some(hy.images(y).to_vec());
                }
            }
            (Some(missing.is_none()), missing)
        }
    };
    Ok(LiftReport { hom_z: hz.len(), hom_y: hy.len(), injective: collision.is_none(), collision, surjective, missing })
}

pub fn lift_check_torsor(b: &Arc<AlgebraPresentation>, t: &TorsorCandidate, limits: Limits) -> Result<LiftReport> {
    let section = match t.section() {
        Some(s) => Some(RingMap::new(t.base().clone(), t.total().clone(), s.to_vec())?),
        None => None,
    };
    lift_check(b, t.map(), section.as_ref(), limits)
}

pub fn lift_check_beck(b: &Arc<AlgebraPresentation>, m: &BeckModule, limits: Limits) -> Result<LiftReport> {
    lift_check(b, m.projection(), Some(m.unit_section()), limits)
}
