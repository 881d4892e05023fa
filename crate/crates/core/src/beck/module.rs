use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fpalg::{FiniteRingTable, ModuleTable, RingMap};

/// The split square-zero extension `C ⊕ M → C` of a finite ring by a module.
/// Total-ring element `(c, m)` has index `c + |C|·m`.
#[derive(Debug, Clone)]
pub struct BeckModule {
    base: Arc<FiniteRingTable>,
    module: ModuleTable,
    total: Arc<FiniteRingTable>,
    projection: RingMap,
    unit_section: RingMap,
}

pub fn trivial_extension(c: Arc<FiniteRingTable>, m: ModuleTable) -> Result<BeckModule> {
    if m.ring().as_ref() != c.as_ref() {
        return Err(Error::NotAModule("module is over a different ring".into()));
    }
    let (nc, nm) = (c.size(), m.size());
    let n = nc * nm;
    let split = |z: usize| (z % nc, z / nc);
    let pair = |x: usize, y: usize| (x + nc * y) as u32;
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for z in 0..n {
        let (c1, m1) = split(z);
        for w in 0..n {
            let (c2, m2) = split(w);
            add.push(pair(c.add(c1, c2), m.add(m1, m2)));
            mul.push(pair(c.mul(c1, c2), m.add(m.act(c1, m2), m.act(c2, m1))));
        }
    }
    let labels = (0..n).map(|z| format!("({}, {})", c.label(split(z).0), m.label(split(z).1))).collect();
    let total = Arc::new(FiniteRingTable::new(
        n,
        add,
        mul,
        pair(c.zero(), m.zero()) as usize,
        pair(c.one(), m.zero()) as usize,
        c.base(),
        Some(labels),
    )?);
    let projection = RingMap::new(total.clone(), c.clone(), (0..n).map(|z| split(z).0).collect())?;
    let unit_section = RingMap::new(c.clone(), total.clone(), (0..nc).map(|x| pair(x, m.zero()) as usize).collect())?;
    let b = BeckModule { base: c, module: m, total, projection, unit_section };
    b.verify()?;
    Ok(b)
}

impl BeckModule {
    fn verify(&self) -> Result<()> {
        let (c, m, t) = (&self.base, &self.module, &self.total);
        for m1 in 0..m.size() {
            for m2 in 0..m.size() {
                let p = t.mul(self.pair(c.zero(), m1), self.pair(c.zero(), m2));
                if p != t.zero() {
                    return Err(Error::NotAModule(format!("(0, {m1})·(0, {m2}) is not zero")));
                }
            }
        }
        for x in 0..c.size() {
            if self.projection.apply(self.unit_section.apply(x)) != x {
                return Err(Error::NotAModule(format!("projection ∘ unit is not the identity at {x}")));
            }
            // abelian group object structure on each fiber
            for m1 in 0..m.size() {
                let z1 = self.pair(x, m1);
                if self.fiber_add(z1, self.pair(x, m.zero())) != z1 {
                    return Err(Error::NotAModule(format!("fiber unit fails at ({x}, {m1})")));
                }
                for m2 in 0..m.size() {
                    let z2 = self.pair(x, m2);
                    if self.fiber_add(z1, z2) != self.fiber_add(z2, z1) {
                        return Err(Error::NotAModule(format!("fiber addition not commutative over {x}")));
                    }
                    for m3 in 0..m.size() {
                        let z3 = self.pair(x, m3);
                        if self.fiber_add(self.fiber_add(z1, z2), z3) != self.fiber_add(z1, self.fiber_add(z2, z3)) {
                            return Err(Error::NotAModule(format!("fiber addition not associative over {x}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FiniteRingTable> {
        &self.base
    }

    pub fn module(&self) -> &ModuleTable {
        &self.module
    }

    pub fn total(&self) -> &Arc<FiniteRingTable> {
        &self.total
    }

    pub fn projection(&self) -> &RingMap {
        &self.projection
    }

    pub fn unit_section(&self) -> &RingMap {
        &self.unit_section
    }

    #[inline]
    pub fn pair(&self, c: usize, m: usize) -> usize {
        c + self.base.size() * m
    }

    #[inline]
    pub fn split(&self, z: usize) -> (usize, usize) {
        (z % self.base.size(), z / self.base.size())
    }

    /// `(c, m) + (c, m') = (c, m + m')`; both arguments must lie over the same `c`.
    pub fn fiber_add(&self, z: usize, w: usize) -> usize {
        let ((c1, m1), (c2, m2)) = (self.split(z), self.split(w));
        assert_eq!(c1, c2, "fiber addition across fibers");
        self.pair(c1, self.module.add(m1, m2))
    }
}
