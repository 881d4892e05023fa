use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{enumerate_group_homs, search_group_homs, validate_group, FiniteGroupTable, GroupHom, GroupTableJson};
use crate::error::{Error, Result};

/// A finite abelian group `M` with a `G`-action by automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModuleTable {
    group: Arc<FiniteGroupTable>,
    size: usize,
    add: Vec<u32>,
    zero: usize,
    action: Vec<u32>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbelianTableJson {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// `{ "group": ..., "module": {size, add, zero}, "action": [[g·m]] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GModuleJson {
    pub group: GroupTableJson,
    pub module: AbelianTableJson,
    pub action: Vec<Vec<usize>>,
}

impl GModuleTable {
    pub fn new(
        group: Arc<FiniteGroupTable>,
        size: usize,
        add: Vec<u32>,
        zero: usize,
        action: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = size;
        let g = group.size();
        if n == 0 || add.len() != n * n || action.len() != g * n || zero >= n {
            return Err(Error::ActionIllDefined("table shapes".into()));
        }
        if add.iter().chain(&action).any(|&x| x as usize >= n) {
            return Err(Error::ActionIllDefined("entry out of range".into()));
        }
        let m = GModuleTable { group, size, add, zero, action, labels };
        let bad = |s: String| Err(Error::NotAModule(s));
        for a in 0..n {
            if m.add(a, zero) != a {
                return bad(format!("{zero} is not the zero for {a}"));
            }
            if !(0..n).any(|b| m.add(a, b) == zero) {
                return bad(format!("{a} has no negative"));
            }
            for b in 0..n {
                if m.add(a, b) != m.add(b, a) {
                    return bad(format!("addition not commutative at ({a}, {b})"));
                }
                for c in 0..n {
                    if m.add(m.add(a, b), c) != m.add(a, m.add(b, c)) {
                        return bad(format!("addition not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        let grp = m.group.clone();
        for x in 0..n {
            if m.act(grp.identity(), x) != x {
                return Err(Error::ActionIllDefined(format!("e·{x} != {x}")));
            }
            for h in 0..g {
                for y in 0..n {
                    if m.act(h, m.add(x, y)) != m.add(m.act(h, x), m.act(h, y)) {
                        return Err(Error::ActionIllDefined(format!("g·(m + m') != g·m + g·m' at (g={h}, m={x}, m'={y})")));
                    }
                }
                for k in 0..g {
                    if m.act(grp.mul(h, k), x) != m.act(h, m.act(k, x)) {
                        return Err(Error::ActionIllDefined(format!("(gh)·m != g·(h·m) at (g={h}, h={k}, m={x})")));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_json(j: &GModuleJson) -> Result<Self> {
        let group = Arc::new(validate_group(&j.group)?);
        let n = j.module.size;
        if j.module.add.len() != n || j.module.add.iter().any(|r| r.len() != n) {
            return Err(Error::NotAModule("addition table must be |M| x |M|".into()));
        }
        if j.action.len() != group.size() || j.action.iter().any(|r| r.len() != n) {
            return Err(Error::ActionIllDefined("action table must be |G| x |M|".into()));
        }
        let add = j.module.add.iter().flatten().map(|&x| x as u32).collect();
        let action = j.action.iter().flatten().map(|&x| x as u32).collect();
        Self::new(group, n, add, j.module.zero, action, j.module.labels.clone())
    }

    pub fn to_json(&self) -> GModuleJson {
        let n = self.size;
        GModuleJson {
            group: self.group.to_json(),
            module: AbelianTableJson {
                size: n,
                add: (0..n).map(|a| (0..n).map(|b| self.add(a, b)).collect()).collect(),
                zero: self.zero,
                labels: self.labels.clone(),
            },
            action: (0..self.group.size()).map(|g| (0..n).map(|m| self.act(g, m)).collect()).collect(),
        }
    }

    /// `ℤ/n` with `G` acting through `χ: G → {±1}` (given as a sign per element).
    pub fn cyclic_with_signs(group: Arc<FiniteGroupTable>, n: usize, sign: &[bool]) -> Result<Self> {
        let add = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let action = (0..group.size() * n)
            .map(|k| {
                let (g, m) = (k / n, k % n);
                (if sign[g] { (n - m) % n } else { m }) as u32
            })
            .collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::new(group, n, add, 0, action, Some(labels))
    }

    pub fn trivial_action(group: Arc<FiniteGroupTable>, n: usize) -> Result<Self> {
        let signs = vec![false; group.size()];
        Self::cyclic_with_signs(group, n, &signs)
    }

    pub fn group(&self) -> &Arc<FiniteGroupTable> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn act(&self, g: usize, m: usize) -> usize {
        self.action[g * self.size + m] as usize
    }

    pub fn label(&self, a: usize) -> String {
        self.labels.as_ref().map_or_else(|| a.to_string(), |l| l[a].clone())
    }
}

/// `M ⋊ G → G` with its section; element `(m, g)` has index `m + |M|·g`.
#[derive(Debug, Clone)]
pub struct SplitExtension {
    pub module: GModuleTable,
    pub total: Arc<FiniteGroupTable>,
    pub projection: GroupHom,
    pub section: GroupHom,
}

impl SplitExtension {
    pub fn pair(&self, m: usize, g: usize) -> usize {
        m + self.module.size() * g
    }

    pub fn split(&self, e: usize) -> (usize, usize) {
        (e % self.module.size(), e / self.module.size())
    }

    /// `(m, g) + (m', g) = (m + m', g)`.
    pub fn fiber_add(&self, a: usize, b: usize) -> usize {
        let ((m1, g1), (m2, g2)) = (self.split(a), self.split(b));
        assert_eq!(g1, g2, "fiber addition across fibers");
        self.pair(self.module.add(m1, m2), g1)
    }
}

pub fn semidirect_product(m: &GModuleTable) -> Result<SplitExtension> {
    let g = m.group().clone();
    let (nm, ng) = (m.size(), g.size());
    let n = nm * ng;
    let split = |e: usize| (e % nm, e / nm);
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        let (m1, g1) = split(a);
        for b in 0..n {
            let (m2, g2) = split(b);
            mul.push((m.add(m1, m.act(g1, m2)) + nm * g.mul(g1, g2)) as u32);
        }
    }
    let labels = (0..n).map(|e| format!("({}, {})", m.label(split(e).0), g.label(split(e).1))).collect();
    let name = format!("{}x|{}", m.size(), g.name());
    let total = Arc::new(FiniteGroupTable::new(name, n, mul, m.zero() + nm * g.identity(), Some(labels))?);
    let projection = GroupHom::new(total.clone(), g.clone(), (0..n).map(|e| split(e).1).collect())?;
    let section = GroupHom::new(g.clone(), total.clone(), (0..ng).map(|x| m.zero() + nm * x).collect())?;
    let ext = SplitExtension { module: m.clone(), total, projection, section };
    // abelian group object over G, fiberwise
    for x in 0..ng {
        for a in 0..nm {
            let ea = ext.pair(a, x);
            if ext.fiber_add(ea, ext.pair(m.zero(), x)) != ea {
                return Err(Error::NotAModule("fiber unit".into()));
            }
            for b in 0..nm {
                let eb = ext.pair(b, x);
                if ext.fiber_add(ea, eb) != ext.fiber_add(eb, ea) {
                    return Err(Error::NotAModule("fiber addition not commutative".into()));
                }
                for c in 0..nm {
                    let ec = ext.pair(c, x);
                    if ext.fiber_add(ext.fiber_add(ea, eb), ec) != ext.fiber_add(ea, ext.fiber_add(eb, ec)) {
                        return Err(Error::NotAModule("fiber addition not associative".into()));
                    }
                }
            }
        }
    }
    Ok(ext)
}

/// A verified group torsor `q: E → G` with abelian kernel `K`.
#[derive(Debug, Clone)]
pub struct GroupTorsor {
    pub map: GroupHom,
    pub kernel: Vec<usize>,
    pub beck: SplitExtension,
    pub section: Option<Vec<usize>>,
    /// `|M ×_G E|`, equal to `|E ×_G E|`.
    pub fiber_product_size: usize,
}

impl GroupTorsor {
    pub fn is_split(&self) -> bool {
        self.section.is_some()
    }

    pub fn total(&self) -> &Arc<FiniteGroupTable> {
        self.map.source()
    }

    pub fn base(&self) -> &Arc<FiniteGroupTable> {
        self.map.target()
    }

    /// `τ((k, g), e) = k·e` for `q(e) = g`.
    pub fn act(&self, w: usize, e: usize) -> usize {
        let (k, _) = self.beck.split(w);
        self.total().mul(self.kernel[k], e)
    }
}

pub fn verify_group_torsor(q: &GroupHom) -> Result<GroupTorsor> {
    if !q.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let e = q.source().clone();
    let g = q.target().clone();
    let kernel = q.fiber(g.identity());
    for &a in &kernel {
        for &b in &kernel {
            if e.mul(a, b) != e.mul(b, a) {
                return Err(Error::KernelNonAbelian { a, b });
            }
        }
    }
    let index = |x: usize| kernel.binary_search(&x).expect("kernel is normal");
    let nk = kernel.len();
    let mut action = vec![0u32; g.size() * nk];
    for h in 0..g.size() {
        let pre = q.fiber(h);
        for (ki, &k) in kernel.iter().enumerate() {
            let conj = |x: usize| e.mul(e.mul(x, k), e.inv(x));
            let v = conj(pre[0]);
            if let Some(&other) = pre[1..].iter().find(|&&x| conj(x) != v) {
                return Err(Error::ActionIllDefined(format!(
                    "conjugation of {} by preimages {} and {} of {} differ",
                    e.label(k),
                    e.label(pre[0]),
                    e.label(other),
                    g.label(h)
                )));
            }
            action[h * nk + ki] = index(v) as u32;
        }
    }
    let add = kernel.iter().flat_map(|&a| kernel.iter().map(move |&b| (a, b))).map(|(a, b)| index(e.mul(a, b)) as u32).collect();
    let labels = Some(kernel.iter().map(|&k| e.label(k)).collect());
    let module = GModuleTable::new(g.clone(), nk, add, index(e.identity()), action, labels)?;
    let beck = semidirect_product(&module)?;
    let section = search_group_homs(&g, &e, &g.generators(), &|x| q.fiber(x), 1).into_iter().next();
    let mut t = GroupTorsor { map: q.clone(), kernel, beck, section, fiber_product_size: 0 };
    t.fiber_product_size = verify_group_action(&t)?;
    Ok(t)
}

fn verify_group_action(t: &GroupTorsor) -> Result<usize> {
    let e = t.total();
    let g = t.base();
    let m = &t.beck.module;
    let bad = |s: String| Err(Error::ActionIllDefined(s));
    let mut count = 0;
    for h in 0..g.size() {
        let fib = t.map.fiber(h);
        let mut hit = vec![false; e.size() * e.size()];
        for &z in &fib {
            if t.act(t.beck.pair(m.zero(), h), z) != z {
                return bad(format!("fiber zero moves {z}"));
            }
            for k1 in 0..m.size() {
                let w1 = t.beck.pair(k1, h);
                let r = t.act(w1, z);
                if t.map.apply(r) != h {
                    return bad("action leaves the fiber".into());
                }
                if std::mem::replace(&mut hit[r * e.size() + z], true) {
                    return bad(format!("(τ, π) not injective over {h}"));
                }
                count += 1;
                for k2 in 0..m.size() {
                    let w2 = t.beck.pair(k2, h);
                    if t.act(t.beck.fiber_add(w1, w2), z) != t.act(w1, t.act(w2, z)) {
                        return bad("τ(m + m', z) != τ(m, τ(m', z))".into());
                    }
                }
            }
        }
        if fib.iter().any(|&a| fib.iter().any(|&b| !hit[a * e.size() + b])) {
            return bad(format!("(τ, π) not surjective over {h}"));
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupLiftReport {
    pub hom_e: usize,
    pub hom_g: usize,
    pub injective: bool,
    /// Two distinct homs `H → E` with the same composite, as full maps.
    pub collision: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn group_lift_check(h: &FiniteGroupTable, q: &GroupHom, max_homs: u64) -> Result<GroupLiftReport> {
    let he = enumerate_group_homs(h, q.source(), max_homs)?;
    let hg = enumerate_group_homs(h, q.target(), max_homs)?;
    let mut first: Vec<Option<usize>> = vec![None; hg.len()];
    let mut collision = None;
    for (i, f) in he.homs.iter().enumerate() {
        let composite: Vec<usize> = f.iter().map(|&x| q.apply(x)).collect();
        let y = hg
            .index_of(&composite)
            .ok_or_else(|| Error::NotAGroupHom("composite is not in Hom(H, G)".into()))?;
        match first[y] {
            None => first[y] = Some(i),
            Some(j) if collision.is_none() => collision = Some((he.homs[j].clone(), f.clone())),
            Some(_) => {}
        }
    }
    Ok(GroupLiftReport { hom_e: he.len(), hom_g: hg.len(), injective: collision.is_none(), collision })
}

/// Rank of the augmentation ideal of `ℤ[G]`.
pub fn group_kahler_rank(g: &FiniteGroupTable) -> usize {
    g.size() - 1
}
