use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{BaseKind, Scalar};

/// A finite commutative ring given by full addition and multiplication
/// tables, viewed as an algebra over its base. All axioms are checked
/// exhaustively at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRingTable {
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    one: usize,
    base: BaseKind,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingTableJson {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    pub base: BaseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn flatten(name: &str, rows: &[Vec<usize>], n: usize) -> Result<Vec<u32>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidTable(format!("{name} table must be {n}x{n}")));
    }
    let mut out = Vec::with_capacity(n * n);
    for r in rows {
        for &x in r {
            if x >= n {
                return Err(Error::InvalidTable(format!("{name} entry {x} out of range")));
            }
            out.push(x as u32);
        }
    }
    Ok(out)
}

impl FiniteRingTable {
    pub fn new(
        size: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        zero: usize,
        one: usize,
        base: BaseKind,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = size;
        if n == 0 {
            return Err(Error::InvalidTable("empty ring".into()));
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(Error::InvalidTable(format!("tables must have {} entries", n * n)));
        }
        if add.iter().chain(&mul).any(|&x| x as usize >= n) || zero >= n || one >= n {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        if labels.as_ref().is_some_and(|l| l.len() != n) {
            return Err(Error::InvalidTable("label count".into()));
        }
        let mut neg = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] as usize == zero {
                    neg[a] = b as u32;
                    break;
                }
            }
        }
        let t = FiniteRingTable { size, add, mul, neg, zero, one, base, labels };
        t.verify_axioms()?;
        Ok(t)
    }

    pub fn from_json(j: &RingTableJson) -> Result<Self> {
        let add = flatten("add", &j.add, j.size)?;
        let mul = flatten("mul", &j.mul, j.size)?;
        Self::new(j.size, add, mul, j.zero, j.one, j.base, j.labels.clone())
    }

    pub fn to_json(&self) -> RingTableJson {
        let n = self.size;
        let rows = |t: &[u32]| (0..n).map(|a| (0..n).map(|b| t[a * n + b] as usize).collect()).collect();
        RingTableJson {
            size: n,
            add: rows(&self.add),
            mul: rows(&self.mul),
            zero: self.zero,
            one: self.one,
            base: self.base,
            labels: self.labels.clone(),
        }
    }

    /// `ℤ/n` with base ℤ, or with base 𝔽ₚ when `n` is prime.
    pub fn integers_mod(n: usize, base: BaseKind) -> Result<Self> {
        let add = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let mul = (0..n * n).map(|k| ((k / n) * (k % n) % n) as u32).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::new(n, add, mul, 0, 1 % n, base, Some(labels))
    }

    fn verify_axioms(&self) -> Result<()> {
        let n = self.size;
        let bad = |msg: String| Err(Error::InvalidTable(msg));
        if let Some(a) = self.neg.iter().position(|&x| x == u32::MAX) {
            return bad(format!("element {a} has no additive inverse"));
        }
        for a in 0..n {
            if self.add(a, self.zero) != a {
                return bad(format!("{} is not an additive identity for {a}", self.zero));
            }
            if self.mul(a, self.one) != a {
                return bad(format!("{} is not a multiplicative identity for {a}", self.one));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return bad(format!("addition not commutative at ({a}, {b})"));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return bad(format!("multiplication not commutative at ({a}, {b})"));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return bad(format!("addition not associative at ({a}, {b}, {c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return bad(format!("multiplication not associative at ({a}, {b}, {c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return bad(format!("distributivity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        // structure map from the base
        match self.base {
            BaseKind::Int => {}
            BaseKind::Rat => {
                if n != 1 {
                    return Err(Error::NonFiniteBase);
                }
            }
            BaseKind::Fp(p) => {
                if self.smul_int(self.one, p as u64) != self.zero {
                    return bad(format!("characteristic does not divide {p}: not an F{p}-algebra"));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn base(&self) -> BaseKind {
        self.base
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        self.labels.as_ref().map_or_else(|| a.to_string(), |l| l[a].clone())
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k·a` by repeated doubling.
    pub fn smul_int(&self, a: usize, mut k: u64) -> usize {
        let mut acc = self.zero;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Image of a base scalar under the structure map.
    pub fn scalar(&self, c: &Scalar) -> Result<usize> {
        match c {
            Scalar::Fp { value, .. } => Ok(self.smul_int(self.one, *value as u64)),
            Scalar::Int(n) => {
                let (sign, mag) = (n < &num_bigint::BigInt::from(0), n.magnitude());
                let k = (mag % self.additive_order(self.one) as u64).try_into().unwrap_or(0u64);
                let v = self.smul_int(self.one, k);
                Ok(if sign { self.neg(v) } else { v })
            }
            Scalar::Rat(_) => {
                if self.size == 1 {
                    Ok(self.zero)
                } else {
                    Err(Error::NonFiniteBase)
                }
            }
        }
    }

    pub fn additive_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.zero {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: usize, e: u32) -> usize {
        let mut acc = self.one;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Whether elements of this table may receive homs from algebras over `base`.
    pub fn accepts_base(&self, base: BaseKind) -> bool {
        match base {
            _ if base == self.base || self.size == 1 => true,
            BaseKind::Int => true,
            BaseKind::Fp(p) => self.smul_int(self.one, p as u64) == self.zero,
            BaseKind::Rat => false,
        }
    }
}

/// A module over a finite ring `C`: a finite abelian group with a `C`-action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleTable {
    ring: Arc<FiniteRingTable>,
    size: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    action: Vec<u32>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleTableJson {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
    /// `action[c][m]` is `c·m`.
    pub action: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ModuleTable {
    /// Checks the abelian-group and module axioms exhaustively; the error
    /// names the first failing instance.
    pub fn new(
        ring: Arc<FiniteRingTable>,
        size: usize,
        add: Vec<u32>,
        zero: usize,
        action: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = size;
        let r = ring.size();
        let bad = |msg: String| Err(Error::NotAModule(msg));
        if n == 0 || add.len() != n * n || action.len() != r * n || zero >= n {
            return bad("table shapes".into());
        }
        if add.iter().chain(&action).any(|&x| x as usize >= n) {
            return bad("entry out of range".into());
        }
        let mut neg = vec![u32::MAX; n];
        for a in 0..n {
            if let Some(b) = (0..n).find(|&b| add[a * n + b] as usize == zero) {
                neg[a] = b as u32;
            }
        }
        let m = ModuleTable { ring, size, add, neg, zero, action, labels };
        if let Some(a) = m.neg.iter().position(|&x| x == u32::MAX) {
            return bad(format!("element {a} has no additive inverse"));
        }
        let ring = m.ring.clone();
        for a in 0..n {
            if m.add(a, zero) != a {
                return bad(format!("{zero} is not the zero for {a}"));
            }
            if m.act(ring.one(), a) != a {
                return bad(format!("1·{a} != {a}"));
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
                for c in 0..ring.size() {
                    if m.act(c, m.add(a, b)) != m.add(m.act(c, a), m.act(c, b)) {
                        return bad(format!("c·(a+b) != c·a + c·b at (c={c}, a={a}, b={b})"));
                    }
                }
            }
            for c in 0..ring.size() {
                for d in 0..ring.size() {
                    if m.act(ring.mul(c, d), a) != m.act(c, m.act(d, a)) {
                        return bad(format!("(cd)·m != c·(d·m) at (c={c}, d={d}, m={a})"));
                    }
                    if m.act(ring.add(c, d), a) != m.add(m.act(c, a), m.act(d, a)) {
                        return bad(format!("(c+d)·m != c·m + d·m at (c={c}, d={d}, m={a})"));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_json(ring: Arc<FiniteRingTable>, j: &ModuleTableJson) -> Result<Self> {
        let add = flatten("add", &j.add, j.size).map_err(|e| Error::NotAModule(e.to_string()))?;
        if j.action.len() != ring.size() || j.action.iter().any(|r| r.len() != j.size) {
            return Err(Error::NotAModule("action table must be |C| x |M|".into()));
        }
        let action = j.action.iter().flatten().map(|&x| x as u32).collect();
        Self::new(ring, j.size, add, j.zero, action, j.labels.clone())
    }

    pub fn to_json(&self) -> ModuleTableJson {
        let n = self.size;
        ModuleTableJson {
            size: n,
            add: (0..n).map(|a| (0..n).map(|b| self.add(a, b)).collect()).collect(),
            zero: self.zero,
            action: (0..self.ring.size()).map(|c| (0..n).map(|m| self.act(c, m)).collect()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// The zero module over `ring`.
    pub fn zero_module(ring: Arc<FiniteRingTable>) -> Self {
        let r = ring.size();
        Self::new(ring, 1, vec![0], 0, vec![0; r], Some(vec!["0".into()])).expect("zero module")
    }

    /// `C` as a module over itself.
    pub fn regular(ring: Arc<FiniteRingTable>) -> Self {
        let n = ring.size();
        let add = (0..n * n).map(|k| ring.add(k / n, k % n) as u32).collect();
        let act = (0..n * n).map(|k| ring.mul(k / n, k % n) as u32).collect();
        let labels = ring.labels().map(<[String]>::to_vec);
        let zero = ring.zero();
        Self::new(ring, n, add, zero, act, labels).expect("regular module")
    }

    /// `T` viewed as a `C`-module through a ring map `q: C → T`.
    pub fn restriction(q: &RingMap) -> Self {
        let t = q.target().clone();
        let n = t.size();
        let add = (0..n * n).map(|k| t.add(k / n, k % n) as u32).collect();
        let c = q.source().size();
        let act = (0..c * n).map(|k| t.mul(q.apply(k / n), k % n) as u32).collect();
        let labels = t.labels().map(<[String]>::to_vec);
        Self::new(q.source().clone(), n, add, t.zero(), act, labels).expect("restriction of scalars")
    }

    /// `M ⊕ N`, elements indexed `m + |M|·n`.
    pub fn direct_sum(a: &ModuleTable, b: &ModuleTable) -> Result<Self> {
        if a.ring != b.ring {
            return Err(Error::NotAModule("direct sum over different rings".into()));
        }
        let (na, nb) = (a.size, b.size);
        let n = na * nb;
        let split = |k: usize| (k % na, k / na);
        let join = |x: usize, y: usize| (x + na * y) as u32;
        let mut add = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let ((x1, y1), (x2, y2)) = (split(p), split(q));
                add.push(join(a.add(x1, x2), b.add(y1, y2)));
            }
        }
        let mut act = Vec::with_capacity(a.ring.size() * n);
        for c in 0..a.ring.size() {
            for p in 0..n {
                let (x, y) = split(p);
                act.push(join(a.act(c, x), b.act(c, y)));
            }
        }
        let labels = Some((0..n).map(|k| format!("({}, {})", a.label(split(k).0), b.label(split(k).1))).collect());
        Self::new(a.ring.clone(), n, add, join(a.zero, b.zero) as usize, act, labels)
    }

    pub fn ring(&self) -> &Arc<FiniteRingTable> {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn label(&self, a: usize) -> String {
        self.labels.as_ref().map_or_else(|| a.to_string(), |l| l[a].clone())
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn act(&self, c: usize, m: usize) -> usize {
        self.action[c * self.size + m] as usize
    }
}

/// A ring homomorphism between finite tables, verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMap {
    source: Arc<FiniteRingTable>,
    target: Arc<FiniteRingTable>,
    map: Vec<usize>,
}

impl RingMap {
    pub fn new(source: Arc<FiniteRingTable>, target: Arc<FiniteRingTable>, map: Vec<usize>) -> Result<Self> {
        let bad = |m: String| Err(Error::NotARingHom(m));
        if map.len() != source.size() || map.iter().any(|&x| x >= target.size()) {
            return bad("map has the wrong length or targets out of range".into());
        }
        if !target.accepts_base(source.base()) {
            return bad(format!("base {} does not map to base {}", source.base(), target.base()));
        }
        if map[source.one()] != target.one() {
            return bad("1 is not sent to 1".into());
        }
        for a in 0..source.size() {
            for b in 0..source.size() {
                if map[source.add(a, b)] != target.add(map[a], map[b]) {
                    return bad(format!("not additive at ({a}, {b})"));
                }
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return bad(format!("not multiplicative at ({a}, {b})"));
                }
            }
        }
        Ok(RingMap { source, target, map })
    }

    pub fn identity(t: Arc<FiniteRingTable>) -> Self {
        let map = (0..t.size()).collect();
        RingMap { source: t.clone(), target: t, map }
    }

    pub fn source(&self) -> &Arc<FiniteRingTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteRingTable> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &x in &self.map {
            hit[x] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Elements of the fiber over `c`.
    pub fn fiber(&self, c: usize) -> Vec<usize> {
        (0..self.source.size()).filter(|&d| self.map[d] == c).collect()
    }
}

/// Kernel of a surjection `q: D → C`.
#[derive(Debug, Clone)]
pub struct KernelData {
    /// Kernel elements as indices into `D`, ascending.
    pub elements: Vec<usize>,
    /// First pair `(k, k')` in the kernel with `k·k' ≠ 0`, if any.
    pub square_violation: Option<(usize, usize, usize)>,
    /// `K` as a `C`-module, present when `K² = 0`.
    pub module: Option<ModuleTable>,
}

impl KernelData {
    pub fn is_square_zero(&self) -> bool {
        self.square_violation.is_none()
    }
}

pub fn kernel_of_surjection(q: &RingMap) -> Result<KernelData> {
    if !q.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let d = q.source();
    let c = q.target();
    let elements: Vec<usize> = q.fiber(c.zero());
    let mut square_violation = None;
    'outer: for &a in &elements {
        for &b in &elements {
            let p = d.mul(a, b);
            if p != d.zero() {
                square_violation = Some((a, b, p));
                break 'outer;
            }
        }
    }
    if square_violation.is_some() {
        return Ok(KernelData { elements, square_violation, module: None });
    }
    let k = elements.len();
    let index = |x: usize| elements.binary_search(&x).expect("closed under the operation");
    let mut add = Vec::with_capacity(k * k);
    for &a in &elements {
        for &b in &elements {
            add.push(index(d.add(a, b)) as u32);
        }
    }
    let mut action = vec![0u32; c.size() * k];
    for cc in 0..c.size() {
        let pre = q.fiber(cc);
        for (ki, &kv) in elements.iter().enumerate() {
            let v = d.mul(pre[0], kv);
            // well defined: every preimage acts the same way
            for &other in &pre[1..] {
                if d.mul(other, kv) != v {
                    return Err(Error::NotAModule(format!(
                        "action of {cc} on kernel element {kv} depends on the preimage"
                    )));
                }
            }
            action[cc * k + ki] = index(v) as u32;
        }
    }
    let labels = Some(elements.iter().map(|&x| d.label(x)).collect());
    let module = ModuleTable::new(c.clone(), k, add, index(d.zero()), action, labels)?;
    Ok(KernelData { elements, square_violation, module: Some(module) })
}

/// All ring homomorphisms `src → dst` (unital, additive, multiplicative) with
/// `s(a) ∈ candidates(a)`, found by closure-propagating backtracking.
/// Stops after `limit` solutions.
pub fn search_ring_homs(
    src: &FiniteRingTable,
    dst: &FiniteRingTable,
    candidates: &dyn Fn(usize) -> Vec<usize>,
    limit: usize,
) -> Vec<Vec<usize>> {
    let n = src.size();
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; n];
    let fixed = [(src.zero(), dst.zero()), (src.one(), dst.one())];
    for (a, v) in fixed {
        if !candidates(a).contains(&v) || (assign[a] != usize::MAX && assign[a] != v) {
            return out;
        }
        assign[a] = v;
    }
    if propagate(src, dst, &mut assign, candidates) {
        backtrack(src, dst, &mut assign, candidates, limit, &mut out);
    }
    out.sort();
    out
}

fn propagate(src: &FiniteRingTable, dst: &FiniteRingTable, assign: &mut [usize], cand: &dyn Fn(usize) -> Vec<usize>) -> bool {
    let n = src.size();
    loop {
        let mut changed = false;
        for a in 0..n {
            if assign[a] == usize::MAX {
                continue;
            }
            for b in a..n {
                if assign[b] == usize::MAX {
                    continue;
                }
                for (s, v) in [
                    (src.add(a, b), dst.add(assign[a], assign[b])),
                    (src.mul(a, b), dst.mul(assign[a], assign[b])),
                ] {
                    if assign[s] == usize::MAX {
                        if !cand(s).contains(&v) {
                            return false;
                        }
                        assign[s] = v;
                        changed = true;
                    } else if assign[s] != v {
                        return false;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn backtrack(
    src: &FiniteRingTable,
    dst: &FiniteRingTable,
    assign: &mut Vec<usize>,
    cand: &dyn Fn(usize) -> Vec<usize>,
    limit: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if out.len() >= limit {
        return;
    }
    let Some(a) = assign.iter().position(|&x| x == usize::MAX) else {
        out.push(assign.clone());
        return;
    };
    for v in cand(a) {
        let mut next = assign.clone();
        next[a] = v;
        if propagate(src, dst, &mut next, cand) {
            backtrack(src, dst, &mut next, cand, limit, out);
        }
        if out.len() >= limit {
            return;
        }
    }
}

/// An isomorphism of rings `a → b`, if one exists.
pub fn find_ring_isomorphism(a: &FiniteRingTable, b: &FiniteRingTable) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let all: Vec<usize> = (0..b.size()).collect();
    search_ring_homs(a, b, &|_| all.clone(), usize::MAX)
        .into_iter()
        .find(|m| {
            let mut seen = vec![false; b.size()];
            m.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        })
}
