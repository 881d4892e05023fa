use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    name: String,
    size: usize,
    mul: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupTableJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub size: usize,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn validate_group(j: &GroupTableJson) -> Result<FiniteGroupTable> {
    let n = j.size;
    if n == 0 || j.mul.len() != n || j.mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(Error::InvalidTable(format!("Cayley table must be {n}x{n} with entries below {n}")));
    }
    if j.labels.as_ref().is_some_and(|l| l.len() != n) {
        return Err(Error::InvalidTable("label count".into()));
    }
    let mul: Vec<u32> = j.mul.iter().flatten().map(|&x| x as u32).collect();
    FiniteGroupTable::new(j.name.clone().unwrap_or_default(), n, mul, j.identity, j.labels.clone())
}

impl FiniteGroupTable {
    pub fn new(name: String, size: usize, mul: Vec<u32>, identity: usize, labels: Option<Vec<String>>) -> Result<Self> {
        let n = size;
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        if identity >= n || (0..n).any(|a| at(identity, a) != a || at(a, identity) != a) {
            return Err(Error::NoIdentity);
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(Error::NoInverse(a))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FiniteGroupTable { name, size, mul, identity, inverse, labels })
    }

    pub fn to_json(&self) -> GroupTableJson {
        let n = self.size;
        GroupTableJson {
            name: (!self.name.is_empty()).then(|| self.name.clone()),
            size: n,
            mul: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect(),
            identity: self.identity,
            labels: self.labels.clone(),
        }
    }

    pub fn trivial() -> Self {
        FiniteGroupTable::new("trivial".into(), 1, vec![0], 0, None).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        FiniteGroupTable::new(format!("Z{n}"), n, mul, 0, Some(labels)).expect("cyclic group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> String {
        self.labels.as_ref().map_or_else(|| a.to_string(), |l| l[a].clone())
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Greedy generating set: repeatedly adjoin the smallest element outside
    /// the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![false; self.size];
        sub[self.identity] = true;
        while let Some(g) = sub.iter().position(|&s| !s) {
            gens.push(g);
            sub = self.closure(&gens);
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut sub = vec![false; self.size];
        sub[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !sub[y] {
                    sub[y] = true;
                    frontier.push(y);
                }
            }
        }
        sub
    }
}

/// A verified group homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FiniteGroupTable>,
    target: Arc<FiniteGroupTable>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroupTable>, target: Arc<FiniteGroupTable>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() || map.iter().any(|&x| x >= target.size()) {
            return Err(Error::NotAGroupHom("map has the wrong length or targets out of range".into()));
        }
        for a in 0..source.size() {
            for b in 0..source.size() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::NotAGroupHom(format!("not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn source(&self) -> &Arc<FiniteGroupTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupTable> {
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

    pub fn fiber(&self, g: usize) -> Vec<usize> {
        (0..self.source.size()).filter(|&e| self.map[e] == g).collect()
    }
}

/// Sorted, duplicate-free `Hom(H, E)` as full element maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHomSet {
    pub homs: Vec<Vec<usize>>,
}

impl GroupHomSet {
    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.homs.binary_search_by(|h| h.as_slice().cmp(map)).ok()
    }
}

/// All homs `H → E`, determined by their values on a generating set of `H`.
pub fn enumerate_group_homs(h: &FiniteGroupTable, e: &FiniteGroupTable, max_homs: u64) -> Result<GroupHomSet> {
    let gens = h.generators();
    let space = (e.size() as u128).checked_pow(gens.len() as u32);
    if space.is_none_or(|s| s > max_homs as u128) {
        return Err(Error::ResourceLimit(format!(
            "{}^{} generator assignments exceed the bound {max_homs}",
            e.size(),
            gens.len()
        )));
    }
    let all: Vec<usize> = (0..e.size()).collect();
    let homs = search_group_homs(h, e, &gens, &|_| all.clone(), usize::MAX);
    Ok(GroupHomSet { homs })
}

/// Homs `src → dst` with `s(a) ∈ candidates(a)`: branch on the values of
/// `gens` in order, then close under products and check consistency.
pub fn search_group_homs(
    src: &FiniteGroupTable,
    dst: &FiniteGroupTable,
    gens: &[usize],
    candidates: &dyn Fn(usize) -> Vec<usize>,
    limit: usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; src.size()];
    assign[src.identity()] = dst.identity();
    if !candidates(src.identity()).contains(&dst.identity()) {
        return out;
    }
    branch(src, dst, gens, 0, &mut assign, candidates, limit, &mut out);
    out.sort();
    out.dedup();
    out
}

#[allow(clippy::too_many_arguments)]
fn branch(
    src: &FiniteGroupTable,
    dst: &FiniteGroupTable,
    gens: &[usize],
    k: usize,
    assign: &mut Vec<usize>,
    cand: &dyn Fn(usize) -> Vec<usize>,
    limit: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if out.len() >= limit {
        return;
    }
    if k == gens.len() {
        let mut full = assign.clone();
        if close(src, dst, &mut full, cand) && full.iter().all(|&x| x != usize::MAX) {
            out.push(full);
        }
        return;
    }
    let g = gens[k];
    if assign[g] != usize::MAX {
        branch(src, dst, gens, k + 1, assign, cand, limit, out);
        return;
    }
    for v in cand(g) {
        let mut next = assign.clone();
        next[g] = v;
        if close(src, dst, &mut next, cand) {
            branch(src, dst, gens, k + 1, &mut next, cand, limit, out);
        }
    }
}

/// Propagates `s(ab) = s(a)s(b)` to a fixed point; false on conflict.
fn close(src: &FiniteGroupTable, dst: &FiniteGroupTable, assign: &mut [usize], cand: &dyn Fn(usize) -> Vec<usize>) -> bool {
    let n = src.size();
    loop {
        let mut changed = false;
        for a in 0..n {
            if assign[a] == usize::MAX {
                continue;
            }
            for b in 0..n {
                if assign[b] == usize::MAX {
                    continue;
                }
                let (s, v) = (src.mul(a, b), dst.mul(assign[a], assign[b]));
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
        if !changed {
            return true;
        }
    }
}

/// An isomorphism `a → b`, if one exists.
pub fn find_group_isomorphism(a: &FiniteGroupTable, b: &FiniteGroupTable) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let all: Vec<usize> = (0..b.size()).collect();
    search_group_homs(a, b, &a.generators(), &|_| all.clone(), usize::MAX).into_iter().find(|m| {
        let mut seen = vec![false; b.size()];
        m.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(validate_group(&FiniteGroupTable::cyclic(4).to_json()).is_ok());
        // x·y = x - y mod 3 is not associative and has no two-sided identity
        let j = GroupTableJson {
            name: None,
            size: 3,
            mul: (0..3).map(|a| (0..3).map(|b| (a + 3 - b) % 3).collect()).collect(),
            identity: 0,
            labels: None,
        };
        assert_eq!(validate_group(&j), Err(Error::NoIdentity));
        // a Latin square with identity 0 that is not associative
        let j = GroupTableJson {
            name: None,
            size: 5,
            mul: vec![
                vec![0, 1, 2, 3, 4],
                vec![1, 0, 3, 4, 2],
                vec![2, 4, 0, 1, 3],
                vec![3, 2, 4, 0, 1],
                vec![4, 3, 1, 2, 0],
            ],
            identity: 0,
            labels: None,
        };
        assert!(matches!(validate_group(&j), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn hom_counts() {
        let z2 = FiniteGroupTable::cyclic(2);
        let z4 = FiniteGroupTable::cyclic(4);
        let homs = enumerate_group_homs(&z2, &z4, 1000).unwrap();
        assert_eq!(homs.homs, vec![vec![0, 0], vec![0, 2]]);
        assert_eq!(enumerate_group_homs(&FiniteGroupTable::trivial(), &z4, 1000).unwrap().len(), 1);
        assert!(matches!(enumerate_group_homs(&z4, &z4, 3), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn generators_generate() {
        let z8 = FiniteGroupTable::cyclic(8);
        assert_eq!(z8.generators(), vec![1]);
        assert!(find_group_isomorphism(&z8, &FiniteGroupTable::cyclic(8)).is_some());
        assert!(find_group_isomorphism(&z8, &FiniteGroupTable::cyclic(4)).is_none());
    }
}
