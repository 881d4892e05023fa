use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::beck::{
    identity_pullback_matches, kahler_table, lift_check_beck, lift_check_torsor, torsor_fiber_bijection_with_limits,
    trivial_extension, unramified_check_with_limits, verify_torsor, BeckModule, TorsorCandidate,
};
use crate::error::{Error, Result};
use crate::exactnum::BaseKind;
use crate::fpalg::{
    search_ring_homs, to_finite_table, AlgebraHom, AlgebraJson, AlgebraPresentation, FiniteRingTable, ModuleTable,
    RingMap,
};
use crate::polyring::{parse_poly, Limits, PolyRing, Polynomial};
use crate::report::{CaseReport, SuiteReport, Verdict};

const ALGEBRAS: &str = include_str!("../../fixtures/rings/algebras.json");

/// Number of seeded random algebras appended to the fixture list.
pub const RANDOM_ALGEBRAS: usize = 8;
/// Largest Beck module base in the corpus.
pub const MAX_BASE: usize = 16;
/// `B ⊕ Ω` is tabulated for the explicit non-injectivity check up to this size.
const MAX_WITNESS_TABLE: usize = 256;
const REDUCTION_PRIMES: [u32; 4] = [2, 3, 5, 7];

#[derive(Debug, Clone)]
pub struct AlgebraCase {
    pub id: String,
    pub presentation: Arc<AlgebraPresentation>,
}

#[derive(Deserialize)]
struct AlgebraFixture {
    id: String,
    #[serde(flatten)]
    body: AlgebraJson,
}

#[derive(Debug, Clone)]
pub struct BeckCase {
    pub id: String,
    pub module: BeckModule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsorExpectation {
    Split,
    NonSplit,
    KernelSquareNonzero,
}

#[derive(Debug, Clone)]
pub struct TorsorCase {
    pub id: String,
    pub map: RingMap,
    pub expect: TorsorExpectation,
}

/// Everything the ring suite quantifies over.
#[derive(Debug, Clone)]
pub struct RingCorpus {
    pub algebras: Vec<AlgebraCase>,
    /// Domains `X` for the torsor fiber bijection; includes ℤ-algebras.
    pub test_objects: Vec<AlgebraCase>,
    pub beck_modules: Vec<BeckCase>,
    pub torsors: Vec<TorsorCase>,
}

fn alg(base: BaseKind, gens: &[&str], rels: &[&str]) -> Arc<AlgebraPresentation> {
    Arc::new(AlgebraPresentation::parse(base, gens, rels).expect("built-in presentation parses"))
}

/// The shipped fixture algebras in file order.
pub fn fixture_algebras() -> Result<Vec<AlgebraCase>> {
    let raw: Vec<AlgebraFixture> = serde_json::from_str(ALGEBRAS)?;
    raw.into_iter()
        .map(|f| {
            let p = AlgebraPresentation::from_json(&f.body, Limits::default())?;
            Ok(AlgebraCase { id: f.id, presentation: Arc::new(p) })
        })
        .collect()
}

/// Zero-dimensional algebras over 𝔽₂, 𝔽₃ or 𝔽₅ drawn from `seed`. Each
/// generator gets a monic univariate relation, so the quotient is finite;
/// a second generator may also get a mixed relation.
pub fn random_algebras(seed: u64, count: usize) -> Vec<AlgebraCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let ngens = rng.gen_range(1..=2);
        let names = ["x", "y"];
        let mut rels = Vec::new();
        let mut budget = 9usize;
        for (i, name) in names.iter().take(ngens).enumerate() {
            // keep Π deg ≤ 9 so dim B ≤ 9
            let max_deg = if i + 1 == ngens { budget } else { budget / 2 }.clamp(1, 3);
            let deg = rng.gen_range(1..=max_deg);
            budget /= deg;
            let mut terms = vec![format!("{name}^{deg}")];
            for e in (0..deg).rev() {
                let c = rng.gen_range(0..p);
                if c != 0 {
                    terms.push(match e {
                        0 => format!("{c}"),
                        1 => format!("{c}*{name}"),
                        _ => format!("{c}*{name}^{e}"),
                    });
                }
            }
            rels.push(terms.join(" + "));
        }
        if ngens == 2 && rng.gen_bool(0.5) {
            let c = rng.gen_range(0..p);
            rels.push(format!("x*y + {c}*x"));
        }
        let base = BaseKind::Fp(p);
        let gens: Vec<&str> = names[..ngens].to_vec();
        let rels_ref: Vec<&str> = rels.iter().map(String::as_str).collect();
        out.push(AlgebraCase { id: format!("rand-{seed}-{k}"), presentation: alg(base, &gens, &rels_ref) });
    }
    out
}

fn zero_dim(p: &AlgebraPresentation) -> Option<usize> {
    p.dimension().ok().flatten()
}

/// Small rings used as Beck module bases and torsor targets.
fn base_rings() -> Vec<(String, Arc<FiniteRingTable>)> {
    let f = |n: u32| BaseKind::Fp(n);
    let presented: Vec<(&str, Arc<AlgebraPresentation>)> = vec![
        ("F2", alg(f(2), &[], &[])),
        ("F3", alg(f(3), &[], &[])),
        ("F5", alg(f(5), &[], &[])),
        ("F4", alg(f(2), &["x"], &["x^2 + x + 1"])),
        ("F2[x]/x2", alg(f(2), &["x"], &["x^2"])),
        ("F2xF2", alg(f(2), &["x"], &["x^2 + x"])),
        ("F3[x]/x2", alg(f(3), &["x"], &["x^2"])),
        ("F9", alg(f(3), &["x"], &["x^2 + 1"])),
        ("F2[x]/x3", alg(f(2), &["x"], &["x^3"])),
        ("F2[x]/x4", alg(f(2), &["x"], &["x^4"])),
        ("F2[x,y]/(x2,y2)", alg(f(2), &["x", "y"], &["x^2", "y^2"])),
        ("F4[x]/x2", alg(f(2), &["x", "y"], &["x^2 + x + 1", "y^2"])),
    ];
    let mut out: Vec<(String, Arc<FiniteRingTable>)> = presented
        .into_iter()
        .map(|(n, p)| (n.to_string(), to_finite_table(&p).expect("small table").table().clone()))
        .collect();
    for n in [2usize, 4, 6, 9] {
        out.push((format!("Z/{n}"), Arc::new(FiniteRingTable::integers_mod(n, BaseKind::Int).expect("Z/n"))));
    }
    out
}

fn surjections(src: &FiniteRingTable, dst: &FiniteRingTable, limit: usize) -> Vec<Vec<usize>> {
    if src.size() % dst.size() != 0 {
        return Vec::new();
    }
    let all: Vec<usize> = (0..dst.size()).collect();
    search_ring_homs(src, dst, &|_| all.clone(), usize::MAX)
        .into_iter()
        .filter(|m| {
            let mut hit = vec![false; dst.size()];
            m.iter().for_each(|&x| hit[x] = true);
            hit.into_iter().all(|h| h)
        })
        .take(limit)
        .collect()
}

/// Beck modules `C ⊕ M` with `|C| ≤ 16` and `|M| ≤ max_module`: the zero
/// module, restrictions of small quotients (including `C` itself when small)
/// and direct sums of a residue field with itself.
fn beck_modules(bases: &[(String, Arc<FiniteRingTable>)], max_module: usize) -> Result<Vec<BeckCase>> {
    let mut out = Vec::new();
    for (cname, c) in bases {
        if c.size() > MAX_BASE {
            continue;
        }
        let mut mods: Vec<(String, ModuleTable)> = vec![("0".into(), ModuleTable::zero_module(c.clone()))];
        for (qname, q) in bases {
            if q.size() > max_module || q.size() > c.size() {
                continue;
            }
            for (k, m) in surjections(c, q, 2).into_iter().enumerate() {
                let map = RingMap::new(c.clone(), q.clone(), m)?;
                let restricted = ModuleTable::restriction(&map);
                let tag = if k == 0 { qname.clone() } else { format!("{qname}#{k}") };
                if q.size() * q.size() <= max_module && is_field_table(q) {
                    mods.push((format!("{tag}+{tag}"), ModuleTable::direct_sum(&restricted, &restricted)?));
                }
                mods.push((tag, restricted));
            }
        }
        for (mname, m) in mods {
            if m.size() > max_module {
                continue;
            }
            out.push(BeckCase { id: format!("{cname}|{mname}"), module: trivial_extension(c.clone(), m)? });
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

fn is_field_table(t: &FiniteRingTable) -> bool {
    t.size() > 1 && (0..t.size()).filter(|&a| a != t.zero()).all(|a| (0..t.size()).any(|b| t.mul(a, b) == t.one()))
}

/// `q: S → T` sending generator `i` of `S` to the image of `images[i]`.
fn presented_map(s: &Arc<AlgebraPresentation>, t: &Arc<AlgebraPresentation>, images: &[&str]) -> Result<RingMap> {
    let st = to_finite_table(s)?;
    let tt = to_finite_table(t)?;
    let imgs = images
        .iter()
        .map(|g| tt.element_of(&parse_poly(g, t.ring())?))
        .collect::<Result<Vec<_>>>()?;
    let h = AlgebraHom::new(s.clone(), tt.table().clone(), imgs)?;
    let map = (0..st.table().size()).map(|e| h.apply(&st.polynomial_of(e))).collect::<Result<Vec<_>>>()?;
    RingMap::new(st.table().clone(), tt.table().clone(), map)
}

fn fixture_torsors() -> Result<Vec<TorsorCase>> {
    use TorsorExpectation::*;
    let f = |n: u32| BaseKind::Fp(n);
    let x = |p: u32, rel: &str| alg(f(p), &["x"], &[rel]);
    let cases: Vec<(&str, Arc<AlgebraPresentation>, Arc<AlgebraPresentation>, Vec<&str>, TorsorExpectation)> = vec![
        ("F2[x]/x3->F2[x]/x2", x(2, "x^3"), x(2, "x^2"), vec!["x"], NonSplit),
        ("F2[x]/x4->F2[x]/x2", x(2, "x^4"), x(2, "x^2"), vec!["x"], NonSplit),
        ("F2[x]/x4->F2[x]/x3", x(2, "x^4"), x(2, "x^3"), vec!["x"], NonSplit),
        ("F3[x]/x3->F3[x]/x2", x(3, "x^3"), x(3, "x^2"), vec!["x"], NonSplit),
        ("F2[x]/(x2+x+1)2->F4", x(2, "x^4 + x^2 + 1"), x(2, "x^2 + x + 1"), vec!["x"], Split),
        (
            "F2[x,y]/(x2,y2)->F2[x]/x2",
            alg(f(2), &["x", "y"], &["x^2", "y^2"]),
            x(2, "x^2"),
            vec!["x", "0"],
            Split,
        ),
        ("F2[x]/x4->F2", x(2, "x^4"), alg(f(2), &[], &[]), vec!["0"], KernelSquareNonzero),
    ];
    let mut out = Vec::new();
    for (id, s, t, imgs, expect) in cases {
        out.push(TorsorCase { id: id.into(), map: presented_map(&s, &t, &imgs)?, expect });
    }
    for (from, to, expect) in [(4usize, 2usize, NonSplit), (9, 3, NonSplit), (8, 2, KernelSquareNonzero)] {
        let zs = Arc::new(FiniteRingTable::integers_mod(from, BaseKind::Int)?);
        let zt = Arc::new(FiniteRingTable::integers_mod(to, BaseKind::Int)?);
        let map = RingMap::new(zs, zt, (0..from).map(|k| k % to).collect())?;
        out.push(TorsorCase { id: format!("Z/{from}->Z/{to}"), map, expect });
    }
    Ok(out)
}

/// ℤ-algebras used only as fiber-bijection domains.
fn integer_test_objects() -> Vec<AlgebraCase> {
    let z = BaseKind::Int;
    vec![
        AlgebraCase { id: "z-base".into(), presentation: alg(z, &[], &[]) },
        AlgebraCase { id: "z-2".into(), presentation: alg(z, &[], &["2"]) },
        AlgebraCase { id: "z-t2".into(), presentation: alg(z, &["t"], &["t^2"]) },
        AlgebraCase { id: "z-t2-t".into(), presentation: alg(z, &["t"], &["t^2 - t"]) },
    ]
}

/// Builds the corpus for `--max-size N`: algebras of dimension at most `N`,
/// Beck modules with `|M| ≤ N` and torsors whose kernel has at most `N`
/// elements. `N = 0` yields an empty corpus.
pub fn ring_corpus(max_size: usize, seed: u64) -> Result<RingCorpus> {
    if max_size == 0 {
        return Ok(RingCorpus { algebras: vec![], test_objects: vec![], beck_modules: vec![], torsors: vec![] });
    }
    let mut algebras: Vec<AlgebraCase> = fixture_algebras()?
        .into_iter()
        .chain(random_algebras(seed, RANDOM_ALGEBRAS))
        .filter(|a| zero_dim(&a.presentation).is_some_and(|d| d <= max_size))
        .collect();
    algebras.sort_by(|a, b| a.id.cmp(&b.id));
    let mut test_objects: Vec<AlgebraCase> = algebras.iter().cloned().chain(integer_test_objects()).collect();
    test_objects.sort_by(|a, b| a.id.cmp(&b.id));
    let bases = base_rings();
    let beck_modules = beck_modules(&bases, max_size)?;
    let torsors = fixture_torsors()?
        .into_iter()
        .filter(|t| t.map.source().size() / t.map.target().size() <= max_size)
        .collect();
    Ok(RingCorpus { algebras, test_objects, beck_modules, torsors })
}

/// Verified torsors the lifting oracle quantifies over: the fixture torsors
/// that pass `verify_torsor` and every Beck module as a self-torsor.
struct Prepared {
    torsors: Vec<(String, TorsorCandidate)>,
}

fn prepare(corpus: &RingCorpus) -> Prepared {
    let mut torsors: Vec<(String, TorsorCandidate)> = corpus
        .torsors
        .iter()
        .filter_map(|t| verify_torsor(&t.map).ok().map(|c| (format!("torsor:{}", t.id), c)))
        .collect();
    torsors.extend(
        corpus
            .beck_modules
            .iter()
            .filter_map(|b| verify_torsor(b.module.projection()).ok().map(|c| (format!("beck:{}", b.id), c))),
    );
    Prepared { torsors }
}

fn compatible(b: &AlgebraPresentation, t: &FiniteRingTable) -> bool {
    t.accepts_base(b.base())
}

/// Lifting oracle over the finite corpus: collisions along torsors and
/// non-bijective Beck projections.
fn lifting_oracle(b: &Arc<AlgebraPresentation>, corpus: &RingCorpus, prep: &Prepared, limits: Limits) -> Result<Value> {
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for (id, t) in &prep.torsors {
        if !compatible(b, t.total()) {
            continue;
        }
        checked += 1;
        let r = lift_check_torsor(b, t, limits)?;
        if !r.injective {
            let (h1, h2) = r.collision.expect("non-injective report carries a collision");
            violations.push(json!({ "torsor": id, "collision": [h1, h2] }));
        }
    }
    let mut non_bijective = Vec::new();
    let mut beck_checked = 0usize;
    for m in &corpus.beck_modules {
        if !compatible(b, m.module.total()) {
            continue;
        }
        beck_checked += 1;
        let r = lift_check_beck(b, &m.module, limits)?;
        if !r.bijective() {
            non_bijective.push(json!({ "module": m.id, "injective": r.injective, "surjective": r.surjective }));
        }
    }
    Ok(json!({
        "torsors_checked": checked,
        "violations": violations,
        "beck_modules_checked": beck_checked,
        "non_bijective": non_bijective,
    }))
}

/// The explicit pair `x ↦ (x, 0)`, `x ↦ (x, dx)` in the tabulated `B ⊕ Ω`,
/// and the lift report along its projection.
fn finite_witness(b: &Arc<AlgebraPresentation>, limits: Limits) -> Result<Option<Value>> {
    let Some(dim) = zero_dim(b) else { return Ok(None) };
    let p = b.base().characteristic() as u128;
    if p == 0 || p.checked_pow(dim as u32).is_none_or(|s| s > MAX_WITNESS_TABLE as u128) {
        return Ok(None);
    }
    let kt = match kahler_table(b) {
        Ok(kt) => kt,
        Err(Error::ResourceLimit(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if kt.quotient.table().size() * kt.omega.size() > MAX_WITNESS_TABLE {
        return Ok(None);
    }
    let beck = trivial_extension(kt.quotient.table().clone(), kt.omega.clone())?;
    let gens = kt.quotient.generator_images();
    let s0: Vec<usize> = gens.iter().map(|&g| beck.pair(g, kt.omega.zero())).collect();
    let s1: Vec<usize> = gens.iter().map(|&g| beck.pair(g, kt.d[g])).collect();
    let both_homs = AlgebraHom::new(b.clone(), beck.total().clone(), s0.clone()).is_ok()
        && AlgebraHom::new(b.clone(), beck.total().clone(), s1.clone()).is_ok();
    let r = lift_check_beck(b, &beck, limits)?;
    Ok(Some(json!({
        "omega_size": kt.omega.size(),
        "total_size": beck.total().size(),
        "s0": s0,
        "s1": s1,
        "pair_is_hom": both_homs,
        "distinct": s0 != s1,
        "injective": r.injective,
        "hom_b_total": r.hom_z,
        "hom_b_b": r.hom_y,
    })))
}

/// Leading monomials of the reduced basis, as exponent vectors.
fn leading_shape(p: &AlgebraPresentation) -> Result<Vec<Vec<u32>>> {
    let gb = p.groebner()?;
    let mut v: Vec<Vec<u32>> = gb.leading_monomials().into_iter().map(|m| m.exponents().to_vec()).collect();
    v.sort();
    Ok(v)
}

/// `B mod p` when every coefficient has a denominator prime to `p`.
pub fn reduce_mod(b: &AlgebraPresentation, p: u32) -> Option<AlgebraPresentation> {
    let base = BaseKind::Fp(p);
    let ring = PolyRing::new(b.generators().to_vec(), base);
    let rels = b
        .relations()
        .iter()
        .map(|f| {
            f.map_into(&ring, |c| {
                let (n, d) = c.to_fraction();
                base.from_fraction(&n, &d)
            })
        })
        .collect::<Result<Vec<Polynomial>>>()
        .ok()?;
    AlgebraPresentation::new(base, b.generators().to_vec(), rels).ok()
}

fn check_algebra(case: &AlgebraCase, corpus: &RingCorpus, prep: &Prepared, limits: Limits) -> Result<CaseReport> {
    let b = &case.presentation;
    let rep = unramified_check_with_limits(b, limits)?;
    let dim = zero_dim(b);
    let mut details = json!({
        "base": b.base(),
        "dimension": dim,
        "omega_zero": rep.unramified,
    });
    let mut ok = true;
    let note;
    if !rep.unramified {
        // exact direction: two distinct lifts of the identity into B ⊕ Ω
        let witness = rep.witness.is_some();
        details["witness_verified"] = json!(witness);
        if let Some(w) = &rep.witness {
            details["differing_generator"] = json!(b.generators()[w.differing_generator]);
        }
        ok &= witness;
        if b.base().is_field() && b.base() != BaseKind::Rat {
            if let Some(fw) = finite_witness(b, limits)? {
                ok &= fw["pair_is_hom"] == json!(true) && fw["distinct"] == json!(true) && fw["injective"] == json!(false);
                details["finite_witness"] = fw;
            }
            let lo = lifting_oracle(b, corpus, prep, limits)?;
            details["lifting"] = lo;
        }
        note = format!("Ω≠0, witness {}", if witness { "verified" } else { "missing" });
    } else if b.base() == BaseKind::Rat {
        // finite targets see a ℚ-algebra only through good reductions
        let shape = leading_shape(b)?;
        let mut reductions = Vec::new();
        let mut good = 0usize;
        for p in REDUCTION_PRIMES {
            let Some(bp) = reduce_mod(b, p) else {
                reductions.push(json!({ "p": p, "good": false, "reason": "denominator" }));
                continue;
            };
            let bp = Arc::new(bp);
            let omega_p = unramified_check_with_limits(&bp, limits)?.unramified;
            if leading_shape(&bp)? != shape || !omega_p {
                reductions.push(json!({ "p": p, "good": false, "reason": "bad reduction" }));
                continue;
            }
            good += 1;
            let lo = lifting_oracle(&bp, corpus, prep, limits)?;
            ok &= lo["violations"].as_array().is_some_and(Vec::is_empty)
                && lo["non_bijective"].as_array().is_some_and(Vec::is_empty);
            reductions.push(json!({ "p": p, "good": true, "lifting": lo }));
        }
        ok &= good > 0;
        details["reductions"] = json!(reductions);
        note = format!("Ω=0, {good} good reductions");
    } else {
        let lo = lifting_oracle(b, corpus, prep, limits)?;
        let v = lo["violations"].as_array().map_or(0, Vec::len);
        let nb = lo["non_bijective"].as_array().map_or(0, Vec::len);
        ok &= v == 0 && nb == 0;
        note = format!("Ω=0, {} torsors, {} Beck modules, {} violations", lo["torsors_checked"], lo["beck_modules_checked"], v + nb);
        details["lifting"] = lo;
    }
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    Ok(CaseReport::new(format!("alg:{}", case.id), "unramified", verdict, note, details))
}

fn fiber_bijections(t: &TorsorCandidate, corpus: &RingCorpus, limits: Limits) -> Result<(bool, Vec<Value>)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for x in &corpus.test_objects {
        if !compatible(&x.presentation, t.total()) {
            continue;
        }
        let r = torsor_fiber_bijection_with_limits(&x.presentation, t, limits)?;
        ok &= r.bijective && r.lhs == r.rhs;
        rows.push(json!([x.id, r.lhs, r.rhs, r.bijective]));
    }
    Ok((ok, rows))
}

fn check_torsor(case: &TorsorCase, corpus: &RingCorpus, limits: Limits) -> Result<CaseReport> {
    let id = format!("torsor:{}", case.id);
    match (verify_torsor(&case.map), case.expect) {
        (Err(Error::KernelSquareNonzero { a, b, product }), TorsorExpectation::KernelSquareNonzero) => Ok(CaseReport::new(
            id,
            "torsor verify",
            Verdict::Pass,
            "rejected: KernelSquareNonzero",
            json!({ "rejected": "KernelSquareNonzero", "a": a, "b": b, "product": product }),
        )),
        (Err(e), _) => Ok(CaseReport::new(id, "torsor verify", Verdict::Fail, format!("unexpected rejection: {e}"), json!({ "error": e.to_string() }))),
        (Ok(_), TorsorExpectation::KernelSquareNonzero) => {
            Ok(CaseReport::new(id, "torsor verify", Verdict::Fail, "accepted a non-square-zero kernel", json!({})))
        }
        (Ok(t), expect) => {
            let split_ok = t.is_split() == (expect == TorsorExpectation::Split);
            let (bij_ok, rows) = fiber_bijections(&t, corpus, limits)?;
            let ok = split_ok && bij_ok && t.fiber_product_size() == t.kernel().len() * t.total().size();
            let details = json!({
                "split": t.is_split(),
                "kernel_size": t.kernel().len(),
                "fiber_product_size": t.fiber_product_size(),
                "fiber_bijections": rows,
            });
            let summary = format!("{}, |K|={}, {} test objects", if t.is_split() { "split" } else { "non-split" }, t.kernel().len(), rows.len());
            Ok(CaseReport::new(id, "torsor verify", if ok { Verdict::Pass } else { Verdict::Fail }, summary, details))
        }
    }
}

fn check_beck(case: &BeckCase, corpus: &RingCorpus, limits: Limits) -> Result<CaseReport> {
    let id = format!("beck:{}", case.id);
    let t = verify_torsor(case.module.projection())?;
    let pull = identity_pullback_matches(&case.module)?;
    let (bij_ok, rows) = fiber_bijections(&t, corpus, limits)?;
    let ok = t.is_split() && pull && bij_ok;
    let details = json!({
        "base_size": case.module.base().size(),
        "module_size": case.module.module().size(),
        "split": t.is_split(),
        "identity_pullback": pull,
        "fiber_bijections": rows,
    });
    let summary = format!("|C|={}, |M|={}, {} test objects", case.module.base().size(), case.module.module().size(), rows.len());
    Ok(CaseReport::new(id, "torsor verify", if ok { Verdict::Pass } else { Verdict::Fail }, summary, details))
}

enum Job<'a> {
    Algebra(&'a AlgebraCase),
    Torsor(&'a TorsorCase),
    Beck(&'a BeckCase),
}

/// Runs every ring check over the corpus; cases come back sorted by id.
pub fn run_ring_suite(max_size: usize, seed: u64, limits: Limits, timings: bool) -> Result<SuiteReport> {
    let corpus = ring_corpus(max_size, seed)?;
    let prep = prepare(&corpus);
    let jobs: Vec<Job> = corpus
        .algebras
        .iter()
        .map(Job::Algebra)
        .chain(corpus.torsors.iter().map(Job::Torsor))
        .chain(corpus.beck_modules.iter().map(Job::Beck))
        .collect();
    let pool = super::thread_pool();
    let mut cases: Vec<CaseReport> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let start = std::time::Instant::now();
                let (id, res) = match job {
                    Job::Algebra(a) => (format!("alg:{}", a.id), check_algebra(a, &corpus, &prep, limits)),
                    Job::Torsor(t) => (format!("torsor:{}", t.id), check_torsor(t, &corpus, limits)),
                    Job::Beck(b) => (format!("beck:{}", b.id), check_beck(b, &corpus, limits)),
                };
                let mut r = res.unwrap_or_else(|e| CaseReport::error(id, "corpus", &e));
                if timings {
                    r.elapsed_ms = start.elapsed().as_millis() as u64;
                }
                r
            })
            .collect()
    });
    cases.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    let alg_cases: Vec<&CaseReport> = cases.iter().filter(|c| c.case_id.starts_with("alg:")).collect();
    let omega_zero = alg_cases.iter().filter(|c| c.details["omega_zero"] == json!(true)).count();
    let inconsistencies = alg_cases.iter().filter(|c| c.verdict != Verdict::Pass).count();
    let summary = json!({
        "algebras": alg_cases.len(),
        "omega_zero": omega_zero,
        "omega_nonzero": alg_cases.len() - omega_zero,
        "inconsistencies": inconsistencies,
        "torsors": corpus.torsors.len(),
        "beck_modules": corpus.beck_modules.len(),
        "test_objects": corpus.test_objects.len(),
    });
    Ok(SuiteReport { suite: "rings".into(), max_size, seed, cases, summary })
}

/// Ideal generators of every corpus algebra, for engine-level checks.
pub fn corpus_ideals(seed: u64) -> Result<Vec<(String, Vec<Polynomial>)>> {
    let mut out: Vec<(String, Vec<Polynomial>)> = fixture_algebras()?
        .into_iter()
        .chain(random_algebras(seed, RANDOM_ALGEBRAS))
        .map(|a| (a.id, a.presentation.relations().to_vec()))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
