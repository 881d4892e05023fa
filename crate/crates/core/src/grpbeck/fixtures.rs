use std::path::Path;
use std::sync::Arc;

use super::{enumerate_group_homs, validate_group, FiniteGroupTable, GroupHom, GroupTableJson};
use crate::error::{Error, Result};

/// The groups of order at most 8 up to isomorphism, ordered by size.
const FIXTURES: [(&str, &str); 14] = [
    ("trivial", include_str!("../../fixtures/groups/trivial.json")),
    ("Z2", include_str!("../../fixtures/groups/Z2.json")),
    ("Z3", include_str!("../../fixtures/groups/Z3.json")),
    ("Z4", include_str!("../../fixtures/groups/Z4.json")),
    ("V4", include_str!("../../fixtures/groups/V4.json")),
    ("Z5", include_str!("../../fixtures/groups/Z5.json")),
    ("Z6", include_str!("../../fixtures/groups/Z6.json")),
    ("S3", include_str!("../../fixtures/groups/S3.json")),
    ("Z7", include_str!("../../fixtures/groups/Z7.json")),
    ("Z8", include_str!("../../fixtures/groups/Z8.json")),
    ("Z4xZ2", include_str!("../../fixtures/groups/Z4xZ2.json")),
    ("Z2xZ2xZ2", include_str!("../../fixtures/groups/Z2xZ2xZ2.json")),
    ("D4", include_str!("../../fixtures/groups/D4.json")),
    ("Q8", include_str!("../../fixtures/groups/Q8.json")),
];

fn parse(name: &str, text: &str) -> Result<Arc<FiniteGroupTable>> {
    let mut j: GroupTableJson = serde_json::from_str(text)?;
    j.name.get_or_insert_with(|| name.to_string());
    Ok(Arc::new(validate_group(&j)?))
}

/// Built-in fixture groups of order at most `max_order`.
pub fn fixture_groups(max_order: usize) -> Vec<Arc<FiniteGroupTable>> {
    FIXTURES
        .iter()
        .map(|(n, t)| parse(n, t).expect("built-in fixture is valid"))
        .filter(|g| g.size() <= max_order)
        .collect()
}

/// Loads every `*.json` group table in `dir`, sorted by (size, file name).
pub fn load_groups(dir: &Path, max_order: usize) -> Result<Vec<Arc<FiniteGroupTable>>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Input(format!("fixtures {}: {e}", dir.display())))?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| Error::Input(format!("{}: {e}", f.display())))?;
        let stem = f.file_stem().and_then(|s| s.to_str()).unwrap_or("group");
        let g = parse(stem, &text)?;
        if g.size() <= max_order {
            out.push(g);
        }
    }
    if out.is_empty() && max_order > 0 {
        return Err(Error::Input(format!("no group fixtures in {}", dir.display())));
    }
    out.sort_by_key(|g| g.size());
    Ok(out)
}

/// Surjections `E → G` between corpus groups with `1 ≤ |G| < |E|` or
/// `E = G`, at most `per_pair` per ordered pair, in canonical order.
/// Each entry is `(id, map)` with id `E->G#k`.
pub fn group_surjections(groups: &[Arc<FiniteGroupTable>], per_pair: usize, max_homs: u64) -> Result<Vec<(String, GroupHom)>> {
    let mut out = Vec::new();
    for e in groups {
        for g in groups {
            if e.size() % g.size() != 0 || (g.size() == e.size() && !Arc::ptr_eq(e, g)) {
                continue;
            }
            let homs = enumerate_group_homs(e, g, max_homs)?;
            let surj = homs.homs.into_iter().filter(|m| {
                let mut hit = vec![false; g.size()];
                m.iter().for_each(|&x| hit[x] = true);
                hit.into_iter().all(|h| h)
            });
            for (k, m) in surj.take(per_pair).enumerate() {
                out.push((format!("{}->{}#{k}", e.name(), g.name()), GroupHom::new(e.clone(), g.clone(), m)?));
            }
        }
    }
    Ok(out)
}
