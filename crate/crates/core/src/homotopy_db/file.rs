use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{sphere_key, Database, Field, HomEntry, HomKey, HomKind, Inner, SphereEntry};
use crate::abelian::{FgAbGroup, GroupHom, IntMatrix};
use crate::error::{Error, Result};

/// Declared coverage: every `π_m(S^n)` with `n_min ≤ n ≤ n_max` and
/// `n < m ≤ n + stem_max` must have a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeMeta {
    pub n_min: u32,
    pub n_max: u32,
    pub stem_max: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DbFile {
    range: RangeMeta,
    sphere_groups: Vec<SphereRecord>,
    homs: Vec<HomRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SphereRecord {
    m: u32,
    n: u32,
    free_rank: usize,
    torsion: Vec<i64>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    provenance: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomRecord {
    kind: HomKind,
    #[serde(rename = "K", default)]
    field: Option<Field>,
    m: u32,
    n_or_nprime: u32,
    matrix: Vec<Vec<i64>>,
    provenance: String,
}

fn invariant(key: impl ToString, message: impl ToString) -> Error {
    Error::Invariant {
        key: key.to_string(),
        message: message.to_string(),
    }
}

pub(super) fn parse(text: &str, origin: &str) -> Result<Database> {
    if text.trim().is_empty() {
        return Ok(Database::empty());
    }
    let doc: DbFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("{origin}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })?;

    let range = doc.range;
    if range.n_min == 0 || range.n_min > range.n_max {
        return Err(invariant("range", "need 1 <= n_min <= n_max"));
    }

    let mut spheres = BTreeMap::new();
    for rec in doc.sphere_groups {
        let key = sphere_key(rec.m, rec.n);
        if rec.m == 0 || rec.n == 0 {
            return Err(invariant(&key, "m and n must be at least 1"));
        }
        let mut group = FgAbGroup::new(rec.free_rank, rec.torsion).map_err(|e| invariant(&key, e))?;
        if let Some(labels) = rec.labels {
            group = group.with_labels(labels).map_err(|e| invariant(&key, e))?;
        }
        if rec.m < rec.n && !group.is_trivial() {
            return Err(invariant(&key, "pi_m(S^n) must be trivial for m < n"));
        }
        if rec.m == rec.n && !group.is_isomorphic(&FgAbGroup::integers()) {
            return Err(invariant(&key, "pi_n(S^n) must be Z"));
        }
        let entry = SphereEntry {
            group,
            provenance: rec.provenance,
        };
        if spheres.insert((rec.m, rec.n), entry).is_some() {
            return Err(invariant(&key, "duplicate record"));
        }
    }

    for n in range.n_min..=range.n_max {
        for m in n + 1..=n + range.stem_max {
            if !spheres.contains_key(&(m, n)) {
                return Err(Error::RangeHole { m, n });
            }
        }
    }

    // groups are resolved against the sphere table alone
    let groups_only = Database(Arc::new(Inner {
        range: Some(range),
        spheres,
        homs: BTreeMap::new(),
    }));
    let mut homs = BTreeMap::new();
    for rec in doc.homs {
        let (key, entry) = hom_entry(&groups_only, &range, rec)?;
        if homs.insert(key, entry).is_some() {
            return Err(invariant(key, "duplicate record"));
        }
    }
    let inner = Arc::try_unwrap(groups_only.0).expect("sole owner");
    Ok(Database(Arc::new(Inner { homs, ..inner })))
}

fn hom_entry(groups: &Database, range: &RangeMeta, rec: HomRecord) -> Result<(HomKey, HomEntry)> {
    let key = HomKey {
        kind: rec.kind,
        field: rec.field,
        m: rec.m,
        n: rec.n_or_nprime,
    };
    match (rec.kind, rec.field) {
        (HomKind::Boundary, None) => return Err(invariant(key, "boundary records need K")),
        (HomKind::Boundary, Some(_)) => {}
        (_, Some(_)) => return Err(invariant(key, "only boundary records carry K")),
        (_, None) => {}
    }
    let (m, n) = (rec.m, rec.n_or_nprime);
    if m == 0 || n == 0 {
        return Err(invariant(key, "m and n must be at least 1"));
    }
    let resolve = |mm: u32, nn: u32| {
        groups.pi_sphere(mm, nn).map_err(|e| invariant(key, format!("needs pi_{mm}(S^{nn}): {e}")))
    };
    let (domain, codomain) = match rec.kind {
        HomKind::Suspension => (resolve(m, n)?, resolve(m + 1, n + 1)?),
        HomKind::StableSuspension => {
            if n > range.n_max || m + range.n_max < n {
                return Err(invariant(key, "outside the stable window"));
            }
            (resolve(m, n)?, resolve(m + range.n_max - n, range.n_max)?)
        }
        HomKind::Antipodal => {
            let g = resolve(m, n)?;
            (g.clone(), g)
        }
        HomKind::Boundary => {
            let d = rec.field.expect("checked above").dim();
            let nn = d * n;
            if m < 2 {
                return Err(invariant(key, "boundary records need m >= 2"));
            }
            (resolve(m, nn + d - 1)?, resolve(m - 1, nn - 1).or_else(|e| {
                if nn == 1 {
                    Ok(FgAbGroup::trivial())
                } else {
                    Err(e)
                }
            })?)
        }
    };
    let (rows, cols) = (codomain.generator_count(), domain.generator_count());
    let matrix = if rec.matrix.is_empty() && (rows == 0 || cols == 0) {
        IntMatrix::zeros(rows, cols)
    } else {
        if rec.matrix.len() != rows {
            return Err(invariant(
                key,
                format!("matrix has {} rows, {} -> {} needs {rows}", rec.matrix.len(), domain, codomain),
            ));
        }
        IntMatrix::from_rows(&rec.matrix, cols).map_err(|e| invariant(key, e))?
    };
    let hom = GroupHom::new(domain, codomain, matrix).map_err(|e| invariant(key, e))?;

    match rec.kind {
        HomKind::Suspension => check_freudenthal(m, n, &hom)?,
        HomKind::Antipodal => {
            if !hom.is_isomorphism().map_err(|e| invariant(key, e))? {
                return Err(invariant(key, "antipodal action must be an automorphism"));
            }
            if n % 2 == 1 || m < 2 * n - 1 {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                let expected = GroupHom::scalar(hom.domain().clone(), sign).map_err(|e| invariant(key, e))?;
                if !hom.agrees_with(&expected) {
                    return Err(invariant(
                        key,
                        format!("record contradicts the forced action, multiplication by {sign}"),
                    ));
                }
            }
        }
        _ => {}
    }
    Ok((
        key,
        HomEntry {
            hom,
            provenance: rec.provenance,
        },
    ))
}

fn check_freudenthal(m: u32, n: u32, hom: &GroupHom) -> Result<()> {
    let err = |message: &str| Error::Freudenthal {
        m,
        n,
        message: message.to_string(),
    };
    if m + 1 < 2 * n {
        if !hom.is_isomorphism()? {
            return Err(err("must be bijective for m < 2n - 1"));
        }
    } else if m + 1 == 2 * n && !hom.is_surjective()? {
        return Err(err("must be surjective for m = 2n - 1"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(spheres: &str, homs: &str) -> String {
        format!(
            r#"{{"range": {{"n_min": 2, "n_max": 3, "stem_max": 1}},
                "sphere_groups": [{spheres}], "homs": [{homs}]}}"#
        )
    }

    const BASE: &str = r#"
        {"m": 3, "n": 2, "free_rank": 1, "torsion": [], "provenance": "t"},
        {"m": 4, "n": 3, "free_rank": 0, "torsion": [2], "provenance": "t"}"#;

    #[test]
    fn minimal_document_loads() {
        let db = parse(&doc(BASE, ""), "x").unwrap();
        assert_eq!(db.pi_sphere(4, 3).unwrap().torsion(), &[2]);
    }

    #[test]
    fn broken_divisibility_chain_names_the_record() {
        let bad = r#"{"m": 3, "n": 2, "free_rank": 0, "torsion": [4, 2], "provenance": "t"},
                     {"m": 4, "n": 3, "free_rank": 0, "torsion": [2], "provenance": "t"}"#;
        match parse(&doc(bad, ""), "x") {
            Err(Error::Invariant { key, .. }) => assert_eq!(key, "pi(m=3, n=2)"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_window_entry_is_a_hole() {
        let only = r#"{"m": 3, "n": 2, "free_rank": 1, "torsion": [], "provenance": "t"}"#;
        assert_eq!(parse(&doc(only, ""), "x").unwrap_err(), Error::RangeHole { m: 4, n: 3 });
    }

    #[test]
    fn parse_errors_carry_a_location() {
        match parse("{\n  \"range\": 3\n}", "file.json") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("file.json:2:")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse(r#"{"range": {}, "bogus": 1}"#, "f"), Err(Error::Parse { .. })));
    }

    #[test]
    fn suspension_must_be_surjective_at_the_edge() {
        // E: π_3(S^2) → π_4(S^3) sits at m = 2n − 1; the zero map is not onto Z2
        let homs = r#"{"kind": "suspension", "m": 3, "n_or_nprime": 2, "matrix": [[0]], "provenance": "t"}"#;
        assert!(matches!(
            parse(&doc(BASE, homs), "x"),
            Err(Error::Freudenthal { m: 3, n: 2, .. })
        ));
        let homs = r#"{"kind": "suspension", "m": 3, "n_or_nprime": 2, "matrix": [[1]], "provenance": "t"}"#;
        assert!(parse(&doc(BASE, homs), "x").is_ok());
    }

    #[test]
    fn record_shapes_are_checked() {
        let homs = r#"{"kind": "antipodal", "m": 3, "n_or_nprime": 2, "matrix": [[1, 0]], "provenance": "t"}"#;
        assert!(matches!(parse(&doc(BASE, homs), "x"), Err(Error::Invariant { .. })));
        let homs = r#"{"kind": "antipodal", "K": "R", "m": 3, "n_or_nprime": 2, "matrix": [[1]], "provenance": "t"}"#;
        assert!(matches!(parse(&doc(BASE, homs), "x"), Err(Error::Invariant { .. })));
    }
}
