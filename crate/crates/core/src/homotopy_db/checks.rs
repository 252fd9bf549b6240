use super::{sphere_key, Database, HomKind};
use crate::abelian::GroupHom;
use crate::error::Error;
use crate::report::Report;
use crate::trace::Trace;

pub const ANTIPODAL_INVOLUTION: &str = "antipodal-involution";
pub const SUSPENSION_ANTIPODAL: &str = "suspension-antipodal-sign";
pub const STABLE_CONSISTENCY: &str = "stable-consistency";

/// Consistency checks that go beyond what loading enforces.
///
/// * `A∘A = id` wherever the antipodal action is known;
/// * `E∘A = (−1)^{n+1}·E` for every stored suspension — `ΣA` has degree
///   `(−1)^{n+1}` and left composition with a degree-`k` map acts on
///   suspensions as multiplication by `k`;
/// * stored stable suspensions agree with composites of single ones.
pub fn check_database(db: &Database) -> Report {
    let mut report = Report::new();
    let mut keys: Vec<(u32, u32)> = db.sphere_keys().collect();
    keys.extend(db.hom_keys().filter(|k| k.kind == HomKind::Antipodal).map(|k| (k.m, k.n)));
    keys.sort_unstable();
    keys.dedup();

    for &(m, n) in &keys {
        match db.antipodal_action(m, n) {
            Ok(a) => match a.compose(&a) {
                Ok(aa) if aa.agrees_with(&GroupHom::identity(a.domain().clone())) => {
                    report.pass(ANTIPODAL_INVOLUTION)
                }
                Ok(aa) => report.fail(
                    ANTIPODAL_INVOLUTION,
                    format!("antipodal(m={m}, n={n})"),
                    format!("A∘A has matrix {:?}", aa.matrix().to_rows()),
                ),
                Err(e) => report.fail(ANTIPODAL_INVOLUTION, format!("antipodal(m={m}, n={n})"), e.to_string()),
            },
            Err(Error::AntipodalUnknown { .. }) => {}
            Err(e) => report.fail(ANTIPODAL_INVOLUTION, sphere_key(m, n), e.to_string()),
        }
    }

    for key in db.hom_keys().filter(|k| k.kind == HomKind::Suspension) {
        let (m, n) = (key.m, key.n);
        let a = match db.antipodal_action(m, n) {
            Ok(a) => a,
            Err(Error::AntipodalUnknown { .. }) => {
                report.unverifiable(SUSPENSION_ANTIPODAL, key.to_string(), "antipodal action unknown");
                continue;
            }
            Err(e) => {
                report.fail(SUSPENSION_ANTIPODAL, key.to_string(), e.to_string());
                continue;
            }
        };
        let e = db.hom_record(&key).expect("listed key").hom.clone();
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let outcome = e.compose(&a).and_then(|ea| Ok((ea, e.scale(sign)?)));
        match outcome {
            Ok((ea, se)) if ea.agrees_with(&se) => report.pass(SUSPENSION_ANTIPODAL),
            Ok((ea, _)) => report.fail(
                SUSPENSION_ANTIPODAL,
                key.to_string(),
                format!("E∘A = {:?}, expected {sign}·E", ea.matrix().to_rows()),
            ),
            Err(err) => report.fail(SUSPENSION_ANTIPODAL, key.to_string(), err.to_string()),
        }
    }

    if let Ok(top) = db.stable_sphere() {
        for key in db.hom_keys().filter(|k| k.kind == HomKind::StableSuspension) {
            let stored = &db.hom_record(&key).expect("listed key").hom;
            match db.suspension_composite(key.m, key.n, top, &mut Trace::new()) {
                Ok(c) if c.agrees_with(stored) => report.pass(STABLE_CONSISTENCY),
                Ok(c) => report.fail(
                    STABLE_CONSISTENCY,
                    key.to_string(),
                    format!(
                        "stored {:?}, composite {:?}",
                        stored.matrix().to_rows(),
                        c.matrix().to_rows()
                    ),
                ),
                Err(e) if e.is_gap() => {
                    report.unverifiable(STABLE_CONSISTENCY, key.to_string(), e.to_string())
                }
                Err(e) => report.fail(STABLE_CONSISTENCY, key.to_string(), e.to_string()),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_database_is_consistent() {
        let r = check_database(Database::shipped());
        assert!(r.is_ok(), "{:#?}", r.failures);
        assert!(r.passed_count(ANTIPODAL_INVOLUTION) > 50);
        assert!(r.passed_count(SUSPENSION_ANTIPODAL) > 50);
        assert!(r.passed_count(STABLE_CONSISTENCY) > 50);
    }
}
