//! Structural invariants of the classifiers, checked by enumeration over
//! every finite instance a database covers.

use super::filtration::{pi_c, pi_q, FiltrationLevel};
use super::projective::ProjectiveContext;
use super::sphere::SphereContext;
use super::{SpaceDescriptor, Verdict};
use crate::abelian::GroupElement;
use crate::error::{Error, Result};
use crate::fibration::{HomotopyClass, ProjectiveSpace};
use crate::homotopy_db::{Database, Field};
use crate::report::Report;
use crate::trace::Trace;

pub const ORDERING: &str = "verdict-ordering";
pub const SYMMETRY: &str = "verdict-symmetry";
pub const LOOSE_CONSISTENCY: &str = "loose-consistency";
pub const LOOSE_SUM: &str = "loose-pairs-closed-under-sum";
pub const MONOTONICITY: &str = "filtration-monotonicity";
pub const EXCLUSIVITY: &str = "table-exclusivity";

/// Instances whose element pairs are enumerated; larger groups are listed
/// as unverifiable.
const MAX_PAIRS_ORDER: u128 = 1000;

/// Limits for [`check_invariants`].
#[derive(Clone, Copy, Debug)]
pub struct InvariantChecks {
    /// Also assert that exactly one table row matches each projective pair.
    pub exclusivity: bool,
}

impl Default for InvariantChecks {
    fn default() -> Self {
        InvariantChecks { exclusivity: true }
    }
}

/// First violation per check within one instance; passes are counted once
/// per instance.
#[derive(Default)]
struct Tally {
    failed: Vec<(&'static str, String)>,
}

impl Tally {
    fn expect(&mut self, check: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        if !ok && !self.failed.iter().any(|(c, _)| *c == check) {
            self.failed.push((check, detail()));
        }
    }

    fn flush(self, report: &mut Report, key: &str, checks: &[&'static str]) {
        for &c in checks {
            match self.failed.iter().find(|(f, _)| *f == c) {
                Some((_, detail)) => report.fail(c, key, detail.clone()),
                None => report.pass(c),
            }
        }
    }
}

fn record_error(report: &mut Report, checks: &[&'static str], key: &str, e: Error) {
    for &c in checks {
        if e.is_gap() {
            report.unverifiable(c, key, e.to_string());
        } else {
            report.fail(c, key, e.to_string());
        }
    }
}

fn elements(g: &crate::abelian::FgAbGroup) -> Option<Vec<GroupElement>> {
    match g.order() {
        Some(k) if k <= MAX_PAIRS_ORDER => g.enumerate_torsion_part().ok(),
        _ => None,
    }
}

fn agree(a: &Verdict, b: &Verdict) -> bool {
    a.numbers() == b.numbers()
}

const PAIR_CHECKS: [&str; 4] = [ORDERING, SYMMETRY, LOOSE_CONSISTENCY, LOOSE_SUM];

fn flush_monotone(db: &Database, space: &SpaceDescriptor, m: u32, key: &str, report: &mut Report) {
    let mut t = Tally::default();
    match check_monotone(db, space, m, &mut t) {
        Ok(()) => t.flush(report, key, &[MONOTONICITY]),
        Err(e) => record_error(report, &[MONOTONICITY], key, e),
    }
}

/// All checks on one finite `π_m(S^n)`.
pub fn check_sphere_instance(db: &Database, m: u32, n: u32, report: &mut Report) {
    let key = format!("sphere(m={m}, n={n})");
    match sphere_instance(db, m, n) {
        Ok(Some(t)) => t.flush(report, &key, &PAIR_CHECKS),
        Ok(None) => return,
        Err(e) => record_error(report, &PAIR_CHECKS, &key, e),
    }
    if let Ok(space) = SpaceDescriptor::sphere(n) {
        flush_monotone(db, &space, m, &key, report);
    }
}

fn sphere_instance(db: &Database, m: u32, n: u32) -> Result<Option<Tally>> {
    let ctx = SphereContext::new(db, m, n)?;
    let Some(all) = elements(ctx.group()) else {
        return Ok(None);
    };
    let mut t = Tally::default();
    let mut loose = Vec::new();
    for a in &all {
        for b in &all {
            let v = ctx.classify(a, b)?;
            let w = ctx.classify(b, a)?;
            t.expect(ORDERING, v.is_consistent(), || format!("{a:?}, {b:?}: {:?}", v.numbers()));
            t.expect(SYMMETRY, agree(&v, &w), || {
                format!("{a:?}, {b:?}: {:?} vs {:?}", v.numbers(), w.numbers())
            });
            let l = ctx.is_loose(a, b)?;
            t.expect(LOOSE_CONSISTENCY, l == v.loose, || format!("{a:?}, {b:?}"));
            if l {
                loose.push((a.clone(), b.clone()));
            }
        }
    }
    for (a, b) in &loose {
        for (c, d) in &loose {
            let (x, y) = (a.add(c)?, b.add(d)?);
            let ok = ctx.is_loose(&x, &y)?;
            t.expect(LOOSE_SUM, ok, || format!("({a:?}, {b:?}) + ({c:?}, {d:?}) is not loose"));
        }
    }
    Ok(Some(t))
}

/// `π^c ⊆ π^(∞)` and `π^(q+1) ⊆ π^(q)` up to one step past stabilization.
fn check_monotone(db: &Database, space: &SpaceDescriptor, m: u32, t: &mut Tally) -> Result<()> {
    let trace = &mut Trace::new();
    let mut previous = pi_q(db, space, m, FiltrationLevel::Finite(1), trace)?;
    for q in 2..=previous.stabilized_at + 1 {
        let next = pi_q(db, space, m, FiltrationLevel::Finite(q), trace)?;
        let ok = next.subgroup.is_subgroup_of(&previous.subgroup)?;
        t.expect(MONOTONICITY, ok, || format!("pi^({q}) is not inside pi^({})", q - 1));
        previous = next;
    }
    let infinite = pi_q(db, space, m, FiltrationLevel::Infinite, trace)?;
    let same = infinite.subgroup.same_as(&previous.subgroup)?;
    t.expect(MONOTONICITY, same, || "pi^(inf) differs from the stable level".into());
    let c = pi_c(db, space, m, trace)?;
    let ok = c.is_subgroup_of(&infinite.subgroup)?;
    t.expect(MONOTONICITY, ok, || "pi^c is not inside pi^(inf)".into());
    Ok(())
}

/// All checks on one finite `π_m(KP(n′))`.
pub fn check_projective_instance(
    db: &Database,
    space: ProjectiveSpace,
    m: u32,
    options: InvariantChecks,
    report: &mut Report,
) {
    let key = format!("pi_{m}({space})");
    let mut checks = PAIR_CHECKS.to_vec();
    if options.exclusivity {
        checks.push(EXCLUSIVITY);
    }
    match projective_instance(db, space, m, options) {
        Ok(Some(t)) => t.flush(report, &key, &checks),
        Ok(None) => return,
        Err(e) => record_error(report, &checks, &key, e),
    }
    flush_monotone(db, &SpaceDescriptor::projective(space), m, &key, report);
}

fn projective_instance(
    db: &Database,
    space: ProjectiveSpace,
    m: u32,
    options: InvariantChecks,
) -> Result<Option<Tally>> {
    let ctx = ProjectiveContext::new(db, space, m)?;
    let g = ctx.group();
    let Some(all) = elements(&g.total) else {
        return Ok(None);
    };
    let classes: Vec<HomotopyClass> = all.iter().map(|x| g.class_from_total(x)).collect::<Result<_>>()?;
    let mut t = Tally::default();
    let mut loose = Vec::new();
    for (a, ca) in all.iter().zip(&classes) {
        for (b, cb) in all.iter().zip(&classes) {
            if options.exclusivity {
                let rows = ctx.matching_rows(ca, cb)?;
                t.expect(EXCLUSIVITY, rows.len() == 1, || format!("{a:?}, {b:?} match rows {rows:?}"));
            }
            let v = ctx.classify(ca, cb)?;
            let w = ctx.classify(cb, ca)?;
            t.expect(ORDERING, v.is_consistent(), || format!("{a:?}, {b:?}: {:?}", v.numbers()));
            t.expect(SYMMETRY, agree(&v, &w), || {
                format!("{a:?}, {b:?}: row {:?} vs row {:?}", v.row, w.row)
            });
            let l = ctx.is_loose(ca, cb, &mut Trace::new())?;
            t.expect(LOOSE_CONSISTENCY, l == v.loose, || format!("{a:?}, {b:?}"));
            if l {
                loose.push((a.clone(), b.clone()));
            }
        }
    }
    for (a, b) in &loose {
        for (c, d) in &loose {
            let (x, y) = (g.class_from_total(&a.add(c)?)?, g.class_from_total(&b.add(d)?)?);
            let ok = ctx.is_loose(&x, &y, &mut Trace::new())?;
            t.expect(LOOSE_SUM, ok, || format!("({a:?}, {b:?}) + ({c:?}, {d:?}) is not loose"));
        }
    }
    Ok(Some(t))
}

/// Runs every structural check over the sphere and projective instances in
/// the database window. Instances blocked by data gaps are listed as
/// unverifiable.
pub fn check_invariants(db: &Database, options: InvariantChecks) -> Report {
    let mut report = Report::new();
    let Some(range) = db.range() else {
        return report;
    };
    for n in range.n_min..=range.n_max {
        for m in n..=n + range.stem_max {
            check_sphere_instance(db, m, n, &mut report);
        }
    }
    for field in [Field::R, Field::C, Field::H] {
        for n_prime in 2.. {
            let space = ProjectiveSpace::new(field, n_prime).expect("n' >= 2");
            if space.lift_sphere() > range.n_max {
                break;
            }
            for m in 2..=space.lift_sphere() + range.stem_max {
                check_projective_instance(db, space, m, options, &mut report);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rp6_instance_passes_everything() {
        let mut r = Report::new();
        let space = ProjectiveSpace::new(Field::R, 6).unwrap();
        check_projective_instance(Database::shipped(), space, 9, InvariantChecks::default(), &mut r);
        assert!(r.is_ok(), "{:#?}", r.failures);
        for c in [ORDERING, SYMMETRY, LOOSE_CONSISTENCY, LOOSE_SUM, MONOTONICITY, EXCLUSIVITY] {
            assert_eq!(r.passed_count(c), 1, "{c}");
        }
    }

    #[test]
    fn sphere_instance_passes_everything() {
        let mut r = Report::new();
        check_sphere_instance(Database::shipped(), 9, 6, &mut r);
        assert!(r.is_ok(), "{:#?}", r.failures);
        assert_eq!(r.passed_count(LOOSE_SUM), 1);
    }
}
