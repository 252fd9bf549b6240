//! Homotopy groups of projective spaces and the Stiefel fibration boundary.
//!
//! For `N = KP(n′)` with `d = dim_ℝ K` and `n = d·n′`, the Hopf-type fibration
//! `p: S^{n+d−1} → KP(n′)` splits `π_m(KP(n′))` (for `m ≥ 2`) as the image of
//! `p_*` plus a summand isomorphic to `π_{m−1}(S^{d−1})`. The unit-vector
//! fibration `V_{n′+1,2}(K) → S^{n+d−1}` with fibre `S^{n−1}` supplies the
//! boundary `∂_K: π_m(S^{n+d−1}) → π_{m−1}(S^{n−1})` whose kernel governs
//! looseness.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{direct_sum, FgAbGroup, GroupElement, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::homotopy_db::{Database, Field, HomKey};
use crate::report::Report;
use crate::trace::{rules, Trace};

/// `KP(n′)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectiveSpace {
    field: Field,
    n_prime: u32,
}

impl ProjectiveSpace {
    pub fn new(field: Field, n_prime: u32) -> Result<Self> {
        if n_prime < 2 {
            return Err(Error::InvalidInput(format!(
                "projective spaces need n' >= 2, got {n_prime}"
            )));
        }
        Ok(ProjectiveSpace { field, n_prime })
    }

    /// Also admits the projective line, used as a Grassmannian summand.
    pub(crate) fn with_line(field: Field, n_prime: u32) -> Result<Self> {
        if n_prime < 1 {
            return Err(Error::InvalidInput("n' must be at least 1".into()));
        }
        Ok(ProjectiveSpace { field, n_prime })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n_prime(&self) -> u32 {
        self.n_prime
    }

    pub fn d(&self) -> u32 {
        self.field.dim()
    }

    /// Real dimension `n = d·n′`.
    pub fn n(&self) -> u32 {
        self.d() * self.n_prime
    }

    /// The total space `S^{n+d−1}` of `p`.
    pub fn lift_sphere(&self) -> u32 {
        self.n() + self.d() - 1
    }

    /// The fibre sphere `S^{n−1}` of the Stiefel fibration.
    pub fn fibre_sphere(&self) -> u32 {
        self.n() - 1
    }

    pub fn euler_characteristic_zero(&self) -> bool {
        self.field == Field::R && self.n_prime % 2 == 1
    }
}

impl fmt::Display for ProjectiveSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}P({})", self.field, self.n_prime)
    }
}

/// `π_m(KP(n′)) = p_*(π_m(S^{n+d−1})) ⊕ π^c_m` with its structure maps.
#[derive(Clone, Debug)]
pub struct ProjectiveHomotopyGroup {
    pub space: ProjectiveSpace,
    pub m: u32,
    pub total: FgAbGroup,
    /// `π_m(S^{n+d−1})`.
    pub lift: FgAbGroup,
    /// `π^c_m ≅ π_{m−1}(S^{d−1})`.
    pub c_group: FgAbGroup,
    /// `p_*`, injective.
    pub lift_injection: GroupHom,
    pub c_injection: GroupHom,
    pub lift_projection: GroupHom,
    pub c_projection: GroupHom,
}

/// A based homotopy class `S^m → KP(n′)` in split coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyClass {
    pub space: ProjectiveSpace,
    pub m: u32,
    /// The unique lift `[f̃] ∈ π_m(S^{n+d−1})` of the `p_*` component.
    pub lift: GroupElement,
    pub c: GroupElement,
}

impl ProjectiveHomotopyGroup {
    pub fn class_from_total(&self, x: &GroupElement) -> Result<HomotopyClass> {
        Ok(HomotopyClass {
            space: self.space,
            m: self.m,
            lift: self.lift_projection.apply(x)?,
            c: self.c_projection.apply(x)?,
        })
    }

    pub fn class_from_lift(&self, lift: &GroupElement) -> Result<HomotopyClass> {
        if !lift.group().is_isomorphic(&self.lift) {
            return Err(crate::abelian::AbelianError::AmbientMismatch.into());
        }
        Ok(HomotopyClass {
            space: self.space,
            m: self.m,
            lift: lift.clone(),
            c: self.c_group.zero(),
        })
    }

    pub fn total_of(&self, class: &HomotopyClass) -> Result<GroupElement> {
        let a = self.lift_injection.apply(&class.lift)?;
        let b = self.c_injection.apply(&class.c)?;
        Ok(a.add(&b)?)
    }

    /// `p_*(S) ⊕ π^c` for a subgroup `S` of the lift group.
    pub fn lifted_plus_c(&self, s: &Subgroup) -> Result<Subgroup> {
        let mut gens = Vec::new();
        for g in s.generators() {
            gens.push(self.lift_injection.apply(g)?);
        }
        for g in self.c_group.generators() {
            gens.push(self.c_injection.apply(&g)?);
        }
        Ok(Subgroup::new(self.total.clone(), gens)?)
    }

    pub fn c_subgroup(&self) -> Result<Subgroup> {
        self.lifted_plus_c(&Subgroup::trivial(self.lift.clone()))
    }
}

/// Direct sum that keeps generator labels when one side is trivial.
pub(crate) struct Split {
    pub total: FgAbGroup,
    pub inject_left: GroupHom,
    pub inject_right: GroupHom,
    pub project_left: GroupHom,
    pub project_right: GroupHom,
}

pub(crate) fn split_sum(a: &FgAbGroup, b: &FgAbGroup) -> Result<Split> {
    if b.is_trivial() {
        return Ok(Split {
            total: a.clone(),
            inject_left: GroupHom::identity(a.clone()),
            inject_right: GroupHom::zero(b.clone(), a.clone()),
            project_left: GroupHom::identity(a.clone()),
            project_right: GroupHom::zero(a.clone(), b.clone()),
        });
    }
    if a.is_trivial() {
        return Ok(Split {
            total: b.clone(),
            inject_left: GroupHom::zero(a.clone(), b.clone()),
            inject_right: GroupHom::identity(b.clone()),
            project_left: GroupHom::zero(b.clone(), a.clone()),
            project_right: GroupHom::identity(b.clone()),
        });
    }
    let s = direct_sum(a, b)?;
    Ok(Split {
        total: s.group,
        inject_left: s.inject_left,
        inject_right: s.inject_right,
        project_left: s.project_left,
        project_right: s.project_right,
    })
}

/// `π_{m−1}(S^{d−1})`, with `S^0` contributing nothing for `m ≥ 2`.
fn c_summand(db: &Database, space: &ProjectiveSpace, m: u32, trace: &mut Trace) -> Result<FgAbGroup> {
    match space.d() {
        1 => Ok(FgAbGroup::trivial()),
        d => db.pi_sphere_traced(m - 1, d - 1, trace),
    }
}

pub fn pi_projective(
    db: &Database,
    space: &ProjectiveSpace,
    m: u32,
    trace: &mut Trace,
) -> Result<ProjectiveHomotopyGroup> {
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "the split description of pi_m({space}) needs m >= 2"
        )));
    }
    let lift = db.pi_sphere_traced(m, space.lift_sphere(), trace)?;
    let c_group = c_summand(db, space, m, trace)?;
    trace.push(rules::PROJECTIVE_SPLITTING);
    let s = split_sum(&lift, &c_group)?;
    Ok(ProjectiveHomotopyGroup {
        space: *space,
        m,
        total: s.total,
        lift,
        c_group,
        lift_injection: s.inject_left,
        c_injection: s.inject_right,
        lift_projection: s.project_left,
        c_projection: s.project_right,
    })
}

/// The fibre group `π_{m−1}(S^{n−1})`; `S^0` counts as trivial.
fn boundary_codomain(db: &Database, space: &ProjectiveSpace, m: u32, trace: &mut Trace) -> Result<FgAbGroup> {
    if space.fibre_sphere() == 0 {
        return Ok(FgAbGroup::trivial());
    }
    db.pi_sphere_traced(m - 1, space.fibre_sphere(), trace)
}

/// `∂_K: π_m(S^{n+d−1}) → π_{m−1}(S^{n−1})`.
///
/// Sources, in order: a stored record; a trivial domain or codomain; a
/// section of the fibration (`K = ℝ` or `ℂ` with `n′` odd); the stable-range
/// formula for `K = ℝ`. Anything else is reported as unknown.
pub fn boundary_hom(db: &Database, field: Field, m: u32, n_prime: u32, trace: &mut Trace) -> Result<GroupHom> {
    let space = ProjectiveSpace::with_line(field, n_prime)?;
    if m < 2 {
        return Err(Error::InvalidInput("boundary needs m >= 2".into()));
    }
    let key = HomKey::boundary(field, m, n_prime);
    if let Some(e) = db.hom_record(&key) {
        trace.push(rules::BOUNDARY_RECORD);
        return Ok(e.hom.clone());
    }
    let domain = db.pi_sphere_traced(m, space.lift_sphere(), trace)?;
    let codomain = boundary_codomain(db, &space, m, trace)?;
    if domain.is_trivial() || codomain.is_trivial() {
        trace.push(rules::BOUNDARY_TRIVIAL);
        return Ok(GroupHom::zero(domain, codomain));
    }
    if matches!(field, Field::R | Field::C) && n_prime % 2 == 1 {
        trace.push(rules::BOUNDARY_SECTION);
        return Ok(GroupHom::zero(domain, codomain));
    }
    if field == Field::R && m + 2 < 2 * space.n() {
        return stable_range_boundary(db, m, space.n(), trace);
    }
    Err(Error::BoundaryUnknown(key.to_string()))
}

/// The real boundary `π_m(S^n) → π_{m−1}(S^{n−1})` for `m < 2n − 2`.
///
/// Up to a fixed sign it is `(E^∞)^{-1} ∘ (1 + (−1)^n) ∘ E^∞`; the sign is
/// taken to be `+`, which does not affect kernels.
pub fn stable_range_boundary(db: &Database, m: u32, n: u32, trace: &mut Trace) -> Result<GroupHom> {
    if n < 2 || m + 2 >= 2 * n {
        return Err(Error::BoundaryUnknown(format!(
            "pi_{m}(S^{n}) lies outside the stable range m < 2n - 2"
        )));
    }
    let domain = db.pi_sphere_traced(m, n, trace)?;
    let codomain = db.pi_sphere_traced(m - 1, n - 1, trace)?;
    trace.push(rules::STABLE_RANGE_BOUNDARY);
    if n % 2 == 1 || domain.is_trivial() || codomain.is_trivial() {
        return Ok(GroupHom::zero(domain, codomain));
    }
    let up = db.stable_suspension_traced(m, n, trace)?;
    let down = db.stable_suspension_traced(m - 1, n - 1, trace)?.inverse()?;
    Ok(down.compose(&up.scale(2)?)?)
}

pub fn ker_boundary(db: &Database, field: Field, m: u32, n_prime: u32, trace: &mut Trace) -> Result<Subgroup> {
    Ok(boundary_hom(db, field, m, n_prime, trace)?.kernel()?)
}

/// Kernel of `E∘∂_K: π_m(S^{n+d−1}) → π_m(S^n)`.
pub fn ker_suspended_boundary(
    db: &Database,
    field: Field,
    m: u32,
    n_prime: u32,
    trace: &mut Trace,
) -> Result<Subgroup> {
    let space = ProjectiveSpace::with_line(field, n_prime)?;
    let domain = db.pi_sphere_traced(m, space.lift_sphere(), trace)?;
    if domain.is_trivial() {
        return Ok(Subgroup::trivial(domain));
    }
    if db.pi_sphere_traced(m, space.n(), trace)?.is_trivial() {
        return Ok(Subgroup::whole(domain));
    }
    let boundary = boundary_hom(db, field, m, n_prime, trace)?;
    if boundary.is_zero() {
        return Ok(Subgroup::whole(domain));
    }
    let e = db.suspension_hom_traced(m - 1, space.fibre_sphere(), trace)?;
    Ok(e.compose(&boundary)?.kernel()?)
}

/// Outcome of comparing `im p_{K*}` with `ker ∂_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Violated(String),
    Unverifiable(String),
}

/// Checks exactness of `π_m(V_{n′+1,2}(K)) → π_m(S^{n+d−1}) → π_{m−1}(S^{n−1})`
/// wherever the Stiefel group and `p_{K*}` are available — the real case with
/// `n′` odd, where the sequence splits.
pub fn validate_exactness(db: &Database, field: Field, m: u32, n_prime: u32) -> Exactness {
    let space = match ProjectiveSpace::with_line(field, n_prime) {
        Ok(s) => s,
        Err(e) => return Exactness::Unverifiable(e.to_string()),
    };
    let domain = match db.pi_sphere(m, space.lift_sphere()) {
        Ok(g) => g,
        Err(e) => return Exactness::Unverifiable(e.to_string()),
    };
    if domain.is_trivial() {
        return Exactness::Exact;
    }
    if field != Field::R || n_prime.is_multiple_of(2) || n_prime < 3 || m < 3 {
        return Exactness::Unverifiable(format!(
            "no Stiefel-manifold data for K={field}, m={m}, n'={n_prime}"
        ));
    }
    let run = || -> Result<bool> {
        let split = db.stiefel_real_split(m, n_prime + 1, &mut Trace::new())?;
        let image = split.projection.image()?;
        let kernel = ker_boundary(db, field, m, n_prime, &mut Trace::new())?;
        Ok(image.same_as(&kernel)?)
    };
    match run() {
        Ok(true) => Exactness::Exact,
        Ok(false) => Exactness::Violated(format!(
            "im p_* differs from ker of the boundary for K={field}, m={m}, n'={n_prime}"
        )),
        Err(e) => Exactness::Unverifiable(e.to_string()),
    }
}

pub const EXACTNESS: &str = "exactness";
pub const STABLE_RANGE_KERNEL: &str = "stable-range-kernel";
pub const KERNEL_INCLUSION: &str = "kernel-inclusion";
pub const SPLITTING: &str = "projective-splitting";

/// Kernel of the stable-range boundary against the enumerated set
/// `{z : (1 + (−1)^n)·z = 0}`. Returns the number of group elements compared.
pub fn stable_range_kernel_discrepancies(db: &Database, m: u32, n: u32) -> Result<(u64, Vec<GroupElement>)> {
    let g = db.pi_sphere(m, n)?;
    let kernel = stable_range_boundary(db, m, n, &mut Trace::new())?.kernel()?;
    let factor = if n.is_multiple_of(2) { 2 } else { 0 };
    let mut compared = 0;
    let mut bad = Vec::new();
    for z in g.enumerate_torsion_part()? {
        compared += 1;
        let expected = z.scalar_multiply(factor)?.is_zero();
        if kernel.contains(&z)? != expected {
            bad.push(z);
        }
    }
    Ok((compared, bad))
}

/// Every `(m, n)` in the declared window, `n ≥ 2`.
pub(crate) fn window(db: &Database) -> Vec<(u32, u32)> {
    let Some(r) = db.range() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for n in r.n_min.max(2)..=r.n_max {
        for m in n..=n + r.stem_max {
            out.push((m, n));
        }
    }
    out
}

/// Fibration-level checks over every instance the database covers.
pub fn check_fibrations(db: &Database) -> Report {
    let mut report = Report::new();
    let Some(range) = db.range() else {
        return report;
    };

    for (m, n) in window(db) {
        if m + 2 >= 2 * n {
            continue;
        }
        let key = format!("stable-boundary(m={m}, n={n})");
        match db.pi_sphere(m, n) {
            Ok(g) if !g.is_finite() => continue,
            Ok(_) => {}
            Err(_) => continue,
        }
        match stable_range_kernel_discrepancies(db, m, n) {
            Ok((_, bad)) if bad.is_empty() => report.pass(STABLE_RANGE_KERNEL),
            Ok((_, bad)) => report.fail(STABLE_RANGE_KERNEL, key, format!("disagreeing elements {bad:?}")),
            Err(e) if e.is_gap() => report.unverifiable(STABLE_RANGE_KERNEL, key, e.to_string()),
            Err(e) => report.fail(STABLE_RANGE_KERNEL, key, e.to_string()),
        }
    }

    for field in [Field::R, Field::C, Field::H] {
        let d = field.dim();
        for n_prime in 1..=range.n_max / d {
            let space = ProjectiveSpace::with_line(field, n_prime).expect("n' >= 1");
            let top = space.lift_sphere() + range.stem_max;
            for m in 2..=top {
                let key = HomKey::boundary(field, m, n_prime).to_string();
                match validate_exactness(db, field, m, n_prime) {
                    Exactness::Exact => report.pass(EXACTNESS),
                    Exactness::Violated(why) => report.fail(EXACTNESS, key.clone(), why),
                    Exactness::Unverifiable(_) => {}
                }
                let t = &mut Trace::new();
                if let (Ok(k), Ok(ke)) = (
                    ker_boundary(db, field, m, n_prime, t),
                    ker_suspended_boundary(db, field, m, n_prime, t),
                ) {
                    match k.is_subgroup_of(&ke) {
                        Ok(true) => report.pass(KERNEL_INCLUSION),
                        Ok(false) => report.fail(KERNEL_INCLUSION, key.clone(), "ker ∂ is not inside ker E∘∂"),
                        Err(e) => report.fail(KERNEL_INCLUSION, key.clone(), e.to_string()),
                    }
                }
                if n_prime >= 2 {
                    if let Ok(p) = pi_projective(db, &space, m, t) {
                        match splitting_holds(&p) {
                            Ok(true) => report.pass(SPLITTING),
                            Ok(false) => report.fail(SPLITTING, format!("pi_{m}({space})"), "summands do not split the total group"),
                            Err(e) => report.fail(SPLITTING, format!("pi_{m}({space})"), e.to_string()),
                        }
                    }
                }
            }
        }
    }
    report
}

/// The two summand images meet trivially and generate the total group.
fn splitting_holds(p: &ProjectiveHomotopyGroup) -> Result<bool> {
    let a = p.lift_injection.image()?;
    let b = p.c_injection.image()?;
    if !p.lift_injection.is_injective()? || !a.sum(&b)?.is_whole()? {
        return Ok(false);
    }
    // trivial intersection: the orders multiply for finite groups, and in
    // general the composite projection kills the other summand
    let cross = p.c_projection.compose(&p.lift_injection)?;
    let back = p.lift_projection.compose(&p.lift_injection)?;
    Ok(cross.is_zero() && back.agrees_with(&GroupHom::identity(p.lift.clone())))
}
