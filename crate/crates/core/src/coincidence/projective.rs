use super::{Lazy, MinCount, Verdict};
use crate::abelian::{AbelianError, GroupElement, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::fibration::{
    ker_boundary, ker_suspended_boundary, pi_projective, HomotopyClass, ProjectiveHomotopyGroup, ProjectiveSpace,
};
use crate::homotopy_db::{Database, Field};
use crate::trace::{rules, Trace};

/// `(N#, MCC, MC)` of each table row.
const ROW_NUMBERS: [(u64, u64, MinCount); 7] = [
    (0, 0, MinCount::Finite(0)),
    (0, 1, MinCount::Finite(1)),
    (1, 1, MinCount::Finite(1)),
    (2, 2, MinCount::Finite(2)),
    (2, 2, MinCount::Infinite),
    (1, 1, MinCount::Finite(1)),
    (1, 1, MinCount::Infinite),
];

/// The data behind the seven-row classification of pairs
/// `S^m → KP(n′)`, computed on demand and shared across pairs.
///
/// Classes enter through their lifts `z_i = [f̃_i] ∈ π_m(S^{n+d−1})`; the
/// `π^c` components play no role.
pub struct ProjectiveContext<'a> {
    db: &'a Database,
    space: ProjectiveSpace,
    m: u32,
    group: ProjectiveHomotopyGroup,
    base: Trace,
    antipodal: Lazy<GroupHom>,
    kernel: Lazy<Subgroup>,
    suspended_kernel: Lazy<Subgroup>,
    suspension_image: Lazy<Subgroup>,
}

impl<'a> ProjectiveContext<'a> {
    pub fn new(db: &'a Database, space: ProjectiveSpace, m: u32) -> Result<Self> {
        let mut base = Trace::new();
        let group = pi_projective(db, &space, m, &mut base)?;
        Ok(ProjectiveContext {
            db,
            space,
            m,
            group,
            base,
            antipodal: Lazy::new(),
            kernel: Lazy::new(),
            suspended_kernel: Lazy::new(),
            suspension_image: Lazy::new(),
        })
    }

    pub fn group(&self) -> &ProjectiveHomotopyGroup {
        &self.group
    }

    pub fn space(&self) -> ProjectiveSpace {
        self.space
    }

    pub fn base_trace(&self) -> &Trace {
        &self.base
    }

    fn real(&self) -> bool {
        self.space.field() == Field::R
    }

    /// `A_*` on the lift group (only consulted for `K = ℝ`, where the lift
    /// sphere is `S^n`).
    fn antipodal(&self, trace: &mut Trace) -> Result<&GroupHom> {
        self.antipodal
            .get(trace, |t| self.db.antipodal_action_traced(self.m, self.space.lift_sphere(), t))
    }

    pub fn ker_boundary(&self, trace: &mut Trace) -> Result<&Subgroup> {
        self.kernel
            .get(trace, |t| ker_boundary(self.db, self.space.field(), self.m, self.space.n_prime(), t))
    }

    pub fn ker_suspended_boundary(&self, trace: &mut Trace) -> Result<&Subgroup> {
        self.suspended_kernel.get(trace, |t| {
            ker_suspended_boundary(self.db, self.space.field(), self.m, self.space.n_prime(), t)
        })
    }

    fn suspension_image(&self, trace: &mut Trace) -> Result<&Subgroup> {
        self.suspension_image
            .get(trace, |t| self.db.suspension_image(self.m, self.space.n(), t))
    }

    fn lift_of<'c>(&self, c: &'c HomotopyClass) -> Result<&'c GroupElement> {
        if c.space != self.space || c.m != self.m || !c.lift.group().is_isomorphic(&self.group.lift) {
            return Err(AbelianError::AmbientMismatch.into());
        }
        Ok(&c.lift)
    }

    /// `f′₁ ∼ f′₂` freely: `z₁ ∈ {z₂, A_*z₂}` over ℝ (the deck involution
    /// acts through `A`), `z₁ = z₂` over ℂ and ℍ.
    fn freely_homotopic(&self, z1: &GroupElement, z2: &GroupElement, trace: &mut Trace) -> Result<bool> {
        if same(z1, z2) {
            return Ok(true);
        }
        if !self.real() {
            return Ok(false);
        }
        Ok(same(z1, &self.antipodal(trace)?.apply(z2)?))
    }

    fn row_holds(&self, row: u8, z1: &GroupElement, z2: &GroupElement, trace: &mut Trace) -> Result<bool> {
        let real = self.real();
        Ok(match row {
            1 => self.freely_homotopic(z1, z2, trace)? && self.ker_boundary(trace)?.contains(z2)?,
            2 => {
                self.freely_homotopic(z1, z2, trace)?
                    && self.ker_suspended_boundary(trace)?.contains(z2)?
                    && !self.ker_boundary(trace)?.contains(z2)?
            }
            3 => real && self.freely_homotopic(z1, z2, trace)? && !same(z2, &self.antipodal(trace)?.apply(z2)?),
            4 => {
                real && !self.freely_homotopic(z1, z2, trace)?
                    && self.suspension_image(trace)?.contains(&z1.sub(z2)?)?
            }
            5 => real && !self.suspension_image(trace)?.contains(&z1.sub(z2)?)?,
            6 => !real && same(z1, z2) && !self.ker_suspended_boundary(trace)?.contains(z2)?,
            7 => !real && !same(z1, z2),
            _ => unreachable!("the table has seven rows"),
        })
    }

    /// First matching row, in table order.
    pub fn classify(&self, c1: &HomotopyClass, c2: &HomotopyClass) -> Result<Verdict> {
        let (z1, z2) = (self.lift_of(c1)?, self.lift_of(c2)?);
        let mut trace = self.base.clone();
        for row in 1..=7u8 {
            if self.row_holds(row, z1, z2, &mut trace)? {
                let rule = rules::PROJECTIVE_ROWS[usize::from(row - 1)];
                trace.push(rule);
                let (nielsen, mcc, mc) = ROW_NUMBERS[usize::from(row - 1)];
                let mut v = Verdict::new(nielsen, mcc, mc, rule, trace);
                v.row = Some(row);
                return Ok(v);
            }
        }
        Err(Error::NotDetermined(format!(
            "no row of the classification matches the lifts {:?} and {:?} in pi_{}({})",
            z1.coords(),
            z2.coords(),
            self.m,
            self.space
        )))
    }

    /// Every row whose predicate holds; exactly one is expected.
    pub fn matching_rows(&self, c1: &HomotopyClass, c2: &HomotopyClass) -> Result<Vec<u8>> {
        let (z1, z2) = (self.lift_of(c1)?, self.lift_of(c2)?);
        let mut trace = Trace::new();
        let mut rows = Vec::new();
        for row in 1..=7u8 {
            if self.row_holds(row, z1, z2, &mut trace)? {
                rows.push(row);
            }
        }
        Ok(rows)
    }

    /// Looseness via lifting to the Stiefel manifold: some `z_i ∈ ker ∂_K`
    /// and `f′₁ ∼ f′₂`.
    pub fn is_loose(&self, c1: &HomotopyClass, c2: &HomotopyClass, trace: &mut Trace) -> Result<bool> {
        let (z1, z2) = (self.lift_of(c1)?, self.lift_of(c2)?);
        trace.extend(&self.base);
        if !self.freely_homotopic(z1, z2, trace)? {
            return Ok(false);
        }
        let kernel = self.ker_boundary(trace)?;
        Ok(kernel.contains(z1)? || kernel.contains(z2)?)
    }
}

// equality by coordinates, whatever the generator labels
fn same(a: &GroupElement, b: &GroupElement) -> bool {
    a.coords() == b.coords()
}

/// `N#`, `MCC` and `MC` for `f₁, f₂: S^m → KP(n′)`.
pub fn classify_projective_pair(
    db: &Database,
    space: ProjectiveSpace,
    m: u32,
    c1: &HomotopyClass,
    c2: &HomotopyClass,
) -> Result<Verdict> {
    ProjectiveContext::new(db, space, m)?.classify(c1, c2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp6() -> ProjectiveContext<'static> {
        ProjectiveContext::new(Database::shipped(), ProjectiveSpace::new(Field::R, 6).unwrap(), 9).unwrap()
    }

    fn class(ctx: &ProjectiveContext, k: i64) -> HomotopyClass {
        let z = ctx.group().lift.element(vec![k]).unwrap();
        ctx.group().class_from_lift(&z).unwrap()
    }

    #[test]
    fn rows_one_three_four_on_rp6() {
        let ctx = rp6();
        let v = ctx.classify(&class(&ctx, 12), &class(&ctx, 12)).unwrap();
        assert_eq!((v.row, v.numbers()), (Some(1), (0, 0, MinCount::Finite(0))));
        assert!(v.loose);
        assert!(v.trace.rules().contains(&rules::STABLE_RANGE_BOUNDARY));
        let v = ctx.classify(&class(&ctx, 1), &class(&ctx, 1)).unwrap();
        assert_eq!((v.row, v.numbers()), (Some(3), (1, 1, MinCount::Finite(1))));
        let v = ctx.classify(&class(&ctx, 1), &class(&ctx, 0)).unwrap();
        assert_eq!((v.row, v.numbers()), (Some(4), (2, 2, MinCount::Finite(2))));
    }

    #[test]
    fn antipodal_partner_is_freely_homotopic() {
        // 5 and −5 = 19 differ by the deck involution
        let ctx = rp6();
        let v = ctx.classify(&class(&ctx, 5), &class(&ctx, 19)).unwrap();
        assert_eq!(v.row, Some(3));
    }

    #[test]
    fn exactly_one_row_on_rp6() {
        let ctx = rp6();
        for a in 0..24 {
            for b in 0..24 {
                let rows = ctx.matching_rows(&class(&ctx, a), &class(&ctx, b)).unwrap();
                assert_eq!(rows.len(), 1, "pair ({a}, {b}) matches {rows:?}");
            }
        }
    }

    #[test]
    fn complex_rows() {
        // CP(3): lift sphere S^7, π_8(S^7) = ℤ2, the boundary has a section
        let db = Database::shipped();
        let ctx = ProjectiveContext::new(db, ProjectiveSpace::new(Field::C, 3).unwrap(), 8).unwrap();
        let eta = ctx.group().class_from_lift(&ctx.group().lift.generator(0)).unwrap();
        let zero = ctx.group().class_from_lift(&ctx.group().lift.zero()).unwrap();
        assert_eq!(ctx.classify(&eta, &eta).unwrap().row, Some(1));
        let v = ctx.classify(&eta, &zero).unwrap();
        assert_eq!((v.row, v.numbers()), (Some(7), (1, 1, MinCount::Infinite)));
    }

    #[test]
    fn quaternionic_gap_is_reported() {
        let db = Database::shipped();
        let ctx = ProjectiveContext::new(db, ProjectiveSpace::new(Field::H, 2).unwrap(), 11).unwrap();
        let g = ctx.group().lift.generator(0);
        let c = ctx.group().class_from_lift(&g).unwrap();
        let err = ctx.classify(&c, &c).unwrap_err();
        assert!(err.is_gap(), "{err}");
    }
}
