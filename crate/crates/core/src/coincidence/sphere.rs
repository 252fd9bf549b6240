use super::{Lazy, MinCount, Verdict};
use crate::abelian::{AbelianError, FgAbGroup, GroupElement, GroupHom, Subgroup};
use crate::error::Result;
use crate::homotopy_db::Database;
use crate::trace::{rules, Trace};

/// Everything the sphere rule needs for one `π_m(S^n)`, reusable across
/// many pairs.
pub struct SphereContext<'a> {
    db: &'a Database,
    m: u32,
    n: u32,
    group: FgAbGroup,
    antipodal: GroupHom,
    base: Trace,
    suspension_image: Lazy<Subgroup>,
}

impl<'a> SphereContext<'a> {
    pub fn new(db: &'a Database, m: u32, n: u32) -> Result<Self> {
        let mut base = Trace::new();
        let group = db.pi_sphere_traced(m, n, &mut base)?;
        let antipodal = db.antipodal_action_traced(m, n, &mut base)?;
        Ok(SphereContext {
            db,
            m,
            n,
            group,
            antipodal,
            base,
            suspension_image: Lazy::new(),
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn antipodal(&self) -> &GroupHom {
        &self.antipodal
    }

    pub fn base_trace(&self) -> &Trace {
        &self.base
    }

    fn member(&self, z: &GroupElement) -> Result<()> {
        if z.group().is_isomorphic(&self.group) {
            Ok(())
        } else {
            Err(AbelianError::AmbientMismatch.into())
        }
    }

    /// `(f₁, f₂)` is loose iff `z₁ = A_*(z₂)`.
    pub fn is_loose(&self, z1: &GroupElement, z2: &GroupElement) -> Result<bool> {
        self.member(z1)?;
        self.member(z2)?;
        Ok(z1.coords() == self.antipodal.apply(z2)?.coords())
    }

    pub fn classify(&self, z1: &GroupElement, z2: &GroupElement) -> Result<Verdict> {
        self.member(z1)?;
        self.member(z2)?;
        let mut trace = self.base.clone();
        if self.m == 1 && self.n == 1 {
            // degrees of circle maps; the minimum is realized classically
            let d = z1.coords()[0].abs_diff(z2.coords()[0]);
            trace.push(rules::CIRCLE_DEGREE_DIFFERENCE);
            return Ok(Verdict::new(d, d, MinCount::Finite(d), rules::CIRCLE_DEGREE_DIFFERENCE, trace));
        }
        trace.push(rules::SPHERE_ANTIPODAL_RULE);
        let az2 = self.antipodal.apply(z2)?;
        if z1.coords() == az2.coords() {
            return Ok(Verdict::new(0, 0, MinCount::Finite(0), rules::SPHERE_ANTIPODAL_RULE, trace));
        }
        // a nontrivial group forces m ≥ n ≥ 2 here
        let diff = z1.sub(&az2)?;
        let image = self
            .suspension_image
            .get(&mut trace, |t| self.db.suspension_image(self.m, self.n, t))?;
        let mc = if image.contains(&diff)? {
            MinCount::Finite(1)
        } else {
            MinCount::Infinite
        };
        Ok(Verdict::new(1, 1, mc, rules::SPHERE_ANTIPODAL_RULE, trace))
    }
}

/// `N#`, `MCC` and `MC` for `f₁, f₂: S^m → S^n` with `[f_i] = z_i`.
pub fn classify_sphere_pair(
    db: &Database,
    m: u32,
    n: u32,
    z1: &GroupElement,
    z2: &GroupElement,
) -> Result<Verdict> {
    SphereContext::new(db, m, n)?.classify(z1, z2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn db() -> &'static Database {
        Database::shipped()
    }

    fn el(g: &FgAbGroup, c: &[i64]) -> GroupElement {
        g.element(c.to_vec()).unwrap()
    }

    #[test]
    fn odd_spheres_equal_classes_are_loose() {
        for (m, n) in [(5, 5), (8, 5), (10, 7)] {
            let ctx = SphereContext::new(db(), m, n).unwrap();
            for z in ctx.group().enumerate_torsion_part().unwrap().into_iter().take(5) {
                let v = ctx.classify(&z, &z).unwrap();
                assert_eq!(v.numbers(), (0, 0, MinCount::Finite(0)));
                assert!(v.loose);
            }
        }
    }

    #[test]
    fn even_identity_pair() {
        let ctx = SphereContext::new(db(), 4, 4).unwrap();
        let iota = ctx.group().generator(0);
        let v = ctx.classify(&iota, &iota).unwrap();
        assert_eq!(v.numbers(), (1, 1, MinCount::Finite(1)));
        // ι against −ι is loose: A_*(−ι) = ι
        let minus = iota.negate().unwrap();
        assert!(ctx.classify(&iota, &minus).unwrap().loose);
    }

    #[test]
    fn circle_degrees() {
        let g = FgAbGroup::integers();
        let v = classify_sphere_pair(db(), 1, 1, &el(&g, &[3]), &el(&g, &[5])).unwrap();
        assert_eq!(v.numbers(), (2, 2, MinCount::Finite(2)));
        assert_eq!(v.rule, rules::CIRCLE_DEGREE_DIFFERENCE);
        let v = classify_sphere_pair(db(), 1, 1, &el(&g, &[-4]), &el(&g, &[-4])).unwrap();
        assert!(v.loose);
    }

    #[test]
    fn outside_the_suspension_image_minimum_is_infinite() {
        // π_3(S^2) = ℤ⟨η⟩ and E: π_2(S^1) = 0 → π_3(S^2); A_* is the identity
        let ctx = SphereContext::new(db(), 3, 2).unwrap();
        let g = ctx.group().clone();
        let v = ctx.classify(&el(&g, &[1]), &el(&g, &[0])).unwrap();
        assert_eq!(v.numbers(), (1, 1, MinCount::Infinite));
        assert!(ctx.classify(&el(&g, &[2]), &el(&g, &[2])).unwrap().loose);
    }

    #[test]
    fn wrong_group_is_rejected() {
        let ctx = SphereContext::new(db(), 9, 6).unwrap();
        let z = FgAbGroup::cyclic(5).unwrap().zero();
        assert!(matches!(ctx.classify(&z, &z), Err(Error::Abelian(AbelianError::AmbientMismatch))));
    }
}
