use crate::abelian::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::fibration::{pi_projective, split_sum, ProjectiveSpace};
use crate::homotopy_db::{Database, Field};
use crate::trace::{rules, Trace};

/// `π_m(G_{r,2}(ℝ)) ≅ π_m(RP(r−2)) ⊕ π_m(CP(r′−1))` for `r = 2r′ ≥ 4`,
/// `m ≥ 3`; the summands embed by adding a fixed line and by taking the
/// underlying real plane of a complex line.
#[derive(Clone, Debug)]
pub struct GrassmannGroup {
    pub r: u32,
    pub m: u32,
    pub group: FgAbGroup,
    pub real_summand: FgAbGroup,
    pub complex_summand: FgAbGroup,
    pub real_injection: GroupHom,
    pub complex_injection: GroupHom,
}

fn check_rank(r: u32) -> Result<()> {
    if r % 2 == 1 || r < 4 {
        return Err(Error::Unsupported(format!(
            "Grassmannians G(r,2) are covered only for even r >= 4, got r = {r}"
        )));
    }
    Ok(())
}

pub fn grassmann_pi(db: &Database, m: u32, r: u32, trace: &mut Trace) -> Result<GrassmannGroup> {
    check_rank(r)?;
    if m < 3 {
        return Err(Error::Unsupported(format!(
            "pi_m(G({r},2)) is described only for m >= 3, got m = {m}"
        )));
    }
    let real = pi_projective(db, &ProjectiveSpace::with_line(Field::R, r - 2)?, m, trace)?;
    let complex = pi_projective(db, &ProjectiveSpace::with_line(Field::C, r / 2 - 1)?, m, trace)?;
    trace.push(rules::GRASSMANN_SPLITTING);
    let s = split_sum(&real.total, &complex.total)?;
    Ok(GrassmannGroup {
        r,
        m,
        group: s.total,
        real_summand: real.total,
        complex_summand: complex.total,
        real_injection: s.inject_left,
        complex_injection: s.inject_right,
    })
}

/// Whether every pair `S^m → G_{r,2}(ℝ)` is loose: `Some(true)` for even
/// `r ≥ 4`, `None` (not known) otherwise.
pub fn grassmann_all_loose(r: u32) -> Option<bool> {
    check_rank(r).ok().map(|_| true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g42_in_degree_three() {
        let g = grassmann_pi(Database::shipped(), 3, 4, &mut Trace::new()).unwrap();
        assert!(g.group.is_isomorphic(&FgAbGroup::new(2, vec![]).unwrap()));
    }

    #[test]
    fn rank_conditions() {
        assert_eq!(grassmann_all_loose(4), Some(true));
        assert_eq!(grassmann_all_loose(8), Some(true));
        assert_eq!(grassmann_all_loose(5), None);
        assert_eq!(grassmann_all_loose(2), None);
        assert!(matches!(
            grassmann_pi(Database::shipped(), 2, 6, &mut Trace::new()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn g62_in_degree_five() {
        // π_5(RP(4)) = π_5(S^4) = ℤ2, π_5(CP(2)) = π_5(S^5) = ℤ
        let g = grassmann_pi(Database::shipped(), 5, 6, &mut Trace::new()).unwrap();
        assert!(g.group.is_isomorphic(&FgAbGroup::new(1, vec![2]).unwrap()));
    }
}
