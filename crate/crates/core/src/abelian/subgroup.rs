use std::sync::Arc;

use super::group::{FgAbGroup, GroupElement, Presentation};
use super::hom::GroupHom;
use super::matrix::IntMatrix;
use super::snf::{smith_normal_form, SmithForm};
use super::{AbelianError, Result};

/// The subgroup of `ambient` generated by a list of elements, together with
/// its own canonical form.
///
/// Membership and coordinates are answered from a cached Smith form of
/// `[H | T]`, where `H` holds the generators as columns and `T` the ambient
/// relations.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FgAbGroup,
    generators: Vec<GroupElement>,
    canonical: FgAbGroup,
    canonical_generators: Vec<GroupElement>,
    to_canonical: IntMatrix,
    solver: Arc<SmithForm>,
}

impl Subgroup {
    pub fn new(ambient: FgAbGroup, generators: Vec<GroupElement>) -> Result<Self> {
        if generators.iter().any(|g| !g.group().is_isomorphic(&ambient)) {
            return Err(AbelianError::AmbientMismatch);
        }
        let k = ambient.generator_count();
        let s = generators.len();
        let columns: Vec<Vec<i64>> = generators.iter().map(|g| g.coords().to_vec()).collect();
        let h = IntMatrix::from_columns(&columns, k)?;
        let solver = smith_normal_form(&h.hconcat(&ambient.relation_matrix())?)?;

        // relations among the generators: kernel of [H | T] cut to its first s rows
        let relations: Vec<Vec<i64>> = solver
            .kernel_basis()
            .into_iter()
            .map(|v| v[..s].to_vec())
            .collect();
        let rel = IntMatrix::from_columns(&relations, s)?;
        let p = Presentation::new(s, &rel)?;
        let canonical_generators = (0..p.group.generator_count())
            .map(|j| ambient.element(h.mul_vec(&p.from_canonical.column(j))?))
            .collect::<Result<Vec<_>>>()?;

        Ok(Subgroup {
            ambient,
            generators,
            canonical: p.group,
            canonical_generators,
            to_canonical: p.to_canonical,
            solver: Arc::new(solver),
        })
    }

    pub fn trivial(ambient: FgAbGroup) -> Self {
        Subgroup::new(ambient, Vec::new()).expect("trivial subgroup")
    }

    pub fn whole(ambient: FgAbGroup) -> Self {
        let gens = ambient.generators();
        Subgroup::new(ambient, gens).expect("whole group")
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// The subgroup as an abstract group in canonical form.
    pub fn canonical_form(&self) -> &FgAbGroup {
        &self.canonical
    }

    /// Images in the ambient group of the canonical generators.
    pub fn canonical_generators(&self) -> &[GroupElement] {
        &self.canonical_generators
    }

    pub fn is_trivial(&self) -> bool {
        self.canonical.is_trivial()
    }

    pub fn order(&self) -> Option<u128> {
        self.canonical.order()
    }

    pub fn contains(&self, x: &GroupElement) -> Result<bool> {
        Ok(self.coordinates(x)?.is_some())
    }

    /// Coordinates of `x` with respect to the canonical generators, `None`
    /// when `x` lies outside the subgroup.
    pub fn coordinates(&self, x: &GroupElement) -> Result<Option<GroupElement>> {
        if !x.group().is_isomorphic(&self.ambient) {
            return Err(AbelianError::AmbientMismatch);
        }
        let Some(w) = self.solver.solve(x.coords())? else {
            return Ok(None);
        };
        let c = &w[..self.generators.len()];
        Ok(Some(self.canonical.element(self.to_canonical.mul_vec(c)?)?))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> Result<bool> {
        if !self.ambient.is_isomorphic(&other.ambient) {
            return Err(AbelianError::AmbientMismatch);
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as subsets of the ambient group.
    pub fn same_as(&self, other: &Subgroup) -> Result<bool> {
        Ok(self.is_subgroup_of(other)? && other.is_subgroup_of(self)?)
    }

    pub fn is_whole(&self) -> Result<bool> {
        for g in self.ambient.generators() {
            if !self.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        if !self.ambient.is_isomorphic(&other.ambient) {
            return Err(AbelianError::AmbientMismatch);
        }
        let gens = self.generators.iter().chain(&other.generators).cloned().collect();
        Subgroup::new(self.ambient.clone(), gens)
    }

    /// Image of the subgroup under `f`.
    pub fn image_under(&self, f: &GroupHom) -> Result<Subgroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| f.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::new(f.codomain().clone(), gens)
    }

    /// Inclusion of the canonical form into the ambient group.
    pub fn inclusion(&self) -> GroupHom {
        let cols: Vec<Vec<i64>> = self
            .canonical_generators
            .iter()
            .map(|g| g.coords().to_vec())
            .collect();
        let m = IntMatrix::from_columns(&cols, self.ambient.generator_count())
            .expect("columns have ambient length");
        GroupHom::new(self.canonical.clone(), self.ambient.clone(), m)
            .expect("inclusion is well defined")
    }
}

/// `ambient / sub` in canonical form with the projection map.
pub fn quotient(sub: &Subgroup) -> Result<(FgAbGroup, GroupHom)> {
    let g = sub.ambient();
    let k = g.generator_count();
    let cols: Vec<Vec<i64>> = sub.generators().iter().map(|x| x.coords().to_vec()).collect();
    let h = IntMatrix::from_columns(&cols, k)?;
    let rel = g.relation_matrix().hconcat(&h)?;
    let p = Presentation::new(k, &rel)?;
    let projection = GroupHom::new(g.clone(), p.group.clone(), p.to_canonical)?;
    Ok((p.group, projection))
}

/// `A ⊕ B` in canonical form with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgAbGroup,
    pub inject_left: GroupHom,
    pub inject_right: GroupHom,
    pub project_left: GroupHom,
    pub project_right: GroupHom,
}

pub fn direct_sum(a: &FgAbGroup, b: &FgAbGroup) -> Result<DirectSum> {
    let ka = a.generator_count();
    let kb = b.generator_count();
    let rel = a.relation_matrix().block_diagonal(&b.relation_matrix());
    let p = Presentation::new(ka + kb, &rel)?;
    let left: Vec<usize> = (0..ka).collect();
    let right: Vec<usize> = (ka..ka + kb).collect();
    let g = p.group.clone();
    Ok(DirectSum {
        inject_left: GroupHom::new(a.clone(), g.clone(), p.to_canonical.select_columns(&left))?,
        inject_right: GroupHom::new(b.clone(), g.clone(), p.to_canonical.select_columns(&right))?,
        project_left: GroupHom::new(g.clone(), a.clone(), p.from_canonical.select_rows(&left))?,
        project_right: GroupHom::new(g.clone(), b.clone(), p.from_canonical.select_rows(&right))?,
        group: g,
    })
}
