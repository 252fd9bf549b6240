use super::group::{FgAbGroup, GroupElement};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::subgroup::Subgroup;
use super::{checked, AbelianError, Result};

/// A homomorphism between canonical groups, stored as an integer matrix of
/// shape `codomain generators × domain generators`.
///
/// Well-definedness is checked at construction; torsion rows are kept
/// reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        let expected = (codomain.generator_count(), domain.generator_count());
        if matrix.shape() != expected {
            return Err(AbelianError::Shape(format!(
                "matrix is {}x{}, homomorphism {} -> {} needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                domain,
                codomain,
                expected.0,
                expected.1
            )));
        }
        let mut matrix = matrix;
        let r_dom = domain.free_rank();
        let r_cod = codomain.free_rank();
        for (jj, &t) in domain.torsion().iter().enumerate() {
            let j = r_dom + jj;
            for i in 0..codomain.generator_count() {
                let a = matrix[(i, j)];
                let ok = if i < r_cod {
                    a == 0
                } else {
                    checked::mul(t, a)? % codomain.torsion()[i - r_cod] == 0
                };
                if !ok {
                    return Err(AbelianError::IllDefined(format!(
                        "generator {j} of order {t} maps to column {:?} outside the relations of {}",
                        matrix.column(j),
                        codomain
                    )));
                }
            }
        }
        for (ii, &tau) in codomain.torsion().iter().enumerate() {
            let i = r_cod + ii;
            for j in 0..matrix.cols() {
                matrix[(i, j)] = matrix[(i, j)].rem_euclid(tau);
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn from_rows(domain: FgAbGroup, codomain: FgAbGroup, rows: &[Vec<i64>]) -> Result<Self> {
        let m = IntMatrix::from_rows(rows, domain.generator_count())?;
        Self::new(domain, codomain, m)
    }

    pub fn zero(domain: FgAbGroup, codomain: FgAbGroup) -> Self {
        let m = IntMatrix::zeros(codomain.generator_count(), domain.generator_count());
        GroupHom::new(domain, codomain, m).expect("zero map is well defined")
    }

    pub fn identity(g: FgAbGroup) -> Self {
        let m = IntMatrix::identity(g.generator_count());
        GroupHom::new(g.clone(), g, m).expect("identity is well defined")
    }

    /// Multiplication by `c` on `g`.
    pub fn scalar(g: FgAbGroup, c: i64) -> Result<Self> {
        let m = IntMatrix::identity(g.generator_count()).scale(c)?;
        GroupHom::new(g.clone(), g, m)
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if !x.group().is_isomorphic(&self.domain) {
            return Err(AbelianError::AmbientMismatch);
        }
        let y = self.matrix.mul_vec(x.coords())?;
        self.codomain.element(y)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if !first.codomain.is_isomorphic(&self.domain) {
            return Err(AbelianError::AmbientMismatch);
        }
        let m = self.matrix.mul(&first.matrix)?;
        GroupHom::new(first.domain.clone(), self.codomain.clone(), m)
    }

    /// Pointwise sum `x ↦ self(x) + other(x)`.
    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if !self.domain.is_isomorphic(&other.domain) || !self.codomain.is_isomorphic(&other.codomain)
        {
            return Err(AbelianError::AmbientMismatch);
        }
        let m = self.matrix.add(&other.matrix)?;
        GroupHom::new(self.domain.clone(), self.codomain.clone(), m)
    }

    pub fn scale(&self, c: i64) -> Result<GroupHom> {
        GroupHom::new(self.domain.clone(), self.codomain.clone(), self.matrix.scale(c)?)
    }

    fn with_codomain_relations(&self) -> Result<IntMatrix> {
        self.matrix.hconcat(&self.codomain.relation_matrix())
    }

    /// The full preimage of zero.
    pub fn kernel(&self) -> Result<Subgroup> {
        let k = self.domain.generator_count();
        let s = smith_normal_form(&self.with_codomain_relations()?)?;
        let gens = s
            .kernel_basis()
            .into_iter()
            .map(|v| self.domain.element(v[..k].to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::new(self.domain.clone(), gens)
    }

    pub fn image(&self) -> Result<Subgroup> {
        let gens = (0..self.matrix.cols())
            .map(|j| self.codomain.element(self.matrix.column(j)))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::new(self.codomain.clone(), gens)
    }

    /// Some `x` with `self(x) = y`, if one exists.
    pub fn preimage(&self, y: &GroupElement) -> Result<Option<GroupElement>> {
        if !y.group().is_isomorphic(&self.codomain) {
            return Err(AbelianError::AmbientMismatch);
        }
        let k = self.domain.generator_count();
        let s = smith_normal_form(&self.with_codomain_relations()?)?;
        match s.solve(y.coords())? {
            Some(w) => Ok(Some(self.domain.element(w[..k].to_vec())?)),
            None => Ok(None),
        }
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        self.image()?.is_whole()
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism()? {
            return Err(AbelianError::NotIsomorphism);
        }
        let columns = self
            .codomain
            .generators()
            .iter()
            .map(|e| {
                self.preimage(e)?
                    .map(GroupElement::into_coords)
                    .ok_or(AbelianError::NotIsomorphism)
            })
            .collect::<Result<Vec<_>>>()?;
        let m = IntMatrix::from_columns(&columns, self.domain.generator_count())?;
        GroupHom::new(self.codomain.clone(), self.domain.clone(), m)
    }

    /// Equality as maps, i.e. after reduction.
    pub fn agrees_with(&self, other: &GroupHom) -> bool {
        self.domain.is_isomorphic(&other.domain)
            && self.codomain.is_isomorphic(&other.codomain)
            && self.matrix == other.matrix
    }
}
