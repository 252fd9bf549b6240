use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::{checked, AbelianError, Result, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, PartialEq, Eq, Hash)]
struct GroupData {
    free_rank: usize,
    torsion: Vec<i64>,
    labels: Option<Vec<String>>,
}

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_s` in
/// invariant-factor form (`t₁ | t₂ | … `, every `tᵢ ≥ 2`).
///
/// Generators are ordered free generators first, then torsion generators.
/// Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct FgAbGroup(Arc<GroupData>);

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    free_rank: usize,
    torsion: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<GroupRepr> for FgAbGroup {
    type Error = AbelianError;

    fn try_from(r: GroupRepr) -> Result<Self> {
        let g = FgAbGroup::new(r.free_rank, r.torsion)?;
        match r.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

impl From<FgAbGroup> for GroupRepr {
    fn from(g: FgAbGroup) -> Self {
        GroupRepr {
            free_rank: g.0.free_rank,
            torsion: g.0.torsion.clone(),
            labels: g.0.labels.clone(),
        }
    }
}

/// Order of a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

impl FgAbGroup {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(t) = torsion.iter().find(|&&t| t < 2) {
            return Err(AbelianError::InvalidGroup(format!(
                "torsion coefficient {t} is below 2"
            )));
        }
        if let Some(w) = torsion.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(AbelianError::InvalidGroup(format!(
                "torsion coefficients {} and {} violate the divisibility chain",
                w[0], w[1]
            )));
        }
        Ok(FgAbGroup(Arc::new(GroupData {
            free_rank,
            torsion,
            labels: None,
        })))
    }

    pub fn trivial() -> Self {
        Self::new(0, Vec::new()).expect("trivial group")
    }

    pub fn integers() -> Self {
        Self::new(1, Vec::new()).expect("Z")
    }

    /// `ℤ/n` for `n ≥ 2`, the trivial group for `n = 1`.
    pub fn cyclic(n: i64) -> Result<Self> {
        match n {
            1 => Ok(Self::trivial()),
            _ => Self::new(0, vec![n]),
        }
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.generator_count() {
            return Err(AbelianError::InvalidGroup(format!(
                "{} labels for {} generators",
                labels.len(),
                self.generator_count()
            )));
        }
        Ok(FgAbGroup(Arc::new(GroupData {
            free_rank: self.0.free_rank,
            torsion: self.0.torsion.clone(),
            labels: Some(labels),
        })))
    }

    pub fn without_labels(&self) -> Self {
        if self.0.labels.is_none() {
            return self.clone();
        }
        Self::new(self.0.free_rank, self.0.torsion.clone()).expect("already validated")
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.0.torsion
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    pub fn generator_count(&self) -> usize {
        self.0.free_rank + self.0.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generator_count() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.0.free_rank == 0
    }

    /// Order of a finite group, `None` when infinite or beyond `u128`.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        self.0
            .torsion
            .iter()
            .try_fold(1u128, |acc, &t| acc.checked_mul(t as u128))
    }

    /// Order of generator `i`: `0` for free generators.
    pub fn generator_order(&self, i: usize) -> i64 {
        if i < self.0.free_rank {
            0
        } else {
            self.0.torsion[i - self.0.free_rank]
        }
    }

    /// Canonical invariants agree (labels ignored).
    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.0.free_rank == other.0.free_rank && self.0.torsion == other.0.torsion
    }

    /// Relation lattice as matrix columns `tⱼ·e_{r+j}`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let k = self.generator_count();
        let mut m = IntMatrix::zeros(k, self.0.torsion.len());
        for (j, &t) in self.0.torsion.iter().enumerate() {
            m[(self.0.free_rank + j, j)] = t;
        }
        m
    }

    /// Reduces torsion coordinates into `0 ≤ x < t`.
    pub fn reduce(&self, coords: &mut [i64]) {
        for (j, &t) in self.0.torsion.iter().enumerate() {
            let c = &mut coords[self.0.free_rank + j];
            *c = c.rem_euclid(t);
        }
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement> {
        if coords.len() != self.generator_count() {
            return Err(AbelianError::Shape(format!(
                "{} coordinates for a group with {} generators",
                coords.len(),
                self.generator_count()
            )));
        }
        let mut coords = coords;
        self.reduce(&mut coords);
        Ok(GroupElement {
            group: self.clone(),
            coords,
        })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![0; self.generator_count()],
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.generator_count()];
        coords[i] = 1;
        self.element(coords).expect("generator index in range")
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.generator_count()).map(|i| self.generator(i)).collect()
    }

    /// All elements with vanishing free coordinates, guarded by
    /// [`DEFAULT_ENUMERATION_CAP`].
    pub fn enumerate_torsion_part(&self) -> Result<Vec<GroupElement>> {
        self.enumerate_torsion_part_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_torsion_part_capped(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let size = self
            .0
            .torsion
            .iter()
            .try_fold(1u128, |acc, &t| acc.checked_mul(t as u128))
            .unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(AbelianError::TooLarge { size, cap });
        }
        let r = self.0.free_rank;
        let mut out = Vec::with_capacity(size as usize);
        let mut coords = vec![0i64; self.generator_count()];
        loop {
            out.push(GroupElement {
                group: self.clone(),
                coords: coords.clone(),
            });
            // odometer over the torsion coordinates
            let mut j = self.0.torsion.len();
            loop {
                if j == 0 {
                    return Ok(out);
                }
                j -= 1;
                coords[r + j] += 1;
                if coords[r + j] < self.0.torsion[j] {
                    break;
                }
                coords[r + j] = 0;
            }
        }
    }

    /// Canonical form of the group with `generators` generators subject to
    /// the relations given as columns of `relations`.
    pub fn from_presentation(generators: usize, relations: &IntMatrix) -> Result<Presentation> {
        Presentation::new(generators, relations)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.0.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.0.torsion.iter().map(|t| format!("Z{t}")));
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self})")
    }
}

/// An element of an [`FgAbGroup`] stored by reduced coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FgAbGroup,
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &GroupElement) -> Result<()> {
        if self.group.is_isomorphic(&other.group) {
            Ok(())
        } else {
            Err(AbelianError::AmbientMismatch)
        }
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_same(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| checked::add(a, b))
            .collect::<Result<Vec<_>>>()?;
        self.group.element(coords)
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.add(&other.negate()?)
    }

    pub fn negate(&self) -> Result<GroupElement> {
        let coords = self
            .coords
            .iter()
            .map(|&a| checked::neg(a))
            .collect::<Result<Vec<_>>>()?;
        self.group.element(coords)
    }

    pub fn scalar_multiply(&self, k: i64) -> Result<GroupElement> {
        let coords = self
            .coords
            .iter()
            .map(|&a| checked::mul(a, k))
            .collect::<Result<Vec<_>>>()?;
        self.group.element(coords)
    }

    pub fn order(&self) -> ElementOrder {
        let r = self.group.free_rank();
        if self.coords[..r].iter().any(|&c| c != 0) {
            return ElementOrder::Infinite;
        }
        let order = self.group.torsion().iter().enumerate().fold(1u64, |acc, (j, &t)| {
            let c = self.coords[r + j];
            let o = (t / gcd(c, t)) as u64;
            lcm(acc, o)
        });
        ElementOrder::Finite(order)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {}", self.coords, self.group)
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Canonical form of a presented group together with the coordinate changes
/// between presentation generators and canonical generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FgAbGroup,
    /// `canonical × presentation`: presentation coordinates to canonical ones.
    pub to_canonical: IntMatrix,
    /// `presentation × canonical`: column `k` is canonical generator `k`.
    pub from_canonical: IntMatrix,
}

impl Presentation {
    pub fn new(generators: usize, relations: &IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(AbelianError::Shape(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        let s = smith_normal_form(relations)?;
        let mut free = Vec::new();
        let mut torsion_idx = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..generators {
            let d = if i < s.rank { s.d[(i, i)] } else { 0 };
            match d {
                0 => free.push(i),
                1 => {}
                _ => {
                    torsion_idx.push(i);
                    torsion.push(d);
                }
            }
        }
        let group = FgAbGroup::new(free.len(), torsion)?;
        let selected: Vec<usize> = free.iter().chain(&torsion_idx).copied().collect();
        let mut to_canonical = s.u.select_rows(&selected);
        for (j, &t) in group.torsion().iter().enumerate() {
            let row = group.free_rank() + j;
            for c in 0..to_canonical.cols() {
                to_canonical[(row, c)] = to_canonical[(row, c)].rem_euclid(t);
            }
        }
        let from_canonical = s.u_inv.select_columns(&selected);
        Ok(Presentation {
            group,
            to_canonical,
            from_canonical,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_are_enforced() {
        assert!(FgAbGroup::new(0, vec![4, 2]).is_err());
        assert!(FgAbGroup::new(0, vec![1]).is_err());
        assert!(FgAbGroup::new(2, vec![2, 4, 12]).is_ok());
        assert!(FgAbGroup::new(1, vec![]).unwrap().with_labels(vec![]).is_err());
    }

    #[test]
    fn element_orders() {
        let z24 = FgAbGroup::cyclic(24).unwrap();
        assert_eq!(z24.element(vec![12]).unwrap().order(), ElementOrder::Finite(2));
        assert_eq!(z24.element(vec![0]).unwrap().order(), ElementOrder::Finite(1));
        let g = FgAbGroup::new(1, vec![2]).unwrap();
        assert_eq!(g.element(vec![1, 0]).unwrap().order(), ElementOrder::Infinite);
        let h = FgAbGroup::new(0, vec![2, 12]).unwrap();
        assert_eq!(h.element(vec![1, 3]).unwrap().order(), ElementOrder::Finite(4));
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(FgAbGroup::cyclic(24).unwrap().enumerate_torsion_part().unwrap().len(), 24);
        assert_eq!(FgAbGroup::trivial().enumerate_torsion_part().unwrap().len(), 1);
        let big = FgAbGroup::new(0, vec![1000, 1000, 1000]).unwrap();
        assert!(matches!(
            big.enumerate_torsion_part(),
            Err(AbelianError::TooLarge { .. })
        ));
    }

    #[test]
    fn coordinates_reduce_on_construction() {
        let g = FgAbGroup::new(1, vec![6]).unwrap();
        let x = g.element(vec![-3, -1]).unwrap();
        assert_eq!(x.coords(), &[-3, 5]);
        assert_eq!(x.add(&g.element(vec![3, 1]).unwrap()).unwrap(), g.zero());
    }

    #[test]
    fn presentation_of_z4_plus_z6() {
        let rel = IntMatrix::diagonal(&[4, 6], 2, 2);
        let p = Presentation::new(2, &rel).unwrap();
        assert_eq!(p.group.torsion(), &[2, 12]);
        // identity up to the torsion orders of the canonical coordinates
        let prod = p.to_canonical.mul(&p.from_canonical).unwrap();
        for (i, &t) in p.group.torsion().iter().enumerate() {
            for j in 0..2 {
                assert_eq!((prod[(i, j)] - i64::from(i == j)).rem_euclid(t), 0);
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(FgAbGroup::new(2, vec![2, 24]).unwrap().to_string(), "Z^2 + Z2 + Z24");
        assert_eq!(FgAbGroup::trivial().to_string(), "0");
    }
}
