//! Curated homotopy groups of spheres and the structure maps between them.
//!
//! The database is loaded once from a JSON document (see
//! `data/homotopy_db.schema.json`), validated, and then only read. Lookups
//! that the stored data does not cover fail with an explicit error; nothing
//! is guessed. A handful of values are forced by elementary topology and are
//! answered without a record: `π_m(S^n) = 0` for `m < n`, `π_n(S^n) = ℤ`,
//! and `π_m(S^1) = 0` for `m ≥ 2`.

mod checks;
mod file;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::abelian::{direct_sum, FgAbGroup, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::trace::{rules, Trace};

pub use checks::check_database;
pub use file::RangeMeta;

const SHIPPED: &str = include_str!("../../data/homotopy_db.json");

/// Schema of the database file format.
pub const SCHEMA: &str = include_str!("../../data/homotopy_db.schema.json");

/// The real, complex and quaternionic fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    /// Real dimension `d`.
    pub fn dim(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomKind {
    Suspension,
    StableSuspension,
    Boundary,
    Antipodal,
}

impl fmt::Display for HomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HomKind::Suspension => "suspension",
            HomKind::StableSuspension => "stable_suspension",
            HomKind::Boundary => "boundary",
            HomKind::Antipodal => "antipodal",
        };
        f.write_str(s)
    }
}

/// Key of a structure-map record. `n` is `n′` for boundary records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HomKey {
    pub kind: HomKind,
    pub field: Option<Field>,
    pub m: u32,
    pub n: u32,
}

impl HomKey {
    pub fn new(kind: HomKind, m: u32, n: u32) -> Self {
        HomKey {
            kind,
            field: None,
            m,
            n,
        }
    }

    pub fn boundary(field: Field, m: u32, n_prime: u32) -> Self {
        HomKey {
            kind: HomKind::Boundary,
            field: Some(field),
            m,
            n: n_prime,
        }
    }
}

impl fmt::Display for HomKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Some(k) => write!(f, "{}(K={k}, m={}, n'={})", self.kind, self.m, self.n),
            None => write!(f, "{}(m={}, n={})", self.kind, self.m, self.n),
        }
    }
}

/// Record key of `π_m(S^n)`.
pub fn sphere_key(m: u32, n: u32) -> String {
    format!("pi(m={m}, n={n})")
}

#[derive(Clone, Debug)]
pub struct SphereEntry {
    pub group: FgAbGroup,
    pub provenance: String,
}

#[derive(Clone, Debug)]
pub struct HomEntry {
    pub hom: GroupHom,
    pub provenance: String,
}

#[derive(Debug, Default)]
struct Inner {
    range: Option<RangeMeta>,
    spheres: BTreeMap<(u32, u32), SphereEntry>,
    homs: BTreeMap<HomKey, HomEntry>,
}

/// An immutable, validated database. Cloning shares the underlying data.
#[derive(Clone, Debug, Default)]
pub struct Database(Arc<Inner>);

impl Database {
    /// The database with no records at all; only forced values resolve.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The database compiled into the library.
    pub fn shipped() -> &'static Database {
        static DB: OnceLock<Database> = OnceLock::new();
        DB.get_or_init(|| {
            Database::from_json_str(SHIPPED, "<shipped>").expect("shipped database is valid")
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    /// Parses and validates a database document; `origin` names it in errors.
    pub fn from_json_str(text: &str, origin: &str) -> Result<Self> {
        file::parse(text, origin)
    }

    pub fn range(&self) -> Option<RangeMeta> {
        self.0.range
    }

    pub fn is_empty(&self) -> bool {
        self.0.spheres.is_empty() && self.0.homs.is_empty()
    }

    /// Stored `(m, n)` sphere-group keys.
    pub fn sphere_keys(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.spheres.keys().copied()
    }

    pub fn sphere_record(&self, m: u32, n: u32) -> Option<&SphereEntry> {
        self.0.spheres.get(&(m, n))
    }

    pub fn hom_keys(&self) -> impl Iterator<Item = HomKey> + '_ {
        self.0.homs.keys().copied()
    }

    pub fn hom_record(&self, key: &HomKey) -> Option<&HomEntry> {
        self.0.homs.get(key)
    }

    /// The sphere the stable suspension lands on.
    pub fn stable_sphere(&self) -> Result<u32> {
        self.0
            .range
            .map(|r| r.n_max)
            .ok_or_else(|| Error::MissingRecord("range metadata (database is empty)".into()))
    }

    pub fn pi_sphere(&self, m: u32, n: u32) -> Result<FgAbGroup> {
        self.pi_sphere_traced(m, n, &mut Trace::new())
    }

    pub fn pi_sphere_traced(&self, m: u32, n: u32, trace: &mut Trace) -> Result<FgAbGroup> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput(format!(
                "pi_{m}(S^{n}) needs m, n >= 1"
            )));
        }
        if m < n {
            trace.push(rules::SPHERE_TRIVIAL_BELOW);
            return Ok(FgAbGroup::trivial());
        }
        if m == n {
            trace.push(rules::SPHERE_DEGREE);
            if let Some(e) = self.0.spheres.get(&(m, n)) {
                return Ok(e.group.clone());
            }
            return Ok(FgAbGroup::integers()
                .with_labels(vec![format!("iota{n}")])
                .expect("one label"));
        }
        if n == 1 {
            trace.push(rules::CIRCLE_COVER);
            return Ok(FgAbGroup::trivial());
        }
        match self.0.spheres.get(&(m, n)) {
            Some(e) => {
                trace.push(rules::SPHERE_RECORD);
                Ok(e.group.clone())
            }
            None => Err(Error::NotInDatabase { m, n }),
        }
    }

    /// `E: π_m(S^n) → π_{m+1}(S^{n+1})`.
    pub fn suspension_hom(&self, m: u32, n: u32) -> Result<GroupHom> {
        self.suspension_hom_traced(m, n, &mut Trace::new())
    }

    pub fn suspension_hom_traced(&self, m: u32, n: u32, trace: &mut Trace) -> Result<GroupHom> {
        let key = HomKey::new(HomKind::Suspension, m, n);
        if let Some(e) = self.0.homs.get(&key) {
            trace.push(rules::SUSPENSION_RECORD);
            return Ok(e.hom.clone());
        }
        let domain = self.pi_sphere_traced(m, n, trace)?;
        let codomain = self.pi_sphere_traced(m + 1, n + 1, trace)?;
        if domain.is_trivial() || codomain.is_trivial() {
            trace.push(rules::SUSPENSION_TRIVIAL);
            return Ok(GroupHom::zero(domain, codomain));
        }
        if m == n {
            trace.push(rules::SUSPENSION_DEGREE);
            return Ok(GroupHom::from_rows(domain, codomain, &[vec![1]])?);
        }
        Err(Error::MissingRecord(key.to_string()))
    }

    /// `E^∞: π_m(S^n) → π_{m−n+N}(S^N)` where `N` is [`Database::stable_sphere`].
    pub fn stable_suspension(&self, m: u32, n: u32) -> Result<GroupHom> {
        self.stable_suspension_traced(m, n, &mut Trace::new())
    }

    pub fn stable_suspension_traced(&self, m: u32, n: u32, trace: &mut Trace) -> Result<GroupHom> {
        let top = self.stable_sphere()?;
        if n > top {
            return Err(Error::NotInDatabase { m, n });
        }
        let key = HomKey::new(HomKind::StableSuspension, m, n);
        if let Some(e) = self.0.homs.get(&key) {
            trace.push(rules::SUSPENSION_RECORD);
            return Ok(e.hom.clone());
        }
        self.suspension_composite(m, n, top, trace)
    }

    /// Composite of single suspensions from `π_m(S^n)` up to sphere `top`.
    pub fn suspension_composite(&self, m: u32, n: u32, top: u32, trace: &mut Trace) -> Result<GroupHom> {
        let mut acc = GroupHom::identity(self.pi_sphere_traced(m, n, trace)?);
        for i in 0..top.saturating_sub(n) {
            let e = self.suspension_hom_traced(m + i, n + i, trace)?;
            acc = e.compose(&acc)?;
        }
        if top > n {
            trace.push(rules::STABLE_COMPOSITE);
        }
        Ok(acc)
    }

    /// Action of the antipodal map `A` on `π_m(S^n)` by left composition.
    pub fn antipodal_action(&self, m: u32, n: u32) -> Result<GroupHom> {
        self.antipodal_action_traced(m, n, &mut Trace::new())
    }

    pub fn antipodal_action_traced(&self, m: u32, n: u32, trace: &mut Trace) -> Result<GroupHom> {
        let g = self.pi_sphere_traced(m, n, trace)?;
        if n % 2 == 1 || g.is_trivial() {
            trace.push(rules::ANTIPODAL_ODD);
            return Ok(GroupHom::identity(g));
        }
        if m < 2 * n - 1 {
            // A has degree −1 and every class here is a suspension
            trace.push(rules::ANTIPODAL_STABLE);
            return Ok(GroupHom::scalar(g, -1)?);
        }
        match self.0.homs.get(&HomKey::new(HomKind::Antipodal, m, n)) {
            Some(e) => {
                trace.push(rules::ANTIPODAL_RECORD);
                Ok(e.hom.clone())
            }
            None => Err(Error::AntipodalUnknown { m, n }),
        }
    }

    /// Image of `E: π_{m−1}(S^{n−1}) → π_m(S^n)` as a subgroup of `π_m(S^n)`.
    pub fn suspension_image(&self, m: u32, n: u32, trace: &mut Trace) -> Result<Subgroup> {
        if n < 2 || m < 2 {
            return Err(Error::InvalidInput(format!(
                "suspension into pi_{m}(S^{n}) needs m, n >= 2"
            )));
        }
        let g = self.pi_sphere_traced(m, n, trace)?;
        if m <= 2 * n - 2 {
            trace.push(rules::FREUDENTHAL_SURJECTIVE);
            return Ok(Subgroup::whole(g));
        }
        Ok(self.suspension_hom_traced(m - 1, n - 1, trace)?.image()?)
    }

    /// `π_m(V_{r,2}(ℝ)) ≅ π_m(S^{r−2}) ⊕ π_m(S^{r−1})` for even `r ≥ 4`, `m ≥ 3`.
    pub fn pi_stiefel_real(&self, m: u32, r: u32) -> Result<FgAbGroup> {
        Ok(self.stiefel_real_split(m, r, &mut Trace::new())?.group)
    }

    /// The split exact sequence of the unit tangent bundle of `S^{r−1}`:
    /// the left summand is the fibre `π_m(S^{r−2})`, the right one the base.
    pub fn stiefel_real_split(&self, m: u32, r: u32, trace: &mut Trace) -> Result<StiefelSplit> {
        if r % 2 == 1 || r < 4 {
            return Err(Error::Unsupported(format!(
                "Stiefel splitting needs an even r >= 4, got r = {r}"
            )));
        }
        if m < 3 {
            return Err(Error::Unsupported(format!(
                "Stiefel splitting needs m >= 3, got m = {m}"
            )));
        }
        let fibre = self.pi_sphere_traced(m, r - 2, trace)?;
        let base = self.pi_sphere_traced(m, r - 1, trace)?;
        trace.push(rules::STIEFEL_SPLITTING);
        let s = direct_sum(&fibre, &base)?;
        Ok(StiefelSplit {
            group: s.group,
            fibre_inclusion: s.inject_left,
            projection: s.project_right,
            section: s.inject_right,
        })
    }
}

/// `π_m(V_{r,2}(ℝ))` with the maps of its split fibration sequence.
#[derive(Clone, Debug)]
pub struct StiefelSplit {
    pub group: FgAbGroup,
    pub fibre_inclusion: GroupHom,
    /// `p_*` onto the base sphere.
    pub projection: GroupHom,
    pub section: GroupHom,
}
