//! Looseness, Nielsen and minimum coincidence numbers, and the
//! configuration-space filtration for maps `S^m → N`.
//!
//! Supported targets are spheres, projective spaces `KP(n′)` and the real
//! Grassmannians `G_{r,2}(ℝ)` of 2-planes with `r` even.

mod checks;
mod filtration;
mod grassmann;
mod projective;
mod sphere;

use std::cell::OnceCell;
use std::fmt;

use serde::{Serialize, Serializer};

pub use checks::{
    check_invariants, check_projective_instance, check_sphere_instance, InvariantChecks, EXCLUSIVITY,
    LOOSE_CONSISTENCY, LOOSE_SUM, MONOTONICITY, ORDERING, SYMMETRY,
};
pub use filtration::{
    c_isomorphism, full_filtration_shortcut, loose_pair, pi_c, pi_q, space_group, CIsomorphism, FiltrationLevel,
    FiltrationResult, LooseWitness,
};
pub use grassmann::{grassmann_all_loose, grassmann_pi, GrassmannGroup};
pub use projective::{classify_projective_pair, ProjectiveContext};
pub use sphere::{classify_sphere_pair, SphereContext};

use crate::error::{Error, Result};
use crate::fibration::ProjectiveSpace;
use crate::trace::Trace;

/// A minimum count: a natural number or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MinCount {
    Finite(u64),
    Infinite,
}

impl fmt::Display for MinCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinCount::Finite(k) => write!(f, "{k}"),
            MinCount::Infinite => f.write_str("infinity"),
        }
    }
}

/// Numbers serialize as JSON numbers, `∞` as the string `"infinity"`.
impl Serialize for MinCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MinCount::Finite(k) => s.serialize_u64(*k),
            MinCount::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// Outcome of classifying a pair `(f₁, f₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub loose: bool,
    /// `N#(f₁, f₂)`.
    pub nielsen: u64,
    pub mcc: u64,
    pub mc: MinCount,
    pub rule: &'static str,
    /// Row of the projective classification table, when one applied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<u8>,
    pub trace: Trace,
}

impl Verdict {
    fn new(nielsen: u64, mcc: u64, mc: MinCount, rule: &'static str, trace: Trace) -> Self {
        Verdict {
            loose: mcc == 0,
            nielsen,
            mcc,
            mc,
            rule,
            row: None,
            trace,
        }
    }

    /// `(N#, MCC, MC)`.
    pub fn numbers(&self) -> (u64, u64, MinCount) {
        (self.nielsen, self.mcc, self.mc)
    }

    /// `N# ≤ MCC ≤ MC` and `loose ⇔ MCC = 0 ⇔ MC = 0`.
    pub fn is_consistent(&self) -> bool {
        self.nielsen <= self.mcc
            && MinCount::Finite(self.mcc) <= self.mc
            && self.loose == (self.mcc == 0)
            && self.loose == (self.mc == MinCount::Finite(0))
    }
}

/// Target families the calculator knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpaceFamily {
    Sphere { n: u32 },
    Projective { space: ProjectiveSpace },
    /// `G_{r,2}(ℝ)`.
    Grassmann2 { r: u32 },
    /// Any other manifold, known only through its flags.
    Other,
}

/// A target manifold together with the flags the shortcut criteria use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpaceDescriptor {
    pub family: SpaceFamily,
    pub compact: bool,
    pub dimension: u32,
    pub euler_characteristic_zero: bool,
}

impl SpaceDescriptor {
    pub fn sphere(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("spheres need n >= 1".into()));
        }
        Ok(SpaceDescriptor {
            family: SpaceFamily::Sphere { n },
            compact: true,
            dimension: n,
            euler_characteristic_zero: n % 2 == 1,
        })
    }

    pub fn projective(space: ProjectiveSpace) -> Self {
        SpaceDescriptor {
            family: SpaceFamily::Projective { space },
            compact: true,
            dimension: space.n(),
            euler_characteristic_zero: space.euler_characteristic_zero(),
        }
    }

    /// `G_{r,2}(ℝ)`, `r ≥ 3`. Its Euler characteristic is `⌊r/2⌋ ≠ 0`.
    pub fn grassmann(r: u32) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidInput(format!("G_{{r,2}} needs r >= 3, got {r}")));
        }
        Ok(SpaceDescriptor {
            family: SpaceFamily::Grassmann2 { r },
            compact: true,
            dimension: 2 * (r - 2),
            euler_characteristic_zero: false,
        })
    }

    pub fn other(dimension: u32, compact: bool, euler_characteristic_zero: bool) -> Self {
        SpaceDescriptor {
            family: SpaceFamily::Other,
            compact,
            dimension,
            euler_characteristic_zero,
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            SpaceFamily::Sphere { n } => write!(f, "S^{n}"),
            SpaceFamily::Projective { space } => write!(f, "{space}"),
            SpaceFamily::Grassmann2 { r } => write!(f, "G({r},2)"),
            SpaceFamily::Other => write!(f, "manifold of dimension {}", self.dimension),
        }
    }
}

/// A value computed on first use, together with the rules it consumed.
/// Errors are cached too, so a gap is reported identically every time.
struct Lazy<T>(OnceCell<Result<(T, Trace)>>);

impl<T> Lazy<T> {
    fn new() -> Self {
        Lazy(OnceCell::new())
    }

    fn get(&self, trace: &mut Trace, f: impl FnOnce(&mut Trace) -> Result<T>) -> Result<&T> {
        let cell = self.0.get_or_init(|| {
            let mut t = Trace::new();
            f(&mut t).map(|v| (v, t))
        });
        match cell {
            Ok((v, t)) => {
                trace.extend(t);
                Ok(v)
            }
            Err(e) => Err(e.clone()),
        }
    }
}
