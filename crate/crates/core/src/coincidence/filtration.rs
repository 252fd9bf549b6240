use std::fmt;

use serde::{Serialize, Serializer};

use super::grassmann::{grassmann_all_loose, grassmann_pi};
use super::projective::ProjectiveContext;
use super::sphere::SphereContext;
use super::{SpaceDescriptor, SpaceFamily};
use crate::abelian::{quotient, FgAbGroup, GroupElement, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::fibration::{ker_boundary, pi_projective, ProjectiveSpace};
use crate::homotopy_db::{Database, Field};
use crate::trace::{rules, Trace};

/// Index `q` of the filtration, `1 ≤ q ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiltrationLevel {
    Finite(u32),
    Infinite,
}

impl FiltrationLevel {
    fn at_least(self, k: u32) -> bool {
        self >= FiltrationLevel::Finite(k)
    }
}

impl fmt::Display for FiltrationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationLevel::Finite(q) => write!(f, "{q}"),
            FiltrationLevel::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for FiltrationLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FiltrationLevel::Finite(q) => s.serialize_u32(*q),
            FiltrationLevel::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// `π^(q)_m(N)` as a subgroup of `π_m(N)`.
#[derive(Clone, Debug)]
pub struct FiltrationResult {
    pub q: FiltrationLevel,
    pub subgroup: Subgroup,
    /// The filtration is constant from this index on.
    pub stabilized_at: u32,
}

/// `π_m(N)` for a supported target.
pub fn space_group(db: &Database, space: &SpaceDescriptor, m: u32, trace: &mut Trace) -> Result<FgAbGroup> {
    match space.family {
        SpaceFamily::Sphere { n } => db.pi_sphere_traced(m, n, trace),
        SpaceFamily::Projective { space } => Ok(pi_projective(db, &space, m, trace)?.total),
        SpaceFamily::Grassmann2 { r } => Ok(grassmann_pi(db, m, r, trace)?.group),
        SpaceFamily::Other => Err(unsupported(space)),
    }
}

fn unsupported(space: &SpaceDescriptor) -> Error {
    Error::Unsupported(format!("no homotopy data for {space}"))
}

/// `π^c_m(N)`: classes loose against a constant map.
pub fn pi_c(db: &Database, space: &SpaceDescriptor, m: u32, trace: &mut Trace) -> Result<Subgroup> {
    match space.family {
        SpaceFamily::Sphere { n } => {
            trace.push(rules::FILTRATION_SPHERE);
            Ok(Subgroup::trivial(db.pi_sphere_traced(m, n, trace)?))
        }
        SpaceFamily::Projective { space } => {
            let g = pi_projective(db, &space, m, trace)?;
            trace.push(rules::FILTRATION_PROJECTIVE);
            g.c_subgroup()
        }
        SpaceFamily::Grassmann2 { r } => {
            // the punctured Grassmannian already carries every class
            let g = grassmann_pi(db, m, r, trace)?;
            trace.push(rules::FILTRATION_GRASSMANN);
            Ok(Subgroup::whole(g.group))
        }
        SpaceFamily::Other => Err(unsupported(space)),
    }
}

/// `π^(q)_m(N)`; `q = ∞` gives the intersection of all levels.
pub fn pi_q(
    db: &Database,
    space: &SpaceDescriptor,
    m: u32,
    q: FiltrationLevel,
    trace: &mut Trace,
) -> Result<FiltrationResult> {
    if q == FiltrationLevel::Finite(0) {
        return Err(Error::InvalidInput("the filtration starts at q = 1".into()));
    }
    let (subgroup, stabilized_at) = match space.family {
        SpaceFamily::Sphere { n } => {
            let g = db.pi_sphere_traced(m, n, trace)?;
            trace.push(rules::FILTRATION_SPHERE);
            let s = if !q.at_least(3) {
                Subgroup::whole(g)
            } else if n % 2 == 1 || g.is_trivial() {
                // the Stiefel fibration over an odd sphere has a section
                trace.push(rules::BOUNDARY_SECTION);
                Subgroup::whole(g)
            } else {
                ker_boundary(db, Field::R, m, n, trace)?
            };
            (s, 3)
        }
        SpaceFamily::Projective { space } => {
            let g = pi_projective(db, &space, m, trace)?;
            trace.push(rules::FILTRATION_PROJECTIVE);
            let s = if q.at_least(2) {
                let k = ker_boundary(db, space.field(), m, space.n_prime(), trace)?;
                g.lifted_plus_c(&k)?
            } else {
                Subgroup::whole(g.total)
            };
            (s, 2)
        }
        SpaceFamily::Grassmann2 { .. } => (pi_c(db, space, m, trace)?, 1),
        SpaceFamily::Other => return Err(unsupported(space)),
    };
    Ok(FiltrationResult {
        q,
        subgroup,
        stabilized_at,
    })
}

/// The isomorphism `c: π^(2)/π^c → π^(2)/π^c` exchanging the roles of the
/// two base points.
#[derive(Clone, Debug)]
pub struct CIsomorphism {
    pub quotient: FgAbGroup,
    pub map: GroupHom,
}

pub fn c_isomorphism(db: &Database, space: &SpaceDescriptor, m: u32, trace: &mut Trace) -> Result<CIsomorphism> {
    match space.family {
        SpaceFamily::Sphere { n } => {
            // π^(2) is everything and π^c is trivial, so c is A_* itself
            let map = db.antipodal_action_traced(m, n, trace)?;
            trace.push(rules::C_ISOMORPHISM_SPHERE);
            Ok(CIsomorphism {
                quotient: map.domain().clone(),
                map,
            })
        }
        SpaceFamily::Projective { .. } | SpaceFamily::Grassmann2 { .. } => {
            let two = pi_q(db, space, m, FiltrationLevel::Finite(2), trace)?.subgroup;
            let c = pi_c(db, space, m, trace)?;
            let mut gens: Vec<GroupElement> = Vec::new();
            for g in c.generators() {
                gens.push(two.coordinates(g)?.expect("pi^c lies in pi^(2)"));
            }
            let inner = Subgroup::new(two.canonical_form().clone(), gens)?;
            let (q, _) = quotient(&inner)?;
            // induced by a selfmap homotopic to the identity
            trace.push(rules::C_ISOMORPHISM_PROJECTIVE);
            Ok(CIsomorphism {
                map: GroupHom::identity(q.clone()),
                quotient: q,
            })
        }
        SpaceFamily::Other => Err(unsupported(space)),
    }
}

/// Criteria under which every map `M → N` extends to arbitrarily many
/// pairwise coincidence-free maps, so the filtration is full. Returns the
/// matching rule, or `None` when no criterion applies — which says nothing
/// about fullness.
///
/// Having a nowhere vanishing vector field is decided through `χ(N) = 0`,
/// exact for closed manifolds.
pub fn full_filtration_shortcut(m_dim: u32, m_compact: bool, target: &SpaceDescriptor) -> Option<&'static str> {
    if m_compact && !target.compact {
        Some(rules::SHORTCUT_NONCOMPACT)
    } else if target.euler_characteristic_zero {
        Some(rules::SHORTCUT_VECTOR_FIELD)
    } else if m_dim < target.dimension {
        Some(rules::SHORTCUT_DIMENSION)
    } else {
        None
    }
}

/// Looseness of a pair together with the rule that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LooseWitness {
    pub loose: bool,
    pub rule: &'static str,
    pub trace: Trace,
}

/// Decides whether `(f₁, f₂)` with `[f_i] = x_i ∈ π_m(N)` is loose.
///
/// For Grassmannians every pair is loose and the classes are not examined.
pub fn loose_pair(
    db: &Database,
    space: &SpaceDescriptor,
    m: u32,
    x1: &GroupElement,
    x2: &GroupElement,
) -> Result<LooseWitness> {
    match space.family {
        SpaceFamily::Sphere { n } => {
            let ctx = SphereContext::new(db, m, n)?;
            let mut trace = ctx.base_trace().clone();
            let loose = ctx.is_loose(x1, x2)?;
            trace.push(rules::SPHERE_ANTIPODAL_RULE);
            Ok(LooseWitness {
                loose,
                rule: rules::SPHERE_ANTIPODAL_RULE,
                trace,
            })
        }
        SpaceFamily::Projective { space } => projective_loose(db, space, m, x1, x2),
        SpaceFamily::Grassmann2 { r } => match grassmann_all_loose(r) {
            Some(loose) => {
                let mut trace = Trace::new();
                trace.push(rules::GRASSMANN_EVEN_RANK);
                Ok(LooseWitness {
                    loose,
                    rule: rules::GRASSMANN_EVEN_RANK,
                    trace,
                })
            }
            None => Err(Error::NotDetermined(format!(
                "looseness into G({r},2) is known only for even r >= 4"
            ))),
        },
        SpaceFamily::Other => Err(unsupported(space)),
    }
}

fn projective_loose(
    db: &Database,
    space: ProjectiveSpace,
    m: u32,
    x1: &GroupElement,
    x2: &GroupElement,
) -> Result<LooseWitness> {
    let ctx = ProjectiveContext::new(db, space, m)?;
    let g = ctx.group();
    let (c1, c2) = (g.class_from_total(x1)?, g.class_from_total(x2)?);
    let mut trace = Trace::new();
    let loose = ctx.is_loose(&c1, &c2, &mut trace)?;
    trace.push(rules::FILTRATION_PROJECTIVE);
    Ok(LooseWitness {
        loose,
        rule: rules::FILTRATION_PROJECTIVE,
        trace,
    })
}
