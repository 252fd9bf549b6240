use serde::Serialize;

/// Ordered, duplicate-free list of the rules an answer depended on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Trace(Vec<&'static str>);

impl Trace {
    pub fn new() -> Self {
        Trace(Vec::new())
    }

    pub fn push(&mut self, rule: &'static str) {
        if !self.0.contains(&rule) {
            self.0.push(rule);
        }
    }

    pub fn extend(&mut self, other: &Trace) {
        for r in &other.0 {
            self.push(r);
        }
    }

    pub fn rules(&self) -> &[&'static str] {
        &self.0
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|s| s.to_string()).collect()
    }
}

/// Rule identifiers used in traces and verdicts.
pub mod rules {
    pub const SPHERE_TRIVIAL_BELOW: &str = "sphere-below-dimension";
    pub const SPHERE_DEGREE: &str = "sphere-degree";
    pub const CIRCLE_COVER: &str = "circle-universal-cover";
    pub const SPHERE_RECORD: &str = "sphere-group-record";
    pub const SUSPENSION_RECORD: &str = "suspension-record";
    pub const SUSPENSION_TRIVIAL: &str = "suspension-trivial-domain";
    pub const SUSPENSION_DEGREE: &str = "suspension-degree";
    pub const STABLE_COMPOSITE: &str = "stable-suspension-composite";
    pub const FREUDENTHAL_SURJECTIVE: &str = "freudenthal-surjective";
    pub const ANTIPODAL_ODD: &str = "antipodal-odd-sphere";
    pub const ANTIPODAL_STABLE: &str = "antipodal-stable-sign";
    pub const ANTIPODAL_RECORD: &str = "antipodal-record";
    pub const BOUNDARY_RECORD: &str = "boundary-record";
    pub const BOUNDARY_SECTION: &str = "boundary-section";
    pub const BOUNDARY_TRIVIAL: &str = "boundary-trivial-group";
    pub const STABLE_RANGE_BOUNDARY: &str = "stable-range-boundary";
    pub const PROJECTIVE_SPLITTING: &str = "projective-splitting";
    pub const STIEFEL_SPLITTING: &str = "stiefel-splitting";
    pub const SPHERE_ANTIPODAL_RULE: &str = "sphere-antipodal-rule";
    pub const CIRCLE_DEGREE_DIFFERENCE: &str = "circle-degree-difference";
    pub const FILTRATION_SPHERE: &str = "filtration-sphere";
    pub const FILTRATION_PROJECTIVE: &str = "filtration-projective";
    pub const FILTRATION_GRASSMANN: &str = "filtration-grassmann";
    pub const GRASSMANN_SPLITTING: &str = "grassmann-splitting";
    pub const GRASSMANN_EVEN_RANK: &str = "grassmann-even-rank";
    pub const SHORTCUT_NONCOMPACT: &str = "shortcut-noncompact-target";
    pub const SHORTCUT_VECTOR_FIELD: &str = "shortcut-vector-field";
    pub const SHORTCUT_DIMENSION: &str = "shortcut-dimension";
    pub const C_ISOMORPHISM_SPHERE: &str = "c-isomorphism-antipodal";
    pub const C_ISOMORPHISM_PROJECTIVE: &str = "c-isomorphism-identity";
    pub const PROJECTIVE_ROWS: [&str; 7] = [
        "projective-row-1",
        "projective-row-2",
        "projective-row-3",
        "projective-row-4",
        "projective-row-5",
        "projective-row-6",
        "projective-row-7",
    ];
}
