//! Parametrized pairs of incongruent realisations (Sets A, B, C), the orientation
//! conditions raising the flexion order of their average, and theorem checks.
//!
//! Every family fixes `x4` (at `(0,1)` for rotations and reflections, at the origin for
//! translations), relates the two platform copies by a fixed isometry, puts the base
//! points on perpendicular bisectors `x_i = m_i + l_i n_i` (or leaves them free where the
//! bisector is undefined) and finally rotates the first realisation by `(f0:f1:0:0)`.

mod build;
pub mod catalog;
mod solve;
mod spotcheck;
mod theorem;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::averaging::PairSet;
use crate::error::{Error, Result};
use crate::ratpoly::{format_rational, serde_rational, Rational};

pub use build::{
    averaged_config, bisector_frame, build_pair, eval_line, eval_line_f64, line_average, unrotated_pair, BisectorFrame,
};
pub use solve::{solve_orientations, FamilyOutcome, Orientation, OrientationReport, OrientationStatus};
pub use theorem::{
    from_regrouping, set_b_coefficients, t_regrouping, theorem_polynomial, Condition, Degeneracy, Factor,
    TheoremPolynomial,
};
pub use spotcheck::{singularity_spotcheck, SingularityReport, SpotSample, SpotStage};
pub use verify::{derived_condition, random_spec, verify_theorem, Counterexample, TheoremReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "A-rot-general")]
    ARotGeneral,
    #[serde(rename = "A-rot-special")]
    ARotSpecial,
    #[serde(rename = "A-rot-verySpecial")]
    ARotVerySpecial,
    #[serde(rename = "A-translation")]
    ATranslation,
    #[serde(rename = "B-rot-general")]
    BRotGeneral,
    #[serde(rename = "B-rot-special")]
    BRotSpecial,
    #[serde(rename = "B-translation")]
    BTranslation,
    #[serde(rename = "C-glide")]
    CGlide,
    #[serde(rename = "C-refl-general")]
    CReflGeneral,
    #[serde(rename = "C-refl-special")]
    CReflSpecial,
    #[serde(rename = "C-refl-verySpecial")]
    CReflVerySpecial,
}

use FamilyTag::*;

impl FamilyTag {
    pub const ALL: [FamilyTag; 11] = [
        ARotGeneral,
        ARotSpecial,
        ARotVerySpecial,
        ATranslation,
        BRotGeneral,
        BRotSpecial,
        BTranslation,
        CGlide,
        CReflGeneral,
        CReflSpecial,
        CReflVerySpecial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ARotGeneral => "A-rot-general",
            ARotSpecial => "A-rot-special",
            ARotVerySpecial => "A-rot-verySpecial",
            ATranslation => "A-translation",
            BRotGeneral => "B-rot-general",
            BRotSpecial => "B-rot-special",
            BTranslation => "B-translation",
            CGlide => "C-glide",
            CReflGeneral => "C-refl-general",
            CReflSpecial => "C-refl-special",
            CReflVerySpecial => "C-refl-verySpecial",
        }
    }

    /// Parameters the case needs besides the orientation `f0, f1`.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            ARotGeneral | BRotGeneral => &["e0", "e1", "a5", "b5", "a6", "b6", "l1", "l2", "l3"],
            ARotSpecial | BRotSpecial => &["e0", "e1", "a3", "b3", "a5", "b5", "l1", "l2"],
            ARotVerySpecial => &["e0", "e1", "a2", "b2", "a3", "b3", "l1"],
            ATranslation | BTranslation | CReflGeneral => &["a5", "b5", "a6", "b6", "l1", "l2", "l3"],
            CGlide => &["d", "a5", "b5", "a6", "b6", "l1", "l2", "l3"],
            CReflSpecial => &["a3", "b3", "a5", "b5", "a6", "l1", "l2"],
            CReflVerySpecial => &["a2", "b2", "a3", "b3", "a5", "a6", "l1"],
        }
    }

    pub fn set(self) -> PairSet {
        match self {
            ARotGeneral | ARotSpecial | ARotVerySpecial | ATranslation => PairSet::A,
            BRotGeneral | BRotSpecial | BTranslation => PairSet::B,
            _ => PairSet::C,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, ARotGeneral | ARotSpecial | ARotVerySpecial | BRotGeneral | BRotSpecial)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidFamily(format!("unknown tag {s:?}")))
    }
}

/// A family case with exact parameter values. `f0, f1` may be absent (free orientation).
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRaw", into = "SpecRaw")]
pub struct FamilySpec {
    tag: FamilyTag,
    params: BTreeMap<String, Rational>,
}

#[derive(Serialize, Deserialize)]
struct SpecRaw {
    tag: FamilyTag,
    #[serde(with = "serde_rational::map")]
    params: BTreeMap<String, Rational>,
}

impl TryFrom<SpecRaw> for FamilySpec {
    type Error = Error;
    fn try_from(r: SpecRaw) -> Result<Self> {
        FamilySpec::new(r.tag, r.params)
    }
}

impl From<FamilySpec> for SpecRaw {
    fn from(s: FamilySpec) -> Self {
        SpecRaw { tag: s.tag, params: s.params }
    }
}

impl fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.tag)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={}", if i == 0 { " " } else { ", " }, format_rational(v))?;
        }
        write!(f, " }}")
    }
}

impl FamilySpec {
    /// Validates the parameter set; `e1` defaults to 1 in rotation cases.
    pub fn new(tag: FamilyTag, mut params: BTreeMap<String, Rational>) -> Result<Self> {
        let names = tag.parameters();
        if names.contains(&"e1") {
            params.entry("e1".into()).or_insert_with(|| Rational::from_integer(1.into()));
        }
        for k in params.keys() {
            if !names.contains(&k.as_str()) && k != "f0" && k != "f1" {
                return Err(Error::InvalidFamily(format!("{tag} does not take parameter {k:?}")));
            }
        }
        let missing: Vec<&str> = names.iter().copied().filter(|n| !params.contains_key(*n)).collect();
        if !missing.is_empty() {
            return Err(Error::InvalidFamily(format!("{tag} is missing {}", missing.join(", "))));
        }
        match (params.get("f0"), params.get("f1")) {
            (Some(a), Some(b)) if a.is_zero() && b.is_zero() => {
                return Err(Error::InvalidFamily("(f0, f1) = (0, 0) is not an orientation".into()));
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(Error::InvalidFamily("give both f0 and f1 or neither".into()));
            }
            _ => {}
        }
        if tag.is_rotation() && params["e1"].is_zero() {
            return Err(Error::InvalidFamily("e1 = 0 is the identity, not a rotation".into()));
        }
        if tag == CGlide && params["d"].is_zero() {
            return Err(Error::InvalidFamily("C-glide needs d != 0; use C-refl-general for d = 0".into()));
        }
        Ok(FamilySpec { tag, params })
    }

    /// From `(name, value)` pairs.
    pub fn from_pairs(tag: FamilyTag, pairs: &[(&str, Rational)]) -> Result<Self> {
        Self::new(tag, pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn params(&self) -> &BTreeMap<String, Rational> {
        &self.params
    }

    /// A required parameter; panics on names the case does not have.
    pub fn p(&self, name: &str) -> &Rational {
        self.params.get(name).unwrap_or_else(|| panic!("{} has no parameter {name}", self.tag))
    }

    pub fn orientation(&self) -> Option<(Rational, Rational)> {
        Some((self.params.get("f0")?.clone(), self.params.get("f1")?.clone()))
    }

    pub fn with_orientation(&self, f0: Rational, f1: Rational) -> Result<Self> {
        let mut params = self.params.clone();
        params.insert("f0".into(), f0);
        params.insert("f1".into(), f1);
        Self::new(self.tag, params)
    }

    pub fn without_orientation(&self) -> Self {
        let mut params = self.params.clone();
        params.remove("f0");
        params.remove("f1");
        FamilySpec { tag: self.tag, params }
    }

    /// Same case with one parameter replaced.
    pub fn with_param(&self, name: &str, value: Rational) -> Result<Self> {
        let mut params = self.params.clone();
        params.insert(name.into(), value);
        Self::new(self.tag, params)
    }
}
