use num_traits::{One, Zero};
use serde::Serialize;

use super::build::{build_pair, eval_line_f64, line_average};
use super::theorem::{theorem_polynomial, Condition, Factor, TheoremPolynomial};
use super::{FamilySpec, FamilyTag};
use crate::averaging::midpoints;
use crate::error::{Error, Result};
use crate::flexion::{classify_at_root, classify_configuration, line_constraints, line_jets, FlexionClass, IdentityJets, LineConfig};
use crate::kinematics::{eliminant, identity_root_order, BinaryForm};
use crate::ratpoly::{format_rational, int, upoly_real_roots, Rational, RealRoot, UPoly};
use crate::stachel::{stachel_check, stachel_check_f64, StachelReport, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrientationStatus {
    /// The order is raised as the theorem states.
    OrderRaising,
    /// A degenerate factor vanishes here too.
    Degenerate,
    /// The classification disagrees with the theorem.
    Uncertified,
}

/// A real projective root `(f0 : f1)` of the condition.
#[derive(Clone, Debug, Serialize)]
pub struct Orientation {
    /// `1`, or `0` for the root `(0 : 1)`.
    pub f0: i8,
    pub f1: f64,
    /// Exact value when rational.
    pub f1_exact: Option<String>,
    pub status: OrientationStatus,
    pub class: Option<FlexionClass>,
    /// Multiplicity of the identity among the direct kinematic solutions.
    pub identity_multiplicity: Option<usize>,
    pub stachel: Option<StachelReport>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub root: Option<RealRoot>,
}

impl Orientation {
    pub fn f1_rational(&self) -> Option<Rational> {
        self.root.as_ref().and_then(|r| r.as_rational().cloned())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum FamilyOutcome {
    /// Finitely many special orientations, listed.
    Orientations,
    /// Every orientation raises the order.
    EveryOrientation { class: FlexionClass },
    /// No orientation raises the order.
    NoCondition,
    SelfMotion { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationReport {
    pub spec: FamilySpec,
    pub theorem: TheoremPolynomial,
    pub outcome: FamilyOutcome,
    pub orientations: Vec<Orientation>,
    /// Constant degenerate factors that vanish for these parameters.
    pub parameter_notes: Vec<String>,
}

impl OrientationReport {
    pub fn is_self_motion(&self) -> bool {
        matches!(self.outcome, FamilyOutcome::SelfMotion { .. })
    }
}

fn factor_vanishes(f: &Factor, root: Option<&RealRoot>) -> bool {
    if f.is_constant() {
        return false;
    }
    match root {
        Some(r) => r.is_root_of(&f.form.dehomogenize()),
        None => f.form.at_infinity().is_zero(),
    }
}

fn class_matches(found: FlexionClass, wanted: FlexionClass) -> bool {
    found == wanted || (wanted == FlexionClass::OrderAtLeast2 && found == FlexionClass::SingularV1)
}

/// Multiplicity of the identity in the eliminant along the orientation line.
///
/// When the linear block for the translation is singular at the identity rotation, the
/// fiber holds a second pose (a line meets a circle) and the order of the eliminant is
/// shared between the two. They are mirror images under the reflection in the collinear
/// base, so each gets half.
pub(crate) fn identity_multiplicity_at(line: &LineConfig, root: &RealRoot) -> Option<usize> {
    let cs = line_constraints(line);
    let el = eliminant(&cs).ok()?;
    let zero = |p: &UPoly| p.is_zero() || root.is_root_of(p);
    let m = identity_root_order(&el, zero)?;
    let at_id = |f: &BinaryForm<UPoly>| f.c[0].clone();
    if !zero(&at_id(&el.d)) {
        return Some(m);
    }
    let row = (0..2).find(|&i| !zero(&at_id(&el.a[i][0])) || !zero(&at_id(&el.a[i][1])))?;
    let (u, v) = (at_id(&el.a[row][0]), at_id(&el.a[row][1]));
    // on the line (q2, q3) = lambda (-v, u) the reference constraint is
    // lambda (u L3 - v L2) + 4 lambda^2 (u^2 + v^2); the second root is distinct unless u L3 = v L2
    let hc = &cs.homogenized()[el.reference_leg];
    let z = UPoly::zero();
    let (l2, l3) = (hc.coeff(&[1, 0, 1, 0], &z), hc.coeff(&[1, 0, 0, 1], &z));
    let lin = &(&u * &l3) - &(&v * &l2);
    Some(if zero(&lin) { m } else { m / 2 })
}

/// Real orientations where the condition vanishes, each classified and annotated.
pub fn solve_orientations(spec: &FamilySpec) -> Result<OrientationReport> {
    let spec = spec.without_orientation();
    let tp = theorem_polynomial(&spec);
    let parameter_notes: Vec<String> = tp
        .degenerate
        .iter()
        .filter(|f| f.is_constant() && f.vanishes_identically())
        .map(|f| f.meaning.describe())
        .collect();
    let report = |outcome, orientations| OrientationReport {
        spec: spec.clone(),
        theorem: tp.clone(),
        outcome,
        orientations,
        parameter_notes: parameter_notes.clone(),
    };
    let line = line_average(&spec)?;
    match &tp.condition {
        Condition::None => {
            let outcome = if spec.tag() == FamilyTag::CReflGeneral {
                FamilyOutcome::EveryOrientation { class: FlexionClass::SingularV1 }
            } else {
                FamilyOutcome::NoCondition
            };
            Ok(report(outcome, vec![]))
        }
        Condition::Constant(c) => {
            if spec.tag() == FamilyTag::ARotVerySpecial {
                let w = spec.p("e0") - int(2) * spec.p("e1") * spec.p("l1");
                if w.is_zero() {
                    return Ok(report(
                        FamilyOutcome::SelfMotion { reason: "the platform rotates about x1 = x5 = x6 (e0 = 2 e1 l1)".into() },
                        vec![],
                    ));
                }
            }
            if !c.is_zero() {
                return Ok(report(FamilyOutcome::NoCondition, vec![]));
            }
            // the order is raised for every orientation; certify at a sample point
            let jets = line_jets(&line);
            let sample = sample_orientation(&tp, &jets);
            let class = classify_at_root(&jets, &RealRoot::from_rational(sample));
            Ok(report(FamilyOutcome::EveryOrientation { class }, vec![]))
        }
        Condition::Form(form) => {
            if form.vanishes() {
                return Ok(report(
                    FamilyOutcome::SelfMotion { reason: "the orientation condition vanishes identically".into() },
                    vec![],
                ));
            }
            let jets = line_jets(&line);
            let mut out = Vec::new();
            if form.at_infinity().is_zero() {
                out.push(orientation_at_infinity(&spec, &tp));
            }
            let poly = form.dehomogenize();
            if !poly.is_constant() {
                for root in upoly_real_roots(&poly)? {
                    out.push(orientation_at(&tp, &line, &jets, &spec, root));
                }
            }
            Ok(report(FamilyOutcome::Orientations, out))
        }
    }
}

fn sample_orientation(tp: &TheoremPolynomial, jets: &IdentityJets<UPoly>) -> Rational {
    let _ = jets;
    (1..)
        .map(|k| Rational::new(k.into(), 7.into()))
        .find(|f| {
            let r = RealRoot::from_rational(f.clone());
            !tp.degenerate.iter().any(|d| factor_vanishes(d, Some(&r)))
        })
        .expect("infinitely many candidates")
}

fn orientation_at(tp: &TheoremPolynomial, line: &LineConfig, jets: &IdentityJets<UPoly>, spec: &FamilySpec, root: RealRoot) -> Orientation {
    let mut notes: Vec<String> = tp
        .degenerate
        .iter()
        .filter(|f| factor_vanishes(f, Some(&root)))
        .map(|f| f.meaning.describe())
        .collect();
    let f1 = root.clone().refined(200).to_f64();
    let exact = root.as_rational().cloned();
    let degenerate = !notes.is_empty();
    let class = if degenerate && tp.degenerate.iter().any(|f| matches!(f.meaning, super::theorem::Degeneracy::ZeroLeg(_)) && factor_vanishes(f, Some(&root))) {
        None
    } else {
        Some(classify_at_root(jets, &root))
    };
    // rational roots are rebuilt from the pair and classified again, exactly
    if let (Some(f), Some(c)) = (&exact, class) {
        if let Ok(s) = spec.with_orientation(Rational::one(), f.clone()) {
            if let Ok((a, b)) = build_pair(&s) {
                if let Ok(r) = classify_configuration(&midpoints(&a, &b)) {
                    if r.classification != c {
                        notes.push(format!("line and exact classification differ: {:?} vs {:?}", c, r.classification));
                    }
                }
            }
        }
    }
    let identity_multiplicity = if class.is_some() { identity_multiplicity_at(line, &root) } else { None };
    let stachel = class.map(|_| match &exact {
        Some(f) => {
            let s = spec.with_orientation(Rational::one(), f.clone()).expect("valid");
            let (a, b) = build_pair(&s).expect("built on the line");
            stachel_check(&midpoints(&a, &b), DEFAULT_TOL)
        }
        None => stachel_check_f64(eval_line_f64(line, f1), DEFAULT_TOL),
    });
    let status = match class {
        _ if degenerate => OrientationStatus::Degenerate,
        Some(c) if class_matches(c, tp.at_root) => OrientationStatus::OrderRaising,
        _ => OrientationStatus::Uncertified,
    };
    Orientation {
        f0: 1,
        f1,
        f1_exact: exact.as_ref().map(format_rational),
        status,
        class,
        identity_multiplicity,
        stachel,
        notes,
        root: Some(root),
    }
}

fn orientation_at_infinity(spec: &FamilySpec, tp: &TheoremPolynomial) -> Orientation {
    let mut notes: Vec<String> = tp.degenerate.iter().filter(|f| factor_vanishes(f, None)).map(|f| f.meaning.describe()).collect();
    let built = spec.with_orientation(Rational::zero(), Rational::one()).and_then(|s| build_pair(&s));
    let (class, stachel) = match built.map(|(a, b)| midpoints(&a, &b)) {
        Ok(avg) => match classify_configuration(&avg) {
            Ok(r) => (Some(r.classification), Some(stachel_check(&avg, DEFAULT_TOL))),
            Err(Error::InvalidConfig(m)) => {
                notes.push(m);
                (None, None)
            }
            Err(e) => {
                notes.push(e.to_string());
                (None, None)
            }
        },
        Err(e) => {
            notes.push(e.to_string());
            (None, None)
        }
    };
    let status = match class {
        _ if !notes.is_empty() => OrientationStatus::Degenerate,
        Some(c) if class_matches(c, tp.at_root) => OrientationStatus::OrderRaising,
        _ => OrientationStatus::Uncertified,
    };
    Orientation {
        f0: 0,
        f1: 1.0,
        f1_exact: Some("1".into()),
        status,
        class,
        identity_multiplicity: None,
        stachel,
        notes,
        root: None,
    }
}
