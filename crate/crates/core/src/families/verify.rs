use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::build::{averaged_config, bisector_frame, build_pair, line_average, unrotated_pair};
use super::solve::{identity_multiplicity_at, solve_orientations};
use super::theorem::{from_regrouping, t_regrouping, theorem_polynomial, Condition, Degeneracy, TheoremPolynomial};
use super::{FamilySpec, FamilyTag, FamilyTag::*};
use crate::averaging::{classify_pair, midpoints, PairSet, RelativeMotion};
use crate::error::{Error, Result};
use crate::flexion::{classify_at_rational, classify_at_root, classify_configuration, line_jets, FlexionClass, IdentityJets};
use crate::geometry::{signed_area, Point2};
use crate::kinematics::{build_constraints, solve_direct_kinematics, DkOutcome};
use crate::ratpoly::{format_rational, upoly_real_roots, Rational, UPoly};

/// A failed check with enough context to reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub spec: FamilySpec,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub tag: FamilyTag,
    pub trials: u64,
    pub seed: u64,
    pub passed_trials: u64,
    /// Number of times each named check ran.
    pub checks: BTreeMap<String, u64>,
    pub rejected_draws: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl TheoremReport {
    pub fn passes(&self) -> bool {
        self.counterexamples.is_empty() && self.passed_trials == self.trials
    }
}

/// Rational with numerator in `[-20, 20]` and denominator in `[1, 10]`.
fn draw(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-20i64..=20).into(), rng.random_range(1i64..=10).into())
}

fn draw_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = draw(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Parameters drawn at random with `e1 = 1`; no degeneracy filtering.
pub fn random_params(tag: FamilyTag, rng: &mut ChaCha8Rng) -> FamilySpec {
    let params = tag
        .parameters()
        .iter()
        .map(|&n| {
            let v = match n {
                "e1" => Rational::one(),
                "d" => draw_nonzero(rng),
                _ => draw(rng),
            };
            (n.to_string(), v)
        })
        .collect();
    FamilySpec::new(tag, params).expect("complete parameter set")
}

fn roots_coincide(a: &UPoly, b: &UPoly) -> bool {
    !UPoly::gcd(a, b).map(|g| g.is_constant()).unwrap_or(true)
}

/// Why a draw is outside the generic position the theorem speaks about.
fn rejection(spec: &FamilySpec, tp: &TheoremPolynomial) -> Option<String> {
    for f in &tp.degenerate {
        if f.vanishes_identically() {
            return Some(format!("degenerate factor vanishes: {}", f.meaning.describe()));
        }
    }
    match &tp.condition {
        Condition::Form(c) => {
            if c.vanishes() {
                return Some("condition vanishes identically".into());
            }
            let cp = c.dehomogenize();
            for f in tp.degenerate.iter().filter(|f| !f.is_constant()) {
                if roots_coincide(&cp, &f.form.dehomogenize()) || (c.at_infinity().is_zero() && f.form.at_infinity().is_zero()) {
                    return Some(format!("a condition root is degenerate: {}", f.meaning.describe()));
                }
            }
            if c.deg > 1 && cp.degree() == Some(c.deg) && !cp.square_free_part().ok()?.degree().is_some_and(|d| d == c.deg) {
                return Some("repeated condition root".into());
            }
        }
        Condition::Constant(c) if c.is_zero() => return Some("orientation-independent condition vanishes".into()),
        _ => {}
    }
    let (a, _) = match unrotated_pair(spec) {
        Ok(p) => p,
        Err(e) => return Some(e.to_string()),
    };
    let ls: Vec<&Rational> = ["l1", "l2", "l3"].iter().filter_map(|n| spec.params().get(*n)).collect();
    if (0..ls.len()).any(|i| (i + 1..ls.len()).any(|j| ls[i] == ls[j])) {
        return Some("coincident bisector parameters".into());
    }
    // with b2 = 0 or b3 = 0 the axis variants would put a base anchor onto its platform anchor
    if spec.tag() == CReflVerySpecial && (spec.p("a2") == spec.p("a5") || spec.p("a3") == spec.p("a6")) {
        return Some("base and platform anchor share an abscissa".into());
    }
    let collinear = |t: [Point2; 3]| signed_area(&t[0], &t[1], &t[2]).is_zero();
    if spec.tag() != CReflGeneral && collinear(a.base()) {
        return Some("base anchors collinear".into());
    }
    if !matches!(spec.tag(), ARotVerySpecial | CReflGeneral) && collinear(a.platform()) {
        return Some("platform anchors collinear".into());
    }
    None
}

/// Draws until the parameters are in generic position. Returns the spec and the number of
/// rejected draws.
pub fn random_spec(tag: FamilyTag, rng: &mut ChaCha8Rng) -> (FamilySpec, u64) {
    let mut rejected = 0;
    loop {
        let spec = random_params(tag, rng);
        if rejection(&spec, &theorem_polynomial(&spec)).is_none() {
            return (spec, rejected);
        }
        rejected += 1;
    }
}

/// Removes every power of each nonconstant factor.
fn strip_all(mut g: UPoly, factors: &[UPoly]) -> UPoly {
    for f in factors {
        if !f.is_constant() {
            g = g.remove_factor(f);
        }
    }
    g
}

fn level_poly(tp: &TheoremPolynomial, jets: &IdentityJets<UPoly>) -> UPoly {
    if tp.level == 1 {
        jets.s.clone()
    } else {
        UPoly::gcd_all(jets.generators().iter())
    }
}

fn degenerate_polys(tp: &TheoremPolynomial) -> Vec<UPoly> {
    let mut v: Vec<UPoly> = tp.degenerate.iter().map(|f| f.form.dehomogenize()).collect();
    v.push(UPoly::from_ints(&[1, 0, 1]));
    v
}

/// The condition recomputed from the generators on the orientation line: `s` (level 1)
/// or the gcd of `s, s_0..s_3` (level 2), with degenerate factors and `1 + f^2` removed,
/// square-free and monic.
pub fn derived_condition(spec: &FamilySpec) -> Result<UPoly> {
    let spec = spec.without_orientation();
    let tp = theorem_polynomial(&spec);
    let jets = line_jets(&line_average(&spec)?);
    let g = level_poly(&tp, &jets);
    if g.is_zero() {
        return Ok(g);
    }
    Ok(strip_all(g, &degenerate_polys(&tp)).square_free_part()?.monic())
}

fn expected_condition(tp: &TheoremPolynomial) -> Result<UPoly> {
    Ok(match &tp.condition {
        // all six points collinear: s vanishes for every orientation
        Condition::None if tp.generic == FlexionClass::SingularV1 => UPoly::zero(),
        Condition::Form(f) => strip_all(f.dehomogenize(), &degenerate_polys(tp)).square_free_part()?.monic(),
        _ => UPoly::one(),
    })
}

struct Trial {
    n: u64,
    spec: FamilySpec,
    checks: BTreeMap<String, u64>,
    failures: Vec<Counterexample>,
}

impl Trial {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(name.to_string()).or_default() += 1;
        if !ok {
            self.failures.push(Counterexample { trial: self.n, spec: self.spec.clone(), check: name.into(), detail: detail() });
        }
    }
}

fn class_ok(found: FlexionClass, wanted: FlexionClass) -> bool {
    found == wanted || (wanted == FlexionClass::OrderAtLeast2 && found == FlexionClass::SingularV1)
}

/// A rational orientation avoiding the roots of `avoid`.
fn generic_f(rng: &mut ChaCha8Rng, avoid: &[UPoly]) -> Rational {
    loop {
        let f = draw(rng);
        if avoid.iter().all(|p| p.is_zero() || !p.eval(&f).is_zero()) {
            return f;
        }
    }
}

fn expected_motion(tag: FamilyTag) -> RelativeMotion {
    match tag {
        ATranslation | BTranslation => RelativeMotion::Translation,
        CGlide => RelativeMotion::GlideReflection,
        CReflGeneral | CReflSpecial | CReflVerySpecial => RelativeMotion::Reflection,
        _ => RelativeMotion::Rotation,
    }
}

fn run_trial(tag: FamilyTag, seed: u64, n: u64) -> (Trial, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n);
    let (spec, rejected) = random_spec(tag, &mut rng);
    let mut t = Trial { n, spec: spec.clone(), checks: BTreeMap::new(), failures: vec![] };
    if let Err(e) = trial_checks(&mut t, &mut rng) {
        t.check("no-errors", false, || e.to_string());
    }
    (t, rejected)
}

fn trial_checks(t: &mut Trial, rng: &mut ChaCha8Rng) -> Result<()> {
    let spec = t.spec.clone();
    let tag = spec.tag();
    let tp = theorem_polynomial(&spec);
    let line = line_average(&spec)?;
    let jets = line_jets(&line);
    let cond_poly = match &tp.condition {
        Condition::Form(f) => f.dehomogenize(),
        _ => UPoly::one(),
    };
    let mut avoid = degenerate_polys(&tp);
    avoid.push(cond_poly.clone());

    // the pair itself: equal legs, bisector base points, the right set and motion
    let f = generic_f(rng, &avoid);
    let (a, b) = build_pair(&spec.with_orientation(Rational::one(), f.clone())?)?;
    t.check("equal-leg-lengths", (0..3).all(|i| a.leg_sq(i) == b.leg_sq(i)), || format!("f = {}", format_rational(&f)));
    let (ua, ub) = unrotated_pair(&spec)?;
    let bisected: Vec<usize> = match tag {
        ARotSpecial | BRotSpecial | CReflSpecial => vec![0, 1],
        ARotVerySpecial | CReflVerySpecial => vec![0],
        _ => vec![0, 1, 2],
    };
    // Set B reflects the whole second realisation after the bisector construction
    let ub_plat = if tag.set() == PairSet::B { ub.platform().map(|p| p.conj()) } else { ub.platform() };
    let frame = bisector_frame(&ua.platform(), &ub_plat);
    t.check(
        "bisector-equidistance",
        bisected.iter().all(|&i| {
            let x = &ua.points[i];
            x.dist_sq(&ua.points[i + 3]) == x.dist_sq(&ub_plat[i]) && frame.n[i].dot(&(&ub_plat[i] - &ua.points[i + 3])).is_zero()
        }),
        String::new,
    );
    let pc = classify_pair(&a, &b)?;
    t.check("pair-set", pc.set == tag.set(), || format!("{:?}", pc.set));
    t.check("pair-motion", pc.motion == Some(expected_motion(tag)), || format!("{:?}", pc.motion));
    let avg = midpoints(&a, &b);
    if tag.set() != PairSet::A {
        let pl = avg.platform();
        t.check("averaged-platform-collinear", signed_area(&pl[0], &pl[1], &pl[2]).is_zero(), String::new);
    }
    if tag.set() == PairSet::B {
        let bs = avg.base();
        t.check("averaged-base-collinear", signed_area(&bs[0], &bs[1], &bs[2]).is_zero(), String::new);
    }

    // Set A: s vanishes along the whole line
    if tag.set() == PairSet::A {
        t.check("set-a-s-vanishes", jets.s.is_zero(), || format!("s = {}", jets.s.fmt_var("f")));
    }
    if tag == CReflGeneral {
        t.check("six-collinear", avg.all_collinear(), String::new);
    }

    // the condition from the generators agrees with the displayed polynomial
    let derived = derived_condition(&spec)?;
    let expected = expected_condition(&tp)?;
    t.check("derived-condition", derived == expected, || {
        format!("derived {} vs displayed {}", derived.fmt_var("f"), expected.fmt_var("f"))
    });

    // the theorem's class at every real root
    if let Condition::Form(form) = &tp.condition {
        let cp = form.dehomogenize();
        if !cp.is_constant() {
            for root in upoly_real_roots(&cp)? {
                let c = classify_at_root(&jets, &root);
                t.check("class-at-root", class_ok(c, tp.at_root), || format!("f1/f0 = {:.12}: {c:?}", root.to_f64()));
                if c == FlexionClass::OrderAtLeast2 {
                    let m = identity_multiplicity_at(&line, &root);
                    t.check("dk-multiplicity-at-least-3", m.is_some_and(|m| m >= 3), || format!("{m:?}"));
                } else if c == FlexionClass::Order1 {
                    let m = identity_multiplicity_at(&line, &root);
                    t.check("dk-multiplicity-2", m == Some(2), || format!("{m:?}"));
                }
            }
        }
        if form.at_infinity().is_zero() {
            let c = class_at(&spec, Rational::zero(), Rational::one())?;
            t.check("class-at-root", c.is_some_and(|c| class_ok(c, tp.at_root)), || format!("(0:1): {c:?}"));
        }
    }

    // and the generic class away from every factor, on the line and exactly
    let g = generic_f(rng, &avoid);
    let on_line = classify_at_rational(&jets, &g);
    let exact = class_at(&spec, Rational::one(), g.clone())?;
    t.check("generic-class", on_line == tp.generic && exact == Some(tp.generic), || {
        format!("f = {}: line {on_line:?}, exact {exact:?}", format_rational(&g))
    });

    // the three-term regrouping
    if let (Some(tt), Condition::Form(p)) = (t_regrouping(&spec), &tp.condition) {
        let r = from_regrouping(&tt, [spec.p("l1"), spec.p("l2"), spec.p("l3")]);
        t.check("t-regrouping", &r == p, String::new);
    }

    // degenerate factors mean what they say
    for fac in tp.degenerate.iter().filter(|f| f.form.deg == 1) {
        let (p, q) = (fac.form.c[0].clone(), fac.form.c[1].clone());
        // root of p f0 + q f1 is (q : -p)
        let (f0, f1) = (q, -p);
        let Ok(s) = spec.with_orientation(f0.clone(), f1.clone()) else { continue };
        let avg = {
            let (a, b) = build_pair(&s)?;
            midpoints(&a, &b)
        };
        let pts = &avg.points;
        let ok = match fac.meaning {
            Degeneracy::BaseCollapse => pts[0] == pts[1] && pts[1] == pts[2],
            Degeneracy::PlatformCollapse => pts[3] == pts[4] && pts[4] == pts[5],
            Degeneracy::ZeroLeg(i) => pts[i] == pts[i + 3],
            Degeneracy::Collinear => avg.all_collinear(),
            Degeneracy::Excluded => true,
        };
        t.check("degenerate-factor-meaning", ok, || {
            format!("{} at ({} : {})", fac.meaning.describe(), format_rational(&f0), format_rational(&f1))
        });
    }

    variant_checks(t, rng, &tp)?;
    Ok(())
}

fn class_at(spec: &FamilySpec, f0: Rational, f1: Rational) -> Result<Option<FlexionClass>> {
    let (a, b) = build_pair(&spec.with_orientation(f0, f1)?)?;
    match classify_configuration(&midpoints(&a, &b)) {
        Ok(r) => Ok(Some(r.classification)),
        Err(Error::InvalidConfig(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Special parameter choices named by the theorems.
fn variant_checks(t: &mut Trial, rng: &mut ChaCha8Rng, tp: &TheoremPolynomial) -> Result<()> {
    let spec = t.spec.clone();
    match spec.tag() {
        ARotVerySpecial => {
            // x2, x3 and x5 = x6 collinear: order two for every orientation
            let lambda = draw_nonzero(rng);
            let v = spec.with_param("a3", spec.p("a2") * &lambda)?.with_param("b3", spec.p("b2") * &lambda)?;
            let jets = line_jets(&line_average(&v)?);
            let f = generic_f(rng, &degenerate_polys(tp));
            let c = classify_at_rational(&jets, &f);
            t.check("collinear-variant-order-2", class_ok(c, FlexionClass::OrderAtLeast2), || format!("{c:?} at f = {}", format_rational(&f)));
            // e0 = 2 e1 l1: rotation about x1 = x5 = x6
            let w = spec.with_param("e0", Rational::from_integer(2.into()) * spec.p("e1") * spec.p("l1"))?;
            let rep = solve_orientations(&w)?;
            t.check("rotational-self-motion", rep.is_self_motion(), || format!("{:?}", rep.outcome));
        }
        ATranslation => {
            let l = spec.p("l1").clone();
            let v = spec.with_param("l2", l.clone())?.with_param("l3", l)?;
            let rep = solve_orientations(&v)?;
            t.check("translation-self-motion", rep.is_self_motion(), || format!("{:?}", rep.outcome));
        }
        CGlide => {
            // (0:1) collapses the base to a point: the platform turns about it
            let avg = averaged_config(&spec.with_orientation(Rational::zero(), Rational::one())?)?;
            let dk = solve_direct_kinematics(&build_constraints(&avg.induced_design()?))?;
            t.check("f0-zero-self-motion", matches!(dk, DkOutcome::SelfMotion { .. }), || format!("{dk:?}"));
            let c = class_at(&spec, Rational::zero(), Rational::one())?;
            t.check("f0-zero-singular", c == Some(FlexionClass::SingularV1), || format!("{c:?}"));
        }
        CReflVerySpecial => {
            // (0:1) puts x5 and x6 of the average onto the collapsed base
            let avg = averaged_config(&spec.with_orientation(Rational::zero(), Rational::one())?)?;
            t.check("f0-zero-legs-vanish", avg.zero_length_legs() == vec![1, 2], || format!("{:?}", avg.zero_length_legs()));
            for b in ["b2", "b3"] {
                let v = spec.with_param(b, Rational::zero())?;
                let f = generic_f(rng, &degenerate_polys(&theorem_polynomial(&v)));
                let c = class_at(&v, Rational::one(), f)?;
                t.check("order-1-on-axis", c == Some(FlexionClass::Order1), || format!("{b} = 0: {c:?}"));
            }
        }
        _ => {}
    }
    Ok(())
}

/// Runs `trials` independent random trials of one family's theorem.
pub fn verify_theorem(tag: FamilyTag, trials: u64, seed: u64) -> TheoremReport {
    let results: Vec<(Trial, u64)> = (0..trials).into_par_iter().map(|n| run_trial(tag, seed, n)).collect();
    let mut checks = BTreeMap::new();
    let mut counterexamples = Vec::new();
    let mut passed = 0;
    let mut rejected = 0;
    for (t, r) in results {
        rejected += r;
        for (k, v) in t.checks {
            *checks.entry(k).or_default() += v;
        }
        if t.failures.is_empty() {
            passed += 1;
        }
        counterexamples.extend(t.failures);
    }
    TheoremReport { tag, trials, seed, passed_trials: passed, checks, rejected_draws: rejected, counterexamples }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_condition_matches_theorem() {
        for tag in [FamilyTag::ARotGeneral, FamilyTag::ATranslation, FamilyTag::BRotGeneral, FamilyTag::CReflSpecial] {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let (spec, _) = random_spec(tag, &mut rng);
            let tp = theorem_polynomial(&spec);
            let want = expected_condition(&tp).unwrap();
            assert_eq!(derived_condition(&spec).unwrap().monic(), want.monic(), "{tag}");
        }
    }

    #[test]
    fn short_suites_pass() {
        for tag in FamilyTag::ALL {
            let r = verify_theorem(tag, 3, 11);
            assert!(r.counterexamples.is_empty(), "{tag}: {:?}", r.counterexamples);
            assert_eq!(r.passed_trials, 3);
        }
    }

    #[test]
    fn draws_are_seeded() {
        let a = random_spec(FamilyTag::BTranslation, &mut ChaCha8Rng::seed_from_u64(9)).0;
        let b = random_spec(FamilyTag::BTranslation, &mut ChaCha8Rng::seed_from_u64(9)).0;
        assert_eq!(a, b);
    }
}
