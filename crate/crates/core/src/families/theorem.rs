use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{FamilySpec, FamilyTag, FamilyTag::*};
use crate::flexion::FlexionClass;
use crate::kinematics::BinaryForm;
use crate::ratpoly::{format_rational, int, Rational};

type Form = BinaryForm<Rational>;

/// What goes wrong with the averaged configuration where a factor vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "leg")]
pub enum Degeneracy {
    BaseCollapse,
    PlatformCollapse,
    /// 0-based leg index.
    ZeroLeg(usize),
    /// All six points collinear, a singular point of `V_1`.
    Collinear,
    /// Excluded by the parametrization itself (no real orientation, or a parameter
    /// choice that breaks the case's assumptions).
    Excluded,
}

impl Degeneracy {
    pub fn describe(self) -> String {
        match self {
            Degeneracy::BaseCollapse => "the averaged base degenerates to a point".into(),
            Degeneracy::PlatformCollapse => "the averaged platform degenerates to a point".into(),
            Degeneracy::ZeroLeg(i) => format!("leg {} of the average has zero length", i + 1),
            Degeneracy::Collinear => "all six averaged points are collinear (singular point of V1)".into(),
            Degeneracy::Excluded => "excluded by the parametrization".into(),
        }
    }
}

/// A factor in `(f0 : f1)`; constant factors are parameter conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub form: Form,
    pub meaning: Degeneracy,
}

impl Factor {
    fn new(form: Form, meaning: Degeneracy) -> Self {
        Factor { form, meaning }
    }

    fn constant(c: Rational, meaning: Degeneracy) -> Self {
        Factor { form: Form::constant(c), meaning }
    }

    pub fn is_constant(&self) -> bool {
        self.form.deg == 0
    }

    pub fn vanishes_identically(&self) -> bool {
        self.form.vanishes()
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Factor", 2)?;
        st.serialize_field("form", &self.form.fmt_vars("f0", "f1"))?;
        st.serialize_field("meaning", &self.meaning.describe())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Condition {
    /// A binary form whose real roots are the special orientations.
    Form(Form),
    /// Orientation independent; raises the order everywhere when it vanishes.
    Constant(Rational),
    /// No order-raising orientation exists.
    None,
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Condition::Form(f) => s.serialize_str(&f.fmt_vars("f0", "f1")),
            Condition::Constant(c) => s.serialize_str(&format_rational(c)),
            Condition::None => s.serialize_none(),
        }
    }
}

/// The orientation condition of a family with its parameters substituted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremPolynomial {
    pub tag: FamilyTag,
    pub condition: Condition,
    pub degenerate: Vec<Factor>,
    /// Class of the average away from every listed factor.
    pub generic: FlexionClass,
    /// Class the theorem asserts where the condition vanishes.
    pub at_root: FlexionClass,
    /// 1 when the condition divides `s`, 2 when it divides the gcd of `s, s_0..s_3`.
    pub level: u8,
}

fn lin(a: Rational, b: Rational) -> Form {
    Form::linear(a, b)
}

/// `f1 + 2 l f0`.
fn leg(l: &Rational) -> Form {
    lin(int(2) * l, Rational::one())
}

/// `A` and `B` with the Set B condition `A f0 + B f1`.
pub fn set_b_coefficients(spec: &FamilySpec) -> Option<(Rational, Rational)> {
    let p = |n: &str| spec.p(n).clone();
    let two = int(2);
    match spec.tag() {
        BRotGeneral => {
            let (e0, e1) = (p("e0"), p("e1"));
            let (a5, b5, a6, b6) = (p("a5"), p("b5"), p("a6"), p("b6"));
            let (l1, l2, l3) = (p("l1"), p("l2"), p("l3"));
            let w = |l: &Rational| &e0 - &two * &e1 * l;
            let a = w(&l2) * (&a5 * &e0 - &b5 * &e1) * (&l1 - &l3) - w(&l3) * (&a6 * &e0 - &b6 * &e1) * (&l1 - &l2)
                + w(&l1) * &e1 * (&l2 - &l3);
            let b = w(&l3) * (&a6 * &e1 + &b6 * &e0) * (&l1 - &l2) - w(&l2) * (&a5 * &e1 + &b5 * &e0) * (&l1 - &l3)
                + w(&l1) * &e0 * (&l2 - &l3);
            Some((a, b))
        }
        BRotSpecial => {
            let (e0, e1, a5, b5, l1, l2) = (p("e0"), p("e1"), p("a5"), p("b5"), p("l1"), p("l2"));
            let w = |l: &Rational| &e0 - &two * &e1 * l;
            let a = w(&l2) * (&a5 * &e0 - &b5 * &e1) + w(&l1) * &e1;
            let b = w(&l1) * &e0 - w(&l2) * (&a5 * &e1 + &b5 * &e0);
            Some((a, b))
        }
        BTranslation => {
            let (a5, b5, a6, b6, l1, l2, l3) = (p("a5"), p("b5"), p("a6"), p("b6"), p("l1"), p("l2"), p("l3"));
            let a = &a5 * (&l1 - &l3) - &a6 * (&l1 - &l2);
            let b = (&l2 - &l3) - &b5 * (&l1 - &l3) + &b6 * (&l1 - &l2);
            Some((a, b))
        }
        _ => None,
    }
}

/// `T1, T2, T3` of the three-term regrouping of the A-rot-general polynomial.
pub fn t_regrouping(spec: &FamilySpec) -> Option<[Rational; 3]> {
    if spec.tag() != ARotGeneral {
        return None;
    }
    let p = |n: &str| spec.p(n).clone();
    let (e0, e1, a5, b5, a6, b6) = (p("e0"), p("e1"), p("a5"), p("b5"), p("a6"), p("b6"));
    let w = |l: &str| &e0 - int(2) * &e1 * spec.p(l);
    Some([
        w("l2") * &a6 * (&a5 * &a5 + &b5 * &b5),
        w("l3") * &a5 * (&a6 * &a6 + &b6 * &b6),
        w("l1") * (&a5 * &b6 - &a6 * &b5),
    ])
}

/// Reassembles the quadratic from `T1, T2, T3` and the `l_i`.
pub fn from_regrouping(t: &[Rational; 3], l: [&Rational; 3]) -> Form {
    let g = l.map(leg);
    g[0].mul(&g[2])
        .scale(&t[0])
        .sub(&g[0].mul(&g[1]).scale(&t[1]))
        .add(&g[1].mul(&g[2]).scale(&t[2]))
}

fn p_i_i(spec: &FamilySpec) -> Form {
    let p = |n: &str| spec.p(n).clone();
    let (e0, e1, a5, b5, a6, b6) = (p("e0"), p("e1"), p("a5"), p("b5"), p("a6"), p("b6"));
    let (l1, l2, l3) = (p("l1"), p("l2"), p("l3"));
    let w = |l: &Rational| &e0 - int(2) * &e1 * l;
    let t1 = leg(&l1).mul(&leg(&l3)).scale(&(w(&l2) * &a6 * (&a5 * &a5 + &b5 * &b5)));
    let t2 = leg(&l1).mul(&leg(&l2)).scale(&(w(&l3) * &a5 * (&a6 * &a6 + &b6 * &b6)));
    let t3 = leg(&l2).mul(&leg(&l3)).scale(&(w(&l1) * (&a5 * &b6 - &a6 * &b5)));
    t1.sub(&t2).add(&t3)
}

fn p_i_ii(spec: &FamilySpec) -> Form {
    let p = |n: &str| spec.p(n).clone();
    let (e0, e1, a3, b3, a5, b5, l1, l2) = (p("e0"), p("e1"), p("a3"), p("b3"), p("a5"), p("b5"), p("l1"), p("l2"));
    let w = |l: &Rational| &e0 - int(2) * &e1 * l;
    let first = w(&l2) * (&a5 * &a5 + &b5 * &b5) * (&a3 * &e0 + &b3 * &e1);
    let second = w(&l1) * ((&a3 * &b5 - &a5 * &b3) * &e0 + (&a3 * &a5 + &b3 * &b5) * &e1);
    leg(&l1).scale(&first).sub(&leg(&l2).scale(&second))
}

fn p_ii(spec: &FamilySpec) -> Form {
    let p = |n: &str| spec.p(n).clone();
    let (a5, a6, l1, l2, l3) = (p("a5"), p("a6"), p("l1"), p("l2"), p("l3"));
    leg(&l2).scale(&(&a5 * (&l1 - &l3))).sub(&leg(&l3).scale(&(&a6 * (&l1 - &l2))))
}

fn p_ii_ii(spec: &FamilySpec) -> Form {
    let p = |n: &str| spec.p(n).clone();
    let (a5, b5, a6, l1, l2) = (p("a5"), p("b5"), p("a6"), p("l1"), p("l2"));
    let two = int(2);
    let f0 = lin(Rational::one(), Rational::zero());
    let f1 = lin(Rational::zero(), Rational::one());
    // (f1 + 2 f0 l2)(2 f1 l1 - f0 a6^2) b5
    let t1 = leg(&l2).mul(&lin(-(&a6 * &a6), &two * &l1)).scale(&b5);
    // 4 b5 f0 f1 (l1 - l2) a6
    let t2 = f0.mul(&f1).scale(&(int(4) * &b5 * (&l1 - &l2) * &a6));
    // (f1 + 2 f0 l1)[f0 (a5 - a6)^2 - 2 f1 l2 b5^2 - a5 b5 (f1 - 2 f0 l2)]
    let d = &a5 - &a6;
    let inner = lin(&d * &d + &two * &l2 * &a5 * &b5, -(&two * &l2 * &b5 * &b5) - &a5 * &b5);
    let t3 = leg(&l1).mul(&inner);
    t1.add(&t2).add(&t3)
}

/// The order-raising condition of a family with its degenerate factors.
pub fn theorem_polynomial(spec: &FamilySpec) -> TheoremPolynomial {
    use Degeneracy::*;
    use FlexionClass::*;
    let p = |n: &str| spec.p(n).clone();
    let f0 = || lin(Rational::one(), Rational::zero());
    let f1 = || lin(Rational::zero(), Rational::one());
    let norm = || Factor::new(f0().mul(&f0()).add(&f1().mul(&f1())), Excluded);
    let rot_platform = || Factor::new(lin(p("e0"), p("e1")), PlatformCollapse);
    let zero_leg = |i: usize| Factor::new(leg(spec.p(["l1", "l2", "l3"][i])), ZeroLeg(i));
    let tag = spec.tag();
    let (condition, degenerate, generic, at_root, level) = match tag {
        ARotGeneral => (
            Condition::Form(p_i_i(spec)),
            vec![Factor::new(f0(), BaseCollapse), rot_platform(), zero_leg(0), zero_leg(1), zero_leg(2)],
            Order1,
            OrderAtLeast2,
            2,
        ),
        ARotSpecial => (
            Condition::Form(p_i_ii(spec)),
            vec![Factor::new(f0(), BaseCollapse), rot_platform(), zero_leg(0), zero_leg(1)],
            Order1,
            OrderAtLeast2,
            2,
        ),
        ARotVerySpecial => {
            let c = (p("a2") * p("b3") - p("a3") * p("b2")) * (p("e0") - int(2) * p("e1") * p("l1"));
            (
                Condition::Constant(c),
                vec![Factor::new(f0(), BaseCollapse), rot_platform(), zero_leg(0)],
                Order1,
                OrderAtLeast2,
                2,
            )
        }
        ATranslation => (
            Condition::Form(p_ii(spec)),
            vec![Factor::new(f0(), BaseCollapse), norm(), zero_leg(0), zero_leg(1), zero_leg(2)],
            Order1,
            OrderAtLeast2,
            2,
        ),
        BRotGeneral | BRotSpecial | BTranslation => {
            let (a, b) = set_b_coefficients(spec).expect("set B");
            let mut deg = vec![norm()];
            if tag == BTranslation {
                deg.insert(0, Factor::new(f1(), Collinear));
            } else {
                let (e0, e1) = (p("e0"), p("e1"));
                deg.push(Factor::constant(e1.clone(), Excluded));
                deg.push(Factor::constant(&e0 * &e0 + &e1 * &e1, Excluded));
                deg.push(Factor::new(lin(e1.clone(), e0.clone()), ZeroLeg(0)));
                // Psi_j = a_j (e0 f0 - e1 f1) - b_j (e0 f1 + e1 f0)
                let psi = |a: Rational, b: Rational| lin(&a * &e0 - &b * &e1, -(&a * &e1) - &b * &e0);
                deg.push(Factor::new(psi(p("a5"), p("b5")), ZeroLeg(1)));
                if tag == BRotGeneral {
                    deg.push(Factor::new(psi(p("a6"), p("b6")), ZeroLeg(2)));
                } else {
                    deg.push(Factor::new(lin(p("a3"), -p("b3")), ZeroLeg(2)));
                }
            }
            (Condition::Form(lin(a, b)), deg, Order0, Order1, 1)
        }
        CGlide => {
            let (a5, b5, a6, b6) = (p("a5"), p("b5"), p("a6"), p("b6"));
            (
                Condition::None,
                vec![
                    Factor::new(f0(), BaseCollapse),
                    Factor::constant(p("d"), Excluded),
                    zero_leg(0),
                    zero_leg(1),
                    zero_leg(2),
                    Factor::constant(&a5 * &b6 - &a6 * &b5 - &a5 + &a6, Excluded),
                ],
                Order0,
                Order1,
                1,
            )
        }
        CReflGeneral => (
            Condition::None,
            vec![Factor::new(f0(), BaseCollapse), zero_leg(0), zero_leg(1), zero_leg(2)],
            SingularV1,
            SingularV1,
            1,
        ),
        CReflSpecial => (
            Condition::Form(p_ii_ii(spec)),
            vec![Factor::new(f0(), BaseCollapse), Factor::constant(p("b3"), Collinear), zero_leg(0), zero_leg(1)],
            Order1,
            OrderAtLeast2,
            2,
        ),
        // b2 b3 = 0 puts leg 2 or 3 on the line of leg 1; f0 = 0 collapses the base
        CReflVerySpecial => (
            Condition::Constant(p("b2") * p("b3")),
            vec![Factor::new(f0(), BaseCollapse), Factor::constant(p("a5") - p("a6"), Excluded), zero_leg(0)],
            Order0,
            Order1,
            1,
        ),
    };
    TheoremPolynomial { tag, condition, degenerate, generic, at_root, level }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    #[test]
    fn example_values() {
        let ex2 = FamilySpec::from_pairs(
            ARotSpecial,
            &[("e0", rat(3, 5)), ("e1", rat(4, 5)), ("a3", int(2)), ("b3", int(-2)), ("a5", int(5)), ("b5", int(-2)), ("l1", int(10)), ("l2", rat(1, 7))],
        )
        .unwrap();
        let Condition::Form(f) = theorem_polynomial(&ex2).condition else { panic!() };
        assert_eq!(f.c, vec![rat(-3684, 175), rat(39132, 175)]);

        let ex4 = FamilySpec::from_pairs(
            BRotGeneral,
            &[("a5", int(6)), ("b5", int(-4)), ("a6", int(7)), ("b6", int(6)), ("e0", rat(8, 17)), ("e1", rat(15, 17)), ("l1", int(2)), ("l2", int(3)), ("l3", int(1))],
        )
        .unwrap();
        assert_eq!(set_b_coefficients(&ex4), Some((rat(-9668, 289), rat(7290, 289))));
        // with b6 = 0 as printed the coefficients do not match
        let printed = ex4.with_param("b6", int(0)).unwrap();
        assert_eq!(set_b_coefficients(&printed), Some((rat(-11648, 289), rat(6234, 289))));

        let ex6 = FamilySpec::from_pairs(
            BTranslation,
            &[("a5", int(3)), ("b5", int(6)), ("a6", int(-3)), ("b6", int(4)), ("l1", int(2)), ("l2", int(-3)), ("l3", int(4))],
        )
        .unwrap();
        let Condition::Form(f) = theorem_polynomial(&ex6).condition else { panic!() };
        assert_eq!(f.c, vec![int(9), int(25)]);
    }

    #[test]
    fn regrouping_matches_display() {
        let s = FamilySpec::from_pairs(
            ARotGeneral,
            &[("e0", rat(24, 25)), ("e1", rat(7, 25)), ("a5", int(2)), ("b5", int(5)), ("a6", int(-12)), ("b6", int(-6)), ("l1", int(4)), ("l2", int(-2)), ("l3", rat(7, 13))],
        )
        .unwrap();
        let t = t_regrouping(&s).unwrap();
        let Condition::Form(f) = theorem_polynomial(&s).condition else { panic!() };
        assert_eq!(from_regrouping(&t, [s.p("l1"), s.p("l2"), s.p("l3")]), f);
        assert_eq!(f.deg, 2);
    }
}
