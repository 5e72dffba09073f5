//! Rigidity determinant, second-order generators and classification of the identity
//! pose.
//!
//! Two routes compute the same numbers. The polynomial route builds `s = det R` and the
//! bordered determinants `s_k` as polynomials in `q0..q3`. The jet route uses that every
//! gradient entry is a linear form, `R(q) = sum q_k M_k`, so at the identity
//! `s = det M_0` and `ds/dq_k = tr(adj(M_0) M_k)`. The jet route is generic over the
//! coefficient ring, which is what lets whole orientation lines be handled over `Q[f]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::SixConfig;
use crate::kinematics::{build_constraints, ConstraintSystem, Leg};
use crate::ratpoly::{adjugate, det_bareiss, poly_det, MPoly, Rational, RealRoot, Ring, UPoly};

/// Rows are the gradients of `c0..c3`.
pub fn rigidity_matrix<C: Ring>(cs: &ConstraintSystem<C>) -> Vec<Vec<MPoly<C>>> {
    cs.c.iter().map(MPoly::gradient).collect()
}

/// `s = det(grad c0, grad c1, grad c2, grad c3)`.
pub fn rigidity_det<C: Ring>(cs: &ConstraintSystem<C>) -> MPoly<C> {
    poly_det(&rigidity_matrix(cs)).expect("4x4 of arity 4")
}

/// `s_k`: determinant of the gradients of the three constraints other than `c_k`,
/// followed by `grad s`.
pub fn second_order_generators<C: Ring>(cs: &ConstraintSystem<C>) -> [MPoly<C>; 4] {
    let r = rigidity_matrix(cs);
    let gs = poly_det(&r).expect("4x4").gradient();
    [0, 1, 2, 3].map(|k| {
        let mut rows: Vec<Vec<MPoly<C>>> = (0..4).filter(|&j| j != k).map(|j| r[j].clone()).collect();
        rows.push(gs.clone());
        poly_det(&rows).expect("4x4")
    })
}

/// `s`, `grad s` and `s_0..s_3` at the identity pose.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityJets<C> {
    pub s: C,
    pub grad_s: [C; 4],
    pub s_k: [C; 4],
}

impl<C: Ring> IdentityJets<C> {
    /// In the order `s, s_0, s_1, s_2, s_3`.
    pub fn generators(&self) -> [C; 5] {
        [self.s.clone(), self.s_k[0].clone(), self.s_k[1].clone(), self.s_k[2].clone(), self.s_k[3].clone()]
    }
}

pub fn identity_jets<C: Ring>(cs: &ConstraintSystem<C>) -> IdentityJets<C> {
    let m = cs.gradient_jets();
    let m0 = &m[0];
    let s = det_bareiss(m0).expect("4x4");
    let adj = adjugate(m0).expect("4x4");
    let zero = s.zero_like();
    let grad_s = [0, 1, 2, 3].map(|k| {
        let mut acc = zero.clone();
        for i in 0..4 {
            for j in 0..4 {
                acc = acc + adj[i][j].clone() * m[k][j][i].clone();
            }
        }
        acc
    });
    let s_k = [0, 1, 2, 3].map(|k| {
        let mut rows: Vec<Vec<C>> = (0..4).filter(|&j| j != k).map(|j| m0[j].clone()).collect();
        rows.push(grad_s.to_vec());
        det_bareiss(&rows).expect("4x4")
    });
    IdentityJets { s, grad_s, s_k }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum FlexionClass {
    Order0,
    Order1,
    OrderAtLeast2,
    SingularV1,
}

impl FlexionClass {
    /// Classifies from zero tests on `s`, `grad s` and the `s_k`.
    pub fn from_zero_pattern(s: bool, grad: [bool; 4], s_k: [bool; 4]) -> Self {
        if !s {
            FlexionClass::Order0
        } else if grad.iter().all(|&z| z) {
            FlexionClass::SingularV1
        } else if s_k.iter().all(|&z| z) {
            FlexionClass::OrderAtLeast2
        } else {
            FlexionClass::Order1
        }
    }

    pub fn of_jets<C>(j: &IdentityJets<C>, is_zero: impl Fn(&C) -> bool) -> Self {
        Self::from_zero_pattern(is_zero(&j.s), j.grad_s.each_ref().map(&is_zero), j.s_k.each_ref().map(&is_zero))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlexionReport {
    #[serde(with = "crate::ratpoly::serde_rational")]
    pub s_at_pose: Rational,
    #[serde(with = "crate::ratpoly::serde_rational::vec")]
    pub grad_s_at_pose: Vec<Rational>,
    #[serde(with = "crate::ratpoly::serde_rational::vec")]
    pub s_i_at_pose: Vec<Rational>,
    pub classification: FlexionClass,
}

/// Builds the design with `r_i = |x_i - x_(i+3)|` and classifies the identity pose.
pub fn classify_configuration(config: &SixConfig) -> Result<FlexionReport> {
    if let Some(&i) = config.zero_length_legs().first() {
        return Err(Error::InvalidConfig(format!("leg {} has zero length", i + 1)));
    }
    let design = config.induced_design()?;
    let jets = identity_jets(&build_constraints(&design));
    let classification = FlexionClass::of_jets(&jets, Ring::vanishes);
    Ok(FlexionReport {
        s_at_pose: jets.s,
        grad_s_at_pose: jets.grad_s.to_vec(),
        s_i_at_pose: jets.s_k.to_vec(),
        classification,
    })
}

/// A configuration whose coordinates are polynomials in one parameter `f`.
pub type LineConfig = [[UPoly; 2]; 6];

fn line_system(cfg: &LineConfig) -> ConstraintSystem<UPoly> {
    let legs = [0, 1, 2].map(|i| {
        let (x, y) = (&cfg[i], &cfg[i + 3]);
        let dx = &x[0] - &y[0];
        let dy = &x[1] - &y[1];
        Leg { base: x.clone(), platform: y.clone(), r_sq: &(&dx * &dx) + &(&dy * &dy) }
    });
    ConstraintSystem::from_legs(legs)
}

/// Constraint system along a line of configurations, legs induced at each `f`.
pub fn line_constraints(cfg: &LineConfig) -> ConstraintSystem<UPoly> {
    line_system(cfg)
}

/// Identity jets as polynomials in `f`.
pub fn line_jets(cfg: &LineConfig) -> IdentityJets<UPoly> {
    identity_jets(&line_system(cfg))
}

/// Exact classification at a real algebraic parameter value.
pub fn classify_at_root(jets: &IdentityJets<UPoly>, root: &RealRoot) -> FlexionClass {
    FlexionClass::of_jets(jets, |p| p.is_zero() || root.is_root_of(p))
}

/// Exact classification at a rational parameter value.
pub fn classify_at_rational(jets: &IdentityJets<UPoly>, f: &Rational) -> FlexionClass {
    FlexionClass::of_jets(jets, |p| p.eval(f) == Rational::from_integer(0.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::ratpoly::{int, rat};

    fn cfg(p: [(i64, i64); 6]) -> SixConfig {
        SixConfig::from_ints(p)
    }

    #[test]
    fn pencil_of_legs_is_singular() {
        // leg lines through the origin
        let c = cfg([(1, 0), (0, 1), (-1, 0), (2, 0), (0, 2), (-3, 0)]);
        let r = classify_configuration(&c).unwrap();
        assert_eq!(r.s_at_pose, int(0));
        assert_ne!(r.classification, FlexionClass::Order0);
    }

    #[test]
    fn collinear_is_singular_v1() {
        let c = cfg([(0, 0), (1, 0), (5, 0), (2, 0), (-3, 0), (7, 0)]);
        let r = classify_configuration(&c).unwrap();
        assert_eq!(r.classification, FlexionClass::SingularV1);
        assert!(r.grad_s_at_pose.iter().all(|g| *g == int(0)));
    }

    #[test]
    fn generic_is_order0_and_zero_leg_rejected() {
        let c = cfg([(0, 0), (5, 1), (1, 4), (1, -1), (7, 2), (0, 6)]);
        assert_eq!(classify_configuration(&c).unwrap().classification, FlexionClass::Order0);
        let z = cfg([(0, 0), (5, 1), (1, 4), (0, 0), (7, 2), (0, 6)]);
        assert!(matches!(classify_configuration(&z), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn jets_match_polynomial_route() {
        let c = SixConfig::new([
            Point2::new(rat(1, 2), int(3)),
            Point2::ints(4, -1),
            Point2::new(int(-2), rat(5, 3)),
            Point2::ints(0, 1),
            Point2::new(rat(7, 2), int(2)),
            Point2::ints(-1, -1),
        ]);
        let cs = build_constraints(&c.induced_design().unwrap());
        let jets = identity_jets(&cs);
        let id = [int(1), int(0), int(0), int(0)];
        let s = rigidity_det(&cs);
        assert!(s.total_degree().unwrap() <= 4);
        assert_eq!(s.eval(&id).unwrap(), jets.s);
        for k in 0..4 {
            assert_eq!(s.partial(k).eval(&id).unwrap(), jets.grad_s[k]);
        }
        let gens = second_order_generators(&cs);
        for k in 0..4 {
            assert_eq!(gens[k].eval(&id).unwrap(), jets.s_k[k]);
        }
    }

    #[test]
    fn line_jets_specialise_to_rational_jets() {
        // config moving along f: platform point 5 rides on the line (f, 2 - f)
        let lc: LineConfig = [
            [UPoly::from_ints(&[1]), UPoly::from_ints(&[3])],
            [UPoly::from_ints(&[4]), UPoly::from_ints(&[-1])],
            [UPoly::from_ints(&[-2]), UPoly::from_ints(&[0, 1])],
            [UPoly::from_ints(&[0]), UPoly::from_ints(&[1])],
            [UPoly::from_ints(&[0, 1]), UPoly::from_ints(&[2, -1])],
            [UPoly::from_ints(&[-1]), UPoly::from_ints(&[-1])],
        ];
        let jets = line_jets(&lc);
        for f in [rat(1, 3), int(-2), rat(7, 5)] {
            let pts = lc.clone().map(|[a, b]| Point2::new(a.eval(&f), b.eval(&f)));
            let r = classify_configuration(&SixConfig::new(pts)).unwrap();
            assert_eq!(jets.s.eval(&f), r.s_at_pose);
            assert_eq!(jets.s_k.each_ref().map(|p| p.eval(&f)).to_vec(), r.s_i_at_pose);
            assert_eq!(classify_at_rational(&jets, &f), r.classification);
        }
    }
}
