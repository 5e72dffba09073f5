//! Constraint polynomials, the direct kinematic problem and flexion order by root
//! multiplicity.
//!
//! Direct kinematics eliminates the translation part: the differences of two leg
//! constraints are linear in `q2, q3` once the constant terms are homogenized by
//! `q0^2 + q1^2`. Cramer's rule gives `q2 = N2/D`, `q3 = N3/D`, and substituting into the
//! remaining constraint yields the sextic binary form
//! `H = Q D^2 + D (L2 N2 + L3 N3) + 4 (N2^2 + N3^2)` in `(q0 : q1)`.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{bg_transform_f64, ManipulatorDesign, PlanarPose};
use crate::ratpoly::{complex_roots, int, upoly_real_roots, MPoly, Rational, RealRoot, Ring, UPoly};

/// One leg: base anchor (fixed frame), platform anchor (moving frame), squared length.
#[derive(Clone, Debug, PartialEq)]
pub struct Leg<C> {
    pub base: [C; 2],
    pub platform: [C; 2],
    pub r_sq: C,
}

/// The normalising condition `c0` and the three leg constraints `c1..c3`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem<C: Ring = Rational> {
    pub c: [MPoly<C>; 4],
    pub legs: [Leg<C>; 3],
}

fn q_term<C: Ring>(unit: &C, coeff: C, e: [u16; 4]) -> MPoly<C> {
    let _ = unit;
    MPoly::term(4, coeff, e.to_vec())
}

/// `q0^2 + q1^2 - 1`.
pub fn normalising_condition<C: Ring>(unit: &C) -> MPoly<C> {
    let one = unit.one_like();
    q_term(unit, one.clone(), [2, 0, 0, 0]) + q_term(unit, one.clone(), [0, 2, 0, 0])
        - MPoly::constant(4, one)
}

/// Leg constraint: the platform point `(aj, bj)` lies on the circle of squared radius
/// `r_sq` about the base point `(ai, bi)`.
pub fn leg_constraint<C: Ring>(leg: &Leg<C>) -> MPoly<C> {
    let [ai, bi] = leg.base.clone();
    let [aj, bj] = leg.platform.clone();
    let k = |n: i64| ai.embed(&int(n));
    let w = aj.clone() * aj.clone() + bj.clone() * bj.clone();
    let ab = ai.clone() * aj.clone();
    let bb = bi.clone() * bj.clone();
    let terms: [([u16; 4], C); 10] = [
        ([2, 0, 0, 0], k(-2) * ab.clone() - k(2) * bb.clone() + w.clone()),
        ([0, 2, 0, 0], k(2) * ab + k(2) * bb + w),
        ([1, 1, 0, 0], k(4) * ai.clone() * bj.clone() - k(4) * bi.clone() * aj.clone()),
        ([1, 0, 0, 1], k(-4) * ai.clone() + k(4) * aj.clone()),
        ([0, 1, 1, 0], k(-4) * ai.clone() - k(4) * aj.clone()),
        ([1, 0, 1, 0], k(4) * bi.clone() - k(4) * bj.clone()),
        ([0, 1, 0, 1], k(-4) * bi.clone() - k(4) * bj.clone()),
        ([0, 0, 2, 0], k(4)),
        ([0, 0, 0, 2], k(4)),
        ([0, 0, 0, 0], ai.clone() * ai.clone() + bi.clone() * bi.clone() - leg.r_sq.clone()),
    ];
    terms
        .into_iter()
        .fold(MPoly::zero(4), |acc, (e, c)| acc + MPoly::term(4, c, e.to_vec()))
}

impl<C: Ring> ConstraintSystem<C> {
    pub fn from_legs(legs: [Leg<C>; 3]) -> Self {
        let unit = legs[0].r_sq.one_like();
        let c = [
            normalising_condition(&unit),
            leg_constraint(&legs[0]),
            leg_constraint(&legs[1]),
            leg_constraint(&legs[2]),
        ];
        ConstraintSystem { c, legs }
    }

    /// All three legs share their base anchor, or all three share their platform anchor.
    /// The platform then turns about that point without changing any leg length.
    pub fn pivot_collapse(&self) -> bool {
        let l = &self.legs;
        let same = |p: &[C; 2], q: &[C; 2]| (p[0].clone() - q[0].clone()).vanishes() && (p[1].clone() - q[1].clone()).vanishes();
        (same(&l[0].base, &l[1].base) && same(&l[1].base, &l[2].base))
            || (same(&l[0].platform, &l[1].platform) && same(&l[1].platform, &l[2].platform))
    }

    /// Leg constraints with the constant term multiplied by `q0^2 + q1^2`, making them
    /// quadratic forms; on `c0 = 0` they agree with `c1..c3`.
    pub fn homogenized(&self) -> [MPoly<C>; 3] {
        let unit = self.legs[0].r_sq.one_like();
        let zero = unit.zero_like();
        let n = q_term(&unit, unit.clone(), [2, 0, 0, 0]) + q_term(&unit, unit.clone(), [0, 2, 0, 0]);
        [1, 2, 3].map(|i| {
            let p = &self.c[i];
            let k = p.coeff(&[0, 0, 0, 0], &zero);
            let rest = p - &MPoly::constant(4, k.clone());
            rest + n.scale(&k)
        })
    }

    /// Coefficient matrices `M_k` with `grad c_i (q) = sum_k q_k M_k[i]`.
    /// Entries of the gradients are linear forms, so this is exact.
    pub fn gradient_jets(&self) -> [Vec<Vec<C>>; 4] {
        let zero = self.legs[0].r_sq.zero_like();
        let grads: Vec<Vec<MPoly<C>>> = self.c.iter().map(MPoly::gradient).collect();
        [0, 1, 2, 3].map(|k| {
            let mut e = [0u16; 4];
            e[k] = 1;
            grads
                .iter()
                .map(|row| row.iter().map(|g| g.coeff(&e, &zero)).collect())
                .collect()
        })
    }
}

/// Constraint system of a design: `c0` from the normalisation, `c_i` from leg `i`.
pub fn build_constraints(design: &ManipulatorDesign) -> ConstraintSystem {
    let legs = [0, 1, 2].map(|i| Leg {
        base: [design.base()[i].a.clone(), design.base()[i].b.clone()],
        platform: [design.platform()[i].a.clone(), design.platform()[i].b.clone()],
        r_sq: design.legs_sq()[i].clone(),
    });
    ConstraintSystem::from_legs(legs)
}

/// Binary form `sum_k c[k] q0^(deg-k) q1^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<C> {
    pub deg: usize,
    pub c: Vec<C>,
}

impl<C: Ring> BinaryForm<C> {
    pub fn zero(deg: usize, z: &C) -> Self {
        BinaryForm { deg, c: vec![z.zero_like(); deg + 1] }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.deg, o.deg);
        BinaryForm { deg: self.deg, c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.deg, o.deg);
        BinaryForm { deg: self.deg, c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.deg + o.deg, &self.c[0]);
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out.c[i + j] = out.c[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let kk = self.c[0].embed(&int(k));
        BinaryForm { deg: self.deg, c: self.c.iter().map(|a| a.clone() * kk.clone()).collect() }
    }

    pub fn vanishes(&self) -> bool {
        self.c.iter().all(Ring::vanishes)
    }

    pub fn constant(c: C) -> Self {
        BinaryForm { deg: 0, c: vec![c] }
    }

    /// `a q0 + b q1`.
    pub fn linear(a: C, b: C) -> Self {
        BinaryForm { deg: 1, c: vec![a, b] }
    }

    pub fn scale(&self, k: &C) -> Self {
        BinaryForm { deg: self.deg, c: self.c.iter().map(|a| a.clone() * k.clone()).collect() }
    }
}

impl BinaryForm<Rational> {
    /// Dehomogenized at `q0 = 1`, in `t = q1/q0`.
    pub fn dehomogenize(&self) -> UPoly {
        UPoly::new(self.c.clone())
    }

    /// Value at `(q0 : q1) = (0 : 1)`.
    pub fn at_infinity(&self) -> Rational {
        self.c[self.deg].clone()
    }

    pub fn eval(&self, q0: &Rational, q1: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (k, c) in self.c.iter().enumerate() {
            acc += c * q0.pow((self.deg - k) as i32) * q1.pow(k as i32);
        }
        acc
    }

    /// Written in the variables `v0, v1`, e.g. `-3684/175 f0 + 39132/175 f1`.
    pub fn fmt_vars(&self, v0: &str, v1: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = [(v0, self.deg - k), (v1, k)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            let neg = c < &Rational::zero();
            let mag = crate::ratpoly::format_rational(&c.abs());
            let body = match (mono.is_empty(), mag.as_str()) {
                (true, _) => mag,
                (false, "1") => mono.join(" "),
                (false, _) => format!("{mag} {}", mono.join(" ")),
            };
            if out.is_empty() {
                out = if neg { format!("-{body}") } else { body };
            } else {
                out += if neg { " - " } else { " + " };
                out += &body;
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// The elimination data for one choice of reference leg.
#[derive(Clone, Debug)]
pub struct Eliminant<C: Ring> {
    pub reference_leg: usize,
    /// 2x2 linear system for `(q2, q3)`: `a * (q2, q3)^T = rhs`, entries linear / quadratic forms.
    pub a: [[BinaryForm<C>; 2]; 2],
    pub rhs: [BinaryForm<C>; 2],
    pub d: BinaryForm<C>,
    pub n2: BinaryForm<C>,
    pub n3: BinaryForm<C>,
    pub h: BinaryForm<C>,
}

// splits a homogenized constraint into Q(q0,q1) + L2(q0,q1) q2 + L3(q0,q1) q3 + 4(q2^2+q3^2)
fn split<C: Ring>(p: &MPoly<C>, z: &C) -> (BinaryForm<C>, BinaryForm<C>, BinaryForm<C>) {
    let g = |e: [u16; 4]| p.coeff(&e, z);
    let q = BinaryForm { deg: 2, c: vec![g([2, 0, 0, 0]), g([1, 1, 0, 0]), g([0, 2, 0, 0])] };
    let l2 = BinaryForm { deg: 1, c: vec![g([1, 0, 1, 0]), g([0, 1, 1, 0])] };
    let l3 = BinaryForm { deg: 1, c: vec![g([1, 0, 0, 1]), g([0, 1, 0, 1])] };
    (q, l2, l3)
}

/// Builds the eliminant, trying reference legs 1, 2, 3 in order until the linear
/// block is not identically singular.
pub fn eliminant<C: Ring>(cs: &ConstraintSystem<C>) -> Result<Eliminant<C>> {
    let z = cs.legs[0].r_sq.zero_like();
    let hc = cs.homogenized();
    let parts: Vec<_> = hc.iter().map(|p| split(p, &z)).collect();
    for r in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&j| j != r).collect();
        let (qr, l2r, l3r) = &parts[r];
        let row = |j: usize| {
            let (qj, l2j, l3j) = &parts[j];
            ([l2r.sub(l2j), l3r.sub(l3j)], qj.sub(qr))
        };
        let (a0, b0) = row(others[0]);
        let (a1, b1) = row(others[1]);
        let d = a0[0].mul(&a1[1]).sub(&a0[1].mul(&a1[0]));
        if d.vanishes() {
            continue;
        }
        let n2 = b0.mul(&a1[1]).sub(&a0[1].mul(&b1));
        let n3 = a0[0].mul(&b1).sub(&b0.mul(&a1[0]));
        let h = qr
            .mul(&d)
            .mul(&d)
            .add(&d.mul(&l2r.mul(&n2).add(&l3r.mul(&n3))))
            .add(&n2.mul(&n2).add(&n3.mul(&n3)).scale_int(4));
        return Ok(Eliminant { reference_leg: r, a: [a0, a1], rhs: [b0, b1], d, n2, n3, h });
    }
    Err(Error::InvalidDesign("degenerate elimination: the linear block is singular for every leg order".into()))
}

/// One solution of the direct kinematic problem, normalised so that `q0^2 + q1^2 = 1`
/// when that is possible.
#[derive(Clone, Debug, Serialize)]
pub struct DkSolution {
    #[serde(serialize_with = "ser_complex4")]
    pub q: [Complex64; 4],
    pub multiplicity: usize,
    pub is_real: bool,
    /// Largest relative leg-length error for real solutions, largest |c_i| otherwise.
    pub residual: f64,
    /// Another solution shares this rotation; the eliminant multiplicity was split.
    pub shared_fiber: bool,
    /// Exact pose when the rotation parameter is rational and the fiber is regular.
    #[serde(skip)]
    pub exact: Option<PlanarPose>,
}

fn ser_complex4<S: serde::Serializer>(q: &[Complex64; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for z in q {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl DkSolution {
    pub fn real_pose(&self) -> Option<[f64; 4]> {
        self.is_real.then(|| self.q.map(|z| z.re))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let q = self.q;
        let s = if q[0].re < 0.0 { -1.0 } else { 1.0 };
        (q[0] * s - 1.0).norm() < tol && q[1].norm() < tol && q[2].norm() < tol && q[3].norm() < tol
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DkOutcome {
    Solutions { solutions: Vec<DkSolution>, eliminant_degree: usize },
    SelfMotion { reason: String },
}

/// Where on the `(q0 : q1)` line a root sits.
#[derive(Clone, Debug)]
enum Spot {
    Finite(Complex64, Option<RealRoot>),
    Infinity,
}

/// All solutions over the complex numbers, with multiplicities.
pub fn solve_direct_kinematics(cs: &ConstraintSystem) -> Result<DkOutcome> {
    if cs.pivot_collapse() {
        return Ok(DkOutcome::SelfMotion { reason: "the legs share one anchor point; the platform turns about it".into() });
    }
    let el = eliminant(cs)?;
    let h = el.h.dehomogenize();
    if h.is_zero() {
        return Ok(DkOutcome::SelfMotion { reason: "the eliminant vanishes identically".into() });
    }
    // exact rank-0 fibers: every entry of the linear block and right-hand side vanishes
    let entries: Vec<&BinaryForm<Rational>> =
        vec![&el.a[0][0], &el.a[0][1], &el.a[1][0], &el.a[1][1], &el.rhs[0], &el.rhs[1]];
    let g = UPoly::gcd_all(entries.iter().map(|f| f.dehomogenize()).collect::<Vec<_>>().iter());
    let all_zero = g.is_zero();
    if all_zero || !UPoly::gcd(&g, &h)?.is_constant() {
        return Ok(DkOutcome::SelfMotion { reason: "a whole circle of translations solves the system".into() });
    }
    if entries.iter().all(|f| f.at_infinity().is_zero()) && el.h.at_infinity().is_zero() {
        return Ok(DkOutcome::SelfMotion { reason: "a whole circle of translations solves the system".into() });
    }
    let h_red = reduce_eliminant(&el)?;
    let mut spots: Vec<(Spot, usize)> = Vec::new();
    if let Some(deg) = h_red.degree() {
        for r in upoly_real_roots(&h_red)? {
            let m = r.multiplicity;
            spots.push((Spot::Finite(Complex64::new(r.to_f64(), 0.0), Some(r)), m));
        }
        for (z, m) in complex_roots(&h_red)? {
            if z.im != 0.0 {
                spots.push((Spot::Finite(z, None), m));
            }
        }
        let inf = infinity_multiplicity(&el, deg);
        if inf > 0 {
            spots.push((Spot::Infinity, inf));
        }
    }
    let mut solutions = Vec::new();
    for (spot, m) in spots {
        solutions.extend(fiber_solutions(cs, &el, &spot, m));
    }
    let eliminant_degree = solutions.iter().map(|s| s.multiplicity).sum();
    Ok(DkOutcome::Solutions { solutions, eliminant_degree })
}

/// Dehomogenized eliminant with extraneous roots removed: roots where the linear
/// block is singular but inconsistent, and roots on the isotropic lines `q0^2+q1^2=0`.
pub fn reduce_eliminant(el: &Eliminant<Rational>) -> Result<UPoly> {
    let h = el.h.dehomogenize();
    let d = el.d.dehomogenize();
    let mut out = h.clone();
    if !d.is_zero() {
        let e = UPoly::gcd(&h, &d)?;
        if !e.is_constant() {
            let consistent = UPoly::gcd_all([&e, &el.n2.dehomogenize(), &el.n3.dehomogenize()]);
            let bad = if consistent.is_constant() { e } else { e.square_free_part()?.div_exact(&consistent.square_free_part()?).expect("divides") };
            out = out.remove_factor(&bad);
        }
    }
    Ok(out.remove_factor(&UPoly::from_ints(&[1, 0, 1])))
}

fn infinity_multiplicity(el: &Eliminant<Rational>, reduced_deg: usize) -> usize {
    // (0:1) is a root of H of multiplicity 6 - deg(H); drop it if it is extraneous there
    let hdeg = el.h.dehomogenize().degree().unwrap_or(0);
    let m = el.h.deg - hdeg;
    if m == 0 {
        return 0;
    }
    let d_inf = el.d.at_infinity();
    if d_inf.is_zero() && !(el.n2.at_infinity().is_zero() && el.n3.at_infinity().is_zero()) {
        return 0;
    }
    let _ = reduced_deg;
    m
}

fn eval_form(f: &BinaryForm<Rational>, q0: Complex64, q1: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in f.c.iter().enumerate() {
        acc += q0.powu((f.deg - k) as u32) * q1.powu(k as u32) * crate::ratpoly::to_f64(c);
    }
    acc
}

fn fiber_solutions(cs: &ConstraintSystem, el: &Eliminant<Rational>, spot: &Spot, m: usize) -> Vec<DkSolution> {
    let (q0, q1) = match spot {
        Spot::Finite(t, _) => (Complex64::new(1.0, 0.0), *t),
        Spot::Infinity => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    };
    let real_spot = match spot {
        Spot::Finite(t, _) => t.im == 0.0,
        Spot::Infinity => true,
    };
    let exact_t: Option<Option<Rational>> = match spot {
        Spot::Finite(_, Some(r)) => r.as_rational().map(|x| Some(x.clone())),
        Spot::Infinity => Some(None),
        _ => None,
    };
    // exact singularity test of the linear block where possible
    let d_zero = match spot {
        Spot::Finite(_, Some(r)) => r.is_root_of(&el.d.dehomogenize()),
        Spot::Infinity => el.d.at_infinity().is_zero(),
        Spot::Finite(t, None) => {
            let d = el.d.dehomogenize();
            !d.is_zero() && complex_roots(&d).map(|rs| rs.iter().any(|(z, _)| (z - t).norm() < 1e-9 * (1.0 + t.norm()))).unwrap_or(false)
        }
    };
    let mut points: Vec<[Complex64; 4]> = Vec::new();
    if !d_zero {
        let d = eval_form(&el.d, q0, q1);
        let q2 = eval_form(&el.n2, q0, q1) / d;
        let q3 = eval_form(&el.n3, q0, q1) / d;
        points.push([q0, q1, q2, q3]);
    } else {
        points = rank_one_fiber(cs, el, q0, q1);
    }
    let shared = points.len() > 1;
    let mut out = Vec::new();
    let k = points.len().max(1);
    for (idx, q) in points.iter().enumerate() {
        let mult = if shared { m / k + usize::from(idx < m % k) } else { m };
        if mult == 0 {
            continue;
        }
        let qn = normalise(*q);
        let is_real = real_spot && qn.iter().all(|z| z.im.abs() <= 1e-9 * (1.0 + z.norm()));
        let qn = if is_real { qn.map(|z| Complex64::new(z.re, 0.0)) } else { qn };
        let residual = if is_real { leg_residual(cs, qn.map(|z| z.re)) } else { constraint_residual(cs, qn) };
        let exact = match (&exact_t, d_zero) {
            (Some(t), false) => exact_pose(el, t.as_ref()),
            _ => None,
        };
        out.push(DkSolution { q: qn, multiplicity: mult, is_real, residual, shared_fiber: shared, exact });
    }
    out
}

fn exact_pose(el: &Eliminant<Rational>, t: Option<&Rational>) -> Option<PlanarPose> {
    let ev = |f: &BinaryForm<Rational>| match t {
        Some(t) => f.dehomogenize().eval(t),
        None => f.at_infinity(),
    };
    let d = ev(&el.d);
    let (q0, q1) = match t {
        Some(t) => (Rational::one(), t.clone()),
        None => (Rational::zero(), Rational::one()),
    };
    PlanarPose::new(q0, q1, ev(&el.n2) / &d, ev(&el.n3) / &d).ok()
}

// line-circle intersection when the 2x2 block has rank one at this rotation
fn rank_one_fiber(cs: &ConstraintSystem, el: &Eliminant<Rational>, q0: Complex64, q1: Complex64) -> Vec<[Complex64; 4]> {
    let a = [[eval_form(&el.a[0][0], q0, q1), eval_form(&el.a[0][1], q0, q1)], [eval_form(&el.a[1][0], q0, q1), eval_form(&el.a[1][1], q0, q1)]];
    let b = [eval_form(&el.rhs[0], q0, q1), eval_form(&el.rhs[1], q0, q1)];
    let row = if a[0][0].norm() + a[0][1].norm() >= a[1][0].norm() + a[1][1].norm() { 0 } else { 1 };
    let (u, v, w) = (a[row][0], a[row][1], b[row]);
    let nn = u * u + v * v;
    if nn.norm() == 0.0 {
        return Vec::new();
    }
    // points p0 + lambda * (-v, u) on the line u q2 + v q3 = w
    let p0 = [u * w / nn, v * w / nn];
    let dir = [-v, u];
    let hc = cs.homogenized();
    let r = el.reference_leg;
    let f = |l: Complex64| -> Complex64 {
        let q = [q0, q1, p0[0] + dir[0] * l, p0[1] + dir[1] * l];
        eval_complex(&hc[r], q)
    };
    // f is quadratic in lambda: recover its coefficients from three samples
    let f0 = f(Complex64::new(0.0, 0.0));
    let f1 = f(Complex64::new(1.0, 0.0));
    let fm = f(Complex64::new(-1.0, 0.0));
    let c2 = (f1 + fm) / 2.0 - f0;
    let c1 = (f1 - fm) / 2.0;
    let lambdas: Vec<Complex64> = if c2.norm() < 1e-12 * (c1.norm() + f0.norm() + 1.0) {
        if c1.norm() == 0.0 {
            vec![]
        } else {
            vec![-f0 / c1]
        }
    } else {
        let disc = (c1 * c1 - c2 * f0 * 4.0).sqrt();
        let scale = c1.norm().max(disc.norm()).max(1e-300);
        if disc.norm() <= 1e-7 * scale {
            vec![-c1 / (c2 * 2.0)]
        } else {
            vec![(-c1 + disc) / (c2 * 2.0), (-c1 - disc) / (c2 * 2.0)]
        }
    };
    lambdas.into_iter().map(|l| [q0, q1, p0[0] + dir[0] * l, p0[1] + dir[1] * l]).collect()
}

fn eval_complex(p: &MPoly, q: [Complex64; 4]) -> Complex64 {
    p.terms()
        .map(|(e, c)| {
            e.iter().zip(q).fold(Complex64::new(crate::ratpoly::to_f64(c), 0.0), |acc, (&k, x)| acc * x.powu(k as u32))
        })
        .sum()
}

fn normalise(q: [Complex64; 4]) -> [Complex64; 4] {
    let n = (q[0] * q[0] + q[1] * q[1]).sqrt();
    if n.norm() == 0.0 {
        return q;
    }
    let mut out = q.map(|z| z / n);
    if out[0].re < 0.0 || (out[0].re == 0.0 && out[1].re < 0.0) {
        out = out.map(|z| -z);
    }
    out
}

/// Largest relative deviation of the realised leg lengths from the design's.
pub fn leg_residual(cs: &ConstraintSystem, q: [f64; 4]) -> f64 {
    (0..3)
        .map(|i| {
            let leg = &cs.legs[i];
            let p = bg_transform_f64(q, [crate::ratpoly::to_f64(&leg.platform[0]), crate::ratpoly::to_f64(&leg.platform[1])]);
            let x = [crate::ratpoly::to_f64(&leg.base[0]), crate::ratpoly::to_f64(&leg.base[1])];
            let r = crate::ratpoly::to_f64(&leg.r_sq).sqrt();
            ((p[0] - x[0]).hypot(p[1] - x[1]) - r).abs() / r.max(1.0)
        })
        .fold(0.0, f64::max)
}

fn constraint_residual(cs: &ConstraintSystem, q: [Complex64; 4]) -> f64 {
    cs.c.iter().map(|p| eval_complex(p, q).norm()).fold(0.0, f64::max)
}

/// Flexion order of a realisation, or self-motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlexionOrder {
    Order(usize),
    SelfMotion,
}

/// `(multiplicity - 1)` of `pose` among the direct kinematic solutions.
pub fn flexion_order_by_multiplicity(cs: &ConstraintSystem, pose: &PlanarPose) -> Result<FlexionOrder> {
    let q = pose.q();
    let hc = cs.homogenized();
    for p in &hc {
        if !p.eval(q)?.is_zero() {
            return Err(Error::NotASolution);
        }
    }
    if cs.pivot_collapse() {
        return Ok(FlexionOrder::SelfMotion);
    }
    let el = eliminant(cs)?;
    let h = el.h.dehomogenize();
    if h.is_zero() {
        return Ok(FlexionOrder::SelfMotion);
    }
    let (at, m) = if q[0].is_zero() {
        (None, el.h.deg - h.degree().unwrap_or(0))
    } else {
        let t = &q[1] / &q[0];
        let lin = UPoly::linear(-t.clone(), Rational::one());
        (Some(t), h.multiplicity_of(&lin))
    };
    let ev = |f: &BinaryForm<Rational>| match &at {
        Some(t) => f.dehomogenize().eval(t),
        None => f.at_infinity(),
    };
    let rank0 = [&el.a[0][0], &el.a[0][1], &el.a[1][0], &el.a[1][1], &el.rhs[0], &el.rhs[1]]
        .iter()
        .all(|f| ev(f).is_zero());
    if rank0 {
        return Ok(FlexionOrder::SelfMotion);
    }
    Ok(FlexionOrder::Order(m.saturating_sub(1)))
}

/// Order of vanishing of the eliminant at the identity pose `t = 0`, for coefficient
/// rings that are not fields: `is_zero` decides whether a coefficient vanishes.
/// Returns `None` when every coefficient vanishes (self-motion).
pub fn identity_root_order<C: Ring>(el: &Eliminant<C>, is_zero: impl Fn(&C) -> bool) -> Option<usize> {
    el.h.c.iter().position(|c| !is_zero(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point2, SixConfig};
    use crate::ratpoly::rat;

    fn leg(base: (i64, i64), plat: (i64, i64), r_sq: i64) -> Leg<Rational> {
        Leg { base: [int(base.0), int(base.1)], platform: [int(plat.0), int(plat.1)], r_sq: int(r_sq) }
    }

    #[test]
    fn constraint_values_at_identity() {
        let id = [int(1), int(0), int(0), int(0)];
        assert!(leg_constraint(&leg((0, 0), (1, 0), 1)).eval(&id).unwrap().is_zero());
        assert_eq!(leg_constraint(&leg((0, 0), (1, 0), 4)).eval(&id).unwrap(), int(-3));
        assert!(normalising_condition(&int(1)).eval(&id).unwrap().is_zero());
    }

    #[test]
    fn constraint_matches_transformed_distance() {
        // oracle: |x_i - image(x_j)|^2 - r^2 at a normalised pose (q0^2 + q1^2 = 1)
        let l = Leg { base: [rat(3, 2), int(-1)], platform: [int(2), rat(1, 3)], r_sq: int(5) };
        let q = [rat(3, 5), rat(4, 5), rat(-2, 7), rat(5, 3)];
        let pose = PlanarPose::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()).unwrap();
        let img = crate::geometry::bg_transform(&pose, &Point2::new(int(2), rat(1, 3)));
        let expected = Point2::new(rat(3, 2), int(-1)).dist_sq(&img) - int(5);
        assert_eq!(leg_constraint(&l).eval(&q).unwrap(), expected);
        assert_eq!(leg_constraint(&l).total_degree(), Some(2));
    }

    #[test]
    fn gradient_matches_hand_derivation() {
        let (ai, bi, aj, bj) = (int(2), int(-3), rat(1, 2), int(4));
        let l = Leg { base: [ai.clone(), bi.clone()], platform: [aj.clone(), bj.clone()], r_sq: int(7) };
        let c = leg_constraint(&l);
        let q = [rat(2, 3), int(-1), rat(5, 4), int(3)];
        let (q0, q1, q2, q3) = (&q[0], &q[1], &q[2], &q[3]);
        let a = &ai * &aj + &bi * &bj;
        let cc = &ai * &bj - &bi * &aj;
        let w = &aj * &aj + &bj * &bj;
        let k = |n: i64| int(n);
        let expected = [
            k(-4) * &a * q0 + k(4) * &cc * q1 + k(2) * &w * q0 + k(4) * (&aj - &ai) * q3 + k(4) * (&bi - &bj) * q2,
            k(4) * &a * q1 + k(4) * &cc * q0 + k(2) * &w * q1 - k(4) * (&ai + &aj) * q2 - k(4) * (&bi + &bj) * q3,
            k(-4) * (&ai + &aj) * q1 + k(4) * (&bi - &bj) * q0 + k(8) * q2,
            k(4) * (&aj - &ai) * q0 - k(4) * (&bi + &bj) * q1 + k(8) * q3,
        ];
        for v in 0..4 {
            assert_eq!(c.partial(v).eval(&q).unwrap(), expected[v], "variable {v}");
        }
    }

    #[test]
    fn homogenized_agree_on_normalised_poses() {
        let cfg = SixConfig::from_ints([(0, 0), (4, 0), (1, 3), (1, 1), (3, 1), (2, 4)]);
        let cs = build_constraints(&cfg.induced_design().unwrap());
        let q = [rat(3, 5), rat(-4, 5), int(2), rat(1, 9)];
        for (i, h) in cs.homogenized().iter().enumerate() {
            assert_eq!(h.eval(&q).unwrap(), cs.c[i + 1].eval(&q).unwrap());
            assert!(h.is_homogeneous());
        }
    }

    #[test]
    fn congruent_base_and_platform_is_self_motion() {
        let tri = [Point2::ints(0, 0), Point2::ints(3, 0), Point2::ints(1, 2)];
        let d = ManipulatorDesign::new(tri.clone(), tri, [int(1), int(1), int(1)]).unwrap();
        let out = solve_direct_kinematics(&build_constraints(&d)).unwrap();
        assert!(matches!(out, DkOutcome::SelfMotion { .. }), "{out:?}");
    }

    #[test]
    fn generic_design_simple_identity_root() {
        let cfg = SixConfig::from_ints([(0, 0), (5, 1), (1, 4), (1, -1), (7, 2), (0, 6)]);
        let cs = build_constraints(&cfg.induced_design().unwrap());
        assert_eq!(flexion_order_by_multiplicity(&cs, &PlanarPose::identity()).unwrap(), FlexionOrder::Order(0));
        let off = PlanarPose::new(int(1), int(1), int(0), int(0)).unwrap();
        assert_eq!(flexion_order_by_multiplicity(&cs, &off), Err(Error::NotASolution));
        match solve_direct_kinematics(&cs).unwrap() {
            DkOutcome::Solutions { solutions, eliminant_degree } => {
                assert!(eliminant_degree <= 6);
                let ids: Vec<_> = solutions.iter().filter(|s| s.is_identity(1e-9)).collect();
                assert_eq!(ids.len(), 1);
                assert_eq!(ids[0].multiplicity, 1);
                for s in solutions.iter().filter(|s| s.is_real) {
                    assert!(s.residual < 1e-9, "{s:?}");
                }
            }
            other => panic!("{other:?}"),
        }
    }
}
