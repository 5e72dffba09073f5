//! Points, Blaschke-Grünwald poses, planar isometries and manipulator records.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratpoly::{int, rat, serde_rational, to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
}

impl Point2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        Point2 { a, b }
    }

    pub fn ints(a: i64, b: i64) -> Self {
        Point2 { a: int(a), b: int(b) }
    }

    pub fn origin() -> Self {
        Self::ints(0, 0)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Point2 { a: &self.a * s, b: &self.b * s }
    }

    pub fn midpoint(&self, o: &Point2) -> Self {
        (self + o).scale(&rat(1, 2))
    }

    pub fn dot(&self, o: &Point2) -> Rational {
        &self.a * &o.a + &self.b * &o.b
    }

    pub fn cross(&self, o: &Point2) -> Rational {
        &self.a * &o.b - &self.b * &o.a
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn dist_sq(&self, o: &Point2) -> Rational {
        (self - o).norm_sq()
    }

    /// Reflection in the x-axis.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Point2 { a: self.a.clone(), b: -&self.b }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.a), to_f64(&self.b)]
    }

    // complex multiplication and division, used for the isometry search
    pub fn cmul(&self, o: &Point2) -> Point2 {
        Point2 { a: &self.a * &o.a - &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a }
    }

    pub fn cdiv(&self, o: &Point2) -> Point2 {
        let n = o.norm_sq();
        self.cmul(&o.conj()).scale(&n.recip())
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl<'a> Add<&'a Point2> for &'a Point2 {
    type Output = Point2;
    fn add(self, o: &Point2) -> Point2 {
        Point2 { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a Point2> for &'a Point2 {
    type Output = Point2;
    fn sub(self, o: &Point2) -> Point2 {
        Point2 { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

/// Half the cross product of `q - p` and `r - p`.
pub fn signed_area(p: &Point2, q: &Point2, r: &Point2) -> Rational {
    (q - p).cross(&(r - p)) * rat(1, 2)
}

/// Homogeneous Blaschke-Grünwald quadruple `(q0:q1:q2:q3)`, scaled so that the
/// first nonzero of `q0, q1` equals 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PoseRaw", into = "PoseRaw")]
pub struct PlanarPose {
    q: [Rational; 4],
}

#[derive(Serialize, Deserialize)]
struct PoseRaw {
    #[serde(with = "serde_rational::vec")]
    q: Vec<Rational>,
}

impl TryFrom<PoseRaw> for PlanarPose {
    type Error = Error;
    fn try_from(r: PoseRaw) -> Result<Self> {
        let [a, b, c, d]: [Rational; 4] =
            r.q.try_into().map_err(|_| Error::Parse("pose needs four entries".into()))?;
        PlanarPose::new(a, b, c, d)
    }
}

impl From<PlanarPose> for PoseRaw {
    fn from(p: PlanarPose) -> Self {
        PoseRaw { q: p.q.to_vec() }
    }
}

impl PlanarPose {
    pub fn new(q0: Rational, q1: Rational, q2: Rational, q3: Rational) -> Result<Self> {
        let lead = if !q0.is_zero() {
            q0.clone()
        } else if !q1.is_zero() {
            q1.clone()
        } else {
            return Err(Error::InvalidPose);
        };
        let inv = lead.recip();
        Ok(PlanarPose { q: [q0 * &inv, q1 * &inv, q2 * &inv, q3 * &inv] })
    }

    pub fn identity() -> Self {
        PlanarPose { q: [int(1), int(0), int(0), int(0)] }
    }

    /// Rotation about the origin, `(e0:e1:0:0)`.
    pub fn rotation(e0: Rational, e1: Rational) -> Result<Self> {
        Self::new(e0, e1, Rational::zero(), Rational::zero())
    }

    pub fn q(&self) -> &[Rational; 4] {
        &self.q
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [to_f64(&self.q[0]), to_f64(&self.q[1]), to_f64(&self.q[2]), to_f64(&self.q[3])]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl fmt::Debug for PlanarPose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {} : {})", self.q[0], self.q[1], self.q[2], self.q[3])
    }
}

/// Image of a moving-frame point under a pose, exactly.
pub fn bg_transform(pose: &PlanarPose, p: &Point2) -> Point2 {
    let [q0, q1, q2, q3] = &pose.q;
    let n = q0 * q0 + q1 * q1;
    let c = q0 * q0 - q1 * q1;
    let s = int(2) * q0 * q1;
    let a = &c * &p.a - &s * &p.b + int(2) * (q1 * q2 + q0 * q3);
    let b = &s * &p.a + &c * &p.b + int(2) * (q1 * q3 - q0 * q2);
    Point2 { a: a / &n, b: b / &n }
}

/// Floating-point version of [`bg_transform`] for approximate poses.
pub fn bg_transform_f64(q: [f64; 4], p: [f64; 2]) -> [f64; 2] {
    let [q0, q1, q2, q3] = q;
    let n = q0 * q0 + q1 * q1;
    let c = q0 * q0 - q1 * q1;
    let s = 2.0 * q0 * q1;
    [
        (c * p[0] - s * p[1] + 2.0 * (q1 * q2 + q0 * q3)) / n,
        (s * p[0] + c * p[1] + 2.0 * (q1 * q3 - q0 * q2)) / n,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleMap {
    Direct,
    Indirect,
    None,
}

/// Which kind of isometry maps `src[i]` to `dst[i]` for all three indices.
///
/// Collinear triples with matching distances admit both kinds; `Direct` is reported.
pub fn classify_triangle_map(src: &[Point2; 3], dst: &[Point2; 3]) -> TriangleMap {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if src[i].dist_sq(&src[j]) != dst[i].dist_sq(&dst[j]) {
            return TriangleMap::None;
        }
    }
    let s = signed_area(&src[0], &src[1], &src[2]);
    let d = signed_area(&dst[0], &dst[1], &dst[2]);
    if s == d {
        TriangleMap::Direct
    } else {
        debug_assert_eq!(s, -d);
        TriangleMap::Indirect
    }
}

/// A planar isometry `z -> u z + t` or `z -> u conj(z) + t` with `|u| = 1`, complex
/// numbers written as points.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    pub u: Point2,
    pub t: Point2,
    pub direct: bool,
}

impl Isometry {
    pub fn apply(&self, p: &Point2) -> Point2 {
        let z = if self.direct { p.clone() } else { p.conj() };
        &self.u.cmul(&z) + &self.t
    }

    pub fn inverse(&self) -> Isometry {
        if self.direct {
            let u = self.u.conj();
            Isometry { t: &Point2::origin() - &u.cmul(&self.t), u, direct: true }
        } else {
            Isometry { t: &Point2::origin() - &self.u.cmul(&self.t.conj()), u: self.u.clone(), direct: false }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.direct && self.u == Point2::ints(1, 0) && self.t.is_zero()
    }
}

/// Finds an isometry mapping `src[k]` to `dst[k]` for every `k`, by testing the (at most
/// two) candidates fixed by a pair of distinct source points.
pub fn find_isometry(src: &[Point2], dst: &[Point2]) -> Option<Isometry> {
    find_isometry_of_kind(src, dst, &[true, false])
}

/// As [`find_isometry`], restricted to direct (`true`) and/or indirect (`false`) maps.
pub fn find_isometry_of_kind(src: &[Point2], dst: &[Point2], kinds: &[bool]) -> Option<Isometry> {
    assert_eq!(src.len(), dst.len());
    let p = &src[0];
    let Some(k) = src.iter().position(|x| x != p) else {
        // all source points coincide: only a translation can work
        let ok = dst.iter().all(|x| x == &dst[0]);
        let direct = kinds.contains(&true);
        let t = if direct { &dst[0] - p } else { &dst[0] - &p.conj() };
        return ok.then(|| Isometry { u: Point2::ints(1, 0), t, direct });
    };
    let q = &src[k];
    if p.dist_sq(q) != dst[0].dist_sq(&dst[k]) {
        return None;
    }
    let dd = &dst[k] - &dst[0];
    for &direct in kinds {
        let (zp, zq) = if direct { (p.clone(), q.clone()) } else { (p.conj(), q.conj()) };
        let u = dd.cdiv(&(&zq - &zp));
        let t = &dst[0] - &u.cmul(&zp);
        let iso = Isometry { u, t, direct };
        if src.iter().zip(dst).all(|(s, d)| &iso.apply(s) == d) {
            return Some(iso);
        }
    }
    None
}

pub fn congruent(a: &SixConfig, b: &SixConfig) -> bool {
    find_isometry(&a.points, &b.points).is_some()
}

/// Base anchors (fixed frame), platform anchors (moving frame) and squared leg lengths.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(try_from = "DesignRaw", into = "DesignRaw")]
pub struct ManipulatorDesign {
    base: [Point2; 3],
    platform: [Point2; 3],
    legs_sq: [Rational; 3],
}

#[derive(Serialize, Deserialize)]
struct DesignRaw {
    base: [Point2; 3],
    platform: [Point2; 3],
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    legs: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    legs_squared: Option<Vec<Rational>>,
}

mod opt_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_rational::vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        serde_rational::vec::deserialize(d).map(Some)
    }
}

impl TryFrom<DesignRaw> for ManipulatorDesign {
    type Error = Error;
    fn try_from(r: DesignRaw) -> Result<Self> {
        let three = |v: Vec<Rational>| -> Result<[Rational; 3]> {
            v.try_into().map_err(|_| Error::Parse("expected three leg values".into()))
        };
        match (r.legs, r.legs_squared) {
            (Some(l), None) => {
                let l = three(l)?;
                if l.iter().any(|x| !x.is_positive()) {
                    return Err(Error::InvalidDesign("leg lengths must be positive".into()));
                }
                ManipulatorDesign::new(r.base, r.platform, l.map(|x| &x * &x))
            }
            (None, Some(l)) => ManipulatorDesign::new(r.base, r.platform, three(l)?),
            _ => Err(Error::Parse("give exactly one of `legs` or `legs_squared`".into())),
        }
    }
}

impl From<ManipulatorDesign> for DesignRaw {
    fn from(d: ManipulatorDesign) -> Self {
        DesignRaw { base: d.base, platform: d.platform, legs: None, legs_squared: Some(d.legs_sq.to_vec()) }
    }
}

impl ManipulatorDesign {
    /// Leg lengths are given squared so that induced designs stay rational.
    pub fn new(base: [Point2; 3], platform: [Point2; 3], legs_sq: [Rational; 3]) -> Result<Self> {
        if legs_sq.iter().any(|r| !r.is_positive()) {
            return Err(Error::InvalidDesign("leg lengths must be nonzero".into()));
        }
        Ok(ManipulatorDesign { base, platform, legs_sq })
    }

    pub fn with_leg_lengths(base: [Point2; 3], platform: [Point2; 3], legs: [Rational; 3]) -> Result<Self> {
        if legs.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidDesign("leg lengths must be positive".into()));
        }
        Self::new(base, platform, legs.map(|x| &x * &x))
    }

    pub fn base(&self) -> &[Point2; 3] {
        &self.base
    }

    pub fn platform(&self) -> &[Point2; 3] {
        &self.platform
    }

    pub fn legs_sq(&self) -> &[Rational; 3] {
        &self.legs_sq
    }

    pub fn base_collapsed(&self) -> bool {
        self.base[0] == self.base[1] && self.base[1] == self.base[2]
    }

    pub fn platform_collapsed(&self) -> bool {
        self.platform[0] == self.platform[1] && self.platform[1] == self.platform[2]
    }

    pub fn leg_lengths_f64(&self) -> [f64; 3] {
        self.legs_sq.clone().map(|r| to_f64(&r).sqrt())
    }
}

/// Six points in the fixed frame: base anchors first, then platform anchors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SixConfig {
    pub points: [Point2; 6],
}

impl fmt::Debug for SixConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points.iter()).finish()
    }
}

impl SixConfig {
    pub fn new(points: [Point2; 6]) -> Self {
        SixConfig { points }
    }

    pub fn from_ints(p: [(i64, i64); 6]) -> Self {
        SixConfig { points: p.map(|(a, b)| Point2::ints(a, b)) }
    }

    pub fn base(&self) -> [Point2; 3] {
        [self.points[0].clone(), self.points[1].clone(), self.points[2].clone()]
    }

    pub fn platform(&self) -> [Point2; 3] {
        [self.points[3].clone(), self.points[4].clone(), self.points[5].clone()]
    }

    /// Squared length of leg `i` (0-based).
    pub fn leg_sq(&self, i: usize) -> Rational {
        self.points[i].dist_sq(&self.points[i + 3])
    }

    pub fn zero_length_legs(&self) -> Vec<usize> {
        (0..3).filter(|&i| self.points[i] == self.points[i + 3]).collect()
    }

    /// Pairs of legs sharing both endpoints.
    pub fn coincident_legs(&self) -> Vec<(usize, usize)> {
        let p = &self.points;
        [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .filter(|&(i, j)| p[i] == p[j] && p[i + 3] == p[j + 3])
            .collect()
    }

    pub fn all_collinear(&self) -> bool {
        let p = &self.points;
        let Some(k) = (1..6).find(|&k| p[k] != p[0]) else {
            return true;
        };
        (1..6).all(|j| signed_area(&p[0], &p[k], &p[j]).is_zero())
    }

    pub fn map(&self, f: impl Fn(&Point2) -> Point2) -> Self {
        SixConfig { points: self.points.clone().map(|p| f(&p)) }
    }

    pub fn translate(&self, t: &Point2) -> Self {
        self.map(|p| p + t)
    }

    pub fn transform(&self, pose: &PlanarPose) -> Self {
        self.map(|p| bg_transform(pose, p))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.map(|p| p.scale(s))
    }

    /// Design whose platform frame is the fixed frame and whose legs have the current
    /// lengths, so that the identity pose realises this configuration.
    pub fn induced_design(&self) -> Result<ManipulatorDesign> {
        if let Some(i) = self.zero_length_legs().first() {
            return Err(Error::InvalidConfig(format!("leg {} has zero length", i + 1)));
        }
        let legs = [self.leg_sq(0), self.leg_sq(1), self.leg_sq(2)];
        ManipulatorDesign::new(self.base(), self.platform(), legs)
            .map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_f64(&self) -> [[f64; 2]; 6] {
        self.points.clone().map(|p| p.to_f64())
    }

    /// Largest absolute coordinate, at least 1.
    pub fn extent(&self) -> Rational {
        self.points
            .iter()
            .flat_map(|p| [p.a.abs(), p.b.abs()])
            .fold(Rational::one(), |m, x| if x > m { x } else { m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose(q: [Rational; 4]) -> PlanarPose {
        let [a, b, c, d] = q;
        PlanarPose::new(a, b, c, d).unwrap()
    }

    #[test]
    fn transform_examples() {
        let p = Point2::new(rat(3, 7), int(-2));
        assert_eq!(bg_transform(&PlanarPose::identity(), &p), p);
        let t = pose([int(1), int(0), int(0), rat(1, 2)]);
        assert_eq!(bg_transform(&t, &Point2::origin()), Point2::ints(1, 0));
        let half_turn = pose([int(0), int(1), int(0), int(0)]);
        assert_eq!(bg_transform(&half_turn, &Point2::ints(0, 1)), Point2::ints(0, -1));
        assert_eq!(PlanarPose::new(int(0), int(0), int(1), int(1)), Err(Error::InvalidPose));
    }

    #[test]
    fn pose_scaling_is_canonical() {
        let a = pose([int(-2), int(4), int(6), int(0)]);
        let b = pose([int(1), int(-2), int(-3), int(0)]);
        assert_eq!(a, b);
        assert_eq!(a.q()[0], int(1));
        let c = pose([int(0), int(-3), int(1), int(0)]);
        assert_eq!(c.q()[1], int(1));
    }

    #[test]
    fn transform_matches_float_version() {
        let pz = pose([int(3), int(-1), rat(1, 2), int(2)]);
        let p = Point2::new(rat(5, 3), rat(-1, 4));
        let exact = bg_transform(&pz, &p).to_f64();
        let approx = bg_transform_f64(pz.to_f64(), p.to_f64());
        assert!((exact[0] - approx[0]).abs() < 1e-14 && (exact[1] - approx[1]).abs() < 1e-14);
    }

    #[test]
    fn signed_area_cases() {
        let o = Point2::origin();
        let x = Point2::ints(1, 0);
        let y = Point2::ints(0, 1);
        assert_eq!(signed_area(&o, &x, &y), rat(1, 2));
        assert_eq!(signed_area(&x, &o, &y), rat(-1, 2));
        assert!(signed_area(&o, &x, &Point2::ints(5, 0)).is_zero());
    }

    #[test]
    fn triangle_maps() {
        let src = [Point2::ints(0, 0), Point2::ints(4, 0), Point2::ints(1, 3)];
        assert_eq!(classify_triangle_map(&src, &src), TriangleMap::Direct);
        let refl = src.clone().map(|p| p.conj());
        assert_eq!(classify_triangle_map(&src, &refl), TriangleMap::Indirect);
        let swapped = [src[1].clone(), src[0].clone(), src[2].clone()];
        assert_eq!(classify_triangle_map(&src, &swapped), TriangleMap::None);
        let line = [Point2::ints(0, 0), Point2::ints(1, 0), Point2::ints(3, 0)];
        let line_img = line.clone().map(|p| p.conj());
        assert_eq!(classify_triangle_map(&line, &line_img), TriangleMap::Direct);
    }

    #[test]
    fn swapped_triangle_agrees_with_brute_force_search() {
        // oracle: the isometry search over the two hypotheses from a point pair
        let src = [Point2::ints(0, 0), Point2::ints(4, 0), Point2::ints(1, 3)];
        let swapped = [src[1].clone(), src[0].clone(), src[2].clone()];
        assert!(find_isometry(&src, &swapped).is_none());
        let r = pose([int(2), int(1), int(-1), rat(3, 2)]);
        let moved = src.clone().map(|p| bg_transform(&r, &p));
        let iso = find_isometry(&src, &moved).unwrap();
        assert!(iso.direct);
        let refl: Vec<Point2> = moved.iter().map(|p| p.conj()).collect();
        assert!(!find_isometry(&src, &refl).unwrap().direct);
    }

    #[test]
    fn six_config_flags() {
        let c = SixConfig::from_ints([(0, 0), (1, 0), (2, 2), (0, 0), (3, 1), (2, 2)]);
        assert_eq!(c.zero_length_legs(), vec![0, 2]);
        let d = SixConfig::from_ints([(0, 0), (0, 0), (2, 2), (1, 1), (1, 1), (5, 2)]);
        assert_eq!(d.coincident_legs(), vec![(0, 1)]);
        assert!(c.induced_design().is_err());
        assert!(SixConfig::from_ints([(0, 0), (1, 1), (2, 2), (3, 3), (-1, -1), (7, 7)]).all_collinear());
    }

    #[test]
    fn design_json_round_trip() {
        let json = r#"{"base":[{"a":"0","b":"0"},{"a":"1","b":"0"},{"a":"0","b":"1"}],
            "platform":[{"a":"1/2","b":"0"},{"a":"2","b":"1"},{"a":"0","b":"3"}],
            "legs":["1","3/2","2"]}"#;
        let d: ManipulatorDesign = serde_json::from_str(json).unwrap();
        assert_eq!(d.legs_sq()[1], rat(9, 4));
        let back: ManipulatorDesign = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
        let bad = json.replace(r#""legs":["1","3/2","2"]"#, r#""legs":["0","1","1"]"#);
        assert!(serde_json::from_str::<ManipulatorDesign>(&bad).is_err());
    }
}
