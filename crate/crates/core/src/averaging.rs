//! Averaged configurations of two realisations and the classification of realisation
//! pairs by the kinds of isometry relating their bases and platforms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    classify_triangle_map, congruent, find_isometry_of_kind, signed_area, Isometry, Point2, SixConfig, TriangleMap,
};
use crate::ratpoly::Rational;

/// Midpoints of two configurations, together with the degeneracies the result may have.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AveragedConfig {
    pub config: SixConfig,
    /// 0-based legs whose two endpoints coincide.
    pub zero_length_legs: Vec<usize>,
    /// 0-based pairs of legs that share both endpoints.
    pub coincident_legs: Vec<(usize, usize)>,
}

impl AveragedConfig {
    pub fn from_config(config: SixConfig) -> Self {
        AveragedConfig {
            zero_length_legs: config.zero_length_legs(),
            coincident_legs: config.coincident_legs(),
            config,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.zero_length_legs.is_empty() && self.coincident_legs.is_empty()
    }
}

/// Pointwise midpoints without any checks.
pub fn midpoints(a: &SixConfig, b: &SixConfig) -> SixConfig {
    SixConfig::new(std::array::from_fn(|k| a.points[k].midpoint(&b.points[k])))
}

/// Checks that two configurations realise the same bar-plate framework.
pub fn same_intrinsic_metric(a: &SixConfig, b: &SixConfig) -> Result<()> {
    for i in 0..3 {
        if a.leg_sq(i) != b.leg_sq(i) {
            return Err(Error::MetricMismatch(format!("leg {} lengths differ", i + 1)));
        }
    }
    if classify_triangle_map(&a.base(), &b.base()) == TriangleMap::None {
        return Err(Error::MetricMismatch("base triangles are not congruent".into()));
    }
    if classify_triangle_map(&a.platform(), &b.platform()) == TriangleMap::None {
        return Err(Error::MetricMismatch("platform triangles are not congruent".into()));
    }
    Ok(())
}

/// Averaged configuration of two incongruent realisations of one framework.
pub fn average(a: &SixConfig, b: &SixConfig) -> Result<AveragedConfig> {
    same_intrinsic_metric(a, b)?;
    if congruent(a, b) {
        return Err(Error::Congruent);
    }
    Ok(AveragedConfig::from_config(midpoints(a, b)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairSet {
    A,
    B,
    C,
    D,
}

/// How the platform moves relative to the base between the two realisations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelativeMotion {
    Rotation,
    Translation,
    Reflection,
    GlideReflection,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairClass {
    pub set: PairSet,
    pub base_map: TriangleMap,
    pub platform_map: TriangleMap,
    pub motion: Option<RelativeMotion>,
    /// Set when a side condition of the set fails (a collinear triple).
    pub degeneracy: Option<String>,
}

fn relative_motion(a: &SixConfig, b: &SixConfig, base_direct: bool, plat_direct: bool) -> Option<RelativeMotion> {
    let alpha = find_isometry_of_kind(&a.base(), &b.base(), &[base_direct])?;
    let back: Vec<Point2> = b.platform().iter().map(|p| alpha.inverse().apply(p)).collect();
    let gamma = find_isometry_of_kind(&a.platform(), &back, &[base_direct == plat_direct])?;
    Some(motion_kind(&gamma))
}

fn motion_kind(g: &Isometry) -> RelativeMotion {
    let one = Point2::ints(1, 0);
    if g.direct {
        if g.u == one {
            RelativeMotion::Translation
        } else {
            RelativeMotion::Rotation
        }
    } else {
        // the square of z -> u conj(z) + t is the translation by u conj(t) + t
        let sq = &g.u.cmul(&g.t.conj()) + &g.t;
        if sq.is_zero() {
            RelativeMotion::Reflection
        } else {
            RelativeMotion::GlideReflection
        }
    }
}

fn collinear(t: &[Point2; 3]) -> bool {
    signed_area(&t[0], &t[1], &t[2]) == Rational::from_integer(0.into())
}

/// Sorts a pair into Sets A to D by the isometries relating bases and platforms.
pub fn classify_pair(a: &SixConfig, b: &SixConfig) -> Result<PairClass> {
    same_intrinsic_metric(a, b)?;
    let base_map = classify_triangle_map(&a.base(), &b.base());
    let platform_map = classify_triangle_map(&a.platform(), &b.platform());
    let (set, base_direct, plat_direct) = match (base_map, platform_map) {
        (TriangleMap::Direct, TriangleMap::Direct) => (PairSet::A, true, true),
        (TriangleMap::Indirect, TriangleMap::Indirect) => (PairSet::B, false, false),
        (TriangleMap::Direct, TriangleMap::Indirect) => (PairSet::C, true, false),
        (TriangleMap::Indirect, TriangleMap::Direct) => (PairSet::D, false, true),
        _ => unreachable!("metric checked"),
    };
    let (cb, cp) = (collinear(&a.base()), collinear(&a.platform()));
    let degeneracy = match (cb, cp) {
        (true, true) => Some("base and platform anchors are collinear".to_string()),
        (true, false) => Some("base anchors are collinear".to_string()),
        (false, true) => Some("platform anchors are collinear".to_string()),
        (false, false) => None,
    };
    Ok(PairClass {
        set,
        base_map,
        platform_map,
        motion: relative_motion(a, b, base_direct, plat_direct),
        degeneracy,
    })
}

/// Whether translating one realisation by `t` and the other by `-t` leaves the average
/// unchanged.
pub fn translation_invariance_check(a: &SixConfig, b: &SixConfig, t: &Point2) -> bool {
    let minus = &Point2::origin() - t;
    midpoints(&a.translate(t), &b.translate(&minus)) == midpoints(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanarPose;
    use crate::ratpoly::{int, rat};

    fn generic() -> SixConfig {
        SixConfig::from_ints([(0, 0), (5, 1), (1, 4), (1, -1), (7, 2), (0, 6)])
    }

    #[test]
    fn translated_copy_is_congruent() {
        let a = generic();
        let b = a.translate(&Point2::new(int(3), rat(-1, 2)));
        assert_eq!(average(&a, &b), Err(Error::Congruent));
        // the bare midpoints are the original shifted by t/2, hence congruent to it
        assert!(congruent(&midpoints(&a, &b), &a));
    }

    #[test]
    fn reflected_platform_averages_to_collinear() {
        let a = SixConfig::from_ints([(0, 3), (4, 5), (-2, 7), (1, 2), (3, -1), (-2, 4)]);
        let mut pts = a.points.clone();
        for p in pts.iter_mut().skip(3) {
            *p = p.conj();
        }
        // only the midpoint property matters here, leg lengths are not preserved
        let b = SixConfig::new(pts);
        let m = midpoints(&a, &b);
        assert!(m.platform().iter().all(|p| p.b == int(0)));
    }

    #[test]
    fn zero_length_flag() {
        let a = SixConfig::from_ints([(0, 0), (4, 0), (0, 4), (2, 2), (5, 1), (1, 5)]);
        // b mirrors x4 through x1 so the averaged leg 1 collapses
        let mut pts = a.points.clone();
        pts[3] = Point2::ints(-2, -2);
        let m = AveragedConfig::from_config(midpoints(&a, &SixConfig::new(pts)));
        assert_eq!(m.zero_length_legs, vec![0]);
        assert!(!m.is_valid());
    }

    #[test]
    fn metric_mismatch() {
        let a = generic();
        let mut pts = a.points.clone();
        pts[5] = Point2::ints(0, 7);
        assert!(matches!(average(&a, &SixConfig::new(pts)), Err(Error::MetricMismatch(_))));
    }

    #[test]
    fn rotation_pair_is_set_a() {
        // platform rotated about the origin, base points on the bisectors
        let rot = PlanarPose::rotation(int(2), int(1)).unwrap();
        let plat = [Point2::ints(0, 1), Point2::ints(3, 2), Point2::ints(-2, 1)];
        let platp = plat.clone().map(|p| crate::geometry::bg_transform(&rot, &p));
        let base: [Point2; 3] = std::array::from_fn(|i| {
            let m = plat[i].midpoint(&platp[i]);
            let n = Point2::new(&plat[i].b - &platp[i].b, &platp[i].a - &plat[i].a);
            &m + &n.scale(&int(i as i64 + 1))
        });
        let a = SixConfig::new([base[0].clone(), base[1].clone(), base[2].clone(), plat[0].clone(), plat[1].clone(), plat[2].clone()]);
        let b = SixConfig::new([base[0].clone(), base[1].clone(), base[2].clone(), platp[0].clone(), platp[1].clone(), platp[2].clone()]);
        let c = classify_pair(&a, &b).unwrap();
        assert_eq!(c.set, PairSet::A);
        assert_eq!(c.motion, Some(RelativeMotion::Rotation));
        assert!(average(&a, &b).unwrap().is_valid());
        let t = Point2::new(int(3), rat(-7, 2));
        assert!(translation_invariance_check(&a, &b, &t));
        assert_eq!(midpoints(&a.translate(&t), &b), midpoints(&a, &b).translate(&t.scale(&rat(1, 2))));
        assert_eq!(midpoints(&a, &b), midpoints(&b, &a));
    }
}
