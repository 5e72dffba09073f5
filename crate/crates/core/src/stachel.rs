//! Stachel's geometric test for flexion order 2 of a configuration whose legs lie in a
//! pencil: equal oriented angles when the legs meet in a point `L`, equal oriented
//! distances when they are parallel.

use num_traits::Zero;
use serde::Serialize;

use crate::geometry::{Point2, SixConfig};
use crate::ratpoly::Rational;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StachelMode {
    Copunctal,
    Parallel,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StachelReport {
    pub mode: StachelMode,
    #[serde(rename = "L")]
    pub l: Option<[f64; 2]>,
    pub q25: Option<[f64; 2]>,
    pub q36: Option<[f64; 2]>,
    /// Angles in radians in `[0, pi)`, or oriented distances in parallel mode.
    pub alpha: f64,
    pub beta: f64,
    pub residual: f64,
    pub passes: bool,
    pub note: Option<String>,
}

impl StachelReport {
    fn inapplicable(note: &str) -> Self {
        StachelReport {
            mode: StachelMode::Inapplicable,
            l: None,
            q25: None,
            q36: None,
            alpha: f64::NAN,
            beta: f64::NAN,
            residual: f64::NAN,
            passes: false,
            note: Some(note.into()),
        }
    }
}

type Line<T> = [T; 3];

fn line_q(p: &Point2, q: &Point2) -> Line<Rational> {
    [&p.b - &q.b, &q.a - &p.a, &p.a * &q.b - &p.b * &q.a]
}

fn meet_q(l: &Line<Rational>, m: &Line<Rational>) -> Line<Rational> {
    [
        &l[1] * &m[2] - &l[2] * &m[1],
        &l[2] * &m[0] - &l[0] * &m[2],
        &l[0] * &m[1] - &l[1] * &m[0],
    ]
}

fn line_f(p: [f64; 2], q: [f64; 2]) -> Line<f64> {
    [p[1] - q[1], q[0] - p[0], p[0] * q[1] - p[1] * q[0]]
}

fn meet_f(l: &Line<f64>, m: &Line<f64>) -> Line<f64> {
    [l[1] * m[2] - l[2] * m[1], l[2] * m[0] - l[0] * m[2], l[0] * m[1] - l[1] * m[0]]
}

fn collinear5(c: &SixConfig) -> bool {
    // five of the six points on one line, the sixth off it
    (0..6).any(|skip| {
        let pts: Vec<&Point2> = c.points.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, p)| p).collect();
        let Some(j) = (1..5).find(|&j| pts[j] != pts[0]) else { return false };
        pts.iter().all(|p| crate::geometry::signed_area(pts[0], pts[j], p).is_zero())
    })
}

fn collinear5_f64(x: &[[f64; 2]; 6]) -> bool {
    let scale = x.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    (0..6).any(|skip| {
        let pts: Vec<[f64; 2]> = (0..6).filter(|&k| k != skip).map(|k| x[k]).collect();
        let far = (1..5).max_by(|&i, &j| {
            let d = |k: usize| (pts[k][0] - pts[0][0]).hypot(pts[k][1] - pts[0][1]);
            d(i).total_cmp(&d(j))
        });
        let Some(j) = far else { return false };
        let (u, v) = ([pts[j][0] - pts[0][0], pts[j][1] - pts[0][1]], pts[0]);
        let n = u[0].hypot(u[1]);
        n > 1e-12 * scale && pts.iter().all(|p| ((p[0] - v[0]) * u[1] - (p[1] - v[1]) * u[0]).abs() / n <= 1e-10 * scale)
    })
}

/// Oriented angle from line `l` to line `m` in `[0, pi)`.
fn line_angle(l: &Line<f64>, m: &Line<f64>) -> f64 {
    let (d1, d2) = ([l[1], -l[0]], [m[1], -m[0]]);
    let a = (d1[0] * d2[1] - d1[1] * d2[0]).atan2(d1[0] * d2[0] + d1[1] * d2[1]);
    a.rem_euclid(std::f64::consts::PI)
}

fn finite(h: &Line<f64>) -> Option<[f64; 2]> {
    (h[2] != 0.0).then(|| [h[0] / h[2], h[1] / h[2]])
}

fn pencil_kind(l1: &Line<Rational>, l2: &Line<Rational>, l3: &Line<Rational>) -> Option<StachelMode> {
    let det = &l1[0] * (&l2[1] * &l3[2] - &l2[2] * &l3[1]) - &l1[1] * (&l2[0] * &l3[2] - &l2[2] * &l3[0])
        + &l1[2] * (&l2[0] * &l3[1] - &l2[1] * &l3[0]);
    if !det.is_zero() {
        return None;
    }
    let parallel = [meet_q(l1, l2), meet_q(l1, l3), meet_q(l2, l3)].iter().all(|m| m[2].is_zero());
    Some(if parallel { StachelMode::Parallel } else { StachelMode::Copunctal })
}

/// Exact pencil test on rational input, measurements in floating point.
pub fn stachel_check(config: &SixConfig, tol: f64) -> StachelReport {
    let x = &config.points;
    if collinear5(config) {
        return five_collinear(config.to_f64());
    }
    let legs = [line_q(&x[0], &x[3]), line_q(&x[1], &x[4]), line_q(&x[2], &x[5])];
    let Some(mode) = pencil_kind(&legs[0], &legs[1], &legs[2]) else {
        return StachelReport::inapplicable("the leg lines are neither copunctal nor parallel");
    };
    measure(config.to_f64(), mode, tol)
}

/// Floating-point version; the pencil is decided with a relative tolerance.
pub fn stachel_check_f64(x: [[f64; 2]; 6], tol: f64) -> StachelReport {
    if collinear5_f64(&x) {
        return five_collinear(x);
    }
    let legs = [line_f(x[0], x[3]), line_f(x[1], x[4]), line_f(x[2], x[5])];
    let unit = |l: &Line<f64>| {
        let n = (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]).sqrt();
        l.map(|v| v / n)
    };
    let u = legs.each_ref().map(unit);
    let det = u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1]) - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
        + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]);
    if det.abs() > 1e-9 {
        return StachelReport::inapplicable("the leg lines are neither copunctal nor parallel");
    }
    let dir = |l: &Line<f64>| {
        let n = l[0].hypot(l[1]);
        [l[0] / n, l[1] / n]
    };
    let d = legs.each_ref().map(dir);
    let cross = |a: [f64; 2], b: [f64; 2]| (a[0] * b[1] - a[1] * b[0]).abs();
    let mode = if cross(d[0], d[1]) < 1e-9 && cross(d[0], d[2]) < 1e-9 { StachelMode::Parallel } else { StachelMode::Copunctal };
    measure(x, mode, tol)
}

fn five_collinear(x: [[f64; 2]; 6]) -> StachelReport {
    let scale = x.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let legs = [line_f(x[0], x[3]), line_f(x[1], x[4]), line_f(x[2], x[5])];
    // two legs lie on the common line; L is where the third one crosses it
    let l = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|(i, j)| i < j)
        .map(|(i, j)| meet_f(&legs[i], &legs[j]))
        .find(|h| h[2].abs() > 1e-12 * scale * scale)
        .and_then(|h| finite(&h));
    StachelReport {
        mode: StachelMode::Copunctal,
        l,
        q25: None,
        q36: None,
        alpha: 0.0,
        beta: 0.0,
        residual: 0.0,
        passes: true,
        note: Some("five points are collinear; both angles vanish".into()),
    }
}

fn measure(x: [[f64; 2]; 6], mode: StachelMode, tol: f64) -> StachelReport {
    let legs = [line_f(x[0], x[3]), line_f(x[1], x[4]), line_f(x[2], x[5])];
    let q25h = meet_f(&line_f(x[0], x[1]), &line_f(x[3], x[4]));
    let q36h = meet_f(&line_f(x[0], x[2]), &line_f(x[3], x[5]));
    let scale = x.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let at_inf = |h: &Line<f64>| h[2].abs() <= 1e-12 * scale * scale;
    let (Some(q25), Some(q36)) = (finite(&q25h).filter(|_| !at_inf(&q25h)), finite(&q36h).filter(|_| !at_inf(&q36h))) else {
        return StachelReport::inapplicable("Q25 or Q36 is at infinity");
    };
    match mode {
        StachelMode::Copunctal => {
            let lh = [meet_f(&legs[0], &legs[1]), meet_f(&legs[0], &legs[2]), meet_f(&legs[1], &legs[2])]
                .into_iter()
                .max_by(|a, b| a[2].abs().total_cmp(&b[2].abs()))
                .expect("three");
            let Some(l) = finite(&lh) else {
                return StachelReport::inapplicable("the common point L is undefined");
            };
            let close = |p: [f64; 2]| (p[0] - l[0]).hypot(p[1] - l[1]) <= 1e-12 * scale;
            if close(q25) || close(q36) {
                return StachelReport::inapplicable("L coincides with Q25 or Q36");
            }
            let alpha = line_angle(&legs[1], &line_f(l, q25));
            let beta = line_angle(&legs[2], &line_f(l, q36));
            let d = (alpha - beta).abs();
            let residual = d.min(std::f64::consts::PI - d);
            StachelReport { mode, l: Some(l), q25: Some(q25), q36: Some(q36), alpha, beta, residual, passes: residual <= tol, note: None }
        }
        StachelMode::Parallel => {
            // oriented distances measured along the common normal of the legs
            let n = {
                let l = &legs[0];
                let k = l[0].hypot(l[1]);
                [l[0] / k, l[1] / k]
            };
            let dist = |q: [f64; 2], p: [f64; 2]| n[0] * (q[0] - p[0]) + n[1] * (q[1] - p[1]);
            let alpha = dist(q25, x[1]);
            let beta = dist(q36, x[2]);
            let residual = (alpha - beta).abs() / scale;
            StachelReport { mode, l: None, q25: Some(q25), q36: Some(q36), alpha, beta, residual, passes: residual <= tol, note: None }
        }
        StachelMode::Inapplicable => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanarPose;
    use crate::ratpoly::int;

    #[test]
    fn general_position_is_inapplicable() {
        let c = SixConfig::from_ints([(0, 0), (5, 1), (1, 4), (1, -1), (7, 2), (0, 6)]);
        assert_eq!(stachel_check(&c, DEFAULT_TOL).mode, StachelMode::Inapplicable);
    }

    #[test]
    fn pencil_through_origin_is_copunctal() {
        let c = SixConfig::from_ints([(2, 0), (0, 3), (-1, -1), (5, 0), (0, 7), (-4, -4)]);
        let r = stachel_check(&c, DEFAULT_TOL);
        assert_eq!(r.mode, StachelMode::Copunctal);
        assert_eq!(r.l, Some([0.0, 0.0]));
        // a rotation of the whole configuration keeps the verdict and the angle gap
        let rot = c.transform(&PlanarPose::rotation(int(3), int(2)).unwrap());
        let r2 = stachel_check(&rot, DEFAULT_TOL);
        assert_eq!(r2.passes, r.passes);
        assert!((r2.residual - r.residual).abs() < 1e-12);
    }

    #[test]
    fn parallel_legs() {
        let c = SixConfig::from_ints([(0, 0), (3, 1), (-2, 5), (0, 2), (3, 4), (-2, 9)]);
        assert_eq!(stachel_check(&c, DEFAULT_TOL).mode, StachelMode::Parallel);
        let f = stachel_check_f64(c.to_f64(), DEFAULT_TOL);
        assert_eq!(f.mode, StachelMode::Parallel);
    }
}
