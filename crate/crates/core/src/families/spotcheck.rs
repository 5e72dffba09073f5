//! Common zeros of the reduced generators near a family instance.
//!
//! Two stages. On the orientation line the generators are made square-free and divided
//! by the condition; the common roots left over are checked directly.
//!
//! With every factor of the theorem removed, the reduced generators have no common zeros
//! on a line or on a generic plane through the instance: the parts that survive are mostly
//! free of `f`, so their common zeros have codimension three in `f` and the parameters.
//! They are sampled on slices `(f, t, u)`, where `t` and `u` shift two parameters the
//! configuration depends on affinely. The generators are interpolated on a grid, nested
//! resultants locate the isolated common zeros, Gauss-Newton polishes them, and
//! `|grad s|` is evaluated there.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::build::line_average;
use super::theorem::{theorem_polynomial, Condition};
use super::FamilySpec;
use crate::error::{Error, Result};
use crate::flexion::{line_jets, IdentityJets};
use crate::ratpoly::{complex_roots, det_bareiss, to_f64, Rational, UPoly};

/// Parameters the averaged configuration depends on affinely.
const AFFINE: [&str; 12] = ["l1", "l2", "l3", "a2", "b2", "a3", "b3", "a5", "b5", "a6", "b6", "d"];

/// Grid sizes tried per slice axis, before the two check nodes.
const GRID: [usize; 3] = [4, 7, 12];

const TOL: f64 = 1e-9;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `sum c[j](x) y^j`.
#[derive(Clone, Debug, PartialEq)]
struct Bivariate {
    by_y: Vec<UPoly>,
}

impl Bivariate {
    fn deg_x(&self) -> usize {
        self.by_y.iter().filter_map(UPoly::degree).max().unwrap_or(0)
    }

    fn deg_y(&self) -> usize {
        self.by_y.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.by_y.iter().all(UPoly::is_zero)
    }

    fn at_y(&self, y: &Rational) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.by_y.iter().rev() {
            acc = &(&acc * &UPoly::constant(y.clone())) + c;
        }
        acc
    }

    fn transpose(&self) -> Bivariate {
        let dx = self.deg_x();
        Bivariate { by_y: (0..=dx).map(|i| UPoly::new(self.by_y.iter().map(|c| c.coeff(i)).collect())).collect() }
    }

    fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.by_y.iter().rev().fold(czero(), |acc, c| acc * y + c.eval_complex(x))
    }

    fn scale(&self, x: Complex64, y: Complex64) -> f64 {
        let mut s = 0.0f64;
        for (j, c) in self.by_y.iter().enumerate() {
            for (i, a) in c.to_f64_coeffs().iter().enumerate() {
                s = s.max(a.abs() * x.norm().powi(i as i32) * y.norm().powi(j as i32));
            }
        }
        s
    }
}

/// `sum B[k](f, t) u^k`.
#[derive(Clone, Debug, PartialEq)]
struct Trivariate {
    by_u: Vec<Bivariate>,
}

impl Trivariate {
    fn deg_f(&self) -> usize {
        self.by_u.iter().map(Bivariate::deg_x).max().unwrap_or(0)
    }

    fn deg_u(&self) -> usize {
        self.by_u.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.by_u.iter().all(Bivariate::is_zero)
    }

    fn at_u(&self, u: &Rational) -> Bivariate {
        let dt = self.by_u.iter().map(Bivariate::deg_y).max().unwrap_or(0);
        let mut by_y = vec![UPoly::zero(); dt + 1];
        for b in self.by_u.iter().rev() {
            for (j, slot) in by_y.iter_mut().enumerate() {
                let c = b.by_y.get(j).cloned().unwrap_or_else(UPoly::zero);
                *slot = &(&*slot * &UPoly::constant(u.clone())) + &c;
            }
        }
        Bivariate { by_y }
    }

    fn at(&self, t: &Rational, u: &Rational) -> UPoly {
        self.at_u(u).at_y(t)
    }

    /// The `f`-free polynomial as a bivariate in `(t, u)`.
    fn as_tu(&self) -> Bivariate {
        Bivariate { by_y: self.by_u.iter().map(|b| UPoly::new(b.by_y.iter().map(|c| c.coeff(0)).collect())).collect() }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.by_u.iter().enumerate().flat_map(|(k, b)| {
            b.by_y.iter().enumerate().flat_map(move |(j, c)| {
                c.to_f64_coeffs().into_iter().enumerate().filter(|(_, a)| *a != 0.0).map(move |(i, a)| (i, j, k, a))
            })
        })
    }

    fn eval(&self, z: [Complex64; 3]) -> Complex64 {
        self.terms().map(|(i, j, k, a)| z[0].powi(i as i32) * z[1].powi(j as i32) * z[2].powi(k as i32) * a).sum()
    }

    fn gradient(&self, z: [Complex64; 3]) -> [Complex64; 3] {
        let mut g = [czero(); 3];
        for (i, j, k, a) in self.terms() {
            let e = [i, j, k];
            for (v, slot) in g.iter_mut().enumerate() {
                if e[v] == 0 {
                    continue;
                }
                let mut m = Complex64::new(a * e[v] as f64, 0.0);
                for (w, &p) in e.iter().enumerate() {
                    m *= z[w].powi(if w == v { p as i32 - 1 } else { p as i32 });
                }
                *slot += m;
            }
        }
        g
    }

    fn scale(&self, z: [Complex64; 3]) -> f64 {
        self.terms()
            .map(|(i, j, k, a)| a.abs() * z[0].norm().powi(i as i32) * z[1].norm().powi(j as i32) * z[2].norm().powi(k as i32))
            .fold(0.0, f64::max)
    }

    fn relative(&self, z: [Complex64; 3]) -> f64 {
        let s = self.scale(z);
        if s == 0.0 {
            0.0
        } else {
            self.eval(z).norm() / s
        }
    }

    /// Coefficients in `f` at complex `(t, u)`, lowest first.
    fn f_coeffs(&self, t: Complex64, u: Complex64) -> Vec<Complex64> {
        let mut c = vec![czero(); self.deg_f() + 1];
        for (i, j, k, a) in self.terms() {
            c[i] += t.powi(j as i32) * u.powi(k as i32) * a;
        }
        c
    }
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> UPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - k]);
        }
    }
    let mut p = UPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = &(&p * &UPoly::linear(-xs[i].clone(), Rational::one())) + &UPoly::constant(dd[i].clone());
    }
    p
}

fn nodes(n: usize) -> Vec<Rational> {
    (0..n as i64).map(|k| Rational::from_integer(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }.into())).collect()
}

/// Interpolates per-node polynomials in `x` into a bivariate in `(x, y)`.
fn assemble(ys: &[Rational], vals: &[UPoly]) -> Bivariate {
    let dx = vals.iter().filter_map(UPoly::degree).max().unwrap_or(0);
    let per_x: Vec<UPoly> = (0..=dx).map(|i| interpolate(ys, &vals.iter().map(|v| v.coeff(i)).collect::<Vec<_>>())).collect();
    Bivariate { by_y: per_x }.transpose()
}

/// Interpolates per-node bivariates in `(f, t)` over `u`.
fn assemble_u(us: &[Rational], vals: &[Bivariate]) -> Trivariate {
    let dt = vals.iter().map(Bivariate::deg_y).max().unwrap_or(0);
    let df = vals.iter().map(Bivariate::deg_x).max().unwrap_or(0);
    // coefficient of f^i t^j as a polynomial in u
    let per: Vec<Vec<UPoly>> = (0..=dt)
        .map(|j| {
            (0..=df)
                .map(|i| {
                    let ys: Vec<Rational> = vals.iter().map(|b| b.by_y.get(j).map_or_else(Rational::zero, |c| c.coeff(i))).collect();
                    interpolate(us, &ys)
                })
                .collect()
        })
        .collect();
    let du = per.iter().flatten().filter_map(UPoly::degree).max().unwrap_or(0);
    let by_u = (0..=du)
        .map(|k| Bivariate { by_y: (0..=dt).map(|j| UPoly::new((0..=df).map(|i| per[j][i].coeff(k)).collect())).collect() })
        .collect();
    Trivariate { by_u }
}

/// `Res_x(a, b)` for formal degrees `m`, `n` in `x`, as a polynomial in `y`.
fn resultant_formal(a: &Bivariate, b: &Bivariate, m: usize, n: usize) -> Result<UPoly> {
    if m == 0 && n == 0 {
        return Ok(UPoly::one());
    }
    let bound = a.deg_y() * n + b.deg_y() * m;
    let ys = nodes(bound + 1);
    let mut vals = Vec::with_capacity(ys.len());
    for y in &ys {
        let (pa, pb) = (a.at_y(y), b.at_y(y));
        let ca: Vec<Rational> = (0..=m).rev().map(|i| pa.coeff(i)).collect();
        let cb: Vec<Rational> = (0..=n).rev().map(|i| pb.coeff(i)).collect();
        let size = m + n;
        let mut syl = vec![vec![Rational::zero(); size]; size];
        for r in 0..n {
            for (k, c) in ca.iter().enumerate() {
                syl[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in cb.iter().enumerate() {
                syl[n + r][r + k] = c.clone();
            }
        }
        vals.push(det_bareiss(&syl)?);
    }
    Ok(interpolate(&ys, &vals))
}

fn resultant_x(a: &Bivariate, b: &Bivariate) -> Result<UPoly> {
    resultant_formal(a, b, a.deg_x(), b.deg_x())
}

/// `Res_f(a, b)` as a bivariate in `(t, u)`.
fn resultant_f(a: &Trivariate, b: &Trivariate) -> Result<Bivariate> {
    let (m, n) = (a.deg_f(), b.deg_f());
    let us = nodes(a.deg_u() * n + b.deg_u() * m + 1);
    let mut vals = Vec::with_capacity(us.len());
    for u in &us {
        vals.push(resultant_formal(&a.at_u(u), &b.at_u(u), m, n)?);
    }
    Ok(assemble(&us, &vals))
}

/// Gcd of consecutive pairwise resultants in `x`: a polynomial in `y` vanishing on the
/// `y`-coordinates of the common zeros.
fn eliminate(gens: &[Bivariate]) -> Result<Option<UPoly>> {
    let mut acc: Option<UPoly> = None;
    for w in gens.windows(2) {
        let r = resultant_x(&w[0], &w[1])?;
        if r.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => r,
            Some(a) => UPoly::gcd(&a, &r)?,
        });
        if acc.as_ref().is_some_and(UPoly::is_constant) {
            break;
        }
    }
    Ok(acc)
}

/// Roots of a polynomial with complex coefficients, lowest first.
fn complex_poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let lead = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().is_some_and(|z| z.norm() <= 1e-14 * lead) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let top = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::one();
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / top;
    }
    m.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}

/// Gauss-Newton on all generators.
fn refine(gens: &[Trivariate], mut z: [Complex64; 3]) -> [Complex64; 3] {
    for _ in 0..50 {
        let f = DVector::from_iterator(gens.len(), gens.iter().map(|g| -g.eval(z)));
        let j = DMatrix::from_fn(gens.len(), 3, |r, c| gens[r].gradient(z)[c]);
        let Ok(step) = j.svd(true, true).solve(&f, 1e-14) else { break };
        for (zi, d) in z.iter_mut().zip(step.iter()) {
            *zi += d;
        }
        if !z.iter().all(|w| w.is_finite()) || step.norm() <= 1e-15 * (1.0 + z.iter().map(|w| w.norm()).sum::<f64>()) {
            break;
        }
    }
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpotStage {
    /// On the orientation line, condition divided out.
    Line,
    /// On a slice through the instance, all theorem factors divided out.
    Slice,
}

/// One sampled common zero.
#[derive(Clone, Debug, Serialize)]
pub struct SpotSample {
    pub stage: SpotStage,
    /// Shifted parameters with their values `[re, im]` at the sample; empty on the line.
    pub shifted: Vec<(String, [f64; 2])>,
    pub f: [f64; 2],
    /// Largest relative value of a reduced generator at the sample.
    pub residual: f64,
    /// `|grad s|` relative to the size of its terms.
    pub grad_norm: f64,
    /// On the line: whether the common factor divides `s` and each entry of `grad s`.
    pub exact: Option<bool>,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    pub spec: FamilySpec,
    pub requested: usize,
    pub samples: Vec<SpotSample>,
    /// Slices skipped or empty, with the reason.
    pub notes: Vec<String>,
    pub passes: bool,
}

/// Theorem factors in `f`, with structural duplicates dropped.
fn spot_factors(spec: &FamilySpec) -> Vec<UPoly> {
    let tp = theorem_polynomial(spec);
    let mut v: Vec<UPoly> = tp.degenerate.iter().filter(|f| !f.is_constant()).map(|f| f.form.dehomogenize()).collect();
    if let Condition::Form(c) = &tp.condition {
        v.push(c.dehomogenize());
    }
    v.push(UPoly::from_ints(&[1, 0, 1]));
    v
}

fn keep_mask(factors: &[UPoly]) -> Vec<bool> {
    let monic: Vec<Option<UPoly>> = factors.iter().map(|f| (!f.is_constant()).then(|| f.monic())).collect();
    (0..factors.len()).map(|i| monic[i].is_some() && !(0..i).any(|j| monic[j] == monic[i])).collect()
}

fn masked(v: Vec<UPoly>, mask: &[bool]) -> Vec<UPoly> {
    v.into_iter().zip(mask).filter(|(_, &k)| k).map(|(f, _)| f).collect()
}

fn strip(g: &UPoly, factor: &UPoly, m: usize) -> Option<UPoly> {
    (0..m).try_fold(g.clone(), |acc, _| acc.div_exact(factor))
}

/// Reduced generators followed by the four entries of `grad s`.
fn reduce(jets: &IdentityJets<UPoly>, factors: &[UPoly], mults: &[Vec<usize>]) -> Option<Vec<UPoly>> {
    let mut out = Vec::new();
    for (k, g) in jets.generators().iter().enumerate() {
        let mut r = g.clone();
        if !r.is_zero() {
            for (j, phi) in factors.iter().enumerate() {
                r = strip(&r, phi, mults[k][j])?;
            }
        }
        out.push(r);
    }
    out.extend(jets.grad_s.iter().cloned());
    Some(out)
}

fn rel_scale(p: &UPoly, z: Complex64) -> f64 {
    p.to_f64_coeffs().iter().enumerate().map(|(i, a)| a.abs() * z.norm().powi(i as i32)).fold(0.0, f64::max)
}

fn rel_upoly(p: &UPoly, z: Complex64) -> f64 {
    let s = rel_scale(p, z);
    if s == 0.0 {
        0.0
    } else {
        p.eval_complex(z).norm() / s
    }
}

/// `|grad s|` over the largest term among its entries.
fn grad_relative(parts: impl Iterator<Item = (Complex64, f64)>) -> f64 {
    let (mut n2, mut scale) = (0.0, 0.0f64);
    for (v, s) in parts {
        n2 += v.norm_sqr();
        scale = scale.max(s);
    }
    if scale == 0.0 {
        0.0
    } else {
        n2.sqrt() / scale
    }
}

/// Common roots on the line of the square-free generators divided by the condition.
fn line_samples(spec: &FamilySpec, jets: &IdentityJets<UPoly>) -> std::result::Result<Vec<SpotSample>, String> {
    let Condition::Form(c) = theorem_polynomial(spec).condition else {
        return Err("line: no orientation condition to divide out".into());
    };
    let p = c.dehomogenize().square_free_part().map_err(|e| e.to_string())?;
    let mut reduced = Vec::new();
    for g in jets.generators().iter().filter(|g| !g.is_zero()) {
        let sf = g.square_free_part().map_err(|e| e.to_string())?;
        reduced.push(sf.div_exact(&p).ok_or("line: the condition does not divide a generator")?);
    }
    let common = UPoly::gcd_all(reduced.iter());
    if common.is_zero() || common.is_constant() {
        return Ok(vec![]);
    }
    let exact = jets.s.is_zero() || common.divides(&jets.s);
    let exact = exact && jets.grad_s.iter().all(|g| g.is_zero() || common.divides(g));
    let roots = complex_roots(&common).map_err(|e| e.to_string())?;
    Ok(roots
        .into_iter()
        .map(|(z, _)| {
            let residual = reduced.iter().map(|g| rel_upoly(g, z)).fold(0.0, f64::max);
            let grad_norm = grad_relative(jets.grad_s.iter().map(|g| (g.eval_complex(z), rel_scale(g, z))));
            SpotSample {
                stage: SpotStage::Line,
                shifted: vec![],
                f: [z.re, z.im],
                residual,
                grad_norm,
                exact: Some(exact),
                passes: exact && grad_norm < TOL && residual < TOL,
            }
        })
        .collect())
}

struct Slice {
    gens: Vec<Trivariate>,
    grad: Vec<Trivariate>,
}

/// Interpolates the reduced generators and `grad s` over a grid in `(t, u)`.
fn fit_slice(spec: &FamilySpec, names: [&str; 2], mask: &[bool], mults: &[Vec<usize>]) -> std::result::Result<Slice, String> {
    let v0 = [spec.p(names[0]).clone(), spec.p(names[1]).clone()];
    let at = |t: &Rational, u: &Rational| -> std::result::Result<Vec<UPoly>, String> {
        let s = spec
            .with_param(names[0], &v0[0] + t)
            .and_then(|s| s.with_param(names[1], &v0[1] + u))
            .map_err(|e| e.to_string())?;
        let jets = line_jets(&line_average(&s).map_err(|e| e.to_string())?);
        let fs = masked(spot_factors(&s), mask);
        if fs.len() != mults[0].len() {
            return Err("factors change shape".into());
        }
        reduce(&jets, &fs, mults).ok_or_else(|| "a factor does not divide off the instance".into())
    };
    for n in GRID {
        let xs = nodes(n + 2);
        let grid: Vec<(usize, usize)> = (0..n + 2).flat_map(|i| (0..n + 2).map(move |j| (i, j))).collect();
        let vals: Vec<Vec<UPoly>> = grid.par_iter().map(|&(i, j)| at(&xs[i], &xs[j])).collect::<std::result::Result<_, _>>()?;
        let val = |i: usize, j: usize| &vals[i * (n + 2) + j];
        let count = vals[0].len();
        let mut polys = Vec::with_capacity(count);
        for k in 0..count {
            let cols: Vec<Bivariate> = (0..n).map(|j| assemble(&xs[..n], &(0..n).map(|i| val(i, j)[k].clone()).collect::<Vec<_>>())).collect();
            let tv = assemble_u(&xs[..n], &cols);
            if !grid.iter().filter(|&&(i, j)| i >= n || j >= n).all(|&(i, j)| tv.at(&xs[i], &xs[j]) == val(i, j)[k]) {
                break;
            }
            polys.push(tv);
        }
        if polys.len() == count {
            let grad = polys.split_off(count - 4);
            return Ok(Slice { gens: polys, grad });
        }
    }
    Err("degree in the parameters too high".into())
}

/// Values of `f` tried when a whole orientation line lies in the zero set.
const LINE_PROBES: [f64; 3] = [-1.0, 0.5, 2.0];

/// Common zeros on the slice through `spec` shifting `names`; `offset` lists parameters
/// already moved away from the instance, for the report.
fn slice_samples(
    spec: &FamilySpec,
    names: [&str; 2],
    offset: &[(String, f64)],
    mask: &[bool],
    mults: &[Vec<usize>],
) -> std::result::Result<Vec<SpotSample>, String> {
    let Slice { gens, grad } = fit_slice(spec, names, mask, mults)?;
    let gens: Vec<Trivariate> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    let (fdep, ffree): (Vec<&Trivariate>, Vec<&Trivariate>) = gens.iter().partition(|g| g.deg_f() > 0);
    if fdep.is_empty() {
        return Err("no generator depends on f".into());
    }
    let mut tu: Vec<Bivariate> = ffree.iter().map(|g| g.as_tu()).collect();
    for w in fdep.windows(2) {
        let r = resultant_f(w[0], w[1]).map_err(|e| e.to_string())?;
        if !r.is_zero() {
            tu.push(r);
        }
    }
    if tu.len() < 2 {
        return Err("too few equations in the parameters".into());
    }
    let elim = |v: &[Bivariate]| eliminate(v).map_err(|e| e.to_string());
    let (Some(cu), Some(ct)) = (elim(&tu)?, elim(&tu.iter().map(Bivariate::transpose).collect::<Vec<_>>())?) else {
        return Err("common zeros are not isolated".into());
    };
    if cu.is_constant() || ct.is_constant() {
        return Ok(vec![]);
    }
    let roots = |p: &UPoly| complex_roots(p).map(|r| r.into_iter().map(|(z, _)| z).collect::<Vec<_>>()).map_err(|e| e.to_string());
    let (us, ts) = (roots(&cu)?, roots(&ct)?);
    let rel_tu = |b: &Bivariate, t: Complex64, u: Complex64| {
        let s = b.scale(t, u);
        if s == 0.0 {
            0.0
        } else {
            b.eval(t, u).norm() / s
        }
    };
    let v0 = [to_f64(spec.p(names[0])), to_f64(spec.p(names[1]))];
    let mut found: Vec<[Complex64; 3]> = Vec::new();
    let mut out = Vec::new();
    let mut record = |z: [Complex64; 3], polish: bool| {
        let z = if polish { refine(&gens, z) } else { z };
        if found.iter().any(|w| w.iter().zip(&z).all(|(a, b)| (a - b).norm() < 1e-7 * (1.0 + b.norm()))) {
            return;
        }
        found.push(z);
        let residual = gens.iter().map(|g| g.relative(z)).fold(0.0, f64::max);
        let grad_norm = grad_relative(grad.iter().map(|g| (g.eval(z), g.scale(z))));
        let mut shifted: Vec<(String, [f64; 2])> = offset.iter().map(|(n, v)| (n.clone(), [*v, 0.0])).collect();
        shifted.push((names[0].to_string(), [v0[0] + z[1].re, z[1].im]));
        shifted.push((names[1].to_string(), [v0[1] + z[2].re, z[2].im]));
        out.push(SpotSample {
            stage: SpotStage::Slice,
            shifted,
            f: [z[0].re, z[0].im],
            residual,
            grad_norm,
            exact: None,
            passes: grad_norm < TOL && residual < TOL,
        });
    };
    for &t in &ts {
        for &u in &us {
            if tu.iter().any(|b| rel_tu(b, t, u) > 1e-6) {
                continue;
            }
            // the whole line lies in the zero set when every f-dependent generator vanishes
            let on_line = fdep.iter().all(|g| {
                let c = g.f_coeffs(t, u);
                let s = LINE_PROBES.iter().map(|&f| g.scale([Complex64::new(f, 0.0), t, u])).fold(0.0, f64::max);
                c.iter().all(|a| a.norm() <= 1e-9 * s)
            });
            if on_line {
                for f in LINE_PROBES {
                    record([Complex64::new(f, 0.0), t, u], false);
                }
                continue;
            }
            let pivot = fdep.iter().min_by_key(|g| g.deg_f()).expect("nonempty");
            for f in complex_poly_roots(&pivot.f_coeffs(t, u)) {
                if gens.iter().all(|g| g.relative([f, t, u]) <= 1e-6) {
                    record([f, t, u], true);
                }
            }
        }
    }
    Ok(out)
}

/// Offsets for the third parameter of parallel slices.
const PARALLEL: [i64; 4] = [1, -1, 2, -2];

/// Samples common zeros of the reduced generators at and near `spec` and checks
/// `|grad s|` at each, until at least `samples` are collected or the slices run out.
///
/// On slices the factors removed are those of the theorem (condition, degenerate factors
/// and `1 + f^2`), each with the multiplicity it has in each generator on the unshifted
/// line. That stands in for dividing by the gcd over the parameter ring: a factor's
/// multiplicity on a generic line is its multiplicity as a polynomial.
pub fn singularity_spotcheck(spec: &FamilySpec, samples: usize) -> Result<SingularityReport> {
    let spec = spec.without_orientation();
    let jets = line_jets(&line_average(&spec)?);
    let raw = spot_factors(&spec);
    let mask = keep_mask(&raw);
    let factors = masked(raw, &mask);
    let mults: Vec<Vec<usize>> = jets
        .generators()
        .iter()
        .map(|g| factors.iter().map(|f| if g.is_zero() { 0 } else { g.multiplicity_of(f) }).collect())
        .collect();
    if reduce(&jets, &factors, &mults).is_none() {
        return Err(Error::Verification("theorem factors do not divide the generators".into()));
    }
    let mut out = Vec::new();
    let mut notes = Vec::new();
    match line_samples(&spec, &jets) {
        Ok(s) => out.extend(s),
        Err(e) => notes.push(e),
    }
    let names: Vec<&str> = AFFINE.iter().copied().filter(|n| spec.params().contains_key(*n)).collect();
    let mut productive = Vec::new();
    'pairs: for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            if out.len() >= samples {
                break 'pairs;
            }
            match slice_samples(&spec, [a, b], &[], &mask, &mults) {
                Ok(s) if s.is_empty() => notes.push(format!("{a}, {b}: no common zeros")),
                Ok(s) => {
                    out.extend(s);
                    productive.push([*a, *b]);
                }
                Err(e) => notes.push(format!("{a}, {b}: {e}")),
            }
        }
    }
    // parallel slices through nearby instances, moving a third parameter
    'parallel: for d in PARALLEL {
        for pair in &productive {
            for c in names.iter().filter(|c| !pair.contains(c)) {
                if out.len() >= samples {
                    break 'parallel;
                }
                let value = spec.p(c) + Rational::from_integer(d.into());
                let Ok(moved) = spec.with_param(c, value.clone()) else { continue };
                let offset = [(c.to_string(), to_f64(&value))];
                match slice_samples(&moved, *pair, &offset, &mask, &mults) {
                    Ok(s) => out.extend(s),
                    Err(e) => notes.push(format!("{}, {} with {c} = {}: {e}", pair[0], pair[1], to_f64(&value))),
                }
            }
        }
    }
    let passes = out.len() >= samples && out.iter().all(|s| s.passes);
    Ok(SingularityReport { spec, requested: samples, samples: out, notes, passes })
}
