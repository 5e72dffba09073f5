use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{sign, to_f64, Rational, UPoly};
use crate::error::{Error, Result};

/// Default refinement: isolating intervals shrink to 2^-64 of the root magnitude.
pub const REFINE_BITS: u32 = 64;

/// A real root of a rational polynomial, kept exact as an isolating interval of a
/// square-free defining polynomial.
///
/// Either `lo == hi` (a rational root) or the defining polynomial has exactly one
/// root in the open interval and nonzero values of opposite sign at both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    lo: Rational,
    hi: Rational,
    pub multiplicity: usize,
    defining: UPoly,
}

struct Sturm(Vec<UPoly>);

impl Sturm {
    fn new(p: &UPoly) -> Self {
        let norm = |q: UPoly| {
            let l = q.lead().map(|c| c.abs()).unwrap_or_else(Rational::one);
            q.scale(&l.recip())
        };
        let mut seq = vec![norm(p.clone()), norm(p.derivative())];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(norm(-&r));
        }
        Sturm(seq)
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.0 {
            let s = sign(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Fraction with the smallest denominator in `[lo, hi]`, by continued fractions.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

fn half(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(BigInt::from(2))
}

impl RealRoot {
    fn exact(x: Rational, multiplicity: usize, defining: UPoly) -> Self {
        RealRoot { lo: x.clone(), hi: x, multiplicity, defining }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn defining_poly(&self) -> &UPoly {
        &self.defining
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Root from a rational value (multiplicity 1, defining polynomial `x - r`).
    pub fn from_rational(r: Rational) -> Self {
        let d = UPoly::linear(-r.clone(), Rational::one());
        Self::exact(r, 1, d)
    }

    /// One bisection step. Keeps the sign invariant.
    pub fn bisect(&mut self) {
        if self.lo == self.hi {
            return;
        }
        let m = half(&self.lo, &self.hi);
        let sm = sign(&self.defining.eval(&m));
        if sm == 0 {
            self.lo = m.clone();
            self.hi = m;
        } else if sm == sign(&self.defining.eval(&self.lo)) {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    /// Refines until the width is at most `2^-bits * max(1, |root|)`.
    pub fn refine(&mut self, bits: u32) {
        let two_pow = Rational::from_integer(BigInt::one() << bits);
        loop {
            if self.lo == self.hi {
                return;
            }
            let mag = self.lo.abs().max(self.hi.abs());
            let scale = if mag < Rational::one() { Rational::one() } else { mag };
            if self.width() * &two_pow <= scale {
                return;
            }
            self.bisect();
        }
    }

    /// Exact root when the simplest fraction in the interval is a zero. Any rational
    /// root with denominator below `width^(-1/2)` is caught this way.
    fn promoted(self) -> Self {
        if self.lo == self.hi {
            return self;
        }
        let q = simplest_between(&self.lo, &self.hi);
        if self.defining.eval(&q).is_zero() {
            RealRoot::exact(q, self.multiplicity, self.defining)
        } else {
            self
        }
    }

    pub fn refined(mut self, bits: u32) -> Self {
        self.refine(bits);
        self
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&half(&self.lo, &self.hi))
    }

    /// Exact test `p(root) = 0` through the gcd with the defining polynomial.
    pub fn is_root_of(&self, p: &UPoly) -> bool {
        if p.is_zero() {
            return true;
        }
        if let Some(x) = self.as_rational() {
            return p.eval(x).is_zero();
        }
        let g = UPoly::gcd(&self.defining, p).expect("nonzero");
        if g.is_constant() {
            return false;
        }
        // g divides the defining polynomial, so its roots are a subset of simple roots
        // and at most one lies in the interval
        sign(&g.eval(&self.lo)) * sign(&g.eval(&self.hi)) < 0
    }

    /// Exact sign of `p` at the root.
    pub fn sign_of(&self, p: &UPoly) -> i8 {
        if self.is_root_of(p) {
            return 0;
        }
        if let Some(x) = self.as_rational() {
            return sign(&p.eval(x));
        }
        let sf = p.square_free_part().expect("nonzero");
        let st = Sturm::new(&sf);
        let mut r = self.clone();
        loop {
            let inside = st.count(&r.lo, &r.hi) + usize::from(sf.eval(&r.lo).is_zero());
            if inside == 0 {
                return sign(&p.eval(&r.lo));
            }
            r.bisect();
            if let Some(x) = r.as_rational() {
                return sign(&p.eval(x));
            }
        }
    }

    /// Approximate value of `p` at the root after refinement.
    pub fn eval_f64(&self, p: &UPoly) -> f64 {
        p.eval_f64(self.to_f64())
    }
}

/// All real roots of `p` with exact multiplicities, sorted increasingly and refined to
/// [`REFINE_BITS`]. The zero polynomial is rejected (callers read it as "identically zero").
pub fn upoly_real_roots(p: &UPoly) -> Result<Vec<RealRoot>> {
    upoly_real_roots_bits(p, REFINE_BITS)
}

pub fn upoly_real_roots_bits(p: &UPoly, bits: u32) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (f, m) in p.square_free_decomposition()? {
        for r in isolate(&f, m) {
            out.push(r.refined(bits).promoted());
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Isolates the real roots of a square-free polynomial. Stack entries are open
/// intervals with their root counts; endpoints may themselves be (already recorded) roots.
fn isolate(f: &UPoly, multiplicity: usize) -> Vec<RealRoot> {
    if f.degree() == Some(1) {
        let x = -f.coeff(0) / f.coeff(1);
        return vec![RealRoot::exact(x, multiplicity, f.clone())];
    }
    let st = Sturm::new(f);
    let b = f.root_bound();
    let n0 = st.count(&-b.clone(), &b);
    let mut stack = vec![(-b.clone(), b, n0)];
    let mut out = Vec::new();
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => continue,
            1 => {
                out.push(finish(f, lo, hi, &st, multiplicity));
                continue;
            }
            _ => {}
        }
        let m = half(&lo, &hi);
        let at_m = f.eval(&m).is_zero();
        let left = open_count(f, &st, &lo, &m);
        if at_m {
            out.push(RealRoot::exact(m.clone(), multiplicity, f.clone()));
        }
        let right = n - left - usize::from(at_m);
        stack.push((lo, m.clone(), left));
        stack.push((m, hi, right));
    }
    out
}

/// Roots strictly inside `(lo, hi)`.
fn open_count(f: &UPoly, st: &Sturm, lo: &Rational, hi: &Rational) -> usize {
    st.count(lo, hi) - usize::from(f.eval(hi).is_zero())
}

/// Turns an open interval holding exactly one root into a [`RealRoot`] whose endpoints
/// are not roots.
fn finish(f: &UPoly, mut lo: Rational, mut hi: Rational, st: &Sturm, mult: usize) -> RealRoot {
    while f.eval(&lo).is_zero() || f.eval(&hi).is_zero() {
        let m = half(&lo, &hi);
        if f.eval(&m).is_zero() {
            return RealRoot::exact(m, mult, f.clone());
        }
        if open_count(f, st, &lo, &m) == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
    RealRoot { lo, hi, multiplicity: mult, defining: f.clone() }
}

/// All complex roots with multiplicities. Real roots come from exact isolation; the
/// non-real ones from a companion-matrix eigen-solve of each square-free factor,
/// polished by Newton steps and paired with their conjugates.
pub fn complex_roots(p: &UPoly) -> Result<Vec<(Complex64, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (f, m) in p.square_free_decomposition()? {
        let real = isolate(&f, m);
        for r in &real {
            out.push((Complex64::new(r.clone().refined(REFINE_BITS).to_f64(), 0.0), m));
        }
        let n = f.degree().unwrap_or(0);
        let nonreal = n - real.len();
        if nonreal == 0 {
            continue;
        }
        let mut eig = companion_eigenvalues(&f);
        eig.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal));
        for z in eig.into_iter().take(nonreal / 2) {
            let z = polish(&f, Complex64::new(z.re, z.im.abs()));
            out.push((z, m));
            out.push((z.conj(), m));
        }
    }
    Ok(out)
}

fn companion_eigenvalues(f: &UPoly) -> Vec<Complex64> {
    let c = f.monic().to_f64_coeffs();
    let n = c.len() - 1;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i];
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn polish(f: &UPoly, mut z: Complex64) -> Complex64 {
    let df = f.derivative();
    for _ in 0..8 {
        let d = df.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = f.eval_complex(z) / d;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-17 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(2, 5)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-7, 10), &rat(-3, 5)), rat(-2, 3));
        assert_eq!(simplest_between(&rat(1, 2), &rat(5, 2)), int(1));
    }

    #[test]
    fn rational_roots_of_irreducible_looking_factors() {
        // (3x - 2)(7x + 5), never hit by bisection midpoints
        let r = upoly_real_roots(&p(&[-10, 1, 21])).unwrap();
        let exact: Vec<_> = r.iter().map(|z| z.as_rational().cloned()).collect();
        assert_eq!(exact, vec![Some(rat(-5, 7)), Some(rat(2, 3))]);
        let r = upoly_real_roots(&p(&[-2, 0, 1])).unwrap();
        assert!(r.iter().all(|z| z.as_rational().is_none()));
    }

    #[test]
    fn simple_cases() {
        let r = upoly_real_roots(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].as_rational(), Some(&int(-1)));
        assert_eq!(r[1].as_rational(), Some(&int(1)));
        let r = upoly_real_roots(&p(&[0, 0, 0, 1])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert_eq!(r[0].as_rational(), Some(&int(0)));
        assert_eq!(upoly_real_roots(&UPoly::zero()), Err(Error::ZeroPolynomial));
        assert!(upoly_real_roots(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn irrational_roots_bracket_sign_change() {
        let f = p(&[-2, 0, 1]);
        let r = upoly_real_roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        for root in &r {
            assert!(root.as_rational().is_none());
            assert!(sign(&f.eval(root.lo())) * sign(&f.eval(root.hi())) < 0);
            assert!((root.to_f64().abs() - 2f64.sqrt()).abs() < 1e-15);
            assert!(root.width() * Rational::from_integer(BigInt::one() << 64) <= int(2));
        }
    }

    #[test]
    fn exact_zero_and_sign_tests() {
        let r = upoly_real_roots(&p(&[-2, 0, 1])).unwrap();
        let s2 = &r[1];
        assert!(s2.is_root_of(&(&p(&[-2, 0, 1]) * &p(&[5, 1]))));
        assert!(!s2.is_root_of(&p(&[-3, 0, 1])));
        assert_eq!(s2.sign_of(&p(&[-3, 0, 1])), -1);
        assert_eq!(s2.sign_of(&p(&[-1, 0, 1])), 1);
        // x - 1.41421356 is positive at sqrt 2
        assert_eq!(s2.sign_of(&UPoly::linear(-rat(141421356, 100000000), int(1))), 1);
        assert_eq!(s2.sign_of(&p(&[0])), 0);
    }

    #[test]
    fn multiplicities_and_ordering() {
        // (x-1)^2 (x+3) (x^2-2)
        let f = &(&p(&[-1, 1]).pow(2) * &p(&[3, 1])) * &p(&[-2, 0, 1]);
        let r = upoly_real_roots(&f).unwrap();
        let summary: Vec<(f64, usize)> = r.iter().map(|x| (x.to_f64(), x.multiplicity)).collect();
        assert_eq!(summary.len(), 4);
        assert_eq!(summary[0], (-3.0, 1));
        assert!((summary[1].0 + 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(summary[2], (1.0, 2));
        assert!(r.iter().map(|x| x.multiplicity).sum::<usize>() <= f.degree().unwrap());
    }

    #[test]
    fn complex_roots_count_with_multiplicity() {
        // (x^2+1)^2 (x-2) (x^2 - 2x + 5)
        let f = &(&p(&[1, 0, 1]).pow(2) * &p(&[-2, 1])) * &p(&[5, -2, 1]);
        let z = complex_roots(&f).unwrap();
        let total: usize = z.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 7);
        for (root, _) in &z {
            assert!(f.eval_complex(*root).norm() < 1e-9);
        }
        assert!(z.iter().any(|(r, m)| (r - Complex64::new(1.0, 2.0)).norm() < 1e-12 && *m == 1));
        assert!(z.iter().any(|(r, m)| (r - Complex64::new(0.0, -1.0)).norm() < 1e-12 && *m == 2));
    }
}
