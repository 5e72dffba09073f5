use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{to_f64, Rational, Ring};
use crate::error::{Error, Result};

/// Univariate polynomial over the rationals, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| super::int(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `a + b x`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                UPoly { coeffs: self.coeffs.iter().map(|c| c * &inv).collect() }
            }
            None => Self::zero(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `x -> other` (composition `self(other(x))`).
    pub fn compose(&self, other: &UPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn div_rem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dl = d.lead().ok_or(Error::DivisionByZero)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, d: &UPoly) -> Result<UPoly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient, `None` if `d` is zero or leaves a remainder.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        match self.div_rem(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, p: &UPoly) -> bool {
        p.div_exact(self).is_some()
    }

    /// Monic gcd. Errors only when both inputs are zero.
    pub fn gcd(a: &UPoly, b: &UPoly) -> Result<UPoly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let r = x.rem(&y)?.monic();
            x = y;
            y = r;
        }
        Ok(x)
    }

    /// Gcd of a list, skipping zero entries; zero if all are zero.
    pub fn gcd_all<'a>(ps: impl IntoIterator<Item = &'a UPoly>) -> UPoly {
        let mut g = UPoly::zero();
        for p in ps {
            if p.is_zero() {
                continue;
            }
            g = if g.is_zero() { p.monic() } else { Self::gcd(&g, p).expect("nonzero") };
            if g.is_constant() {
                break;
            }
        }
        g
    }

    /// Yun's square-free decomposition: monic pairwise coprime `(factor, multiplicity)`
    /// with `self = lead * prod factor^multiplicity`.
    pub fn square_free_decomposition(&self) -> Result<Vec<(UPoly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic();
        let df = f.derivative();
        let mut out = Vec::new();
        if df.is_zero() {
            return Ok(out);
        }
        let a0 = Self::gcd(&f, &df)?;
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let c = df.div_exact(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = Self::gcd(&b, &d)?;
            let nb = b.div_exact(&a).expect("gcd divides");
            let nc = d.div_exact(&a).expect("gcd divides");
            d = &nc - &nb.derivative();
            if !a.is_constant() {
                out.push((a, i));
            }
            b = nb;
            i += 1;
        }
        Ok(out)
    }

    pub fn square_free_part(&self) -> Result<UPoly> {
        Ok(self
            .square_free_decomposition()?
            .into_iter()
            .fold(Self::one(), |acc, (f, _)| &acc * &f))
    }

    /// Largest `k` with `f^k | self`. `f` must be nonconstant and `self` nonzero.
    pub fn multiplicity_of(&self, f: &UPoly) -> usize {
        assert!(!f.is_constant() && !self.is_zero());
        let mut p = self.clone();
        let mut k = 0;
        while let Some(q) = p.div_exact(f) {
            p = q;
            k += 1;
        }
        k
    }

    /// Strips every factor shared with `f`, as often as it divides.
    pub fn remove_factor(&self, f: &UPoly) -> UPoly {
        if f.is_constant() || self.is_zero() {
            return self.clone();
        }
        let mut p = self.clone();
        loop {
            let g = Self::gcd(&p, f).expect("p nonzero");
            if g.is_constant() {
                return p;
            }
            p = p.div_exact(&g).expect("gcd divides");
        }
    }

    /// Order of vanishing at `x = 0`.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Cauchy bound: every complex root has modulus strictly below it.
    pub fn root_bound(&self) -> Rational {
        let l = self.lead().expect("nonzero").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &l)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let cs = super::format_rational(&a);
            match k {
                0 => s.push_str(&cs),
                _ => {
                    if !a.is_one() {
                        s.push_str(&cs);
                        s.push('*');
                    }
                    s.push_str(var);
                    if k > 1 {
                        s.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        s
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({})", self.fmt_var("x"))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(UPoly);

impl Ring for UPoly {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        UPoly::zero()
    }
    fn one_like(&self) -> Self {
        UPoly::one()
    }
    fn embed(&self, r: &Rational) -> Self {
        UPoly::constant(r.clone())
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        UPoly::div_exact(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn trimmed_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[0]).is_zero());
    }

    #[test]
    fn division_identity() {
        let a = p(&[5, -3, 0, 2, 7]);
        let d = p(&[1, 0, 3]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap() < 2);
        assert!(a.div_rem(&UPoly::zero()).is_err());
    }

    #[test]
    fn gcd_cases() {
        assert_eq!(UPoly::gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        let q = p(&[4, 0, 2]);
        assert_eq!(UPoly::gcd(&q, &UPoly::zero()).unwrap(), q.monic());
        assert!(UPoly::gcd(&UPoly::zero(), &UPoly::zero()).is_err());
        assert_eq!(UPoly::gcd(&p(&[1, 1]), &p(&[2, 1])).unwrap(), UPoly::one());
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)^2 (x^2+1)
        let a = p(&[-1, 1]).pow(3);
        let b = p(&[2, 1]).pow(2);
        let c = p(&[1, 0, 1]);
        let f = (&(&a * &b) * &c).scale(&int(5));
        let sf = f.square_free_decomposition().unwrap();
        assert_eq!(sf, vec![(c.clone(), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]);
        let back = sf.iter().fold(UPoly::one(), |acc, (g, m)| &acc * &g.pow(*m as u32));
        assert_eq!(back, f.monic());
        assert_eq!(f.multiplicity_of(&p(&[-1, 1])), 3);
    }

    #[test]
    fn evaluation_and_derivative() {
        let f = p(&[1, -3, 0, 2]);
        assert_eq!(f.eval(&rat(1, 2)), rat(-1, 4));
        assert_eq!(f.derivative(), p(&[-3, 0, 6]));
        assert_eq!(p(&[0, 1]).compose(&p(&[1, 1])), p(&[1, 1]));
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
    }

    #[test]
    fn remove_factor_strips_powers() {
        let f = &p(&[1, 0, 1]).pow(3) * &p(&[3, 7]);
        assert_eq!(f.remove_factor(&p(&[1, 0, 1])), p(&[3, 7]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(UPoly::new(vec![rat(1, 2), int(-3)]).fmt_var("t"), "-3*t + 1/2");
    }
}
