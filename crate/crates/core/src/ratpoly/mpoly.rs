use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::{Rational, Ring};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with coefficients in `C`.
///
/// Terms live in an exponent-keyed map with no zero coefficients. Exponent vectors
/// always have length `arity`.
#[derive(Clone, PartialEq)]
pub struct MPoly<C: Ring = Rational> {
    arity: usize,
    terms: BTreeMap<Vec<u16>, C>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked polynomial arithmetic.
pub fn mpoly_arith<C: Ring>(a: &MPoly<C>, b: &MPoly<C>, op: ArithOp) -> Result<MPoly<C>> {
    if a.arity != b.arity {
        return Err(Error::ArityMismatch(a.arity, b.arity));
    }
    Ok(match op {
        ArithOp::Add => a.add_impl(b, false),
        ArithOp::Sub => a.add_impl(b, true),
        ArithOp::Mul => a.mul_impl(b),
    })
}

/// Checked formal partial derivative.
pub fn mpoly_partial<C: Ring>(p: &MPoly<C>, var: usize) -> Result<MPoly<C>> {
    if var >= p.arity {
        return Err(Error::VarOutOfRange { var, arity: p.arity });
    }
    Ok(p.partial(var))
}

impl<C: Ring> MPoly<C> {
    pub fn zero(arity: usize) -> Self {
        MPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: C) -> Self {
        Self::term(arity, c, vec![0; arity])
    }

    /// `c * prod x_k^exps[k]`. Panics if `exps.len() != arity`.
    pub fn term(arity: usize, c: C, exps: Vec<u16>) -> Self {
        assert_eq!(exps.len(), arity, "exponent tuple length");
        let mut terms = BTreeMap::new();
        if !c.vanishes() {
            terms.insert(exps, c);
        }
        MPoly { arity, terms }
    }

    /// The variable `x_k` with unit coefficient taken from `unit`.
    pub fn var(arity: usize, k: usize, unit: C) -> Self {
        assert!(k < arity);
        let mut e = vec![0; arity];
        e[k] = 1;
        Self::term(arity, unit, e)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Coefficient of the monomial with exponents `exps` (zero if absent).
    pub fn coeff(&self, exps: &[u16], zero: &C) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(|| zero.zero_like())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        match degs.next() {
            Some(d) => degs.all(|x| x == d),
            None => true,
        }
    }

    /// Formal partial derivative. Panics on an out-of-range variable; see [`mpoly_partial`].
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.arity, "variable out of range");
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            let nc = c.clone() * c.embed(&Rational::from_integer(k.into()));
            if !nc.vanishes() {
                out.insert(ne, nc);
            }
        }
        MPoly { arity: self.arity, terms: out }
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.arity).map(|k| self.partial(k)).collect()
    }

    /// Evaluates at a point with coordinates in the coefficient ring.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch(self.arity, point.len()));
        }
        // the zero of C is taken from the point, so arity 0 has nothing to work with
        let first = point.first().ok_or(Error::ArityMismatch(0, 0))?;
        let mut acc = first.zero_like();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient, dropping ones that vanish.
    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c)| !c.vanishes())
            .collect();
        MPoly { arity: self.arity, terms }
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    fn add_impl(&self, o: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            match terms.remove(e) {
                Some(old) => {
                    let s = old + c;
                    if !s.vanishes() {
                        terms.insert(e.clone(), s);
                    }
                }
                None => {
                    terms.insert(e.clone(), c);
                }
            }
        }
        MPoly { arity: self.arity, terms }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u16>, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca.clone() * cb.clone();
                match terms.remove(&e) {
                    Some(old) => {
                        let s = old + c;
                        if !s.vanishes() {
                            terms.insert(e, s);
                        }
                    }
                    None => {
                        if !c.vanishes() {
                            terms.insert(e, c);
                        }
                    }
                }
            }
        }
        MPoly { arity: self.arity, terms }
    }

    /// Leading term in lexicographic order.
    fn lead(&self) -> Option<(&Vec<u16>, &C)> {
        self.terms.iter().next_back()
    }

    /// Exact multivariate division by leading terms; `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if self.arity != d.arity {
            return None;
        }
        let (de, dc) = d.lead()?;
        let mut r = self.clone();
        let mut q = Self::zero(self.arity);
        while let Some((re, rc)) = r.lead() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let c = rc.div_exact(dc)?;
            let e: Vec<u16> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let t = Self::term(self.arity, c, e);
            r = r.add_impl(&t.mul_impl(d), true);
            q = q.add_impl(&t, false);
        }
        Some(q)
    }
}

impl MPoly<Rational> {
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.arity);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(super::to_f64(c), |acc, (&k, x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    pub fn from_int_terms(arity: usize, terms: &[(i64, &[u16])]) -> Self {
        terms.iter().fold(Self::zero(arity), |acc, (c, e)| {
            &acc + &Self::term(arity, super::int(*c), e.to_vec())
        })
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }
}

fn check(a: usize, b: usize) {
    assert_eq!(a, b, "MPoly arity mismatch; use mpoly_arith for a checked variant");
}

impl<'a, C: Ring> Add<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, o: &MPoly<C>) -> MPoly<C> {
        check(self.arity, o.arity);
        self.add_impl(o, false)
    }
}

impl<'a, C: Ring> Sub<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, o: &MPoly<C>) -> MPoly<C> {
        check(self.arity, o.arity);
        self.add_impl(o, true)
    }
}

impl<'a, C: Ring> Mul<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, o: &MPoly<C>) -> MPoly<C> {
        check(self.arity, o.arity);
        self.mul_impl(o)
    }
}

impl<C: Ring> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Ring> Add for MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<C: Ring> Sub for MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<C: Ring> Mul for MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<C: Ring> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<C: Ring> Ring for MPoly<C> {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Self::zero(self.arity)
    }
    fn one_like(&self) -> Self {
        let unit = match self.terms.values().next() {
            Some(c) => c.one_like(),
            None => panic!("one_like needs a nonzero template polynomial"),
        };
        Self::constant(self.arity, unit)
    }
    fn embed(&self, r: &Rational) -> Self {
        let c = self.terms.values().next().expect("nonzero template").embed(r);
        Self::constant(self.arity, c)
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        MPoly::div_exact(self, rhs)
    }
}

impl<C: Ring + fmt::Debug> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*q{k}")?,
                    _ => write!(f, "*q{k}^{x}")?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Ring> MPoly<C> {
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    fn q(k: usize) -> MPoly {
        MPoly::var(4, k, Rational::one())
    }

    fn c(v: i64) -> MPoly {
        MPoly::constant(4, int(v))
    }

    #[test]
    fn normalising_condition_assembly() {
        let c0 = &(&(&q(0) * &q(0)) + &(&q(1) * &q(1))) - &c(1);
        let expected =
            MPoly::from_int_terms(4, &[(1, &[2, 0, 0, 0]), (1, &[0, 2, 0, 0]), (-1, &[0, 0, 0, 0])]);
        assert_eq!(c0, expected);
        assert_eq!(c0.total_degree(), Some(2));
    }

    #[test]
    fn absorbing_zero_and_difference_of_squares() {
        let p = &q(0) + &q(2);
        assert!((&p * &MPoly::zero(4)).is_zero());
        let lhs = &(&q(0) + &q(1)) * &(&q(0) - &q(1));
        let rhs = &(&q(0) * &q(0)) - &(&q(1) * &q(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn checked_arith_and_partial_errors() {
        let a = MPoly::<Rational>::var(3, 0, Rational::one());
        assert_eq!(mpoly_arith(&a, &q(0), ArithOp::Add), Err(Error::ArityMismatch(3, 4)));
        assert_eq!(mpoly_partial(&q(0), 4), Err(Error::VarOutOfRange { var: 4, arity: 4 }));
        assert_eq!(mpoly_arith(&q(0), &q(1), ArithOp::Mul).unwrap(), &q(0) * &q(1));
    }

    #[test]
    fn partials() {
        let c0 = &(&(&q(0) * &q(0)) + &(&q(1) * &q(1))) - &c(1);
        assert_eq!(c0.partial(0), &c(2) * &q(0));
        assert!(c(7).partial(3).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &(&q(0) + &q(1)) * &(&q(2) - &c(3));
        assert_eq!(a.div_exact(&(&q(2) - &c(3))).unwrap(), &q(0) + &q(1));
        assert!(a.div_exact(&(&q(2) + &c(3))).is_none());
        assert!(a.div_exact(&MPoly::zero(4)).is_none());
    }

    #[test]
    fn eval_point() {
        let p = &(&q(0) * &q(3)) - &MPoly::constant(4, rat(1, 2));
        let v = [int(2), int(0), int(0), rat(3, 4)];
        assert_eq!(p.eval(&v).unwrap(), int(1));
        assert!(p.eval(&v[..3]).is_err());
        assert!((p.eval_f64(&[2.0, 0.0, 0.0, 0.75]) - 1.0).abs() < 1e-15);
    }
}
