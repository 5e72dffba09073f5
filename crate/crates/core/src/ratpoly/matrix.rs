use super::{MPoly, Ring};
use crate::error::{Error, Result};

/// Row-major dense matrix.
pub type Matrix<R> = Vec<Vec<R>>;

fn check_square<R>(m: &[Vec<R>]) -> Result<usize> {
    let n = m.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NonSquare { rows: n, row, len: r.len() });
        }
    }
    Ok(n)
}

/// Fraction-free Gaussian elimination. Falls back to cofactor expansion if an
/// exact division ever fails, which can only happen for rings without exact
/// Bareiss quotients.
pub fn det_bareiss<R: Ring>(m: &[Vec<R>]) -> Result<R> {
    let n = check_square(m)?;
    let mut a: Matrix<R> = m.to_vec();
    let mut sign_flip = false;
    let mut prev: Option<R> = None;
    for k in 0..n - 1 {
        if a[k][k].vanishes() {
            match (k + 1..n).find(|&i| !a[i][k].vanishes()) {
                Some(i) => {
                    a.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return Ok(a[0][0].zero_like()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = match &prev {
                    None => num,
                    Some(p) => match num.div_exact(p) {
                        Some(q) => q,
                        None => return det_cofactor(m),
                    },
                };
            }
        }
        prev = Some(a[k][k].clone());
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_flip { -d } else { d })
}

/// Laplace expansion along the first row. Exponential, meant for n <= 5 and as an oracle.
pub fn det_cofactor<R: Ring>(m: &[Vec<R>]) -> Result<R> {
    let n = check_square(m)?;
    let cols: Vec<usize> = (0..n).collect();
    Ok(cofactor_rec(m, 0, &cols))
}

fn cofactor_rec<R: Ring>(m: &[Vec<R>], row: usize, cols: &[usize]) -> R {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc: Option<R> = None;
    for (idx, &c) in cols.iter().enumerate() {
        if m[row][c].vanishes() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let t = m[row][c].clone() * cofactor_rec(m, row + 1, &rest);
        let t = if idx % 2 == 1 { -t } else { t };
        acc = Some(match acc {
            Some(a) => a + t,
            None => t,
        });
    }
    acc.unwrap_or_else(|| m[row][cols[0]].zero_like())
}

/// Adjugate (transposed cofactor matrix), so that `adj(M) * M = det(M) * I`.
pub fn adjugate<R: Ring>(m: &[Vec<R>]) -> Result<Matrix<R>> {
    let n = check_square(m)?;
    if n == 1 {
        return Ok(vec![vec![m[0][0].one_like()]]);
    }
    let mut out = vec![Vec::with_capacity(n); n];
    for (j, row_out) in out.iter_mut().enumerate() {
        for i in 0..n {
            // entry (j, i) of the adjugate is the (i, j) cofactor
            let minor: Matrix<R> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = det_bareiss(&minor)?;
            row_out.push(if (i + j) % 2 == 1 { -d } else { d });
        }
    }
    Ok(out)
}

/// Determinant of a square matrix of multivariate polynomials.
pub fn poly_det<C: Ring>(m: &[Vec<MPoly<C>>]) -> Result<MPoly<C>> {
    let n = check_square(m)?;
    let arity = m[0][0].arity();
    for row in m {
        for p in row {
            if p.arity() != arity {
                return Err(Error::ArityMismatch(arity, p.arity()));
            }
        }
    }
    if m.iter().flatten().all(MPoly::is_zero) {
        return Ok(MPoly::zero(arity));
    }
    if n <= 4 {
        det_cofactor(m)
    } else {
        det_bareiss(m)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat, Rational, UPoly};
    use super::*;
    use num_traits::One;

    fn r(v: &[&[i64]]) -> Matrix<Rational> {
        v.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn small_rational_dets() {
        let m = r(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        assert_eq!(det_bareiss(&m).unwrap(), int(-54));
        assert_eq!(det_cofactor(&m).unwrap(), int(-54));
        let z = r(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_bareiss(&z).unwrap(), int(-1));
        let sing = r(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(det_bareiss(&sing).unwrap(), int(0));
    }

    #[test]
    fn errors() {
        let bad = vec![vec![int(1), int(2)], vec![int(3)]];
        assert!(matches!(det_bareiss(&bad), Err(Error::NonSquare { .. })));
        let empty: Matrix<Rational> = vec![];
        assert_eq!(det_cofactor(&empty), Err(Error::EmptyMatrix));
    }

    #[test]
    fn rotation_block_over_mpoly() {
        let q0 = MPoly::var(4, 0, Rational::one());
        let q1 = MPoly::var(4, 1, Rational::one());
        let m = vec![vec![q0.clone(), q1.clone()], vec![-&q1, q0.clone()]];
        let d = poly_det(&m).unwrap();
        assert_eq!(d, &(&q0 * &q0) + &(&q1 * &q1));
        assert_eq!(det_bareiss(&m).unwrap(), d);
    }

    #[test]
    fn equal_rows_vanish() {
        let q2 = MPoly::var(4, 2, Rational::one());
        let row = vec![q2.clone(), MPoly::constant(4, rat(3, 2)), &q2 * &q2];
        let other = vec![MPoly::constant(4, int(1)), q2.clone(), MPoly::zero(4)];
        let m = vec![row.clone(), other, row];
        assert!(poly_det(&m).unwrap().is_zero());
        assert!(det_bareiss(&m).unwrap().is_zero());
    }

    #[test]
    fn upoly_entries_and_adjugate() {
        let x = UPoly::x();
        let m = vec![
            vec![x.clone(), UPoly::from_ints(&[1, 1]), UPoly::one()],
            vec![UPoly::from_ints(&[2]), x.clone(), UPoly::from_ints(&[0, 0, 1])],
            vec![UPoly::from_ints(&[-1, 3]), UPoly::zero(), x.clone()],
        ];
        let d = det_bareiss(&m).unwrap();
        assert_eq!(d, det_cofactor(&m).unwrap());
        let adj = adjugate(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = UPoly::zero();
                for k in 0..3 {
                    acc = &acc + &(&adj[i][k] * &m[k][j]);
                }
                assert_eq!(acc, if i == j { d.clone() } else { UPoly::zero() });
            }
        }
    }
}
