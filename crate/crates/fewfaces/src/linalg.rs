//! Exact linear algebra over arbitrary-precision rationals and integers.
//!
//! Everything here is allocation-heavy and meant for desk-scale matrices
//! (dimensions in the single digits to low tens). Floating-point linear
//! algebra lives with its callers; this module is the exact side.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion of a finite float; panics on NaN/inf.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Falls back to a quotient of truncated parts for extreme magnitudes.
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Parses "num/den" or a plain integer literal.
pub fn rat_parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Formats canonically: "n" when the denominator is 1, else "n/d".
pub fn rat_format(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Rank via fraction-aware Gaussian elimination.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].clone();
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &inv;
            for j in c..ncols {
                let sub = &f * &m[r][j];
                m[i][j] -= sub;
            }
        }
        r += 1;
    }
    r
}

/// Determinant of a square rational matrix (Gaussian elimination).
pub fn det(mat: &[Vec<Rat>]) -> Rat {
    let n = mat.len();
    let mut m: Vec<Vec<Rat>> = mat.to_vec();
    let mut result = Rat::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            m.swap(c, piv);
            result = -result;
        }
        result *= m[c][c].clone();
        let inv = m[c][c].clone();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &inv;
            for j in c..n {
                let sub = &f * &m[c][j];
                m[i][j] -= sub;
            }
        }
    }
    result
}

/// Solves a square system `a x = b` exactly. `None` when singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, piv);
        let inv = m[c][c].clone();
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &inv;
            for j in c..=n {
                let sub = &f * &m[c][j];
                m[i][j] -= sub;
            }
        }
    }
    Some(
        m.into_iter()
            .enumerate()
            .map(|(i, row)| &row[n] / &row[i])
            .collect(),
    )
}

/// Inverse of a square rational matrix. `None` when singular.
pub fn inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, piv);
        let inv = m[c][c].clone();
        for j in c..2 * n {
            m[c][j] /= inv.clone();
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..2 * n {
                let sub = &f * &m[c][j];
                m[i][j] -= sub;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Gram matrix `rows · rowsᵀ`.
pub fn gram(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = rows.len();
    let mut g = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = dot(&rows[i], &rows[j]);
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    g
}

/// Smallest nonnegative integer `t` with `t² ≥ x`; `x` must be ≥ 0.
///
/// Since `t²` is an integer, `t² ≥ num/den ⟺ t² ≥ ⌈num/den⌉`.
pub fn ceil_sqrt(x: &Rat) -> BigInt {
    assert!(!x.is_negative());
    if x.is_zero() {
        return BigInt::zero();
    }
    let c: BigInt = (x.numer() + x.denom() - 1_i32).div_floor(x.denom());
    let mut t = c.sqrt();
    if &t * &t < c {
        t += 1;
    }
    t
}

// ---------------------------------------------------------------------------
// Integer matrices (arbitrary precision)
// ---------------------------------------------------------------------------

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn int_det(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = mat.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if piv != c {
            m.swap(c, piv);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let t = &m[i][j] * &m[c][c] - &m[i][c] * &m[c][j];
                m[i][j] = &t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    if sign < 0 {
        -prev
    } else {
        prev
    }
}

/// Rank of an integer matrix (via rational elimination).
pub fn int_rank(rows: &[Vec<BigInt>]) -> usize {
    let rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|e| Rat::from_integer(e.clone())).collect())
        .collect();
    rank(&rows)
}

/// GCD of a slice, nonnegative; 0 for an all-zero slice.
pub fn gcd_all<'a>(vals: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for v in vals {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rmat(m: &[&[i64]]) -> Vec<Vec<Rat>> {
        m.iter().map(|r| r.iter().map(|&v| rat_int(v)).collect()).collect()
    }

    #[test]
    fn rank_of_identity_and_deficient() {
        assert_eq!(rank(&rmat(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&rmat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&rmat(&[&[0, 0]])), 0);
        assert_eq!(rank(&rmat(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
    }

    #[test]
    fn det_and_solve_roundtrip() {
        let a = rmat(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a), rat_int(5));
        let b = vec![rat_int(3), rat_int(5)];
        let x = solve(&a, &b).unwrap();
        // 2x + y = 3, x + 3y = 5 → x = 4/5, y = 7/5
        assert_eq!(x[0], rat_frac(4, 5));
        assert_eq!(x[1], rat_frac(7, 5));
        let singular = rmat(&[&[1, 2], &[2, 4]]);
        assert!(solve(&singular, &b).is_none());
        assert_eq!(det(&singular), rat_int(0));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = rmat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Rat::zero();
                for l in 0..3 {
                    acc += &a[i][l] * &inv[l][j];
                }
                assert_eq!(acc, if i == j { rat_int(1) } else { rat_int(0) });
            }
        }
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(rat_parse("1/3").unwrap(), rat_frac(1, 3));
        assert_eq!(rat_parse("-2/5").unwrap(), rat_frac(-2, 5));
        assert_eq!(rat_parse("7").unwrap(), rat_int(7));
        assert_eq!(rat_parse(" 4/6 ").unwrap(), rat_frac(2, 3));
        assert!(rat_parse("1/0").is_err());
        assert!(rat_parse("abc").is_err());
        assert_eq!(rat_format(&rat_frac(-2, 5)), "-2/5");
        assert_eq!(rat_format(&rat_int(7)), "7");
    }

    #[test]
    fn ceil_sqrt_exact_cases() {
        assert_eq!(ceil_sqrt(&rat_int(0)), BigInt::from(0));
        assert_eq!(ceil_sqrt(&rat_int(1)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&rat_int(2)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&rat_int(4)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&rat_frac(1, 4)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&rat_frac(1, 5)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&rat_int(99)), BigInt::from(10));
        assert_eq!(ceil_sqrt(&rat_int(100)), BigInt::from(10));
        assert_eq!(ceil_sqrt(&rat_int(101)), BigInt::from(11));
    }

    #[test]
    fn bareiss_det_matches_rational_det() {
        let cases: &[&[&[i64]]] = &[
            &[&[1, 1, 1], &[1, 0, 0], &[0, 1, 0]],
            &[&[3, 1], &[1, 3]],
            &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]],
            &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]],
        ];
        for m in cases {
            let im: Vec<Vec<BigInt>> = m
                .iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            let rd = det(&rmat(m));
            assert!(rd.denom().is_one());
            assert_eq!(int_det(&im), rd.numer().clone());
        }
    }
}
