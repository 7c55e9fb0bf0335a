//! Fraction-free integer determinants (Bareiss elimination).
//!
//! Desk-scale matrices go through an i128 fast path; anything that would
//! overflow falls back to big integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) fn det_i64(m: &[Vec<i64>]) -> BigInt {
    let small: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    match det_i128(small) {
        Some(d) => BigInt::from(d),
        None => det_bigint(
            m.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        ),
    }
}

fn det_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign.checked_mul(m[n - 1][n - 1])
}

pub(crate) fn det_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Generalized binomial coefficient over the integers:
/// falling factorial over j! for j > 0, one at j = 0, zero for j < 0.
pub fn binomial_int(k: i64, j: i64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    if j == 0 {
        return BigInt::one();
    }
    let mut num = BigInt::one();
    for i in 0..j {
        num *= BigInt::from(k - i);
    }
    let mut den = BigInt::one();
    for i in 1..=j {
        den *= BigInt::from(i);
    }
    // product of j consecutive integers is divisible by j!
    debug_assert!((&num % &den).is_zero());
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(det_i64(&[]), BigInt::from(1));
        assert_eq!(det_i64(&[vec![7]]), BigInt::from(7));
        assert_eq!(det_i64(&[vec![1, 2], vec![3, 4]]), BigInt::from(-2));
        assert_eq!(det_i64(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(det_i64(&[vec![1, 1], vec![1, 1]]), BigInt::from(0));
        assert_eq!(
            det_i64(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]),
            BigInt::from(30)
        );
        // cofactor cross-check on a dense 4x4
        let m = vec![
            vec![3, 1, -2, 0],
            vec![1, 4, 1, 1],
            vec![-2, 1, 5, 2],
            vec![0, 1, 2, 6],
        ];
        assert_eq!(det_i64(&m), BigInt::from(157));
        assert_eq!(
            det_bigint(
                m.iter()
                    .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                    .collect()
            ),
            BigInt::from(157)
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_int(-1, 1), BigInt::from(-1));
        assert_eq!(binomial_int(5, 0), BigInt::from(1));
        assert_eq!(binomial_int(5, -2), BigInt::from(0));
        assert_eq!(binomial_int(7, 3), BigInt::from(35));
        assert_eq!(binomial_int(-2, 2), BigInt::from(3));
    }
}
