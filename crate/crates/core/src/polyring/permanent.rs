use super::matrix::Matrix;
use super::scalar::Coeff;
use crate::error::{Error, Result};

/// Permanent of a rectangular `r x c` matrix with `r >= c`: the sum over all
/// injective column-to-row assignments of the entry products.
///
/// Expands over `c`-row subsets; each square block uses direct expansion for
/// `c <= 2` and Ryser's inclusion-exclusion otherwise.
pub fn rectangular_permanent<C: Coeff>(a: &Matrix<C>) -> Result<C> {
    let (r, c) = (a.rows(), a.cols());
    if r < c {
        return Err(Error::domain(format!("permanent needs rows >= cols, got {r}x{c}")));
    }
    if c == 0 {
        return Ok(C::one());
    }
    let mut total = C::zero();
    let mut subset: Vec<usize> = (0..c).collect();
    loop {
        total = total + square_permanent(a, &subset);
        if !next_combination(&mut subset, r) {
            break;
        }
    }
    Ok(total)
}

fn square_permanent<C: Coeff>(a: &Matrix<C>, rows: &[usize]) -> C {
    let n = rows.len();
    let e = |i: usize, j: usize| a.get(rows[i], j).clone();
    match n {
        1 => e(0, 0),
        2 => e(0, 0) * e(1, 1) + e(0, 1) * e(1, 0),
        _ => ryser(a, rows),
    }
}

/// `perm(B) = (-1)^n sum_{S subset cols} (-1)^{|S|} prod_i sum_{j in S} b_ij`,
/// walking column subsets in Gray-code order so each step updates the row
/// sums by one column.
fn ryser<C: Coeff>(a: &Matrix<C>, rows: &[usize]) -> C {
    let n = rows.len();
    let mut row_sums = vec![C::zero(); n];
    let mut in_set = vec![false; n];
    let mut total = C::zero();
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        in_set[j] = !in_set[j];
        for (i, s) in row_sums.iter_mut().enumerate() {
            let v = a.get(rows[i], j).clone();
            *s = if in_set[j] { s.clone() + v } else { s.clone() - v };
        }
        let prod = row_sums.iter().fold(C::one(), |acc, s| acc * s.clone());
        let size = (k ^ (k >> 1)).count_ones() as usize;
        if (n - size).is_multiple_of(2) {
            total = total + prod;
        } else {
            total = total - prod;
        }
    }
    total
}

/// Advances `idx` to the next `k`-combination of `0..n` in lex order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Rational;

    fn brute(a: &Matrix<Rational>) -> Rational {
        // Sum over injective maps cols -> rows.
        fn rec(a: &Matrix<Rational>, col: usize, used: &mut Vec<bool>) -> Rational {
            if col == a.cols() {
                return Rational::from_i64(1);
            }
            let mut s = Rational::from_i64(0);
            for r in 0..a.rows() {
                if !used[r] {
                    used[r] = true;
                    s += a.get(r, col).clone() * rec(a, col + 1, used);
                    used[r] = false;
                }
            }
            s
        }
        rec(a, 0, &mut vec![false; a.rows()])
    }

    #[test]
    fn small_cases() {
        let a = Matrix::<Rational>::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(rectangular_permanent(&a).unwrap(), Rational::from_i64(10));
        let col = Matrix::<Rational>::from_i64_rows(&[&[5], &[7]]).unwrap();
        assert_eq!(rectangular_permanent(&col).unwrap(), Rational::from_i64(12));
        let b = Matrix::<Rational>::from_i64_rows(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(rectangular_permanent(&b).unwrap(), brute(&b));
        assert_eq!(rectangular_permanent(&b).unwrap(), Rational::from_i64(3));
    }

    #[test]
    fn ryser_matches_brute_force_on_square() {
        let a =
            Matrix::<Rational>::from_i64_rows(&[&[1, 2, 3, 0], &[-1, 4, 2, 2], &[0, 1, -3, 5], &[2, 2, 1, 1]]).unwrap();
        assert_eq!(rectangular_permanent(&a).unwrap(), brute(&a));
    }

    #[test]
    fn wide_matrix_rejected() {
        let a = Matrix::<Rational>::from_i64_rows(&[&[1, 2]]).unwrap();
        assert!(matches!(rectangular_permanent(&a), Err(Error::Domain(_))));
    }
}
