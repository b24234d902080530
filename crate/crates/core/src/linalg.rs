//! Fraction-free Gaussian elimination on integer matrices: exact
//! determinants and exact rational solutions of square systems.

use crate::rational::{rat_int, Int, Rational};
use num_traits::{One, Zero};

/// Determinant of a square integer matrix.
pub fn bareiss_det(a: &[Vec<Int>]) -> Int {
    let b = vec![Int::zero(); a.len()];
    bareiss_solve(a, &b).0
}

/// Determinant of `a` and, when it is nonzero, the unique exact solution of
/// a x = b. Division-free growth control: every intermediate entry is itself
/// a minor of the input, so entries never explode past determinant size.
pub fn bareiss_solve(a: &[Vec<Int>], b: &[Int]) -> (Int, Option<Vec<Rational>>) {
    let n = a.len();
    assert_eq!(b.len(), n, "dimension mismatch");
    if n == 0 {
        return (Int::one(), Some(Vec::new()));
    }
    // augmented matrix [a | b]
    let mut m: Vec<Vec<Int>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "matrix is not square");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut sign = 1i8;
    let mut prev = Int::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return (Int::zero(), None),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign = -sign;
        }
        for r in col + 1..n {
            for c in col + 1..=n {
                // exact by the Desnanot-Jacobi identity
                let num = &m[col][col] * &m[r][c] - &m[r][col] * &m[col][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = Int::zero();
        }
        prev = m[col][col].clone();
    }

    let det = if sign < 0 { -prev } else { prev };

    // each surviving row is still a valid equation, so ordinary rational
    // back substitution applies
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rat_int(m[i][n].clone());
        for j in i + 1..n {
            acc -= rat_int(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / rat_int(m[i][i].clone());
    }
    (det, Some(x))
}
