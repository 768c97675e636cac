//! Small dense linear algebra over a [`Field`].

use crate::scalar::Field;

pub type Matrix<F> = Vec<Vec<F>>;

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

pub fn matmul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(F::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

/// Conjugate transpose.
pub fn adjoint<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| (0..rows).map(|i| a[i][j].conj()).collect()).collect()
}

/// Gauss–Jordan inverse with partial pivoting on magnitude. `None` when a
/// pivot is exactly zero.
pub fn invert<F: Field>(a: &Matrix<F>) -> Option<Matrix<F>> {
    let n = a.len();
    let mut m: Matrix<F> = a.clone();
    let mut inv = identity::<F>(n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].magnitude().total_cmp(&m[j][col].magnitude()))?;
        if m[pivot][col].is_zero() {
            return None;
        }
        if F::EXACT {
            // any nonzero pivot is fine; prefer the first to keep numbers small
            let first = (col..n).find(|&i| !m[i][col].is_zero())?;
            m.swap(col, first);
            inv.swap(col, first);
        } else {
            m.swap(col, pivot);
            inv.swap(col, pivot);
        }
        let p_inv = F::one() / m[col][col].clone();
        for j in 0..n {
            m[col][j] = m[col][j].clone() * p_inv.clone();
            inv[col][j] = inv[col][j].clone() * p_inv.clone();
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..n {
                m[i][j] = m[i][j].clone() - f.clone() * m[col][j].clone();
                inv[i][j] = inv[i][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}

/// Induced 1-norm (max column sum of magnitudes).
pub fn norm1<F: Field>(a: &Matrix<F>) -> f64 {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].magnitude()).sum::<f64>()).fold(0.0, f64::max)
}

/// `‖A‖₁ ‖A⁻¹‖₁`.
pub fn condition_number<F: Field>(a: &Matrix<F>, a_inv: &Matrix<F>) -> f64 {
    norm1(a) * norm1(a_inv)
}
