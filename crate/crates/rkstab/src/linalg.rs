//! Small dense `f64` matrices.
//!
//! Just enough floating-point linear algebra for the verification
//! harness: products, Cholesky, triangular solves, and a cyclic Jacobi
//! eigensolver for symmetric matrices. Dimensions here are tiny (a few
//! dozen at most), so everything is straightforward O(n³) code with no
//! blocking or pivoting heroics.

use std::ops::{Index, IndexMut};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from a per-entry closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row slices; all rows must share one length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    /// Entry-wise scaling.
    pub fn scale(&self, s: f64) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| s * self[(i, j)])
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Cholesky factorization of a symmetric positive definite matrix:
/// returns lower-triangular `L` with `A = L·Lᵀ`, or `None` when a pivot
/// fails (the matrix is not numerically SPD).
pub fn cholesky(a: &Mat) -> Option<Mat> {
    assert_eq!(a.rows(), a.cols(), "Cholesky needs a square matrix");
    let n = a.rows();
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[(i, j)];
            for k in 0..j {
                sum -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[(i, i)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Some(l)
}

/// Solve `L·X = B` column by column for lower-triangular `L`.
pub fn solve_lower_triangular(l: &Mat, b: &Mat) -> Mat {
    let n = l.rows();
    assert_eq!(l.cols(), n);
    assert_eq!(b.rows(), n, "dimension mismatch");
    let mut x = b.clone();
    for col in 0..b.cols() {
        for i in 0..n {
            let mut sum = x[(i, col)];
            for k in 0..i {
                sum -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = sum / l[(i, i)];
        }
    }
    x
}

/// Solve `U·X = B` column by column for upper-triangular `U`.
pub fn solve_upper_triangular(u: &Mat, b: &Mat) -> Mat {
    let n = u.rows();
    assert_eq!(u.cols(), n);
    assert_eq!(b.rows(), n, "dimension mismatch");
    let mut x = b.clone();
    for col in 0..b.cols() {
        for i in (0..n).rev() {
            let mut sum = x[(i, col)];
            for k in (i + 1)..n {
                sum -= u[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = sum / u[(i, i)];
        }
    }
    x
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted in
/// descending order.
///
/// Sweeps continue until the off-diagonal Frobenius mass drops below
/// `1e-14` of the total, which delivers near machine-precision spectra for
/// the small dense matrices used here. Jacobi is preferred over faster
/// tridiagonalization-based solvers because its rotations are backward
/// stable entry by entry — tiny eigenvalues of graded matrices (the
/// Hilbert-like blocks this crate produces) come out with high *relative*
/// accuracy.
pub fn jacobi_eigenvalues(a: &Mat) -> Vec<f64> {
    assert_eq!(a.rows(), a.cols(), "eigenvalues need a square matrix");
    let n = a.rows();
    if n == 0 {
        return Vec::new();
    }
    let mut m = a.clone();
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[(i, j)] * m[(i, j)];
                }
            }
        }
        let total = m.frobenius();
        if off.sqrt() <= 1e-14 * total || off == 0.0 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle choice that zeroes (p, q) and keeps
                // |t| ≤ 1 for stability.
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                m[(p, p)] = app - t * apq;
                m[(q, q)] = aqq + t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(p, k)] = m[(k, p)];
                    m[(k, q)] = s * akp + c * akq;
                    m[(q, k)] = m[(k, q)];
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).expect("symmetric spectra are NaN-free"));
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, Mat::from_rows(&[vec![2.0, 1.0], vec![4.0, 3.0]]));
        assert_eq!(a.transpose()[(0, 1)], 3.0);
        assert_eq!(a.mat_vec(&[1.0, 1.0]), vec![3.0, 7.0]);
    }

    #[test]
    fn cholesky_roundtrip() {
        let a = Mat::from_rows(&[
            vec![4.0, 2.0, 0.4],
            vec![2.0, 5.0, 1.0],
            vec![0.4, 1.0, 3.0],
        ]);
        let l = cholesky(&a).expect("SPD");
        let back = l.mul(&l.transpose());
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-14);
            }
        }
        // Indefinite input must be rejected.
        let bad = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(cholesky(&bad).is_none());
    }

    #[test]
    fn lower_solve() {
        let l = Mat::from_rows(&[vec![2.0, 0.0], vec![1.0, 3.0]]);
        let b = Mat::from_rows(&[vec![4.0], vec![11.0]]);
        let x = solve_lower_triangular(&l, &b);
        assert!((x[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn upper_solve() {
        // U·x = b with U = [[2,1],[0,4]], b = (7,12)ᵀ → x = (2,3)ᵀ.
        let u = Mat::from_rows(&[vec![2.0, 1.0], vec![0.0, 4.0]]);
        let b = Mat::from_rows(&[vec![7.0], vec![12.0]]);
        let x = solve_upper_triangular(&u, &b);
        assert!((x[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_diagonal_and_2x2() {
        let d = Mat::from_rows(&[vec![-1.0, 0.0], vec![0.0, -2.0]]);
        assert_eq!(jacobi_eigenvalues(&d), vec![-1.0, -2.0]);

        // [[2,1],[1,2]] has eigenvalues 3 and 1.
        let a = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let e = jacobi_eigenvalues(&a);
        assert!((e[0] - 3.0).abs() < 1e-14);
        assert!((e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_graded_matrix_relative_accuracy() {
        // Hilbert matrix of order 4: condition number ~1.6e4 with a
        // smallest eigenvalue near 9.67e-5; Jacobi should recover every
        // eigenvalue to near-machine relative accuracy.
        let h = Mat::from_fn(4, 4, |i, j| 1.0 / ((i + j + 1) as f64));
        let e = jacobi_eigenvalues(&h);
        let expected = [
            1.5002142800592428,
            0.16914122022145003,
            0.006738273605760748,
            9.670230402258689e-5,
        ];
        for (got, want) in e.iter().zip(expected) {
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "got {got}, want {want}"
            );
        }
    }
}
