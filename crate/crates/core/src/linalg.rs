//! Fixed-size dense linear algebra for chart dimensions 2 to 4.

use num_traits::Float;

pub type Vector<const N: usize> = [f64; N];
pub type Matrix<const N: usize> = [[f64; N]; N];

pub fn zeros<const N: usize>() -> Vector<N> {
    [0.0; N]
}

pub fn identity<const N: usize>() -> Matrix<N> {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn basis<const N: usize>(i: usize) -> Vector<N> {
    let mut e = [0.0; N];
    e[i] = 1.0;
    e
}

#[inline]
pub fn dot<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn add<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Vector<N> {
    core::array::from_fn(|i| a[i] + b[i])
}

#[inline]
pub fn sub<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Vector<N> {
    core::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn scale<const N: usize>(s: f64, a: &Vector<N>) -> Vector<N> {
    core::array::from_fn(|i| s * a[i])
}

/// `a + s * b`
#[inline]
pub fn axpy<const N: usize>(a: &Vector<N>, s: f64, b: &Vector<N>) -> Vector<N> {
    core::array::from_fn(|i| a[i] + s * b[i])
}

pub fn norm<const N: usize>(a: &Vector<N>) -> f64 {
    dot(a, a).sqrt()
}

pub fn max_abs<const N: usize>(a: &Vector<N>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn mat_vec<const N: usize>(m: &Matrix<N>, v: &Vector<N>) -> Vector<N> {
    core::array::from_fn(|i| dot(&m[i], v))
}

pub fn mat_mul<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> Matrix<N> {
    core::array::from_fn(|i| core::array::from_fn(|j| (0..N).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn transpose<const N: usize>(a: &Matrix<N>) -> Matrix<N> {
    core::array::from_fn(|i| core::array::from_fn(|j| a[j][i]))
}

/// Bilinear form `xᵀ M y`.
pub fn bilinear<const N: usize>(m: &Matrix<N>, x: &Vector<N>, y: &Vector<N>) -> f64 {
    dot(x, &mat_vec(m, y))
}

pub fn symmetry_residual<const N: usize>(m: &Matrix<N>) -> f64 {
    let mut r = 0.0f64;
    for i in 0..N {
        for j in 0..i {
            r = r.max((m[i][j] - m[j][i]).abs());
        }
    }
    r
}

/// Lower Cholesky factor, `None` when the matrix is not positive definite.
pub fn cholesky<const N: usize>(m: &Matrix<N>) -> Option<Matrix<N>> {
    let mut l = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse<const N: usize>(m: &Matrix<N>) -> Option<Matrix<N>> {
    let mut a = *m;
    let mut inv = identity::<N>();
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..N {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..N {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for j in 0..N {
                        a[row][j] -= f * a[col][j];
                        inv[row][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

pub fn determinant<const N: usize>(m: &Matrix<N>) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..N {
        let Some(pivot) = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
        else {
            return 0.0;
        };
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for j in col..N {
                a[row][j] -= f * a[col][j];
            }
        }
    }
    det
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<const N: usize>(m: &Matrix<N>) -> Vector<N> {
    let mut a = *m;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..N {
            for j in 0..i {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vector<N> = core::array::from_fn(|i| a[i][i]);
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn cross3(a: &Vector<3>, b: &Vector<3>) -> Vector<3> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Covector `w_k = det[v_1, …, v_{N-1}, e_k]` (generalised cross product).
pub fn cofactor_covector<const N: usize>(vectors: &[Vector<N>]) -> Vector<N> {
    debug_assert_eq!(vectors.len() + 1, N);
    core::array::from_fn(|k| {
        let mut m = [[0.0; N]; N];
        for (c, v) in vectors.iter().enumerate() {
            for r in 0..N {
                m[r][c] = v[r];
            }
        }
        m[k][N - 1] = 1.0;
        determinant(&m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_determinant_agree() {
        let m = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = inverse(&m).unwrap();
        let prod = mat_mul(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i][j] - e).abs() < 1e-14);
            }
        }
        let d = determinant(&m);
        let expected = 4.0 * (6.0 - 0.04) - 1.0 * (2.0 - 0.1) + 0.5 * (0.2 - 1.5);
        assert!((d - expected).abs() < 1e-12);
    }

    #[test]
    fn jacobi_eigenvalues_of_known_matrix() {
        // eigenvalues 1, 3 of [[2,1],[1,2]]
        let ev = symmetric_eigenvalues(&[[2.0, 1.0], [1.0, 2.0]]);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        let ev = symmetric_eigenvalues(&[[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]);
        let s2 = 2f64.sqrt();
        for (got, want) in ev.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(cholesky(&[[1.0, 2.0], [2.0, 1.0]]).is_none());
        assert!(cholesky(&[[2.0, 0.5], [0.5, 1.0]]).is_some());
    }

    #[test]
    fn cofactor_matches_cross_product() {
        let a = [1.0, 2.0, 3.0];
        let b = [-0.5, 0.25, 4.0];
        let c = cofactor_covector(&[a, b]);
        let x = cross3(&a, &b);
        for i in 0..3 {
            assert!((c[i] - x[i]).abs() < 1e-14);
        }
    }
}
