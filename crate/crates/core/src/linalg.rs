//! Small dense complex matrices and a cyclic Jacobi eigen-solver for
//! Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix<const N: usize> = [[Complex64; N]; N];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

const MAX_SWEEPS: usize = 64;

pub fn zeros<const N: usize>() -> CMatrix<N> {
    [[ZERO; N]; N]
}

pub fn identity<const N: usize>() -> CMatrix<N> {
    let mut m = zeros();
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = ONE;
    }
    m
}

/// Pauli matrix `sigma_j`, `j` in 1..=3; `j = 0` is the identity.
pub fn pauli(j: usize) -> CMatrix<2> {
    match j {
        0 => identity(),
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli index {j} out of range"),
    }
}

pub fn kron(a: &CMatrix<2>, b: &CMatrix<2>) -> CMatrix<4> {
    let mut out = zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> CMatrix<N> {
    let mut out = zeros();
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..N {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint<const N: usize>(a: &CMatrix<N>) -> CMatrix<N> {
    let mut out = zeros();
    for i in 0..N {
        for j in 0..N {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn add<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> CMatrix<N> {
    let mut out = *a;
    for i in 0..N {
        for j in 0..N {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn sub<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> CMatrix<N> {
    let mut out = *a;
    for i in 0..N {
        for j in 0..N {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn scale<const N: usize>(a: &CMatrix<N>, s: f64) -> CMatrix<N> {
    let mut out = *a;
    for row in out.iter_mut() {
        for z in row.iter_mut() {
            *z *= s;
        }
    }
    out
}

pub fn trace<const N: usize>(a: &CMatrix<N>) -> Complex64 {
    (0..N).map(|k| a[k][k]).sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..N {
        for k in 0..N {
            acc += a[i][k] * b[k][i];
        }
    }
    acc
}

/// `A B A^dagger`.
pub fn conjugate_by<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> CMatrix<N> {
    matmul(&matmul(a, b), &adjoint(a))
}

pub fn max_abs_diff<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..N {
        for j in 0..N {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

/// Largest deviation from Hermiticity, `max |a_ij - conj(a_ji)|`.
pub fn hermiticity_defect<const N: usize>(a: &CMatrix<N>) -> f64 {
    max_abs_diff(a, &adjoint(a))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<const N: usize> {
    /// Ascending.
    pub values: [f64; N],
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix<N>,
}

fn off_diagonal_norm_sq<const N: usize>(a: &CMatrix<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    s
}

/// Cyclic complex Jacobi diagonalization.
///
/// Each rotation first removes the phase of `a_pq` and then applies the real
/// Jacobi rotation that annihilates it. Only the Hermitian part of the input
/// is used. Sweeps stop once the off-diagonal Frobenius mass falls below
/// `1e-30` of the total, far inside the 1e-13 eigenvalue tolerance.
pub fn hermitian_eigen<const N: usize>(input: &CMatrix<N>) -> Result<HermitianEigen<N>> {
    let mut a = *input;
    for i in 0..N {
        a[i][i] = Complex64::new(a[i][i].re, 0.0);
        for j in (i + 1)..N {
            let avg = (a[i][j] + a[j][i].conj()) * 0.5;
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
    }
    let mut v: CMatrix<N> = identity();

    let total: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
    let threshold = (total * 1e-30).max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sq(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U = diag-phase * real rotation restricted to the (p, q) plane:
                // U_pp = c, U_pq = s, U_qp = -s e^{-i phi}, U_qq = c e^{-i phi}.
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;

                // A <- A U (columns p, q)
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * u_pp + akq * u_qp;
                    a[k][q] = akp * u_pq + akq * u_qq;
                }
                // A <- U^dagger A (rows p, q)
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q][k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p] = Complex64::new(a[p][p].re, 0.0);
                a[q][q] = Complex64::new(a[q][q].re, 0.0);
                // V <- V U
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = vkp * u_pp + vkq * u_qp;
                    row[q] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm_sq(&a) > threshold {
        return Err(Error::Convergence {
            routine: "hermitian_eigen",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: [usize; N] = std::array::from_fn(|k| k);
    order.sort_by(|&x, &y| a[x][x].re.total_cmp(&a[y][y].re));
    let values = std::array::from_fn(|k| a[order[k]][order[k]].re);
    let mut vectors = zeros();
    for (col, &src) in order.iter().enumerate() {
        for row in 0..N {
            vectors[row][col] = v[row][src];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues<const N: usize>(m: &[[f64; N]; N]) -> Result<[f64; N]> {
    let c: CMatrix<N> = std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(m[i][j], 0.0)));
    Ok(hermitian_eigen(&c)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_algebra() {
        for j in 1..=3 {
            let sq = matmul(&pauli(j), &pauli(j));
            assert!(max_abs_diff(&sq, &identity()) < 1e-15);
        }
        // sigma_x sigma_y = i sigma_z
        let xy = matmul(&pauli(1), &pauli(2));
        assert!(max_abs_diff(&xy, &scale_c(&pauli(3), I)) < 1e-15);
    }

    fn scale_c<const N: usize>(a: &CMatrix<N>, s: Complex64) -> CMatrix<N> {
        let mut out = *a;
        for row in out.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        out
    }

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let mut m: CMatrix<4> = zeros();
        for (k, d) in [0.3, -1.0, 2.0, 0.0].into_iter().enumerate() {
            m[k][k] = c(d, 0.0);
        }
        let e = hermitian_eigen(&m).unwrap();
        assert_eq!(e.values, [-1.0, 0.0, 0.3, 2.0]);
    }

    #[test]
    fn reconstructs_complex_hermitian_matrix() {
        let m: CMatrix<4> = [
            [c(2.0, 0.0), c(0.5, 0.3), c(0.0, -1.0), c(0.1, 0.0)],
            [c(0.5, -0.3), c(1.0, 0.0), c(0.2, 0.2), c(0.0, 0.7)],
            [c(0.0, 1.0), c(0.2, -0.2), c(-1.5, 0.0), c(0.4, -0.1)],
            [c(0.1, 0.0), c(0.0, -0.7), c(0.4, 0.1), c(0.25, 0.0)],
        ];
        let e = hermitian_eigen(&m).unwrap();
        let mut d: CMatrix<4> = zeros();
        for k in 0..4 {
            d[k][k] = c(e.values[k], 0.0);
        }
        let back = matmul(&matmul(&e.vectors, &d), &adjoint(&e.vectors));
        assert!(max_abs_diff(&back, &m) < 1e-13);
        let gram = matmul(&adjoint(&e.vectors), &e.vectors);
        assert!(max_abs_diff(&gram, &identity()) < 1e-13);
        let tr: f64 = e.values.iter().sum();
        assert!((tr - 1.75).abs() < 1e-13);
    }

    #[test]
    fn degenerate_spectrum() {
        // (|00><00| + |11><11| + |00><11| + |11><00|)/2 has spectrum {0,0,0,1}
        let mut m: CMatrix<4> = zeros();
        m[0][0] = c(0.5, 0.0);
        m[3][3] = c(0.5, 0.0);
        m[0][3] = c(0.5, 0.0);
        m[3][0] = c(0.5, 0.0);
        let e = hermitian_eigen(&m).unwrap();
        for (got, want) in e.values.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn real_symmetric_three_by_three() {
        // eigenvalues of [[2,1,0],[1,2,1],[0,1,2]] are 2-sqrt2, 2, 2+sqrt2
        let m = [[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]];
        let v = symmetric_eigenvalues(&m).unwrap();
        let s = 2f64.sqrt();
        for (got, want) in v.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn kron_of_paulis_is_hermitian_and_unitary() {
        for j in 0..4 {
            for k in 0..4 {
                let m = kron(&pauli(j), &pauli(k));
                assert!(hermiticity_defect(&m) == 0.0);
                assert!(max_abs_diff(&matmul(&m, &m), &identity()) < 1e-15);
            }
        }
    }
}
