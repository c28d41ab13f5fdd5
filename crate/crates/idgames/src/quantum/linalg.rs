//! Small dense complex matrices and a cyclic Jacobi eigensolver for
//! Hermitian matrices. Joint spaces in this crate are at most 9x9, so a
//! dependency-free O(n^3)-per-sweep solver is plenty.

use num_complex::Complex64;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let mut m = CMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "square matrices only");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_reals(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = CMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "square matrices only");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = C64::new(v, 0.0);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> CMatrix {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (na, nb) = (self.n, other.n);
        let n = na * nb;
        let mut out = CMatrix::zeros(n);
        for ia in 0..na {
            for ja in 0..na {
                let a = self[(ia, ja)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for ib in 0..nb {
                    for jb in 0..nb {
                        out[(ia * nb + ib, ja * nb + jb)] = a * other[(ib, jb)];
                    }
                }
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.n {
            for j in i..self.n {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi with complex
/// rotations: returns (eigenvalues, unitary whose columns are the matching
/// eigenvectors), unsorted. Iterates sweeps until the off-diagonal Frobenius
/// norm drops below `tol`.
pub fn hermitian_eigen(a: &CMatrix, tol: f64) -> (Vec<f64>, CMatrix) {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    if n == 1 {
        return (vec![m[(0, 0)].re], v);
    }
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        if m.off_diagonal_norm() <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= tol / (n * n) as f64 {
                    continue;
                }
                // Phase factor peeling the complex entry down to the real
                // 2x2 Jacobi rotation.
                let u = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Column update: columns p and q of both m and v are mixed
                // by V = diag(1, conj(u)) * [[c, s], [-s, c]] acting on
                // (p, q); the phase turns the 2x2 block real.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c - miq * (u.conj() * s);
                    m[(i, q)] = mip * s + miq * (u.conj() * c);
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * (u.conj() * s);
                    v[(i, q)] = vip * s + viq * (u.conj() * c);
                }
                // Row update with V^dagger.
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c - mqj * (u * s);
                    m[(q, j)] = mpj * s + mqj * (u * c);
                }
            }
        }
    }
    let values = (0..n).map(|i| m[(i, i)].re).collect();
    (values, v)
}

/// Splits a Hermitian matrix into sign(M): the +-1 observable whose +1
/// eigenspace is spanned by the nonnegative eigenvectors of M.
pub fn spectral_sign(m: &CMatrix, tol: f64) -> CMatrix {
    let n = m.dim();
    let (values, vectors) = hermitian_eigen(m, tol);
    let mut out = CMatrix::zeros(n);
    for (k, &lambda) in values.iter().enumerate() {
        let sign = if lambda >= 0.0 { 1.0 } else { -1.0 };
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += vectors[(i, k)] * vectors[(j, k)].conj() * sign;
            }
        }
    }
    out
}

/// The eigenvector of the largest eigenvalue, unit norm.
pub fn top_eigenvector(m: &CMatrix, tol: f64) -> (f64, Vec<C64>) {
    let (values, vectors) = hermitian_eigen(m, tol);
    let (best, _) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("no NaNs"))
        .expect("nonempty");
    let v: Vec<C64> = (0..m.dim()).map(|i| vectors[(i, best)]).collect();
    (values[best], normalize(&v))
}

pub fn normalize(v: &[C64]) -> Vec<C64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / norm).collect()
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// <psi| M |psi>, real part (M Hermitian in all uses).
pub fn expectation(m: &CMatrix, psi: &[C64]) -> f64 {
    inner(psi, &m.apply(psi)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn check_eigen(a: &CMatrix) {
        let (values, v) = hermitian_eigen(a, 1e-13);
        let n = a.dim();
        // Unitarity.
        let gram = v.adjoint().matmul(&v);
        assert!(gram.max_abs_diff(&CMatrix::identity(n)) < 1e-10);
        // A v_k = lambda_k v_k.
        for k in 0..n {
            let col: Vec<C64> = (0..n).map(|i| v[(i, k)]).collect();
            let av = a.apply(&col);
            for i in 0..n {
                assert!((av[i] - col[i] * values[k]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn pauli_spectra() {
        let sx = CMatrix::from_reals(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let (mut vals, _) = hermitian_eigen(&sx, 1e-13);
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        check_eigen(&sx);

        let sy = CMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]]);
        check_eigen(&sy);
    }

    #[test]
    fn random_hermitian_eigendecomposition() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(1);
        for n in [2usize, 3, 4, 8, 9] {
            let mut m = CMatrix::zeros(n);
            for i in 0..n {
                m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
                for j in i + 1..n {
                    let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            check_eigen(&m);
        }
    }

    #[test]
    fn spectral_sign_is_an_involution() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(2);
        for n in [2usize, 3] {
            let mut m = CMatrix::zeros(n);
            for i in 0..n {
                m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
                for j in i + 1..n {
                    let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            let a = spectral_sign(&m, 1e-13);
            assert!(a.is_hermitian(1e-10));
            assert!(a.matmul(&a).max_abs_diff(&CMatrix::identity(n)) < 1e-8);
        }
    }

    #[test]
    fn kron_dimensions_and_values() {
        let sx = CMatrix::from_reals(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let id = CMatrix::identity(2);
        let k = sx.kron(&id);
        assert_eq!(k.dim(), 4);
        // (sx x id)[(0,0),(1,0)] = sx[0,1] * id[0,0] = 1 at row 0, col 2.
        assert!((k[(0, 2)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((k[(0, 1)]).norm() < 1e-15);
    }
}
