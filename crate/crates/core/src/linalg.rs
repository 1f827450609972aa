//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Full SVD `m = U diag(s) V^H` with `s` non-increasing.
///
/// Computed with faer: the complex SVD of nalgebra 0.35 occasionally
/// returns orthonormal factors that do not reproduce rank-deficient inputs.
pub struct SvdC {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

pub fn svd_c(m: &CMat) -> SvdC {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return SvdC { u: CMat::identity(r, r), s: Vec::new(), v: CMat::identity(c, c) };
    }
    let fm = faer::Mat::<faer::c64>::from_fn(r, c, |i, j| m[(i, j)]);
    let svd = fm.svd().expect("SVD of a finite matrix converges");
    let (u, v) = (svd.U(), svd.V());
    let s = svd.S().column_vector();
    SvdC {
        u: CMat::from_fn(r, r, |i, j| u[(i, j)]),
        s: (0..r.min(c)).map(|i| s[i].re).collect(),
        v: CMat::from_fn(c, c, |i, j| v[(i, j)]),
    }
}

impl SvdC {
    /// Columns of `V` with singular value `<= tol` (missing values count as zero).
    pub fn right_null(&self, tol: f64) -> CMat {
        let n = self.v.ncols();
        let idx: Vec<usize> = (0..n).filter(|&i| self.s.get(i).is_none_or(|&x| x <= tol)).collect();
        self.v.select_columns(&idx)
    }

    /// Columns of `U` with singular value `> tol`.
    pub fn left_range(&self, tol: f64) -> CMat {
        let idx: Vec<usize> = (0..self.s.len()).filter(|&i| self.s[i] > tol).collect();
        self.u.select_columns(&idx)
    }

    /// Minimum-norm least-squares solution, singular values `<= tol` dropped.
    pub fn solve(&self, b: &CMat, tol: f64) -> CMat {
        let k = self.s.len();
        let ub = self.u.columns(0, k).adjoint() * b;
        let mut y = CMat::zeros(self.v.ncols(), b.ncols());
        for i in 0..k {
            if self.s[i] > tol {
                for c in 0..b.ncols() {
                    y[(i, c)] = ub[(i, c)] / self.s[i];
                }
            }
        }
        &self.v * y
    }
}

/// Singular values in descending order.
pub fn singular_values_c(m: &CMat) -> Vec<f64> {
    svd_c(m).s
}

/// Null space of a real matrix: right singular vectors whose singular value
/// is below `rel_tol * sigma_max` (all of them when the matrix vanishes).
pub fn null_space_real(m: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let (r, n) = m.shape();
    if r == 0 {
        return (0..n).map(|i| DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })).collect();
    }
    let svd = faer::Mat::<f64>::from_fn(r, n, |i, j| m[(i, j)]).svd().expect("SVD of a finite matrix converges");
    let s = svd.S().column_vector();
    let v = svd.V();
    let smax = if r.min(n) > 0 { s[0] } else { 0.0 };
    (0..n)
        .filter(|&i| smax == 0.0 || i >= r.min(n) || s[i] < rel_tol * smax)
        .map(|i| DVector::from_fn(n, |k, _| v[(k, i)]))
        .collect()
}

/// Orthonormal basis (as columns) of the null space of a complex matrix.
pub fn null_space_c(m: &CMat, abs_tol: f64) -> CMat {
    svd_c(m).right_null(abs_tol)
}

/// Orthonormal basis of the column span, keeping singular values above `abs_tol`.
pub fn column_span_c(m: &CMat, abs_tol: f64) -> CMat {
    if m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    svd_c(m).left_range(abs_tol)
}

/// Numerical rank with a relative threshold.
pub fn rank_c(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values_c(m);
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > rel_tol * smax && x > 0.0).count()
}

/// Frobenius norm.
pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of a complex square matrix via the Schur form.
pub fn eigenvalues_c(m: &CMat) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().schur().eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

/// Real square matrix promoted to complex.
pub fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(C64::from)
}

/// Hermitian projection of `v` onto the orthogonal complement of the
/// orthonormal columns of `q`.
pub fn project_out(q: &CMat, v: &CMat) -> CMat {
    if q.ncols() == 0 {
        return v.clone();
    }
    v - q * (q.adjoint() * v)
}

/// Thin QR with column-wise phase fixed so that `R` has a non-negative
/// real diagonal. Returns `(Q, diag(R))`.
pub fn thin_qr(m: &CMat) -> (CMat, CMat, Vec<f64>) {
    let qr = m.clone().qr();
    let (mut q, mut r) = qr.unpack();
    let k = r.nrows().min(r.ncols());
    let mut diag = Vec::with_capacity(k);
    for i in 0..k {
        let d = r[(i, i)];
        let a = d.norm();
        if a > 0.0 {
            let ph = d / a;
            for c in 0..r.ncols() {
                r[(i, c)] /= ph;
            }
            for row in 0..q.nrows() {
                q[(row, i)] *= ph;
            }
        }
        diag.push(a);
    }
    (q, r, diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        let ns = null_space_real(&m, 1e-9);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * v).norm() < 1e-12);
        }
    }

    #[test]
    fn qr_phase_fixed() {
        let m = CMat::from_fn(4, 2, |i, j| C64::new((i * i + j) as f64, (i * j) as f64 - 1.0));
        let (q, r, d) = thin_qr(&m);
        assert!(fro(&(&q * &r - &m)) < 1e-12);
        assert!(d.iter().all(|&x| x > 0.0));
        assert!(fro(&(q.adjoint() * &q - CMat::identity(2, 2))) < 1e-12);
    }
}

#[cfg(test)]
mod svd_tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn reconstructs_rank_deficient() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (nr, nc, rank) in [(3, 2, 1), (2, 3, 1), (3, 3, 1), (3, 3, 2), (4, 4, 2), (5, 3, 2), (6, 6, 3), (8, 8, 8), (3, 2, 2)] {
            for _ in 0..200 {
                let a = CMat::from_fn(nr, rank, |_, _| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
                let b = CMat::from_fn(rank, nc, |_, _| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
                let m = a * b;
                let s = svd_c(&m);
                let mut sig = CMat::zeros(nr, nc);
                for (i, x) in s.s.iter().enumerate() {
                    sig[(i, i)] = C64::from(*x);
                }
                let recon = fro(&(&s.u * sig * s.v.adjoint() - &m));
                assert!(recon < 1e-12, "{nr}x{nc} rank {rank}: {recon:e}");
                assert!(fro(&(s.u.adjoint() * &s.u - CMat::identity(nr, nr))) < 1e-12);
                assert!(fro(&(s.v.adjoint() * &s.v - CMat::identity(nc, nc))) < 1e-12);
                assert!(s.s.windows(2).all(|w| w[0] >= w[1]));
                assert!(s.s.get(rank).is_none_or(|x| *x < 1e-12));
            }
        }
    }
}
