//! Dense complex linear algebra used throughout the crate: deterministic SVD
//! with a fixed phase convention, null spaces, principal angles and the
//! Hermitian (generalized) eigenproblem.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Thin SVD `A = U diag(s) V*` with `p = min(m, n)` singular triplets.
#[derive(Debug, Clone)]
pub struct Svd {
    pub s: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
}

/// Rotates the phase of `col` so that its first entry of non-negligible
/// modulus is real and positive; returns the applied unit factor.
fn normalize_phase(col: &mut [C64]) -> C64 {
    let scale = col.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return ONE;
    }
    for c in col.iter() {
        if c.norm() > 1e-8 * scale {
            let phase = c.conj() / c.norm();
            for x in col.iter_mut() {
                *x *= phase;
            }
            return phase;
        }
    }
    ONE
}

fn to_faer(a: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Thin SVD, singular values sorted descending, right singular vectors with
/// their first non-negligible entry real positive.
///
/// nalgebra's complex SVD returns wrong factors on some rank-deficient
/// inputs, so the decomposition itself is delegated to faer.
pub fn svd(a: &CMat) -> Svd {
    let (m, n) = a.shape();
    let p = m.min(n);
    if p == 0 {
        return Svd { s: vec![], u: CMat::zeros(m, 0), v: CMat::zeros(n, 0) };
    }
    let dec = to_faer(a).thin_svd().expect("svd converges");
    let (fu, fs, fv) = (dec.U(), dec.S().column_vector(), dec.V());
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| fs[j].re.total_cmp(&fs[i].re));
    let mut s = Vec::with_capacity(p);
    let mut uo = CMat::zeros(m, p);
    let mut vo = CMat::zeros(n, p);
    for (k, &i) in order.iter().enumerate() {
        s.push(fs[i].re.max(0.0));
        let mut vcol: Vec<C64> = (0..n).map(|r| fv[(r, i)]).collect();
        let phase = normalize_phase(&mut vcol);
        for r in 0..n {
            vo[(r, k)] = vcol[r];
        }
        for r in 0..m {
            uo[(r, k)] = fu[(r, i)] * phase;
        }
    }
    Svd { s, u: uo, v: vo }
}

/// All `n` right singular pairs of `a` (zero rows padded when `m < n`), sorted
/// descending. The columns of the returned matrix form a unitary basis.
pub fn right_singular(a: &CMat) -> (Vec<f64>, CMat) {
    let (m, n) = a.shape();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    if m >= n {
        let d = svd(a);
        (d.s, d.v)
    } else {
        let mut padded = CMat::zeros(n, n);
        padded.view_mut((0, 0), (m, n)).copy_from(a);
        let d = svd(&padded);
        (d.s, d.v)
    }
}

/// Approximate right null space: right singular vectors with singular value
/// at most `tol`. Returns the basis (n x k) and the matching singular values.
pub fn null_space(a: &CMat, tol: f64) -> (CMat, Vec<f64>) {
    let n = a.ncols();
    let (s, v) = right_singular(a);
    let idx: Vec<usize> = (0..n).filter(|&i| s[i] <= tol).collect();
    let mut basis = CMat::zeros(n, idx.len());
    let mut sv = Vec::with_capacity(idx.len());
    for (k, &i) in idx.iter().enumerate() {
        basis.set_column(k, &v.column(i));
        sv.push(s[i]);
    }
    (basis, sv)
}

/// Orthonormal basis of the column range of `a`, keeping directions whose
/// singular value exceeds `tol`.
pub fn range_basis(a: &CMat, tol: f64) -> CMat {
    let d = svd(a);
    let r = d.s.iter().filter(|&&s| s > tol).count();
    d.u.columns(0, r).into_owned()
}

/// Number of singular values of `a` above `tol`.
pub fn rank(a: &CMat, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    svd(a).s.iter().filter(|&&s| s > tol).count()
}

/// Spectral norm.
pub fn norm2(a: &CMat) -> f64 {
    svd(a).s.first().copied().unwrap_or(0.0)
}

/// Sine of the largest principal angle by which the column span of `small`
/// (orthonormal columns) leaves the column span of `big` (orthonormal columns).
/// Zero iff `span(small) ⊆ span(big)`.
pub fn containment_gap(small: &CMat, big: &CMat) -> f64 {
    if small.ncols() == 0 {
        return 0.0;
    }
    if big.ncols() == 0 {
        return 1.0;
    }
    let resid = small - big * (big.adjoint() * small);
    norm2(&resid).min(1.0)
}

/// Largest principal angle (radians) between two subspaces given by
/// orthonormal bases. Subspaces of different dimension are at angle pi/2.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    let g1 = containment_gap(a, b);
    let g2 = containment_gap(b, a);
    g1.max(g2).asin()
}

/// Hermitian eigendecomposition with eigenvalues sorted descending.
pub fn herm_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let e = to_faer(&sym).self_adjoint_eigen(faer::Side::Lower).expect("eigensolver converges");
    let (fs, fu) = (e.S().column_vector(), e.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| fs[j].re.total_cmp(&fs[i].re));
    let mut vals = Vec::with_capacity(n);
    let mut vecs = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vals.push(fs[i].re);
        let mut col: Vec<C64> = (0..n).map(|r| fu[(r, i)]).collect();
        normalize_phase(&mut col);
        for r in 0..n {
            vecs[(r, k)] = col[r];
        }
    }
    (vals, vecs)
}

/// Generalized Hermitian-definite eigenproblem `A x = λ B x`, eigenvalues
/// descending, eigenvectors B-orthonormal. `None` when `B` is not positive
/// definite.
pub fn gen_herm_eig(a: &CMat, b: &CMat) -> Option<(Vec<f64>, CMat)> {
    let bs = (b + b.adjoint()) * C64::new(0.5, 0.0);
    let chol = Cholesky::new(bs)?;
    let l = chol.l();
    let linv = l.clone().try_inverse()?;
    let m = &linv * a * linv.adjoint();
    let (vals, y) = herm_eig(&m);
    let x = linv.adjoint() * y;
    Some((vals, x))
}

/// Gram-Schmidt orthonormalization of columns, dropping columns that become
/// smaller than `tol`.
pub fn orthonormalize(a: &CMat, tol: f64) -> CMat {
    let mut cols: Vec<CVec> = Vec::new();
    for j in 0..a.ncols() {
        let mut v: CVec = a.column(j).into_owned();
        for _ in 0..2 {
            for q in &cols {
                let c = q.dotc(&v);
                v -= q * c;
            }
        }
        let nv = v.norm();
        if nv > tol {
            cols.push(v / C64::new(nv, 0.0));
        }
    }
    if cols.is_empty() {
        return CMat::zeros(a.nrows(), 0);
    }
    CMat::from_columns(&cols)
}

/// `exp(2 pi i j / n)`.
pub fn root_of_unity(j: usize, n: usize) -> C64 {
    let t = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
    C64::new(t.cos(), t.sin())
}

pub fn powi(z: C64, k: i32) -> C64 {
    if k >= 0 {
        z.powu(k as u32)
    } else {
        z.inv().powu((-k) as u32)
    }
}

/// Order-preserving map over `0..n`, parallel when the `parallel` feature is
/// enabled. The output ordering never depends on scheduling.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn svd_sorted_and_phase_fixed() {
        let a = CMat::from_row_slice(2, 3, &[c(0.0, 1.0), c(2.0, 0.0), ZERO, ZERO, c(0.0, 3.0), c(1.0, 1.0)]);
        let d = svd(&a);
        assert!(d.s[0] >= d.s[1]);
        for k in 0..2 {
            let v = d.v.column(k);
            let first = v.iter().find(|x| x.norm() > 1e-8).unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
        let rec = &d.u * CMat::from_diagonal(&DVector::from_iterator(2, d.s.iter().map(|&x| c(x, 0.0)))) * d.v.adjoint();
        assert!((rec - a).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let (b, s) = null_space(&a, 1e-12);
        assert_eq!(b.ncols(), 2);
        assert_eq!(s.len(), 2);
        assert!((&a * &b).norm() < 1e-12);
    }

    #[test]
    fn principal_angles() {
        let e1 = CMat::from_column_slice(2, 1, &[ONE, ZERO]);
        let e2 = CMat::from_column_slice(2, 1, &[ZERO, ONE]);
        let diag = CMat::from_column_slice(2, 1, &[c(0.5f64.sqrt(), 0.0), c(0.0, 0.5f64.sqrt())]);
        assert!(subspace_distance(&e1, &e1) < 1e-15);
        assert!((subspace_distance(&e1, &e2) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((subspace_distance(&e1, &diag) - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(containment_gap(&e1, &CMat::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn generalized_eigen() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        let b = CMat::from_diagonal(&DVector::from_vec(vec![c(4.0, 0.0), c(1.0, 0.0)]));
        let (vals, x) = gen_herm_eig(&a, &b).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 0.5).abs() < 1e-14);
        let g = x.adjoint() * &b * &x;
        assert!((g - CMat::identity(2, 2)).norm() < 1e-12);
        assert!(gen_herm_eig(&a, &CMat::zeros(2, 2)).is_none());
    }

    fn reconstruct(d: &Svd) -> CMat {
        let s = CMat::from_diagonal(&CVec::from_iterator(d.s.len(), d.s.iter().map(|&x| c(x, 0.0))));
        &d.u * s * d.v.adjoint()
    }

    #[test]
    fn rank_one_two_by_two() {
        // a point value of a composed symbol that nalgebra's own SVD gets wrong
        let a = CMat::from_row_slice(
            2,
            2,
            &[
                c(-0.003443905052818469, -0.016593848918233955),
                c(-0.3554116625783309, 0.9355906472923528),
                c(-0.007054284656051679, 0.007766190263670057),
                c(0.5978394186326845, -0.16270473213146824),
            ],
        );
        let d = svd(&a);
        assert!((reconstruct(&d) - &a).norm() < 1e-14);
        let (ev, _) = herm_eig(&(a.adjoint() * &a));
        assert!((d.s[0] - ev[0].sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut z = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        for &(m, n, r) in &[(10, 10, 3), (30, 20, 5), (20, 30, 1), (12, 12, 11)] {
            for _ in 0..10 {
                let x = CMat::from_fn(m, r, |_, _| z());
                let y = CMat::from_fn(r, n, |_, _| z());
                let a = x * y;
                let d = svd(&a);
                assert!((reconstruct(&d) - &a).norm() < 1e-11 * a.norm());
                assert_eq!(rank(&a, 1e-9 * d.s[0]), r);
                assert!((d.u.adjoint() * &d.u - CMat::identity(d.s.len(), d.s.len())).norm() < 1e-12);
            }
        }
    }
}
