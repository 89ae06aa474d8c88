//! Matrix Laurent polynomials `Φ(ζ) = Σ_k C_k ζ^k` on the unit circle.

mod grid;
mod json;
mod profile;

pub(crate) use grid::refine_sup;
pub use grid::{default_grid_size, eval_on_grid, sup_norm, winding_number, GridSampling, PointSvd};
pub use json::{CoeffJson, MatrixJson, SymbolFile};
pub use profile::{singular_profile, SingularProfile};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{powi, CMat, C64, ONE, ZERO};

/// Coefficients whose Frobenius norm falls below this are dropped.
pub const PRUNE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixLaurentPoly {
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<i32, CMat>,
}

impl MatrixLaurentPoly {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs<I>(rows: usize, cols: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, CMat)>,
    {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!("symbol dimensions must be positive, got {rows}x{cols}")));
        }
        let mut p = Self::zeros(rows, cols);
        for (k, c) in coeffs {
            if c.shape() != (rows, cols) {
                return Err(Error::DimensionMismatch { op: "from_coeffs", left: (rows, cols), right: c.shape() });
            }
            let slot = p.coeffs.entry(k).or_insert_with(|| CMat::zeros(rows, cols));
            *slot += c;
        }
        Ok(p.pruned())
    }

    pub fn constant(c: CMat) -> Self {
        let (rows, cols) = c.shape();
        Self::from_coeffs(rows, cols, [(0, c)]).expect("shape is consistent")
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(CMat::identity(n, n))
    }

    /// Scalar symbol `Σ c_k z^k` from `(k, c_k)` pairs.
    pub fn scalar(terms: &[(i32, C64)]) -> Self {
        Self::from_coeffs(1, 1, terms.iter().map(|&(k, c)| (k, CMat::from_element(1, 1, c))))
            .expect("scalar terms are 1x1")
    }

    /// Scalar monomial `c z^k`.
    pub fn monomial(k: i32, c: C64) -> Self {
        Self::scalar(&[(k, c)])
    }

    /// Scalar `z^k`.
    pub fn z_pow(k: i32) -> Self {
        Self::monomial(k, ONE)
    }

    /// Builds a matrix symbol from scalar entries given row by row.
    pub fn from_entries(entries: &[Vec<MatrixLaurentPoly>]) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut out = BTreeMap::<i32, CMat>::new();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidInput("ragged entry table".into()));
            }
            for (j, e) in row.iter().enumerate() {
                if !e.is_scalar() {
                    return Err(Error::NotScalar { rows: e.rows, cols: e.cols });
                }
                for (&k, c) in &e.coeffs {
                    out.entry(k).or_insert_with(|| CMat::zeros(rows, cols))[(i, j)] += c[(0, 0)];
                }
            }
        }
        Self::from_coeffs(rows, cols, out)
    }

    /// Block-diagonal `diag(a, b)`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        let mut out = BTreeMap::<i32, CMat>::new();
        for (&k, m) in &a.coeffs {
            out.entry(k).or_insert_with(|| CMat::zeros(r, c)).view_mut((0, 0), m.shape()).copy_from(m);
        }
        for (&k, m) in &b.coeffs {
            out.entry(k).or_insert_with(|| CMat::zeros(r, c)).view_mut((a.rows, a.cols), m.shape()).copy_from(m);
        }
        Self::from_coeffs(r, c, out).expect("shapes are consistent")
    }

    /// Embeds `self` into a `rows x cols` zero symbol at offset `(r0, c0)`.
    pub fn embed(&self, rows: usize, cols: usize, r0: usize, c0: usize) -> Result<Self> {
        if r0 + self.rows > rows || c0 + self.cols > cols {
            return Err(Error::DimensionMismatch { op: "embed", left: (rows, cols), right: (r0 + self.rows, c0 + self.cols) });
        }
        let coeffs = self.coeffs.iter().map(|(&k, m)| {
            let mut big = CMat::zeros(rows, cols);
            big.view_mut((r0, c0), m.shape()).copy_from(m);
            (k, big)
        });
        Self::from_coeffs(rows, cols, coeffs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest stored index (0 for the zero symbol).
    pub fn min_index(&self) -> i32 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    /// Largest stored index (0 for the zero symbol).
    pub fn max_index(&self) -> i32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// Band `K`: all stored indices lie in `[-K, K]`.
    pub fn band(&self) -> usize {
        self.min_index().unsigned_abs().max(self.max_index().unsigned_abs()) as usize
    }

    /// Number of strictly negative Fourier modes that can be present.
    pub fn antianalytic_band(&self) -> usize {
        (-self.min_index()).max(0) as usize
    }

    /// Largest nonnegative index present (0 when none).
    pub fn analytic_band(&self) -> usize {
        self.max_index().max(0) as usize
    }

    pub fn coeff(&self, k: i32) -> Option<&CMat> {
        self.coeffs.get(&k)
    }

    pub fn coeff_or_zero(&self, k: i32) -> CMat {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| CMat::zeros(self.rows, self.cols))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &CMat)> {
        self.coeffs.iter().map(|(&k, m)| (k, m))
    }

    /// True when no negative index is present.
    pub fn is_analytic(&self) -> bool {
        self.min_index() >= 0
    }

    /// Part with nonnegative indices.
    pub fn analytic_part(&self) -> Self {
        let c = self.coeffs.iter().filter(|(&k, _)| k >= 0).map(|(&k, m)| (k, m.clone()));
        Self { rows: self.rows, cols: self.cols, coeffs: c.collect() }
    }

    /// Part with strictly negative indices.
    pub fn antianalytic_part(&self) -> Self {
        let c = self.coeffs.iter().filter(|(&k, _)| k < 0).map(|(&k, m)| (k, m.clone()));
        Self { rows: self.rows, cols: self.cols, coeffs: c.collect() }
    }

    /// Scalar entry `(i, j)` as a 1x1 symbol.
    pub fn entry(&self, i: usize, j: usize) -> Self {
        Self::scalar(&self.coeffs.iter().map(|(&k, m)| (k, m[(i, j)])).collect::<Vec<_>>())
    }

    /// Sub-block of rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let c = self.coeffs.iter().map(|(&k, m)| (k, m.view((r0, c0), (nr, nc)).into_owned()));
        Self::from_coeffs(nr, nc, c.collect::<Vec<_>>()).expect("block shape")
    }

    fn pruned(mut self) -> Self {
        self.coeffs.retain(|_, m| m.norm() >= PRUNE_TOL);
        self
    }

    /// Drops coefficients with Frobenius norm below `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        let mut p = self.clone();
        p.coeffs.retain(|_, m| m.norm() >= tol);
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, ONE, "add")
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -ONE, "sub")
    }

    fn combine(&self, other: &Self, sign: C64, op: &'static str) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { op, left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        let mut out = self.coeffs.clone();
        for (&k, m) in &other.coeffs {
            let slot = out.entry(k).or_insert_with(|| CMat::zeros(self.rows, self.cols));
            *slot += m * sign;
        }
        Ok(Self { rows: self.rows, cols: self.cols, coeffs: out }.pruned())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { op: "mul", left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        let mut out = BTreeMap::<i32, CMat>::new();
        for (&a, ma) in &self.coeffs {
            for (&b, mb) in &other.coeffs {
                let slot = out.entry(a + b).or_insert_with(|| CMat::zeros(self.rows, other.cols));
                *slot += ma * mb;
            }
        }
        Ok(Self { rows: self.rows, cols: other.cols, coeffs: out }.pruned())
    }

    pub fn scale(&self, c: C64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, m)| (k, m * c)).collect();
        Self { rows: self.rows, cols: self.cols, coeffs }.pruned()
    }

    /// Multiplication by `z^s`.
    pub fn shift(&self, s: i32) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, m)| (k + s, m.clone())).collect();
        Self { rows: self.rows, cols: self.cols, coeffs }
    }

    pub fn transpose(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, m)| (k, m.transpose())).collect();
        Self { rows: self.cols, cols: self.rows, coeffs }
    }

    /// Pointwise complex conjugate: the coefficient at `k` is `conj(C_{-k})`.
    pub fn conjugate(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, m)| (-k, m.map(|x| x.conj()))).collect();
        Self { rows: self.rows, cols: self.cols, coeffs }
    }

    /// Pointwise adjoint: the coefficient at `k` is `C_{-k}^*`.
    pub fn adjoint(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, m)| (-k, m.adjoint())).collect();
        Self { rows: self.cols, cols: self.rows, coeffs }
    }

    /// Value at a point `ζ` (normally on the circle).
    pub fn eval(&self, zeta: C64) -> CMat {
        let mut out = CMat::zeros(self.rows, self.cols);
        for (&k, m) in &self.coeffs {
            out += m * powi(zeta, k);
        }
        out
    }

    /// Largest coefficient-wise Frobenius distance to `other`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<i32> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter()
            .map(|k| (self.coeff_or_zero(k) - other.coeff_or_zero(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Scalar value for 1x1 symbols.
    pub fn scalar_coeff(&self, k: i32) -> C64 {
        self.coeffs.get(&k).map_or(ZERO, |m| m[(0, 0)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn multiply_shift_inverse() {
        let a = MatrixLaurentPoly::z_pow(-1).mul(&MatrixLaurentPoly::identity(1)).unwrap();
        let i2 = MatrixLaurentPoly::identity(2);
        let zbar_i = i2.shift(-1);
        let z_i = i2.shift(1);
        assert_eq!(zbar_i.mul(&z_i).unwrap(), i2);
        assert_eq!(a.band(), 1);
    }

    #[test]
    fn adjoint_reflects_coefficients() {
        // adjoint(z̄ + 2z) = z + 2z̄
        let p = MatrixLaurentPoly::scalar(&[(-1, r(1.0)), (1, r(2.0))]);
        let q = MatrixLaurentPoly::scalar(&[(1, r(1.0)), (-1, r(2.0))]);
        assert_eq!(p.adjoint(), q);
        assert_eq!(p.adjoint().adjoint(), p);
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let c1 = CMat::from_row_slice(2, 3, &[r(1.0), C64::new(0.0, 2.0), r(0.0), r(3.0), r(1.0), C64::new(1.0, -1.0)]);
        let c2 = CMat::from_row_slice(2, 3, &[C64::new(0.5, 0.5), r(0.0), r(-1.0), r(0.0), r(2.0), r(0.0)]);
        let p = MatrixLaurentPoly::from_coeffs(2, 3, [(-2, c1), (1, c2)]).unwrap();
        assert_eq!(p.adjoint(), p.transpose().conjugate());
        let z = C64::from_polar(1.0, 0.3);
        assert!((p.adjoint().eval(z) - p.eval(z).adjoint()).norm() < 1e-14);
        assert!((p.conjugate().eval(z) - p.eval(z).map(|x| x.conj())).norm() < 1e-14);
    }

    #[test]
    fn dimension_errors() {
        let a = MatrixLaurentPoly::identity(2);
        let b = MatrixLaurentPoly::identity(3);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn prune_drops_cancelled_terms() {
        let p = MatrixLaurentPoly::scalar(&[(3, r(1.0)), (0, r(1.0))]);
        let q = p.sub(&MatrixLaurentPoly::z_pow(3)).unwrap();
        assert_eq!(q.band(), 0);
        assert_eq!(q, MatrixLaurentPoly::identity(1));
    }

    #[test]
    fn entries_and_blocks() {
        let zb = MatrixLaurentPoly::z_pow(-1);
        let zero = MatrixLaurentPoly::zeros(1, 1);
        let d = MatrixLaurentPoly::from_entries(&[vec![zb.clone(), zero.clone()], vec![zero, zb.scale(r(0.5))]]).unwrap();
        assert_eq!(d.entry(1, 1), zb.scale(r(0.5)));
        assert_eq!(MatrixLaurentPoly::block_diag(&zb, &zb.scale(r(0.5))), d);
        assert_eq!(d.block(1, 1, 1, 1), zb.scale(r(0.5)));
    }
}
