//! Finite sections of the Hankel operator `H_Φ f = P₋(Φf)` and the Toeplitz
//! operator `T_Φ f = P₊(Φf)` acting on vector polynomials of bounded degree.
//!
//! For a band-limited symbol the Hankel section is exact: `P₋(Φf)` has at most
//! `K` negative modes and coefficients of `f` beyond degree `K - 1` are
//! annihilated, so the norm stabilizes at finite degree. The Toeplitz section
//! is exact as a map into polynomials of degree `d + K₊`; its approximate null
//! space is the numerical stand-in for `Ker T_Φ`, whose elements need not be
//! polynomial.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::MatrixJson;
use crate::laurent::MatrixLaurentPoly;
use crate::linalg::{self, CMat, CVec, C64, ZERO};

/// Relative width of the top singular cluster treated as maximizing.
pub const TOP_CLUSTER_TOL: f64 = 1e-8;

/// Finite family of vector polynomials `f(z) = Σ_{t ≤ d} a_t z^t`, `a_t ∈ ℂⁿ`,
/// stored as coefficient vectors of length `n(d+1)` with block `t` holding `a_t`.
#[derive(Debug, Clone)]
pub struct PolySubspaceBasis {
    pub n: usize,
    pub degree: usize,
    pub basis: Vec<CVec>,
    /// Value of the defining constraint for each basis vector, normalized by its norm.
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub orthonormal: bool,
}

impl PolySubspaceBasis {
    pub fn empty(n: usize, degree: usize, tolerance: f64) -> Self {
        Self { n, degree, basis: vec![], residuals: vec![], tolerance, orthonormal: true }
    }

    /// From the columns of `m` (each of length `n(degree+1)`).
    pub fn from_columns(n: usize, degree: usize, m: &CMat, residuals: Vec<f64>, tolerance: f64, orthonormal: bool) -> Self {
        let basis = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
        Self { n, degree, basis, residuals, tolerance, orthonormal }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coefficient matrix with one column per basis vector.
    pub fn coeff_matrix(&self) -> CMat {
        let rows = self.n * (self.degree + 1);
        let mut m = CMat::zeros(rows, self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            m.set_column(j, b);
        }
        m
    }

    /// `f_i(ζ)`.
    pub fn eval(&self, i: usize, zeta: C64) -> CVec {
        eval_coeffs(&self.basis[i], self.n, zeta)
    }

    /// Matrix `[f_0(ζ) … f_{l-1}(ζ)]`.
    pub fn eval_all(&self, zeta: C64) -> CMat {
        let mut m = CMat::zeros(self.n, self.basis.len());
        for i in 0..self.basis.len() {
            m.set_column(i, &self.eval(i, zeta));
        }
        m
    }

    /// Same functions, coefficient vectors zero-padded to degree `d ≥ degree`.
    pub fn padded(&self, d: usize) -> Self {
        assert!(d >= self.degree);
        let len = self.n * (d + 1);
        let basis = self
            .basis
            .iter()
            .map(|b| {
                let mut v = CVec::zeros(len);
                v.rows_mut(0, b.len()).copy_from(b);
                v
            })
            .collect();
        Self { degree: d, basis, ..self.clone() }
    }

    /// `‖B*B − I‖_F` for the coefficient matrix.
    pub fn gram_error(&self) -> f64 {
        let b = self.coeff_matrix();
        (b.adjoint() * &b - CMat::identity(b.ncols(), b.ncols())).norm()
    }

    /// Basis vector `i` as an `n x 1` analytic symbol.
    pub fn to_poly(&self, i: usize) -> MatrixLaurentPoly {
        let c = (0..=self.degree).map(|t| (t as i32, CMat::from_column_slice(self.n, 1, self.basis[i].rows(t * self.n, self.n).as_slice())));
        MatrixLaurentPoly::from_coeffs(self.n, 1, c.collect::<Vec<_>>()).expect("column shape")
    }

    pub fn to_json(&self) -> BasisJson {
        let basis = self
            .basis
            .iter()
            .map(|b| MatrixJson::from_matrix(&CMat::from_fn(self.degree + 1, self.n, |t, i| b[t * self.n + i])))
            .collect();
        BasisJson {
            n: self.n,
            degree: self.degree,
            tolerance: self.tolerance,
            orthonormal: self.orthonormal,
            residuals: self.residuals.clone(),
            basis,
        }
    }

    pub fn from_json(j: &BasisJson) -> Result<Self> {
        let mut basis = Vec::with_capacity(j.basis.len());
        for (idx, m) in j.basis.iter().enumerate() {
            let mat = m.to_matrix(j.degree + 1, j.n, &format!("basis[{idx}]"))?;
            basis.push(CVec::from_fn(j.n * (j.degree + 1), |r, _| mat[(r / j.n, r % j.n)]));
        }
        Ok(Self { n: j.n, degree: j.degree, basis, residuals: j.residuals.clone(), tolerance: j.tolerance, orthonormal: j.orthonormal })
    }
}

/// Serialized basis: one `(degree+1) x n` table per function, row `t` = coefficient of `z^t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub n: usize,
    pub degree: usize,
    pub tolerance: f64,
    pub orthonormal: bool,
    pub residuals: Vec<f64>,
    pub basis: Vec<MatrixJson>,
}

pub(crate) fn eval_coeffs(coeffs: &CVec, n: usize, zeta: C64) -> CVec {
    let d = coeffs.len() / n;
    let mut out = CVec::zeros(n);
    // Horner
    for t in (0..d).rev() {
        out *= zeta;
        out += coeffs.rows(t * n, n);
    }
    out
}

/// Matrix of `f ↦ P₋(Φf)` from coefficients of `f` (degree ≤ `d`) to the
/// coefficients of `z̄^{i+1}`, `i = 0..K-1`; block `(i, t)` is `C_{-(i+t+1)}`.
pub fn hankel_block_matrix(phi: &MatrixLaurentPoly, d: usize) -> CMat {
    let (m, n) = (phi.rows(), phi.cols());
    let k = phi.antianalytic_band();
    let mut h = CMat::zeros(k * m, (d + 1) * n);
    for i in 0..k {
        for t in 0..=d {
            if let Some(c) = phi.coeff(-((i + t + 1) as i32)) {
                h.view_mut((i * m, t * n), (m, n)).copy_from(c);
            }
        }
    }
    h
}

/// Matrix of `f ↦ P₊(Φf)` from coefficients of `f` (degree ≤ `d`) to the
/// coefficients of `z^j`, `j = 0..=d+K₊`; block `(j, t)` is `C_{j-t}`.
pub fn toeplitz_block_matrix(phi: &MatrixLaurentPoly, d: usize) -> CMat {
    let (m, n) = (phi.rows(), phi.cols());
    let kp = phi.analytic_band();
    let out = d + kp + 1;
    let mut t_mat = CMat::zeros(out * m, (d + 1) * n);
    for j in 0..out {
        for t in 0..=d {
            if let Some(c) = phi.coeff(j as i32 - t as i32) {
                t_mat.view_mut((j * m, t * n), (m, n)).copy_from(c);
            }
        }
    }
    t_mat
}

#[derive(Debug, Clone)]
pub struct HankelRealization {
    pub degree: usize,
    pub matrix: CMat,
    pub singular_values: Vec<f64>,
    pub norm: f64,
    /// Right singular vectors in the top cluster, as analytic vector polynomials.
    pub maximizers: PolySubspaceBasis,
}

pub fn hankel_matrix(phi: &MatrixLaurentPoly, d: usize) -> HankelRealization {
    let matrix = hankel_block_matrix(phi, d);
    let n = phi.cols();
    let (s, v) = linalg::right_singular(&matrix);
    let norm = s.first().copied().unwrap_or(0.0);
    let maximizers = if norm <= 1e-14 {
        PolySubspaceBasis::empty(n, d, TOP_CLUSTER_TOL)
    } else {
        let idx: Vec<usize> = (0..s.len()).filter(|&i| s[i] >= norm * (1.0 - TOP_CLUSTER_TOL)).collect();
        let cols = CMat::from_columns(&idx.iter().map(|&i| v.column(i).into_owned()).collect::<Vec<_>>());
        let res = idx.iter().map(|&i| 1.0 - s[i] / norm).collect();
        PolySubspaceBasis::from_columns(n, d, &cols, res, TOP_CLUSTER_TOL, true)
    };
    HankelRealization { degree: d, matrix, singular_values: s, norm, maximizers }
}

#[derive(Debug, Clone)]
pub struct HankelNorm {
    pub norm: f64,
    pub maximizer: PolySubspaceBasis,
    pub stabilized_at: usize,
    /// Always 0 for band-limited symbols (finite-rank Hankel operator), so
    /// every nonzero superoptimal singular value exceeds it.
    pub essential_norm: f64,
}

/// Stabilized `‖H_Φ‖` with the full top maximizing subspace.
pub fn hankel_norm(phi: &MatrixLaurentPoly) -> Result<HankelNorm> {
    let d = phi.antianalytic_band();
    let at_d = hankel_matrix(phi, d);
    let next = hankel_matrix(phi, d + 1);
    if (at_d.norm - next.norm).abs() > 1e-12 * at_d.norm.max(1.0) {
        return Err(Error::InternalInconsistency(format!(
            "Hankel norm did not stabilize: {} at degree {d} vs {} at degree {}",
            at_d.norm,
            next.norm,
            d + 1
        )));
    }
    Ok(HankelNorm { norm: at_d.norm, maximizer: at_d.maximizers, stabilized_at: d, essential_norm: 0.0 })
}

/// ε-approximate kernel of the degree-`d` Toeplitz section.
pub fn toeplitz_kernel(phi: &MatrixLaurentPoly, d: usize, eps: f64) -> PolySubspaceBasis {
    let t = toeplitz_block_matrix(phi, d);
    let (basis, sv) = linalg::null_space(&t, eps);
    PolySubspaceBasis::from_columns(phi.cols(), d, &basis, sv, eps, true)
}

/// Given a maximizing vector `ξ` of `H_Φ` (coefficients, degree `d`), returns
/// `η = z̄ conj(H_Φ ξ)`, normalized, which maximizes `H_{Φᵗ}`.
pub fn maximizer_duality(phi: &MatrixLaurentPoly, xi: &CVec) -> Result<PolySubspaceBasis> {
    let n = phi.cols();
    if !xi.len().is_multiple_of(n) || xi.is_empty() {
        return Err(Error::InvalidInput("coefficient vector length is not a multiple of n".into()));
    }
    let d = xi.len() / n - 1;
    let hn = hankel_norm(phi)?;
    let h = hankel_block_matrix(phi, d);
    let hx = &h * xi;
    let ratio = if hn.norm > 0.0 { hx.norm() / (hn.norm * xi.norm()) } else { 0.0 };
    if !(ratio >= 1.0 - 1e-8) {
        return Err(Error::NotMaximizer { ratio });
    }
    // H_Φ ξ = Σ_i g_i z̄^{i+1}  ⇒  z̄ conj(H_Φ ξ) = Σ_i conj(g_i) z^i
    let eta = hx.map(|c| c.conj());
    let eta = &eta / C64::new(eta.norm(), 0.0);
    let m = phi.rows();
    let deg = eta.len() / m - 1;
    let pt = phi.transpose();
    let hnt = hankel_norm(&pt)?;
    let ht = hankel_block_matrix(&pt, deg);
    let ratio_t = if hnt.norm > 0.0 { (&ht * &eta).norm() / hnt.norm } else { 0.0 };
    let residual = (1.0 - ratio_t).abs();
    if residual > 1e-8 {
        return Err(Error::NotMaximizer { ratio: ratio_t });
    }
    Ok(PolySubspaceBasis { n: m, degree: deg, basis: vec![eta], residuals: vec![residual], tolerance: 1e-8, orthonormal: true })
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRecord {
    pub degree: usize,
    pub dimension: usize,
    /// Smallest singular value of the section not counted in the kernel.
    pub smallest_excluded: f64,
}

#[derive(Debug, Clone)]
pub struct KernelStabilization {
    pub degree: usize,
    pub dimension: usize,
    pub basis: PolySubspaceBasis,
    pub trajectory: Vec<DegreeRecord>,
}

fn kernel_with_gap(phi: &MatrixLaurentPoly, d: usize, eps: f64) -> (PolySubspaceBasis, f64) {
    let t = toeplitz_block_matrix(phi, d);
    let (s, _) = linalg::right_singular(&t);
    let excluded = s.iter().copied().filter(|&x| x > eps).fold(f64::INFINITY, f64::min);
    (toeplitz_kernel(phi, d, eps), excluded)
}

/// Smallest `d* ≥ dmin` at which the ε-kernel has the same dimension and,
/// up to principal angle 1e-3, the same span at degree `d* + 2`, and no
/// excluded singular value is still decaying toward ε (the next excluded
/// singular value has not halved).
pub fn kernel_stabilize(phi: &MatrixLaurentPoly, eps: f64, dmin: usize, dmax: usize) -> Result<KernelStabilization> {
    if dmin >= dmax {
        return Err(Error::InvalidInput(format!("dmin ({dmin}) must be below dmax ({dmax})")));
    }
    let mut cache: Vec<Option<(PolySubspaceBasis, f64)>> = vec![None; dmax + 1];
    let get = |d: usize, cache: &mut Vec<Option<(PolySubspaceBasis, f64)>>| {
        if cache[d].is_none() {
            cache[d] = Some(kernel_with_gap(phi, d, eps));
        }
        cache[d].clone().unwrap()
    };
    let mut trajectory = Vec::new();
    let mut d = dmin;
    while d + 2 <= dmax {
        let (k0, g0) = get(d, &mut cache);
        let (k2, g2) = get(d + 2, &mut cache);
        trajectory.push(DegreeRecord { degree: d, dimension: k0.len(), smallest_excluded: g0 });
        let same_dim = k0.len() == k2.len();
        let angle_ok = same_dim && linalg::subspace_distance(&k0.padded(d + 2).coeff_matrix(), &k2.coeff_matrix()) < 1e-3;
        let settled = !(g2 < 0.5 * g0);
        if same_dim && angle_ok && settled {
            trajectory.push(DegreeRecord { degree: d + 2, dimension: k2.len(), smallest_excluded: g2 });
            return Ok(KernelStabilization { degree: d, dimension: k0.len(), basis: k0, trajectory });
        }
        d += 1;
    }
    Err(Error::DegreeBudgetExhausted { dmax, trajectory: trajectory.iter().map(|r| (r.degree, r.dimension)).collect() })
}

/// `P₊(Φf)` coefficients for an analytic vector polynomial `f` given by its
/// coefficient vector; the norm of the result is the Toeplitz residual.
pub fn toeplitz_apply(phi: &MatrixLaurentPoly, coeffs: &CVec) -> CVec {
    let d = coeffs.len() / phi.cols() - 1;
    toeplitz_block_matrix(phi, d) * coeffs
}

/// Scalar helper: coefficient vector of a scalar analytic polynomial.
pub fn scalar_coeffs(c: &[C64]) -> CVec {
    if c.is_empty() {
        CVec::from_element(1, ZERO)
    } else {
        CVec::from_column_slice(c)
    }
}
