//! Matrix weights for the weighted Hankel estimate `‖H_Φ f‖² ≤ (Wf, f)`.
//!
//! A weight is stored by its values on the uniform grid. Weighted inner
//! products of vector polynomials are assembled by the trapezoid rule, which
//! is exact whenever `W` is a trigonometric polynomial of degree below
//! `N − 2d`. All spectral questions reduce to the Hermitian pencil
//! `(H*H, G)` with `H` the Hankel section and `G` the weighted Gram matrix.

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{hankel_block_matrix, PolySubspaceBasis};
use crate::laurent::{default_grid_size, eval_on_grid, singular_profile, GridSampling, MatrixLaurentPoly};
use crate::linalg::{self, gen_herm_eig, herm_eig, powi, root_of_unity, CMat, CVec, C64};
use crate::schmidt::{SubspaceFamily, SPAN_RANK_TOL};

/// Pencil eigenvalues within this distance of 1 count as extremal.
pub const EXTREMAL_TOL: f64 = 1e-6;
/// Admissibility allows `λ_max ≤ 1 + ADMISSIBLE_TOL`.
pub const ADMISSIBLE_TOL: f64 = 1e-8;
/// Tolerance of the C1 profile used to find the levels.
const PROFILE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSource {
    /// `max(Φ*Φ, σ²)` for the level with index `level`.
    Spectral { level: usize, sigma: f64 },
    /// `P_E W P_E ⊕ a² P_E⊥`.
    Pinched { a: f64, dimension: usize },
    Given,
}

/// Hermitian nonnegative `n x n` values on the grid `ζ_j = exp(2πij/N)`.
#[derive(Debug, Clone)]
pub struct MatrixWeight {
    pub n: usize,
    pub values: Vec<CMat>,
    pub source: WeightSource,
}

impl MatrixWeight {
    /// Symmetrizes each value and clips eigenvalues in `[-1e-10, 0)` to zero.
    pub fn new(n: usize, values: Vec<CMat>, source: WeightSource) -> Result<Self> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo(values.len()));
        }
        let mut out = Vec::with_capacity(values.len());
        for (j, w) in values.into_iter().enumerate() {
            if w.shape() != (n, n) {
                return Err(Error::DimensionMismatch { op: "weight", left: (n, n), right: w.shape() });
            }
            let h = (&w + w.adjoint()) * C64::new(0.5, 0.0);
            if (&h - &w).norm() > 1e-10 * w.norm().max(1.0) {
                return Err(Error::InvalidInput(format!("weight value {j} is not Hermitian")));
            }
            let (ev, v) = herm_eig(&h);
            if ev.last().is_some_and(|&e| e < -1e-10) {
                return Err(Error::InvalidInput(format!("weight value {j} has a negative eigenvalue")));
            }
            if ev.last().is_some_and(|&e| e < 0.0) {
                out.push(rebuild(&v, &ev.iter().map(|&e| e.max(0.0)).collect::<Vec<_>>()));
            } else {
                out.push(h);
            }
        }
        Ok(Self { n, values: out, source })
    }

    /// The constant weight `c` on `grid` points.
    pub fn constant(c: &CMat, grid: usize) -> Result<Self> {
        Self::new(c.nrows(), vec![c.clone(); grid], WeightSource::Given)
    }

    pub fn grid_len(&self) -> usize {
        self.values.len()
    }

    /// Smallest eigenvalue over the grid.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::par_map(self.values.len(), |j| herm_eig(&self.values[j]).0.last().copied().unwrap_or(0.0))
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// `max_j λ_max(A_j − W_j)`: nonpositive iff `A ≤ W` on the grid.
    pub fn excess_over(&self, a: &[CMat]) -> f64 {
        linalg::par_map(self.values.len(), |j| herm_eig(&(&a[j] - &self.values[j])).0[0])
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn rebuild(v: &CMat, ev: &[f64]) -> CMat {
    let d = CMat::from_diagonal(&CVec::from_iterator(ev.len(), ev.iter().map(|&e| C64::new(e, 0.0))));
    v * d * v.adjoint()
}

/// `Φ(ζ_j)*Φ(ζ_j)` on the grid.
pub fn gram_values(grid: &GridSampling) -> Vec<CMat> {
    linalg::par_map(grid.len(), |j| grid.value(j).adjoint() * grid.value(j))
}

/// `W_σ = max(Φ*Φ, σ²)` through the pointwise eigendecomposition.
pub fn spectral_weight(grid: &GridSampling, sigma: f64, level: usize) -> Result<MatrixWeight> {
    let n = grid.cols();
    let values = linalg::par_map(grid.len(), |j| {
        let p = grid.value(j).adjoint() * grid.value(j);
        let (ev, v) = herm_eig(&p);
        rebuild(&v, &ev.iter().map(|&e| e.max(sigma * sigma)).collect::<Vec<_>>())
    });
    MatrixWeight::new(n, values, WeightSource::Spectral { level, sigma })
}

/// `W_k` for the level `σ_k` of the singular profile of `Φ`.
pub fn weight_from_phi(phi: &MatrixLaurentPoly, k: usize, grid: Option<usize>) -> Result<MatrixWeight> {
    let g = eval_on_grid(phi, grid.unwrap_or_else(|| default_grid_size(phi.band())))?;
    let profile = singular_profile(&g, PROFILE_TOL);
    let sigma = *profile
        .levels
        .get(k)
        .ok_or_else(|| Error::InvalidInput(format!("level {k} does not exist ({} positive levels)", profile.iota())))?;
    spectral_weight(&g, sigma, k)
}

/// Gram matrix of `(Wf, g)` on vector polynomials of degree ≤ `d` together
/// with the Hankel section at the same degree.
#[derive(Debug, Clone)]
pub struct WeightedGram {
    pub degree: usize,
    pub gram: CMat,
    pub hankel: CMat,
}

impl WeightedGram {
    pub fn new(phi: &MatrixLaurentPoly, w: &MatrixWeight, d: usize) -> Result<Self> {
        let n = phi.cols();
        if w.n != n {
            return Err(Error::DimensionMismatch { op: "weighted gram", left: (w.n, w.n), right: (phi.rows(), n) });
        }
        let npts = w.grid_len();
        if npts < 2 * d + 2 {
            return Err(Error::GridTooSmall { n: npts, band: d, required: 2 * d + 2 });
        }
        let dim = (d + 1) * n;
        let parts = linalg::par_map(npts, |j| {
            let z = root_of_unity(j, npts);
            let mut b = CMat::zeros(n, dim);
            for t in 0..=d {
                let zt = powi(z, t as i32);
                for c in 0..n {
                    b[(c, t * n + c)] = zt;
                }
            }
            b.adjoint() * &w.values[j] * b
        });
        let mut gram = CMat::zeros(dim, dim);
        for p in parts {
            gram += p;
        }
        gram /= C64::new(npts as f64, 0.0);
        let gram = (&gram + gram.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self { degree: d, gram, hankel: hankel_block_matrix(phi, d) })
    }

    pub fn hh(&self) -> CMat {
        self.hankel.adjoint() * &self.hankel
    }

    /// Generalized eigenpairs of `(H*H, G)`, descending, `G`-orthonormal.
    pub fn pencil(&self) -> Result<(Vec<f64>, CMat)> {
        gen_herm_eig(&self.hh(), &self.gram).ok_or_else(|| Error::SingularGram { min_eigenvalue: min_eig(&self.gram) })
    }
}

fn min_eig(h: &CMat) -> f64 {
    herm_eig(h).0.last().copied().unwrap_or(0.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleReport {
    pub degree: usize,
    pub lambda_max: f64,
    pub pass: bool,
    /// `(d, λ_max(d))` for each degree tried.
    pub trajectory: Vec<(usize, f64)>,
    pub stabilized: bool,
}

/// `λ_max` of `(H*H, G)` from degree `d` upwards until two consecutive
/// degrees agree to 1e-10 (at most 16 extra degrees).
pub fn admissible_check(phi: &MatrixLaurentPoly, w: &MatrixWeight, d: usize) -> Result<AdmissibleReport> {
    let mut trajectory = Vec::new();
    let mut stabilized = false;
    let mut deg = d;
    loop {
        let wg = WeightedGram::new(phi, w, deg)?;
        let lam = wg.pencil()?.0.first().copied().unwrap_or(0.0);
        trajectory.push((deg, lam));
        if trajectory.len() >= 2 {
            let prev = trajectory[trajectory.len() - 2].1;
            if (lam - prev).abs() <= 1e-10 * lam.abs().max(1.0) {
                stabilized = true;
                break;
            }
        }
        if deg >= d + 16 || 2 * (deg + 1) + 2 > w.grid_len() {
            break;
        }
        deg += 1;
    }
    let (degree, lambda_max) = *trajectory.last().expect("at least one degree");
    Ok(AdmissibleReport { degree, lambda_max, pass: lambda_max <= 1.0 + ADMISSIBLE_TOL, trajectory, stabilized })
}

/// Extremal functions of the weighted estimate and their pointwise span.
#[derive(Debug, Clone)]
pub struct ExtremalSet {
    /// `G`-orthonormal coefficient vectors of the extremal functions.
    pub basis: PolySubspaceBasis,
    pub eigenvalues: Vec<f64>,
    /// `E(ζ_j) = span{f(ζ_j) : f extremal}` on the weight's grid.
    pub family: SubspaceFamily,
}

/// Pencil eigenvectors with eigenvalue within [`EXTREMAL_TOL`] of 1.
pub fn extremal_subspace(phi: &MatrixLaurentPoly, w: &MatrixWeight, d: usize) -> Result<ExtremalSet> {
    let n = phi.cols();
    let wg = WeightedGram::new(phi, w, d)?;
    let (vals, vecs) = wg.pencil()?;
    if vals.first().is_some_and(|&l| l > 1.0 + EXTREMAL_TOL) {
        return Err(Error::InvalidInput(format!("weight is not admissible at degree {d} (λ_max = {})", vals[0])));
    }
    let idx: Vec<usize> = (0..vals.len()).filter(|&i| (vals[i] - 1.0).abs() <= EXTREMAL_TOL).collect();
    let cols: Vec<CVec> = idx.iter().map(|&i| vecs.column(i).into_owned()).collect();
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
    let basis = if cols.is_empty() {
        PolySubspaceBasis::empty(n, d, EXTREMAL_TOL)
    } else {
        let res = eigenvalues.iter().map(|l| (l - 1.0).abs()).collect();
        PolySubspaceBasis::from_columns(n, d, &CMat::from_columns(&cols), res, EXTREMAL_TOL, false)
    };
    let npts = w.grid_len();
    let bases = linalg::par_map(npts, |j| {
        if basis.is_empty() {
            return CMat::zeros(n, 0);
        }
        let vals = basis.eval_all(root_of_unity(j, npts));
        let top = linalg::norm2(&vals);
        linalg::range_basis(&vals, SPAN_RANK_TOL * top.max(1e-300))
    });
    Ok(ExtremalSet { basis, eigenvalues, family: SubspaceFamily::from_bases(n, bases, SPAN_RANK_TOL) })
}

/// `q = sqrt(λ_max)` of the pencil restricted to the `G`-orthogonal
/// complement of the extremal coefficient span; 0 when that complement is empty.
pub fn q_value(phi: &MatrixLaurentPoly, w: &MatrixWeight, ext: &ExtremalSet, d: usize) -> Result<f64> {
    if ext.basis.is_empty() {
        return Err(Error::EmptyExtremalSet);
    }
    let wg = WeightedGram::new(phi, w, d)?;
    let e = ext.basis.padded(d).coeff_matrix();
    let (comp, _) = linalg::null_space(&(e.adjoint() * &wg.gram), 1e-10 * wg.gram.norm().max(1.0));
    if comp.ncols() == 0 {
        return Ok(0.0);
    }
    let a = comp.adjoint() * wg.hh() * &comp;
    let b = comp.adjoint() * &wg.gram * &comp;
    let (vals, _) = gen_herm_eig(&a, &b).ok_or_else(|| Error::SingularGram { min_eigenvalue: min_eig(&b) })?;
    Ok(vals.first().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// `P_E W P_E + a² P_E⊥` pointwise.
pub fn pinch(w: &MatrixWeight, e: &SubspaceFamily, a: f64) -> Result<MatrixWeight> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("pinch parameter must be positive, got {a}")));
    }
    if !e.constant_dim {
        return Err(Error::FlaggedFamily);
    }
    if e.grid_len() != w.grid_len() || e.n != w.n {
        return Err(Error::DimensionMismatch { op: "pinch", left: (w.grid_len(), w.n), right: (e.grid_len(), e.n) });
    }
    let n = w.n;
    let values = linalg::par_map(w.grid_len(), |j| {
        let b = &e.bases[j];
        let p = b * b.adjoint();
        let q = CMat::identity(n, n) - &p;
        &p * &w.values[j] * &p + q * C64::new(a * a, 0.0)
    });
    MatrixWeight::new(n, values, WeightSource::Pinched { a, dimension: e.dimension })
}

/// Largest `|⟨H f, H g⟩| / (‖Hf‖ ‖Hg‖)` over extremal `f` and seeded random
/// `g` that are `W`-orthogonal to the extremal set. Zero up to rounding when
/// the extremal vectors are maximizing vectors of `H` in the weighted norm.
pub fn orthogonality_residual(phi: &MatrixLaurentPoly, w: &MatrixWeight, ext: &ExtremalSet, samples: usize, seed: u64) -> Result<f64> {
    if ext.basis.is_empty() {
        return Err(Error::EmptyExtremalSet);
    }
    let d = ext.basis.degree;
    let wg = WeightedGram::new(phi, w, d)?;
    let e = ext.basis.coeff_matrix();
    let eg = e.adjoint() * &wg.gram;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = e.nrows();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let r = CVec::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        // E is G-orthonormal, so this is the G-orthogonal projection
        let g = &r - &e * (&eg * &r);
        let hg = &wg.hankel * &g;
        let ng = hg.norm();
        if ng <= 1e-12 * r.norm() {
            continue;
        }
        for i in 0..e.ncols() {
            let hf = &wg.hankel * e.column(i);
            let nf = hf.norm();
            if nf > 0.0 {
                worst = worst.max(hf.dotc(&hg).norm() / (nf * ng));
            }
        }
    }
    Ok(worst)
}

/// The pieces of the weighted argument for one level, as numbers.
#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    pub level: usize,
    pub sigma: f64,
    pub degree: usize,
    /// `max_j λ_max(Φ*Φ − W)`, nonpositive for a valid majorant.
    pub majorant_excess: f64,
    pub admissible: AdmissibleReport,
    pub extremal_dimension: usize,
    pub extremal_pointwise_dimension: usize,
    pub extremal_constant_dim: bool,
    /// Largest principal angle between `E_k` and the Schmidt family at `σ_k`.
    pub schmidt_distance: Option<f64>,
    pub q: f64,
    pub pinch_a: f64,
    pub pinched_admissible: Option<AdmissibleReport>,
    pub orthogonality_residual: f64,
}

/// Runs the whole chain for level `k` at degree `d`.
pub fn weight_report(phi: &MatrixLaurentPoly, k: usize, d: usize, grid: Option<usize>) -> Result<WeightReport> {
    let g = eval_on_grid(phi, grid.unwrap_or_else(|| default_grid_size(phi.band().max(d))))?;
    let profile = singular_profile(&g, PROFILE_TOL);
    let sigma = *profile
        .levels
        .get(k)
        .ok_or_else(|| Error::InvalidInput(format!("level {k} does not exist ({} positive levels)", profile.iota())))?;
    let w = spectral_weight(&g, sigma, k)?;
    let majorant_excess = w.excess_over(&gram_values(&g));
    let admissible = admissible_check(phi, &w, d)?;
    let ext = extremal_subspace(phi, &w, d)?;
    let schmidt_distance = crate::schmidt::schmidt_family(&g, sigma, profile.tolerance.max(1e-9))
        .ok()
        .filter(|_| ext.family.constant_dim)
        .map(|s| ext.family.distance(&s));
    let (q, pinch_a, pinched_admissible, orthogonality_residual) = if ext.basis.is_empty() {
        (f64::NAN, f64::NAN, None, f64::NAN)
    } else {
        let q = q_value(phi, &w, &ext, d)?;
        let a = q * sigma;
        let pinched = if a > 0.0 && ext.family.constant_dim {
            Some(admissible_check(phi, &pinch(&w, &ext.family, a)?, d)?)
        } else {
            None
        };
        (q, a, pinched, orthogonality_residual(phi, &w, &ext, 16, 0)?)
    };
    Ok(WeightReport {
        level: k,
        sigma,
        degree: d,
        majorant_excess,
        admissible,
        extremal_dimension: ext.basis.len(),
        extremal_pointwise_dimension: ext.family.dimension,
        extremal_constant_dim: ext.family.constant_dim,
        schmidt_distance,
        q,
        pinch_a,
        pinched_admissible,
        orthogonality_residual,
    })
}

/// Commutator `max_j ‖W_j A_j − A_j W_j‖` against pointwise matrices `A_j`.
pub fn commutator_norm(w: &MatrixWeight, a: &[CMat]) -> f64 {
    w.values.iter().zip(a).map(|(x, y)| (x * y - y * x).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::paper_example;
    use crate::linalg::ONE;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag2(a: MatrixLaurentPoly, b: MatrixLaurentPoly) -> MatrixLaurentPoly {
        MatrixLaurentPoly::block_diag(&a, &b)
    }

    #[test]
    fn weights_of_simple_symbols() {
        let w = weight_from_phi(&MatrixLaurentPoly::z_pow(-1), 0, None).unwrap();
        assert!(w.values.iter().all(|v| (v - CMat::identity(1, 1)).norm() < 1e-12));
        let phi = diag2(MatrixLaurentPoly::z_pow(-1), MatrixLaurentPoly::monomial(-1, r(0.5)));
        let w0 = weight_from_phi(&phi, 0, None).unwrap();
        assert!(w0.values.iter().all(|v| (v - CMat::identity(2, 2)).norm() < 1e-12));
        let w1 = weight_from_phi(&phi, 1, None).unwrap();
        let want = CMat::from_diagonal(&CVec::from_vec(vec![ONE, r(0.25)]));
        assert!(w1.values.iter().all(|v| (v - &want).norm() < 1e-12));
        assert!(weight_from_phi(&phi, 2, None).is_err());
    }

    #[test]
    fn admissibility_of_constant_weights() {
        let phi = MatrixLaurentPoly::z_pow(-1);
        let one = MatrixWeight::constant(&CMat::identity(1, 1), 64).unwrap();
        let rep = admissible_check(&phi, &one, 2).unwrap();
        assert!((rep.lambda_max - 1.0).abs() < 1e-12 && rep.pass && rep.stabilized);
        let quarter = MatrixWeight::constant(&CMat::from_element(1, 1, r(0.25)), 64).unwrap();
        let rep = admissible_check(&phi, &quarter, 2).unwrap();
        assert!((rep.lambda_max - 4.0).abs() < 1e-10 && !rep.pass);
        let zero = MatrixWeight::constant(&CMat::zeros(1, 1), 64).unwrap();
        assert!(matches!(admissible_check(&phi, &zero, 2), Err(Error::SingularGram { .. })));
    }

    #[test]
    fn extremal_sets_of_diagonal_symbol() {
        let phi = diag2(MatrixLaurentPoly::z_pow(-1), MatrixLaurentPoly::monomial(-3, r(0.5)));
        let d = 6;
        let w0 = weight_from_phi(&phi, 0, None).unwrap();
        let e0 = extremal_subspace(&phi, &w0, d).unwrap();
        assert_eq!(e0.basis.len(), 1);
        assert!(e0.family.constant_dim && e0.family.dimension == 1);
        let e1vec = CMat::from_column_slice(2, 1, &[ONE, r(0.0)]);
        assert!(e0.family.bases.iter().all(|b| linalg::subspace_distance(b, &e1vec) < 1e-10));
        let q = q_value(&phi, &w0, &e0, d).unwrap();
        assert!((q - 0.5).abs() < 1e-10, "{q}");
        let w1 = weight_from_phi(&phi, 1, None).unwrap();
        let e1 = extremal_subspace(&phi, &w1, d).unwrap();
        assert_eq!(e1.basis.len(), 4);
        assert!(e1.family.constant_dim && e1.family.dimension == 2);
    }

    #[test]
    fn scalar_q_value() {
        let phi = MatrixLaurentPoly::z_pow(-1);
        let w = weight_from_phi(&phi, 0, None).unwrap();
        let e = extremal_subspace(&phi, &w, 3).unwrap();
        assert_eq!(e.basis.len(), 1);
        // H_{z̄} vanishes on zH², so nothing outside the constants is seen
        assert!(q_value(&phi, &w, &e, 3).unwrap() < 1e-12);
    }

    #[test]
    fn full_extremal_space_gives_zero_q() {
        // W = Φ*Φ + nothing: with Φ = z̄ at degree 0 the only function is the constant
        let phi = MatrixLaurentPoly::z_pow(-1);
        let w = weight_from_phi(&phi, 0, None).unwrap();
        let e = extremal_subspace(&phi, &w, 0).unwrap();
        assert_eq!(q_value(&phi, &w, &e, 0).unwrap(), 0.0);
        let empty = ExtremalSet {
            basis: PolySubspaceBasis::empty(1, 0, EXTREMAL_TOL),
            eigenvalues: vec![],
            family: e.family.clone(),
        };
        assert!(matches!(q_value(&phi, &w, &empty, 0), Err(Error::EmptyExtremalSet)));
    }

    #[test]
    fn pinch_examples() {
        let w = MatrixWeight::constant(&CMat::identity(2, 2), 16).unwrap();
        let full = SubspaceFamily::from_bases(2, vec![CMat::identity(2, 2); 16], 1e-9);
        let p = pinch(&w, &full, 0.3).unwrap();
        assert!(p.values.iter().zip(&w.values).all(|(a, b)| (a - b).norm() < 1e-14));
        let e1 = SubspaceFamily::from_bases(2, vec![CMat::from_column_slice(2, 1, &[ONE, r(0.0)]); 16], 1e-9);
        let p = pinch(&w, &e1, 0.5).unwrap();
        let want = CMat::from_diagonal(&CVec::from_vec(vec![ONE, r(0.25)]));
        assert!(p.values.iter().all(|v| (v - &want).norm() < 1e-14));
        assert!(pinch(&w, &e1, 0.0).is_err());
        let mut ragged = e1.clone();
        ragged.bases[3] = CMat::identity(2, 2);
        let ragged = SubspaceFamily::from_bases(2, ragged.bases, 1e-9);
        assert!(matches!(pinch(&w, &ragged, 0.5), Err(Error::FlaggedFamily)));
        // monotone in a
        let lo = pinch(&w, &e1, 0.2).unwrap();
        let hi = pinch(&w, &e1, 0.7).unwrap();
        assert!(hi.excess_over(&lo.values) <= 1e-14);
    }

    #[test]
    fn shifted_example_chain() {
        let phi = paper_example("ex3_shifted").unwrap().0;
        let rep = weight_report(&phi, 0, 10, None).unwrap();
        assert!(rep.majorant_excess <= 1e-12);
        assert!((rep.admissible.lambda_max - 1.0).abs() <= 1e-6, "{:?}", rep.admissible);
        assert!(rep.schmidt_distance.unwrap() <= 1e-4);
        assert!(rep.q < 1.0 - 1e-4);
        assert!(rep.pinched_admissible.as_ref().unwrap().lambda_max <= 1.0 + 1e-8);
        assert!(rep.orthogonality_residual <= 1e-8, "{}", rep.orthogonality_residual);
    }

    #[test]
    fn diagonal_example_chain() {
        let phi = diag2(MatrixLaurentPoly::z_pow(-1), MatrixLaurentPoly::monomial(-3, r(0.5)));
        let rep = weight_report(&phi, 0, 8, None).unwrap();
        assert!((rep.admissible.lambda_max - 1.0).abs() <= 1e-6);
        assert!(rep.schmidt_distance.unwrap() <= 1e-4);
        assert!((rep.q - 0.5).abs() < 1e-10);
        assert!((rep.pinch_a - 0.5).abs() < 1e-10);
        assert!(rep.pinched_admissible.as_ref().unwrap().pass);
        assert!(rep.orthogonality_residual <= 1e-8);
    }

    #[test]
    fn spectral_weight_commutes_and_majorizes() {
        let phi = paper_example("ex3").unwrap().0;
        let g = eval_on_grid(&phi, 256).unwrap();
        let gv = gram_values(&g);
        for (k, sigma) in [0.5, 0.25, 1.0].into_iter().enumerate() {
            let w = spectral_weight(&g, sigma, k).unwrap();
            assert!(w.excess_over(&gv) <= 1e-12);
            assert!(commutator_norm(&w, &gv) <= 1e-12);
        }
    }
}
