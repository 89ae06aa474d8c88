//! Pointwise subspace families on the grid and the search for analytic
//! (polynomial) functions spanning them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{toeplitz_block_matrix, PolySubspaceBasis};
use crate::laurent::{GridSampling, MatrixLaurentPoly};
use crate::linalg::{self, CMat, C64};

/// Fraction of grid points at which a pointwise condition must hold.
pub const AE_FRACTION: f64 = 0.99;
/// Relative singular-value threshold for pointwise span ranks.
pub const SPAN_RANK_TOL: f64 = 1e-6;

/// Per-point orthonormal bases `B(ζ_j)` (n x r_j) of subspaces of ℂⁿ.
#[derive(Debug, Clone)]
pub struct SubspaceFamily {
    pub n: usize,
    pub bases: Vec<CMat>,
    /// Most common pointwise dimension.
    pub dimension: usize,
    /// False when the pointwise dimension varies over the grid.
    pub constant_dim: bool,
    /// Minimum over the grid of (smallest included − largest excluded singular value).
    pub gap: f64,
    pub tolerance: f64,
}

impl SubspaceFamily {
    /// Family from explicit orthonormal bases; `gap` is left infinite.
    pub fn from_bases(n: usize, bases: Vec<CMat>, tol: f64) -> Self {
        let dims: Vec<usize> = bases.iter().map(|b| b.ncols()).collect();
        let dimension = mode(&dims);
        let constant_dim = dims.iter().all(|&d| d == dimension);
        SubspaceFamily { n, bases, dimension, constant_dim, gap: f64::INFINITY, tolerance: tol }
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Grid size the family lives on.
    pub fn grid_len(&self) -> usize {
        self.bases.len()
    }

    /// `max_j ‖B_j* B_j − I‖_F`.
    pub fn orthonormality_error(&self) -> f64 {
        self.bases
            .iter()
            .map(|b| (b.adjoint() * b - CMat::identity(b.ncols(), b.ncols())).norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise basis of the complement (projector `I − BB*`).
    pub fn complement_projector(&self, j: usize) -> CMat {
        let b = &self.bases[j];
        CMat::identity(self.n, self.n) - b * b.adjoint()
    }

    /// Largest pointwise principal angle to `other` on the same grid.
    pub fn distance(&self, other: &SubspaceFamily) -> f64 {
        self.bases
            .iter()
            .zip(&other.bases)
            .map(|(a, b)| linalg::subspace_distance(a, b))
            .fold(0.0, f64::max)
    }

    /// Largest sine of the angle by which `self` leaves `other` pointwise.
    pub fn contained_in(&self, other: &SubspaceFamily) -> f64 {
        self.bases
            .iter()
            .zip(&other.bases)
            .map(|(a, b)| linalg::containment_gap(a, b))
            .fold(0.0, f64::max)
    }
}

fn mode(dims: &[usize]) -> usize {
    let max = dims.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; max + 1];
    for &d in dims {
        counts[d] += 1;
    }
    // ties resolve to the smaller dimension
    (0..=max).max_by_key(|&d| (counts[d], std::cmp::Reverse(d))).unwrap_or(0)
}

fn family_from_selection<F>(grid: &GridSampling, tol: f64, select: F) -> SubspaceFamily
where
    F: Fn(&[f64]) -> usize + Sync,
{
    let n = grid.cols();
    let parts = linalg::par_map(grid.len(), |j| {
        let d = grid.svd(j);
        let r = select(&d.s);
        let lo = if r > 0 { d.s[r - 1] } else { f64::INFINITY };
        let hi = d.s.get(r).copied().unwrap_or(0.0);
        let gap = if r == 0 { f64::INFINITY } else { lo - hi };
        (d.v.columns(0, r).into_owned(), gap)
    });
    let dims: Vec<usize> = parts.iter().map(|(b, _)| b.ncols()).collect();
    let dimension = mode(&dims);
    let constant_dim = dims.iter().all(|&d| d == dimension);
    let gap = parts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    SubspaceFamily { n, bases: parts.into_iter().map(|p| p.0).collect(), dimension, constant_dim, gap, tolerance: tol }
}

/// `𝔖^{(σ)}(ζ_j)`: span of right singular vectors with `s ≥ σ − tol`.
/// Errors if at some point the smallest included and the largest excluded
/// singular values are within `tol` of each other.
pub fn schmidt_family(grid: &GridSampling, sigma: f64, tol: f64) -> Result<SubspaceFamily> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput(format!("level must be positive, got {sigma}")));
    }
    let fam = family_from_selection(grid, tol, |s| s.iter().take_while(|&&x| x >= sigma - tol).count());
    if fam.gap <= tol {
        let point = (0..grid.len())
            .find(|&j| {
                let s = &grid.svd(j).s;
                let r = s.iter().take_while(|&&x| x >= sigma - tol).count();
                r > 0 && s[r - 1] - s.get(r).copied().unwrap_or(0.0) <= tol
            })
            .unwrap_or(0);
        return Err(Error::LevelNotSeparated { sigma, gap: fam.gap, point });
    }
    Ok(fam)
}

/// `(Ker Φ(ζ_j))^⊥`: span of right singular vectors with `s > tol`.
pub fn pointwise_kernel_family(grid: &GridSampling, tol: f64) -> SubspaceFamily {
    family_from_selection(grid, tol, |s| s.iter().take_while(|&&x| x > tol).count())
}

/// Approximate null space, over vector polynomials of degree ≤ `d` in ℂⁿ, of
/// the stacked system `M_j f(ζ_j) = 0` (each block weighted `1/√N`) plus an
/// optional extra block acting directly on coefficients.
pub fn poly_constraint_null_space<F>(
    n: usize,
    d: usize,
    points: &[C64],
    block: F,
    extra: Option<&CMat>,
    tol: f64,
) -> (CMat, Vec<f64>)
where
    F: Fn(usize) -> CMat + Sync,
{
    let npts = points.len();
    let w = 1.0 / (npts as f64).sqrt();
    let blocks = linalg::par_map(npts, |j| {
        let m = block(j);
        let mut rows = CMat::zeros(m.nrows(), n * (d + 1));
        let mut zt = C64::new(w, 0.0);
        for t in 0..=d {
            rows.view_mut((0, t * n), (m.nrows(), n)).copy_from(&(&m * zt));
            zt *= points[j];
        }
        rows
    });
    let extra_rows = extra.map_or(0, |e| e.nrows());
    let total: usize = blocks.iter().map(|b| b.nrows()).sum::<usize>() + extra_rows;
    let mut a = CMat::zeros(total, n * (d + 1));
    let mut r0 = 0;
    for b in &blocks {
        a.view_mut((r0, 0), b.shape()).copy_from(b);
        r0 += b.nrows();
    }
    if let Some(e) = extra {
        a.view_mut((r0, 0), e.shape()).copy_from(e);
    }
    linalg::null_space(&a, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanSolution {
    pub degree: usize,
    #[serde(skip)]
    pub basis: PolySubspaceBasis,
    /// Per grid point rank of the basis values projected onto the family.
    #[serde(skip)]
    pub point_ranks: Vec<usize>,
    pub required_rank: usize,
    /// Fraction of grid points with full required rank.
    pub fraction: f64,
    pub success: bool,
    /// `‖P₊(Φf)‖` per basis function when a side constraint was used.
    pub side_residuals: Vec<f64>,
    /// RMS of `‖P^⊥ f‖` over the grid, per basis function.
    pub membership_residuals: Vec<f64>,
}

/// Searches for polynomials of degree ≤ `d` lying pointwise in `family` (and in
/// the ε-kernel of `T_side` when given) whose values span `family` at
/// ≥ 99% of grid points. `points` are the grid points the family lives on.
pub fn analytic_span_solve(
    family: &SubspaceFamily,
    points: &[C64],
    d: usize,
    eps: f64,
    side: Option<&MatrixLaurentPoly>,
) -> SpanSolution {
    span_solve_with_rank(family, points, d, eps, side, family.dimension)
}

/// As [`analytic_span_solve`] with an explicit target rank (1 for a single
/// maximizing function).
pub fn span_solve_with_rank(
    family: &SubspaceFamily,
    points: &[C64],
    d: usize,
    eps: f64,
    side: Option<&MatrixLaurentPoly>,
    required_rank: usize,
) -> SpanSolution {
    let n = family.n;
    let side_mat = side.map(|phi| {
        let t = toeplitz_block_matrix(phi, d);
        let scale = linalg::norm2(&t).max(f64::MIN_POSITIVE);
        (t.clone() * C64::new(10.0 / (eps * scale), 0.0), t)
    });
    let (basis_m, sv) =
        poly_constraint_null_space(n, d, points, |j| family.complement_projector(j), side_mat.as_ref().map(|p| &p.0), eps);
    let basis = PolySubspaceBasis::from_columns(n, d, &basis_m, sv, eps, true);
    let side_residuals = match &side_mat {
        Some((_, t)) => basis.basis.iter().map(|b| (t * b).norm()).collect(),
        None => vec![],
    };
    let npts = points.len();
    let membership_residuals = basis
        .basis
        .iter()
        .map(|b| {
            let s: f64 = (0..npts)
                .map(|j| (family.complement_projector(j) * crate::hankel::eval_coeffs(b, n, points[j])).norm_squared())
                .sum();
            (s / npts as f64).sqrt()
        })
        .collect();
    let point_ranks = pointwise_ranks(family, &basis, points);
    let fraction = if npts == 0 {
        0.0
    } else {
        point_ranks.iter().filter(|&&r| r >= required_rank).count() as f64 / npts as f64
    };
    let success = !basis.is_empty() && required_rank > 0 && fraction >= AE_FRACTION;
    SpanSolution { degree: d, basis, point_ranks, required_rank, fraction, success, side_residuals, membership_residuals }
}

/// Rank of `B(ζ_j)* [f_1(ζ_j) …]` per point, relative threshold 1e-6.
pub fn pointwise_ranks(family: &SubspaceFamily, basis: &PolySubspaceBasis, points: &[C64]) -> Vec<usize> {
    if basis.is_empty() {
        return vec![0; points.len()];
    }
    let coords = linalg::par_map(points.len(), |j| family.bases[j].adjoint() * basis.eval_all(points[j]));
    let scale = coords.iter().map(linalg::norm2).fold(0.0, f64::max);
    coords.iter().map(|c| linalg::rank(c, SPAN_RANK_TOL * scale)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanAttempt {
    pub degree: usize,
    pub solutions: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone)]
pub struct SpanSearch {
    pub found: Option<SpanSolution>,
    pub trajectory: Vec<SpanAttempt>,
    pub dmax: usize,
}

/// Degrees tried by the searches: `dmin`, then doubling, always ending at `dmax`.
pub fn degree_schedule(dmin: usize, dmax: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = dmin.min(dmax);
    loop {
        out.push(d);
        if d >= dmax {
            break;
        }
        d = (2 * d).max(d + 1).min(dmax);
    }
    out
}

/// Runs [`span_solve_with_rank`] along the degree schedule and stops at the first success.
pub fn analytic_span_search(
    family: &SubspaceFamily,
    points: &[C64],
    eps: f64,
    side: Option<&MatrixLaurentPoly>,
    required_rank: usize,
    dmin: usize,
    dmax: usize,
) -> SpanSearch {
    let mut trajectory = vec![];
    for d in degree_schedule(dmin, dmax) {
        let sol = span_solve_with_rank(family, points, d, eps, side, required_rank);
        trajectory.push(SpanAttempt { degree: d, solutions: sol.basis.len(), fraction: sol.fraction });
        if sol.success {
            return SpanSearch { found: Some(sol), trajectory, dmax };
        }
    }
    SpanSearch { found: None, trajectory, dmax }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::eval_on_grid;
    use crate::linalg::{CVec, ONE, ZERO};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag_zbar_half_zbar() -> MatrixLaurentPoly {
        MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::z_pow(-1), &MatrixLaurentPoly::monomial(-1, r(0.5)))
    }

    #[test]
    fn diagonal_families() {
        let g = eval_on_grid(&diag_zbar_half_zbar(), 256).unwrap();
        let f1 = schmidt_family(&g, 1.0, 1e-6).unwrap();
        assert_eq!(f1.dimension, 1);
        assert!(f1.constant_dim);
        for b in &f1.bases {
            assert!((b[(0, 0)].norm() - 1.0).abs() < 1e-12 && b[(1, 0)].norm() < 1e-12);
        }
        let f2 = schmidt_family(&g, 0.5, 1e-6).unwrap();
        assert_eq!(f2.dimension, 2);
        assert!(f2.orthonormality_error() < 1e-10);
        assert!(f1.contained_in(&f2) < 1e-8);
    }

    #[test]
    fn unseparated_level_is_rejected() {
        // 0.9891 falls inside the family, 0.9889 just outside
        let phi = MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::z_pow(-1), &MatrixLaurentPoly::monomial(-1, r(0.9891)));
        let phi = MatrixLaurentPoly::block_diag(&phi, &MatrixLaurentPoly::monomial(-1, r(0.9889)));
        let g = eval_on_grid(&phi, 256).unwrap();
        assert!(matches!(schmidt_family(&g, 0.99, 1e-3), Err(Error::LevelNotSeparated { .. })));
        assert_eq!(schmidt_family(&g, 0.99, 1e-5).unwrap().dimension, 1);
    }

    #[test]
    fn row_space_families() {
        let phi = MatrixLaurentPoly::from_entries(&[vec![MatrixLaurentPoly::z_pow(-1), MatrixLaurentPoly::zeros(1, 1)]]).unwrap();
        let g = eval_on_grid(&phi, 256).unwrap();
        let f = pointwise_kernel_family(&g, 1e-6);
        assert_eq!((f.dimension, f.n), (1, 2));
        assert!(f.bases.iter().all(|b| (b[(0, 0)] - ONE).norm() < 1e-12));
        let g = eval_on_grid(&MatrixLaurentPoly::identity(2).shift(-1), 256).unwrap();
        assert_eq!(pointwise_kernel_family(&g, 1e-6).dimension, 2);
    }

    #[test]
    fn constant_family_solves_at_degree_zero() {
        let g = eval_on_grid(&diag_zbar_half_zbar(), 256).unwrap();
        let fam = schmidt_family(&g, 1.0, 1e-6).unwrap();
        let sol = analytic_span_solve(&fam, &g.points(), 0, 1e-6, None);
        assert!(sol.success);
        assert_eq!(sol.basis.len(), 1);
        let e1 = CVec::from_column_slice(&[ONE, ZERO]);
        assert!((&sol.basis.basis[0] - e1).norm() < 1e-12);
    }

    #[test]
    fn side_constraint_keeps_kernel_elements() {
        let phi = diag_zbar_half_zbar();
        let g = eval_on_grid(&phi, 256).unwrap();
        let fam = schmidt_family(&g, 1.0, 1e-6).unwrap();
        let sol = analytic_span_solve(&fam, &g.points(), 2, 1e-6, Some(&phi));
        assert!(sol.success);
        assert_eq!(sol.basis.len(), 1);
        assert!(sol.basis.basis[0].rows(2, 4).norm() < 1e-12);
        assert!(sol.side_residuals[0] < 1e-14);
    }

    #[test]
    fn rotating_family_needs_degree_one() {
        // top direction (z, 1)/√2: a constant vector cannot follow it
        let v = MatrixLaurentPoly::from_entries(&[
            vec![MatrixLaurentPoly::monomial(1, r(0.5f64.sqrt())), MatrixLaurentPoly::monomial(0, r(-(0.5f64.sqrt())))],
            vec![MatrixLaurentPoly::monomial(0, r(0.5f64.sqrt())), MatrixLaurentPoly::monomial(-1, r(0.5f64.sqrt()))],
        ])
        .unwrap();
        let d = MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::identity(1), &MatrixLaurentPoly::monomial(0, r(0.5)));
        let phi = d.mul(&v.adjoint()).unwrap();
        let g = eval_on_grid(&phi, 256).unwrap();
        let fam = schmidt_family(&g, 1.0, 1e-6).unwrap();
        assert!(!analytic_span_solve(&fam, &g.points(), 0, 1e-6, None).success);
        let sol = analytic_span_solve(&fam, &g.points(), 1, 1e-6, None);
        assert!(sol.success);
        let search = analytic_span_search(&fam, &g.points(), 1e-6, None, 1, 0, 64);
        assert_eq!(search.found.unwrap().degree, 1);
    }

    #[test]
    fn schedule_doubles_to_budget() {
        assert_eq!(degree_schedule(6, 64), vec![6, 12, 24, 48, 64]);
        assert_eq!(degree_schedule(0, 4), vec![0, 1, 2, 4]);
        assert_eq!(degree_schedule(70, 64), vec![64]);
    }
}
