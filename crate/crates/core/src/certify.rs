//! Three-valued verdicts for conditions C1–C4, badly and very badly
//! approximable, and uniqueness of the zero best approximant.
//!
//! A `fail` is only reported with a refutation: a non-constant singular value,
//! a Hankel norm below `‖Φ‖_∞`, an exact polynomial kernel element, or a
//! non-isometric value. A search that runs out of degree budget is
//! `inconclusive`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::{hankel_norm, toeplitz_block_matrix, toeplitz_kernel, BasisJson, PolySubspaceBasis};
use crate::laurent::{default_grid_size, eval_on_grid, singular_profile, sup_norm, GridSampling, MatrixLaurentPoly, SingularProfile};
use crate::linalg::{self, CMat, C64};
use crate::schmidt::{
    analytic_span_search, pointwise_kernel_family, poly_constraint_null_space, schmidt_family, SpanAttempt, SubspaceFamily,
    AE_FRACTION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Conjunction: any fail wins, then any inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn all<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        it.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifyConfig {
    /// Grid size; `None` picks `max(256, 8K + 8)` rounded up to a power of two.
    pub grid: Option<usize>,
    /// Kernel tolerance, relative to `‖Φ‖_∞`.
    pub eps: f64,
    /// Smallest degree tried; `None` means `2K + 2`.
    pub dmin: Option<usize>,
    pub dmax: usize,
    /// C1 flatness tolerance, relative to the grid maximum of `s_0`.
    pub tol_c1: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { grid: None, eps: 1e-6, dmin: None, dmax: 64, tol_c1: 1e-6 }
    }
}

impl CertifyConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps", self.eps), ("tol_c1", self.tol_c1)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.dmax == 0 {
            return Err(Error::InvalidInput("dmax must be positive".into()));
        }
        Ok(())
    }
}

/// Budgets actually used for one symbol.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Budgets {
    pub grid: usize,
    pub eps: f64,
    pub dmin: usize,
    pub dmax: usize,
    pub tol_c1: f64,
    /// Absolute flatness tolerance.
    pub tol_abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub sigma: f64,
    pub dimension: usize,
    pub verdict: Verdict,
    pub degree: Option<usize>,
    pub fraction: f64,
    pub trajectory: Vec<SpanAttempt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BasisJson>,
    pub side_residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub kernel_dim: usize,
    pub pointwise_dim: usize,
    pub angle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelComparison {
    /// The symbol whose Toeplitz kernel is compared.
    pub symbol: String,
    pub verdict: Verdict,
    pub sweep: Vec<DegreeComparison>,
    /// Exact polynomial element of the Toeplitz kernel that is not a pointwise solution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BasisJson>,
    #[serde(skip)]
    pub witness_basis: Option<PolySubspaceBasis>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// Why a verdict was reached without a direct search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cause: Option<String>,
    pub note: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub transpose_levels: Vec<LevelReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub halves: Vec<KernelComparison>,
}

impl ConditionReport {
    fn short(verdict: Verdict, cause: impl Into<String>, note: &str) -> Self {
        Self { verdict, cause: Some(cause.into()), note: note.into(), levels: vec![], transpose_levels: vec![], halves: vec![] }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub shape: (usize, usize),
    pub band: usize,
    pub budgets: Budgets,
    pub profile: SingularProfile,
    pub sup_norm: f64,
    pub hankel_norm: f64,
    /// Zero for band-limited symbols, so admissibility holds automatically.
    pub hankel_essential_norm: f64,
    pub c1: ConditionReport,
    pub c2: ConditionReport,
    pub c3: ConditionReport,
    pub c4: ConditionReport,
    pub badly_approximable: ConditionReport,
    pub very_badly_approximable: ConditionReport,
    pub unique_best: ConditionReport,
}

impl Certificate {
    pub fn verdicts(&self) -> [(&'static str, Verdict); 7] {
        [
            ("C1", self.c1.verdict),
            ("C2", self.c2.verdict),
            ("C3", self.c3.verdict),
            ("C4", self.c4.verdict),
            ("badly approximable", self.badly_approximable.verdict),
            ("very badly approximable", self.very_badly_approximable.verdict),
            ("unique best (zero)", self.unique_best.verdict),
        ]
    }

    pub fn any_inconclusive(&self) -> bool {
        self.verdicts().iter().any(|(_, v)| *v == Verdict::Inconclusive)
    }

    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("certificate serializes")
        } else {
            serde_json::to_string(self).expect("certificate serializes")
        }
    }
}

/// Shared data for all checks on one symbol.
pub struct Certifier {
    pub phi: MatrixLaurentPoly,
    pub grid: GridSampling,
    pub profile: SingularProfile,
    pub budgets: Budgets,
    pub hankel: f64,
    pub sup: f64,
    points: Vec<C64>,
    transpose_grid: std::sync::OnceLock<GridSampling>,
}

const NOTE_C1: &str = "singular values s_j(Φ(ζ)) constant on the circle";
const NOTE_C2: &str = "Ker T_{z̄Φ*} = {f : Φ*f = 0} and Ker T_{z̄ conj Φ} = {f : conj(Φ) f = 0}";
const NOTE_C3: &str = "Schmidt families of Φ and Φᵗ spanned pointwise by analytic polynomials; implies C1";
const NOTE_C4: &str = "each Schmidt family spanned by functions in Ker T_Φ; implies C1 and C3, and makes Φ very badly approximable with zero the only superoptimal approximant";
const NOTE_BAF: &str = "‖Φ(ζ)‖ constant and some f ∈ Ker T_Φ takes maximizing values; equivalently ‖H_Φ‖ = ‖Φ‖_∞";
const NOTE_VBA: &str = "equivalent to C4 for continuous (hence admissible) symbols";
const NOTE_UNIQUE: &str = "values isometric up to ‖Φ‖_∞ (transpose if n > m) and (Ker Φ(ζ))^⊥ spanned by functions in Ker T_Φ";

/// Relative Hankel-norm shortfall below `σ_0` that counts as a refutation.
pub const HANKEL_GAP_TOL: f64 = 1e-6;
/// Exact-kernel threshold for C2 witnesses, relative to the section norm.
const EXACT_TOL: f64 = 1e-10;

impl Certifier {
    pub fn new(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<Self> {
        config.validate()?;
        let k = phi.band();
        let n = config.grid.unwrap_or_else(|| default_grid_size(k));
        let grid = eval_on_grid(phi, n)?;
        let profile = singular_profile(&grid, config.tol_c1);
        let sup = sup_norm(phi);
        let hankel = hankel_norm(phi)?.norm;
        let dmin = config.dmin.unwrap_or(2 * k + 2).min(config.dmax);
        let budgets = Budgets { grid: n, eps: config.eps, dmin, dmax: config.dmax, tol_c1: config.tol_c1, tol_abs: profile.tolerance };
        let points = grid.points();
        Ok(Self { phi: phi.clone(), grid, profile, budgets, hankel, sup, points, transpose_grid: Default::default() })
    }

    fn transpose_grid(&self) -> &GridSampling {
        self.transpose_grid.get_or_init(|| eval_on_grid(&self.phi.transpose(), self.grid.len()).expect("same band"))
    }

    fn sigma0(&self) -> f64 {
        self.profile.sigma0()
    }

    fn hankel_gap(&self) -> bool {
        self.hankel < self.sigma0() * (1.0 - HANKEL_GAP_TOL) - self.budgets.tol_abs
    }

    fn eps_abs(&self) -> f64 {
        self.budgets.eps
    }

    pub fn check_c1(&self) -> ConditionReport {
        match self.profile.first_nonflat_index() {
            None => ConditionReport::short(Verdict::Pass, "all singular values flat", NOTE_C1),
            Some(i) => ConditionReport::short(
                Verdict::Fail,
                format!("s_{i} varies by {:.3e} over the grid", self.profile.index_deviation[i]),
                NOTE_C1,
            ),
        }
    }

    /// Compares `Ker T_S` with the polynomial solutions of `P(ζ) f(ζ) = 0`
    /// degree by degree.
    fn compare_kernels(&self, name: &str, s: &MatrixLaurentPoly, pointwise: &[CMat]) -> KernelComparison {
        let dim = s.cols();
        let scale = self.sup.max(f64::MIN_POSITIVE);
        let eps = self.eps_abs();
        let mut sweep = vec![];
        let mut verdict = Verdict::Pass;
        let mut witness = None;
        for d in 0..=self.budgets.dmin {
            let tk = toeplitz_kernel(s, d, eps * scale);
            let (pw, _) = poly_constraint_null_space(dim, d, &self.points, |j| &pointwise[j] / C64::new(scale, 0.0), None, eps);
            let tkm = tk.coeff_matrix();
            let angle = linalg::subspace_distance(&tkm, &pw);
            sweep.push(DegreeComparison { degree: d, kernel_dim: tk.len(), pointwise_dim: pw.ncols(), angle });
            if tk.len() == pw.ncols() && angle <= 1e-4 {
                continue;
            }
            if tk.is_empty() {
                verdict = verdict.and(Verdict::Inconclusive);
                continue;
            }
            // direction of the Toeplitz kernel farthest from the pointwise solutions
            let resid = &tkm - &pw * (pw.adjoint() * &tkm);
            let dec = linalg::svd(&resid);
            let h = &tkm * dec.v.column(0);
            let h = &h / C64::new(h.norm(), 0.0);
            let t = toeplitz_block_matrix(s, d);
            let t_res = (&t * &h).norm() / linalg::norm2(&t).max(f64::MIN_POSITIVE);
            let pw_res = (self
                .points
                .iter()
                .enumerate()
                .map(|(j, &z)| (&pointwise[j] * crate::hankel::eval_coeffs(&h, dim, z)).norm_squared())
                .sum::<f64>()
                / self.points.len() as f64)
                .sqrt()
                / scale;
            if t_res <= EXACT_TOL && pw_res > 1e-6 {
                let b = PolySubspaceBasis { n: dim, degree: d, basis: vec![h], residuals: vec![t_res], tolerance: EXACT_TOL, orthonormal: true };
                witness = Some(b);
                verdict = Verdict::Fail;
                break;
            }
            verdict = verdict.and(Verdict::Inconclusive);
        }
        KernelComparison {
            symbol: name.into(),
            verdict,
            sweep,
            witness: witness.as_ref().map(PolySubspaceBasis::to_json),
            witness_basis: witness,
        }
    }

    pub fn check_c2(&self) -> ConditionReport {
        let s1 = self.phi.adjoint().shift(-1);
        let p1: Vec<CMat> = self.grid.values().iter().map(|v| v.adjoint()).collect();
        let first = self.compare_kernels("z̄Φ*", &s1, &p1);
        let s2 = self.phi.conjugate().shift(-1);
        let p2: Vec<CMat> = self.grid.values().iter().map(|v| v.map(|c| c.conj())).collect();
        let second = self.compare_kernels("z̄ conj(Φ)", &s2, &p2);
        let verdict = first.verdict.and(second.verdict);
        ConditionReport { verdict, cause: None, note: NOTE_C2.into(), levels: vec![], transpose_levels: vec![], halves: vec![first, second] }
    }

    fn family(&self, grid: &GridSampling, sigma: f64) -> Result<SubspaceFamily> {
        let fam = schmidt_family(grid, sigma, 2.0 * self.budgets.tol_abs)?;
        if !fam.constant_dim {
            return Err(Error::FlaggedFamily);
        }
        Ok(fam)
    }

    fn level_search(&self, grid: &GridSampling, sigma: f64, side: Option<&MatrixLaurentPoly>, rank: Option<usize>) -> LevelReport {
        let fam = match self.family(grid, sigma) {
            Ok(f) => f,
            Err(e) => {
                return LevelReport {
                    sigma,
                    dimension: 0,
                    verdict: Verdict::Inconclusive,
                    degree: None,
                    fraction: 0.0,
                    trajectory: vec![],
                    witness: None,
                    side_residuals: vec![],
                    note: Some(e.to_string()),
                }
            }
        };
        let required = rank.unwrap_or(fam.dimension);
        let search = analytic_span_search(&fam, &self.points, self.eps_abs(), side, required, self.budgets.dmin, self.budgets.dmax);
        match search.found {
            Some(sol) => LevelReport {
                sigma,
                dimension: fam.dimension,
                verdict: Verdict::Pass,
                degree: Some(sol.degree),
                fraction: sol.fraction,
                trajectory: search.trajectory,
                witness: Some(sol.basis.to_json()),
                side_residuals: sol.side_residuals,
                note: None,
            },
            None => LevelReport {
                sigma,
                dimension: fam.dimension,
                verdict: Verdict::Inconclusive,
                degree: None,
                fraction: search.trajectory.last().map_or(0.0, |a| a.fraction),
                trajectory: search.trajectory,
                witness: None,
                side_residuals: vec![],
                note: Some(format!("no spanning family found up to degree {}", self.budgets.dmax)),
            },
        }
    }

    pub fn check_c3(&self) -> ConditionReport {
        if self.profile.first_nonflat_index().is_some() {
            return ConditionReport::short(Verdict::Fail, "C1 fails", NOTE_C3);
        }
        let lv = self.profile.levels.clone();
        let levels: Vec<LevelReport> = lv.iter().map(|&s| self.level_search(&self.grid, s, None, None)).collect();
        let tgrid = self.transpose_grid();
        let transpose_levels: Vec<LevelReport> = lv.iter().map(|&s| self.level_search(tgrid, s, None, None)).collect();
        let verdict = Verdict::all(levels.iter().chain(&transpose_levels).map(|l| l.verdict));
        ConditionReport { verdict, cause: None, note: NOTE_C3.into(), levels, transpose_levels, halves: vec![] }
    }

    pub fn check_c4(&self) -> ConditionReport {
        if self.profile.first_nonflat_index().is_some() {
            return ConditionReport::short(Verdict::Fail, "C1 fails", NOTE_C4);
        }
        let mut levels: Vec<LevelReport> =
            self.profile.levels.iter().map(|&s| self.level_search(&self.grid, s, Some(&self.phi), None)).collect();
        if let Some(top) = levels.first_mut() {
            if top.verdict != Verdict::Pass && self.hankel_gap() {
                top.verdict = Verdict::Fail;
                top.note = Some(format!("‖H_Φ‖ = {:.12} < σ_0 = {:.12}, so no Ker T_Φ function attains σ_0", self.hankel, self.sigma0()));
            }
        }
        let verdict = Verdict::all(levels.iter().map(|l| l.verdict));
        ConditionReport { verdict, cause: None, note: NOTE_C4.into(), levels, transpose_levels: vec![], halves: vec![] }
    }

    /// Checks `‖Φ(ζ_j) f(ζ_j)‖ ≥ (σ_0 − tol) ‖f(ζ_j)‖` on ≥ 99% of the grid.
    fn maximizing_fraction(&self, f: &PolySubspaceBasis) -> f64 {
        let tol = 10.0 * self.budgets.tol_abs;
        let s0 = self.sigma0();
        let good = self
            .points
            .iter()
            .enumerate()
            .filter(|(j, &z)| {
                let v = f.eval(0, z);
                (self.grid.value(*j) * &v).norm() >= (s0 - tol) * v.norm()
            })
            .count();
        good as f64 / self.points.len() as f64
    }

    pub fn badly_approximable(&self) -> ConditionReport {
        if self.profile.levels.is_empty() {
            return ConditionReport::short(Verdict::Pass, "zero symbol", NOTE_BAF);
        }
        if !self.profile.index_flat[0] {
            return ConditionReport::short(Verdict::Fail, "‖Φ(ζ)‖ is not constant", NOTE_BAF);
        }
        if self.hankel_gap() {
            return ConditionReport::short(
                Verdict::Fail,
                format!("‖H_Φ‖ = {:.12} < ‖Φ‖_∞ = {:.12}", self.hankel, self.sigma0()),
                NOTE_BAF,
            );
        }
        let mut level = self.level_search(&self.grid, self.sigma0(), Some(&self.phi), Some(1));
        if level.verdict == Verdict::Pass {
            let w = PolySubspaceBasis::from_json(level.witness.as_ref().expect("witness")).expect("own json");
            let first = PolySubspaceBasis { basis: vec![w.basis[0].clone()], residuals: vec![w.residuals[0]], ..w };
            let frac = self.maximizing_fraction(&first);
            if frac < AE_FRACTION {
                level.verdict = Verdict::Inconclusive;
                level.note = Some(format!("witness maximizing at only {:.1}% of points", 100.0 * frac));
            } else {
                level.witness = Some(first.to_json());
                level.fraction = frac;
            }
        }
        ConditionReport { verdict: level.verdict, cause: None, note: NOTE_BAF.into(), levels: vec![level], transpose_levels: vec![], halves: vec![] }
    }

    pub fn very_badly_approximable(&self, c4: &ConditionReport) -> ConditionReport {
        if self.profile.first_nonflat_index().is_some() {
            return ConditionReport::short(Verdict::Fail, "C1 fails", NOTE_VBA);
        }
        let cause = match c4.verdict {
            Verdict::Pass => "C4 holds at every level",
            Verdict::Fail => "C4 refuted",
            Verdict::Inconclusive => "C4 search exhausted the degree budget",
        };
        ConditionReport::short(c4.verdict, cause, NOTE_VBA)
    }

    pub fn unique_best(&self) -> ConditionReport {
        if self.profile.levels.is_empty() {
            return ConditionReport::short(Verdict::Inconclusive, "zero symbol: ‖H_Φ‖_e < ‖Φ‖_∞ fails", NOTE_UNIQUE);
        }
        let transposed = self.phi.cols() > self.phi.rows();
        let (psi, grid) = if transposed { (self.phi.transpose(), self.transpose_grid()) } else { (self.phi.clone(), &self.grid) };
        let s0 = self.grid.max_norm();
        let n = psi.cols();
        let iso = grid
            .values()
            .iter()
            .map(|v| (v.adjoint() * v / C64::new(s0 * s0, 0.0) - CMat::identity(n, n)).norm())
            .fold(0.0, f64::max);
        if iso > 10.0 * self.budgets.tol_c1 {
            return ConditionReport::short(
                Verdict::Fail,
                format!("values are not isometric up to scale (error {iso:.3e}){}", if transposed { " for Φᵗ" } else { "" }),
                NOTE_UNIQUE,
            );
        }
        if self.hankel_gap() {
            return ConditionReport::short(Verdict::Fail, "not badly approximable", NOTE_UNIQUE);
        }
        let fam = pointwise_kernel_family(grid, SPAN_TOL_REL * s0);
        let search = analytic_span_search(&fam, &self.points, self.eps_abs(), Some(&psi), n, self.budgets.dmin, self.budgets.dmax);
        let level = match search.found {
            Some(sol) => LevelReport {
                sigma: s0,
                dimension: fam.dimension,
                verdict: Verdict::Pass,
                degree: Some(sol.degree),
                fraction: sol.fraction,
                trajectory: search.trajectory,
                witness: Some(sol.basis.to_json()),
                side_residuals: sol.side_residuals,
                note: transposed.then(|| "checked on Φᵗ".to_string()),
            },
            None => LevelReport {
                sigma: s0,
                dimension: fam.dimension,
                verdict: Verdict::Inconclusive,
                degree: None,
                fraction: 0.0,
                trajectory: search.trajectory,
                witness: None,
                side_residuals: vec![],
                note: Some("no full-rank Ker T_Φ family found within budget".into()),
            },
        };
        ConditionReport { verdict: level.verdict, cause: None, note: NOTE_UNIQUE.into(), levels: vec![level], transpose_levels: vec![], halves: vec![] }
    }

    pub fn certify_all(&self) -> Result<Certificate> {
        let c1 = self.check_c1();
        let c2 = self.check_c2();
        let c3 = self.check_c3();
        let c4 = self.check_c4();
        let baf = self.badly_approximable();
        let vba = self.very_badly_approximable(&c4);
        let unique = self.unique_best();
        if c4.verdict == Verdict::Pass && (c1.verdict != Verdict::Pass || c3.verdict == Verdict::Fail) {
            return Err(Error::InternalInconsistency(format!(
                "C4 passed but C1 = {:?}, C3 = {:?}",
                c1.verdict, c3.verdict
            )));
        }
        if vba.verdict == Verdict::Pass && baf.verdict == Verdict::Fail {
            return Err(Error::InternalInconsistency("very badly approximable but not badly approximable".into()));
        }
        Ok(Certificate {
            shape: (self.phi.rows(), self.phi.cols()),
            band: self.phi.band(),
            budgets: self.budgets.clone(),
            profile: self.profile.clone(),
            sup_norm: self.sup,
            hankel_norm: self.hankel,
            hankel_essential_norm: 0.0,
            c1,
            c2,
            c3,
            c4,
            badly_approximable: baf,
            very_badly_approximable: vba,
            unique_best: unique,
        })
    }
}

/// Relative threshold for the row-space family in the uniqueness check.
const SPAN_TOL_REL: f64 = 1e-6;

/// Runs every check.
pub fn certify(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<Certificate> {
    Certifier::new(phi, config)?.certify_all()
}

pub fn check_c1(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<(Verdict, SingularProfile)> {
    let c = Certifier::new(phi, config)?;
    Ok((c.check_c1().verdict, c.profile))
}

pub fn check_c2(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<ConditionReport> {
    Ok(Certifier::new(phi, config)?.check_c2())
}

pub fn check_c3(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<ConditionReport> {
    Ok(Certifier::new(phi, config)?.check_c3())
}

pub fn check_c4(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<ConditionReport> {
    Ok(Certifier::new(phi, config)?.check_c4())
}

pub fn certify_badly_approximable(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<ConditionReport> {
    Ok(Certifier::new(phi, config)?.badly_approximable())
}

pub fn certify_very_badly_approximable(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<ConditionReport> {
    let c = Certifier::new(phi, config)?;
    let c4 = c.check_c4();
    let mut r = c.very_badly_approximable(&c4);
    r.levels = c4.levels;
    Ok(r)
}

pub fn certify_unique_best(phi: &MatrixLaurentPoly, config: &CertifyConfig) -> Result<ConditionReport> {
    Ok(Certifier::new(phi, config)?.unique_best())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn cfg() -> CertifyConfig {
        CertifyConfig::default()
    }

    #[test]
    fn verdict_algebra() {
        use Verdict::*;
        assert_eq!(Pass.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(Fail), Fail);
        assert_eq!(Verdict::all([Pass, Pass]), Pass);
        assert_eq!(serde_json::to_string(&Inconclusive).unwrap(), "\"inconclusive\"");
    }

    #[test]
    fn c1_examples() {
        let d = MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::z_pow(-1), &MatrixLaurentPoly::monomial(-3, C64::new(0.5, 0.0)));
        let (v, p) = check_c1(&d, &cfg()).unwrap();
        assert_eq!(v, Verdict::Pass);
        assert_eq!(p.levels.len(), 2);
        let b = MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::scalar(&[(0, ONE), (1, ONE)]), &MatrixLaurentPoly::zeros(1, 1));
        assert_eq!(check_c1(&b, &cfg()).unwrap().0, Verdict::Fail);
    }

    #[test]
    fn scalar_conj_z_certificates() {
        let c = certify(&MatrixLaurentPoly::z_pow(-1), &cfg()).unwrap();
        for (name, v) in c.verdicts() {
            assert_eq!(v, Verdict::Pass, "{name}");
        }
        let c = certify(&MatrixLaurentPoly::z_pow(1), &cfg()).unwrap();
        assert_eq!(c.badly_approximable.verdict, Verdict::Fail);
        assert_eq!(c.very_badly_approximable.verdict, Verdict::Fail);
    }

    #[test]
    fn c2_for_conj_z_identity() {
        let r = check_c2(&MatrixLaurentPoly::identity(2).shift(-1), &CertifyConfig { dmin: Some(4), ..cfg() }).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.halves.iter().all(|h| h.sweep.iter().all(|s| s.kernel_dim == 0 && s.pointwise_dim == 0)));
    }

    #[test]
    fn c4_witnesses_for_powers() {
        let r = check_c4(&MatrixLaurentPoly::z_pow(-3), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let w = PolySubspaceBasis::from_json(r.levels[0].witness.as_ref().unwrap()).unwrap();
        // every witness lies in the span of 1, z, z²
        for b in &w.basis {
            assert!(b.rows(3, b.len() - 3).norm() < 1e-8);
        }
        assert!(!w.is_empty());
    }

    #[test]
    fn analytic_perturbation_of_conj_z_identity() {
        let phi = MatrixLaurentPoly::identity(2).shift(-1).add(&MatrixLaurentPoly::identity(2).shift(1).scale(C64::new(0.1, 0.0))).unwrap();
        let c = certify(&phi, &cfg()).unwrap();
        assert_eq!(c.very_badly_approximable.verdict, Verdict::Fail);
        assert_eq!(c.c1.verdict, Verdict::Fail);
    }

    #[test]
    fn nonisometric_second_column() {
        let psi = MatrixLaurentPoly::scalar(&[(0, C64::new(0.3, 0.0)), (1, C64::new(0.2, 0.0))]);
        let phi = MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::z_pow(-1), &psi);
        let r = certify_unique_best(&phi, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.cause.unwrap().contains("isometric"));
    }
}
