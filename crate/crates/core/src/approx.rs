//! Grid oracles for best and superoptimal analytic approximation.
//!
//! The best approximation problem `min_F max_j ‖Φ(ζ_j) − F(ζ_j)‖` over analytic
//! matrix polynomials `F` of degree ≤ dF is convex. We solve a smoothed
//! version: the grid maximum is replaced by `μ log Σ exp(s/μ)` and `μ` is
//! driven down geometrically, each solve warm started from the previous one
//! and minimized by L-BFGS.
//!
//! Superoptimal stage `j` minimizes the smoothed maximum of the Ky Fan sum
//! `s_0 + … + s_j` with the earlier sums capped at their optimal values plus a
//! slack, the caps enforced by an augmented Lagrangian. On the set where the
//! earlier caps are met exactly the earlier singular values are constant, so
//! this is the lexicographic problem, and each stage stays convex.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{hankel_matrix, hankel_norm};
use crate::laurent::{default_grid_size, eval_on_grid, refine_sup, sup_norm, GridSampling, MatrixLaurentPoly};
use crate::linalg::{self, powi, root_of_unity, svd, CMat, C64, ZERO};
use crate::optim::lbfgs;

/// Relative slack on the caps of earlier superoptimal stages.
pub const STAGE_SLACK: f64 = 1e-4;
/// Threshold of [`check_sv_identity`].
pub const SV_IDENTITY_TOL: f64 = 5e-2;

const MU_SCHEDULE: [f64; 9] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6];

#[derive(Debug, Clone)]
pub struct ApproxOptions {
    /// Approximant degree; `2K + 4` when unset.
    pub degree: Option<usize>,
    pub grid: Option<usize>,
    /// L-BFGS iterations per smoothing level.
    pub max_iter: usize,
    /// Warm start (analytic, degree ≤ dF).
    pub start: Option<MatrixLaurentPoly>,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        Self { degree: None, grid: None, max_iter: 400, start: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRecord {
    pub index: usize,
    /// Caps imposed on the earlier Ky Fan sums (absolute).
    pub caps: Vec<f64>,
    /// Max over the grid of `s_0 + … + s_index` at the end of the stage.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub feasible: bool,
    /// Best stage value after each smoothing level; nonincreasing.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimaxResult {
    pub degree: usize,
    pub grid: usize,
    #[serde(serialize_with = "ser_poly")]
    pub approximant: MatrixLaurentPoly,
    /// Per singular index, sup over the circle of `s_i(Φ − F)` (refined off grid).
    pub profile: Vec<f64>,
    /// Per singular index, max over the optimization grid.
    pub grid_profile: Vec<f64>,
    /// `‖H_Φ‖`, a lower bound for `profile[0]`.
    pub lower_bound: f64,
    pub slack: f64,
    pub stages: Vec<StageRecord>,
    pub converged: bool,
    pub flags: Vec<String>,
}

fn ser_poly<S: serde::Serializer>(p: &MatrixLaurentPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::laurent::SymbolFile::from_poly(p).serialize(s)
}

impl MinimaxResult {
    /// The achieved `sup ‖Φ − F‖`.
    pub fn value(&self) -> f64 {
        self.profile.first().copied().unwrap_or(0.0)
    }

    /// Trace of the first stage.
    pub fn trace(&self) -> &[f64] {
        self.stages.first().map_or(&[], |s| &s.trace)
    }

    pub fn approximant_sup(&self) -> f64 {
        sup_norm(&self.approximant)
    }
}

/// Default approximant degree `2K + 4`.
pub fn default_degree(phi: &MatrixLaurentPoly) -> usize {
    2 * phi.antianalytic_band() + 4
}

struct Problem {
    m: usize,
    n: usize,
    d: usize,
    phi: Vec<CMat>,
    /// `ζ_p^t` for `t ≤ d`.
    pow: Vec<Vec<C64>>,
}

impl Problem {
    fn nvars(&self) -> usize {
        2 * self.m * self.n * (self.d + 1)
    }

    fn unpack(&self, x: &[f64]) -> Vec<CMat> {
        let mn = self.m * self.n;
        (0..=self.d)
            .map(|t| {
                CMat::from_fn(self.m, self.n, |i, j| {
                    let k = 2 * (t * mn + i * self.n + j);
                    C64::new(x[k], x[k + 1])
                })
            })
            .collect()
    }

    fn pack(&self, f: &MatrixLaurentPoly) -> Vec<f64> {
        let mn = self.m * self.n;
        let mut x = vec![0.0; self.nvars()];
        for t in 0..=self.d {
            if let Some(c) = f.coeff(t as i32) {
                for i in 0..self.m {
                    for j in 0..self.n {
                        let k = 2 * (t * mn + i * self.n + j);
                        x[k] = c[(i, j)].re;
                        x[k + 1] = c[(i, j)].im;
                    }
                }
            }
        }
        x
    }

    fn errors(&self, x: &[f64]) -> Vec<linalg::Svd> {
        let f = self.unpack(x);
        linalg::par_map(self.phi.len(), |p| {
            let mut e = self.phi[p].clone();
            for (t, c) in f.iter().enumerate() {
                e -= c * self.pow[p][t];
            }
            svd(&e)
        })
    }

    fn scatter_gradient(&self, gmat: &[CMat], grad: &mut [f64]) {
        let mn = self.m * self.n;
        grad.iter_mut().for_each(|g| *g = 0.0);
        for t in 0..=self.d {
            let mut acc = CMat::zeros(self.m, self.n);
            for (p, g) in gmat.iter().enumerate() {
                acc -= g * self.pow[p][t].conj();
            }
            for i in 0..self.m {
                for j in 0..self.n {
                    let k = 2 * (t * mn + i * self.n + j);
                    grad[k] = acc[(i, j)].re;
                    grad[k + 1] = acc[(i, j)].im;
                }
            }
        }
    }
}

/// `μ log Σ exp(v/μ)` and the softmax weights.
fn lse(vals: &[f64], mu: f64) -> (f64, Vec<f64>) {
    let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = vals.iter().map(|v| ((v - top) / mu).exp()).collect();
    let z: f64 = w.iter().sum();
    (top + mu * z.ln(), w.into_iter().map(|v| v / z).collect())
}

/// Sum of the `j + 1` largest singular values.
fn ky_fan(d: &linalg::Svd, j: usize) -> f64 {
    d.s.iter().take(j + 1).sum()
}

fn ky_fan_grad(d: &linalg::Svd, j: usize) -> CMat {
    let k = (j + 1).min(d.s.len());
    d.u.columns(0, k) * d.v.columns(0, k).adjoint()
}

/// Smoothed stage objective. Stage 0 smooths over all singular values at all
/// points; stage `j` smooths the Ky Fan sum `s_0 + … + s_j`, which is convex in
/// `F`. The caps bound the earlier Ky Fan sums through augmented Lagrangian
/// terms, so every stage is a convex program.
#[allow(clippy::too_many_arguments)]
fn stage_objective(
    prob: &Problem,
    x: &[f64],
    grad: &mut [f64],
    j: usize,
    caps: &[f64],
    lambda: &[f64],
    rho: f64,
    mu: f64,
) -> (f64, Vec<f64>) {
    let dec = prob.errors(x);
    let np = dec.len();
    let p = prob.m.min(prob.n);
    let mut gmat = vec![CMat::zeros(prob.m, prob.n); np];
    let mut value;
    if j == 0 {
        let vals: Vec<f64> = dec.iter().flat_map(|d| d.s.clone()).collect();
        let (v, w) = lse(&vals, mu);
        value = v;
        for (pt, d) in dec.iter().enumerate() {
            for i in 0..p {
                let wi = w[pt * p + i];
                if wi > 1e-300 {
                    gmat[pt] += d.u.column(i) * d.v.column(i).adjoint() * C64::new(wi, 0.0);
                }
            }
        }
    } else {
        let vals: Vec<f64> = dec.iter().map(|d| ky_fan(d, j)).collect();
        let (v, w) = lse(&vals, mu);
        value = v;
        for (pt, d) in dec.iter().enumerate() {
            if w[pt] > 1e-300 {
                gmat[pt] += ky_fan_grad(d, j) * C64::new(w[pt], 0.0);
            }
        }
    }
    let lnn = (np as f64).ln();
    let mut gvals = Vec::with_capacity(caps.len());
    for (i, &cap) in caps.iter().enumerate() {
        let vals: Vec<f64> = dec.iter().map(|d| ky_fan(d, i)).collect();
        let (v, w) = lse(&vals, mu);
        let g = v - mu * lnn - cap;
        gvals.push(g);
        let c = (lambda[i] + rho * g).max(0.0);
        value += (c * c - lambda[i] * lambda[i]) / (2.0 * rho);
        if c > 0.0 {
            for (pt, d) in dec.iter().enumerate() {
                if w[pt] > 1e-300 {
                    gmat[pt] += ky_fan_grad(d, i) * C64::new(c * w[pt], 0.0);
                }
            }
        }
    }
    prob.scatter_gradient(&gmat, grad);
    (value, gvals)
}

fn grid_maxima(dec: &[linalg::Svd], p: usize) -> Vec<f64> {
    (0..p).map(|i| dec.iter().map(|d| d.s[i]).fold(0.0, f64::max)).collect()
}

/// Max over the grid of each Ky Fan sum.
fn ky_fan_maxima(dec: &[linalg::Svd], p: usize) -> Vec<f64> {
    (0..p).map(|i| dec.iter().map(|d| ky_fan(d, i)).fold(0.0, f64::max)).collect()
}

fn to_poly(prob: &Problem, x: &[f64], scale: f64) -> MatrixLaurentPoly {
    let cs = prob.unpack(x).into_iter().enumerate().map(|(t, c)| (t as i32, c * C64::new(scale, 0.0)));
    MatrixLaurentPoly::from_coeffs(prob.m, prob.n, cs).expect("shapes agree").prune(1e-15)
}

/// Sup over the circle of each singular value of `e`, refined off the grid.
fn refined_profile(e: &MatrixLaurentPoly, n: usize) -> Result<Vec<f64>> {
    let g = eval_on_grid(e, n)?;
    let traces = g.singular_traces();
    Ok(traces
        .iter()
        .enumerate()
        .map(|(i, tr)| refine_sup(|t| svd(&e.eval(C64::from_polar(1.0, t))).s[i], tr))
        .collect())
}

fn minimax(phi: &MatrixLaurentPoly, stages: usize, opts: &ApproxOptions) -> Result<MinimaxResult> {
    let (m, n) = (phi.rows(), phi.cols());
    let p = m.min(n);
    let d = opts.degree.unwrap_or_else(|| default_degree(phi));
    let stages = stages.clamp(1, p.max(1));
    let band = phi.band().max(d);
    let grid = opts.grid.unwrap_or(2 * default_grid_size(band));
    if !grid.is_power_of_two() {
        return Err(Error::GridNotPowerOfTwo(grid));
    }
    if grid < 2 * band + 2 {
        return Err(Error::GridTooSmall { n: grid, band, required: 2 * band + 2 });
    }
    let lower = hankel_norm(phi)?.norm;
    let scale = sup_norm(phi);
    if scale == 0.0 {
        return Ok(MinimaxResult {
            degree: d,
            grid,
            approximant: MatrixLaurentPoly::zeros(m, n),
            profile: vec![0.0; p],
            grid_profile: vec![0.0; p],
            lower_bound: lower,
            slack: 0.0,
            stages: vec![],
            converged: true,
            flags: vec![],
        });
    }
    let normalized = phi.scale(C64::new(1.0 / scale, 0.0));
    let sampled = eval_on_grid(&normalized, grid)?;
    let pts = sampled.points();
    let prob = Problem {
        m,
        n,
        d,
        phi: sampled.values().to_vec(),
        pow: pts.iter().map(|z| (0..=d).map(|t| powi(*z, t as i32)).collect()).collect(),
    };
    let mut x = match &opts.start {
        Some(f) => {
            if !f.is_analytic() || f.max_index() > d as i32 || f.rows() != m || f.cols() != n {
                return Err(Error::InvalidInput("warm start must be analytic of degree ≤ dF with the symbol's shape".into()));
            }
            prob.pack(&f.scale(C64::new(1.0 / scale, 0.0)))
        }
        None => vec![0.0; prob.nvars()],
    };
    let mut caps: Vec<f64> = Vec::new();
    let mut records = Vec::new();
    let mut flags = Vec::new();
    let mut dummy = vec![0.0; prob.nvars()];
    for j in 0..stages {
        let mut lambda = vec![0.0; caps.len()];
        // the optimizer aims at half the slack; acceptance allows all of it
        let feasible = |gm: &[f64], caps: &[f64]| caps.iter().enumerate().all(|(i, c)| gm[i] <= c + 0.5 * STAGE_SLACK);
        let gm0 = ky_fan_maxima(&prob.errors(&x), p);
        let (mut best_x, mut best_v) = (x.clone(), gm0[j]);
        let mut best_feasible = feasible(&gm0, &caps);
        let mut trace = vec![best_v];
        let mut iterations = 0;
        let mut last_converged = false;
        for &mu in MU_SCHEDULE.iter() {
            let rho = 10.0 / mu;
            let outer = if caps.is_empty() { 1 } else { 4 };
            for _ in 0..outer {
                let (cj, cl) = (caps.clone(), lambda.clone());
                let out = lbfgs(
                    x.clone(),
                    |xx, g| stage_objective(&prob, xx, g, j, &cj, &cl, rho, mu).0,
                    opts.max_iter,
                    1e-10,
                    1e-14,
                );
                iterations += out.iterations;
                last_converged = out.converged;
                x = out.x;
                if caps.is_empty() {
                    break;
                }
                let (_, gvals) = stage_objective(&prob, &x, &mut dummy, j, &caps, &lambda, rho, mu);
                for (l, g) in lambda.iter_mut().zip(gvals) {
                    *l = (*l + rho * g).max(0.0);
                }
            }
            let gm = ky_fan_maxima(&prob.errors(&x), p);
            let ok = feasible(&gm, &caps);
            if (ok && (!best_feasible || gm[j] < best_v)) || (!ok && !best_feasible && gm[j] < best_v) {
                best_x = x.clone();
                best_v = gm[j];
                best_feasible = ok;
            }
            trace.push(best_v);
        }
        x = best_x;
        if !best_feasible {
            flags.push(format!("stage {j} could not meet the caps within slack"));
        }
        let conv = last_converged || {
            let n = trace.len();
            n >= 3 && (trace[n - 3] - trace[n - 1]).abs() <= 1e-7
        };
        if !conv {
            flags.push(format!("stage {j} did not converge within the iteration budget"));
        }
        let scaled_caps = caps.iter().map(|c| (c + 0.5 * STAGE_SLACK) * scale).collect();
        records.push(StageRecord {
            index: j,
            caps: scaled_caps,
            value: best_v * scale,
            iterations,
            converged: conv,
            feasible: best_feasible,
            trace: trace.iter().map(|v| v * scale).collect(),
        });
        caps.push(best_v + 0.5 * STAGE_SLACK);
    }
    let approximant = to_poly(&prob, &x, scale);
    let gm: Vec<f64> = grid_maxima(&prob.errors(&x), p).iter().map(|v| v * scale).collect();
    let err = phi.sub(&approximant)?;
    let profile = refined_profile(&err, (4 * grid).max(1024))?;
    let converged = flags.is_empty();
    Ok(MinimaxResult {
        degree: d,
        grid,
        approximant,
        profile,
        grid_profile: gm,
        lower_bound: lower,
        slack: STAGE_SLACK * scale,
        stages: records,
        converged,
        flags,
    })
}

/// Best analytic approximation of degree ≤ dF (one stage).
pub fn best_approx(phi: &MatrixLaurentPoly, opts: &ApproxOptions) -> Result<MinimaxResult> {
    minimax(phi, 1, opts)
}

/// Runs [`best_approx`] at dF and again at dF + 2 warm started from the first
/// solution. Returns both results; the second is never worse on the grid.
pub fn best_approx_sweep(phi: &MatrixLaurentPoly, opts: &ApproxOptions) -> Result<(MinimaxResult, MinimaxResult)> {
    let first = best_approx(phi, opts)?;
    let mut o2 = opts.clone();
    o2.degree = Some(first.degree + 2);
    o2.start = Some(first.approximant.clone());
    o2.grid = opts.grid;
    let second = best_approx(phi, &o2)?;
    Ok((first, second))
}

/// Lexicographic minimization of `sup s_0, sup s_1, …` over `stages` indices.
pub fn superoptimal_approx(phi: &MatrixLaurentPoly, stages: usize, opts: &ApproxOptions) -> Result<MinimaxResult> {
    minimax(phi, stages, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct SvIdentityReport {
    /// `max_ζ |s_j(Φ − F)(ζ) − t_j|` for each checked index.
    pub per_index: Vec<f64>,
    pub deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Checks that the singular values of `Φ − F` are constant on the grid and
/// equal to the achieved profile, for the indices optimized by `r`.
pub fn check_sv_identity(phi: &MatrixLaurentPoly, r: &MinimaxResult) -> Result<SvIdentityReport> {
    let err = phi.sub(&r.approximant)?;
    let g = eval_on_grid(&err, r.grid)?;
    let traces = g.singular_traces();
    let k = r.stages.len().max(1).min(traces.len());
    let per_index: Vec<f64> = (0..k)
        .map(|i| traces[i].iter().map(|s| (s - r.profile[i]).abs()).fold(0.0, f64::max))
        .collect();
    let deviation = per_index.iter().copied().fold(0.0, f64::max);
    Ok(SvIdentityReport { per_index, deviation, threshold: SV_IDENTITY_TOL, pass: deviation <= SV_IDENTITY_TOL })
}

/// Scalar best approximation from a maximizing vector `ξ` of the Hankel matrix:
/// the error is `H_φξ / ξ`, which has constant modulus `‖H_φ‖`.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarAak {
    #[serde(serialize_with = "ser_poly")]
    pub approximant: MatrixLaurentPoly,
    pub norm: f64,
    /// `max_j ||e(ζ_j)| − ‖H_φ‖|`.
    pub modulus_deviation: f64,
    /// Size of the non-analytic part discarded when fitting `φ − e`.
    pub fit_residual: f64,
    pub grid: usize,
}

pub fn scalar_aak_best(phi: &MatrixLaurentPoly) -> Result<ScalarAak> {
    if !phi.is_scalar() {
        return Err(Error::NotScalar { rows: phi.rows(), cols: phi.cols() });
    }
    let k = phi.antianalytic_band();
    let grid = (4 * default_grid_size(phi.band())).max(1024);
    if k == 0 {
        return Ok(ScalarAak { approximant: phi.clone(), norm: 0.0, modulus_deviation: 0.0, fit_residual: 0.0, grid });
    }
    let hr = hankel_matrix(phi, k);
    let s = &hr.singular_values;
    let s0 = s[0];
    let mult = s.iter().take_while(|&&v| v >= s0 - 1e-8 * s0.max(1.0)).count();
    if mult > 1 {
        return Err(Error::MultipleTopSingularValue { multiplicity: mult });
    }
    let dec = svd(&hr.matrix);
    let xi: Vec<C64> = dec.v.column(0).iter().copied().collect();
    let hx = &hr.matrix * dec.v.column(0);
    let e_at = |z: C64| -> C64 {
        let zb = z.conj();
        let mut num = ZERO;
        let mut zp = zb;
        for h in hx.iter() {
            num += h * zp;
            zp *= zb;
        }
        let mut den = ZERO;
        for c in xi.iter().rev() {
            den = den * z + c;
        }
        num / den
    };
    let mut values = Vec::with_capacity(grid);
    let mut dev = 0.0f64;
    for j in 0..grid {
        let z = root_of_unity(j, grid);
        let e = e_at(z);
        dev = dev.max((e.norm() - s0).abs());
        values.push(CMat::from_element(1, 1, phi.eval(z)[(0, 0)] - e));
    }
    let fitted = GridSampling::from_values(values, 1, 1).fit(grid / 2 - 1)?;
    let fit_residual = fitted.antianalytic_part().coeffs().map(|(_, c)| c[(0, 0)].norm()).fold(0.0, f64::max);
    Ok(ScalarAak {
        approximant: fitted.analytic_part().prune(1e-14),
        norm: s0,
        modulus_deviation: dev,
        fit_residual,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::paper_example;
    use crate::linalg::ONE;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn conj_z_plus_one() {
        let phi = MatrixLaurentPoly::scalar(&[(-1, ONE), (0, ONE)]);
        let res = best_approx(&phi, &ApproxOptions { degree: Some(2), ..Default::default() }).unwrap();
        assert!((res.value() - 1.0).abs() < 1e-4, "{}", res.value());
        assert!(res.value() >= res.lower_bound - 1e-9);
        assert!((res.approximant.scalar_coeff(0) - ONE).norm() < 2e-2);
        let tr = res.trace();
        assert!(tr.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn analytic_symbol_is_approximated_exactly() {
        let phi = MatrixLaurentPoly::z_pow(1);
        let res = best_approx(&phi, &ApproxOptions { degree: Some(1), ..Default::default() }).unwrap();
        assert!(res.value() < 1e-4, "{}", res.value());
    }

    #[test]
    fn aak_examples() {
        let a = scalar_aak_best(&MatrixLaurentPoly::z_pow(-1)).unwrap();
        assert!(a.approximant.is_zero() || a.approximant.coeffs().all(|(_, c)| c.norm() < 1e-12));
        assert!(a.modulus_deviation < 1e-12 && (a.norm - 1.0).abs() < 1e-12);
        let b = scalar_aak_best(&MatrixLaurentPoly::scalar(&[(-1, ONE), (-2, ONE)])).unwrap();
        assert!((b.norm - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!(b.modulus_deviation < 1e-6);
        let c = scalar_aak_best(&MatrixLaurentPoly::scalar(&[(-1, ONE), (0, r(2.0))])).unwrap();
        assert!((c.approximant.scalar_coeff(0) - r(2.0)).norm() < 1e-12);
        assert!(c.approximant.coeffs().filter(|(k, _)| *k != 0).all(|(_, m)| m.norm() < 1e-12));
    }

    #[test]
    fn aak_refuses_nonsimple_top() {
        // z̄ + z̄³ has Hankel singular values 1, 1, 1 at the top
        let phi = MatrixLaurentPoly::scalar(&[(-3, ONE), (-1, ONE)]);
        let h = hankel_matrix(&phi, 3);
        if h.singular_values[1] > h.singular_values[0] - 1e-8 {
            assert!(matches!(scalar_aak_best(&phi), Err(Error::MultipleTopSingularValue { .. })));
        }
        let phi = MatrixLaurentPoly::scalar(&[(-2, ONE)]);
        assert!(matches!(scalar_aak_best(&phi), Err(Error::MultipleTopSingularValue { multiplicity: 2 })));
    }

    #[test]
    fn aak_agrees_with_minimax() {
        let phi = MatrixLaurentPoly::scalar(&[(-2, r(0.3)), (-1, ONE), (1, r(0.5))]);
        let a = scalar_aak_best(&phi).unwrap();
        let b = best_approx(&phi, &ApproxOptions::default()).unwrap();
        assert!((a.norm - b.value()).abs() < 1e-4, "{} vs {}", a.norm, b.value());
    }

    #[test]
    fn ex3_matches_hankel_norm() {
        let phi = paper_example("ex3").unwrap().0;
        let res = best_approx(&phi, &ApproxOptions { degree: Some(6), ..Default::default() }).unwrap();
        assert!(res.converged, "{:?}", res.flags);
        assert!((res.value() - res.lower_bound).abs() < 1e-3, "{} vs {}", res.value(), res.lower_bound);
        assert!(res.value() < 1.0 - 1e-3);
    }

    #[test]
    fn superoptimal_diagonal() {
        let phi = MatrixLaurentPoly::from_entries(&[
            vec![MatrixLaurentPoly::z_pow(-1), MatrixLaurentPoly::zeros(1, 1)],
            vec![MatrixLaurentPoly::zeros(1, 1), MatrixLaurentPoly::monomial(-3, r(0.5))],
        ])
        .unwrap();
        let res = superoptimal_approx(&phi, 2, &ApproxOptions::default()).unwrap();
        assert!((res.profile[0] - 1.0).abs() < 2e-2 && (res.profile[1] - 0.5).abs() < 2e-2, "{:?}", res.profile);
        assert!(res.approximant_sup() <= 5e-3);
        assert!(check_sv_identity(&phi, &res).unwrap().pass);
    }

    #[test]
    fn superoptimal_analytic_corner() {
        let f = MatrixLaurentPoly::scalar(&[(0, r(0.3)), (1, r(0.4))]);
        let phi = MatrixLaurentPoly::from_entries(&[
            vec![MatrixLaurentPoly::z_pow(-1), MatrixLaurentPoly::zeros(1, 1)],
            vec![MatrixLaurentPoly::zeros(1, 1), f.clone()],
        ])
        .unwrap();
        let res = superoptimal_approx(&phi, 2, &ApproxOptions::default()).unwrap();
        assert!((res.profile[0] - 1.0).abs() < 2e-2 && res.profile[1] < 2e-2, "{:?}", res.profile);
        let corner = res.approximant.entry(1, 1).sub(&f).unwrap();
        assert!(sup_norm(&corner) < 2e-2);
    }
}
