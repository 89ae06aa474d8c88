//! Constructors for symbols with known structure: thematic 2x2 blocks,
//! canonical factorizations, the worked examples and seeded perturbations.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Schur;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::certify::Verdict;
use crate::error::{Error, Result};
use crate::laurent::{eval_on_grid, sup_norm, MatrixJson, MatrixLaurentPoly};
use crate::linalg::{CMat, C64, ONE};

const UNIT_TOL: f64 = 1e-10;

/// Analytic scalar column `(v₁, v₂)` with `|v₁|² + |v₂|² = 1` on the circle and
/// no common zero in the closed disk.
#[derive(Debug, Clone)]
pub struct ThematicPair {
    v1: MatrixLaurentPoly,
    v2: MatrixLaurentPoly,
    /// Smallest `|v₂|` (resp. `|v₁|`) over the closed-disk zeros of the other entry.
    pub coprime_margin: f64,
}

/// Roots of `Σ c_k z^k` (ascending coefficients) via the companion matrix.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut c: Vec<C64> = c.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() <= 1e-14 * scale {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = c[deg];
    let mut comp = CMat::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    Schur::new(comp).eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}

fn analytic_coeffs(v: &MatrixLaurentPoly) -> Vec<C64> {
    let top = v.max_index().max(0) as usize;
    (0..=top).map(|k| v.scalar_coeff(k as i32)).collect()
}

fn eval_scalar(v: &MatrixLaurentPoly, z: C64) -> C64 {
    v.eval(z)[(0, 0)]
}

impl ThematicPair {
    pub fn new(v1: MatrixLaurentPoly, v2: MatrixLaurentPoly) -> Result<Self> {
        for (name, v) in [("v1", &v1), ("v2", &v2)] {
            if !v.is_scalar() {
                return Err(Error::NotThematic(format!("{name} must be scalar")));
            }
            if !v.is_analytic() {
                return Err(Error::NotThematic(format!("{name} has negative Fourier modes")));
            }
        }
        let band = v1.band().max(v2.band());
        let grid = eval_on_grid(&MatrixLaurentPoly::block_diag(&v1, &v2), crate::laurent::default_grid_size(band))?;
        let dev = (0..grid.len())
            .map(|j| {
                let m = grid.value(j);
                (m[(0, 0)].norm_sqr() + m[(1, 1)].norm_sqr() - 1.0).abs()
            })
            .fold(0.0, f64::max);
        if dev > UNIT_TOL {
            return Err(Error::NotThematic(format!("|v1|^2 + |v2|^2 deviates from 1 by {dev:.3e}")));
        }
        let mut margin = f64::INFINITY;
        for (a, b) in [(&v1, &v2), (&v2, &v1)] {
            for z in poly_roots(&analytic_coeffs(a)) {
                if z.norm() <= 1.0 + 1e-9 {
                    margin = margin.min(eval_scalar(b, z).norm());
                }
            }
        }
        if margin <= 1e-8 {
            return Err(Error::NotThematic(format!("v1 and v2 share a zero in the closed disk (margin {margin:.3e})")));
        }
        Ok(Self { v1, v2, coprime_margin: margin })
    }

    pub fn v1(&self) -> &MatrixLaurentPoly {
        &self.v1
    }

    pub fn v2(&self) -> &MatrixLaurentPoly {
        &self.v2
    }
}

/// `[[v₁, −v̄₂], [v₂, v̄₁]]`.
pub fn thematic_2x2(p: &ThematicPair) -> MatrixLaurentPoly {
    let (v1, v2) = (&p.v1, &p.v2);
    MatrixLaurentPoly::from_entries(&[
        vec![v1.clone(), v2.conjugate().scale(-ONE)],
        vec![v2.clone(), v1.conjugate()],
    ])
    .expect("scalar entries")
}

fn thematic_from(v1: &[(i32, C64)], v2: &[(i32, C64)]) -> MatrixLaurentPoly {
    let p = ThematicPair::new(MatrixLaurentPoly::scalar(v1), MatrixLaurentPoly::scalar(v2)).expect("valid thematic pair");
    thematic_2x2(&p)
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The thematic block with `v₁ = z/√2`, `v₂ = 1/√2` used by the worked examples.
pub fn example_thematic() -> MatrixLaurentPoly {
    thematic_from(&[(1, r(FRAC_1_SQRT_2))], &[(0, r(FRAC_1_SQRT_2))])
}

/// Scalar Laurent coefficient in recipe files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarCoeff {
    pub k: i32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn scalar_from_json(c: &[ScalarCoeff]) -> MatrixLaurentPoly {
    MatrixLaurentPoly::scalar(&c.iter().map(|x| (x.k, C64::new(x.re, x.im))).collect::<Vec<_>>())
}

fn scalar_to_json(p: &MatrixLaurentPoly) -> Vec<ScalarCoeff> {
    p.coeffs().map(|(k, c)| ScalarCoeff { k, re: c[(0, 0)].re, im: c[(0, 0)].im }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub sigma: f64,
    pub multiplicity: usize,
    /// `U = z̄^k C`, `k ≥ 1`.
    pub k: u32,
    /// Constant unitary `C` (identity when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThematicSpec {
    pub level: usize,
    pub v1: Vec<ScalarCoeff>,
    pub v2: Vec<ScalarCoeff>,
    /// Top-left index of the 2x2 block; must be `d₀ + … + d_level − 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

/// `Φ = A · conj(𝒲₀) ⋯ conj(𝒲_{ι−1}) · diag(σ_j z̄^{k_j} C_j, 0) · 𝒱*_{ι−1} ⋯ 𝒱₀* · B`
/// where the `𝒲_j`, `𝒱_j` are thematic blocks embedded in identities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalRecipe {
    pub m: usize,
    pub n: usize,
    pub levels: Vec<LevelSpec>,
    #[serde(default)]
    pub left: Vec<ThematicSpec>,
    #[serde(default)]
    pub right: Vec<ThematicSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_unitary: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_unitary: Option<MatrixJson>,
}

#[derive(Debug, Clone)]
pub struct ComposedSymbol {
    pub phi: MatrixLaurentPoly,
    pub levels: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

fn check_unitary(u: &CMat, what: &str) -> Result<()> {
    let err = (u.adjoint() * u - CMat::identity(u.ncols(), u.ncols())).norm();
    if err > UNIT_TOL {
        return Err(Error::InvalidRecipe(format!("{what} is not unitary (error {err:.3e})")));
    }
    Ok(())
}

impl CanonicalRecipe {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.levels
            .iter()
            .map(|l| {
                let o = acc;
                acc += l.multiplicity;
                o
            })
            .collect()
    }

    fn thematic_block(&self, t: &ThematicSpec, size: usize, side: &str) -> Result<MatrixLaurentPoly> {
        let lvl = self
            .levels
            .get(t.level)
            .ok_or_else(|| Error::InvalidRecipe(format!("{side} factor refers to missing level {}", t.level)))?;
        let p = self.offsets()[t.level] + lvl.multiplicity - 1;
        if let Some(given) = t.position {
            if given != p {
                return Err(Error::InvalidRecipe(format!(
                    "{side} factor for level {} must sit at position {p}, got {given}",
                    t.level
                )));
            }
        }
        if p + 2 > size {
            return Err(Error::InvalidRecipe(format!("{side} factor for level {} does not fit in size {size}", t.level)));
        }
        let pair = ThematicPair::new(scalar_from_json(&t.v1), scalar_from_json(&t.v2))?;
        let v = thematic_2x2(&pair);
        let mut out = MatrixLaurentPoly::identity(size);
        // replace the 2x2 identity block at p with v
        let hole = MatrixLaurentPoly::identity(2).embed(size, size, p, p)?;
        out = out.sub(&hole)?.add(&v.embed(size, size, p, p)?)?;
        Ok(out)
    }
}

/// Multiplies out a recipe.
pub fn compose_canonical(rc: &CanonicalRecipe) -> Result<ComposedSymbol> {
    let (m, n) = (rc.m, rc.n);
    if m == 0 || n == 0 {
        return Err(Error::InvalidRecipe("sizes must be positive".into()));
    }
    let total: usize = rc.levels.iter().map(|l| l.multiplicity).sum();
    if total > m.min(n) {
        return Err(Error::InvalidRecipe(format!("multiplicities sum to {total} > min(m, n) = {}", m.min(n))));
    }
    for (j, l) in rc.levels.iter().enumerate() {
        if !(l.sigma > 0.0) || !l.sigma.is_finite() {
            return Err(Error::InvalidRecipe(format!("level {j}: sigma must be positive")));
        }
        if j > 0 && !(l.sigma < rc.levels[j - 1].sigma) {
            return Err(Error::InvalidRecipe("levels must be strictly decreasing".into()));
        }
        if l.multiplicity == 0 || l.k == 0 {
            return Err(Error::InvalidRecipe(format!("level {j}: multiplicity and k must be at least 1")));
        }
    }
    let mut center = MatrixLaurentPoly::zeros(m, n);
    for (j, (l, off)) in rc.levels.iter().zip(rc.offsets()).enumerate() {
        let c = match &l.unitary {
            Some(u) => u.to_matrix(l.multiplicity, l.multiplicity, &format!("levels[{j}].unitary"))?,
            None => CMat::identity(l.multiplicity, l.multiplicity),
        };
        check_unitary(&c, &format!("levels[{j}].unitary"))?;
        let block = MatrixLaurentPoly::from_coeffs(l.multiplicity, l.multiplicity, [(-(l.k as i32), c * r(l.sigma))])?;
        center = center.add(&block.embed(m, n, off, off)?)?;
    }
    let mut phi = center;
    for t in rc.left.iter().rev() {
        phi = rc.thematic_block(t, m, "left")?.conjugate().mul(&phi)?;
    }
    for t in rc.right.iter().rev() {
        phi = phi.mul(&rc.thematic_block(t, n, "right")?.adjoint())?;
    }
    if let Some(a) = &rc.left_unitary {
        let a = a.to_matrix(m, m, "left_unitary")?;
        check_unitary(&a, "left_unitary")?;
        phi = MatrixLaurentPoly::constant(a).mul(&phi)?;
    }
    if let Some(b) = &rc.right_unitary {
        let b = b.to_matrix(n, n, "right_unitary")?;
        check_unitary(&b, "right_unitary")?;
        phi = phi.mul(&MatrixLaurentPoly::constant(b))?;
    }
    Ok(ComposedSymbol {
        phi: phi.prune(crate::laurent::PRUNE_TOL),
        levels: rc.levels.iter().map(|l| l.sigma).collect(),
        multiplicities: rc.levels.iter().map(|l| l.multiplicity).collect(),
    })
}

/// Expected verdicts for a named example; `None` where nothing is claimed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpectedVerdicts {
    pub c1: Option<Verdict>,
    pub c2: Option<Verdict>,
    pub c3: Option<Verdict>,
    pub c4: Option<Verdict>,
    pub badly_approximable: Option<Verdict>,
    pub very_badly_approximable: Option<Verdict>,
    pub unique_best: Option<Verdict>,
    pub levels: Option<Vec<f64>>,
}

pub const EXAMPLE_NAMES: [&str; 4] = ["ex1", "ex2", "ex3", "ex3_shifted"];

fn ex3_core(first: MatrixLaurentPoly, second: MatrixLaurentPoly) -> MatrixLaurentPoly {
    MatrixLaurentPoly::block_diag(&first, &second).mul(&example_thematic().adjoint()).expect("2x2")
}

/// The worked examples with polynomial data. `ex1` uses the thematic block
/// with `v₁ = z/√2`, `v₂ = 1/√2`, so its transpose families are analytic too.
pub fn paper_example(name: &str) -> Result<(MatrixLaurentPoly, ExpectedVerdicts)> {
    use Verdict::*;
    let half = r(0.5);
    Ok(match name {
        "ex1" => {
            let d = MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::z_pow(-1), &MatrixLaurentPoly::monomial(-1, half));
            let phi = example_thematic().adjoint().mul(&d)?;
            let exp = ExpectedVerdicts {
                c1: Some(Pass),
                c2: Some(Pass),
                c3: Some(Pass),
                c4: Some(Pass),
                badly_approximable: Some(Pass),
                very_badly_approximable: Some(Pass),
                unique_best: Some(Fail),
                levels: Some(vec![1.0, 0.5]),
            };
            (phi, exp)
        }
        "ex2" => {
            let p = MatrixLaurentPoly::block_diag(&MatrixLaurentPoly::identity(1), &MatrixLaurentPoly::zeros(1, 1));
            let phi = p.mul(&example_thematic().adjoint())?;
            let exp = ExpectedVerdicts {
                c1: Some(Pass),
                c2: Some(Fail),
                c3: Some(Pass),
                c4: Some(Fail),
                badly_approximable: Some(Fail),
                very_badly_approximable: Some(Fail),
                unique_best: Some(Fail),
                levels: Some(vec![1.0]),
            };
            (phi, exp)
        }
        "ex3" => {
            let phi = ex3_core(MatrixLaurentPoly::identity(1), MatrixLaurentPoly::monomial(-2, half));
            let exp = ExpectedVerdicts {
                c1: Some(Pass),
                c2: Some(Pass),
                c3: Some(Pass),
                c4: Some(Fail),
                badly_approximable: Some(Fail),
                very_badly_approximable: Some(Fail),
                unique_best: Some(Fail),
                levels: Some(vec![1.0, 0.5]),
            };
            (phi, exp)
        }
        "ex3_shifted" => {
            let phi = ex3_core(MatrixLaurentPoly::z_pow(-1), MatrixLaurentPoly::monomial(-3, half));
            // singular values (1, 1/2) are not isometric, so zero is not the only best approximant
            let exp = ExpectedVerdicts {
                c1: Some(Pass),
                c2: Some(Pass),
                c3: Some(Pass),
                c4: Some(Pass),
                badly_approximable: Some(Pass),
                very_badly_approximable: Some(Pass),
                unique_best: Some(Fail),
                levels: Some(vec![1.0, 0.5]),
            };
            (phi, exp)
        }
        other => return Err(Error::InvalidInput(format!("unknown example {other:?}; expected one of {EXAMPLE_NAMES:?}"))),
    })
}

/// The recipe that reproduces `ex3_shifted`.
pub fn ex3_shifted_recipe() -> CanonicalRecipe {
    let s = FRAC_1_SQRT_2;
    CanonicalRecipe {
        m: 2,
        n: 2,
        levels: vec![
            LevelSpec { sigma: 1.0, multiplicity: 1, k: 1, unitary: None },
            LevelSpec { sigma: 0.5, multiplicity: 1, k: 3, unitary: None },
        ],
        left: vec![],
        right: vec![ThematicSpec {
            level: 0,
            v1: vec![ScalarCoeff { k: 1, re: s, im: 0.0 }],
            v2: vec![ScalarCoeff { k: 0, re: s, im: 0.0 }],
            position: Some(0),
        }],
        left_unitary: None,
        right_unitary: None,
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, rr) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// `Φ + ε G` with `G` a seeded random analytic polynomial of degree ≤ 2 and `‖G‖_∞ = 1`.
pub fn perturb(phi: &MatrixLaurentPoly, eps: f64, seed: u64) -> MatrixLaurentPoly {
    if eps == 0.0 {
        return phi.clone();
    }
    phi.add(&random_analytic(phi.rows(), phi.cols(), 2, eps, seed)).expect("same shape")
}

/// Random thematic pair `v₁ = (a + bz) z^p`, `v₂ = c + dz` with orthogonal
/// `(a, c)`, `(b, d)`, returned as recipe coefficients.
fn random_thematic(rng: &mut ChaCha8Rng, level: usize) -> ThematicSpec {
    loop {
        let q = random_unitary(2, rng);
        let th: f64 = rng.random_range(0.3..1.2);
        let (a, c) = (q[(0, 0)] * th.cos(), q[(1, 0)] * th.cos());
        let (b, d) = (q[(0, 1)] * th.sin(), q[(1, 1)] * th.sin());
        let p = if rng.random_bool(0.3) { 1 } else { 0 };
        let v1 = vec![(p, a), (p + 1, b)];
        let v2 = vec![(0, c), (1, d)];
        let pair = ThematicPair::new(MatrixLaurentPoly::scalar(&v1), MatrixLaurentPoly::scalar(&v2));
        if let Ok(pair) = pair {
            if pair.coprime_margin > 1e-2 {
                return ThematicSpec {
                    level,
                    v1: scalar_to_json(pair.v1()),
                    v2: scalar_to_json(pair.v2()),
                    position: None,
                };
            }
        }
    }
}

/// Seeded random recipe with sizes ≤ `max_size` and composed band ≤ `max_band`.
pub fn random_recipe(seed: u64, max_size: usize, max_band: usize) -> CanonicalRecipe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = rng.random_range(1..=max_size);
        let n = rng.random_range(1..=max_size);
        let total = rng.random_range(1..=m.min(n));
        if let Some(rc) = recipe_attempt(&mut rng, m, n, total, max_band) {
            return rc;
        }
    }
}

/// Seeded random `size x size` recipe whose singular values are all positive.
pub fn random_full_rank_recipe(seed: u64, size: usize, max_band: usize) -> CanonicalRecipe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(rc) = recipe_attempt(&mut rng, size, size, size, max_band) {
            return rc;
        }
    }
}

fn recipe_attempt(rng: &mut ChaCha8Rng, m: usize, n: usize, total: usize, max_band: usize) -> Option<CanonicalRecipe> {
    let mut mults = vec![];
    let mut left = total;
    while left > 0 {
        let d = rng.random_range(1..=left);
        mults.push(d);
        left -= d;
    }
    let mut sigma = rng.random_range(0.8..1.5);
    let mut levels = vec![];
    for &d in &mults {
        let unitary = if d > 1 || rng.random_bool(0.5) { Some(MatrixJson::from_matrix(&random_unitary(d, rng))) } else { None };
        levels.push(LevelSpec { sigma, multiplicity: d, k: rng.random_range(1..=2), unitary });
        sigma *= rng.random_range(0.3..0.7);
    }
    let mut rc = CanonicalRecipe { m, n, levels, left: vec![], right: vec![], left_unitary: None, right_unitary: None };
    let offsets = rc.offsets();
    for (j, &d) in mults.iter().enumerate() {
        let pos = offsets[j] + d - 1;
        if pos + 2 <= n && rng.random_bool(0.7) {
            rc.right.push(random_thematic(rng, j));
        }
        if pos + 2 <= m && rng.random_bool(0.5) {
            rc.left.push(random_thematic(rng, j));
        }
    }
    if rng.random_bool(0.5) {
        rc.left_unitary = Some(MatrixJson::from_matrix(&random_unitary(m, rng)));
    }
    if rng.random_bool(0.5) {
        rc.right_unitary = Some(MatrixJson::from_matrix(&random_unitary(n, rng)));
    }
    match compose_canonical(&rc) {
        Ok(c) if c.phi.band() <= max_band => Some(rc),
        _ => None,
    }
}

/// Seeded random analytic polynomial of degree ≤ `degree` with `‖G‖_∞ = scale`.
pub fn random_analytic(m: usize, n: usize, degree: usize, scale: f64, seed: u64) -> MatrixLaurentPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = MatrixLaurentPoly::from_coeffs(m, n, (0..=degree as i32).map(|k| (k, CMat::from_fn(m, n, |_, _| gaussian(&mut rng)))))
        .expect("shape");
    g.scale(r(scale / sup_norm(&g)))
}

impl CanonicalRecipe {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("recipe serializes")
    }
}
