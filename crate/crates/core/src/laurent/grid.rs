use std::f64::consts::{FRAC_PI_2, PI};

use rustfft::FftPlanner;

use super::MatrixLaurentPoly;
use crate::error::{Error, Result};
use crate::linalg::{self, root_of_unity, CMat, Svd, C64, ZERO};

pub type PointSvd = Svd;

/// Values of a symbol on the uniform grid `ζ_j = exp(2πij/N)` together with a
/// per-point SVD.
#[derive(Debug, Clone)]
pub struct GridSampling {
    n: usize,
    rows: usize,
    cols: usize,
    values: Vec<CMat>,
    svd: Vec<PointSvd>,
}

/// `max(256, next power of two ≥ 8K + 8)`.
pub fn default_grid_size(band: usize) -> usize {
    (8 * band + 8).next_power_of_two().max(256)
}

/// Samples `phi` on `n` points by one FFT per matrix entry and computes the
/// per-point SVDs.
pub fn eval_on_grid(phi: &MatrixLaurentPoly, n: usize) -> Result<GridSampling> {
    if !n.is_power_of_two() {
        return Err(Error::GridNotPowerOfTwo(n));
    }
    let band = phi.band();
    let required = 2 * band + 2;
    if n < required {
        return Err(Error::GridTooSmall { n, band, required });
    }
    let (rows, cols) = (phi.rows(), phi.cols());
    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft_inverse(n);
    let mut values = vec![CMat::zeros(rows, cols); n];
    let mut buf = vec![ZERO; n];
    for i in 0..rows {
        for j in 0..cols {
            buf.iter_mut().for_each(|x| *x = ZERO);
            for (k, c) in phi.coeffs() {
                buf[k.rem_euclid(n as i32) as usize] += c[(i, j)];
            }
            ifft.process(&mut buf);
            for (p, v) in values.iter_mut().enumerate() {
                v[(i, j)] = buf[p];
            }
        }
    }
    Ok(GridSampling::from_values(values, rows, cols))
}

impl GridSampling {
    /// Wraps precomputed point values (point `j` at `exp(2πij/N)`).
    pub fn from_values(values: Vec<CMat>, rows: usize, cols: usize) -> Self {
        let n = values.len();
        let svd = linalg::par_map(n, |j| linalg::svd(&values[j]));
        Self { n, rows, cols, values, svd }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn point(&self, j: usize) -> C64 {
        root_of_unity(j, self.n)
    }

    pub fn points(&self) -> Vec<C64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    pub fn value(&self, j: usize) -> &CMat {
        &self.values[j]
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }

    pub fn svd(&self, j: usize) -> &PointSvd {
        &self.svd[j]
    }

    /// Singular values `s_i(Φ(ζ_j))` for all points, index-major.
    pub fn singular_traces(&self) -> Vec<Vec<f64>> {
        let p = self.rows.min(self.cols);
        (0..p).map(|i| self.svd.iter().map(|d| d.s[i]).collect()).collect()
    }

    /// Largest singular value over the grid.
    pub fn max_norm(&self) -> f64 {
        self.svd.iter().map(|d| d.s.first().copied().unwrap_or(0.0)).fold(0.0, f64::max)
    }

    /// Trigonometric interpolation: recovers the coefficients with indices in
    /// `[-band, band]` by one forward FFT per entry.
    pub fn fit(&self, band: usize) -> Result<MatrixLaurentPoly> {
        if 2 * band + 1 > self.n {
            return Err(Error::GridTooSmall { n: self.n, band, required: 2 * band + 2 });
        }
        let n = self.n;
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(n);
        let b = band as i32;
        let mut coeffs: Vec<(i32, CMat)> = (-b..=b).map(|k| (k, CMat::zeros(self.rows, self.cols))).collect();
        let mut buf = vec![ZERO; n];
        let scale = 1.0 / n as f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (p, v) in self.values.iter().enumerate() {
                    buf[p] = v[(i, j)];
                }
                fft.process(&mut buf);
                for (k, m) in coeffs.iter_mut() {
                    m[(i, j)] = buf[k.rem_euclid(n as i32) as usize] * scale;
                }
            }
        }
        MatrixLaurentPoly::from_coeffs(self.rows, self.cols, coeffs)
    }
}

/// Winding number of a nonvanishing scalar symbol around the origin, from the
/// accumulated argument increments over the grid points of `grid`.
pub fn winding_number(phi: &MatrixLaurentPoly, grid: &GridSampling) -> Result<i64> {
    if !phi.is_scalar() {
        return Err(Error::NotScalar { rows: phi.rows(), cols: phi.cols() });
    }
    let n = grid.len();
    let vals: Vec<C64> = (0..n).map(|j| phi.eval(grid.point(j))[(0, 0)]).collect();
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let min_modulus = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if scale == 0.0 || min_modulus <= 1e-10 * scale.max(1.0) {
        return Err(Error::WindingUndefined { min_modulus });
    }
    let mut total = 0.0;
    for j in 0..n {
        let inc = (vals[(j + 1) % n] / vals[j]).arg();
        if inc.abs() > FRAC_PI_2 {
            return Err(Error::GridTooCoarse { increment: inc.abs(), n });
        }
        total += inc;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Supremum over the circle of `f(θ)`, a continuous periodic function, given
/// its values on `samples.len()` equispaced angles. Each sampled local maximum
/// near the top is refined by golden-section search on its bracket.
pub(crate) fn refine_sup<F: Fn(f64) -> f64>(f: F, samples: &[f64]) -> f64 {
    let n = samples.len();
    if n == 0 {
        return 0.0;
    }
    let h = 2.0 * PI / n as f64;
    let top = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best = top;
    let spread = top.abs().max(1.0) * 1e-2;
    let mut cands: Vec<usize> = (0..n)
        .filter(|&j| {
            let (l, r) = (samples[(j + n - 1) % n], samples[(j + 1) % n]);
            samples[j] >= l && samples[j] >= r && samples[j] >= top - spread
        })
        .collect();
    cands.sort_by(|&a, &b| samples[b].total_cmp(&samples[a]));
    cands.truncate(16);
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    for j in cands {
        let (mut a, mut b) = ((j as f64 - 1.0) * h, (j as f64 + 1.0) * h);
        let mut c = b - gr * (b - a);
        let mut d = a + gr * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..80 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = f(d);
            }
            if b - a < 1e-13 {
                break;
            }
        }
        best = best.max(fc).max(fd);
    }
    best
}

/// `‖Φ‖_{L∞}` = sup over the circle of the largest singular value.
pub fn sup_norm(phi: &MatrixLaurentPoly) -> f64 {
    let n = (4 * default_grid_size(phi.band())).max(1024);
    let samples: Vec<f64> = linalg::par_map(n, |j| linalg::norm2(&phi.eval(root_of_unity(j, n))));
    refine_sup(|t| linalg::norm2(&phi.eval(C64::from_polar(1.0, t))), &samples)
}
