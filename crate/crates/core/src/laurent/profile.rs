use serde::{Deserialize, Serialize};

use super::GridSampling;

/// Distinct positive singular levels of a symbol across the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularProfile {
    /// Distinct positive levels, strictly decreasing.
    pub levels: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub flat: Vec<bool>,
    /// Per level, max over the grid of `|s_i(ζ) − level|` over its indices.
    pub deviation: Vec<f64>,
    /// Per singular index `i < min(m, n)`: median of `s_i` over the grid.
    pub index_levels: Vec<f64>,
    pub index_deviation: Vec<f64>,
    pub index_flat: Vec<bool>,
    /// Absolute tolerance used (relative tolerance times `σ_0`).
    pub tolerance: f64,
}

impl SingularProfile {
    /// Number of distinct positive levels (ι).
    pub fn iota(&self) -> usize {
        self.levels.len()
    }

    pub fn all_flat(&self) -> bool {
        self.index_flat.iter().all(|&f| f)
    }

    /// First singular index that is not constant on the grid.
    pub fn first_nonflat_index(&self) -> Option<usize> {
        self.index_flat.iter().position(|&f| !f)
    }

    /// `Σ_{i ≤ k} d_i`: the dimension of the Schmidt family at level `k`.
    pub fn cumulative_multiplicity(&self, k: usize) -> usize {
        self.multiplicities[..=k].iter().sum()
    }

    pub fn sigma0(&self) -> f64 {
        self.index_levels.first().copied().unwrap_or(0.0)
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Clusters per-index singular values across the grid. `tol_c1` is relative to
/// the grid maximum of `s_0`; levels closer than the tolerance are merged and
/// levels not above it are treated as zero.
pub fn singular_profile(grid: &GridSampling, tol_c1: f64) -> SingularProfile {
    let traces = grid.singular_traces();
    let sigma_max = grid.max_norm();
    let tol = tol_c1 * sigma_max.max(f64::MIN_POSITIVE);
    let mut index_levels = Vec::with_capacity(traces.len());
    let mut index_deviation = Vec::with_capacity(traces.len());
    for t in &traces {
        let lvl = median(&mut t.clone());
        let dev = t.iter().map(|s| (s - lvl).abs()).fold(0.0, f64::max);
        index_levels.push(lvl);
        index_deviation.push(dev);
    }
    let index_flat: Vec<bool> = index_deviation.iter().map(|&d| d <= tol).collect();

    // group consecutive indices into distinct positive levels
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &lvl) in index_levels.iter().enumerate() {
        if lvl <= tol {
            break;
        }
        match groups.last_mut() {
            Some(g) if (index_levels[*g.last().unwrap()] - lvl).abs() < tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut levels = Vec::new();
    let mut multiplicities = Vec::new();
    let mut flat = Vec::new();
    let mut deviation = Vec::new();
    for g in groups {
        let level = g.iter().map(|&i| index_levels[i]).sum::<f64>() / g.len() as f64;
        let dev = g
            .iter()
            .flat_map(|&i| traces[i].iter().map(move |s| (s - level).abs()))
            .fold(0.0, f64::max);
        levels.push(level);
        multiplicities.push(g.len());
        flat.push(dev <= tol);
        deviation.push(dev);
    }
    SingularProfile { levels, multiplicities, flat, deviation, index_levels, index_deviation, index_flat, tolerance: tol }
}
