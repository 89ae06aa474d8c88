//! Limited-memory BFGS with a backtracking Armijo line search.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub(crate) struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f`, which writes its gradient into the second argument.
/// Stops when the gradient sup-norm drops below `gtol` or the relative
/// decrease over an iteration falls under `ftol`.
pub(crate) fn lbfgs<F>(x0: Vec<f64>, mut f: F, max_iter: usize, gtol: f64, ftol: f64) -> LbfgsOutcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    const MEM: usize = 12;
    let n = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    let mut hist: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut gnew = vec![0.0; n];
    let mut xnew = vec![0.0; n];
    let mut stall = 0;
    for it in 0..max_iter {
        let gmax = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if gmax <= gtol {
            return LbfgsOutcome { x, iterations: it, converged: true };
        }
        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &d);
            for i in 0..n {
                d[i] -= a * y[i];
            }
            alphas.push(a);
        }
        let gamma = match hist.back() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => 1.0 / dot(&g, &g).sqrt().max(1e-300),
        };
        for v in d.iter_mut() {
            *v *= gamma;
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &d);
            for i in 0..n {
                d[i] += (a - b) * s[i];
            }
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hist.clear();
            d = g.iter().map(|v| -v / dot(&g, &g).sqrt()).collect();
            slope = dot(&g, &d);
        }
        let mut step = 1.0;
        let mut accepted = false;
        let mut fnew = fx;
        for _ in 0..60 {
            for i in 0..n {
                xnew[i] = x[i] + step * d[i];
            }
            fnew = f(&xnew, &mut gnew);
            if fnew.is_finite() && fnew <= fx + 1e-4 * step * slope {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // line search failed; a steepest-descent restart might still help once
            if hist.is_empty() {
                return LbfgsOutcome { x, iterations: it, converged: false };
            }
            hist.clear();
            continue;
        }
        let s: Vec<f64> = (0..n).map(|i| xnew[i] - x[i]).collect();
        let y: Vec<f64> = (0..n).map(|i| gnew[i] - g[i]).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if hist.len() == MEM {
                hist.pop_front();
            }
            hist.push_back((s, y, 1.0 / sy));
        }
        let decrease = fx - fnew;
        std::mem::swap(&mut x, &mut xnew);
        std::mem::swap(&mut g, &mut gnew);
        fx = fnew;
        if decrease <= ftol * fx.abs().max(1.0) {
            stall += 1;
            if stall >= 5 {
                return LbfgsOutcome { x, iterations: it + 1, converged: true };
            }
        } else {
            stall = 0;
        }
    }
    LbfgsOutcome { x, iterations: max_iter, converged: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let out = lbfgs(
            vec![-1.2, 1.0],
            |x, g| {
                let (a, b) = (x[0], x[1]);
                g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
                g[1] = 200.0 * (b - a * a);
                (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
            },
            500,
            1e-10,
            0.0,
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
    }
}
