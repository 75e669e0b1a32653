//! Derivative-free minimization used by the maximum-likelihood fitter.
//!
//! A plain Nelder-Mead simplex is enough here: the fitting objectives have
//! at most four free parameters and the fitter compensates for local minima
//! by running multiple starts.

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub struct OptimResult {
    /// Best point found.
    pub x: Vec<f64>,
    /// Objective value at `x`.
    pub fx: f64,
    /// Number of objective evaluations consumed.
    pub evals: usize,
    /// Whether the spread criterion was met before the budget ran out.
    pub converged: bool,
}

/// Nelder-Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5).
///
/// Convergence requires both a small objective spread,
/// `f_worst - f_best <= tol * max(1, |f_best|)`, and a small simplex,
/// max coordinate spread `<= sqrt(tol) * max(1, |best coordinate|)`. The
/// value criterion alone is fooled by symmetric objectives where distinct
/// vertices share one value; the geometric criterion rules that out without
/// demanding more value precision than doubles can resolve.
///
/// Non-finite objective values are treated as +inf so the simplex moves away
/// from them; callers must supply a starting point whose initial simplex has
/// at least one finite vertex, otherwise shrink steps only collapse it in
/// place and the run times out unconverged.
pub struct NelderMead {
    pub tol: f64,
    pub max_evals: usize,
}

impl NelderMead {
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], step: f64) -> OptimResult {
        let dim = x0.len();
        assert!(dim > 0, "cannot optimize a zero-dimensional objective");
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        // Initial simplex: x0 plus one vertex offset along each axis.
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let fx0 = eval(x0, &mut evals);
        simplex.push((x0.to_vec(), fx0));
        for i in 0..dim {
            let mut v = x0.to_vec();
            v[i] += step;
            let fv = eval(&v, &mut evals);
            simplex.push((v, fv));
        }

        let x_tol = self.tol.sqrt();
        let mut converged = false;
        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            if worst.is_finite() && (worst - best) <= self.tol * best.abs().max(1.0) {
                let best_v = &simplex[0].0;
                let x_scale = best_v.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
                let x_spread = simplex[1..]
                    .iter()
                    .flat_map(|(v, _)| v.iter().zip(best_v).map(|(x, b)| (x - b).abs()))
                    .fold(0.0_f64, f64::max);
                if x_spread <= x_tol * x_scale {
                    converged = true;
                    break;
                }
            }

            // Centroid of all vertices but the worst.
            let mut centroid = vec![0.0; dim];
            for (v, _) in &simplex[..dim] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x;
                }
            }
            for c in &mut centroid {
                *c /= dim as f64;
            }

            let lerp = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = lerp(1.0);
            let fr = eval(&reflected, &mut evals);
            if fr < simplex[0].1 {
                let expanded = lerp(2.0);
                let fe = eval(&expanded, &mut evals);
                simplex[dim] = if fe < fr {
                    (expanded, fe)
                } else {
                    (reflected, fr)
                };
                continue;
            }
            if fr < simplex[dim - 1].1 {
                simplex[dim] = (reflected, fr);
                continue;
            }
            let (contracted, fc) = if fr < simplex[dim].1 {
                let outside = lerp(0.5);
                let fc = eval(&outside, &mut evals);
                (outside, fc)
            } else {
                let inside = lerp(-0.5);
                let fc = eval(&inside, &mut evals);
                (inside, fc)
            };
            if fc < simplex[dim].1.min(fr) {
                simplex[dim] = (contracted, fc);
                continue;
            }

            // Shrink everything toward the best vertex.
            let best_v = simplex[0].0.clone();
            for (v, fv) in &mut simplex[1..] {
                for (x, b) in v.iter_mut().zip(&best_v) {
                    *x = b + 0.5 * (*x - b);
                }
                *fv = eval(v, &mut evals);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, fx) = simplex.swap_remove(0);
        OptimResult {
            x,
            fx,
            evals,
            converged,
        }
    }
}
