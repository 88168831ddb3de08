//! Derivative-free minimization used by the instability search.

use alloc::vec::Vec;

/// Box-constrained Nelder–Mead. Trial points are projected onto the box.
#[derive(Debug, Clone)]
pub struct NelderMead {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub max_evals: usize,
    /// Stop once the spread of simplex values drops below this.
    pub f_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

impl NelderMead {
    fn project(&self, x: &mut [f64]) {
        for ((xi, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *xi = xi.max(*lo).min(*hi);
        }
    }

    /// Minimizes `f` from `start`, building the initial simplex with per-axis `steps`.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, start: &[f64], steps: &[f64]) -> Minimum {
        let dim = start.len();
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let mut x0 = start.to_vec();
        self.project(&mut x0);
        let v0 = eval(&x0, &mut evals);
        simplex.push((x0.clone(), v0));
        for i in 0..dim {
            let mut x = x0.clone();
            x[i] += steps[i];
            if x[i] > self.upper[i] {
                x[i] = x0[i] - steps[i];
            }
            self.project(&mut x);
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }

        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            if (worst - best).abs() <= self.f_tol * (1.0 + best.abs()) {
                break;
            }
            let centroid: Vec<f64> = (0..dim)
                .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                let mut p: Vec<f64> = centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect();
                self.project(&mut p);
                p
            };

            let reflected = along(-1.0);
            let fr = eval(&reflected, &mut evals);
            if fr < best {
                let expanded = along(-2.0);
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
            let (contracted, fc) = if fr < worst {
                let c = along(-0.5);
                let v = eval(&c, &mut evals);
                (c, v)
            } else {
                let c = along(0.5);
                let v = eval(&c, &mut evals);
                (c, v)
            };
            if fc < worst.min(fr) {
                simplex[dim] = (contracted, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let mut p: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, x)| a + 0.5 * (x - a))
                    .collect();
                self.project(&mut p);
                let v = eval(&p, &mut evals);
                *vertex = (p, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum { x, value, evals }
    }
}
