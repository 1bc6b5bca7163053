//! Adaptive Nelder–Mead (dimension-dependent coefficients) with randomly
//! oriented starting simplices.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMead {
    pub max_iters: usize,
    /// Stop once every vertex is within this distance of the best one…
    pub xtol: f64,
    /// …and the value spread across the simplex is below this.
    pub ftol: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Orthonormal directions scaled by `scale`, in a random orientation.
pub(crate) fn random_frame<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> Vec<Vec<f64>> {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    let q = g.qr().q();
    (0..dim)
        .map(|j| q.column(j).iter().map(|v| v * scale).collect())
        .collect()
}

impl NelderMead {
    /// Minimises `f` from the simplex `x0, x0 + d_1, …, x0 + d_dim`.
    pub fn minimize<F>(&self, f: &mut F, x0: &[f64], directions: &[Vec<f64>]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let d = dim as f64;
        let (alpha, beta, gamma, delta) = (
            1.0,
            1.0 + 2.0 / d,
            0.75 - 1.0 / (2.0 * d),
            1.0 - 1.0 / d,
        );
        let (gamma, delta) = if dim == 1 { (0.5, 0.5) } else { (gamma, delta) };

        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
        pts.push(x0.to_vec());
        for dir in directions.iter().take(dim) {
            pts.push(x0.iter().zip(dir).map(|(a, b)| a + b).collect());
        }
        let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
        let mut evaluations = dim + 1;
        let mut centroid = vec![0.0; dim];
        let mut trial = vec![0.0; dim];
        let mut trial2 = vec![0.0; dim];
        let mut iterations = 0usize;

        while iterations < self.max_iters {
            iterations += 1;
            let mut order: Vec<usize> = (0..=dim).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            let sorted_pts: Vec<Vec<f64>> = order.iter().map(|&i| pts[i].clone()).collect();
            let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
            pts = sorted_pts;
            vals = sorted_vals;

            let spread = vals[dim] - vals[0];
            let size = pts[1..]
                .iter()
                .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if spread <= self.ftol && size <= self.xtol {
                break;
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for p in &pts[..dim] {
                for (c, v) in centroid.iter_mut().zip(p) {
                    *c += v / d;
                }
            }
            let worst = &pts[dim];
            for i in 0..dim {
                trial[i] = centroid[i] + alpha * (centroid[i] - worst[i]);
            }
            let f_r = f(&trial);
            evaluations += 1;

            if f_r < vals[0] {
                for i in 0..dim {
                    trial2[i] = centroid[i] + beta * (trial[i] - centroid[i]);
                }
                let f_e = f(&trial2);
                evaluations += 1;
                if f_e < f_r {
                    pts[dim].copy_from_slice(&trial2);
                    vals[dim] = f_e;
                } else {
                    pts[dim].copy_from_slice(&trial);
                    vals[dim] = f_r;
                }
                continue;
            }
            if f_r < vals[dim - 1] {
                pts[dim].copy_from_slice(&trial);
                vals[dim] = f_r;
                continue;
            }
            let outside = f_r < vals[dim];
            for i in 0..dim {
                trial2[i] = if outside {
                    centroid[i] + gamma * (trial[i] - centroid[i])
                } else {
                    centroid[i] - gamma * (centroid[i] - pts[dim][i])
                };
            }
            let f_c = f(&trial2);
            evaluations += 1;
            let accept = if outside { f_c <= f_r } else { f_c < vals[dim] };
            if accept {
                pts[dim].copy_from_slice(&trial2);
                vals[dim] = f_c;
                continue;
            }
            let best = pts[0].clone();
            for j in 1..=dim {
                for i in 0..dim {
                    pts[j][i] = best[i] + delta * (pts[j][i] - best[i]);
                }
                vals[j] = f(&pts[j]);
            }
            evaluations += dim;
        }

        let best = (0..=dim).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
        Minimum {
            x: pts[best].clone(),
            value: vals[best],
            evaluations,
        }
    }
}
