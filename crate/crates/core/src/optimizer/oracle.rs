use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::objective::membership;
use super::vector::{table, PatternTable, ProfileVector};
use crate::error::{Error, Result};

/// Default number of restarts.
pub const DEFAULT_RESTARTS: usize = 64;

/// Ascent iterations per smoothing level.
const INNER_STEPS: usize = 400;
/// Smoothing temperatures for the soft minimum, coarse to fine.
const TEMPERATURES: [f64; 6] = [1e-1, 3e-2, 1e-2, 1e-3, 1e-4, 1e-6];
/// The returned point is shrunk by this factor before certification.
const SHRINK: f64 = 1.0 - 1e-12;
/// Extra room allowed when certifying membership.
const CERT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub value: f64,
    #[serde(skip)]
    pub point: ProfileVector<f64>,
    pub best_restart: usize,
    /// `point ∈ X(γ + 1e-9)`.
    pub certified: bool,
    pub restart_values: Vec<f64>,
}

/// Per-restart seed derived from the user seed.
fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// A random maximal set of pairwise compatible patterns of weight at least 1.
fn random_support(t: &PatternTable, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..t.patterns.len()).filter(|&i| t.weight[i] >= 1).collect();
    order.shuffle(rng);
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&j| t.patterns[i].is_compatible_with(&t.patterns[j])) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Quantities along the ray `t ↦ t u` for `u` in the simplex on `supp`.
struct Ray<'a> {
    t: &'a PatternTable,
    supp: &'a [usize],
    /// `h[a][b] = 1` when `supp[a]`, `supp[b]` are indistinguishable.
    h: Vec<Vec<f64>>,
    gamma: f64,
}

impl<'a> Ray<'a> {
    fn new(t: &'a PatternTable, supp: &'a [usize], gamma: f64) -> Self {
        let h = supp
            .iter()
            .map(|&i| {
                supp.iter()
                    .map(|&j| {
                        if i == j || !t.patterns[i].is_distinguishable_from(&t.patterns[j]) {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Ray { t, supp, h, gamma }
    }

    /// Upper limits on `t` from each active constraint, with gradients.
    fn limits(&self, u: &[f64]) -> Vec<(f64, Vec<f64>)> {
        let m = u.len();
        let hu: Vec<f64> = self.h.iter().map(|row| row.iter().zip(u).map(|(a, b)| a * b).sum()).collect();
        let a: f64 = u.iter().zip(&hu).map(|(x, y)| x * y).sum();
        let w: Vec<f64> = self.supp.iter().map(|&i| self.t.weight[i] as f64).collect();
        let b: f64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
        let mut out = Vec::with_capacity(m + 1);
        if a > 0.0 {
            let r = (b * b + 4.0 * a * self.gamma).sqrt();
            let g = (b + r) / (2.0 * a);
            let db = if r > 0.0 { (1.0 + b / r) / (2.0 * a) } else { 1.0 / a };
            let da = if r > 0.0 { self.gamma / (a * r) - g / a } else { -g / a };
            let grad = (0..m).map(|i| da * 2.0 * hu[i] + db * w[i]).collect();
            out.push((g, grad));
        }
        for (i, &idx) in self.supp.iter().enumerate() {
            if self.t.weight[idx] == 1 && u[i] > 1e-300 {
                let g = (1.0 + self.gamma) / u[i];
                let mut grad = vec![0.0; m];
                grad[i] = -g / u[i];
                out.push((g, grad));
            }
        }
        out
    }

    fn value(&self, u: &[f64]) -> f64 {
        self.limits(u).iter().map(|l| l.0).fold(f64::INFINITY, f64::min)
    }

    /// Soft minimum `-μ log Σ exp(-g/μ)` and its gradient.
    fn smooth(&self, u: &[f64], mu: f64) -> (f64, Vec<f64>) {
        let lim = self.limits(u);
        let gmin = lim.iter().map(|l| l.0).fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = lim.iter().map(|l| (-(l.0 - gmin) / mu).exp()).collect();
        let z: f64 = weights.iter().sum();
        let value = gmin - mu * z.ln();
        let mut grad = vec![0.0; u.len()];
        for (wt, (_, g)) in weights.iter().zip(&lim) {
            for (acc, gi) in grad.iter_mut().zip(g) {
                *acc += wt / z * gi;
            }
        }
        (value, grad)
    }
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in s.iter().enumerate() {
        cum += x;
        let th = (cum - 1.0) / (i + 1) as f64;
        if x - th > 0.0 {
            theta = th;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn run_restart(t: &PatternTable, gamma: f64, seed: u64) -> ProfileVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let supp = random_support(t, &mut rng);
    let ray = Ray::new(t, &supp, gamma);
    let raw: Vec<f64> = supp.iter().map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
    let total: f64 = raw.iter().sum();
    let mut u: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let mut best_u = u.clone();
    let mut best = ray.value(&u);
    for &mu in &TEMPERATURES {
        let mut step = 0.1;
        for _ in 0..INNER_STEPS {
            let (f0, g) = ray.smooth(&u, mu);
            let mut moved = false;
            while step > 1e-14 {
                let cand: Vec<f64> = u.iter().zip(&g).map(|(x, d)| x + step * d).collect();
                let cand = project_simplex(&cand);
                let (f1, _) = ray.smooth(&cand, mu);
                if f1 > f0 {
                    u = cand;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            let v = ray.value(&u);
            if v > best {
                best = v;
                best_u = u.clone();
            }
            if !moved {
                break;
            }
        }
    }
    let mut x = ProfileVector::zeros(t.k).expect("valid k");
    for (&i, &ui) in supp.iter().zip(&best_u) {
        x.set_at(i, best * ui * SHRINK);
    }
    x
}

/// Multi-start maximisation of `‖x‖` over `X(γ)`. Restarts run in parallel;
/// the best value wins, ties going to the lowest restart index.
pub fn numeric_max_norm(k: usize, gamma: f64, restarts: usize, seed: u64) -> Result<OracleResult> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be nonnegative, got {gamma}")));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is needed".into()));
    }
    let t = table(k)?;
    let points: Vec<ProfileVector<f64>> = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(t, gamma, restart_seed(seed, r)))
        .collect();
    let restart_values: Vec<f64> = points.iter().map(|p| p.sum()).collect();
    let mut best_restart = 0;
    for (i, &v) in restart_values.iter().enumerate() {
        if v > restart_values[best_restart] {
            best_restart = i;
        }
    }
    let point = points[best_restart].clone();
    let certified = membership(&point, &(gamma + CERT_SLACK)).member;
    Ok(OracleResult {
        value: restart_values[best_restart],
        point,
        best_restart,
        certified,
        restart_values,
    })
}
