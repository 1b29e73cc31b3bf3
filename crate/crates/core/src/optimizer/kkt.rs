use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::cube::PatternSet;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximise `Σ x_i` subject to `Σ (x_i^2 - α_i x_i) <= 0` and `x_i <= 1`
/// for `i < ell`, where `α_i = 1` for `i < ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KktInstance {
    alpha: Vec<i64>,
    ell: usize,
}

impl KktInstance {
    pub fn new(alpha: Vec<i64>, ell: usize) -> Result<Self> {
        if ell > alpha.len() {
            return Err(Error::InvalidArgument(format!(
                "ell = {ell} exceeds m = {}",
                alpha.len()
            )));
        }
        if let Some(i) = (0..ell).find(|&i| alpha[i] != 1) {
            return Err(Error::InvalidArgument(format!(
                "alpha[{i}] = {} but the first {ell} entries must equal 1",
                alpha[i]
            )));
        }
        Ok(KktInstance { alpha, ell })
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    /// Largest violation of the two constraint families at `x` (0 if feasible).
    pub fn residual<T: Real>(&self, x: &[T]) -> T {
        let sphere = x
            .iter()
            .zip(&self.alpha)
            .fold(T::zero(), |acc, (&xi, &a)| acc + xi * xi - T::from_i64(a) * xi);
        let caps = x[..self.ell]
            .iter()
            .fold(T::zero(), |acc, &xi| acc.max(xi - T::one()));
        sphere.max(caps).max(T::zero())
    }
}

/// Which closed form applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KktBranch {
    /// `Σ α_i^2 > m`: the unit caps bind.
    CapsActive,
    /// `Σ α_i^2 <= m`: only the spherical constraint binds.
    SphereOnly,
}

#[derive(Debug, Clone, Serialize)]
pub struct KktSolution<T> {
    pub bound: T,
    pub maximiser: Vec<T>,
    pub branch: KktBranch,
}

/// The closed-form maximum of `Σ x_i` and a maximiser.
pub fn kkt_solve<T: Real>(inst: &KktInstance) -> KktSolution<T> {
    let m = inst.m();
    let ell = inst.ell;
    let half = T::from_i64(1) / T::from_i64(2);
    let sq: i64 = inst.alpha.iter().map(|a| a * a).sum();
    if m == 0 {
        return KktSolution {
            bound: T::zero(),
            maximiser: Vec::new(),
            branch: KktBranch::SphereOnly,
        };
    }
    if sq > m as i64 {
        let tail = &inst.alpha[ell..];
        let tail_sum: i64 = tail.iter().sum();
        let tail_sq: i64 = tail.iter().map(|a| a * a).sum();
        let rest = T::from_i64((m - ell) as i64);
        let rms = (T::from_i64(tail_sq) / rest).sqrt();
        let mut x = vec![T::one(); ell];
        x.extend(tail.iter().map(|&a| half * (T::from_i64(a) + rms)));
        let bound = T::from_i64(ell as i64)
            + half * (T::from_i64(tail_sum) + (rest * T::from_i64(tail_sq)).sqrt());
        KktSolution {
            bound,
            maximiser: x,
            branch: KktBranch::CapsActive,
        }
    } else {
        let sum: i64 = inst.alpha.iter().sum();
        let mm = T::from_i64(m as i64);
        let rms = (T::from_i64(sq) / mm).sqrt();
        let x = inst
            .alpha
            .iter()
            .map(|&a| half * (T::from_i64(a) + rms))
            .collect();
        let bound = half * (T::from_i64(sum) + (mm * T::from_i64(sq)).sqrt());
        KktSolution {
            bound,
            maximiser: x,
            branch: KktBranch::SphereOnly,
        }
    }
}

/// Both sides of `Σα + sqrt(m Σα²) <= Σ 2^α` for integers `α_i >= 2`.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftReport {
    pub lhs: f64,
    pub rhs: u128,
    pub holds: bool,
    pub equality: bool,
}

/// Largest exponent accepted by [`shift_check`].
pub const MAX_SHIFT_ALPHA: u32 = 100;

/// Decides the inequality exactly in integers: with `D = Σ 2^α - Σ α`, it
/// holds iff `D >= 0` and `m Σ α^2 <= D^2`, with equality iff `m Σ α^2 = D^2`.
pub fn shift_check(alpha: &[u32]) -> Result<ShiftReport> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument("alpha must be non-empty".into()));
    }
    if let Some(&a) = alpha.iter().find(|&&a| a < 2) {
        return Err(Error::Precondition(format!("every alpha must be at least 2, found {a}")));
    }
    if let Some(&a) = alpha.iter().find(|&&a| a > MAX_SHIFT_ALPHA) {
        return Err(Error::InvalidArgument(format!("alpha {a} exceeds {MAX_SHIFT_ALPHA}")));
    }
    let m = alpha.len() as u128;
    let sum: u128 = alpha.iter().map(|&a| a as u128).sum();
    let sq: u128 = alpha.iter().map(|&a| (a as u128) * (a as u128)).sum();
    let rhs = alpha
        .iter()
        .try_fold(0u128, |acc, &a| acc.checked_add(1u128 << a))
        .ok_or_else(|| Error::InvalidArgument("sum of powers overflows".into()))?;
    let lhs = sum as f64 + ((m * sq) as f64).sqrt();
    let (holds, equality) = if rhs < sum {
        (false, false)
    } else {
        let d = rhs - sum;
        match d.checked_mul(d) {
            Some(d2) => (m * sq <= d2, m * sq == d2),
            // D^2 beyond u128 is far larger than m Σα^2.
            None => (true, false),
        }
    };
    Ok(ShiftReport {
        lhs,
        rhs,
        holds,
        equality,
    })
}

/// `2^{k-1} - Σ d_τ` after validating the hypotheses on `D` and `Δ`.
pub fn convex_bound(d_set: &PatternSet, degrees: &[usize]) -> Result<i64> {
    if degrees.len() != d_set.len() {
        return Err(Error::InvalidArgument(format!(
            "{} degrees for {} patterns",
            degrees.len(),
            d_set.len()
        )));
    }
    if !d_set.is_distinguishable() {
        return Err(Error::Precondition("the pattern set is not distinguishable".into()));
    }
    for (p, &d) in d_set.iter().zip(degrees) {
        if d > p.weight() {
            return Err(Error::Precondition(format!("d = {d} exceeds ω({p}) = {}", p.weight())));
        }
        if p.weight() == 1 && d != 0 {
            return Err(Error::Precondition(format!("weight-1 pattern {p} must have d = 0")));
        }
    }
    let total: i64 = degrees.iter().map(|&d| d as i64).sum();
    Ok((1i64 << (d_set.k() - 1)) - total)
}

/// Draws a point of `Σ (x_τ^2 + (2 d_τ - ω(τ)) x_τ) = 0` with every entry
/// positive and weight-1 entries at most 1, by rejection from random
/// directions around the sphere's centre. `None` after `attempts` misses.
pub fn sample_convex_point<R: Rng>(d_set: &PatternSet, degrees: &[usize], rng: &mut R, attempts: usize) -> Option<Vec<f64>> {
    let b: Vec<f64> = d_set
        .iter()
        .zip(degrees)
        .map(|(p, &d)| 2.0 * d as f64 - p.weight() as f64)
        .collect();
    let radius = 0.5 * b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if radius == 0.0 {
        return None;
    }
    for _ in 0..attempts {
        let mut u: Vec<f64> = (0..b.len()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        // Mostly search the positive orthant, where feasible points live.
        if rng.gen_bool(0.8) {
            u.iter_mut().for_each(|v| *v = v.abs());
        }
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x: Vec<f64> = b.iter().zip(&u).map(|(bi, ui)| -bi / 2.0 + radius * ui / norm).collect();
        let ok = x.iter().zip(d_set.iter()).all(|(&v, p)| v > 0.0 && (p.weight() != 1 || v <= 1.0));
        if ok {
            return Some(x);
        }
    }
    None
}
