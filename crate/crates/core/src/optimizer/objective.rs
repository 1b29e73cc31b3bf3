use serde::Serialize;

use super::vector::{table, ProfileVector};
use crate::cube::Pattern;
use crate::scalar::Scalar;

/// `F(x) = (Σ x_τ)^2 - 2 Σ_{distinguishable {σ,τ}} x_σ x_τ - Σ ω(τ) x_τ`,
/// evaluated straight from the definition over the support.
pub fn f_value<T: Scalar>(x: &ProfileVector<T>) -> T {
    let t = table(x.k()).expect("vector has a valid k");
    let supp = x.support_indices();
    let total = x.sum();
    let mut dist = T::zero();
    for (a, &i) in supp.iter().enumerate() {
        for &j in &supp[a + 1..] {
            if t.patterns[i].is_distinguishable_from(&t.patterns[j]) {
                dist = dist + x.at(i).clone() * x.at(j).clone();
            }
        }
    }
    let weighted = supp.iter().fold(T::zero(), |acc, &i| {
        acc + T::from_i64(t.weight[i] as i64) * x.at(i).clone()
    });
    total.clone() * total - (dist.clone() + dist) - weighted
}

/// `F(x) = wᵀx + xᵀHx` with `w = -ω` and `H_{στ} = 1` exactly when `σ, τ`
/// are indistinguishable (diagonal included).
pub fn quadratic_form_f<T: Scalar>(x: &ProfileVector<T>) -> T {
    let t = table(x.k()).expect("vector has a valid k");
    let mut acc = T::zero();
    for i in x.support_indices() {
        let xi = x.at(i).clone();
        let mut row = xi.clone();
        for &j in &t.indistinguishable[i] {
            row = row + x.at(j).clone();
        }
        acc = acc + xi.clone() * row - T::from_i64(t.weight[i] as i64) * xi;
    }
    acc
}

/// `∂F/∂x_ρ = 2 x_ρ + 2 Σ_{τ ∈ I_ρ} x_τ - ω(ρ)`.
pub fn grad_f<T: Scalar>(x: &ProfileVector<T>) -> ProfileVector<T> {
    let t = table(x.k()).expect("vector has a valid k");
    let two = T::from_i64(2);
    let values = (0..t.patterns.len())
        .map(|r| {
            let s = t.indistinguishable[r]
                .iter()
                .fold(x.at(r).clone(), |acc, &j| acc + x.at(j).clone());
            two.clone() * s - T::from_i64(t.weight[r] as i64)
        })
        .collect();
    ProfileVector::from_values(x.k(), values).expect("same length")
}

/// Evaluation of the four families defining `X(γ)`.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintReport<T> {
    pub gamma: T,
    pub f_value: T,
    /// (X1) `F(x) <= γ`.
    pub f_ok: bool,
    /// (X2) weight-1 patterns with `x_τ > 1 + γ`, and the excess.
    pub weight_one_excess: Vec<(Pattern, T)>,
    /// (X3) incompatible pairs (possibly `σ = τ`) with `x_σ x_τ > γ`.
    pub incompatible_products: Vec<(Pattern, Pattern, T)>,
    /// (X4) negative entries.
    pub negative: Vec<(Pattern, T)>,
    pub member: bool,
}

/// Evaluates `x ∈ X(γ)`. Every `a <= b` is tested as `a <= b + slack`.
pub fn membership<T: Scalar>(x: &ProfileVector<T>, gamma: &T) -> ConstraintReport<T> {
    let t = table(x.k()).expect("vector has a valid k");
    let slack = T::slack();
    let f = f_value(x);
    let f_ok = f <= gamma.clone() + slack.clone();
    let cap = T::one() + gamma.clone();
    let supp = x.support_indices();
    let mut weight_one_excess = Vec::new();
    let mut negative = Vec::new();
    for &i in &supp {
        let v = x.at(i).clone();
        if v < T::zero() && -v.clone() > slack {
            negative.push((t.patterns[i], v.clone()));
        }
        if t.weight[i] == 1 && v > cap.clone() + slack.clone() {
            weight_one_excess.push((t.patterns[i], v - cap.clone()));
        }
    }
    let mut incompatible_products = Vec::new();
    for (a, &i) in supp.iter().enumerate() {
        for &j in &supp[a..] {
            let (p, q) = (&t.patterns[i], &t.patterns[j]);
            if !p.is_compatible_with(q) {
                let prod = x.at(i).clone() * x.at(j).clone();
                if prod > gamma.clone() + slack.clone() {
                    incompatible_products.push((*p, *q, prod));
                }
            }
        }
    }
    let member = f_ok && weight_one_excess.is_empty() && incompatible_products.is_empty() && negative.is_empty();
    ConstraintReport {
        gamma: gamma.clone(),
        f_value: f,
        f_ok,
        weight_one_excess,
        incompatible_products,
        negative,
        member,
    }
}

pub fn is_member<T: Scalar>(x: &ProfileVector<T>, gamma: &T) -> bool {
    membership(x, gamma).member
}
