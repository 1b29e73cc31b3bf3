use serde::Serialize;

use super::objective::f_value;
use super::vector::{table, ProfileVector};
use crate::colourings::{BipartitionChoice, KColouredGraph, ProfilePartition};
use crate::cube::Pattern;
use crate::error::{Error, Result};
use crate::structures::largest_odd_connected_matching;

/// Absolute slack on the conclusions.
pub const CONCLUSION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Hypotheses {
    /// `C = N / n > 1`.
    pub c_above_one: bool,
    /// `0 < δ < 1`.
    pub delta_in_range: bool,
    /// `n δ >= 1`.
    pub n_large: bool,
    pub density: f64,
    /// `e(G) >= (1 - δ) C(N, 2)`.
    pub dense: bool,
    /// Largest odd connected matching order per colour.
    pub odd_matching_orders: Vec<usize>,
    /// Every order is below `(1 + δ) n`.
    pub no_long_odd_matching: bool,
    pub hold: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conclusions {
    pub f_value: f64,
    /// `δ k C^2`.
    pub f_bound: f64,
    /// `2 δ C^2 + δ k C`, the bound the counting argument yields directly.
    pub f_bound_derived: f64,
    pub f_ok: bool,
    pub f_derived_ok: bool,
    /// `1 + 2 sqrt(δ) C`.
    pub weight_one_bound: f64,
    pub weight_one_violations: Vec<(Pattern, f64)>,
    /// `2 δ C^2`.
    pub product_bound: f64,
    pub product_violations: Vec<(Pattern, Pattern, f64)>,
    pub hold: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphConstraintReport {
    pub k: usize,
    pub vertices: usize,
    pub n: usize,
    pub delta: f64,
    pub c: f64,
    pub hypotheses: Hypotheses,
    pub conclusions: Conclusions,
    #[serde(skip)]
    pub v: ProfileVector<f64>,
    /// Hypotheses hold but some conclusion fails.
    pub critical: bool,
}

impl GraphConstraintReport {
    pub fn applicable(&self) -> bool {
        self.hypotheses.hold
    }
}

/// Checks the hypotheses on `G` and evaluates conclusions (1) to (3) at
/// `v = x(G) / n` for the profile chosen by `choice`.
pub fn check_graph_constraints(
    g: &KColouredGraph,
    n: usize,
    delta: f64,
    choice: &BipartitionChoice,
) -> Result<GraphConstraintReport> {
    let k = g.k();
    table(k)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !delta.is_finite() {
        return Err(Error::InvalidArgument("delta must be finite".into()));
    }
    let big_n = g.vertex_count();
    let nf = n as f64;
    let c = big_n as f64 / nf;
    let mut orders = Vec::with_capacity(k);
    for colour in 0..k {
        orders.push(largest_odd_connected_matching(g, colour)?.largest_odd_order);
    }
    let density = g.density();
    let c_above_one = c > 1.0;
    let delta_in_range = delta > 0.0 && delta < 1.0;
    let n_large = nf * delta >= 1.0;
    let dense = g.is_dense(1.0 - delta);
    let no_long_odd_matching = orders.iter().all(|&o| (o as f64) < (1.0 + delta) * nf);
    let hypotheses = Hypotheses {
        c_above_one,
        delta_in_range,
        n_large,
        density,
        dense,
        odd_matching_orders: orders,
        no_long_odd_matching,
        hold: c_above_one && delta_in_range && n_large && dense && no_long_odd_matching,
    };

    let partition = ProfilePartition::compute(g, choice)?;
    let v = partition.profile().scaled(nf);
    let t = table(k)?;
    let kf = k as f64;
    let f = f_value(&v);
    let f_bound = delta * kf * c * c;
    let f_bound_derived = 2.0 * delta * c * c + delta * kf * c;
    let weight_one_bound = 1.0 + 2.0 * delta.max(0.0).sqrt() * c;
    let product_bound = 2.0 * delta * c * c;
    let supp = v.support_indices();
    let mut weight_one_violations = Vec::new();
    let mut product_violations = Vec::new();
    for (a, &i) in supp.iter().enumerate() {
        let vi = *v.at(i);
        if t.weight[i] == 1 && vi > weight_one_bound + CONCLUSION_SLACK {
            weight_one_violations.push((t.patterns[i], vi));
        }
        for &j in &supp[a..] {
            if !t.patterns[i].is_compatible_with(&t.patterns[j]) {
                let prod = vi * v.at(j);
                if prod > product_bound + CONCLUSION_SLACK {
                    product_violations.push((t.patterns[i], t.patterns[j], prod));
                }
            }
        }
    }
    let f_ok = f <= f_bound + CONCLUSION_SLACK;
    let f_derived_ok = f <= f_bound_derived + CONCLUSION_SLACK;
    let hold = f_ok && weight_one_violations.is_empty() && product_violations.is_empty();
    let conclusions = Conclusions {
        f_value: f,
        f_bound,
        f_bound_derived,
        f_ok,
        f_derived_ok,
        weight_one_bound,
        weight_one_violations,
        product_bound,
        product_violations,
        hold,
    };
    let critical = hypotheses.hold && !conclusions.hold;
    Ok(GraphConstraintReport {
        k,
        vertices: big_n,
        n,
        delta,
        c,
        hypotheses,
        conclusions,
        v,
        critical,
    })
}
