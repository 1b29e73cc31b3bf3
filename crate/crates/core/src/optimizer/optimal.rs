use super::vector::ProfileVector;
use crate::cube::{Pattern, PatternSet};
use crate::error::{Error, Result};
use crate::matchings::enumerate_matchings;
use crate::scalar::Scalar;

/// Largest dimension for which `O` is enumerated.
pub const MAX_O_K: usize = 4;

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_O_K {
        return Err(Error::DimensionOutOfRange { k, min: 1, max: MAX_O_K });
    }
    Ok(())
}

/// All decompositions of `{0,1}^k` into subcubes of weight `1..=max_weight`,
/// found by always covering the least uncovered vertex next.
pub fn enumerate_decompositions(k: usize, max_weight: usize) -> Result<Vec<PatternSet>> {
    check_k(k)?;
    let full = (1u32 << k) - 1;
    let mut out = Vec::new();
    let mut covered = vec![false; 1 << k];
    let mut chosen = Vec::new();
    fn rec(
        k: usize,
        full: u32,
        max_weight: usize,
        covered: &mut Vec<bool>,
        chosen: &mut Vec<Pattern>,
        out: &mut Vec<PatternSet>,
    ) {
        let Some(v) = covered.iter().position(|&c| !c) else {
            out.push(PatternSet::from_patterns(k, chosen.iter().copied()).expect("same k"));
            return;
        };
        let v = v as u32;
        // Stars are taken only on coordinates where `v` is 0, since `v` must be
        // the least vertex of its subcube.
        let free = full & !v;
        let mut star = free;
        loop {
            let w = star.count_ones() as usize;
            if w >= 1 && w <= max_weight {
                let p = Pattern::from_masks(k, star, v).expect("valid masks");
                let verts = p.vertex_bits();
                if verts.iter().all(|&u| !covered[u as usize]) {
                    verts.iter().for_each(|&u| covered[u as usize] = true);
                    chosen.push(p);
                    rec(k, full, max_weight, covered, chosen, out);
                    chosen.pop();
                    verts.iter().for_each(|&u| covered[u as usize] = false);
                }
            }
            if star == 0 {
                break;
            }
            star = (star - 1) & free;
        }
    }
    rec(k, full, max_weight, &mut covered, &mut chosen, &mut out);
    Ok(out)
}

/// The point of `O` supported on a decomposition: `x_τ = ω(τ)`.
pub fn o_point<T: Scalar>(d: &PatternSet) -> Result<ProfileVector<T>> {
    if !d.is_decomposition() || d.iter().any(|p| p.weight() == 0 || p.weight() > 2) {
        return Err(Error::InvalidArgument(
            "O points need a decomposition into subcubes of weight 1 or 2".into(),
        ));
    }
    ProfileVector::from_entries(d.k(), d.iter().map(|p| (*p, T::from_i64(p.weight() as i64))))
}

/// Every element of `O` for dimension `k`.
pub fn enumerate_o<T: Scalar>(k: usize) -> Result<Vec<ProfileVector<T>>> {
    enumerate_decompositions(k, 2)?.iter().map(o_point).collect()
}

/// Every element of `O*`: indicators of perfect matchings.
pub fn enumerate_o_star<T: Scalar>(k: usize) -> Result<Vec<ProfileVector<T>>> {
    check_k(k)?;
    enumerate_matchings(k)?
        .iter()
        .map(|m| ProfileVector::from_entries(k, m.edges().iter().map(|p| (*p, T::one()))))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Nearest<T> {
    pub point: ProfileVector<T>,
    pub distance: T,
    /// Position of `point` in the enumeration order.
    pub position: usize,
}

fn nearest_in<T: Scalar>(x: &ProfileVector<T>, set: Vec<ProfileVector<T>>) -> Result<Nearest<T>> {
    let mut best: Option<Nearest<T>> = None;
    for (position, p) in set.into_iter().enumerate() {
        let distance = x.l1_distance(&p)?;
        if best.as_ref().is_none_or(|b| distance < b.distance) {
            best = Some(Nearest { point: p, distance, position });
        }
    }
    best.ok_or_else(|| Error::Critical("O is empty".into()))
}

/// The element of `O` closest to `x` in ℓ1 (first in enumeration order on ties).
pub fn nearest_o_point<T: Scalar>(x: &ProfileVector<T>) -> Result<Nearest<T>> {
    nearest_in(x, enumerate_o(x.k())?)
}

/// As [`nearest_o_point`] but restricted to `O*`.
pub fn nearest_o_star_point<T: Scalar>(x: &ProfileVector<T>) -> Result<Nearest<T>> {
    nearest_in(x, enumerate_o_star(x.k())?)
}

/// `2^{k-1}`, the norm of every point of `O`.
pub fn optimal_norm(k: usize) -> u64 {
    1u64 << (k - 1)
}
