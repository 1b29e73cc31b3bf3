use serde::Serialize;

use super::objective::is_member;
use super::vector::{table, ProfileVector};
use crate::cube::Pattern;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The `(π, ρ)`-compression `x(π, ρ)`.
pub fn compress<T: Scalar>(x: &ProfileVector<T>, pi: &Pattern, rho: &Pattern) -> Result<ProfileVector<T>> {
    if pi == rho {
        return Err(Error::InvalidArgument(format!("compression needs distinct patterns, got {pi} twice")));
    }
    if pi.k() != x.k() || rho.k() != x.k() {
        return Err(Error::DimensionMismatch {
            left: x.k(),
            right: if pi.k() != x.k() { pi.k() } else { rho.k() },
        });
    }
    Ok(compress_at(x, pi.index(), rho.index()))
}

pub(crate) fn compress_at<T: Scalar>(x: &ProfileVector<T>, pi: usize, rho: usize) -> ProfileVector<T> {
    let t = table(x.k()).expect("valid k");
    let s = x.at(pi).clone() + x.at(rho).clone();
    let mut out = x.clone();
    if t.weight[rho] >= 2 || s < T::one() {
        out.set_at(pi, T::zero());
        out.set_at(rho, s);
    } else {
        out.set_at(pi, s - T::one());
        out.set_at(rho, T::one());
    }
    out
}

/// `D(x)`: vertices `supp(x)`, edges `(π, ρ)` for distinct indistinguishable
/// pairs with `x(π, ρ) ∈ X(γ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionDigraph {
    pub vertices: Vec<Pattern>,
    pub edges: Vec<(Pattern, Pattern)>,
}

impl CompressionDigraph {
    pub fn has_edge(&self, a: &Pattern, b: &Pattern) -> bool {
        self.edges.binary_search(&(*a, *b)).is_ok()
    }

    pub fn out_degree(&self, v: &Pattern) -> usize {
        self.edges.iter().filter(|e| e.0 == *v).count()
    }

    pub fn in_degree(&self, v: &Pattern) -> usize {
        self.edges.iter().filter(|e| e.1 == *v).count()
    }
}

/// `D(x)` with membership tested in `X(γ)`.
pub fn compression_digraph_with<T: Scalar>(x: &ProfileVector<T>, gamma: &T) -> CompressionDigraph {
    let t = table(x.k()).expect("valid k");
    let supp = x.support_indices();
    let mut edges = Vec::new();
    for &i in &supp {
        for &j in &supp {
            if i != j && !t.patterns[i].is_distinguishable_from(&t.patterns[j]) && is_member(&compress_at(x, i, j), gamma) {
                edges.push((t.patterns[i], t.patterns[j]));
            }
        }
    }
    edges.sort();
    CompressionDigraph {
        vertices: supp.iter().map(|&i| t.patterns[i]).collect(),
        edges,
    }
}

/// `D(x)` for `X = X(0)`.
pub fn compression_digraph<T: Scalar>(x: &ProfileVector<T>) -> CompressionDigraph {
    compression_digraph_with(x, &T::zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Star {
    pub root: Pattern,
    pub leaves: Vec<Pattern>,
}

/// `D(x)` as a disjoint union of stars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarDecomposition {
    pub stars: Vec<Star>,
}

impl StarDecomposition {
    /// `R(x)`.
    pub fn roots(&self) -> Vec<Pattern> {
        self.stars.iter().map(|s| s.root).collect()
    }

    /// `L(x)`.
    pub fn leaves(&self) -> Vec<Pattern> {
        let mut l: Vec<Pattern> = self.stars.iter().flat_map(|s| s.leaves.iter().copied()).collect();
        l.sort();
        l
    }

    /// Checks the structure a compressed optimal point must have: roots of
    /// positive outdegree have weight at least 2, leaves have weight 1 and
    /// value 1, and `d⁺(ρ) <= min(ω(ρ), 2^{ω(ρ)-1})`.
    pub fn shape_violations<T: Scalar>(&self, x: &ProfileVector<T>) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.stars {
            let w = s.root.weight();
            let d = s.leaves.len();
            if d > 0 && w < 2 {
                out.push(format!("root {} has out-degree {d} but weight {w}", s.root));
            }
            if w >= 1 && d > 1 << (w - 1) {
                out.push(format!("root {} has out-degree {d} > 2^(ω-1)", s.root));
            }
            if d > w {
                out.push(format!("root {} has out-degree {d} > ω = {w}", s.root));
            }
            for l in &s.leaves {
                if l.weight() != 1 {
                    out.push(format!("leaf {l} has weight {}", l.weight()));
                }
                let v = x.get(l);
                if (v.clone() - T::one()).abs() > T::slack() {
                    out.push(format!("leaf {l} has value {v:?}"));
                }
            }
        }
        out
    }
}

/// Splits `d` into stars: every vertex of positive in-degree must have
/// in-degree 1 and out-degree 0. Fails with the offending vertex otherwise.
pub fn star_decomposition(d: &CompressionDigraph) -> Result<StarDecomposition> {
    let mut stars = Vec::new();
    for v in &d.vertices {
        let indeg = d.in_degree(v);
        if indeg == 0 {
            let leaves: Vec<Pattern> = d.edges.iter().filter(|e| e.0 == *v).map(|e| e.1).collect();
            stars.push(Star { root: *v, leaves });
        } else if indeg > 1 || d.out_degree(v) > 0 {
            return Err(Error::Precondition(format!(
                "{v} has in-degree {indeg} and out-degree {}; not a union of stars",
                d.out_degree(v)
            )));
        }
    }
    Ok(StarDecomposition { stars })
}

/// `Σ_{τ ∈ R(x)} (x_τ^2 + (2 d⁺(τ) - ω(τ)) x_τ)`; requires every leaf to have
/// weight 1 and value 1.
pub fn star_form_f<T: Scalar>(x: &ProfileVector<T>, stars: &StarDecomposition) -> Result<T> {
    for l in stars.leaves() {
        let v = x.get(&l);
        if l.weight() != 1 || (v.clone() - T::one()).abs() > T::slack() {
            return Err(Error::Precondition(format!(
                "leaf {l} must have weight 1 and value 1 (weight {}, value {v:?})",
                l.weight()
            )));
        }
    }
    Ok(stars.stars.iter().fold(T::zero(), |acc, s| {
        let v = x.get(&s.root);
        let coef = T::from_i64(2 * s.leaves.len() as i64 - s.root.weight() as i64);
        acc + v.clone() * v.clone() + coef * v
    }))
}

/// One applied compression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressionStep {
    pub from: Pattern,
    pub to: Pattern,
    pub support_before: usize,
}

#[derive(Debug, Clone)]
pub struct Fixpoint<T> {
    pub point: ProfileVector<T>,
    pub steps: Vec<CompressionStep>,
    /// Whether the result is `(π, ρ)`-compressed for every edge of its `D`.
    pub compressed: bool,
    pub diagnostics: Vec<String>,
}

/// Repeatedly applies support-shrinking compressions along edges of
/// `D(x)` (membership in `X(γ)`) until every edge is compressed.
///
/// Among available edges the target of larger weight wins, then the
/// lexicographically smaller target, then the smaller source.
pub fn compress_to_fixpoint<T: Scalar>(x: &ProfileVector<T>, gamma: &T) -> Fixpoint<T> {
    let t = table(x.k()).expect("valid k");
    let mut cur = x.clone();
    let mut steps = Vec::new();
    let mut diagnostics = Vec::new();
    if !is_member(x, gamma) {
        diagnostics.push("input is not a member of X(γ)".to_string());
    }
    loop {
        let d = compression_digraph_with(&cur, gamma);
        let mut best: Option<(usize, usize)> = None;
        let mut uncompressed = 0;
        for (a, b) in &d.edges {
            let (i, j) = (a.index(), b.index());
            let next = compress_at(&cur, i, j);
            if next == cur {
                continue;
            }
            uncompressed += 1;
            if !next.at(i).is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => {
                    (std::cmp::Reverse(t.weight[j]), j, i) < (std::cmp::Reverse(t.weight[bj]), bj, bi)
                }
            };
            if better {
                best = Some((i, j));
            }
        }
        match best {
            Some((i, j)) => {
                steps.push(CompressionStep {
                    from: t.patterns[i],
                    to: t.patterns[j],
                    support_before: d.vertices.len(),
                });
                cur = compress_at(&cur, i, j);
            }
            None => {
                if uncompressed > 0 {
                    diagnostics.push(format!(
                        "{uncompressed} edge(s) of D(x) are uncompressed but no compression along them shrinks the support"
                    ));
                }
                return Fixpoint {
                    point: cur,
                    steps,
                    compressed: uncompressed == 0,
                    diagnostics,
                };
            }
        }
    }
}
