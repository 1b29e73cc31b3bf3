use std::fmt::Display;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::cube::Pattern;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest dimension the optimiser tables are built for.
pub const MAX_OPT_K: usize = 6;

/// Per-dimension lookup tables over all `3^k` patterns.
#[derive(Debug)]
pub struct PatternTable {
    pub k: usize,
    pub patterns: Vec<Pattern>,
    pub weight: Vec<usize>,
    /// `I_ρ`: indices of patterns indistinguishable from `ρ`, excluding `ρ`.
    pub indistinguishable: Vec<Vec<usize>>,
}

impl PatternTable {
    fn build(k: usize) -> Self {
        let patterns = Pattern::all(k).expect("k checked by caller");
        let weight = patterns.iter().map(Pattern::weight).collect();
        let indistinguishable = patterns
            .iter()
            .enumerate()
            .map(|(i, p)| {
                patterns
                    .iter()
                    .enumerate()
                    .filter(|&(j, q)| j != i && !p.is_distinguishable_from(q))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        PatternTable {
            k,
            patterns,
            weight,
            indistinguishable,
        }
    }
}

/// Shared table for dimension `k`.
pub fn table(k: usize) -> Result<&'static PatternTable> {
    static TABLES: [OnceLock<PatternTable>; MAX_OPT_K + 1] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    if k == 0 || k > MAX_OPT_K {
        return Err(Error::DimensionOutOfRange {
            k,
            min: 1,
            max: MAX_OPT_K,
        });
    }
    Ok(TABLES[k].get_or_init(|| PatternTable::build(k)))
}

/// A vector in `R^{{0,1,*}^k}`, indexed by [`Pattern::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileVector<T> {
    k: usize,
    values: Vec<T>,
}

impl<T: Scalar> ProfileVector<T> {
    pub fn zeros(k: usize) -> Result<Self> {
        let len = table(k)?.patterns.len();
        Ok(ProfileVector {
            k,
            values: vec![T::zero(); len],
        })
    }

    pub fn from_values(k: usize, values: Vec<T>) -> Result<Self> {
        let len = table(k)?.patterns.len();
        if values.len() != len {
            return Err(Error::InvalidArgument(format!(
                "expected {len} entries for k = {k}, got {}",
                values.len()
            )));
        }
        Ok(ProfileVector { k, values })
    }

    pub fn from_entries<I: IntoIterator<Item = (Pattern, T)>>(k: usize, entries: I) -> Result<Self> {
        let mut x = Self::zeros(k)?;
        for (p, v) in entries {
            x.set(&p, v)?;
        }
        Ok(x)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, p: &Pattern) -> T {
        self.values[p.index()].clone()
    }

    pub fn at(&self, i: usize) -> &T {
        &self.values[i]
    }

    pub fn set(&mut self, p: &Pattern, v: T) -> Result<()> {
        if p.k() != self.k {
            return Err(Error::DimensionMismatch {
                left: self.k,
                right: p.k(),
            });
        }
        self.values[p.index()] = v;
        Ok(())
    }

    pub(crate) fn set_at(&mut self, i: usize, v: T) {
        self.values[i] = v;
    }

    /// Indices of non-zero entries, in pattern order.
    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| !self.values[i].is_zero())
            .collect()
    }

    /// `supp(x)` in pattern order.
    pub fn support(&self) -> Vec<Pattern> {
        let t = table(self.k).expect("valid k");
        self.support_indices()
            .into_iter()
            .map(|i| t.patterns[i])
            .collect()
    }

    /// `||x||`, the ℓ1 norm.
    pub fn norm(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.abs())
    }

    /// Sum of entries (equal to the norm on nonnegative vectors).
    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn l1_distance(&self, other: &Self) -> Result<T> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch {
                left: self.k,
                right: other.k,
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs()))
    }

    pub fn scale(&self, s: &T) -> Self {
        ProfileVector {
            k: self.k,
            values: self.values.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> ProfileVector<f64> {
        ProfileVector {
            k: self.k,
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl<T: Scalar + Display> ProfileVector<T> {
    /// Vector file: one `pattern value` line per non-zero entry.
    pub fn to_text(&self) -> String {
        let t = table(self.k).expect("valid k");
        let mut s = String::new();
        for i in self.support_indices() {
            s.push_str(&format!("{} {}\n", t.patterns[i], self.values[i]));
        }
        s
    }
}

impl<T: Scalar + FromStr> ProfileVector<T> {
    /// Parses a vector file; the dimension is taken from the first pattern
    /// unless `k` is given. Omitted patterns are zero.
    pub fn from_text(text: &str, k: Option<usize>) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(p), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "expected `pattern value`".into(),
                });
            };
            let p: Pattern = p.parse().map_err(|e: Error| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            let v: T = v.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("cannot parse value {v:?}"),
            })?;
            entries.push((i + 1, p, v));
        }
        let k = match (k, entries.first()) {
            (Some(k), _) => k,
            (None, Some((_, p, _))) => p.k(),
            (None, None) => {
                return Err(Error::Parse {
                    line: 0,
                    message: "empty vector file needs an explicit dimension".into(),
                })
            }
        };
        let mut x = Self::zeros(k)?;
        for (line, p, v) in entries {
            if p.k() != k {
                return Err(Error::Parse {
                    line,
                    message: format!("pattern {p} does not have dimension {k}"),
                });
            }
            x.set(&p, v)?;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn table_counts() {
        let t = table(2).unwrap();
        assert_eq!(t.patterns.len(), 9);
        let star = "**".parse::<Pattern>().unwrap().index();
        // Everything meets the full square.
        assert_eq!(t.indistinguishable[star].len(), 8);
        assert!(table(7).is_err());
    }

    #[test]
    fn text_roundtrip_exact() {
        let x = ProfileVector::<Rational64>::from_entries(
            2,
            [("*0".parse().unwrap(), Rational64::new(1, 2)), ("**".parse().unwrap(), Rational64::from_integer(2))],
        )
        .unwrap();
        let back = ProfileVector::<Rational64>::from_text(&x.to_text(), None).unwrap();
        assert_eq!(back, x);
        assert_eq!(x.norm(), Rational64::new(5, 2));
    }

    #[test]
    fn parse_errors() {
        assert!(ProfileVector::<f64>::from_text("*0 1\n**\n", None).is_err());
        assert!(ProfileVector::<f64>::from_text("*0 x\n", None).is_err());
        assert!(ProfileVector::<f64>::from_text("*0 1\n*00 1\n", None).is_err());
    }
}
