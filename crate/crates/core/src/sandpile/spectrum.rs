use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Field, Rational};

use super::config::{Sandpile, SandpileConfig};

/// Enumeration limit on the number of stable configurations.
pub const MAX_STABLE_CONFIGS: u64 = 10_000_000;

/// `prod deg(v)` over non-sink vertices, or `None` on overflow.
pub fn stable_config_count(p: &Sandpile) -> Option<u64> {
    p.vertices().try_fold(1u64, |acc, v| acc.checked_mul(p.degree(v)))
}

fn decode(p: &Sandpile, verts: &[usize], mut index: u64) -> SandpileConfig {
    let mut heights = vec![0u64; p.vertex_count()];
    for &v in verts {
        let d = p.degree(v);
        heights[v] = index % d;
        index /= d;
    }
    SandpileConfig { heights }
}

/// Every recurrent configuration, found by running the burning test on all
/// stable ones. Sorted by heights.
pub fn recurrent_configs(p: &Sandpile) -> Result<Vec<SandpileConfig>> {
    let total = stable_config_count(p)
        .filter(|&t| t <= MAX_STABLE_CONFIGS)
        .ok_or_else(|| Error::TooLarge(format!("more than {MAX_STABLE_CONFIGS} stable configurations")))?;
    let verts: Vec<usize> = p.vertices().collect();
    let mut out: Vec<SandpileConfig> = (0..total)
        .into_par_iter()
        .map(|i| decode(p, &verts, i))
        .filter(|c| p.burn(c))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Number of recurrent configurations at each level. The generating
/// function of the counts is the Tutte polynomial slice `T(1, y)`.
pub fn level_spectrum(p: &Sandpile) -> Result<BTreeMap<i64, u64>> {
    let mut spec = BTreeMap::new();
    for c in recurrent_configs(p)? {
        *spec.entry(p.level(&c)).or_insert(0) += 1;
    }
    Ok(spec)
}

/// `sum over recurrent configurations of binom(level, j)`.
pub fn binomial_moment(spectrum: &BTreeMap<i64, u64>, j: u32) -> BigInt {
    spectrum.iter().fold(BigInt::from(0), |acc, (&level, &count)| acc + binom(level, j) * BigInt::from(count))
}

fn binom(n: i64, k: u32) -> BigInt {
    if n < k as i64 {
        return BigInt::from(0);
    }
    let mut r = BigInt::from(1);
    for i in 0..k as i64 {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Exact level and sand statistics under the uniform measure on recurrent
/// configurations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    #[serde(serialize_with = "crate::numerics::serialize_rational")]
    pub recurrent: Rational,
    #[serde(serialize_with = "crate::numerics::serialize_rational")]
    pub mean_level: Rational,
    #[serde(serialize_with = "crate::numerics::serialize_rational")]
    pub level_variance: Rational,
    /// Mean grains per vertex, sink included as a vertex with no sand.
    #[serde(serialize_with = "crate::numerics::serialize_rational")]
    pub sand_density: Rational,
    pub spectrum: BTreeMap<i64, u64>,
}

pub fn level_stats(p: &Sandpile) -> Result<LevelStats> {
    let spectrum = level_spectrum(p)?;
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    let count = spectrum.values().fold(Rational::zero(), |a, &c| a + int(c as i64));
    if count.is_zero() {
        return Err(Error::NotRecurrent);
    }
    let mut s1 = Rational::zero();
    let mut s2 = Rational::zero();
    for (&l, &c) in &spectrum {
        s1 += int(l) * int(c as i64);
        s2 += int(l) * int(l) * int(c as i64);
    }
    let mean = s1 / count.clone();
    let variance = s2 / count.clone() - mean.clone() * mean.clone();
    let shift = int(p.edge_total() as i64 - p.degree(p.sink()) as i64);
    let sand_density = (mean.clone() + shift) / int(p.vertex_count() as i64);
    Ok(LevelStats { recurrent: count, mean_level: mean, level_variance: variance, sand_density, spectrum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::numerics::rational;

    #[test]
    fn house_spectrum() {
        let p = Sandpile::new(families::house().graph()).unwrap();
        let spec = level_spectrum(&p).unwrap();
        assert_eq!(spec, BTreeMap::from([(0, 2), (1, 1)]));
        assert_eq!(binomial_moment(&spec, 0), BigInt::from(3));
        assert_eq!(binomial_moment(&spec, 1), BigInt::from(1));
        assert_eq!(binomial_moment(&spec, 2), BigInt::from(0));
        let st = level_stats(&p).unwrap();
        assert_eq!(st.mean_level, rational(1, 3));
        assert_eq!(st.sand_density, rational(4, 9));
        assert_eq!(st.level_variance, rational(2, 9));
    }

    #[test]
    fn recurrent_count_is_tree_count_on_a_grid() {
        let g = families::grid(3, 3).with_sink(4);
        let p = Sandpile::new(&g).unwrap();
        assert_eq!(recurrent_configs(&p).unwrap().len(), 192);
    }

    #[test]
    fn enumeration_limit() {
        let g = families::grid(6, 6).with_sink(0);
        let p = Sandpile::new(&g).unwrap();
        assert!(matches!(recurrent_configs(&p), Err(Error::TooLarge(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(1, 2), BigInt::from(0));
        assert_eq!(binom(7, 0), BigInt::from(1));
    }
}
