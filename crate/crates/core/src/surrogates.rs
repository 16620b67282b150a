//! Surrogate transforms. Shuffling keeps the distribution and destroys the
//! temporal structure; Gaussianization keeps the rank order and replaces the
//! distribution with a standard normal one.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::{MasterSeed, StreamPurpose};
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SurrogateKind {
    #[default]
    None,
    Shuffle,
    Gaussianize,
}

/// Probability assigned to the value of rank `i` (1-based) among `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PlottingPosition {
    /// `(i - 0.5) / m`
    #[default]
    Hazen,
    /// `i / (m + 1)`
    Weibull,
}

impl PlottingPosition {
    fn prob(self, rank: usize, m: usize) -> f64 {
        match self {
            PlottingPosition::Hazen => (rank as f64 - 0.5) / m as f64,
            PlottingPosition::Weibull => rank as f64 / (m as f64 + 1.0),
        }
    }
}

/// Ordering of equal values before ranks are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Seeded random order among tied values.
    #[default]
    Random,
    /// Original index order.
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GaussianizeConfig {
    #[serde(default)]
    pub plotting_position: PlottingPosition,
    #[serde(default)]
    pub tie_break: TieBreak,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gaussianized {
    pub series: Series,
    /// Number of values that share their value with at least one other.
    pub tied_values: usize,
    pub config: GaussianizeConfig,
}

fn check_len(series: &Series) -> Result<()> {
    if series.len() < 2 {
        return Err(Error::domain("surrogates need at least two values"));
    }
    Ok(())
}

/// Uniform random permutation of the values.
pub fn shuffle_with<R: Rng + ?Sized>(series: &Series, rng: &mut R) -> Result<Series> {
    check_len(series)?;
    let mut values = series.values().to_vec();
    values.shuffle(rng);
    Ok(series.map_values(values))
}

pub fn shuffle(series: &Series, seed: MasterSeed, realization: u64) -> Result<Series> {
    shuffle_with(
        series,
        &mut seed.stream(realization, StreamPurpose::Surrogate),
    )
}

/// Standard-normal quantiles `Phi^-1(p_i)` for ranks `1..=m`.
pub fn normal_scores(m: usize, position: PlottingPosition) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (1..=m)
        .map(|i| normal.inverse_cdf(position.prob(i, m)))
        .collect()
}

/// Rank-Gaussianization: the value of rank `i` becomes `Phi^-1(p_i)`.
pub fn gaussianize_with<R: Rng + ?Sized>(
    series: &Series,
    config: GaussianizeConfig,
    rng: &mut R,
) -> Result<Gaussianized> {
    check_len(series)?;
    let values = series.values();
    let m = values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut tied_values = 0;
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && values[order[end]] == values[order[start]] {
            end += 1;
        }
        if end - start > 1 {
            tied_values += end - start;
            if config.tie_break == TieBreak::Random {
                order[start..end].shuffle(rng);
            }
        }
        start = end;
    }

    let scores = normal_scores(m, config.plotting_position);
    let mut out = vec![0.0; m];
    for (rank0, &idx) in order.iter().enumerate() {
        out[idx] = scores[rank0];
    }
    Ok(Gaussianized {
        series: series.map_values(out),
        tied_values,
        config,
    })
}

pub fn gaussianize(series: &Series, seed: MasterSeed, realization: u64) -> Result<Series> {
    let mut rng = seed.stream(realization, StreamPurpose::TieBreak);
    Ok(gaussianize_with(series, GaussianizeConfig::default(), &mut rng)?.series)
}

/// Applies `kind` with the streams of `(seed, realization)`.
pub fn apply(
    kind: SurrogateKind,
    series: Series,
    seed: MasterSeed,
    realization: u64,
) -> Result<Series> {
    match kind {
        SurrogateKind::None => Ok(series),
        SurrogateKind::Shuffle => shuffle(&series, seed, realization),
        SurrogateKind::Gaussianize => gaussianize(&series, seed, realization),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::abs_moment;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sorted(v: &[f64]) -> Vec<f64> {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let s = Series::increments((0..1000).map(|i| ((i * 37) % 101) as f64 - 50.0).collect())
            .unwrap();
        let sh = shuffle(&s, MasterSeed(1), 0).unwrap();
        assert_ne!(sh.values(), s.values());
        assert_eq!(sorted(sh.values()), sorted(s.values()));
        for q in [0.1, 0.5, 1.0, 2.0] {
            assert_eq!(
                abs_moment(sh.values(), q).unwrap(),
                abs_moment(s.values(), q).unwrap()
            );
        }
        assert!(shuffle(&Series::increments(vec![1.0]).unwrap(), MasterSeed(1), 0).is_err());
    }

    #[test]
    fn five_point_scores() {
        let s = Series::increments(vec![3.0, -1.0, 10.0, 0.5, 2.0]).unwrap();
        let g = gaussianize(&s, MasterSeed(0), 0).unwrap();
        let n = Normal::new(0.0, 1.0).unwrap();
        let expect = [0.7, 0.1, 0.9, 0.3, 0.5].map(|p| n.inverse_cdf(p));
        assert_eq!(g.values(), &expect);
        assert!(g.values()[4].abs() < 1e-15);
    }

    #[test]
    fn weibull_positions() {
        let s = Series::increments(vec![2.0, 1.0, 3.0]).unwrap();
        let cfg = GaussianizeConfig {
            plotting_position: PlottingPosition::Weibull,
            tie_break: TieBreak::Stable,
        };
        let g = gaussianize_with(&s, cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let n = Normal::new(0.0, 1.0).unwrap();
        assert_eq!(
            g.series.values(),
            &[0.5, 0.25, 0.75].map(|p| n.inverse_cdf(p))
        );
    }

    #[test]
    fn ties_get_distinct_scores() {
        let s = Series::increments(vec![0.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        let g = gaussianize_with(
            &s,
            GaussianizeConfig::default(),
            &mut ChaCha8Rng::seed_from_u64(9),
        )
        .unwrap();
        assert_eq!(g.tied_values, 3);
        let v = g.series.values();
        let mut tied = vec![v[0], v[2], v[3]];
        tied.sort_by(f64::total_cmp);
        tied.dedup();
        assert_eq!(tied.len(), 3);
        assert!(v[4] < tied[0] && tied[2] < v[1]);

        let stable = GaussianizeConfig {
            tie_break: TieBreak::Stable,
            ..Default::default()
        };
        let g = gaussianize_with(&s, stable, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let v = g.series.values();
        assert!(v[0] < v[2] && v[2] < v[3]);
    }
}
