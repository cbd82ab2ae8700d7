//! Streaming diagonal recurrence statistics.
//!
//! The distance matrix is never materialized: each diagonal θ is scanned as
//! a stream of point pairs (u, u+θ), keeping only integer counters. A pair
//! recurs when its squared distance is strictly below δ², and "100 %
//! recurrence" means the counter literally equals the pair count on that
//! diagonal. Diagonals are independent and fan out across worker threads
//! with a deterministic indexed collection.

use rayon::prelude::*;

use crate::embedding::EmbeddedSeries;
use crate::error::{Error, Result};

/// Per-diagonal recurrence counts for one radius over one embedded series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalProfile {
    point_count: usize,
    counts: Vec<usize>,
}

impl DiagonalProfile {
    /// Builds a profile from raw per-diagonal counts. `counts[θ−1]` is the
    /// number of recurrent pairs on diagonal θ and may not exceed the pair
    /// count `point_count − θ`.
    pub fn from_counts(point_count: usize, counts: Vec<usize>) -> Result<Self> {
        if point_count < 2 {
            return Err(Error::Invalid("a profile needs at least two embedded points".into()));
        }
        if counts.len() != point_count - 1 {
            return Err(Error::Invalid(format!(
                "expected {} diagonals, got {}",
                point_count - 1,
                counts.len()
            )));
        }
        for (idx, &c) in counts.iter().enumerate() {
            let pairs = point_count - (idx + 1);
            if c > pairs {
                return Err(Error::Invalid(format!(
                    "diagonal {} counts {} recurrences over {} pairs",
                    idx + 1,
                    c,
                    pairs
                )));
            }
        }
        Ok(Self { point_count, counts })
    }

    /// Number of embedded points the profile was computed from.
    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Number of diagonals (point count − 1).
    pub fn diagonal_count(&self) -> usize {
        self.counts.len()
    }

    /// Recurrent-pair count on diagonal θ (1-based).
    pub fn count(&self, theta: usize) -> usize {
        self.counts[theta - 1]
    }

    /// Pair count on diagonal θ.
    pub fn pairs(&self, theta: usize) -> usize {
        self.point_count - theta
    }

    /// Recurrence frequency C(θ) ∈ [0, 1].
    pub fn frequency(&self, theta: usize) -> f64 {
        self.count(theta) as f64 / self.pairs(theta) as f64
    }

    /// Whether diagonal θ recurs on every pair (exact integer equality).
    pub fn is_full(&self, theta: usize) -> bool {
        self.count(theta) == self.pairs(theta)
    }

    /// Diagonals with 100 % recurrence, ascending.
    pub fn full_lines(&self) -> Vec<usize> {
        (1..=self.diagonal_count())
            .filter(|&theta| self.is_full(theta))
            .collect()
    }

    /// Number of diagonals with at least one recurrent pair.
    pub fn recurrent_line_count(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Total recurrence: the fraction of below-diagonal pairs that recur,
    /// 2·ΣS(θ) / (T² − T).
    pub fn total_recurrence(&self) -> f64 {
        let t = self.point_count as f64;
        let total: usize = self.counts.iter().sum();
        2.0 * total as f64 / (t * t - t)
    }
}

fn streamed_counts(emb: &EmbeddedSeries, deltas_sq: &[f64]) -> Vec<Vec<usize>> {
    let count = emb.count();
    (1..count)
        .into_par_iter()
        .map(|theta| {
            let mut tallies = vec![0usize; deltas_sq.len()];
            for u in 0..count - theta {
                let d2 = emb.dist_sq(u, u + theta);
                for (slot, &limit) in tallies.iter_mut().zip(deltas_sq) {
                    if d2 < limit {
                        *slot += 1;
                    }
                }
            }
            tallies
        })
        .collect()
}

/// Diagonal recurrence profile at a single radius.
pub fn diagonal_profile(emb: &EmbeddedSeries, delta: f64) -> DiagonalProfile {
    multi_radius_profiles(emb, &[delta]).pop().expect("one radius in, one profile out")
}

/// Profiles for several radii in a single pass over the pair stream; the
/// result order matches the input radii.
pub fn multi_radius_profiles(emb: &EmbeddedSeries, deltas: &[f64]) -> Vec<DiagonalProfile> {
    let deltas_sq: Vec<f64> = deltas.iter().map(|d| d * d).collect();
    let per_theta = streamed_counts(emb, &deltas_sq);
    (0..deltas.len())
        .map(|ci| DiagonalProfile {
            point_count: emb.count(),
            counts: per_theta.iter().map(|row| row[ci]).collect(),
        })
        .collect()
}

/// Fraction of strictly-below-diagonal pairs within `delta`.
pub fn total_recurrence(emb: &EmbeddedSeries, delta: f64) -> f64 {
    diagonal_profile(emb, delta).total_recurrence()
}

/// Probability that a diagonal has 100 % recurrence given that it carries
/// recurrent points at all.
pub fn prob_full_recurrence(profile: &DiagonalProfile) -> Result<f64> {
    let recurrent = profile.recurrent_line_count();
    if recurrent == 0 {
        return Err(Error::UndefinedProbability);
    }
    Ok(profile.full_lines().len() as f64 / recurrent as f64)
}

/// Summary of a diagonal profile: order statistics of the per-diagonal
/// recurrence frequencies (in percent), the inventory of 100 %-recurrence
/// diagonals, and the gaps between consecutive ones.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceSummary {
    pub max_pct: f64,
    pub min_pct: f64,
    pub mean_pct: f64,
    pub median_pct: f64,
    pub stddev_pct: f64,
    /// Periods θ with 100 % recurrence, ascending.
    pub full_lines: Vec<usize>,
    /// Gaps between consecutive full lines (count = full lines − 1).
    pub distances: Vec<usize>,
    /// Total number of diagonals the statistics run over.
    pub total_diagonals: usize,
}

impl RecurrenceSummary {
    pub fn full_line_count(&self) -> usize {
        self.full_lines.len()
    }

    /// Full lines as a share of all diagonals, in percent.
    pub fn full_line_share_pct(&self) -> f64 {
        100.0 * self.full_lines.len() as f64 / self.total_diagonals as f64
    }

    pub fn min_period(&self) -> Option<usize> {
        self.full_lines.first().copied()
    }

    pub fn max_period(&self) -> Option<usize> {
        self.full_lines.last().copied()
    }

    pub fn min_distance(&self) -> Option<usize> {
        self.distances.iter().min().copied()
    }

    pub fn max_distance(&self) -> Option<usize> {
        self.distances.iter().max().copied()
    }

    pub fn mean_distance(&self) -> Option<f64> {
        if self.distances.is_empty() {
            None
        } else {
            Some(self.distances.iter().sum::<usize>() as f64 / self.distances.len() as f64)
        }
    }
}

/// Builds the summary statistics and full-line inventory of a profile.
pub fn full_line_inventory(profile: &DiagonalProfile) -> RecurrenceSummary {
    let n = profile.diagonal_count();
    let freqs: Vec<f64> = (1..=n).map(|theta| 100.0 * profile.frequency(theta)).collect();
    let mean = freqs.iter().sum::<f64>() / n as f64;
    let variance = freqs.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / n as f64;
    let mut sorted = freqs.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite frequencies"));
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let full_lines = profile.full_lines();
    let distances: Vec<usize> = full_lines.windows(2).map(|w| w[1] - w[0]).collect();
    RecurrenceSummary {
        max_pct: sorted.last().copied().unwrap_or(0.0),
        min_pct: sorted.first().copied().unwrap_or(0.0),
        mean_pct: mean,
        median_pct: median,
        stddev_pct: variance.sqrt(),
        full_lines,
        distances,
        total_diagonals: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{delay_embed, EmbeddingConfig};

    fn embed1(series: &[f64]) -> EmbeddedSeries {
        delay_embed(series, &EmbeddingConfig::new(1, 1).unwrap()).unwrap()
    }

    #[test]
    fn periodic_sequence_has_full_lines_at_multiples_of_the_period() {
        let series: Vec<f64> = (0..30).map(|i| [0.0, 10.0, 20.0][i % 3]).collect();
        let emb = embed1(&series);
        let profile = diagonal_profile(&emb, 0.5);
        for theta in 1..emb.count() {
            if theta % 3 == 0 {
                assert!(profile.is_full(theta), "θ = {theta}");
                assert_eq!(profile.frequency(theta), 1.0);
            } else {
                assert_eq!(profile.count(theta), 0, "θ = {theta}");
            }
        }
    }

    #[test]
    fn far_apart_points_have_zero_recurrence() {
        let emb = embed1(&[0.0, 10.0, 30.0, 60.0]);
        let profile = diagonal_profile(&emb, 0.5);
        assert!(profile.counts.iter().all(|&c| c == 0));
        assert_eq!(profile.total_recurrence(), 0.0);
    }

    #[test]
    fn single_close_pair_counts_once() {
        // One close pair two periods apart: C(2) = 1/3 and nothing else.
        let emb = embed1(&[0.0, 10.0, 0.05, 30.0, 50.0]);
        let profile = diagonal_profile(&emb, 1.0);
        assert!((profile.frequency(2) - 1.0 / 3.0).abs() < 1e-15);
        for theta in [1usize, 3, 4] {
            assert_eq!(profile.count(theta), 0);
        }
        assert!((profile.total_recurrence() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn identical_points_recur_everywhere() {
        let emb = embed1(&[4.2; 12]);
        let profile = diagonal_profile(&emb, 0.1);
        assert!((1..=profile.diagonal_count()).all(|t| profile.is_full(t)));
        assert_eq!(profile.total_recurrence(), 1.0);
        assert_eq!(prob_full_recurrence(&profile).unwrap(), 1.0);
    }

    #[test]
    fn probability_counts_full_over_recurrent() {
        // Frequencies {1, 0.5, 0.2, 0}: one full line among three recurrent.
        let profile = DiagonalProfile::from_counts(5, vec![4, 2, 1, 0]).unwrap();
        assert!((prob_full_recurrence(&profile).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn probability_undefined_without_recurrence() {
        let profile = DiagonalProfile::from_counts(4, vec![0, 0, 0]).unwrap();
        assert!(matches!(
            prob_full_recurrence(&profile),
            Err(Error::UndefinedProbability)
        ));
    }

    #[test]
    fn white_noise_rarely_produces_full_lines() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x0f0f);
        let series: Vec<f64> = (0..400).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sigma = crate::embedding::sample_std(&series);
        let emb = delay_embed(&series, &EmbeddingConfig::new(1, 3).unwrap()).unwrap();
        let profile = diagonal_profile(&emb, sigma);
        let p = prob_full_recurrence(&profile).unwrap();
        assert!(p < 0.05, "white noise produced p = {p}");
    }

    #[test]
    fn inventory_of_empty_profile() {
        let profile = DiagonalProfile::from_counts(4, vec![0, 0, 0]).unwrap();
        let summary = full_line_inventory(&profile);
        assert_eq!(summary.full_line_count(), 0);
        assert!(summary.distances.is_empty());
        assert_eq!(summary.max_pct, 0.0);
        assert_eq!(summary.median_pct, 0.0);
        assert_eq!(summary.mean_distance(), None);
    }

    #[test]
    fn inventory_distances_between_evenly_spaced_lines() {
        // Full lines at θ ∈ {157, 314, 471} in a 600-diagonal profile.
        let point_count = 601;
        let counts: Vec<usize> = (1..=600)
            .map(|theta| if theta % 157 == 0 { point_count - theta } else { 0 })
            .collect();
        let profile = DiagonalProfile::from_counts(point_count, counts).unwrap();
        let summary = full_line_inventory(&profile);
        assert_eq!(summary.full_lines, vec![157, 314, 471]);
        assert_eq!(summary.distances, vec![157, 157]);
        assert_eq!(summary.mean_distance(), Some(157.0));
        assert_eq!(summary.min_period(), Some(157));
        assert_eq!(summary.max_period(), Some(471));
    }

    #[test]
    fn summary_statistics_by_hand() {
        // Frequencies 100 %, 50 %, 0 %: mean 50, median 50, max 100, min 0.
        let profile = DiagonalProfile::from_counts(4, vec![3, 1, 0]).unwrap();
        let summary = full_line_inventory(&profile);
        assert!((summary.max_pct - 100.0).abs() < 1e-12);
        assert_eq!(summary.min_pct, 0.0);
        assert!((summary.mean_pct - 50.0).abs() < 1e-12);
        assert!((summary.median_pct - 50.0).abs() < 1e-12);
        let expected_var: f64 = (2500.0 + 0.0 + 2500.0) / 3.0;
        assert!((summary.stddev_pct - expected_var.sqrt()).abs() < 1e-12);
        assert_eq!(summary.full_lines, vec![1]);
        assert_eq!(summary.total_diagonals, 3);
    }

    #[test]
    fn monotone_in_delta() {
        let series: Vec<f64> = (0..50).map(|i| ((i * 37) % 17) as f64).collect();
        let emb = embed1(&series);
        let radii = [0.5, 1.0, 2.0, 4.0, 8.0];
        let profiles = multi_radius_profiles(&emb, &radii);
        for theta in 1..emb.count() {
            for w in profiles.windows(2) {
                assert!(w[0].count(theta) <= w[1].count(theta));
            }
        }
    }

    #[test]
    fn multi_radius_matches_individual_profiles() {
        let series: Vec<f64> = (0..80).map(|i| (i as f64 * 0.7).sin() * 3.0).collect();
        let emb = delay_embed(&series, &EmbeddingConfig::new(2, 3).unwrap()).unwrap();
        let radii = [0.3, 1.1, 2.9];
        let multi = multi_radius_profiles(&emb, &radii);
        for (i, &r) in radii.iter().enumerate() {
            assert_eq!(multi[i], diagonal_profile(&emb, r));
        }
    }

    #[test]
    fn from_counts_validates_shape() {
        assert!(DiagonalProfile::from_counts(4, vec![0, 0]).is_err());
        assert!(DiagonalProfile::from_counts(4, vec![4, 0, 0]).is_err());
        assert!(DiagonalProfile::from_counts(1, vec![]).is_err());
    }
}
