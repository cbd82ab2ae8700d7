//! Lag selection and delay embedding.

use crate::error::{Error, Result};

/// Delay-embedding parameters: lag h and embedding dimension d. The window
/// (d−1)·h must be shorter than the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingConfig {
    lag: usize,
    dim: usize,
}

impl EmbeddingConfig {
    pub fn new(lag: usize, dim: usize) -> Result<Self> {
        if lag < 1 {
            return Err(Error::Invalid("lag must be at least 1".into()));
        }
        if dim < 1 {
            return Err(Error::Invalid("embedding dimension must be at least 1".into()));
        }
        Ok(Self { lag, dim })
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The index span (d−1)·h consumed by one embedded point.
    pub fn window(&self) -> usize {
        (self.dim - 1) * self.lag
    }

    /// Number of embedded points a series of length `t` yields.
    pub fn point_count(&self, t: usize) -> Option<usize> {
        t.checked_sub(self.window()).filter(|&c| c > 0)
    }
}

/// Result of automatic lag selection: the chosen lag and whether the search
/// ran past half the series without a zero crossing (in which case the lag
/// is capped at length/2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LagSelection {
    pub lag: usize,
    pub capped: bool,
}

/// Sample autocorrelation at the given lag: the Pearson correlation between
/// the series and its lag-shifted copy over the overlapping window. A
/// perfectly alternating series scores exactly −1 at lag 1 and a geometric
/// decay scores exactly +1 at every lag. Degenerate windows (zero variance
/// on either side) score 0.
pub fn autocorrelation(series: &[f64], lag: usize) -> f64 {
    let n = series.len();
    assert!(lag >= 1 && lag < n, "lag must satisfy 1 ≤ lag < len");
    let head = &series[..n - lag];
    let tail = &series[lag..];
    let m = head.len() as f64;
    let mean_head = head.iter().sum::<f64>() / m;
    let mean_tail = tail.iter().sum::<f64>() / m;
    let mut cov = 0.0;
    let mut var_head = 0.0;
    let mut var_tail = 0.0;
    for (a, b) in head.iter().zip(tail) {
        let da = a - mean_head;
        let db = b - mean_tail;
        cov += da * db;
        var_head += da * da;
        var_tail += db * db;
    }
    let denom = (var_head * var_tail).sqrt();
    if denom <= 0.0 {
        0.0
    } else {
        cov / denom
    }
}

/// Smallest lag h ≥ 1 whose sample autocorrelation is ≤ 0. If none exists up
/// to length/2 the selection is capped there and flagged.
pub fn autocorr_first_zero(series: &[f64]) -> Result<LagSelection> {
    let n = series.len();
    if n < 3 {
        return Err(Error::SeriesTooShort { needed: 3, actual: n });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let variance: f64 = series.iter().map(|x| (x - mean) * (x - mean)).sum();
    if variance <= 0.0 {
        return Err(Error::ConstantSeries);
    }
    let cap = n / 2;
    for lag in 1..=cap {
        if autocorrelation(series, lag) <= 0.0 {
            return Ok(LagSelection { lag, capped: false });
        }
    }
    Ok(LagSelection { lag: cap, capped: true })
}

/// Sample standard deviation (n−1 normalization); 0 for fewer than two
/// samples.
pub fn sample_std(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 2 {
        return 0.0;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let ss: f64 = series.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Delay-embedded series: point u (0-based) is
/// (s[u+ξ], s[u+ξ−h], …, s[u]) with ξ = (d−1)·h, stored flattened.
#[derive(Clone, Debug)]
pub struct EmbeddedSeries {
    dim: usize,
    lag: usize,
    count: usize,
    data: Vec<f64>,
}

impl EmbeddedSeries {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    /// Number of embedded points.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn point(&self, u: usize) -> &[f64] {
        &self.data[u * self.dim..(u + 1) * self.dim]
    }

    /// Squared Euclidean distance between points u and v.
    #[inline]
    pub fn dist_sq(&self, u: usize, v: usize) -> f64 {
        let a = self.point(u);
        let b = self.point(v);
        let mut acc = 0.0;
        for t in 0..self.dim {
            let d = a[t] - b[t];
            acc += d * d;
        }
        acc
    }
}

/// Embeds a scalar series; the series must be longer than the window
/// (d−1)·h.
pub fn delay_embed(series: &[f64], cfg: &EmbeddingConfig) -> Result<EmbeddedSeries> {
    let t = series.len();
    let count = cfg
        .point_count(t)
        .ok_or(Error::SeriesTooShort {
            needed: cfg.window() + 1,
            actual: t,
        })?;
    let (dim, lag, window) = (cfg.dim(), cfg.lag(), cfg.window());
    let mut data = Vec::with_capacity(count * dim);
    for u in 0..count {
        for t_back in 0..dim {
            data.push(series[u + window - t_back * lag]);
        }
    }
    Ok(EmbeddedSeries {
        dim,
        lag,
        count,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_series_crosses_at_lag_one() {
        let series: Vec<f64> = (0..64).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let sel = autocorr_first_zero(&series).unwrap();
        assert_eq!(sel, LagSelection { lag: 1, capped: false });
        assert!((autocorrelation(&series, 1) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn slowly_decaying_ramp_caps_at_half_length() {
        // Geometric decay stays positive, so every autocorrelation up to
        // length/2 is positive too (verified against the direct estimator).
        let series: Vec<f64> = (0..100).map(|i| 0.9f64.powi(i)).collect();
        for lag in 1..=50 {
            assert!(autocorrelation(&series, lag) > 0.0, "lag {lag}");
        }
        let sel = autocorr_first_zero(&series).unwrap();
        assert_eq!(sel, LagSelection { lag: 50, capped: true });
    }

    #[test]
    fn constant_series_is_rejected() {
        assert!(matches!(
            autocorr_first_zero(&[2.0; 16]),
            Err(Error::ConstantSeries)
        ));
        assert!(matches!(
            autocorr_first_zero(&[1.0, 2.0]),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn one_dimensional_embedding_is_the_series() {
        let series = [3.0, 1.0, 4.0, 1.0, 5.0];
        let cfg = EmbeddingConfig::new(1, 1).unwrap();
        let emb = delay_embed(&series, &cfg).unwrap();
        assert_eq!(emb.count(), 5);
        for (u, &x) in series.iter().enumerate() {
            assert_eq!(emb.point(u), &[x]);
        }
    }

    #[test]
    fn two_dimensional_embedding_by_hand() {
        let series = [1.0, 2.0, 3.0, 4.0, 5.0];
        let cfg = EmbeddingConfig::new(1, 2).unwrap();
        let emb = delay_embed(&series, &cfg).unwrap();
        assert_eq!(emb.count(), 4);
        assert_eq!(emb.point(0), &[2.0, 1.0]);
        assert_eq!(emb.point(1), &[3.0, 2.0]);
        assert_eq!(emb.point(2), &[4.0, 3.0]);
        assert_eq!(emb.point(3), &[5.0, 4.0]);
    }

    #[test]
    fn point_count_formula() {
        let series = vec![0.5; 5000];
        let cfg = EmbeddingConfig::new(1, 7).unwrap();
        assert_eq!(delay_embed(&series, &cfg).unwrap().count(), 4994);
    }

    #[test]
    fn too_short_series_errors() {
        let cfg = EmbeddingConfig::new(2, 3).unwrap();
        assert!(matches!(
            delay_embed(&[1.0, 2.0, 3.0, 4.0], &cfg),
            Err(Error::SeriesTooShort { .. })
        ));
        // Exactly window + 1 samples give a single point.
        let emb = delay_embed(&[1.0, 2.0, 3.0, 4.0, 5.0], &cfg).unwrap();
        assert_eq!(emb.count(), 1);
        assert_eq!(emb.point(0), &[5.0, 3.0, 1.0]);
    }

    #[test]
    fn sample_std_matches_hand_value() {
        let s = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert!((sample_std(&s) - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(sample_std(&[1.0]), 0.0);
    }
}
