//! Correlation-dimension estimation: total recurrence over a radius ladder,
//! log–log least squares, and the usual slope inference statistics.

use crate::embedding::{delay_embed, sample_std, EmbeddingConfig};
use crate::error::{Error, Result};
use crate::profile::multi_radius_profiles;

/// Radius ladder specification: absolute radii, or multiples of the sample
/// standard deviation of the series under analysis.
#[derive(Clone, Debug, PartialEq)]
pub enum RadiusSpec {
    Absolute(Vec<f64>),
    SigmaRange { start: f64, stop: f64, step: f64 },
}

impl RadiusSpec {
    /// Resolves the specification into absolute radii for the given series.
    pub fn resolve(&self, series: &[f64]) -> Result<Vec<f64>> {
        match self {
            RadiusSpec::Absolute(values) => {
                if values.is_empty() {
                    return Err(Error::Invalid("radius list is empty".into()));
                }
                if values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                    return Err(Error::Invalid("radii must be positive".into()));
                }
                Ok(values.clone())
            }
            RadiusSpec::SigmaRange { start, stop, step } => {
                if !(*start > 0.0) || !(*step > 0.0) || stop < start {
                    return Err(Error::Invalid(format!(
                        "bad sigma range {start}:{stop}:{step}"
                    )));
                }
                let sigma = sample_std(series);
                if sigma <= 0.0 {
                    return Err(Error::ConstantSeries);
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|i| (start + i as f64 * step) * sigma).collect())
            }
        }
    }
}

/// Slope statistics of the log-recurrence on log-radius regression.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationDimension {
    /// Regression slope: the correlation-dimension estimate.
    pub d2: f64,
    pub r_squared: f64,
    /// Two-sided p-value of the slope (Student t, n−2 degrees of freedom).
    pub p_value: f64,
    /// Standard error of the slope.
    pub std_err: f64,
}

/// Estimates the correlation dimension of a series: embeds it, computes the
/// total recurrence at every radius in one streaming pass, and regresses
/// log C on log δ. Every radius must produce nonzero recurrence.
pub fn correlation_dimension(
    series: &[f64],
    cfg: &EmbeddingConfig,
    radii: &[f64],
) -> Result<CorrelationDimension> {
    if radii.len() < 3 {
        return Err(Error::Invalid(format!(
            "need at least 3 radii for a slope fit, got {}",
            radii.len()
        )));
    }
    if radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Invalid("radii must be positive".into()));
    }
    let emb = delay_embed(series, cfg)?;
    let profiles = multi_radius_profiles(&emb, radii);
    let mut xs = Vec::with_capacity(radii.len());
    let mut ys = Vec::with_capacity(radii.len());
    for (profile, &radius) in profiles.iter().zip(radii) {
        let c = profile.total_recurrence();
        if c <= 0.0 {
            return Err(Error::NoRecurrence { radius });
        }
        xs.push(radius.ln());
        ys.push(c.ln());
    }
    let fit = ols_fit(&xs, &ys)?;
    Ok(CorrelationDimension {
        d2: fit.slope,
        r_squared: fit.r_squared,
        p_value: fit.p_value,
        std_err: fit.std_err,
    })
}

pub(crate) struct LinearFit {
    pub slope: f64,
    #[allow(dead_code)]
    pub intercept: f64,
    pub r_squared: f64,
    pub std_err: f64,
    pub p_value: f64,
}

/// Ordinary least squares with the textbook slope t-test.
pub(crate) fn ols_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len();
    debug_assert_eq!(n, ys.len());
    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    if sxx <= 0.0 {
        return Err(Error::Invalid("regression abscissae are all equal".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let df = nf - 2.0;
    let std_err = (ss_res / df / sxx).sqrt();
    let p_value = if std_err > 0.0 {
        student_t_two_sided_p(slope / std_err, df)
    } else {
        0.0
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        std_err,
        p_value,
    })
}

/// Two-sided tail probability of a Student t statistic with `df` degrees of
/// freedom: I_{df/(df+t²)}(df/2, 1/2).
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t))
}

/// ln Γ(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > 0.0);
    let x = x - 1.0;
    let mut acc = 0.999_999_999_999_809_93;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta function I_x(a, b) by continued fraction.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const FPMIN: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-12);
        assert!((ln_gamma(2.0)).abs() < 1e-12);
        assert!((ln_gamma(5.0) - 24.0f64.ln()).abs() < 1e-10);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn t_distribution_matches_table_quantiles() {
        // Classic two-sided 5 % quantiles.
        assert!((student_t_two_sided_p(2.446912, 6.0) - 0.05).abs() < 2e-4);
        assert!((student_t_two_sided_p(2.228139, 10.0) - 0.05).abs() < 2e-4);
        // df = 1 is the Cauchy distribution: P(|T| > 1) = 1/2.
        assert!((student_t_two_sided_p(1.0, 1.0) - 0.5).abs() < 1e-9);
        assert!((student_t_two_sided_p(0.0, 5.0) - 1.0).abs() < 1e-12);
        assert!(student_t_two_sided_p(50.0, 6.0) < 1e-7);
    }

    #[test]
    fn ols_recovers_exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let fit = ols_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.std_err < 1e-10);
    }

    #[test]
    fn uniform_segment_has_dimension_one() {
        let mut rng = StdRng::seed_from_u64(0xd1);
        let series: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
        let cfg = EmbeddingConfig::new(1, 1).unwrap();
        let radii: Vec<f64> = (1..=10).map(|i| 0.01 * i as f64).collect();
        let est = correlation_dimension(&series, &cfg, &radii).unwrap();
        assert!((est.d2 - 1.0).abs() < 0.1, "segment d2 = {}", est.d2);
        assert!(est.p_value < 1e-6);
    }

    #[test]
    fn uniform_square_has_dimension_two() {
        let mut rng = StdRng::seed_from_u64(0xd2);
        let series: Vec<f64> = (0..1001).map(|_| rng.random::<f64>()).collect();
        let cfg = EmbeddingConfig::new(1, 2).unwrap();
        let radii: Vec<f64> = (1..=10).map(|i| 0.01 * i as f64).collect();
        let est = correlation_dimension(&series, &cfg, &radii).unwrap();
        assert!((est.d2 - 2.0).abs() < 0.15, "square d2 = {}", est.d2);
    }

    #[test]
    fn zero_recurrence_radius_is_an_error() {
        let series: Vec<f64> = (0..50).map(|i| 100.0 * i as f64).collect();
        let cfg = EmbeddingConfig::new(1, 1).unwrap();
        let err = correlation_dimension(&series, &cfg, &[0.1, 0.2, 0.3]);
        assert!(matches!(err, Err(Error::NoRecurrence { .. })));
    }

    #[test]
    fn needs_three_radii() {
        let series: Vec<f64> = (0..50).map(|i| (i % 5) as f64).collect();
        let cfg = EmbeddingConfig::new(1, 1).unwrap();
        assert!(correlation_dimension(&series, &cfg, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn radius_spec_resolution() {
        let series: Vec<f64> = (0..100).map(|i| (i % 7) as f64).collect();
        let sigma = sample_std(&series);
        let spec = RadiusSpec::SigmaRange {
            start: 0.5,
            stop: 2.0,
            step: 0.1,
        };
        let radii = spec.resolve(&series).unwrap();
        assert_eq!(radii.len(), 16);
        assert!((radii[0] - 0.5 * sigma).abs() < 1e-12);
        assert!((radii[15] - 2.0 * sigma).abs() < 1e-9);

        let abs = RadiusSpec::Absolute(vec![0.4]).resolve(&series).unwrap();
        assert_eq!(abs, vec![0.4]);
        assert!(RadiusSpec::Absolute(vec![]).resolve(&series).is_err());
        assert!(RadiusSpec::Absolute(vec![-1.0]).resolve(&series).is_err());
        assert!(RadiusSpec::SigmaRange {
            start: 0.0,
            stop: 1.0,
            step: 0.1
        }
        .resolve(&series)
        .is_err());
    }
}
