//! Deterministic reductions and the small amount of statistics the
//! experiments need.

use crate::error::{validation, Result};

/// Pairwise (cascade) summation. The split points depend only on the slice
/// length, so the result is independent of how the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Mean, unbiased variance and standard error of a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let count = values.len();
        if count == 0 {
            return Summary { count, mean: f64::NAN, variance: f64::NAN, stderr: f64::NAN };
        }
        let mean = pairwise_sum(values) / count as f64;
        let variance = if count > 1 {
            let sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
            pairwise_sum(&sq) / (count - 1) as f64
        } else {
            0.0
        };
        Summary { count, mean, variance, stderr: (variance / count as f64).sqrt() }
    }

    /// Standard error of the sample variance itself, from the fourth central
    /// moment: Var(s²) ≈ (μ₄ − σ⁴ (n−3)/(n−1)) / n.
    pub fn variance_stderr(values: &[f64]) -> f64 {
        let s = Summary::of(values);
        let n = s.count as f64;
        if s.count < 4 {
            return f64::NAN;
        }
        let q: Vec<f64> = values.iter().map(|v| (v - s.mean).powi(4)).collect();
        let mu4 = pairwise_sum(&q) / n;
        let var_s2 = (mu4 - s.variance * s.variance * (n - 3.0) / (n - 1.0)) / n;
        var_s2.max(0.0).sqrt()
    }
}

/// Ordinary least-squares line `y = intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return validation("linear_fit: x and y lengths differ");
    }
    if x.len() < 3 {
        return validation("linear_fit: need at least 3 points");
    }
    let n = x.len() as f64;
    let mx = pairwise_sum(x) / n;
    let my = pairwise_sum(y) / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return validation("linear_fit: x values are all equal");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(LinearFit { slope, slope_stderr, intercept })
}

/// Two-sample Kolmogorov–Smirnov test. Returns the statistic `D` and the
/// asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let x = a[i].min(b[j]);
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = (na * nb) as f64 / (na + nb) as f64;
    (d, kolmogorov_survival((ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d))
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    (d, kolmogorov_survival((n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d))
}

fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    #[test]
    fn summary_of_small_sample() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!((s.stderr - (5.0 / 12.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn fit_recovers_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 1.5 - 2.0 * v).collect();
        let fit = linear_fit(&x, &y).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-14);
        assert!(fit.slope_stderr < 1e-12);
        assert!(linear_fit(&x[..2], &y[..2]).is_err());
    }

    #[test]
    fn ks_identical_samples_not_rejected() {
        let a: Vec<f64> = (0..500).map(|i| (i as f64 * 0.618).fract()).collect();
        let (d, p) = ks_two_sample(&a, &a);
        assert_eq!(d, 0.0);
        assert_eq!(p, 1.0);
        let (_, p1) = ks_one_sample(&a, |x| x.clamp(0.0, 1.0));
        assert!(p1 > 0.5);
    }
}
