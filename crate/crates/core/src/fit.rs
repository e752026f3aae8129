//! Regression helpers for convergence-rate and tail-exponent estimates.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} usable points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("all {0} values in the window are non-positive")]
    NonPositiveValues(usize),
}

/// Ordinary least squares line through `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ols {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn ols(x: &[f64], y: &[f64]) -> Ols {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) } else { 1.0 };
    Ols { slope, intercept, r2 }
}

/// Log-log fit of a convergence curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub t_range: (f64, f64),
    pub n_points: usize,
    /// Points in the window dropped for being non-positive.
    pub dropped: usize,
}

pub const MIN_FIT_POINTS: usize = 10;

/// OLS of `ln value` on `ln t` over points with `t >= t_min`.
pub fn fit_loglog(series: &[(f64, f64)], t_min: f64) -> Result<SlopeFit, FitError> {
    fit_loglog_window(series, t_min, f64::INFINITY)
}

/// As [`fit_loglog`], restricted to `t_min <= t <= t_max`.
pub fn fit_loglog_window(series: &[(f64, f64)], t_min: f64, t_max: f64) -> Result<SlopeFit, FitError> {
    let window: Vec<(f64, f64)> =
        series.iter().copied().filter(|&(t, v)| t >= t_min && t <= t_max && t > 0.0 && !v.is_nan()).collect();
    let kept: Vec<(f64, f64)> = window.iter().copied().filter(|&(_, v)| v > 0.0).collect();
    let dropped = window.len() - kept.len();
    if kept.is_empty() && dropped > 0 {
        return Err(FitError::NonPositiveValues(dropped));
    }
    if kept.len() < MIN_FIT_POINTS {
        return Err(FitError::InsufficientData { needed: MIN_FIT_POINTS, got: kept.len() });
    }
    let x: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let f = ols(&x, &y);
    Ok(SlopeFit {
        slope: f.slope,
        intercept: f.intercept,
        r2: f.r2,
        t_range: (kept[0].0, kept[kept.len() - 1].0),
        n_points: kept.len(),
        dropped,
    })
}

/// Exponential tail fit of an empirical distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    /// `-slope * alpha`
    pub j_hat: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_points: usize,
}

pub const MIN_TAIL_SAMPLES: usize = 1000;

/// OLS of `ln P(X >= z)` on `z` for sample values between the `q_lo` and
/// `q_hi` quantiles. Tied values contribute one point, at their first rank.
pub fn fit_tail(samples: &[f64], alpha: f64, q_lo: f64, q_hi: f64) -> Result<TailFit, FitError> {
    let mut s: Vec<f64> = samples.iter().copied().filter(|v| v.is_finite()).collect();
    if s.len() < MIN_TAIL_SAMPLES {
        return Err(FitError::InsufficientData { needed: MIN_TAIL_SAMPLES, got: s.len() });
    }
    s.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = s.len();
    let lo = (q_lo * n as f64).ceil() as usize;
    let hi = ((q_hi * n as f64).floor() as usize).min(n);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in lo..hi {
        if i > 0 && s[i] == s[i - 1] {
            continue;
        }
        xs.push(s[i]);
        ys.push(((n - i) as f64 / n as f64).ln());
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(FitError::InsufficientData { needed: MIN_FIT_POINTS, got: xs.len() });
    }
    let f = ols(&xs, &ys);
    Ok(TailFit { j_hat: -f.slope * alpha, slope: f.slope, intercept: f.intercept, r2: f.r2, n_points: xs.len() })
}

/// Empirical `P(X >= z)`.
pub fn empirical_ccdf(samples: &[f64], z: f64) -> f64 {
    samples.iter().filter(|&&v| v >= z).count() as f64 / samples.len() as f64
}

/// Sample mean and its standard error.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let m = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (m, 0.0);
    }
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64;
    (m, (var / n as f64).sqrt())
}

/// Sample skewness `m3 / m2^{3/2}`.
pub fn skewness(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|v| (v - m).powi(3)).sum::<f64>() / n;
    m3 / m2.powf(1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let s: Vec<(f64, f64)> = (1..=1000).map(|t| (t as f64, 1.0 / t as f64)).collect();
        let f = fit_loglog(&s, 1.0).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12 && (f.r2 - 1.0).abs() < 1e-12);
        let s: Vec<(f64, f64)> = (1..=1000).map(|t| (t as f64, 5.0 / (t as f64).sqrt())).collect();
        assert!((fit_loglog(&s, 100.0).unwrap().slope + 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let s: Vec<(f64, f64)> = (1..=5).map(|t| (t as f64, 1.0)).collect();
        assert_eq!(fit_loglog(&s, 0.0), Err(FitError::InsufficientData { needed: 10, got: 5 }));
        let z: Vec<(f64, f64)> = (1..=20).map(|t| (t as f64, 0.0)).collect();
        assert_eq!(fit_loglog(&z, 0.0), Err(FitError::NonPositiveValues(20)));
    }

    #[test]
    fn nonpositive_values_are_counted() {
        let mut s: Vec<(f64, f64)> = (1..=30).map(|t| (t as f64, 1.0 / t as f64)).collect();
        s[3].1 = 0.0;
        s[7].1 = -1.0;
        let f = fit_loglog(&s, 0.0).unwrap();
        assert_eq!((f.dropped, f.n_points), (2, 28));
    }

    #[test]
    fn mean_and_se() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }
}
