use crate::fit::mean_se;

/// Largest single term allowed as a share of the sample sum before the
/// estimate is flagged as dominated by its maximum.
const MAX_SHARE: f64 = 0.1;

/// Empirical moment generating quantities at one `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfPoint {
    pub lambda: f64,
    /// Mean of `exp(lambda z)`.
    pub d: f64,
    pub d_se: f64,
    /// Mean of `(exp(lambda z) - 1 - lambda z) / lambda^2`.
    pub e: f64,
    pub e_se: f64,
    /// The largest sample carries more than 10% of the sum of `exp(lambda z)`.
    pub max_dominated: bool,
}

/// Evaluates `D(lambda)` and `E(lambda)` on a grid of positive `lambdas`.
pub fn empirical_mgf(samples: &[f64], lambdas: &[f64]) -> Vec<MgfPoint> {
    lambdas
        .iter()
        .map(|&lambda| {
            let exps: Vec<f64> = samples.iter().map(|&z| (lambda * z).exp()).collect();
            // exp_m1 keeps the second-order remainder accurate for small lambda z
            let rems: Vec<f64> = samples
                .iter()
                .map(|&z| ((lambda * z).exp_m1() - lambda * z) / (lambda * lambda))
                .collect();
            let (d, d_se) = mean_se(&exps);
            let (e, e_se) = mean_se(&rems);
            let total: f64 = exps.iter().sum();
            let max = exps.iter().copied().fold(0.0, f64::max);
            let max_dominated = !(total.is_finite() && max <= MAX_SHARE * total);
            MgfPoint { lambda, d, d_se, e, e_se, max_dominated }
        })
        .collect()
}

/// Largest `lambda` on the curve whose estimate is finite and not dominated
/// by a single sample.
pub fn choose_lambda(curve: &[MgfPoint]) -> Option<MgfPoint> {
    curve
        .iter()
        .filter(|p| !p.max_dominated && p.d.is_finite() && p.e.is_finite())
        .copied()
        .max_by(|a, b| a.lambda.total_cmp(&b.lambda))
}
