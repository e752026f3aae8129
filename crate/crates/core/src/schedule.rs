//! Step-size schedules: power-law decay and piecewise-constant stages.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScheduleError {
    #[error("invalid schedule parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("staged schedule needs equally many rates and lengths (got {rates} and {lengths})")]
    LengthMismatch { rates: usize, lengths: usize },
    #[error("staged schedule has no stages")]
    Empty,
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> ScheduleError {
    ScheduleError::InvalidParameter { name, value, reason }
}

/// Step sizes `alpha_t`, validated at construction so that `rate` cannot fail.
#[derive(Debug, Clone, PartialEq)]
pub enum StepSchedule<T> {
    /// `alpha_t = a / (u + t)^gamma`
    PowerLaw { a: T, u: T, gamma: T },
    /// `alpha_t = rates[s]` for `T_{s-1} <= t < T_s`, where `T_s` is the
    /// cumulative sum of `lengths`. The last rate is held past the final stage.
    Staged { rates: Vec<T>, lengths: Vec<usize> },
}

impl<T: Scalar> StepSchedule<T> {
    pub fn power_law(a: T, u: T, gamma: T) -> Result<Self, ScheduleError> {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(invalid("a", a.as_f64(), "must be positive and finite"));
        }
        if !(gamma >= T::zero() && gamma <= T::one()) {
            return Err(invalid("gamma", gamma.as_f64(), "must lie in [0, 1]"));
        }
        if !(u >= T::zero()) || !u.is_finite() {
            return Err(invalid("u", u.as_f64(), "must be non-negative and finite"));
        }
        if u == T::zero() && gamma > T::zero() {
            return Err(invalid("u", 0.0, "u = 0 makes alpha_0 infinite unless gamma = 0"));
        }
        Ok(Self::PowerLaw { a, u, gamma })
    }

    pub fn constant(alpha: T) -> Result<Self, ScheduleError> {
        Self::power_law(alpha, T::one(), T::zero())
    }

    pub fn staged(rates: Vec<T>, lengths: Vec<usize>) -> Result<Self, ScheduleError> {
        if rates.len() != lengths.len() {
            return Err(ScheduleError::LengthMismatch { rates: rates.len(), lengths: lengths.len() });
        }
        if rates.is_empty() {
            return Err(ScheduleError::Empty);
        }
        for (i, &r) in rates.iter().enumerate() {
            if !(r > T::zero()) || !r.is_finite() {
                return Err(invalid("rate", r.as_f64(), "stage rates must be positive and finite"));
            }
            if i > 0 && r > rates[i - 1] {
                return Err(invalid("rate", r.as_f64(), "stage rates must be non-increasing"));
            }
        }
        if let Some(&l) = lengths.iter().find(|&&l| l == 0) {
            return Err(invalid("length", l as f64, "stage lengths must be positive"));
        }
        Ok(Self::Staged { rates, lengths })
    }

    /// `stages` stages of `every` steps each, starting at `alpha0` and dividing
    /// the rate by `factor` at every stage boundary.
    pub fn geometric(alpha0: T, factor: T, every: usize, stages: usize) -> Result<Self, ScheduleError> {
        if !(factor >= T::one()) {
            return Err(invalid("factor", factor.as_f64(), "must be >= 1"));
        }
        let mut rates = Vec::with_capacity(stages);
        let mut r = alpha0;
        for _ in 0..stages {
            rates.push(r);
            r = r / factor;
        }
        Self::staged(rates, vec![every; stages])
    }

    /// Step size at iteration `t` (0-based).
    pub fn rate(&self, t: usize) -> T {
        match self {
            Self::PowerLaw { a, u, gamma } => {
                if *gamma == T::zero() {
                    *a
                } else {
                    *a / (*u + T::from_count(t)).powf(*gamma)
                }
            }
            Self::Staged { rates, lengths } => rates[self.stage_of(t).min(lengths.len() - 1)],
        }
    }

    /// 0-based stage index containing `t`; for a power law this is always 0.
    /// Past the last stage this returns `number_of_stages()`.
    pub fn stage_of(&self, t: usize) -> usize {
        match self {
            Self::PowerLaw { .. } => 0,
            Self::Staged { lengths, .. } => {
                let mut end = 0;
                for (s, &l) in lengths.iter().enumerate() {
                    end += l;
                    if t < end {
                        return s;
                    }
                }
                lengths.len()
            }
        }
    }

    pub fn number_of_stages(&self) -> usize {
        match self {
            Self::PowerLaw { .. } => 1,
            Self::Staged { lengths, .. } => lengths.len(),
        }
    }

    /// Cumulative stage end times `T_1, ..., T_S` (empty for a power law).
    pub fn stage_ends(&self) -> Vec<usize> {
        match self {
            Self::PowerLaw { .. } => Vec::new(),
            Self::Staged { lengths, .. } => lengths
                .iter()
                .scan(0usize, |acc, &l| {
                    *acc += l;
                    Some(*acc)
                })
                .collect(),
        }
    }

    /// Total number of iterations for a staged schedule.
    pub fn total_iterations(&self) -> Option<usize> {
        match self {
            Self::PowerLaw { .. } => None,
            Self::Staged { lengths, .. } => Some(lengths.iter().sum()),
        }
    }
}

/// Staged schedule with a known error target `eps_hat` and confidence `delta_hat`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetedStages<T> {
    pub schedule: StepSchedule<T>,
    /// Number of stages `S = ceil(log2(F / eps_hat))`.
    pub stages: usize,
    /// Common stage length `ceil((2 / kappa^2) ln(R S / delta_hat))`.
    pub stage_length: usize,
}

impl<T: Scalar> TargetedStages<T> {
    pub fn total_iterations(&self) -> usize {
        self.stages * self.stage_length
    }
}

/// Halving schedule for a target error with calibrated constants.
///
/// `S = ceil(log2(F/eps))`, `rate_s = 2^-s F kappa / (E ln(R S / delta))`,
/// `len_s = ceil((2 / kappa^2) ln(R S / delta))`.
pub fn staged_schedule_a<T: Scalar>(
    f: T,
    kappa: T,
    e: T,
    r: T,
    eps_hat: T,
    delta_hat: T,
) -> Result<TargetedStages<T>, ScheduleError> {
    for (name, v) in [("F", f), ("kappa", kappa), ("E", e), ("R", r), ("eps_hat", eps_hat)] {
        if !(v > T::zero()) || !v.is_finite() {
            return Err(invalid(name, v.as_f64(), "must be positive and finite"));
        }
    }
    if !(delta_hat > T::zero() && delta_hat < T::one()) {
        return Err(invalid("delta_hat", delta_hat.as_f64(), "must lie in (0, 1)"));
    }
    if !(eps_hat < f) {
        return Err(invalid("eps_hat", eps_hat.as_f64(), "must be smaller than F"));
    }
    let stages = (f / eps_hat).log2().ceil().to_usize().unwrap_or(1).max(1);
    let log_term = (r * T::from_count(stages) / delta_hat).ln();
    if !(log_term > T::zero()) {
        return Err(invalid("R", r.as_f64(), "R S / delta_hat must exceed 1"));
    }
    let two = T::c(2.0);
    let stage_length = (two / (kappa * kappa) * log_term).ceil().to_usize().unwrap_or(1).max(1);
    let rates = (1..=stages)
        .map(|s| two.powi(-(s as i32)) * f * kappa / (e * log_term))
        .collect();
    let schedule = StepSchedule::staged(rates, vec![stage_length; stages])?;
    Ok(TargetedStages { schedule, stages, stage_length })
}

/// Parameter-light halving schedule: `rate_s = a / (2^s ln(s+1))`,
/// `len_s = max(1, ceil(ln(s+1)^2))` for `s = 1..=s_max`.
pub fn staged_schedule_b<T: Scalar>(a: T, s_max: usize) -> Result<StepSchedule<T>, ScheduleError> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(invalid("a", a.as_f64(), "must be positive and finite"));
    }
    if s_max == 0 {
        return Err(invalid("s_max", 0.0, "need at least one stage"));
    }
    let mut rates = Vec::with_capacity(s_max);
    let mut lengths = Vec::with_capacity(s_max);
    for s in 1..=s_max {
        let l = T::from_count(s + 1).ln();
        rates.push(a / (T::c(2.0).powi(s as i32) * l));
        lengths.push((l * l).ceil().to_usize().unwrap_or(1).max(1));
    }
    StepSchedule::staged(rates, lengths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_values() {
        let s = StepSchedule::power_law(1.0, 1.0, 1.0).unwrap();
        assert_eq!(s.rate(0), 1.0);
        assert_eq!(s.rate(9), 0.1);
        let c = StepSchedule::power_law(1.0, 1.0, 0.0).unwrap();
        assert!((0..50).all(|t| c.rate(t) == 1.0));
    }

    #[test]
    fn staged_boundaries() {
        let s = StepSchedule::staged(vec![0.5, 0.25], vec![3, 3]).unwrap();
        assert_eq!(s.rate(2), 0.5);
        assert_eq!(s.rate(3), 0.25);
        // past the end the last rate is held
        assert_eq!(s.rate(100), 0.25);
        assert_eq!(s.stage_ends(), vec![3, 6]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StepSchedule::power_law(-1.0, 1.0, 1.0).is_err());
        assert!(StepSchedule::power_law(1.0, 1.0, 1.5).is_err());
        assert!(StepSchedule::power_law(1.0, 0.0, 1.0).is_err());
        assert!(StepSchedule::staged(vec![0.1, 0.2], vec![1, 1]).is_err());
        assert!(StepSchedule::staged(vec![0.1], vec![0]).is_err());
        assert!(StepSchedule::<f64>::staged(vec![], vec![]).is_err());
    }

    #[test]
    fn schedule_a_closed_form() {
        // R S / delta = e^2 with S = 4 and delta = 0.8
        let delta = 0.8;
        let r = std::f64::consts::E.powi(2) * delta / 4.0;
        let st = staged_schedule_a(1.0, 1.0, 1.0, r, 1.0 / 16.0, delta).unwrap();
        assert_eq!(st.stages, 4);
        assert_eq!(st.stage_length, 4);
        assert_eq!(st.total_iterations(), 16);
        for s in 1..=4 {
            let expect = 2f64.powi(-s) / 2.0;
            let got = st.schedule.rate((s as usize - 1) * 4);
            assert!((got - expect).abs() < 1e-12, "stage {s}: {got} vs {expect}");
        }
    }

    #[test]
    fn schedule_a_edge_cases() {
        let st = staged_schedule_a(1.0, 1.0, 1.0, 3.0, 0.5, 0.5).unwrap();
        assert_eq!(st.stages, 1);
        let st = staged_schedule_a(1.0, 1e6, 1.0, 3.0, 0.1, 0.5).unwrap();
        assert_eq!(st.stage_length, 1);
        assert!(staged_schedule_a(1.0, 1.0, 1.0, 3.0, 2.0, 0.5).is_err());
        assert!(staged_schedule_a(1.0, 1.0, 1.0, 3.0, 0.5, 1.0).is_err());
        assert!(staged_schedule_a(1.0, -1.0, 1.0, 3.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn schedule_a_iteration_count() {
        let (f, kappa, r, eps, delta) = (3.0f64, 0.7, 2.5, 0.01, 0.05);
        let st = staged_schedule_a(f, kappa, 1.3, r, eps, delta).unwrap();
        let s = (f / eps).log2().ceil();
        let count = s * ((2.0 / (kappa * kappa)) * ((r / delta).ln() + s.ln())).ceil();
        assert_eq!(st.total_iterations() as f64, count);
    }

    #[test]
    fn schedule_b_values() {
        let s = staged_schedule_b(1.0, 3).unwrap();
        let ln2 = 2f64.ln();
        assert!((s.rate(0) - 1.0 / (2.0 * ln2)).abs() < 1e-15);
        assert!((s.rate(0) - 0.7213).abs() < 1e-4);
        // stage 1 has length 1, stage 2 length ceil(ln(3)^2) = 2, stage 3 starts at t = 3
        assert_eq!(s.stage_ends(), vec![1, 3, 5]);
        assert!((s.rate(3) - 1.0 / (8.0 * 4f64.ln())).abs() < 1e-15);
        if let StepSchedule::Staged { rates, .. } = &s {
            assert!(rates.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn regularity_of_power_law() {
        // alpha_{2t} / alpha_t >= 2^-gamma and relative decrement vanishes
        for &gamma in &[0.0, 0.3, 0.5, 1.0] {
            let s = StepSchedule::power_law(0.7, 2.0, gamma).unwrap();
            let mut t = 1usize;
            while t <= 1_000_000 {
                let ratio = s.rate(2 * t) / s.rate(t);
                assert!(ratio >= 2f64.powf(-gamma) - 1e-12);
                t *= 3;
            }
            let big = 1_000_000;
            let rel = (s.rate(big) - s.rate(big + 1)) / s.rate(big);
            assert!(rel < 2e-6);
        }
    }
}
