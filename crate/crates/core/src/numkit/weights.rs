//! Log-domain weight arithmetic, effective sample size and weighted quantiles.

use crate::error::{GpcError, Result};

/// Tolerance on `|Σw − 1|` accepted as "normalized".
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Slack used when comparing a cumulative weight against a probability, so that
/// sums like `0.01 * 3` resolve to the exact rational comparison.
const CUMULATIVE_SLACK: f64 = 1e-12;

pub fn logsumexp(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(GpcError::domain("logsumexp of an empty vector"));
    }
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        if v.is_nan() || v == f64::INFINITY {
            return Err(GpcError::domain(format!("logsumexp entry {v} is not in [-inf, +inf)")));
        }
        if v > max {
            max = v;
        }
    }
    if max == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    Ok(max + sum.ln())
}

/// Unnormalized log-weights; entries may be `-inf` but never NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct LogWeights(Vec<f64>);

impl LogWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(GpcError::domain("log-weights contain NaN"));
        }
        Ok(Self(values))
    }

    /// `M` equal log-weights of `-ln M`.
    pub fn uniform(len: usize) -> Self {
        Self(vec![-(len as f64).ln(); len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn normalize(&self) -> Result<(Vec<f64>, f64)> {
        normalize_log_weights(self)
    }
}

/// Returns `(weights, log_normalizer)` with `weights_i = exp(lw_i − logsumexp(lw))`.
pub fn normalize_log_weights(lw: &LogWeights) -> Result<(Vec<f64>, f64)> {
    let log_norm = logsumexp(lw.values())?;
    if log_norm == f64::NEG_INFINITY {
        return Err(GpcError::DegenerateWeights);
    }
    let weights = lw.values().iter().map(|&v| (v - log_norm).exp()).collect();
    Ok((weights, log_norm))
}

pub fn ess(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(GpcError::Contract("ess of an empty weight vector".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(GpcError::Contract(format!(
            "ess requires normalized weights, got sum {total}"
        )));
    }
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    // Rounding can push 1/Σw² a hair outside [1, M].
    Ok((1.0 / sum_sq).clamp(1.0, weights.len() as f64))
}

/// Left-continuous weighted inverse CDF: the smallest value whose cumulative
/// weight reaches `p`.
pub fn weighted_quantile(values: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    check_quantile_args(values, weights, p)?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(quantile_in_order(values, weights, &order, p))
}

pub(crate) fn check_quantile_args(values: &[f64], weights: &[f64], p: f64) -> Result<()> {
    if values.is_empty() || values.len() != weights.len() {
        return Err(GpcError::domain(format!(
            "weighted quantile needs equal non-empty lengths, got {} values and {} weights",
            values.len(),
            weights.len()
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GpcError::domain(format!("quantile level {p} outside [0, 1]")));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(GpcError::domain("NaN in quantile values"));
    }
    Ok(())
}

/// Quantile given a precomputed ascending `order` of `values`.
pub(crate) fn quantile_in_order(values: &[f64], weights: &[f64], order: &[usize], p: f64) -> f64 {
    if p <= 0.0 {
        return values[order[0]];
    }
    let mut cumulative = 0.0;
    for &i in order {
        cumulative += weights[i];
        if cumulative >= p - CUMULATIVE_SLACK {
            return values[i];
        }
    }
    values[*order.last().expect("non-empty order")]
}

/// Both tails of an equal-tailed interval in a single pass over `order`.
pub(crate) fn interval_in_order(
    values: &[f64],
    weights: &[f64],
    order: &[usize],
    lower_p: f64,
    upper_p: f64,
) -> (f64, f64) {
    debug_assert!(lower_p <= upper_p);
    let mut lo = if lower_p <= 0.0 { Some(values[order[0]]) } else { None };
    let mut cumulative = 0.0;
    for &i in order {
        cumulative += weights[i];
        if lo.is_none() && cumulative >= lower_p - CUMULATIVE_SLACK {
            lo = Some(values[i]);
        }
        if cumulative >= upper_p - CUMULATIVE_SLACK {
            return (lo.unwrap_or(values[i]), values[i]);
        }
    }
    let last = values[*order.last().expect("non-empty order")];
    (lo.unwrap_or(last), last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    #[test]
    fn logsumexp_examples() {
        assert!((logsumexp(&[0.0, 0.0]).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY, 0.0]).unwrap(), 0.0);
        assert!((logsumexp(&[1000.0, 1000.0]).unwrap() - (1000.0 + LN_2)).abs() < 1e-12);
        assert_eq!(
            logsumexp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]).unwrap(),
            f64::NEG_INFINITY
        );
        assert!(logsumexp(&[]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let (w, z) = normalize_log_weights(&LogWeights::new(vec![0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(w, vec![0.5, 0.5]);
        assert!((z - LN_2).abs() < 1e-15);

        let (w, _) =
            normalize_log_weights(&LogWeights::new(vec![1f64.ln(), 4f64.ln()]).unwrap()).unwrap();
        assert!((w[0] - 0.2).abs() < 1e-15 && (w[1] - 0.8).abs() < 1e-15);

        let all_neg = LogWeights::new(vec![f64::NEG_INFINITY; 3]).unwrap();
        assert!(matches!(
            normalize_log_weights(&all_neg),
            Err(GpcError::DegenerateWeights)
        ));
        assert!(LogWeights::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn ess_examples() {
        assert!((ess(&[0.25; 4]).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(ess(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!((ess(&[0.5, 0.5, 0.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(ess(&[0.5, 0.6]), Err(GpcError::Contract(_))));
    }

    #[test]
    fn quantile_examples() {
        let third = 1.0 / 3.0;
        assert_eq!(weighted_quantile(&[1., 2., 3.], &[third; 3], 0.5).unwrap(), 2.0);
        assert_eq!(weighted_quantile(&[1., 2., 3.], &[third; 3], 0.0).unwrap(), 1.0);
        assert_eq!(
            weighted_quantile(&[3., 1., 2.], &[0.7, 0.1, 0.2], 0.25).unwrap(),
            2.0
        );
        assert!(weighted_quantile(&[1.0, f64::NAN], &[0.5, 0.5], 0.5).is_err());
    }

    proptest! {
        #[test]
        fn logsumexp_shift_invariance(v in prop::collection::vec(-50.0f64..50.0, 1..40), c in -500.0f64..500.0) {
            let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
            let lhs = logsumexp(&shifted).unwrap();
            let rhs = logsumexp(&v).unwrap() + c;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }

        #[test]
        fn ess_bounds_and_permutation(raw in prop::collection::vec(0.0f64..1.0, 1..60), rot in 0usize..60) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-6);
            let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let e = ess(&w).unwrap();
            prop_assert!(e >= 1.0 && e <= w.len() as f64);
            let mut rotated = w.clone();
            rotated.rotate_left(rot % w.len());
            prop_assert!((ess(&rotated).unwrap() - e).abs() < 1e-9 * e);
        }

        #[test]
        fn quantile_monotone_in_p(v in prop::collection::vec(-10.0f64..10.0, 1..50), p1 in 0.0f64..1.0, p2 in 0.0f64..1.0) {
            let w = vec![1.0 / v.len() as f64; v.len()];
            let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
            prop_assert!(weighted_quantile(&v, &w, lo).unwrap() <= weighted_quantile(&v, &w, hi).unwrap());
        }

        #[test]
        fn uniform_quantile_is_empirical_order_statistic(v in prop::collection::vec(-10.0f64..10.0, 1..50), p in 0.001f64..1.0) {
            let n = v.len();
            let w = vec![1.0 / n as f64; n];
            let mut sorted = v.clone();
            sorted.sort_by(f64::total_cmp);
            // smallest j (1-based) with j/n >= p
            let j = ((p * n as f64) - 1e-9).ceil().max(1.0) as usize;
            prop_assert_eq!(weighted_quantile(&v, &w, p).unwrap(), sorted[j - 1]);
        }
    }
}
