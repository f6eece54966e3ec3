//! Robbins–Monro step on the coverage gap with Kesten's step-size rule.

use serde::{Deserialize, Serialize};

pub const ETA_MIN: f64 = 1e-4;
pub const ETA_MAX: f64 = 1e4;
pub const STEP_EXPONENT: f64 = 0.51;

/// When the Kesten counter advances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KestenRule {
    /// On a direction change of the trajectory (with at least three points).
    #[default]
    Turn,
    /// As `Turn`, and only while the current coverage is below one.
    #[serde(rename = "turn-below-full")]
    TurnBelowFull,
}

impl std::str::FromStr for KestenRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "turn" => Ok(KestenRule::Turn),
            "turn-below-full" => Ok(KestenRule::TurnBelowFull),
            other => Err(format!("unknown kesten variant `{other}` (expected turn or turn-below-full)")),
        }
    }
}

/// `η_{i+1} = η_i + l^{-0.51}·(ĉ − (1 − α))`, clamped to `[ETA_MIN, ETA_MAX]`.
///
/// `trajectory` ends with the current value `η_i`; returns the next value
/// and the updated counter.
pub fn sa_next_eta(trajectory: &[f64], l: u32, c_hat: f64, alpha: f64, rule: KestenRule) -> (f64, u32) {
    let i = trajectory.len();
    assert!(i >= 1, "trajectory must contain the current learning rate");
    let mut l = l.max(1);
    if i > 2 {
        let (e2, e1, e0) = (trajectory[i - 3], trajectory[i - 2], trajectory[i - 1]);
        let turned = (e1 - e2) * (e0 - e1) < 0.0;
        let allowed = match rule {
            KestenRule::Turn => true,
            KestenRule::TurnBelowFull => c_hat < 1.0,
        };
        if turned && allowed {
            l += 1;
        }
    }
    let step = f64::from(l).powf(-STEP_EXPONENT);
    let next = trajectory[i - 1] + step * (c_hat - (1.0 - alpha));
    (next.clamp(ETA_MIN, ETA_MAX), l)
}
