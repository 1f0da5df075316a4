use crate::error::{Error, Result};
use crate::tensor::{SoftLabel, LABEL_MASS_TOL};

/// Probabilities are floored here before taking logarithms.
pub const PROB_FLOOR: f64 = 1e-12;

fn kl_to(p: &[f64], m: &[f64]) -> f64 {
    p.iter()
        .zip(m)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &mi)| pi * (pi.max(PROB_FLOOR).ln() - mi.max(PROB_FLOOR).ln()))
        .sum()
}

/// Three-way Jensen-Shannon divergence with equal weights:
/// `(KL(p₀‖M) + KL(p₁‖M) + KL(p₂‖M)) / 3` with `M` the mean distribution.
/// Natural log; bounded by `[0, ln 3]`.
pub fn js_consistency(p_orig: &SoftLabel, p1: &SoftLabel, p2: &SoftLabel) -> Result<f64> {
    let k = p_orig.num_classes();
    for other in [p1, p2] {
        if other.num_classes() != k {
            return Err(Error::ClassMismatch {
                left: k,
                right: other.num_classes(),
            });
        }
    }
    let (a, b, c) = (p_orig.weights(), p1.weights(), p2.weights());
    let mean: Vec<f64> = (0..k)
        .map(|i| {
            if a[i] == b[i] && b[i] == c[i] {
                a[i]
            } else {
                (a[i] + b[i] + c[i]) / 3.0
            }
        })
        .collect();
    let js = (kl_to(a, &mean) + kl_to(b, &mean) + kl_to(c, &mean)) / 3.0;
    Ok(js.clamp(0.0, 3f64.ln()))
}

/// `−Σ_c target_c · ln(max(pred_c, 1e−12))`.
pub fn soft_cross_entropy(pred: &[f64], target: &SoftLabel) -> Result<f64> {
    if pred.len() != target.num_classes() {
        return Err(Error::ClassMismatch {
            left: pred.len(),
            right: target.num_classes(),
        });
    }
    if pred.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::param("predictions must be non-negative probabilities"));
    }
    let mass: f64 = pred.iter().sum();
    if (mass - 1.0).abs() > LABEL_MASS_TOL {
        return Err(Error::param(format!("predictions sum to {mass}, not 1")));
    }
    let loss: f64 = pred
        .iter()
        .zip(target.weights())
        .filter(|(_, &t)| t > 0.0)
        .map(|(&p, &t)| -t * p.max(PROB_FLOOR).ln())
        .sum();
    Ok(loss.max(0.0))
}

/// Mean soft cross-entropy over a batch.
pub fn batch_loss(preds: &[Vec<f64>], targets: &[SoftLabel]) -> Result<f64> {
    if preds.is_empty() || preds.len() != targets.len() {
        return Err(Error::param(format!(
            "{} predictions for {} targets",
            preds.len(),
            targets.len()
        )));
    }
    let total = preds
        .iter()
        .zip(targets)
        .map(|(p, t)| soft_cross_entropy(p, t))
        .sum::<Result<f64>>()?;
    Ok(total / preds.len() as f64)
}
