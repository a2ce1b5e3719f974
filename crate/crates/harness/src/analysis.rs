//! Crisis-rate arithmetic.
//!
//! If each probe into level `i` independently lands on an occupied slot with
//! probability equal to that level's occupancy, a fresh key suffers a crisis
//! with probability `prod_i occupancy_i ^ p`. This over-approximates the true
//! rate, since a probe sequence never revisits a slot.

use crate::HarnessError;

/// Upper-bound crisis probability for a key arriving at a cascade with the
/// given per-level occupancies and `probes_per_level` probes in each level.
pub fn crisis_rate_estimate(occupancies: &[f64], probes_per_level: u32) -> Result<f64, HarnessError> {
    if probes_per_level == 0 {
        return Err(HarnessError::Usage("probes per level must be at least 1".into()));
    }
    if let Some(bad) = occupancies.iter().find(|o| !(0.0..=1.0).contains(*o)) {
        return Err(HarnessError::Usage(format!("occupancy {bad} is outside [0, 1]")));
    }
    let exponent = i32::try_from(probes_per_level)
        .map_err(|_| HarnessError::Usage("probes per level too large".into()))?;
    Ok(occupancies.iter().map(|o| o.powi(exponent)).product())
}

/// Probes a single table at load factor `load` needs before its crisis rate
/// `load^probes` drops to `target_crisis_rate`.
pub fn equivalent_single_table_probes(load: f64, target_crisis_rate: f64) -> Result<u32, HarnessError> {
    if !(load > 0.0 && load < 1.0) {
        return Err(HarnessError::Usage(format!("load {load} must lie in (0, 1)")));
    }
    if !(target_crisis_rate > 0.0 && target_crisis_rate < 1.0) {
        return Err(HarnessError::Usage(format!(
            "target crisis rate {target_crisis_rate} must lie in (0, 1)"
        )));
    }
    let exact = target_crisis_rate.ln() / load.ln();
    // absorb rounding so that exact powers (0.5, 0.25) give 2, not 3
    Ok((exact - 1e-9).ceil().max(1.0) as u32)
}
