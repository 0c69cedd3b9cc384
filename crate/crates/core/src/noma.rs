//! Two-user downlink NOMA rates and closed-form power allocation.
//!
//! Every rate takes `rho_g = ρ |g|²` with `ρ = P_t / (N σ²)`, i.e. the
//! receive SNR a user would see with the full transmit power.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{dbm_to_watts, AntennaLayout, ComplexGain, SystemParams};
use crate::error::{invalid, Result};

/// Tolerance on rate-vs-target comparisons.
pub const RATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl PowerSplit {
    pub fn from_alpha2(alpha2: f64) -> Self {
        Self {
            alpha1: 1.0 - alpha2,
            alpha2,
        }
    }

    /// `α1 + α2 = 1`, `α2 ∈ [0, 0.5]`.
    pub fn is_valid(&self) -> bool {
        (self.alpha1 + self.alpha2 - 1.0).abs() <= 1e-12
            && (0.0..=0.5).contains(&self.alpha2)
            && self.alpha1 >= self.alpha2
    }
}

/// Minimum rates, bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QosTargets {
    pub r1_min: f64,
    pub r2_min: f64,
}

impl Default for QosTargets {
    fn default() -> Self {
        Self {
            r1_min: 0.5,
            r2_min: 0.5,
        }
    }
}

impl QosTargets {
    pub fn new(r1_min: f64, r2_min: f64) -> Self {
        Self { r1_min, r2_min }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("r1_min", self.r1_min), ("r2_min", self.r2_min)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateReport {
    /// Weak user decoding its own signal.
    pub r1: f64,
    /// Strong user decoding its own signal after SIC.
    pub r2: f64,
    /// Strong user decoding the weak user's signal.
    pub r2_to_1: f64,
    pub sum: f64,
}

impl RateReport {
    pub fn evaluate(rho_g1: f64, rho_g2: f64, split: PowerSplit) -> Self {
        let r1 = rate_weak(rho_g1, split);
        let r2 = rate_strong(rho_g2, split);
        Self {
            r1,
            r2,
            r2_to_1: rate_sic(rho_g2, split),
            sum: r1 + r2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub spacing: bool,
    pub r1_qos: bool,
    pub r2_qos: bool,
    pub sic: bool,
    pub order_alpha: bool,
    pub order_channel: bool,
    pub overall: bool,
}

impl FeasibilityReport {
    fn from_flags(
        spacing: bool,
        r1_qos: bool,
        r2_qos: bool,
        sic: bool,
        order_alpha: bool,
        order_channel: bool,
    ) -> Self {
        Self {
            spacing,
            r1_qos,
            r2_qos,
            sic,
            order_alpha,
            order_channel,
            overall: spacing && r1_qos && r2_qos && sic && order_alpha && order_channel,
        }
    }

    /// QoS and SIC constraints only; these drive the bisection update.
    pub fn qos_met(&self) -> bool {
        self.r1_qos && self.r2_qos && self.sic
    }
}

/// Which bound, if any, the closed-form `α2` was clamped to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clamp {
    None,
    /// Held at 0: the weak user needs all of the power.
    Low,
    /// Held at 0.5.
    High,
}

/// `ρ = P_t / (N σ²)`.
pub fn snr_scale(params: &SystemParams) -> f64 {
    dbm_to_watts(params.pt_dbm) / (params.n_antennas as f64 * dbm_to_watts(params.noise_dbm))
}

#[inline]
fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

pub fn rate_weak(rho_g1: f64, split: PowerSplit) -> f64 {
    log2_1p(split.alpha1 * rho_g1 / (split.alpha2 * rho_g1 + 1.0))
}

pub fn rate_sic(rho_g2: f64, split: PowerSplit) -> f64 {
    log2_1p(split.alpha1 * rho_g2 / (split.alpha2 * rho_g2 + 1.0))
}

pub fn rate_strong(rho_g2: f64, split: PowerSplit) -> f64 {
    log2_1p(split.alpha2 * rho_g2)
}

/// Sum-rate objective: `R1 + R2 = log2(1 + f)`.
pub fn objective_f(rho_g1: f64, rho_g2: f64, alpha2: f64) -> f64 {
    let a = alpha2 * rho_g2;
    a + (1.0 - alpha2) * (1.0 + a) * rho_g1 / (alpha2 * rho_g1 + 1.0)
}

/// Largest `α2` that still meets the weak user's target, clamped to `[0, 0.5]`.
pub fn optimal_alpha2(rho_g1: f64, qos: &QosTargets) -> (f64, Clamp) {
    if rho_g1 <= 0.0 {
        return (0.0, Clamp::Low);
    }
    let t = qos.r1_min.exp2();
    let raw = (rho_g1 + 1.0 - t) / (rho_g1 * t);
    if raw < 0.0 {
        (0.0, Clamp::Low)
    } else if raw > 0.5 {
        (0.5, Clamp::High)
    } else {
        (raw, Clamp::None)
    }
}

/// Evaluates every constraint of the joint problem at one operating point.
pub fn check_feasibility(
    params: &SystemParams,
    layout: &AntennaLayout,
    gains: &[ComplexGain; 2],
    split: PowerSplit,
    qos: &QosTargets,
) -> FeasibilityReport {
    let spacing = layout.spacing_ok(params.delta_min());
    check_gains(
        snr_scale(params),
        [gains[0].norm_sqr(), gains[1].norm_sqr()],
        spacing,
        split,
        qos,
    )
}

/// Constraint check on squared gains, for schemes without a pinching layout.
pub fn check_gains(
    rho: f64,
    gain_sq: [f64; 2],
    spacing: bool,
    split: PowerSplit,
    qos: &QosTargets,
) -> FeasibilityReport {
    let (rho_g1, rho_g2) = (rho * gain_sq[0], rho * gain_sq[1]);
    FeasibilityReport::from_flags(
        spacing,
        rate_weak(rho_g1, split) >= qos.r1_min - RATE_TOL,
        rate_strong(rho_g2, split) >= qos.r2_min - RATE_TOL,
        rate_sic(rho_g2, split) >= qos.r1_min - RATE_TOL,
        split.is_valid(),
        gain_sq[1] >= gain_sq[0],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    const THIRD: f64 = 1.0 / 3.0;

    #[test]
    fn snr_scale_values() {
        let p = SystemParams::default();
        assert_relative_eq!(snr_scale(&p), 1.0 / 3e-12, max_relative = 1e-12);
        let id = SystemParams {
            n_antennas: 1,
            pt_dbm: -90.0,
            ..p.clone()
        };
        assert_relative_eq!(snr_scale(&id), 1.0, max_relative = 1e-12);
        let six = SystemParams {
            n_antennas: 6,
            ..p.clone()
        };
        assert_relative_eq!(snr_scale(&six), snr_scale(&p) / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn rate_values() {
        let s = PowerSplit::from_alpha2(THIRD);
        assert_relative_eq!(rate_weak(3.0, s), 1.0, epsilon = 1e-15);
        assert_eq!(rate_weak(0.0, s), 0.0);
        assert_relative_eq!(
            rate_weak(5.0, PowerSplit::from_alpha2(0.0)),
            6f64.log2(),
            max_relative = 1e-15
        );
        assert_relative_eq!(rate_sic(9.0, s), 2.5f64.log2(), max_relative = 1e-15);
        assert_eq!(rate_sic(4.2, s), rate_weak(4.2, s));
        assert_relative_eq!(rate_sic(1e15, s), 3f64.log2(), max_relative = 1e-12);
        assert_relative_eq!(rate_strong(9.0, s), 2.0, max_relative = 1e-15);
        assert_eq!(rate_strong(9.0, PowerSplit::from_alpha2(0.0)), 0.0);
        assert_eq!(rate_strong(0.0, s), 0.0);
    }

    #[test]
    fn objective_values() {
        assert_relative_eq!(objective_f(3.0, 9.0, THIRD), 7.0, max_relative = 1e-14);
        let s = PowerSplit::from_alpha2(THIRD);
        assert_relative_eq!(
            objective_f(3.0, 9.0, THIRD).ln_1p() / LN_2,
            rate_weak(3.0, s) + rate_strong(9.0, s),
            max_relative = 1e-14
        );
        assert_eq!(objective_f(2.5, 7.0, 0.0), 2.5);
        assert_eq!(objective_f(0.0, 0.0, 0.3), 0.0);
    }

    #[test]
    fn closed_form_alpha2() {
        let (a, c) = optimal_alpha2(3.0, &QosTargets::new(1.0, 0.0));
        assert_eq!(c, Clamp::None);
        assert_relative_eq!(a, THIRD, max_relative = 1e-14);
        assert_relative_eq!(
            rate_weak(3.0, PowerSplit::from_alpha2(a)),
            1.0,
            epsilon = 1e-12
        );

        let (a, c) = optimal_alpha2(0.5f64.exp2() - 1.0, &QosTargets::new(0.5, 0.0));
        assert!(a.abs() < 1e-15);
        assert!(c == Clamp::Low || c == Clamp::None);
        let (a, c) = optimal_alpha2(0.5f64.exp2() - 1.1, &QosTargets::new(0.5, 0.0));
        assert_eq!((a, c), (0.0, Clamp::Low));

        // raw value (10 + 1 - sqrt 2) / (10 sqrt 2) = 0.677817459305202 (mpmath)
        let (a, c) = optimal_alpha2(10.0, &QosTargets::new(0.5, 0.0));
        assert_eq!((a, c), (0.5, Clamp::High));

        assert_eq!(
            optimal_alpha2(0.0, &QosTargets::new(0.5, 0.5)),
            (0.0, Clamp::Low)
        );
    }

    fn gains_for(rho: f64, rho_g1: f64, rho_g2: f64) -> [ComplexGain; 2] {
        [
            Complex64::new((rho_g1 / rho).sqrt(), 0.0),
            Complex64::new(0.0, (rho_g2 / rho).sqrt()),
        ]
    }

    #[test]
    fn feasibility_flags() {
        let p = SystemParams::default();
        let rho = snr_scale(&p);
        let dm = p.delta_min();
        let layout = AntennaLayout::unchecked(vec![-dm, 0.0, dm], -5.0);
        let qos = QosTargets::new(1.0, 0.5);
        let gains = gains_for(rho, 3.0, 9.0);
        let r = check_feasibility(&p, &layout, &gains, PowerSplit::from_alpha2(THIRD), &qos);
        assert!(r.overall, "{r:?}");

        let r = check_feasibility(&p, &layout, &gains, PowerSplit::from_alpha2(0.6), &qos);
        assert!(!r.order_alpha);
        assert!(!r.overall);

        let swapped = gains_for(rho, 9.0, 3.0);
        let r = check_feasibility(&p, &layout, &swapped, PowerSplit::from_alpha2(THIRD), &qos);
        assert!(!r.order_channel);

        let tight = AntennaLayout::unchecked(vec![-dm, 0.0, 0.9 * dm], -5.0);
        let r = check_feasibility(&p, &tight, &gains, PowerSplit::from_alpha2(THIRD), &qos);
        assert!(!r.spacing && !r.overall);
        assert!(r.qos_met());
    }

    #[test]
    fn split_validity() {
        assert!(PowerSplit::from_alpha2(0.0).is_valid());
        assert!(PowerSplit::from_alpha2(0.5).is_valid());
        assert!(!PowerSplit::from_alpha2(0.51).is_valid());
        assert!(!PowerSplit {
            alpha1: 0.6,
            alpha2: 0.3
        }
        .is_valid());
    }
}
