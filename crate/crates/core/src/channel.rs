//! Geometry and line-of-sight spherical-wave channel evaluation.
//!
//! Antennas sit on a waveguide along the x-axis at height `h`; users lie on the
//! ground plane. A pinching antenna's contribution to a user's effective gain
//! carries a composite phase: free-space path phase minus the in-waveguide
//! phase accumulated from the feed point. Conventional antennas are a fixed
//! half-wavelength array centered on the base station.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Numeric slack on the minimum-spacing comparison.
pub const SPACING_SLACK: f64 = 1e-12;

/// Complex effective channel gain `g_m` (or one entry of a channel vector).
pub type ComplexGain = Complex64;

/// Physical constants and deployment geometry.
///
/// `delta_min` and `feed_x` are optional in configuration files: when absent
/// they resolve to half a free-space wavelength and the left region edge
/// (`-D/2`) respectively, so they follow `fc` and `side_d` overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Carrier frequency, Hz.
    pub fc: f64,
    /// Effective refractive index of the waveguide.
    pub n_eff: f64,
    /// Waveguide height, m.
    pub h: f64,
    /// Side length of the square service region, m.
    pub side_d: f64,
    pub n_antennas: usize,
    /// Minimum antenna spacing, m.
    #[serde(default)]
    pub delta_min: Option<f64>,
    /// Waveguide feed-point x-coordinate, m.
    #[serde(default)]
    pub feed_x: Option<f64>,
    pub pt_dbm: f64,
    pub noise_dbm: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            fc: 28e9,
            n_eff: 1.4,
            h: 3.0,
            side_d: 10.0,
            n_antennas: 3,
            delta_min: None,
            feed_x: None,
            pt_dbm: 30.0,
            noise_dbm: -90.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        finite_pos("fc", self.fc)?;
        finite_pos("h", self.h)?;
        finite_pos("side_d", self.side_d)?;
        if !(self.n_eff.is_finite() && self.n_eff >= 1.0) {
            return Err(invalid(
                "n_eff",
                format!("must be >= 1, got {}", self.n_eff),
            ));
        }
        if self.n_antennas == 0 {
            return Err(invalid("n_antennas", "must be >= 1"));
        }
        if let Some(d) = self.delta_min {
            finite_pos("delta_min", d)?;
        }
        if let Some(f) = self.feed_x {
            if !f.is_finite() {
                return Err(invalid("feed_x", "must be finite"));
            }
        }
        if !self.pt_dbm.is_finite() {
            return Err(invalid("pt_dbm", "must be finite"));
        }
        if !self.noise_dbm.is_finite() {
            return Err(invalid("noise_dbm", "must be finite"));
        }
        let span = (self.n_antennas - 1) as f64 * self.delta_min();
        if span > self.side_d {
            return Err(invalid(
                "n_antennas",
                format!(
                    "{} antennas at spacing {} m do not fit in D = {} m",
                    self.n_antennas,
                    self.delta_min(),
                    self.side_d
                ),
            ));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        wavelength(self)
    }

    pub fn guided_wavelength(&self) -> f64 {
        self.wavelength() / self.n_eff
    }

    pub fn eta(&self) -> f64 {
        eta(self)
    }

    pub fn delta_min(&self) -> f64 {
        self.delta_min.unwrap_or_else(|| self.wavelength() / 2.0)
    }

    pub fn feed_x(&self) -> f64 {
        self.feed_x.unwrap_or(-self.side_d / 2.0)
    }

    pub fn half_side(&self) -> f64 {
        self.side_d / 2.0
    }
}

/// User location on the ground plane (z = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserPosition {
    pub x: f64,
    pub y: f64,
}

impl UserPosition {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Distance to a radiating element at `(antenna_x, 0, h)`.
    #[inline]
    pub fn distance_to(&self, antenna_x: f64, h: f64) -> f64 {
        let dx = self.x - antenna_x;
        (dx * dx + self.y * self.y + h * h).sqrt()
    }

    pub fn within(&self, side_d: f64) -> bool {
        let half = side_d / 2.0;
        self.x.abs() <= half && self.y.abs() <= half
    }
}

/// Positions of the pinching antennas along the waveguide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntennaLayout {
    pub xs: Vec<f64>,
    pub feed_x: f64,
}

impl AntennaLayout {
    /// Builds a layout and checks ordering, spacing and region bounds.
    pub fn new(params: &SystemParams, xs: Vec<f64>, feed_x: f64) -> Result<Self> {
        let layout = Self { xs, feed_x };
        layout.validate(params)?;
        Ok(layout)
    }

    /// Builds a layout without validation (for constructing deliberately
    /// invalid layouts, e.g. when probing constraint checks).
    pub fn unchecked(xs: Vec<f64>, feed_x: f64) -> Self {
        Self { xs, feed_x }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn spacing_ok(&self, delta_min: f64) -> bool {
        self.xs
            .windows(2)
            .all(|w| w[1] - w[0] >= delta_min - SPACING_SLACK)
    }

    pub fn within_region(&self, side_d: f64) -> bool {
        let half = side_d / 2.0;
        self.xs.iter().all(|x| x.abs() <= half + SPACING_SLACK)
    }

    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        if self.xs.iter().any(|x| !x.is_finite()) || !self.feed_x.is_finite() {
            return Err(Error::Placement("non-finite antenna coordinate".into()));
        }
        if self.xs.len() != params.n_antennas {
            return Err(Error::Placement(format!(
                "layout has {} antennas, system expects {}",
                self.xs.len(),
                params.n_antennas
            )));
        }
        if !self.spacing_ok(params.delta_min()) {
            return Err(Error::Placement(format!(
                "antennas closer than the minimum spacing {} m",
                params.delta_min()
            )));
        }
        if !self.within_region(params.side_d) {
            return Err(Error::Placement(format!(
                "antenna outside [-{0}, {0}]",
                params.half_side()
            )));
        }
        Ok(())
    }
}

/// Transmit combining assumed for the conventional fixed-array baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineMode {
    /// Every element radiates `P_t / N` with no per-element phase control.
    #[default]
    Uniform,
    /// Matched filter toward the strong user's channel.
    MrtStrong,
}

impl std::str::FromStr for BaselineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "mrt-strong" => Ok(Self::MrtStrong),
            other => Err(Error::Config(format!("unknown baseline mode `{other}`"))),
        }
    }
}

/// Free-space wavelength `c / fc`.
pub fn wavelength(params: &SystemParams) -> f64 {
    SPEED_OF_LIGHT / params.fc
}

/// Free-space path-loss constant `c² / (16 π² fc²)`.
pub fn eta(params: &SystemParams) -> f64 {
    let k = SPEED_OF_LIGHT / (4.0 * PI * params.fc);
    k * k
}

pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    10f64.powf((p_dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(p_watts: f64) -> f64 {
    10.0 * p_watts.log10() + 30.0
}

/// Phase accumulated between the feed and an antenna, `2π |feed − x| / λ_g`.
/// Not reduced modulo 2π.
pub fn inwaveguide_phase(params: &SystemParams, feed_x: f64, antenna_x: f64) -> f64 {
    2.0 * PI * (feed_x - antenna_x).abs() / params.guided_wavelength()
}

/// Composite phase of an antenna at `antenna_x` toward `user`: free-space
/// phase minus in-waveguide phase, unreduced.
#[inline]
pub fn composite_phase(
    params: &SystemParams,
    feed_x: f64,
    antenna_x: f64,
    user: &UserPosition,
) -> f64 {
    let d = user.distance_to(antenna_x, params.h);
    2.0 * PI * (d / params.wavelength() - (feed_x - antenna_x).abs() / params.guided_wavelength())
}

/// Composite phase of antenna `n` of `layout` toward `user`.
pub fn antenna_user_phase(
    params: &SystemParams,
    layout: &AntennaLayout,
    user: &UserPosition,
    n: usize,
) -> Result<f64> {
    let x = *layout.xs.get(n).ok_or(Error::IndexOutOfRange {
        index: n,
        len: layout.len(),
    })?;
    Ok(composite_phase(params, layout.feed_x, x, user))
}

/// Effective scalar gain `g_m = Σ_n √η e^{jφ_{m,n}} / d_{m,n}`.
pub fn pinching_gain(
    params: &SystemParams,
    layout: &AntennaLayout,
    user: &UserPosition,
) -> ComplexGain {
    let sqrt_eta = params.eta().sqrt();
    layout
        .xs
        .iter()
        .map(|&x| {
            let d = user.distance_to(x, params.h);
            let phase = composite_phase(params, layout.feed_x, x, user);
            Complex64::from_polar(sqrt_eta / d, phase)
        })
        .sum()
}

/// Element x-coordinates of the conventional array: half-wavelength pitch,
/// centered on the origin.
pub fn conventional_positions(params: &SystemParams) -> Vec<f64> {
    let n = params.n_antennas;
    let pitch = params.wavelength() / 2.0;
    let mid = (n as f64 + 1.0) / 2.0;
    (1..=n).map(|i| (i as f64 - mid) * pitch).collect()
}

/// Channel vector from the conventional fixed array to `user`.
pub fn conventional_channel(params: &SystemParams, user: &UserPosition) -> Vec<ComplexGain> {
    let sqrt_eta = params.eta().sqrt();
    let lambda = params.wavelength();
    conventional_positions(params)
        .into_iter()
        .map(|x| {
            let d = user.distance_to(x, params.h);
            Complex64::from_polar(sqrt_eta / d, -2.0 * PI * d / lambda)
        })
        .collect()
}

/// Effective squared gains `|g_1^C|², |g_2^C|²` of the conventional baseline
/// for `users = [user1, user2]`. Scaled so that the shared SNR convention
/// `ρ = P_t / (N σ²)` applies unchanged.
pub fn conventional_effective_gain(
    params: &SystemParams,
    users: &[UserPosition; 2],
    mode: BaselineMode,
) -> [f64; 2] {
    let h1 = conventional_channel(params, &users[0]);
    let h2 = conventional_channel(params, &users[1]);
    match mode {
        BaselineMode::Uniform => [
            h1.iter().sum::<Complex64>().norm_sqr(),
            h2.iter().sum::<Complex64>().norm_sqr(),
        ],
        BaselineMode::MrtStrong => {
            let n = params.n_antennas as f64;
            let norm2 = h2.iter().map(|c| c.norm_sqr()).sum::<f64>();
            if norm2 == 0.0 {
                return [0.0, 0.0];
            }
            let project = |h: &[Complex64]| {
                let inner: Complex64 = h.iter().zip(&h2).map(|(a, b)| a.conj() * b).sum();
                n * inner.norm_sqr() / norm2
            };
            [project(&h1), project(&h2)]
        }
    }
}
