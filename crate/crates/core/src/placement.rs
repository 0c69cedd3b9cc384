//! Antenna placement: bisection over the center-antenna position, with
//! wavelength-scale fine-tuning of the outer antennas for phase alignment.
//!
//! Each bisection step lays the array out at exact minimum pitch around the
//! current center, nudges every non-center antenna outward until its
//! composite phase toward both users matches its inner neighbor's (within
//! `delta1` / `delta2`, compared on the circle), then evaluates the
//! closed-form power split. Meeting the QoS and SIC constraints pulls the
//! search interval toward the strong user; failing them pushes it back.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::channel::{
    composite_phase, pinching_gain, AntennaLayout, BaselineMode, ComplexGain, SystemParams,
    UserPosition, SPACING_SLACK,
};
use crate::error::{invalid, Error, Result};
use crate::noma::{
    check_feasibility, optimal_alpha2, snr_scale, Clamp, FeasibilityReport, PowerSplit, QosTargets,
    RateReport,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgoConfig {
    /// Bisection stops once the interval is no wider than this, m.
    pub epsilon: f64,
    /// Phase tolerance toward the weak user, rad.
    pub delta1: f64,
    /// Phase tolerance toward the strong user, rad.
    pub delta2: f64,
    /// Fine-tuning step, m. Defaults to λ/100.
    #[serde(default)]
    pub fine_step: Option<f64>,
    /// Per-antenna cap on fine-tuning shifts. Defaults to a ten-wavelength
    /// window, `⌈10λ / fine_step⌉`.
    #[serde(default)]
    pub max_fine_shifts: Option<usize>,
    #[serde(default)]
    pub baseline_mode: BaselineMode,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-5,
            delta1: 0.5,
            delta2: 0.02,
            fine_step: None,
            max_fine_shifts: None,
            baseline_mode: BaselineMode::Uniform,
        }
    }
}

impl AlgoConfig {
    pub fn fine_step(&self, params: &SystemParams) -> f64 {
        self.fine_step
            .unwrap_or_else(|| params.wavelength() / 100.0)
    }

    pub fn max_fine_shifts(&self, params: &SystemParams) -> usize {
        self.max_fine_shifts.unwrap_or_else(|| {
            let window = 10.0 * params.wavelength() / self.fine_step(params);
            ((window - 1e-9).ceil() as usize).max(1)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(invalid("epsilon", "must be > 0"));
        }
        // The strong user usually gets the tighter tolerance, but a loose
        // delta2 (no alignment toward user 2) is a legitimate comparison point.
        for (name, d) in [("delta1", self.delta1), ("delta2", self.delta2)] {
            if d.is_nan() || d < 0.0 {
                return Err(invalid(name, format!("must be >= 0, got {d}")));
            }
        }
        if let Some(s) = self.fine_step {
            if !(s.is_finite() && s > 0.0) {
                return Err(invalid("fine_step", "must be > 0"));
            }
        }
        if self.max_fine_shifts == Some(0) {
            return Err(invalid("max_fine_shifts", "must be >= 1"));
        }
        Ok(())
    }
}

/// Outcome of fine-tuning one antenna.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaTuning {
    pub index: usize,
    /// Number of `fine_step` shifts applied to reach the final position.
    pub shifts: usize,
    /// Both phase tolerances met at the final position.
    pub aligned: bool,
    /// The search ran into the region edge.
    pub pinned: bool,
    pub error1: f64,
    pub error2: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FineTuneReport {
    pub antennas: Vec<AntennaTuning>,
    /// Positions visited across all antennas.
    pub steps: usize,
}

impl FineTuneReport {
    pub fn all_aligned(&self) -> bool {
        self.antennas.iter().all(|a| a.aligned)
    }

    pub fn any_pinned(&self) -> bool {
        self.antennas.iter().any(|a| a.pinned)
    }
}

/// Gains, closed-form split, rates and constraint flags at one layout.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutEvaluation {
    pub gains: [ComplexGain; 2],
    pub split: PowerSplit,
    pub clamp: Clamp,
    pub rates: RateReport,
    pub feasibility: FeasibilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementSolution {
    pub layout: AntennaLayout,
    pub split: PowerSplit,
    pub clamp: Clamp,
    pub rates: RateReport,
    pub feasibility: FeasibilityReport,
    /// `[|g_1|², |g_2|²]` at the reported layout.
    pub gain_sq: [f64; 2],
    pub iterations: usize,
    pub feasible_found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuning: Option<FineTuneReport>,
}

impl PlacementSolution {
    pub(crate) fn from_evaluation(
        layout: AntennaLayout,
        eval: &LayoutEvaluation,
        iterations: usize,
        feasible_found: bool,
        tuning: Option<FineTuneReport>,
    ) -> Self {
        Self {
            layout,
            split: eval.split,
            clamp: eval.clamp,
            rates: if feasible_found {
                eval.rates
            } else {
                RateReport::default()
            },
            feasibility: eval.feasibility,
            gain_sq: [eval.gains[0].norm_sqr(), eval.gains[1].norm_sqr()],
            iterations,
            feasible_found,
            tuning,
        }
    }

    pub fn sum_rate(&self) -> f64 {
        self.rates.sum
    }
}

/// Search interval `[left, right]` as stored before each bisection update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub left: f64,
    pub right: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        (self.right - self.left).abs()
    }

    pub fn lo(&self) -> f64 {
        self.left.min(self.right)
    }

    pub fn hi(&self) -> f64 {
        self.left.max(self.right)
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circular_phase_error(a: f64, b: f64) -> f64 {
    let m = (a - b).abs().rem_euclid(TAU);
    m.min(TAU - m)
}

/// Index of the center antenna (`⌈N/2⌉`, zero-based).
pub fn center_index(n: usize) -> usize {
    n.div_ceil(2).saturating_sub(1)
}

/// Admissible center positions such that the full array at minimum pitch
/// fits inside the region.
pub fn center_range(params: &SystemParams) -> (f64, f64) {
    let n = params.n_antennas;
    let c = center_index(n);
    let dm = params.delta_min();
    let half = params.half_side();
    (-half + c as f64 * dm, half - (n - 1 - c) as f64 * dm)
}

/// Array at exact minimum pitch with the center antenna at `center_x`.
pub fn initial_layout(params: &SystemParams, center_x: f64, feed_x: f64) -> Result<AntennaLayout> {
    let (lo, hi) = center_range(params);
    if !(center_x >= lo - SPACING_SLACK && center_x <= hi + SPACING_SLACK) {
        return Err(Error::Placement(format!(
            "center {center_x} m leaves no room for the array; admissible range is [{lo}, {hi}]"
        )));
    }
    let c = center_index(params.n_antennas) as f64;
    let dm = params.delta_min();
    let xs = (0..params.n_antennas)
        .map(|i| center_x + (i as f64 - c) * dm)
        .collect();
    Ok(AntennaLayout::unchecked(xs, feed_x))
}

/// Shifts every non-center antenna outward in `fine_step` increments until
/// its composite phases toward both users line up with its inner neighbor's.
///
/// Antennas right of center are tuned in ascending order, then those left of
/// center in descending order, each against its already-tuned inner
/// neighbor. An antenna that cannot meet both tolerances within
/// `max_fine_shifts` lands on the visited position with the smallest
/// `error2/delta2 + error1/delta1`. Each antenna's search stops short of the
/// point where the antennas outside it would no longer fit in the region.
pub fn fine_tune(
    params: &SystemParams,
    layout: &AntennaLayout,
    users: &[UserPosition; 2],
    cfg: &AlgoConfig,
) -> (AntennaLayout, FineTuneReport) {
    let n = layout.len();
    let mut xs = layout.xs.clone();
    let mut report = FineTuneReport::default();
    if n <= 1 {
        return (AntennaLayout::unchecked(xs, layout.feed_x), report);
    }
    let c = center_index(n);
    let step = cfg.fine_step(params);
    let max_shifts = cfg.max_fine_shifts(params);
    let dm = params.delta_min();
    let half = params.half_side();
    let w1 = 1.0 / cfg.delta1.max(1e-12);
    let w2 = 1.0 / cfg.delta2.max(1e-12);
    let feed = layout.feed_x;

    let order = ((c + 1)..n)
        .map(|i| (i, i - 1, 1.0))
        .chain((0..c).rev().map(|i| (i, i + 1, -1.0)));
    for (i, inner_idx, dir) in order {
        let inner = xs[inner_idx];
        let base = xs[i];
        // Room that must stay free for the antennas further out.
        let limit = if dir > 0.0 {
            half - (n - 1 - i) as f64 * dm
        } else {
            -half + i as f64 * dm
        };
        let inner_phase = [
            composite_phase(params, feed, inner, &users[0]),
            composite_phase(params, feed, inner, &users[1]),
        ];

        let mut chosen: Option<(f64, usize, f64, f64)> = None;
        let mut best: Option<(f64, f64, usize, f64, f64)> = None;
        let mut pinned = false;
        for k in 0..=max_shifts {
            let x = base + dir * k as f64 * step;
            if dir * (x - limit) > SPACING_SLACK {
                pinned = true;
                break;
            }
            report.steps += 1;
            if dir * (x - inner) < dm - SPACING_SLACK {
                continue;
            }
            let e1 =
                circular_phase_error(composite_phase(params, feed, x, &users[0]), inner_phase[0]);
            let e2 =
                circular_phase_error(composite_phase(params, feed, x, &users[1]), inner_phase[1]);
            if e1 <= cfg.delta1 && e2 <= cfg.delta2 {
                chosen = Some((x, k, e1, e2));
                break;
            }
            let score = e2 * w2 + e1 * w1;
            if best.is_none_or(|b| score < b.0) {
                best = Some((score, x, k, e1, e2));
            }
        }

        let tuning = match (chosen, best) {
            (Some((x, k, e1, e2)), _) => {
                xs[i] = x;
                AntennaTuning {
                    index: i,
                    shifts: k,
                    aligned: true,
                    pinned,
                    error1: e1,
                    error2: e2,
                }
            }
            (None, Some((_, x, k, e1, e2))) => {
                xs[i] = x;
                AntennaTuning {
                    index: i,
                    shifts: k,
                    aligned: false,
                    pinned,
                    error1: e1,
                    error2: e2,
                }
            }
            (None, None) => {
                // No spacing-valid position was visited; sit at minimum pitch.
                let x = inner + dir * dm;
                xs[i] = x;
                let e1 = circular_phase_error(
                    composite_phase(params, feed, x, &users[0]),
                    inner_phase[0],
                );
                let e2 = circular_phase_error(
                    composite_phase(params, feed, x, &users[1]),
                    inner_phase[1],
                );
                AntennaTuning {
                    index: i,
                    shifts: ((x - base).abs() / step).round() as usize,
                    aligned: false,
                    pinned: true,
                    error1: e1,
                    error2: e2,
                }
            }
        };
        report.antennas.push(tuning);
    }
    (AntennaLayout::unchecked(xs, feed), report)
}

/// Gains, closed-form power split and constraint flags at `layout`.
/// `users[0]` is the weak user, `users[1]` the strong one.
pub fn evaluate_layout(
    params: &SystemParams,
    layout: &AntennaLayout,
    users: &[UserPosition; 2],
    qos: &QosTargets,
) -> LayoutEvaluation {
    let rho = snr_scale(params);
    let gains = [
        pinching_gain(params, layout, &users[0]),
        pinching_gain(params, layout, &users[1]),
    ];
    let (rho_g1, rho_g2) = (rho * gains[0].norm_sqr(), rho * gains[1].norm_sqr());
    let (alpha2, clamp) = optimal_alpha2(rho_g1, qos);
    let split = PowerSplit::from_alpha2(alpha2);
    LayoutEvaluation {
        gains,
        split,
        clamp,
        rates: RateReport::evaluate(rho_g1, rho_g2, split),
        feasibility: check_feasibility(params, layout, &gains, split, qos),
    }
}

/// Bisection placement. `users[0]` is the weak user, `users[1]` the strong one.
pub fn bisection_solve(
    params: &SystemParams,
    users: &[UserPosition; 2],
    qos: &QosTargets,
    cfg: &AlgoConfig,
) -> Result<PlacementSolution> {
    bisection_solve_traced(params, users, qos, cfg).map(|(s, _)| s)
}

/// As [`bisection_solve`], also returning the search interval held at the
/// start of every iteration plus the final one.
pub fn bisection_solve_traced(
    params: &SystemParams,
    users: &[UserPosition; 2],
    qos: &QosTargets,
    cfg: &AlgoConfig,
) -> Result<(PlacementSolution, Vec<Interval>)> {
    params.validate()?;
    qos.validate()?;
    cfg.validate()?;
    let (x1, x2) = (users[0].x, users[1].x);
    if x1 == x2 {
        return Err(Error::DegenerateScenario(format!(
            "both users share x = {x1}; the search interval is empty"
        )));
    }

    let (lo, hi) = center_range(params);
    let feed = params.feed_x();
    let mut iv = Interval {
        left: x2,
        right: x1,
    };
    let mut trace = vec![iv];
    let mut iterations = 0;
    let mut best: Option<(AntennaLayout, LayoutEvaluation, FineTuneReport)> = None;
    let mut last: Option<(AntennaLayout, LayoutEvaluation, FineTuneReport)> = None;

    loop {
        if iv.width() <= cfg.epsilon && iterations > 0 {
            break;
        }
        iterations += 1;
        let cur = 0.5 * (iv.left + iv.right);
        let start = initial_layout(params, cur.clamp(lo, hi), feed)?;
        let (layout, tuning) = fine_tune(params, &start, users, cfg);
        let eval = evaluate_layout(params, &layout, users, qos);

        if eval.feasibility.qos_met() {
            iv.right = cur;
        } else {
            iv.left = cur;
        }
        trace.push(iv);

        if eval.feasibility.overall
            && best
                .as_ref()
                .is_none_or(|(_, b, _)| eval.rates.sum > b.rates.sum)
        {
            best = Some((layout.clone(), eval.clone(), tuning.clone()));
        }
        last = Some((layout, eval, tuning));
        if iv.width() <= cfg.epsilon {
            break;
        }
    }

    let solution = match (best, last) {
        (Some((layout, eval, tuning)), _) => {
            PlacementSolution::from_evaluation(layout, &eval, iterations, true, Some(tuning))
        }
        (None, Some((layout, eval, tuning))) => {
            PlacementSolution::from_evaluation(layout, &eval, iterations, false, Some(tuning))
        }
        (None, None) => unreachable!("the loop body runs at least once"),
    };
    Ok((solution, trace))
}

/// Upper bound on bisection iterations for a region of side `side_d`.
pub fn iteration_bound(side_d: f64, epsilon: f64) -> usize {
    (side_d / epsilon).log2().ceil() as usize + 1
}

/// Largest circular phase error `(user1, user2)` between adjacent antennas,
/// recomputed from scratch.
pub fn adjacent_phase_errors(
    params: &SystemParams,
    layout: &AntennaLayout,
    users: &[UserPosition; 2],
) -> Vec<(f64, f64)> {
    let phases: Vec<[f64; 2]> = layout
        .xs
        .iter()
        .map(|&x| {
            [
                composite_phase(params, layout.feed_x, x, &users[0]),
                composite_phase(params, layout.feed_x, x, &users[1]),
            ]
        })
        .collect();
    phases
        .windows(2)
        .map(|w| {
            (
                circular_phase_error(w[1][0], w[0][0]),
                circular_phase_error(w[1][1], w[0][1]),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn baseline() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn circular_error_values() {
        assert_eq!(circular_phase_error(1.3, 1.3), 0.0);
        assert!(circular_phase_error(TAU + 0.7, 0.7) < 1e-15);
        assert_relative_eq!(
            circular_phase_error(1.9 * TAU, 0.0),
            0.1 * TAU,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            circular_phase_error(0.0, 1.9 * TAU),
            0.1 * TAU,
            max_relative = 1e-12
        );
        assert_relative_eq!(circular_phase_error(-1.0, 1.0), 2.0, max_relative = 1e-15);
        assert_relative_eq!(circular_phase_error(0.0, PI), PI, max_relative = 1e-15);
    }

    #[test]
    fn center_index_rule() {
        assert_eq!(center_index(1), 0);
        assert_eq!(center_index(2), 0);
        assert_eq!(center_index(3), 1);
        assert_eq!(center_index(4), 1);
        assert_eq!(center_index(5), 2);
    }

    #[test]
    fn initial_layout_cases() {
        let p1 = SystemParams {
            n_antennas: 1,
            ..baseline()
        };
        assert_eq!(initial_layout(&p1, 1.7, -5.0).unwrap().xs, vec![1.7]);

        let p = SystemParams {
            delta_min: Some(baseline().wavelength() / 2.0),
            ..baseline()
        };
        let half = p.wavelength() / 2.0;
        let l = initial_layout(&p, 0.0, -5.0).unwrap();
        assert_eq!(l.xs, vec![-half, 0.0, half]);
        assert!(l.validate(&p).is_ok());

        assert!(matches!(
            initial_layout(&p, 5.0 - half / 2.0, -5.0),
            Err(Error::Placement(_))
        ));
        assert!(initial_layout(&p, 5.0 - half, -5.0).is_ok());
    }

    #[test]
    fn fine_tune_single_antenna_noop() {
        let p = SystemParams {
            n_antennas: 1,
            ..baseline()
        };
        let users = [UserPosition::new(2.0, 1.0), UserPosition::new(-2.0, 0.3)];
        let l = initial_layout(&p, 0.3, -5.0).unwrap();
        let (out, rep) = fine_tune(&p, &l, &users, &AlgoConfig::default());
        assert_eq!(out, l);
        assert_eq!(rep.steps, 0);
    }

    #[test]
    fn fine_tune_lax_tolerance_noop() {
        let p = baseline();
        let users = [UserPosition::new(2.0, 1.0), UserPosition::new(-2.0, 0.3)];
        let cfg = AlgoConfig {
            delta1: PI,
            delta2: PI,
            ..AlgoConfig::default()
        };
        let l = initial_layout(&p, 0.0, -5.0).unwrap();
        let (out, rep) = fine_tune(&p, &l, &users, &cfg);
        assert_eq!(out, l);
        assert!(rep.all_aligned());
        assert!(rep.antennas.iter().all(|a| a.shifts == 0));
    }

    #[test]
    fn fine_tune_default_setting_aligns_both_users() {
        let p = baseline();
        let users = [UserPosition::new(2.0, 1.0), UserPosition::new(-2.0, 0.3)];
        let cfg = AlgoConfig::default();
        // Centered over the strong user, where bisection puts the array.
        let l = initial_layout(&p, -2.0, p.feed_x()).unwrap();
        let (out, rep) = fine_tune(&p, &l, &users, &cfg);
        assert!(rep.all_aligned(), "{rep:?}");
        assert!(out.validate(&p).is_ok());
        assert_eq!(out.xs[1], -2.0);
        // Independent re-check from raw geometry.
        let lam = p.wavelength();
        let lg = p.guided_wavelength();
        let phase = |x: f64, u: &UserPosition| {
            let d = ((u.x - x).powi(2) + u.y * u.y + 9.0).sqrt();
            TAU * (d / lam - (x + 5.0).abs() / lg)
        };
        for w in out.xs.windows(2) {
            for (u, tol) in [(&users[0], cfg.delta1), (&users[1], cfg.delta2)] {
                let diff = (phase(w[1], u) - phase(w[0], u)).rem_euclid(TAU);
                let err = diff.min(TAU - diff);
                assert!(err <= tol + 1e-9, "err {err} tol {tol}");
            }
        }
    }

    #[test]
    fn fine_tune_respects_region_edge() {
        let p = baseline();
        let (_, hi) = center_range(&p);
        let users = [UserPosition::new(4.9, 2.0), UserPosition::new(4.5, 0.1)];
        let cfg = AlgoConfig {
            delta1: 0.0,
            delta2: 0.0,
            ..AlgoConfig::default()
        };
        let l = initial_layout(&p, hi, p.feed_x()).unwrap();
        let (out, rep) = fine_tune(&p, &l, &users, &cfg);
        assert!(out.validate(&p).is_ok(), "{:?}", out.xs);
        assert!(rep.any_pinned());
    }

    #[test]
    fn bisection_rejects_shared_x() {
        let users = [UserPosition::new(1.0, 2.0), UserPosition::new(1.0, 0.5)];
        let r = bisection_solve(
            &baseline(),
            &users,
            &QosTargets::default(),
            &AlgoConfig::default(),
        );
        assert!(matches!(r, Err(Error::DegenerateScenario(_))));
    }

    #[test]
    fn bisection_unsatisfiable_qos_reports_infeasible() {
        let p = baseline();
        let users = [UserPosition::new(2.0, 3.0), UserPosition::new(-1.0, 0.5)];
        let sol = bisection_solve(
            &p,
            &users,
            &QosTargets::new(50.0, 0.5),
            &AlgoConfig::default(),
        )
        .unwrap();
        assert!(!sol.feasible_found);
        assert_eq!(sol.rates, RateReport::default());
        assert!(sol.layout.validate(&p).is_ok());
    }

    #[test]
    fn bisection_default_setting() {
        let p = baseline();
        let users = [UserPosition::new(2.0, 3.0), UserPosition::new(-1.0, 0.5)];
        let cfg = AlgoConfig::default();
        let (sol, trace) =
            bisection_solve_traced(&p, &users, &QosTargets::default(), &cfg).unwrap();
        assert!(sol.feasible_found);
        assert!(sol.feasibility.overall);
        assert!(sol.iterations <= iteration_bound(p.side_d, cfg.epsilon));
        assert_eq!(trace.len(), sol.iterations + 1);
        for w in trace.windows(2) {
            assert!(w[1].lo() >= w[0].lo() && w[1].hi() <= w[0].hi());
            assert_relative_eq!(w[1].width(), w[0].width() / 2.0, max_relative = 1e-9);
        }
        // Strong-user priority: the array ends up over user 2. The kept
        // iterate is the best feasible one, so it may sit a few mm away.
        let c = sol.layout.xs[center_index(3)];
        assert!((c - users[1].x).abs() < 0.05, "center {c}");
        assert!((c - users[1].x).abs() < (c - users[0].x).abs());
    }
}
