//! Brute-force references for the power split and the antenna placement.
//!
//! The full-grid search enumerates every spacing-valid N-tuple of grid
//! positions inside the search window. At realistic window sizes that is
//! out of reach for N = 3 (about 10⁴ points per antenna), so the default is
//! a two-stage approximation: a rigid-pitch sweep of the array center at
//! the grid step, then, for the best few centers, one coordinate pass
//! refining each outer antenna at sub-wavelength resolution. The refinement
//! reach is λ/(n_eff − 1) each way, the distance over which the composite
//! phase toward any user is guaranteed to sweep a full turn.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::channel::{AntennaLayout, SystemParams, UserPosition, SPACING_SLACK};
use crate::error::{invalid, Error, Result};
use crate::noma::{
    objective_f, optimal_alpha2, rate_sic, rate_strong, rate_weak, snr_scale, PowerSplit,
    QosTargets, RateReport, RATE_TOL,
};
use crate::par::{map_indices, Execution};
use crate::placement::{
    center_index, center_range, evaluate_layout, initial_layout, LayoutEvaluation,
    PlacementSolution,
};

/// Hard cap on full-grid enumeration size.
pub const FULL_GRID_CAP: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    FullGrid,
    #[default]
    TwoStage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Placement grid step, m. Defaults to λ/10.
    #[serde(default)]
    pub position_step: Option<f64>,
    /// Second-stage refinement step, m. Defaults to λ/100.
    #[serde(default)]
    pub refine_step: Option<f64>,
    pub alpha_step: f64,
    /// Margin added on both sides of the users' x-span, m.
    pub search_window: f64,
    #[serde(default)]
    pub strategy: Strategy,
    /// Number of best stage-one centers refined in the two-stage search.
    #[serde(default = "default_refine_top")]
    pub refine_top: usize,
}

const MAX_REFINE_PASSES: usize = 8;

fn default_refine_top() -> usize {
    16
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            position_step: None,
            refine_step: None,
            alpha_step: 1e-4,
            search_window: 1.0,
            strategy: Strategy::TwoStage,
            refine_top: default_refine_top(),
        }
    }
}

impl OracleConfig {
    pub fn position_step(&self, params: &SystemParams) -> f64 {
        self.position_step
            .unwrap_or_else(|| params.wavelength() / 10.0)
    }

    pub fn refine_step(&self, params: &SystemParams) -> f64 {
        self.refine_step
            .unwrap_or_else(|| params.wavelength() / 100.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("position_step", self.position_step),
            ("refine_step", self.refine_step),
            ("alpha_step", Some(self.alpha_step)),
            ("search_window", Some(self.search_window)),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(invalid(name, format!("must be > 0, got {v}")));
                }
            }
        }
        if self.refine_top == 0 {
            return Err(invalid("refine_top", "must be >= 1"));
        }
        Ok(())
    }

    /// Window `[lo, hi]` searched for `users`, clipped to the region.
    pub fn window(&self, params: &SystemParams, users: &[UserPosition; 2]) -> (f64, f64) {
        let half = params.half_side();
        let lo = users[0].x.min(users[1].x) - self.search_window;
        let hi = users[0].x.max(users[1].x) + self.search_window;
        (lo.max(-half), hi.min(half))
    }
}

/// Exhaustive argmax of the sum-rate objective over `α2 ∈ {0, step, …, 0.5}`
/// subject to both QoS targets and SIC. `None` if no grid point is feasible.
/// Ties go to the larger `α2`.
pub fn grid_alpha2(rho_g1: f64, rho_g2: f64, qos: &QosTargets, cfg: &OracleConfig) -> Option<f64> {
    let steps = (0.5 / cfg.alpha_step + 1e-9).floor() as usize;
    let last = steps as f64 * cfg.alpha_step;
    let grid = (0..=steps)
        .map(|k| (k as f64 * cfg.alpha_step).min(0.5))
        .chain((last < 0.5 - 1e-12).then_some(0.5));
    let mut best: Option<(f64, f64)> = None;
    for a in grid {
        let split = PowerSplit::from_alpha2(a);
        let feasible = rate_weak(rho_g1, split) >= qos.r1_min - RATE_TOL
            && rate_strong(rho_g2, split) >= qos.r2_min - RATE_TOL
            && rate_sic(rho_g2, split) >= qos.r1_min - RATE_TOL;
        if !feasible {
            continue;
        }
        let f = objective_f(rho_g1, rho_g2, a);
        if best.is_none_or(|(bf, _)| f >= bf) {
            best = Some((f, a));
        }
    }
    best.map(|(_, a)| a)
}

#[derive(Debug, Clone)]
struct Candidate {
    layout: AntennaLayout,
    eval: LayoutEvaluation,
}

impl Candidate {
    fn sum(&self) -> f64 {
        self.eval.rates.sum
    }

    fn feasible(&self) -> bool {
        self.eval.feasibility.overall
    }

    /// Higher sum rate wins; equal sums go to the smaller first coordinate.
    fn beats(&self, other: &Candidate) -> bool {
        match self.sum().total_cmp(&other.sum()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.layout.xs[0] < other.layout.xs[0],
        }
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.beats(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn evaluate(
    params: &SystemParams,
    xs: Vec<f64>,
    users: &[UserPosition; 2],
    qos: &QosTargets,
) -> Candidate {
    let layout = AntennaLayout::unchecked(xs, params.feed_x());
    let eval = evaluate_layout(params, &layout, users, qos);
    Candidate { layout, eval }
}

/// Grid indices `k` with `k * step` inside `[lo, hi]`.
fn grid_range(lo: f64, hi: f64, step: f64) -> (i64, i64) {
    (
        (lo / step - 1e-9).ceil() as i64,
        (hi / step + 1e-9).floor() as i64,
    )
}

/// Minimum index gap between grid antennas honoring the spacing constraint.
fn index_gap(params: &SystemParams, step: f64) -> usize {
    (((params.delta_min() - SPACING_SLACK) / step) - 1e-9)
        .ceil()
        .max(1.0) as usize
}

/// Number of spacing-valid N-tuples on `m` grid points with index gap `g`.
pub fn full_grid_size(m: usize, n: usize, g: usize) -> f64 {
    let slots = m as f64 - (n as f64 - 1.0) * (g as f64 - 1.0);
    if slots < n as f64 {
        return 0.0;
    }
    (0..n).fold(1.0, |acc, i| acc * (slots - i as f64) / (i as f64 + 1.0))
}

pub fn exhaustive_placement(
    params: &SystemParams,
    users: &[UserPosition; 2],
    qos: &QosTargets,
    cfg: &OracleConfig,
) -> Result<PlacementSolution> {
    exhaustive_placement_with(Execution::default(), params, users, qos, cfg)
}

pub fn exhaustive_placement_with(
    exec: Execution,
    params: &SystemParams,
    users: &[UserPosition; 2],
    qos: &QosTargets,
    cfg: &OracleConfig,
) -> Result<PlacementSolution> {
    params.validate()?;
    qos.validate()?;
    cfg.validate()?;
    match cfg.strategy {
        Strategy::FullGrid => full_grid(exec, params, users, qos, cfg),
        Strategy::TwoStage => two_stage(exec, params, users, qos, cfg),
    }
}

fn finish(
    best: Option<Candidate>,
    fallback: Option<Candidate>,
    evaluated: usize,
) -> Result<PlacementSolution> {
    match (best, fallback) {
        (Some(c), _) => Ok(PlacementSolution::from_evaluation(
            c.layout, &c.eval, evaluated, true, None,
        )),
        (None, Some(c)) => Ok(PlacementSolution::from_evaluation(
            c.layout, &c.eval, evaluated, false, None,
        )),
        (None, None) => Err(Error::Placement(
            "search window holds no admissible layout".into(),
        )),
    }
}

fn full_grid(
    exec: Execution,
    params: &SystemParams,
    users: &[UserPosition; 2],
    qos: &QosTargets,
    cfg: &OracleConfig,
) -> Result<PlacementSolution> {
    let step = cfg.position_step(params);
    let (lo, hi) = cfg.window(params, users);
    let (k0, k1) = grid_range(lo, hi, step);
    let m = (k1 - k0 + 1).max(0) as usize;
    let n = params.n_antennas;
    let g = index_gap(params, step);
    let size = full_grid_size(m, n, g);
    if size > FULL_GRID_CAP {
        return Err(Error::GridTooLarge {
            combinations: size,
            cap: FULL_GRID_CAP,
        });
    }

    // Each worker owns one first-antenna index and walks the rest in order.
    let per_first = map_indices(exec, m, |first| {
        let mut best: Option<Candidate> = None;
        let mut fallback: Option<Candidate> = None;
        let mut count = 0usize;
        let mut idx = vec![first; n];
        enumerate(&mut idx, 1, m, g, &mut |idx| {
            count += 1;
            let xs = idx.iter().map(|&i| (k0 + i as i64) as f64 * step).collect();
            let c = evaluate(params, xs, users, qos);
            if c.feasible() {
                best = pick(best.take(), Some(c));
            } else if best.is_none() {
                fallback = pick(fallback.take(), Some(c));
            }
        });
        (best, fallback, count)
    });

    let mut best = None;
    let mut fallback = None;
    let mut evaluated = 0;
    for (b, f, c) in per_first {
        best = pick(best, b);
        fallback = pick(fallback, f);
        evaluated += c;
    }
    finish(best, fallback, evaluated)
}

fn enumerate(
    idx: &mut [usize],
    pos: usize,
    m: usize,
    gap: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if pos == idx.len() {
        visit(idx);
        return;
    }
    let remaining = idx.len() - pos - 1;
    let start = idx[pos - 1] + gap;
    let mut i = start;
    while i + remaining * gap < m {
        idx[pos] = i;
        enumerate(idx, pos + 1, m, gap, visit);
        i += 1;
    }
}

fn two_stage(
    exec: Execution,
    params: &SystemParams,
    users: &[UserPosition; 2],
    qos: &QosTargets,
    cfg: &OracleConfig,
) -> Result<PlacementSolution> {
    let step = cfg.position_step(params);
    let (wlo, whi) = cfg.window(params, users);
    let (clo, chi) = center_range(params);
    let (k0, k1) = grid_range(wlo.max(clo), whi.min(chi), step);
    let m = (k1 - k0 + 1).max(0) as usize;
    let feed = params.feed_x();

    let stage1 = map_indices(exec, m, |i| {
        let center = (k0 + i as i64) as f64 * step;
        initial_layout(params, center, feed).map(|l| {
            let ceiling = coherent_ceiling(params, &l.xs, users, qos);
            (evaluate(params, l.xs, users, qos), ceiling)
        })
    });
    let stage1 = stage1.into_iter().collect::<Result<Vec<_>>>()?;

    // Rigid-pitch sum rates mostly reflect phase luck, so seeds for the
    // refinement come from two rankings: the rigid sum rate among feasible
    // layouts, and the phase-coherent ceiling among all of them.
    let mut by_sum: Vec<usize> = (0..m).filter(|&i| stage1[i].0.feasible()).collect();
    by_sum.sort_by(|&a, &b| rank(&stage1[a].0, &stage1[b].0));
    let mut by_ceiling: Vec<usize> = (0..m).collect();
    by_ceiling.sort_by(|&a, &b| stage1[b].1.total_cmp(&stage1[a].1).then(a.cmp(&b)));
    let mut seeds: Vec<usize> = by_sum.into_iter().take(cfg.refine_top).collect();
    for i in by_ceiling.into_iter().take(cfg.refine_top) {
        if !seeds.contains(&i) {
            seeds.push(i);
        }
    }

    let refined = map_indices(exec, seeds.len(), |k| {
        refine(params, users, qos, cfg, stage1[seeds[k]].0.clone())
    });
    let mut best = None;
    let mut fallback = None;
    let mut evaluated = m;
    for (c, _) in &stage1 {
        if !c.feasible() {
            fallback = pick(fallback, Some(c.clone()));
        }
    }
    for (c, count) in refined {
        evaluated += count;
        if c.feasible() {
            best = pick(best, Some(c));
        }
    }
    for (c, _) in &stage1 {
        if c.feasible() {
            best = pick(best, Some(c.clone()));
        }
    }
    finish(best, fallback, evaluated)
}

fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    if a.beats(b) {
        Ordering::Less
    } else if b.beats(a) {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Sum rate the layout would reach if every antenna's phase toward both
/// users agreed, i.e. with gain magnitudes at the triangle bound.
fn coherent_ceiling(
    params: &SystemParams,
    xs: &[f64],
    users: &[UserPosition; 2],
    qos: &QosTargets,
) -> f64 {
    let amp = params.eta().sqrt();
    let rho = snr_scale(params);
    let g: Vec<f64> = users
        .iter()
        .map(|u| {
            let s: f64 = xs.iter().map(|&x| amp / u.distance_to(x, params.h)).sum();
            rho * s * s
        })
        .collect();
    let (alpha2, _) = optimal_alpha2(g[0], qos);
    RateReport::evaluate(g[0], g[1], PowerSplit::from_alpha2(alpha2)).sum
}

/// Coordinate passes over the outer antennas, right side outward first,
/// keeping only strictly better feasible moves. Stops after a pass with no
/// improvement or after `MAX_REFINE_PASSES`.
fn refine(
    params: &SystemParams,
    users: &[UserPosition; 2],
    qos: &QosTargets,
    cfg: &OracleConfig,
    mut current: Candidate,
) -> (Candidate, usize) {
    let n = params.n_antennas;
    let c = center_index(n);
    let fine = cfg.refine_step(params);
    let span = params.wavelength() / (params.n_eff - 1.0).max(f64::EPSILON);
    let reach = (span / fine).ceil() as i64;
    let dm = params.delta_min();
    let half = params.half_side();
    let mut evaluated = 0;
    for _ in 0..MAX_REFINE_PASSES {
        let start_sum = current.sum();
        for i in ((c + 1)..n).chain((0..c).rev()) {
            let x0 = current.layout.xs[i];
            let mut local = current.clone();
            for j in -reach..=reach {
                if j == 0 {
                    continue;
                }
                let x = x0 + j as f64 * fine;
                if x.abs() > half + SPACING_SLACK {
                    continue;
                }
                let xs = &current.layout.xs;
                if i > 0 && x - xs[i - 1] < dm - SPACING_SLACK {
                    continue;
                }
                if i + 1 < n && xs[i + 1] - x < dm - SPACING_SLACK {
                    continue;
                }
                let mut trial = xs.clone();
                trial[i] = x;
                let cand = evaluate(params, trial, users, qos);
                evaluated += 1;
                if cand.feasible() && cand.sum() > local.sum() {
                    local = cand;
                }
            }
            current = local;
        }
        if current.sum() <= start_sum {
            break;
        }
    }
    (current, evaluated)
}

/// Rounds every antenna to the nearest point of the `step` grid.
pub fn snap_to_grid(layout: &AntennaLayout, step: f64) -> AntennaLayout {
    AntennaLayout::unchecked(
        layout
            .xs
            .iter()
            .map(|x| (x / step).round() * step)
            .collect(),
        layout.feed_x,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noma::{optimal_alpha2, Clamp};
    use crate::placement::{bisection_solve, AlgoConfig};

    #[test]
    fn grid_alpha2_matches_closed_form() {
        let cfg = OracleConfig::default();
        let a = grid_alpha2(3.0, 9.0, &QosTargets::new(1.0, 0.5), &cfg).unwrap();
        assert!((a - 1.0 / 3.0).abs() <= cfg.alpha_step, "{a}");
    }

    #[test]
    fn grid_alpha2_infeasible_and_boundary() {
        let cfg = OracleConfig::default();
        assert_eq!(
            grid_alpha2(3.0, 9.0, &QosTargets::new(40.0, 0.5), &cfg),
            None
        );
        assert_eq!(
            grid_alpha2(2.0, 5.0, &QosTargets::new(0.0, 0.0), &cfg),
            Some(0.5)
        );
        let (a, clamp) = optimal_alpha2(2.0, &QosTargets::new(0.0, 0.0));
        assert_eq!((a, clamp), (0.5, Clamp::High));
    }

    #[test]
    fn grid_size_counts() {
        // 5 points, 2 antennas, gap 2: (0,2) (0,3) (0,4) (1,3) (1,4) (2,4)
        assert_eq!(full_grid_size(5, 2, 2), 6.0);
        assert_eq!(full_grid_size(10, 1, 5), 10.0);
        assert_eq!(full_grid_size(3, 3, 2), 0.0);
        let mut count = 0;
        let mut idx = vec![0; 3];
        for first in 0..20 {
            idx[0] = first;
            enumerate(&mut idx, 1, 20, 5, &mut |_| count += 1);
        }
        assert_eq!(count as f64, full_grid_size(20, 3, 5));
    }

    #[test]
    fn full_grid_refuses_blowup() {
        let p = SystemParams::default();
        let users = [UserPosition::new(4.0, 3.0), UserPosition::new(-4.0, 0.5)];
        let cfg = OracleConfig {
            strategy: Strategy::FullGrid,
            ..OracleConfig::default()
        };
        assert!(matches!(
            exhaustive_placement(&p, &users, &QosTargets::default(), &cfg),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn single_antenna_single_user_limit() {
        // With user 1 far away the objective is driven by user 2 alone, so the
        // best grid point is the one nearest user 2's x.
        let p = SystemParams {
            n_antennas: 1,
            side_d: 40.0,
            ..SystemParams::default()
        };
        let users = [
            UserPosition::new(15.0, 19.0),
            UserPosition::new(0.31234, 0.2),
        ];
        let cfg = OracleConfig {
            strategy: Strategy::FullGrid,
            search_window: 0.05,
            ..OracleConfig::default()
        };
        let sol = exhaustive_placement(&p, &users, &QosTargets::new(0.0, 0.0), &cfg).unwrap();
        let step = cfg.position_step(&p);
        assert!((sol.layout.xs[0] - users[1].x).abs() <= step / 2.0 + 1e-12);
    }

    #[test]
    fn full_grid_dominates_snapped_bisection() {
        let p = SystemParams::default();
        let users = [UserPosition::new(0.35, 1.2), UserPosition::new(0.3, 0.4)];
        let qos = QosTargets::default();
        let algo = bisection_solve(&p, &users, &qos, &AlgoConfig::default()).unwrap();
        let cfg = OracleConfig {
            strategy: Strategy::FullGrid,
            search_window: 0.04,
            ..OracleConfig::default()
        };
        let oracle = exhaustive_placement(&p, &users, &qos, &cfg).unwrap();
        assert!(oracle.feasible_found);
        let snapped = snap_to_grid(&algo.layout, cfg.position_step(&p));
        let eval = evaluate_layout(&p, &snapped, &users, &qos);
        let (lo, hi) = cfg.window(&p, &users);
        let inside = snapped.xs.iter().all(|x| (lo..=hi).contains(x));
        if eval.feasibility.overall && inside {
            assert!(oracle.sum_rate() >= eval.rates.sum - 1e-9);
        }
        // Parallel and sequential enumeration agree bit for bit.
        let seq = exhaustive_placement_with(Execution::Sequential, &p, &users, &qos, &cfg).unwrap();
        assert_eq!(seq, oracle);
    }
}
