//! Seeded Monte Carlo experiments: transmit-power sweep against the
//! conventional baseline, phase-tolerance sweep, and algorithm-vs-oracle gap.
//!
//! Trial `i` draws its scenario from a ChaCha8 stream selected by
//! `(seed, i)`. Users are sampled on the unit square and then scaled by `D`,
//! so every scheme, transmit power and region size within one sweep sees
//! the same (scaled) user placements.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{conventional_effective_gain, BaselineMode, SystemParams, UserPosition};
use crate::config::RunConfig;
use crate::error::{invalid, Error, Result};
use crate::noma::{check_gains, optimal_alpha2, snr_scale, PowerSplit, QosTargets, RateReport};
use crate::oracle::{exhaustive_placement, snap_to_grid, OracleConfig};
use crate::par::{map_indices, Execution};
use crate::placement::{bisection_solve, evaluate_layout, AlgoConfig};
use crate::table::{write_table, Format, Table};

const MAX_DRAWS: usize = 100;

/// Two users; `user2` is the one closer to the waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub user1: UserPosition,
    pub user2: UserPosition,
    #[serde(default)]
    pub seed_id: u64,
}

impl Scenario {
    pub fn users(&self) -> [UserPosition; 2] {
        [self.user1, self.user2]
    }

    pub fn validate(&self, side_d: f64) -> Result<()> {
        if self.user1.x == self.user2.x {
            return Err(Error::DegenerateScenario(
                "users share an x-coordinate".into(),
            ));
        }
        if self.user2.y.abs() > self.user1.y.abs() {
            return Err(Error::DegenerateScenario(
                "user2 must be at least as close to the waveguide as user1".into(),
            ));
        }
        if !(self.user1.within(side_d) && self.user2.within(side_d)) {
            return Err(Error::DegenerateScenario(format!(
                "user outside the {side_d} m region"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Pinching,
    ConventionalUniform,
    ConventionalMrt,
    Exhaustive,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Pinching => "pinching",
            Scheme::ConventionalUniform => "conventional-uniform",
            Scheme::ConventionalMrt => "conventional-mrt",
            Scheme::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub pt_dbm_values: Vec<f64>,
    pub d_values: Vec<f64>,
    pub delta_pairs: Vec<(f64, f64)>,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            pt_dbm_values: (0..=8).map(|i| 5.0 * i as f64).collect(),
            d_values: vec![10.0, 20.0, 30.0],
            delta_pairs: vec![(0.5, 0.02), (0.2, 0.02), (0.5, 100.0)],
            trials: 100,
            seed: 2025,
            schemes: vec![Scheme::Pinching, Scheme::ConventionalUniform],
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        for (name, empty) in [
            ("pt_dbm_values", self.pt_dbm_values.is_empty()),
            ("d_values", self.d_values.is_empty()),
            ("delta_pairs", self.delta_pairs.is_empty()),
            ("schemes", self.schemes.is_empty()),
        ] {
            if empty {
                return Err(invalid(name, "must not be empty"));
            }
        }
        if self.d_values.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(invalid("d_values", "every side length must be > 0"));
        }
        Ok(())
    }
}

/// Independent stream for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Two users uniform on `[-D/2, D/2]²`; the one with smaller `|y|` becomes
/// user 2. Redraws on exact ties in `x` or `|y|`.
pub fn sample_scenario<R: Rng + ?Sized>(
    rng: &mut R,
    side_d: f64,
    seed_id: u64,
) -> Result<Scenario> {
    if !(side_d.is_finite() && side_d > 0.0) {
        return Err(invalid("side_d", "must be > 0"));
    }
    for _ in 0..MAX_DRAWS {
        let mut draw = || {
            UserPosition::new(
                (rng.random::<f64>() - 0.5) * side_d,
                (rng.random::<f64>() - 0.5) * side_d,
            )
        };
        let (a, b) = (draw(), draw());
        if a.x == b.x || a.y.abs() == b.y.abs() {
            continue;
        }
        let (user1, user2) = if a.y.abs() > b.y.abs() {
            (a, b)
        } else {
            (b, a)
        };
        return Ok(Scenario {
            user1,
            user2,
            seed_id,
        });
    }
    Err(Error::Sampling(MAX_DRAWS))
}

pub fn scenario_for(seed: u64, trial: u64, side_d: f64) -> Result<Scenario> {
    sample_scenario(&mut trial_rng(seed, trial), side_d, trial)
}

/// Outcome of one scheme on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub scheme: Scheme,
    pub trial: u64,
    /// All zero when no feasible operating point was found.
    pub rates: RateReport,
    pub alpha2: f64,
    pub feasible: bool,
    /// Bisection iterations (pinching) or layouts evaluated (exhaustive).
    pub iterations: usize,
    /// Users were relabeled so that `|g_2|² >= |g_1|²` (conventional only).
    pub swapped: bool,
}

pub fn evaluate_scheme(
    params: &SystemParams,
    scenario: &Scenario,
    qos: &QosTargets,
    algo: &AlgoConfig,
    oracle: &OracleConfig,
    scheme: Scheme,
) -> Result<TrialRecord> {
    let users = scenario.users();
    let from_solution = |sol: crate::placement::PlacementSolution| TrialRecord {
        scheme,
        trial: scenario.seed_id,
        rates: sol.rates,
        alpha2: sol.split.alpha2,
        feasible: sol.feasible_found,
        iterations: sol.iterations,
        swapped: false,
    };
    match scheme {
        Scheme::Pinching => bisection_solve(params, &users, qos, algo).map(from_solution),
        Scheme::Exhaustive => exhaustive_placement(params, &users, qos, oracle).map(from_solution),
        Scheme::ConventionalUniform | Scheme::ConventionalMrt => {
            let mode = if scheme == Scheme::ConventionalUniform {
                BaselineMode::Uniform
            } else {
                BaselineMode::MrtStrong
            };
            let mut g = conventional_effective_gain(params, &users, mode);
            let swapped = g[1] < g[0];
            if swapped {
                g.swap(0, 1);
            }
            let rho = snr_scale(params);
            let (alpha2, _) = optimal_alpha2(rho * g[0], qos);
            let split = PowerSplit::from_alpha2(alpha2);
            let feasible = check_gains(rho, g, true, split, qos).overall;
            let rates = if feasible {
                RateReport::evaluate(rho * g[0], rho * g[1], split)
            } else {
                RateReport::default()
            };
            Ok(TrialRecord {
                scheme,
                trial: scenario.seed_id,
                rates,
                alpha2,
                feasible,
                iterations: 0,
                swapped,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub pt_dbm: f64,
    pub side_d_m: f64,
    pub scheme: Scheme,
    pub trials: usize,
    pub mean_sum_rate_bpshz: f64,
    pub feasible_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub pt_dbm: f64,
    pub delta1_rad: f64,
    pub delta2_rad: f64,
    pub mean_sum_rate_bpshz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub trial: u64,
    pub sum_rate_algo: f64,
    pub sum_rate_oracle: f64,
    pub rel_gap: f64,
}

/// A sweep's table rows together with every per-trial record behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep<R> {
    pub rows: Vec<R>,
    pub records: Vec<TrialRecord>,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

pub fn run_power_sweep(cfg: &RunConfig) -> Result<Sweep<PowerRow>> {
    run_power_sweep_with(Execution::default(), cfg)
}

/// Mean sum rate per `(Pt, D, scheme)` cell over the spec's trials.
pub fn run_power_sweep_with(exec: Execution, cfg: &RunConfig) -> Result<Sweep<PowerRow>> {
    let spec = &cfg.sweep;
    spec.validate()?;
    let cells: Vec<(f64, f64)> = spec
        .d_values
        .iter()
        .flat_map(|&d| spec.pt_dbm_values.iter().map(move |&pt| (pt, d)))
        .collect();
    let trials = spec.trials;

    let jobs = map_indices(
        exec,
        cells.len() * trials,
        |job| -> Result<Vec<TrialRecord>> {
            let (pt, d) = cells[job / trials];
            let trial = (job % trials) as u64;
            let params = SystemParams {
                pt_dbm: pt,
                side_d: d,
                ..cfg.system.clone()
            };
            let scenario = scenario_for(spec.seed, trial, d)?;
            spec.schemes
                .iter()
                .map(|&s| evaluate_scheme(&params, &scenario, &cfg.qos, &cfg.algo, &cfg.oracle, s))
                .collect()
        },
    );
    let jobs = jobs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(cells.len() * spec.schemes.len());
    for (c, &(pt, d)) in cells.iter().enumerate() {
        let cell = &jobs[c * trials..(c + 1) * trials];
        for (k, &scheme) in spec.schemes.iter().enumerate() {
            rows.push(PowerRow {
                pt_dbm: pt,
                side_d_m: d,
                scheme,
                trials,
                mean_sum_rate_bpshz: mean(cell.iter().map(|r| r[k].rates.sum)),
                feasible_fraction: mean(cell.iter().map(|r| if r[k].feasible { 1.0 } else { 0.0 })),
            });
        }
    }
    Ok(Sweep {
        rows,
        records: jobs.into_iter().flatten().collect(),
    })
}

pub fn run_delta_sweep(cfg: &RunConfig) -> Result<Sweep<DeltaRow>> {
    run_delta_sweep_with(Execution::default(), cfg)
}

/// Pinching-scheme mean sum rate per `(δ1, δ2, Pt)` at the configured `D`.
pub fn run_delta_sweep_with(exec: Execution, cfg: &RunConfig) -> Result<Sweep<DeltaRow>> {
    let spec = &cfg.sweep;
    spec.validate()?;
    let d = cfg.system.side_d;
    let cells: Vec<((f64, f64), f64)> = spec
        .delta_pairs
        .iter()
        .flat_map(|&pair| spec.pt_dbm_values.iter().map(move |&pt| (pair, pt)))
        .collect();
    let trials = spec.trials;

    let jobs = map_indices(exec, cells.len() * trials, |job| -> Result<TrialRecord> {
        let ((delta1, delta2), pt) = cells[job / trials];
        let trial = (job % trials) as u64;
        let params = SystemParams {
            pt_dbm: pt,
            ..cfg.system.clone()
        };
        let algo = AlgoConfig {
            delta1,
            delta2,
            ..cfg.algo.clone()
        };
        let scenario = scenario_for(spec.seed, trial, d)?;
        evaluate_scheme(
            &params,
            &scenario,
            &cfg.qos,
            &algo,
            &cfg.oracle,
            Scheme::Pinching,
        )
    });
    let records = jobs.into_iter().collect::<Result<Vec<_>>>()?;

    let rows = cells
        .iter()
        .enumerate()
        .map(|(c, &((delta1, delta2), pt))| DeltaRow {
            pt_dbm: pt,
            delta1_rad: delta1,
            delta2_rad: delta2,
            mean_sum_rate_bpshz: mean(
                records[c * trials..(c + 1) * trials]
                    .iter()
                    .map(|r| r.rates.sum),
            ),
        })
        .collect();
    Ok(Sweep { rows, records })
}

/// Per-trial algorithm-vs-oracle outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleTrial {
    pub row: OracleRow,
    pub abs_gap: f64,
    pub algo_iterations: usize,
    pub algo_feasible: bool,
    pub oracle_feasible: bool,
    /// Sum rate of the algorithm's layout rounded onto the oracle grid, when
    /// that rounded layout is feasible.
    pub snapped_sum_rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub trials: usize,
    pub mean_rel_gap: f64,
    pub min_rel_gap: f64,
    pub median_rel_gap: f64,
    pub max_rel_gap: f64,
    pub mean_abs_gap: f64,
}

impl GapSummary {
    fn from_trials(trials: &[OracleTrial]) -> Self {
        let mut gaps: Vec<f64> = trials.iter().map(|t| t.row.rel_gap).collect();
        gaps.sort_by(f64::total_cmp);
        let n = gaps.len();
        let median = if n == 0 {
            0.0
        } else if n % 2 == 1 {
            gaps[n / 2]
        } else {
            0.5 * (gaps[n / 2 - 1] + gaps[n / 2])
        };
        Self {
            trials: n,
            mean_rel_gap: mean(gaps.iter().copied()),
            min_rel_gap: gaps.first().copied().unwrap_or(0.0),
            median_rel_gap: median,
            max_rel_gap: gaps.last().copied().unwrap_or(0.0),
            mean_abs_gap: mean(trials.iter().map(|t| t.abs_gap)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub trials: Vec<OracleTrial>,
    pub summary: GapSummary,
}

impl OracleComparison {
    pub fn rows(&self) -> Vec<OracleRow> {
        self.trials.iter().map(|t| t.row.clone()).collect()
    }
}

pub fn run_oracle_comparison(cfg: &RunConfig) -> Result<OracleComparison> {
    run_oracle_comparison_with(Execution::default(), cfg)
}

/// Bisection against the exhaustive oracle at the configured `Pt` and `D`.
pub fn run_oracle_comparison_with(exec: Execution, cfg: &RunConfig) -> Result<OracleComparison> {
    let spec = &cfg.sweep;
    spec.validate()?;
    let params = &cfg.system;
    let step = cfg.oracle.position_step(params);
    let trials = map_indices(exec, spec.trials, |i| -> Result<OracleTrial> {
        let scenario = scenario_for(spec.seed, i as u64, params.side_d)?;
        let users = scenario.users();
        let algo = bisection_solve(params, &users, &cfg.qos, &cfg.algo)?;
        let oracle = exhaustive_placement(params, &users, &cfg.qos, &cfg.oracle)?;
        let (a, o) = (algo.sum_rate(), oracle.sum_rate());
        let snapped = snap_to_grid(&algo.layout, step);
        let snapped_eval = evaluate_layout(params, &snapped, &users, &cfg.qos);
        Ok(OracleTrial {
            row: OracleRow {
                trial: i as u64,
                sum_rate_algo: a,
                sum_rate_oracle: o,
                rel_gap: if o > 0.0 { (o - a) / o } else { 0.0 },
            },
            abs_gap: o - a,
            algo_iterations: algo.iterations,
            algo_feasible: algo.feasible_found,
            oracle_feasible: oracle.feasible_found,
            snapped_sum_rate: snapped_eval
                .feasibility
                .overall
                .then_some(snapped_eval.rates.sum),
        })
    });
    let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
    let summary = GapSummary::from_trials(&trials);
    Ok(OracleComparison { trials, summary })
}

pub fn power_table(rows: &[PowerRow]) -> Table {
    let mut t = Table::new(vec![
        "pt_dbm",
        "side_d_m",
        "scheme",
        "trials",
        "mean_sum_rate_bpshz",
        "feasible_fraction",
    ]);
    for r in rows {
        t.push(vec![
            r.pt_dbm.into(),
            r.side_d_m.into(),
            r.scheme.name().into(),
            r.trials.into(),
            r.mean_sum_rate_bpshz.into(),
            r.feasible_fraction.into(),
        ]);
    }
    t
}

pub fn delta_table(rows: &[DeltaRow]) -> Table {
    let mut t = Table::new(vec![
        "pt_dbm",
        "delta1_rad",
        "delta2_rad",
        "mean_sum_rate_bpshz",
    ]);
    for r in rows {
        t.push(vec![
            r.pt_dbm.into(),
            r.delta1_rad.into(),
            r.delta2_rad.into(),
            r.mean_sum_rate_bpshz.into(),
        ]);
    }
    t
}

pub fn oracle_table(rows: &[OracleRow]) -> Table {
    let mut t = Table::new(vec!["trial", "sum_rate_algo", "sum_rate_oracle", "rel_gap"]);
    for r in rows {
        t.push(vec![
            (r.trial as usize).into(),
            r.sum_rate_algo.into(),
            r.sum_rate_oracle.into(),
            r.rel_gap.into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutputs {
    pub power: PathBuf,
    pub delta: PathBuf,
    pub oracle: PathBuf,
    pub config: PathBuf,
    pub summary: GapSummary,
}

/// Runs all three experiments into `out_dir/fig2.csv`, `fig3.csv`, `fig4.csv`
/// and echoes the effective configuration next to them.
pub fn write_figures(cfg: &RunConfig, out_dir: &Path) -> Result<FigureOutputs> {
    cfg.validate()?;
    let power = run_power_sweep(cfg)?;
    let delta = run_delta_sweep(cfg)?;
    let oracle = run_oracle_comparison(cfg)?;

    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let out = FigureOutputs {
        power: out_dir.join("fig2.csv"),
        delta: out_dir.join("fig3.csv"),
        oracle: out_dir.join("fig4.csv"),
        config: out_dir.join("config.json"),
        summary: oracle.summary,
    };
    write_table(&power_table(&power.rows), &out.power, Format::Csv)?;
    write_table(&delta_table(&delta.rows), &out.delta, Format::Csv)?;
    write_table(&oracle_table(&oracle.rows()), &out.oracle, Format::Csv)?;
    cfg.write_json(&out.config)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_draws_repeat() {
        let a = scenario_for(7, 3, 10.0).unwrap();
        let b = scenario_for(7, 3, 10.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, scenario_for(7, 4, 10.0).unwrap());
        assert_ne!(a, scenario_for(8, 3, 10.0).unwrap());
    }

    #[test]
    fn scenarios_scale_with_side() {
        let a = scenario_for(11, 5, 10.0).unwrap();
        let b = scenario_for(11, 5, 20.0).unwrap();
        assert_eq!(b.user1.x, 2.0 * a.user1.x);
        assert_eq!(b.user2.y, 2.0 * a.user2.y);
    }

    #[test]
    fn labeling_by_distance_to_waveguide() {
        struct Fixed(Vec<u64>);
        impl rand::RngCore for Fixed {
            fn next_u32(&mut self) -> u32 {
                self.next_u64() as u32
            }
            fn next_u64(&mut self) -> u64 {
                self.0.remove(0)
            }
            fn fill_bytes(&mut self, _: &mut [u8]) {
                unimplemented!()
            }
        }
        // rand maps u64 v to (v >> 11) * 2^-53.
        let unit = |u: f64| ((u * (1u64 << 53) as f64) as u64) << 11;
        // D = 8: first point (1, 2.0), second point (-1, 0.5).
        let mut rng = Fixed(vec![unit(0.625), unit(0.75), unit(0.375), unit(0.5625)]);
        let s = sample_scenario(&mut rng, 8.0, 0).unwrap();
        assert_eq!(s.user2, UserPosition::new(-1.0, 0.5));
        assert_eq!(s.user1, UserPosition::new(1.0, 2.0));
    }

    #[test]
    fn uniform_statistics() {
        let d = 10.0;
        let sigma = d / 12f64.sqrt() / 100.0;
        let mut rng = trial_rng(99, 0);
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..10_000 {
            let mut draw = || (rng.random::<f64>() - 0.5) * d;
            sx += draw();
            sy += draw();
        }
        assert!((sx / 1e4).abs() < 3.0 * sigma);
        assert!((sy / 1e4).abs() < 3.0 * sigma);
    }

    #[test]
    fn conventional_equidistant_users_tie() {
        let p = SystemParams {
            n_antennas: 1,
            ..SystemParams::default()
        };
        let scenario = Scenario {
            user1: UserPosition::new(0.6, 0.8),
            user2: UserPosition::new(0.8, 0.6),
            seed_id: 0,
        };
        let g = conventional_effective_gain(&p, &scenario.users(), BaselineMode::Uniform);
        approx::assert_relative_eq!(g[0], g[1], max_relative = 1e-12);
        let r = evaluate_scheme(
            &p,
            &scenario,
            &QosTargets::default(),
            &AlgoConfig::default(),
            &OracleConfig::default(),
            Scheme::ConventionalUniform,
        )
        .unwrap();
        assert!(!r.swapped);
    }

    #[test]
    fn pinching_record_is_reproducible() {
        let p = SystemParams::default();
        let s = scenario_for(1, 0, 10.0).unwrap();
        let run = || {
            evaluate_scheme(
                &p,
                &s,
                &QosTargets::default(),
                &AlgoConfig::default(),
                &OracleConfig::default(),
                Scheme::Pinching,
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a, b);
        assert_eq!(a.rates.sum.to_bits(), b.rates.sum.to_bits());
    }

    #[test]
    fn spec_validation() {
        let mut s = SweepSpec::default();
        assert!(s.validate().is_ok());
        s.trials = 0;
        assert!(s.validate().is_err());
        let s = SweepSpec {
            d_values: vec![],
            ..SweepSpec::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn scenario_validation() {
        let ok = Scenario {
            user1: UserPosition::new(1.0, 2.0),
            user2: UserPosition::new(-1.0, 0.5),
            seed_id: 0,
        };
        assert!(ok.validate(10.0).is_ok());
        let flipped = Scenario {
            user1: ok.user2,
            user2: ok.user1,
            seed_id: 0,
        };
        assert!(flipped.validate(10.0).is_err());
        assert!(ok.validate(3.0).is_err());
    }

    #[test]
    fn gap_summary_stats() {
        let t = |g: f64| OracleTrial {
            row: OracleRow {
                trial: 0,
                sum_rate_algo: 1.0 - g,
                sum_rate_oracle: 1.0,
                rel_gap: g,
            },
            abs_gap: g,
            algo_iterations: 1,
            algo_feasible: true,
            oracle_feasible: true,
            snapped_sum_rate: None,
        };
        let s = GapSummary::from_trials(&[t(0.3), t(0.1), t(0.2), t(0.0)]);
        assert_eq!(s.min_rel_gap, 0.0);
        assert_eq!(s.max_rel_gap, 0.3);
        approx::assert_relative_eq!(s.median_rel_gap, 0.15);
        approx::assert_relative_eq!(s.mean_rel_gap, 0.15);
    }
}
