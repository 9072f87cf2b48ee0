//! Seeded Monte Carlo parameter sweeps and figure presets.
//!
//! A sweep draws one channel block per trial and reuses it, unchanged, across
//! every swept value and strategy (paired comparison; this is a variance
//! reduction choice and is recorded in the output metadata). Trials fan out
//! in parallel but results are buffered per trial and reduced in trial order,
//! so a sweep is a pure function of its spec: identical specs give
//! byte-identical CSV.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::channel::{sample_channel_set, trial_rng, ChannelParams};
use crate::error::{Error, Result};
use crate::exec;
use crate::optimizer::{
    solve_default, solve_fixed_phase, PhaseMode, Scheme, Solution, Strategy,
};
use crate::snr::SystemParams;

/// Which scalar the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    PA,
    PE,
    GammaThP,
    Lambda,
    Gamma,
    Beta,
    Tau,
    Theta,
    DeltaPhi,
    PhiAFixed,
}

impl SweptParameter {
    pub fn key(&self) -> &'static str {
        match self {
            SweptParameter::PA => "p_a",
            SweptParameter::PE => "p_e",
            SweptParameter::GammaThP => "gamma_th_p",
            SweptParameter::Lambda => "lambda",
            SweptParameter::Gamma => "gamma_refl",
            SweptParameter::Beta => "beta",
            SweptParameter::Tau => "tau",
            SweptParameter::Theta => "theta",
            SweptParameter::DeltaPhi => "delta_phi",
            SweptParameter::PhiAFixed => "phi_a_fixed",
        }
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Identifier used for file naming and metadata.
    pub name: String,
    pub swept: SweptParameter,
    /// Swept values, ascending.
    pub values: Vec<f64>,
    /// Strategies paired with the eavesdropper antenna mode to use.
    pub strategies: Vec<(Strategy, u8)>,
    pub trials: u64,
    pub master_seed: u64,
    pub base_params: SystemParams,
    pub channel_params: ChannelParams,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one value".into()));
        }
        if self.values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("sweep values must be sorted".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("sweep needs at least one trial".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one strategy".into()));
        }
        self.channel_params.validate()?;
        for &(strategy, alpha) in &self.strategies {
            strategy.validate()?;
            for &v in &self.values {
                self.resolve(v, &strategy, alpha)?.0.validate()?;
            }
        }
        Ok(())
    }

    /// Applies one swept value and strategy to the base parameters. Returns
    /// the resolved parameters, the strategy to run (its phase grid may come
    /// from the swept value) and, for fixed-phase sweeps, the phase.
    fn resolve(&self, value: f64, strategy: &Strategy, alpha: u8) -> Result<(SystemParams, Strategy, Option<f64>)> {
        let mut p = self.base_params;
        p.alpha = alpha;
        let mut s = *strategy;
        let mut fixed_phase = None;
        match self.swept {
            SweptParameter::PA => p.p_a = value,
            SweptParameter::PE => p.p_e = value,
            SweptParameter::GammaThP => p.gamma_th_p = value,
            SweptParameter::Lambda => p.lambda = value,
            SweptParameter::Gamma => p.gamma_refl = value,
            SweptParameter::Beta => p.beta = value,
            SweptParameter::Tau => p.tau = value,
            SweptParameter::Theta => p.theta = value,
            SweptParameter::DeltaPhi => {
                if let PhaseMode::Discrete { .. } = s.phase_mode {
                    s.phase_mode = PhaseMode::Discrete { delta_phi: value };
                }
            }
            SweptParameter::PhiAFixed => fixed_phase = Some(value),
        }
        Ok((p, s, fixed_phase))
    }
}

/// One averaged point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter_value: f64,
    pub strategy_label: String,
    /// Mean secrecy throughput over all trials; infeasible trials count 0.
    pub mean_r_s: f64,
    /// Mean optimum data-signal power `m*^2` over feasible trials, watts.
    pub mean_signal_power: f64,
    /// Mean `m*^2 / p_e` for attack-power sweeps, `m*^2 / p_a` otherwise,
    /// over feasible trials.
    pub mean_power_ratio: f64,
    pub infeasible_fraction: f64,
    pub trials: u64,
}

fn run_one(
    p: &SystemParams,
    s: &Strategy,
    fixed_phase: Option<f64>,
    ch: &crate::channel::ChannelSet,
) -> Solution {
    let sol = match fixed_phase {
        Some(phi) => solve_fixed_phase(ch, p, phi),
        None => solve_default(ch, p, s),
    };
    sol.expect("sweep spec was validated")
}

/// Runs a sweep. Row order is (value, strategy), values outermost.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let combos: Vec<(f64, Strategy, u8)> = spec
        .values
        .iter()
        .flat_map(|&v| spec.strategies.iter().map(move |&(s, a)| (v, s, a)))
        .collect();

    // One buffered record per (trial, combo); reduced sequentially below.
    let per_trial: Vec<Vec<(f64, f64, bool)>> = exec::map_indexed(spec.trials, |trial| {
        let mut rng = trial_rng(spec.master_seed, trial);
        let ch = sample_channel_set(&spec.channel_params, &mut rng).expect("validated params");
        combos
            .iter()
            .map(|&(v, s, a)| {
                let (p, s, fixed) = spec.resolve(v, &s, a).expect("validated spec");
                let sol = run_one(&p, &s, fixed, &ch);
                (sol.r_s, sol.m_star * sol.m_star, sol.feasible)
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(combos.len());
    for (ci, &(v, s, a)) in combos.iter().enumerate() {
        let mut sum_rs = 0.0;
        let mut sum_m2 = 0.0;
        let mut feasible = 0u64;
        for trial in per_trial.iter() {
            let (r_s, m2, feas) = trial[ci];
            sum_rs += r_s;
            if feas {
                sum_m2 += m2;
                feasible += 1;
            }
        }
        let (p_resolved, _, _) = spec.resolve(v, &s, a)?;
        let ratio_denom = match spec.swept {
            SweptParameter::PE => p_resolved.p_e,
            _ => p_resolved.p_a,
        };
        let mean_m2 = if feasible > 0 { sum_m2 / feasible as f64 } else { 0.0 };
        rows.push(SweepRow {
            parameter_value: v,
            strategy_label: s.label(a),
            mean_r_s: sum_rs / spec.trials as f64,
            mean_signal_power: mean_m2,
            mean_power_ratio: if ratio_denom > 0.0 { mean_m2 / ratio_denom } else { 0.0 },
            infeasible_fraction: (spec.trials - feasible) as f64 / spec.trials as f64,
            trials: spec.trials,
        });
    }
    Ok(rows)
}

/// CSV rendering with a fixed header; floats use Rust's shortest
/// round-trip formatting so identical runs are byte-identical.
pub fn render_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "param,strategy,mean_rs,mean_signal_power,mean_power_ratio,infeasible_frac,trials,seed\n",
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.parameter_value,
            r.strategy_label,
            r.mean_r_s,
            r.mean_signal_power,
            r.mean_power_ratio,
            r.infeasible_fraction,
            r.trials,
            spec.master_seed
        )
        .expect("string write");
    }
    out
}

/// Sidecar metadata: the fully resolved spec plus bookkeeping notes.
pub fn render_metadata(spec: &SweepSpec, extra: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "spec": spec,
        "pairing": "one channel block per trial, reused across all values and strategies",
        "ratio": if spec.swept == SweptParameter::PE { "m_star^2 / p_e" } else { "m_star^2 / p_a" },
        "notes": extra,
    })
}

/// The figure presets. `Fig7` expands into three sweeps (one per
/// noise-processing coefficient); every other preset is a single sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8a,
    Fig8b,
}

impl std::str::FromStr for FigurePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(FigurePreset::Fig3),
            "fig4" => Ok(FigurePreset::Fig4),
            "fig5" => Ok(FigurePreset::Fig5),
            "fig6" => Ok(FigurePreset::Fig6),
            "fig7" => Ok(FigurePreset::Fig7),
            "fig8a" => Ok(FigurePreset::Fig8a),
            "fig8b" => Ok(FigurePreset::Fig8b),
            other => Err(Error::InvalidArgument(format!(
                "unknown figure preset {other:?} (expected fig3..fig7, fig8a, fig8b)"
            ))),
        }
    }
}

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_MASTER_SEED: u64 = 42;

fn four_strategies() -> Vec<(Strategy, u8)> {
    vec![
        (Strategy::PS_CONTINUOUS, 1),
        (Strategy::PS_CONTINUOUS, 0),
        (Strategy::AN_BASELINE, 1),
        (Strategy::AN_BASELINE, 0),
    ]
}

fn linspace_inclusive(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn base_spec(name: &str, swept: SweptParameter, values: Vec<f64>, strategies: Vec<(Strategy, u8)>) -> SweepSpec {
    SweepSpec {
        name: name.to_string(),
        swept,
        values,
        strategies,
        trials: DEFAULT_TRIALS,
        master_seed: DEFAULT_MASTER_SEED,
        base_params: SystemParams::default(),
        channel_params: ChannelParams::default(),
    }
}

/// Builds the sweep(s) behind a figure preset.
pub fn figure_preset(preset: FigurePreset) -> Vec<SweepSpec> {
    use std::f64::consts::PI;
    match preset {
        FigurePreset::Fig3 => vec![base_spec(
            "fig3",
            SweptParameter::PA,
            linspace_inclusive(0.1, 2.0, 20),
            four_strategies(),
        )],
        FigurePreset::Fig4 => vec![base_spec(
            "fig4",
            SweptParameter::PE,
            vec![
                0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0,
            ],
            four_strategies(),
        )],
        FigurePreset::Fig5 => vec![base_spec(
            "fig5",
            SweptParameter::GammaThP,
            vec![0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
            four_strategies(),
        )],
        FigurePreset::Fig6 => vec![base_spec(
            "fig6",
            SweptParameter::Lambda,
            linspace_inclusive(0.0, 1.0, 11),
            four_strategies(),
        )],
        FigurePreset::Fig7 => {
            let ps_oa = vec![(Strategy::PS_CONTINUOUS, 1)];
            vec![
                base_spec("fig7_beta", SweptParameter::Beta, linspace_inclusive(0.0, 1.0, 11), ps_oa.clone()),
                base_spec("fig7_tau", SweptParameter::Tau, linspace_inclusive(0.0, 1.0, 11), ps_oa.clone()),
                base_spec("fig7_theta", SweptParameter::Theta, linspace_inclusive(0.0, 1.0, 11), ps_oa),
            ]
        }
        FigurePreset::Fig8a => vec![base_spec(
            "fig8a",
            SweptParameter::DeltaPhi,
            vec![PI / 2.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0, PI, TAU],
            vec![
                (Strategy::ps_discrete(PI / 2.0), 1),
                (Strategy::PS_CONTINUOUS, 1),
            ],
        )],
        FigurePreset::Fig8b => vec![base_spec(
            "fig8b",
            SweptParameter::PhiAFixed,
            (0..72).map(|k| k as f64 * TAU / 72.0).collect(),
            vec![(
                Strategy {
                    scheme: Scheme::Ps,
                    phase_mode: PhaseMode::None,
                },
                1,
            )],
        )],
    }
}

/// For the fixed-phase sweep: maximum over the first half-circle of
/// `|T(phi) - T(phi + pi)|`, the measured deviation from half-period
/// symmetry of the throughput curve. Requires an even value count spanning
/// `[0, 2*pi)` and a single strategy, as the fig8b preset provides.
pub fn half_period_deviation(rows: &[SweepRow]) -> Option<f64> {
    let k = rows.len();
    if k < 2 || k % 2 != 0 {
        return None;
    }
    let half = k / 2;
    let mut worst = 0.0f64;
    for i in 0..half {
        worst = worst.max((rows[i].mean_r_s - rows[i + half].mean_r_s).abs());
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::trial_rng;

    fn tiny_spec() -> SweepSpec {
        SweepSpec {
            trials: 8,
            values: vec![0.5, 1.0, 2.0],
            ..base_spec(
                "test",
                SweptParameter::PE,
                vec![0.5, 1.0, 2.0],
                four_strategies(),
            )
        }
    }

    #[test]
    fn pairing_reuses_the_same_channel_for_all_combos() {
        let mut spec = tiny_spec();
        spec.trials = 1;
        let rows = run_sweep(&spec).unwrap();
        // Recompute by hand from the single shared channel draw.
        let ch = sample_channel_set(&spec.channel_params, &mut trial_rng(spec.master_seed, 0)).unwrap();
        for row in &rows {
            let (strategy, alpha) = spec
                .strategies
                .iter()
                .find(|(s, a)| s.label(*a) == row.strategy_label)
                .copied()
                .unwrap();
            let (p, s, _) = spec.resolve(row.parameter_value, &strategy, alpha).unwrap();
            let sol = solve_default(&ch, &p, &s).unwrap();
            assert_eq!(row.mean_r_s, sol.r_s);
        }
    }

    #[test]
    fn zero_transmit_power_means_zero_throughput() {
        let mut spec = tiny_spec();
        spec.swept = SweptParameter::PA;
        spec.values = vec![0.0];
        let rows = run_sweep(&spec).unwrap();
        for row in rows {
            assert_eq!(row.mean_r_s, 0.0);
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let spec = tiny_spec();
        let a = render_csv(&spec, &run_sweep(&spec).unwrap());
        let b = render_csv(&spec, &run_sweep(&spec).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(
            "param,strategy,mean_rs,mean_signal_power,mean_power_ratio,infeasible_frac,trials,seed\n"
        ));
        assert_eq!(a.lines().count(), 1 + 3 * 4);
    }

    #[test]
    fn ps_dominates_an_in_paired_means() {
        let mut spec = tiny_spec();
        spec.trials = 64;
        let rows = run_sweep(&spec).unwrap();
        for v in &spec.values {
            let find = |label: &str| {
                rows.iter()
                    .find(|r| r.parameter_value == *v && r.strategy_label == label)
                    .unwrap()
                    .mean_r_s
            };
            assert!(find("PS+OA") >= find("AN+OA") - 1e-9);
            assert!(find("PS+DA") >= find("AN+DA") - 1e-9);
        }
    }

    #[test]
    fn single_value_single_trial_gives_single_row_per_strategy() {
        let mut spec = tiny_spec();
        spec.values = vec![1.0];
        spec.strategies = vec![(Strategy::PS_CONTINUOUS, 1)];
        spec.trials = 1;
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = tiny_spec();
        spec.values = vec![2.0, 1.0];
        assert!(spec.validate().is_err());
        let mut spec = tiny_spec();
        spec.trials = 0;
        assert!(spec.validate().is_err());
        let mut spec = tiny_spec();
        spec.swept = SweptParameter::Lambda;
        spec.values = vec![0.5, 2.0]; // lambda > 1 is out of range
        assert!(spec.validate().is_err());
    }

    #[test]
    fn preset_shapes() {
        assert_eq!(figure_preset(FigurePreset::Fig3).len(), 1);
        assert_eq!(figure_preset(FigurePreset::Fig7).len(), 3);
        let fig8a = &figure_preset(FigurePreset::Fig8a)[0];
        assert_eq!(fig8a.values.len(), 5);
        let fig8b = &figure_preset(FigurePreset::Fig8b)[0];
        assert_eq!(fig8b.values.len(), 72);
        assert_eq!("fig3".parse::<FigurePreset>().unwrap(), FigurePreset::Fig3);
        assert!("fig9".parse::<FigurePreset>().is_err());
    }

    #[test]
    fn half_period_deviation_needs_even_grid() {
        let spec = &figure_preset(FigurePreset::Fig8b)[0];
        let mut small = spec.clone();
        small.trials = 4;
        small.values.truncate(8);
        // truncated to 8 points spanning only part of the circle; the measure
        // still computes (it only needs an even count).
        let rows = run_sweep(&small).unwrap();
        assert!(half_period_deviation(&rows).is_some());
        assert!(half_period_deviation(&rows[..3]).is_none());
    }
}
