//! Secrecy-throughput modeling for a full-duplex symbiotic-radio link under
//! a proactive eavesdropper.
//!
//! The access point rides an artificial-noise replica of the eavesdropper's
//! own attack signal on top of its data transmission; phase control lets the
//! replica cancel at the primary receiver while pseudo-decoding converts part
//! of the noise budget back into useful signal on the backscatter loop. This
//! crate provides:
//!
//! - [`channel`]: seeded Rician block-fading link sampling;
//! - [`snr`]: the closed-form receiver SNRs and the secrecy rate;
//! - [`optimizer`]: feasible-region computation, stationary-point power
//!   allocation, continuous/discrete phase control and the alternating solve;
//! - [`oracle`]: independent complex-phasor reconstruction and exhaustive
//!   grid search used to audit the analytic path;
//! - [`experiments`]: paired Monte Carlo sweeps with CSV output and the
//!   figure presets.
//!
//! Heavy loops run data-parallel through rayon when the default `parallel`
//! feature is enabled and sequentially otherwise; outputs are identical
//! either way.

pub mod channel;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod optimizer;
pub mod oracle;
pub mod snr;

pub use channel::{
    db_to_linear, sample_channel_set, sample_link, trial_rng, ChannelParams, ChannelSet, Link,
};
pub use error::{Error, Result};
pub use experiments::{
    figure_preset, half_period_deviation, render_csv, render_metadata, run_sweep, FigurePreset,
    SweepRow, SweepSpec, SweptParameter,
};
pub use optimizer::{
    feasible_m_interval, optimal_phase_continuous, optimal_phase_discrete, optimize_m, rate_ratio,
    solve, solve_default, solve_fixed_phase, stationary_candidates, CaseLabel, Interval,
    PhaseMode, PowerSearch, Scheme, Solution, StationaryCandidates, Strategy,
};
pub use oracle::{grid_search, phasor_snr, GridSpec};
pub use snr::{
    compute_terms, gamma_a, gamma_e, gamma_p, gamma_p_denominator, security_rate, SnrTerms,
    SystemParams,
};
