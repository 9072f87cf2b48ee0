//! Rician block-fading link sampling with deterministic seeding.
//!
//! Every directed link is reduced to an amplitude gain and one aggregate
//! propagation phase: the closed-form SNR expressions never consume anything
//! finer than that pair. A link drawn at distance `d` has
//!
//! ```text
//! h = [sqrt(eta/(eta+1)) * h_los + sqrt(1/(eta+1)) * h_nlos] * sqrt(c0 * (d/d0)^-v)
//! ```
//!
//! with `|h_los| = 1` at a uniform phase and `h_nlos` circularly-symmetric
//! complex Gaussian of unit variance, so `E[|h|^2] = c0 * (d/d0)^-v`.
//!
//! All arithmetic is carried out in linear units (watts, amplitude gains);
//! dB and dBm are converted at the I/O boundary only.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// One directed link: amplitude gain plus aggregate propagation phase.
///
/// The phase folds every per-link delay and phase-shift factor into a single
/// value in `[0, 2*pi)`, sampled uniformly per channel block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    /// Dimensionless amplitude gain, `>= 0`.
    pub magnitude: f64,
    /// Aggregate propagation phase in `[0, 2*pi)` radians.
    pub phase: f64,
}

impl Link {
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        if !(magnitude >= 0.0) || !magnitude.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "link magnitude must be finite and non-negative, got {magnitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "link phase must be finite, got {phase}"
            )));
        }
        Ok(Self {
            magnitude,
            phase: wrap_phase(phase),
        })
    }

    /// Builds a link from a complex channel coefficient.
    pub fn from_complex(h: Complex64) -> Self {
        Self {
            magnitude: h.norm(),
            phase: wrap_phase(h.arg()),
        }
    }
}

/// Normalizes an angle into `[0, 2*pi)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi % TAU;
    if p < 0.0 {
        p += TAU;
    }
    // `% TAU` can round to exactly TAU for inputs just below a multiple of it.
    if p >= TAU {
        p = 0.0;
    }
    p
}

/// The nine directed links among the access point A, primary receiver P,
/// backscatter tag S and eavesdropper E. Field `x_y` is the link from X to Y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet {
    pub a_p: Link,
    pub a_s: Link,
    pub s_a: Link,
    pub s_p: Link,
    pub e_p: Link,
    pub e_s: Link,
    pub s_e: Link,
    pub e_a: Link,
    pub a_e: Link,
}

/// Fading and geometry parameters for channel sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Rician factor (ratio of line-of-sight to scattered power), `>= 0`.
    pub eta: f64,
    /// Linear power gain at the reference distance, `> 0`.
    pub c0: f64,
    /// Reference distance in meters, `> 0`.
    pub d0: f64,
    /// Path-loss exponent, `>= 0`.
    pub v: f64,
    /// Lower bound of the uniform device-distance range, meters.
    pub dmin: f64,
    /// Upper bound of the uniform device-distance range, meters.
    pub dmax: f64,
    /// When true, the A<->S pair shares one fading draw in both directions.
    pub reciprocal: bool,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.eta >= 0.0
            && self.c0 > 0.0
            && self.d0 > 0.0
            && self.v >= 0.0
            && self.dmin > 0.0
            && self.dmin <= self.dmax;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "channel parameters out of range: {self:?}"
            )))
        }
    }
}

impl Default for ChannelParams {
    /// Simulation defaults: eta = 3, c0 = -20 dB, d0 = 1 m, v = 3,
    /// distances uniform on [1, 8] m, independent directed links.
    fn default() -> Self {
        Self {
            eta: 3.0,
            c0: 0.01,
            d0: 1.0,
            v: 3.0,
            dmin: 1.0,
            dmax: 8.0,
            reciprocal: false,
        }
    }
}

/// Converts a dB value to a linear gain, or a dBm value to watts.
pub fn db_to_linear(x_db: f64, is_dbm: bool) -> Result<f64> {
    if !x_db.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "dB value must be finite, got {x_db}"
        )));
    }
    let lin = 10f64.powf(x_db / 10.0);
    Ok(if is_dbm { lin / 1000.0 } else { lin })
}

/// Deterministic per-trial generator: one independent ChaCha stream per
/// `(master_seed, trial)` pair, stable across platforms and thread counts.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Draws one Rician-faded link at distance `d`.
pub fn sample_link<R: Rng + ?Sized>(d: f64, params: &ChannelParams, rng: &mut R) -> Result<Link> {
    if !(d > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "link distance must be positive, got {d}"
        )));
    }
    params.validate()?;
    // Weight forms stay finite for eta = 0 and eta -> inf.
    let w_los = (1.0 + 1.0 / params.eta).recip().sqrt();
    let w_nlos = (1.0 + params.eta).recip().sqrt();

    let los_phase = rng.random::<f64>() * TAU;
    let los = Complex64::from_polar(1.0, los_phase);
    let g_re: f64 = rng.sample(StandardNormal);
    let g_im: f64 = rng.sample(StandardNormal);
    // Unit-variance circularly-symmetric Gaussian.
    let nlos = Complex64::new(g_re, g_im) * std::f64::consts::FRAC_1_SQRT_2;

    let path = (params.c0 * (d / params.d0).powf(-params.v)).sqrt();
    Ok(Link::from_complex((w_los * los + w_nlos * nlos) * path))
}

/// Draws a full channel block: one distance per device pair, then one fading
/// realization per directed link (shared for A<->S when `reciprocal` is set).
pub fn sample_channel_set<R: Rng + ?Sized>(
    params: &ChannelParams,
    rng: &mut R,
) -> Result<ChannelSet> {
    params.validate()?;
    let dist = |rng: &mut R| params.dmin + (params.dmax - params.dmin) * rng.random::<f64>();

    // Fixed draw order; determinism depends on it.
    let d_ap = dist(rng);
    let d_as = dist(rng);
    let d_sp = dist(rng);
    let d_ep = dist(rng);
    let d_es = dist(rng);
    let d_ae = dist(rng);

    let a_p = sample_link(d_ap, params, rng)?;
    let a_s = sample_link(d_as, params, rng)?;
    let s_a = if params.reciprocal {
        a_s
    } else {
        sample_link(d_as, params, rng)?
    };
    let s_p = sample_link(d_sp, params, rng)?;
    let e_p = sample_link(d_ep, params, rng)?;
    let e_s = sample_link(d_es, params, rng)?;
    let s_e = sample_link(d_es, params, rng)?;
    let e_a = sample_link(d_ae, params, rng)?;
    let a_e = sample_link(d_ae, params, rng)?;

    Ok(ChannelSet {
        a_p,
        a_s,
        s_a,
        s_p,
        e_p,
        e_s,
        s_e,
        e_a,
        a_e,
    })
}
