//! Closed-form SNR terms for the full-duplex symbiotic-radio security model.
//!
//! Given a channel block and the scalar system parameters, [`compute_terms`]
//! evaluates every coherent-path power and cancellation constant that the
//! three receiver SNRs are built from. The SNRs themselves are rational
//! functions of the power-allocation amplitudes `m` (data) and `n` (artificial
//! noise), tied together by the transmit budget `m^2 + n^2 * sigma2_n = p_a`:
//!
//! ```text
//! gamma_p = m^2 T^2 / [(U^2 + G^2) + n^2 (V^2 + J^2) - 2 n U V cos(phi_a + phi1)]
//! gamma_a = (M^ + Q^ m^2) / (L + R m^2)
//! gamma_e = (A^ + B^ m^2) / (C + D m^2)
//! ```
//!
//! The `-2nUV cos(phi_a + phi1)` term is the forward-suppression interaction
//! between the eavesdropper's direct attack signal and its replica forwarded
//! inside the artificial noise; the conventional-AN baseline zeroes exactly
//! this term (independent noise cannot cancel anything) via
//! [`SnrTerms::without_cross_term`].

use serde::{Deserialize, Serialize};

use crate::channel::{wrap_phase, ChannelSet};
use crate::error::{Error, Result};

/// Scalar model parameters. Powers in watts, phases in radians; the
/// dimensionless coefficients live in `[0, 1]` as documented per field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Transmit power budget of the access point, watts.
    pub p_a: f64,
    /// Attack power of the proactive eavesdropper, watts.
    pub p_e: f64,
    /// Antenna-noise variance at the access point, watts.
    pub sigma2_a: f64,
    /// Antenna-noise variance at the primary receiver, watts.
    pub sigma2_p: f64,
    /// Antenna-noise variance at the eavesdropper, watts.
    pub sigma2_e: f64,
    /// Backscatter reflection coefficient, `[0, 1]`.
    pub gamma_refl: f64,
    /// Phase shift of the tag circuit, radians.
    pub phi_s: f64,
    /// Pseudo-decoding approximation level, `[0, 1]`.
    pub theta: f64,
    /// Residual coefficient of the forwarded-noise self-interference, `[0, 1]`.
    pub beta: f64,
    /// Residual coefficient of the attack signal at the access point, `[0, 1]`.
    pub tau: f64,
    /// Eavesdropper antenna mode: 1 omnidirectional, 0 directional.
    pub alpha: u8,
    /// Eavesdropper's ability to decode or cancel the data signal, `[0, 1]`.
    pub lambda: f64,
    /// Equivalent antenna gain on the E-P link.
    pub kappa1: f64,
    /// Equivalent antenna gain on the S-P link.
    pub kappa2: f64,
    /// Equivalent antenna gain on the A-P link.
    pub kappa3: f64,
    /// Primary-receiver SNR threshold (linear), `>= 0`.
    pub gamma_th_p: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        let ok = self.p_a >= 0.0
            && self.p_e >= 0.0
            && self.sigma2_a > 0.0
            && self.sigma2_p > 0.0
            && self.sigma2_e >= 0.0
            && unit(self.gamma_refl)
            && self.phi_s.is_finite()
            && unit(self.theta)
            && unit(self.beta)
            && unit(self.tau)
            && (self.alpha == 0 || self.alpha == 1)
            && unit(self.lambda)
            && self.kappa1 >= 0.0
            && self.kappa2 >= 0.0
            && self.kappa3 >= 0.0
            && self.gamma_th_p >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "system parameters out of range: {self:?}"
            )))
        }
    }
}

impl Default for SystemParams {
    /// Simulation defaults: 2 W budgets on both sides, -80 dBm noise floors,
    /// reflection coefficient 0.7, unit antenna gains, SNR threshold 10,
    /// worst-case eavesdropper (omnidirectional, lambda = 1), and midpoint
    /// noise-processing coefficients theta = beta = tau = 0.5.
    fn default() -> Self {
        Self {
            p_a: 2.0,
            p_e: 2.0,
            sigma2_a: 1e-11,
            sigma2_p: 1e-11,
            sigma2_e: 1e-11,
            gamma_refl: 0.7,
            phi_s: 0.0,
            theta: 0.5,
            beta: 0.5,
            tau: 0.5,
            alpha: 1,
            lambda: 1.0,
            kappa1: 1.0,
            kappa2: 1.0,
            kappa3: 1.0,
            gamma_th_p: 10.0,
        }
    }
}

/// The closed-form quantities feeding the three SNRs.
///
/// `r_term` and `d_den` are the non-positive cancellation slopes; the
/// aggregates satisfy `m_agg = m_hat + l_term`, `q_agg = q_hat + r_term`,
/// `a_agg = a_hat + c_den`, `b_agg = b_hat + d_den`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrTerms {
    pub t2: f64,
    pub u2: f64,
    pub v2: f64,
    pub j2: f64,
    pub g2: f64,
    pub phi1: f64,
    pub m_hat: f64,
    pub q_hat: f64,
    pub l_term: f64,
    pub r_term: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_den: f64,
    pub d_den: f64,
    pub m_agg: f64,
    pub q_agg: f64,
    pub a_agg: f64,
    pub b_agg: f64,
    /// Total artificial-noise source power `h_ea^2 * p_e + sigma2_a`, watts.
    pub sigma2_n: f64,
    /// Transmit budget carried along for the budget coupling `n^2 = (p_a - m^2)/sigma2_n`.
    pub p_a: f64,
    /// Amplitude product `U * V` of the forward-suppression cross term.
    pub uv: f64,
    /// 1 for the coherent forward-suppression scheme, 0 for the conventional
    /// AN baseline. Scales the `-2nUV cos` term and the linear term of the
    /// feasibility quadratic.
    pub cross_scale: f64,
    /// `l_term` without its budget-coupled share: `tau`-residual attack power
    /// plus the antenna noise floor. `l_term + r_term m^2` is evaluated as
    /// `l_base + an_residual (p_a - m^2)`, which cannot cancel.
    pub l_base: f64,
    /// Residual forwarded-noise slope `beta (1-theta) (h_sa h_as Gamma)^2`,
    /// so `r_term = -an_residual`.
    pub an_residual: f64,
    /// Coherent power of the access point's transmission at the eavesdropper;
    /// `c_den + d_den m^2` is evaluated as
    /// `sigma2_e + eav_bracket (p_a - lambda^2 m^2)`.
    pub eav_bracket: f64,
    /// Squared decode/cancel factor.
    pub lambda2: f64,
    /// Eavesdropper noise floor, watts.
    pub sigma2_e: f64,
}

impl SnrTerms {
    /// Returns a copy with the forward-suppression cross term disabled, the
    /// conventional-AN reading of the same closed forms.
    pub fn without_cross_term(mut self) -> Self {
        self.cross_scale = 0.0;
        self
    }
}

/// Power of the coherent sum of two paths with amplitudes `a`, `b` and phase
/// difference `delta`: `a^2 + b^2 + 2 a b cos(delta)`, evaluated in the
/// cancellation-stable form `(a + b cos delta)^2 + (b sin delta)^2`.
fn coherent_power(a: f64, b: f64, delta: f64) -> f64 {
    let re = a + b * delta.cos();
    let im = b * delta.sin();
    re * re + im * im
}

/// Evaluates every closed-form term for one channel block.
pub fn compute_terms(ch: &ChannelSet, p: &SystemParams) -> Result<SnrTerms> {
    p.validate()?;
    let gc = p.gamma_refl; // the tag's baseband signal is unit power

    // Two-hop path amplitudes seen at the primary receiver.
    let asp = p.kappa2 * ch.s_p.magnitude * gc * ch.a_s.magnitude;
    let ap = p.kappa3 * ch.a_p.magnitude;
    let esp = p.kappa2 * ch.s_p.magnitude * gc * ch.e_s.magnitude;
    let ep = p.kappa1 * ch.e_p.magnitude;

    // Aggregate path phases (tag circuit shift enters with opposite sign to
    // the propagation phases, matching the cancellation constants below).
    let psi_asp = ch.s_p.phase - p.phi_s + ch.a_s.phase;
    let psi_ap = ch.a_p.phase;
    let psi_esp = ch.s_p.phase + ch.e_s.phase - p.phi_s;
    let psi_ep = ch.e_p.phase;

    let data_bracket = coherent_power(ap, asp, psi_asp - psi_ap);
    let t2 = data_bracket;
    let u2 = p.p_e * coherent_power(ep, esp, psi_ep - psi_esp);
    let v2 = ch.e_a.magnitude.powi(2) * p.p_e * data_bracket;
    let j2 = p.sigma2_a * (ap * ap + asp * asp);
    let g2 = p.sigma2_p;

    // Four-quadrant cancellation phase: angle of the direct attack aggregate
    // minus angle of the forwarded-replica aggregate.
    let phi_ea = ch.e_a.phase;
    let phi1 = f64::atan2(
        ep * psi_ep.sin() + esp * psi_esp.sin(),
        ep * psi_ep.cos() + esp * psi_esp.cos(),
    ) - f64::atan2(
        asp * (psi_asp + phi_ea).sin() + ap * (psi_ap + phi_ea).sin(),
        asp * (psi_asp + phi_ea).cos() + ap * (psi_ap + phi_ea).cos(),
    );
    let phi1 = wrap_phase(phi1);

    // Access-point side: the tag loop carries the mask-encrypted carrier.
    let loop2 = (ch.s_a.magnitude * ch.a_s.magnitude * gc).powi(2);
    let m_hat = p.p_a * p.theta * loop2;
    let q_hat = (1.0 - p.theta) * loop2;
    let esa = ch.s_a.magnitude * gc * ch.e_s.magnitude;
    let delta_l = ch.s_a.phase + ch.e_s.phase - p.phi_s + ch.e_a.phase;
    let l_term = p.tau * p.p_e * coherent_power(ch.e_a.magnitude, esa, delta_l)
        + p.beta * p.p_a * (1.0 - p.theta) * loop2
        + p.sigma2_a;
    let r_term = -p.beta * (1.0 - p.theta) * loop2;

    // Eavesdropper side.
    let alpha = f64::from(p.alpha);
    let ese = ch.s_e.magnitude * gc * ch.e_s.magnitude;
    let ase = ch.a_s.magnitude * gc * ch.s_e.magnitude;
    let a_hat = ese * ese * p.p_e;
    let b_hat = (alpha * p.lambda * ase).powi(2);
    let delta_c = ch.s_e.phase - p.phi_s + ch.a_s.phase - ch.a_e.phase;
    let eav_bracket = coherent_power(alpha * ch.a_e.magnitude, ase, delta_c);
    let c_den = p.p_a * eav_bracket + p.sigma2_e;
    let d_den = -p.lambda * p.lambda * eav_bracket;

    Ok(SnrTerms {
        t2,
        u2,
        v2,
        j2,
        g2,
        phi1,
        m_hat,
        q_hat,
        l_term,
        r_term,
        a_hat,
        b_hat,
        c_den,
        d_den,
        m_agg: m_hat + l_term,
        q_agg: q_hat + r_term,
        a_agg: a_hat + c_den,
        b_agg: b_hat + d_den,
        sigma2_n: ch.e_a.magnitude.powi(2) * p.p_e + p.sigma2_a,
        p_a: p.p_a,
        uv: (u2 * v2).sqrt(),
        cross_scale: 1.0,
        l_base: p.tau * p.p_e * coherent_power(ch.e_a.magnitude, esa, delta_l) + p.sigma2_a,
        an_residual: p.beta * (1.0 - p.theta) * loop2,
        eav_bracket,
        lambda2: p.lambda * p.lambda,
        sigma2_e: p.sigma2_e,
    })
}

/// SNR at the primary receiver for allocation `(m, n)` and control phase
/// `phi_a`.
pub fn gamma_p(t: &SnrTerms, m: f64, n: f64, phi_a: f64) -> Result<f64> {
    let denom = gamma_p_denominator(t, n, phi_a);
    if denom <= 0.0 {
        return Err(Error::ModelViolation(format!(
            "non-positive primary interference power {denom}"
        )));
    }
    Ok(m * m * t.t2 / denom)
}

/// Interference-plus-noise power in the primary SNR denominator.
pub fn gamma_p_denominator(t: &SnrTerms, n: f64, phi_a: f64) -> f64 {
    (t.u2 + t.g2) + n * n * (t.v2 + t.j2)
        - 2.0 * n * t.uv * t.cross_scale * (phi_a + t.phi1).cos()
}

/// SNR at the access point; depends on the allocation only through `m^2`.
pub fn gamma_a(t: &SnrTerms, m: f64) -> Result<f64> {
    let denom = t.l_base + t.an_residual * (t.p_a - m * m);
    if denom <= 0.0 {
        return Err(Error::ModelViolation(format!(
            "non-positive access-point interference power {denom}"
        )));
    }
    Ok((t.m_hat + t.q_hat * m * m) / denom)
}

/// SNR at the eavesdropper. A non-positive denominator (perfect decoding,
/// zero noise floor, full data power) means the eavesdropping SNR diverges;
/// callers treat that candidate as zero secrecy.
pub fn gamma_e(t: &SnrTerms, m: f64) -> Result<f64> {
    let denom = t.sigma2_e + t.eav_bracket * (t.p_a - t.lambda2 * m * m);
    if denom <= 0.0 {
        return Err(Error::ModelViolation(format!(
            "non-positive eavesdropper interference power {denom}"
        )));
    }
    Ok((t.a_hat + t.b_hat * m * m) / denom)
}

/// Secrecy rate `max(0, log2(1 + g_a) - log2(1 + g_e))` in bits/s/Hz.
pub fn security_rate(g_a: f64, g_e: f64) -> f64 {
    let r = (g_a.ln_1p() - g_e.ln_1p()) / std::f64::consts::LN_2;
    r.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channel_set, trial_rng, ChannelParams, Link};

    fn random_setup(trial: u64) -> (ChannelSet, SystemParams) {
        let ch = sample_channel_set(&ChannelParams::default(), &mut trial_rng(314, trial)).unwrap();
        (ch, SystemParams::default())
    }

    #[test]
    fn zero_kappa2_collapses_t2_to_direct_path() {
        let (ch, mut p) = random_setup(0);
        p.kappa2 = 0.0;
        let t = compute_terms(&ch, &p).unwrap();
        let expected = (p.kappa3 * ch.a_p.magnitude).powi(2);
        assert_eq!(t.t2, expected);
    }

    #[test]
    fn aligned_cosine_makes_t2_a_perfect_square() {
        let (mut ch, p) = random_setup(1);
        // Zero the cosine argument: phi_sp - phi_s + phi_as - phi_ap = 0.
        ch.s_p = Link::new(ch.s_p.magnitude, 0.0).unwrap();
        ch.a_s = Link::new(ch.a_s.magnitude, 0.0).unwrap();
        ch.a_p = Link::new(ch.a_p.magnitude, 0.0).unwrap();
        let mut p0 = p;
        p0.phi_s = 0.0;
        let t = compute_terms(&ch, &p0).unwrap();
        let a = p0.kappa2 * ch.s_p.magnitude * p0.gamma_refl * ch.a_s.magnitude;
        let b = p0.kappa3 * ch.a_p.magnitude;
        assert!((t.t2 - (a + b).powi(2)).abs() < 1e-15 * (a + b).powi(2));
    }

    #[test]
    fn zero_attack_power_clears_attack_terms() {
        let (ch, mut p) = random_setup(2);
        p.p_e = 0.0;
        let t = compute_terms(&ch, &p).unwrap();
        assert_eq!(t.u2, 0.0);
        assert_eq!(t.v2, 0.0);
        assert_eq!(t.a_hat, 0.0);
        assert_eq!(t.sigma2_n, p.sigma2_a);
        let loop2 = (ch.s_a.magnitude * ch.a_s.magnitude * p.gamma_refl).powi(2);
        let expected_l = p.beta * p.p_a * (1.0 - p.theta) * loop2 + p.sigma2_a;
        assert!((t.l_term - expected_l).abs() <= 1e-15 * expected_l);
    }

    #[test]
    fn gamma_p_limit_cases() {
        let (ch, p) = random_setup(3);
        let t = compute_terms(&ch, &p).unwrap();
        let g0 = gamma_p(&t, 1.0, 0.0, 0.3).unwrap();
        assert!((g0 - t.t2 / (t.u2 + t.g2)).abs() < 1e-15 * g0);
        assert_eq!(gamma_p(&t, 0.0, 0.5, 0.3).unwrap(), 0.0);
        // Aligned cross term beats the anti-aligned one.
        let n = 0.4 * (p.p_a / t.sigma2_n).sqrt();
        let m = (p.p_a - n * n * t.sigma2_n).sqrt();
        let best = gamma_p(&t, m, n, -t.phi1).unwrap();
        let worst = gamma_p(&t, m, n, std::f64::consts::PI - t.phi1).unwrap();
        assert!(best >= worst);
    }

    #[test]
    fn gamma_p_increasing_in_m_and_maximized_at_minus_phi1() {
        for trial in 0..50 {
            let (ch, p) = random_setup(100 + trial);
            let t = compute_terms(&ch, &p).unwrap();
            let n = 0.3 * (p.p_a / t.sigma2_n).sqrt();
            let g1 = gamma_p(&t, 0.5, n, 1.0).unwrap();
            let g2 = gamma_p(&t, 0.7, n, 1.0).unwrap();
            assert!(g2 > g1);
            let at_opt = gamma_p(&t, 1.0, n, -t.phi1).unwrap();
            for k in 0..64 {
                let phi = k as f64 * std::f64::consts::TAU / 64.0;
                assert!(gamma_p(&t, 1.0, n, phi).unwrap() <= at_opt * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn theta_one_makes_gamma_a_flat_in_m() {
        let (ch, mut p) = random_setup(4);
        p.theta = 1.0;
        let t = compute_terms(&ch, &p).unwrap();
        assert_eq!(t.r_term, 0.0);
        let g1 = gamma_a(&t, 0.0).unwrap();
        let g2 = gamma_a(&t, (p.p_a).sqrt()).unwrap();
        assert!((g1 - g2).abs() <= 1e-12 * g1);
    }

    #[test]
    fn theta_zero_and_zero_m_kill_gamma_a() {
        let (ch, mut p) = random_setup(5);
        p.theta = 0.0;
        let t = compute_terms(&ch, &p).unwrap();
        assert_eq!(gamma_a(&t, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn directional_antenna_zeroes_b_hat() {
        let (ch, mut p) = random_setup(6);
        p.alpha = 0;
        let t = compute_terms(&ch, &p).unwrap();
        assert_eq!(t.b_hat, 0.0);
        let m = 0.5;
        let expected = t.a_hat / (t.c_den + t.d_den * m * m);
        let got = gamma_e(&t, m).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn perfect_eavesdropper_at_full_power_is_a_model_violation() {
        let (ch, mut p) = random_setup(7);
        p.lambda = 1.0;
        p.sigma2_e = 0.0;
        p.alpha = 1;
        let t = compute_terms(&ch, &p).unwrap();
        assert!(gamma_e(&t, p.p_a.sqrt()).is_err());
    }

    #[test]
    fn security_rate_examples() {
        assert_eq!(security_rate(1.5, 1.5), 0.0);
        assert!((security_rate(3.0, 0.0) - 2.0).abs() < 1e-15);
        assert_eq!(security_rate(0.0, 7.0), 0.0);
    }

    #[test]
    fn sign_invariants_hold_on_random_instances() {
        for trial in 0..200 {
            let (ch, p) = random_setup(1000 + trial);
            let t = compute_terms(&ch, &p).unwrap();
            assert!(t.t2 >= 0.0 && t.u2 >= 0.0 && t.v2 >= 0.0 && t.j2 >= 0.0);
            assert!(t.g2 >= 0.0 && t.sigma2_n >= 0.0);
            assert!(t.m_hat >= 0.0 && t.q_hat >= 0.0 && t.a_hat >= 0.0 && t.b_hat >= 0.0);
            assert!(t.r_term <= 0.0 && t.d_den <= 0.0);
            // Cross-term magnitude never exceeds U^2 + n^2 V^2.
            for n in [0.0, 0.3, 1.0, 17.0] {
                assert!(2.0 * n * t.uv <= t.u2 + n * n * t.v2 + 1e-15);
            }
        }
    }

    #[test]
    fn phi1_invariant_under_joint_scaling_of_arctan_magnitudes() {
        // Scaling both terms of one arctan argument leaves phi1 unchanged:
        // {h_ep, h_es} scales the attack aggregate, {h_ap, h_as} the replica
        // aggregate. (h_as also enters the second aggregate: scale it alone
        // with h_ap so both of that aggregate's terms scale together.)
        for trial in 0..50 {
            let (ch, p) = random_setup(2000 + trial);
            let base = compute_terms(&ch, &p).unwrap().phi1;
            for s in [0.25, 4.0] {
                let mut scaled = ch;
                scaled.e_p = Link::new(ch.e_p.magnitude * s, ch.e_p.phase).unwrap();
                scaled.e_s = Link::new(ch.e_s.magnitude * s, ch.e_s.phase).unwrap();
                let up = compute_terms(&scaled, &p).unwrap().phi1;
                assert!((up - base).abs() < 1e-12, "attack-side scale changed phi1");

                let mut scaled = ch;
                scaled.a_p = Link::new(ch.a_p.magnitude * s, ch.a_p.phase).unwrap();
                scaled.a_s = Link::new(ch.a_s.magnitude * s, ch.a_s.phase).unwrap();
                let down = compute_terms(&scaled, &p).unwrap().phi1;
                assert!((down - base).abs() < 1e-12, "replica-side scale changed phi1");
            }
        }
    }

    #[test]
    fn cross_term_disable_matches_manual_denominator() {
        let (ch, p) = random_setup(8);
        let t = compute_terms(&ch, &p).unwrap();
        let an = t.without_cross_term();
        let n = 0.2 * (p.p_a / t.sigma2_n).sqrt();
        let d = gamma_p_denominator(&an, n, 1.234);
        assert_eq!(d, (t.u2 + t.g2) + n * n * (t.v2 + t.j2));
    }
}
