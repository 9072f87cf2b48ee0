//! Power allocation and phase control for the secrecy-throughput problem.
//!
//! The problem decomposes cleanly: the secrecy objective depends on the data
//! amplitude `m` alone, while the control phase `phi_a` only moves the
//! primary-receiver constraint. Power optimization therefore reduces to a
//! one-dimensional search over the feasible `m` interval plus the stationary
//! points of a rational objective (a quadratic in `u = m^2`), and phase
//! control reduces to maximizing `cos(phi_a + phi1)` — exactly `phi_a = -phi1`
//! when the phase is continuous, or its nearest grid neighbors when discrete.
//! The alternating loop glues the two, recording a nondecreasing objective
//! trace.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::channel::{wrap_phase, ChannelSet};
use crate::error::{Error, Result};
use crate::snr::{
    compute_terms, gamma_a, gamma_e, gamma_p, gamma_p_denominator, security_rate, SnrTerms,
    SystemParams,
};

pub const DEFAULT_DELTA: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 20;

/// Transmission scheme: the proposed strategy or the conventional
/// artificial-noise baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    Ps,
    An,
}

/// Phase-control capability at the access point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseMode {
    /// Continuously adjustable phase.
    Continuous,
    /// Phase restricted to the grid `{k * delta : k >= 0, k * delta < 2*pi}`.
    Discrete { delta_phi: f64 },
    /// No phase optimization (phase fixed at zero).
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub scheme: Scheme,
    pub phase_mode: PhaseMode,
}

impl Strategy {
    pub const PS_CONTINUOUS: Strategy = Strategy {
        scheme: Scheme::Ps,
        phase_mode: PhaseMode::Continuous,
    };
    pub const AN_BASELINE: Strategy = Strategy {
        scheme: Scheme::An,
        phase_mode: PhaseMode::None,
    };

    pub fn ps_discrete(delta_phi: f64) -> Strategy {
        Strategy {
            scheme: Scheme::Ps,
            phase_mode: PhaseMode::Discrete { delta_phi },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let PhaseMode::Discrete { delta_phi } = self.phase_mode {
            if !(delta_phi > 0.0 && delta_phi <= TAU) {
                return Err(Error::InvalidArgument(format!(
                    "discrete phase step must lie in (0, 2*pi], got {delta_phi}"
                )));
            }
        }
        if self.scheme == Scheme::An && self.phase_mode != PhaseMode::None {
            return Err(Error::InvalidArgument(
                "the AN baseline has no phase control".into(),
            ));
        }
        Ok(())
    }

    /// Label used in sweep outputs, e.g. `PS+OA` or `AN+DA/nophase`.
    pub fn label(&self, alpha: u8) -> String {
        let scheme = match self.scheme {
            Scheme::Ps => "PS",
            Scheme::An => "AN",
        };
        let antenna = if alpha == 1 { "OA" } else { "DA" };
        let phase = match (self.scheme, self.phase_mode) {
            (Scheme::An, _) => "",
            (_, PhaseMode::Continuous) => "",
            (_, PhaseMode::Discrete { .. }) => "/disc",
            (_, PhaseMode::None) => "/nophase",
        };
        format!("{scheme}+{antenna}{phase}")
    }
}

/// Feasible range of the data amplitude `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// How the returned power allocation was classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    /// No interior extremum; objective increasing, boundary `hi` optimal.
    Case1,
    /// No interior extremum; objective decreasing, boundary `lo` optimal.
    Case2,
    /// Verified interior extrema with positive leading derivative coefficient.
    Case3,
    /// Verified interior extrema with non-positive leading coefficient.
    Case4,
    /// Stationary-point quadratic produced roots that failed verification;
    /// only evaluated points were compared.
    BoundaryOnly,
    Infeasible,
}

/// Optimization outcome for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub feasible: bool,
    pub m_star: f64,
    pub n_star: f64,
    pub phi_a_star: f64,
    pub gamma_p: f64,
    pub gamma_a: f64,
    pub gamma_e: f64,
    pub r_s: f64,
    pub iterations: usize,
    pub case_label: CaseLabel,
    pub candidates_evaluated: Vec<f64>,
    /// Secrecy throughput after each alternation round; nondecreasing.
    pub trace: Vec<f64>,
}

impl Solution {
    fn infeasible() -> Self {
        Solution {
            feasible: false,
            m_star: 0.0,
            n_star: 0.0,
            phi_a_star: 0.0,
            gamma_p: 0.0,
            gamma_a: 0.0,
            gamma_e: 0.0,
            r_s: 0.0,
            iterations: 1,
            case_label: CaseLabel::Infeasible,
            candidates_evaluated: Vec::new(),
            trace: Vec::new(),
        }
    }
}

/// Feasible `m` interval implied by the primary-SNR constraint, for a fixed
/// value `phi = cos(phi_a + phi1)`.
///
/// The constraint is the quadratic (in the noise amplitude `n`)
/// `n^2 [gth (V^2+J^2) + sigma2_n T^2] - 2 n gth U V phi + gth (U^2+G^2) - p_a T^2 <= 0`,
/// intersected with `0 <= n <= sqrt(p_a / sigma2_n)` and mapped through
/// `m = sqrt(p_a - n^2 sigma2_n)` (decreasing, so the n-interval flips).
pub fn feasible_m_interval(t: &SnrTerms, p: &SystemParams, phi: f64) -> Option<Interval> {
    let gth = p.gamma_th_p;
    let n_max = (t.p_a / t.sigma2_n).sqrt();
    let qa = gth * (t.v2 + t.j2) + t.sigma2_n * t.t2;
    let qb = -2.0 * gth * t.uv * t.cross_scale * phi;
    let qc = gth * (t.u2 + t.g2) - t.p_a * t.t2;
    let q = |n: f64| (qa * n + qb) * n + qc;

    let (mut n_lo, mut n_hi) = if qa <= 0.0 {
        // Degenerate: T = 0 forces V = 0 and qb = 0, so q is the constant qc.
        if qc <= 0.0 {
            (0.0, n_max)
        } else {
            return None;
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        // Cancellation-stable quadratic roots.
        let (r1, r2) = if qc == 0.0 {
            (0.0, -qb / qa)
        } else {
            let w = -0.5 * (qb + qb.signum() * sq);
            if w == 0.0 {
                (0.0, 0.0)
            } else {
                (w / qa, qc / w)
            }
        };
        (r1.min(r2), r1.max(r2))
    };

    n_lo = n_lo.max(0.0);
    n_hi = n_hi.min(n_max);
    if n_lo > n_hi {
        return None;
    }
    // Root rounding may leave an endpoint a hair outside the feasible set;
    // walk it inward so every returned point truly satisfies the constraint.
    for _ in 0..16 {
        if q(n_lo) <= 0.0 || n_lo >= n_hi {
            break;
        }
        n_lo = next_toward(n_lo, n_hi);
    }
    for _ in 0..16 {
        if q(n_hi) <= 0.0 || n_hi <= n_lo {
            break;
        }
        n_hi = next_toward(n_hi, n_lo);
    }
    if n_lo > n_hi || q(n_lo) > 0.0 || q(n_hi) > 0.0 {
        return None;
    }

    let m_of = |n: f64| (t.p_a - n * n * t.sigma2_n).max(0.0).sqrt();
    Some(Interval {
        lo: m_of(n_hi),
        hi: m_of(n_lo),
    })
}

fn next_toward(x: f64, toward: f64) -> f64 {
    if toward > x {
        f64::from_bits(x.to_bits() + 1)
    } else if toward < x {
        if x == 0.0 {
            -f64::MIN_POSITIVE
        } else {
            f64::from_bits(x.to_bits().wrapping_sub(1))
        }
    } else {
        x
    }
}

/// The rate-ratio objective `(1 + gamma_a) / (1 + gamma_e)` as an explicit
/// rational function of `u = m^2`; its log is the (unclamped) secrecy rate.
pub fn rate_ratio(t: &SnrTerms, m: f64) -> f64 {
    let u = m * m;
    ((t.m_agg + t.q_agg * u) / (t.l_term + t.r_term * u))
        * ((t.c_den + t.d_den * u) / (t.a_agg + t.b_agg * u))
}

/// Stationary points of the rate-ratio objective.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryCandidates {
    /// Finite-difference-verified stationary amplitudes, ascending.
    pub candidates: Vec<f64>,
    /// The derivative numerator vanished identically (flat objective).
    pub degenerate: bool,
    /// Leading coefficient of the verified derivative quadratic in `u`.
    pub leading_coeff: f64,
    /// The derivative quadratic had real roots with `u >= 0`.
    pub had_real_roots: bool,
    /// Every real `u >= 0` root of the derivative quadratic passed the
    /// finite-difference check.
    pub all_roots_verified: bool,
}

fn real_roots_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    if c == 0.0 {
        return vec![0.0, -b / a];
    }
    let w = -0.5 * (b + b.signum() * sq);
    if w == 0.0 {
        return vec![0.0];
    }
    vec![w / a, c / w]
}

fn is_stationary(t: &SnrTerms, m: f64) -> bool {
    let h = f64::EPSILON.cbrt() * (1.0 + m);
    let (fp, fm) = (rate_ratio(t, m + h), rate_ratio(t, m - h));
    let f0 = rate_ratio(t, m);
    if !(fp.is_finite() && fm.is_finite() && f0.is_finite()) {
        return false;
    }
    let deriv = (fp - fm) / (2.0 * h);
    // Small centered derivative alone also admits points deep inside flat
    // monotone stretches; a local extremum additionally flips the sign of
    // the one-sided differences.
    deriv.abs() <= 1e-6 * (1.0 + f0.abs()) && (f0 - fm) * (fp - f0) <= 0.0
}

/// Computes the stationary-point candidates of the rate-ratio objective.
///
/// The derivative numerator is a quadratic in `u = m^2`; its coefficients are
/// assembled from the closed-form aggregates in two symbol resolutions (the
/// eavesdropper terms entering hatted or aggregated) and the roots of both
/// readings, in `u` and read literally in `m`, are pooled. Only roots that a
/// centered finite-difference check confirms as stationary survive.
pub fn stationary_candidates(t: &SnrTerms) -> StationaryCandidates {
    let (m, q, l, r) = (t.m_agg, t.q_agg, t.l_term, t.r_term);
    let (c, d) = (t.c_den, t.d_den);

    let coeffs = |ah: f64, bh: f64| {
        let a = (ah * d - bh * c) * q * r + (bh * d + d * d) * (l * q - m * r);
        let b = 2.0 * ((ah + c) * d * l * q - (bh + d) * c * m * r);
        let cc = ah * c * (l * q - m * r) + (ah * d - bh * c) * l * m + c * c * (l * q - m * r);
        (a, b, cc)
    };
    // Hatted resolution: algebraically the exact derivative numerator.
    let (a_t, b_t, c_t) = coeffs(t.a_hat, t.b_hat);
    // Literal aggregate resolution.
    let (a_g, b_g, c_g) = coeffs(t.a_agg, t.b_agg);

    if a_t == 0.0 && b_t == 0.0 {
        return StationaryCandidates {
            candidates: Vec::new(),
            degenerate: c_t == 0.0,
            leading_coeff: 0.0,
            had_real_roots: false,
            all_roots_verified: true,
        };
    }

    let mut pool: Vec<f64> = Vec::new();
    let mut exact_roots: Vec<f64> = Vec::new();
    for (in_u, (a, b, cc)) in [
        (true, (a_t, b_t, c_t)),
        (false, (a_t, b_t, c_t)),
        (true, (a_g, b_g, c_g)),
        (false, (a_g, b_g, c_g)),
    ] {
        for root in real_roots_quadratic(a, b, cc) {
            let m_val = if in_u {
                if root < 0.0 || !root.is_finite() {
                    continue;
                }
                root.sqrt()
            } else {
                if !root.is_finite() {
                    continue;
                }
                root.abs()
            };
            pool.push(m_val);
            if in_u && a == a_t && b == b_t && cc == c_t {
                exact_roots.push(m_val);
            }
        }
    }

    let mut verified: Vec<f64> = pool
        .into_iter()
        .filter(|&mv| mv.is_finite() && is_stationary(t, mv))
        .collect();
    verified.sort_by(|x, y| x.partial_cmp(y).unwrap());
    verified.dedup_by(|x, y| (*x - *y).abs() <= 1e-8 * (1.0 + y.abs()));

    let all_roots_verified = exact_roots
        .iter()
        .all(|&rm| verified.iter().any(|&vm| (vm - rm).abs() <= 1e-8 * (1.0 + rm)));

    StationaryCandidates {
        candidates: verified,
        degenerate: false,
        leading_coeff: a_t,
        had_real_roots: !exact_roots.is_empty(),
        all_roots_verified,
    }
}

/// Secrecy rate of allocation `m`, with a diverging eavesdropper SNR scored
/// as zero secrecy rather than discarded.
fn score_m(t: &SnrTerms, m: f64) -> f64 {
    let ga = match gamma_a(t, m) {
        Ok(v) => v,
        Err(_) => return 0.0,
    };
    match gamma_e(t, m) {
        Ok(ge) => security_rate(ga, ge),
        Err(_) => 0.0,
    }
}

/// Power-allocation search result at a fixed constraint phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSearch {
    pub feasible: bool,
    pub m_star: f64,
    pub r_s: f64,
    pub case_label: CaseLabel,
    pub candidates_evaluated: Vec<f64>,
}

/// Maximizes the secrecy rate over the feasible `m` interval at a fixed
/// `phi = cos(phi_a + phi1)`: boundary points plus verified stationary
/// candidates, argmax with ties broken toward smaller `m`.
pub fn optimize_m(t: &SnrTerms, p: &SystemParams, phi: f64) -> PowerSearch {
    let Some(iv) = feasible_m_interval(t, p, phi) else {
        return PowerSearch {
            feasible: false,
            m_star: 0.0,
            r_s: 0.0,
            case_label: CaseLabel::Infeasible,
            candidates_evaluated: Vec::new(),
        };
    };
    let stat = stationary_candidates(t);
    let interior: Vec<f64> = stat
        .candidates
        .iter()
        .copied()
        .filter(|&m| m >= iv.lo && m <= iv.hi)
        .collect();

    let mut evaluated = vec![iv.lo, iv.hi];
    evaluated.extend_from_slice(&interior);
    evaluated.sort_by(|x, y| x.partial_cmp(y).unwrap());
    evaluated.dedup();

    let (mut m_star, mut best) = (evaluated[0], f64::NEG_INFINITY);
    for &m in &evaluated {
        let s = score_m(t, m);
        if s > best {
            best = s;
            m_star = m;
        }
    }

    let case_label = if !interior.is_empty() {
        if stat.leading_coeff > 0.0 {
            CaseLabel::Case3
        } else {
            CaseLabel::Case4
        }
    } else if stat.had_real_roots && !stat.all_roots_verified {
        CaseLabel::BoundaryOnly
    } else if m_star == iv.hi {
        CaseLabel::Case1
    } else {
        CaseLabel::Case2
    };

    PowerSearch {
        feasible: true,
        m_star,
        r_s: best,
        case_label,
        candidates_evaluated: evaluated,
    }
}

/// Continuous phase optimum `-phi1`, normalized to `[0, 2*pi)`.
pub fn optimal_phase_continuous(t: &SnrTerms) -> f64 {
    wrap_phase(-t.phi1)
}

/// Best available discrete phase at fixed `(m, n)`: the grid neighbor of
/// `-phi1` with the smaller primary-interference denominator, ties toward
/// the smaller angle.
pub fn optimal_phase_discrete(t: &SnrTerms, delta_phi: f64, _m: f64, n: f64) -> f64 {
    assert!(
        delta_phi > 0.0 && delta_phi <= TAU,
        "discrete phase step must lie in (0, 2*pi]"
    );
    let target = wrap_phase(-t.phi1);
    let k = (target / delta_phi).floor();
    let lo = wrap_phase(k * delta_phi);
    let hi_raw = (k + 1.0) * delta_phi;
    let hi = if hi_raw >= TAU { 0.0 } else { wrap_phase(hi_raw) };
    let (d_lo, d_hi) = (
        gamma_p_denominator(t, n, lo),
        gamma_p_denominator(t, n, hi),
    );
    if d_hi < d_lo {
        hi
    } else if d_lo < d_hi {
        lo
    } else {
        lo.min(hi)
    }
}

fn amplitude_n(t: &SnrTerms, m: f64) -> f64 {
    ((t.p_a - m * m) / t.sigma2_n).max(0.0).sqrt()
}

fn assemble(
    t: &SnrTerms,
    search: &PowerSearch,
    phi_a: f64,
    iterations: usize,
    trace: Vec<f64>,
) -> Solution {
    if !search.feasible {
        let mut s = Solution::infeasible();
        s.iterations = iterations.max(1);
        return s;
    }
    let m = search.m_star;
    let n = amplitude_n(t, m);
    Solution {
        feasible: true,
        m_star: m,
        n_star: n,
        phi_a_star: phi_a,
        gamma_p: gamma_p(t, m, n, phi_a).unwrap_or(f64::INFINITY),
        gamma_a: gamma_a(t, m).unwrap_or(f64::INFINITY),
        gamma_e: gamma_e(t, m).unwrap_or(f64::INFINITY),
        r_s: search.r_s,
        iterations,
        case_label: search.case_label,
        candidates_evaluated: search.candidates_evaluated.clone(),
        trace,
    }
}

/// Solves one scenario with the phase held at an arbitrary fixed value and
/// only the power allocation optimized.
pub fn solve_fixed_phase(ch: &ChannelSet, p: &SystemParams, phi_a: f64) -> Result<Solution> {
    let t = compute_terms(ch, p)?;
    let search = optimize_m(&t, p, (phi_a + t.phi1).cos());
    let trace = if search.feasible { vec![search.r_s] } else { Vec::new() };
    Ok(assemble(&t, &search, phi_a, 1, trace))
}

/// Joint alternating solve of one scenario under the given strategy.
///
/// With a continuous phase the two sub-problems decouple: the constraint is
/// evaluated at `phi = 1` and power is optimized once. With a discrete grid
/// the loop alternates the power search and the Theorem-style neighbor
/// choice, stopping once the throughput gain drops to `delta` or after
/// `max_iter` rounds; the trace it records never decreases because each new
/// phase keeps the previous allocation feasible.
pub fn solve(
    ch: &ChannelSet,
    p: &SystemParams,
    strategy: &Strategy,
    delta: f64,
    max_iter: usize,
) -> Result<Solution> {
    strategy.validate()?;
    if !(delta >= 0.0) || max_iter == 0 {
        return Err(Error::InvalidArgument(format!(
            "need delta >= 0 and max_iter >= 1, got {delta}, {max_iter}"
        )));
    }

    match strategy.scheme {
        Scheme::An => {
            // Conventional baseline: no pseudo-decoding, no coherent
            // suppression, no phase control; same machinery otherwise.
            let mut p_an = *p;
            p_an.theta = 0.0;
            let t = compute_terms(ch, &p_an)?.without_cross_term();
            let search = optimize_m(&t, &p_an, 0.0);
            let trace = if search.feasible { vec![search.r_s] } else { Vec::new() };
            Ok(assemble(&t, &search, 0.0, 1, trace))
        }
        Scheme::Ps => {
            let t = compute_terms(ch, p)?;
            match strategy.phase_mode {
                PhaseMode::Continuous => {
                    let search = optimize_m(&t, p, 1.0);
                    let phi_a = optimal_phase_continuous(&t);
                    let trace = if search.feasible { vec![search.r_s] } else { Vec::new() };
                    Ok(assemble(&t, &search, phi_a, 1, trace))
                }
                PhaseMode::None => solve_fixed_phase(ch, p, 0.0),
                PhaseMode::Discrete { delta_phi } => {
                    // Bootstrap with the neighbor that maximizes the feasible
                    // region; the (m, n) arguments only break ties.
                    let n0 = (t.p_a / (2.0 * t.sigma2_n)).sqrt();
                    let mut phi_a = optimal_phase_discrete(&t, delta_phi, (t.p_a / 2.0).sqrt(), n0);
                    let mut trace = Vec::new();
                    let mut last = f64::NEG_INFINITY;
                    let mut search = optimize_m(&t, p, (phi_a + t.phi1).cos());
                    let mut iterations = 0;
                    for _ in 0..max_iter {
                        iterations += 1;
                        if !search.feasible {
                            return Ok(assemble(&t, &search, phi_a, iterations, trace));
                        }
                        trace.push(search.r_s);
                        if search.r_s - last.max(0.0) <= delta {
                            break;
                        }
                        last = search.r_s;
                        let n = amplitude_n(&t, search.m_star);
                        let next_phi =
                            optimal_phase_discrete(&t, delta_phi, search.m_star, n);
                        if next_phi == phi_a {
                            break;
                        }
                        phi_a = next_phi;
                        search = optimize_m(&t, p, (phi_a + t.phi1).cos());
                    }
                    Ok(assemble(&t, &search, phi_a, iterations, trace))
                }
            }
        }
    }
}

/// [`solve`] with the default convergence threshold and iteration cap.
pub fn solve_default(ch: &ChannelSet, p: &SystemParams, strategy: &Strategy) -> Result<Solution> {
    solve(ch, p, strategy, DEFAULT_DELTA, DEFAULT_MAX_ITER)
}
