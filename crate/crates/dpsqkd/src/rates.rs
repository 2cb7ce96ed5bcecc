//! Closed-form asymptotic rate and error formulas: detection probability,
//! QBER, binary entropy, the DPS secure rate, BB84 comparison rates,
//! sequential-attack rates, and photon-splitting leak fractions.
//!
//! All rates are secure bits per pulse, clamped below at zero; the clamp
//! point defines a protocol's cutoff loss. Error rates are clamped at 1/2
//! before entering the collision bound and entropy terms, which only
//! affects the already-zero region (an error rate at or above 1/2 carries
//! no key).

use crate::collision::pc0_bound;
use crate::model::{ErrorCorrection, ProtocolKind, SourceKind, SourceModel};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RateError {
    #[error("entropy argument out of range [0, 1]: {0}")]
    EntropyDomain(f64),
    #[error("parameter {name} out of range: {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("signal click probability nbar*T = {0} exceeds 1; outside the at-most-one-click regime")]
    ClickRegime(f64),
    #[error("click probability is zero; the error rate is undefined")]
    ZeroClickProbability,
    #[error("mean photon number must be below 1/2 for a positive DPS rate, got {0}")]
    DpsNbarTooLarge(f64),
    #[error("mean photon number must be in (0, 1) for the sequential block length, got {0}")]
    SequentialNbarDegenerate(f64),
    #[error("photon-splitting fraction would exceed 1: nbar (1 - T) = {0} > 1/2")]
    SplittingPrecondition(f64),
}

fn check_range(
    name: &'static str,
    value: f64,
    min: f64,
    max: f64,
    min_open: bool,
) -> Result<(), RateError> {
    let ok = value.is_finite() && value <= max && if min_open { value > min } else { value >= min };
    if ok {
        Ok(())
    } else {
        Err(RateError::ParameterOutOfRange { name, value })
    }
}

/// Shannon binary entropy `h(e) = -e log2 e - (1-e) log2 (1-e)`, with
/// `h(0) = h(1) = 0` by continuity.
pub fn binary_entropy(e: f64) -> Result<f64, RateError> {
    if !(0.0..=1.0).contains(&e) {
        return Err(RateError::EntropyDomain(e));
    }
    if e == 0.0 || e == 1.0 {
        return Ok(0.0);
    }
    Ok(-e * e.log2() - (1.0 - e) * (1.0 - e).log2())
}

/// Probability per pulse slot that the receiver registers a detection:
/// signal `nbar * T` plus dark counts `d`. Valid in the small-probability
/// regime where multiple detection events can be ignored; a signal term
/// above 1 is rejected, while dark counts can only fill the remaining slot
/// probability (the sum is capped at 1).
pub fn p_click(nbar: f64, transmission: f64, dark_count: f64) -> Result<f64, RateError> {
    check_range("nbar", nbar, 0.0, f64::MAX, false)?;
    check_range("transmission", transmission, 0.0, 1.0, true)?;
    check_range("dark_count", dark_count, 0.0, 1.0, false)?;
    let signal = nbar * transmission;
    if signal > 1.0 {
        return Err(RateError::ClickRegime(signal));
    }
    Ok((signal + dark_count).min(1.0))
}

/// Sifted-key error rate `(mu p_click + d/2) / p_click`: the baseline error
/// applied to all clicks plus randomly-landing dark counts. Always at least
/// `mu`; equals `mu + d / (2 p_click)`. May exceed 1/2 when dark counts
/// dominate a nonzero baseline; consumers clamp before using it as a key
/// error rate.
pub fn qber(
    nbar: f64,
    transmission: f64,
    dark_count: f64,
    baseline_error: f64,
) -> Result<f64, RateError> {
    check_range("baseline_error", baseline_error, 0.0, 0.5, false)?;
    let p = p_click(nbar, transmission, dark_count)?;
    if p == 0.0 {
        return Err(RateError::ZeroClickProbability);
    }
    Ok((baseline_error * p + dark_count / 2.0) / p)
}

/// DPS secure rate per pulse:
/// `p_click [ (1 - 2 nbar)(-log2 pc0(e)) - f(e) h(e) ]`, clamped at zero.
/// The `(1 - 2 nbar)` factor removes the fraction of the sifted key revealed
/// by photon splitting; `pc0` is the per-bit collision bound.
pub fn rate_dps(
    nbar: f64,
    transmission: f64,
    dark_count: f64,
    baseline_error: f64,
    ec: &ErrorCorrection,
) -> Result<f64, RateError> {
    if nbar.is_nan() || nbar >= 0.5 {
        return Err(RateError::DpsNbarTooLarge(nbar));
    }
    let p = p_click(nbar, transmission, dark_count)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    let e = qber(nbar, transmission, dark_count, baseline_error)?.min(0.5);
    let pc0 = pc0_bound(e).expect("clamped error rate is in the bound domain").pc0;
    let h = binary_entropy(e).expect("clamped error rate is a probability");
    let bracket = (1.0 - 2.0 * nbar) * (-pc0.log2()) - ec.factor(e) * h;
    Ok((p * bracket).max(0.0))
}

/// BB84 rate evaluation. `tagging_dominates` is set when the multi-photon
/// fraction consumes the whole click rate (`beta <= 0`), which forces the
/// rate to zero regardless of the error rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bb84Rate {
    pub rate: f64,
    pub tagging_dominates: bool,
}

/// BB84 secure rate per pulse for a Poisson or ideal single-photon source:
/// `p_click [ -beta log2(1/2 + 2(e/beta) - 2(e/beta)^2) - f(e) h(e) ]`
/// with `beta = (p_click - p_m) / p_click`, clamped at zero. The collision
/// term is valid for `e/beta <= 1/2`; beyond that the rate is zero.
pub fn rate_bb84(
    source: &SourceModel,
    transmission: f64,
    dark_count: f64,
    baseline_error: f64,
    ec: &ErrorCorrection,
) -> Result<Bb84Rate, RateError> {
    let nbar = source.mean_photon_number();
    let p = p_click(nbar, transmission, dark_count)?;
    if p == 0.0 {
        return Ok(Bb84Rate {
            rate: 0.0,
            tagging_dominates: false,
        });
    }
    let p_m = source.multiphoton_probability();
    let beta = (p - p_m) / p;
    if beta <= 0.0 {
        return Ok(Bb84Rate {
            rate: 0.0,
            tagging_dominates: true,
        });
    }
    let e = qber(nbar, transmission, dark_count, baseline_error)?.min(0.5);
    let r = e / beta;
    if r > 0.5 {
        return Ok(Bb84Rate {
            rate: 0.0,
            tagging_dominates: false,
        });
    }
    let arg = 0.5 + 2.0 * r - 2.0 * r * r;
    let h = binary_entropy(e).expect("clamped error rate is a probability");
    let bracket = -beta * arg.log2() - ec.factor(e) * h;
    Ok(Bb84Rate {
        rate: (p * bracket).max(0.0),
        tagging_dominates: false,
    })
}

/// Block geometry of a sequential attack tuned to conserve the detection
/// rate: block length `k`, the per-block error rate `eps_seq = 1/(2(k+1))`,
/// and the system error budget `eps_s` the attack must stay inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequentialAttackParams {
    pub k: f64,
    pub eps_seq: f64,
    pub eps_s: f64,
}

impl SequentialAttackParams {
    /// True when the rate-conservation condition gives a block shorter than
    /// one slot. Cannot happen for a physical channel (`T <= 1 <= 1/nbar`).
    pub fn is_degenerate(&self) -> bool {
        self.k < 1.0
    }
}

/// Continuous block length `k = log_nbar(T) + 1` from the rate-conservation
/// condition `nbar^k = nbar T`, with the induced `eps_seq`.
pub fn sequential_params(
    nbar: f64,
    transmission: f64,
    eps_s: f64,
) -> Result<SequentialAttackParams, RateError> {
    if !(nbar > 0.0 && nbar < 1.0) {
        return Err(RateError::SequentialNbarDegenerate(nbar));
    }
    check_range("transmission", transmission, 0.0, 1.0, true)?;
    check_range("eps_s", eps_s, 0.0, 0.5, false)?;
    let k = transmission.ln() / nbar.ln() + 1.0;
    Ok(SequentialAttackParams {
        k,
        eps_seq: 1.0 / (2.0 * (k + 1.0)),
        eps_s,
    })
}

/// How the sequential block length enters the rate formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KPolicy {
    /// Real-valued `k` exactly as the rate-conservation condition implies.
    Continuous,
    /// `floor(k)` clamped at 1, for sensitivity checks against the
    /// continuous reading.
    Integer,
}

/// Secure rate per pulse against the sequential (block resend) attack:
/// `p_click [ 1 - 2 eps_s (log_nbar T + 1) - f(e) h(e) ]`, clamped at zero.
/// The system error rate `eps_s` is identified with the channel QBER.
pub fn rate_sequential(
    nbar: f64,
    transmission: f64,
    dark_count: f64,
    baseline_error: f64,
    ec: &ErrorCorrection,
) -> Result<f64, RateError> {
    rate_sequential_with_policy(
        nbar,
        transmission,
        dark_count,
        baseline_error,
        ec,
        KPolicy::Continuous,
    )
}

/// [`rate_sequential`] with an explicit block-length policy.
pub fn rate_sequential_with_policy(
    nbar: f64,
    transmission: f64,
    dark_count: f64,
    baseline_error: f64,
    ec: &ErrorCorrection,
    policy: KPolicy,
) -> Result<f64, RateError> {
    let p = p_click(nbar, transmission, dark_count)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    let e = qber(nbar, transmission, dark_count, baseline_error)?.min(0.5);
    let params = sequential_params(nbar, transmission, e)?;
    let k = match policy {
        KPolicy::Continuous => params.k,
        KPolicy::Integer => params.k.floor().max(1.0),
    };
    let h = binary_entropy(e).expect("clamped error rate is a probability");
    let bracket = 1.0 - 2.0 * e * k - ec.factor(e) * h;
    Ok((p * bracket).max(0.0))
}

/// Fraction of the sifted key a photon-splitting eavesdropper learns when
/// measurement is delayed until detection slots are announced:
/// `2 nbar (1 - T)`. Independent of where the loss sits in the channel.
pub fn splitting_fraction(nbar: f64, transmission: f64) -> Result<f64, RateError> {
    check_range("nbar", nbar, 0.0, f64::MAX, false)?;
    check_range("transmission", transmission, 0.0, 1.0, false)?;
    let half = nbar * (1.0 - transmission);
    if half > 0.5 {
        return Err(RateError::SplittingPrecondition(half));
    }
    Ok(2.0 * half)
}

/// Per-sifted-bit probability that an immediate beamsplitter measurement
/// (no delayed storage) reveals the bit: `nbar (1 - T)`. The delayed
/// variant is exactly [`splitting_fraction`], a factor of 2 better.
pub fn beamsplitter_info(nbar: f64, transmission: f64) -> Result<f64, RateError> {
    check_range("nbar", nbar, 0.0, f64::MAX, false)?;
    check_range("transmission", transmission, 0.0, 1.0, false)?;
    let info = nbar * (1.0 - transmission);
    if info > 0.5 {
        return Err(RateError::SplittingPrecondition(info));
    }
    Ok(info)
}

/// One row of a loss sweep: the operating point and its secure rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub loss_db: f64,
    pub transmission: f64,
    pub protocol: ProtocolKind,
    pub source: SourceKind,
    /// Mean photon number the row was evaluated at (0 beyond cutoff, where
    /// no operating point exists).
    pub nbar: f64,
    pub p_click: f64,
    /// Row QBER, clamped at 1/2.
    pub qber: f64,
    /// Secure bits per pulse, clamped at 0.
    pub rate: f64,
}
