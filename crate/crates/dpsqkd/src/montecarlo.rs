//! Discrete-time pulse-train simulator of the DPS protocol with pluggable
//! eavesdroppers, providing empirical confirmation of the closed-form error
//! rates and leak fractions.
//!
//! The simulator is a classical stochastic model of click statistics, which
//! is the level at which the attack claims live: no amplitude-level quantum
//! optics. Photon statistics are linearized (per-slot click probability
//! `nbar T` rather than `1 - exp(-nbar T)`); the enforced
//! `nbar T + d <= 0.1` regime keeps the linearization error at the
//! `O((nbar T)^2)` level and preserves the at-most-one-click-per-slot model.
//!
//! A train of `n` pulses carries `n - 1` differential positions; position
//! `m` pairs pulses `m` and `m+1` and encodes the bit `phase[m] XOR
//! phase[m+1]`. The interferometer has no cyclic structure, so attack
//! landings that fall off either end of the train are discarded.
//!
//! Randomness is split into two independent streams of one seeded generator:
//! the honest channel/receiver stream and Eve's stream. The honest stream is
//! consumed identically with and without a passive eavesdropper, which makes
//! matched-seed runs directly comparable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Hard ceiling on `nbar T + d` so the at-most-one-click-per-slot model
/// holds.
pub const REGIME_LIMIT: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("n_pulses must be at least 3, got {0}")]
    TooFewPulses(u64),
    #[error("parameter {name} out of range: {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("nbar T + d = {0} exceeds the {REGIME_LIMIT} regime limit")]
    RegimeViolation(f64),
    #[error("Eve's per-slot click probability nbar = {0} must be at most 1 for this attack")]
    EveClickProbability(f64),
    #[error("beamsplitter leak probability {0} exceeds 1")]
    LeakProbability(f64),
    #[error("sequential block length k must be at least 1")]
    BadBlockLength,
}

/// Eavesdropping strategy applied to the pulse train.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attack {
    NoAttack,
    /// Eve measures with her own interferometer and resends a two-pulse
    /// state per click; slots she cannot reconstruct are blocked.
    InterceptResend,
    /// Eve taps the loss fraction and forwards the rest losslessly. Bob's
    /// statistics are untouched; `delayed` doubles her per-bit knowledge by
    /// waiting for the slot announcements.
    Beamsplitter { delayed: bool },
    /// Eve waits for `k` consecutive clicks and resends a reconstructed
    /// `k+1`-pulse block; unattacked slots are forwarded at Bob's nominal
    /// click rate.
    Sequential { k: u32 },
}

/// One simulation request. `dark_count` is the per-slot rate summed over
/// both detectors; `seed` fully determines the run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_pulses: u64,
    pub nbar: f64,
    pub transmission: f64,
    pub dark_count: f64,
    pub baseline_error: f64,
    pub attack: Attack,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_pulses < 3 {
            return Err(SimError::TooFewPulses(self.n_pulses));
        }
        for (name, value, lo, hi) in [
            ("nbar", self.nbar, 0.0, f64::MAX),
            ("transmission", self.transmission, 0.0, 1.0),
            ("dark_count", self.dark_count, 0.0, 1.0),
            ("baseline_error", self.baseline_error, 0.0, 0.5),
        ] {
            if !value.is_finite() || value < lo || value > hi {
                return Err(SimError::ParameterOutOfRange { name, value });
            }
        }
        if self.transmission == 0.0 {
            return Err(SimError::ParameterOutOfRange {
                name: "transmission",
                value: 0.0,
            });
        }
        if self.baseline_error >= 0.5 {
            return Err(SimError::ParameterOutOfRange {
                name: "baseline_error",
                value: self.baseline_error,
            });
        }
        let load = self.nbar * self.transmission + self.dark_count;
        if load > REGIME_LIMIT {
            return Err(SimError::RegimeViolation(load));
        }
        match self.attack {
            Attack::InterceptResend | Attack::Sequential { .. } if self.nbar > 1.0 => {
                return Err(SimError::EveClickProbability(self.nbar))
            }
            Attack::Sequential { k } if k < 1 => return Err(SimError::BadBlockLength),
            Attack::Beamsplitter { delayed } => {
                let factor = if delayed { 2.0 } else { 1.0 };
                let leak = factor * self.nbar * (1.0 - self.transmission);
                if leak > 1.0 {
                    return Err(SimError::LeakProbability(leak));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Tallies specific to the intercept-resend strategy. Center landings carry
/// the reconstructed bit; edge landings interfere with unrelated light and
/// come out random.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InterceptResendTallies {
    pub n_center: u64,
    pub n_center_errors: u64,
    pub n_edge: u64,
    pub n_edge_errors: u64,
}

/// Tallies specific to the sequential strategy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SequentialTallies {
    pub k: u32,
    /// Sliding-window count of `k` consecutive Eve clicks (the raw
    /// block-formation opportunities, expectation `nbar^k` per window).
    pub n_click_windows: u64,
    /// Number of windows scanned, `positions - k + 1`.
    pub n_windows: u64,
    /// Blocks actually reconstructed and resent (greedy, pulse-disjoint).
    pub n_blocks: u64,
    /// Bob detections landing inside resent blocks.
    pub n_block_clicks: u64,
    pub n_block_errors: u64,
    pub n_block_eve_known: u64,
    /// Set when no block ever formed (k too large for this train).
    pub no_blocks_formed: bool,
}

/// Attack-specific detail attached to a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackTallies {
    None,
    InterceptResend(InterceptResendTallies),
    Beamsplitter { delayed: bool, leak_probability: f64 },
    Sequential(SequentialTallies),
}

/// Aggregate result of one simulated train.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub n_pulses: u64,
    /// Usable differential positions, `n_pulses - 1`.
    pub n_positions: u64,
    pub n_clicks: u64,
    pub n_errors: u64,
    /// Sifted bits whose value Eve holds with certainty.
    pub n_eve_known: u64,
    /// `n_errors / n_clicks` (0 when there are no clicks).
    pub qber_est: f64,
    /// `n_eve_known / n_clicks` (0 when there are no clicks).
    pub eve_fraction_est: f64,
    pub wall_time: Duration,
    /// Seed echoed for reproducibility.
    pub seed: u64,
    pub attack: AttackTallies,
}

struct Tally {
    clicks: u64,
    errors: u64,
    eve_known: u64,
}

/// Run one pulse train. Deterministic given the full config including the
/// seed. Memory use is about two bytes per pulse.
pub fn simulate(config: &SimConfig) -> Result<SimReport, SimError> {
    config.validate()?;
    let start = Instant::now();

    let mut bob = ChaCha8Rng::seed_from_u64(config.seed);
    let mut eve = ChaCha8Rng::seed_from_u64(config.seed);
    eve.set_stream(1);

    let n = config.n_pulses as usize;
    let positions = n - 1;

    // Alice's random phase train; the differential bit at position m is
    // phases[m] ^ phases[m+1].
    let phases: Vec<bool> = (0..n).map(|_| bob.random::<bool>()).collect();

    let mut tally = Tally {
        clicks: 0,
        errors: 0,
        eve_known: 0,
    };

    let detail = match config.attack {
        Attack::NoAttack => {
            honest_pass(config, &phases, positions, &mut bob, &mut eve, None, &mut tally);
            AttackTallies::None
        }
        Attack::Beamsplitter { delayed } => {
            let leak =
                (if delayed { 2.0 } else { 1.0 }) * config.nbar * (1.0 - config.transmission);
            honest_pass(
                config,
                &phases,
                positions,
                &mut bob,
                &mut eve,
                Some(leak),
                &mut tally,
            );
            AttackTallies::Beamsplitter {
                delayed,
                leak_probability: leak,
            }
        }
        Attack::InterceptResend => {
            let (block, _) = resend_attack(
                config, &phases, positions, 1, false, &mut bob, &mut eve, &mut tally,
            );
            AttackTallies::InterceptResend(InterceptResendTallies {
                n_center: block.n_block_interior,
                n_center_errors: block.n_block_errors_center,
                n_edge: block.n_block_clicks - block.n_block_interior,
                n_edge_errors: block.n_block_errors - block.n_block_errors_center,
            })
        }
        Attack::Sequential { k } => {
            let (block, windows) = resend_attack(
                config,
                &phases,
                positions,
                k as usize,
                true,
                &mut bob,
                &mut eve,
                &mut tally,
            );
            AttackTallies::Sequential(SequentialTallies {
                k,
                n_click_windows: windows,
                n_windows: (positions + 1 - k as usize) as u64,
                n_blocks: block.n_blocks,
                n_block_clicks: block.n_block_clicks,
                n_block_errors: block.n_block_errors,
                n_block_eve_known: block.n_block_eve_known,
                no_blocks_formed: block.n_blocks == 0,
            })
        }
    };

    let n_clicks = tally.clicks;
    Ok(SimReport {
        n_pulses: config.n_pulses,
        n_positions: positions as u64,
        n_clicks,
        n_errors: tally.errors,
        n_eve_known: tally.eve_known,
        qber_est: ratio(tally.errors, n_clicks),
        eve_fraction_est: ratio(tally.eve_known, n_clicks),
        wall_time: start.elapsed(),
        seed: config.seed,
        attack: detail,
    })
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Honest channel: signal clicks at `nbar T` with the true differential bit
/// (flipped with probability mu), dark clicks at `d` on a uniformly random
/// detector. With a beamsplitter tap, Eve independently knows each signal
/// bit with probability `leak`; Bob's draws are untouched by her presence.
fn honest_pass(
    config: &SimConfig,
    phases: &[bool],
    positions: usize,
    bob: &mut ChaCha8Rng,
    eve: &mut ChaCha8Rng,
    leak: Option<f64>,
    tally: &mut Tally,
) {
    let signal = config.nbar * config.transmission;
    let dark = config.dark_count;
    for m in 0..positions {
        let diff = phases[m] ^ phases[m + 1];
        let u: f64 = bob.random();
        if u < signal {
            let flipped = bob.random::<f64>() < config.baseline_error;
            tally.clicks += 1;
            if flipped {
                tally.errors += 1;
            }
            if let Some(leak) = leak {
                // Dark counts carry no photon for Eve to correlate with;
                // only signal clicks can be known to her.
                if eve.random::<f64>() < leak {
                    tally.eve_known += 1;
                }
            }
        } else if u < signal + dark {
            let bit = bob.random::<bool>();
            tally.clicks += 1;
            if bit != diff {
                tally.errors += 1;
            }
        }
    }
}

#[derive(Default)]
struct BlockTally {
    n_blocks: u64,
    n_block_clicks: u64,
    n_block_errors: u64,
    n_block_errors_center: u64,
    n_block_interior: u64,
    n_block_eve_known: u64,
}

const FREE: u8 = 0;
const COVERED: u8 = 1;
const LANDED: u8 = 2;

/// Shared engine for the block-resend strategies. Eve's interferometer
/// clicks per position with probability `nbar`; a greedy left-to-right scan
/// turns each run of `k` clicks into a resent block spanning pulses
/// `start..=start+k`. Bob's single detection from a block lands on one of
/// the `k` interior positions (probability `1/(k+1)` each, correct bit,
/// Eve-known) or on one of the two edges (probability `1/(2(k+1))` each,
/// uniformly random outcome, Eve-unknown). With `pass_through`, positions
/// untouched by any block are forwarded at Bob's nominal click rate;
/// otherwise they are blocked and only dark counts remain.
#[allow(clippy::too_many_arguments)]
fn resend_attack(
    config: &SimConfig,
    phases: &[bool],
    positions: usize,
    k: usize,
    pass_through: bool,
    bob: &mut ChaCha8Rng,
    eve: &mut ChaCha8Rng,
    tally: &mut Tally,
) -> (BlockTally, u64) {
    let clicks: Vec<bool> = (0..positions)
        .map(|_| eve.random::<f64>() < config.nbar)
        .collect();

    // Raw block-formation opportunities: sliding count of k-click windows.
    let mut windows = 0u64;
    if positions >= k {
        let mut run = 0usize;
        for &c in &clicks {
            run = if c { run + 1 } else { 0 };
            if run >= k {
                windows += 1;
            }
        }
    }

    let mut state = vec![FREE; positions];
    let mut block = BlockTally::default();

    // Greedy pulse-disjoint block formation.
    let mut run = 0usize;
    let mut m = 0usize;
    while m < positions {
        run = if clicks[m] { run + 1 } else { 0 };
        if run == k {
            let start = m + 1 - k;
            block.n_blocks += 1;
            // Positions overlapping the resent pulses cannot also carry
            // forwarded light.
            let cover_lo = start.saturating_sub(1);
            let cover_hi = (start + k).min(positions - 1);
            for slot in &mut state[cover_lo..=cover_hi] {
                if *slot == FREE {
                    *slot = COVERED;
                }
            }
            // Landing distribution over the k+2 positions touching the
            // block: interior 1/(k+1) each, edges 1/(2(k+1)) each.
            let q = eve.random::<f64>() * (k as f64 + 1.0);
            let (landing, interior) = if q < 0.5 {
                (start as i64 - 1, false)
            } else if q < 1.0 {
                (start as i64 + k as i64, false)
            } else {
                (start as i64 + q as i64 - 1, true)
            };
            if landing >= 0 && (landing as usize) < positions {
                let lp = landing as usize;
                let diff = phases[lp] ^ phases[lp + 1];
                let measured = if interior { diff } else { bob.random::<bool>() };
                let flipped = bob.random::<f64>() < config.baseline_error;
                let bit = measured ^ flipped;
                let error = bit != diff;
                state[lp] = LANDED;
                tally.clicks += 1;
                block.n_block_clicks += 1;
                if error {
                    tally.errors += 1;
                    block.n_block_errors += 1;
                    if interior {
                        block.n_block_errors_center += 1;
                    }
                }
                // Eve knows the bit she encoded; a receiver-side flip breaks
                // the correlation.
                if interior {
                    block.n_block_interior += 1;
                    if !flipped {
                        tally.eve_known += 1;
                        block.n_block_eve_known += 1;
                    }
                }
            }
            // Next block may start only after this block's pulses.
            run = 0;
            m = start + k; // loop increment moves to start + k + 1
        }
        m += 1;
    }

    // Unattacked positions: forwarded honestly or blocked; dark counts can
    // fire wherever no detection landed.
    let signal = config.nbar * config.transmission;
    let dark = config.dark_count;
    for m in 0..positions {
        match state[m] {
            LANDED => {}
            FREE if pass_through => {
                let u: f64 = bob.random();
                if u < signal {
                    // Forwarded faithfully: only a receiver flip can err.
                    let flipped = bob.random::<f64>() < config.baseline_error;
                    tally.clicks += 1;
                    if flipped {
                        tally.errors += 1;
                    }
                } else if u < signal + dark {
                    let diff = phases[m] ^ phases[m + 1];
                    let bit = bob.random::<bool>();
                    tally.clicks += 1;
                    if bit != diff {
                        tally.errors += 1;
                    }
                }
            }
            _ => {
                if dark > 0.0 && bob.random::<f64>() < dark {
                    let diff = phases[m] ^ phases[m + 1];
                    let bit = bob.random::<bool>();
                    tally.clicks += 1;
                    if bit != diff {
                        tally.errors += 1;
                    }
                }
            }
        }
    }

    (block, windows)
}
