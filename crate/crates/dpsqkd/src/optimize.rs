//! Per-loss optimization of the mean photon number, loss sweeps, and
//! cutoff-loss determination.
//!
//! The optimizer is a coarse log-spaced grid followed by golden-section
//! refinement on the best bracket: the rate curves are smooth but can be
//! multi-modal near cutoff, so pure golden section is unsafe. Ties within
//! `1e-12` in rate resolve to the smallest mean photon number (the
//! conservative leak).

use crate::model::{ChannelModel, ErrorCorrection, ModelError, SourceKind, SourceModel};
use crate::rates::{self, RatePoint};
use rayon::prelude::*;
use thiserror::Error;

/// Rates below this are treated as zero (near-cutoff numerical noise).
pub const RATE_FLOOR: f64 = 1e-15;

/// Smallest mean photon number the optimizer considers.
pub const NBAR_MIN: f64 = 1e-6;

/// Largest loss probed when searching for a cutoff.
pub const PROBE_CEILING_DB: f64 = 100.0;

/// Bisection resolution of [`cutoff_loss`].
pub const CUTOFF_RESOLUTION_DB: f64 = 0.01;

const COARSE_POINTS: usize = 256;
const RATE_TIE_TOL: f64 = 1e-12;
const GOLDEN_XTOL: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("rate is zero across the whole nbar bracket: beyond cutoff")]
    BeyondCutoff,
    #[error("single-photon BB84 has no free mean photon number to optimize")]
    NoFreeParameter,
    #[error("optimized rate is nonpositive already at 0 dB; no cutoff to bracket")]
    NoRateAtZeroLoss,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("sweep spec invalid: {0}")]
    BadSweepSpec(String),
}

/// Protocol-and-source pairing used by sweeps and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepProtocol {
    Dps,
    Bb84Poisson,
    Bb84SinglePhoton,
    /// DPS rate against the sequential block-resend adversary, evaluated at
    /// the DPS-optimal mean photon number so both curves share an operating
    /// point.
    DpsSequentialAdversary,
}

impl SweepProtocol {
    pub const ALL: [SweepProtocol; 4] = [
        SweepProtocol::Dps,
        SweepProtocol::Bb84Poisson,
        SweepProtocol::Bb84SinglePhoton,
        SweepProtocol::DpsSequentialAdversary,
    ];

    pub fn protocol_kind(&self) -> crate::model::ProtocolKind {
        match self {
            SweepProtocol::Dps => crate::model::ProtocolKind::Dps,
            SweepProtocol::Bb84Poisson | SweepProtocol::Bb84SinglePhoton => {
                crate::model::ProtocolKind::Bb84
            }
            SweepProtocol::DpsSequentialAdversary => {
                crate::model::ProtocolKind::DpsSequentialAdversary
            }
        }
    }

    pub fn source_kind(&self) -> SourceKind {
        match self {
            SweepProtocol::Bb84SinglePhoton => SourceKind::IdealSinglePhoton,
            _ => SourceKind::PoissonCoherent,
        }
    }

    pub fn default_dark_count(&self) -> f64 {
        self.protocol_kind().default_dark_count()
    }

    fn nbar_max(&self) -> f64 {
        match self {
            // Photon-splitting wall: the DPS privacy-amplification exponent
            // vanishes at nbar = 1/2.
            SweepProtocol::Dps => 0.5 - 1e-9,
            SweepProtocol::Bb84Poisson => 1.0,
            SweepProtocol::Bb84SinglePhoton => 1.0,
            // log base degenerates at nbar = 1.
            SweepProtocol::DpsSequentialAdversary => 1.0 - 1e-9,
        }
    }
}

impl std::fmt::Display for SweepProtocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SweepProtocol::Dps => "dps",
            SweepProtocol::Bb84Poisson => "bb84-poisson",
            SweepProtocol::Bb84SinglePhoton => "bb84-single",
            SweepProtocol::DpsSequentialAdversary => "dps-seq",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for SweepProtocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dps" => Ok(SweepProtocol::Dps),
            "bb84-poisson" => Ok(SweepProtocol::Bb84Poisson),
            "bb84-single" => Ok(SweepProtocol::Bb84SinglePhoton),
            "dps-seq" => Ok(SweepProtocol::DpsSequentialAdversary),
            other => Err(format!(
                "unknown protocol `{other}` (expected dps, bb84-poisson, bb84-single, or dps-seq)"
            )),
        }
    }
}

/// Outcome of a per-loss mean-photon-number optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumResult {
    pub nbar_opt: f64,
    /// Secure bits per pulse at the optimum.
    pub rate_opt: f64,
    /// Search interval the refinement actually used.
    pub bracket: (f64, f64),
    /// Number of rate evaluations spent.
    pub evaluations: u64,
}

/// Secure rate of `protocol` at a fixed mean photon number. This is the
/// optimizer's objective; the sequential-adversary variant evaluates the
/// sequential rate at the given `nbar`.
pub fn protocol_rate(
    protocol: SweepProtocol,
    nbar: f64,
    channel: &ChannelModel,
    ec: &ErrorCorrection,
) -> f64 {
    let (t, d, mu) = (
        channel.transmission(),
        channel.dark_count(),
        channel.baseline_error(),
    );
    match protocol {
        SweepProtocol::Dps => {
            rates::rate_dps(nbar, t, d, mu, ec).expect("bracket respects rate preconditions")
        }
        SweepProtocol::Bb84Poisson => {
            let src = SourceModel::poisson(nbar).expect("bracket keeps nbar positive");
            rates::rate_bb84(&src, t, d, mu, ec)
                .expect("bracket respects rate preconditions")
                .rate
        }
        SweepProtocol::Bb84SinglePhoton => {
            let src = SourceModel::ideal_single_photon();
            rates::rate_bb84(&src, t, d, mu, ec)
                .expect("bracket respects rate preconditions")
                .rate
        }
        SweepProtocol::DpsSequentialAdversary => rates::rate_sequential(nbar, t, d, mu, ec)
            .expect("bracket respects rate preconditions"),
    }
}

/// Maximize the protocol's rate over the mean photon number. Single-photon
/// BB84 has no free parameter and is rejected; a bracket whose rate is zero
/// everywhere yields the distinct [`OptimizeError::BeyondCutoff`].
pub fn optimize_nbar(
    protocol: SweepProtocol,
    channel: &ChannelModel,
    ec: &ErrorCorrection,
) -> Result<OptimumResult, OptimizeError> {
    if protocol == SweepProtocol::Bb84SinglePhoton {
        return Err(OptimizeError::NoFreeParameter);
    }
    let objective = |nbar: f64| protocol_rate(protocol, nbar, channel, ec);
    let hi = protocol.nbar_max();
    let mut evaluations = 0u64;

    // Coarse pass: log-spaced grid across the full bracket.
    let log_lo = NBAR_MIN.ln();
    let log_hi = hi.ln();
    let mut grid = [0.0f64; COARSE_POINTS];
    let mut best_rate = f64::NEG_INFINITY;
    let mut best_i = 0usize;
    let mut coarse = [0.0f64; COARSE_POINTS];
    for (i, slot) in grid.iter_mut().enumerate() {
        let f = i as f64 / (COARSE_POINTS - 1) as f64;
        let nbar = if i == COARSE_POINTS - 1 {
            hi
        } else {
            (log_lo + f * (log_hi - log_lo)).exp()
        };
        *slot = nbar;
        let r = objective(nbar);
        evaluations += 1;
        coarse[i] = r;
        if r > best_rate {
            best_rate = r;
            best_i = i;
        }
    }
    if best_rate <= RATE_FLOOR {
        return Err(OptimizeError::BeyondCutoff);
    }
    // Smallest nbar within the tie tolerance of the maximum.
    for (i, &r) in coarse.iter().enumerate() {
        if r >= best_rate - RATE_TIE_TOL {
            best_i = i;
            best_rate = r;
            break;
        }
    }

    let bracket = (
        grid[best_i.saturating_sub(1)],
        grid[(best_i + 1).min(COARSE_POINTS - 1)],
    );

    // Golden-section refinement inside the bracket.
    let (mut a, mut b) = bracket;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    evaluations += 2;
    while b - a > GOLDEN_XTOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = objective(x1);
        }
        evaluations += 1;
    }

    // Pick the best of the refined points and the coarse winner; rate ties
    // resolve to the smaller nbar.
    let mut cand = [(grid[best_i], best_rate), (x1, f1), (x2, f2)];
    cand.sort_by(|l, r| l.0.total_cmp(&r.0));
    let (mut nbar_opt, mut rate_opt) = cand[0];
    for &(n, r) in &cand[1..] {
        if r > rate_opt + RATE_TIE_TOL {
            nbar_opt = n;
            rate_opt = r;
        }
    }

    Ok(OptimumResult {
        nbar_opt,
        rate_opt,
        bracket,
        evaluations,
    })
}

/// A loss sweep request: the dB grid, the protocol list, and shared channel
/// defaults. `dark_count: None` applies each protocol's receiver default.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub loss_min_db: f64,
    pub loss_max_db: f64,
    pub loss_step_db: f64,
    pub protocols: Vec<SweepProtocol>,
    pub dark_count: Option<f64>,
    pub baseline_error: f64,
    pub error_correction: ErrorCorrection,
}

impl SweepSpec {
    /// Standard comparison sweep: all four protocols over 0..=60 dB in
    /// 1 dB steps with receiver-default dark counts and a 1% baseline error.
    pub fn reference_defaults() -> Self {
        Self {
            loss_min_db: 0.0,
            loss_max_db: 60.0,
            loss_step_db: 1.0,
            protocols: SweepProtocol::ALL.to_vec(),
            dark_count: None,
            baseline_error: crate::model::DEFAULT_BASELINE_ERROR,
            error_correction: ErrorCorrection::ShannonLimit,
        }
    }

    fn validate(&self) -> Result<(), OptimizeError> {
        if !(self.loss_min_db >= 0.0 && self.loss_min_db.is_finite()) {
            return Err(OptimizeError::BadSweepSpec("loss_min_db must be >= 0".into()));
        }
        if self.loss_max_db.is_nan() || self.loss_max_db < self.loss_min_db {
            return Err(OptimizeError::BadSweepSpec(
                "loss_max_db must be >= loss_min_db".into(),
            ));
        }
        if self.loss_step_db.is_nan() || self.loss_step_db <= 0.0 {
            return Err(OptimizeError::BadSweepSpec("loss_step_db must be > 0".into()));
        }
        Ok(())
    }

    fn losses(&self) -> Vec<f64> {
        let count =
            ((self.loss_max_db - self.loss_min_db) / self.loss_step_db + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.loss_min_db + i as f64 * self.loss_step_db)
            .collect()
    }
}

/// Run a sweep: one row per (loss, protocol), ordered by loss first and the
/// requested protocol order second. Rows beyond a protocol's cutoff carry
/// rate zero and `nbar = 0`. Rows are independent and computed in parallel;
/// output order is fixed by the request, not by completion.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<RatePoint>, OptimizeError> {
    spec.validate()?;
    let losses = spec.losses();
    let blocks: Result<Vec<Vec<RatePoint>>, OptimizeError> = losses
        .par_iter()
        .map(|&loss| {
            spec.protocols
                .iter()
                .map(|&p| sweep_row(p, loss, spec))
                .collect()
        })
        .collect();
    Ok(blocks?.into_iter().flatten().collect())
}

fn sweep_row(
    protocol: SweepProtocol,
    loss_db: f64,
    spec: &SweepSpec,
) -> Result<RatePoint, OptimizeError> {
    let dark = spec.dark_count.unwrap_or(protocol.default_dark_count());
    let channel = ChannelModel::from_loss_db(loss_db, dark, spec.baseline_error)?;
    let ec = &spec.error_correction;

    let operating_nbar = match protocol {
        SweepProtocol::Bb84SinglePhoton => Some(1.0),
        SweepProtocol::DpsSequentialAdversary => {
            // Same operating point as the DPS optimization, so the two
            // curves are comparable.
            match optimize_nbar(SweepProtocol::Dps, &channel, ec) {
                Ok(opt) => Some(opt.nbar_opt),
                Err(OptimizeError::BeyondCutoff) => None,
                Err(e) => return Err(e),
            }
        }
        _ => match optimize_nbar(protocol, &channel, ec) {
            Ok(opt) => Some(opt.nbar_opt),
            Err(OptimizeError::BeyondCutoff) => None,
            Err(e) => return Err(e),
        },
    };

    let row = match operating_nbar {
        Some(nbar) => {
            let rate = protocol_rate(protocol, nbar, &channel, ec);
            let p = rates::p_click(nbar, channel.transmission(), dark)
                .expect("sweep operating point is in regime");
            let e = rates::qber(nbar, channel.transmission(), dark, spec.baseline_error)
                .expect("positive click probability at the operating point")
                .min(0.5);
            RatePoint {
                loss_db,
                transmission: channel.transmission(),
                protocol: protocol.protocol_kind(),
                source: protocol.source_kind(),
                nbar,
                p_click: p,
                qber: e,
                rate: if rate > RATE_FLOOR { rate } else { 0.0 },
            }
        }
        // Beyond cutoff: no operating point; only dark counts click.
        None => RatePoint {
            loss_db,
            transmission: channel.transmission(),
            protocol: protocol.protocol_kind(),
            source: protocol.source_kind(),
            nbar: 0.0,
            p_click: dark,
            qber: 0.5,
            rate: 0.0,
        },
    };
    Ok(row)
}

/// Result of a cutoff-loss search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffResult {
    /// Largest loss (to [`CUTOFF_RESOLUTION_DB`]) at which the optimized
    /// rate is still positive.
    Finite(f64),
    /// The optimized rate is still positive at the probe ceiling
    /// ([`PROBE_CEILING_DB`]); without dark counts there is no cutoff.
    NoneBelowCeiling,
}

/// Bisect for the loss at which the optimized rate reaches zero. The rate
/// must be positive at 0 dB.
pub fn cutoff_loss(
    protocol: SweepProtocol,
    dark_count: Option<f64>,
    baseline_error: f64,
    ec: &ErrorCorrection,
) -> Result<CutoffResult, OptimizeError> {
    let dark = dark_count.unwrap_or(protocol.default_dark_count());
    let optimized = |loss_db: f64| -> Result<f64, OptimizeError> {
        let channel = ChannelModel::from_loss_db(loss_db, dark, baseline_error)?;
        let ec_rate = match protocol {
            SweepProtocol::Bb84SinglePhoton => protocol_rate(protocol, 1.0, &channel, ec),
            SweepProtocol::DpsSequentialAdversary => {
                match optimize_nbar(SweepProtocol::Dps, &channel, ec) {
                    Ok(opt) => protocol_rate(protocol, opt.nbar_opt, &channel, ec),
                    Err(OptimizeError::BeyondCutoff) => 0.0,
                    Err(e) => return Err(e),
                }
            }
            _ => match optimize_nbar(protocol, &channel, ec) {
                Ok(opt) => opt.rate_opt,
                Err(OptimizeError::BeyondCutoff) => 0.0,
                Err(e) => return Err(e),
            },
        };
        Ok(if ec_rate > RATE_FLOOR { ec_rate } else { 0.0 })
    };

    if optimized(0.0)? <= 0.0 {
        return Err(OptimizeError::NoRateAtZeroLoss);
    }
    if optimized(PROBE_CEILING_DB)? > 0.0 {
        return Ok(CutoffResult::NoneBelowCeiling);
    }
    let (mut lo, mut hi) = (0.0f64, PROBE_CEILING_DB);
    while hi - lo > CUTOFF_RESOLUTION_DB {
        let mid = 0.5 * (lo + hi);
        if optimized(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CutoffResult::Finite(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_BASELINE_ERROR;

    const SHANNON: ErrorCorrection = ErrorCorrection::ShannonLimit;

    fn reference_channel(loss_db: f64, dark: f64) -> ChannelModel {
        ChannelModel::from_loss_db(loss_db, dark, DEFAULT_BASELINE_ERROR).unwrap()
    }

    #[test]
    fn dps_error_free_optimum_is_quarter() {
        // rate = nbar (1 - 2 nbar): maximum at nbar = 1/4, rate 1/8.
        let channel = ChannelModel::from_loss_db(0.0, 0.0, 0.0).unwrap();
        let opt = optimize_nbar(SweepProtocol::Dps, &channel, &SHANNON).unwrap();
        assert!((opt.nbar_opt - 0.25).abs() <= 1e-5);
        assert!((opt.rate_opt - 0.125).abs() <= 1e-9);
        assert!(opt.bracket.0 <= opt.nbar_opt && opt.nbar_opt <= opt.bracket.1);
    }

    #[test]
    fn optimum_beats_bracket_endpoints() {
        let channel = reference_channel(20.0, 1e-5);
        let opt = optimize_nbar(SweepProtocol::Dps, &channel, &SHANNON).unwrap();
        let r_lo = protocol_rate(SweepProtocol::Dps, opt.bracket.0, &channel, &SHANNON);
        let r_hi = protocol_rate(SweepProtocol::Dps, opt.bracket.1, &channel, &SHANNON);
        assert!(opt.rate_opt >= r_lo);
        assert!(opt.rate_opt >= r_hi);
        assert!(opt.nbar_opt < 0.5);
    }

    #[test]
    fn optimum_matches_dense_grid_reference() {
        // 2000-point uniform reference grid, 1e-3 relative agreement.
        for (protocol, loss, dark) in [
            (SweepProtocol::Dps, 20.0, 1e-5),
            (SweepProtocol::Bb84Poisson, 10.0, 2e-5),
            (SweepProtocol::DpsSequentialAdversary, 15.0, 1e-5),
        ] {
            let channel = reference_channel(loss, dark);
            let opt = optimize_nbar(protocol, &channel, &SHANNON).unwrap();
            let hi = protocol.nbar_max();
            let grid_best = (0..2000)
                .map(|i| {
                    let nbar = NBAR_MIN + (hi - NBAR_MIN) * i as f64 / 1999.0;
                    protocol_rate(protocol, nbar, &channel, &SHANNON)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                (opt.rate_opt - grid_best).abs() <= 1e-3 * grid_best,
                "{protocol} at {loss} dB: optimizer {} vs grid {grid_best}",
                opt.rate_opt
            );
        }
    }

    #[test]
    fn single_photon_has_no_free_nbar() {
        let channel = reference_channel(10.0, 2e-5);
        assert!(matches!(
            optimize_nbar(SweepProtocol::Bb84SinglePhoton, &channel, &SHANNON),
            Err(OptimizeError::NoFreeParameter)
        ));
    }

    #[test]
    fn bb84_poisson_is_beyond_cutoff_at_20db() {
        let channel = reference_channel(20.0, 2e-5);
        assert!(matches!(
            optimize_nbar(SweepProtocol::Bb84Poisson, &channel, &SHANNON),
            Err(OptimizeError::BeyondCutoff)
        ));
    }

    #[test]
    fn dps_nbar_is_loss_insensitive_while_bb84_falls() {
        let dps_opt = |loss: f64| {
            optimize_nbar(SweepProtocol::Dps, &reference_channel(loss, 1e-5), &SHANNON)
                .unwrap()
                .nbar_opt
        };
        let bb_opt = |loss: f64| {
            optimize_nbar(
                SweepProtocol::Bb84Poisson,
                &reference_channel(loss, 2e-5),
                &SHANNON,
            )
            .unwrap()
            .nbar_opt
        };
        let dps: Vec<f64> = (0..=30).step_by(5).map(|l| dps_opt(l as f64)).collect();
        let (min, max) = dps
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        assert!(max / min < 10.0, "DPS nbar* spread {min}..{max}");
        assert!(bb_opt(15.0) < bb_opt(0.0), "BB84 nbar* must fall with T");
    }

    #[test]
    fn sweep_single_error_free_row() {
        let spec = SweepSpec {
            loss_min_db: 0.0,
            loss_max_db: 0.0,
            loss_step_db: 1.0,
            protocols: vec![SweepProtocol::Dps],
            dark_count: Some(0.0),
            baseline_error: 0.0,
            error_correction: ErrorCorrection::ShannonLimit,
        };
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].nbar - 0.25).abs() <= 1e-5);
        assert!((rows[0].rate - 0.125).abs() <= 1e-9);
    }

    #[test]
    fn sweep_empty_protocol_list() {
        let mut spec = SweepSpec::reference_defaults();
        spec.protocols.clear();
        assert!(sweep(&spec).unwrap().is_empty());
    }

    #[test]
    fn sweep_row_count_and_order() {
        let mut spec = SweepSpec::reference_defaults();
        spec.loss_max_db = 5.0;
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 6 * 4);
        // Ordered by loss then protocol.
        assert_eq!(rows[0].loss_db, 0.0);
        assert_eq!(rows[4].loss_db, 1.0);
        assert_eq!(rows[0].protocol, crate::model::ProtocolKind::Dps);
        assert_eq!(rows[2].source, SourceKind::IdealSinglePhoton);
    }

    #[test]
    fn sweep_is_reproducible() {
        let mut spec = SweepSpec::reference_defaults();
        spec.loss_max_db = 10.0;
        spec.loss_step_db = 2.0;
        let a = sweep(&spec).unwrap();
        let b = sweep(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cutoff_without_dark_counts_never_triggers() {
        let r = cutoff_loss(SweepProtocol::Dps, Some(0.0), 0.0, &SHANNON).unwrap();
        assert_eq!(r, CutoffResult::NoneBelowCeiling);
    }

    #[test]
    fn cutoff_requires_a_living_channel() {
        // A 49% baseline error kills the rate already at 0 dB.
        assert!(matches!(
            cutoff_loss(SweepProtocol::Dps, None, 0.49, &SHANNON),
            Err(OptimizeError::NoRateAtZeroLoss)
        ));
    }

    #[test]
    fn optimized_rates_never_increase_with_loss() {
        let mut spec = SweepSpec::reference_defaults();
        spec.loss_max_db = 45.0;
        spec.loss_step_db = 5.0;
        let rows = sweep(&spec).unwrap();
        for p in SweepProtocol::ALL {
            let curve: Vec<f64> = rows
                .iter()
                .filter(|r| (r.protocol, r.source) == (p.protocol_kind(), p.source_kind()))
                .map(|r| r.rate)
                .collect();
            assert_eq!(curve.len(), 10);
            assert!(
                curve.windows(2).all(|w| w[1] <= w[0]),
                "{p} rates increased with loss: {curve:?}"
            );
        }
    }

    #[test]
    fn dps_cutoff_is_finite_with_dark_counts() {
        let r = cutoff_loss(SweepProtocol::Dps, None, DEFAULT_BASELINE_ERROR, &SHANNON).unwrap();
        match r {
            CutoffResult::Finite(loss) => {
                assert!(loss > 25.0 && loss < 40.0, "DPS cutoff at {loss} dB")
            }
            CutoffResult::NoneBelowCeiling => panic!("expected a finite cutoff"),
        }
    }

    #[test]
    fn protocol_names_round_trip() {
        for p in SweepProtocol::ALL {
            assert_eq!(p.to_string().parse::<SweepProtocol>().unwrap(), p);
        }
        assert!("bb85".parse::<SweepProtocol>().is_err());
    }
}
