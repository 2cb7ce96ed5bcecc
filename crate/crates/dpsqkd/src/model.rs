//! Physical-parameter types shared by the analytic and Monte Carlo layers.
//!
//! Loss is specified in dB at every interface; transmission is the internal
//! canonical form. All values are immutable after construction and
//! constructors are total: an invalid input never yields a usable value.

use thiserror::Error;

/// Default per-slot dark count for a two-detector DPS receiver, summed over
/// both detectors.
pub const DPS_DARK_COUNT: f64 = 1e-5;
/// Default per-slot dark count for a four-detector BB84 receiver.
pub const BB84_DARK_COUNT: f64 = 2e-5;
/// Default baseline error fraction of the system.
pub const DEFAULT_BASELINE_ERROR: f64 = 0.01;

/// Validation failure for a physical parameter. One variant per violated
/// invariant, naming the field.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("loss_db must be a nonnegative finite number, got {0}")]
    NegativeLoss(f64),
    #[error("transmission out of range (0, 1]: {0}")]
    TransmissionOutOfRange(f64),
    #[error("dark_count out of range [0, 1): {0}")]
    DarkCountOutOfRange(f64),
    #[error("baseline_error out of range [0, 0.5): {0}")]
    BaselineErrorOutOfRange(f64),
    #[error("mean photon number must be positive and finite, got {0}")]
    NbarOutOfRange(f64),
    #[error("error-correction factor must be finite and >= 1, got f({e}) = {f}")]
    EfficiencyBelowShannon { e: f64, f: f64 },
    #[error("error-correction table must be nonempty with error rates in [0, 1]")]
    BadEfficiencyTable,
    #[error("config line {line}: {reason}")]
    BadConfigLine { line: usize, reason: String },
    #[error("unknown config key `{0}`")]
    UnknownConfigKey(String),
}

/// dB loss to linear transmission: `10^(-loss_db / 10)`.
pub fn loss_to_transmission(loss_db: f64) -> Result<f64, ModelError> {
    if !loss_db.is_finite() || loss_db < 0.0 {
        return Err(ModelError::NegativeLoss(loss_db));
    }
    Ok(10f64.powf(-loss_db / 10.0))
}

/// Linear transmission back to dB loss: `-10 log10(T)`.
pub fn transmission_to_loss(transmission: f64) -> Result<f64, ModelError> {
    if !(transmission > 0.0 && transmission <= 1.0) {
        return Err(ModelError::TransmissionOutOfRange(transmission));
    }
    Ok(-10.0 * transmission.log10())
}

/// Quantum channel plus receiver imperfections: loss, per-slot dark count
/// (summed over all of the receiver's detectors), and baseline error
/// fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    loss_db: f64,
    transmission: f64,
    dark_count: f64,
    baseline_error: f64,
}

impl ChannelModel {
    /// Build from a dB loss figure. Transmission is derived as
    /// `10^(-loss_db/10)`.
    pub fn from_loss_db(
        loss_db: f64,
        dark_count: f64,
        baseline_error: f64,
    ) -> Result<Self, ModelError> {
        let transmission = loss_to_transmission(loss_db)?;
        Self::check(transmission, dark_count, baseline_error)?;
        Ok(Self {
            loss_db,
            transmission,
            dark_count,
            baseline_error,
        })
    }

    /// Build from a linear transmission in (0, 1].
    pub fn from_transmission(
        transmission: f64,
        dark_count: f64,
        baseline_error: f64,
    ) -> Result<Self, ModelError> {
        let loss_db = transmission_to_loss(transmission)?;
        Self::check(transmission, dark_count, baseline_error)?;
        Ok(Self {
            loss_db,
            transmission,
            dark_count,
            baseline_error,
        })
    }

    fn check(transmission: f64, dark_count: f64, baseline_error: f64) -> Result<(), ModelError> {
        if !(transmission > 0.0 && transmission <= 1.0) {
            return Err(ModelError::TransmissionOutOfRange(transmission));
        }
        if !(0.0..1.0).contains(&dark_count) {
            return Err(ModelError::DarkCountOutOfRange(dark_count));
        }
        // An error rate at or above 1/2 carries no key.
        if !(0.0..0.5).contains(&baseline_error) {
            return Err(ModelError::BaselineErrorOutOfRange(baseline_error));
        }
        Ok(())
    }

    pub fn loss_db(&self) -> f64 {
        self.loss_db
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    pub fn dark_count(&self) -> f64 {
        self.dark_count
    }

    pub fn baseline_error(&self) -> f64 {
        self.baseline_error
    }
}

/// Photon-number statistics of the transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// Attenuated laser: Poissonian photon number, freely adjustable mean.
    PoissonCoherent,
    /// Ideal single-photon source: exactly one photon per pulse.
    IdealSinglePhoton,
}

impl std::fmt::Display for SourceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SourceKind::PoissonCoherent => write!(f, "poisson"),
            SourceKind::IdealSinglePhoton => write!(f, "single"),
        }
    }
}

/// A light source with its mean photon number per pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceModel {
    kind: SourceKind,
    mean_photon_number: f64,
}

impl SourceModel {
    /// Poisson source with mean photon number `nbar > 0`.
    pub fn poisson(nbar: f64) -> Result<Self, ModelError> {
        if !nbar.is_finite() || nbar <= 0.0 {
            return Err(ModelError::NbarOutOfRange(nbar));
        }
        Ok(Self {
            kind: SourceKind::PoissonCoherent,
            mean_photon_number: nbar,
        })
    }

    /// Ideal single-photon source: one photon per pulse, no multi-photon
    /// emissions.
    pub fn ideal_single_photon() -> Self {
        Self {
            kind: SourceKind::IdealSinglePhoton,
            mean_photon_number: 1.0,
        }
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.mean_photon_number
    }

    /// Probability that a pulse carries more than one photon. For the
    /// Poisson source this is the bound `nbar^2 / 2`; an ideal single-photon
    /// source never emits multi-photon states.
    pub fn multiphoton_probability(&self) -> f64 {
        match self.kind {
            SourceKind::PoissonCoherent => self.mean_photon_number.powi(2) / 2.0,
            SourceKind::IdealSinglePhoton => 0.0,
        }
    }
}

/// Protocol family a receiver implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    /// Differential phase shift, two-detector receiver.
    Dps,
    /// BB84 with passive basis modulation, four-detector receiver.
    Bb84,
    /// DPS as seen by a sequential (block resend) adversary.
    DpsSequentialAdversary,
}

impl ProtocolKind {
    /// Number of single-photon detectors in the receiver.
    pub fn detector_count(&self) -> u32 {
        match self {
            ProtocolKind::Dps | ProtocolKind::DpsSequentialAdversary => 2,
            ProtocolKind::Bb84 => 4,
        }
    }

    /// Default aggregated per-slot dark count for this receiver.
    pub fn default_dark_count(&self) -> f64 {
        match self {
            ProtocolKind::Dps | ProtocolKind::DpsSequentialAdversary => DPS_DARK_COUNT,
            ProtocolKind::Bb84 => BB84_DARK_COUNT,
        }
    }
}

impl std::fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProtocolKind::Dps => write!(f, "dps"),
            ProtocolKind::Bb84 => write!(f, "bb84"),
            ProtocolKind::DpsSequentialAdversary => write!(f, "dps-seq"),
        }
    }
}

/// Error-correction inefficiency `f(e) >= 1`; 1 is the Shannon limit.
#[derive(Debug, Clone, PartialEq)]
pub enum ErrorCorrection {
    /// `f(e) = 1` for all `e`: codes operating at the Shannon limit.
    ShannonLimit,
    /// Piecewise-linear lookup of `f` against the error rate, clamped at the
    /// table ends. Rows are sorted by error rate.
    Table(Vec<(f64, f64)>),
}

impl ErrorCorrection {
    /// Build a lookup table from `(e, f)` rows. Rows are sorted by `e`;
    /// every `f` must be finite and at least 1.
    pub fn from_table(mut rows: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        if rows.is_empty() {
            return Err(ModelError::BadEfficiencyTable);
        }
        for &(e, f) in &rows {
            if !(0.0..=1.0).contains(&e) || !e.is_finite() {
                return Err(ModelError::BadEfficiencyTable);
            }
            if !f.is_finite() || f < 1.0 {
                return Err(ModelError::EfficiencyBelowShannon { e, f });
            }
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(ErrorCorrection::Table(rows))
    }

    /// Parse a two-column `e f` table (whitespace or comma separated, `#`
    /// comments allowed).
    pub fn parse_table(text: &str) -> Result<Self, ModelError> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(|c: char| c == ',' || c.is_whitespace());
            let mut fields = parts.by_ref().filter(|s| !s.is_empty());
            let (e, f) = match (fields.next(), fields.next()) {
                (Some(a), Some(b)) => (
                    a.parse::<f64>().map_err(|_| ModelError::BadConfigLine {
                        line: idx + 1,
                        reason: format!("bad number `{a}`"),
                    })?,
                    b.parse::<f64>().map_err(|_| ModelError::BadConfigLine {
                        line: idx + 1,
                        reason: format!("bad number `{b}`"),
                    })?,
                ),
                _ => {
                    return Err(ModelError::BadConfigLine {
                        line: idx + 1,
                        reason: "expected two columns: error_rate factor".into(),
                    })
                }
            };
            rows.push((e, f));
        }
        Self::from_table(rows)
    }

    /// Evaluate `f(e)`.
    pub fn factor(&self, e: f64) -> f64 {
        match self {
            ErrorCorrection::ShannonLimit => 1.0,
            ErrorCorrection::Table(rows) => {
                if e <= rows[0].0 {
                    return rows[0].1;
                }
                if e >= rows[rows.len() - 1].0 {
                    return rows[rows.len() - 1].1;
                }
                let i = rows.partition_point(|&(re, _)| re <= e);
                let (e0, f0) = rows[i - 1];
                let (e1, f1) = rows[i];
                if e1 == e0 {
                    f0
                } else {
                    f0 + (f1 - f0) * (e - e0) / (e1 - e0)
                }
            }
        }
    }
}

/// Re-checks every type invariant on an assembled channel/source pair.
/// Constructors already enforce these; this is the single entry point used
/// when parameters arrive from external configuration.
pub fn validate(channel: &ChannelModel, source: &SourceModel) -> Result<(), ModelError> {
    ChannelModel::check(
        channel.transmission(),
        channel.dark_count(),
        channel.baseline_error(),
    )?;
    if source.mean_photon_number() <= 0.0 || source.mean_photon_number().is_nan() {
        return Err(ModelError::NbarOutOfRange(source.mean_photon_number()));
    }
    Ok(())
}

/// One parsed `key=value` configuration fragment. Every field is optional;
/// command-line flags override whatever the fragment supplies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFragment {
    pub loss_db: Option<f64>,
    pub dark_count: Option<f64>,
    pub baseline_error: Option<f64>,
    pub nbar: Option<f64>,
    pub source: Option<SourceKind>,
    pub protocol: Option<ProtocolKind>,
    pub f_ec: Option<String>,
}

/// Parse a plain-text `key=value` configuration fragment. Blank lines and
/// `#` comments are ignored; unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<ConfigFragment, ModelError> {
    let mut cfg = ConfigFragment::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| ModelError::BadConfigLine {
            line: idx + 1,
            reason: reason.to_string(),
        };
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let key = key.trim();
        let value = value.trim();
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| bad(&format!("bad number `{value}`")))
        };
        match key {
            "loss_db" => cfg.loss_db = Some(num()?),
            "dark_count" => cfg.dark_count = Some(num()?),
            "baseline_error" => cfg.baseline_error = Some(num()?),
            "nbar" => cfg.nbar = Some(num()?),
            "source" => {
                cfg.source = Some(match value {
                    "poisson" => SourceKind::PoissonCoherent,
                    "single" => SourceKind::IdealSinglePhoton,
                    _ => return Err(bad("source must be `poisson` or `single`")),
                })
            }
            "protocol" => {
                cfg.protocol = Some(match value {
                    "dps" => ProtocolKind::Dps,
                    "bb84" => ProtocolKind::Bb84,
                    "dps-seq" => ProtocolKind::DpsSequentialAdversary,
                    _ => return Err(bad("protocol must be `dps`, `bb84`, or `dps-seq`")),
                })
            }
            "f_ec" => cfg.f_ec = Some(value.to_string()),
            other => return Err(ModelError::UnknownConfigKey(other.to_string())),
        }
    }
    Ok(cfg)
}
