use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 128;
pub const MIN_BITS: u32 = 64;
pub const MAX_BITS: u32 = 4096;
pub const PREC_ENV: &str = "ELLINT_PREC_BITS";

/// Target precision of a computation plus the escalation policy used by the verifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub bits: u32,
    /// Multiplier applied on margin collapse.
    pub escalation_factor: u32,
    /// Number of escalation steps allowed before giving up.
    pub max_escalations: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self::new(DEFAULT_BITS)
    }
}

impl PrecisionConfig {
    pub fn new(bits: u32) -> Self {
        PrecisionConfig {
            bits,
            escalation_factor: 2,
            max_escalations: 1,
        }
    }

    pub fn checked(bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(Error::ParamOutOfRange(format!(
                "precision {bits} bits outside [{MIN_BITS}, {MAX_BITS}]"
            )));
        }
        Ok(Self::new(bits))
    }

    /// Default precision, honouring `ELLINT_PREC_BITS` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PREC_ENV) {
            Ok(s) => {
                let bits = s
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(s.clone()))?;
                Self::checked(bits)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_bits(self, bits: u32) -> Self {
        PrecisionConfig { bits, ..self }
    }

    pub fn escalated(self) -> Self {
        self.with_bits(self.bits * self.escalation_factor)
    }
}
