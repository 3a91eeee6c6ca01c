//! Size caps for dense constructions and exhaustive enumeration.

use crate::error::{Error, Result};

pub const DEFAULT_QUBIT_CAP: usize = 10;
pub const DEFAULT_ENUMERATION_CAP: usize = 4;
/// Environment variable that overrides [`DEFAULT_QUBIT_CAP`].
pub const QUBIT_CAP_ENV: &str = "DJSIM_QUBIT_CAP";

/// Caps applied by the operations that build dense `2^n` objects or sweep
/// every promise function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub qubits: usize,
    pub enumeration: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            qubits: DEFAULT_QUBIT_CAP,
            enumeration: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl Limits {
    /// Defaults, with the qubit cap taken from `DJSIM_QUBIT_CAP` when it is
    /// set to a positive integer. The enumeration cap never exceeds the
    /// qubit cap.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(QUBIT_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
        {
            limits.qubits = cap;
            limits.enumeration = limits.enumeration.min(cap);
        }
        limits
    }

    pub fn check_qubits(&self, n: usize) -> Result<()> {
        if n > self.qubits {
            return Err(Error::QubitCapExceeded {
                requested: n,
                cap: self.qubits,
            });
        }
        Ok(())
    }

    pub fn check_enumeration(&self, n: usize) -> Result<()> {
        if n > self.enumeration {
            return Err(Error::QubitCapExceeded {
                requested: n,
                cap: self.enumeration,
            });
        }
        Ok(())
    }
}
