use crate::error::{usage, Result};

/// Environment variable overriding [`Caps::sieve_max`].
pub const MAX_SIEVE_ENV: &str = "CYCLOSCOPE_MAX_SIEVE";

/// Size limits applied across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `p` for which `factor_oracle` (and therefore witnesses and
    /// brute-force membership) will run.
    pub oracle_cap: u64,
    /// Largest `p` accepted by the trace-multiset routines.
    pub trace_cap: u64,
    /// Largest bound accepted by the prime sieve in surveys.
    pub sieve_max: u64,
    /// Largest limit accepted by `lemma_checks`.
    pub lemma_cap: u64,
    /// Largest Euler-product cutoff used by the constant evaluators.
    pub constants_max_cutoff: u64,
    /// Largest `|a|` factored by trial division.
    pub factor_cap: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle_cap: 3000,
            trace_cap: 200_000,
            sieve_max: 100_000_000,
            lemma_cap: 100_000,
            constants_max_cutoff: 1_000_000_000,
            factor_cap: 1_000_000_000_000,
        }
    }
}

impl Caps {
    /// Defaults with `CYCLOSCOPE_MAX_SIEVE` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(raw) = std::env::var(MAX_SIEVE_ENV) {
            caps.sieve_max = match raw.trim().parse::<u64>() {
                Ok(v) if v >= 2 => v,
                _ => return usage(format!("{MAX_SIEVE_ENV} must be an integer >= 2, got {raw:?}")),
            };
        }
        Ok(caps)
    }
}
