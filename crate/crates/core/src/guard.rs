//! Resource guards for exhaustive enumerations.

use crate::error::{Error, Result};

/// Upper bounds on exhaustive work. All limits scale together via [`Guards::scaled`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest width for which nesting relations are enumerated.
    pub nesting_width: usize,
    /// Largest width for which tree-definable orders are enumerated.
    pub tdo_width: usize,
    /// Largest text width for explicit run enumeration of parenthesizing automata.
    pub wpa_run_width: usize,
    /// Largest domain for second-order quantifier enumeration.
    pub subset_width: usize,
    /// Maximal number of state sequences tried by brute-force run enumeration.
    pub bruteforce_runs: u128,
    /// Maximal number of structures visited by bounded checks.
    pub enumerated: u128,
    /// Largest word length for derivation-tree enumeration.
    pub derivation_width: usize,
    /// Maximal number of substitution steps in normalizations.
    pub unfold_steps: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            nesting_width: 14,
            tdo_width: 9,
            wpa_run_width: 6,
            subset_width: 12,
            bruteforce_runs: 4_000_000,
            enumerated: 20_000_000,
            derivation_width: 12,
            unfold_steps: 400,
        }
    }
}

impl Guards {
    /// Multiplies every limit by `num / den`, keeping each limit at least 1.
    pub fn scaled(&self, num: u64, den: u64) -> Guards {
        let den = den.max(1) as u128;
        let num = num as u128;
        let s = |v: usize| -> usize { ((v as u128 * num) / den).max(1) as usize };
        let s128 = |v: u128| -> u128 { (v.saturating_mul(num) / den).max(1) };
        Guards {
            nesting_width: s(self.nesting_width),
            tdo_width: s(self.tdo_width),
            wpa_run_width: s(self.wpa_run_width),
            subset_width: s(self.subset_width),
            bruteforce_runs: s128(self.bruteforce_runs),
            enumerated: s128(self.enumerated),
            derivation_width: s(self.derivation_width),
            unfold_steps: s(self.unfold_steps),
        }
    }

    pub(crate) fn check(what: &'static str, limit: u128, actual: u128) -> Result<()> {
        if actual > limit {
            Err(Error::Guard { what, limit, actual })
        } else {
            Ok(())
        }
    }
}
