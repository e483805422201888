use crate::error::{ActivityError, Result};

/// Absolute tolerances used across validation, certificates and the solver.
///
/// Dimensions are small (d up to a few dozen) with O(1) entries, so every
/// tolerance is absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Max allowed `|A_ij - conj(A_ji)|`.
    pub eps_herm: f64,
    /// Smallest eigenvalue accepted as nonnegative is `-eps_psd`.
    pub eps_psd: f64,
    /// Allowed deviation of a state's trace from 1.
    pub eps_trace: f64,
    /// Duality gap accepted from the cutting-plane solver.
    pub eps_solver: f64,
    /// Slack for certificate checks (unit diagonals, POVM completeness, witness sums).
    pub eps_cert: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_herm: 1e-9,
            eps_psd: 1e-9,
            eps_trace: 1e-9,
            eps_solver: 1e-8,
            eps_cert: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eps_herm", self.eps_herm),
            ("eps_psd", self.eps_psd),
            ("eps_trace", self.eps_trace),
            ("eps_solver", self.eps_solver),
            ("eps_cert", self.eps_cert),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ActivityError::InvalidOption { name, value });
            }
        }
        Ok(())
    }
}
