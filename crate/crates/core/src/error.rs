use thiserror::Error;

/// Error type shared by every computation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input field violated its declared constraint.
    #[error("invalid {field}: {message}")]
    Validation { field: &'static str, message: String },

    /// Unscaled Airy evaluation was requested outside its supported range.
    #[error("airy argument |z| = {modulus:.3e} exceeds the unscaled evaluation limit {limit:.1e}")]
    AiryDomain { modulus: f64, limit: f64 },

    /// Newton (or secant) iteration for one resonance did not converge.
    #[error(
        "resonance n = {index} did not converge after {iterations} iterations \
         (last iterate {last_re:.12e} + {last_im:.12e}i, residual {residual:.3e})"
    )]
    Convergence {
        index: usize,
        iterations: usize,
        last_re: f64,
        last_im: f64,
        residual: f64,
    },

    /// Two root iterates landed on the same resonance.
    #[error("resonance roots {first} and {second} collided: separation {separation:.3e} < {limit:.1e}")]
    RootCollision {
        first: usize,
        second: usize,
        separation: f64,
        limit: f64,
    },

    /// More than the tolerated fraction of sweep points failed.
    #[error("sweep aborted: {failed} of {total} grid points failed (> 10% tolerance)")]
    PartialSweep { failed: usize, total: usize },

    /// An operation that needs at least one state received none.
    #[error("empty resonance list")]
    EmptyStates,

    /// Roughness ionization is undefined for a state at or above the barrier top.
    #[error("state n = {index} lies at or above the barrier (z0 = {z0:.6}, Re lambda = {re_lambda:.6})")]
    AboveBarrier { index: usize, z0: f64, re_lambda: f64 },

    /// Scaling-law fit needs at least three distinct potentials.
    #[error("degenerate scaling fit: {0}")]
    DegenerateFit(String),

    /// Shooting-grid construction or use violated an invariant.
    #[error("shooting grid: {0}")]
    Grid(String),

    /// A tabulated roughness spectrum failed validation.
    #[error("roughness spectrum: {0}")]
    Spectrum(String),
}

pub type Result<T> = std::result::Result<T, Error>;
