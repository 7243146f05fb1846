//! Error type shared across the crate.
//!
//! Every fallible operation returns [`crate::Result`]; the variants below are
//! the contract-level failures named by the individual modules (domain
//! violations, non-convergent quadrature, schema problems in interchange
//! files, …). Panics are reserved for internal logic errors.

use thiserror::Error;

/// Unified error enum for the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric input lies outside its documented domain (angles outside
    /// [0, π], coordinates outside [-2, 2], a non-prime p, k₂ < 3, …).
    #[error("domain violation: {0}")]
    Domain(String),

    /// A Satake multiset fails the unitarity constraint it was promised to
    /// satisfy (product law, inverse-closure, modulus pattern).
    #[error("unitarity violation: {0}")]
    Unitarity(String),

    /// A parameter multiset matches none of the unitary shapes within
    /// tolerance.
    #[error("unclassifiable parameter multiset: {0}")]
    Unclassifiable(String),

    /// Nested quadrature failed to reach the requested tolerance at the
    /// maximum refinement level.
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    /// The rejection-sampling envelope was exceeded by a proposed density
    /// value; the caller re-estimates and retries.
    #[error("rejection envelope too small: density {density} exceeds bound {bound} at ({x}, {y})")]
    EnvelopeTooSmall {
        /// Density value that broke the bound.
        density: f64,
        /// Envelope bound in force.
        bound: f64,
        /// Proposal abscissa.
        x: f64,
        /// Proposal ordinate.
        y: f64,
    },

    /// A regular-element character formula was evaluated too close to the
    /// singular set (some Weyl-denominator factor below the margin).
    #[error("singular element: regularity margin {margin:.3e} below {min:.3e}")]
    SingularElement {
        /// Product of the denominator factor moduli at the input.
        margin: f64,
        /// Smallest admissible margin.
        min: f64,
    },

    /// The split-Cartan ordering |a₁| > |a₂| > 0 required by a character
    /// formula was violated.
    #[error("ordering violation: {0}")]
    OrderingViolation(String),

    /// An interchange file does not match the documented schema.
    #[error("schema violation: {0}")]
    SchemaViolation(String),

    /// A dataset invariant failed on construction (duplicate (form, prime)
    /// pair, coordinate outside the closed square, prime dividing the level).
    #[error("dataset invariant violated: {0}")]
    DatasetInvariant(String),

    /// A prime-sum evaluation needed a (form, prime) record the dataset does
    /// not contain.
    #[error("missing prime: form {form_id} has no record at p = {p}")]
    MissingPrime {
        /// Form whose record is missing.
        form_id: String,
        /// Prime with no record.
        p: u64,
    },

    /// The two sides of a test-function pairing (direct vs Fourier) disagree
    /// beyond the self-check tolerance.
    #[error("Plancherel mismatch: direct {direct} vs Fourier {fourier} (|Δ| = {delta:.3e})")]
    PlancherelMismatch {
        /// Value from the eigenvalue-side integral.
        direct: f64,
        /// Value from the Fourier-side atom + integral.
        fourier: f64,
        /// Absolute difference.
        delta: f64,
    },

    /// Underlying I/O failure while reading or writing interchange files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// CSV parse failure (wrapped to keep the source error chain).
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// JSON parse or serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
