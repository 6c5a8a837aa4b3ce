//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file (bad header, unparsable row, missing metadata).
    #[error("format error in {path}: {message}")]
    Format { path: String, message: String },

    /// A grid file does not describe a complete rectangular grid.
    #[error("non-rectangular grid: {0}")]
    NonRectangular(String),

    /// Fewer samples inside the fit window than polynomial coefficients.
    #[error("underdetermined fit: {samples} samples for {coefficients} coefficients")]
    Underdetermined { samples: usize, coefficients: usize },

    /// The least-squares system is numerically rank deficient.
    #[error("ill-conditioned fit: condition estimate {condition:.3e}")]
    IllConditioned { condition: f64 },

    /// The coarse argmin of |B|² sits on the grid boundary.
    #[error("no interior minimum: coarse argmin at ({x_um}, {z_um}) μm is on the grid boundary")]
    NoInteriorMinimum { x_um: f64, z_um: f64 },

    /// Field evaluation requested too close to a line current.
    #[error("evaluation point ({x_um}, {z_um}) μm is within 1 μm of a wire")]
    TooCloseToWire { x_um: f64, z_um: f64 },

    #[error("unknown wire preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown level label ({f}, {m_f})")]
    UnknownLevel { f: u8, m_f: i8 },

    /// Magnetic-dipole selection rule |Δm| ≤ 1 violated.
    #[error("invalid transition: |Δm| = {delta_m} exceeds 1")]
    InvalidTransition { delta_m: i32 },

    /// No sign change of df/dB in the clock-field search interval.
    #[error("d(f)/dB has no sign change in [{lo_mt}, {hi_mt}] mT")]
    NoSignChange { lo_mt: f64, hi_mt: f64 },

    /// The drive is too close to a coupled hyperfine resonance for the
    /// second-order shift formula.
    #[error(
        "drive within {detuning_mhz:.6} MHz of the ({f_lower},{m_lower})-({f_upper},{m_upper}) \
         resonance{at}"
    )]
    ResonanceProximity {
        detuning_mhz: f64,
        f_lower: u8,
        m_lower: i8,
        f_upper: u8,
        m_upper: i8,
        /// " at (x, z) μm" when raised during map evaluation, else empty.
        at: String,
    },

    /// Floquet eigenvector overlap with the unperturbed level too small for
    /// an adiabatic assignment.
    #[error("ambiguous Floquet connection: best overlap {overlap:.3} < 0.7 for level index {level}")]
    AmbiguousConnection { level: usize, overlap: f64 },

    /// Covariance cannot be formed: Jacobian has a near-null direction.
    #[error("rank-deficient Jacobian; degenerate parameter combination: {combination}")]
    RankDeficient { combination: String },

    /// Rendering an all-masked (or empty) map.
    #[error("empty map: no unmasked nodes")]
    EmptyMap,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for data errors, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format { .. }
            | Error::NonRectangular(_)
            | Error::UnknownPreset(_)
            | Error::UnknownLevel { .. }
            | Error::InvalidTransition { .. }
            | Error::InvalidArgument(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::EmptyMap => 2,
            Error::Underdetermined { .. }
            | Error::IllConditioned { .. }
            | Error::NoInteriorMinimum { .. }
            | Error::TooCloseToWire { .. }
            | Error::NoSignChange { .. }
            | Error::ResonanceProximity { .. }
            | Error::AmbiguousConnection { .. }
            | Error::RankDeficient { .. } => 3,
        }
    }
}
