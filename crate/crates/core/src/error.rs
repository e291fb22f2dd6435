use thiserror::Error;

/// Errors reported by the geometry, criteria, and generation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A homogeneous line whose normal part `(l1, l2)` is zero has no
    /// direction or point/line distance.
    #[error("degenerate homogeneous line: normal part (l1, l2) is zero")]
    DegenerateLine,

    /// The 3D point sits behind the camera (non-positive depth).
    #[error("point is behind the camera (depth {depth})")]
    BehindCamera { depth: f64 },

    /// The 3D point projects to infinity (depth smaller than 1e-12 in
    /// magnitude).
    #[error("point projects to infinity (|depth| = {depth_abs} < 1e-12)")]
    ProjectsToInfinity { depth_abs: f64 },

    /// Two cameras share a center, so no fundamental matrix relates them.
    #[error("camera centers coincide; the fundamental matrix is undefined")]
    CoincidentCenters,

    /// The supplied matrix is not a valid rank-2 fundamental matrix.
    #[error("matrix is not rank 2 (singular values {sigma1}, {sigma2}, {sigma3})")]
    NotRankTwo { sigma1: f64, sigma2: f64, sigma3: f64 },

    /// An epipolar line degenerated to the zero vector (`lambda = 0`), which
    /// happens when a point coincides with an epipole.
    #[error("degenerate epipolar line: lambda = 0 (point at an epipole)")]
    DegenerateEpipolarLine,

    /// The gradient of the epipolar constraint vanished, so no first-order
    /// correction step exists.
    #[error("epipolar constraint gradient vanishes at this correspondence")]
    VanishingGradient,

    /// A point of the correspondence lies on its epipole (within 1e-9 px),
    /// where the optimal correction is undefined.
    #[error("correspondence point coincides with an epipole")]
    PointAtEpipole,

    /// No correction candidate produced a finite cost.
    #[error("numerical failure: no correction candidate has a finite cost")]
    NumericalFailure,

    /// The epipolar pencil produced a vanishing line at parameter `t`.
    #[error("degenerate pencil: epipolar line vanishes at t = {t}")]
    DegeneratePencil { t: f64 },

    /// Rejection sampling failed to find an acceptable draw.
    #[error("sampling exhausted after {attempts} rejected draws")]
    SamplingExhausted { attempts: usize },

    /// The generator could not hit the target error within the trial budget.
    #[error("no correspondence at the target error after {trials} trials")]
    MaxTrialsExceeded { trials: usize },

    /// The generate-and-project seed mode needs the camera pair that produced
    /// the fundamental matrix.
    #[error("generate-and-project seeding requires the camera pair")]
    MissingCameras,

    /// A configuration value is out of its documented range.
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
