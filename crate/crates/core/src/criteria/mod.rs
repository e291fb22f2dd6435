//! Error criteria for a correspondence under a fundamental matrix.
//!
//! All criteria measure how far a measured pair `B = (p, p')` is from
//! satisfying the epipolar constraint, but at different cost/accuracy
//! trade-offs:
//!
//! - [`algebraic_distance`]: the raw constraint residual. Cheapest, but its
//!   scale depends on the matrix normalization and the point position.
//! - [`sed_sq`]: squared symmetric epipolar distance, the sum of squared
//!   point-to-line distances in both images. Never smaller than twice the
//!   true squared reprojection error.
//! - [`sampson_sq`]: squared first-order geometric error (one Gauss–Newton
//!   step on the constraint), never larger than half the SED and an accurate
//!   estimate of the true squared reprojection error at realistic noise.
//! - [`sampson_correct`] / [`kanatani_correct`]: the first-order correction
//!   and its fixed-point refinement, which converges to the exact corrected
//!   pair for small noise.
//! - [`hartley_sturm_correct`]: the exact (gold standard) correction by
//!   global minimization over the pencil of epipolar line pairs.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::geometry::{Correspondence, FundamentalMatrix, Point2};

mod hartley_sturm;
mod poly;

pub use hartley_sturm::{hartley_sturm_correct, HsNormalForm};

/// A corrected correspondence together with its squared correction cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionResult {
    /// Corrected point in the first image.
    pub p_hat: Point2,
    /// Corrected point in the second image.
    pub p_hat_prime: Point2,
    /// Squared distance moved, `|p - p_hat|^2 + |p' - p_hat_prime|^2`.
    pub e_sq: f64,
    /// Work performed: relinearization steps for the iterative correction,
    /// candidate critical points examined for the exact one.
    pub iterations: usize,
}

/// The algebraic distance `R = p~^T F p'~`: the raw epipolar-constraint
/// residual at the measured pair.
///
/// Signed, scale-dependent (it follows the normalization of `F`), and zero
/// exactly on perfect correspondences.
pub fn algebraic_distance(fm: &FundamentalMatrix, b: &Correspondence) -> f64 {
    b.p.homogeneous().dot(&(fm.matrix() * b.p_prime.homogeneous()))
}

/// The squared symmetric epipolar distance: `d(p, l)^2 + d(p', l')^2`, the
/// squared distances of each measured point to the epipolar line induced by
/// the other.
///
/// Errors with `DegenerateEpipolarLine` when either point maps to a line
/// with vanishing normal (it lies on the other image's epipole).
pub fn sed_sq(fm: &FundamentalMatrix, b: &Correspondence) -> Result<f64> {
    let lines = fm.epipolar_lines(b);
    if lines.lambda == 0.0 || lines.lambda_prime == 0.0 {
        return Err(Error::DegenerateEpipolarLine);
    }
    let r = b.p.homogeneous().dot(&lines.l.to_vector());
    let d = r / lines.lambda;
    let d_prime = r / lines.lambda_prime;
    Ok(d * d + d_prime * d_prime)
}

/// The squared Sampson error `R^2 / (lambda^2 + lambda'^2)`: the squared
/// norm of the first-order correction of the pair.
///
/// Errors with `VanishingGradient` when both epipolar-line normals vanish
/// (each point sits on the other image's epipole).
pub fn sampson_sq(fm: &FundamentalMatrix, b: &Correspondence) -> Result<f64> {
    let lines = fm.epipolar_lines(b);
    let denom = lines.lambda * lines.lambda + lines.lambda_prime * lines.lambda_prime;
    if denom == 0.0 {
        return Err(Error::VanishingGradient);
    }
    let r = b.p.homogeneous().dot(&lines.l.to_vector());
    Ok(r * r / denom)
}

/// State threaded through the relinearized correction steps.
#[derive(Clone, Copy)]
struct StepState {
    dp: Vector2<f64>,
    dp_prime: Vector2<f64>,
    p_hat: Point2,
    p_hat_prime: Point2,
    e_sq: f64,
}

impl StepState {
    fn initial(b: &Correspondence) -> Self {
        Self {
            dp: Vector2::zeros(),
            dp_prime: Vector2::zeros(),
            p_hat: b.p,
            p_hat_prime: b.p_prime,
            e_sq: 0.0,
        }
    }
}

/// One relinearization of the constraint about the current corrected pair:
/// solves for the smallest displacement of the measured pair that zeroes the
/// linearized constraint there.
fn relinearized_step(
    fm: &FundamentalMatrix,
    b: &Correspondence,
    state: &StepState,
) -> Result<StepState> {
    let at = Correspondence::new(state.p_hat, state.p_hat_prime);
    let lines = fm.epipolar_lines(&at);
    let n = lines.l.normal();
    let n_prime = lines.l_prime.normal();
    let denom = n.norm_squared() + n_prime.norm_squared();
    if denom == 0.0 {
        return Err(Error::VanishingGradient);
    }
    let residual = state.p_hat.homogeneous().dot(&lines.l.to_vector());
    let g = residual + n.dot(&state.dp) + n_prime.dot(&state.dp_prime);
    let k = g / denom;
    let dp = k * n;
    let dp_prime = k * n_prime;
    Ok(StepState {
        dp,
        dp_prime,
        p_hat: Point2::new(b.p.x - dp.x, b.p.y - dp.y),
        p_hat_prime: Point2::new(b.p_prime.x - dp_prime.x, b.p_prime.y - dp_prime.y),
        e_sq: dp.norm_squared() + dp_prime.norm_squared(),
    })
}

/// The first-order (Sampson) correction: one linearization of the constraint
/// at the measured pair. Its `e_sq` equals [`sampson_sq`] up to rounding.
///
/// Errors with `VanishingGradient` when both epipolar-line normals vanish.
pub fn sampson_correct(fm: &FundamentalMatrix, b: &Correspondence) -> Result<CorrectionResult> {
    let state = relinearized_step(fm, b, &StepState::initial(b))?;
    Ok(CorrectionResult {
        p_hat: state.p_hat,
        p_hat_prime: state.p_hat_prime,
        e_sq: state.e_sq,
        iterations: 1,
    })
}

/// Controls for [`kanatani_correct`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KanataniConfig {
    /// Convergence threshold on the change of the squared correction cost
    /// between consecutive iterations (relative once the cost exceeds 1).
    pub delta: f64,
    /// Hard cap on relinearization steps.
    pub max_iterations: usize,
}

impl Default for KanataniConfig {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            max_iterations: 1000,
        }
    }
}

/// Result of the iterative correction, flagging whether the stopping rule
/// fired before the iteration cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KanataniCorrection {
    pub correction: CorrectionResult,
    pub converged: bool,
}

/// The iterative first-order correction: repeats the relinearized step about
/// the current corrected pair until the squared cost stabilizes.
///
/// The first iteration is exactly the Sampson correction; subsequent ones
/// relinearize there, converging to the true corrected pair for moderate
/// noise. Stops when the cost changes by at most `delta` (relative once the
/// cost exceeds 1) or after `max_iterations` steps.
///
/// Errors with `InvalidConfig` on a non-positive `delta` or a zero iteration
/// cap, and `VanishingGradient` if a step degenerates.
pub fn kanatani_correct(
    fm: &FundamentalMatrix,
    b: &Correspondence,
    config: &KanataniConfig,
) -> Result<KanataniCorrection> {
    if !(config.delta > 0.0) {
        return Err(Error::InvalidConfig {
            reason: format!("kanatani delta must be positive, got {}", config.delta),
        });
    }
    if config.max_iterations == 0 {
        return Err(Error::InvalidConfig {
            reason: "kanatani max_iterations must be at least 1".to_string(),
        });
    }
    let mut state = StepState::initial(b);
    let mut e_prev = f64::INFINITY;
    for iteration in 1..=config.max_iterations {
        state = relinearized_step(fm, b, &state)?;
        let e = state.e_sq;
        let tol = if e <= 1.0 { config.delta } else { config.delta * e };
        if (e - e_prev).abs() <= tol {
            return Ok(KanataniCorrection {
                correction: CorrectionResult {
                    p_hat: state.p_hat,
                    p_hat_prime: state.p_hat_prime,
                    e_sq: e,
                    iterations: iteration,
                },
                converged: true,
            });
        }
        e_prev = e;
    }
    Ok(KanataniCorrection {
        correction: CorrectionResult {
            p_hat: state.p_hat,
            p_hat_prime: state.p_hat_prime,
            e_sq: state.e_sq,
            iterations: config.max_iterations,
        },
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;

    fn rectified() -> FundamentalMatrix {
        FundamentalMatrix::from_matrix(Matrix3::new(
            0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, //
            0.0, -1.0, 0.0,
        ))
        .unwrap()
    }

    fn offset_pair() -> Correspondence {
        Correspondence::new(Point2::new(0.0, 0.0), Point2::new(0.0, 1.0))
    }

    #[test]
    fn algebraic_distance_matches_hand_value() {
        assert_eq!(algebraic_distance(&rectified(), &offset_pair()), -1.0);
    }

    #[test]
    fn sed_matches_hand_value() {
        assert_relative_eq!(
            sed_sq(&rectified(), &offset_pair()).unwrap(),
            2.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn sampson_matches_hand_value() {
        assert_relative_eq!(
            sampson_sq(&rectified(), &offset_pair()).unwrap(),
            0.5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn sampson_correction_matches_hand_value() {
        let r = sampson_correct(&rectified(), &offset_pair()).unwrap();
        assert_relative_eq!(r.e_sq, 0.5, max_relative = 1e-15);
        assert_relative_eq!(r.p_hat.y, 0.5, epsilon = 1e-15);
        assert_relative_eq!(r.p_hat_prime.y, 0.5, epsilon = 1e-15);
        assert_eq!(r.p_hat.x, 0.0);
        assert_eq!(r.p_hat_prime.x, 0.0);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn sampson_correction_cost_equals_sampson_error() {
        let m = Matrix3::new(0.0, -1.0, 2.0, 1.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        let fm = FundamentalMatrix::from_matrix(m).unwrap();
        let b = Correspondence::new(Point2::new(4.0, -3.0), Point2::new(2.5, 7.0));
        let direct = sampson_sq(&fm, &b).unwrap();
        let corrected = sampson_correct(&fm, &b).unwrap();
        assert_relative_eq!(direct, corrected.e_sq, max_relative = 1e-12);
    }

    #[test]
    fn single_kanatani_iteration_is_bit_identical_to_sampson() {
        let m = Matrix3::new(0.0, -1.0, 2.0, 1.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        let fm = FundamentalMatrix::from_matrix(m).unwrap();
        let b = Correspondence::new(Point2::new(4.0, -3.0), Point2::new(2.5, 7.0));
        let sampson = sampson_correct(&fm, &b).unwrap();
        let one_step = kanatani_correct(
            &fm,
            &b,
            &KanataniConfig {
                delta: 1e-6,
                max_iterations: 1,
            },
        )
        .unwrap();
        assert!(!one_step.converged);
        assert_eq!(one_step.correction, sampson);
    }

    #[test]
    fn kanatani_converges_on_the_rectified_pair() {
        let out = kanatani_correct(&rectified(), &offset_pair(), &KanataniConfig::default())
            .unwrap();
        assert!(out.converged);
        assert_eq!(out.correction.iterations, 2);
        assert_relative_eq!(out.correction.e_sq, 0.5, max_relative = 1e-12);
        assert_relative_eq!(out.correction.p_hat.y, 0.5, epsilon = 1e-12);
        assert_relative_eq!(out.correction.p_hat_prime.y, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn kanatani_rejects_bad_configs() {
        let cfg = KanataniConfig {
            delta: 0.0,
            max_iterations: 10,
        };
        assert!(matches!(
            kanatani_correct(&rectified(), &offset_pair(), &cfg),
            Err(Error::InvalidConfig { .. })
        ));
        let cfg = KanataniConfig {
            delta: 1e-6,
            max_iterations: 0,
        };
        assert!(matches!(
            kanatani_correct(&rectified(), &offset_pair(), &cfg),
            Err(Error::InvalidConfig { .. })
        ));
    }

    #[test]
    fn perfect_pair_costs_nothing() {
        let fm = rectified();
        let b = Correspondence::new(Point2::new(3.0, 2.0), Point2::new(-1.0, 2.0));
        assert_eq!(algebraic_distance(&fm, &b), 0.0);
        assert_eq!(sed_sq(&fm, &b).unwrap(), 0.0);
        assert_eq!(sampson_sq(&fm, &b).unwrap(), 0.0);
        let k = kanatani_correct(&fm, &b, &KanataniConfig::default()).unwrap();
        assert!(k.converged);
        assert_eq!(k.correction.e_sq, 0.0);
    }
}
