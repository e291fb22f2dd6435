//! Random camera pairs and scene points for the benchmark experiments.
//!
//! The first camera anchors the world frame (position zero, identity
//! orientation); the second sits on the unit sphere with a random
//! orientation composed from elementary rotations. Intrinsics are drawn per
//! camera from configurable normal distributions, and scene points uniformly
//! from a large cube.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::{Camera, Point2};

/// Distribution parameters for random scenes. Angular ranges are fixed;
/// intrinsics and the sampling cube are configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneGenConfig {
    /// Mean focal length, pixels.
    pub f_avg: f64,
    /// Focal-length standard deviation, pixels.
    pub f_sigma: f64,
    /// Mean principal-point x, pixels.
    pub u_avg: f64,
    /// Principal-point x standard deviation, pixels.
    pub u_sigma: f64,
    /// Mean principal-point y, pixels.
    pub v_avg: f64,
    /// Principal-point y standard deviation, pixels.
    pub v_sigma: f64,
    /// Half-extent of the scene-point cube, world units.
    pub cube_half_extent: f64,
}

impl Default for SceneGenConfig {
    fn default() -> Self {
        Self {
            f_avg: 1300.0,
            f_sigma: 250.0,
            u_avg: 399.5,
            u_sigma: 133.33,
            v_avg: 299.5,
            v_sigma: 100.0,
            cube_half_extent: 3.0e5,
        }
    }
}

impl SceneGenConfig {
    fn validate(&self) -> Result<()> {
        let all_finite = [
            self.f_avg,
            self.f_sigma,
            self.u_avg,
            self.u_sigma,
            self.v_avg,
            self.v_sigma,
            self.cube_half_extent,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidConfig {
                reason: "scene parameters must be finite".to_string(),
            });
        }
        if self.f_avg <= 0.0 {
            return Err(Error::InvalidConfig {
                reason: format!("f_avg must be positive, got {}", self.f_avg),
            });
        }
        if self.f_sigma < 0.0 || self.u_sigma < 0.0 || self.v_sigma < 0.0 {
            return Err(Error::InvalidConfig {
                reason: "sigmas must be non-negative".to_string(),
            });
        }
        if self.cube_half_extent <= 0.0 {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "cube_half_extent must be positive, got {}",
                    self.cube_half_extent
                ),
            });
        }
        Ok(())
    }
}

/// Sine and cosine of an angle in degrees, exact at multiples of 90 so that
/// axis-aligned draws produce axis-aligned geometry bit-for-bit.
pub(crate) fn sin_cos_deg(deg: f64) -> (f64, f64) {
    match deg.rem_euclid(360.0) {
        w if w == 0.0 => (0.0, 1.0),
        w if w == 90.0 => (1.0, 0.0),
        w if w == 180.0 => (0.0, -1.0),
        w if w == 270.0 => (-1.0, 0.0),
        _ => deg.to_radians().sin_cos(),
    }
}

/// Right-handed rotation about the x axis, angle in degrees.
pub(crate) fn rotation_x_deg(deg: f64) -> Matrix3<f64> {
    let (s, c) = sin_cos_deg(deg);
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Right-handed rotation about the y axis, angle in degrees.
pub(crate) fn rotation_y_deg(deg: f64) -> Matrix3<f64> {
    let (s, c) = sin_cos_deg(deg);
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Right-handed rotation about the z axis, angle in degrees.
pub(crate) fn rotation_z_deg(deg: f64) -> Matrix3<f64> {
    let (s, c) = sin_cos_deg(deg);
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Point on the unit sphere at latitude `s` and longitude `t`, both degrees:
/// `(cos s cos t, sin s, cos s sin t)`.
pub(crate) fn unit_sphere_point_deg(s: f64, t: f64) -> Vector3<f64> {
    let (sin_s, cos_s) = sin_cos_deg(s);
    let (sin_t, cos_t) = sin_cos_deg(t);
    Vector3::new(cos_s * cos_t, sin_s, cos_s * sin_t)
}

/// Focal length, then principal point (x, then y); the focal is redrawn
/// until positive so the distribution keeps its shape instead of being
/// truncated.
fn random_intrinsics<R: Rng>(cfg: &SceneGenConfig, rng: &mut R) -> (f64, Point2) {
    let focal_dist = Normal::new(cfg.f_avg, cfg.f_sigma).expect("validated sigma");
    let focal = loop {
        let f = focal_dist.sample(rng);
        if f > 0.0 {
            break f;
        }
    };
    let u = Normal::new(cfg.u_avg, cfg.u_sigma)
        .expect("validated sigma")
        .sample(rng);
    let v = Normal::new(cfg.v_avg, cfg.v_sigma)
        .expect("validated sigma")
        .sample(rng);
    (focal, Point2::new(u, v))
}

/// A random camera pair: the first camera at the world origin with identity
/// orientation, the second at a uniform point of the unit sphere
/// (latitude `s ~ U(-90, 90)` degrees, longitude `t ~ U(0, 360)`) with
/// orientation `R_y(theta) R_x(phi) R_z(psi)`,
/// `theta ~ U(-135, 135)`, `phi ~ U(-90, 90)`, `psi ~ U(0, 360)` degrees.
/// Intrinsics are drawn per camera (first camera's focal, u, v, then the
/// second's) from the configured normals.
pub fn random_camera_pair<R: Rng>(
    cfg: &SceneGenConfig,
    rng: &mut R,
) -> Result<(Camera, Camera)> {
    cfg.validate()?;
    let s = rng.gen_range(-90.0..90.0);
    let t = rng.gen_range(0.0..360.0);
    let position_prime = unit_sphere_point_deg(s, t);
    let theta = rng.gen_range(-135.0..135.0);
    let phi = rng.gen_range(-90.0..90.0);
    let psi = rng.gen_range(0.0..360.0);
    let orientation_prime = rotation_y_deg(theta) * rotation_x_deg(phi) * rotation_z_deg(psi);

    let (focal, principal) = random_intrinsics(cfg, rng);
    let cam = Camera::new(Vector3::zeros(), Matrix3::identity(), focal, principal)?;
    let (focal_prime, principal_prime) = random_intrinsics(cfg, rng);
    let cam_prime = Camera::new(
        position_prime,
        orientation_prime,
        focal_prime,
        principal_prime,
    )?;
    Ok((cam, cam_prime))
}

/// A scene point with coordinates (x, then y, then z) uniform in
/// `[-cube_half_extent, +cube_half_extent]`.
pub fn random_cube_point<R: Rng>(cfg: &SceneGenConfig, rng: &mut R) -> Vector3<f64> {
    let h = cfg.cube_half_extent;
    Vector3::new(
        rng.gen_range(-h..=h),
        rng.gen_range(-h..=h),
        rng.gen_range(-h..=h),
    )
}
