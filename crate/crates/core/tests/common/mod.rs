//! Fixtures shared by the integration suites.

#![allow(dead_code)] // each test binary uses its own subset

use epipolar_core::scenegen::{random_camera_pair, SceneGenConfig};
use epipolar_core::{Camera, Correspondence, FundamentalMatrix};
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rectified stereo geometry: both epipoles at infinity along the x-axis,
/// epipolar lines horizontal with matching heights.
pub fn rectified_fm() -> FundamentalMatrix {
    FundamentalMatrix::from_matrix(Matrix3::new(
        0.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, //
        0.0, -1.0, 0.0,
    ))
    .unwrap()
}

/// A rank-two matrix with both epipoles finite, at (1, 2) in each image.
pub fn finite_epipole_fm() -> FundamentalMatrix {
    FundamentalMatrix::from_matrix(Matrix3::new(
        0.0, -1.0, 2.0, //
        1.0, 0.0, -1.0, //
        -2.0, 1.0, 0.0,
    ))
    .unwrap()
}

/// Draws a random camera pair and its fundamental matrix, retrying the few
/// draws that land on degenerate configurations.
pub fn random_scene(seed: u64) -> (FundamentalMatrix, Camera, Camera) {
    let cfg = SceneGenConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (cam, cam_prime) = random_camera_pair(&cfg, &mut rng).unwrap();
        if let Ok(fm) = FundamentalMatrix::from_cameras(&cam, &cam_prime) {
            return (fm, cam, cam_prime);
        }
    }
}

/// The bilinear constraint residual normalized by the point and matrix
/// scales, so "zero" means the same thing for pixel-sized and huge inputs.
pub fn constraint_residual(fm: &FundamentalMatrix, b: &Correspondence) -> f64 {
    let r = b
        .p
        .homogeneous()
        .dot(&(fm.matrix() * b.p_prime.homogeneous()));
    let scale = fm.matrix().norm() * b.p.homogeneous().norm() * b.p_prime.homogeneous().norm();
    r.abs() / scale
}

/// A deterministic stream of 64-bit sub-seeds for tests that iterate over
/// many independent scenes.
pub fn seed_stream(master: u64) -> impl Iterator<Item = u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    std::iter::repeat_with(move || rng.gen())
}
