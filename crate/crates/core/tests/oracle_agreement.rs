//! The fast corrections against the brute-force pencil scan.
//!
//! The scan trusts nothing but the geometry: it walks the one-parameter
//! family of corresponding epipolar line pairs and projects the measured
//! points onto each. Agreement with the closed-form and iterative
//! corrections over random scenes is the strongest evidence the fast paths
//! are right.

mod common;

use epipolar_core::criteria::{hartley_sturm_correct, kanatani_correct, KanataniConfig};
use epipolar_core::oracle::brute_force_re_sq;
use epipolar_core::recg::{generate, RecgConfig, SeedMode};
use epipolar_core::{Correspondence, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_GRID: usize = 40_000;
const ORACLE_REFINE: usize = 200;

/// Relative gap between two squared errors, measured on their square roots.
fn rel_gap_sqrt(a_sq: f64, b_sq: f64) -> f64 {
    let (a, b) = (a_sq.sqrt(), b_sq.sqrt());
    (a - b).abs() / b.max(f64::MIN_POSITIVE)
}

#[test]
fn exact_correction_agrees_with_brute_force_across_error_levels() {
    for (li, level) in [1.0, 1e2, 1e4].into_iter().enumerate() {
        let mut seeds = common::seed_stream(0xA11CE + li as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(7 + li as u64);
        let mut checked = 0;
        let mut generator_failures = 0;
        while checked < 48 {
            let (fm, _, _) = common::random_scene(seeds.next().unwrap());
            let cfg = RecgConfig::new(level, SeedMode::Parametric);
            let out = match generate(&fm, &cfg, &mut rng, None) {
                Ok(out) => out,
                Err(_) => {
                    generator_failures += 1;
                    assert!(generator_failures < 10, "generator kept failing at {level}");
                    continue;
                }
            };
            let exact = hartley_sturm_correct(&fm, &out.correspondence).unwrap();
            let brute =
                brute_force_re_sq(&fm, &out.correspondence, ORACLE_GRID, ORACLE_REFINE).unwrap();
            assert!(
                rel_gap_sqrt(exact.e_sq, brute) <= 1e-3,
                "level {level}: exact {} vs brute {}",
                exact.e_sq,
                brute
            );
            // The scan can only overshoot the true minimum, never undershoot
            // it by more than its own resolution.
            assert!(exact.e_sq <= brute * (1.0 + 1e-3) + 1e-12);
            checked += 1;
        }
    }
}

#[test]
fn iterative_correction_tracks_the_exact_one_for_small_errors() {
    let kan = KanataniConfig::default();
    for (li, level) in [1e-1, 1.0, 10.0].into_iter().enumerate() {
        let mut seeds = common::seed_stream(0xBEE + li as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(40 + li as u64);
        for _ in 0..40 {
            let (fm, _, _) = common::random_scene(seeds.next().unwrap());
            let cfg = RecgConfig::new(level, SeedMode::Parametric);
            let Ok(out) = generate(&fm, &cfg, &mut rng, None) else {
                continue;
            };
            let exact = hartley_sturm_correct(&fm, &out.correspondence).unwrap();
            let iterated = kanatani_correct(&fm, &out.correspondence, &kan).unwrap();
            assert!(iterated.converged);
            assert!(
                rel_gap_sqrt(iterated.correction.e_sq, exact.e_sq) <= 1e-3,
                "level {level}: iterated {} vs exact {}",
                iterated.correction.e_sq,
                exact.e_sq
            );
        }
    }
}

#[test]
fn infinite_epipole_cases_match_the_analytic_minimum() {
    // Rectified geometry: corresponding lines are horizontal at equal
    // heights, so the optimal correction meets both points at the mean
    // height and the squared error is half the squared height gap.
    let fm = common::rectified_fm();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let b = Correspondence::new(
            Point2::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3)),
            Point2::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3)),
        );
        let analytic = (b.p.y - b.p_prime.y).powi(2) / 2.0;
        let exact = hartley_sturm_correct(&fm, &b).unwrap();
        let brute = brute_force_re_sq(&fm, &b, ORACLE_GRID, ORACLE_REFINE).unwrap();
        assert!((exact.e_sq - analytic).abs() <= 1e-9 * (1.0 + analytic));
        assert!((brute - analytic).abs() <= 1e-6 * (1.0 + analytic));
    }
}
