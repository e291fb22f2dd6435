//! Brute-force reprojection-error oracle.
//!
//! Validates the fast criteria by direct search: every corrected pair lies
//! on a pair of corresponding epipolar lines, and for a fixed line pair the
//! optimal correction is the orthogonal projection of each measured point
//! onto its line. Scanning the one-parameter family of line pairs therefore
//! finds the global minimum without trusting any closed-form machinery.
//! Never used in the fast path.

use std::f64::consts::PI;

use nalgebra::{Vector2, Vector4};

use crate::criteria::algebraic_distance;
use crate::error::{Error, Result};
use crate::geometry::{signed_distance, Correspondence, EpipoleLocation, FundamentalMatrix, Point2};
use crate::recg::{infinite_axis, pencil_lines};

const PHI: f64 = 1.618_033_988_749_895;

/// Squared point-to-line distances summed over the line pair at `t`.
fn pencil_cost(fm: &FundamentalMatrix, b: &Correspondence, t: f64) -> Result<f64> {
    let (l, l_prime) = pencil_lines(fm, t)?;
    let d = signed_distance(b.p, l)?;
    let d_prime = signed_distance(b.p_prime, l_prime)?;
    Ok(d * d + d_prime * d_prime)
}

/// Like [`pencil_cost`] but mapping degenerate samples to infinity so the
/// scan can skip them.
fn sample_cost(fm: &FundamentalMatrix, b: &Correspondence, t: f64) -> f64 {
    pencil_cost(fm, b, t).unwrap_or(f64::INFINITY)
}

/// The parameter interval guaranteed to contain the optimal line pair.
///
/// A finite first epipole makes the pencil periodic in the angle, so the
/// full turn suffices. An infinite one parameterizes parallel lines by
/// offset: the scan is centered where the first point's line distance
/// vanishes and widened by the cost there, which bounds how far the optimum
/// can sit.
fn scan_range(fm: &FundamentalMatrix, b: &Correspondence) -> Result<(f64, f64)> {
    match fm.epipole_location() {
        EpipoleLocation::Finite(_) => Ok((-PI, PI)),
        EpipoleLocation::AtInfinity(dir) => {
            let axis = infinite_axis(dir);
            let n_hat = Vector2::new(-dir.y, dir.x);
            let slope = axis.dot(&n_hat);
            let t0 = b.p.to_vector().dot(&n_hat) / slope;
            let mut reference = sample_cost(fm, b, t0);
            let mut probe = 0.1;
            while !reference.is_finite() && probe < 1e3 {
                reference = sample_cost(fm, b, t0 + probe);
                probe *= 2.0;
            }
            if !reference.is_finite() {
                return Err(Error::NumericalFailure);
            }
            // |t* - t0| <= sqrt(cost(t_ref)) / |slope| for any reference.
            let w = 1.5 * (reference.sqrt() + probe) / slope.abs() + 1.0;
            Ok((t0 - w, t0 + w))
        }
    }
}

/// Squared reprojection error by exhaustive search over the epipolar-line
/// pencil: `grid_size` samples across the scan range, then `refine_iters`
/// golden-section steps around the best bracket.
///
/// Errors with `InvalidConfig` when `grid_size < 2`, and propagates the
/// degeneracy when every sampled line pair is degenerate.
pub fn brute_force_re_sq(
    fm: &FundamentalMatrix,
    b: &Correspondence,
    grid_size: usize,
    refine_iters: usize,
) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::InvalidConfig {
            reason: format!("grid_size must be at least 2, got {grid_size}"),
        });
    }
    let (lo, hi) = scan_range(fm, b)?;
    let step = (hi - lo) / grid_size as f64;
    let periodic = matches!(fm.epipole_location(), EpipoleLocation::Finite(_));

    let mut costs = Vec::with_capacity(grid_size);
    let mut last_err = None;
    for i in 0..grid_size {
        match pencil_cost(fm, b, lo + i as f64 * step) {
            Ok(c) => costs.push(c),
            Err(e) => {
                last_err = Some(e);
                costs.push(f64::INFINITY);
            }
        }
    }
    if !costs.iter().cloned().fold(f64::INFINITY, f64::min).is_finite() {
        return Err(last_err.unwrap_or(Error::NumericalFailure));
    }

    // Collect the grid's local minima (wrapping neighbors when the pencil is
    // periodic) and refine the best few, so near-tied basins cannot trick
    // the search into settling for the wrong one.
    let neighbor = |i: usize, off: isize| -> f64 {
        let j = i as isize + off;
        if periodic {
            costs[j.rem_euclid(grid_size as isize) as usize]
        } else if j < 0 || j >= grid_size as isize {
            f64::INFINITY
        } else {
            costs[j as usize]
        }
    };
    let mut brackets: Vec<(f64, usize)> = (0..grid_size)
        .filter(|&i| costs[i].is_finite())
        .filter(|&i| costs[i] <= neighbor(i, -1) && costs[i] <= neighbor(i, 1))
        .map(|i| (costs[i], i))
        .collect();
    brackets.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    brackets.truncate(4);

    let mut best = f64::INFINITY;
    for &(grid_cost, i) in &brackets {
        best = best.min(grid_cost);
        best = best.min(golden_refine(
            fm,
            b,
            lo + i as f64 * step - step,
            lo + i as f64 * step + step,
            refine_iters,
        ));
    }
    Ok(best)
}

/// Golden-section minimization of the pencil cost on `[lo, hi]`. The cost is
/// defined for any real parameter (periodic in the finite-epipole case), so
/// the bracket needs no clamping.
fn golden_refine(
    fm: &FundamentalMatrix,
    b: &Correspondence,
    mut lo: f64,
    mut hi: f64,
    iters: usize,
) -> f64 {
    let inv_phi = 1.0 / PHI;
    let mut m1 = hi - (hi - lo) * inv_phi;
    let mut m2 = lo + (hi - lo) * inv_phi;
    let mut f1 = sample_cost(fm, b, m1);
    let mut f2 = sample_cost(fm, b, m2);
    let mut best = f64::INFINITY;
    for _ in 0..iters {
        best = best.min(f1).min(f2);
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - (hi - lo) * inv_phi;
            f1 = sample_cost(fm, b, m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + (hi - lo) * inv_phi;
            f2 = sample_cost(fm, b, m2);
        }
    }
    best.min(f1).min(f2)
}

/// Central-difference gradient of the algebraic distance over
/// `(x, y, x', y')` with step `h`.
///
/// The algebraic distance is affine in each coordinate, so the central
/// difference is exact up to rounding; this independently validates the
/// analytic gradient.
pub fn numeric_gradient_r(
    fm: &FundamentalMatrix,
    b: &Correspondence,
    h: f64,
) -> Result<Vector4<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidConfig {
            reason: format!("step h must be positive and finite, got {h}"),
        });
    }
    let eval = |dx: f64, dy: f64, dx_p: f64, dy_p: f64| {
        let shifted = Correspondence::new(
            Point2::new(b.p.x + dx, b.p.y + dy),
            Point2::new(b.p_prime.x + dx_p, b.p_prime.y + dy_p),
        );
        algebraic_distance(fm, &shifted)
    };
    let two_h = 2.0 * h;
    Ok(Vector4::new(
        (eval(h, 0.0, 0.0, 0.0) - eval(-h, 0.0, 0.0, 0.0)) / two_h,
        (eval(0.0, h, 0.0, 0.0) - eval(0.0, -h, 0.0, 0.0)) / two_h,
        (eval(0.0, 0.0, h, 0.0) - eval(0.0, 0.0, -h, 0.0)) / two_h,
        (eval(0.0, 0.0, 0.0, h) - eval(0.0, 0.0, 0.0, -h)) / two_h,
    ))
}
