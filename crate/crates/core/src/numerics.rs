//! Compensated floating-point primitives for cancellation-prone sums.
//!
//! Near an epipole, the constraint value and the epipolar-line normals are
//! tiny differences of pixel-scale products; plain evaluation leaves only
//! rounding noise at the scale the correction and the generator work with.
//! The error-free transformations below recover those values with an
//! absolute error far below the quantities themselves regardless of how
//! much the partial sums cancel.

use nalgebra::{Matrix3, Vector3};

use crate::geometry::Point2;

/// Splits a product into its rounded value and the exact rounding error.
#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Splits a sum into its rounded value and the exact rounding error.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let a_virtual = s - b;
    let b_virtual = s - a_virtual;
    (s, (a - a_virtual) + (b - b_virtual))
}

/// Dot product with one level of compensation: every product split and
/// every partial-sum error accumulated separately, folded in at the end.
pub(crate) fn dot2(pairs: &[(f64, f64)]) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for &(a, b) in pairs {
        let (product, product_err) = two_product(a, b);
        let (next, sum_err) = two_sum(sum, product);
        sum = next;
        compensation += product_err + sum_err;
    }
    sum + compensation
}

/// The constraint value `p~^T M q~` as a compensated sum of its nine
/// trilinear terms, each point product split exactly first.
pub(crate) fn constraint_value(m: &Matrix3<f64>, p: Point2, q: Point2) -> f64 {
    let ph = [p.x, p.y, 1.0];
    let qh = [q.x, q.y, 1.0];
    let mut pairs = [(0.0f64, 0.0f64); 18];
    let mut k = 0;
    for i in 0..3 {
        for j in 0..3 {
            let (value, err) = two_product(ph[i], qh[j]);
            pairs[k] = (m[(i, j)], value);
            pairs[k + 1] = (m[(i, j)], err);
            k += 2;
        }
    }
    dot2(&pairs)
}

/// The first image's epipolar line `M q~` with compensated components.
pub(crate) fn epipolar_line_vec(m: &Matrix3<f64>, q: Point2) -> Vector3<f64> {
    Vector3::new(
        dot2(&[(m[(0, 0)], q.x), (m[(0, 1)], q.y), (m[(0, 2)], 1.0)]),
        dot2(&[(m[(1, 0)], q.x), (m[(1, 1)], q.y), (m[(1, 2)], 1.0)]),
        dot2(&[(m[(2, 0)], q.x), (m[(2, 1)], q.y), (m[(2, 2)], 1.0)]),
    )
}

/// The second image's epipolar line `M^T p~` with compensated components.
pub(crate) fn epipolar_line_prime_vec(m: &Matrix3<f64>, p: Point2) -> Vector3<f64> {
    Vector3::new(
        dot2(&[(m[(0, 0)], p.x), (m[(1, 0)], p.y), (m[(2, 0)], 1.0)]),
        dot2(&[(m[(0, 1)], p.x), (m[(1, 1)], p.y), (m[(2, 1)], 1.0)]),
        dot2(&[(m[(0, 2)], p.x), (m[(1, 2)], p.y), (m[(2, 2)], 1.0)]),
    )
}
