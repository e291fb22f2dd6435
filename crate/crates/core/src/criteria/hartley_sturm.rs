//! Optimal two-view correction (Hartley–Sturm): the exact closest pair of
//! points satisfying the epipolar constraint, found by scanning the pencil of
//! corresponding epipolar lines.
//!
//! Each image is translated so the measured point sits at the origin, then
//! rotated so its epipole lands on `(1, 0, f)`. In that frame the squared
//! correction cost along the pencil is a rational function of one parameter
//! whose critical points are roots of a degree-6 polynomial.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use super::{poly, CorrectionResult};
use crate::error::{Error, Result};
use crate::geometry::{Correspondence, EpipoleLocation, FundamentalMatrix, HomoLine, Point2};
use crate::numerics;

/// A fundamental matrix conjugated into the reduced frame of one
/// correspondence: both points at their origins, both epipoles at
/// `(1, 0, f)` and `(1, 0, f_prime)`.
///
/// The reduced matrix is fully described by the six parameters; `f = 0`
/// (or `f_prime = 0`) marks an epipole at infinity.
#[derive(Debug, Clone)]
pub struct HsNormalForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub f_prime: f64,
    rot: Matrix2<f64>,
    rot_prime: Matrix2<f64>,
    origin: Point2,
    origin_prime: Point2,
    reduced: Matrix3<f64>,
}

/// A point closer than this (in pixels) to an epipole counts as sitting on
/// it, where the correction is undefined.
const EPIPOLE_TOL: f64 = 1e-9;

impl HsNormalForm {
    /// Conjugates `fm` into the reduced frame of `b`.
    ///
    /// Errors with `PointAtEpipole` when either point lies within 1e-9 px of
    /// its epipole.
    pub fn reduce(fm: &FundamentalMatrix, b: &Correspondence) -> Result<Self> {
        // Translation conjugation F1 = T^-T F T'^-1 in closed form: the 2x2
        // block is untouched, the third column is the epipolar line of the
        // second point, the third row that of the first, and the corner is
        // the constraint value. The latter five entries are differences of
        // pixel-scale products, and close to an epipole their true values
        // sit far below that scale, so they are evaluated with compensated
        // sums instead of a generic matrix product.
        let m = fm.matrix();
        let line = numerics::epipolar_line_vec(m, b.p_prime);
        let line_prime = numerics::epipolar_line_prime_vec(m, b.p);
        let corner = numerics::constraint_value(m, b.p, b.p_prime);
        #[rustfmt::skip]
        let mut f1 = Matrix3::new(
            m[(0, 0)], m[(0, 1)], line.x,
            m[(1, 0)], m[(1, 1)], line.y,
            line_prime.x, line_prime.y, corner,
        );
        let scale = f1.amax();
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::NumericalFailure);
        }
        f1 /= scale;

        // The epipoles move with the translation; reuse the cached nullspace
        // vectors instead of re-factorizing.
        let e = fm.epipole();
        let ep = fm.epipole_prime();
        let eps = Vector2::new(e.x - b.p.x * e.z, e.y - b.p.y * e.z);
        let eps_prime = Vector2::new(ep.x - b.p_prime.x * ep.z, ep.y - b.p_prime.y * ep.z);
        let arm = eps.norm();
        let arm_prime = eps_prime.norm();
        if arm <= EPIPOLE_TOL * e.z.abs() || arm_prime <= EPIPOLE_TOL * ep.z.abs() {
            return Err(Error::PointAtEpipole);
        }

        // Rotations taking each translated epipole onto (1, 0, f).
        let (cos, sin) = (eps.x / arm, eps.y / arm);
        let (cos_p, sin_p) = (eps_prime.x / arm_prime, eps_prime.y / arm_prime);
        // An epipole classified at infinity means f = 0 exactly; the residual
        // third component is factorization noise, and letting it through
        // would fill the critical polynomial's high-degree terms with dust.
        let f = match fm.epipole_location() {
            EpipoleLocation::AtInfinity(_) => 0.0,
            EpipoleLocation::Finite(_) => e.z / arm,
        };
        let f_prime = match fm.epipole_prime_location() {
            EpipoleLocation::AtInfinity(_) => 0.0,
            EpipoleLocation::Finite(_) => ep.z / arm_prime,
        };
        let rot = Matrix2::new(cos, sin, -sin, cos);
        let rot_prime = Matrix2::new(cos_p, sin_p, -sin_p, cos_p);

        let rot3 = Matrix3::new(cos, sin, 0.0, -sin, cos, 0.0, 0.0, 0.0, 1.0);
        let rot3_prime = Matrix3::new(cos_p, sin_p, 0.0, -sin_p, cos_p, 0.0, 0.0, 0.0, 1.0);
        let reduced = rot3 * f1 * rot3_prime.transpose();

        // In the reduced frame the first row is -f times the third and the
        // first column is -f' times the third, leaving a 2x2 free block.
        // The rotations only combine entries of like scale (rows 1-2 among
        // themselves, the third row and column within themselves), so the
        // compensated small entries survive the conjugation: in particular
        // the corner d, the constraint value at `b`, passes through exactly.
        let (a, bb, c, d) = (
            reduced[(1, 1)],
            reduced[(1, 2)],
            reduced[(2, 1)],
            reduced[(2, 2)],
        );
        let block = a.abs().max(bb.abs()).max(c.abs()).max(d.abs());
        if block == 0.0 || !block.is_finite() {
            return Err(Error::NumericalFailure);
        }
        Ok(Self {
            a: a / block,
            b: bb / block,
            c: c / block,
            d: d / block,
            f,
            f_prime,
            rot,
            rot_prime,
            origin: b.p,
            origin_prime: b.p_prime,
            reduced,
        })
    }

    /// The conjugated matrix itself (scale-normalized), mainly useful for
    /// verifying that it annihilates the reduced epipoles.
    pub fn reduced_matrix(&self) -> &Matrix3<f64> {
        &self.reduced
    }

    /// Squared correction cost of the epipolar-line pair at parameter `t`:
    /// the squared distances from both origins to their lines.
    fn cost(&self, t: f64) -> f64 {
        let ft = self.f * t;
        let p1 = self.a * t + self.c;
        let p2 = self.b * t + self.d;
        let fp2 = self.f_prime * p2;
        t * t / (1.0 + ft * ft) + p2 * p2 / (p1 * p1 + fp2 * fp2)
    }

    /// Cost of the asymptotic line pair (`t -> infinity`); infinite when the
    /// first epipole is at infinity.
    fn cost_asymptotic(&self) -> f64 {
        let fb = self.f_prime * self.b;
        1.0 / (self.f * self.f) + self.b * self.b / (self.a * self.a + fb * fb)
    }

    /// First and second derivatives of [`Self::cost`] in closed form.
    fn cost_derivatives(&self, t: f64) -> (f64, f64) {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let f_sq = self.f * self.f;
        let fp_sq = self.f_prime * self.f_prime;
        let u = 1.0 + f_sq * t * t;
        let p1 = a * t + c;
        let p2 = b * t + d;
        let v = p1 * p1 + fp_sq * p2 * p2;
        let k = a * d - b * c;
        let slope = 2.0 * t / (u * u) - 2.0 * k * p1 * p2 / (v * v);
        let v_slope = 2.0 * (a * p1 + fp_sq * b * p2);
        let curvature = 2.0 / (u * u) - 8.0 * f_sq * t * t / (u * u * u)
            - 2.0 * k * (a * p2 + b * p1) / (v * v)
            + 4.0 * k * p1 * p2 * v_slope / (v * v * v);
        (slope, curvature)
    }

    /// A few Newton steps on the cost slope, evaluated directly from the
    /// rational cost rather than the expanded critical polynomial, to strip
    /// the coefficient-formation rounding off a candidate critical point.
    /// Never returns a parameter with a larger cost than the input's.
    fn refine_critical(&self, t0: f64) -> f64 {
        let mut t = t0;
        let mut best_t = t0;
        let mut best_cost = self.cost(t0);
        for _ in 0..10 {
            let (slope, curvature) = self.cost_derivatives(t);
            if !slope.is_finite() || !(curvature > 0.0) {
                break;
            }
            let step = slope / curvature;
            let next = t - step;
            if !next.is_finite() || next == t {
                break;
            }
            let cost = self.cost(next);
            if cost.is_finite() && cost < best_cost {
                best_cost = cost;
                best_t = next;
            }
            t = next;
            if step.abs() <= 1e-12 * (1.0 + t.abs()) {
                break;
            }
        }
        best_t
    }

    /// The line pair at parameter `t` in the reduced frame.
    fn line_pair(&self, t: f64) -> (HomoLine, HomoLine) {
        let p1 = self.a * t + self.c;
        let p2 = self.b * t + self.d;
        (
            HomoLine::new(t * self.f, 1.0, -t),
            HomoLine::new(-self.f_prime * p2, p1, p2),
        )
    }

    /// The limiting line pair as `t -> infinity`.
    fn line_pair_asymptotic(&self) -> (HomoLine, HomoLine) {
        (
            HomoLine::new(self.f, 0.0, -1.0),
            HomoLine::new(-self.f_prime * self.b, self.a, self.b),
        )
    }

    /// Ascending coefficients of the degree-6 polynomial whose real roots are
    /// the critical parameters of the cost.
    fn critical_polynomial(&self) -> Vec<f64> {
        let p1 = [self.c, self.a];
        let p2 = [self.d, self.b];
        let u = [1.0, 0.0, self.f * self.f];
        let v = poly::add(
            &poly::mul(&p1, &p1),
            &poly::scale(&poly::mul(&p2, &p2), self.f_prime * self.f_prime),
        );
        let t_v2 = poly::mul(&[0.0, 1.0], &poly::mul(&v, &v));
        let rhs = poly::mul(&poly::mul(&u, &u), &poly::mul(&p1, &p2));
        poly::add(
            &t_v2,
            &poly::scale(&rhs, -(self.a * self.d - self.b * self.c)),
        )
    }

    /// Maps a point from the reduced frame of the first image back to pixels.
    fn restore(&self, x: Vector2<f64>) -> Point2 {
        self.origin + self.rot.transpose() * x
    }

    /// Maps a point from the reduced frame of the second image back to
    /// pixels.
    fn restore_prime(&self, x: Vector2<f64>) -> Point2 {
        self.origin_prime + self.rot_prime.transpose() * x
    }
}

/// Foot of the perpendicular from the origin to a line.
fn closest_to_origin(l: HomoLine) -> Result<Vector2<f64>> {
    let nn = l.l1 * l.l1 + l.l2 * l.l2;
    if nn == 0.0 {
        return Err(Error::NumericalFailure);
    }
    Ok(Vector2::new(-l.l1 * l.l3 / nn, -l.l2 * l.l3 / nn))
}

/// Compensated evaluations at the uncorrected pair, around which the
/// bilinear constraint is expanded during polishing.
struct KktBase {
    /// Constraint value at `b`.
    r_b: f64,
    /// Epipolar line of `b.p_prime` in the first image.
    l_b: Vector3<f64>,
    /// Epipolar line of `b.p` in the second image.
    lp_b: Vector3<f64>,
}

/// Epipolar-line normals at `b` displaced by `(dp, dq)`. The lines are
/// affine in the displacement, so the update adds a small-scale product to
/// the compensated base value instead of re-evaluating at full coordinates.
fn kkt_lines(
    m: &Matrix3<f64>,
    base: &KktBase,
    dp: Vector2<f64>,
    dq: Vector2<f64>,
) -> (Vector2<f64>, Vector2<f64>) {
    let l = Vector2::new(
        base.l_b.x + m[(0, 0)] * dq.x + m[(0, 1)] * dq.y,
        base.l_b.y + m[(1, 0)] * dq.x + m[(1, 1)] * dq.y,
    );
    let l_prime = Vector2::new(
        base.lp_b.x + m[(0, 0)] * dp.x + m[(1, 0)] * dp.y,
        base.lp_b.y + m[(0, 1)] * dp.x + m[(1, 1)] * dp.y,
    );
    (l, l_prime)
}

/// Scaled norm of the first-order optimality residual for the constrained
/// projection of `b`, evaluated purely on the displacement `(dp, dq)`:
/// stationarity in pixels plus the constraint value normalized by the
/// gradient norm so both enter in comparable units. Expanding the bilinear
/// constraint around `b` keeps every term at displacement scale — forming
/// the displaced point itself would round at the coordinate scale and bury
/// corrections many orders of magnitude smaller.
fn kkt_residual(
    m: &Matrix3<f64>,
    base: &KktBase,
    dp: Vector2<f64>,
    dq: Vector2<f64>,
    mu: f64,
) -> (nalgebra::Vector5<f64>, f64) {
    let (l, l_prime) = kkt_lines(m, base, dp, dq);
    let cross = dp.x * (m[(0, 0)] * dq.x + m[(0, 1)] * dq.y)
        + dp.y * (m[(1, 0)] * dq.x + m[(1, 1)] * dq.y);
    let r = base.r_b
        + dp.x * base.l_b.x
        + dp.y * base.l_b.y
        + dq.x * base.lp_b.x
        + dq.y * base.lp_b.y
        + cross;
    let g_norm = (l.x * l.x + l.y * l.y + l_prime.x * l_prime.x + l_prime.y * l_prime.y).sqrt();
    let f = nalgebra::Vector5::new(
        dp.x + mu * l.x,
        dp.y + mu * l.y,
        dq.x + mu * l_prime.x,
        dq.y + mu * l_prime.y,
        r,
    );
    let scale = if g_norm > 0.0 { g_norm } else { 1.0 };
    let scaled = (f.x * f.x + f.y * f.y + f.z * f.z + f.w * f.w).sqrt() + f.a.abs() / scale;
    (f, scaled)
}

/// Refines a corrected pair against the original-frame optimality system:
/// the closest pair is a stationary point of the Lagrangian of "minimize the
/// displacement subject to the constraint", and the constraint is bilinear,
/// so a few Newton steps seeded by the normal-form answer converge to the
/// rounding floor of the displacement. The normal form itself cannot reach
/// that floor: its rotation rounds entries at the full matrix scale, which
/// costs up to ~1e-7 of the answer when the matrix entries are strongly
/// graded. Works on and returns displacements from `b` so the answer keeps
/// full relative precision at any coordinate magnitude. Returns the input
/// displacement whenever polishing fails to reduce the optimality residual.
fn kkt_polish(
    m: &Matrix3<f64>,
    b: &Correspondence,
    p0: Point2,
    q0: Point2,
) -> (Vector2<f64>, Vector2<f64>) {
    let a = m.fixed_view::<2, 2>(0, 0);
    let base = KktBase {
        r_b: numerics::constraint_value(m, b.p, b.p_prime),
        l_b: numerics::epipolar_line_vec(m, b.p_prime),
        lp_b: numerics::epipolar_line_prime_vec(m, b.p),
    };
    let dp0 = Vector2::new(p0.x - b.p.x, p0.y - b.p.y);
    let dq0 = Vector2::new(q0.x - b.p_prime.x, q0.y - b.p_prime.y);
    // Initial multiplier: least-squares fit of the stationarity equations.
    let (l, l_prime) = kkt_lines(m, &base, dp0, dq0);
    let g_sq = l.x * l.x + l.y * l.y + l_prime.x * l_prime.x + l_prime.y * l_prime.y;
    if g_sq == 0.0 {
        return (dp0, dq0);
    }
    let mut mu = -(dp0.x * l.x + dp0.y * l.y + dq0.x * l_prime.x + dq0.y * l_prime.y) / g_sq;
    // Equilibrate: the gradient rows scale with the matrix times the
    // epipole arm and can sit ten orders below the unit stationarity rows,
    // which would starve the constraint equation of pivots. A power-of-two
    // scale keeps the similarity exact in floating point.
    let scale = {
        let raw = g_sq.sqrt();
        if raw.is_finite() && raw > 0.0 {
            (2.0f64).powi(raw.log2().round() as i32)
        } else {
            1.0
        }
    };
    let (mut dp, mut dq) = (dp0, dq0);
    let (_, initial_res) = kkt_residual(m, &base, dp, dq, mu);
    let (mut best, mut best_res) = ((dp, dq), initial_res);
    for _ in 0..6 {
        let (l, l_prime) = kkt_lines(m, &base, dp, dq);
        let (f, _) = kkt_residual(m, &base, dp, dq, mu);
        let s = scale;
        #[rustfmt::skip]
        let jac = nalgebra::Matrix5::new(
            1.0, 0.0, mu * a[(0, 0)], mu * a[(0, 1)], l.x / s,
            0.0, 1.0, mu * a[(1, 0)], mu * a[(1, 1)], l.y / s,
            mu * a[(0, 0)], mu * a[(1, 0)], 1.0, 0.0, l_prime.x / s,
            mu * a[(0, 1)], mu * a[(1, 1)], 0.0, 1.0, l_prime.y / s,
            l.x / s, l.y / s, l_prime.x / s, l_prime.y / s, 0.0,
        );
        let f_scaled = nalgebra::Vector5::new(f.x, f.y, f.z, f.w, f.a / s);
        let Some(dz) = jac.lu().solve(&(-f_scaled)) else {
            break;
        };
        if !dz.iter().all(|v| v.is_finite()) {
            break;
        }
        dp = Vector2::new(dp.x + dz.x, dp.y + dz.y);
        dq = Vector2::new(dq.x + dz.z, dq.y + dz.w);
        mu += dz.a / s;
        let (_, res) = kkt_residual(m, &base, dp, dq, mu);
        if res < best_res {
            best_res = res;
            best = (dp, dq);
        }
        if !res.is_finite() {
            break;
        }
    }
    if best_res < initial_res {
        best
    } else {
        (dp0, dq0)
    }
}

#[derive(Clone, Copy)]
enum Candidate {
    Root(f64),
    Asymptote,
}

/// Replaces a correspondence by the closest pair that satisfies the epipolar
/// constraint exactly, returning the corrected pair and the squared
/// correction cost (the squared reprojection error of the input).
///
/// `iterations` reports how many candidate critical points were examined.
/// Errors with `PointAtEpipole` within 1e-9 px of an epipole and
/// `NumericalFailure` when no candidate has a finite cost.
pub fn hartley_sturm_correct(
    fm: &FundamentalMatrix,
    b: &Correspondence,
) -> Result<CorrectionResult> {
    let nf = HsNormalForm::reduce(fm, b)?;
    let roots = poly::real_roots(&nf.critical_polynomial());

    let mut examined = 0usize;
    let mut best: Option<(f64, Candidate)> = None;
    let mut consider = |cost: f64, cand: Candidate, examined: &mut usize| {
        *examined += 1;
        if cost.is_finite() && best.as_ref().map_or(true, |(c, _)| cost < *c) {
            best = Some((cost, cand));
        }
    };
    for &t in &roots {
        let t = nf.refine_critical(t);
        consider(nf.cost(t), Candidate::Root(t), &mut examined);
    }
    if nf.f != 0.0 {
        consider(nf.cost_asymptotic(), Candidate::Asymptote, &mut examined);
    }

    let (_, winner) = best.ok_or(Error::NumericalFailure)?;
    let (l, l_prime) = match winner {
        Candidate::Root(t) => nf.line_pair(t),
        Candidate::Asymptote => nf.line_pair_asymptotic(),
    };
    let x = closest_to_origin(l)?;
    let x_prime = closest_to_origin(l_prime)?;
    let (dp, dq) = kkt_polish(fm.matrix(), b, nf.restore(x), nf.restore_prime(x_prime));
    // The displacement in pixels is the definition of the cost; the
    // reduced-frame value only ranked the candidates. Accumulating it in
    // displacement space keeps full relative precision even when the
    // correction is many orders of magnitude below the coordinates.
    let e_sq = dp.x * dp.x + dp.y * dp.y + dq.x * dq.x + dq.y * dq.y;
    let p_hat = Point2::new(b.p.x + dp.x, b.p.y + dp.y);
    let p_hat_prime = Point2::new(b.p_prime.x + dq.x, b.p_prime.y + dq.y);
    Ok(CorrectionResult {
        p_hat,
        p_hat_prime,
        e_sq,
        iterations: examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Vector3;

    fn rectified() -> FundamentalMatrix {
        FundamentalMatrix::from_matrix(Matrix3::new(
            0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, //
            0.0, -1.0, 0.0,
        ))
        .unwrap()
    }

    #[test]
    fn rectified_pair_splits_the_offset() {
        let fm = rectified();
        let b = Correspondence::new(Point2::new(0.0, 0.0), Point2::new(0.0, 1.0));
        let r = hartley_sturm_correct(&fm, &b).unwrap();
        assert_relative_eq!(r.e_sq, 0.5, max_relative = 1e-12);
        assert_relative_eq!(r.p_hat.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(r.p_hat.y, 0.5, epsilon = 1e-12);
        assert_relative_eq!(r.p_hat_prime.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(r.p_hat_prime.y, 0.5, epsilon = 1e-12);
        assert!(r.iterations >= 1 && r.iterations <= 7);
    }

    #[test]
    fn perfect_correspondence_is_left_in_place() {
        let fm = rectified();
        let b = Correspondence::new(Point2::new(3.0, 2.0), Point2::new(-1.0, 2.0));
        let r = hartley_sturm_correct(&fm, &b).unwrap();
        assert!(r.e_sq.abs() < 1e-18);
        assert_relative_eq!(r.p_hat.x, 3.0, epsilon = 1e-9);
        assert_relative_eq!(r.p_hat.y, 2.0, epsilon = 1e-9);
        assert_relative_eq!(r.p_hat_prime.x, -1.0, epsilon = 1e-9);
        assert_relative_eq!(r.p_hat_prime.y, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn corrected_pair_satisfies_the_constraint() {
        // A generic rank-2 matrix with finite epipoles.
        let m = Matrix3::new(0.0, -1.0, 2.0, 1.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        let fm = FundamentalMatrix::from_matrix(m).unwrap();
        let b = Correspondence::new(Point2::new(4.0, -3.0), Point2::new(2.5, 7.0));
        let r = hartley_sturm_correct(&fm, &b).unwrap();
        let residual = r
            .p_hat
            .homogeneous()
            .dot(&(fm.matrix() * r.p_hat_prime.homogeneous()));
        let norm = r.p_hat.homogeneous().norm()
            * fm.matrix().norm()
            * r.p_hat_prime.homogeneous().norm();
        assert!(
            residual.abs() <= 1e-9 * norm,
            "constraint residual too large: {residual:e}"
        );
        // The correction cost matches the displacement it reports.
        let moved = (r.p_hat - b.p).norm_squared() + (r.p_hat_prime - b.p_prime).norm_squared();
        assert_relative_eq!(moved, r.e_sq, max_relative = 1e-9);
    }

    #[test]
    fn point_on_the_epipole_is_rejected() {
        let m = Matrix3::new(0.0, -1.0, 2.0, 1.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        let fm = FundamentalMatrix::from_matrix(m).unwrap();
        let e = fm.epipole();
        let at_epipole = Point2::new(e.x / e.z, e.y / e.z);
        let b = Correspondence::new(at_epipole, Point2::new(2.5, 7.0));
        assert_eq!(
            hartley_sturm_correct(&fm, &b),
            Err(Error::PointAtEpipole)
        );
    }

    #[test]
    fn normal_form_annihilates_the_reduced_epipoles() {
        let m = Matrix3::new(0.0, -1.0, 2.0, 1.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        let fm = FundamentalMatrix::from_matrix(m).unwrap();
        let b = Correspondence::new(Point2::new(4.0, -3.0), Point2::new(2.5, 7.0));
        let nf = HsNormalForm::reduce(&fm, &b).unwrap();
        let left = Vector3::new(1.0, 0.0, nf.f);
        let right = Vector3::new(1.0, 0.0, nf.f_prime);
        let m2 = nf.reduced_matrix();
        assert!((m2.transpose() * left).norm() <= 1e-9 * m2.norm());
        assert!((m2 * right).norm() <= 1e-9 * m2.norm());
    }

    #[test]
    fn cost_derivatives_match_finite_differences() {
        let m = Matrix3::new(0.0, -1.0, 2.0, 1.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        let fm = FundamentalMatrix::from_matrix(m).unwrap();
        let b = Correspondence::new(Point2::new(3.0, -1.5), Point2::new(-2.0, 4.0));
        let nf = HsNormalForm::reduce(&fm, &b).unwrap();
        let h = 1e-5;
        for t in [-2.0, -0.3, 0.1, 0.9, 5.0] {
            let (slope, curvature) = nf.cost_derivatives(t);
            let num_slope = (nf.cost(t + h) - nf.cost(t - h)) / (2.0 * h);
            let num_curv = (nf.cost(t + h) - 2.0 * nf.cost(t) + nf.cost(t - h)) / (h * h);
            assert_relative_eq!(slope, num_slope, max_relative = 1e-6, epsilon = 1e-6);
            assert_relative_eq!(curvature, num_curv, max_relative = 1e-4, epsilon = 1e-4);
        }
    }
}
