//! Randomized correspondence generation with a prescribed reprojection
//! error.
//!
//! A perfect correspondence `A` (one satisfying the epipolar constraint
//! exactly) is drawn at random, then displaced by the requested distance `d`
//! along the unit gradient of the algebraic distance — the direction that
//! leaves the constraint hypersurface most steeply. Because `A` stays on the
//! hypersurface at distance exactly `d` from the candidate, the candidate's
//! true reprojection error is at most `d`, and for most draws it equals `d`;
//! the exact error is checked with the optimal correction and the draw is
//! retried until it matches.
//!
//! Perfect correspondences come from one of two seeders:
//!
//! - generate-and-project: a random 3D point in a large cube, in front of
//!   both cameras, projected into each image;
//! - parametric: a point drawn directly on the constraint hypersurface by
//!   picking a pair of corresponding epipolar lines (parameter `t`) and
//!   offsets `d, d'` along them from the epipoles.

use std::f64::consts::PI;

use nalgebra::{Vector2, Vector3, Vector4};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::criteria::hartley_sturm_correct;
use crate::error::{Error, Result};
use crate::numerics;
use crate::geometry::{
    Camera, Correspondence, EpipoleLocation, FundamentalMatrix, HomoLine, Point2,
};

/// Half-extent of the cube that generate-and-project samples 3D points from.
pub const PROJECTION_CUBE_HALF_EXTENT: f64 = 3.0e5;

/// Rejection-sampling budget for generate-and-project seeding.
const MAX_SAMPLING_ATTEMPTS: usize = 100_000;

/// How perfect seed correspondences are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedMode {
    /// Project a random 3D cube point visible in both cameras.
    GenerateProject,
    /// Sample the constraint hypersurface directly through the epipolar-line
    /// pencil.
    Parametric,
}

/// Controls for [`generate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecgConfig {
    /// Requested reprojection error `d`, in pixels. Zero returns a perfect
    /// correspondence directly.
    pub target_re: f64,
    /// Seed redraw budget before giving up.
    pub max_trials: usize,
    /// Relative acceptance tolerance on `|achieved - target|`.
    pub accept_tol: f64,
    /// Seeding strategy for the perfect correspondence.
    pub seed_mode: SeedMode,
}

impl RecgConfig {
    /// A config with the default budget (200 trials) and tolerance (1e-6
    /// relative).
    pub fn new(target_re: f64, seed_mode: SeedMode) -> Self {
        Self {
            target_re,
            max_trials: 200,
            accept_tol: 1e-6,
            seed_mode,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_re >= 0.0 && self.target_re.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: format!("target_re must be finite and >= 0, got {}", self.target_re),
            });
        }
        if self.max_trials == 0 {
            return Err(Error::InvalidConfig {
                reason: "max_trials must be at least 1".to_string(),
            });
        }
        if !(self.accept_tol > 0.0 && self.accept_tol < 1.0) {
            return Err(Error::InvalidConfig {
                reason: format!("accept_tol must lie in (0, 1), got {}", self.accept_tol),
            });
        }
        Ok(())
    }
}

/// Which of the two gradient steps produced the accepted candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSign {
    Plus,
    Minus,
}

/// An accepted draw: the noisy correspondence, its verified reprojection
/// error, and provenance (the perfect seed, the step direction, the number
/// of seeds consumed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecgOutcome {
    pub correspondence: Correspondence,
    pub achieved_re: f64,
    pub trials_used: usize,
    pub seed_correspondence: Correspondence,
    pub sign: StepSign,
}

/// Coordinates on the constraint hypersurface: `t` selects a pair of
/// corresponding epipolar lines, `d` and `d_prime` the offsets along them
/// from the epipoles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilParam {
    /// Pencil parameter: an angle in `[-pi, pi]` for a finite first epipole,
    /// a line offset otherwise.
    pub t: f64,
    /// Offset of the first point along its epipolar line, in pixels.
    pub d: f64,
    /// Offset of the second point along its epipolar line, in pixels.
    pub d_prime: f64,
}

/// Unit gradient of the algebraic distance `R` at `a`, as the 4-vector
/// `(l1, l2, l1', l2')` of both epipolar-line normals, normalized.
///
/// Errors with `VanishingGradient` when both normals vanish (each point at
/// the other image's epipole).
pub fn unit_gradient(fm: &FundamentalMatrix, a: &Correspondence) -> Result<Vector4<f64>> {
    // Compensated line components: near an epipole the line normals are
    // heavily cancelling sums, and a plain evaluation would tilt the step
    // direction by far more than the acceptance tolerance on the achieved
    // error.
    let l = numerics::epipolar_line_vec(fm.matrix(), a.p_prime);
    let l_prime = numerics::epipolar_line_prime_vec(fm.matrix(), a.p);
    let g = Vector4::new(l.x, l.y, l_prime.x, l_prime.y);
    let norm = g.norm();
    if norm == 0.0 {
        return Err(Error::VanishingGradient);
    }
    Ok(g / norm)
}

/// Pulls a nearly perfect pair exactly onto the constraint set with a few
/// first-order steps along the gradient of the algebraic distance.
///
/// Construction alone cannot do better than the anchor's rounded residual:
/// near the epipoles, where the gradient is small, that fixed residual
/// displaces seeds off the set by many orders of magnitude more than
/// coordinate precision requires. Three quadratically converging steps reach
/// the rounding floor from any construction this module produces.
fn project_onto_constraint(fm: &FundamentalMatrix, c: Correspondence) -> Correspondence {
    let m = fm.matrix();
    let block = m.fixed_view::<2, 2>(0, 0);
    let mut p = c.p;
    let mut p_prime = c.p_prime;
    for _ in 0..4 {
        let l = numerics::epipolar_line_vec(m, p_prime);
        let l_prime = numerics::epipolar_line_prime_vec(m, p);
        let r = numerics::constraint_value(m, p, p_prime);
        let g_sq = l.x * l.x + l.y * l.y + l_prime.x * l_prime.x + l_prime.y * l_prime.y;
        if !(r / g_sq).is_finite() {
            break;
        }
        // Along the fixed direction (-l, -l') the constraint is exactly
        // quadratic in the step length: R - s*g_sq + s^2*curv = 0. Solving
        // it exactly (stable small-root form) instead of linearizing keeps
        // the step from overshooting where the surface bends sharply, right
        // next to an epipole.
        let curv = l.x * (block[(0, 0)] * l_prime.x + block[(0, 1)] * l_prime.y)
            + l.y * (block[(1, 0)] * l_prime.x + block[(1, 1)] * l_prime.y);
        let discriminant = g_sq * g_sq - 4.0 * curv * r;
        let s = if discriminant >= 0.0 {
            let exact = 2.0 * r / (g_sq + discriminant.sqrt());
            if exact.is_finite() {
                exact
            } else {
                r / g_sq
            }
        } else {
            r / g_sq
        };
        p = Point2::new(p.x - s * l.x, p.y - s * l.y);
        p_prime = Point2::new(p_prime.x - s * l_prime.x, p_prime.y - s * l_prime.y);
        if s == 0.0 {
            break;
        }
    }
    Correspondence::new(p, p_prime)
}

/// Draws a random 3D point in the sampling cube (coordinates in x, y, z
/// order) until one sits in front of both cameras, and returns its projected
/// image pair.
///
/// Errors with `SamplingExhausted` if no visible point turns up within the
/// attempt budget (pathological camera pair).
pub fn perfect_from_projection(
    cam: &Camera,
    cam_prime: &Camera,
    rng: &mut impl Rng,
) -> Result<Correspondence> {
    let h = PROJECTION_CUBE_HALF_EXTENT;
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let x = rng.gen_range(-h..=h);
        let y = rng.gen_range(-h..=h);
        let z = rng.gen_range(-h..=h);
        let point = Vector3::new(x, y, z);
        if cam.depth(&point) <= 0.0 || cam_prime.depth(&point) <= 0.0 {
            continue;
        }
        match (cam.project(&point), cam_prime.project(&point)) {
            (Ok(p), Ok(p_prime)) => return Ok(Correspondence::new(p, p_prime)),
            // A depth too close to zero projects outside the usable range;
            // reject the draw like any other invisible point.
            _ => continue,
        }
    }
    Err(Error::SamplingExhausted {
        attempts: MAX_SAMPLING_ATTEMPTS,
    })
}

/// Transversal axis the pencil parameter slides along when the first
/// epipole is at infinity: the x axis unless it is (nearly) parallel to the
/// epipolar direction, the y axis then.
pub(crate) fn infinite_axis(dir: Vector2<f64>) -> Vector2<f64> {
    if dir.y.abs() > 1e-9 {
        Vector2::new(1.0, 0.0)
    } else {
        Vector2::new(0.0, 1.0)
    }
}

/// The first image's pencil line at `t` plus the anchor point the offset `d`
/// is measured from. The unit tangent of the returned line is the offset
/// direction in both epipole cases.
fn first_pencil_line(fm: &FundamentalMatrix, t: f64) -> Result<(HomoLine, Point2)> {
    match fm.epipole_location() {
        EpipoleLocation::Finite(e) => {
            // Line through the epipole whose direction rotates with t:
            // e~ x (e~ + (cos t, sin t, 0)).
            let e_h = fm.epipole();
            let spin = Vector3::new(t.cos(), t.sin(), 0.0);
            let l = HomoLine::from_vector(e_h.cross(&spin));
            Ok((l, e))
        }
        EpipoleLocation::AtInfinity(dir) => {
            // All epipolar lines are parallel to dir; t slides the anchor
            // along a transversal axis.
            let axis = infinite_axis(dir);
            let l = HomoLine::new(-dir.y, dir.x, t * (axis.x * dir.y - axis.y * dir.x));
            Ok((l, Point2::new(t * axis.x, t * axis.y)))
        }
    }
}

/// Both corresponding epipolar lines of the pencil at `t`, in pixel
/// coordinates. Any point of the first paired with any point of the second
/// is a perfect correspondence.
pub(crate) fn pencil_lines(fm: &FundamentalMatrix, t: f64) -> Result<(HomoLine, HomoLine)> {
    let (l, anchor) = first_pencil_line(fm, t)?;
    let tangent = l.unit_tangent().map_err(|_| Error::DegeneratePencil { t })?;
    // The epipole itself maps to the zero line, so transfer a second point
    // of l: the anchor displaced by the unit tangent.
    let probe = anchor + tangent;
    let l_prime = HomoLine::from_vector(fm.matrix().transpose() * probe.homogeneous());
    if l_prime.normal_norm() == 0.0 {
        return Err(Error::DegeneratePencil { t });
    }
    Ok((l, l_prime))
}

/// A perfect correspondence at pencil coordinates `params`: both points on
/// corresponding epipolar lines, offset by `d` and `d_prime` from the
/// epipoles (for a finite epipole, `|p - e| = |d|` up to the final
/// on-surface projection, which moves the pair by at most the anchor's
/// rounding residual).
///
/// Errors with `DegeneratePencil` when the pencil pair degenerates at `t`.
pub fn perfect_from_pencil(
    fm: &FundamentalMatrix,
    params: &PencilParam,
) -> Result<Correspondence> {
    let (l, anchor) = first_pencil_line(fm, params.t)?;
    let tangent = l
        .unit_tangent()
        .map_err(|_| Error::DegeneratePencil { t: params.t })?;
    let p = anchor + params.d * tangent;

    let probe = anchor + tangent;
    let l_prime = HomoLine::from_vector(fm.matrix().transpose() * probe.homogeneous());
    let p_prime = match fm.epipole_prime_location() {
        EpipoleLocation::Finite(e_prime) => {
            let tangent_prime = l_prime
                .unit_tangent()
                .map_err(|_| Error::DegeneratePencil { t: params.t })?;
            e_prime + params.d_prime * tangent_prime
        }
        EpipoleLocation::AtInfinity(dir_prime) => {
            // No finite epipole to offset from: slide homogeneously along
            // the infinite direction from the line's representative point
            // e~' x l~'.
            let e_h = Vector3::new(dir_prime.x, dir_prime.y, 0.0);
            let base = e_h.cross(&l_prime.to_vector());
            let x = base + params.d_prime * e_h;
            if x.z.abs() == 0.0 {
                return Err(Error::DegeneratePencil { t: params.t });
            }
            Point2::new(x.x / x.z, x.y / x.z)
        }
    };
    Ok(project_onto_constraint(
        fm,
        Correspondence::new(p, p_prime),
    ))
}

fn displaced(a: &Correspondence, step: f64, grad: &Vector4<f64>) -> Correspondence {
    Correspondence::new(
        Point2::new(a.p.x + step * grad.x, a.p.y + step * grad.y),
        Point2::new(a.p_prime.x + step * grad.z, a.p_prime.y + step * grad.w),
    )
}

/// Relative miss below which a candidate's error is off by coordinate
/// rounding rather than by geometry, making it worth polishing instead of
/// redrawing the seed. Rounding misses stay under ~1e-3 even for epipoles
/// a thousand image-widths out; geometry misses (a candidate that crossed
/// the surface's folds) are order one.
const QUANTIZATION_MISS: f64 = 1e-2;

/// Cancels coordinate-quantization error in a stepped candidate.
///
/// Storing `A + d*g` rounds every coordinate at the pixel scale, which
/// shifts the candidate's true distance to the constraint set by a few ulps
/// of the coordinates. For targets many orders of magnitude below the
/// coordinate magnitude that shift alone can exhaust the acceptance
/// tolerance, and the error is only adjustable in steps of one coordinate
/// ulp projected on the gradient. The polish therefore trims the point
/// whose coordinate grid expresses the finest error change (seeds near a
/// far-out epipole have one point at huge coordinates and its mate at
/// image scale), moving it along the gradient by the verified miss until
/// the error matches the target; the best iterate is kept.
fn polish_candidate(
    fm: &FundamentalMatrix,
    b: Correspondence,
    achieved: f64,
    d: f64,
    accept_tol: f64,
    orientation: f64,
    grad: &Vector4<f64>,
) -> (Correspondence, f64) {
    let ulp = |x: f64| f64::EPSILON * x.abs().max(1.0);
    // Smallest expressible |re| change per one-ulp coordinate move, and the
    // squared gradient share, per image.
    let gran_p = grad.x.abs() * ulp(b.p.x) + grad.y.abs() * ulp(b.p.y);
    let gran_q = grad.z.abs() * ulp(b.p_prime.x) + grad.w.abs() * ulp(b.p_prime.y);
    let share_p = grad.x * grad.x + grad.y * grad.y;
    let share_q = grad.z * grad.z + grad.w * grad.w;
    // Moving one image's point by s along its gradient block changes re by
    // orientation * s * share; a vanishing share cannot steer re, so fall
    // back to moving both points in lockstep (share 1).
    let (move_p, move_q, share) = if gran_q <= gran_p && share_q >= 1e-2 {
        (0.0, 1.0, share_q)
    } else if gran_p < gran_q && share_p >= 1e-2 {
        (1.0, 0.0, share_p)
    } else {
        (1.0, 1.0, 1.0)
    };
    let mut best = (b, achieved);
    let mut current = b;
    let mut re = achieved;
    for _ in 0..12 {
        let s = orientation * (d - re) / share;
        let next = Correspondence::new(
            Point2::new(
                current.p.x + move_p * s * grad.x,
                current.p.y + move_p * s * grad.y,
            ),
            Point2::new(
                current.p_prime.x + move_q * s * grad.z,
                current.p_prime.y + move_q * s * grad.w,
            ),
        );
        if next == current {
            break;
        }
        current = next;
        let Ok(corr) = hartley_sturm_correct(fm, &current) else {
            break;
        };
        re = corr.e_sq.sqrt();
        if (re - d).abs() < (best.1 - d).abs() {
            best = (current, re);
        }
        if (re - d).abs() <= 0.1 * accept_tol * d {
            break;
        }
    }
    best
}

/// One perfect seed per the configured mode. The parametric draw order is
/// `t`, then `d`, then `d_prime`.
fn draw_seed<R: Rng>(
    fm: &FundamentalMatrix,
    cfg: &RecgConfig,
    cameras: Option<(&Camera, &Camera)>,
    rng: &mut R,
) -> Result<Correspondence> {
    match cfg.seed_mode {
        SeedMode::GenerateProject => {
            let (cam, cam_prime) = cameras.expect("presence checked in generate");
            perfect_from_projection(cam, cam_prime, rng)
                .map(|c| project_onto_constraint(fm, c))
        }
        SeedMode::Parametric => {
            let t = rng.gen_range(-PI..PI);
            let (off, off_prime) = if cfg.target_re == 0.0 {
                (0.0, 0.0)
            } else {
                let normal =
                    Normal::new(0.0, 1000.0 * cfg.target_re).expect("validated sigma");
                (normal.sample(rng), normal.sample(rng))
            };
            perfect_from_pencil(
                fm,
                &PencilParam {
                    t,
                    d: off,
                    d_prime: off_prime,
                },
            )
        }
    }
}

/// Draws a correspondence whose reprojection error equals
/// `cfg.target_re` within the relative acceptance tolerance.
///
/// Per trial: a perfect seed `A` is drawn (per `cfg.seed_mode`; the
/// parametric seeder samples `t ~ U(-pi, pi)` and offsets
/// `d, d' ~ N(0, 1000 * target_re)`, in that order), the two displaced
/// candidates `A + d*grad` then `A - d*grad` are scored with the exact
/// correction, and the first within tolerance is returned. Fresh seeds are
/// drawn until the budget runs out.
///
/// `cameras` must be provided in generate-and-project mode (else
/// `MissingCameras`). Errors with `MaxTrialsExceeded` after
/// `cfg.max_trials` rejected seeds; a vanishing gradient at a seed is
/// propagated.
pub fn generate(
    fm: &FundamentalMatrix,
    cfg: &RecgConfig,
    rng: &mut impl Rng,
    cameras: Option<(&Camera, &Camera)>,
) -> Result<RecgOutcome> {
    cfg.validate()?;
    if cfg.seed_mode == SeedMode::GenerateProject && cameras.is_none() {
        return Err(Error::MissingCameras);
    }
    let d = cfg.target_re;

    if d == 0.0 {
        let a = draw_seed(fm, cfg, cameras, rng)?;
        return Ok(RecgOutcome {
            correspondence: a,
            achieved_re: 0.0,
            trials_used: 1,
            seed_correspondence: a,
            sign: StepSign::Plus,
        });
    }

    for trial in 1..=cfg.max_trials {
        let a = draw_seed(fm, cfg, cameras, rng)?;
        let grad = unit_gradient(fm, &a)?;
        for (sign, orientation) in [(StepSign::Plus, 1.0), (StepSign::Minus, -1.0)] {
            let b = displaced(&a, orientation * d, &grad);
            // A candidate whose exact correction fails (e.g. it landed on an
            // epipole) is rejected like one with the wrong error.
            let Ok(corr) = hartley_sturm_correct(fm, &b) else {
                continue;
            };
            let achieved = corr.e_sq.sqrt();
            let (b, achieved) = if (achieved - d).abs() <= cfg.accept_tol * d
                || (achieved - d).abs() > QUANTIZATION_MISS * d
            {
                (b, achieved)
            } else {
                polish_candidate(fm, b, achieved, d, cfg.accept_tol, orientation, &grad)
            };
            if (achieved - d).abs() <= cfg.accept_tol * d {
                return Ok(RecgOutcome {
                    correspondence: b,
                    achieved_re: achieved,
                    trials_used: trial,
                    seed_correspondence: a,
                    sign,
                });
            }
        }
    }
    Err(Error::MaxTrialsExceeded {
        trials: cfg.max_trials,
    })
}
