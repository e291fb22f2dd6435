//! Planar points, homogeneous lines, cameras, and the fundamental matrix.
//!
//! The epipolar constraint is written `p~' F p~' = 0` with `p` in the first
//! image and `p'` in the second; `l = F p~'` is the epipolar line of `p'` in
//! the first image and `l' = F^T p~` the line of `p` in the second.

use nalgebra::{Matrix3, Matrix3x4, Vector2, Vector3};

use crate::error::{Error, Result};

/// A 2D image point in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// The point as an inhomogeneous 2-vector.
    pub fn to_vector(self) -> Vector2<f64> {
        Vector2::new(self.x, self.y)
    }

    pub fn from_vector(v: Vector2<f64>) -> Self {
        Self::new(v.x, v.y)
    }

    /// Homogeneous coordinates `(x, y, 1)`.
    pub fn homogeneous(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, 1.0)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Vector2<f64>;

    fn sub(self, rhs: Point2) -> Vector2<f64> {
        Vector2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add<Vector2<f64>> for Point2 {
    type Output = Point2;

    fn add(self, rhs: Vector2<f64>) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// A line in homogeneous coordinates: the set of points with
/// `l1*x + l2*y + l3 = 0`.
///
/// The zero line and lines at infinity (`l1 = l2 = 0`) are representable;
/// operations that need a proper direction return an error on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomoLine {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl HomoLine {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Self {
        Self { l1, l2, l3 }
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.l1, self.l2, self.l3)
    }

    /// Normal direction `(l1, l2)`, unnormalized.
    pub fn normal(self) -> Vector2<f64> {
        Vector2::new(self.l1, self.l2)
    }

    /// Tangent direction `(l2, -l1)`, unnormalized.
    pub fn tangent(self) -> Vector2<f64> {
        Vector2::new(self.l2, -self.l1)
    }

    /// Euclidean norm of the normal part, `sqrt(l1^2 + l2^2)`.
    pub fn normal_norm(self) -> f64 {
        self.l1.hypot(self.l2)
    }

    /// Unit normal; errors when the normal part is zero.
    pub fn unit_normal(self) -> Result<Vector2<f64>> {
        let n = self.normal_norm();
        if n == 0.0 {
            return Err(Error::DegenerateLine);
        }
        Ok(self.normal() / n)
    }

    /// Unit tangent `(l2, -l1) / |(l1, l2)|`; errors when the normal part is
    /// zero.
    pub fn unit_tangent(self) -> Result<Vector2<f64>> {
        let n = self.normal_norm();
        if n == 0.0 {
            return Err(Error::DegenerateLine);
        }
        Ok(self.tangent() / n)
    }
}

/// Signed point/line distance `(l1*x + l2*y + l3) / sqrt(l1^2 + l2^2)`.
///
/// Positive on the side the normal points to; errors on a line whose normal
/// part is zero.
pub fn signed_distance(q: Point2, l: HomoLine) -> Result<f64> {
    let n = l.normal_norm();
    if n == 0.0 {
        return Err(Error::DegenerateLine);
    }
    Ok((l.l1 * q.x + l.l2 * q.y + l.l3) / n)
}

/// A pair of matching image points, `p` in the first image and `p_prime` in
/// the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence {
    pub p: Point2,
    pub p_prime: Point2,
}

impl Correspondence {
    pub fn new(p: Point2, p_prime: Point2) -> Self {
        Self { p, p_prime }
    }
}

/// A pinhole camera with position `P`, world-to-camera rotation `R`, focal
/// length `f` (pixels), and principal point `(u, v)`.
///
/// A world point `X` maps to camera coordinates `(a, b, c) = R (X - P)` and
/// to the pixel `(f a / c + u, f b / c + v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    position: Vector3<f64>,
    orientation: Matrix3<f64>,
    focal: f64,
    principal: Point2,
}

impl Camera {
    /// Builds a camera, validating that `orientation` is a proper rotation
    /// (orthonormal, determinant +1, both within 1e-9) and `focal > 0`.
    pub fn new(
        position: Vector3<f64>,
        orientation: Matrix3<f64>,
        focal: f64,
        principal: Point2,
    ) -> Result<Self> {
        let residual = (orientation.transpose() * orientation - Matrix3::identity()).norm();
        if residual > 1e-9 {
            return Err(Error::InvalidConfig {
                reason: format!("camera orientation is not orthonormal (residual {residual:e})"),
            });
        }
        if (orientation.determinant() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig {
                reason: "camera orientation must have determinant +1".into(),
            });
        }
        if !(focal > 0.0) {
            return Err(Error::InvalidConfig {
                reason: format!("focal length must be positive, got {focal}"),
            });
        }
        Ok(Self {
            position,
            orientation,
            focal,
            principal,
        })
    }

    pub fn position(&self) -> Vector3<f64> {
        self.position
    }

    pub fn orientation(&self) -> &Matrix3<f64> {
        &self.orientation
    }

    pub fn focal(&self) -> f64 {
        self.focal
    }

    pub fn principal(&self) -> Point2 {
        self.principal
    }

    /// Depth of a world point along the optical axis: the third component of
    /// `R (X - P)`.
    pub fn depth(&self, x: &Vector3<f64>) -> f64 {
        (self.orientation * (x - self.position)).z
    }

    /// The 3x3 intrinsic matrix `K`.
    pub fn intrinsics(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.focal,
            0.0,
            self.principal.x,
            0.0,
            self.focal,
            self.principal.y,
            0.0,
            0.0,
            1.0,
        )
    }

    /// The 3x4 projection matrix `K R [I | -P]`.
    pub fn projection_matrix(&self) -> Matrix3x4<f64> {
        let kr = self.intrinsics() * self.orientation;
        let t = -(kr * self.position);
        let mut m = Matrix3x4::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&kr);
        m.set_column(3, &t);
        m
    }

    /// Projects a world point to pixel coordinates.
    ///
    /// Returns `ProjectsToInfinity` for `|depth| < 1e-12` and `BehindCamera`
    /// for negative depth.
    pub fn project(&self, x: &Vector3<f64>) -> Result<Point2> {
        let cam = self.orientation * (x - self.position);
        if cam.z.abs() < 1e-12 {
            return Err(Error::ProjectsToInfinity {
                depth_abs: cam.z.abs(),
            });
        }
        if cam.z < 0.0 {
            return Err(Error::BehindCamera { depth: cam.z });
        }
        Ok(Point2::new(
            self.focal * cam.x / cam.z + self.principal.x,
            self.focal * cam.y / cam.z + self.principal.y,
        ))
    }
}

/// Where an epipole sits in the image plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpipoleLocation {
    /// Affine position of a finite epipole.
    Finite(Point2),
    /// Unit direction of an epipole on the line at infinity.
    AtInfinity(Vector2<f64>),
}

fn classify_epipole(e: &Vector3<f64>) -> EpipoleLocation {
    let plane = e.x.hypot(e.y);
    if e.z.abs() <= 1e-12 * plane {
        EpipoleLocation::AtInfinity(Vector2::new(e.x / plane, e.y / plane))
    } else {
        EpipoleLocation::Finite(Point2::new(e.x / e.z, e.y / e.z))
    }
}

/// A rank-2 fundamental matrix for the constraint `p~^T F p~' = 0`, with its
/// epipoles cached as unit vectors: `F^T e = 0` (first image) and `F e' = 0`
/// (second image).
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalMatrix {
    m: Matrix3<f64>,
    e: Vector3<f64>,
    e_prime: Vector3<f64>,
}

/// Relative threshold on the smallest singular value for the rank-2 check.
const RANK2_TOL: f64 = 1e-9;

impl FundamentalMatrix {
    /// Wraps a matrix after checking it has rank exactly 2 (smallest singular
    /// value at most 1e-9 of the largest, middle one above that threshold).
    /// The scale of `m` is preserved.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let svd = m.svd(false, false);
        let s = svd.singular_values;
        // nalgebra does not guarantee an order; sort indices by magnitude.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap());
        let (s1, s2, s3) = (s[idx[0]], s[idx[1]], s[idx[2]]);
        if s3 > RANK2_TOL * s1 || s2 <= RANK2_TOL * s1 {
            return Err(Error::NotRankTwo {
                sigma1: s1,
                sigma2: s2,
                sigma3: s3,
            });
        }
        // The nullvectors come from cross products, not from the singular
        // vectors: for strongly graded matrices (pixel-scale entries spanning
        // many orders) the iterative SVD can lose several digits in the small
        // singular vectors, while the largest cross product of two rows is
        // orthogonal to those rows at working precision and to the third one
        // up to the (tiny) determinant.
        let e = unit_nullvector(&m.transpose());
        let e_prime = unit_nullvector(&m);
        Ok(Self { m, e, e_prime })
    }

    /// Builds the fundamental matrix of a camera pair.
    ///
    /// Uses the epipole cross-product construction on the two projection
    /// matrices and normalizes the result to unit Frobenius norm with the
    /// largest-magnitude entry positive. Errors when the camera centers
    /// coincide.
    pub fn from_cameras(cam: &Camera, cam_prime: &Camera) -> Result<Self> {
        if (cam.position() - cam_prime.position()).norm() < 1e-12 {
            return Err(Error::CoincidentCenters);
        }
        let m = cam.projection_matrix();
        let m_prime = cam_prime.projection_matrix();
        let m_pinv = m
            .pseudo_inverse(1e-12)
            .map_err(|_| Error::NumericalFailure)?;
        // Epipole of the first camera's center in the second image.
        let center = cam.position().push(1.0);
        let ep: Vector3<f64> = m_prime * center;
        // Classic construction for the x'^T F x = 0 convention, then a
        // transpose for the p~^T F p~' = 0 convention used here.
        let f_std: Matrix3<f64> = cross_matrix(&ep) * (m_prime * m_pinv);
        let mut f = f_std.transpose();
        f /= f.norm();
        // Fix the sign: first largest-magnitude entry in row-major order
        // becomes positive.
        let mut lead = 0.0f64;
        for r in 0..3 {
            for c in 0..3 {
                if f[(r, c)].abs() > lead.abs() {
                    lead = f[(r, c)];
                }
            }
        }
        if lead < 0.0 {
            f = -f;
        }
        Self::from_matrix(f)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Unit vector spanning the nullspace of `F^T`: the epipole in the first
    /// image.
    pub fn epipole(&self) -> Vector3<f64> {
        self.e
    }

    /// Unit vector spanning the nullspace of `F`: the epipole in the second
    /// image.
    pub fn epipole_prime(&self) -> Vector3<f64> {
        self.e_prime
    }

    /// Classifies the first-image epipole as finite or at infinity.
    pub fn epipole_location(&self) -> EpipoleLocation {
        classify_epipole(&self.e)
    }

    /// Classifies the second-image epipole as finite or at infinity.
    pub fn epipole_prime_location(&self) -> EpipoleLocation {
        classify_epipole(&self.e_prime)
    }

    /// Both epipolar lines of a correspondence along with their normal norms:
    /// `l = F p~'` in the first image and `l' = F^T p~` in the second.
    ///
    /// Degenerate lines (`lambda = 0`) are representable; consumers decide
    /// how to treat them.
    pub fn epipolar_lines(&self, b: &Correspondence) -> EpipolarLines {
        let l = HomoLine::from_vector(self.m * b.p_prime.homogeneous());
        let l_prime = HomoLine::from_vector(self.m.transpose() * b.p.homogeneous());
        EpipolarLines {
            lambda: l.normal_norm(),
            lambda_prime: l_prime.normal_norm(),
            l,
            l_prime,
        }
    }
}

/// The epipolar lines of a correspondence and their normal norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpipolarLines {
    /// Line of `p_prime` in the first image.
    pub l: HomoLine,
    /// Line of `p` in the second image.
    pub l_prime: HomoLine,
    /// `sqrt(l1^2 + l2^2)`.
    pub lambda: f64,
    /// `sqrt(l1'^2 + l2'^2)`.
    pub lambda_prime: f64,
}

/// Unit right nullvector of a rank-2 matrix: the largest cross product of
/// two of its rows (any such vector is exactly orthogonal to both rows, and
/// orthogonal to the third up to the vanishing determinant).
fn unit_nullvector(m: &Matrix3<f64>) -> Vector3<f64> {
    let rows = [
        m.row(0).transpose(),
        m.row(1).transpose(),
        m.row(2).transpose(),
    ];
    let mut best = rows[0].cross(&rows[1]);
    for (i, j) in [(0, 2), (1, 2)] {
        let c = rows[i].cross(&rows[j]);
        if c.norm() > best.norm() {
            best = c;
        }
    }
    best / best.norm()
}

/// The skew-symmetric matrix of a cross product: `cross_matrix(v) * w = v x w`.
fn cross_matrix(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Fundamental matrix of a rectified pair: corresponding points share the
    /// same y coordinate.
    pub(crate) fn rectified_fm() -> FundamentalMatrix {
        FundamentalMatrix::from_matrix(Matrix3::new(
            0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, //
            0.0, -1.0, 0.0,
        ))
        .unwrap()
    }

    #[test]
    fn signed_distance_matches_hand_value() {
        let d = signed_distance(Point2::new(1.0, 1.0), HomoLine::new(3.0, 4.0, 0.0)).unwrap();
        assert_relative_eq!(d, 7.0 / 5.0, max_relative = 1e-15);
    }

    #[test]
    fn signed_distance_is_zero_on_the_line() {
        let d = signed_distance(Point2::new(0.0, 1.0), HomoLine::new(0.0, 1.0, -1.0)).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn signed_distance_rejects_improper_line() {
        let r = signed_distance(Point2::new(1.0, 2.0), HomoLine::new(0.0, 0.0, 5.0));
        assert_eq!(r, Err(Error::DegenerateLine));
    }

    #[test]
    fn unit_tangent_matches_hand_value() {
        let l = HomoLine::new(3.0, 4.0, 1.0);
        let t = l.unit_tangent().unwrap();
        assert_relative_eq!(t.x, 0.8, max_relative = 1e-15);
        assert_relative_eq!(t.y, -0.6, max_relative = 1e-15);
        let n = l.unit_normal().unwrap();
        assert_relative_eq!(n.dot(&t), 0.0, epsilon = 1e-15);
        assert_relative_eq!(n.norm(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn unit_vectors_reject_improper_line() {
        let l = HomoLine::new(0.0, 0.0, 1.0);
        assert_eq!(l.unit_tangent(), Err(Error::DegenerateLine));
        assert_eq!(l.unit_normal(), Err(Error::DegenerateLine));
    }

    fn simple_camera() -> Camera {
        Camera::new(
            Vector3::zeros(),
            Matrix3::identity(),
            100.0,
            Point2::new(10.0, 20.0),
        )
        .unwrap()
    }

    #[test]
    fn project_hits_principal_point_on_axis() {
        let cam = simple_camera();
        let p = cam.project(&Vector3::new(0.0, 0.0, 5.0)).unwrap();
        assert_eq!(p, Point2::new(10.0, 20.0));
    }

    #[test]
    fn project_scales_by_focal_over_depth() {
        let cam = simple_camera();
        let p = cam.project(&Vector3::new(1.0, -2.0, 4.0)).unwrap();
        assert_relative_eq!(p.x, 100.0 * 0.25 + 10.0, max_relative = 1e-15);
        assert_relative_eq!(p.y, 100.0 * -0.5 + 20.0, max_relative = 1e-15);
    }

    #[test]
    fn project_rejects_points_behind_and_at_infinity() {
        let cam = simple_camera();
        assert!(matches!(
            cam.project(&Vector3::new(0.0, 0.0, -3.0)),
            Err(Error::BehindCamera { .. })
        ));
        assert!(matches!(
            cam.project(&Vector3::new(1.0, 1.0, 1e-13)),
            Err(Error::ProjectsToInfinity { .. })
        ));
    }

    #[test]
    fn camera_rejects_bad_orientation_and_focal() {
        let flipped = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
        assert!(Camera::new(Vector3::zeros(), flipped, 1.0, Point2::new(0.0, 0.0)).is_err());
        assert!(
            Camera::new(Vector3::zeros(), Matrix3::identity(), 0.0, Point2::new(0.0, 0.0))
                .is_err()
        );
    }

    #[test]
    fn from_matrix_rejects_full_rank() {
        assert!(matches!(
            FundamentalMatrix::from_matrix(Matrix3::identity()),
            Err(Error::NotRankTwo { .. })
        ));
    }

    #[test]
    fn rectified_pair_gives_the_expected_matrix() {
        let cam = Camera::new(
            Vector3::zeros(),
            Matrix3::identity(),
            1.0,
            Point2::new(0.0, 0.0),
        )
        .unwrap();
        let cam_prime = Camera::new(
            Vector3::new(1.0, 0.0, 0.0),
            Matrix3::identity(),
            1.0,
            Point2::new(0.0, 0.0),
        )
        .unwrap();
        let fm = FundamentalMatrix::from_cameras(&cam, &cam_prime).unwrap();
        // Proportional to [[0,0,0],[0,0,1],[0,-1,0]], unit Frobenius norm,
        // largest entry positive.
        let expected = Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0) / 2f64.sqrt();
        assert_relative_eq!(fm.matrix(), &expected, epsilon = 1e-12);
        // Both epipoles at infinity along x.
        for e in [fm.epipole(), fm.epipole_prime()] {
            assert_relative_eq!(e.x.abs(), 1.0, max_relative = 1e-12);
            assert!(e.y.abs() < 1e-12 && e.z.abs() < 1e-12);
        }
        assert!(matches!(
            fm.epipole_location(),
            EpipoleLocation::AtInfinity(_)
        ));
    }

    #[test]
    fn epipolar_lines_match_rectified_geometry() {
        let fm = rectified_fm();
        let b = Correspondence::new(Point2::new(0.0, 0.0), Point2::new(0.0, 1.0));
        let lines = fm.epipolar_lines(&b);
        assert_eq!(lines.l, HomoLine::new(0.0, 1.0, -1.0));
        assert_eq!(lines.l_prime, HomoLine::new(0.0, -1.0, 0.0));
        assert_eq!(lines.lambda, 1.0);
        assert_eq!(lines.lambda_prime, 1.0);
    }

    #[test]
    fn epipolar_line_degenerates_at_the_epipole() {
        // A matrix with finite epipoles: cross matrix of (1, 2, 1) has
        // nullspace (1, 2, 1) on both sides.
        let fm = FundamentalMatrix::from_matrix(cross_matrix(&Vector3::new(1.0, 2.0, 1.0)))
            .unwrap();
        let e_prime = match fm.epipole_prime_location() {
            EpipoleLocation::Finite(p) => p,
            _ => panic!("expected a finite epipole"),
        };
        let lines = fm.epipolar_lines(&Correspondence::new(Point2::new(5.0, 5.0), e_prime));
        assert!(lines.lambda < 1e-12);
    }

    #[test]
    fn unit_frobenius_after_camera_construction() {
        let cam = Camera::new(
            Vector3::zeros(),
            Matrix3::identity(),
            1300.0,
            Point2::new(399.5, 299.5),
        )
        .unwrap();
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -0.2, 0.9);
        let cam_prime = Camera::new(
            Vector3::new(0.6, -0.3, 0.74),
            rot.into_inner(),
            1200.0,
            Point2::new(400.0, 300.0),
        )
        .unwrap();
        let fm = FundamentalMatrix::from_cameras(&cam, &cam_prime).unwrap();
        assert_relative_eq!(fm.matrix().norm(), 1.0, max_relative = 1e-12);
        // Cached epipoles are unit nullspace vectors.
        assert!((fm.matrix().transpose() * fm.epipole()).norm() < 1e-9);
        assert!((fm.matrix() * fm.epipole_prime()).norm() < 1e-9);
        assert_relative_eq!(fm.epipole().norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn coincident_centers_are_rejected() {
        let cam = simple_camera();
        assert_eq!(
            FundamentalMatrix::from_cameras(&cam, &cam.clone()),
            Err(Error::CoincidentCenters)
        );
    }
}
