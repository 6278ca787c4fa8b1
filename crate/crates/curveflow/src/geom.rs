//! Small planar geometry helpers shared across the crate.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, positive when `other` is
    /// counter-clockwise from `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Counter-clockwise rotation by pi/2.
    pub fn rot90(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

/// A direct (orientation-preserving) rigid motion `x -> R(angle) x + shift`.
#[derive(Debug, Clone, Copy)]
pub struct RigidMotion {
    pub angle: f64,
    pub shift: Vec2,
}

impl RigidMotion {
    pub fn identity() -> Self {
        RigidMotion {
            angle: 0.0,
            shift: Vec2::ZERO,
        }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        p.rotated(self.angle) + self.shift
    }

    /// Rotates a direction vector without translating it.
    pub fn apply_dir(&self, v: Vec2) -> Vec2 {
        v.rotated(self.angle)
    }
}

/// Least-squares rigid motion (rotation + translation, no reflection)
/// mapping `from[i]` onto `to[i]`.
pub fn fit_rigid_motion(from: &[Vec2], to: &[Vec2]) -> RigidMotion {
    assert_eq!(from.len(), to.len());
    assert!(!from.is_empty());
    let n = from.len() as f64;
    let cf = from.iter().fold(Vec2::ZERO, |a, &p| a + p) / n;
    let ct = to.iter().fold(Vec2::ZERO, |a, &p| a + p) / n;
    let mut sin_acc = 0.0;
    let mut cos_acc = 0.0;
    for (&f, &t) in from.iter().zip(to) {
        let f = f - cf;
        let t = t - ct;
        sin_acc += f.cross(t);
        cos_acc += f.dot(t);
    }
    let angle = sin_acc.atan2(cos_acc);
    let shift = ct - cf.rotated(angle);
    RigidMotion { angle, shift }
}

/// Maximum pointwise distance after applying the motion to `from`.
pub fn aligned_max_distance(motion: &RigidMotion, from: &[Vec2], to: &[Vec2]) -> f64 {
    from.iter()
        .zip(to)
        .map(|(&f, &t)| motion.apply(f).dist(t))
        .fold(0.0, f64::max)
}

/// Closest point on the segment `[a, b]` to `p`.
pub fn project_to_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a + ab * t
}
