//! Points of the unit disc, disc automorphisms and the pseudohyperbolic metric.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when deciding that two automorphisms coincide.
pub const TRANSFORM_EQ_TOL: f64 = 1e-12;

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() < 1.0 && z.is_finite() {
            Ok(DiscPoint(z))
        } else {
            Err(Error::invalid(format!("{z} is not inside the unit disc")))
        }
    }

    pub fn origin() -> Self {
        DiscPoint(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for DiscPoint {
    type Error = Error;
    fn try_from(z: Complex64) -> Result<Self> {
        DiscPoint::new(z)
    }
}

impl From<DiscPoint> for Complex64 {
    fn from(p: DiscPoint) -> Complex64 {
        p.0
    }
}

/// A point of the unit circle, stored with modulus exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct BoundaryPoint(Complex64);

impl BoundaryPoint {
    /// Accepts points within 1e-8 of the circle and renormalizes them.
    pub fn new(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if !z.is_finite() || (r - 1.0).abs() > 1e-8 {
            return Err(Error::invalid(format!("{z} is not on the unit circle")));
        }
        Ok(BoundaryPoint(z / r))
    }

    pub fn from_angle(theta: f64) -> Self {
        BoundaryPoint(Complex64::from_polar(1.0, theta))
    }

    pub fn one() -> Self {
        BoundaryPoint(Complex64::new(1.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn angle(self) -> f64 {
        self.0.arg()
    }
}

impl TryFrom<Complex64> for BoundaryPoint {
    type Error = Error;
    fn try_from(z: Complex64) -> Result<Self> {
        BoundaryPoint::new(z)
    }
}

impl From<BoundaryPoint> for Complex64 {
    fn from(p: BoundaryPoint) -> Complex64 {
        p.0
    }
}

/// The disc automorphism `z ↦ e^{iθ} (z − a) / (1 − ā z)`.
///
/// The rotation is applied after the Möbius factor. Every automorphism of
/// the disc has exactly one such form with `θ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusTransform {
    pub rotation: f64,
    pub center: DiscPoint,
}

impl MoebiusTransform {
    pub fn new(rotation: f64, center: DiscPoint) -> Self {
        MoebiusTransform {
            rotation: normalize_angle(rotation),
            center,
        }
    }

    pub fn identity() -> Self {
        Self::new(0.0, DiscPoint::origin())
    }

    pub fn rotation(theta: f64) -> Self {
        Self::new(theta, DiscPoint::origin())
    }

    /// `φ_a(z) = (z − a)/(1 − ā z)`, the automorphism sending `a` to 0.
    pub fn phi(a: DiscPoint) -> Self {
        Self::new(0.0, a)
    }

    fn unit(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let a = self.center.value();
        self.unit() * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }

    /// `e^{iθ} (1 − |a|²) / (1 − ā z)²`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let a = self.center.value();
        let d = Complex64::new(1.0, 0.0) - a.conj() * z;
        self.unit() * (1.0 - a.norm_sqr()) / (d * d)
    }

    /// Inverse: `w ↦ e^{-iθ}(w + a e^{iθ}) / (1 + ā e^{-iθ} w)`, i.e. center
    /// `−a e^{iθ}` and rotation `−θ`.
    pub fn inverse(&self) -> Self {
        let a = self.center.value();
        let center = DiscPoint(-a * self.unit());
        Self::new(-self.rotation, center)
    }

    /// The automorphism `z ↦ self(other(z))` in canonical form.
    pub fn compose(&self, other: &MoebiusTransform) -> Self {
        // Center of the composite is its preimage of 0.
        let c = other.inverse().apply(self.center.value());
        let c = DiscPoint(clamp_interior(c));
        // u'(c) = e^{iθ}/(1 − |c|²), so the rotation is the argument of the
        // chain-rule derivative at c.
        let d = self.derivative(other.apply(c.value())) * other.derivative(c.value());
        Self::new(d.arg(), c)
    }

    /// Pointwise comparison at the probe points 0, 1/2 and i/2.
    pub fn approx_eq(&self, other: &MoebiusTransform, tol: f64) -> bool {
        probe_points()
            .iter()
            .all(|&z| (self.apply(z) - other.apply(z)).norm() <= tol)
    }

    /// Fits the Möbius transformation through three `(z, w)` pairs and
    /// returns it in canonical form when it is a disc automorphism.
    pub fn fit(pairs: [(Complex64, Complex64); 3]) -> Option<Self> {
        let [(z1, w1), (z2, w2), (z3, w3)] = pairs;
        // Cross-ratio normalizers sending (p1, p2, p3) to (0, 1, ∞).
        let normalizer = |p1: Complex64, p2: Complex64, p3: Complex64| {
            [[p2 - p3, -p1 * (p2 - p3)], [p2 - p1, -p3 * (p2 - p1)]]
        };
        let az = normalizer(z1, z2, z3);
        let aw = normalizer(w1, w2, w3);
        let det_w = aw[0][0] * aw[1][1] - aw[0][1] * aw[1][0];
        if det_w.norm() < 1e-300 {
            return None;
        }
        let inv_w = [[aw[1][1], -aw[0][1]], [-aw[1][0], aw[0][0]]];
        let m = mat_mul(inv_w, az);
        let [[p, q], [r, s]] = m;
        let det = p * s - q * r;
        if det.norm() < 1e-14 * (p.norm() + q.norm()) * (r.norm() + s.norm()) || p.norm() < 1e-300 {
            return None;
        }
        let a = -q / p;
        if !a.is_finite() || a.norm() >= 1.0 {
            return None;
        }
        let d = det / ((r * a + s) * (r * a + s));
        Some(Self::new(d.arg(), DiscPoint(a)))
    }
}

fn mat_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// The probe points used for pointwise equality of transforms.
pub fn probe_points() -> [Complex64; 3] {
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.5),
    ]
}

/// `ρ(a, b) = |(b − a)/(1 − ā b)|`.
pub fn pseudohyperbolic_distance(a: DiscPoint, b: DiscPoint) -> f64 {
    let (a, b) = (a.value(), b.value());
    ((b - a) / (Complex64::new(1.0, 0.0) - a.conj() * b)).norm()
}

fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

// Rounding can push a computed center onto the circle when the inputs sit
// within an ulp of it.
fn clamp_interior(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r < 1.0 {
        z
    } else {
        z * ((1.0 - f64::EPSILON) / r)
    }
}
