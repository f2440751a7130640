//! Geometry of the unit ball in C²: the automorphisms `λ_α`, automorphisms
//! carrying the slice disc through the origin onto other slices through
//! `𝟏 = (1, 0)`, the slice reduction of ball maps to disc maps, and contact
//! of analytic discs with the sphere.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{self, ContactFit, CONTACT_LEVELS};
use crate::disc::BoundaryPoint;
use crate::error::{Error, Result};
use crate::holomap::{DiscMap, FunctionSpec};
use crate::numeric::fit_line;
use crate::report::{ReportBuilder, VerificationReport, Verdict};
use crate::rigidity::{self, BurnsKrantzOptions, Classification, RigidityVerdict};

pub const UNITARY_TOL: f64 = 1e-12;
pub const SLICE_G2_TOL: f64 = 1e-7;
pub const BALL_CERTIFY_RADIUS: f64 = 1.0 - 1e-6;
pub const BALL_CERTIFY_TOL: f64 = 1e-9;
pub const DEFAULT_SLICE_GRID: usize = 9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A point of the closed unit ball of C².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(Complex64, Complex64)", into = "(Complex64, Complex64)")]
pub struct BallPoint2 {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl TryFrom<(Complex64, Complex64)> for BallPoint2 {
    type Error = Error;
    fn try_from((z1, z2): (Complex64, Complex64)) -> Result<Self> {
        BallPoint2::new(z1, z2)
    }
}

impl From<BallPoint2> for (Complex64, Complex64) {
    fn from(p: BallPoint2) -> Self {
        (p.z1, p.z2)
    }
}

impl BallPoint2 {
    /// Accepts points of the closed ball; points within `1e-12` outside the
    /// sphere are pulled back onto it.
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        let p = BallPoint2 { z1, z2 };
        let n = p.norm_sqr();
        if !n.is_finite() || n > 1.0 + 1e-12 {
            return Err(Error::invalid(format!("({z1}, {z2}) lies outside the closed ball")));
        }
        Ok(if n > 1.0 { p.normalized() } else { p })
    }

    /// A point of the sphere; the input is rescaled to unit norm.
    pub fn boundary(z1: Complex64, z2: Complex64) -> Result<Self> {
        let p = BallPoint2 { z1, z2 };
        let n = p.norm_sqr();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::invalid("a boundary point needs a nonzero direction"));
        }
        Ok(p.normalized())
    }

    pub fn origin() -> Self {
        BallPoint2 { z1: c(0.0, 0.0), z2: c(0.0, 0.0) }
    }

    /// `𝟏 = (1, 0)`.
    pub fn one() -> Self {
        BallPoint2 { z1: c(1.0, 0.0), z2: c(0.0, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn distance(&self, other: &BallPoint2) -> f64 {
        ((self.z1 - other.z1).norm_sqr() + (self.z2 - other.z2).norm_sqr()).sqrt()
    }

    fn normalized(self) -> Self {
        let r = self.norm_sqr().sqrt();
        BallPoint2 {
            z1: self.z1 / r,
            z2: self.z2 / r,
        }
    }

    fn vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.z1, self.z2)
    }

    fn from_vector(v: Vector2<Complex64>) -> Self {
        BallPoint2 { z1: v[0], z2: v[1] }
    }
}

/// `⟨z, w⟩ = z₁w̄₁ + z₂w̄₂`.
fn inner(z: &Vector2<Complex64>, w: &Vector2<Complex64>) -> Complex64 {
    z[0] * w[0].conj() + z[1] * w[1].conj()
}

/// The displayed automorphism `λ_α`; it sends `(0, −α)` to the origin and
/// the slice disc `{(ζ, 0)}` onto the slice through
/// `(|α|², α√(1 − |α|²))` and `(1, 0)`.
pub fn lambda_alpha(alpha: Complex64, z: BallPoint2) -> Result<BallPoint2> {
    if !(alpha.norm() < 1.0) {
        return Err(Error::invalid(format!("|α| must be < 1, got {}", alpha.norm())));
    }
    Ok(BallPoint2::from_vector(lambda_raw(alpha, z.vector())))
}

fn lambda_raw(alpha: Complex64, z: Vector2<Complex64>) -> Vector2<Complex64> {
    let s = (1.0 - alpha.norm_sqr()).sqrt();
    let d = 1.0 + alpha.conj() * z[1];
    Vector2::new(
        ((1.0 - alpha.norm_sqr()) * z[0] + alpha.conj() * (z[1] + alpha)) / d,
        (-alpha * s * z[0] + (z[1] + alpha) * s) / d,
    )
}

/// The involution `φ_p` of the ball exchanging `p` and the origin.
fn involution(p: &Vector2<Complex64>, z: &Vector2<Complex64>) -> Vector2<Complex64> {
    let pp = inner(p, p).re;
    if pp == 0.0 {
        return -z;
    }
    let zp = inner(z, p);
    let proj = p * (zp / pp);
    let s = (1.0 - pp).sqrt();
    (p - proj - (z - proj) * c(s, 0.0)) / (1.0 - zp)
}

fn is_unitary(m: &Matrix2<Complex64>) -> bool {
    (m.adjoint() * m - Matrix2::identity()).norm() < UNITARY_TOL
}

pub type Matrix2c = Matrix2<Complex64>;

/// Unitary with first column `e` (a unit vector).
fn unitary_with_first_column(e: Vector2<Complex64>) -> Matrix2<Complex64> {
    Matrix2::new(e[0], -e[1].conj(), e[1], e[0].conj())
}

/// The unitary `[[p₁, −p̄₂w], [p₂, p̄₁w]]` for a sphere point `p` and a
/// unimodular `w`; every unitary of C² has this form.
pub fn unitary_from_column(p: BallPoint2, w: Complex64) -> Matrix2c {
    let p = p.normalized();
    let w = w / w.norm();
    Matrix2::new(p.z1, -p.z2.conj() * w, p.z2, p.z1.conj() * w)
}

#[derive(Serialize, Deserialize)]
struct RawAutomorphism {
    alpha: Complex64,
    pre_unitary: [[Complex64; 2]; 2],
    post_unitary: [[Complex64; 2]; 2],
}

fn to_rows(m: &Matrix2<Complex64>) -> [[Complex64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn from_rows(r: &[[Complex64; 2]; 2]) -> Matrix2<Complex64> {
    Matrix2::new(r[0][0], r[0][1], r[1][0], r[1][1])
}

/// `post ∘ λ_α ∘ pre` with unitary `pre`, `post`. JSON stores the matrices
/// row by row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAutomorphism", into = "RawAutomorphism")]
pub struct BallAutomorphism {
    alpha: Complex64,
    pre_unitary: Matrix2<Complex64>,
    post_unitary: Matrix2<Complex64>,
}

impl TryFrom<RawAutomorphism> for BallAutomorphism {
    type Error = Error;
    fn try_from(raw: RawAutomorphism) -> Result<Self> {
        BallAutomorphism::new(raw.alpha, from_rows(&raw.pre_unitary), from_rows(&raw.post_unitary))
    }
}

impl From<BallAutomorphism> for RawAutomorphism {
    fn from(a: BallAutomorphism) -> Self {
        RawAutomorphism {
            alpha: a.alpha,
            pre_unitary: to_rows(&a.pre_unitary),
            post_unitary: to_rows(&a.post_unitary),
        }
    }
}

impl BallAutomorphism {
    pub fn new(alpha: Complex64, pre_unitary: Matrix2<Complex64>, post_unitary: Matrix2<Complex64>) -> Result<Self> {
        if !(alpha.norm() < 1.0) {
            return Err(Error::invalid(format!("|α| must be < 1, got {}", alpha.norm())));
        }
        if !is_unitary(&pre_unitary) || !is_unitary(&post_unitary) {
            return Err(Error::invalid("pre and post matrices must be unitary"));
        }
        Ok(BallAutomorphism {
            alpha,
            pre_unitary,
            post_unitary,
        })
    }

    pub fn identity() -> Self {
        BallAutomorphism {
            alpha: c(0.0, 0.0),
            pre_unitary: Matrix2::identity(),
            post_unitary: Matrix2::identity(),
        }
    }

    pub fn lambda(alpha: Complex64) -> Result<Self> {
        Self::new(alpha, Matrix2::identity(), Matrix2::identity())
    }

    /// A unitary map of C².
    pub fn unitary(u: Matrix2<Complex64>) -> Result<Self> {
        Self::new(c(0.0, 0.0), Matrix2::identity(), u)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn pre_unitary(&self) -> Matrix2<Complex64> {
        self.pre_unitary
    }

    pub fn post_unitary(&self) -> Matrix2<Complex64> {
        self.post_unitary
    }

    fn apply_vec(&self, z: Vector2<Complex64>) -> Vector2<Complex64> {
        let w = lambda_raw(self.alpha, self.pre_unitary * z);
        self.post_unitary * w
    }

    pub fn apply(&self, z: BallPoint2) -> BallPoint2 {
        BallPoint2::from_vector(self.apply_vec(z.vector()))
    }

    /// `(W, q)` with `self = W ∘ φ_q`.
    fn normal_form(&self) -> (Matrix2<Complex64>, Vector2<Complex64>) {
        // λ_α(0, −α) = 0, so λ_α = U_α ∘ φ_(0,−α); φ_p ∘ V = V ∘ φ_{V*p}.
        let p = Vector2::new(c(0.0, 0.0), -self.alpha);
        let u_alpha = linear_part(|z| lambda_raw(self.alpha, involution(&p, &z)));
        let w = self.post_unitary * u_alpha * self.pre_unitary;
        (w, self.pre_unitary.adjoint() * p)
    }

    fn from_normal_form(w: Matrix2<Complex64>, q: Vector2<Complex64>) -> Self {
        let r = inner(&q, &q).re.sqrt();
        let alpha = c(-r, 0.0);
        let pre = if r == 0.0 {
            Matrix2::identity()
        } else {
            // pre q = (0, r): unitary whose adjoint has second column q/r.
            let e2 = q / c(r, 0.0);
            let v = Matrix2::new(-e2[1].conj(), e2[0], e2[0].conj(), e2[1]);
            v.adjoint()
        };
        let p = Vector2::new(c(0.0, 0.0), -alpha);
        let u_alpha = linear_part(|z| lambda_raw(alpha, involution(&p, &z)));
        let post = w * pre.adjoint() * u_alpha.adjoint();
        BallAutomorphism {
            alpha,
            pre_unitary: pre,
            post_unitary: post,
        }
    }

    pub fn inverse(&self) -> Self {
        let (w, q) = self.normal_form();
        Self::from_normal_form(w.adjoint(), w * q)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BallAutomorphism) -> Self {
        let q = other.inverse().apply_vec(self.inverse().apply_vec(Vector2::zeros()));
        let w = linear_part(|z| self.apply_vec(other.apply_vec(involution(&q, &z))));
        Self::from_normal_form(w, q)
    }

    /// Pointwise agreement at a few probe points of the closed ball.
    pub fn approx_eq(&self, other: &BallAutomorphism, tol: f64) -> bool {
        probe_points().iter().all(|z| self.apply(*z).distance(&other.apply(*z)) <= tol)
    }
}

/// Matrix of a map known to be linear, read off from the images of the
/// basis vectors.
fn linear_part<F: Fn(Vector2<Complex64>) -> Vector2<Complex64>>(f: F) -> Matrix2<Complex64> {
    let e1 = f(Vector2::new(c(1.0, 0.0), c(0.0, 0.0)));
    let e2 = f(Vector2::new(c(0.0, 0.0), c(1.0, 0.0)));
    Matrix2::from_columns(&[e1, e2])
}

fn probe_points() -> [BallPoint2; 4] {
    [
        BallPoint2::origin(),
        BallPoint2 { z1: c(0.3, 0.1), z2: c(-0.2, 0.4) },
        BallPoint2 { z1: c(-0.5, 0.0), z2: c(0.0, 0.6) },
        BallPoint2 { z1: c(0.6, 0.0), z2: c(0.0, -0.8) },
    ]
}

/// The slice disc through `a` and `𝟏`: `{𝟏 + s(a − 𝟏)} ∩ B`.
fn distance_to_line_through_one(a: BallPoint2, z: BallPoint2) -> f64 {
    let d = a.vector() - BallPoint2::one().vector();
    let v = z.vector() - BallPoint2::one().vector();
    let s = inner(&v, &d) / inner(&d, &d);
    (v - d * s).norm()
}

/// An automorphism fixing `𝟏` that carries `{(ζ, 0)}` onto the slice disc
/// through `a` and `𝟏`; it sends the origin to `a`.
pub fn automorphism_to_line(a: BallPoint2) -> Result<BallAutomorphism> {
    if a.distance(&BallPoint2::one()) < 1e-12 {
        return Err(Error::DegenerateLine);
    }
    if !(a.norm_sqr() < 1.0) {
        return Err(Error::invalid("the slice point must lie in the open ball"));
    }
    // φ_a ∘ W with W𝟏 = φ_a(𝟏) fixes 𝟏 and sends 0 to a.
    let av = a.vector();
    let e = involution(&av, &BallPoint2::one().vector());
    let w = unitary_with_first_column(e);
    Ok(BallAutomorphism::from_normal_form(w, w.adjoint() * av))
}

/// Verifies that an automorphism fixes `𝟏` and maps five points of
/// `{(ζ, 0)}` into the slice through `a`; returns the largest defect.
pub fn line_defect(psi: &BallAutomorphism, a: BallPoint2) -> f64 {
    let fixed = psi.apply(BallPoint2::one()).distance(&BallPoint2::one());
    let on_line = (0..5)
        .map(|k| {
            let zeta = Complex64::from_polar(0.2 * k as f64, 1.3 * k as f64);
            let image = psi.apply(BallPoint2 { z1: zeta, z2: c(0.0, 0.0) });
            if a.distance(&BallPoint2::one()) < 1e-12 {
                0.0
            } else {
                distance_to_line_through_one(a, image)
            }
        })
        .fold(0.0, f64::max);
    fixed.max(on_line)
}

/// Holomorphic maps of the ball used as test inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BallMapSpec {
    Identity,
    Automorphism { automorphism: BallAutomorphism },
    /// `(f(z₁), κ z₂)`.
    Product { first: FunctionSpec, kappa: f64 },
    Composition { outer: Box<BallMapSpec>, inner: Box<BallMapSpec> },
}

impl BallMapSpec {
    pub fn apply(&self, z: BallPoint2) -> Result<BallPoint2> {
        Ok(match self {
            BallMapSpec::Identity => z,
            BallMapSpec::Automorphism { automorphism } => automorphism.apply(z),
            BallMapSpec::Product { first, kappa } => BallPoint2 {
                z1: first.evaluate(z.z1)?,
                z2: z.z2 * *kappa,
            },
            BallMapSpec::Composition { outer, inner } => outer.apply(inner.apply(z)?)?,
        })
    }

    fn is_automorphism(&self) -> bool {
        match self {
            BallMapSpec::Identity | BallMapSpec::Automorphism { .. } => true,
            BallMapSpec::Composition { outer, inner } => outer.is_automorphism() && inner.is_automorphism(),
            BallMapSpec::Product { .. } => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallCertificate {
    pub max_boundary_norm: f64,
    pub samples: usize,
    pub analytic: bool,
}

/// A ball map that passed sampled certification of `Φ(B) ⊂ B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedBallMap {
    spec: BallMapSpec,
    certificate: BallCertificate,
}

impl CertifiedBallMap {
    /// Samples `|Φ|` on the sphere of radius `1 − 1e-6` (a 16 × 32 × 32 grid
    /// in Hopf coordinates); automorphisms are accepted directly.
    pub fn certify(spec: BallMapSpec) -> Result<Self> {
        if spec.is_automorphism() {
            return Ok(CertifiedBallMap {
                spec,
                certificate: BallCertificate {
                    max_boundary_norm: 1.0,
                    samples: 0,
                    analytic: true,
                },
            });
        }
        let (nt, na) = (16usize, 32usize);
        let mut worst = (0.0f64, BallPoint2::origin());
        for i in 0..=nt {
            let t = 0.5 * PI * i as f64 / nt as f64;
            for j in 0..na {
                for k in 0..na {
                    let z = BallPoint2 {
                        z1: Complex64::from_polar(BALL_CERTIFY_RADIUS * t.cos(), 2.0 * PI * j as f64 / na as f64),
                        z2: Complex64::from_polar(BALL_CERTIFY_RADIUS * t.sin(), 2.0 * PI * k as f64 / na as f64),
                    };
                    let n = spec.apply(z)?.norm_sqr().sqrt();
                    if !(n <= worst.0) {
                        worst = (n, z);
                    }
                }
            }
        }
        if !(worst.0 <= 1.0 + BALL_CERTIFY_TOL) {
            return Err(Error::CertificationFailed {
                point: worst.1.z1,
                modulus: worst.0,
            });
        }
        Ok(CertifiedBallMap {
            spec,
            certificate: BallCertificate {
                max_boundary_norm: worst.0,
                samples: (nt + 1) * na * na,
                analytic: false,
            },
        })
    }

    pub fn spec(&self) -> &BallMapSpec {
        &self.spec
    }

    pub fn certificate(&self) -> &BallCertificate {
        &self.certificate
    }

    pub fn apply(&self, z: BallPoint2) -> Result<BallPoint2> {
        self.spec.apply(z)
    }
}

/// `G_a = ψ_a⁻¹ ∘ Φ ∘ ψ_a` restricted to `{(ζ, 0)}`, with `ψ_a` from
/// [`automorphism_to_line`]. As a [`DiscMap`] it evaluates the first
/// component `H_a`.
#[derive(Debug, Clone)]
pub struct SliceMap<'a> {
    phi: &'a CertifiedBallMap,
    psi: BallAutomorphism,
    psi_inverse: BallAutomorphism,
    pub a: BallPoint2,
}

impl<'a> SliceMap<'a> {
    /// Both components `(H_a(ζ), g_a²(ζ))`.
    pub fn components(&self, zeta: Complex64) -> Result<(Complex64, Complex64)> {
        let z = BallPoint2::new(zeta, c(0.0, 0.0))?;
        let w = self.psi_inverse.apply(self.phi.apply(self.psi.apply(z))?);
        Ok((w.z1, w.z2))
    }

    pub fn second_component(&self, zeta: Complex64) -> Result<Complex64> {
        Ok(self.components(zeta)?.1)
    }
}

impl DiscMap for SliceMap<'_> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.components(z)?.0)
    }
}

pub fn slice_map(phi: &CertifiedBallMap, a: BallPoint2) -> Result<SliceMap<'_>> {
    let psi = automorphism_to_line(a)?;
    Ok(SliceMap {
        phi,
        psi,
        psi_inverse: psi.inverse(),
        a,
    })
}

/// The default sample of slice points: the origin, then shells of radius
/// 0.3, 0.6, 0.8, 0.9 in four complex directions transverse to `{(ζ, 0)}`.
pub fn slice_grid(n: usize) -> Vec<BallPoint2> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let directions = [
        (c(0.0, 0.0), c(1.0, 0.0)),
        (c(0.0, 0.0), c(0.0, 1.0)),
        (c(h, 0.0), c(h, 0.0)),
        (c(0.0, h), c(-h, 0.0)),
    ];
    let mut out = vec![BallPoint2::origin()];
    for r in [0.3, 0.6, 0.8, 0.9, 0.95] {
        for (d1, d2) in directions {
            out.push(BallPoint2 { z1: d1 * r, z2: d2 * r });
        }
    }
    out.truncate(n.max(1));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceResult {
    pub a: BallPoint2,
    pub verdict: RigidityVerdict,
    /// Largest sampled `|g_a²|`.
    pub g2_sup: f64,
    /// Contact of `g_a²` with zero at 1.
    pub g2_contact: ContactFit,
}

impl SliceResult {
    /// Both components agree with the identity slice to order ≥ 3.9 at 1.
    pub fn hypothesis_holds(&self) -> bool {
        self.verdict.hypothesis_holds && self.g2_contact.order >= rigidity::CONTACT_GATE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallRigidityVerdict {
    pub classification: Classification,
    pub slices: Vec<SliceResult>,
    pub max_g2_sup: f64,
    pub details: VerificationReport,
}

/// Runs the disc classifier on `H_a` for each slice point and checks that
/// the transverse component `g_a²` vanishes; the map is classified as the
/// identity only if every slice passes both tests. The verdict is
/// `Violated` when every slice meets the contact hypothesis in both
/// components and the map is still not the identity.
pub fn burns_krantz_ball_classify(phi: &CertifiedBallMap, grid_of_a: usize) -> Result<BallRigidityVerdict> {
    let mut report = ReportBuilder::new("burns-krantz-ball", &(phi.spec(), grid_of_a));
    report
        .tolerance("g2_sup", SLICE_G2_TOL)
        .tolerance("remainder_mass", rigidity::REMAINDER_MASS_TOL)
        .tolerance("contact_gate", rigidity::CONTACT_GATE);
    let samples = rigidity::spiral_points(200, 0.99);
    let mut slices = Vec::new();
    for a in slice_grid(grid_of_a) {
        let h = slice_map(phi, a)?;
        let verdict = rigidity::burns_krantz_pipeline(&h, &(phi.spec(), a), BurnsKrantzOptions::default())?;
        let mut g2_sup = 0.0f64;
        for z in &samples {
            g2_sup = g2_sup.max(h.second_component(*z)?.norm());
        }
        let zero = |_: Complex64| -> Result<Complex64> { Ok(c(0.0, 0.0)) };
        let g2 = |z: Complex64| h.second_component(z);
        let g2_contact = boundary::contact_order(&g2, &zero, BoundaryPoint::one())?;
        report.slack(
            format!("slice g2 at ({}, {})", a.z1, a.z2),
            Some(a.z1),
            SLICE_G2_TOL - g2_sup,
        );
        slices.push(SliceResult {
            a,
            verdict,
            g2_sup,
            g2_contact,
        });
    }
    let all_identity = slices
        .iter()
        .all(|s| s.verdict.classification == Classification::Identity && s.g2_sup < SLICE_G2_TOL);
    let classification = if all_identity {
        Classification::Identity
    } else {
        Classification::NonIdentity
    };
    let max_g2_sup = slices.iter().map(|s| s.g2_sup).fold(0.0, f64::max);
    let hypothesis = slices.iter().all(SliceResult::hypothesis_holds);
    report
        .detail("classification", classification)
        .detail("hypothesis_holds", hypothesis)
        .detail("max_g2_sup", max_g2_sup)
        .detail(
            "slice_classifications",
            slices.iter().map(|s| s.verdict.classification).collect::<Vec<_>>(),
        );
    let verdict = if hypothesis && classification == Classification::NonIdentity {
        Verdict::Violated
    } else {
        Verdict::Holds
    };
    let details = report.finish(verdict, Some(c(1.0, 0.0)));
    Ok(BallRigidityVerdict {
        classification,
        slices,
        max_g2_sup,
        details,
    })
}

/// The ball's defining function `ρ(z) = |z₁|² + |z₂|² − 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DefiningFunction;

impl DefiningFunction {
    pub fn value(&self, z: BallPoint2) -> f64 {
        z.norm_sqr() - 1.0
    }

    /// `(∂ρ/∂z̄₁, ∂ρ/∂z̄₂) = (z₁, z₂)`; the real gradient is twice this.
    pub fn gradient(&self, z: BallPoint2) -> (Complex64, Complex64) {
        (z.z1, z.z2)
    }
}

/// Analytic discs `D → C²` used as test inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticDisc {
    /// `ζ ↦ (ζ, 0)`.
    Slice,
    /// `ζ ↦ ((1 + ζ)/2, c(1 − ζ)/2)`, inside the ball for `|c| ≤ 1`.
    Tangent { c: Complex64 },
    /// `ζ ↦ Ψ(ζ, 0)` for an automorphism `Ψ`.
    Image { automorphism: BallAutomorphism },
    Constant { point: BallPoint2 },
}

impl AnalyticDisc {
    pub fn eval(&self, zeta: Complex64) -> Result<BallPoint2> {
        match self {
            AnalyticDisc::Slice => BallPoint2::new(zeta, c(0.0, 0.0)),
            AnalyticDisc::Tangent { c: k } => BallPoint2::new((1.0 + zeta) / 2.0, k * (1.0 - zeta) / 2.0),
            AnalyticDisc::Image { automorphism } => Ok(automorphism.apply(BallPoint2::new(zeta, c(0.0, 0.0))?)),
            AnalyticDisc::Constant { point } => Ok(*point),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscContact {
    pub fit: ContactFit,
    /// Type of the boundary point; the fitted exponent cannot exceed it.
    pub type_bound: usize,
    pub within_bound: bool,
}

/// Slope of `log|ρ(φ(t))|` against `log‖φ(t) − P‖` along `t = 1 − 2^{−j}`.
pub fn analytic_disc_contact<F>(phi: F, rho: &DefiningFunction, p: BallPoint2, m: usize) -> Result<DiscContact>
where
    F: Fn(Complex64) -> Result<BallPoint2>,
{
    if (p.norm_sqr() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("the contact point must lie on the sphere"));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut all_at_p = true;
    for j in CONTACT_LEVELS.0..=CONTACT_LEVELS.1 {
        let t = 1.0 - 0.5f64.powi(j as i32);
        let w = phi(c(t, 0.0))?;
        let d = w.distance(&p);
        if d >= 1e-13 {
            all_at_p = false;
        }
        let r = rho.value(w).abs();
        if d >= 1e-13 && r >= 1e-15 {
            xs.push(d.ln());
            ys.push(r.ln());
        }
    }
    if all_at_p {
        return Err(Error::ConstantDisc);
    }
    let last = phi(c(1.0 - 0.5f64.powi(CONTACT_LEVELS.1 as i32), 0.0))?;
    if last.distance(&p) > 1e-2 {
        return Err(Error::invalid("the disc does not approach the contact point radially"));
    }
    if xs.len() < 2 {
        return Err(Error::invalid("too few usable probes for a contact fit"));
    }
    let fit = fit_line(&xs, &ys);
    let fit = ContactFit {
        order: fit.slope,
        coefficient_modulus: fit.intercept.exp(),
        residual: fit.residual,
        samples: xs.len(),
    };
    Ok(DiscContact {
        fit,
        type_bound: m,
        within_bound: fit.order <= m as f64 + 0.1,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bp(z1: Complex64, z2: Complex64) -> BallPoint2 {
        BallPoint2::new(z1, z2).unwrap()
    }

    #[test]
    fn lambda_examples() {
        let alpha = c(0.3, -0.4);
        let w = lambda_alpha(alpha, BallPoint2::origin()).unwrap();
        let s = (1.0 - alpha.norm_sqr()).sqrt();
        assert!((w.z1 - alpha.norm_sqr()).norm() < 1e-15);
        assert!((w.z2 - alpha * s).norm() < 1e-15);

        let z = bp(c(0.2, 0.1), c(-0.3, 0.5));
        assert_eq!(lambda_alpha(c(0.0, 0.0), z).unwrap(), z);

        // λ_α(0, 1) lies on the sphere but is not (1, 0) in general.
        let w = lambda_alpha(alpha, bp(c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        assert!((w.norm_sqr() - 1.0).abs() < 1e-14);
        let expected1 = alpha.conj() * (1.0 + alpha) / (1.0 + alpha.conj());
        assert!((w.z1 - expected1).norm() < 1e-15);

        let w = lambda_alpha(alpha, bp(c(0.0, 0.0), -alpha)).unwrap();
        assert!(w.norm_sqr() < 1e-30);
        assert!(lambda_alpha(c(1.0, 0.0), z).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let id = BallAutomorphism::identity();
        let z = bp(c(0.2, 0.1), c(-0.3, 0.5));
        assert_eq!(id.apply(z), z);

        let psi = automorphism_to_line(BallPoint2::origin()).unwrap();
        assert!(psi.approx_eq(&id, 1e-14));

        let alpha = c(0.5, 0.0);
        let a = lambda_alpha(alpha, BallPoint2::origin()).unwrap();
        let psi = automorphism_to_line(a).unwrap();
        assert!(line_defect(&psi, a) < 1e-12);
        assert!(psi.apply(BallPoint2::origin()).distance(&a) < 1e-14);

        assert_eq!(automorphism_to_line(BallPoint2::one()), Err(Error::DegenerateLine));
    }

    #[test]
    fn raw_lambda_image_of_slice_is_a_line() {
        // λ_α sends {(ζ, 0)} into the complex line through λ_α(0) and λ_α(1, 0).
        let alpha = c(0.2, 0.5);
        let lam = BallAutomorphism::lambda(alpha).unwrap();
        let p0 = lam.apply(BallPoint2::origin()).vector();
        let p1 = lam.apply(BallPoint2::one()).vector();
        let d = p1 - p0;
        for k in 0..5 {
            let zeta = Complex64::from_polar(0.15 * k as f64 + 0.1, k as f64);
            let v = lam.apply(bp(zeta, c(0.0, 0.0))).vector() - p0;
            let s = inner(&v, &d) / inner(&d, &d);
            assert!((v - d * s).norm() < 1e-14);
        }
    }

    #[test]
    fn slice_examples() {
        let id = CertifiedBallMap::certify(BallMapSpec::Identity).unwrap();
        let a = bp(c(0.1, 0.2), c(0.3, -0.1));
        let h = slice_map(&id, a).unwrap();
        for k in 0..5 {
            let zeta = Complex64::from_polar(0.2 * k as f64, 0.7 * k as f64);
            let (h1, g2) = h.components(zeta).unwrap();
            assert!((h1 - zeta).norm() < 1e-13);
            assert!(g2.norm() < 1e-13);
        }

        let rot = BallAutomorphism::unitary(Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, 0.8))).unwrap();
        let rot = CertifiedBallMap::certify(BallMapSpec::Automorphism { automorphism: rot }).unwrap();
        let h = slice_map(&rot, BallPoint2::origin()).unwrap();
        assert!((h.eval(c(0.4, 0.3)).unwrap() - c(0.4, 0.3)).norm() < 1e-15);

        let sq = CertifiedBallMap::certify(BallMapSpec::Product {
            first: FunctionSpec::power(2),
            kappa: 0.0,
        })
        .unwrap();
        let h = slice_map(&sq, BallPoint2::origin()).unwrap();
        let zeta = c(0.3, -0.6);
        assert!((h.eval(zeta).unwrap() - zeta * zeta).norm() < 1e-15);
    }

    #[test]
    fn certification_rejects_expanding_maps() {
        let bad = BallMapSpec::Product {
            first: FunctionSpec::identity(),
            kappa: 1.5,
        };
        assert!(matches!(CertifiedBallMap::certify(bad), Err(Error::CertificationFailed { .. })));
    }

    #[test]
    fn ball_classification_examples() {
        let id = CertifiedBallMap::certify(BallMapSpec::Identity).unwrap();
        let v = burns_krantz_ball_classify(&id, DEFAULT_SLICE_GRID).unwrap();
        assert_eq!(v.classification, Classification::Identity);
        assert_eq!(v.slices.len(), 9);
        assert!(v.max_g2_sup < 1e-12, "{}", v.max_g2_sup);

        let psi = automorphism_to_line(bp(c(0.3, 0.0), c(0.2, 0.1))).unwrap();
        let phi = CertifiedBallMap::certify(BallMapSpec::Automorphism { automorphism: psi }).unwrap();
        let v = burns_krantz_ball_classify(&phi, DEFAULT_SLICE_GRID).unwrap();
        assert_eq!(v.classification, Classification::NonIdentity);

        let twist = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, 0.8));
        let twist = BallAutomorphism::unitary(twist).unwrap();
        let phi = CertifiedBallMap::certify(BallMapSpec::Automorphism { automorphism: twist }).unwrap();
        let v = burns_krantz_ball_classify(&phi, DEFAULT_SLICE_GRID).unwrap();
        assert_eq!(v.classification, Classification::NonIdentity);
        assert_eq!(v.details.verdict, Verdict::Holds);

        let product = CertifiedBallMap::certify(BallMapSpec::Product {
            first: FunctionSpec::cubic_counterexample(),
            kappa: 0.9,
        })
        .unwrap();
        let v = burns_krantz_ball_classify(&product, DEFAULT_SLICE_GRID).unwrap();
        assert_eq!(v.classification, Classification::NonIdentity);
        let origin_slice = &v.slices[0].verdict;
        assert_eq!(origin_slice.classification, Classification::NonIdentity);
        assert!((origin_slice.contact_order.order - 3.0).abs() < 0.1);
    }

    #[test]
    fn disc_contact_examples() {
        let rho = DefiningFunction;
        let one = BallPoint2::one();
        let r = analytic_disc_contact(|z| AnalyticDisc::Slice.eval(z), &rho, one, 2).unwrap();
        assert!((r.fit.order - 1.0).abs() < 0.05, "{r:?}");
        assert!(r.within_bound);

        let constant = AnalyticDisc::Constant { point: one };
        assert_eq!(analytic_disc_contact(|z| constant.eval(z), &rho, one, 2), Err(Error::ConstantDisc));

        let tangent = AnalyticDisc::Tangent { c: c(0.6, 0.8) };
        let r = analytic_disc_contact(|z| tangent.eval(z), &rho, one, 2).unwrap();
        assert!(r.fit.order <= 2.1);

        assert!(rho.value(BallPoint2::origin()) < 0.0);
        assert_eq!(rho.value(one), 0.0);
    }

    fn alpha() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.95, 0.0f64..(2.0 * PI)).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn sphere_point() -> impl Strategy<Value = BallPoint2> {
        (0.0f64..(0.5 * PI), 0.0f64..(2.0 * PI), 0.0f64..(2.0 * PI)).prop_map(|(t, a, b)| BallPoint2 {
            z1: Complex64::from_polar(t.cos(), a),
            z2: Complex64::from_polar(t.sin(), b),
        })
    }

    fn interior_point() -> impl Strategy<Value = BallPoint2> {
        (sphere_point(), 0.0f64..0.95).prop_map(|(p, r)| BallPoint2 { z1: p.z1 * r, z2: p.z2 * r })
    }

    fn random_unitary() -> impl Strategy<Value = Matrix2<Complex64>> {
        (sphere_point(), 0.0f64..(2.0 * PI)).prop_map(|(p, t)| {
            let u = unitary_with_first_column(Vector2::new(p.z1, p.z2));
            u * Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, t))
        })
    }

    fn automorphism() -> impl Strategy<Value = BallAutomorphism> {
        (alpha(), random_unitary(), random_unitary()).prop_map(|(a, u, v)| BallAutomorphism::new(a, u, v).unwrap())
    }

    proptest! {
        #[test]
        fn lambda_preserves_the_sphere(a in alpha(), z in sphere_point()) {
            prop_assert!((lambda_alpha(a, z).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn automorphisms_preserve_interior_and_sphere(f in automorphism(), z in interior_point(), s in sphere_point()) {
            prop_assert!(f.apply(z).norm_sqr() < 1.0);
            prop_assert!((f.apply(s).norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn group_laws(f in automorphism(), g in automorphism(), h in automorphism(), z in interior_point()) {
            let inv = f.inverse();
            prop_assert!(inv.apply(f.apply(z)).distance(&z) < 1e-10);
            prop_assert!(f.apply(inv.apply(z)).distance(&z) < 1e-10);
            let fg = f.compose(&g);
            prop_assert!(fg.apply(z).distance(&f.apply(g.apply(z))) < 1e-10);
            let left = f.compose(&g).compose(&h);
            let right = f.compose(&g.compose(&h));
            prop_assert!(left.approx_eq(&right, 1e-9));
        }

        #[test]
        fn line_automorphisms_fix_one(a in interior_point()) {
            let psi = automorphism_to_line(a).unwrap();
            prop_assert!(line_defect(&psi, a) < 1e-10);
            prop_assert!(psi.apply(BallPoint2::origin()).distance(&a) < 1e-12);
        }

        #[test]
        fn lambda_at_origin(a in alpha()) {
            let w = lambda_alpha(a, BallPoint2::origin()).unwrap();
            prop_assert!((w.z1 - a.norm_sqr()).norm() < 1e-12);
            prop_assert!((w.z2 - a * (1.0 - a.norm_sqr()).sqrt()).norm() < 1e-12);
        }

        #[test]
        fn test_discs_have_contact_at_most_two(k in (0.0f64..1.0, 0.0f64..(2.0 * PI)), a in interior_point()) {
            let rho = DefiningFunction;
            let tangent = AnalyticDisc::Tangent { c: Complex64::from_polar(k.0, k.1) };
            let r = analytic_disc_contact(|z| tangent.eval(z), &rho, BallPoint2::one(), 2).unwrap();
            prop_assert!(r.fit.order <= 2.1);
            let image = AnalyticDisc::Image { automorphism: automorphism_to_line(a).unwrap() };
            let r = analytic_disc_contact(|z| image.eval(z), &rho, BallPoint2::one(), 2).unwrap();
            prop_assert!(r.fit.order <= 2.1);
        }
    }
}
