//! Symbolic holomorphic maps of the disc with exact values and derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::{DiscPoint, MoebiusTransform};
use crate::error::{Error, Result};
use crate::herglotz::{self, HerglotzData};
use crate::numeric;

/// Default number of equispaced samples used by [`certify_self_map`].
pub const DEFAULT_CERTIFY_GRID: usize = 4096;
/// Sampling radius for non-inner maps.
pub const CERTIFY_RADIUS: f64 = 1.0 - 1e-6;
/// Maximum admitted modulus for a certified self-map.
pub const CERTIFY_TOL: f64 = 1e-9;
/// Default radius of the Cauchy circle for Taylor coefficients.
pub const DEFAULT_TAYLOR_RADIUS: f64 = 0.5;

/// Anything that can be evaluated as a holomorphic function on the disc.
pub trait DiscMap {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
}

impl<F> DiscMap for F
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self(z)
    }
}

/// A holomorphic map of the disc given by one of a few closed forms.
///
/// JSON uses a `kind` tag; complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FunctionSpec {
    /// `e^{iθ} Π (z − a_k)/(1 − ā_k z)`; repeated zeros encode multiplicity.
    #[serde(rename = "blaschke")]
    BlaschkeProduct { rotation: f64, zeros: Vec<DiscPoint> },
    /// `(g − 1)/(g + 1)` with `g` the Herglotz transform of the data.
    #[serde(rename = "herglotz")]
    HerglotzInduced { measure: HerglotzData },
    /// `Σ c_k z^k`.
    #[serde(rename = "polynomial")]
    PolynomialMap { coefficients: Vec<Complex64> },
    #[serde(rename = "composition")]
    Composition {
        outer: Box<FunctionSpec>,
        inner: Box<FunctionSpec>,
    },
    #[serde(rename = "moebius")]
    MoebiusMap {
        #[serde(flatten)]
        transform: MoebiusTransform,
    },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl FunctionSpec {
    pub fn identity() -> Self {
        FunctionSpec::BlaschkeProduct {
            rotation: 0.0,
            zeros: vec![DiscPoint::origin()],
        }
    }

    pub fn blaschke(rotation: f64, zeros: Vec<DiscPoint>) -> Self {
        FunctionSpec::BlaschkeProduct { rotation, zeros }
    }

    /// `z^n`.
    pub fn power(n: usize) -> Self {
        FunctionSpec::BlaschkeProduct {
            rotation: 0.0,
            zeros: vec![DiscPoint::origin(); n],
        }
    }

    /// `z (z + a)/(1 + a z)` for real `a ∈ [0, 1)`, the family on which the
    /// boundary derivative bound `2/(1 + |f'(0)|)` is attained.
    pub fn extremal(a: f64) -> Result<Self> {
        let zero = DiscPoint::new(c(-a, 0.0))?;
        Ok(FunctionSpec::BlaschkeProduct {
            rotation: 0.0,
            zeros: vec![DiscPoint::origin(), zero],
        })
    }

    pub fn polynomial(coefficients: Vec<Complex64>) -> Self {
        FunctionSpec::PolynomialMap { coefficients }
    }

    /// `z − (z − 1)³/10`, tangent to the identity at 1 to third order only.
    pub fn cubic_counterexample() -> Self {
        // z − (z³ − 3z² + 3z − 1)/10
        Self::polynomial(vec![c(0.1, 0.0), c(0.7, 0.0), c(0.3, 0.0), c(-0.1, 0.0)])
    }

    /// `z⁸ − (1/256)(z + 1)[(z² + 1)(z⁴ + 1)]²(z − 1)⁴`.
    pub fn chelst_example() -> Self {
        let real = |v: &[f64]| v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>();
        let z_plus_1 = real(&[1.0, 1.0]);
        let z2_plus_1 = real(&[1.0, 0.0, 1.0]);
        let z4_plus_1 = real(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        let z_minus_1 = real(&[-1.0, 1.0]);
        let bracket = poly_mul(&z2_plus_1, &z4_plus_1);
        let mut tail = poly_mul(&z_plus_1, &poly_mul(&bracket, &bracket));
        for _ in 0..4 {
            tail = poly_mul(&tail, &z_minus_1);
        }
        let mut coefficients: Vec<Complex64> = tail.iter().map(|t| -t / 256.0).collect();
        coefficients[8] += 1.0;
        Self::polynomial(coefficients)
    }

    pub fn moebius(transform: MoebiusTransform) -> Self {
        FunctionSpec::MoebiusMap { transform }
    }

    pub fn herglotz(measure: HerglotzData) -> Self {
        FunctionSpec::HerglotzInduced { measure }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: FunctionSpec, inner: FunctionSpec) -> Self {
        FunctionSpec::Composition {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            FunctionSpec::BlaschkeProduct { .. } => "blaschke",
            FunctionSpec::HerglotzInduced { .. } => "herglotz",
            FunctionSpec::PolynomialMap { .. } => "polynomial",
            FunctionSpec::Composition { .. } => "composition",
            FunctionSpec::MoebiusMap { .. } => "moebius",
        }
    }

    /// True for maps that are unimodular on the whole circle by construction.
    pub fn is_inner(&self) -> bool {
        match self {
            FunctionSpec::BlaschkeProduct { .. } | FunctionSpec::MoebiusMap { .. } => true,
            FunctionSpec::Composition { outer, inner } => outer.is_inner() && inner.is_inner(),
            _ => false,
        }
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        let strict = matches!(self, FunctionSpec::HerglotzInduced { .. });
        let r = z.norm();
        if !z.is_finite() || (strict && r >= 1.0) || r > 1.0 + 1e-12 {
            return Err(Error::Domain {
                point: z,
                reason: if strict {
                    "Herglotz-induced maps are evaluated strictly inside the disc"
                } else {
                    "evaluation point outside the closed disc"
                },
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        Ok(match self {
            FunctionSpec::BlaschkeProduct { rotation, zeros } => {
                zeros
                    .iter()
                    .map(|a| blaschke_factor(a.value(), z))
                    .product::<Complex64>()
                    * Complex64::from_polar(1.0, *rotation)
            }
            FunctionSpec::HerglotzInduced { measure } => {
                herglotz::cayley_halfplane_to_disc(herglotz::herglotz_transform(measure, z)?)?
            }
            FunctionSpec::PolynomialMap { coefficients } => horner(coefficients, z),
            FunctionSpec::Composition { outer, inner } => outer.evaluate(inner.evaluate(z)?)?,
            FunctionSpec::MoebiusMap { transform } => transform.apply(z),
        })
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        Ok(match self {
            FunctionSpec::BlaschkeProduct { rotation, zeros } => {
                blaschke_derivative(zeros, z) * Complex64::from_polar(1.0, *rotation)
            }
            FunctionSpec::HerglotzInduced { measure } => {
                let g = herglotz::herglotz_transform(measure, z)?;
                let dg = herglotz::herglotz_transform_derivative(measure, z)?;
                let d = g + 1.0;
                if d.norm() < herglotz::CAYLEY_POLE_TOL {
                    return Err(Error::Domain {
                        point: z,
                        reason: "Herglotz transform hits -1",
                    });
                }
                dg * 2.0 / (d * d)
            }
            FunctionSpec::PolynomialMap { coefficients } => {
                let derived: Vec<Complex64> = coefficients
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, a)| a * k as f64)
                    .collect();
                horner(&derived, z)
            }
            FunctionSpec::Composition { outer, inner } => {
                let w = inner.evaluate(z)?;
                outer.derivative(w)? * inner.derivative(z)?
            }
            FunctionSpec::MoebiusMap { transform } => transform.derivative(z),
        })
    }
}

impl DiscMap for FunctionSpec {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.evaluate(z)
    }
}

fn blaschke_factor(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

fn blaschke_factor_derivative(a: Complex64, z: Complex64) -> Complex64 {
    let d = Complex64::new(1.0, 0.0) - a.conj() * z;
    (1.0 - a.norm_sqr()) / (d * d)
}

// Product rule with prefix/suffix products, so zeros of B are handled.
fn blaschke_derivative(zeros: &[DiscPoint], z: Complex64) -> Complex64 {
    let factors: Vec<Complex64> = zeros.iter().map(|a| blaschke_factor(a.value(), z)).collect();
    let n = factors.len();
    let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] * factors[k];
    }
    let mut prefix = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, a) in zeros.iter().enumerate() {
        sum += prefix * blaschke_factor_derivative(a.value(), z) * suffix[k + 1];
        prefix *= factors[k];
    }
    sum
}

fn horner(coefficients: &[Complex64], z: Complex64) -> Complex64 {
    coefficients
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

pub(crate) fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Numerical evidence that a map sends the disc into the closed disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfMapCertificate {
    pub max_boundary_modulus: f64,
    pub grid_size: usize,
    /// `1 −` the largest sampled modulus.
    pub margin: f64,
    /// Certified from the closed form (finite Blaschke products and their
    /// compositions) rather than by sampling.
    pub analytic: bool,
}

/// Certifies `f: D → D` with the default tolerance.
pub fn certify_self_map(f: &FunctionSpec, grid: usize) -> Result<SelfMapCertificate> {
    certify_self_map_with_tolerance(f, grid, CERTIFY_TOL)
}

/// Samples `|f|` on the circle of radius `1 − 1e-6` at `grid` equispaced
/// angles and accepts when the maximum is at most `1 + tol`. Inner maps are
/// accepted from their closed form.
pub fn certify_self_map_with_tolerance(
    f: &FunctionSpec,
    grid: usize,
    tol: f64,
) -> Result<SelfMapCertificate> {
    if grid < 256 {
        return Err(Error::invalid(format!(
            "certification grid must have at least 256 points, got {grid}"
        )));
    }
    if f.is_inner() {
        return Ok(SelfMapCertificate {
            max_boundary_modulus: 1.0,
            grid_size: grid,
            margin: 0.0,
            analytic: true,
        });
    }
    if let FunctionSpec::Composition { inner, .. } = f {
        certify_self_map_with_tolerance(inner, grid, tol)?;
    }
    let mut worst = (Complex64::new(0.0, 0.0), 0.0f64);
    for j in 0..grid {
        let z = Complex64::from_polar(CERTIFY_RADIUS, 2.0 * PI * j as f64 / grid as f64);
        let m = f.evaluate(z)?.norm();
        if !(m <= worst.1) {
            worst = (z, m);
        }
    }
    if !(worst.1 <= 1.0 + tol) {
        return Err(Error::CertificationFailed {
            point: worst.0,
            modulus: worst.1,
        });
    }
    Ok(SelfMapCertificate {
        max_boundary_modulus: worst.1,
        grid_size: grid,
        margin: 1.0 - worst.1,
        analytic: false,
    })
}

/// A [`FunctionSpec`] that passed self-map certification. Verifiers that
/// rely on `f(D) ⊂ D` only accept this type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfMap {
    spec: FunctionSpec,
    certificate: SelfMapCertificate,
}

impl SelfMap {
    pub fn certify(spec: FunctionSpec) -> Result<Self> {
        Self::certify_with(spec, DEFAULT_CERTIFY_GRID, CERTIFY_TOL)
    }

    pub fn certify_with(spec: FunctionSpec, grid: usize, tol: f64) -> Result<Self> {
        let certificate = certify_self_map_with_tolerance(&spec, grid, tol)?;
        Ok(SelfMap { spec, certificate })
    }

    /// `outer ∘ inner` of two certified maps is certified.
    pub fn compose(outer: &SelfMap, inner: &SelfMap) -> SelfMap {
        SelfMap {
            spec: FunctionSpec::compose(outer.spec.clone(), inner.spec.clone()),
            certificate: SelfMapCertificate {
                max_boundary_modulus: outer.certificate.max_boundary_modulus,
                grid_size: outer.certificate.grid_size.min(inner.certificate.grid_size),
                margin: outer.certificate.margin,
                analytic: outer.certificate.analytic && inner.certificate.analytic,
            },
        }
    }

    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn certificate(&self) -> &SelfMapCertificate {
        &self.certificate
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.spec.evaluate(z)
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.spec.derivative(z)
    }
}

impl DiscMap for SelfMap {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.spec.evaluate(z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorExpansion {
    pub coefficients: Vec<Complex64>,
    /// `radius^n / (1 − radius)` times the largest sampled modulus.
    pub error_bound: f64,
    pub max_modulus: f64,
}

/// Coefficients `c_0..c_{n−1}` from discrete Cauchy integrals on the circle
/// of the given radius with `8n` nodes.
pub fn taylor_coefficients<M: DiscMap + ?Sized>(f: &M, n: usize, radius: f64) -> Result<TaylorExpansion> {
    if !(radius > 0.0 && radius <= 0.9) {
        return Err(Error::invalid(format!(
            "Cauchy radius must lie in (0, 0.9], got {radius}"
        )));
    }
    let nodes = (8 * n).max(8);
    let cc = numeric::cauchy_coefficients(|z| f.eval(z), n, radius, nodes)?;
    Ok(TaylorExpansion {
        coefficients: cc.coefficients,
        error_bound: radius.powi(n as i32) / (1.0 - radius) * cc.max_modulus,
        max_modulus: cc.max_modulus,
    })
}
