//! Boundary behavior of disc maps: radial limits, angular derivatives,
//! contact orders, lengths of boundary images and Hopf-type normal
//! derivative checks for harmonic functions.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::disc::BoundaryPoint;
use crate::error::{Error, Result};
use crate::holomap::{DiscMap, FunctionSpec};
use crate::numeric::{adaptive_simpson, dyadic_radii, fit_line, richardson};

/// Radial probes use `t_j = 1 − 2^{−j}` for `j` in this range.
pub const RADIAL_LEVELS: (u32, u32) = (4, 20);
/// Difference quotients for angular derivatives stop earlier to limit
/// cancellation.
pub const QUOTIENT_LEVELS: (u32, u32) = (4, 16);
pub const CONTACT_LEVELS: (u32, u32) = (6, 16);
/// Differences below this are treated as exact contact.
pub const CONTACT_FLOOR: f64 = 1e-13;
/// Largest admitted spread between the last two extrapolants.
pub const CONVERGENCE_TOL: f64 = 1e-4;
pub const UNIMODULAR_TOL: f64 = 1e-6;
pub const ARC_TOL: f64 = 1e-9;
const RICHARDSON_LEVELS: usize = 2;

/// Samples of a map along the radius ending at a boundary point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProbe {
    pub boundary_point: BoundaryPoint,
    pub radii: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl RadialProbe {
    pub fn sample<M: DiscMap + ?Sized>(f: &M, b: BoundaryPoint, levels: (u32, u32)) -> Result<Self> {
        let radii = dyadic_radii(levels.0, levels.1);
        let values = radii
            .iter()
            .map(|&t| f.eval(b.value() * t))
            .collect::<Result<Vec<_>>>()?;
        Ok(RadialProbe {
            boundary_point: b,
            radii,
            values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialLimit {
    pub value: Complex64,
    /// Difference of the last two extrapolants.
    pub error: f64,
}

/// Extrapolated limit of `f(t b)` as `t → 1`.
pub fn radial_limit<M: DiscMap + ?Sized>(f: &M, b: BoundaryPoint) -> Result<RadialLimit> {
    let probe = RadialProbe::sample(f, b, RADIAL_LEVELS)?;
    let e = richardson(&probe.values, RICHARDSON_LEVELS);
    if !(e.spread <= CONVERGENCE_TOL) {
        return Err(Error::NonConvergent {
            point: b.value(),
            spread: e.spread,
        });
    }
    Ok(RadialLimit {
        value: e.value,
        error: e.spread,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularDerivative {
    /// `|f'(b)|`.
    pub modulus: f64,
    pub value: Complex64,
    pub limit: Complex64,
    pub error: f64,
}

/// Limit of `(f(t b) − c)/(t b − b)` where `c` is the radial limit.
pub fn angular_derivative<M: DiscMap + ?Sized>(f: &M, b: BoundaryPoint) -> Result<AngularDerivative> {
    let c = radial_limit(f, b)?.value;
    if (c.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::NotUnimodularLimit {
            point: b.value(),
            limit: c,
        });
    }
    let probe = RadialProbe::sample(f, b, QUOTIENT_LEVELS)?;
    let quotients: Vec<Complex64> = probe
        .radii
        .iter()
        .zip(&probe.values)
        .map(|(&t, &v)| (v - c) / (b.value() * (t - 1.0)))
        .collect();
    let e = richardson(&quotients, RICHARDSON_LEVELS);
    if !(e.spread <= CONVERGENCE_TOL) {
        return Err(Error::NonConvergent {
            point: b.value(),
            spread: e.spread,
        });
    }
    Ok(AngularDerivative {
        modulus: e.value.norm(),
        value: e.value,
        limit: c,
        error: e.spread,
    })
}

/// Quotients `(1 − |f(t_j b)|)/(1 − t_j)` along the radius.
pub fn boundary_quotients<M: DiscMap + ?Sized>(
    f: &M,
    b: BoundaryPoint,
    levels: (u32, u32),
) -> Result<Vec<(f64, f64)>> {
    let probe = RadialProbe::sample(f, b, levels)?;
    Ok(probe
        .radii
        .iter()
        .zip(&probe.values)
        .map(|(&t, v)| (t, (1.0 - v.norm()) / (1.0 - t)))
        .collect())
}

/// Power-law fit `|f − g| ≈ C |ζ − b|^k` along a radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactFit {
    /// `f64::INFINITY` when the difference is below [`CONTACT_FLOOR`] at
    /// every probe; serialized as the string `"inf"`.
    #[serde(serialize_with = "finite_or_inf")]
    pub order: f64,
    pub coefficient_modulus: f64,
    pub residual: f64,
    /// Number of probes used by the fit.
    pub samples: usize,
}

impl ContactFit {
    pub fn is_exact(&self) -> bool {
        self.order.is_infinite()
    }
}

pub(crate) fn finite_or_inf<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

/// Slope of `log|f − reference|` against `log|ζ − b|` at `t_j = 1 − 2^{−j}`,
/// `j = 6..=16`. Probes where the difference is below the floor are
/// dropped; if fewer than three remain, coarser probes `j = 5, 4, 3` are
/// added.
pub fn contact_order<F, G>(f: &F, reference: &G, b: BoundaryPoint) -> Result<ContactFit>
where
    F: DiscMap + ?Sized,
    G: DiscMap + ?Sized,
{
    let mut points = Vec::new();
    let probe = |j: u32, points: &mut Vec<(f64, f64)>| -> Result<()> {
        let h = 0.5f64.powi(j as i32);
        let z = b.value() * (1.0 - h);
        let d = (f.eval(z)? - reference.eval(z)?).norm();
        if d >= CONTACT_FLOOR {
            points.push((h.ln(), d.ln()));
        }
        Ok(())
    };
    for j in CONTACT_LEVELS.0..=CONTACT_LEVELS.1 {
        probe(j, &mut points)?;
    }
    if points.is_empty() {
        return Ok(ContactFit {
            order: f64::INFINITY,
            coefficient_modulus: 0.0,
            residual: 0.0,
            samples: 0,
        });
    }
    let mut j = CONTACT_LEVELS.0;
    while points.len() < 3 && j > 3 {
        j -= 1;
        probe(j, &mut points)?;
    }
    if points.len() < 2 {
        return Ok(ContactFit {
            order: f64::INFINITY,
            coefficient_modulus: 0.0,
            residual: 0.0,
            samples: points.len(),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let fit = fit_line(&xs, &ys);
    Ok(ContactFit {
        order: fit.slope.max(0.0),
        coefficient_modulus: fit.intercept.exp(),
        residual: fit.residual,
        samples: xs.len(),
    })
}

/// Length of the image of the arc `[θ₁, θ₂]` under an inner map:
/// `∫ |B'(e^{iθ})| dθ`.
pub fn arc_image_length(b: &FunctionSpec, theta1: f64, theta2: f64) -> Result<f64> {
    if !b.is_inner() {
        return Err(Error::invalid(format!(
            "arc image length needs a finite Blaschke product, got {}",
            b.variant_name()
        )));
    }
    let span = theta2 - theta1;
    if !(0.0..=2.0 * PI + 1e-12).contains(&span) {
        return Err(Error::invalid(format!(
            "arc [{theta1}, {theta2}] must have length in [0, 2π]"
        )));
    }
    // Evaluate first so domain errors surface as errors, not NaN.
    b.derivative(Complex64::from_polar(1.0, theta1))?;
    Ok(adaptive_simpson(
        |t| {
            b.derivative(Complex64::from_polar(1.0, t))
                .map(|d| d.norm())
                .unwrap_or(f64::NAN)
        },
        theta1,
        theta2,
        ARC_TOL,
    ))
}

/// A harmonic function given as the real part of an analytic expression.
#[derive(Clone)]
pub struct HarmonicExpr {
    label: String,
    analytic: Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
}

impl fmt::Debug for HarmonicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HarmonicExpr").field("label", &self.label).finish()
    }
}

impl HarmonicExpr {
    /// `Re F` for an analytic `F`.
    pub fn real_part<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        HarmonicExpr {
            label: label.into(),
            analytic: Arc::new(f),
        }
    }

    /// `Re f` for a map given in closed form.
    pub fn of_spec(spec: FunctionSpec) -> Self {
        let label = format!("Re {}", spec.variant_name());
        Self::real_part(label, move |z| spec.evaluate(z))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, z: Complex64) -> Result<f64> {
        Ok((self.analytic)(z)?.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HopfVerdict {
    StrictlyNegative,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfReport {
    /// Outward normal derivative at `P`.
    pub normal_derivative: f64,
    /// Lower bound `c/R` on the inward slope implied by Harnack's inequality,
    /// `c` the minimum of `u` on the concentric circle of radius `R/2`.
    pub harnack_constant: f64,
    pub verdict: HopfVerdict,
    pub extrapolation_error: f64,
}

const HOPF_RINGS: usize = 25;
const HOPF_SPOKES: usize = 40;
const NEGATIVITY_TOL: f64 = 1e-12;

/// Checks the Hopf lemma for `u` at `P` on the internally tangent disc of
/// radius `R`: `u ≥ 0` there and `u(P) = 0` force `∂u/∂ν(P) < 0`.
pub fn hopf_check(u: &HarmonicExpr, p: BoundaryPoint, radius: f64) -> Result<HopfReport> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::invalid(format!("tangent radius must lie in (0, 1], got {radius}")));
    }
    let p = p.value();
    let center = p * (1.0 - radius);
    for ring in 1..=HOPF_RINGS {
        let s = radius * ring as f64 / (HOPF_RINGS + 1) as f64;
        for spoke in 0..HOPF_SPOKES {
            let z = center + Complex64::from_polar(s, 2.0 * PI * spoke as f64 / HOPF_SPOKES as f64);
            let v = u.eval(z)?;
            if v < -NEGATIVITY_TOL {
                return Err(Error::NotNonnegative { point: z, value: v });
            }
        }
    }
    let up = u.eval(p)?;
    if up.abs() > 1e-10 {
        return Err(Error::NotVanishingAtP { value: up });
    }
    let c = (0..256)
        .map(|k| u.eval(center + Complex64::from_polar(0.5 * radius, 2.0 * PI * k as f64 / 256.0)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let harnack_constant = c / radius;
    let quotients = (4..=20)
        .map(|j| {
            let h = radius * 0.5f64.powi(j);
            Ok(Complex64::new((up - u.eval(p * (1.0 - h))?) / h, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    let e = richardson(&quotients, RICHARDSON_LEVELS);
    let normal_derivative = e.value.re;
    let verdict = if normal_derivative <= -harnack_constant / 2.0 && harnack_constant > 0.0 {
        HopfVerdict::StrictlyNegative
    } else {
        HopfVerdict::Inconclusive
    };
    Ok(HopfReport {
        normal_derivative,
        harnack_constant,
        verdict,
        extrapolation_error: e.spread,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollarReport {
    pub minimum: f64,
    pub witness: Complex64,
    pub nonnegative: bool,
}

pub const COLLAR_TOL: f64 = 1e-10;

fn polar_grid(r_min: f64, r_max: f64, samples: usize) -> impl Iterator<Item = Complex64> {
    let rings = ((samples as f64).sqrt().ceil() as usize).max(1);
    let spokes = samples.div_ceil(rings).max(1);
    (0..rings).flat_map(move |i| {
        let r = if rings == 1 {
            r_min
        } else {
            r_min + (r_max - r_min) * i as f64 / (rings - 1) as f64
        };
        (0..spokes).map(move |k| Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5 * (i % 2) as f64) / spokes as f64))
    })
}

/// If `u ≥ 0` on the collar `{collar_inner_radius ≤ |ζ| < 1}`, then `u ≥ 0`
/// on the whole disc. The collar is sampled first; then the whole disc is
/// scanned and the minimum reported.
pub fn collar_positivity(u: &HarmonicExpr, collar_inner_radius: f64, samples: usize) -> Result<CollarReport> {
    if !(0.0..1.0).contains(&collar_inner_radius) || samples == 0 {
        return Err(Error::invalid("collar radius must lie in [0, 1) and samples must be positive"));
    }
    let outer = 1.0 - 1e-6;
    for z in polar_grid(collar_inner_radius, outer, samples) {
        let v = u.eval(z)?;
        if v < -COLLAR_TOL {
            return Err(Error::CollarHypothesisViolated { point: z, value: v });
        }
    }
    let mut worst = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for z in polar_grid(0.0, outer, samples) {
        let v = u.eval(z)?;
        if v < worst.0 {
            worst = (v, z);
        }
    }
    Ok(CollarReport {
        minimum: worst.0,
        witness: worst.1,
        nonnegative: worst.0 >= -COLLAR_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::DiscPoint;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> BoundaryPoint {
        BoundaryPoint::one()
    }

    fn extremal() -> FunctionSpec {
        FunctionSpec::extremal(0.5).unwrap()
    }

    #[test]
    fn radial_limit_examples() {
        let l = radial_limit(&FunctionSpec::identity(), one()).unwrap();
        assert!((l.value - 1.0).norm() < 1e-12);
        let l = radial_limit(&FunctionSpec::power(2), BoundaryPoint::new(c(0.0, 1.0)).unwrap()).unwrap();
        assert!((l.value + 1.0).norm() < 1e-12);
        let l = radial_limit(&extremal(), one()).unwrap();
        let exact = extremal().evaluate(c(1.0, 0.0)).unwrap();
        assert!((l.value - exact).norm() < 1e-12);
        assert!((exact - 1.0).norm() < 1e-15);
    }

    #[test]
    fn radial_limit_reports_divergence() {
        let wild = |z: Complex64| Ok((1.0 / (1.0 - z.re)).sin() * c(1.0, 0.0));
        assert!(matches!(radial_limit(&wild, one()), Err(Error::NonConvergent { .. })));
    }

    #[test]
    fn angular_derivative_examples() {
        let d = angular_derivative(&FunctionSpec::identity(), one()).unwrap();
        assert!((d.modulus - 1.0).abs() < 1e-9);
        let d = angular_derivative(&extremal(), one()).unwrap();
        assert!((d.modulus - 4.0 / 3.0).abs() < 1e-8, "{}", d.modulus);
        let d = angular_derivative(&FunctionSpec::power(2), one()).unwrap();
        assert!((d.modulus - 2.0).abs() < 1e-8);
        let half = FunctionSpec::polynomial(vec![c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(
            angular_derivative(&half, one()),
            Err(Error::NotUnimodularLimit { .. })
        ));
    }

    #[test]
    fn angular_derivative_of_herglotz_map_at_an_atom() {
        use crate::herglotz::{BoundaryMeasure, HerglotzData};
        // Near the atom, 1 − φ ≈ 2π(1 − ζ)/m; the other atom adds a finite term.
        let m = 3.0;
        let measure = BoundaryMeasure::new([(0.0, m), (PI, 1.0)]).unwrap();
        let f = FunctionSpec::herglotz(HerglotzData::new(measure, 0.0));
        let d = angular_derivative(&f, one()).unwrap();
        assert!((d.limit - 1.0).norm() < 1e-6);
        assert!((d.modulus - 2.0 * PI / m).abs() < 1e-4, "{}", d.modulus);
    }

    fn planted(k: i32, coefficient: f64) -> FunctionSpec {
        // ζ + coefficient·(ζ − 1)^k, expanded.
        let mut p = vec![c(1.0, 0.0)];
        for _ in 0..k {
            p = crate::holomap::poly_mul(&p, &[c(-1.0, 0.0), c(1.0, 0.0)]);
        }
        let mut coeffs: Vec<Complex64> = p.iter().map(|x| x * coefficient).collect();
        if coeffs.len() < 2 {
            coeffs.resize(2, c(0.0, 0.0));
        }
        coeffs[1] += 1.0;
        FunctionSpec::polynomial(coeffs)
    }

    #[test]
    fn contact_order_examples() {
        let id = FunctionSpec::identity();
        let fit = contact_order(&id, &id, one()).unwrap();
        assert!(fit.is_exact());
        assert_eq!(serde_json::to_value(fit).unwrap()["order"], "inf");

        let fit = contact_order(&FunctionSpec::cubic_counterexample(), &id, one()).unwrap();
        assert!((fit.order - 3.0).abs() < 0.05, "{fit:?}");
        assert!((fit.coefficient_modulus - 0.1).abs() < 1e-3);

        let fit = contact_order(&planted(4, 0.01), &id, one()).unwrap();
        assert!((fit.order - 4.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn contact_order_recovers_planted_exponents() {
        let id = FunctionSpec::identity();
        for k in 2..=5 {
            for coefficient in [0.01, 0.05] {
                let fit = contact_order(&planted(k, coefficient), &id, one()).unwrap();
                assert!((fit.order - k as f64).abs() <= 0.1, "k = {k}: {fit:?}");
            }
        }
    }

    #[test]
    fn contact_order_of_chelst_example() {
        let f = FunctionSpec::chelst_example();
        let b = FunctionSpec::power(8);
        let at_one = contact_order(&f, &b, one()).unwrap();
        assert!((at_one.order - 4.0).abs() < 0.1, "{at_one:?}");
        let at_minus_one = contact_order(&f, &b, BoundaryPoint::from_angle(PI)).unwrap();
        assert!(at_minus_one.order < 1.9, "{at_minus_one:?}");
    }

    fn poisson_sum(zeros: &[Complex64], theta: f64) -> f64 {
        let w = Complex64::from_polar(1.0, theta);
        zeros.iter().map(|a| (1.0 - a.norm_sqr()) / (w - a).norm_sqr()).sum()
    }

    #[test]
    fn arc_length_examples() {
        let l = arc_image_length(&FunctionSpec::identity(), 0.0, PI / 2.0).unwrap();
        assert!((l - PI / 2.0).abs() < 1e-9);
        let l = arc_image_length(&FunctionSpec::power(2), 0.3, 1.3).unwrap();
        assert!((l - 2.0).abs() < 1e-9);
        let l = arc_image_length(&extremal(), 0.0, PI).unwrap();
        assert!(l >= 4.0 / 3.0 * PI);
        let oracle = adaptive_simpson(|t| poisson_sum(&[c(0.0, 0.0), c(-0.5, 0.0)], t), 0.0, PI, 1e-11);
        assert!((l - oracle).abs() < 1e-8);
        assert!(arc_image_length(&FunctionSpec::cubic_counterexample(), 0.0, 1.0).is_err());
        assert!(arc_image_length(&FunctionSpec::identity(), 1.0, 0.0).is_err());
    }

    #[test]
    fn hopf_examples() {
        let u = HarmonicExpr::real_part("1 - z", |z| Ok(1.0 - z));
        let r = hopf_check(&u, one(), 1.0).unwrap();
        assert!((r.normal_derivative + 1.0).abs() < 1e-9);
        assert_eq!(r.verdict, HopfVerdict::StrictlyNegative);

        let u = HarmonicExpr::real_part("(1 - z)^2", |z| Ok((1.0 - z) * (1.0 - z)));
        assert!(matches!(hopf_check(&u, one(), 1.0), Err(Error::NotNonnegative { .. })));
        assert!(matches!(hopf_check(&u, one(), 0.2), Err(Error::NotNonnegative { .. })));

        let u = HarmonicExpr::real_part("1 + z", |z| Ok(1.0 + z));
        let r = hopf_check(&u, BoundaryPoint::from_angle(PI), 1.0).unwrap();
        assert!((r.normal_derivative + 1.0).abs() < 1e-9);
        assert_eq!(r.verdict, HopfVerdict::StrictlyNegative);

        let u = HarmonicExpr::real_part("2 - z", |z| Ok(2.0 - z));
        assert!(matches!(hopf_check(&u, one(), 1.0), Err(Error::NotVanishingAtP { .. })));
    }

    #[test]
    fn hopf_on_poisson_kernel_reciprocal() {
        // u = Re((1 − ζ)/(1 + ζ)) vanishes on the circle away from −1 and is
        // positive inside; at P = 1 the outward derivative is −1/2.
        let u = HarmonicExpr::real_part("cayley", |z| Ok((1.0 - z) / (1.0 + z)));
        let r = hopf_check(&u, one(), 0.5).unwrap();
        assert!((r.normal_derivative + 0.5).abs() < 1e-8, "{r:?}");
        assert_eq!(r.verdict, HopfVerdict::StrictlyNegative);
    }

    #[test]
    fn collar_examples() {
        let u = HarmonicExpr::real_part("1", |_| Ok(c(1.0, 0.0)));
        let r = collar_positivity(&u, 0.9, 1000).unwrap();
        assert!(r.nonnegative);
        assert!((r.minimum - 1.0).abs() < 1e-15);

        let u = HarmonicExpr::real_part("z", Ok);
        assert!(matches!(
            collar_positivity(&u, 0.9, 1000),
            Err(Error::CollarHypothesisViolated { .. })
        ));

        let u = HarmonicExpr::real_part("1 + z/2", |z| Ok(1.0 + z * 0.5));
        let r = collar_positivity(&u, 0.5, 2000).unwrap();
        assert!(r.nonnegative && r.minimum > 0.49);
    }

    fn origin_fixing_blaschke() -> impl Strategy<Value = FunctionSpec> {
        (
            -PI..PI,
            prop::collection::vec((0.0f64..0.8, 0.0f64..(2.0 * PI)), 0..=4),
        )
            .prop_map(|(rot, zs)| {
                let mut zeros = vec![DiscPoint::origin()];
                zeros.extend(zs.into_iter().map(|(r, t)| DiscPoint::new(Complex64::from_polar(r, t)).unwrap()));
                FunctionSpec::blaschke(rot, zeros)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn angular_derivative_obeys_boundary_schwarz_bound(f in origin_fixing_blaschke(), theta in 0.0f64..(2.0 * PI)) {
            let b = BoundaryPoint::from_angle(theta);
            let a = f.derivative(c(0.0, 0.0)).unwrap().norm();
            let d = angular_derivative(&f, b).unwrap();
            prop_assert!(d.modulus >= 2.0 / (1.0 + a) - 1e-6);
            // Analytic across the circle: matches the exact derivative.
            prop_assert!((d.modulus - f.derivative(b.value()).unwrap().norm()).abs() < 1e-6);
        }

        #[test]
        fn arc_length_matches_poisson_sum(f in origin_fixing_blaschke(), t1 in 0.0f64..PI, len in 0.0f64..PI) {
            let zeros: Vec<Complex64> = match &f {
                FunctionSpec::BlaschkeProduct { zeros, .. } => zeros.iter().map(|z| z.value()).collect(),
                _ => unreachable!(),
            };
            let sigma = arc_image_length(&f, t1, t1 + len).unwrap();
            let oracle = adaptive_simpson(|t| poisson_sum(&zeros, t), t1, t1 + len, 1e-11);
            prop_assert!((sigma - oracle).abs() < 1e-8);
            prop_assert!(sigma >= len - 1e-8);
            let a = f.derivative(c(0.0, 0.0)).unwrap().norm();
            prop_assert!(sigma >= 2.0 / (1.0 + a) * len - 1e-8);
        }
    }
}
