//! Verifiers for the Schwarz-type inequalities and rigidity statements.
//!
//! Every verifier returns a [`VerificationReport`]. Inequalities are
//! recorded as slacks (right side minus left side), so a negative slack
//! beyond tolerance is a violation with a concrete witness.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary::{self, finite_or_inf, ContactFit};
use crate::disc::{BoundaryPoint, DiscPoint, MoebiusTransform};
use crate::error::{Error, Result};
use crate::herglotz::{self, Positivity};
use crate::holomap::{self, DiscMap, FunctionSpec, SelfMap};
use crate::numeric::richardson;
use crate::report::{ReportBuilder, VerificationReport, Verdict};

pub const SCHWARZ_PICK_TOL: f64 = 1e-10;
pub const EQUALITY_TOL: f64 = 1e-9;
pub const AUTOMORPHISM_FIT_TOL: f64 = 1e-8;
pub const ORIGIN_TOL: f64 = 1e-12;
pub const OSSERMAN_TOL: f64 = 1e-6;
pub const INTERIOR_BOUND_TOL: f64 = 1e-9;
pub const ARC_BOUND_TOL: f64 = 1e-8;
pub const REMAINDER_MASS_TOL: f64 = 1e-6;
pub const CONTACT_GATE: f64 = 3.9;
pub const SECONDARY_CONTACT_GATE: f64 = 1.9;
pub const CHELST_H_TOL: f64 = 1e-8;
pub const CHELST_CONCLUSION_TOL: f64 = 1e-7;
pub const CHELST_EXCLUSION: f64 = 1e-3;
pub const ONE_SET_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rho(a: Complex64, b: Complex64) -> f64 {
    ((b - a) / (1.0 - a.conj() * b)).norm()
}

fn check_origin_fixed<M: DiscMap + ?Sized>(f: &M) -> Result<()> {
    let v = f.eval(c(0.0, 0.0))?;
    if v.norm() > ORIGIN_TOL {
        return Err(Error::NotOriginFixing { value: v });
    }
    Ok(())
}

/// Ten points used to confirm a fitted automorphism.
fn confirmation_points() -> Vec<Complex64> {
    (0..10)
        .map(|k| Complex64::from_polar(0.15 + 0.07 * k as f64, 2.0 * PI * k as f64 * 0.381966))
        .collect()
}

/// Fits a disc automorphism through three probe values of `f` and checks it
/// at ten further points.
pub fn fit_automorphism<M: DiscMap + ?Sized>(f: &M) -> Result<Option<MoebiusTransform>> {
    let probes = crate::disc::probe_points();
    let pairs = [
        (probes[0], f.eval(probes[0])?),
        (probes[1], f.eval(probes[1])?),
        (probes[2], f.eval(probes[2])?),
    ];
    let Some(m) = MoebiusTransform::fit(pairs) else {
        return Ok(None);
    };
    for z in confirmation_points() {
        if (f.eval(z)? - m.apply(z)).norm() > AUTOMORPHISM_FIT_TOL {
            return Ok(None);
        }
    }
    Ok(Some(m))
}

#[derive(Serialize)]
struct SchwarzPickInputs<'a> {
    f: &'a FunctionSpec,
    a: DiscPoint,
    b: DiscPoint,
}

/// Pseudohyperbolic contraction and the infinitesimal Schwarz–Pick bound at
/// `a`. Near-zero slack is reported as the equality case only when `f` is
/// confirmed to be an automorphism.
pub fn verify_schwarz_pick(f: &SelfMap, a: DiscPoint, b: DiscPoint) -> Result<VerificationReport> {
    if a == b {
        return Err(Error::invalid("Schwarz–Pick check needs two distinct points"));
    }
    let mut report = ReportBuilder::new(
        "schwarz-pick",
        &SchwarzPickInputs { f: f.spec(), a, b },
    );
    report
        .tolerance("slack", SCHWARZ_PICK_TOL)
        .tolerance("equality", EQUALITY_TOL)
        .tolerance("automorphism_fit", AUTOMORPHISM_FIT_TOL);
    let (za, zb) = (a.value(), b.value());
    let (fa, fb) = (f.evaluate(za)?, f.evaluate(zb)?);
    let distance_slack = rho(za, zb) - rho(fa, fb);
    let derivative_slack = (1.0 - fa.norm_sqr()) / (1.0 - za.norm_sqr()) - f.derivative(za)?.norm();
    report
        .slack("pseudohyperbolic contraction", Some(za), distance_slack)
        .slack("derivative bound", Some(za), derivative_slack);
    let min = report.min_slack();
    if min < -SCHWARZ_PICK_TOL {
        return Ok(report.finish(Verdict::Violated, Some(za)));
    }
    if min < EQUALITY_TOL {
        let fit = fit_automorphism(f)?;
        report.detail("automorphism_fit", fit);
        if fit.is_some() {
            return Ok(report.finish(Verdict::EqualityCase, None));
        }
    }
    Ok(report.finish(Verdict::Holds, None))
}

#[derive(Serialize)]
struct OssermanInputs<'a> {
    f: &'a FunctionSpec,
    b: BoundaryPoint,
    interior_samples: usize,
    seed: u64,
}

/// `|f'(b)| ≥ 2/(1 + |f'(0)|)` for origin-fixing maps, together with the
/// radial quotient chain leading to it and the interior bound
/// `|f(z)| ≤ |z|(|z| + |f'(0)|)/(1 + |f'(0)||z|)` at random points.
pub fn verify_osserman(f: &SelfMap, b: BoundaryPoint, interior_samples: usize, seed: u64) -> Result<VerificationReport> {
    check_origin_fixed(f)?;
    let mut report = ReportBuilder::new(
        "osserman",
        &OssermanInputs {
            f: f.spec(),
            b,
            interior_samples,
            seed,
        },
    );
    report
        .tolerance("boundary", OSSERMAN_TOL)
        .tolerance("interior", INTERIOR_BOUND_TOL);
    let a = f.derivative(c(0.0, 0.0))?.norm();
    let bound = 2.0 / (1.0 + a);
    let d = boundary::angular_derivative(f, b)?;
    let boundary_slack = d.modulus - bound;
    report
        .detail("derivative_at_origin", a)
        .detail("angular_derivative", d.modulus)
        .detail("bound", bound)
        .slack("boundary derivative", Some(b.value()), boundary_slack);

    // Radial quotients obey the finite-radius bound (1 + t)/(1 + a t) and
    // increase to the boundary bound.
    let quotients = boundary::boundary_quotients(f, b, boundary::RADIAL_LEVELS)?;
    let mut worst_chain = (f64::INFINITY, c(0.0, 0.0));
    for &(t, q) in &quotients {
        let s = q - (1.0 + t) / (1.0 + a * t);
        if s < worst_chain.0 {
            worst_chain = (s, b.value() * t);
        }
    }
    report.slack("radial quotient chain", Some(worst_chain.1), worst_chain.0);
    let values: Vec<Complex64> = quotients.iter().map(|&(_, q)| c(q, 0.0)).collect();
    let limit = richardson(&values, 2);
    report
        .detail("quotient_limit", limit.value.re)
        .slack("quotient limit", Some(b.value()), limit.value.re - bound);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (f64::INFINITY, c(0.0, 0.0));
    for _ in 0..interior_samples {
        let r: f64 = rng.random::<f64>().sqrt() * (1.0 - 1e-9);
        let z = Complex64::from_polar(r, rng.random_range(0.0..2.0 * PI));
        let s = r * (r + a) / (1.0 + a * r) - f.evaluate(z)?.norm();
        if s < worst.0 {
            worst = (s, z);
        }
    }
    if interior_samples > 0 {
        report.slack("interior bound", Some(worst.1), worst.0);
    }

    let violated = boundary_slack < -OSSERMAN_TOL
        || limit.value.re - bound < -OSSERMAN_TOL
        || worst_chain.0 < -INTERIOR_BOUND_TOL
        || worst.0 < -INTERIOR_BOUND_TOL;
    if violated {
        let witness = report.worst().and_then(|s| s.point);
        return Ok(report.finish(Verdict::Violated, witness));
    }
    if boundary_slack.abs() <= OSSERMAN_TOL {
        return Ok(report.finish(Verdict::EqualityCase, None));
    }
    Ok(report.finish(Verdict::Holds, None))
}

#[derive(Serialize)]
struct ArcInputs<'a> {
    f: &'a FunctionSpec,
    arc: (f64, f64),
}

/// Arc-length inequalities `σ ≥ s` and `σ ≥ 2s/(1 + |f'(0)|)` for an inner
/// map fixing the origin.
pub fn verify_loewner_velling(f: &FunctionSpec, theta1: f64, theta2: f64) -> Result<VerificationReport> {
    check_origin_fixed(f)?;
    let mut report = ReportBuilder::new("loewner-velling", &ArcInputs { f, arc: (theta1, theta2) });
    report.tolerance("arc", ARC_BOUND_TOL).tolerance("quadrature", boundary::ARC_TOL);
    let s = theta2 - theta1;
    let sigma = boundary::arc_image_length(f, theta1, theta2)?;
    let a = f.derivative(c(0.0, 0.0))?.norm();
    let mid = Complex64::from_polar(1.0, 0.5 * (theta1 + theta2));
    report
        .detail("arc_length", s)
        .detail("image_length", sigma)
        .detail("derivative_at_origin", a)
        .slack("loewner", Some(mid), sigma - s)
        .slack("velling", Some(mid), sigma - 2.0 * s / (1.0 + a));
    if report.min_slack() < -ARC_BOUND_TOL {
        return Ok(report.finish(Verdict::Violated, Some(mid)));
    }
    if (a - 1.0).abs() < SCHWARZ_PICK_TOL {
        return Ok(report.finish(Verdict::EqualityCase, None));
    }
    Ok(report.finish(Verdict::Holds, None))
}

/// Taylor settings for the Burns–Krantz pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BurnsKrantzOptions {
    pub taylor_degree: usize,
    pub taylor_radius: f64,
}

impl Default for BurnsKrantzOptions {
    fn default() -> Self {
        BurnsKrantzOptions {
            taylor_degree: 12,
            taylor_radius: holomap::DEFAULT_TAYLOR_RADIUS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Identity,
    NonIdentity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityVerdict {
    pub classification: Classification,
    pub contact_order: ContactFit,
    /// Total mass of the measure left after removing the atom at 1.
    pub remainder_mass: f64,
    /// Mass of the atom at 1; the identity has exactly 2π.
    pub atom_mass: f64,
    /// Whether the contact hypothesis (fitted order ≥ 3.9) held.
    pub hypothesis_holds: bool,
    pub details: VerificationReport,
}

#[derive(Serialize)]
struct BurnsKrantzInputs<'a, T: Serialize> {
    phi: &'a T,
    options: BurnsKrantzOptions,
}

/// Classifies a self-map through the Herglotz measure of `(1 + φ)/(1 − φ)`:
/// the identity corresponds to a single atom of mass 2π at 1 and nothing
/// else.
pub fn burns_krantz_classify(phi: &SelfMap) -> Result<RigidityVerdict> {
    burns_krantz_classify_with(phi, BurnsKrantzOptions::default())
}

pub fn burns_krantz_classify_with(phi: &SelfMap, options: BurnsKrantzOptions) -> Result<RigidityVerdict> {
    burns_krantz_pipeline(phi, phi.spec(), options)
}

/// The classification pipeline for any map already known to send the disc
/// into itself; `label` identifies it in the report digest.
pub fn burns_krantz_pipeline<M, T>(phi: &M, label: &T, options: BurnsKrantzOptions) -> Result<RigidityVerdict>
where
    M: DiscMap + ?Sized,
    T: Serialize + ?Sized,
{
    let mut report = ReportBuilder::new("burns-krantz", &BurnsKrantzInputs { phi: &label, options });
    report
        .tolerance("remainder_mass", REMAINDER_MASS_TOL)
        .tolerance("atom_mass", REMAINDER_MASS_TOL)
        .tolerance("contact_gate", CONTACT_GATE)
        .tolerance("psd_relative", herglotz::PSD_REL_TOL);

    let identity = FunctionSpec::identity();
    let contact = boundary::contact_order(phi, &identity, BoundaryPoint::one())?;

    let lift = |z: Complex64| herglotz::cayley_disc_to_halfplane(phi.eval(z)?);
    let taylor = holomap::taylor_coefficients(&lift, options.taylor_degree + 1, options.taylor_radius)?;
    let (moments, constant_im) = herglotz::moments_from_map(&taylor.coefficients)?;
    // Cauchy coefficients carry roundoff of order ε·max|g|·r^{−k}; the
    // Toeplitz test must not mistake it for negativity.
    let noise = 4.0
        * f64::EPSILON
        * taylor.max_modulus
        * options.taylor_radius.powi(-(options.taylor_degree as i32))
        * (options.taylor_degree + 1) as f64;
    let psd_tol = herglotz::PSD_REL_TOL.max(noise / moments.zeroth().abs().max(f64::MIN_POSITIVE));
    let positivity = herglotz::herglotz_positivity_with_tol(&moments, psd_tol);
    report
        .tolerance("psd_effective", psd_tol)
        .detail("positivity", positivity)
        .detail("constant_im", constant_im);
    if let Positivity::NotPsd { min_eigenvalue } = positivity {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let decomposition = herglotz::decompose_delta0_with_tol(&moments, psd_tol)?;
    let remainder_mass = decomposition.remainder.total_mass();
    let atom_mass = 2.0 * PI * decomposition.delta0_mass;
    let atom_defect = (atom_mass - 2.0 * PI).abs();
    let hypothesis_holds = contact.order >= CONTACT_GATE;
    let identity_like = remainder_mass < REMAINDER_MASS_TOL && atom_defect < REMAINDER_MASS_TOL && hypothesis_holds;
    let classification = if identity_like {
        Classification::Identity
    } else {
        Classification::NonIdentity
    };
    report
        .detail("contact_order", contact)
        .detail("remainder_mass", remainder_mass)
        .detail("atom_mass", atom_mass)
        .detail("taylor_error_bound", taylor.error_bound)
        .detail("classification", classification)
        .slack("contact order", Some(c(1.0, 0.0)), contact.order - CONTACT_GATE)
        .slack("remainder mass", None, REMAINDER_MASS_TOL - remainder_mass)
        .slack("atom mass", Some(c(1.0, 0.0)), REMAINDER_MASS_TOL - atom_defect);
    let verdict = if hypothesis_holds && classification == Classification::NonIdentity {
        Verdict::Violated
    } else {
        Verdict::Holds
    };
    let details = report.finish(verdict, Some(c(1.0, 0.0)));
    Ok(RigidityVerdict {
        classification,
        contact_order: contact,
        remainder_mass,
        atom_mass,
        hypothesis_holds,
        details,
    })
}

/// Deterministic interior points spread over the disc (a sunflower spiral).
pub fn spiral_points(n: usize, max_radius: f64) -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| Complex64::from_polar(max_radius * ((k as f64 + 0.5) / n as f64).sqrt(), golden * k as f64))
        .collect()
}

/// `f(0) = 0` and `f'(0) = 1` force `f` to be the identity.
pub fn verify_schwarz_uniqueness_origin(f: &SelfMap) -> Result<VerificationReport> {
    check_origin_fixed(f)?;
    let mut report = ReportBuilder::new("schwarz-uniqueness", f.spec());
    report.tolerance("trigger", 1e-10).tolerance("identity", 1e-8);
    let d = f.derivative(c(0.0, 0.0))?;
    let triggered = (d - 1.0).norm() < 1e-10;
    report.detail("derivative_at_origin", d).detail("hypothesis_triggered", triggered);
    if !triggered {
        report.slack("hypothesis distance", Some(c(0.0, 0.0)), (d - 1.0).norm());
        return Ok(report.finish(Verdict::Holds, None));
    }
    let mut worst = (0.0f64, c(0.0, 0.0));
    for z in spiral_points(100, 0.99) {
        let e = (f.evaluate(z)? - z).norm();
        if e > worst.0 {
            worst = (e, z);
        }
    }
    report.slack("identity deviation", Some(worst.1), 1e-8 - worst.0);
    if worst.0 > 1e-8 {
        return Ok(report.finish(Verdict::Violated, Some(worst.1)));
    }
    Ok(report.finish(Verdict::Holds, None))
}

fn require_inner(b: &FunctionSpec) -> Result<()> {
    if b.is_inner() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "reference map must be a finite Blaschke product, got {}",
            b.variant_name()
        )))
    }
}

fn halfplane_real(w: Complex64, point: Complex64) -> Result<f64> {
    if (1.0 - w).norm() < 1e-14 {
        return Err(Error::Domain {
            point,
            reason: "1 - f vanishes at the evaluation point",
        });
    }
    Ok(((1.0 + w) / (1.0 - w)).re)
}

/// `h = Re[(1 + f)/(1 − f)] − Re[(1 + B)/(1 − B)]`.
pub fn chelst_h_function(f: &SelfMap, b: &FunctionSpec, z: Complex64) -> Result<f64> {
    require_inner(b)?;
    if z.norm() >= 1.0 {
        return Err(Error::Domain {
            point: z,
            reason: "the h-function is evaluated strictly inside the disc",
        });
    }
    Ok(halfplane_real(f.evaluate(z)?, z)? - halfplane_real(b.evaluate(z)?, z)?)
}

#[derive(Serialize)]
struct ChelstInputs<'a> {
    f: &'a FunctionSpec,
    b: &'a FunctionSpec,
    one_set: &'a [BoundaryPoint],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct ContactAt {
    point: BoundaryPoint,
    fit: ContactFit,
    #[serde(serialize_with = "finite_or_inf")]
    gate: f64,
    holds: bool,
}

const CHELST_RINGS: usize = 25;
const CHELST_SPOKES: usize = 40;

/// Checks the boundary-uniqueness statement: `f = B + O(|ζ − a|⁴)` at the
/// designated point `a` (the first entry of `one_set`) and
/// `f = B + O(|ζ − b|²)` at every other point of `one_set` force `f ≡ B`.
///
/// The verdict is `Violated` only when both hypotheses hold and `f` differs
/// from `B`; otherwise the details record which clauses failed.
pub fn verify_chelst(f: &SelfMap, b: &FunctionSpec, one_set: &[BoundaryPoint]) -> Result<VerificationReport> {
    require_inner(b)?;
    let Some(&designated) = one_set.first() else {
        return Err(Error::invalid("the set where B = 1 must not be empty"));
    };
    for p in one_set {
        let defect = (b.evaluate(p.value())? - 1.0).norm();
        if defect >= ONE_SET_TOL {
            return Err(Error::NotInOneSet {
                point: p.value(),
                defect,
            });
        }
    }
    let mut report = ReportBuilder::new(
        "chelst",
        &ChelstInputs {
            f: f.spec(),
            b,
            one_set,
        },
    );
    report
        .tolerance("h_nonnegative", CHELST_H_TOL)
        .tolerance("conclusion", CHELST_CONCLUSION_TOL)
        .tolerance("designated_gate", CONTACT_GATE)
        .tolerance("secondary_gate", SECONDARY_CONTACT_GATE)
        .tolerance("exclusion", CHELST_EXCLUSION);

    let mut contacts = Vec::with_capacity(one_set.len());
    for (k, &p) in one_set.iter().enumerate() {
        let gate = if k == 0 { CONTACT_GATE } else { SECONDARY_CONTACT_GATE };
        let fit = boundary::contact_order(f, b, p)?;
        let holds = fit.order >= gate;
        report.slack(
            if k == 0 { "designated contact" } else { "secondary contact" },
            Some(p.value()),
            fit.order - gate,
        );
        contacts.push(ContactAt { point: p, fit, gate, holds });
    }
    let hypothesis_a = contacts[0].holds;
    let failed_b: Vec<BoundaryPoint> = contacts[1..].iter().filter(|c| !c.holds).map(|c| c.point).collect();
    let hypothesis_b = failed_b.is_empty();

    let mut min_h = (f64::INFINITY, c(0.0, 0.0));
    let mut max_gap = (0.0f64, c(0.0, 0.0));
    let mut grid_points = 0usize;
    for ring in 0..CHELST_RINGS {
        let r = 0.999 * ((ring as f64 + 0.5) / CHELST_RINGS as f64).sqrt();
        for spoke in 0..CHELST_SPOKES {
            let z = Complex64::from_polar(r, 2.0 * PI * (spoke as f64 + 0.5 * (ring % 2) as f64) / CHELST_SPOKES as f64);
            if one_set.iter().any(|p| (z - p.value()).norm() < CHELST_EXCLUSION) {
                continue;
            }
            let (fz, bz) = (f.evaluate(z)?, b.evaluate(z)?);
            if (1.0 - fz).norm() < CHELST_EXCLUSION || (1.0 - bz).norm() < CHELST_EXCLUSION {
                continue;
            }
            grid_points += 1;
            let h = halfplane_real(fz, z)? - halfplane_real(bz, z)?;
            if h < min_h.0 {
                min_h = (h, z);
            }
            let gap = (fz - bz).norm();
            if gap > max_gap.0 {
                max_gap = (gap, z);
            }
        }
    }
    let h_nonnegative = min_h.0 >= -CHELST_H_TOL;
    let conclusion = max_gap.0 < CHELST_CONCLUSION_TOL;
    report
        .slack("h lower bound", Some(min_h.1), min_h.0 + CHELST_H_TOL)
        .slack("f = B", Some(max_gap.1), CHELST_CONCLUSION_TOL - max_gap.0)
        .detail("designated_point", designated)
        .detail("contacts", &contacts)
        .detail("hypothesis_a", hypothesis_a)
        .detail("hypothesis_b", hypothesis_b)
        .detail("hypothesis_b_failures", &failed_b)
        .detail("h_nonnegative", h_nonnegative)
        .detail("h_minimum", min_h.0)
        .detail("conclusion", conclusion)
        .detail("max_difference", max_gap.0)
        .detail("grid_points", grid_points);
    if hypothesis_a && hypothesis_b && !conclusion {
        return Ok(report.finish(Verdict::Violated, Some(max_gap.1)));
    }
    Ok(report.finish(Verdict::Holds, None))
}
