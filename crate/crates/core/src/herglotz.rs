//! Herglotz representation of maps from the disc to the right half-plane.
//!
//! A positive atomic measure `μ = Σ m_k δ_{θ_k}` on the circle together with
//! an imaginary constant `iC` defines
//!
//! ```text
//! g(z) = (1/2π) Σ m_k (e^{iθ_k} + z)/(e^{iθ_k} − z) + iC,
//! ```
//!
//! whose Taylor coefficients are `c_0 = μ̂(0) + iC` and `c_n = 2 μ̂(n)`.
//! Positivity of a candidate moment sequence is decided through its
//! Hermitian Toeplitz matrices.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Atoms closer than this are merged.
pub const ATOM_MERGE_TOL: f64 = 1e-12;
/// Relative tolerance of the Toeplitz positivity test.
pub const PSD_REL_TOL: f64 = 1e-10;
/// Below this modulus the Cayley transforms report a domain error.
pub const CAYLEY_POLE_TOL: f64 = 1e-14;

/// A finite positive atomic measure on `[0, 2π)`. Masses are absolute,
/// not divided by 2π.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct BoundaryMeasure {
    atoms: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<(f64, f64)>,
}

impl TryFrom<RawMeasure> for BoundaryMeasure {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        BoundaryMeasure::new(raw.atoms)
    }
}

impl From<BoundaryMeasure> for RawMeasure {
    fn from(m: BoundaryMeasure) -> Self {
        RawMeasure { atoms: m.atoms }
    }
}

impl BoundaryMeasure {
    /// Builds a measure from `(angle, mass)` pairs. Angles are reduced to
    /// `[0, 2π)`, sorted, and atoms within [`ATOM_MERGE_TOL`] are merged.
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut reduced = Vec::new();
        for (theta, mass) in atoms {
            if !theta.is_finite() || !mass.is_finite() {
                return Err(Error::invalid("measure atoms must be finite"));
            }
            if mass < 0.0 {
                return Err(Error::invalid(format!(
                    "negative mass {mass} at angle {theta}"
                )));
            }
            let mut t = theta.rem_euclid(2.0 * PI);
            if 2.0 * PI - t < ATOM_MERGE_TOL {
                t = 0.0;
            }
            reduced.push((t, mass));
        }
        reduced.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(reduced.len());
        for (t, m) in reduced {
            match merged.last_mut() {
                Some(last) if t - last.0 < ATOM_MERGE_TOL => last.1 += m,
                _ => merged.push((t, m)),
            }
        }
        Ok(BoundaryMeasure { atoms: merged })
    }

    pub fn empty() -> Self {
        BoundaryMeasure { atoms: Vec::new() }
    }

    /// `δ_0` in the normalization where it carries mass 2π.
    pub fn delta0() -> Self {
        BoundaryMeasure {
            atoms: vec![(0.0, 2.0 * PI)],
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Sum of two measures.
    pub fn plus(&self, other: &BoundaryMeasure) -> BoundaryMeasure {
        BoundaryMeasure::new(self.atoms.iter().chain(&other.atoms).copied())
            .expect("sum of valid measures is valid")
    }
}

/// A measure together with the imaginary constant of the representation.
/// Only the imaginary part of the constant is stored, so its real part is
/// exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzData {
    #[serde(flatten)]
    pub measure: BoundaryMeasure,
    #[serde(default)]
    pub constant_im: f64,
}

impl HerglotzData {
    pub fn new(measure: BoundaryMeasure, constant_im: f64) -> Self {
        HerglotzData {
            measure,
            constant_im,
        }
    }

    pub fn constant(&self) -> Complex64 {
        Complex64::new(0.0, self.constant_im)
    }
}

/// Fourier–Stieltjes coefficients `μ̂(0..=N)`, with `μ̂(0)` real.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    values: Vec<Complex64>,
}

impl MomentSequence {
    /// The imaginary part of the zeroth entry is discarded.
    pub fn new(mut values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("a moment sequence needs at least one entry"));
        }
        values[0] = Complex64::new(values[0].re, 0.0);
        Ok(MomentSequence { values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn zeroth(&self) -> f64 {
        self.values[0].re
    }

    /// Total mass of the measure these moments describe: `2π μ̂(0)`.
    pub fn total_mass(&self) -> f64 {
        2.0 * PI * self.zeroth()
    }

    /// Largest entrywise difference to another sequence of the same length.
    pub fn max_difference(&self, other: &MomentSequence) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn toeplitz(&self) -> DMatrix<Complex64> {
        let n = self.values.len();
        DMatrix::from_fn(n, n, |j, k| {
            if j >= k {
                self.values[j - k]
            } else {
                self.values[k - j].conj()
            }
        })
    }

    /// Smallest eigenvalue of the Hermitian Toeplitz matrix `[μ̂(j − k)]`.
    pub fn min_toeplitz_eigenvalue(&self) -> f64 {
        self.toeplitz()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `(1/2π) Σ m_k (e^{iθ_k} + z)/(e^{iθ_k} − z) + iC` for `|z| < 1`.
pub fn herglotz_transform(h: &HerglotzData, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain {
            point: z,
            reason: "the Herglotz transform is only evaluated inside the disc",
        });
    }
    let sum: Complex64 = h
        .measure
        .atoms
        .iter()
        .map(|&(theta, mass)| {
            let w = Complex64::from_polar(1.0, theta);
            (w + z) / (w - z) * mass
        })
        .sum();
    Ok(sum / (2.0 * PI) + h.constant())
}

/// Derivative of the Herglotz transform: `(1/2π) Σ m_k 2e^{iθ_k}/(e^{iθ_k} − z)²`.
pub fn herglotz_transform_derivative(h: &HerglotzData, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain {
            point: z,
            reason: "the Herglotz transform is only evaluated inside the disc",
        });
    }
    let sum: Complex64 = h
        .measure
        .atoms
        .iter()
        .map(|&(theta, mass)| {
            let w = Complex64::from_polar(1.0, theta);
            let d = w - z;
            w * 2.0 * mass / (d * d)
        })
        .sum();
    Ok(sum / (2.0 * PI))
}

/// `(g − 1)/(g + 1)`: right half-plane to the closed disc.
pub fn cayley_halfplane_to_disc(g: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if (g + one).norm() < CAYLEY_POLE_TOL {
        return Err(Error::Domain {
            point: g,
            reason: "g = -1 is the pole of the half-plane Cayley transform",
        });
    }
    Ok((g - one) / (g + one))
}

/// `(1 + φ)/(1 − φ)`: disc to the right half-plane.
pub fn cayley_disc_to_halfplane(phi: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if (one - phi).norm() < CAYLEY_POLE_TOL {
        return Err(Error::Domain {
            point: phi,
            reason: "φ = 1 is the pole of the disc Cayley transform",
        });
    }
    Ok((one + phi) / (one - phi))
}

/// `μ̂(n) = (1/2π) Σ m_k e^{−inθ_k}` for `n = 0..=n_max`.
pub fn moments_of_measure(m: &BoundaryMeasure, n_max: usize) -> MomentSequence {
    let values = (0..=n_max)
        .map(|n| {
            m.atoms
                .iter()
                .map(|&(theta, mass)| Complex64::from_polar(mass, -(n as f64) * theta))
                .sum::<Complex64>()
                / (2.0 * PI)
        })
        .collect();
    MomentSequence::new(values).expect("n_max + 1 >= 1 entries")
}

/// Moments recovered from the Taylor coefficients of a Herglotz function,
/// together with the imaginary part of the constant `C`.
pub fn moments_from_map(g_taylor: &[Complex64]) -> Result<(MomentSequence, f64)> {
    let (c0, rest) = g_taylor
        .split_first()
        .ok_or_else(|| Error::invalid("need at least one Taylor coefficient"))?;
    let values = std::iter::once(Complex64::new(c0.re, 0.0))
        .chain(rest.iter().map(|c| c / 2.0))
        .collect();
    Ok((MomentSequence::new(values)?, c0.im))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Positivity {
    Psd { min_eigenvalue: f64 },
    NotPsd { min_eigenvalue: f64 },
}

impl Positivity {
    pub fn is_psd(&self) -> bool {
        matches!(self, Positivity::Psd { .. })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match *self {
            Positivity::Psd { min_eigenvalue } | Positivity::NotPsd { min_eigenvalue } => {
                min_eigenvalue
            }
        }
    }
}

/// Herglotz criterion on the finite section: PSD iff the smallest
/// Toeplitz eigenvalue is at least `−1e-10 · μ̂(0)`.
pub fn herglotz_positivity(s: &MomentSequence) -> Positivity {
    herglotz_positivity_with_tol(s, PSD_REL_TOL)
}

/// As [`herglotz_positivity`] with a caller-chosen relative tolerance, for
/// moments that carry known numerical noise.
pub fn herglotz_positivity_with_tol(s: &MomentSequence, rel_tol: f64) -> Positivity {
    classify(s.min_toeplitz_eigenvalue(), s.zeroth(), rel_tol)
}

fn classify(min_eigenvalue: f64, scale: f64, rel_tol: f64) -> Positivity {
    if min_eigenvalue >= -rel_tol * scale.abs() {
        Positivity::Psd { min_eigenvalue }
    } else {
        Positivity::NotPsd { min_eigenvalue }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta0Decomposition {
    /// Weight `t` of `δ_0` in units where `δ_0` has all moments equal to 1.
    pub delta0_mass: f64,
    pub remainder: MomentSequence,
}

/// Splits off the largest multiple `t·δ_0` that leaves a positive sequence.
///
/// The feasible set of `t` is an interval `[0, t*]` (the all-ones Toeplitz
/// matrix is PSD), so `t*` is found by bisection.
pub fn decompose_delta0(s: &MomentSequence) -> Result<Delta0Decomposition> {
    decompose_delta0_with_tol(s, PSD_REL_TOL)
}

/// As [`decompose_delta0`] with a caller-chosen relative PSD tolerance.
pub fn decompose_delta0_with_tol(s: &MomentSequence, rel_tol: f64) -> Result<Delta0Decomposition> {
    if s.len() < 2 {
        return Err(Error::invalid("decomposition needs at least two moments"));
    }
    let scale = s.zeroth();
    let psd = |seq: &MomentSequence| classify(seq.min_toeplitz_eigenvalue(), scale, rel_tol);
    if let Positivity::NotPsd { min_eigenvalue } = psd(s) {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let shifted = |t: f64| {
        MomentSequence::new(s.values.iter().map(|v| v - t).collect())
            .expect("non-empty sequence")
    };
    let mut lo = 0.0;
    let mut hi = scale * (1.0 + rel_tol) + f64::MIN_POSITIVE;
    if psd(&shifted(hi)).is_psd() {
        lo = hi;
    }
    let tol = 1e-12 * scale.max(1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if psd(&shifted(mid)).is_psd() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Delta0Decomposition {
        delta0_mass: lo,
        remainder: shifted(lo),
    })
}
