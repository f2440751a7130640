//! Truncated vector-valued power series in one or two variables, with
//! composition, iteration and the Cauchy-estimate check of Cartan's
//! uniqueness argument.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEGREE: usize = 10;

/// Monomials of total degree `≤ d` in `n ≤ 2` variables, ordered by degree
/// and then by decreasing first exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
struct MonomialBasis {
    vars: usize,
    max_degree: usize,
    exponents: Vec<[usize; 2]>,
}

impl MonomialBasis {
    fn new(vars: usize, max_degree: usize) -> Self {
        let mut exponents = Vec::new();
        for d in 0..=max_degree {
            if vars == 1 {
                exponents.push([d, 0]);
            } else {
                for i in (0..=d).rev() {
                    exponents.push([i, d - i]);
                }
            }
        }
        MonomialBasis {
            vars,
            max_degree,
            exponents,
        }
    }

    fn len(&self) -> usize {
        self.exponents.len()
    }

    fn index(&self, e: [usize; 2]) -> Option<usize> {
        let d = e[0] + e[1];
        if d > self.max_degree || (self.vars == 1 && e[1] != 0) {
            return None;
        }
        Some(if self.vars == 1 { d } else { d * (d + 1) / 2 + (d - e[0]) })
    }

    fn degree(&self, k: usize) -> usize {
        self.exponents[k][0] + self.exponents[k][1]
    }
}

/// A truncated power series `C^vars → C^outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalPowerSeries {
    basis: MonomialBasis,
    outputs: usize,
    /// `coefficients[component][monomial]`.
    coefficients: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    exponents: Vec<usize>,
    coeff: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    vars: usize,
    max_degree: usize,
    terms: Vec<Term>,
}

impl Serialize for FormalPowerSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = (0..self.basis.len())
            .filter(|&k| self.coefficients.iter().any(|c| c[k] != Complex64::new(0.0, 0.0)))
            .map(|k| Term {
                exponents: self.basis.exponents[k][..self.basis.vars].to_vec(),
                coeff: self.coefficients.iter().map(|c| c[k]).collect(),
            })
            .collect();
        RawSeries {
            vars: self.basis.vars,
            max_degree: self.basis.max_degree,
            terms,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalPowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSeries::deserialize(d)?;
        let outputs = raw.terms.first().map_or(raw.vars, |t| t.coeff.len());
        let mut series = FormalPowerSeries::zero(raw.vars, outputs, raw.max_degree).map_err(serde::de::Error::custom)?;
        for t in raw.terms {
            if t.exponents.len() != raw.vars || t.coeff.len() != outputs {
                return Err(serde::de::Error::custom("term shape does not match the series"));
            }
            let mut e = [0, 0];
            e[..raw.vars].copy_from_slice(&t.exponents);
            for (component, value) in t.coeff.into_iter().enumerate() {
                series.add_term(component, e, value).map_err(serde::de::Error::custom)?;
            }
        }
        Ok(series)
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl FormalPowerSeries {
    pub fn zero(vars: usize, outputs: usize, max_degree: usize) -> Result<Self> {
        if !(1..=2).contains(&vars) || outputs == 0 {
            return Err(Error::invalid(format!(
                "series need 1 or 2 variables and at least one component, got {vars} and {outputs}"
            )));
        }
        let basis = MonomialBasis::new(vars, max_degree);
        let coefficients = vec![vec![zero(); basis.len()]; outputs];
        Ok(FormalPowerSeries {
            basis,
            outputs,
            coefficients,
        })
    }

    /// The identity map of `C^vars`.
    pub fn identity(vars: usize, max_degree: usize) -> Result<Self> {
        let mut s = Self::zero(vars, vars, max_degree)?;
        for i in 0..vars {
            let mut e = [0, 0];
            e[i] = 1;
            s.add_term(i, e, one())?;
        }
        Ok(s)
    }

    /// Scalar series `Σ c_k z^k` in one variable.
    pub fn univariate(coefficients: &[Complex64], max_degree: usize) -> Result<Self> {
        let mut s = Self::zero(1, 1, max_degree)?;
        for (k, &c) in coefficients.iter().enumerate().take(max_degree + 1) {
            s.add_term(0, [k, 0], c)?;
        }
        Ok(s)
    }

    pub fn vars(&self) -> usize {
        self.basis.vars
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree
    }

    /// Adds `value · z^e` to one component.
    pub fn add_term(&mut self, component: usize, e: [usize; 2], value: Complex64) -> Result<&mut Self> {
        let k = self
            .basis
            .index(e)
            .filter(|_| component < self.outputs)
            .ok_or_else(|| Error::ShapeMismatch(format!("term {e:?} in component {component} does not fit")))?;
        self.coefficients[component][k] += value;
        Ok(self)
    }

    pub fn coefficient(&self, component: usize, e: [usize; 2]) -> Complex64 {
        self.basis
            .index(e)
            .filter(|_| component < self.outputs)
            .map_or(zero(), |k| self.coefficients[component][k])
    }

    /// `(exponents, value)` for every nonzero term of a component.
    pub fn terms(&self, component: usize) -> impl Iterator<Item = ([usize; 2], Complex64)> + '_ {
        self.basis
            .exponents
            .iter()
            .zip(&self.coefficients[component])
            .filter(|(_, c)| **c != zero())
            .map(|(e, c)| (*e, *c))
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.vars() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} variables, got {}",
                self.vars(),
                z.len()
            )));
        }
        let z2 = if self.vars() == 2 { z[1] } else { zero() };
        Ok(self
            .coefficients
            .iter()
            .map(|c| {
                self.basis
                    .exponents
                    .iter()
                    .zip(c)
                    .map(|(e, a)| a * z[0].powu(e[0] as u32) * z2.powu(e[1] as u32))
                    .sum()
            })
            .collect())
    }

    /// Restriction to total degree `≤ d`.
    pub fn truncate(&self, d: usize) -> Self {
        let mut out = Self::zero(self.vars(), self.outputs, d.min(self.max_degree())).expect("valid shape");
        for (c, src) in self.coefficients.iter().enumerate() {
            for (k, e) in self.basis.exponents.iter().enumerate() {
                if let Some(j) = out.basis.index(*e) {
                    out.coefficients[c][j] = src[k];
                }
            }
        }
        out
    }

    fn has_zero_constant_term(&self) -> bool {
        self.coefficients.iter().all(|c| c[0] == zero())
    }

    /// Whether the linear part is the identity and the constant term is zero.
    pub fn has_identity_linear_part(&self) -> bool {
        if self.outputs != self.vars() || !self.has_zero_constant_term() {
            return false;
        }
        (0..self.outputs).all(|c| {
            (0..self.vars()).all(|i| {
                let mut e = [0, 0];
                e[i] = 1;
                self.coefficient(c, e) == if c == i { one() } else { zero() }
            })
        })
    }

    /// Lowest degree `k ≥ 2` carrying a nonzero coefficient.
    pub fn lowest_nonlinear_degree(&self) -> Option<usize> {
        (0..self.basis.len())
            .filter(|&k| self.basis.degree(k) >= 2)
            .find(|&k| self.coefficients.iter().any(|c| c[k] != zero()))
            .map(|k| self.basis.degree(k))
    }

    fn mul_scalar(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![zero(); self.basis.len()];
        for (i, x) in a.iter().enumerate() {
            if *x == zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let e = [
                    self.basis.exponents[i][0] + self.basis.exponents[j][0],
                    self.basis.exponents[i][1] + self.basis.exponents[j][1],
                ];
                if let Some(k) = self.basis.index(e) {
                    out[k] += x * y;
                }
            }
        }
        out
    }
}

/// Truncated composition `f ∘ g`.
pub fn series_compose(f: &FormalPowerSeries, g: &FormalPowerSeries) -> Result<FormalPowerSeries> {
    if f.vars() != g.outputs() {
        return Err(Error::ShapeMismatch(format!(
            "outer series takes {} variables but inner series has {} components",
            f.vars(),
            g.outputs()
        )));
    }
    if f.max_degree() != g.max_degree() {
        return Err(Error::ShapeMismatch(format!(
            "truncation degrees differ: {} vs {}",
            f.max_degree(),
            g.max_degree()
        )));
    }
    if !g.has_zero_constant_term() {
        return Err(Error::NonzeroConstantTerm);
    }
    let d = g.max_degree();
    let mut out = FormalPowerSeries::zero(g.vars(), f.outputs(), d)?;
    let mut unit = vec![zero(); g.basis.len()];
    unit[0] = one();
    // powers[i][p] = g_i^p
    let powers: Vec<Vec<Vec<Complex64>>> = g
        .coefficients
        .iter()
        .map(|gi| {
            let mut table = vec![unit.clone()];
            for p in 1..=d {
                let next = g.mul_scalar(&table[p - 1], gi);
                table.push(next);
            }
            table
        })
        .collect();
    for (k, e) in f.basis.exponents.iter().enumerate() {
        if f.coefficients.iter().all(|c| c[k] == zero()) {
            continue;
        }
        let mut monomial = powers[0][e[0]].clone();
        if f.vars() == 2 {
            monomial = g.mul_scalar(&monomial, &powers[1][e[1]]);
        }
        for (component, fc) in f.coefficients.iter().enumerate() {
            let a = fc[k];
            if a == zero() {
                continue;
            }
            for (dst, m) in out.coefficients[component].iter_mut().zip(&monomial) {
                *dst += a * m;
            }
        }
    }
    Ok(out)
}

/// `φ^j = φ ∘ … ∘ φ` (j times), truncated.
pub fn cartan_iterate(phi: &FormalPowerSeries, j: usize) -> Result<FormalPowerSeries> {
    if !phi.has_identity_linear_part() {
        return Err(Error::LinearPartNotIdentity);
    }
    if j == 0 {
        return Err(Error::invalid("iteration count must be at least 1"));
    }
    let mut acc = phi.clone();
    for _ in 1..j {
        acc = series_compose(phi, &acc)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyEstimateReport {
    /// Lowest nonlinear degree of `φ`; `None` for the identity.
    pub degree: Option<usize>,
    /// `n·b·α!/a^k` for the multi-index attaining the first violation (or
    /// the largest coefficient if none).
    pub bound: f64,
    /// First iterate whose degree-k derivative exceeds the Cauchy bound.
    pub first_violation: Option<usize>,
    /// `max_α |D^α φ^j(0)| / (n·b·α!/a^k)` for `j = 1..=j_max`.
    pub ratios: Vec<f64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Tracks `|D^α φ^j(0)|` for `|α| = k` against the Cauchy bound
/// `n·b·α!/a^k` valid for maps of the ball of radius `b` whose domain
/// contains the ball of radius `a`. Iterates grow linearly in `j` at degree
/// `k`, so a nonzero `P_k` eventually breaks the bound.
pub fn cauchy_estimate_check(phi: &FormalPowerSeries, a: f64, b: f64, j_max: usize) -> Result<CauchyEstimateReport> {
    if !(a > 0.0 && a < b) {
        return Err(Error::invalid(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    if !phi.has_identity_linear_part() {
        return Err(Error::LinearPartNotIdentity);
    }
    let n = phi.vars() as f64;
    let Some(k) = phi.lowest_nonlinear_degree() else {
        return Ok(CauchyEstimateReport {
            degree: None,
            bound: f64::INFINITY,
            first_violation: None,
            ratios: vec![0.0; j_max],
        });
    };
    let base = phi.truncate(k);
    let multi_indices: Vec<[usize; 2]> = base
        .basis
        .exponents
        .iter()
        .copied()
        .filter(|e| e[0] + e[1] == k)
        .collect();
    let bound_for = |e: [usize; 2]| n * b * factorial(e[0]) * factorial(e[1]) / a.powi(k as i32);
    let mut iterate = base.clone();
    let mut ratios = Vec::with_capacity(j_max);
    let mut first_violation = None;
    let mut reported_bound = f64::NAN;
    for j in 1..=j_max {
        if j > 1 {
            iterate = series_compose(&base, &iterate)?;
        }
        let mut worst = (0.0f64, multi_indices[0]);
        let mut violated_at = None;
        for &e in &multi_indices {
            let alpha_factorial = factorial(e[0]) * factorial(e[1]);
            for component in 0..iterate.outputs() {
                let derivative = alpha_factorial * iterate.coefficient(component, e).norm();
                let bound = bound_for(e);
                let ratio = derivative / bound;
                if ratio > worst.0 {
                    worst = (ratio, e);
                }
                if derivative > bound * (1.0 + 1e-12) && violated_at.is_none() {
                    violated_at = Some(e);
                }
            }
        }
        ratios.push(worst.0);
        if first_violation.is_none() {
            if let Some(e) = violated_at {
                first_violation = Some(j);
                reported_bound = bound_for(e);
            }
        }
        if first_violation.is_none() && j == j_max {
            reported_bound = bound_for(worst.1);
        }
    }
    Ok(CauchyEstimateReport {
        degree: Some(k),
        bound: reported_bound,
        first_violation,
        ratios,
    })
}
