//! Small numerical kernels shared by the analysis modules: Richardson
//! tables over dyadic step sequences, adaptive Simpson quadrature, log-log
//! line fits and discrete Cauchy integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;

/// Radii `1 - 2^-j` for `j` in `first..=last`.
pub fn dyadic_radii(first: u32, last: u32) -> Vec<f64> {
    (first..=last).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: Complex64,
    /// Difference between the last two entries of the deepest column.
    pub spread: f64,
}

/// Richardson extrapolation of a sequence sampled at steps `h, h/2, h/4, ...`
/// whose error expands in integer powers of the step. `levels` powers
/// (h, h^2, ...) are eliminated.
pub fn richardson(values: &[Complex64], levels: usize) -> Extrapolated {
    assert!(
        values.len() >= levels + 2,
        "need at least {} samples for {} Richardson levels",
        levels + 2,
        levels
    );
    let mut column = values.to_vec();
    for k in 1..=levels {
        let w = 2f64.powi(k as i32);
        column = column
            .windows(2)
            .map(|p| (p[1] * w - p[0]) / (w - 1.0))
            .collect();
    }
    let n = column.len();
    Extrapolated {
        value: column[n - 1],
        spread: (column[n - 1] - column[n - 2]).norm(),
    }
}

/// Adaptive Simpson quadrature to an absolute tolerance.
///
/// The interval is first split into 16 panels so that narrow peaks of the
/// integrand are not skipped by the initial five-point estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    const PANELS: usize = 16;
    let width = (b - a) / PANELS as f64;
    let panel_tol = tol / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == PANELS { b } else { lo + width };
            let mid = 0.5 * (lo + hi);
            let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson_step(&f, lo, hi, flo, fmid, fhi, whole, panel_tol, 48)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Ordinary least-squares line through `(x, y)` pairs.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "a line fit needs two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    LineFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyCoefficients {
    pub coefficients: Vec<Complex64>,
    /// Largest modulus of the function on the sampling circle.
    pub max_modulus: f64,
}

/// Taylor coefficients `c_0 .. c_{n-1}` of `f` about the origin from the
/// trapezoidal rule on the circle of the given radius with `nodes` points.
pub fn cauchy_coefficients<F>(f: F, n: usize, radius: f64, nodes: usize) -> Result<CauchyCoefficients>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let roots: Vec<Complex64> = (0..nodes)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64))
        .collect();
    let samples = roots
        .iter()
        .map(|w| f(w * radius))
        .collect::<Result<Vec<_>>>()?;
    let max_modulus = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let coefficients = (0..n)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * roots[(j * k) % nodes].conj())
                .sum();
            sum / (nodes as f64 * radius.powi(k as i32))
        })
        .collect();
    Ok(CauchyCoefficients {
        coefficients,
        max_modulus,
    })
}
