use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use schwarz_core::boundary;
use schwarz_core::disc::BoundaryPoint;
use schwarz_core::herglotz::{self, BoundaryMeasure};
use schwarz_core::holomap::{self, FunctionSpec};

use crate::{parse_json, CliError};

fn fmt_c(z: Complex64) -> String {
    format!("{:.12} {} {:.12}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

/// Human-readable summary of a function spec or a boundary measure file.
pub fn describe(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value = parse_json(path, &text)?;
    let is_measure = value.get("atoms").is_some() && value.get("kind").is_none();
    if is_measure {
        let m: BoundaryMeasure = parse_json(path, &text)?;
        Ok(describe_measure(&m))
    } else {
        let f: FunctionSpec = parse_json(path, &text)?;
        describe_spec(&f)
    }
}

fn describe_spec(f: &FunctionSpec) -> Result<String, CliError> {
    let core = |e| CliError::core("describe", e);
    let mut out = String::new();
    let params = serde_json::to_string(f).expect("specs serialize");
    writeln!(out, "variant: {}", f.variant_name()).unwrap();
    writeln!(out, "parameters: {params}").unwrap();
    match holomap::certify_self_map(f, holomap::DEFAULT_CERTIFY_GRID) {
        Ok(cert) if cert.analytic => writeln!(out, "certification: self-map (inner, analytic)").unwrap(),
        Ok(cert) => writeln!(
            out,
            "certification: self-map (max |f| = {:.12} on {} boundary samples)",
            cert.max_boundary_modulus, cert.grid_size
        )
        .unwrap(),
        Err(e) => writeln!(out, "certification: failed ({e})").unwrap(),
    }
    let zero = Complex64::new(0.0, 0.0);
    writeln!(out, "f(0) = {}", fmt_c(f.evaluate(zero).map_err(core)?)).unwrap();
    writeln!(out, "f'(0) = {}", fmt_c(f.derivative(zero).map_err(core)?)).unwrap();
    for theta in [0.0, 0.5, 1.0, 1.5].map(|q| q * std::f64::consts::PI) {
        let b = BoundaryPoint::from_angle(theta);
        match boundary::radial_limit(f, b) {
            Ok(l) => writeln!(
                out,
                "radial limit at {}: {} (error {:.1e})",
                fmt_c(b.value()),
                fmt_c(l.value),
                l.error
            )
            .unwrap(),
            Err(e) => writeln!(out, "radial limit at {}: unavailable ({e})", fmt_c(b.value())).unwrap(),
        }
    }
    Ok(out)
}

fn describe_measure(m: &BoundaryMeasure) -> String {
    let mut out = String::new();
    writeln!(out, "boundary measure with {} atoms, total mass {:.12}", m.atoms().len(), m.total_mass()).unwrap();
    for (theta, mass) in m.atoms() {
        writeln!(out, "  atom at θ = {theta:.12}: mass {mass:.12}").unwrap();
    }
    let moments = herglotz::moments_of_measure(m, 6);
    for (n, v) in moments.values().iter().enumerate() {
        writeln!(out, "moment {n}: {}", fmt_c(*v)).unwrap();
    }
    let p = herglotz::herglotz_positivity(&moments);
    writeln!(
        out,
        "toeplitz: {} (min eigenvalue {:.3e})",
        if p.is_psd() { "positive semidefinite" } else { "not positive semidefinite" },
        p.min_eigenvalue()
    )
    .unwrap();
    out
}
