//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero on any FAIL.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use schwarz_cli::{run_suite, Suite, SuiteConfig};
use schwarz_core::ball::{self, BallMapSpec, BallPoint2, CertifiedBallMap};
use schwarz_core::boundary::{self, HarmonicExpr, HopfVerdict};
use schwarz_core::disc::BoundaryPoint;
use schwarz_core::rigidity::Classification;

const SEED: u64 = 20240607;

type Check = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Check + 'a>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn reports(suite: Suite) -> Vec<Value> {
    let report = run_suite(&SuiteConfig::new(suite, SEED)).expect("suite runs");
    serde_json::to_value(&report).unwrap()["reports"].as_array().unwrap().clone()
}

fn case(r: &Value) -> &str {
    r["details"]["case"].as_str().unwrap_or("")
}

fn f64_of(v: &Value) -> f64 {
    match v {
        Value::String(s) if s == "inf" => f64::INFINITY,
        v => v.as_f64().unwrap_or(f64::NAN),
    }
}

fn slacks<'a>(rs: impl Iterator<Item = &'a Value>, label: Option<&'a str>) -> Vec<f64> {
    rs.flat_map(|r| r["slacks"].as_array().unwrap().iter())
        .filter(|s| label.is_none_or(|l| s["label"] == l))
        .map(|s| f64_of(&s["value"]))
        .collect()
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn ensure(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn schwarz_pick() -> Check {
    let rs = reports(Suite::SchwarzPick);
    let blaschke: Vec<&Value> = rs.iter().filter(|r| case(r).starts_with("blaschke")).collect();
    ensure(blaschke.len() == 1000, format!("{} Blaschke instances", blaschke.len()))?;
    let worst = min(&slacks(rs.iter(), None));
    ensure(worst >= -1e-10, format!("min slack {worst:e}"))?;
    let moebius: Vec<&Value> = rs.iter().filter(|r| case(r).starts_with("moebius")).collect();
    let all_eq = moebius
        .iter()
        .all(|r| r["verdict"] == "equality" && !r["details"]["automorphism_fit"].is_null());
    ensure(!moebius.is_empty() && all_eq, "a Möbius instance was not an equality case".into())?;
    Ok(format!("min slack {worst:.2e}, {} Möbius maps all equality with fitted automorphism", moebius.len()))
}

fn osserman(rs: &[Value]) -> Check {
    let mut worst_eq = 0.0f64;
    for a in [0.0, 0.25, 0.5, 0.75] {
        let r = rs
            .iter()
            .find(|r| case(r) == format!("extremal a={a}"))
            .ok_or(format!("missing a={a}"))?;
        let measured = f64_of(&r["details"]["angular_derivative"]);
        worst_eq = worst_eq.max((measured - 2.0 / (1.0 + a)).abs());
    }
    ensure(worst_eq <= 1e-6, format!("extremal error {worst_eq:e}"))?;
    let random: Vec<&Value> = rs.iter().filter(|r| case(r).starts_with("blaschke")).collect();
    ensure(random.len() == 200, format!("{} random products", random.len()))?;
    let boundary = min(&slacks(random.iter().copied(), Some("boundary derivative")));
    let limit = min(&slacks(random.iter().copied(), Some("quotient limit")));
    ensure(boundary.min(limit) >= -1e-6, format!("bound slack {:e}", boundary.min(limit)))?;
    Ok(format!("extremal |f'(1)| error {worst_eq:.1e}; random min slack {:.2e}", boundary.min(limit)))
}

fn interior(rs: &[Value]) -> Check {
    let samples: u64 = rs
        .iter()
        .filter(|r| case(r).starts_with("blaschke"))
        .count() as u64
        * 50;
    let worst = min(&slacks(rs.iter(), Some("interior bound")));
    let chain = min(&slacks(rs.iter(), Some("radial quotient chain")));
    ensure(samples >= 10_000, format!("{samples} samples"))?;
    ensure(worst >= -1e-9 && chain >= -1e-9, format!("interior {worst:e}, chain {chain:e}"))?;
    Ok(format!("{samples} samples, min slack {worst:.2e}"))
}

fn loewner() -> Check {
    let rs = reports(Suite::Loewner);
    let mut doubling = 0.0f64;
    for r in rs.iter().filter(|r| case(r).starts_with("z^2")) {
        let s = f64_of(&r["details"]["arc_length"]);
        let sigma = f64_of(&r["details"]["image_length"]);
        doubling = doubling.max((sigma - 2.0 * s).abs());
    }
    ensure(doubling <= 1e-8, format!("doubling error {doubling:e}"))?;
    let random: Vec<&Value> = rs.iter().filter(|r| case(r).starts_with("blaschke")).collect();
    ensure(random.len() == 200, format!("{} random products", random.len()))?;
    let worst = min(&slacks(random.iter().copied(), None));
    ensure(worst >= -1e-8, format!("min slack {worst:e}"))?;
    Ok(format!("z² doubling error {doubling:.1e}; random min slack {worst:.2e}"))
}

fn burns_krantz() -> Check {
    let rs = reports(Suite::BurnsKrantz);
    for degree in [8, 12, 16] {
        let r = rs
            .iter()
            .find(|r| case(r) == format!("identity at degree {degree}"))
            .ok_or("missing identity")?;
        let remainder = f64_of(&r["details"]["remainder_mass"]);
        ensure(
            r["details"]["classification"] == "identity" && remainder.abs() < 1e-6,
            format!("identity at degree {degree}: remainder {remainder:e}"),
        )?;
    }
    let cubic = rs.iter().find(|r| case(r) == "cubic counterexample").ok_or("missing cubic")?;
    let order = f64_of(&cubic["details"]["contact_order"]["order"]);
    ensure(
        cubic["details"]["classification"] == "non_identity" && (order - 3.0).abs() < 0.1,
        format!("cubic order {order}"),
    )?;
    let corpus: Vec<&Value> = rs.iter().filter(|r| !case(r).starts_with("identity at")).collect();
    ensure(corpus.len() == 50, format!("corpus of {}", corpus.len()))?;
    let offenders = corpus
        .iter()
        .filter(|r| {
            f64_of(&r["details"]["contact_order"]["order"]) >= 3.9 && r["details"]["classification"] == "non_identity"
        })
        .count();
    ensure(offenders == 0, format!("{offenders} maps with order ≥ 3.9 classified non-identity"))?;
    Ok(format!("identity stable at degrees 8/12/16; cubic order {order:.4}; 50-map corpus consistent"))
}

fn herglotz() -> Check {
    let rs = reports(Suite::HerglotzRoundtrip);
    let measures: Vec<&Value> = rs.iter().filter(|r| case(r).starts_with("measure")).collect();
    ensure(measures.len() == 100, format!("{} measures", measures.len()))?;
    let mut max_err = 0.0f64;
    for r in &measures {
        let err = f64_of(&r["details"]["roundtrip_error"]);
        let eig = f64_of(&r["details"]["min_eigenvalue"]);
        let mu0 = f64_of(&r["details"]["zeroth_moment"]);
        ensure(err < 1e-8, format!("roundtrip error {err:e}"))?;
        ensure(eig >= -1e-10 * mu0, format!("eigenvalue {eig:e} for mass {mu0}"))?;
        max_err = max_err.max(err);
    }
    let d = rs.iter().find(|r| case(r) == "delta0").ok_or("missing delta0")?;
    let transform = f64_of(&d["details"]["transform_error"]);
    let mass = f64_of(&d["details"]["delta0_mass"]);
    let remainder = f64_of(&d["details"]["remainder_mass"]);
    ensure(transform <= 1e-10, format!("δ0 transform error {transform:e}"))?;
    ensure((mass - 1.0).abs() <= 1e-10 && remainder.abs() <= 1e-10, format!("δ0 split ({mass}, {remainder})"))?;
    Ok(format!("max roundtrip error {max_err:.1e}; δ0 → ({mass:.12}, {remainder:.1e})"))
}

fn hopf_collar() -> Check {
    let u = HarmonicExpr::real_part("1 - x", |z| Ok(1.0 - z));
    let h = boundary::hopf_check(&u, BoundaryPoint::one(), 0.5).map_err(|e| e.to_string())?;
    ensure(
        (h.normal_derivative + 1.0).abs() <= 1e-6 && h.verdict == HopfVerdict::StrictlyNegative,
        format!("normal derivative {} ({:?})", h.normal_derivative, h.verdict),
    )?;
    let one = HarmonicExpr::real_part("1", |_| Ok(c(1.0, 0.0)));
    let accepted = boundary::collar_positivity(&one, 0.9, 2000).map(|r| r.nonnegative);
    ensure(accepted == Ok(true), format!("u ≡ 1: {accepted:?}"))?;
    let re = HarmonicExpr::real_part("Re z", Ok);
    let rejected = !matches!(boundary::collar_positivity(&re, 0.9, 2000), Ok(r) if r.nonnegative);
    ensure(rejected, "Re ζ accepted".into())?;
    Ok(format!("normal derivative {:.9}; collar accepts 1, rejects Re ζ", h.normal_derivative))
}

fn cartan() -> Check {
    let rs = reports(Suite::Cartan);
    let growth: Vec<&Value> = rs.iter().filter(|r| case(r).starts_with("series")).collect();
    ensure(growth.len() == 20, format!("{} maps", growth.len()))?;
    let one_var = growth.iter().filter(|r| case(r).contains("(1 var)")).count();
    ensure(one_var > 0 && one_var < 20, "need 1- and 2-variable maps".into())?;
    let worst = growth
        .iter()
        .map(|r| f64_of(&r["details"]["max_relative_error"]))
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, format!("relative error {worst:e}"))?;
    let worked = rs.iter().find(|r| case(r).starts_with("z + 0.1 z^2")).ok_or("missing worked instance")?;
    let j = worked["details"]["first_violation"].as_u64();
    // 0.2j > 2!·b/a² = 8 first at j = 41.
    let oracle = (1u64..).find(|&j| 0.2 * j as f64 > 8.0);
    ensure(j == oracle, format!("first violation {j:?}, expected {oracle:?}"))?;
    Ok(format!("max relative growth error {worst:.1e}; first violation j = {}", j.unwrap()))
}

fn ball_geometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut sphere = 0.0f64;
    for _ in 0..1000 {
        let alpha = Complex64::from_polar(0.99 * rng.random::<f64>().sqrt(), rng.random_range(0.0..2.0 * PI));
        let t = rng.random::<f64>().sqrt().asin();
        let z = BallPoint2::boundary(
            Complex64::from_polar(t.cos(), rng.random_range(0.0..2.0 * PI)),
            Complex64::from_polar(t.sin(), rng.random_range(0.0..2.0 * PI)),
        )
        .unwrap();
        let w = ball::lambda_alpha(alpha, z).unwrap();
        sphere = sphere.max(((w.z1.norm_sqr() + w.z2.norm_sqr()).sqrt() - 1.0).abs());
    }
    ensure(sphere <= 1e-12, format!("sphere deviation {sphere:e}"))?;
    let mut origin = 0.0f64;
    for _ in 0..100 {
        let alpha = Complex64::from_polar(0.99 * rng.random::<f64>().sqrt(), rng.random_range(0.0..2.0 * PI));
        let w = ball::lambda_alpha(alpha, BallPoint2::origin()).unwrap();
        let n2 = alpha.norm_sqr();
        origin = origin
            .max((w.z1 - c(n2, 0.0)).norm())
            .max((w.z2 - alpha * (1.0 - n2).sqrt()).norm());
    }
    ensure(origin <= 1e-12, format!("λ_α(0) error {origin:e}"))?;

    let id = CertifiedBallMap::certify(BallMapSpec::Identity).unwrap();
    let v = ball::burns_krantz_ball_classify(&id, ball::DEFAULT_SLICE_GRID).map_err(|e| e.to_string())?;
    ensure(
        v.classification == Classification::Identity && v.slices.iter().all(|s| s.g2_sup < 1e-12),
        format!("identity: {:?}, max g² {:e}", v.classification, v.max_g2_sup),
    )?;
    let a = BallPoint2::new(c(0.3, 0.0), c(0.2, 0.0)).unwrap();
    let psi = ball::automorphism_to_line(a).unwrap();
    let phi = CertifiedBallMap::certify(BallMapSpec::Automorphism { automorphism: psi }).unwrap();
    let w = ball::burns_krantz_ball_classify(&phi, ball::DEFAULT_SLICE_GRID).map_err(|e| e.to_string())?;
    ensure(w.classification == Classification::NonIdentity, "automorphism classified identity".into())?;

    let rs = reports(Suite::Ball);
    let failing = rs.iter().filter(|r| r["verdict"] == "violated" || r["details"]["expectation_met"] == false).count();
    ensure(failing == 0, format!("{failing} failing ball reports"))?;
    Ok(format!(
        "sphere {sphere:.1e}, λ_α(0) {origin:.1e}, identity max g² {:.1e}, automorphism non-identity",
        v.max_g2_sup
    ))
}

fn contact() -> Check {
    let rs = reports(Suite::Contact);
    let orders: Vec<f64> = rs
        .iter()
        .filter(|r| !r["details"]["contact_order"].is_null())
        .map(|r| f64_of(&r["details"]["contact_order"]["order"]))
        .collect();
    ensure(orders.len() >= 40, format!("{} discs", orders.len()))?;
    let worst = orders.iter().copied().fold(0.0, f64::max);
    ensure(worst <= 2.1, format!("contact exponent {worst}"))?;
    let constant = rs.iter().find(|r| case(r) == "constant at 1").ok_or("missing constant disc")?;
    ensure(constant["details"]["rejected"] == "constant disc", "constant disc not rejected".into())?;
    let direct = ball::analytic_disc_contact(
        |_| Ok(BallPoint2::one()),
        &ball::DefiningFunction,
        BallPoint2::one(),
        2,
    );
    ensure(direct == Err(schwarz_core::Error::ConstantDisc), format!("{direct:?}"))?;
    Ok(format!("{} nonconstant discs, max exponent {worst:.4}; constant rejected", orders.len()))
}

fn run_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_schwarz")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism(dir: &Path) -> Check {
    for s in Suite::ALL {
        let seed = "11";
        let mut outputs = Vec::new();
        for k in 0..2 {
            let path = dir.join(format!("{}-{k}.json", s.name()));
            let (code, _) = run_bin(&["--suite", s.name(), "--seed", seed, "--output", path.to_str().unwrap()]);
            ensure(code == 0, format!("{s} exited {code}"))?;
            outputs.push(std::fs::read(&path).unwrap());
        }
        ensure(outputs[0] == outputs[1], format!("{s} reports differ"))?;
    }
    let uncertified = dir.join("two-z.json");
    std::fs::write(&uncertified, r#"{"kind": "polynomial", "coefficients": [[0, 0], [2, 0]]}"#).unwrap();
    let input = uncertified.to_str().unwrap();
    let out = dir.join("crafted.json");
    let out = out.to_str().unwrap();
    let (code, _) = run_bin(&["--suite", "schwarz-pick", "--input", input, "--output", out]);
    ensure(code == 1, format!("uncertified input exited {code}"))?;
    let (code, _) = run_bin(&["--suite", "schwarz-pick", "--input", input, "--tolerance", "certify=10", "--output", out]);
    ensure(code == 2, format!("violated bound exited {code}"))?;
    let (code, _) = run_bin(&["--suite", "no-such-suite"]);
    ensure(code == 1, format!("unknown suite exited {code}"))?;
    let malformed = dir.join("malformed.json");
    std::fs::write(&malformed, "{\"kind\": \"blaschke\",\n \"zeros\": [}").unwrap();
    let (code, _) = run_bin(&["--suite", "burns-krantz", "--input", malformed.to_str().unwrap()]);
    ensure(code == 1, format!("malformed input exited {code}"))?;
    Ok("9 suites byte-identical across runs; exit codes 1/2/1/1 on crafted inputs".into())
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let osserman_reports = reports(Suite::Osserman);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 schwarz-pick", Box::new(schwarz_pick)),
        ("2 osserman sharpness", Box::new(|| osserman(&osserman_reports))),
        ("3 interior refinement", Box::new(|| interior(&osserman_reports))),
        ("4 loewner/velling", Box::new(loewner)),
        ("5 burns-krantz", Box::new(burns_krantz)),
        ("6 herglotz machinery", Box::new(herglotz)),
        ("7 hopf/collar", Box::new(hopf_collar)),
        ("8 cartan", Box::new(cartan)),
        ("9 ball geometry", Box::new(ball_geometry)),
        ("10 contact order", Box::new(contact)),
        ("11 cli determinism", Box::new(|| determinism(dir.path()))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(msg) => println!("PASS {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
