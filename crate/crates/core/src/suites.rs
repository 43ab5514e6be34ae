//! Suite registry: addressable groups of checks with fixed names, parameter
//! handling, and deterministic report assembly.

use crate::cgc;
use crate::dyn_ybe::{self, PLattice};
use crate::fock;
use crate::qarith::{HalfInt, LaurentU, QPoint};
use crate::report::{CheckReport, SuiteReport};
use crate::weylalg::{self, FreeFieldParams, UhatPin};
use num_rational::Rational64;
use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub enum SuiteError {
    UnknownSuite(String),
    InvalidParams(String),
    Internal(String),
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::UnknownSuite(s) => write!(f, "unknown suite `{s}`"),
            SuiteError::InvalidParams(s) => write!(f, "invalid parameters: {s}"),
            SuiteError::Internal(s) => write!(f, "internal failure: {s}"),
        }
    }
}

impl std::error::Error for SuiteError {}

/// Parameters shared by every suite; suites ignore the ones they do not use.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub qps: Vec<QPoint>,
    pub n_cap: usize,
    pub tol: f64,
    pub j_max: HalfInt,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            qps: default_qpoints(),
            n_cap: 10,
            tol: 1e-10,
            j_max: HalfInt::from_int(5),
        }
    }
}

/// The default q-grid: two real points on both sides of 1 and one
/// unit-circle point inside the positivity window.
pub fn default_qpoints() -> Vec<QPoint> {
    vec![
        QPoint::real(0.7).expect("valid"),
        QPoint::real(1.3).expect("valid"),
        QPoint::unit_circle(std::f64::consts::PI / 40.0, 12).expect("valid"),
    ]
}

/// Fixed catalog: name and one-line description.
pub const SUITES: [(&str, &str); 13] = [
    (
        "qarith-identities",
        "q-number antisymmetry, conjugation, splitting rule, exact ring checks",
    ),
    (
        "weyl-borel",
        "exact exchange relations of the free-field generators and the triangular-pair L",
    ),
    (
        "weyl-uhat",
        "exact exchange algebra of the monomial generating matrix",
    ),
    (
        "appendix-c",
        "consistency ties of the shift monomial, the in-place determinant identity, negative controls",
    ),
    (
        "l-algebra",
        "deformed generators, Casimir spectrum, reflection exchange, central elements",
    ),
    (
        "theorem1",
        "exchange relations of the generating matrix with D and both R-matrices; U D U^-1 = L",
    ),
    (
        "classical-limit",
        "linear term of L at q -> 1, triangular decomposition, classical action values",
    ),
    (
        "cgc-correspondence",
        "matrix elements vs the summation coefficients, orthogonality, continuity at q = 1",
    ),
    (
        "unitarity",
        "unitarity of the transposed generating matrix for real q",
    ),
    (
        "tensor-ops",
        "spin-1/2 tensor-operator covariance of the generating matrix entries",
    ),
    (
        "diag-b",
        "diagonalization of the triangular factor and half-shift selectivity",
    ),
    (
        "q-oscillator",
        "deformed Heisenberg pairs, the solution family, the pinned similarity",
    ),
    (
        "dybe",
        "constant and weight-dependent R-matrices, shifted Yang-Baxter equation",
    ),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

fn params_map(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn stamp(mut checks: Vec<CheckReport>, started: Instant) -> Vec<CheckReport> {
    let ms = started.elapsed().as_secs_f64() * 1e3 / checks.len().max(1) as f64;
    for c in &mut checks {
        c.wall_ms = ms;
    }
    checks
}

/// Run a suite by catalog name. Fails with `UnknownSuite` for names outside
/// the catalog and `InvalidParams` when a suite cannot run at the requested
/// parameters.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Vec<SuiteReport>, SuiteError> {
    if params.n_cap < 2 {
        return Err(SuiteError::InvalidParams("ncap must be >= 2".into()));
    }
    if !(params.tol > 0.0) {
        return Err(SuiteError::InvalidParams("tol must be positive".into()));
    }
    match name {
        "qarith-identities" => Ok(qarith_suite(params)),
        "weyl-borel" => Ok(weyl_borel_suite()),
        "weyl-uhat" => Ok(weyl_uhat_suite()),
        "appendix-c" => Ok(appendix_c_suite()),
        "l-algebra" => Ok(per_point(params, "l-algebra", |qp, p| {
            fock::l_algebra_checks(qp, p.n_cap, p.tol)
        })),
        "theorem1" => Ok(per_point(params, "theorem1", |qp, p| {
            fock::theorem1_checks(qp, p.n_cap, p.tol)
        })),
        "classical-limit" => {
            let started = Instant::now();
            let checks = fock::classical_limit_checks(params.n_cap, params.tol);
            Ok(vec![SuiteReport::new(
                "classical-limit",
                params_map(&[("q", "1".into()), ("ncap", params.n_cap.to_string())]),
                stamp(checks, started),
            )])
        }
        "cgc-correspondence" => Ok(cgc_suite(params)),
        "unitarity" => {
            let points: Vec<QPoint> = params
                .qps
                .iter()
                .copied()
                .filter(|qp| !matches!(qp, QPoint::UnitCircle { .. }))
                .chain(std::iter::once(QPoint::classical()))
                .collect();
            if points.is_empty() {
                return Err(SuiteError::InvalidParams(
                    "unitarity requires a real or classical q-point".into(),
                ));
            }
            let mut out = Vec::new();
            for qp in dedup_points(points) {
                let started = Instant::now();
                let checks = fock::unitarity_checks(&qp, params.n_cap);
                out.push(SuiteReport::new(
                    "unitarity",
                    params_map(&[("q", qp.label()), ("ncap", params.n_cap.to_string())]),
                    stamp(checks, started),
                ));
            }
            Ok(out)
        }
        "tensor-ops" => {
            let mut out = per_point(params, "tensor-ops", |qp, p| {
                fock::tensor_ops_checks(qp, p.n_cap, p.tol)
            });
            // classical degenerations always run once
            let started = Instant::now();
            let checks = fock::tensor_ops_checks(&QPoint::classical(), params.n_cap, params.tol);
            out.push(SuiteReport::new(
                "tensor-ops",
                params_map(&[("q", "1".into()), ("ncap", params.n_cap.to_string())]),
                stamp(checks, started),
            ));
            Ok(out)
        }
        "diag-b" => {
            let deformed: Vec<QPoint> = params
                .qps
                .iter()
                .copied()
                .filter(|qp| !qp.is_classical())
                .collect();
            if deformed.is_empty() {
                return Err(SuiteError::InvalidParams(
                    "diag-b needs a deformed q-point".into(),
                ));
            }
            let sub = SuiteParams {
                qps: deformed,
                ..params.clone()
            };
            Ok(per_point(&sub, "diag-b", |qp, p| {
                fock::diag_b_checks(qp, p.n_cap, p.tol)
            }))
        }
        "q-oscillator" => Ok(per_point(params, "q-oscillator", |qp, p| {
            fock::qoscillator_checks(qp, p.n_cap, p.tol)
        })),
        "dybe" => Ok(per_point(params, "dybe", |qp, p| dybe_checks(qp, p.tol))),
        other => Err(SuiteError::UnknownSuite(other.to_string())),
    }
}

fn dedup_points(points: Vec<QPoint>) -> Vec<QPoint> {
    let mut out: Vec<QPoint> = Vec::new();
    for p in points {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn per_point(
    params: &SuiteParams,
    name: &str,
    run: impl Fn(&QPoint, &SuiteParams) -> Vec<CheckReport>,
) -> Vec<SuiteReport> {
    let mut out = Vec::new();
    for qp in &params.qps {
        let started = Instant::now();
        let checks = run(qp, params);
        out.push(SuiteReport::new(
            name,
            params_map(&[
                ("q", qp.label()),
                ("ncap", params.n_cap.to_string()),
                ("tol", format!("{:e}", params.tol)),
            ]),
            stamp(checks, started),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Suite bodies that are not one-call wrappers
// ---------------------------------------------------------------------------

fn qarith_suite(params: &SuiteParams) -> Vec<SuiteReport> {
    let mut out = Vec::new();

    // Exact ring section, once.
    let started = Instant::now();
    let mut checks = Vec::new();
    let mut square_ok = true;
    for n in 1..=12i64 {
        let lhs = LaurentU::q_num_int(n + 1)
            .mul(&LaurentU::q_num_int(n - 1))
            .add(&LaurentU::one());
        let rhs = LaurentU::q_num_int(n).mul(&LaurentU::q_num_int(n));
        square_ok &= lhs == rhs;
    }
    checks.push(CheckReport::exact("qnum-square-identity", "q1", square_ok));
    let a = &LaurentU::u_pow(1) + &LaurentU::u_pow(-1);
    let b = &LaurentU::u_pow(1) - &LaurentU::u_pow(-1);
    let expect = &LaurentU::u_pow(2) - &LaurentU::u_pow(-2);
    checks.push(CheckReport::exact(
        "ring-difference-of-squares",
        "ring",
        a.mul(&b) == expect,
    ));
    checks.push(CheckReport::exact(
        "omega-localization-cancels",
        "ring",
        LaurentU::omega().mul(&LaurentU::omega_inv()).is_one(),
    ));
    out.push(SuiteReport::new(
        "qarith-identities",
        params_map(&[("ring", "exact".into())]),
        stamp(checks, started),
    ));

    // Numeric section per q-point.
    for qp in &params.qps {
        let started = Instant::now();
        let mut checks = Vec::new();
        let mut anti_dev: f64 = 0.0;
        let mut conj_dev: f64 = 0.0;
        for t in [-7i64, -3, -1, 0, 1, 2, 5, 11] {
            let x = Rational64::new(t, 2);
            let v = qp.q_num(x).expect("denominator 2");
            let w = qp.q_num(-x).expect("denominator 2");
            anti_dev = anti_dev.max((v + w).norm());
            conj_dev = conj_dev.max(v.im.abs()); // [x] is conjugation-invariant
        }
        checks.push(CheckReport::residual(
            "qnum-antisymmetry",
            "0.2",
            anti_dev,
            1e-12,
        ));
        checks.push(CheckReport::residual(
            "qnum-conjugation-invariance",
            "0.2",
            conj_dev,
            1e-12,
        ));
        for (a, b) in [(2i64, 3i64), (1, 1), (0, 5), (-3, 4), (5, -1)] {
            let rep = crate::qarith::check_q_identity(
                Rational64::new(a, 2) * Rational64::from_integer(2),
                Rational64::new(b, 2) * Rational64::from_integer(2),
                qp,
                1e-12,
            )
            .expect("integer arguments");
            checks.push(rep);
        }
        // Ring evaluation is a homomorphism on fixed sample inputs.
        let x = LaurentU::q_num_int(5).mul(&LaurentU::u_pow(-3)).add(&LaurentU::omega_inv());
        let y = LaurentU::q_num_int(3).add(&LaurentU::u_pow(7));
        let dev = (x.mul(&y).eval(qp) - x.eval(qp) * y.eval(qp)).norm()
            / (1.0f64).max(x.eval(qp).norm() * y.eval(qp).norm());
        checks.push(CheckReport::residual(
            "laurent-eval-homomorphism",
            "ring",
            dev,
            1e-12,
        ));
        out.push(SuiteReport::new(
            "qarith-identities",
            params_map(&[("q", qp.label())]),
            stamp(checks, started),
        ));
    }
    out
}

fn weyl_borel_suite() -> Vec<SuiteReport> {
    let started = Instant::now();
    let mut checks = Vec::new();

    // Default pin plus a parameter grid.
    let mut grids = vec![("default".to_string(), FreeFieldParams::default())];
    for (i, l0_num) in [-1i64, 2].into_iter().enumerate() {
        for (k, gamma) in [
            Rational64::from_integer(0),
            Rational64::new(1, 2),
            Rational64::from_integer(1),
        ]
        .into_iter()
        .enumerate()
        {
            grids.push((
                format!("grid-{}{}", i, k),
                FreeFieldParams {
                    lambda0: Rational64::new(l0_num, 8),
                    nu0: Rational64::new(-1 - l0_num, 8),
                    gamma,
                    epsilon: Rational64::new(1, 8),
                    ..FreeFieldParams::default()
                },
            ));
        }
    }
    grids.push((
        "offpin".to_string(),
        FreeFieldParams {
            lambda1: Rational64::from_integer(1),
            nu2: Rational64::from_integer(0),
            ..FreeFieldParams::default()
        },
    ));
    for (tag, p) in &grids {
        let ff = weylalg::build_free_field(p).expect("grid parameters admissible");
        for mut rep in weylalg::verify_borel_relations(&ff) {
            rep.name = format!("{}[{}]", rep.name, tag);
            checks.push(rep);
        }
    }

    // The two L constructions coincide, and the central combinations check out.
    let ff = weylalg::build_free_field(&FreeFieldParams::default()).expect("default");
    let l_ff = weylalg::build_l_freefield(&ff);
    let l_ref = weylalg::build_l_reference();
    checks.push(CheckReport::exact(
        "l-freefield-equals-reference",
        "4.9=L5",
        l_ff.sub(&l_ref).is_zero(),
    ));
    checks.extend(weylalg::verify_l_central_elements(&l_ff, &ff.b));

    vec![SuiteReport::new(
        "weyl-borel",
        params_map(&[("ring", "exact".into())]),
        stamp(checks, started),
    )]
}

fn weyl_uhat_suite() -> Vec<SuiteReport> {
    let started = Instant::now();
    let mut checks = Vec::new();
    let pins = [
        ("exact63", UhatPin::exact63()),
        (
            "gamma0",
            UhatPin {
                alpha0_upow: 0,
                beta0_upow: 0,
                gamma: Rational64::from_integer(0),
            },
        ),
        (
            "gamma1",
            UhatPin {
                alpha0_upow: 2,
                beta0_upow: -2,
                gamma: Rational64::from_integer(1),
            },
        ),
    ];
    for (tag, pin) in pins {
        let (uhat, b) = weylalg::build_uhat_monomial(&pin).expect("admissible pin");
        for mut rep in weylalg::verify_uhat_relations(&uhat, &b, Some(pin.det_upow())) {
            rep.name = format!("{}[{}]", rep.name, tag);
            checks.push(rep);
        }
    }
    vec![SuiteReport::new(
        "weyl-uhat",
        params_map(&[("ring", "exact".into())]),
        stamp(checks, started),
    )]
}

fn appendix_c_suite() -> Vec<SuiteReport> {
    let started = Instant::now();
    let mut checks = Vec::new();

    // Consistency ties of the shift exchange constants.
    let ff = weylalg::build_free_field(&FreeFieldParams::default()).expect("default");
    let alpha = weylalg::commutation_upow(&ff.a, &ff.eixi).expect("monomials");
    let beta = weylalg::commutation_upow(&ff.c, &ff.eixi).expect("monomials");
    let gamma = weylalg::commutation_upow(&ff.d0, &ff.eixi).expect("monomials");
    checks.push(CheckReport::exact(
        "shift-tie-alpha-plus-beta",
        "C1",
        alpha + beta == 0,
    ));
    checks.push(CheckReport::exact(
        "shift-tie-gamma",
        "C1",
        gamma + beta - alpha + 8 == 0,
    ));

    // The in-place determinant identity for the exact pins.
    for (tag, pin) in [
        ("exact63", UhatPin::exact63()),
        (
            "gamma1",
            UhatPin {
                alpha0_upow: 2,
                beta0_upow: 0,
                gamma: Rational64::from_integer(1),
            },
        ),
    ] {
        let (uhat, b) = weylalg::build_uhat_monomial(&pin).expect("admissible pin");
        checks.push(CheckReport::exact(
            &format!("det-identity[{}]", tag),
            "C2",
            weylalg::c2_combination(&uhat, &b).is_zero(),
        ));
    }

    // Negative controls: a broken shift must be detected.
    checks.extend(weylalg::verify_c1_negative_control());

    vec![SuiteReport::new(
        "appendix-c",
        params_map(&[("ring", "exact".into())]),
        stamp(checks, started),
    )]
}

fn cgc_suite(params: &SuiteParams) -> Vec<SuiteReport> {
    let mut out = Vec::new();
    let points: Vec<QPoint> = std::iter::once(QPoint::classical())
        .chain(params.qps.iter().copied())
        .collect();
    for qp in dedup_points(points) {
        let started = Instant::now();
        let mut checks = Vec::new();
        let tol = if qp.is_classical() { 1e-12 } else { params.tol };
        checks.extend(cgc::verify_correspondence(
            &qp,
            fock::UVariant::Exact63,
            params.j_max,
            tol,
        ));
        for mut rep in cgc::verify_correspondence(
            &qp,
            fock::UVariant::Family {
                alpha0_upow: 0,
                beta0_upow: 0,
                gamma: Rational64::from_integer(0),
            },
            params.j_max,
            params.tol,
        ) {
            rep.name = format!("{}[family-gamma0]", rep.name);
            checks.push(rep);
        }
        if !matches!(qp, QPoint::UnitCircle { .. }) {
            for jt in [0i64, 2, 3, 4] {
                checks.extend(cgc::orthogonality_check(
                    HalfInt::from_twice(jt),
                    &qp,
                    params.tol,
                ));
            }
        }
        // Spot values of the singlet component.
        let query = cgc::CgcQuery::new(
            HalfInt::HALF,
            HalfInt::HALF,
            HalfInt::from_twice(-1),
            HalfInt::ZERO,
        )
        .expect("admissible");
        let v = cgc::cgc_q(&query, &qp).expect("admissible");
        let expect = qp.q_pow(Rational64::new(1, 2)) / qp.q_num_int(2).sqrt();
        checks.push(CheckReport::residual(
            "singlet-spot-value",
            "6.2",
            (v - expect).norm(),
            1e-12,
        ));
        out.push(SuiteReport::new(
            "cgc-correspondence",
            params_map(&[("q", qp.label()), ("jmax", params.j_max.to_string())]),
            stamp(checks, started),
        ));
    }

    // Continuity towards the classical point.
    let started = Instant::now();
    let mut max_dev: f64 = 0.0;
    for qv in [1.0 + 1e-4, 1.0 - 1e-4] {
        let qp = QPoint::real(qv).expect("valid");
        for jt in 0..=8i64 {
            for mt in (-jt..=jt).step_by(2) {
                for jot in [jt - 1, jt + 1] {
                    if jot < 0 {
                        continue;
                    }
                    for mpt in [-1i64, 1] {
                        let query = cgc::CgcQuery::new(
                            HalfInt::from_twice(jt),
                            HalfInt::from_twice(mt),
                            HalfInt::from_twice(mpt),
                            HalfInt::from_twice(jot),
                        )
                        .expect("admissible");
                        let a = cgc::cgc_q(&query, &qp).expect("admissible");
                        let b = cgc::cgc_classical(&query).expect("admissible");
                        max_dev = max_dev.max((a - num_complex::Complex64::new(b, 0.0)).norm());
                    }
                }
            }
        }
    }
    let checks = vec![CheckReport::residual(
        "classical-continuity",
        "6.2",
        max_dev,
        1e-3,
    )];
    out.push(SuiteReport::new(
        "cgc-correspondence",
        params_map(&[("q", "1+-1e-4".into())]),
        stamp(checks, started),
    ));
    out
}

fn dybe_checks(qp: &QPoint, tol: f64) -> Vec<CheckReport> {
    let exact_tol = 1e-12;
    let lat = PLattice::new(*qp, 4, 24).expect("fixed lattice valid");
    let mut checks = Vec::new();
    checks.extend(dyn_ybe::verify_r_const(qp, exact_tol));
    checks.extend(dyn_ybe::verify_dybe(&lat, if qp.is_classical() { exact_tol } else { tol }));
    checks.extend(dyn_ybe::verify_rd(&lat, exact_tol));
    checks.extend(dyn_ybe::verify_mid_block_det(&lat, exact_tol));
    checks.extend(dyn_ybe::verify_translation_covariance(&lat, 2, 1e-13));
    checks.extend(dyn_ybe::verify_weight_shift_relation(&lat, 1e-14));
    if let QPoint::Real { q } = qp {
        if *q > 1.0 {
            checks.push(CheckReport::residual(
                "asymptotic-approach",
                "1.10",
                dyn_ybe::asymptotic_deviation(qp, 40),
                1e-8,
            ));
        }
    }
    checks
}

/// Residuals of the weight-cap-sensitive suites at two caps; used by the
/// truncation-independence criterion.
pub fn truncation_shift(qp: &QPoint, n_cap: usize, tol: f64) -> f64 {
    let base = fock::residual_snapshot(qp, n_cap, tol);
    let bigger = fock::residual_snapshot(qp, n_cap + 2, tol);
    let lookup: BTreeMap<&str, f64> = bigger.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    let mut max_shift: f64 = 0.0;
    for (name, v) in &base {
        if let Some(w) = lookup.get(name.as_str()) {
            max_shift = max_shift.max((v - w).abs());
        }
    }
    max_shift
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        let err = run_suite("nope", &SuiteParams::default()).unwrap_err();
        assert!(matches!(err, SuiteError::UnknownSuite(_)));
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = SuiteParams::default();
        p.n_cap = 1;
        assert!(matches!(
            run_suite("theorem1", &p),
            Err(SuiteError::InvalidParams(_))
        ));
        let mut p = SuiteParams::default();
        p.tol = -1.0;
        assert!(matches!(
            run_suite("theorem1", &p),
            Err(SuiteError::InvalidParams(_))
        ));
    }

    #[test]
    fn exact_suites_pass() {
        for name in ["qarith-identities", "weyl-borel", "weyl-uhat", "appendix-c"] {
            let reports = run_suite(name, &SuiteParams::default()).unwrap();
            for r in &reports {
                assert!(r.pass, "suite {name} failed:\n{}", r.to_text());
            }
        }
    }

    #[test]
    fn catalog_is_complete() {
        let mut p = SuiteParams::default();
        p.n_cap = 6; // keep the full sweep fast
        p.j_max = HalfInt::from_int(2);
        for (name, _) in SUITES {
            let reports = run_suite(name, &p).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!reports.is_empty(), "{name} produced no reports");
            for r in &reports {
                assert!(r.pass, "suite {name} failed:\n{}", r.to_text());
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let mut p = SuiteParams::default();
        p.n_cap = 5;
        p.j_max = HalfInt::from_int(2);
        let a = run_suite("cgc-correspondence", &p).unwrap();
        let b = run_suite("cgc-correspondence", &p).unwrap();
        assert_eq!(a, b);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }
}
