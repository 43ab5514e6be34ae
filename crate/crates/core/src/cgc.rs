//! Clebsch-Gordan coefficients for the coupling `j (x) 1/2`, classical and
//! deformed, by direct evaluation of the alternating factorial sum.
//!
//! This route is independent of the operator construction: the deformed
//! value is
//!
//! ```text
//!   { j 1/2 j'' ; m m' m'' }_q
//!     = delta_{m'', m+m'}
//!       sqrt( [j+1/2-j'']! [j+j''-1/2]! [j''+1/2-j]! / [j+j''+3/2]! )
//!       q^{ (j+1/2-j'')(j+j''+3/2)/2 + j m' - m/2 }
//!       sum_{r>=0} (-1)^r q^{-r (j+j''+3/2)}
//!         sqrt( [j+m]! [j-m]! [j''+m'']! [j''-m'']! [2j''+1] )
//!         / ( [r]! [j+1/2-j''-r]! [j-m-r]! [1/2+m'-r]!
//!             [j''-1/2+m+r]! [j''-j-m'+r]! )
//! ```
//!
//! with terms containing a negative factorial argument dropped; the
//! classical value replaces q-factorials by factorials and removes the
//! q-powers. Matrix elements of the generating matrix reproduce these
//! values up to the column prefactors, which is checked by
//! [`verify_correspondence`].

use crate::fock::{build_u, matrix_element_u, FockSpace, UVariant};
use crate::linop::OpMat;
use crate::qarith::{HalfInt, QPoint};
use crate::report::CheckReport;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use std::fmt;

/// Largest `2j` accepted by the table generator.
pub const MAX_TABLE_TWICE_SPIN: i64 = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum CgcError {
    /// Query violates `|m| <= j`, `m' = +-1/2`, or `j'' = j +- 1/2 >= 0`.
    Inadmissible(String),
    /// Requested table exceeds the configured spin bound.
    SpinTooLarge(HalfInt),
}

impl fmt::Display for CgcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CgcError::Inadmissible(s) => write!(f, "inadmissible coupling query: {s}"),
            CgcError::SpinTooLarge(j) => write!(f, "spin {j} exceeds the configured bound"),
        }
    }
}

impl std::error::Error for CgcError {}

/// One coupling query `<j'' m''| j m; 1/2 m'>` with `m'' = m + m'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgcQuery {
    pub j: HalfInt,
    pub m: HalfInt,
    pub m_prime: HalfInt,
    pub j_out: HalfInt,
}

impl CgcQuery {
    pub fn new(j: HalfInt, m: HalfInt, m_prime: HalfInt, j_out: HalfInt) -> Result<Self, CgcError> {
        if j.twice() < 0 || m.twice().abs() > j.twice() || (j - m).twice() % 2 != 0 {
            return Err(CgcError::Inadmissible(format!("j={j}, m={m}")));
        }
        if m_prime.twice().abs() != 1 {
            return Err(CgcError::Inadmissible(format!("m'={m_prime} not +-1/2")));
        }
        if (j_out - j).twice().abs() != 1 || j_out.twice() < 0 {
            return Err(CgcError::Inadmissible(format!("j''={j_out} not j +- 1/2")));
        }
        Ok(CgcQuery {
            j,
            m,
            m_prime,
            j_out,
        })
    }

    pub fn m_out(&self) -> HalfInt {
        self.m + self.m_prime
    }
}

/// Non-negative integer value of a half-integer combination, or `None` when
/// it is negative (such factorial arguments kill the term).
fn arg(h: HalfInt) -> Option<i64> {
    let t = h.twice();
    debug_assert!(t % 2 == 0, "factorial argument must be an integer");
    if t < 0 {
        None
    } else {
        Some(t / 2)
    }
}

/// Deformed coefficient at a q-point; at the classical point this evaluates
/// the plain factorial formula.
pub fn cgc_q(query: &CgcQuery, qp: &QPoint) -> Result<Complex64, CgcError> {
    let CgcQuery {
        j,
        m,
        m_prime,
        j_out,
    } = *query;
    let m_out = query.m_out();
    // Selection on the output weight: out-of-range weights give zero.
    if m_out.twice().abs() > j_out.twice() {
        return Ok(Complex64::default());
    }
    let half = HalfInt::HALF;
    let three_half = HalfInt::from_twice(3);

    let fact = |n: i64| qp.q_fact(n as u64);
    let a_top = arg(j + half - j_out).expect("j'' = j +- 1/2");
    let prefactor_sqrt = {
        let num = fact(a_top)
            * fact(arg(j + j_out - half).expect("admissible"))
            * fact(arg(j_out + half - j).expect("j'' = j +- 1/2"));
        let den = fact(arg(j + j_out + three_half).expect("positive"));
        (num / den).sqrt()
    };

    // q^{ a_top (j + j'' + 3/2)/2 + j m' - m/2 }
    let exp_num =
        a_top * (j.twice() + j_out.twice() + 3) + j.twice() * m_prime.twice() - m.twice();
    let qpref = qp.q_pow(Rational64::new(exp_num, 4));

    let sum_sqrt = (fact(arg(j + m).expect("|m| <= j"))
        * fact(arg(j - m).expect("|m| <= j"))
        * fact(arg(j_out + m_out).expect("checked above"))
        * fact(arg(j_out - m_out).expect("checked above"))
        * qp.q_num_int(j_out.twice() + 1))
    .sqrt();

    let mut acc = Complex64::default();
    for r in 0..=(j.twice() + 2) {
        let shift = HalfInt::from_int(r);
        let args = [
            Some(r),
            arg(j + half - j_out - shift),
            arg(j - m - shift),
            arg(half + m_prime - shift),
            arg(j_out - half + m + shift),
            arg(j_out - j - m_prime + shift),
        ];
        if let [Some(a0), Some(a1), Some(a2), Some(a3), Some(a4), Some(a5)] = args {
            let den = fact(a0) * fact(a1) * fact(a2) * fact(a3) * fact(a4) * fact(a5);
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            let qshift = qp.q_pow(Rational64::new(-r * (j.twice() + j_out.twice() + 3), 2));
            acc += Complex64::new(sign, 0.0) * qshift * sum_sqrt / den;
        }
    }

    Ok(prefactor_sqrt * qpref * acc)
}

/// Classical coefficient (real).
pub fn cgc_classical(query: &CgcQuery) -> Result<f64, CgcError> {
    cgc_q(query, &QPoint::classical()).map(|v| v.re)
}

/// One table row.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CgcRow {
    pub j: String,
    pub m: String,
    pub m_prime: String,
    pub j_out: String,
    pub m_out: String,
    pub re: f64,
    pub im: f64,
}

/// All admissible rows at fixed `j` for both couplings `j_out = j -+ 1/2`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CgcTable {
    pub q: String,
    pub rows: Vec<CgcRow>,
}

impl CgcTable {
    pub fn build(j: HalfInt, qp: &QPoint) -> Result<CgcTable, CgcError> {
        if j.twice() > MAX_TABLE_TWICE_SPIN {
            return Err(CgcError::SpinTooLarge(j));
        }
        if j.twice() < 0 {
            return Err(CgcError::Inadmissible(format!("j={j}")));
        }
        let mut rows = Vec::new();
        for out_dir in [-1i64, 1] {
            let j_out = HalfInt::from_twice(j.twice() + out_dir);
            if j_out.twice() < 0 {
                continue;
            }
            let mut mt = j.twice();
            while mt >= -j.twice() {
                let m = HalfInt::from_twice(mt);
                for mpt in [1i64, -1] {
                    let m_prime = HalfInt::from_twice(mpt);
                    let query = CgcQuery::new(j, m, m_prime, j_out)?;
                    let m_out = query.m_out();
                    if m_out.twice().abs() > j_out.twice() {
                        continue;
                    }
                    let v = cgc_q(&query, qp)?;
                    rows.push(CgcRow {
                        j: j.to_string(),
                        m: m.to_string(),
                        m_prime: m_prime.to_string(),
                        j_out: j_out.to_string(),
                        m_out: m_out.to_string(),
                        re: v.re,
                        im: v.im,
                    });
                }
                mt -= 2;
            }
        }
        Ok(CgcTable {
            q: qp.label(),
            rows,
        })
    }

    /// CSV with the fixed column order `j, m, m_prime, j_out, m_out, re, im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,m,m_prime,j_out,m_out,re,im\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.j, r.m, r.m_prime, r.j_out, r.m_out, r.re, r.im
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }
}

/// Compare matrix elements of the generating matrix against the summation
/// route for every admissible entry with `j <= j_max`:
/// `<j'',m''| U_i |j,m> = C_i(j) * cgc` with the column prefactors of the
/// variant. Reports the maximum deviation.
pub fn verify_correspondence(
    qp: &QPoint,
    variant: UVariant,
    j_max: HalfInt,
    tol: f64,
) -> Vec<CheckReport> {
    let n_cap = (j_max.twice() + 1) as usize;
    let s = FockSpace::new(*qp, n_cap.max(2)).expect("cap fits the requested spins");
    let u = build_u(&s, variant);
    let dev = correspondence_deviation(&s, &u, variant, j_max);
    let anchor = if qp.is_classical() { "3.14" } else { "6.1" };
    vec![CheckReport::residual(
        "matrix-elements-vs-summation",
        anchor,
        dev,
        tol,
    )]
}

fn correspondence_deviation(s: &FockSpace, u: &OpMat, variant: UVariant, j_max: HalfInt) -> f64 {
    let qp = &s.qp;
    let half = HalfInt::HALF;
    let mut dev: f64 = 0.0;
    let mut jt = 0i64;
    while jt <= j_max.twice() {
        let j = HalfInt::from_twice(jt);
        let mut mt = -jt;
        while mt <= jt {
            let m = HalfInt::from_twice(mt);
            for i in 1..=4usize {
                let (j_out, m_prime) = match i {
                    1 => (j - half, -half),
                    2 => (j + half, -half),
                    3 => (j - half, half),
                    4 => (j + half, half),
                    _ => unreachable!(),
                };
                let (_, _, element) =
                    matrix_element_u(s, u, i, j, m).expect("inside the window by construction");
                if j_out.twice() < 0 {
                    dev = dev.max(element.norm());
                    continue;
                }
                let query = CgcQuery::new(j, m, m_prime, j_out).expect("admissible by loop");
                let cgc = cgc_q(&query, qp).expect("admissible");
                let lowering = i == 1 || i == 3;
                let expected = variant.prefactor(qp, lowering, jt) * cgc;
                dev = dev.max((element - expected).norm());
            }
            mt += 2;
        }
        jt += 1;
    }
    dev
}

/// Orthogonality of the couplings at fixed `j`:
/// `sum_{m+m'=m''} C(j'') C(j''') = delta_{j'' j'''}` for real or classical
/// points (values are real there).
pub fn orthogonality_check(j: HalfInt, qp: &QPoint, tol: f64) -> Vec<CheckReport> {
    assert!(
        !matches!(qp, QPoint::UnitCircle { .. }),
        "orthogonality asserted for real q and the classical point"
    );
    let half = HalfInt::HALF;
    let outs: Vec<HalfInt> = [j - half, j + half]
        .into_iter()
        .filter(|jo| jo.twice() >= 0)
        .collect();
    let mut dev: f64 = 0.0;
    for &ja in &outs {
        for &jb in &outs {
            let expect = if ja == jb { 1.0 } else { 0.0 };
            let mut mot = -(j.twice() + 1);
            while mot <= j.twice() + 1 {
                let m_out = HalfInt::from_twice(mot);
                if m_out.twice().abs() <= ja.twice() && m_out.twice().abs() <= jb.twice() {
                    let mut acc = Complex64::default();
                    for mpt in [-1i64, 1] {
                        let m_prime = HalfInt::from_twice(mpt);
                        let m = m_out - m_prime;
                        if m.twice().abs() > j.twice() {
                            continue;
                        }
                        let qa = CgcQuery::new(j, m, m_prime, ja).expect("admissible");
                        let qb = CgcQuery::new(j, m, m_prime, jb).expect("admissible");
                        acc +=
                            cgc_q(&qa, qp).expect("admissible") * cgc_q(&qb, qp).expect("admissible");
                    }
                    dev = dev.max((acc - Complex64::new(expect, 0.0)).norm());
                }
                mot += 2;
            }
        }
    }
    vec![CheckReport::residual(
        &format!("coupling-orthogonality-j-{j}"),
        "B",
        dev,
        tol,
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(j: i64, m: i64, mp: i64, jo: i64) -> CgcQuery {
        CgcQuery::new(
            HalfInt::from_twice(j),
            HalfInt::from_twice(m),
            HalfInt::from_twice(mp),
            HalfInt::from_twice(jo),
        )
        .unwrap()
    }

    #[test]
    fn classical_values() {
        // highest weight: single term, value 1
        assert!((cgc_classical(&q(1, 1, 1, 2)).unwrap() - 1.0).abs() < 1e-14);
        // singlet components +-1/sqrt(2)
        let v = cgc_classical(&q(1, 1, -1, 0)).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-14);
        let v = cgc_classical(&q(1, -1, 1, 0)).unwrap();
        assert!((v + 0.5f64.sqrt()).abs() < 1e-14);
        // selection rule on the output weight
        assert_eq!(cgc_classical(&q(1, 1, 1, 0)).unwrap(), 0.0);
    }

    #[test]
    fn query_validation() {
        assert!(CgcQuery::new(
            HalfInt::from_twice(1),
            HalfInt::from_twice(3),
            HalfInt::HALF,
            HalfInt::from_twice(2)
        )
        .is_err());
        assert!(CgcQuery::new(
            HalfInt::from_twice(1),
            HalfInt::from_twice(1),
            HalfInt::from_int(1),
            HalfInt::from_twice(2)
        )
        .is_err());
        assert!(CgcQuery::new(
            HalfInt::from_twice(1),
            HalfInt::from_twice(1),
            HalfInt::HALF,
            HalfInt::from_twice(5)
        )
        .is_err());
    }

    #[test]
    fn deformed_values() {
        let qp = QPoint::real(1.3).unwrap();
        // normalization term
        let v = cgc_q(&q(1, 1, 1, 2), &qp).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        // singlet component q^{1/2}/sqrt([2])
        let v = cgc_q(&q(1, 1, -1, 0), &qp).unwrap();
        let expect = qp.q_pow(Rational64::new(1, 2)) / qp.q_num_int(2).sqrt();
        assert!((v - expect).norm() < 1e-13);
        // and its partner -q^{-1/2}/sqrt([2])
        let v = cgc_q(&q(1, -1, 1, 0), &qp).unwrap();
        let expect = -qp.q_pow(Rational64::new(-1, 2)) / qp.q_num_int(2).sqrt();
        assert!((v - expect).norm() < 1e-13);
    }

    #[test]
    fn continuity_at_q_one() {
        for qv in [1.0 + 1e-4, 1.0 - 1e-4] {
            let qp = QPoint::real(qv).unwrap();
            let mut max_dev: f64 = 0.0;
            for jt in 0..=8i64 {
                for mt in (-jt..=jt).step_by(2) {
                    for jot in [jt - 1, jt + 1] {
                        if jot < 0 {
                            continue;
                        }
                        for mpt in [-1i64, 1] {
                            let query = q(jt, mt, mpt, jot);
                            let a = cgc_q(&query, &qp).unwrap();
                            let b = cgc_classical(&query).unwrap();
                            max_dev = max_dev.max((a - Complex64::new(b, 0.0)).norm());
                        }
                    }
                }
            }
            assert!(max_dev <= 1e-3, "q->1 continuity: {max_dev}");
        }
    }

    #[test]
    fn selection_rules_grid() {
        let qp = QPoint::real(1.3).unwrap();
        for jt in 0..=8i64 {
            for mt in (-jt..=jt).step_by(2) {
                for jot in [jt - 1, jt + 1] {
                    if jot < 0 {
                        continue;
                    }
                    for mpt in [-1i64, 1] {
                        let query = q(jt, mt, mpt, jot);
                        if (mt + mpt).abs() > jot {
                            let v = cgc_q(&query, &qp).unwrap();
                            assert_eq!(v, Complex64::default());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_small() {
        for qp in [QPoint::classical(), QPoint::real(1.3).unwrap()] {
            for jt in [0i64, 2, 3] {
                for rep in orthogonality_check(HalfInt::from_twice(jt), &qp, 1e-10) {
                    assert!(rep.pass, "{rep} at {qp:?}");
                }
            }
        }
    }

    #[test]
    fn correspondence_exact_pin() {
        let qp = QPoint::real(1.3).unwrap();
        for rep in verify_correspondence(&qp, UVariant::Exact63, HalfInt::from_int(3), 1e-10) {
            assert!(rep.pass, "{rep}");
        }
        for rep in verify_correspondence(
            &QPoint::classical(),
            UVariant::Exact63,
            HalfInt::from_int(3),
            1e-12,
        ) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn correspondence_family_prefactors() {
        let qp = QPoint::real(1.3).unwrap();
        let variant = UVariant::Family {
            alpha0_upow: 0,
            beta0_upow: 0,
            gamma: Rational64::from_integer(0),
        };
        for rep in verify_correspondence(&qp, variant, HalfInt::from_int(3), 1e-10) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn table_shapes() {
        let t = CgcTable::build(HalfInt::HALF, &QPoint::classical()).unwrap();
        assert_eq!(t.rows.len(), 6);
        let nonzero = t.rows.iter().filter(|r| r.re.abs() > 1e-14).count();
        assert_eq!(nonzero, 6);
        assert!(t.rows.iter().any(|r| (r.re - 0.5f64.sqrt()).abs() < 1e-12));
        let csv = t.to_csv();
        assert!(csv.starts_with("j,m,m_prime,j_out,m_out,re,im\n"));
        assert_eq!(csv.lines().count(), 7);

        let t = CgcTable::build(HalfInt::ZERO, &QPoint::real(1.3).unwrap()).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows.iter().all(|r| r.j_out == "1/2"));
        assert!(t.rows.iter().all(|r| (r.re - 1.0).abs() < 1e-12));

        assert!(CgcTable::build(HalfInt::from_int(30), &QPoint::classical()).is_err());
    }
}
