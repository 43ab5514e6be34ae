//! Constant and weight-dependent R-matrices and the shifted Yang-Baxter
//! equation on an integer weight lattice.
//!
//! The constant pair is
//!
//! ```text
//!   R+ = q^-1/2 [[q,0,0,0],[0,1,w,0],[0,0,1,0],[0,0,0,q]],   w = q - q^-1,
//!   R- = P R+^-1 P,
//! ```
//!
//! and the weight-dependent one replaces the middle block by
//! `[[ S(p), q^p/[p] ], [ -q^-p/[p], S(p) ]]` with
//! `S(p) = sqrt([p+1][p-1])/[p]`; its middle block is unimodular because
//! `[p+1][p-1] + 1 = [p]^2`. The lattice keeps `p` integer-spaced with the
//! shift `S|n> = |n+1>`, so `q^p S = q S q^p` holds literally.

use crate::linop::{embed2, embed4, lift_h, lift_mask, Op, OpMat};
use crate::qarith::QPoint;
use crate::report::CheckReport;
use num_complex::Complex64;
use num_rational::Rational64;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeError {
    /// The interior needs `[n] != 0` and `[n +- 1] != 0` everywhere.
    MinTooSmall(i64),
    /// Not enough room for the requested interior margin.
    WindowTooSmall,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::MinTooSmall(n) => write!(f, "lattice must start at n >= 2, got {n}"),
            LatticeError::WindowTooSmall => write!(f, "lattice too small for the interior margin"),
        }
    }
}

impl std::error::Error for LatticeError {}

/// Integer weight lattice `n_min..=n_max` with the unit shift.
#[derive(Clone, Debug)]
pub struct PLattice {
    pub qp: QPoint,
    pub n_min: i64,
    pub n_max: i64,
    pub dim: usize,
}

impl PLattice {
    pub fn new(qp: QPoint, n_min: i64, n_max: i64) -> Result<Self, LatticeError> {
        if n_min < 2 {
            return Err(LatticeError::MinTooSmall(n_min));
        }
        if n_max < n_min + 6 {
            return Err(LatticeError::WindowTooSmall);
        }
        Ok(PLattice {
            qp,
            n_min,
            n_max,
            dim: (n_max - n_min + 1) as usize,
        })
    }

    pub fn idx(&self, n: i64) -> Option<usize> {
        if n < self.n_min || n > self.n_max {
            None
        } else {
            Some((n - self.n_min) as usize)
        }
    }

    pub fn nval(&self, idx: usize) -> i64 {
        self.n_min + idx as i64
    }

    pub fn pvals(&self) -> Vec<i64> {
        (self.n_min..=self.n_max).collect()
    }

    pub fn op_diag(&self, f: impl Fn(i64) -> Complex64) -> Op {
        let diag: Vec<Complex64> = (0..self.dim).map(|i| f(self.nval(i))).collect();
        Op::from_diag(&diag)
    }

    /// `S^k` with `S|n> = |n+1>`; states shifted past the edge are dropped
    /// (the interior mask keeps comparisons away from the edges).
    pub fn op_shift(&self, k: i64) -> Op {
        let mut triplets = Vec::new();
        for i in 0..self.dim {
            let n = self.nval(i);
            if let Some(j) = self.idx(n + k) {
                triplets.push((j, i, Complex64::new(1.0, 0.0)));
            }
        }
        Op::from_triplets(self.dim, triplets)
    }

    /// Columns at least `margin` steps away from both edges.
    pub fn interior(&self, margin: i64) -> Vec<bool> {
        (0..self.dim)
            .map(|i| {
                let n = self.nval(i);
                n >= self.n_min + margin && n <= self.n_max - margin
            })
            .collect()
    }

    /// `Q = diag(S, S^-1)` acting on one auxiliary slot.
    pub fn q_opmat(&self, inverse: bool) -> OpMat {
        let s = self.op_shift(if inverse { -1 } else { 1 });
        let sinv = self.op_shift(if inverse { 1 } else { -1 });
        OpMat::new(2, vec![s, Op::zeros(self.dim), Op::zeros(self.dim), sinv])
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Entries of the middle block at weight `n`: `sqrt([n+1][n-1])/[n]`.
pub fn rdyn_s(qp: &QPoint, n: i64) -> Complex64 {
    let num = (qp.q_num_int(n + 1) * qp.q_num_int(n - 1)).sqrt();
    num / qp.q_num_int(n)
}

/// `q^{sign*n}/[n]`.
pub fn rdyn_t(qp: &QPoint, n: i64, sign: i64) -> Complex64 {
    qp.q_pow(Rational64::from_integer(sign * n)) / qp.q_num_int(n)
}

/// The constant R-matrix as a flat 4x4 (row-major, basis 11,12,21,22).
pub fn r_const(qp: &QPoint, plus: bool) -> [Complex64; 16] {
    let q = qp.q();
    let w = qp.omega();
    let mut m = [Complex64::default(); 16];
    if plus {
        let pref = qp.q_pow(Rational64::new(-1, 2));
        m[0] = pref * q;
        m[5] = pref;
        m[6] = pref * w;
        m[10] = pref;
        m[15] = pref * q;
    } else {
        let pref = qp.q_pow(Rational64::new(1, 2));
        let qi = qp.q_pow(Rational64::from_integer(-1));
        m[0] = pref * qi;
        m[5] = pref;
        m[9] = -pref * w;
        m[10] = pref;
        m[15] = pref * qi;
    }
    m
}

/// Inverse of the constant R-matrix.
pub fn r_const_inv(qp: &QPoint, plus: bool) -> [Complex64; 16] {
    let q = qp.q();
    let w = qp.omega();
    let qi = qp.q_pow(Rational64::from_integer(-1));
    let mut m = [Complex64::default(); 16];
    if plus {
        let pref = qp.q_pow(Rational64::new(1, 2));
        m[0] = pref * qi;
        m[5] = pref;
        m[6] = -pref * w;
        m[10] = pref;
        m[15] = pref * qi;
    } else {
        let pref = qp.q_pow(Rational64::new(-1, 2));
        m[0] = pref * q;
        m[5] = pref;
        m[9] = pref * w;
        m[10] = pref;
        m[15] = pref * q;
    }
    m
}

/// `sigma = diag(q^-1, q, q, q^-1)`.
pub fn sigma(qp: &QPoint) -> [Complex64; 16] {
    let q = qp.q();
    let qi = qp.q_pow(Rational64::from_integer(-1));
    let mut m = [Complex64::default(); 16];
    m[0] = qi;
    m[5] = q;
    m[10] = q;
    m[15] = qi;
    m
}

/// Weight-dependent R as a 4x4 of diagonal operators over an arbitrary
/// integer weight spectrum (one eigenvalue per basis index). Shared between
/// the abstract lattice and the model space, where the spectrum is
/// `n1 + n2 + 1`.
pub fn r_dyn_opmat(qp: &QPoint, plus: bool, pvals: &[i64]) -> OpMat {
    let dim = pvals.len();
    let pref = if plus {
        qp.q_pow(Rational64::new(-1, 2))
    } else {
        qp.q_pow(Rational64::new(1, 2))
    };
    let corner = if plus {
        qp.q()
    } else {
        qp.q_pow(Rational64::from_integer(-1))
    };
    let diag_of = |f: &dyn Fn(i64) -> Complex64| {
        let d: Vec<Complex64> = pvals.iter().map(|&n| pref * f(n)).collect();
        Op::from_diag(&d)
    };
    let s_mid = diag_of(&|n| rdyn_s(qp, n));
    let upper = if plus {
        diag_of(&|n| rdyn_t(qp, n, 1))
    } else {
        diag_of(&|n| rdyn_t(qp, n, -1))
    };
    let lower = if plus {
        diag_of(&|n| -rdyn_t(qp, n, -1))
    } else {
        diag_of(&|n| -rdyn_t(qp, n, 1))
    };
    let corner_op = diag_of(&|_| corner);
    let z = || Op::zeros(dim);
    OpMat::new(
        4,
        vec![
            corner_op.clone(), z(), z(), z(),
            z(), s_mid.clone(), upper, z(),
            z(), lower, s_mid, z(),
            z(), z(), z(), corner_op,
        ],
    )
}

/// Inverse of the weight-dependent R (the middle block is unimodular).
pub fn r_dyn_inv_opmat(qp: &QPoint, plus: bool, pvals: &[i64]) -> OpMat {
    let dim = pvals.len();
    let pref = if plus {
        qp.q_pow(Rational64::new(1, 2))
    } else {
        qp.q_pow(Rational64::new(-1, 2))
    };
    let corner = if plus {
        qp.q_pow(Rational64::from_integer(-1))
    } else {
        qp.q()
    };
    let diag_of = |f: &dyn Fn(i64) -> Complex64| {
        let d: Vec<Complex64> = pvals.iter().map(|&n| pref * f(n)).collect();
        Op::from_diag(&d)
    };
    let s_mid = diag_of(&|n| rdyn_s(qp, n));
    let upper = if plus {
        diag_of(&|n| -rdyn_t(qp, n, 1))
    } else {
        diag_of(&|n| -rdyn_t(qp, n, -1))
    };
    let lower = if plus {
        diag_of(&|n| rdyn_t(qp, n, -1))
    } else {
        diag_of(&|n| rdyn_t(qp, n, 1))
    };
    let corner_op = diag_of(&|_| corner);
    let z = || Op::zeros(dim);
    OpMat::new(
        4,
        vec![
            corner_op.clone(), z(), z(), z(),
            z(), s_mid.clone(), upper, z(),
            z(), lower, s_mid, z(),
            z(), z(), z(), corner_op,
        ],
    )
}

/// Build the dynamical R on a lattice.
pub fn build_r_dyn(lat: &PLattice, plus: bool) -> OpMat {
    r_dyn_opmat(&lat.qp, plus, &lat.pvals())
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

/// Constant-level checks: `R- = P R+^-1 P`, inverses, the braid/YBE
/// identity, and the classical degeneration to the identity matrix.
pub fn verify_r_const(qp: &QPoint, tol: f64) -> Vec<CheckReport> {
    let mut checks = Vec::new();
    let rp = r_const(qp, true);
    let rm = r_const(qp, false);
    let rp_inv = r_const_inv(qp, true);

    // R- = P R+^-1 P: conjugation by the swap exchanges indices 1 <-> 2.
    let perm = [0usize, 2, 1, 3];
    let mut max_dev: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let lhs = rm[i * 4 + j];
            let rhs = rp_inv[perm[i] * 4 + perm[j]];
            max_dev = max_dev.max((lhs - rhs).norm());
        }
    }
    checks.push(CheckReport::residual("rminus-from-rplus", "1.4", max_dev, tol));

    // R R^-1 = 1 for both signs.
    for (name, r, rinv) in [
        ("rplus-inverse", &rp, &rp_inv),
        ("rminus-inverse", &rm, &r_const_inv(qp, false)),
    ] {
        let mut dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex64::default();
                for k in 0..4 {
                    acc += r[i * 4 + k] * rinv[k * 4 + j];
                }
                let expect = if i == j { c(1.0) } else { c(0.0) };
                dev = dev.max((acc - expect).norm());
            }
        }
        checks.push(CheckReport::residual(name, "1.4", dev, tol));
    }

    // Constant YBE on three slots (dim-1 weight space).
    let as_mat = |vals: &[Complex64; 16]| OpMat::from_scalar(4, 1, vals);
    let r12 = embed4(&as_mat(&rp), 0, 1, 3);
    let r13 = embed4(&as_mat(&rp), 0, 2, 3);
    let r23 = embed4(&as_mat(&rp), 1, 2, 3);
    let lhs = r12.mul(&r13).mul(&r23);
    let rhs = r23.mul(&r13).mul(&r12);
    checks.push(CheckReport::residual(
        "constant-ybe",
        "1.4",
        Op::rel_dev(&lhs, &rhs, None),
        tol,
    ));

    if qp.is_classical() {
        let id = OpMat::from_scalar(4, 1, &{
            let mut m = [Complex64::default(); 16];
            for i in 0..4 {
                m[i * 4 + i] = c(1.0);
            }
            m
        });
        let dev = Op::rel_dev(
            &embed4(&as_mat(&rp), 0, 1, 2),
            &embed4(&id, 0, 1, 2),
            None,
        );
        checks.push(CheckReport::residual("classical-r-is-identity", "1.4", dev, tol));
    }
    checks
}

/// The shifted Yang-Baxter equation on the lattice interior:
///
/// ```text
///   Q1 R23(p) Q1^-1 R13(p) Q3 R12(p) Q3^-1
///     = R12(p) Q2 R13(p) Q2^-1 R23(p)
/// ```
pub fn verify_dybe(lat: &PLattice, tol: f64) -> Vec<CheckReport> {
    let k = 3;
    let r = build_r_dyn(lat, true);
    let r12 = embed4(&r, 0, 1, k);
    let r13 = embed4(&r, 0, 2, k);
    let r23 = embed4(&r, 1, 2, k);
    let q_mat = lat.q_opmat(false);
    let q_inv = lat.q_opmat(true);
    let q1 = embed2(&q_mat, 0, k);
    let q1i = embed2(&q_inv, 0, k);
    let q2 = embed2(&q_mat, 1, k);
    let q2i = embed2(&q_inv, 1, k);
    let q3 = embed2(&q_mat, 2, k);
    let q3i = embed2(&q_inv, 2, k);

    let lhs = q1
        .mul(&r23)
        .mul(&q1i)
        .mul(&r13)
        .mul(&q3)
        .mul(&r12)
        .mul(&q3i);
    let rhs = r12.mul(&q2).mul(&r13).mul(&q2i).mul(&r23);
    let keep = lift_mask(&lat.interior(3), k);
    vec![CheckReport::residual(
        "shifted-ybe",
        "1.13",
        Op::rel_dev(&lhs, &rhs, Some(&keep)),
        tol,
    )]
}

/// Diagonal-conjugation identity `R-(p) = D1^-1 R+(p) sigma D1` with
/// `D = diag(q^p, q^-p)`.
pub fn verify_rd(lat: &PLattice, tol: f64) -> Vec<CheckReport> {
    let k = 2;
    let rp = embed4(&build_r_dyn(lat, true), 0, 1, k);
    let rm = embed4(&build_r_dyn(lat, false), 0, 1, k);
    let one = Rational64::from_integer(1);
    let d = OpMat::new(
        2,
        vec![
            lat.op_diag(|n| lat.qp.q_pow(one * Rational64::from_integer(n))),
            Op::zeros(lat.dim),
            Op::zeros(lat.dim),
            lat.op_diag(|n| lat.qp.q_pow(-one * Rational64::from_integer(n))),
        ],
    );
    let d_inv = OpMat::new(
        2,
        vec![
            lat.op_diag(|n| lat.qp.q_pow(-one * Rational64::from_integer(n))),
            Op::zeros(lat.dim),
            Op::zeros(lat.dim),
            lat.op_diag(|n| lat.qp.q_pow(one * Rational64::from_integer(n))),
        ],
    );
    let d1 = embed2(&d, 0, k);
    let d1i = embed2(&d_inv, 0, k);
    let sig = embed4(&OpMat::from_scalar(4, lat.dim, &sigma(&lat.qp)), 0, 1, k);
    let rhs = d1i.mul(&rp).mul(&sig).mul(&d1);
    vec![CheckReport::residual(
        "r-diag-conjugation",
        "RD",
        Op::rel_dev(&rm, &rhs, None),
        tol,
    )]
}

/// The dynamical R approaches the constant one entrywise for large weight
/// (real `q > 1`): deviation at `n`.
pub fn asymptotic_deviation(qp: &QPoint, n: i64) -> f64 {
    let w = qp.omega();
    [
        (rdyn_s(qp, n) - c(1.0)).norm(),
        (rdyn_t(qp, n, 1) - w).norm(),
        rdyn_t(qp, n, -1).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Determinant of the middle block equals `q^-1 ([p+1][p-1] + 1)/[p]^2`,
/// which collapses to the scalar `q^-1` by the q-number square identity.
pub fn verify_mid_block_det(lat: &PLattice, tol: f64) -> Vec<CheckReport> {
    let qp = &lat.qp;
    let pref = qp.q_pow(Rational64::new(-1, 2));
    let qinv = qp.q_pow(Rational64::from_integer(-1));
    let mut dev_formula: f64 = 0.0;
    let mut dev_scalar: f64 = 0.0;
    for n in lat.n_min..=lat.n_max {
        let s = pref * rdyn_s(qp, n);
        let tp = pref * rdyn_t(qp, n, 1);
        let tm = -pref * rdyn_t(qp, n, -1);
        let det = s * s - tp * tm;
        let pn = qp.q_num_int(n);
        let formula = qinv * (qp.q_num_int(n + 1) * qp.q_num_int(n - 1) + c(1.0)) / (pn * pn);
        dev_formula = dev_formula.max((det - formula).norm());
        dev_scalar = dev_scalar.max((det - qinv).norm());
    }
    vec![
        CheckReport::residual("mid-block-det-formula", "q1", dev_formula, tol),
        CheckReport::residual("mid-block-det-scalar", "q1", dev_scalar, tol),
    ]
}

/// Conjugating the dynamical R by `S^k` substitutes `n -> n+k` entrywise
/// (checked on the interior).
pub fn verify_translation_covariance(lat: &PLattice, k_shift: i64, tol: f64) -> Vec<CheckReport> {
    let k = 2;
    let r = embed4(&build_r_dyn(lat, true), 0, 1, k);
    let s_fwd = lift_h(&lat.op_shift(k_shift), k);
    let s_bwd = lift_h(&lat.op_shift(-k_shift), k);
    // S^-k R S^k evaluates the entries at n + k.
    let conj = s_bwd.mul(&r).mul(&s_fwd);
    let shifted_pvals: Vec<i64> = lat.pvals().iter().map(|n| n + k_shift).collect();
    let r_shifted = embed4(&r_dyn_opmat(&lat.qp, true, &shifted_pvals), 0, 1, k);
    let keep = lift_mask(&lat.interior(k_shift.abs() + 1), k);
    vec![CheckReport::residual(
        "translation-covariance",
        "1.15",
        Op::rel_dev(&conj, &r_shifted, Some(&keep)),
        tol,
    )]
}

/// The weight-shift convention: `q^p S = q S q^p` exactly.
pub fn verify_weight_shift_relation(lat: &PLattice, tol: f64) -> Vec<CheckReport> {
    let qp_op = lat.op_diag(|n| lat.qp.q_pow(Rational64::from_integer(n)));
    let s = lat.op_shift(1);
    let lhs = qp_op.mul(&s);
    let rhs = s.mul(&qp_op).scale(lat.qp.q());
    let keep = lat.interior(1);
    vec![CheckReport::residual(
        "weight-shift-exchange",
        "1.15",
        Op::rel_dev(&lhs, &rhs, Some(&keep)),
        tol,
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points() -> Vec<QPoint> {
        vec![
            QPoint::real(0.7).unwrap(),
            QPoint::real(1.3).unwrap(),
            QPoint::unit_circle(std::f64::consts::PI / 40.0, 12).unwrap(),
        ]
    }

    #[test]
    fn const_r_checks_pass() {
        for qp in points() {
            for rep in verify_r_const(&qp, 1e-12) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
        for rep in verify_r_const(&QPoint::classical(), 1e-14) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn classical_mid_block_values() {
        // At p = 2 the classical middle block is [[s, 1/2], [-1/2, s]] with
        // s = sqrt(3)/2.
        let qp = QPoint::classical();
        let s = rdyn_s(&qp, 2);
        assert!((s.re - 3.0f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((rdyn_t(&qp, 2, 1).re - 0.5).abs() < 1e-14);
        // Corner of R+(p) is q^-1/2 * q.
        let qp = QPoint::real(1.3).unwrap();
        let lat = PLattice::new(qp, 2, 12).unwrap();
        let r = build_r_dyn(&lat, true);
        let corner = r.at(0, 0).entry(0, 0);
        assert!((corner - qp.q_pow(Rational64::new(1, 2))).norm() < 1e-14);
    }

    #[test]
    fn dyn_r_inverse() {
        for qp in points() {
            let lat = PLattice::new(qp, 2, 14).unwrap();
            for plus in [true, false] {
                let r = embed4(&build_r_dyn(&lat, plus), 0, 1, 2);
                let rinv = embed4(&r_dyn_inv_opmat(&qp, plus, &lat.pvals()), 0, 1, 2);
                let prod = r.mul(&rinv);
                let id = Op::identity(prod.dim());
                assert!(Op::rel_dev(&prod, &id, None) < 1e-12);
            }
        }
    }

    #[test]
    fn rminus_is_conjugated_inverse_on_lattice() {
        // R+(p) = P R-(p)^-1 P with the swap on the auxiliary 4-index.
        for qp in points() {
            let lat = PLattice::new(qp, 2, 14).unwrap();
            let rp = build_r_dyn(&lat, true);
            let rm_inv = r_dyn_inv_opmat(&qp, false, &lat.pvals());
            let perm = [0usize, 2, 1, 3];
            let mut dev: f64 = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    let d = rp.at(i, j).sub(rm_inv.at(perm[i], perm[j])).frob(None);
                    dev = dev.max(d);
                }
            }
            assert!(dev < 1e-12, "dev = {dev} at {qp:?}");
        }
    }

    #[test]
    fn dybe_holds() {
        for qp in points() {
            let lat = PLattice::new(qp, 4, 24).unwrap();
            for rep in verify_dybe(&lat, 1e-10) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
        // classical degeneration
        let lat = PLattice::new(QPoint::classical(), 4, 24).unwrap();
        for rep in verify_dybe(&lat, 1e-12) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn rd_identity_holds() {
        for qp in points() {
            let lat = PLattice::new(qp, 2, 20).unwrap();
            for rep in verify_rd(&lat, 1e-12) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
        let lat = PLattice::new(QPoint::classical(), 2, 20).unwrap();
        for rep in verify_rd(&lat, 1e-14) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn asymptotics_and_det() {
        let qp = QPoint::real(1.3).unwrap();
        assert!(asymptotic_deviation(&qp, 40) <= 1e-8);
        let lat = PLattice::new(qp, 4, 24).unwrap();
        for rep in verify_mid_block_det(&lat, 1e-12) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn covariance_and_shift_relation() {
        for qp in points() {
            let lat = PLattice::new(qp, 4, 24).unwrap();
            for rep in verify_translation_covariance(&lat, 2, 1e-13) {
                assert!(rep.pass, "{rep}");
            }
            for rep in verify_weight_shift_relation(&lat, 1e-14) {
                assert!(rep.pass, "{rep}");
            }
        }
    }

    #[test]
    fn lattice_guards() {
        let qp = QPoint::real(1.3).unwrap();
        assert!(PLattice::new(qp, 1, 20).is_err());
        assert!(PLattice::new(qp, 4, 8).is_err());
    }
}
