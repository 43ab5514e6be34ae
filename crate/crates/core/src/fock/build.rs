//! Operator builders on the truncated model space: the deformed generators,
//! the L-matrix, the diagonal D, and the generating-matrix family.

use super::FockSpace;
use crate::linop::{Op, OpMat};
use crate::qarith::QPoint;
use num_complex::Complex64;
use num_rational::Rational64;

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Generators `l+ = a1+ a2`, `l- = a2+ a1`, `q^{l3} = N1^{1/2} N2^{-1/2}`
/// realized through the two q-oscillator pairs, plus derived diagonals.
pub struct UqSl2 {
    pub lp: Op,
    pub lm: Op,
    pub ql3: Op,
    pub ql3_inv: Op,
    pub l3: Op,
    pub casimir: Op,
}

/// Build the deformed generators on the space. At the classical point the
/// same formulas reduce to `l+ = z1 d2`, `l- = z2 d1`, `q^{l3} = 1`.
pub fn build_uqsl2(s: &FockSpace) -> UqSl2 {
    let lp = s.op_z(1).mul(&s.op_qd(2));
    let lm = s.op_z(2).mul(&s.op_qd(1));
    let half = Rational64::new(1, 2);
    let ql3 = s.op_n_pow(1, half).mul(&s.op_n_pow(2, -half));
    let ql3_inv = s.op_n_pow(1, -half).mul(&s.op_n_pow(2, half));
    let l3 = s.op_l3();
    // C = omega^2 l- l+ + q^{2 l3 + 1} + q^{-(2 l3 + 1)}
    let omega = s.qp.omega();
    let one = Rational64::from_integer(1);
    let q2l3p = s.op_n_pow(1, one).mul(&s.op_n_pow(2, -one)).scale(s.qp.q());
    let q2l3m = s
        .op_n_pow(1, -one)
        .mul(&s.op_n_pow(2, one))
        .scale(s.qp.q_pow(-one));
    let casimir = lm
        .mul(&lp)
        .scale(omega * omega)
        .add(&q2l3p)
        .add(&q2l3m);
    UqSl2 {
        lp,
        lm,
        ql3,
        ql3_inv,
        l3,
        casimir,
    }
}

/// The L-matrix in the gauge produced by `L = U D U^-1`:
///
/// ```text
///   L = [[ q C - q^{-2 l3},             -q^{5/2} omega l- q^{-l3} ],
///        [ -q^{-1/2} omega l+ q^{-l3},  q^2 q^{-2 l3}             ]]
/// ```
pub fn build_l(s: &FockSpace, g: &UqSl2) -> OpMat {
    let qp = &s.qp;
    let one = Rational64::from_integer(1);
    let q2l3_inv = s.op_n_pow(1, -one).mul(&s.op_n_pow(2, one));
    let omega = qp.omega();
    let l11 = g.casimir.scale(qp.q()).sub(&q2l3_inv);
    let l12 = g
        .lm
        .mul(&g.ql3_inv)
        .scale(-omega * qp.q_pow(Rational64::new(5, 2)));
    let l21 = g
        .lp
        .mul(&g.ql3_inv)
        .scale(-omega * qp.q_pow(Rational64::new(-1, 2)));
    let l22 = q2l3_inv.scale(qp.q_pow(Rational64::from_integer(2)));
    OpMat::new(2, vec![l11, l12, l21, l22])
}

/// `D = diag(q^p, q^-p)`.
pub fn build_d(s: &FockSpace) -> OpMat {
    let one = Rational64::from_integer(1);
    OpMat::new(
        2,
        vec![
            s.op_qp_pow(one),
            Op::zeros(s.dim),
            Op::zeros(s.dim),
            s.op_qp_pow(-one),
        ],
    )
}

/// Family of generating matrices. `Exact63` is the pin
/// `alpha0 = q^{1/2}, beta0 = 1, gamma = 2`; at the classical point it
/// degenerates to the matrix `[[d1, z2], [-d2, z1]] / sqrt(p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UVariant {
    Exact63,
    Family {
        alpha0_upow: i64,
        beta0_upow: i64,
        gamma: Rational64,
    },
}

impl UVariant {
    pub fn params(&self) -> (i64, i64, Rational64) {
        match *self {
            UVariant::Exact63 => (4, 0, Rational64::from_integer(2)),
            UVariant::Family {
                alpha0_upow,
                beta0_upow,
                gamma,
            } => (alpha0_upow, beta0_upow, gamma),
        }
    }

    /// The scalar determinant `alpha0 beta0 q^{1 - gamma/2}` of the family.
    pub fn det(&self, qp: &QPoint) -> Complex64 {
        let (a, b, gamma) = self.params();
        qp.u_pow(a) * qp.u_pow(b) * qp.q_pow(Rational64::from_integer(1) - gamma / 2)
    }

    /// Column prefactors relating matrix elements to the summation-route
    /// coefficients: `C_{1,3} = alpha0 q^{(2-gamma) j - 1/2}` and
    /// `C_{2,4} = beta0 q^{(gamma-2) j}`.
    pub fn prefactor(&self, qp: &QPoint, lowering: bool, two_j: i64) -> Complex64 {
        let (a, b, gamma) = self.params();
        let j = Rational64::new(two_j, 2);
        if lowering {
            qp.u_pow(a)
                * qp.q_pow((Rational64::from_integer(2) - gamma) * j - Rational64::new(1, 2))
        } else {
            qp.u_pow(b) * qp.q_pow((gamma - Rational64::from_integer(2)) * j)
        }
    }
}

/// The hatted generating matrix (no `1/sqrt([p])` factor):
///
/// ```text
///   Uhat1 = alpha0 a1 N1^alpha N2^{alpha+1/2}        alpha = 1 - gamma/2
///   Uhat2 = beta0 a2+ N1^{-alpha-1/2} N2^{-alpha}
///   Uhat3 = -(alpha0/q) a2 N1^{alpha-1/2} N2^alpha
///   Uhat4 = beta0 a1+ N1^{-alpha} N2^{-alpha+1/2}
/// ```
pub fn build_uhat(s: &FockSpace, v: UVariant) -> OpMat {
    let (a_upow, b_upow, gamma) = v.params();
    let qp = &s.qp;
    let alpha = Rational64::from_integer(1) - gamma / 2;
    let half = Rational64::new(1, 2);
    let alpha0 = qp.u_pow(a_upow);
    let beta0 = qp.u_pow(b_upow);

    let diag = |e1: Rational64, e2: Rational64| s.op_n_pow(1, e1).mul(&s.op_n_pow(2, e2));

    let u1 = s.op_qd(1).mul(&diag(alpha, alpha + half)).scale(alpha0);
    let u2 = s
        .op_z(2)
        .mul(&diag(-alpha - half, -alpha))
        .scale(beta0);
    let u3 = s
        .op_qd(2)
        .mul(&diag(alpha - half, alpha))
        .scale(-alpha0 * qp.q_pow(-Rational64::from_integer(1)));
    let u4 = s.op_z(1).mul(&diag(-alpha, -alpha + half)).scale(beta0);
    OpMat::new(2, vec![u1, u2, u3, u4])
}

/// `U = Uhat * [p]^{-1/2}` (diagonal factor applied first).
pub fn build_u(s: &FockSpace, v: UVariant) -> OpMat {
    let uhat = build_uhat(s, v);
    let w = s.op_inv_sqrt_qnum_p();
    let mut out = uhat;
    for i in 0..2 {
        for j in 0..2 {
            *out.at_mut(i, j) = out.at(i, j).mul(&w);
        }
    }
    out
}

/// Closed-form inverse of the hatted matrix:
/// `Uhat^-1 = (1/Det) [[U4, -q U2], [-U3, q U1]] [p]^-1`.
pub fn build_uhat_inverse(s: &FockSpace, uhat: &OpMat, det: Complex64) -> OpMat {
    let qp = &s.qp;
    let pinv = s.op_diag(|n1, n2| c1() / qp.q_num_int(n1 + n2 + 1));
    let det_inv = c1() / det;
    let q = qp.q();
    let e = |op: &Op, w: Complex64| op.mul(&pinv).scale(w * det_inv);
    OpMat::new(
        2,
        vec![
            e(uhat.at(1, 1), c1()),
            e(uhat.at(0, 1), -q),
            e(uhat.at(1, 0), -c1()),
            e(uhat.at(0, 0), q),
        ],
    )
}

/// `U^-1 = [p]^{1/2} Uhat^-1`.
pub fn build_u_inverse(s: &FockSpace, uhat: &OpMat, det: Complex64) -> OpMat {
    let uhat_inv = build_uhat_inverse(s, uhat, det);
    let sqrt_p = s.op_diag(|n1, n2| s.qp.q_num_int(n1 + n2 + 1).sqrt());
    let mut out = uhat_inv;
    for i in 0..2 {
        for j in 0..2 {
            *out.at_mut(i, j) = sqrt_p.mul(out.at(i, j));
        }
    }
    out
}

/// Matrix element `<j'', m''| U_i |j, m>` with the target fixed by the shift
/// signature of `U_i` (`i` in 1..=4).
pub fn matrix_element_u(
    s: &FockSpace,
    u: &OpMat,
    i: usize,
    j: crate::qarith::HalfInt,
    m: crate::qarith::HalfInt,
) -> Result<(crate::qarith::HalfInt, crate::qarith::HalfInt, Complex64), super::FockError> {
    use crate::qarith::HalfInt;
    let src = s.idx_jm(j, m)?;
    let half = HalfInt::HALF;
    let (dj, dm, row, col) = match i {
        1 => (-half, -half, 0usize, 0usize),
        2 => (half, -half, 0, 1),
        3 => (-half, half, 1, 0),
        4 => (half, half, 1, 1),
        _ => panic!("U index must be 1..=4"),
    };
    let (jt, mt) = (j + dj, m + dm);
    // Targets with |m| > j are annihilated (zero coefficient), not errors;
    // only escaping the cap is a window violation.
    let n1t = (jt + mt).twice();
    let n2t = (jt - mt).twice();
    if n1t < 0 || n2t < 0 {
        return Ok((jt, mt, Complex64::default()));
    }
    if n1t / 2 > s.n_cap as i64 || n2t / 2 > s.n_cap as i64 {
        return Err(super::FockError::OutOfWindow);
    }
    let tgt = s.idx((n1t / 2) as usize, (n2t / 2) as usize);
    Ok((jt, mt, u.at(row, col).entry(tgt, src)))
}
