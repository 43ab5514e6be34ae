//! Residual suites on the truncated model space.
//!
//! Every check compares two operator expressions on a window of basis
//! states chosen so truncation cannot leak into the comparison, and reports
//! the relative Frobenius deviation there.

use super::build::{
    build_d, build_l, build_u, build_u_inverse, build_uhat, build_uhat_inverse, build_uqsl2,
    UVariant,
};
use super::{ExtLattice, FockSpace};
use crate::dyn_ybe::{r_const, r_dyn_opmat, sigma};
use crate::linop::{embed2, embed4, lift_mask, Op, OpMat};
use crate::qarith::QPoint;
use crate::report::CheckReport;
use crate::weylalg::{build_free_field, build_uhat_with_xi, FreeFieldParams, WeylElement};
use num_complex::Complex64;
use num_rational::Rational64;

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn check(name: &str, anchor: &str, dev: f64, tol: f64) -> CheckReport {
    CheckReport::residual(name, anchor, dev, tol)
}

/// Exchange relations, Casimir spectrum, the L-matrix and its central
/// combinations, including the reflection-type exchange relation on two
/// auxiliary slots.
pub fn l_algebra_checks(qp: &QPoint, n_cap: usize, tol: f64) -> Vec<CheckReport> {
    let exact_tol = 1e-12;
    let s = FockSpace::new(*qp, n_cap).expect("n_cap >= 2");
    let g = build_uqsl2(&s);
    let mut out = Vec::new();

    let w1 = s.window(1);
    // [l+, l-] = [2 l3]
    let two_l3_qnum = s.op_diag(|n1, n2| qp.q_num_int(n1 - n2));
    out.push(check(
        "lp-lm-commutator",
        "L3",
        Op::rel_dev(&g.lp.commutator(&g.lm), &two_l3_qnum, Some(&w1)),
        tol,
    ));
    // q^{l3} l+- = q^{+-1} l+- q^{l3}
    out.push(check(
        "ql3-lp-exchange",
        "L3",
        Op::rel_dev(&g.ql3.mul(&g.lp), &g.lp.mul(&g.ql3).scale(qp.q()), Some(&w1)),
        tol,
    ));
    out.push(check(
        "ql3-lm-exchange",
        "L3",
        Op::rel_dev(
            &g.ql3.mul(&g.lm),
            &g.lm.mul(&g.ql3).scale(qp.q_pow(rat(-1))),
            Some(&w1),
        ),
        tol,
    ));
    // Casimir eigenvalue q^{2j+1} + q^{-(2j+1)} per block
    let cas_expect = s.op_diag(|n1, n2| {
        qp.q_pow(rat(n1 + n2 + 1)) + qp.q_pow(rat(-(n1 + n2 + 1)))
    });
    out.push(check(
        "casimir-blocks",
        "L8",
        Op::rel_dev(&g.casimir, &cas_expect, Some(&w1)),
        exact_tol,
    ));

    let l = build_l(&s, &g);
    // diagonal entry: q^2 q^{-2 l3}
    let l22_expect = s.op_diag(|n1, n2| qp.q_pow(rat(2) + rat(-(n1 - n2))));
    out.push(check(
        "l22-diagonal",
        "L5",
        Op::rel_dev(l.at(1, 1), &l22_expect, Some(&w1)),
        exact_tol,
    ));

    // Reflection exchange: L1 R-^-1 L2 R- = R+^-1 L2 R+ L1
    let k = 2;
    let rp = embed4(&OpMat::from_scalar(4, s.dim, &r_const(qp, true)), 0, 1, k);
    let rm = embed4(&OpMat::from_scalar(4, s.dim, &r_const(qp, false)), 0, 1, k);
    let rp_inv = embed4(
        &OpMat::from_scalar(4, s.dim, &crate::dyn_ybe::r_const_inv(qp, true)),
        0,
        1,
        k,
    );
    let rm_inv = embed4(
        &OpMat::from_scalar(4, s.dim, &crate::dyn_ybe::r_const_inv(qp, false)),
        0,
        1,
        k,
    );
    let l1 = embed2(&l, 0, k);
    let l2 = embed2(&l, 1, k);
    let lhs = l1.mul(&rm_inv).mul(&l2).mul(&rm);
    let rhs = rp_inv.mul(&l2).mul(&rp).mul(&l1);
    let w2k = lift_mask(&s.window(2), k);
    out.push(check(
        "rll-exchange",
        "1.3",
        Op::rel_dev(&lhs, &rhs, Some(&w2k)),
        tol,
    ));

    // K1 = q A + q^-1 D = q^2 C;  K2 = q^-1 A D - q B C = q^3
    let k1 = l.at(0, 0).scale(qp.q()).add(&l.at(1, 1).scale(qp.q_pow(rat(-1))));
    out.push(check(
        "k1-is-q2-casimir",
        "L6",
        Op::rel_dev(&k1, &g.casimir.scale(qp.q_pow(rat(2))), Some(&w1)),
        exact_tol,
    ));
    let k2 = l
        .at(0, 0)
        .mul(l.at(1, 1))
        .scale(qp.q_pow(rat(-1)))
        .sub(&l.at(0, 1).mul(l.at(1, 0)).scale(qp.q()));
    let w2 = s.window(2);
    out.push(check(
        "k2-is-q3",
        "L6",
        Op::rel_dev(&k2, &Op::identity(s.dim).scale(qp.q_pow(rat(3))), Some(&w2)),
        exact_tol,
    ));
    let mut central_dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            central_dev = central_dev.max(
                k1.commutator(l.at(i, j)).frob(Some(&w2))
                    / 1.0f64.max(k1.frob(Some(&w2)) * l.at(i, j).frob(Some(&w2))).sqrt(),
            );
        }
    }
    out.push(check("k1-central", "1.6", central_dev, tol));

    // The weight commutes with every entry of L.
    let p = s.op_p();
    let mut p_dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            p_dev = p_dev.max(Op::rel_dev(
                &p.mul(l.at(i, j)),
                &l.at(i, j).mul(&p),
                Some(&w1),
            ));
        }
    }
    out.push(check("p-central", "1.12", p_dev, exact_tol));

    out
}

/// The exchange relations of the generating matrix with D and the constant /
/// weight-dependent R pair, the diagonal-conjugation identity, and the
/// similarity `U D U^-1 = L`, all on one space.
pub fn theorem1_checks(qp: &QPoint, n_cap: usize, tol: f64) -> Vec<CheckReport> {
    theorem1_checks_variant(qp, n_cap, tol, UVariant::Exact63)
}

pub fn theorem1_checks_variant(
    qp: &QPoint,
    n_cap: usize,
    tol: f64,
    variant: UVariant,
) -> Vec<CheckReport> {
    let exact_tol = 1e-12;
    let s = FockSpace::new(*qp, n_cap).expect("n_cap >= 2");
    let g = build_uqsl2(&s);
    let l = build_l(&s, &g);
    let d = build_d(&s);
    let u = build_u(&s, variant);
    let uhat = build_uhat(&s, variant);
    let det = variant.det(qp);
    let mut out = Vec::new();

    let k = 2;
    let u1 = embed2(&u, 0, k);
    let u2 = embed2(&u, 1, k);
    let d1 = embed2(&d, 0, k);
    let d2 = embed2(&d, 1, k);
    let sig = embed4(&OpMat::from_scalar(4, s.dim, &sigma(qp)), 0, 1, k);
    let w1k = lift_mask(&s.window(1), k);
    let w2k = lift_mask(&s.window(2), k);

    // D1 U2 = U2 D1 sigma and D2 U1 = U1 D2 sigma
    out.push(check(
        "d1-u2-exchange",
        "1.8",
        Op::rel_dev(&d1.mul(&u2), &u2.mul(&d1).mul(&sig), Some(&w1k)),
        tol,
    ));
    out.push(check(
        "d2-u1-exchange",
        "1.8",
        Op::rel_dev(&d2.mul(&u1), &u1.mul(&d2).mul(&sig), Some(&w1k)),
        tol,
    ));

    // R+- U1 U2 = U2 U1 R+-(p)
    let pvals = s.pvals();
    for (name, plus) in [("rplus-uu-exchange", true), ("rminus-uu-exchange", false)] {
        let r = embed4(&OpMat::from_scalar(4, s.dim, &r_const(qp, plus)), 0, 1, k);
        let rp_dyn = embed4(&r_dyn_opmat(qp, plus, &pvals), 0, 1, k);
        out.push(check(
            name,
            "1.9",
            Op::rel_dev(
                &r.mul(&u1).mul(&u2),
                &u2.mul(&u1).mul(&rp_dyn),
                Some(&w2k),
            ),
            tol,
        ));
    }

    // R-(p) = D1^-1 R+(p) sigma D1 evaluated at the weight operator
    let rp_dyn = embed4(&r_dyn_opmat(qp, true, &pvals), 0, 1, k);
    let rm_dyn = embed4(&r_dyn_opmat(qp, false, &pvals), 0, 1, k);
    let d_inv = {
        let mut m = d.clone();
        *m.at_mut(0, 0) = s.op_qp_pow(rat(-1));
        *m.at_mut(1, 1) = s.op_qp_pow(rat(1));
        m
    };
    let d1i = embed2(&d_inv, 0, k);
    out.push(check(
        "rd-at-weight",
        "RD",
        Op::rel_dev(&rm_dyn, &d1i.mul(&rp_dyn).mul(&sig).mul(&d1), None),
        exact_tol,
    ));

    // [L1, D2] = 0
    let l1 = embed2(&l, 0, k);
    out.push(check(
        "l-d-commute",
        "1.12",
        Op::rel_dev(&l1.mul(&d2), &d2.mul(&l1), Some(&w1k)),
        tol,
    ));

    // U D U^-1 = L (the hatted version sees the same similarity).
    let u_inv = build_u_inverse(&s, &uhat, det);
    let uhat_inv = build_uhat_inverse(&s, &uhat, det);
    let w2 = s.window(2);
    out.push(check(
        "u-d-uinv-is-l",
        "2.130",
        OpMat::rel_dev(&u.mul(&d).mul(&u_inv), &l, Some(&w2)),
        tol,
    ));
    out.push(check(
        "uhat-d-uhatinv-is-l",
        "2.130",
        OpMat::rel_dev(&uhat.mul(&d).mul(&uhat_inv), &l, Some(&w2)),
        tol,
    ));

    // Closed-form inverse really is a two-sided inverse.
    let id2 = OpMat::identity(2, s.dim);
    out.push(check(
        "uhat-inverse-right",
        "2.125",
        OpMat::rel_dev(&uhat.mul(&uhat_inv), &id2, Some(&w2)),
        tol,
    ));
    // The left-inverse property of the closed form holds away from the
    // lowest-weight block: its derivation divides by [p-1], which vanishes
    // at p = 1, and the hatted matrix annihilates (vacuum, e1) there.
    let w2_no_vac: Vec<bool> = (0..s.dim)
        .map(|i| {
            let (n1, n2) = s.nn(i);
            w2[i] && n1 + n2 >= 1
        })
        .collect();
    out.push(check(
        "uhat-inverse-left",
        "2.125",
        OpMat::rel_dev(&uhat_inv.mul(&uhat), &id2, Some(&w2_no_vac)),
        tol,
    ));

    // Det U is the expected scalar.
    let pinv = s.op_diag(|n1, n2| c1() / qp.q_num_int(n1 + n2 + 1));
    let det_op = uhat
        .at(0, 0)
        .mul(uhat.at(1, 1))
        .sub(&uhat.at(0, 1).mul(uhat.at(1, 0)))
        .mul(&pinv);
    let w1 = s.window(1);
    out.push(check(
        "detu-scalar",
        "6.3",
        Op::rel_dev(&det_op, &Op::identity(s.dim).scale(det), Some(&w1)),
        exact_tol,
    ));

    // Shift signatures: U1: (-1,0), U2: (0,+1), U3: (0,-1), U4: (+1,0).
    let mut sig_dev: f64 = 0.0;
    let expected = [(-1i64, 0i64), (0, 1), (0, -1), (1, 0)];
    for (idx, (di, dj)) in expected.iter().enumerate() {
        let e = u.at(idx / 2, idx % 2);
        for col in 0..s.dim {
            let (n1, n2) = s.nn(col);
            for (row, v) in e.column(col) {
                let (m1, m2) = s.nn(row);
                let ok = m1 as i64 - n1 as i64 == *di && m2 as i64 - n2 as i64 == *dj;
                if !ok {
                    sig_dev = sig_dev.max(v.norm());
                }
            }
        }
    }
    out.push(check("u-shift-signatures", "Fig1", sig_dev, 1e-14));

    out
}

/// Unitarity of the transposed generating matrix in the orthonormal basis;
/// asserted for real q and at the classical point only.
pub fn unitarity_checks(qp: &QPoint, n_cap: usize) -> Vec<CheckReport> {
    assert!(
        !matches!(qp, QPoint::UnitCircle { .. }),
        "unitarity checks are restricted to real q"
    );
    let tol = if qp.is_classical() { 1e-12 } else { 1e-10 };
    let s = FockSpace::new(*qp, n_cap).expect("n_cap >= 2");
    let u = build_u(&s, UVariant::Exact63);
    let ut = u.transpose();
    // (U^T)^* is the Hermitian conjugate of U^T: starred entries back in
    // the positions of U.
    let ut_star = u.conj_entries();
    let id2 = OpMat::identity(2, s.dim);
    let w1 = s.window(1);
    // The reverse order fails on the vacuum alone: the second component of
    // the range of U^T is z2 (.) + z1 (.), which never contains the constant,
    // so U^T (U^T)^* annihilates e2 (x) |0,0>.
    let w1_no_vac: Vec<bool> = (0..s.dim)
        .map(|i| {
            let (n1, n2) = s.nn(i);
            w1[i] && n1 + n2 >= 1
        })
        .collect();
    let mut out = vec![
        check(
            "ut-star-ut",
            "B",
            OpMat::rel_dev(&ut_star.mul(&ut), &id2, Some(&w1)),
            tol,
        ),
        check(
            "ut-ut-star",
            "B",
            OpMat::rel_dev(&ut.mul(&ut_star), &id2, Some(&w1_no_vac)),
            tol,
        ),
    ];
    // The basis adjoint of multiplication by z is the q-derivative.
    out.push(check(
        "z-adjoint-is-qd",
        "4.03",
        Op::rel_dev(&s.op_z(1).conj_transpose(), &s.op_qd(1), None),
        1e-13,
    ));
    out
}

/// Covariance of the generating matrix entries as spin-1/2 tensor
/// operators: gradings, the deformed covariance combination, the matrix
/// exchange with L, and the classical degenerations.
pub fn tensor_ops_checks(qp: &QPoint, n_cap: usize, tol: f64) -> Vec<CheckReport> {
    let s = FockSpace::new(*qp, n_cap).expect("n_cap >= 2");
    let g = build_uqsl2(&s);
    let l = build_l(&s, &g);
    let u = build_u(&s, UVariant::Exact63);
    let mut out = Vec::new();
    let w2 = s.window(2);
    let q = qp.q();
    let qinv = qp.q_pow(rat(-1));

    let ops = [u.at(0, 0), u.at(0, 1), u.at(1, 0), u.at(1, 1)];
    let halves = [-0.5, -0.5, 0.5, 0.5];

    // [l3, U_i] = m U_i
    let mut grade_dev: f64 = 0.0;
    for (i, ui) in ops.iter().enumerate() {
        let lhs = g.l3.commutator(ui);
        let rhs = ui.scale(Complex64::new(halves[i], 0.0));
        grade_dev = grade_dev.max(Op::rel_dev(&lhs, &rhs, Some(&w2)));
    }
    out.push(check("l3-grading", "WE1", grade_dev, tol));

    // l+ T q^{l3} - q^{l3 - 1} T l+ = sqrt([j-m][j+m+1]) T' with the pairs
    // (U1 -> U3), (U2 -> U4) and annihilation on (U3, U4); mirrored for l-.
    let zero = Op::zeros(s.dim);
    let raise_targets = [Some(2usize), Some(3), None, None];
    let lower_targets = [None, None, Some(0usize), Some(1)];
    let mut cov_dev: f64 = 0.0;
    for (i, ui) in ops.iter().enumerate() {
        let lhs = g
            .lp
            .mul(ui)
            .mul(&g.ql3)
            .sub(&g.ql3.mul(ui).mul(&g.lp).scale(qinv));
        let rhs = raise_targets[i].map(|t| ops[t].clone()).unwrap_or_else(|| zero.clone());
        cov_dev = cov_dev.max(Op::rel_dev(&lhs, &rhs, Some(&w2)));

        let lhs = g
            .lm
            .mul(ui)
            .mul(&g.ql3)
            .sub(&g.ql3.mul(ui).mul(&g.lm).scale(q));
        let rhs = lower_targets[i].map(|t| ops[t].clone()).unwrap_or_else(|| zero.clone());
        cov_dev = cov_dev.max(Op::rel_dev(&lhs, &rhs, Some(&w2)));
    }
    out.push(check("deformed-covariance", "WE1", cov_dev, tol));

    // R- U1 L2 = L2 R+ U1
    let k = 2;
    let u1 = embed2(&u, 0, k);
    let l2 = embed2(&l, 1, k);
    let rp = embed4(&OpMat::from_scalar(4, s.dim, &r_const(qp, true)), 0, 1, k);
    let rm = embed4(&OpMat::from_scalar(4, s.dim, &r_const(qp, false)), 0, 1, k);
    let w2k = lift_mask(&w2, k);
    out.push(check(
        "r-u-l-exchange",
        "WE10",
        Op::rel_dev(&rm.mul(&u1).mul(&l2), &l2.mul(&rp).mul(&u1), Some(&w2k)),
        tol,
    ));

    if qp.is_classical() {
        let exact_tol = 1e-12;
        // Plain commutators [l+-, U_i] with unit coefficients.
        let mut dev: f64 = 0.0;
        for (i, ui) in ops.iter().enumerate() {
            let lhs = g.lp.commutator(ui);
            let rhs = raise_targets[i].map(|t| ops[t].clone()).unwrap_or_else(|| zero.clone());
            dev = dev.max(Op::rel_dev(&lhs, &rhs, Some(&w2)));
            let lhs = g.lm.commutator(ui);
            let rhs = lower_targets[i].map(|t| ops[t].clone()).unwrap_or_else(|| zero.clone());
            dev = dev.max(Op::rel_dev(&lhs, &rhs, Some(&w2)));
        }
        out.push(check("classical-commutators", "we20", dev, exact_tol));

        // Matrix form of the classical covariance:
        // [U0_1, L0_2] = 2 Lambda U0_1.
        let l0 = classical_l0(&s, &g);
        let l0_2 = embed2(&l0, 1, k);
        let lambda = {
            let mut m = [Complex64::default(); 16];
            m[0] = Complex64::new(0.5, 0.0);
            m[5] = Complex64::new(-0.5, 0.0);
            m[6] = c1();
            m[9] = c1();
            m[10] = Complex64::new(-0.5, 0.0);
            m[15] = Complex64::new(0.5, 0.0);
            embed4(&OpMat::from_scalar(4, s.dim, &m), 0, 1, k)
        };
        let lhs = u1.commutator(&l0_2);
        let rhs = lambda.mul(&u1).scale(Complex64::new(2.0, 0.0));
        out.push(check(
            "classical-matrix-covariance",
            "WE3",
            Op::rel_dev(&lhs, &rhs, Some(&w2k)),
            exact_tol,
        ));
    }

    out
}

/// `L0 = 2 [[1 + l3, -l-], [-l+, 1 - l3]]` (the linear term of L near q = 1,
/// in the same sign gauge as `U D U^-1`).
fn classical_l0(s: &FockSpace, g: &super::build::UqSl2) -> OpMat {
    let two = Complex64::new(2.0, 0.0);
    let id = Op::identity(s.dim);
    OpMat::new(
        2,
        vec![
            id.add(&g.l3).scale(two),
            g.lm.scale(-two),
            g.lp.scale(-two),
            id.sub(&g.l3).scale(two),
        ],
    )
}

/// Classical-point checks: the linear term of L, its triangular
/// decomposition on the extended lattice, the classical generating matrix
/// action, and the scaling of the deformation error.
pub fn classical_limit_checks(n_cap: usize, _tol: f64) -> Vec<CheckReport> {
    let exact_tol = 1e-12;
    let cl = QPoint::classical();
    let s = FockSpace::new(cl, n_cap).expect("n_cap >= 2");
    let g = build_uqsl2(&s);
    let l0 = classical_l0(&s, &g);
    let mut out = Vec::new();
    let w2 = s.window(2);

    // L0 = U0 diag(p, -p) U0^-1.
    let u0 = build_u(&s, UVariant::Exact63);
    let uhat0 = build_uhat(&s, UVariant::Exact63);
    let u0_inv = build_u_inverse(&s, &uhat0, UVariant::Exact63.det(&cl));
    let p = s.op_p();
    let dp = OpMat::new(
        2,
        vec![
            p.clone(),
            Op::zeros(s.dim),
            Op::zeros(s.dim),
            p.scale(Complex64::new(-1.0, 0.0)),
        ],
    );
    out.push(check(
        "l0-from-u0",
        "3.05",
        OpMat::rel_dev(&u0.mul(&dp).mul(&u0_inv), &l0, Some(&w2)),
        exact_tol,
    ));

    // Classical determinant: (U1 U4 - U2 U3) / p = 1.
    let pinv = s.op_diag(|n1, n2| c1() / Complex64::new((n1 + n2 + 1) as f64, 0.0));
    let det0 = uhat0
        .at(0, 0)
        .mul(uhat0.at(1, 1))
        .sub(&uhat0.at(0, 1).mul(uhat0.at(1, 0)))
        .mul(&pinv);
    let w1 = s.window(1);
    out.push(check(
        "detu0-identity",
        "2.16",
        Op::rel_dev(&det0, &Op::identity(s.dim), Some(&w1)),
        exact_tol,
    ));

    // Action values of the classical generating matrix.
    let mut action_dev: f64 = 0.0;
    for col in 0..s.dim {
        let (n1, n2) = s.nn(col);
        if n1 + 1 > s.n_cap || n2 + 1 > s.n_cap {
            continue;
        }
        let (jf, mf) = ((n1 + n2) as f64 / 2.0, (n1 as f64 - n2 as f64) / 2.0);
        let den = 2.0 * jf + 1.0;
        let vals = [
            ((jf + mf) / den).sqrt(),
            ((jf - mf + 1.0) / den).sqrt(),
            -((jf - mf) / den).sqrt(),
            ((jf + mf + 1.0) / den).sqrt(),
        ];
        let targets = [
            (n1 as i64 - 1, n2 as i64),
            (n1 as i64, n2 as i64 + 1),
            (n1 as i64, n2 as i64 - 1),
            (n1 as i64 + 1, n2 as i64),
        ];
        for i in 0..4 {
            let (t1, t2) = targets[i];
            let got = if t1 < 0 || t2 < 0 {
                Complex64::default()
            } else {
                u0.at(i / 2, i % 2).entry(s.idx(t1 as usize, t2 as usize), col)
            };
            let expect = if targets[i].0 < 0 || targets[i].1 < 0 {
                0.0
            } else {
                vals[i]
            };
            action_dev = action_dev.max((got - Complex64::new(expect, 0.0)).norm());
        }
    }
    out.push(check("u0-action-values", "3.9", action_dev, exact_tol));

    // Triangular decomposition on the extended lattice:
    // L0 = A0 B0 A0^-1 with
    //   A0 = [[z1^-1/2, -z1^-1/2 z2], [0, z1^1/2]],
    //   B0 = [[p + 1/2, 0], [2 d2, -(p - 1/2)]].
    let lat = ExtLattice::new(cl, n_cap, 4);
    let a0 = OpMat::new(
        2,
        vec![
            lat.op_shift_diag(-1, 0, |_, _| c1()),
            lat.op_shift_diag(-1, 2, |_, _| c1()),
            Op::zeros(lat.dim),
            lat.op_shift_diag(1, 0, |_, _| c1()),
        ],
    );
    let a0_inv = OpMat::new(
        2,
        vec![
            lat.op_shift_diag(1, 0, |_, _| c1()),
            lat.op_shift_diag(-1, 2, |_, _| -c1()),
            Op::zeros(lat.dim),
            lat.op_shift_diag(-1, 0, |_, _| c1()),
        ],
    );
    let pval = |a: f64, b: f64| Complex64::new(a + b + 1.0, 0.0);
    let b0 = OpMat::new(
        2,
        vec![
            lat.op_diag(|a, b| pval(a, b) + Complex64::new(0.5, 0.0)),
            Op::zeros(lat.dim),
            lat.op_shift_diag(0, -2, |_, b| Complex64::new(-2.0 * b, 0.0)),
            lat.op_diag(|a, b| -(pval(a, b) - Complex64::new(0.5, 0.0))),
        ],
    );
    let keep = lat.poly_window(6);
    let id_lat = OpMat::identity(2, lat.dim);
    out.push(check(
        "a0-inverse",
        "3.35",
        OpMat::rel_dev(&a0.mul(&a0_inv), &id_lat, Some(&keep)),
        exact_tol,
    ));
    // L0 on the lattice, same gauge.
    let l3_lat = lat.op_diag(|a, b| Complex64::new((a - b) / 2.0, 0.0));
    let lp_lat = lat.op_shift_diag(2, -2, |_, b| Complex64::new(b, 0.0));
    let lm_lat = lat.op_shift_diag(-2, 2, |a, _| Complex64::new(a, 0.0));
    let two = Complex64::new(2.0, 0.0);
    let l0_lat = OpMat::new(
        2,
        vec![
            Op::identity(lat.dim).add(&l3_lat).scale(two),
            lm_lat.scale(-two),
            lp_lat.scale(-two),
            Op::identity(lat.dim).sub(&l3_lat).scale(two),
        ],
    );
    out.push(check(
        "l0-decomposition",
        "3.35",
        OpMat::rel_dev(&a0.mul(&b0).mul(&a0_inv), &l0_lat, Some(&keep)),
        exact_tol,
    ));
    // Spot values of the triangular factor: diagonal entries p +- 1/2.
    let spot = lat.idx(2, 2).map(|i| b0.at(0, 0).entry(i, i)).unwrap();
    out.push(check(
        "b0-diagonal-value",
        "3.35",
        (spot - Complex64::new(3.5, 0.0)).norm(),
        exact_tol,
    ));

    // Deformation error scaling: E(gamma) = |(L(e^gamma) - 1)/gamma - L0|
    // halves when gamma halves.
    let gammas: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
    let mut errs = Vec::new();
    for &ga in &gammas {
        let qp = QPoint::real(ga.exp()).expect("e^gamma != 1");
        let sq = FockSpace::new(qp, n_cap).expect("n_cap >= 2");
        let gq = build_uqsl2(&sq);
        let lq = build_l(&sq, &gq);
        let scale = Complex64::new(1.0 / ga, 0.0);
        let mut err2: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let idp = if i == j {
                    Op::identity(s.dim)
                } else {
                    Op::zeros(s.dim)
                };
                let diff = lq.at(i, j).sub(&idp).scale(scale).sub(l0.at(i, j));
                err2 += diff.frob(Some(&w2)).powi(2);
            }
        }
        errs.push(err2.sqrt());
    }
    for i in 0..gammas.len() - 1 {
        let ratio = errs[i] / errs[i + 1];
        out.push(check(
            &format!("gamma-halving-{}", i + 1),
            "3.05",
            (ratio - 2.0).abs(),
            0.2,
        ));
    }

    out
}

/// q-oscillator layer: the deformed Heisenberg relations, the solution
/// family, the pinned similarity to L, and the Casimir realization.
pub fn qoscillator_checks(qp: &QPoint, n_cap: usize, tol: f64) -> Vec<CheckReport> {
    let exact_tol = 1e-12;
    let s = FockSpace::new(*qp, n_cap).expect("n_cap >= 2");
    let mut out = Vec::new();
    let w1 = s.window(1);
    let q = qp.q();

    // a a+ - q a+ a = N^-1 and N a = q^-1 a N per pair.
    for var in [1usize, 2] {
        let a = s.op_qd(var);
        let ap = s.op_z(var);
        let n_inv = s.op_n_pow(var, rat(-1));
        let lhs = a.mul(&ap).sub(&ap.mul(&a).scale(q));
        out.push(check(
            &format!("qboson-relation-{var}"),
            "q3.1",
            Op::rel_dev(&lhs, &n_inv, Some(&w1)),
            exact_tol,
        ));
        let n_op = s.op_n_pow(var, rat(1));
        out.push(check(
            &format!("qboson-grading-{var}"),
            "q3.1",
            Op::rel_dev(
                &n_op.mul(&a),
                &a.mul(&n_op).scale(qp.q_pow(rat(-1))),
                Some(&w1),
            ),
            exact_tol,
        ));
    }

    // Solution family with free exponents (alpha, beta) and coefficients
    // tied by alpha0 delta0 = q beta0 gamma0.
    let family = Q6Family {
        alpha: Rational64::new(1, 4),
        beta: Rational64::new(1, 2),
        alpha0: qp.u_pow(2),
        beta0: c1(),
        gamma0: qp.u_pow(1),
    };
    out.extend(q6_family_checks(&s, &family, tol));

    // Under the pin alpha + beta = -1/2, alpha0 = q gamma0, beta0 = delta0
    // the similarity U D U^-1 = L holds (gamma = 2(1 - alpha)).
    let g = build_uqsl2(&s);
    let l = build_l(&s, &g);
    let variant = UVariant::Family {
        alpha0_upow: 2,
        beta0_upow: 0,
        gamma: Rational64::new(5, 2), // alpha = -1/4
    };
    let u = build_u(&s, variant);
    let uhat = build_uhat(&s, variant);
    let u_inv = build_u_inverse(&s, &uhat, variant.det(qp));
    let d = build_d(&s);
    let w2 = s.window(2);
    out.push(check(
        "pinned-family-udu-is-l",
        "q8",
        OpMat::rel_dev(&u.mul(&d).mul(&u_inv), &l, Some(&w2)),
        tol,
    ));

    // Casimir realization C = q N1 N2 + q^-1 N1^-1 N2^-1.
    let cas_expect = s.op_diag(|n1, n2| {
        qp.q_pow(rat(1 + n1 + n2)) + qp.q_pow(rat(-1 - n1 - n2))
    });
    out.push(check(
        "casimir-q-realization",
        "q4.5",
        Op::rel_dev(&g.casimir, &cas_expect, Some(&w1)),
        exact_tol,
    ));

    out
}

/// Free parameters of the q-oscillator solution family; `delta0` is fixed
/// by the constraint `alpha0 delta0 = q beta0 gamma0`.
pub struct Q6Family {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub alpha0: Complex64,
    pub beta0: Complex64,
    pub gamma0: Complex64,
}

impl Q6Family {
    pub fn delta0(&self, qp: &QPoint) -> Complex64 {
        qp.q() * self.beta0 * self.gamma0 / self.alpha0
    }

    /// Reject parameter sets violating the tie (used by callers that accept
    /// external parameters).
    pub fn validate(
        alpha0: Complex64,
        beta0: Complex64,
        gamma0: Complex64,
        delta0: Complex64,
        qp: &QPoint,
    ) -> Result<(), String> {
        let dev = (alpha0 * delta0 - qp.q() * beta0 * gamma0).norm();
        if dev > 1e-12 {
            return Err(format!(
                "family constraint alpha0*delta0 = q*beta0*gamma0 violated by {dev:.3e}"
            ));
        }
        Ok(())
    }
}

fn q6_family_checks(s: &FockSpace, f: &Q6Family, tol: f64) -> Vec<CheckReport> {
    let qp = &s.qp;
    let q = qp.q();
    let delta0 = f.delta0(qp);
    let diag = |e1: Rational64, e2: Rational64| s.op_n_pow(1, e1).mul(&s.op_n_pow(2, e2));
    let one = rat(1);

    let u1 = s.op_qd(1).mul(&diag(f.alpha, -f.beta)).scale(f.alpha0);
    let u2 = s.op_z(2).mul(&diag(f.beta, -f.alpha)).scale(f.beta0);
    let u3 = s
        .op_qd(2)
        .mul(&diag(-(one + f.beta), f.alpha))
        .scale(-f.gamma0);
    let u4 = s.op_z(1).mul(&diag(-f.alpha, one + f.beta)).scale(delta0);

    let w2 = s.window(2);
    let mut dev_q2: f64 = 0.0;
    let pairs: [(&Op, &Op, Complex64); 4] = [
        (&u1, &u3, qp.q_pow(rat(-1))),
        (&u2, &u4, qp.q_pow(rat(-1))),
        (&u1, &u2, c1()),
        (&u3, &u4, c1()),
    ];
    for (x, y, w) in pairs {
        dev_q2 = dev_q2.max(Op::rel_dev(&x.mul(y), &y.mul(x).scale(w), Some(&w2)));
    }

    let det = f.alpha0 * delta0 * qp.q_pow(f.alpha);
    let b_diag = s.op_qp_pow(one);
    let b_inv_diag = s.op_qp_pow(-one);
    let x = u1.mul(&u4).sub(&u4.mul(&u1).scale(qp.q_pow(rat(-1))));
    let y = u3.mul(&u2).sub(&u2.mul(&u3).scale(q));
    let dev_q3 = Op::rel_dev(
        &x,
        &b_diag.scale(det * qp.q_pow(rat(-1))),
        Some(&w2),
    )
    .max(Op::rel_dev(
        &y,
        &b_inv_diag.scale(-det),
        Some(&w2),
    ));

    vec![
        check("family-weyl-relations", "q2", dev_q2, tol),
        check("family-det-relations", "q3", dev_q3, tol),
    ]
}

/// Diagonalization of the triangular factor on the extended lattice, the
/// half-shift selectivity, and the bridge to the exact monomial matrix.
pub fn diag_b_checks(qp: &QPoint, n_cap: usize, tol: f64) -> Vec<CheckReport> {
    assert!(!qp.is_classical(), "the bridge needs q != 1");
    let lat = ExtLattice::new(*qp, n_cap, 4);
    let ff = build_free_field(&FreeFieldParams::default()).expect("default params admissible");
    let op = |w: &WeylElement| lat.op_weyl(w);
    let a = op(&ff.a);
    let c_op = op(&ff.c);
    let b = op(&ff.b);
    let b_inv = op(&ff.b.try_inverse().expect("b invertible"));
    let a_inv = op(&ff.a.try_inverse().expect("a invertible"));
    let d = op(&ff.d);
    let mut out = Vec::new();

    // f(b) = (b - q b^-1)^-1 on the integer-shifted states; singular only
    // at weight 1/2, which integer combinations never reach.
    let q = qp.q();
    let fval = |aexp: f64, bexp: f64| {
        let p = aexp + bexp + 1.0;
        let b_eig = q.powf(p);
        c1() / (b_eig - q * b_eig.powi(-1))
    };
    let mut min_gap = f64::INFINITY;
    for i in 0..lat.dim {
        let (a2, b2) = lat.exps(i);
        if a2 % 2 != 0 || b2 % 2 != 0 {
            continue; // integer-shifted sector only
        }
        let gap = (c1() / fval(a2 as f64 / 2.0, b2 as f64 / 2.0)).norm();
        min_gap = min_gap.min(gap);
    }
    out.push(CheckReport::control("f-nonsingular", "5.3", min_gap, 1e-9));

    let f_op = lat.op_diag(|aexp, bexp| {
        if ((aexp + bexp) * 2.0).fract() != 0.0 {
            return Complex64::default();
        }
        fval(aexp, bexp)
    });
    // v3 = d f(b); V diagonalizes q^{1/2} B.
    let v3 = d.mul(&f_op);
    let zero = || Op::zeros(lat.dim);
    let ident = || Op::identity(lat.dim);
    let v = OpMat::new(2, vec![ident(), zero(), v3.clone(), ident()]);
    let v_inv = OpMat::new(
        2,
        vec![ident(), zero(), v3.scale(-c1()), ident()],
    );
    let sq = qp.q_pow(Rational64::new(1, 2));
    let btilde = OpMat::new(2, vec![b.clone(), zero(), d.clone(), b_inv.clone()]).scale(sq);
    let btilde0 = OpMat::new(2, vec![b.clone(), zero(), zero(), b_inv.clone()]).scale(sq);
    let keep = lat.poly_window(6);
    out.push(check(
        "btilde-diagonalization",
        "5.1",
        OpMat::rel_dev(&v.mul(&btilde0).mul(&v_inv), &btilde, Some(&keep)),
        tol,
    ));

    // Half-shift family: Uhat_delta = A V' Q^delta with the cancelled
    // V' = [[(b - q b^-1)/omega, 0], [d/omega, 1]]. Only delta = -1/2
    // satisfies the diagonal exchange relation.
    let winv = c1() / qp.omega();
    let vhat = OpMat::new(
        2,
        vec![
            b.sub(&b_inv.scale(q)).scale(winv),
            zero(),
            d.scale(winv),
            ident(),
        ],
    );
    let a_mat = OpMat::new(2, vec![a.clone(), c_op.clone(), zero(), a_inv.clone()]);
    // default shift monomial at gamma = 2, eps = 0: e^{i xi} = z1 N1^{3/2} N2
    let half_mono = WeylElement::monomial_scaled(crate::qarith::LaurentU::one(), 1, 0, 3, 2);
    let half_inv_mono = half_mono.try_inverse().expect("monomial");
    let e_half = op(&half_mono);
    let e_half_inv = op(&half_inv_mono);
    let q_pow_delta = |delta2: i64| -> OpMat {
        match delta2 {
            -1 => OpMat::new(2, vec![e_half_inv.clone(), zero(), zero(), e_half.clone()]),
            0 => OpMat::identity(2, lat.dim),
            1 => OpMat::new(2, vec![e_half.clone(), zero(), zero(), e_half_inv.clone()]),
            _ => unreachable!(),
        }
    };
    let b0_mat = OpMat::new(2, vec![b.clone(), zero(), zero(), b_inv.clone()]);
    let k = 2;
    let b0_1 = embed2(&b0_mat, 0, k);
    let sig = embed4(&OpMat::from_scalar(4, lat.dim, &sigma(qp)), 0, 1, k);
    let keep_k = lift_mask(&keep, k);
    for delta2 in [-1i64, 0, 1] {
        let uhat_delta = a_mat.mul(&vhat).mul(&q_pow_delta(delta2));
        let ud2 = embed2(&uhat_delta, 1, k);
        let dev = Op::rel_dev(&b0_1.mul(&ud2), &ud2.mul(&b0_1).mul(&sig), Some(&keep_k));
        match delta2 {
            -1 => out.push(check("half-shift-delta-minus-half", "5.85", dev, tol)),
            0 => out.push(CheckReport::control(
                "half-shift-delta-zero-fails",
                "5.85",
                dev,
                1e-3,
            )),
            1 => out.push(CheckReport::control(
                "half-shift-delta-plus-half-fails",
                "5.85",
                dev,
                1e-3,
            )),
            _ => unreachable!(),
        }
    }

    // The delta = -1/2 member coincides with the exact monomial matrix
    // bridged onto the lattice.
    let uhat_num = a_mat.mul(&vhat).mul(&q_pow_delta(-1));
    let uhat_exact = build_uhat_with_xi(&ff, &half_mono).expect("monomial shift");
    let uhat_bridge = OpMat::new(
        2,
        vec![
            op(&uhat_exact.e[0][0]),
            op(&uhat_exact.e[0][1]),
            op(&uhat_exact.e[1][0]),
            op(&uhat_exact.e[1][1]),
        ],
    );
    out.push(check(
        "half-shift-matches-monomial",
        "5.9",
        OpMat::rel_dev(&uhat_num, &uhat_bridge, Some(&keep)),
        tol,
    ));

    out
}

/// Residual names and values used by the truncation-independence criterion.
pub fn residual_snapshot(qp: &QPoint, n_cap: usize, tol: f64) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for rep in l_algebra_checks(qp, n_cap, tol)
        .into_iter()
        .chain(theorem1_checks(qp, n_cap, tol))
    {
        if let Some(v) = rep.residual.value() {
            out.push((rep.name, v));
        }
    }
    out
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
    fn l_algebra_suite_passes() {
        for qp in points() {
            for rep in l_algebra_checks(&qp, 8, 1e-10) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
    }

    #[test]
    fn theorem1_suite_passes() {
        for qp in points() {
            for rep in theorem1_checks(&qp, 8, 1e-10) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
    }

    #[test]
    fn theorem1_family_variant_passes() {
        let qp = QPoint::real(1.3).unwrap();
        let variant = UVariant::Family {
            alpha0_upow: 0,
            beta0_upow: 0,
            gamma: Rational64::from_integer(0),
        };
        for rep in theorem1_checks_variant(&qp, 8, 1e-10, variant) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn unitarity_suite_passes() {
        for qp in [
            QPoint::classical(),
            QPoint::real(0.7).unwrap(),
            QPoint::real(1.3).unwrap(),
        ] {
            for rep in unitarity_checks(&qp, 8) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
    }

    #[test]
    fn tensor_ops_suite_passes() {
        for qp in points() {
            for rep in tensor_ops_checks(&qp, 8, 1e-10) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
        for rep in tensor_ops_checks(&QPoint::classical(), 8, 1e-12) {
            assert!(rep.pass, "{rep} classical");
        }
    }

    #[test]
    fn classical_limit_suite_passes() {
        for rep in classical_limit_checks(8, 1e-10) {
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn qoscillator_suite_passes() {
        for qp in points() {
            for rep in qoscillator_checks(&qp, 8, 1e-10) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
    }

    #[test]
    fn diag_b_suite_passes() {
        for qp in points() {
            for rep in diag_b_checks(&qp, 8, 1e-10) {
                assert!(rep.pass, "{rep} at {qp:?}");
            }
        }
    }

    #[test]
    fn family_constraint_validation() {
        let qp = QPoint::real(1.3).unwrap();
        let a0 = qp.u_pow(2);
        let b0 = c1();
        let g0 = qp.u_pow(1);
        let good = qp.q() * b0 * g0 / a0;
        assert!(Q6Family::validate(a0, b0, g0, good, &qp).is_ok());
        assert!(Q6Family::validate(a0, b0, g0, good * 1.5, &qp).is_err());
    }
}
