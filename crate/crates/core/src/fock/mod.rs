//! Truncated model space, sparse operator builders, and the residual suites.
//!
//! The model space is spanned by `|j,m> = z1^{j+m} z2^{j-m} / sqrt([j+m]![j-m]!)`
//! with `0 <= n_i <= n_cap`; operators act in this orthonormal basis. A
//! second, unnormalized monomial lattice with half-integer exponents hosts
//! the bridge from the exact algebra (generators there carry `z^(1/2)` and
//! negative powers that never leave the polynomial sector in the combinations
//! being compared).
//!
//! Truncation discipline: identities are asserted only on basis states whose
//! orbit under every partial product stays inside the cap ("window"); each
//! check declares its slack, the largest positive shift any factor chain can
//! produce.

pub mod build;
mod suites;

pub use build::{
    build_d, build_l, build_u, build_u_inverse, build_uhat, build_uhat_inverse, build_uqsl2,
    matrix_element_u, UqSl2, UVariant,
};
pub use suites::*;

use crate::linop::Op;
use crate::qarith::{HalfInt, QPoint};
use num_complex::Complex64;
use num_rational::Rational64;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum FockError {
    /// The cap must leave room for at least one raising step.
    CapTooSmall(usize),
    /// State outside the truncated space.
    OutOfWindow,
}

impl fmt::Display for FockError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FockError::CapTooSmall(n) => write!(f, "n_cap = {n} too small (need >= 2)"),
            FockError::OutOfWindow => write!(f, "requested state outside the truncated space"),
        }
    }
}

impl std::error::Error for FockError {}

/// Truncated model space with the orthonormal `|j,m>` basis.
#[derive(Clone, Debug)]
pub struct FockSpace {
    pub qp: QPoint,
    pub n_cap: usize,
    pub dim: usize,
    norms: Vec<f64>,
}

impl FockSpace {
    pub fn new(qp: QPoint, n_cap: usize) -> Result<Self, FockError> {
        if n_cap < 2 {
            return Err(FockError::CapTooSmall(n_cap));
        }
        let side = n_cap + 1;
        let dim = side * side;
        let mut norms = Vec::with_capacity(dim);
        for n1 in 0..side {
            for n2 in 0..side {
                let v = (qp.q_fact(n1 as u64) * qp.q_fact(n2 as u64)).norm();
                norms.push(v.sqrt());
            }
        }
        Ok(FockSpace {
            qp,
            n_cap,
            dim,
            norms,
        })
    }

    pub fn idx(&self, n1: usize, n2: usize) -> usize {
        n1 * (self.n_cap + 1) + n2
    }

    pub fn nn(&self, idx: usize) -> (usize, usize) {
        (idx / (self.n_cap + 1), idx % (self.n_cap + 1))
    }

    /// Index of `|j,m>` (with `n1 = j+m`, `n2 = j-m`), when inside the cap.
    pub fn idx_jm(&self, j: HalfInt, m: HalfInt) -> Result<usize, FockError> {
        let n1 = (j + m).twice();
        let n2 = (j - m).twice();
        if n1 < 0 || n2 < 0 || n1 % 2 != 0 || n2 % 2 != 0 {
            return Err(FockError::OutOfWindow);
        }
        let (n1, n2) = ((n1 / 2) as usize, (n2 / 2) as usize);
        if n1 > self.n_cap || n2 > self.n_cap {
            return Err(FockError::OutOfWindow);
        }
        Ok(self.idx(n1, n2))
    }

    pub fn jm(&self, idx: usize) -> (HalfInt, HalfInt) {
        let (n1, n2) = self.nn(idx);
        (
            HalfInt::from_twice((n1 + n2) as i64),
            HalfInt::from_twice(n1 as i64 - n2 as i64),
        )
    }

    /// `sqrt([n1]! [n2]!)`.
    pub fn norm(&self, n1: usize, n2: usize) -> f64 {
        self.norms[self.idx(n1, n2)]
    }

    /// Column mask keeping states with `n_i <= n_cap - slack` on both axes.
    pub fn window(&self, slack: usize) -> Vec<bool> {
        (0..self.dim)
            .map(|i| {
                let (n1, n2) = self.nn(i);
                n1 + slack <= self.n_cap && n2 + slack <= self.n_cap
            })
            .collect()
    }

    pub fn op_diag(&self, f: impl Fn(i64, i64) -> Complex64) -> Op {
        let diag: Vec<Complex64> = (0..self.dim)
            .map(|i| {
                let (n1, n2) = self.nn(i);
                f(n1 as i64, n2 as i64)
            })
            .collect();
        Op::from_diag(&diag)
    }

    /// Multiplication by `z_var`: raises `n_var` with coefficient
    /// `sqrt([n+1])` in the orthonormal basis.
    pub fn op_z(&self, var: usize) -> Op {
        self.op_shift(var, 1)
    }

    /// The q-derivative `z^-1 [z d]`: lowers `n_var` with coefficient
    /// `sqrt([n])`.
    pub fn op_qd(&self, var: usize) -> Op {
        self.op_shift(var, -1)
    }

    fn op_shift(&self, var: usize, dir: i64) -> Op {
        assert!(var == 1 || var == 2);
        let mut triplets = Vec::new();
        for i in 0..self.dim {
            let (n1, n2) = self.nn(i);
            let n = if var == 1 { n1 } else { n2 };
            let tgt = n as i64 + dir;
            if tgt < 0 || tgt as usize > self.n_cap {
                continue;
            }
            let coeff = if dir > 0 {
                self.qp.q_num_int(n as i64 + 1)
            } else {
                self.qp.q_num_int(n as i64)
            };
            let coeff = coeff.sqrt();
            if coeff.norm() == 0.0 {
                continue;
            }
            let (t1, t2) = if var == 1 {
                (tgt as usize, n2)
            } else {
                (n1, tgt as usize)
            };
            triplets.push((self.idx(t1, t2), i, coeff));
        }
        Op::from_triplets(self.dim, triplets)
    }

    /// Diagonal `q^{r n_var}`.
    pub fn op_n_pow(&self, var: usize, r: Rational64) -> Op {
        self.op_diag(|n1, n2| {
            let n = if var == 1 { n1 } else { n2 };
            self.qp.q_pow(r * Rational64::from_integer(n))
        })
    }

    /// Diagonal weight operator with eigenvalue `n1 + n2 + 1` (the
    /// dimensionless `p`).
    pub fn op_p(&self) -> Op {
        self.op_diag(|n1, n2| Complex64::new((n1 + n2 + 1) as f64, 0.0))
    }

    /// Eigenvalues of the weight operator per basis index.
    pub fn pvals(&self) -> Vec<i64> {
        (0..self.dim)
            .map(|i| {
                let (n1, n2) = self.nn(i);
                (n1 + n2 + 1) as i64
            })
            .collect()
    }

    /// Diagonal `q^{r p}` for rational `r`.
    pub fn op_qp_pow(&self, r: Rational64) -> Op {
        self.op_diag(|n1, n2| {
            self.qp
                .q_pow(r * Rational64::from_integer(n1 + n2 + 1))
        })
    }

    /// Diagonal `[p]^{-1/2}`.
    pub fn op_inv_sqrt_qnum_p(&self) -> Op {
        self.op_diag(|n1, n2| {
            let v = self.qp.q_num_int(n1 + n2 + 1);
            Complex64::new(1.0, 0.0) / v.sqrt()
        })
    }

    /// Diagonal `l3` with eigenvalue `(n1 - n2)/2`.
    pub fn op_l3(&self) -> Op {
        self.op_diag(|n1, n2| Complex64::new((n1 - n2) as f64 / 2.0, 0.0))
    }
}

/// Unnormalized monomial lattice `z1^a z2^b` with `a, b` on the half-integer
/// grid `[-slack_lo, n_cap]`; hosts the exact-algebra bridge and the
/// triangular-pair constructions whose factors leave the polynomial sector.
#[derive(Clone, Debug)]
pub struct ExtLattice {
    pub qp: QPoint,
    /// Lowest exponent in half-steps (negative).
    pub min2: i32,
    /// Highest exponent in half-steps.
    pub max2: i32,
    per: usize,
    pub dim: usize,
}

impl ExtLattice {
    pub fn new(qp: QPoint, n_cap: usize, slack_lo: usize) -> Self {
        let min2 = -(2 * slack_lo as i32);
        let max2 = 2 * n_cap as i32;
        let per = (max2 - min2 + 1) as usize;
        ExtLattice {
            qp,
            min2,
            max2,
            per,
            dim: per * per,
        }
    }

    pub fn idx(&self, a2: i32, b2: i32) -> Option<usize> {
        if a2 < self.min2 || a2 > self.max2 || b2 < self.min2 || b2 > self.max2 {
            return None;
        }
        Some(((a2 - self.min2) as usize) * self.per + (b2 - self.min2) as usize)
    }

    pub fn exps(&self, idx: usize) -> (i32, i32) {
        (
            (idx / self.per) as i32 + self.min2,
            (idx % self.per) as i32 + self.min2,
        )
    }

    /// Operator of one exact element: each monomial shifts the exponents by
    /// its z-part and multiplies by its evaluated coefficient times
    /// `q^{s1 a + s2 b}`.
    pub fn op_weyl(&self, w: &crate::weylalg::WeylElement) -> Op {
        let mut triplets = Vec::new();
        for (key, coeff) in w.terms() {
            let cval = coeff.eval(&self.qp);
            for i in 0..self.dim {
                let (a2, b2) = self.exps(i);
                let Some(j) = self.idx(a2 + key.z1, b2 + key.z2) else {
                    continue;
                };
                // q-exponent (n1/4)(a2/2) + (n2/4)(b2/2) = (n1 a2 + n2 b2)/8
                let e = Rational64::new(
                    key.n1 as i64 * a2 as i64 + key.n2 as i64 * b2 as i64,
                    8,
                );
                triplets.push((j, i, cval * self.qp.q_pow(e)));
            }
        }
        Op::from_triplets(self.dim, triplets)
    }

    /// Shift by `(dz1, dz2)` half-steps with a diagonal coefficient read at
    /// the source exponents (as real values `a = a2/2`, `b = b2/2`).
    pub fn op_shift_diag(
        &self,
        dz1_2: i32,
        dz2_2: i32,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Op {
        let mut triplets = Vec::new();
        for i in 0..self.dim {
            let (a2, b2) = self.exps(i);
            let Some(j) = self.idx(a2 + dz1_2, b2 + dz2_2) else {
                continue;
            };
            let v = f(a2 as f64 / 2.0, b2 as f64 / 2.0);
            if v.norm() > 0.0 {
                triplets.push((j, i, v));
            }
        }
        Op::from_triplets(self.dim, triplets)
    }

    pub fn op_diag(&self, f: impl Fn(f64, f64) -> Complex64) -> Op {
        self.op_shift_diag(0, 0, f)
    }

    /// Columns of the polynomial sector (integer exponents `>= 0`) with
    /// `margin2` half-steps of slack at the top; the low side is covered by
    /// the lattice's own negative range.
    pub fn poly_window(&self, margin2: i32) -> Vec<bool> {
        assert!(
            margin2 <= -self.min2,
            "window slack exceeds the lattice's low-side margin"
        );
        (0..self.dim)
            .map(|i| {
                let (a2, b2) = self.exps(i);
                a2 >= 0
                    && b2 >= 0
                    && a2 % 2 == 0
                    && b2 % 2 == 0
                    && a2 + margin2 <= self.max2
                    && b2 + margin2 <= self.max2
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylalg::WeylElement;

    #[test]
    fn space_dimensions_and_lookup() {
        let qp = QPoint::real(1.3).unwrap();
        let s = FockSpace::new(qp, 2).unwrap();
        assert_eq!(s.dim, 9);
        // |j=1, m=0> sits at (n1, n2) = (1, 1)
        let i = s
            .idx_jm(HalfInt::from_int(1), HalfInt::ZERO)
            .unwrap();
        assert_eq!(s.nn(i), (1, 1));
        assert!(s
            .idx_jm(HalfInt::from_int(5), HalfInt::ZERO)
            .is_err());
        assert!(FockSpace::new(qp, 1).is_err());
    }

    #[test]
    fn classical_norms() {
        let s = FockSpace::new(QPoint::classical(), 3).unwrap();
        assert!((s.norm(2, 2) - 2.0).abs() < 1e-14); // sqrt(2! 2!)
        assert!((s.norm(3, 0) - 6.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ladder_actions() {
        let qp = QPoint::real(1.3).unwrap();
        let s = FockSpace::new(qp, 4).unwrap();
        let z1 = s.op_z(1);
        let qd1 = s.op_qd(1);
        // z1 |0,0> = |1,0>, qd1 |3,n2> = sqrt([3]) |2,n2>
        assert!((z1.entry(s.idx(1, 0), s.idx(0, 0)) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let c = qd1.entry(s.idx(2, 1), s.idx(3, 1));
        assert!((c - qp.q_num_int(3).sqrt()).norm() < 1e-14);
        // number operator: qd1 z1 - diagonal [n+1]
        let num = qd1.mul(&z1);
        let expect = s.op_diag(|n1, _| qp.q_num_int(n1 + 1));
        let keep = s.window(1);
        assert!(Op::rel_dev(&num, &expect, Some(&keep)) < 1e-14);
        // p eigenvalue on |j=1,m=0>
        let p = s.op_p();
        assert!((p.entry(s.idx(1, 1), s.idx(1, 1)).re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn classical_heisenberg() {
        // [d2, z2] = 1 on the window at the classical point.
        let s = FockSpace::new(QPoint::classical(), 5).unwrap();
        let z2 = s.op_z(2);
        let d2 = s.op_qd(2);
        let comm = d2.mul(&z2).sub(&z2.mul(&d2));
        let keep = s.window(1);
        assert!(Op::rel_dev(&comm, &Op::identity(s.dim), Some(&keep)) < 1e-14);
    }

    #[test]
    fn lattice_bridge_matches_direct_ops() {
        let qp = QPoint::real(1.3).unwrap();
        let lat = ExtLattice::new(qp, 6, 3);
        // qd acts with coefficient [n] on monomials
        let qd1 = lat.op_weyl(&WeylElement::qd(1));
        let i = lat.idx(6, 2).unwrap(); // z1^3 z2^1
        let j = lat.idx(4, 2).unwrap();
        assert!((qd1.entry(j, i) - qp.q_num_int(3)).norm() < 1e-13);
        // N z = q z N as lattice operators
        let n1 = lat.op_weyl(&WeylElement::n1_quarters(4));
        let z1 = lat.op_weyl(&WeylElement::z1());
        let lhs = n1.mul(&z1);
        let rhs = z1.mul(&n1).scale(qp.q());
        let keep = lat.poly_window(2);
        assert!(Op::rel_dev(&lhs, &rhs, Some(&keep)) < 1e-14);
    }

    #[test]
    fn lattice_eval_is_homomorphism() {
        // eval(x y) = eval(x) eval(y) on windowed columns, random-ish inputs.
        let qp = QPoint::real(0.7).unwrap();
        let lat = ExtLattice::new(qp, 6, 4);
        let xs = [
            WeylElement::qd(1).mul(&WeylElement::z2()),
            WeylElement::monomial_scaled(crate::qarith::LaurentU::u_pow(3), 1, -2, 2, -1),
            WeylElement::z1().add(&WeylElement::n2_quarters(-3)),
        ];
        let keep = lat.poly_window(6);
        for x in &xs {
            for y in &xs {
                let lhs = lat.op_weyl(&x.mul(y));
                let rhs = lat.op_weyl(x).mul(&lat.op_weyl(y));
                assert!(
                    Op::rel_dev(&lhs, &rhs, Some(&keep)) < 1e-12,
                    "bridge homomorphism failed"
                );
            }
        }
    }
}
