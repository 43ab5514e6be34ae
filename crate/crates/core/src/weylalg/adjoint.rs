//! Star involution on the monomial algebra.
//!
//! The conjugation rule on generators is `(z_i)^* = z_i^-1 [z_i d_i]` and
//! `(z_i d_i)^* = z_i d_i`, hence `N_i^* = N_i`; coefficients are fixed
//! (they are real Laurent polynomials, and real evaluation points keep them
//! real). On a normal-ordered monomial with integer z-exponents the star is
//!
//! ```text
//!   (c z^a N^s)^* = c q^{-s a} z^{-a} [zd][zd-1]...[zd-a+1] N^s   (a >= 0)
//!   (c z^-b N^s)^* = c q^{s b} z^b ([zd+1]...[zd+b])^{-1} N^s     (b > 0)
//! ```
//!
//! Inverse brackets are diagonal, so sums of such terms can be put over a
//! common bracket denominator; the star of an element exists in the algebra
//! exactly when that denominator divides out, which is checked by exact
//! division. Half-integer z-exponents have no star in the monomial algebra.

use super::{ExpKey, WeylElement, WeylError};
use crate::qarith::LaurentU;
use std::collections::{BTreeMap, BTreeSet};

/// Antilinear product-reversing involution; errors when the image leaves
/// the normal-ordered monomial algebra.
pub fn adjoint(x: &WeylElement) -> Result<WeylElement, WeylError> {
    let mut parts: Vec<(WeylElement, BTreeSet<(usize, i64)>)> = Vec::new();
    for (key, c) in x.terms() {
        if key.z1 % 2 != 0 || key.z2 % 2 != 0 {
            return Err(WeylError::InadmissibleAdjoint);
        }
        let a1 = (key.z1 / 2) as i64;
        let a2 = (key.z2 / 2) as i64;
        // z^{-a} N^s with the reordering scalar q^{-s a}; brackets follow.
        let coeff = c.mul(&LaurentU::u_pow(-key.crossing_phase(key)));
        let mut elem = WeylElement::monomial_scaled(coeff, -key.z1, -key.z2, key.n1, key.n2);
        let mut dens: BTreeSet<(usize, i64)> = BTreeSet::new();
        for (var, a) in [(1usize, a1), (2usize, a2)] {
            if a >= 0 {
                for k in 0..a {
                    elem = elem.mul(&WeylElement::bracket(var, -k));
                }
            } else {
                for k in 1..=(-a) {
                    dens.insert((var, k));
                }
            }
        }
        parts.push((elem, dens));
    }

    let all: BTreeSet<(usize, i64)> = parts.iter().flat_map(|(_, d)| d.iter().copied()).collect();
    let mut total = WeylElement::zero();
    for (elem, dens) in parts {
        let mut e = elem;
        for &(var, k) in all.difference(&dens) {
            e = e.mul(&WeylElement::bracket(var, k));
        }
        total = total.add(&e);
    }
    for &(var, k) in &all {
        total = divide_by_bracket(&total, var, k)?;
    }
    Ok(total)
}

/// Exact right-division by the diagonal bracket `[z_var d_var + k]`.
///
/// Writes `T = S * (q^k N - q^-k N^-1)/omega` and recovers `S`, failing when
/// the division leaves a remainder.
fn divide_by_bracket(t: &WeylElement, var: usize, k: i64) -> Result<WeylElement, WeylError> {
    // T * omega = S * (q^k N - q^-k N^-1); the divisor carries no z-part, so
    // the division is per (z1, z2, other-N) group, a Laurent polynomial
    // division in the N_var exponent.
    let alpha_inv = LaurentU::u_pow(-8 * k);
    let mut groups: BTreeMap<(i32, i32, i32), BTreeMap<i32, LaurentU>> = BTreeMap::new();
    let omega = LaurentU::omega();
    for (key, c) in t.terms() {
        let (g, n) = if var == 1 {
            ((key.z1, key.z2, key.n2), key.n1)
        } else {
            ((key.z1, key.z2, key.n1), key.n2)
        };
        groups.entry(g).or_default().insert(n, c.mul(&omega));
    }

    let mut out = WeylElement::zero();
    for ((z1, z2, n_other), mut poly) in groups {
        let min0 = *poly.keys().next().expect("nonempty group");
        while let Some((&top, _)) = poly.last_key_value() {
            if top < min0 + 8 {
                return Err(WeylError::InadmissibleAdjoint);
            }
            let c = poly.remove(&top).unwrap();
            let s = c.mul(&alpha_inv);
            // quotient term at exponent top - 4
            let key = if var == 1 {
                ExpKey { z1, z2, n1: top - 4, n2: n_other }
            } else {
                ExpKey { z1, z2, n1: n_other, n2: top - 4 }
            };
            out = out.add(&WeylElement::monomial_scaled(s.clone(), key.z1, key.z2, key.n1, key.n2));
            // cancel the N^-1 leg of the divisor
            let carry = s.mul(&alpha_inv);
            let e = poly.entry(top - 8).or_insert_with(LaurentU::zero);
            *e = e.add(&carry);
            if e.is_zero() {
                poly.remove(&(top - 8));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::LaurentU;

    fn z1() -> WeylElement {
        WeylElement::z1()
    }

    #[test]
    fn star_of_z_is_q_derivative() {
        // (z1)^* = z1^-1 (N1 - N1^-1)/omega
        let star = adjoint(&z1()).unwrap();
        assert_eq!(star, WeylElement::qd(1));
    }

    #[test]
    fn star_fixes_number_operators() {
        let n2 = WeylElement::n2_quarters(4);
        assert_eq!(adjoint(&n2).unwrap(), n2);
        let mixed = WeylElement::monomial_scaled(LaurentU::u_pow(3), 0, 0, -2, 5);
        assert_eq!(adjoint(&mixed).unwrap(), mixed);
    }

    #[test]
    fn star_is_involutive_on_z() {
        let star = adjoint(&z1()).unwrap();
        let back = adjoint(&star).unwrap();
        assert_eq!(back, z1());
    }

    #[test]
    fn star_is_involutive_on_products() {
        let w = z1().mul(&z1()).mul(&WeylElement::n1_quarters(-4));
        let back = adjoint(&adjoint(&w).unwrap()).unwrap();
        assert_eq!(back, w);
        let v = WeylElement::z2().mul(&WeylElement::qd(2));
        let back = adjoint(&adjoint(&v).unwrap()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn star_reverses_products() {
        // On a grid of admissible words: (xy)^* = y^* x^*.
        let gens = [
            z1(),
            WeylElement::z2(),
            WeylElement::qd(1),
            WeylElement::qd(2),
            WeylElement::n1_quarters(4),
            WeylElement::n2_quarters(-4),
            WeylElement::n1_quarters(1),
        ];
        for x in &gens {
            for y in &gens {
                let lhs = adjoint(&x.mul(y)).unwrap();
                let rhs = adjoint(y).unwrap().mul(&adjoint(x).unwrap());
                assert_eq!(lhs, rhs, "x={x:?} y={y:?}");
            }
        }
    }

    #[test]
    fn half_powers_are_inadmissible() {
        let h = WeylElement::monomial_scaled(LaurentU::one(), 1, 0, 0, 0);
        assert_eq!(adjoint(&h), Err(WeylError::InadmissibleAdjoint));
    }

    #[test]
    fn lone_negative_power_is_inadmissible() {
        let zinv = z1().try_inverse().unwrap();
        assert_eq!(adjoint(&zinv), Err(WeylError::InadmissibleAdjoint));
    }
}
