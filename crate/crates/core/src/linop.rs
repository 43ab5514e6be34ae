//! Minimal sparse complex operators and operator-valued matrices.
//!
//! Everything acts on one flat index space; tensor factors `H (x) V^(x)k`
//! with 2-dimensional auxiliary slots are handled by embedding
//! operator-valued 2x2 / 4x4 matrices into the product space. Dimensions in
//! this crate stay in the low thousands, so a row-sparse representation with
//! scratch-vector products is fast enough for every suite.

use num_complex::Complex64;

/// Row-sparse complex operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Op {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl Op {
    pub fn zeros(dim: usize) -> Self {
        Op {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut rows = Vec::with_capacity(dim);
        for i in 0..dim {
            rows.push(vec![(i, Complex64::new(1.0, 0.0))]);
        }
        Op { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut op = Op::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            if v.norm() > 0.0 {
                op.rows[i].push((i, v));
            }
        }
        op
    }

    /// Build from (row, col, value) triplets; duplicate entries accumulate.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut op = Op::zeros(dim);
        for (r, c, v) in triplets {
            op.add_entry(r, c, v);
        }
        op.compact();
        op
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Complex64) {
        self.rows[r].push((c, v));
    }

    fn compact(&mut self) {
        for row in &mut self.rows {
            if row.len() < 2 {
                if row.first().map(|(_, v)| v.norm() == 0.0).unwrap_or(false) {
                    row.clear();
                }
                continue;
            }
            row.sort_by_key(|&(c, _)| c);
            let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match out.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => out.push((c, v)),
                }
            }
            out.retain(|(_, v)| v.norm() > 0.0);
            *row = out;
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.rows[r]
            .iter()
            .find(|(cc, _)| *cc == c)
            .map(|(_, v)| *v)
            .unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    fn rows_iter(&self) -> impl Iterator<Item = (usize, &Vec<(usize, Complex64)>)> {
        self.rows.iter().enumerate()
    }

    /// Operator composition `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Op) -> Op {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = Op::zeros(self.dim);
        let mut scratch: Vec<Complex64> = vec![Complex64::default(); self.dim];
        let mut touched: Vec<usize> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &rhs.rows[k] {
                    if scratch[j] == Complex64::default() {
                        touched.push(j);
                    }
                    scratch[j] += a * b;
                }
            }
            let mut orow: Vec<(usize, Complex64)> = touched
                .iter()
                .map(|&j| (j, scratch[j]))
                .filter(|(_, v)| v.norm() > 0.0)
                .collect();
            orow.sort_by_key(|&(c, _)| c);
            out.rows[i] = orow;
            for &j in &touched {
                scratch[j] = Complex64::default();
            }
            touched.clear();
        }
        out
    }

    pub fn add(&self, rhs: &Op) -> Op {
        self.linear_comb(Complex64::new(1.0, 0.0), rhs)
    }

    pub fn sub(&self, rhs: &Op) -> Op {
        self.linear_comb(Complex64::new(-1.0, 0.0), rhs)
    }

    fn linear_comb(&self, w: Complex64, rhs: &Op) -> Op {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = Op::zeros(self.dim);
        for i in 0..self.dim {
            let mut row = self.rows[i].clone();
            row.extend(rhs.rows[i].iter().map(|&(c, v)| (c, w * v)));
            out.rows[i] = row;
        }
        out.compact();
        out
    }

    pub fn scale(&self, w: Complex64) -> Op {
        let mut out = self.clone();
        for row in &mut out.rows {
            for (_, v) in row.iter_mut() {
                *v *= w;
            }
        }
        out
    }

    /// Hermitian adjoint in the underlying orthonormal basis.
    pub fn conj_transpose(&self) -> Op {
        let mut out = Op::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.rows[j].push((i, v.conj()));
            }
        }
        out.compact();
        out
    }

    pub fn commutator(&self, rhs: &Op) -> Op {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Frobenius norm restricted to the columns enabled in `keep`
    /// (`None` = all columns).
    pub fn frob(&self, keep: Option<&[bool]>) -> f64 {
        let mut acc = 0.0;
        for row in &self.rows {
            for &(c, v) in row {
                if keep.map(|k| k[c]).unwrap_or(true) {
                    acc += v.norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Relative deviation between two operators on the kept columns:
    /// `|x - y|_F / max(1, |x|_F, |y|_F)`.
    pub fn rel_dev(x: &Op, y: &Op, keep: Option<&[bool]>) -> f64 {
        let num = x.sub(y).frob(keep);
        let den = 1.0f64.max(x.frob(keep)).max(y.frob(keep));
        num / den
    }

    /// Column `c` as (row, value) pairs.
    pub fn column(&self, c: usize) -> Vec<(usize, Complex64)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                if j == c {
                    out.push((i, v));
                }
            }
        }
        out
    }
}

/// Square matrix (side `n` = 2 or 4) of operators on a common space.
#[derive(Clone, Debug)]
pub struct OpMat {
    pub n: usize,
    pub dim: usize,
    entries: Vec<Op>,
}

impl OpMat {
    pub fn new(n: usize, entries: Vec<Op>) -> Self {
        assert_eq!(entries.len(), n * n);
        let dim = entries[0].dim();
        assert!(entries.iter().all(|e| e.dim() == dim));
        OpMat { n, dim, entries }
    }

    pub fn zeros(n: usize, dim: usize) -> Self {
        OpMat::new(n, vec![Op::zeros(dim); n * n])
    }

    pub fn identity(n: usize, dim: usize) -> Self {
        let mut m = OpMat::zeros(n, dim);
        for i in 0..n {
            *m.at_mut(i, i) = Op::identity(dim);
        }
        m
    }

    /// Numeric matrix with scalar entries, lifted to operator entries.
    pub fn from_scalar(n: usize, dim: usize, vals: &[Complex64]) -> Self {
        assert_eq!(vals.len(), n * n);
        let id = Op::identity(dim);
        let entries = vals
            .iter()
            .map(|&v| {
                if v == Complex64::default() {
                    Op::zeros(dim)
                } else {
                    id.scale(v)
                }
            })
            .collect();
        OpMat::new(n, entries)
    }

    pub fn at(&self, i: usize, j: usize) -> &Op {
        &self.entries[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Op {
        &mut self.entries[i * self.n + j]
    }

    pub fn mul(&self, rhs: &OpMat) -> OpMat {
        assert_eq!(self.n, rhs.n);
        let mut out = OpMat::zeros(self.n, self.dim);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Op::zeros(self.dim);
                for k in 0..self.n {
                    acc = acc.add(&self.at(i, k).mul(rhs.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &OpMat) -> OpMat {
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        OpMat::new(self.n, entries)
    }

    pub fn scale(&self, w: Complex64) -> OpMat {
        OpMat::new(self.n, self.entries.iter().map(|e| e.scale(w)).collect())
    }

    /// Formal transpose: swaps entry positions without touching the
    /// operator entries themselves.
    pub fn transpose(&self) -> OpMat {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                *out.at_mut(i, j) = self.at(j, i).clone();
            }
        }
        out
    }

    /// Entrywise Hermitian adjoint (no transposition of positions).
    pub fn conj_entries(&self) -> OpMat {
        OpMat::new(
            self.n,
            self.entries.iter().map(|e| e.conj_transpose()).collect(),
        )
    }

    pub fn rel_dev(x: &OpMat, y: &OpMat, keep: Option<&[bool]>) -> f64 {
        let mut num: f64 = 0.0;
        let mut nx: f64 = 0.0;
        let mut ny: f64 = 0.0;
        for (a, b) in x.entries.iter().zip(&y.entries) {
            num += a.sub(b).frob(keep).powi(2);
            nx += a.frob(keep).powi(2);
            ny += b.frob(keep).powi(2);
        }
        num.sqrt() / 1.0f64.max(nx.sqrt()).max(ny.sqrt())
    }
}

/// Embed a 2x2 operator matrix acting on auxiliary slot `slot` of
/// `H (x) V^(x)k` (slot 0 is the most significant bit of the auxiliary
/// index; total index = h * 2^k + bits).
pub fn embed2(m: &OpMat, slot: usize, k: usize) -> Op {
    assert_eq!(m.n, 2);
    assert!(slot < k);
    let big = m.dim << k;
    let bit = k - 1 - slot;
    let mut out = Op::zeros(big);
    for i in 0..2usize {
        for j in 0..2usize {
            let e = m.at(i, j);
            for (r, row) in e.rows_iter() {
                for &(c, v) in row {
                    for rest in 0..(1usize << (k - 1)) {
                        let others = insert_bit_hole(rest, bit);
                        let rowbits = others | (i << bit);
                        let colbits = others | (j << bit);
                        out.add_entry((r << k) | rowbits, (c << k) | colbits, v);
                    }
                }
            }
        }
    }
    out.compact();
    out
}

/// Embed a 4x4 operator matrix acting on auxiliary slots `(s1, s2)`.
/// The 4-index is `2*b_{s1} + b_{s2}`.
pub fn embed4(m: &OpMat, s1: usize, s2: usize, k: usize) -> Op {
    assert_eq!(m.n, 4);
    assert!(s1 < k && s2 < k && s1 != s2);
    let big = m.dim << k;
    let b1 = k - 1 - s1;
    let b2 = k - 1 - s2;
    let mut out = Op::zeros(big);
    for i in 0..4usize {
        for j in 0..4usize {
            let e = m.at(i, j);
            if e.nnz() == 0 {
                continue;
            }
            let (i1, i2) = (i >> 1, i & 1);
            let (j1, j2) = (j >> 1, j & 1);
            for (r, row) in e.rows_iter() {
                for &(c, v) in row {
                    for rest in 0..(1usize << (k - 2)) {
                        let others = insert_two_bit_holes(rest, b1, b2);
                        let rowbits = others | (i1 << b1) | (i2 << b2);
                        let colbits = others | (j1 << b1) | (j2 << b2);
                        out.add_entry((r << k) | rowbits, (c << k) | colbits, v);
                    }
                }
            }
        }
    }
    out.compact();
    out
}

fn insert_bit_hole(rest: usize, hole: usize) -> usize {
    let low = rest & ((1 << hole) - 1);
    let high = rest >> hole;
    (high << (hole + 1)) | low
}

fn insert_two_bit_holes(rest: usize, h1: usize, h2: usize) -> usize {
    let (lo, hi) = if h1 < h2 { (h1, h2) } else { (h2, h1) };
    insert_bit_hole(insert_bit_hole(rest, lo), hi)
}

/// Lift an operator on `H` to `H (x) V^(x)k` (identity on the aux slots).
pub fn lift_h(op: &Op, k: usize) -> Op {
    let mut out = Op::zeros(op.dim() << k);
    for (r, row) in op.rows_iter() {
        for &(c, v) in row {
            for bits in 0..(1usize << k) {
                out.add_entry((r << k) | bits, (c << k) | bits, v);
            }
        }
    }
    out.compact();
    out
}

/// Lift a column mask on `H` to the product space `H (x) V^(x)k`.
pub fn lift_mask(keep_h: &[bool], k: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(keep_h.len() << k);
    for &b in keep_h {
        for _ in 0..(1usize << k) {
            out.push(b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn mul_and_adjoint() {
        // raising operator on a 3-state ladder
        let a = Op::from_triplets(3, [(1, 0, c(1.0)), (2, 1, c(2.0))]);
        let at = a.conj_transpose();
        assert_eq!(at.entry(0, 1), c(1.0));
        assert_eq!(at.entry(1, 2), c(2.0));
        let prod = at.mul(&a);
        assert_eq!(prod.entry(0, 0), c(1.0));
        assert_eq!(prod.entry(1, 1), c(4.0));
        assert_eq!(prod.entry(2, 2), c(0.0));
    }

    #[test]
    fn rel_dev_windows() {
        let x = Op::from_diag(&[c(1.0), c(1.0), c(5.0)]);
        let y = Op::identity(3);
        let all = Op::rel_dev(&x, &y, None);
        assert!(all > 0.5);
        let keep = vec![true, true, false];
        assert_eq!(Op::rel_dev(&x, &y, Some(&keep)), 0.0);
    }

    #[test]
    fn embed_two_slots_commute() {
        // X on slot 0 and Z on slot 1 of dim_h = 2 commute.
        let x = OpMat::from_scalar(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let z = OpMat::from_scalar(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let x0 = embed2(&x, 0, 2);
        let z1 = embed2(&z, 1, 2);
        assert_eq!(x0.commutator(&z1).frob(None), 0.0);
        // and on the same slot they anticommute
        let z0 = embed2(&z, 0, 2);
        let anti = x0.mul(&z0).add(&z0.mul(&x0));
        assert_eq!(anti.frob(None), 0.0);
    }

    #[test]
    fn embed4_matches_embed2_product() {
        // kron(A, B) on slots (0,1) equals embed2(A,0)*embed2(B,1).
        let a_vals = [c(1.0), c(2.0), c(3.0), c(4.0)];
        let b_vals = [c(0.0), c(1.0), c(1.0), c(0.0)];
        let dim_h = 3;
        let a = OpMat::from_scalar(2, dim_h, &a_vals);
        let b = OpMat::from_scalar(2, dim_h, &b_vals);
        let mut kron = vec![c(0.0); 16];
        for i in 0..2 {
            for j in 0..2 {
                for ii in 0..2 {
                    for jj in 0..2 {
                        kron[(2 * i + ii) * 4 + (2 * j + jj)] =
                            a_vals[i * 2 + j] * b_vals[ii * 2 + jj];
                    }
                }
            }
        }
        let kron_m = OpMat::from_scalar(4, dim_h, &kron);
        let lhs = embed4(&kron_m, 0, 1, 3);
        let rhs = embed2(&a, 0, 3).mul(&embed2(&b, 1, 3));
        assert!(Op::rel_dev(&lhs, &rhs, None) < 1e-15);
    }

    #[test]
    fn lift_mask_expands() {
        let m = lift_mask(&[true, false], 2);
        assert_eq!(m, vec![true, true, true, true, false, false, false, false]);
    }
}
