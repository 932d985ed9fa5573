//! Dense linear algebra over the local ring `Z/p^s`.
//!
//! The workhorse is [`MatrixModPS::smith_form`]: since `Z/p^s` is a local
//! principal ideal ring, every matrix is equivalent to a diagonal of prime
//! powers. Pivoting takes the entry of least `p`-adic valuation, ties broken
//! by lowest `(row, col)`, which makes the transforms deterministic.
//!
//! Field-only routines (`rank_mod_p`, `nullspace_mod_p`) use plain Gaussian
//! elimination over `F_p` and do not go through the Smith form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{is_prime, Zmod};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixModPS {
    ring: Zmod,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

/// `U · A · V = diag(p^e_0, p^e_1, …)`; exponent `s` encodes a zero entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub exponents: Vec<u32>,
    pub u: MatrixModPS,
    pub v: MatrixModPS,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    NoSolution,
    Solved {
        particular: Vec<u64>,
        /// Generators of `{x : A x = 0}` as a `Z/p^s`-module.
        kernel: Vec<Vec<u64>>,
    },
}

impl MatrixModPS {
    pub fn new(p: u64, s: u32, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if !is_prime(p) || s == 0 {
            return Err(Error::InvalidParams(format!("bad modulus {p}^{s}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Structural(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let ring = Zmod::new(p, s);
        if let Some(e) = entries.iter().find(|&&e| e >= ring.modulus) {
            return Err(Error::Structural(format!("entry {e} not reduced mod {}", ring.modulus)));
        }
        Ok(MatrixModPS { ring, rows, cols, entries })
    }

    /// Builds a matrix from signed integers, reducing mod `p^s`.
    pub fn from_i64(ring: Zmod, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Structural("entry count does not match shape".into()));
        }
        let entries = entries.iter().map(|&e| ring.reduce_signed(e)).collect();
        Ok(MatrixModPS { ring, rows, cols, entries })
    }

    pub fn zeros(ring: Zmod, rows: usize, cols: usize) -> Self {
        MatrixModPS { ring, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(ring: Zmod, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % ring.modulus;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ring: Zmod, rows: usize, columns: &[Vec<u64>]) -> Result<Self> {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Structural(format!("column {j} has length {}, expected {rows}", col.len())));
            }
            for (i, &x) in col.iter().enumerate() {
                m.entries[i * m.cols + j] = ring.reduce(x);
            }
        }
        Ok(m)
    }

    pub fn ring(&self) -> Zmod {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = self.ring.reduce(v);
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Structural(format!(
                "modulus mismatch: {} vs {}",
                self.ring.modulus, other.ring.modulus
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let m = self.ring.modulus as u128;
        let mut out = Self::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] = ((out.entries[idx] as u128 + a * other.get(k, j) as u128) % m) as u64;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Structural(format!("vector length {} vs {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| self.ring.add(acc, self.ring.mul(self.get(i, j), v[j]))))
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.sub(a, b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Zmod, u64, u64) -> u64) -> Result<Self> {
        self.check_same_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Structural("shape mismatch".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(&self.ring, a, b)).collect();
        Ok(MatrixModPS { entries, ..*self })
    }

    pub fn pow(&self, mut exp: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Structural("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.ring, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Entrywise reduction to `Z/p^t`, `1 <= t <= s`.
    pub fn reduce_mod(&self, t: u32) -> Result<Self> {
        if t == 0 || t > self.ring.s {
            return Err(Error::InvalidParams(format!("cannot reduce mod p^{t} from p^{}", self.ring.s)));
        }
        let ring = Zmod::new(self.ring.p, t);
        let entries = self.entries.iter().map(|&e| ring.reduce(e)).collect();
        Ok(MatrixModPS { ring, rows: self.rows, cols: self.cols, entries })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= f * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, f: u64) {
        if f == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = self.ring.sub(self.get(dst, j), self.ring.mul(f, self.get(src, j)));
            self.entries[dst * self.cols + j] = v;
        }
    }

    /// col[dst] -= f * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, f: u64) {
        if f == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = self.ring.sub(self.get(i, dst), self.ring.mul(f, self.get(i, src)));
            self.entries[i * self.cols + dst] = v;
        }
    }

    fn scale_row(&mut self, r: usize, f: u64) {
        for j in 0..self.cols {
            let v = self.ring.mul(f, self.get(r, j));
            self.entries[r * self.cols + j] = v;
        }
    }

    pub fn smith_form(&self) -> SmithForm {
        let ring = self.ring;
        let (m, n) = (self.rows, self.cols);
        let mut d = self.clone();
        let mut u = Self::identity(ring, m);
        let mut v = Self::identity(ring, n);
        let mut exponents = Vec::with_capacity(m.min(n));

        for k in 0..m.min(n) {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in k..m {
                for j in k..n {
                    let val = ring.valuation(d.get(i, j));
                    if val < ring.s && best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
            let Some((e, pr, pc)) = best else {
                exponents.extend(std::iter::repeat_n(ring.s, m.min(n) - k));
                break;
            };
            d.swap_rows(k, pr);
            u.swap_rows(k, pr);
            d.swap_cols(k, pc);
            v.swap_cols(k, pc);

            let pe = ring.p_pow(e);
            let (_, unit) = ring.split_unit(d.get(k, k));
            let unit_inv = ring.inv(unit).expect("pivot cofactor is a unit");

            for i in k + 1..m {
                let x = d.get(i, k);
                if x != 0 {
                    let f = ring.mul(x / pe, unit_inv);
                    d.row_axpy(i, k, f);
                    u.row_axpy(i, k, f);
                }
            }
            for j in k + 1..n {
                let x = d.get(k, j);
                if x != 0 {
                    let f = ring.mul(x / pe, unit_inv);
                    d.col_axpy(j, k, f);
                    v.col_axpy(j, k, f);
                }
            }
            d.scale_row(k, unit_inv);
            u.scale_row(k, unit_inv);
            debug_assert_eq!(d.get(k, k), pe);
            exponents.push(e);
        }
        SmithForm { exponents, u, v }
    }

    /// `diag(p^e)` of the same shape, from Smith exponents.
    pub fn smith_diagonal(&self, exponents: &[u32]) -> Self {
        let mut d = Self::zeros(self.ring, self.rows, self.cols);
        for (k, &e) in exponents.iter().enumerate() {
            d.entries[k * self.cols + k] = self.ring.p_pow(e);
        }
        d
    }

    pub fn solve(&self, b: &[u64]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::Structural(format!("right-hand side has length {}, expected {}", b.len(), self.rows)));
        }
        let ring = self.ring;
        let SmithForm { exponents, u, v } = self.smith_form();
        let ub = u.mul_vec(b)?;
        let diag_len = exponents.len();
        let mut y = vec![0u64; self.cols];
        let mut kernel_y: Vec<Vec<u64>> = Vec::new();

        for (k, &e) in exponents.iter().enumerate() {
            let rhs = ub[k];
            if e == ring.s {
                if rhs != 0 {
                    return Ok(Solution::NoSolution);
                }
            } else {
                let pe = ring.p_pow(e);
                if rhs % pe != 0 {
                    return Ok(Solution::NoSolution);
                }
                y[k] = rhs / pe;
            }
            if e > 0 {
                let mut g = vec![0u64; self.cols];
                g[k] = ring.p_pow(ring.s - e);
                kernel_y.push(g);
            }
        }
        if ub[diag_len..].iter().any(|&x| x != 0) {
            return Ok(Solution::NoSolution);
        }
        for k in diag_len..self.cols {
            let mut g = vec![0u64; self.cols];
            g[k] = 1 % ring.modulus;
            kernel_y.push(g);
        }
        let particular = v.mul_vec(&y)?;
        let kernel = kernel_y.iter().map(|g| v.mul_vec(g)).collect::<Result<Vec<_>>>()?;
        Ok(Solution::Solved { particular, kernel })
    }

    /// True iff `x ↦ A x` is injective over `Z/p^s`.
    pub fn has_trivial_kernel(&self) -> bool {
        self.cols <= self.rows && self.smith_form().exponents.iter().all(|&e| e == 0)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank_mod_p() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let SmithForm { exponents, u, v } = self.smith_form();
        if exponents.iter().any(|&e| e != 0) {
            return None;
        }
        // U A V = I  =>  A^-1 = V U
        v.mul(&u).ok()
    }

    /// Row echelon data over `F_p` of the reduction mod `p`: returns the
    /// reduced row echelon form (entries mod `p`) and the pivot columns.
    pub fn rref_mod_p(&self) -> (Vec<Vec<u64>>, Vec<usize>) {
        let f = Zmod::new(self.ring.p, 1);
        let mut a: Vec<Vec<u64>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| f.reduce(self.get(i, j))).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| a[i][c] != 0) else {
                continue;
            };
            a.swap(r, pr);
            let inv = f.inv(a[r][c]).expect("nonzero in a field");
            for x in a[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            for i in 0..self.rows {
                if i != r && a[i][c] != 0 {
                    let factor = a[i][c];
                    for j in 0..self.cols {
                        a[i][j] = f.sub(a[i][j], f.mul(factor, a[r][j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank_mod_p(&self) -> usize {
        self.rref_mod_p().1.len()
    }

    /// Canonical basis of the kernel of the reduction mod `p`, one vector per
    /// free column in increasing order.
    pub fn nullspace_mod_p(&self) -> Vec<Vec<u64>> {
        let f = Zmod::new(self.ring.p, 1);
        let (a, pivots) = self.rref_mod_p();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[r][free]);
            }
            basis.push(v);
        }
        basis
    }
}

/// Wire format `{p, s, rows, cols, entries}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub p: u64,
    pub s: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u64>,
}

impl Serialize for MatrixModPS {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord { p: self.ring.p, s: self.ring.s, rows: self.rows, cols: self.cols, entries: self.entries.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixModPS {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRecord::deserialize(deserializer)?;
        MatrixModPS::new(r.p, r.s, r.rows, r.cols, r.entries).map_err(serde::de::Error::custom)
    }
}
