//! Prime/modulus parameters and arithmetic in `Z/p^s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus we accept; products of two residues must fit in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

/// Largest group order `p^n` we accept for a tower.
const MAX_GROUP_ORDER: u64 = 1 << 20;

/// Deterministic trial-division primality check. Every prime we meet here is
/// small (a characteristic or a group order base), so this is plenty.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `(p, s, n)`: residues live in `R_s = Z/p^s`, and the tower of cyclic groups
/// `G_i` has orders `p^i` for `0 <= i <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeParams {
    pub p: u64,
    pub s: u32,
    pub n: u32,
}

impl PrimeParams {
    pub fn new(p: u64, s: u32, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if s == 0 {
            return Err(Error::InvalidParams("s must be at least 1".into()));
        }
        match p.checked_pow(s) {
            Some(q) if q <= MAX_MODULUS => {}
            _ => return Err(Error::InvalidParams(format!("p^s = {p}^{s} is too large"))),
        }
        match p.checked_pow(n) {
            Some(q) if q <= MAX_GROUP_ORDER => {}
            _ => return Err(Error::InvalidParams(format!("p^n = {p}^{n} is too large"))),
        }
        Ok(PrimeParams { p, s, n })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.s)
    }

    pub fn ring(&self) -> Zmod {
        Zmod::new(self.p, self.s)
    }

    /// `p^i`, the order of `G_i`.
    pub fn group_order(&self, level: u32) -> usize {
        self.p.pow(level) as usize
    }

    /// Same `p` and `n` with a different modulus exponent.
    pub fn with_s(&self, s: u32) -> Result<Self> {
        PrimeParams::new(self.p, s, self.n)
    }
}

/// The residue ring `Z/p^s` with least nonnegative representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zmod {
    pub p: u64,
    pub s: u32,
    pub modulus: u64,
}

impl Zmod {
    pub fn new(p: u64, s: u32) -> Self {
        Zmod { p, s, modulus: p.pow(s) }
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.modulus
    }

    #[inline]
    pub fn reduce_signed(&self, a: i64) -> u64 {
        a.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let a = a % self.modulus;
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// p-adic valuation of a residue; zero has valuation `s`.
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.modulus;
        if a == 0 {
            return self.s;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit, via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.modulus;
        if !self.is_unit(a) {
            return None;
        }
        let (mut old_r, mut r) = (a as i128, self.modulus as i128);
        let (mut old_x, mut x) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_x, x) = (x, old_x - q * x);
        }
        debug_assert_eq!(old_r, 1);
        Some(old_x.rem_euclid(self.modulus as i128) as u64)
    }

    /// `p^e mod p^s`.
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.s {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// Split `a = p^v * u` with `u` a unit; returns `(v, u)` with `u` reduced
    /// mod `p^(s-v)`. Zero gives `(s, 0)`.
    pub fn split_unit(&self, a: u64) -> (u32, u64) {
        let a = a % self.modulus;
        let v = self.valuation(a);
        if v == self.s {
            return (v, 0);
        }
        (v, a / self.p.pow(v))
    }
}
