//! Dense univariate polynomials over a prime field `F_p` and their
//! factorization (square-free, distinct-degree, equal-degree splitting).

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{is_prime, Zmod};

/// Seed used by [`FpPoly::factor`] for equal-degree splitting.
pub const DEFAULT_FACTOR_SEED: u64 = 0x005e_eda5_0001;

/// Polynomial over `F_p`, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyRecord", into = "PolyRecord")]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

/// Wire format `{p, coeffs}` with coefficients ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl TryFrom<PolyRecord> for FpPoly {
    type Error = Error;

    fn try_from(r: PolyRecord) -> Result<Self> {
        if !is_prime(r.p) {
            return Err(Error::InvalidParams(format!("p = {} is not prime", r.p)));
        }
        if r.coeffs.iter().any(|&c| c >= r.p) {
            return Err(Error::Parse("polynomial coefficient not reduced mod p".into()));
        }
        if r.coeffs.last() == Some(&0) {
            return Err(Error::Parse("polynomial has a trailing zero coefficient".into()));
        }
        Ok(FpPoly { p: r.p, coeffs: r.coeffs })
    }
}

impl From<FpPoly> for PolyRecord {
    fn from(f: FpPoly) -> Self {
        PolyRecord { p: f.p, coeffs: f.coeffs }
    }
}

impl Ord for FpPoly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = FpPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        f.trim();
        f
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    /// The variable.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn monomial(p: u64, c: u64, deg: usize) -> Self {
        let mut v = vec![0; deg + 1];
        v[deg] = c;
        Self::new(p, v)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn field(&self) -> Zmod {
        Zmod::new(self.p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field();
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.p, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field();
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.p, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field();
        Self::new(self.p, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, acc.into_iter().map(|c| c as u64).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let f = self.field();
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = f.sub(rem[k + j], f.mul(c, d));
                }
            }
        }
        rem.truncate(dd);
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    /// Exact quotient, `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem(divisor);
        r.is_zero().then_some(q)
    }

    /// `(leading coefficient, monic associate)`.
    pub fn monic(&self) -> (u64, Self) {
        if self.is_zero() {
            return (0, self.clone());
        }
        let lead = self.leading();
        let inv = self.field().inv(lead).expect("nonzero leading coefficient");
        (lead, self.scale(inv))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic().1
    }

    pub fn derivative(&self) -> Self {
        let f = self.field();
        Self::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, i as u64 % self.p)).collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field();
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(self.p), |acc, &c| acc.mul(g).add(&Self::constant(self.p, c)))
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: u64) -> Self {
        let f = self.field();
        let mut a = self.coeffs.clone();
        let n = a.len();
        let c = c % self.p;
        if c == 0 {
            return self.clone();
        }
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                a[j] = f.add(a[j], f.mul(c, a[j + 1]));
            }
        }
        Self::new(self.p, a)
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, modulus);
            }
        }
        acc
    }

    /// `x^(p^k) mod modulus` by `k` Frobenius steps.
    fn frobenius_power_of_x(&self, k: usize) -> Self {
        let mut h = Self::x(self.p).rem(self);
        for _ in 0..k {
            h = h.pow_mod(self.p, self);
        }
        h
    }

    /// Rabin's test: `x^(p^n) = x mod f` and `gcd(f, x^(p^(n/q)) - x) = 1`
    /// for every prime `q | n`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic().1;
        let x = Self::x(self.p);
        if f.frobenius_power_of_x(n) != x.rem(&f) {
            return false;
        }
        prime_divisors(n).into_iter().all(|q| {
            let h = f.frobenius_power_of_x(n / q);
            f.gcd(&h.sub(&x)).is_one()
        })
    }

    /// Square-free decomposition of a monic polynomial: `(g, m)` pairs with
    /// `self = Π g^m`, each `g` square-free and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let p = self.p;
        let mut c = self.gcd(&self.derivative());
        let mut w = self.exact_div(&c).expect("gcd divides");
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.exact_div(&y).expect("gcd divides");
            if !fac.is_one() {
                out.push((fac, i));
            }
            c = c.exact_div(&y).expect("gcd divides");
            w = y;
            i += 1;
        }
        if !c.is_one() {
            // c is a p-th power: take the p-th root coefficientwise
            let root = Self::new(p, c.coeffs.iter().step_by(p as usize).copied().collect());
            for (g, m) in root.squarefree_decomposition() {
                out.push((g, m * p as u32));
            }
        }
        out
    }

    /// Splits a monic square-free polynomial into `(product of all degree-d
    /// irreducible factors, d)` pairs.
    pub fn distinct_degree_factorization(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        let mut g = self.clone();
        let x = Self::x(self.p);
        let mut h = x.rem(&g);
        let mut d = 1;
        while g.degree().unwrap_or(0) >= 2 * d {
            h = h.pow_mod(self.p, &g);
            let common = g.gcd(&h.sub(&x));
            if !common.is_one() {
                g = g.exact_div(&common).expect("gcd divides");
                h = h.rem(&g);
                out.push((common, d));
            }
            d += 1;
        }
        if g.degree().unwrap_or(0) > 0 {
            let deg = g.degree().unwrap();
            out.push((g, deg));
        }
        out
    }

    /// Equal-degree splitting (Cantor–Zassenhaus; trace map in
    /// characteristic 2) of a monic square-free product of degree-`d`
    /// irreducibles.
    pub fn equal_degree_factorization<R: Rng>(&self, d: usize, rng: &mut R) -> Vec<Self> {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Vec::new();
        }
        if n == d {
            return vec![self.clone()];
        }
        let p = self.p;
        loop {
            let a = Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // a + a^2 + a^4 + … + a^(2^(d-1))
                let mut term = a.rem(self);
                let mut sum = term.clone();
                for _ in 1..d {
                    term = term.mul_mod(&term, self);
                    sum = sum.add(&term);
                }
                sum
            } else {
                // a^((p^d - 1)/2) = (Π_{k<d} a^(p^k))^((p-1)/2)
                let mut conj = a.rem(self);
                let mut norm = conj.clone();
                for _ in 1..d {
                    conj = conj.pow_mod(p, self);
                    norm = norm.mul_mod(&conj, self);
                }
                norm.pow_mod((p - 1) / 2, self).sub(&Self::one(p))
            };
            let g = self.gcd(&b);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let other = self.exact_div(&g).expect("gcd divides");
                let mut out = g.equal_degree_factorization(d, rng);
                out.extend(other.equal_degree_factorization(d, rng));
                return out;
            }
        }
    }

    /// Full factorization with the default splitting seed.
    pub fn factor(&self) -> Result<Factorization> {
        self.factor_with_seed(DEFAULT_FACTOR_SEED)
    }

    /// `self = unit · Π g^m` with monic irreducible `g`, sorted by `g`.
    /// The result is checked: every factor passes the irreducibility test
    /// and the product reproduces `self`.
    pub fn factor_with_seed(&self, seed: u64) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::Domain("cannot factor the zero polynomial".into()));
        }
        let (unit, monic) = self.monic();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors: Vec<(Self, u32)> = Vec::new();
        for (sqf, mult) in monic.squarefree_decomposition() {
            for (block, d) in sqf.distinct_degree_factorization() {
                for g in block.equal_degree_factorization(d, &mut rng) {
                    factors.push((g, mult));
                }
            }
        }
        factors.sort();
        let out = Factorization { p: self.p, unit, factors };
        if out.expand() != *self {
            return Err(Error::Internal(format!("factorization of {self:?} does not multiply back")));
        }
        if let Some((g, _)) = out.factors.iter().find(|(g, _)| !g.is_irreducible()) {
            return Err(Error::Internal(format!("factor {g:?} failed the irreducibility test")));
        }
        Ok(out)
    }

    /// All monic irreducible polynomials of exactly degree `d`, sorted.
    pub fn monic_irreducibles(p: u64, d: usize) -> Vec<Self> {
        let count = p.pow(d as u32);
        (0..count)
            .map(|mut idx| {
                let mut c: Vec<u64> = (0..d)
                    .map(|_| {
                        let x = idx % p;
                        idx /= p;
                        x
                    })
                    .collect();
                c.push(1);
                Self::new(p, c)
            })
            .filter(|f| f.is_irreducible())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join(" + ")
    }

    /// Parses either an ascending coefficient list (`"1,1,0,1"`) or a sum of
    /// terms in one variable (`"t^3 + t + 1"`, `"2*t^2 + 1"`).
    pub fn parse(p: u64, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if text.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '-' || c.is_whitespace()) {
            let coeffs = text
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad coefficient {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::from_i64(p, &coeffs));
        }
        let mut acc = Self::zero(p);
        for term in text.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let (coef, mono) = match term.split_once('*') {
                Some((c, m)) => (c.to_string(), m.to_string()),
                None if term.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => ("1".into(), term.clone()),
                None => (term.clone(), String::new()),
            };
            let c: u64 = coef.parse().map_err(|_| Error::Parse(format!("bad coefficient in term {term:?}")))?;
            let deg = if mono.is_empty() {
                0
            } else {
                let mut chars = mono.chars();
                if !chars.next().is_some_and(|v| v.is_ascii_alphabetic()) {
                    return Err(Error::Parse(format!("bad monomial {mono:?}")));
                }
                let rest: String = chars.collect();
                match rest.strip_prefix('^') {
                    Some(e) => e.parse().map_err(|_| Error::Parse(format!("bad exponent in {mono:?}")))?,
                    None if rest.is_empty() => 1,
                    None => return Err(Error::Parse(format!("bad monomial {mono:?}"))),
                }
            };
            acc = acc.add(&Self::monomial(p, c % p, deg));
        }
        Ok(acc)
    }
}

/// `unit · Π g^m` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub p: u64,
    pub unit: u64,
    pub factors: Vec<(FpPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> FpPoly {
        self.factors.iter().fold(FpPoly::constant(self.p, self.unit), |acc, (g, m)| acc.mul(&g.pow(*m as u64)))
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
