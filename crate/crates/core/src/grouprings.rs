//! Group rings `R_s[G_i]` of cyclic `p`-groups over `R_s = Z/p^s`.
//!
//! Elements are stored in the group basis `1, τ, …, τ^(p^i - 1)`; the
//! `(τ - 1)`-adic basis is available through [`GroupRingElement::to_tau_basis`]
//! and [`GroupRingElement::from_tau_basis`]. Both bases are related by a
//! unitriangular integer change of basis (Taylor shift by ±1), so neither
//! conversion ever divides.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{PrimeParams, Zmod};

/// The ring `R_s[G_i]` for one choice of `(p, s)` and level `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupRing {
    ring: Zmod,
    level: u32,
}

impl GroupRing {
    pub fn new(params: PrimeParams, level: u32) -> Result<Self> {
        if level > params.n {
            return Err(Error::InvalidParams(format!(
                "level {level} exceeds tower height n = {}",
                params.n
            )));
        }
        Ok(GroupRing { ring: params.ring(), level })
    }

    pub fn zmod(&self) -> Zmod {
        self.ring
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `p^i`, the number of group-basis coefficients.
    pub fn order(&self) -> usize {
        self.ring.p.pow(self.level) as usize
    }

    /// Number of ring elements `(p^s)^(p^i)`, if it fits in a `u128`.
    pub fn cardinality(&self) -> Option<u128> {
        (self.ring.modulus as u128).checked_pow(self.order() as u32)
    }

    pub fn zero(&self) -> GroupRingElement {
        GroupRingElement { ring: self.ring, level: self.level, coeffs: vec![0; self.order()] }
    }

    pub fn one(&self) -> GroupRingElement {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> GroupRingElement {
        let mut e = self.zero();
        e.coeffs[0] = self.ring.reduce(c);
        e
    }

    /// The group element `τ^k`.
    pub fn tau_pow(&self, k: u64) -> GroupRingElement {
        let mut e = self.zero();
        let idx = (k % self.order() as u64) as usize;
        e.coeffs[idx] = 1 % self.ring.modulus;
        e
    }

    pub fn tau(&self) -> GroupRingElement {
        self.tau_pow(1)
    }

    pub fn tau_minus_one(&self) -> GroupRingElement {
        let one = self.one();
        self.tau().sub_unchecked(&one)
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<GroupRingElement> {
        if coeffs.len() != self.order() {
            return Err(Error::Structural(format!(
                "expected {} coefficients, got {}",
                self.order(),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.ring.modulus) {
            return Err(Error::Structural(format!(
                "coefficient {c} is not reduced mod {}",
                self.ring.modulus
            )));
        }
        Ok(GroupRingElement { ring: self.ring, level: self.level, coeffs })
    }

    /// Element number `index` in the base-`p^s` enumeration of coefficient
    /// vectors (coefficient of `τ^0` is the least significant digit).
    pub fn element_from_index(&self, mut index: u128) -> GroupRingElement {
        let q = self.ring.modulus as u128;
        let coeffs = (0..self.order())
            .map(|_| {
                let d = (index % q) as u64;
                index /= q;
                d
            })
            .collect();
        GroupRingElement { ring: self.ring, level: self.level, coeffs }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupRingElement {
        let coeffs = (0..self.order()).map(|_| rng.gen_range(0..self.ring.modulus)).collect();
        GroupRingElement { ring: self.ring, level: self.level, coeffs }
    }

    /// `p^(s-1) (τ-1)^(p^i - 1)`, the element contained in every nonzero ideal.
    pub fn socle(&self) -> Result<GroupRingElement> {
        if self.level == 0 {
            return Err(Error::Domain("the socle element needs level i >= 1".into()));
        }
        let n = self.order();
        let mut tau = vec![0; n];
        tau[n - 1] = self.ring.p_pow(self.ring.s - 1);
        Ok(GroupRingElement::from_tau_basis_in(self.ring, self.level, tau))
    }
}

/// An element of `R_s[G_i]`, coefficients on the group basis, `coeffs[j]`
/// multiplying `τ^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    ring: Zmod,
    level: u32,
    coeffs: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// Result of the unit test: either the two-sided inverse or a refusal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitCheck {
    Unit(GroupRingElement),
    NotUnit,
}

/// The intermediate data of the socle construction for one nonzero `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleWitness {
    /// `e` such that `p^e b` lies in `p^(s-1) R_s G_i` and is nonzero.
    pub scale_exponent: u32,
    /// Least index `k` with a nonzero `(τ-1)`-coefficient in `p^e b`.
    pub leading_index: usize,
    /// The unit `c̃_k` (a residue mod `p`) with `c_k = p^(s-1) c̃_k`.
    pub leading_unit: u64,
    /// `γ` with `γ b = socle`.
    pub multiplier: GroupRingElement,
}

impl GroupRingElement {
    pub fn group_ring(&self) -> GroupRing {
        GroupRing { ring: self.ring, level: self.level }
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn s(&self) -> u32 {
        self.ring.s
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Sum of coefficients, the image under `τ ↦ 1`.
    pub fn augmentation(&self) -> u64 {
        self.coeffs.iter().fold(0, |acc, &c| self.ring.add(acc, c))
    }

    /// Minimum p-adic valuation over all coefficients (`s` for zero).
    pub fn valuation(&self) -> u32 {
        self.coeffs.iter().map(|&c| self.ring.valuation(c)).min().unwrap_or(self.ring.s)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.level != other.level {
            return Err(Error::Structural(format!(
                "group ring mismatch: (p={}, s={}, i={}) vs (p={}, s={}, i={})",
                self.ring.p, self.ring.s, self.level, other.ring.p, other.ring.s, other.level
            )));
        }
        Ok(())
    }

    pub fn ring_arith(&self, other: &Self, op: RingOp) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(match op {
            RingOp::Add => self.add_unchecked(other),
            RingOp::Sub => self.sub_unchecked(other),
            RingOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ring_arith(other, RingOp::Add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ring_arith(other, RingOp::Sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring_arith(other, RingOp::Mul)
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.ring.add(a, b)).collect();
        GroupRingElement { coeffs, ..*self }
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.ring.sub(a, b)).collect();
        GroupRingElement { coeffs, ..*self }
    }

    /// Cyclic convolution of length `p^i`.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let m = self.ring.modulus as u128;
        let mut acc = vec![0u128; n];
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let slot = &mut acc[(j + k) % n];
                *slot = (*slot + a as u128 * b as u128) % m;
            }
        }
        let coeffs = acc.into_iter().map(|c| c as u64).collect();
        GroupRingElement { coeffs, ..*self }
    }

    pub fn scale(&self, c: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(a, c)).collect();
        GroupRingElement { coeffs, ..*self }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.neg(a)).collect();
        GroupRingElement { coeffs, ..*self }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = self.group_ring().one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// Coefficients `c_j` with `self = Σ c_j (τ-1)^j`.
    pub fn to_tau_basis(&self) -> Vec<u64> {
        // substitute τ = x + 1: Taylor shift by +1
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                c[j] = self.ring.add(c[j], c[j + 1]);
            }
        }
        c
    }

    /// Inverse of [`to_tau_basis`](Self::to_tau_basis).
    pub fn from_tau_basis(group_ring: &GroupRing, tau_coeffs: &[u64]) -> Result<Self> {
        if tau_coeffs.len() != group_ring.order() {
            return Err(Error::Structural(format!(
                "expected {} (τ-1)-coefficients, got {}",
                group_ring.order(),
                tau_coeffs.len()
            )));
        }
        let reduced = tau_coeffs.iter().map(|&c| group_ring.ring.reduce(c)).collect();
        Ok(Self::from_tau_basis_in(group_ring.ring, group_ring.level, reduced))
    }

    fn from_tau_basis_in(ring: Zmod, level: u32, mut c: Vec<u64>) -> Self {
        // x = τ - 1: Taylor shift by -1
        let n = c.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                c[j] = ring.sub(c[j], c[j + 1]);
            }
        }
        GroupRingElement { ring, level, coeffs: c }
    }

    /// Constructive form of the ideal lemma: returns the full trace of the
    /// construction of `γ` with `γ·self = p^(s-1)(τ-1)^(p^i - 1)`.
    pub fn socle_witness(&self) -> Result<SocleWitness> {
        if self.level == 0 {
            return Err(Error::Domain("socle multiplier needs level i >= 1".into()));
        }
        if self.is_zero() {
            return Err(Error::Domain("socle multiplier of zero".into()));
        }
        let ring = self.ring;
        let gr = self.group_ring();
        let n = self.coeffs.len();

        let scale_exponent = ring.s - 1 - self.valuation();
        let scaled = self.scale(ring.p_pow(scale_exponent));
        let tau = scaled.to_tau_basis();
        let top = ring.p_pow(ring.s - 1);
        // every c_j is a multiple of p^(s-1); find the first nonzero one
        let (leading_index, c_k) = tau
            .iter()
            .copied()
            .enumerate()
            .find(|&(_, c)| c != 0)
            .ok_or_else(|| Error::Internal("scaled element vanished".into()))?;
        debug_assert_eq!(c_k % top, 0);
        let leading_unit = (c_k / top) % ring.p;
        let unit_inv = ring
            .inv(leading_unit)
            .ok_or_else(|| Error::Internal("leading coefficient is not a unit".into()))?;

        let shift = (n - 1 - leading_index) as u64;
        let multiplier = gr.tau_minus_one().pow(shift).scale(ring.mul(ring.p_pow(scale_exponent), unit_inv));
        Ok(SocleWitness { scale_exponent, leading_index, leading_unit, multiplier })
    }

    pub fn socle_multiplier(&self) -> Result<Self> {
        Ok(self.socle_witness()?.multiplier)
    }

    /// Units of the local ring `R_s G_i` are exactly the elements whose
    /// augmentation is a unit mod `p`. The inverse is found by Newton
    /// iteration starting from the inverse of the augmentation; the error term
    /// lies in the nilpotent maximal ideal, so the iteration terminates.
    pub fn unit_test_and_invert(&self) -> UnitCheck {
        let ring = self.ring;
        let aug = self.augmentation();
        let Some(aug_inv) = ring.inv(aug) else {
            return UnitCheck::NotUnit;
        };
        let gr = self.group_ring();
        let one = gr.one();
        let mut y = gr.scalar(aug_inv);
        // the error 1 - a·y squares each round; it is nilpotent of index at
        // most s·p^i, so log2 of that many rounds always suffices
        let bound = (ring.s as u64) * (self.coeffs.len() as u64);
        let rounds = 64 - bound.leading_zeros() + 1;
        for _ in 0..=rounds {
            let err = one.sub_unchecked(&self.mul_unchecked(&y));
            if err.is_zero() {
                return UnitCheck::Unit(y);
            }
            y = y.mul_unchecked(&one.add_unchecked(&err));
        }
        // unreachable for a genuine unit; reported rather than looping
        UnitCheck::NotUnit
    }
}

/// Wire format `{p, s, level, coeffs}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRingElementRecord {
    pub p: u64,
    pub s: u32,
    pub level: u32,
    pub coeffs: Vec<u64>,
}

impl From<&GroupRingElement> for GroupRingElementRecord {
    fn from(e: &GroupRingElement) -> Self {
        GroupRingElementRecord { p: e.ring.p, s: e.ring.s, level: e.level, coeffs: e.coeffs.clone() }
    }
}

impl TryFrom<GroupRingElementRecord> for GroupRingElement {
    type Error = Error;

    fn try_from(r: GroupRingElementRecord) -> Result<Self> {
        let params = PrimeParams::new(r.p, r.s, r.level)?;
        GroupRing::new(params, r.level)?.element(r.coeffs)
    }
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRingElementRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupRingElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = GroupRingElementRecord::deserialize(deserializer)?;
        GroupRingElement::try_from(rec).map_err(serde::de::Error::custom)
    }
}
