//! The Artin–Schreier extension `E = F_p(θ)` over `F = F_p(t)`, `t = θ^p - θ`,
//! with `σ(θ) = θ + 1`.
//!
//! Elements of `E^×` and `F^×` are kept fully factored. Truncating at
//! F-side degree `dF` gives a finite `σ`-stable set of primes, and the
//! classes mod `p^s` of their products form a permutation module that
//! feeds straight into [`crate::galmodules`].

pub mod poly;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galmodules::{
    decompose_tower, verify_free_decomposition, DecompositionCertificate, GModulePresentation, Generator,
};
use crate::modp_linalg::MatrixModPS;
use crate::params::{PrimeParams, Zmod};

pub use poly::{Factorization, FpPoly, PolyRecord, DEFAULT_FACTOR_SEED};

/// Largest number of candidate polynomials `p^dF` per degree we enumerate.
const MAX_CANDIDATES: u64 = 1 << 16;

/// Which rational function field an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// `E = F_p(θ)`.
    E,
    /// `F = F_p(t)`.
    F,
}

impl Side {
    pub fn var(self) -> &'static str {
        match self {
            Side::E => "θ",
            Side::F => "t",
        }
    }
}

/// `unit · Π g^e` with monic irreducible `g` and nonzero `e`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FactoredRecord", into = "FactoredRecord")]
pub struct FactoredElement {
    p: u64,
    side: Side,
    unit: u64,
    factors: BTreeMap<FpPoly, i64>,
}

/// Wire format; factors as `[poly, exponent]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredRecord {
    pub p: u64,
    pub side: Side,
    pub unit: u64,
    pub factors: Vec<(FpPoly, i64)>,
}

impl TryFrom<FactoredRecord> for FactoredElement {
    type Error = Error;

    fn try_from(r: FactoredRecord) -> Result<Self> {
        if r.unit == 0 || r.unit >= r.p {
            return Err(Error::Parse(format!("unit {} is not a nonzero residue mod {}", r.unit, r.p)));
        }
        let mut factors = BTreeMap::new();
        for (g, e) in r.factors {
            if g.p() != r.p || !g.is_monic() || !g.is_irreducible() {
                return Err(Error::Parse(format!("factor {g:?} is not a monic irreducible over F_{}", r.p)));
            }
            if e == 0 || factors.insert(g, e).is_some() {
                return Err(Error::Parse("zero or repeated factor exponent".into()));
            }
        }
        Ok(FactoredElement { p: r.p, side: r.side, unit: r.unit, factors })
    }
}

impl From<FactoredElement> for FactoredRecord {
    fn from(a: FactoredElement) -> Self {
        FactoredRecord { p: a.p, side: a.side, unit: a.unit, factors: a.factors.into_iter().collect() }
    }
}

impl fmt::Debug for FactoredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FactoredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.unit != 1 || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (g, e) in &self.factors {
            let base = g.display(self.side.var());
            let base = if g.coeffs().iter().filter(|&&c| c != 0).count() > 1 { format!("({base})") } else { base };
            parts.push(if *e == 1 { base } else { format!("{base}^{e}") });
        }
        write!(f, "{}", parts.join("·"))
    }
}

impl FactoredElement {
    pub fn one(p: u64, side: Side) -> Self {
        FactoredElement { p, side, unit: 1, factors: BTreeMap::new() }
    }

    pub fn constant(p: u64, side: Side, c: u64) -> Result<Self> {
        let c = c % p;
        if c == 0 {
            return Err(Error::Domain("zero is not in the multiplicative group".into()));
        }
        Ok(FactoredElement { unit: c, ..Self::one(p, side) })
    }

    /// Factors a nonzero polynomial.
    pub fn from_poly(side: Side, f: &FpPoly) -> Result<Self> {
        Self::from_poly_with_seed(side, f, DEFAULT_FACTOR_SEED)
    }

    pub fn from_poly_with_seed(side: Side, f: &FpPoly, seed: u64) -> Result<Self> {
        let fac = f.factor_with_seed(seed)?;
        Ok(FactoredElement {
            p: f.p(),
            side,
            unit: fac.unit,
            factors: fac.factors.into_iter().map(|(g, m)| (g, m as i64)).collect(),
        })
    }

    /// A single monic irreducible prime, checked.
    pub fn prime(side: Side, g: &FpPoly) -> Result<Self> {
        if !g.is_monic() || !g.is_irreducible() {
            return Err(Error::Domain(format!("{} is not a monic irreducible", g.display(side.var()))));
        }
        let mut factors = BTreeMap::new();
        factors.insert(g.clone(), 1);
        Ok(FactoredElement { factors, ..Self::one(g.p(), side) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn factors(&self) -> &BTreeMap<FpPoly, i64> {
        &self.factors
    }

    pub fn exponent(&self, g: &FpPoly) -> i64 {
        self.factors.get(g).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// Degree of numerator minus degree of denominator.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(g, e)| g.degree().unwrap() as i64 * e).sum()
    }

    fn field(&self) -> Zmod {
        Zmod::new(self.p, 1)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.side != other.side {
            return Err(Error::Structural(format!(
                "cannot combine elements over ({}, {:?}) and ({}, {:?})",
                self.p, self.side, other.p, other.side
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut factors = self.factors.clone();
        for (g, e) in &other.factors {
            let slot = factors.entry(g.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                factors.remove(g);
            }
        }
        Ok(FactoredElement { factors, unit: self.field().mul(self.unit, other.unit), p: self.p,
            side: self.side, })
    }

    pub fn inv(&self) -> Self {
        FactoredElement {
            unit: self.field().inv(self.unit).expect("unit is nonzero"),
            factors: self.factors.iter().map(|(g, e)| (g.clone(), -e)).collect(),
            p: self.p,
            side: self.side,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let k = k.unsigned_abs();
        if k == 0 {
            return Self::one(self.p, self.side);
        }
        FactoredElement {
            unit: self.field().pow(base.unit, k),
            factors: base.factors.iter().map(|(g, e)| (g.clone(), e * k as i64)).collect(),
            p: self.p,
            side: self.side,
        }
    }

    /// `(numerator, denominator)` as expanded polynomials.
    pub fn to_fraction(&self) -> (FpPoly, FpPoly) {
        let mut num = FpPoly::constant(self.p, self.unit);
        let mut den = FpPoly::one(self.p);
        for (g, &e) in &self.factors {
            if e > 0 {
                num = num.mul(&g.pow(e as u64));
            } else {
                den = den.mul(&g.pow((-e) as u64));
            }
        }
        (num, den)
    }

    /// `θ ↦ θ + 1` on every prime. Shifting keeps monic irreducibles monic
    /// irreducible, so the unit is untouched.
    pub fn sigma_act(&self) -> Result<Self> {
        if self.side != Side::E {
            return Err(Error::Domain("σ acts on E-side elements only".into()));
        }
        Ok(FactoredElement {
            factors: self.factors.iter().map(|(g, &e)| (g.shift(1), e)).collect(),
            ..self.clone()
        })
    }

    pub fn sigma_pow(&self, j: u64) -> Result<Self> {
        let mut a = self.clone();
        for _ in 0..j % self.p {
            a = a.sigma_act()?;
        }
        Ok(a)
    }

    /// `Π_{j<p} σ^j(a)`, still on the E side.
    pub fn orbit_product(&self) -> Result<Self> {
        let mut acc = Self::one(self.p, Side::E);
        let mut a = self.clone();
        for _ in 0..self.p {
            acc = acc.mul(&a)?;
            a = a.sigma_act()?;
        }
        Ok(acc)
    }
}

/// `θ^p - θ` over `F_p`.
pub fn artin_schreier_poly(p: u64) -> FpPoly {
    FpPoly::monomial(p, 1, p as usize).sub(&FpPoly::x(p))
}

/// Writes a polynomial in `θ` as `Q(θ^p - θ)`, or `None` if it is not of
/// that form. Triangular: the top coefficient of `(θ^p - θ)^k` sits at
/// `θ^(pk)`.
pub fn descend(big: &FpPoly) -> Option<FpPoly> {
    let p = big.p();
    let Some(deg) = big.degree() else { return Some(FpPoly::zero(p)) };
    if deg % p as usize != 0 {
        return None;
    }
    let top = deg / p as usize;
    let w = artin_schreier_poly(p);
    let powers: Vec<FpPoly> = (0..=top).scan(FpPoly::one(p), |acc, _| {
        let cur = acc.clone();
        *acc = acc.mul(&w);
        Some(cur)
    }).collect();
    let mut rest = big.clone();
    let mut q = vec![0u64; top + 1];
    for k in (0..=top).rev() {
        let c = rest.coeff(p as usize * k);
        q[k] = c;
        rest = rest.sub(&powers[k].scale(c));
    }
    rest.is_zero().then(|| FpPoly::new(p, q))
}

/// `N_{E/F}`.
pub fn norm_e_to_f(a: &FactoredElement) -> Result<FactoredElement> {
    if a.side != Side::E {
        return Err(Error::Domain("the norm is defined on E-side elements".into()));
    }
    let p = a.p;
    // N(u) = u^p = u for u ∈ F_p^×
    let mut out = FactoredElement::constant(p, Side::F, a.unit)?;
    for (g, &e) in &a.factors {
        let conj = (0..p).fold(FpPoly::one(p), |acc, j| acc.mul(&g.shift(j)));
        let q = descend(&conj).ok_or_else(|| {
            Error::Internal(format!("norm of {} is not a polynomial in θ^p - θ", g.display("θ")))
        })?;
        out = out.mul(&FactoredElement::from_poly(Side::F, &q)?.pow(e))?;
    }
    Ok(out)
}

/// `ι_{F,E}`: substitute `t ↦ θ^p - θ` and refactor.
pub fn include_f_to_e(a: &FactoredElement) -> Result<FactoredElement> {
    if a.side != Side::F {
        return Err(Error::Domain("the inclusion is defined on F-side elements".into()));
    }
    let w = artin_schreier_poly(a.p);
    let mut out = FactoredElement::constant(a.p, Side::E, a.unit)?;
    for (r, &e) in &a.factors {
        out = out.mul(&FactoredElement::from_poly(Side::E, &r.compose(&w))?.pow(e))?;
    }
    Ok(out)
}

/// An F-prime `r` that splits: `r(θ^p - θ) = Π_j σ^j(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitOrbit {
    pub base: FpPoly,
    /// `g, σg, …, σ^(p-1) g` with `g` the least member.
    pub members: Vec<FpPoly>,
}

/// An F-prime `r` with `r(θ^p - θ)` irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertPrime {
    pub base: FpPoly,
    pub image: FpPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedInstance {
    pub params: PrimeParams,
    pub d_f: usize,
    pub seed: u64,
    pub split_orbits: Vec<SplitOrbit>,
    pub inert_primes: Vec<InertPrime>,
}

impl TruncatedInstance {
    /// All F-primes of degree at most `dF`, sorted.
    pub fn f_primes(&self) -> Vec<FpPoly> {
        let mut v: Vec<FpPoly> = self
            .split_orbits
            .iter()
            .map(|o| o.base.clone())
            .chain(self.inert_primes.iter().map(|i| i.base.clone()))
            .collect();
        v.sort();
        v
    }

    /// E-primes labelling the carrier coordinates: orbit members first
    /// (orbit by orbit), then inert images.
    pub fn e_primes(&self) -> Vec<FpPoly> {
        self.split_orbits
            .iter()
            .flat_map(|o| o.members.iter().cloned())
            .chain(self.inert_primes.iter().map(|i| i.image.clone()))
            .collect()
    }
}

pub fn enumerate_orbits(params: PrimeParams, d_f: usize) -> Result<TruncatedInstance> {
    enumerate_orbits_with_seed(params, d_f, DEFAULT_FACTOR_SEED)
}

/// Classifies every monic irreducible `r(t)` of degree `≤ dF` as split or
/// inert by factoring `r(θ^p - θ)`.
pub fn enumerate_orbits_with_seed(params: PrimeParams, d_f: usize, seed: u64) -> Result<TruncatedInstance> {
    let p = params.p;
    if params.n != 1 {
        return Err(Error::InvalidParams("the Artin–Schreier instance has n = 1".into()));
    }
    if d_f == 0 {
        return Err(Error::InvalidParams("dF must be at least 1".into()));
    }
    if p.checked_pow(d_f as u32).is_none_or(|c| c > MAX_CANDIDATES) {
        return Err(Error::InvalidParams(format!("p^dF = {p}^{d_f} is beyond the enumeration limit")));
    }
    let w = artin_schreier_poly(p);
    let mut split_orbits = Vec::new();
    let mut inert_primes = Vec::new();
    for d in 1..=d_f {
        for r in FpPoly::monic_irreducibles(p, d) {
            let image = r.compose(&w);
            let fac = image.factor_with_seed(seed)?;
            let degs: Vec<(usize, u32)> = fac.factors.iter().map(|(g, m)| (g.degree().unwrap(), *m)).collect();
            if degs == [(p as usize * d, 1)] {
                inert_primes.push(InertPrime { base: r, image });
            } else if degs.len() == p as usize && degs.iter().all(|&x| x == (d, 1)) {
                let g = fac.factors[0].0.clone();
                let members: Vec<FpPoly> = (0..p).map(|j| g.shift(j)).collect();
                let mut sorted = members.clone();
                sorted.sort();
                if sorted != fac.factors.iter().map(|(h, _)| h.clone()).collect::<Vec<_>>() {
                    return Err(Error::Internal(format!("factors of {} are not one σ-orbit", image.display("θ"))));
                }
                split_orbits.push(SplitOrbit { base: r, members });
            } else {
                return Err(Error::Internal(format!(
                    "{} has unexpected factorization pattern {degs:?} over E",
                    r.display("t")
                )));
            }
        }
    }
    Ok(TruncatedInstance { params, d_f, seed, split_orbits, inert_primes })
}

/// Outcome of the rank cross-check for a built module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub f_prime_count: usize,
    pub split_count: usize,
    pub inert_count: usize,
    /// `dim_{F_p}` of the span of norm exponent vectors mod `p`.
    pub norm_span_dim: usize,
    /// `#F-primes - norm_span_dim`.
    pub quotient_dim: usize,
    /// `ι(r)` equals the product of the carrier primes over `r`.
    pub inclusion_consistent: bool,
    /// Ranks returned by `decompose_tower` on the built tower.
    pub decomposed_ranks: Vec<usize>,
    pub certificate_verified: bool,
    pub passed: bool,
}

/// The truncated `E^× / (E^×)^{p^s}` as a tower of `G`-modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K1Module {
    pub coordinates: Vec<FpPoly>,
    /// Stages `s' = 1, …, s`.
    pub tower: Vec<GModulePresentation>,
    /// Certificate at the top stage.
    pub certificate: DecompositionCertificate,
    /// `[rank Y_0, rank Y_1]` from the certificate.
    pub ranks: Vec<usize>,
    pub cross_check: CrossCheck,
}

/// Builds the permutation module of the instance, its certificate, and the
/// rank cross-check.
pub fn build_k1_module(inst: &TruncatedInstance, s: u32) -> Result<K1Module> {
    let params = inst.params.with_s(s)?;
    let p = params.p;
    let coordinates = inst.e_primes();
    let index: BTreeMap<&FpPoly, usize> = coordinates.iter().enumerate().map(|(k, g)| (g, k)).collect();
    let dim = coordinates.len();

    // σ read off from the field action on each coordinate prime
    let ring = params.ring();
    let mut action = MatrixModPS::zeros(ring, dim, dim);
    for (j, g) in coordinates.iter().enumerate() {
        let image = FactoredElement::prime(Side::E, g)?.sigma_act()?;
        let mut entries = image.factors().iter();
        match (entries.next(), entries.next()) {
            (Some((h, 1)), None) if index.contains_key(h) => action.set(index[h], j, 1),
            _ => return Err(Error::Internal(format!("σ({}) leaves the carrier", g.display("θ")))),
        }
    }
    let top = GModulePresentation::new(params, action)?;
    let tower = top.tower()?;

    let mut generators = Vec::new();
    let mut offset = 0;
    for orbit in &inst.split_orbits {
        generators.push(Generator { coords: unit_vector(dim, offset), level: 1 });
        offset += orbit.members.len();
    }
    for _ in &inst.inert_primes {
        generators.push(Generator { coords: unit_vector(dim, offset), level: 0 });
        offset += 1;
    }
    let certificate = DecompositionCertificate { generators };
    let mut certificate_verified = true;
    let mut ranks = Vec::new();
    for stage in &tower {
        let report = verify_free_decomposition(stage, &certificate)?;
        certificate_verified &= report.verified;
        ranks = report.ranks;
    }

    // norms of all carrier primes as exponent vectors over the F-primes
    let f_primes = inst.f_primes();
    let f_index: BTreeMap<&FpPoly, usize> = f_primes.iter().enumerate().map(|(k, r)| (r, k)).collect();
    let field = Zmod::new(p, 1);
    let mut norm_columns = Vec::with_capacity(dim);
    for g in &coordinates {
        let nrm = norm_e_to_f(&FactoredElement::prime(Side::E, g)?)?;
        let mut col = vec![0u64; f_primes.len()];
        for (r, &e) in nrm.factors() {
            let k = *f_index
                .get(r)
                .ok_or_else(|| Error::Internal(format!("norm of {} leaves the truncation", g.display("θ"))))?;
            col[k] = field.reduce_signed(e);
        }
        norm_columns.push(col);
    }
    let norm_span_dim = if f_primes.is_empty() || dim == 0 {
        0
    } else {
        MatrixModPS::from_columns(field, f_primes.len(), &norm_columns)?.rank_mod_p()
    };
    let quotient_dim = f_primes.len() - norm_span_dim;

    let mut inclusion_consistent = true;
    for orbit in &inst.split_orbits {
        let lhs = include_f_to_e(&FactoredElement::prime(Side::F, &orbit.base)?)?;
        let rhs = orbit.members.iter().try_fold(FactoredElement::one(p, Side::E), |acc, g| {
            acc.mul(&FactoredElement::prime(Side::E, g)?)
        })?;
        inclusion_consistent &= lhs == rhs;
    }
    for inert in &inst.inert_primes {
        let lhs = include_f_to_e(&FactoredElement::prime(Side::F, &inert.base)?)?;
        inclusion_consistent &= lhs == FactoredElement::prime(Side::E, &inert.image)?;
    }

    let decomposed_ranks = decompose_tower(&tower)?.report.ranks;
    let split_count = inst.split_orbits.len();
    let inert_count = inst.inert_primes.len();
    let passed = certificate_verified
        && inclusion_consistent
        && ranks == [inert_count, split_count]
        && decomposed_ranks == ranks
        && norm_span_dim == split_count
        && quotient_dim == inert_count
        && f_primes.len() == split_count + inert_count;
    Ok(K1Module {
        coordinates,
        tower,
        certificate,
        ranks,
        cross_check: CrossCheck {
            f_prime_count: f_primes.len(),
            split_count,
            inert_count,
            norm_span_dim,
            quotient_dim,
            inclusion_consistent,
            decomposed_ranks,
            certificate_verified,
            passed,
        },
    })
}

fn unit_vector(dim: usize, k: usize) -> Vec<u64> {
    let mut v = vec![0; dim];
    v[k] = 1;
    v
}

/// Machine-readable summary of an instance run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub p: u64,
    pub s: u32,
    #[serde(rename = "dF")]
    pub d_f: usize,
    pub seed: u64,
    /// F-primes that split, with their orbits of E-primes.
    pub split_orbits: Vec<(String, Vec<String>)>,
    pub inert_primes: Vec<String>,
    /// `[rank Y_0, rank Y_1]`.
    pub ranks: Vec<usize>,
    pub cross_check_passed: bool,
    pub cross_check: CrossCheck,
}

impl InstanceReport {
    pub fn new(inst: &TruncatedInstance, module: &K1Module) -> Self {
        InstanceReport {
            p: inst.params.p,
            s: module.tower.last().map_or(0, |m| m.params().s),
            d_f: inst.d_f,
            seed: inst.seed,
            split_orbits: inst
                .split_orbits
                .iter()
                .map(|o| (o.base.display("t"), o.members.iter().map(|g| g.display("θ")).collect()))
                .collect(),
            inert_primes: inst.inert_primes.iter().map(|i| i.base.display("t")).collect(),
            ranks: module.ranks.clone(),
            cross_check_passed: module.cross_check.passed,
            cross_check: module.cross_check.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    fn e(p: u64, c: &[u64]) -> FactoredElement {
        FactoredElement::from_poly(Side::E, &poly(p, c)).unwrap()
    }

    fn f(p: u64, c: &[u64]) -> FactoredElement {
        FactoredElement::from_poly(Side::F, &poly(p, c)).unwrap()
    }

    fn instance(p: u64, d_f: usize) -> TruncatedInstance {
        enumerate_orbits(PrimeParams::new(p, 1, 1).unwrap(), d_f).unwrap()
    }

    fn names(v: impl IntoIterator<Item = FpPoly>) -> Vec<String> {
        v.into_iter().map(|g| g.display("t")).collect()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(e(2, &[0, 1]).sigma_act().unwrap(), e(2, &[1, 1]));
        assert_eq!(e(2, &[1, 1, 1]).sigma_act().unwrap(), e(2, &[1, 1, 1]));
        assert!(f(2, &[0, 1]).sigma_act().is_err());
        let a = e(3, &[2, 0, 1, 1]).div(&e(3, &[1, 1])).unwrap();
        assert_eq!(a.sigma_pow(3).unwrap(), a);
        assert_ne!(a.sigma_act().unwrap(), a);
    }

    #[test]
    fn norm_examples() {
        for p in [2u64, 3, 5] {
            // θ(θ+1)…(θ+p-1) = θ^p - θ = t
            assert_eq!(norm_e_to_f(&e(p, &[0, 1])).unwrap(), f(p, &[0, 1]));
        }
        // (θ^3+θ+1)(θ^3+θ^2+1) = θ^6+θ^5+θ^4+θ^3+θ^2+θ+1 = t^3 + t + 1 with t = θ^2+θ
        let prod = poly(2, &[1, 1, 0, 1]).mul(&poly(2, &[1, 0, 1, 1]));
        assert_eq!(prod, poly(2, &[1, 1, 1, 1, 1, 1, 1]));
        let t = artin_schreier_poly(2);
        assert_eq!(poly(2, &[1, 1, 0, 1]).compose(&t), prod);
        assert_eq!(norm_e_to_f(&e(2, &[1, 1, 0, 1])).unwrap(), f(2, &[1, 1, 0, 1]));
        assert!(norm_e_to_f(&f(2, &[0, 1])).is_err());
    }

    #[test]
    fn inclusion_examples() {
        assert_eq!(include_f_to_e(&f(2, &[0, 1])).unwrap(), e(2, &[0, 1]).mul(&e(2, &[1, 1])).unwrap());
        assert_eq!(include_f_to_e(&f(2, &[1, 1])).unwrap(), e(2, &[1, 1, 1]));
        assert_eq!(include_f_to_e(&f(2, &[1, 1])).unwrap().factors().len(), 1);
        let c = FactoredElement::constant(5, Side::F, 3).unwrap();
        assert_eq!(include_f_to_e(&c).unwrap(), FactoredElement::constant(5, Side::E, 3).unwrap());
        assert!(include_f_to_e(&e(2, &[0, 1])).is_err());
    }

    #[test]
    fn descend_rejects_non_invariant() {
        assert!(descend(&poly(2, &[0, 1])).is_none());
        assert!(descend(&poly(2, &[0, 0, 1])).is_none());
        assert_eq!(descend(&poly(3, &[0, 2, 0, 1])), Some(poly(3, &[0, 1])));
    }

    #[test]
    fn enumeration_examples() {
        let i1 = instance(2, 1);
        assert_eq!(names(i1.split_orbits.iter().map(|o| o.base.clone())), ["t"]);
        assert_eq!(names(i1.inert_primes.iter().map(|o| o.base.clone())), ["t + 1"]);

        let i2 = instance(2, 2);
        assert_eq!(names(i2.inert_primes.iter().map(|o| o.base.clone())), ["t + 1", "t^2 + t + 1"]);
        assert_eq!(i2.inert_primes[1].image, poly(2, &[1, 1, 0, 0, 1]));

        let i3 = instance(2, 3);
        assert_eq!(names(i3.split_orbits.iter().map(|o| o.base.clone())), ["t", "t^3 + t + 1"]);
        assert_eq!(i3.split_orbits[1].members, vec![poly(2, &[1, 1, 0, 1]), poly(2, &[1, 0, 1, 1])]);
        assert_eq!(names(i3.inert_primes.iter().map(|o| o.base.clone())), ["t + 1", "t^2 + t + 1", "t^3 + t^2 + 1"]);

        assert!(enumerate_orbits(PrimeParams::new(2, 1, 2).unwrap(), 1).is_err());
        assert!(enumerate_orbits(PrimeParams::new(2, 1, 1).unwrap(), 0).is_err());
    }

    #[test]
    fn classification_matches_trace_criterion() {
        // r irreducible of degree d with root α: r splits iff Tr(α) = -a_{d-1} = 0
        for p in [2u64, 3] {
            let inst = instance(p, 4);
            for o in &inst.split_orbits {
                let d = o.base.degree().unwrap();
                assert_eq!(o.base.coeff(d - 1), 0, "{:?}", o.base);
            }
            for i in &inst.inert_primes {
                let d = i.base.degree().unwrap();
                assert_ne!(i.base.coeff(d - 1), 0, "{:?}", i.base);
            }
            let total: usize = (1..=4).map(|d| FpPoly::monic_irreducibles(p, d).len()).sum();
            assert_eq!(inst.split_orbits.len() + inst.inert_primes.len(), total);
        }
    }

    #[test]
    fn module_examples() {
        let m = build_k1_module(&instance(2, 1), 1).unwrap();
        assert_eq!(m.ranks, vec![1, 1]);
        assert_eq!(m.cross_check.norm_span_dim, 1);
        assert_eq!(m.cross_check.quotient_dim, 1);
        assert!(m.cross_check.passed);

        let inst = instance(2, 3);
        for s in 1..=3 {
            let m = build_k1_module(&inst, s).unwrap();
            assert_eq!(m.ranks, vec![3, 2], "s = {s}");
            assert_eq!(m.tower.len(), s as usize);
            assert!(m.cross_check.passed, "{:?}", m.cross_check);
        }
    }

    #[test]
    fn module_for_odd_prime() {
        let inst = instance(3, 2);
        let m = build_k1_module(&inst, 2).unwrap();
        assert_eq!(m.ranks, vec![inst.inert_primes.len(), inst.split_orbits.len()]);
        assert!(m.cross_check.passed);
        assert_eq!(m.coordinates.len(), 3 * inst.split_orbits.len() + inst.inert_primes.len());
    }

    #[test]
    fn report_and_serde() {
        let inst = instance(2, 1);
        let m = build_k1_module(&inst, 2).unwrap();
        let r = InstanceReport::new(&inst, &m);
        assert_eq!(r.split_orbits, [("t".to_string(), vec!["θ".to_string(), "θ + 1".to_string()])]);
        assert_eq!(r.inert_primes, ["t + 1"]);
        assert!(serde_json::to_string(&r).unwrap().contains(r#""dF":1"#));
        let json = serde_json::to_string(&inst).unwrap();
        assert_eq!(serde_json::from_str::<TruncatedInstance>(&json).unwrap(), inst);

        let a = e(3, &[2, 0, 1, 1]).div(&e(3, &[1, 1])).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<FactoredElement>(&json).unwrap(), a);
        let bad = r#"{"p":2,"side":"E","unit":1,"factors":[[{"p":2,"coeffs":[0,0,1]},1]]}"#;
        assert!(serde_json::from_str::<FactoredElement>(bad).is_err());
        assert_eq!(format!("{a}"), "(θ + 1)^-1·(θ^3 + θ^2 + 2)");
    }

    fn arb_e_element() -> impl Strategy<Value = FactoredElement> {
        (prop_oneof![Just(2u64), Just(3), Just(5)], proptest::collection::vec(0u64..5, 1..7), proptest::collection::vec(0u64..5, 1..5))
            .prop_filter_map("nonzero", |(p, a, b)| {
                let a = FpPoly::new(p, a);
                let b = FpPoly::new(p, b);
                if a.is_zero() || b.is_zero() {
                    return None;
                }
                let na = FactoredElement::from_poly(Side::E, &a).ok()?;
                let nb = FactoredElement::from_poly(Side::E, &b).ok()?;
                na.div(&nb).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inclusion_of_norm_is_orbit_product(a in arb_e_element()) {
            let n = norm_e_to_f(&a).unwrap();
            prop_assert_eq!(include_f_to_e(&n).unwrap(), a.orbit_product().unwrap());
            prop_assert_eq!(norm_e_to_f(&a.sigma_act().unwrap()).unwrap(), n.clone());
            prop_assert_eq!(n.degree(), a.degree());
        }

        #[test]
        fn norm_is_multiplicative(a in arb_e_element(), b in arb_e_element()) {
            prop_assume!(a.p() == b.p());
            let lhs = norm_e_to_f(&a.mul(&b).unwrap()).unwrap();
            let rhs = norm_e_to_f(&a).unwrap().mul(&norm_e_to_f(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn norm_of_inclusion_is_pth_power(p in prop_oneof![Just(2u64), Just(3)], c in proptest::collection::vec(0u64..3, 1..5)) {
            let r = FpPoly::new(p, c);
            prop_assume!(!r.is_zero());
            let a = FactoredElement::from_poly(Side::F, &r).unwrap();
            prop_assert_eq!(norm_e_to_f(&include_f_to_e(&a).unwrap()).unwrap(), a.pow(p as i64));
        }
    }
}
