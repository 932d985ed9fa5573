//! Valuation argument for the norm equation
//! `x_j^(p^(n-j-1)) = Π_k x_k^(c_k p^(n-k)) · N_{A/A_j}(γ)` over
//! `A = D(x_0, …, x_n)`, `D = F_(ℓ^(p^n))`, `B = F_ℓ(x_0, …, x_n)`.
//!
//! `H_j` is generated by `σ^(p^j)` where `σ` is the Frobenius of `D/F_ℓ`,
//! so `|H_j| = p^(n-j)`. Galois elements act on coefficients only.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::artin_schreier::FpPoly;
use crate::error::{Error, Result};
use crate::params::{is_prime, PrimeParams};

/// Largest extension degree `p^n` we build `D` for.
const MAX_DEGREE: u64 = 64;

/// `D = F_ℓ[z]/(g)` with `deg g = p^n`, and the tower data `(p, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTower {
    p: u64,
    n: u32,
    ell: u64,
    modulus: FpPoly,
}

/// An element of `D`, reduced modulo the defining polynomial.
pub type DElem = FpPoly;

impl CoeffTower {
    /// Takes the first monic irreducible of degree `p^n` over `F_ℓ` in
    /// lexicographic order of coefficients.
    pub fn new(p: u64, n: u32, ell: u64) -> Result<Self> {
        PrimeParams::new(p, 1, n)?;
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if !is_prime(ell) {
            return Err(Error::InvalidParams(format!("ℓ = {ell} is not prime")));
        }
        let d = p.pow(n);
        if d > MAX_DEGREE {
            return Err(Error::InvalidParams(format!("p^n = {d} exceeds {MAX_DEGREE}")));
        }
        let d = d as usize;
        let mut idx: u128 = 0;
        let modulus = loop {
            let mut k = idx;
            let mut c: Vec<u64> = (0..d)
                .map(|_| {
                    let x = (k % ell as u128) as u64;
                    k /= ell as u128;
                    x
                })
                .collect();
            c.push(1);
            let g = FpPoly::new(ell, c);
            if g.is_irreducible() {
                break g;
            }
            idx += 1;
        };
        Ok(CoeffTower { p, n, ell, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    /// `[D : C] = p^n`.
    pub fn degree(&self) -> usize {
        self.p.pow(self.n) as usize
    }

    /// `|H_j| = p^(n-j)`.
    pub fn h_order(&self, j: u32) -> usize {
        self.p.pow(self.n - j) as usize
    }

    pub fn elem(&self, coeffs: &[u64]) -> DElem {
        FpPoly::new(self.ell, coeffs.to_vec()).rem(&self.modulus)
    }

    pub fn d_zero(&self) -> DElem {
        FpPoly::zero(self.ell)
    }

    pub fn d_one(&self) -> DElem {
        FpPoly::one(self.ell)
    }

    pub fn d_mul(&self, a: &DElem, b: &DElem) -> DElem {
        a.mul_mod(b, &self.modulus)
    }

    /// `σ^k(a) = a^(ℓ^k)`.
    pub fn frobenius(&self, a: &DElem, k: usize) -> DElem {
        (0..k % self.degree()).fold(a.clone(), |x, _| x.pow_mod(self.ell, &self.modulus))
    }

    /// Exponents `k` with `σ^k ∈ H_j`: multiples of `p^j` below `p^n`.
    pub fn h_elements(&self, j: u32) -> Vec<usize> {
        let step = self.p.pow(j) as usize;
        (0..self.h_order(j)).map(|t| t * step).collect()
    }

    /// `Π_{h ∈ H_j} h(a)`.
    pub fn d_norm(&self, a: &DElem, j: u32) -> DElem {
        self.h_elements(j).iter().fold(self.d_one(), |acc, &k| self.d_mul(&acc, &self.frobenius(a, k)))
    }

    pub fn random_elem<R: Rng>(&self, rng: &mut R) -> DElem {
        self.elem(&(0..self.degree()).map(|_| rng.gen_range(0..self.ell)).collect::<Vec<_>>())
    }

    pub fn random_unit<R: Rng>(&self, rng: &mut R) -> DElem {
        loop {
            let a = self.random_elem(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }
}

/// Sparse polynomial in `x_0, …, x_n` over `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, DElem>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: DElem) -> Self {
        let mut out = Self::zero(nvars);
        out.add_term(vec![0; nvars], c);
        out
    }

    /// `c · Π x_i^(e_i)`.
    pub fn monomial(c: DElem, exps: Vec<u32>) -> Self {
        let mut out = Self::zero(exps.len());
        out.add_term(exps, c);
        out
    }

    /// `x_k^e`.
    pub fn var_pow(tower: &CoeffTower, k: usize, e: u32) -> Self {
        let nvars = tower.n as usize + 1;
        let mut exps = vec![0; nvars];
        exps[k] = e;
        Self::monomial(tower.d_one(), exps)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, DElem)>) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent tuple has the wrong length");
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exps: Vec<u32>, c: DElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, DElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self, tower: &CoeffTower) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, tower.d_mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u64, tower: &CoeffTower) -> Self {
        (0..k).fold(Self::constant(self.nvars, tower.d_one()), |acc, _| acc.mul(self, tower))
    }

    /// `σ^k` applied to every coefficient.
    pub fn frobenius(&self, k: usize, tower: &CoeffTower) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), tower.frobenius(c, k))))
    }

    /// Largest power of `x_j` dividing a nonzero polynomial.
    pub fn vj(&self, j: usize) -> Result<u32> {
        self.terms
            .keys()
            .map(|e| e[j])
            .min()
            .ok_or_else(|| Error::Domain("valuation of the zero polynomial".into()))
    }

    /// Every coefficient is fixed by `σ^k`.
    pub fn is_fixed_by(&self, k: usize, tower: &CoeffTower) -> bool {
        self.terms.values().all(|c| tower.frobenius(c, k) == *c)
    }
}

/// `unit · Π num_i^(m_i) / Π den_l^(m_l)`, factors as supplied (their
/// primality is not certified).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredMultivar {
    pub unit: DElem,
    pub numerator: Vec<(MultiPoly, u32)>,
    pub denominator: Vec<(MultiPoly, u32)>,
}

impl FactoredMultivar {
    pub fn one(tower: &CoeffTower) -> Self {
        FactoredMultivar { unit: tower.d_one(), numerator: Vec::new(), denominator: Vec::new() }
    }

    fn check_nonzero(&self) -> Result<()> {
        if self.unit.is_zero() || self.numerator.iter().chain(&self.denominator).any(|(f, _)| f.is_zero()) {
            return Err(Error::Domain("zero factor in a multiplicative element".into()));
        }
        Ok(())
    }
}

/// `v_j` of a factored rational function.
pub fn vj(f: &FactoredMultivar, j: usize) -> Result<i64> {
    f.check_nonzero()?;
    let mut v = 0i64;
    for (g, m) in &f.numerator {
        v += g.vj(j)? as i64 * *m as i64;
    }
    for (g, m) in &f.denominator {
        v -= g.vj(j)? as i64 * *m as i64;
    }
    Ok(v)
}

/// `Π_{h ∈ H_j} h(g)` for a polynomial.
pub fn poly_norm(g: &MultiPoly, j: u32, tower: &CoeffTower) -> MultiPoly {
    tower
        .h_elements(j)
        .iter()
        .fold(MultiPoly::constant(g.nvars(), tower.d_one()), |acc, &k| acc.mul(&g.frobenius(k, tower), tower))
}

/// `N_{A/A_j}`, factor by factor.
pub fn galois_norm(f: &FactoredMultivar, j: u32, tower: &CoeffTower) -> Result<FactoredMultivar> {
    if j > tower.n {
        return Err(Error::InvalidParams(format!("j = {j} exceeds n = {}", tower.n)));
    }
    f.check_nonzero()?;
    let conj = |side: &[(MultiPoly, u32)]| side.iter().map(|(g, m)| (poly_norm(g, j, tower), *m)).collect();
    Ok(FactoredMultivar {
        unit: tower.d_norm(&f.unit, j),
        numerator: conj(&f.numerator),
        denominator: conj(&f.denominator),
    })
}

/// Which branch of the case analysis applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuationCase {
    /// `x_j` divides none of the denominator factors.
    NoDenominatorDivisible,
    /// `x_j` divides some denominator factor.
    SomeDenominatorDivisible,
}

impl ValuationCase {
    pub fn label(self) -> &'static str {
        match self {
            ValuationCase::NoDenominatorDivisible => "no_denominator_divisible",
            ValuationCase::SomeDenominatorDivisible => "some_denominator_divisible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub j: u32,
    pub case: ValuationCase,
    /// `v_j` of the left side after clearing denominators.
    pub lhs_valuation: i64,
    pub rhs_valuation: i64,
    /// `p^(n-j)`.
    pub modulus: i64,
    /// `v_j(lhs) ≡ p^(n-j-1)` and `v_j(rhs) ≡ 0` modulo `p^(n-j)`.
    pub congruence_holds: bool,
    pub mismatch: bool,
}

impl ViolationReport {
    /// The equation is ruled out by both the direct comparison and the
    /// congruence.
    pub fn impossible(&self) -> bool {
        self.mismatch && self.congruence_holds
    }
}

/// Clears denominators in
/// `x_j^(p^(n-j-1)) = Π_{k=1..n} x_k^(c_k p^(n-k)) · N_{A/A_j}(γ)`
/// and compares `v_j` of both sides. `c = [c_1, …, c_n]`; negative
/// exponents move to the other side.
pub fn check_equation_impossible(
    tower: &CoeffTower,
    j: u32,
    c: &[i64],
    gamma: &FactoredMultivar,
) -> Result<ViolationReport> {
    let n = tower.n;
    if j >= n {
        return Err(Error::InvalidParams(format!("need 0 <= j < n, got j = {j}, n = {n}")));
    }
    if c.len() != n as usize {
        return Err(Error::InvalidParams(format!("expected {n} exponents c_1..c_n, got {}", c.len())));
    }
    gamma.check_nonzero()?;
    let p = tower.p as i64;
    let ju = j as usize;
    let nvars = n as usize + 1;
    let normed = galois_norm(gamma, j, tower)?;

    let mut lhs: Vec<(MultiPoly, u32)> =
        vec![(MultiPoly::var_pow(tower, ju, p.pow(n - j - 1) as u32), 1)];
    lhs.extend(normed.denominator.iter().cloned());
    let mut rhs: Vec<(MultiPoly, u32)> = vec![(MultiPoly::constant(nvars, normed.unit.clone()), 1)];
    rhs.extend(normed.numerator.iter().cloned());
    for (k, &ck) in c.iter().enumerate() {
        let var = k + 1;
        let e = ck.unsigned_abs() * p.pow(n - var as u32) as u64;
        let e = u32::try_from(e).map_err(|_| Error::InvalidParams(format!("c_{var} is too large")))?;
        let mono = (MultiPoly::var_pow(tower, var, e), 1);
        if ck >= 0 {
            rhs.push(mono);
        } else {
            lhs.push(mono);
        }
    }
    let side_valuation = |side: &[(MultiPoly, u32)]| -> Result<i64> {
        side.iter().try_fold(0i64, |acc, (g, m)| Ok(acc + g.vj(ju)? as i64 * *m as i64))
    };
    let lhs_valuation = side_valuation(&lhs)?;
    let rhs_valuation = side_valuation(&rhs)?;
    let modulus = p.pow(n - j);
    let mut case = ValuationCase::NoDenominatorDivisible;
    for (q, _) in &gamma.denominator {
        if q.vj(ju)? > 0 {
            case = ValuationCase::SomeDenominatorDivisible;
        }
    }
    let congruence_holds =
        lhs_valuation.rem_euclid(modulus) == p.pow(n - j - 1) % modulus && rhs_valuation.rem_euclid(modulus) == 0;
    Ok(ViolationReport {
        j,
        case,
        lhs_valuation,
        rhs_valuation,
        modulus,
        congruence_holds,
        mismatch: lhs_valuation != rhs_valuation,
    })
}

/// Sampling bounds for [`fuzz_condition_star`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzBounds {
    /// Factors per side of `γ`.
    pub max_factors: usize,
    pub max_terms: usize,
    /// Per-variable degree bound for factor terms.
    pub max_degree: u32,
    pub max_multiplicity: u32,
    /// `|c_k| <= max_c`.
    pub max_c: i64,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        FuzzBounds { max_factors: 2, max_terms: 3, max_degree: 2, max_multiplicity: 2, max_c: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub p: u64,
    pub n: u32,
    pub ell: u64,
    pub trials: u64,
    pub seed: u64,
    /// Trials in which every `j` gave a mismatch.
    pub mismatches: u64,
    /// Per `(trial, j)` check.
    pub case_counts: BTreeMap<String, u64>,
    pub counterexamples: Vec<String>,
}

/// One random trial input: `c` and `γ` for a given `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialInput {
    pub trial: u64,
    pub j: u32,
    pub c: Vec<i64>,
    pub gamma: FactoredMultivar,
}

fn random_factor<R: Rng>(tower: &CoeffTower, bounds: &FuzzBounds, rng: &mut R) -> MultiPoly {
    let nvars = tower.n as usize + 1;
    loop {
        let terms = rng.gen_range(1..=bounds.max_terms);
        let mut f = MultiPoly::from_terms(
            nvars,
            (0..terms).map(|_| {
                let e = (0..nvars).map(|_| rng.gen_range(0..=bounds.max_degree)).collect();
                (e, tower.random_elem(rng))
            }),
        );
        // sometimes force a factor of some x_k so both cases get exercised
        if !f.is_zero() && rng.gen_bool(0.3) {
            let k = rng.gen_range(0..nvars);
            f = f.mul(&MultiPoly::var_pow(tower, k, 1), tower);
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Deterministic input for `(seed, trial, j)`; each trial draws from its
/// own ChaCha stream.
pub fn sample_trial(tower: &CoeffTower, bounds: &FuzzBounds, seed: u64, trial: u64, j: u32) -> TrialInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    // skip the draws for earlier j so each (trial, j) is independent of the order checked
    let mut out = None;
    for jj in 0..=j {
        let side = |rng: &mut ChaCha8Rng| -> Vec<(MultiPoly, u32)> {
            (0..rng.gen_range(0..=bounds.max_factors))
                .map(|_| (random_factor(tower, bounds, rng), rng.gen_range(1..=bounds.max_multiplicity)))
                .collect()
        };
        let unit = tower.random_unit(&mut rng);
        let numerator = side(&mut rng);
        let denominator = side(&mut rng);
        let c = (0..tower.n).map(|_| rng.gen_range(-bounds.max_c..=bounds.max_c)).collect();
        if jj == j {
            out = Some(TrialInput { trial, j, c, gamma: FactoredMultivar { unit, numerator, denominator } });
        }
    }
    out.expect("loop reaches j")
}

/// Samples `trials` random instances and checks every `j`. A trial with a
/// matching valuation aborts with [`Error::Counterexample`] carrying the
/// input as JSON.
pub fn fuzz_condition_star(tower: &CoeffTower, trials: u64, bounds: &FuzzBounds, seed: u64) -> Result<FuzzReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let mut case_counts: BTreeMap<String, u64> = [ValuationCase::NoDenominatorDivisible, ValuationCase::SomeDenominatorDivisible]
        .iter()
        .map(|c| (c.label().to_string(), 0))
        .collect();
    let mut mismatches = 0;
    for trial in 0..trials {
        for j in 0..tower.n {
            let input = sample_trial(tower, bounds, seed, trial, j);
            let report = check_equation_impossible(tower, j, &input.c, &input.gamma)?;
            *case_counts.get_mut(report.case.label()).expect("both cases present") += 1;
            if !report.impossible() {
                let repro = serde_json::to_string(&input).map_err(|e| Error::Internal(e.to_string()))?;
                return Err(Error::Counterexample(format!("seed {seed}, trial {trial}, j {j}: {repro}")));
            }
        }
        mismatches += 1;
    }
    Ok(FuzzReport {
        p: tower.p,
        n: tower.n,
        ell: tower.ell,
        trials,
        seed,
        mismatches,
        case_counts,
        counterexamples: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower() -> CoeffTower {
        CoeffTower::new(2, 2, 5).unwrap()
    }

    fn mono(t: &CoeffTower, exps: &[u32]) -> MultiPoly {
        MultiPoly::monomial(t.d_one(), exps.to_vec())
    }

    fn fm(t: &CoeffTower, num: Vec<MultiPoly>, den: Vec<MultiPoly>) -> FactoredMultivar {
        FactoredMultivar {
            unit: t.d_one(),
            numerator: num.into_iter().map(|f| (f, 1)).collect(),
            denominator: den.into_iter().map(|f| (f, 1)).collect(),
        }
    }

    #[test]
    fn field_construction() {
        let t = tower();
        assert_eq!(t.degree(), 4);
        assert!(t.modulus().is_irreducible());
        assert_eq!(t.modulus().degree(), Some(4));
        // σ has exact order 4: z is a generator of D over F_5 so σ^2(z) ≠ z
        let z = t.elem(&[0, 1]);
        assert_eq!(t.frobenius(&z, 4), z);
        assert_ne!(t.frobenius(&z, 2), z);
        assert!(CoeffTower::new(4, 1, 5).is_err());
        assert!(CoeffTower::new(2, 1, 6).is_err());
        assert!(CoeffTower::new(2, 0, 5).is_err());
    }

    #[test]
    fn vj_examples() {
        let t = tower();
        let f = fm(&t, vec![mono(&t, &[1, 2, 0])], vec![mono(&t, &[0, 0, 1])]);
        assert_eq!(vj(&f, 1).unwrap(), 2);
        assert_eq!(vj(&FactoredMultivar::one(&t), 0).unwrap(), 0);
        let g = mono(&t, &[1, 1, 0]).add(&mono(&t, &[0, 0, 1]));
        let h = fm(&t, vec![mono(&t, &[1, 0, 0]), g], vec![]);
        assert_eq!(vj(&h, 0).unwrap(), 1);
        let zero = fm(&t, vec![MultiPoly::zero(3)], vec![]);
        assert!(vj(&zero, 0).is_err());
    }

    #[test]
    fn norm_examples() {
        let t = tower();
        // B-element: coefficients in F_5
        let f = mono(&t, &[1, 0, 0]).add(&MultiPoly::monomial(t.elem(&[3]), vec![0, 2, 1]));
        for j in 0..2 {
            let nf = galois_norm(&fm(&t, vec![f.clone()], vec![]), j, &t).unwrap();
            assert_eq!(nf.numerator[0].0, f.pow(t.h_order(j) as u64, &t));
        }
        // constant: product of Frobenius conjugates, lands in the fixed field
        let d = t.elem(&[2, 1, 0, 3]);
        let nd = t.d_norm(&d, 0);
        let direct = (0..4).fold(t.d_one(), |acc, k| t.d_mul(&acc, &t.frobenius(&d, k)));
        assert_eq!(nd, direct);
        assert!(nd.degree().unwrap_or(0) == 0);
        let nd1 = t.d_norm(&d, 1);
        assert_eq!(t.frobenius(&nd1, 2), nd1);
        // x_0 + d x_1 over H_0
        let g = mono(&t, &[1, 0, 0]).add(&MultiPoly::monomial(d.clone(), vec![0, 1, 0]));
        let ng = poly_norm(&g, 0, &t);
        let direct = (0..4).fold(MultiPoly::constant(3, t.d_one()), |acc, k| {
            acc.mul(&mono(&t, &[1, 0, 0]).add(&MultiPoly::monomial(t.frobenius(&d, k), vec![0, 1, 0])), &t)
        });
        assert_eq!(ng, direct);
        assert!(ng.is_fixed_by(1, &t));
    }

    #[test]
    fn equation_examples() {
        let t = tower();
        let r = check_equation_impossible(&t, 0, &[0, 0], &FactoredMultivar::one(&t)).unwrap();
        assert_eq!((r.lhs_valuation, r.rhs_valuation), (2, 0));
        assert!(r.impossible());
        assert_eq!(r.case, ValuationCase::NoDenominatorDivisible);

        let g = fm(&t, vec![mono(&t, &[1, 0, 0]).add(&MultiPoly::monomial(t.elem(&[0, 1]), vec![2, 1, 0]))], vec![]);
        assert_eq!(vj(&g, 0).unwrap(), 1);
        let r = check_equation_impossible(&t, 0, &[1, -1], &g).unwrap();
        assert_eq!(r.rhs_valuation, 4);
        assert!(r.impossible());

        let q = fm(&t, vec![], vec![mono(&t, &[0, 1, 0]).add(&mono(&t, &[0, 2, 1]))]);
        for c1 in -2..=2 {
            let r = check_equation_impossible(&t, 1, &[c1, 1], &q).unwrap();
            assert_eq!(r.case, ValuationCase::SomeDenominatorDivisible);
            assert_eq!(r.lhs_valuation % 2, 1);
            assert_eq!(r.rhs_valuation % 2, 0);
            assert!(r.impossible());
        }
        assert!(check_equation_impossible(&t, 2, &[0, 0], &q).is_err());
        assert!(check_equation_impossible(&t, 0, &[0], &q).is_err());
    }

    #[test]
    fn valuation_of_norm_scales_by_h_order() {
        let t = tower();
        let bounds = FuzzBounds::default();
        for trial in 0..20 {
            let input = sample_trial(&t, &bounds, 11, trial, 0);
            for j in 0..2u32 {
                for k in 0..3usize {
                    let n = galois_norm(&input.gamma, j, &t).unwrap();
                    assert_eq!(vj(&n, k).unwrap(), t.h_order(j) as i64 * vj(&input.gamma, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn fuzz_is_deterministic_and_clean() {
        let t = tower();
        let a = fuzz_condition_star(&t, 30, &FuzzBounds::default(), 7).unwrap();
        let b = fuzz_condition_star(&t, 30, &FuzzBounds::default(), 7).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.mismatches, 30);
        assert!(a.counterexamples.is_empty());
        assert_eq!(a.case_counts.values().sum::<u64>(), 60);
        assert!(a.case_counts.values().all(|&v| v > 0));
        assert!(fuzz_condition_star(&t, 0, &FuzzBounds::default(), 7).is_err());
    }
}
