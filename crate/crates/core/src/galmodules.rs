//! Modules over `R_s[G]` for `G` cyclic of order `p^n`, presented as a free
//! `Z/p^s`-module with the matrix of a fixed generator `σ`.
//!
//! Decomposition follows the induction on `s`: the Jordan type of `σ - 1`
//! mod `p` seeds a certificate (block of size `p^i` ↦ generator at level
//! `i`), which is then lifted one power of `p` at a time and re-verified
//! from scratch at every stage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouprings::{GroupRing, GroupRingElement};
use crate::modp_linalg::{MatrixModPS, Solution};
use crate::params::{PrimeParams, Zmod};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModulePresentation {
    params: PrimeParams,
    action: MatrixModPS,
}

/// A claimed generator `b` of a free `R_s[G_i]` summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub coords: Vec<u64>,
    pub level: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub generators: Vec<Generator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    /// Generator `index` has a nonzero annihilator in `R_s[G_i]`.
    NotFree { index: usize },
    /// The generators are individually free but jointly dependent.
    NotIndependent,
    /// Images mod `p` do not span `M/pM`.
    NotSpanning,
    /// Generator `index` at level `i` is not fixed by `σ^(p^i)`.
    NotFixed { index: usize },
    /// Some mod-`p` Jordan block has a size that is not a power of `p`.
    NotTheoremShape,
    LiftFailed { stage: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub ranks: Vec<usize>,
    pub verified: bool,
    pub failure_reason: Option<FailureReason>,
}

/// Result of [`decompose_tower`]: the final report plus everything needed to
/// replay each stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDecomposition {
    pub report: DecompositionReport,
    pub stage_reports: Vec<DecompositionReport>,
    pub certificates: Vec<DecompositionCertificate>,
    pub jordan_type: Vec<usize>,
}

impl GModulePresentation {
    pub fn new(params: PrimeParams, action: MatrixModPS) -> Result<Self> {
        let ring = params.ring();
        if action.ring() != ring {
            return Err(Error::Structural(format!(
                "action is over Z/{} but parameters give Z/{}",
                action.ring().modulus,
                ring.modulus
            )));
        }
        if !action.is_square() {
            return Err(Error::Structural("action matrix must be square".into()));
        }
        if !action.is_invertible() {
            return Err(Error::Structural("action matrix is not invertible".into()));
        }
        let order = params.group_order(params.n) as u64;
        if action.pow(order)? != MatrixModPS::identity(ring, action.rows()) {
            return Err(Error::Structural(format!("action does not satisfy σ^{order} = 1")));
        }
        Ok(GModulePresentation { params, action })
    }

    /// `R_s[G]^copies` with `σ` permuting each block cyclically.
    pub fn regular_representation(params: PrimeParams, copies: usize) -> Result<Self> {
        let order = params.group_order(params.n);
        let rank = order * copies;
        let mut action = MatrixModPS::zeros(params.ring(), rank, rank);
        for c in 0..copies {
            for j in 0..order {
                action.set(c * order + (j + 1) % order, c * order + j, 1);
            }
        }
        Self::new(params, action)
    }

    /// `R_s^rank` with trivial action.
    pub fn trivial(params: PrimeParams, rank: usize) -> Result<Self> {
        Self::new(params, MatrixModPS::identity(params.ring(), rank))
    }

    /// Direct sum of two presentations over the same parameters.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.params != other.params {
            return Err(Error::Structural("direct sum of modules with different parameters".into()));
        }
        let (a, b) = (self.rank(), other.rank());
        let mut action = MatrixModPS::zeros(self.params.ring(), a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                action.set(i, j, self.action.get(i, j));
            }
        }
        for i in 0..b {
            for j in 0..b {
                action.set(a + i, a + j, other.action.get(i, j));
            }
        }
        Self::new(self.params, action)
    }

    pub fn params(&self) -> PrimeParams {
        self.params
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &MatrixModPS {
        &self.action
    }

    fn ring(&self) -> Zmod {
        self.params.ring()
    }

    pub fn reduce_mod(&self, s: u32) -> Result<Self> {
        if s == 0 || s > self.params.s {
            return Err(Error::InvalidParams(format!(
                "cannot reduce a module over Z/p^{} to Z/p^{s}",
                self.params.s
            )));
        }
        Ok(GModulePresentation { params: self.params.with_s(s)?, action: self.action.reduce_mod(s)? })
    }

    /// `[M mod p, M mod p^2, …, M]`.
    pub fn tower(&self) -> Result<Vec<Self>> {
        (1..=self.params.s).map(|s| self.reduce_mod(s)).collect()
    }

    /// `b, σb, …, σ^(count-1) b`.
    pub fn orbit(&self, b: &[u64], count: usize) -> Result<Vec<Vec<u64>>> {
        let mut out = Vec::with_capacity(count);
        let mut cur = b.to_vec();
        for _ in 0..count {
            let next = self.action.mul_vec(&cur)?;
            out.push(cur);
            cur = next;
        }
        Ok(out)
    }

    /// `γ · b` where `γ ∈ R_s[G_i]` acts through `τ ↦ σ`; meaningful when `b`
    /// is fixed by `σ^(p^i)`.
    pub fn act(&self, gamma: &GroupRingElement, b: &[u64]) -> Result<Vec<u64>> {
        if gamma.p() != self.params.p || gamma.s() != self.params.s {
            return Err(Error::Structural("group ring element over a different coefficient ring".into()));
        }
        let ring = self.ring();
        let orbit = self.orbit(b, gamma.coeffs().len())?;
        let mut out = vec![0u64; self.rank()];
        for (c, v) in gamma.coeffs().iter().zip(&orbit) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = ring.add(*o, ring.mul(*c, *x));
            }
        }
        Ok(out)
    }

    pub fn is_fixed_at_level(&self, b: &[u64], level: u32) -> Result<bool> {
        let power = self.action.pow(self.params.group_order(level) as u64)?;
        Ok(power.mul_vec(b)? == b)
    }

    /// Freeness of `R_s[G_i]·b` via the socle criterion: the annihilator of
    /// `b` is a nonzero ideal iff it contains `p^(s-1)(τ-1)^(p^i-1)`.
    pub fn generates_free_via_socle(&self, b: &[u64], level: u32) -> Result<bool> {
        if level == 0 {
            return Ok(b.iter().any(|&x| self.ring().valuation(x) == 0));
        }
        let socle = GroupRing::new(self.params, level)?.socle()?;
        Ok(self.act(&socle, b)?.iter().any(|&x| x != 0))
    }

    fn check_unipotent_mod_p(&self) -> Result<MatrixModPS> {
        if self.params.s != 1 {
            return Err(Error::InvalidParams(format!(
                "Jordan decomposition needs s = 1, got s = {}",
                self.params.s
            )));
        }
        self.action.sub(&MatrixModPS::identity(self.ring(), self.rank()))
    }

    /// Block sizes of the nilpotent operator `σ - 1`, largest first, read off
    /// from the rank sequence `d_k = rank (σ-1)^k`.
    pub fn jordan_decompose_mod_p(&self) -> Result<Vec<usize>> {
        let nil = self.check_unipotent_mod_p()?;
        Ok(partition_from_ranks(&nilpotent_rank_sequence(&nil)?))
    }

    /// Jordan chain heads `(w, length)` of `σ - 1` over `F_p`, picked greedily
    /// from the largest block size down, candidates taken in the canonical
    /// kernel-basis order.
    pub fn jordan_basis(&self) -> Result<Vec<(Vec<u64>, usize)>> {
        let nil = self.check_unipotent_mod_p()?;
        let ring = self.ring();
        let rank = self.rank();

        // kernels of N^k for k = 0..=height
        let mut kernels: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
        let mut power = MatrixModPS::identity(ring, rank);
        loop {
            power = power.mul(&nil)?;
            let k = power.nullspace_mod_p();
            let done = k.len() == rank;
            kernels.push(k);
            if done {
                break;
            }
            if kernels.len() > rank + 1 {
                return Err(Error::Internal("σ - 1 is not nilpotent mod p".into()));
            }
        }
        let height = kernels.len() - 1;

        let mut chains: Vec<(Vec<u64>, usize)> = Vec::new();
        for k in (1..=height).rev() {
            let mut span: Vec<Vec<u64>> = kernels[k - 1].clone();
            for (w, len) in &chains {
                let mut v = w.clone();
                for _ in 0..(len - k) {
                    v = nil.mul_vec(&v)?;
                }
                span.push(v);
            }
            let mut current = rank_of_columns(ring, rank, &span)?;
            for cand in &kernels[k] {
                span.push(cand.clone());
                let r = rank_of_columns(ring, rank, &span)?;
                if r > current {
                    current = r;
                    chains.push((cand.clone(), k));
                } else {
                    span.pop();
                }
            }
        }
        Ok(chains)
    }
}

fn rank_of_columns(ring: Zmod, rows: usize, cols: &[Vec<u64>]) -> Result<usize> {
    if cols.is_empty() {
        return Ok(0);
    }
    Ok(MatrixModPS::from_columns(ring, rows, cols)?.rank_mod_p())
}

/// `d_k = rank_p(N^k)` for `k = 0, 1, …` until it reaches zero.
pub fn nilpotent_rank_sequence(nil: &MatrixModPS) -> Result<Vec<usize>> {
    let n = nil.rows();
    let mut ranks = vec![n];
    let mut power = MatrixModPS::identity(nil.ring(), n);
    while *ranks.last().unwrap() > 0 {
        power = power.mul(nil)?;
        let r = power.rank_mod_p();
        if r == *ranks.last().unwrap() {
            return Err(Error::Domain("operator is not nilpotent mod p".into()));
        }
        ranks.push(r);
    }
    Ok(ranks)
}

/// Block sizes from `d_k`: there are `d_(k-1) - d_k` blocks of size `>= k`.
pub fn partition_from_ranks(ranks: &[usize]) -> Vec<usize> {
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exact));
    }
    sizes
}

fn log_p(p: u64, size: usize) -> Option<u32> {
    let mut x = size as u64;
    let mut e = 0;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        e += 1;
    }
    (x == 1).then_some(e)
}

fn tally_ranks(n: u32, cert: &DecompositionCertificate) -> Vec<usize> {
    let mut ranks = vec![0usize; n as usize + 1];
    for g in &cert.generators {
        if let Some(slot) = ranks.get_mut(g.level as usize) {
            *slot += 1;
        }
    }
    ranks
}

fn check_certificate_shape(m: &GModulePresentation, cert: &DecompositionCertificate) -> Result<()> {
    let ring = m.ring();
    for (idx, g) in cert.generators.iter().enumerate() {
        if g.level > m.params.n {
            return Err(Error::Structural(format!("generator {idx} has level {} > n = {}", g.level, m.params.n)));
        }
        if g.coords.len() != m.rank() {
            return Err(Error::Structural(format!(
                "generator {idx} has {} coordinates, module rank is {}",
                g.coords.len(),
                m.rank()
            )));
        }
        if g.coords.iter().any(|&c| c >= ring.modulus) {
            return Err(Error::Structural(format!("generator {idx} has unreduced coordinates")));
        }
    }
    Ok(())
}

/// Checks, in order: (a) each generator spans a free `R_s[G_i]`-module,
/// (b) the generators are jointly independent, (c) they span `M/pM`, and
/// (d) each level-`i` generator is fixed by `σ^(p^i)`, so its `R_s[G_i]`
/// structure is the one induced from `G`.
pub fn verify_free_decomposition(
    m: &GModulePresentation,
    cert: &DecompositionCertificate,
) -> Result<DecompositionReport> {
    check_certificate_shape(m, cert)?;
    let ring = m.ring();
    let ranks = tally_ranks(m.params.n, cert);
    let fail = |reason| Ok(DecompositionReport { ranks: ranks.clone(), verified: false, failure_reason: Some(reason) });

    let mut all_columns = Vec::new();
    let mut orbits = Vec::with_capacity(cert.generators.len());
    for g in &cert.generators {
        let orbit = m.orbit(&g.coords, m.params.group_order(g.level))?;
        orbits.push(orbit.clone());
        all_columns.extend(orbit);
    }

    // (a) annihilator of each generator is zero
    for (index, orbit) in orbits.iter().enumerate() {
        if !MatrixModPS::from_columns(ring, m.rank(), orbit)?.has_trivial_kernel() {
            return fail(FailureReason::NotFree { index });
        }
    }
    // (b) ⊕ R_s[G_i]^{r_i} → M is injective
    if !all_columns.is_empty() && !MatrixModPS::from_columns(ring, m.rank(), &all_columns)?.has_trivial_kernel() {
        return fail(FailureReason::NotIndependent);
    }
    // (c) Nakayama: spanning mod p suffices
    if rank_of_columns(ring, m.rank(), &all_columns)? != m.rank() {
        return fail(FailureReason::NotSpanning);
    }
    // (d)
    for (index, g) in cert.generators.iter().enumerate() {
        if !m.is_fixed_at_level(&g.coords, g.level)? {
            return fail(FailureReason::NotFixed { index });
        }
    }
    debug_assert_eq!(
        ranks.iter().enumerate().map(|(i, r)| r * m.params.group_order(i as u32)).sum::<usize>(),
        m.rank()
    );
    Ok(DecompositionReport { ranks, verified: true, failure_reason: None })
}

/// Lifts a certificate valid for `M mod p^(s-1)` to one for `M`.
///
/// Each generator keeps its coordinates as integer representatives; if that
/// representative is not fixed by `σ^(p^i)` over `Z/p^s`, the fixed
/// representative in the same fibre `b + p^(s-1)·δ` is chosen instead.
pub fn lift_basis(m: &GModulePresentation, prev: &DecompositionCertificate) -> Result<DecompositionCertificate> {
    let s = m.params.s;
    if s < 2 {
        return Err(Error::InvalidParams("lifting needs s >= 2".into()));
    }
    let below = m.reduce_mod(s - 1)?;
    let prev_report = verify_free_decomposition(&below, prev)?;
    if !prev_report.verified {
        return Err(Error::LiftFailed {
            stage: s,
            reason: format!("previous certificate does not verify: {:?}", prev_report.failure_reason),
        });
    }
    let ring = m.ring();
    let top = ring.p_pow(s - 1);
    let mut generators = Vec::with_capacity(prev.generators.len());
    for (idx, g) in prev.generators.iter().enumerate() {
        let mut coords = g.coords.clone();
        if !m.is_fixed_at_level(&coords, g.level)? {
            let order = m.params.group_order(g.level) as u64;
            let shifted = m.action.pow(order)?.sub(&MatrixModPS::identity(ring, m.rank()))?;
            let defect = shifted.mul_vec(&coords)?;
            let rhs: Vec<u64> = defect.iter().map(|&x| ring.neg(x)).collect();
            let mut system = shifted.clone();
            for r in 0..system.rows() {
                for c in 0..system.cols() {
                    let v = ring.mul(system.get(r, c), top);
                    system.set(r, c, v);
                }
            }
            match system.solve(&rhs)? {
                Solution::Solved { particular, .. } => {
                    for (x, d) in coords.iter_mut().zip(&particular) {
                        *x = ring.add(*x, ring.mul(top, *d));
                    }
                }
                Solution::NoSolution => {
                    return Err(Error::LiftFailed {
                        stage: s,
                        reason: format!("generator {idx} has no σ^{order}-fixed lift"),
                    })
                }
            }
        }
        generators.push(Generator { coords, level: g.level });
    }
    Ok(DecompositionCertificate { generators })
}

/// Runs the induction on `s` over a compatible tower `M_1, …, M_S`.
pub fn decompose_tower(tower: &[GModulePresentation]) -> Result<TowerDecomposition> {
    let first = tower.first().ok_or_else(|| Error::IncompatibleTower("empty tower".into()))?;
    for (k, m) in tower.iter().enumerate() {
        let expect = k as u32 + 1;
        if m.params.s != expect || m.params.p != first.params.p || m.params.n != first.params.n {
            return Err(Error::IncompatibleTower(format!(
                "stage {k} has (p, s, n) = ({}, {}, {}), expected s = {expect}",
                m.params.p, m.params.s, m.params.n
            )));
        }
        if k > 0 && m.reduce_mod(expect - 1)? != tower[k - 1] {
            return Err(Error::IncompatibleTower(format!("stage {expect} does not reduce to stage {}", expect - 1)));
        }
    }
    let n = first.params.n;
    let p = first.params.p;
    let jordan_type = first.jordan_decompose_mod_p()?;
    let failed = |reason: FailureReason, ranks: Vec<usize>, stage_reports, certificates, jordan_type| {
        Ok(TowerDecomposition {
            report: DecompositionReport { ranks, verified: false, failure_reason: Some(reason) },
            stage_reports,
            certificates,
            jordan_type,
        })
    };
    if jordan_type.iter().any(|&b| log_p(p, b).is_none()) {
        return failed(FailureReason::NotTheoremShape, vec![0; n as usize + 1], vec![], vec![], jordan_type);
    }

    let heads = first.jordan_basis()?;
    let mut sizes: Vec<usize> = heads.iter().map(|(_, len)| *len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    if sizes != jordan_type {
        return Err(Error::Internal(format!("Jordan basis sizes {sizes:?} disagree with rank sequence {jordan_type:?}")));
    }
    let seed = DecompositionCertificate {
        generators: heads
            .into_iter()
            .map(|(coords, len)| Generator { coords, level: log_p(p, len).expect("checked above") })
            .collect(),
    };

    let mut certificates = vec![seed];
    let mut stage_reports = vec![verify_free_decomposition(first, &certificates[0])?];
    if !stage_reports[0].verified {
        let report = stage_reports[0].clone();
        return Ok(TowerDecomposition { report, stage_reports, certificates, jordan_type });
    }
    for m in &tower[1..] {
        let lifted = match lift_basis(m, certificates.last().unwrap()) {
            Ok(c) => c,
            Err(Error::LiftFailed { stage, .. }) => {
                let ranks = stage_reports.last().unwrap().ranks.clone();
                return failed(FailureReason::LiftFailed { stage }, ranks, stage_reports, certificates, jordan_type);
            }
            Err(e) => return Err(e),
        };
        let report = verify_free_decomposition(m, &lifted)?;
        certificates.push(lifted);
        let ok = report.verified;
        stage_reports.push(report);
        if !ok {
            break;
        }
    }
    let report = stage_reports.last().unwrap().clone();
    Ok(TowerDecomposition { report, stage_reports, certificates, jordan_type })
}

/// True iff the stage-`s` certificate reduces, generator by generator and
/// with matching levels, to the stage-`(s-1)` certificate, for every `s`.
/// `certs[k]` is the certificate at `s = k + 1`.
pub fn tower_compatibility_check(p: u64, certs: &[DecompositionCertificate]) -> bool {
    certs.windows(2).enumerate().all(|(k, pair)| {
        let below = Zmod::new(p, k as u32 + 1);
        let (lo, hi) = (&pair[0], &pair[1]);
        lo.generators.len() == hi.generators.len()
            && lo.generators.iter().zip(&hi.generators).all(|(a, b)| {
                a.level == b.level
                    && a.coords.len() == b.coords.len()
                    && a.coords.iter().zip(&b.coords).all(|(&x, &y)| x < below.modulus && below.reduce(y) == x)
            })
    })
}

/// Module file format `{p, s, n, rank, action}` with `action` row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub p: u64,
    pub s: u32,
    pub n: u32,
    pub rank: usize,
    pub action: Vec<u64>,
}

impl From<&GModulePresentation> for ModuleRecord {
    fn from(m: &GModulePresentation) -> Self {
        ModuleRecord {
            p: m.params.p,
            s: m.params.s,
            n: m.params.n,
            rank: m.rank(),
            action: m.action.entries().to_vec(),
        }
    }
}

impl TryFrom<ModuleRecord> for GModulePresentation {
    type Error = Error;

    fn try_from(r: ModuleRecord) -> Result<Self> {
        let params = PrimeParams::new(r.p, r.s, r.n)?;
        let action = MatrixModPS::new(r.p, r.s, r.rank, r.rank, r.action)?;
        GModulePresentation::new(params, action)
    }
}

impl Serialize for GModulePresentation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GModulePresentation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = ModuleRecord::deserialize(deserializer)?;
        GModulePresentation::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, s: u32, n: u32) -> PrimeParams {
        PrimeParams::new(p, s, n).unwrap()
    }

    fn e(rank: usize, i: usize) -> Vec<u64> {
        let mut v = vec![0; rank];
        v[i] = 1;
        v
    }

    #[test]
    fn presentation_validation() {
        let pp = params(2, 2, 1);
        let not_order_two = MatrixModPS::new(2, 2, 2, 2, vec![1, 1, 0, 1]).unwrap();
        assert!(GModulePresentation::new(pp, not_order_two).is_err());
        let singular = MatrixModPS::new(2, 2, 1, 1, vec![2]).unwrap();
        assert!(GModulePresentation::new(pp, singular).is_err());
        let wrong_ring = MatrixModPS::identity(Zmod::new(2, 3), 2);
        assert!(GModulePresentation::new(pp, wrong_ring).is_err());
    }

    #[test]
    fn reduce_mod_examples() {
        let m = GModulePresentation::regular_representation(params(2, 2, 2), 1).unwrap();
        assert_eq!(m.reduce_mod(2).unwrap(), m);
        let m1 = m.reduce_mod(1).unwrap();
        assert_eq!(m1.action().entries(), m.action().entries());
        assert!(m.reduce_mod(3).is_err());
        assert!(m.reduce_mod(0).is_err());

        let twisted = GModulePresentation::new(
            params(3, 2, 1),
            MatrixModPS::new(3, 2, 2, 2, vec![1, 0, 3, 1]).unwrap(),
        )
        .unwrap();
        assert_eq!(twisted.reduce_mod(1).unwrap().action().entries(), &[1, 0, 0, 1]);
        assert_eq!(twisted.reduce_mod(1).unwrap(), twisted.reduce_mod(2).unwrap().reduce_mod(1).unwrap());
    }

    #[test]
    fn jordan_examples() {
        let triv = GModulePresentation::trivial(params(3, 1, 1), 3).unwrap();
        assert_eq!(triv.jordan_decompose_mod_p().unwrap(), vec![1, 1, 1]);

        let swap = GModulePresentation::new(params(2, 1, 1), MatrixModPS::new(2, 1, 2, 2, vec![0, 1, 1, 0]).unwrap())
            .unwrap();
        assert_eq!(swap.jordan_decompose_mod_p().unwrap(), vec![2]);

        let reg = GModulePresentation::regular_representation(params(2, 1, 2), 1).unwrap();
        assert_eq!(reg.jordan_decompose_mod_p().unwrap(), vec![4]);
        let heads = reg.jordan_basis().unwrap();
        assert_eq!(heads.len(), 1);
        assert_eq!(heads[0].1, 4);

        let not_s1 = GModulePresentation::trivial(params(2, 2, 1), 1).unwrap();
        assert!(not_s1.jordan_decompose_mod_p().is_err());
    }

    #[test]
    fn partition_from_rank_sequence() {
        // blocks 3, 1, 1: ranks of N^k are 5, 2, 1, 0
        assert_eq!(partition_from_ranks(&[5, 2, 1, 0]), vec![3, 1, 1]);
        assert_eq!(partition_from_ranks(&[2, 0]), vec![1, 1]);
        assert_eq!(partition_from_ranks(&[0]), Vec::<usize>::new());
    }

    #[test]
    fn verify_examples() {
        let pp = params(3, 2, 1);
        let reg = GModulePresentation::regular_representation(pp, 1).unwrap();
        let good = DecompositionCertificate { generators: vec![Generator { coords: e(3, 0), level: 1 }] };
        let rep = verify_free_decomposition(&reg, &good).unwrap();
        assert!(rep.verified);
        assert_eq!(rep.ranks, vec![0, 1]);

        let triv = GModulePresentation::trivial(pp, 1).unwrap();
        let c0 = DecompositionCertificate { generators: vec![Generator { coords: vec![1], level: 0 }] };
        assert_eq!(verify_free_decomposition(&triv, &c0).unwrap().ranks, vec![1, 0]);

        let low = DecompositionCertificate { generators: vec![Generator { coords: e(3, 0), level: 0 }] };
        assert_eq!(
            verify_free_decomposition(&reg, &low).unwrap().failure_reason,
            Some(FailureReason::NotSpanning)
        );

        let non_free = DecompositionCertificate { generators: vec![Generator { coords: vec![3, 0, 0], level: 1 }] };
        assert_eq!(
            verify_free_decomposition(&reg, &non_free).unwrap().failure_reason,
            Some(FailureReason::NotFree { index: 0 })
        );

        let dependent = DecompositionCertificate {
            generators: vec![Generator { coords: e(3, 0), level: 1 }, Generator { coords: vec![1, 1, 1], level: 0 }],
        };
        assert_eq!(
            verify_free_decomposition(&reg, &dependent).unwrap().failure_reason,
            Some(FailureReason::NotIndependent)
        );

        // three level-0 generators span and are independent, but σ moves them
        let unfixed = DecompositionCertificate {
            generators: (0..3).map(|i| Generator { coords: e(3, i), level: 0 }).collect(),
        };
        assert_eq!(
            verify_free_decomposition(&reg, &unfixed).unwrap().failure_reason,
            Some(FailureReason::NotFixed { index: 0 })
        );

        let bad_shape = DecompositionCertificate { generators: vec![Generator { coords: vec![1], level: 1 }] };
        assert!(verify_free_decomposition(&reg, &bad_shape).is_err());
    }

    #[test]
    fn socle_criterion_agrees_with_annihilator_check() {
        let pp = params(2, 3, 2);
        let m = GModulePresentation::regular_representation(pp, 1)
            .unwrap()
            .direct_sum(&GModulePresentation::trivial(pp, 1).unwrap())
            .unwrap();
        let ring = pp.ring();
        let candidates: Vec<(Vec<u64>, u32)> = vec![
            (vec![1, 0, 0, 0, 0], 2),
            (vec![2, 0, 0, 0, 0], 2),
            (vec![1, 1, 1, 1, 0], 0),
            (vec![1, 7, 1, 7, 0], 1),
            (vec![0, 0, 0, 0, 4], 0),
            (vec![0, 0, 0, 0, 3], 0),
            (vec![1, 0, 1, 0, 0], 1),
        ];
        for (b, level) in candidates {
            let orbit = m.orbit(&b, pp.group_order(level)).unwrap();
            let free = MatrixModPS::from_columns(ring, m.rank(), &orbit).unwrap().has_trivial_kernel();
            assert_eq!(m.generates_free_via_socle(&b, level).unwrap(), free, "b = {b:?} at level {level}");
        }
    }

    #[test]
    fn lift_examples() {
        let pp = params(2, 3, 1);
        let reg = GModulePresentation::regular_representation(pp, 1).unwrap();
        let prev = DecompositionCertificate { generators: vec![Generator { coords: e(2, 0), level: 1 }] };
        let lifted = lift_basis(&reg.reduce_mod(2).unwrap(), &prev).unwrap();
        assert_eq!(lifted, prev);

        let triv = GModulePresentation::trivial(pp, 1).unwrap();
        let c = DecompositionCertificate { generators: vec![Generator { coords: vec![1], level: 0 }] };
        assert_eq!(lift_basis(&triv, &c).unwrap(), c);

        let broken = DecompositionCertificate { generators: vec![Generator { coords: vec![2, 0], level: 1 }] };
        assert!(matches!(lift_basis(&reg, &broken), Err(Error::LiftFailed { stage: 3, .. })));
    }

    #[test]
    fn lift_without_fixed_representative_is_reported() {
        // σ = [[3, 2], [0, 1]] has order 2 mod 4 and is the identity mod 2,
        // but no lift of e_0 is σ-fixed mod 4: σ(1 + 2a, 2c) = (3 + 2a, 2c)
        let pp = params(2, 2, 1);
        let m = GModulePresentation::new(pp, MatrixModPS::new(2, 2, 2, 2, vec![3, 2, 0, 1]).unwrap()).unwrap();
        let prev = DecompositionCertificate {
            generators: vec![Generator { coords: vec![1, 0], level: 0 }, Generator { coords: vec![0, 1], level: 0 }],
        };
        assert!(verify_free_decomposition(&m.reduce_mod(1).unwrap(), &prev).unwrap().verified);
        assert!(matches!(lift_basis(&m, &prev), Err(Error::LiftFailed { stage: 2, .. })));

        let out = decompose_tower(&m.tower().unwrap()).unwrap();
        assert!(!out.report.verified);
        assert_eq!(out.report.failure_reason, Some(FailureReason::LiftFailed { stage: 2 }));
    }

    #[test]
    fn lift_moves_to_fixed_representative() {
        // trivial ⊕ regular(C_2) written in a basis where the fixed vector is (1, 3, 0)
        let pp = params(2, 2, 1);
        let base = GModulePresentation::trivial(pp, 1)
            .unwrap()
            .direct_sum(&GModulePresentation::regular_representation(pp, 1).unwrap())
            .unwrap();
        let change = MatrixModPS::new(2, 2, 3, 3, vec![1, 0, 0, 2, 1, 0, 0, 0, 1]).unwrap();
        let action = change.inverse().unwrap().mul(base.action()).unwrap().mul(&change).unwrap();
        let m = GModulePresentation::new(pp, action).unwrap();
        let fixed = change.inverse().unwrap().mul_vec(&[1, 0, 0]).unwrap();
        assert_eq!(fixed, vec![1, 2, 0]);
        let naive = DecompositionCertificate {
            generators: vec![Generator { coords: vec![1, 0, 0], level: 0 }, Generator { coords: vec![0, 1, 0], level: 1 }],
        };
        assert!(verify_free_decomposition(&m.reduce_mod(1).unwrap(), &naive).unwrap().verified);
        assert!(!m.is_fixed_at_level(&[1, 0, 0], 0).unwrap());
        let lifted = lift_basis(&m, &naive).unwrap();
        assert!(m.is_fixed_at_level(&lifted.generators[0].coords, 0).unwrap());
        assert!(verify_free_decomposition(&m, &lifted).unwrap().verified);
        assert!(tower_compatibility_check(2, &[naive, lifted]));
    }

    #[test]
    fn tower_examples() {
        let pp = params(3, 3, 1);
        let reg = GModulePresentation::regular_representation(pp, 2).unwrap();
        let out = decompose_tower(&reg.tower().unwrap()).unwrap();
        assert!(out.report.verified);
        assert_eq!(out.report.ranks, vec![0, 2]);
        assert!(out.stage_reports.iter().all(|r| r.ranks == vec![0, 2]));
        assert!(tower_compatibility_check(3, &out.certificates));

        let bad = GModulePresentation::new(params(3, 1, 1), MatrixModPS::new(3, 1, 2, 2, vec![1, 0, 1, 1]).unwrap())
            .unwrap();
        let out = decompose_tower(&[bad]).unwrap();
        assert_eq!(out.report.failure_reason, Some(FailureReason::NotTheoremShape));

        let tower = reg.tower().unwrap();
        assert!(decompose_tower(&[tower[0].clone(), tower[2].clone()]).is_err());
        assert!(decompose_tower(&[]).is_err());
    }

    #[test]
    fn compatibility_check_examples() {
        let pp = params(2, 3, 1);
        let reg = GModulePresentation::regular_representation(pp, 1).unwrap();
        let out = decompose_tower(&reg.tower().unwrap()).unwrap();
        assert!(tower_compatibility_check(2, &out.certificates));
        assert!(tower_compatibility_check(2, &out.certificates[..1]));

        let mut perturbed = out.certificates.clone();
        // add 1 (not a multiple of p^(s-1) = 4) at the top stage
        perturbed[2].generators[0].coords[1] = (perturbed[2].generators[0].coords[1] + 1) % 8;
        assert!(!tower_compatibility_check(2, &perturbed));
        let mut relevel = out.certificates.clone();
        relevel[1].generators[0].level = 0;
        assert!(!tower_compatibility_check(2, &relevel));
    }

    #[test]
    fn module_file_round_trip() {
        let m = GModulePresentation::regular_representation(params(2, 2, 1), 1).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"p":2,"s":2,"n":1,"rank":2,"action":[0,1,1,0]}"#);
        assert_eq!(serde_json::from_str::<GModulePresentation>(&json).unwrap(), m);
        let report = DecompositionReport { ranks: vec![0, 1], verified: false, failure_reason: Some(FailureReason::NotTheoremShape) };
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"ranks":[0,1],"verified":false,"failure_reason":"not_theorem_shape"}"#
        );
    }
}
