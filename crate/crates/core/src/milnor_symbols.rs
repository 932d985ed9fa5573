//! Symbols in `K_m / p^s` over iterated Laurent towers
//! `K((y_1))…((y_{m-1}))` with `K` one of the rational function fields of
//! [`crate::artin_schreier`].
//!
//! Entries are monomials `u · Π y_i^(a_i)`. A symbol is expanded
//! multilinearly into symbols whose entries are atoms (a monic prime of the
//! base field or a single tower variable). Constants drop out because every
//! `c ∈ F_p^×` is a `p^s`-th power, and so does `-1`, which kills repeated
//! atoms via `{a, a} = {a, -1}`. Sorting atoms costs a sign per swap.
//!
//! The Steinberg relation is not implemented. Two pure base-field entries
//! `a`, `b` with `a + b = 1` are rejected instead of being silently treated
//! as independent.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::artin_schreier::{
    descend, enumerate_orbits, norm_e_to_f, FactoredElement, FpPoly, Side, TruncatedInstance,
};
use crate::error::{Error, Result};
use crate::modp_linalg::{MatrixModPS, Solution};
use crate::params::{PrimeParams, Zmod};

/// `u · Π y_i^(a_i)` with `u` in the base field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialEntry {
    pub coefficient: FactoredElement,
    pub exponents: Vec<i64>,
}

impl MonomialEntry {
    pub fn base(coefficient: FactoredElement, nvars: usize) -> Self {
        MonomialEntry { coefficient, exponents: vec![0; nvars] }
    }

    /// The tower variable `y_i`, `1 <= i <= nvars`.
    pub fn var(p: u64, side: Side, i: usize, nvars: usize) -> Self {
        let mut exponents = vec![0; nvars];
        exponents[i - 1] = 1;
        MonomialEntry { coefficient: FactoredElement::one(p, side), exponents }
    }

    fn is_pure_base(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    fn expand(&self) -> Vec<(Atom, i64)> {
        let mut out: Vec<(Atom, i64)> =
            self.coefficient.factors().iter().map(|(g, &e)| (Atom::Prime(g.clone()), e)).collect();
        for (i, &a) in self.exponents.iter().enumerate() {
            if a != 0 {
                out.push((Atom::Var(i + 1), a));
            }
        }
        out
    }
}

/// A monic prime of the base field or the tower variable `y_i`.
/// Primes sort before variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Prime(FpPoly),
    Var(usize),
}

/// Strictly increasing list of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalSymbol(Vec<Atom>);

impl NormalSymbol {
    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    /// Sorts `atoms`, returning the permutation sign (`true` for odd), or
    /// `None` if an atom repeats.
    fn from_atoms(mut atoms: Vec<Atom>) -> Option<(Self, bool)> {
        let mut odd = false;
        for i in 1..atoms.len() {
            let mut j = i;
            while j > 0 && atoms[j - 1] > atoms[j] {
                atoms.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
        }
        if atoms.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((NormalSymbol(atoms), odd))
    }
}

/// The tower `K((y_1))…((y_{m-1}))` over the base side `side`, together
/// with the symbol length `m` and modulus `p^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerField {
    pub p: u64,
    pub side: Side,
    pub m: usize,
}

impl TowerField {
    pub fn new(p: u64, side: Side, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("symbol length m must be at least 1".into()));
        }
        PrimeParams::new(p, 1, 0)?;
        Ok(TowerField { p, side, m })
    }

    pub fn nvars(&self) -> usize {
        self.m - 1
    }
}

/// `Σ c · symbol` in `K_m / p^s`, normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct MilnorClass {
    tower: TowerField,
    s: u32,
    terms: BTreeMap<NormalSymbol, u64>,
}

impl MilnorClass {
    pub fn zero(tower: TowerField, s: u32) -> Self {
        MilnorClass { tower, s, terms: BTreeMap::new() }
    }

    pub fn tower(&self) -> TowerField {
        self.tower
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn terms(&self) -> &BTreeMap<NormalSymbol, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn ring(&self) -> Zmod {
        Zmod::new(self.tower.p, self.s)
    }

    fn add_term(&mut self, sym: NormalSymbol, c: u64) {
        let ring = self.ring();
        let slot = self.terms.entry(sym.clone()).or_insert(0);
        *slot = ring.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&sym);
        }
    }

    /// Multilinear expansion of one symbol whose `k`-th entry is
    /// `Σ e · atom` (as listed in `positions[k]`).
    fn from_expansion(tower: TowerField, s: u32, positions: &[Vec<(Atom, i64)>]) -> Self {
        let mut out = Self::zero(tower, s);
        let ring = out.ring();
        let mut partial: Vec<(Vec<Atom>, u64)> = vec![(Vec::new(), 1 % ring.modulus)];
        for pos in positions {
            let mut next = Vec::with_capacity(partial.len() * pos.len());
            for (atoms, c) in &partial {
                for (atom, e) in pos {
                    let mut a = atoms.clone();
                    a.push(atom.clone());
                    next.push((a, ring.mul(*c, ring.reduce_signed(*e))));
                }
            }
            partial = next;
        }
        for (atoms, c) in partial {
            if let Some((sym, odd)) = NormalSymbol::from_atoms(atoms) {
                out.add_term(sym, if odd { ring.neg(c) } else { c });
            }
        }
        out
    }

    /// `{entries}` in normal form.
    pub fn symbol(tower: TowerField, s: u32, entries: &[MonomialEntry]) -> Result<Self> {
        PrimeParams::new(tower.p, s, 0)?;
        if entries.len() != tower.m {
            return Err(Error::Structural(format!("expected {} entries, got {}", tower.m, entries.len())));
        }
        for e in entries {
            if e.coefficient.p() != tower.p || e.coefficient.side() != tower.side {
                return Err(Error::Structural("entry coefficient lives in a different field".into()));
            }
            if e.exponents.len() != tower.nvars() {
                return Err(Error::Structural(format!(
                    "entry has {} exponents, tower has {} variables",
                    e.exponents.len(),
                    tower.nvars()
                )));
            }
        }
        for (i, a) in entries.iter().enumerate() {
            for b in &entries[i + 1..] {
                if a.is_pure_base() && b.is_pure_base() && sums_to_one(&a.coefficient, &b.coefficient) {
                    return Err(Error::SteinbergRequired(format!(
                        "{{{}, {}}} needs the Steinberg relation",
                        a.coefficient, b.coefficient
                    )));
                }
            }
        }
        let positions: Vec<Vec<(Atom, i64)>> = entries.iter().map(MonomialEntry::expand).collect();
        Ok(Self::from_expansion(tower, s, &positions))
    }

    /// `{x, y_1, …, y_{m-1}}`.
    pub fn alpha(x: &FactoredElement, m: usize, s: u32) -> Result<Self> {
        let tower = TowerField::new(x.p(), x.side(), m)?;
        let mut entries = vec![MonomialEntry::base(x.clone(), tower.nvars())];
        entries.extend((1..m).map(|i| MonomialEntry::var(x.p(), x.side(), i, tower.nvars())));
        Self::symbol(tower, s, &entries)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.tower != other.tower || self.s != other.s {
            return Err(Error::Structural("classes live in different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (sym, &c) in &other.terms {
            out.add_term(sym.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Self {
        let ring = self.ring();
        let k = ring.reduce_signed(k);
        let mut out = Self::zero(self.tower, self.s);
        for (sym, &c) in &self.terms {
            out.add_term(sym.clone(), ring.mul(c, k));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Residue along the top variable `y_{m-1}`; `var` must name it.
    pub fn residue(&self, var: usize) -> Result<Self> {
        let top = self.tower.nvars();
        if top == 0 || var != top {
            return Err(Error::Domain(format!("residue is taken along the last variable y_{top}, not y_{var}")));
        }
        let tower = TowerField { m: self.tower.m - 1, ..self.tower };
        let mut out = Self::zero(tower, self.s);
        for (sym, &c) in &self.terms {
            // the top variable, if present, is the last atom
            if sym.0.last() == Some(&Atom::Var(top)) {
                out.add_term(NormalSymbol(sym.0[..sym.0.len() - 1].to_vec()), c);
            }
        }
        Ok(out)
    }

    /// Residue along the current top variable.
    pub fn residue_top(&self) -> Result<Self> {
        self.residue(self.tower.nvars())
    }

    pub fn to_record(&self) -> ClassRecord {
        let nvars = self.tower.nvars();
        let (p, side) = (self.tower.p, self.tower.side);
        ClassRecord {
            p,
            s: self.s,
            side,
            m: self.tower.m,
            terms: self
                .terms
                .iter()
                .map(|(sym, &coeff)| TermRecord {
                    entries: sym
                        .0
                        .iter()
                        .map(|a| match a {
                            Atom::Prime(g) => MonomialEntry::base(
                                FactoredElement::prime(side, g).expect("stored atoms are primes"),
                                nvars,
                            ),
                            Atom::Var(i) => MonomialEntry::var(p, side, *i, nvars),
                        })
                        .collect(),
                    coeff,
                })
                .collect(),
        }
    }

    pub fn from_record(r: &ClassRecord) -> Result<Self> {
        let tower = TowerField::new(r.p, r.side, r.m)?;
        let mut out = Self::zero(tower, r.s);
        for t in &r.terms {
            out = out.add(&Self::symbol(tower, r.s, &t.entries)?.scale(t.coeff as i64))?;
        }
        Ok(out)
    }
}

impl fmt::Display for MilnorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let var = self.tower.side.var();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(sym, &c)| {
                let inner: Vec<String> = sym
                    .0
                    .iter()
                    .map(|a| match a {
                        Atom::Prime(g) => g.display(var),
                        Atom::Var(i) => format!("y{i}"),
                    })
                    .collect();
                let body = format!("{{{}}}", inner.join(", "));
                if c == 1 { body } else { format!("{c}·{body}") }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MilnorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized class: `Σ coeff · {entries}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub p: u64,
    pub s: u32,
    pub side: Side,
    pub m: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub entries: Vec<MonomialEntry>,
    pub coeff: u64,
}

impl Serialize for MilnorClass {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MilnorClass {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = ClassRecord::deserialize(de)?;
        Self::from_record(&r).map_err(serde::de::Error::custom)
    }
}

fn sums_to_one(a: &FactoredElement, b: &FactoredElement) -> bool {
    let (na, da) = a.to_fraction();
    let (nb, db) = b.to_fraction();
    na.mul(&db).add(&nb.mul(&da)) == da.mul(&db)
}

/// The F-prime below a `σ`-invariant E-prime, if it is one.
fn descend_prime(g: &FpPoly) -> Option<FpPoly> {
    if g.shift(1) != *g {
        return None;
    }
    descend(g)
}

/// Norm from the E-tower to the F-tower via the projection formula:
/// `N{e, ι(rest)} = {N(e), rest}` and `N{ι(all)} = p·{all}`.
pub fn norm_symbols(c: &MilnorClass) -> Result<MilnorClass> {
    if c.tower.side != Side::E {
        return Err(Error::Domain("the norm maps E-side classes".into()));
    }
    let p = c.tower.p;
    let tower = TowerField { side: Side::F, ..c.tower };
    let mut out = MilnorClass::zero(tower, c.s);
    for (sym, &coeff) in &c.terms {
        let mut positions: Vec<Vec<(Atom, i64)>> = Vec::with_capacity(sym.0.len());
        let mut from_e = 0;
        for atom in &sym.0 {
            match atom {
                Atom::Var(i) => positions.push(vec![(Atom::Var(*i), 1)]),
                Atom::Prime(g) => match descend_prime(g) {
                    Some(r) => positions.push(vec![(Atom::Prime(r), 1)]),
                    None => {
                        from_e += 1;
                        let n = norm_e_to_f(&FactoredElement::prime(Side::E, g)?)?;
                        positions.push(n.factors().iter().map(|(r, &e)| (Atom::Prime(r.clone()), e)).collect());
                    }
                },
            }
        }
        let term = match from_e {
            0 => MilnorClass::from_expansion(tower, c.s, &positions).scale(p as i64),
            1 => MilnorClass::from_expansion(tower, c.s, &positions),
            _ => {
                return Err(Error::NotComputable(format!(
                    "symbol {} has {from_e} entries not coming from F",
                    MilnorClass { tower: c.tower, s: c.s, terms: [(sym.clone(), 1)].into() }
                )))
            }
        };
        out = out.add(&term.scale(coeff as i64))?;
    }
    Ok(out)
}

/// `(∂ ∘ N)(c) == (N ∘ ∂)(c)`.
pub fn check_norm_residue_diagram(c: &MilnorClass) -> Result<bool> {
    let lhs = norm_symbols(c)?.residue_top()?;
    let rhs = norm_symbols(&c.residue_top()?)?;
    Ok(lhs == rhs)
}

/// Verdict for `x ∈ N_{E/F}(E^×) · (F^×)^{p^s}` within the truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum K1Membership {
    /// `N(certificate) = x` modulo `p^s`-th powers and constants.
    Member { certificate: FactoredElement },
    /// No combination of norms of E-primes over F-primes of degree `≤ dF`
    /// matches `x`.
    NonMember { f_primes: Vec<FpPoly>, exponents: Vec<u64> },
    Unknown { reason: String },
}

/// Exponent vector of `x` mod `p^s` over `f_primes`, or `None` if `x`
/// involves another prime.
pub fn exponent_vector(x: &FactoredElement, f_primes: &[FpPoly], ring: Zmod) -> Option<Vec<u64>> {
    let mut v = vec![0u64; f_primes.len()];
    for (r, &e) in x.factors() {
        let k = f_primes.iter().position(|q| q == r)?;
        v[k] = ring.reduce_signed(e);
    }
    Some(v)
}

/// Matrix whose columns are the norm exponent vectors of the instance's
/// carrier primes, over `Z/p^s`.
pub fn norm_matrix(inst: &TruncatedInstance, s: u32) -> Result<(Vec<FpPoly>, Vec<FpPoly>, MatrixModPS)> {
    let ring = Zmod::new(inst.params.p, s);
    let f_primes = inst.f_primes();
    let e_primes = inst.e_primes();
    let mut cols = Vec::with_capacity(e_primes.len());
    for g in &e_primes {
        let n = norm_e_to_f(&FactoredElement::prime(Side::E, g)?)?;
        cols.push(
            exponent_vector(&n, &f_primes, ring)
                .ok_or_else(|| Error::Internal(format!("norm of {g:?} leaves the truncation")))?,
        );
    }
    let m = MatrixModPS::from_columns(ring, f_primes.len(), &cols)?;
    Ok((f_primes, e_primes, m))
}

/// Decides membership of `x` in the norm group of `E/F` modulo `p^s`-th
/// powers, using the primes over F-primes of degree `≤ dF`.
pub fn norm_membership_k1(x: &FactoredElement, d_f: usize, s: u32) -> Result<K1Membership> {
    if x.side() != Side::F {
        return Err(Error::Domain("membership is tested for F-side elements".into()));
    }
    let params = PrimeParams::new(x.p(), s, 1)?;
    if let Some(r) = x.factors().keys().find(|r| r.degree().unwrap() > d_f) {
        return Ok(K1Membership::Unknown { reason: format!("{} lies beyond dF = {d_f}", r.display("t")) });
    }
    let inst = enumerate_orbits(params, d_f)?;
    let (f_primes, e_primes, mat) = norm_matrix(&inst, s)?;
    let target = exponent_vector(x, &f_primes, params.ring()).expect("degree bound checked");
    match mat.solve(&target)? {
        Solution::Solved { particular, .. } => {
            let mut cert = FactoredElement::one(x.p(), Side::E);
            for (g, &c) in e_primes.iter().zip(&particular) {
                if c != 0 {
                    cert = cert.mul(&FactoredElement::prime(Side::E, g)?.pow(c as i64))?;
                }
            }
            Ok(K1Membership::Member { certificate: cert })
        }
        Solution::NoSolution => Ok(K1Membership::NonMember { f_primes, exponents: target }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KmMembership {
    /// `N(certificate) = c`.
    Member { certificate: MilnorClass },
    /// `chain[0] = c`, each next class is the residue of the previous, and
    /// the last one `{x}` is a certified `K_1` non-member.
    NonMember { chain: Vec<MilnorClass>, endpoint: K1Membership },
    Unknown { reason: String },
}

/// Reads `c = {x, y_1, …, y_{m-1}}` back into `x` (constants aside), if
/// `c` has that shape.
pub fn monomial_shape(c: &MilnorClass) -> Option<FactoredElement> {
    let tower = c.tower;
    let mut x = FactoredElement::one(tower.p, tower.side);
    for (sym, &coeff) in &c.terms {
        let (first, vars) = sym.0.split_first()?;
        let Atom::Prime(g) = first else { return None };
        if vars.len() != tower.nvars() || vars.iter().enumerate().any(|(i, a)| *a != Atom::Var(i + 1)) {
            return None;
        }
        x = x.mul(&FactoredElement::prime(tower.side, g).ok()?.pow(coeff as i64)).ok()?;
    }
    Some(x)
}

/// Membership of `{x, y_1, …, y_{m-1}}` in `N_{E/F} k_m E`: lifts a `K_1`
/// certificate by the projection formula, or follows residues down to a
/// `K_1` non-member.
pub fn norm_membership_km(c: &MilnorClass, d_f: usize) -> Result<KmMembership> {
    if c.tower.side != Side::F {
        return Err(Error::Domain("membership is tested for F-side classes".into()));
    }
    let Some(x) = monomial_shape(c) else {
        return Ok(KmMembership::Unknown { reason: "class is not of the form {x, y_1, …, y_(m-1)}".into() });
    };
    match norm_membership_k1(&x, d_f, c.s)? {
        K1Membership::Member { certificate } => {
            let lifted = MilnorClass::alpha(&certificate, c.tower.m, c.s)?;
            Ok(KmMembership::Member { certificate: lifted })
        }
        nm @ K1Membership::NonMember { .. } => {
            let mut chain = vec![c.clone()];
            while chain.last().unwrap().tower.m > 1 {
                let next = chain.last().unwrap().residue_top()?;
                chain.push(next);
            }
            Ok(KmMembership::NonMember { chain, endpoint: nm })
        }
        K1Membership::Unknown { reason } => Ok(KmMembership::Unknown { reason }),
    }
}

/// A random symbol `{e·y^a, ι(r_2)·y^b, …}` over the E-tower: one entry
/// with an arbitrary E-side coefficient, the others built from inert
/// F-primes (whose images are `σ`-invariant), so the norm stays inside the
/// projection-formula fragment.
pub fn random_computable_symbol<R: Rng>(p: u64, m: usize, s: u32, rng: &mut R) -> Result<MilnorClass> {
    let tower = TowerField::new(p, Side::E, m)?;
    let inert: Vec<FpPoly> =
        enumerate_orbits(PrimeParams::new(p, 1, 1)?, 2)?.inert_primes.into_iter().map(|i| i.image).collect();
    let nvars = tower.nvars();
    let exps = |rng: &mut R| (0..nvars).map(|_| rng.gen_range(-2i64..=2)).collect::<Vec<_>>();
    loop {
        let mut first = loop {
            let deg = rng.gen_range(1..=3usize);
            let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
            c.push(rng.gen_range(1..p.max(2)));
            let f = FpPoly::new(p, c);
            if !f.is_zero() {
                break FactoredElement::from_poly(Side::E, &f)?;
            }
        };
        if rng.gen_bool(0.3) {
            first = first.inv();
        }
        let mut entries = vec![MonomialEntry { coefficient: first, exponents: exps(rng) }];
        for _ in 1..m {
            let mut coeff = FactoredElement::one(p, Side::E);
            for g in &inert {
                let e = rng.gen_range(-1i64..=1);
                if e != 0 {
                    coeff = coeff.mul(&FactoredElement::prime(Side::E, g)?.pow(e))?;
                }
            }
            entries.push(MonomialEntry { coefficient: coeff, exponents: exps(rng) });
        }
        match MilnorClass::symbol(tower, s, &entries) {
            Err(Error::SteinbergRequired(_)) => continue,
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(side: Side, p: u64, c: &[u64]) -> FactoredElement {
        FactoredElement::from_poly(side, &FpPoly::new(p, c.to_vec())).unwrap()
    }

    fn mono(x: FactoredElement, exps: &[i64]) -> MonomialEntry {
        MonomialEntry { coefficient: x, exponents: exps.to_vec() }
    }

    fn tower(p: u64, side: Side, m: usize) -> TowerField {
        TowerField::new(p, side, m).unwrap()
    }

    #[test]
    fn symbol_examples() {
        let tw = tower(2, Side::F, 2);
        let one = FactoredElement::one(2, Side::F);
        let t = fe(Side::F, 2, &[0, 1]);
        let y1 = mono(one.clone(), &[1]);
        assert!(MilnorClass::symbol(tw, 1, &[mono(one, &[0]), y1.clone()]).unwrap().is_zero());
        let c = MilnorClass::symbol(tw, 1, &[mono(t.clone(), &[1]), y1.clone()]).unwrap();
        assert_eq!(c, MilnorClass::alpha(&t, 2, 1).unwrap());
        assert_eq!(c.to_string(), "{t, y1}");
        let c2 = MilnorClass::symbol(tw, 1, &[mono(t.clone(), &[0]), y1]).unwrap();
        assert_eq!(c2, c);
    }

    #[test]
    fn antisymmetry_and_constants() {
        let tw = tower(3, Side::F, 2);
        let t = fe(Side::F, 3, &[0, 1]);
        let y1 = MonomialEntry::var(3, Side::F, 1, 1);
        let a = MilnorClass::symbol(tw, 2, &[MonomialEntry::base(t.clone(), 1), y1.clone()]).unwrap();
        let b = MilnorClass::symbol(tw, 2, &[y1.clone(), MonomialEntry::base(t.clone(), 1)]).unwrap();
        assert_eq!(b, a.neg());
        // 2t: the constant contributes nothing
        let two_t = t.mul(&FactoredElement::constant(3, Side::F, 2).unwrap()).unwrap();
        assert_eq!(MilnorClass::symbol(tw, 2, &[MonomialEntry::base(two_t, 1), y1.clone()]).unwrap(), a);
        // {t^2, y1} = 2{t, y1}
        let c = MilnorClass::symbol(tw, 2, &[MonomialEntry::base(t.pow(2), 1), y1]).unwrap();
        assert_eq!(c, a.scale(2));
    }

    #[test]
    fn steinberg_inputs_are_rejected() {
        let tw = tower(2, Side::F, 2);
        let t = MonomialEntry::base(fe(Side::F, 2, &[0, 1]), 1);
        let t1 = MonomialEntry::base(fe(Side::F, 2, &[1, 1]), 1);
        assert!(matches!(MilnorClass::symbol(tw, 1, &[t, t1]), Err(Error::SteinbergRequired(_))));
        let tw3 = tower(3, Side::F, 2);
        let t = MonomialEntry::base(fe(Side::F, 3, &[0, 1]), 1);
        let t2 = MonomialEntry::base(fe(Side::F, 3, &[1, 1]), 1);
        assert!(MilnorClass::symbol(tw3, 1, &[t, t2]).is_ok());
    }

    #[test]
    fn structural_errors() {
        let tw = tower(2, Side::F, 2);
        let t = MonomialEntry::base(fe(Side::F, 2, &[0, 1]), 1);
        assert!(MilnorClass::symbol(tw, 1, std::slice::from_ref(&t)).is_err());
        let wrong = MonomialEntry::base(fe(Side::E, 2, &[0, 1]), 1);
        assert!(MilnorClass::symbol(tw, 1, &[t, wrong]).is_err());
        assert!(TowerField::new(2, Side::F, 0).is_err());
    }

    #[test]
    fn residue_examples() {
        let t = fe(Side::F, 2, &[0, 1]);
        let c = MilnorClass::alpha(&t, 2, 1).unwrap();
        assert_eq!(c.residue(1).unwrap(), MilnorClass::alpha(&t, 1, 1).unwrap());
        let u = fe(Side::F, 3, &[1, 0, 1]);
        let v = fe(Side::F, 3, &[0, 1]);
        let unr = MilnorClass::symbol(tower(3, Side::F, 2), 1, &[MonomialEntry::base(v, 1), MonomialEntry::base(u, 1)])
            .unwrap();
        assert!(unr.residue(1).unwrap().is_zero());

        let c3 = MilnorClass::alpha(&t, 3, 2).unwrap();
        assert_eq!(c3.residue(2).unwrap(), MilnorClass::alpha(&t, 2, 2).unwrap());
        assert!(c3.residue(1).is_err());
        assert!(MilnorClass::alpha(&t, 1, 1).unwrap().residue(0).is_err());
    }

    #[test]
    fn iterated_residue_recovers_x() {
        for p in [2u64, 3] {
            let x = fe(Side::F, p, &[1, 2 % p, 0, 1]).mul(&fe(Side::F, p, &[0, 1]).pow(-2)).unwrap();
            for m in 1..=4 {
                let mut c = MilnorClass::alpha(&x, m, 3).unwrap();
                for _ in 1..m {
                    c = c.residue_top().unwrap();
                }
                assert_eq!(c, MilnorClass::alpha(&x, 1, 3).unwrap());
            }
        }
    }

    #[test]
    fn norm_examples() {
        let theta = fe(Side::E, 2, &[0, 1]);
        let t = fe(Side::F, 2, &[0, 1]);
        assert_eq!(
            norm_symbols(&MilnorClass::alpha(&theta, 2, 2).unwrap()).unwrap(),
            MilnorClass::alpha(&t, 2, 2).unwrap()
        );
        // ι(t) = θ(θ+1) = θ·σθ: its norm is t^2
        let it = fe(Side::E, 2, &[0, 1, 1]);
        assert_eq!(
            norm_symbols(&MilnorClass::alpha(&it, 2, 2).unwrap()).unwrap(),
            MilnorClass::alpha(&t, 2, 2).unwrap().scale(2)
        );
        let inert = fe(Side::E, 2, &[1, 1, 1]);
        let t1 = fe(Side::F, 2, &[1, 1]);
        let n = norm_symbols(&MilnorClass::alpha(&inert, 2, 2).unwrap()).unwrap();
        assert_eq!(n, MilnorClass::alpha(&t1.pow(2), 2, 2).unwrap());
        assert_eq!(n, MilnorClass::alpha(&t1, 2, 2).unwrap().scale(2));
    }

    #[test]
    fn norm_of_two_e_entries_is_not_computable() {
        let tw = tower(3, Side::E, 2);
        let a = MonomialEntry::base(fe(Side::E, 3, &[0, 1]), 1);
        let b = MonomialEntry::base(fe(Side::E, 3, &[2, 0, 1]), 1);
        let c = MilnorClass::symbol(tw, 1, &[a, b]).unwrap();
        assert!(matches!(norm_symbols(&c), Err(Error::NotComputable(_))));
    }

    #[test]
    fn diagram_examples() {
        let theta = fe(Side::E, 2, &[0, 1]);
        assert!(check_norm_residue_diagram(&MilnorClass::alpha(&theta, 2, 1).unwrap()).unwrap());
        let tw = tower(2, Side::E, 2);
        let units = MilnorClass::symbol(
            tw,
            1,
            &[MonomialEntry::base(theta.clone(), 1), MonomialEntry::base(fe(Side::E, 2, &[1, 1, 1]), 1)],
        )
        .unwrap();
        assert!(norm_symbols(&units).unwrap().residue_top().unwrap().is_zero());
        assert!(check_norm_residue_diagram(&units).unwrap());
    }

    #[test]
    fn k1_membership_examples() {
        let t = fe(Side::F, 2, &[0, 1]);
        match norm_membership_k1(&t, 1, 1).unwrap() {
            K1Membership::Member { certificate } => {
                assert_eq!(norm_e_to_f(&certificate).unwrap(), t);
                assert_eq!(certificate, fe(Side::E, 2, &[0, 1]));
            }
            other => panic!("{other:?}"),
        }
        let t1 = fe(Side::F, 2, &[1, 1]);
        for d_f in 1..=3 {
            assert!(matches!(norm_membership_k1(&t1, d_f, 1).unwrap(), K1Membership::NonMember { .. }));
        }
        let r = fe(Side::F, 2, &[1, 1, 0, 1]);
        match norm_membership_k1(&r, 3, 1).unwrap() {
            K1Membership::Member { certificate } => assert_eq!(certificate, fe(Side::E, 2, &[1, 1, 0, 1])),
            other => panic!("{other:?}"),
        }
        assert!(matches!(norm_membership_k1(&r, 2, 1).unwrap(), K1Membership::Unknown { .. }));
        // (t+1)^2 is a norm
        assert!(matches!(norm_membership_k1(&t1.pow(2), 1, 2).unwrap(), K1Membership::Member { .. }));
    }

    #[test]
    fn km_membership_examples() {
        let t = fe(Side::F, 2, &[0, 1]);
        match norm_membership_km(&MilnorClass::alpha(&t, 2, 1).unwrap(), 1).unwrap() {
            KmMembership::Member { certificate } => {
                assert_eq!(certificate, MilnorClass::alpha(&fe(Side::E, 2, &[0, 1]), 2, 1).unwrap());
                assert_eq!(norm_symbols(&certificate).unwrap(), MilnorClass::alpha(&t, 2, 1).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let t1 = fe(Side::F, 2, &[1, 1]);
        match norm_membership_km(&MilnorClass::alpha(&t1, 2, 1).unwrap(), 1).unwrap() {
            KmMembership::NonMember { chain, endpoint } => {
                assert_eq!(chain.len(), 2);
                assert_eq!(chain[1], MilnorClass::alpha(&t1, 1, 1).unwrap());
                assert!(matches!(endpoint, K1Membership::NonMember { .. }));
            }
            other => panic!("{other:?}"),
        }
        let one = FactoredElement::one(2, Side::F);
        match norm_membership_km(&MilnorClass::alpha(&one, 2, 1).unwrap(), 1).unwrap() {
            KmMembership::Member { certificate } => assert!(certificate.is_zero()),
            other => panic!("{other:?}"),
        }
        let tw = tower(3, Side::F, 2);
        let odd = MilnorClass::symbol(
            tw,
            1,
            &[MonomialEntry::var(3, Side::F, 1, 1), MonomialEntry::base(fe(Side::F, 3, &[0, 1]), 1)],
        )
        .unwrap();
        // -{t, y1} = {t^2, y1} is still of monomial shape
        assert!(monomial_shape(&odd).is_some());
        let mixed = odd.add(&MilnorClass::symbol(
            tw,
            1,
            &[MonomialEntry::base(fe(Side::F, 3, &[0, 1]), 1), MonomialEntry::base(fe(Side::F, 3, &[1, 0, 1]), 1)],
        ).unwrap()).unwrap();
        assert!(matches!(norm_membership_km(&mixed, 2).unwrap(), KmMembership::Unknown { .. }));
    }

    #[test]
    fn serde_round_trip() {
        let x = fe(Side::F, 3, &[1, 0, 1]).mul(&fe(Side::F, 3, &[0, 1]).pow(-1)).unwrap();
        let c = MilnorClass::alpha(&x, 3, 2).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<MilnorClass>(&json).unwrap(), c);
    }

    fn arb_f_poly(p: u64) -> impl Strategy<Value = FactoredElement> {
        proptest::collection::vec(0..p, 1..5).prop_filter_map("nonzero", move |c| {
            let f = FpPoly::new(p, c);
            (!f.is_zero()).then(|| FactoredElement::from_poly(Side::F, &f).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn symbol_is_multiplicative_in_each_entry(a in arb_f_poly(3), b in arb_f_poly(3), e in -2i64..3) {
            let tw = tower(3, Side::F, 2);
            let y = |k: i64| MonomialEntry { coefficient: FactoredElement::one(3, Side::F), exponents: vec![k] };
            let ab = a.mul(&b).unwrap();
            let lhs = MilnorClass::symbol(tw, 2, &[mono(ab, &[e]), y(1)]).unwrap();
            let rhs = MilnorClass::symbol(tw, 2, &[mono(a, &[0]), y(1)]).unwrap()
                .add(&MilnorClass::symbol(tw, 2, &[mono(b, &[e]), y(1)]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn random_symbols_commute_with_residue(seed in any::<u64>(), p in prop_oneof![Just(2u64), Just(3)], m in 2usize..4) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c = random_computable_symbol(p, m, 2, &mut rng).unwrap();
            prop_assert!(check_norm_residue_diagram(&c).unwrap());
        }

        #[test]
        fn residue_is_linear(a in arb_f_poly(2), b in arb_f_poly(2), k in 0i64..8) {
            let ca = MilnorClass::alpha(&a, 2, 3).unwrap();
            let cb = MilnorClass::alpha(&b, 2, 3).unwrap();
            let lhs = ca.scale(k).add(&cb).unwrap().residue_top().unwrap();
            let rhs = ca.residue_top().unwrap().scale(k).add(&cb.residue_top().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
