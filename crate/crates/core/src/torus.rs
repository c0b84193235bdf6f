//! The exact coefficient group K and torus points.
//!
//! K is the formal abelian group mu_N x Z^(symbols): a root of unity part
//! together with free exponents on named symbols. Division is always
//! defined and equality is decidable, which is all the cocycle identities
//! need. A torus point is a vector of K-elements over the cocharacter
//! basis of a based root datum.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdatum::{BasedRootDatum, PinnedAutomorphism};
use crate::snf::IntMat;
use crate::weyl::WeylElem;

/// Coefficient group context: a cyclotomic order N (even, with 4 | N when
/// the element i is needed) and a list of free generator names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffGroup {
    pub n: u64,
    pub symbols: Vec<String>,
}

impl CoeffGroup {
    pub fn new(n: u64, symbols: &[&str]) -> Result<Arc<CoeffGroup>> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidData(format!("coefficient order {n} must be even")));
        }
        Ok(Arc::new(CoeffGroup { n, symbols: symbols.iter().map(|s| s.to_string()).collect() }))
    }

    /// Default context: N = 24 (contains i, -1 and cube roots), one generic
    /// symbol `a` plus two scaling symbols.
    pub fn standard() -> Arc<CoeffGroup> {
        CoeffGroup::new(24, &["a", "c1", "c2", "two"]).unwrap()
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn has_i(&self) -> bool {
        self.n % 4 == 0
    }
}

/// An element of K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KElem {
    pub group: Arc<CoeffGroup>,
    /// Exponent of zeta_N.
    pub zeta: u64,
    /// Sparse free exponents, keyed by symbol index.
    pub free: BTreeMap<usize, i64>,
}

impl KElem {
    pub fn one(group: &Arc<CoeffGroup>) -> KElem {
        KElem { group: group.clone(), zeta: 0, free: BTreeMap::new() }
    }

    pub fn zeta_pow(group: &Arc<CoeffGroup>, k: i64) -> KElem {
        KElem {
            group: group.clone(),
            zeta: k.rem_euclid(group.n as i64) as u64,
            free: BTreeMap::new(),
        }
    }

    pub fn minus_one(group: &Arc<CoeffGroup>) -> KElem {
        KElem::zeta_pow(group, (group.n / 2) as i64)
    }

    /// The chosen square root of -1 (requires 4 | N); `other` picks -i.
    pub fn imag_unit(group: &Arc<CoeffGroup>, other: bool) -> KElem {
        assert!(group.has_i(), "4 must divide N for i to exist");
        let q = (group.n / 4) as i64;
        KElem::zeta_pow(group, if other { 3 * q } else { q })
    }

    pub fn symbol(group: &Arc<CoeffGroup>, name: &str) -> Result<KElem> {
        let idx = group
            .symbol_index(name)
            .ok_or_else(|| Error::InvalidData(format!("unknown symbol `{name}`")))?;
        let mut free = BTreeMap::new();
        free.insert(idx, 1);
        Ok(KElem { group: group.clone(), zeta: 0, free })
    }

    pub fn is_one(&self) -> bool {
        self.zeta == 0 && self.free.is_empty()
    }

    pub fn mul(&self, o: &KElem) -> KElem {
        assert!(self.group == o.group, "coefficient group mismatch");
        let mut free = self.free.clone();
        for (&k, &e) in &o.free {
            let v = free.entry(k).or_insert(0);
            *v += e;
            if *v == 0 {
                free.remove(&k);
            }
        }
        KElem { group: self.group.clone(), zeta: (self.zeta + o.zeta) % self.group.n, free }
    }

    pub fn inv(&self) -> KElem {
        KElem {
            group: self.group.clone(),
            zeta: (self.group.n - self.zeta) % self.group.n,
            free: self.free.iter().map(|(&k, &e)| (k, -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> KElem {
        let zeta = (self.zeta as i64 * e).rem_euclid(self.group.n as i64) as u64;
        let free = self
            .free
            .iter()
            .filter_map(|(&k, &x)| if x * e == 0 { None } else { Some((k, x * e)) })
            .collect();
        KElem { group: self.group.clone(), zeta, free }
    }

    /// (-1) * self, the a-data negation.
    pub fn neg(&self) -> KElem {
        self.mul(&KElem::minus_one(&self.group))
    }

    /// Multiplicative order when the element is a pure root of unity.
    pub fn torsion_order(&self) -> Option<u64> {
        if !self.free.is_empty() {
            return None;
        }
        let g = num::integer::gcd(self.zeta, self.group.n);
        Some(self.group.n / g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let free: BTreeMap<String, i64> = self
            .free
            .iter()
            .map(|(&k, &e)| (self.group.symbols[k].clone(), e))
            .collect();
        serde_json::json!({ "zeta": self.zeta, "free": free })
    }
}

/// One automorphism of K: an exponent on the root-of-unity part (a unit mod
/// N) and a permutation of the free symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffAction {
    pub zeta_mult: u64,
    pub symbol_perm: Vec<usize>,
}

impl CoeffAction {
    pub fn identity(group: &CoeffGroup) -> CoeffAction {
        CoeffAction { zeta_mult: 1, symbol_perm: (0..group.symbols.len()).collect() }
    }

    /// zeta -> zeta^{-1}, symbols fixed ("complex conjugation").
    pub fn inversion(group: &CoeffGroup) -> CoeffAction {
        CoeffAction { zeta_mult: group.n - 1, symbol_perm: (0..group.symbols.len()).collect() }
    }

    pub fn validate(&self, group: &CoeffGroup) -> Result<()> {
        if num::integer::gcd(self.zeta_mult, group.n) != 1 {
            return Err(Error::InvalidData("zeta multiplier is not a unit".into()));
        }
        let mut hit = vec![false; group.symbols.len()];
        if self.symbol_perm.len() != group.symbols.len() {
            return Err(Error::InvalidData("symbol permutation length".into()));
        }
        for &p in &self.symbol_perm {
            if p >= hit.len() || hit[p] {
                return Err(Error::InvalidData("invalid symbol permutation".into()));
            }
            hit[p] = true;
        }
        Ok(())
    }

    pub fn apply(&self, x: &KElem) -> KElem {
        let zeta = (x.zeta * self.zeta_mult) % x.group.n;
        let free = x.free.iter().map(|(&k, &e)| (self.symbol_perm[k], e)).collect();
        KElem { group: x.group.clone(), zeta, free }
    }

    pub fn compose(&self, other: &CoeffAction) -> CoeffAction {
        // self after other
        let n = self.symbol_perm.len();
        CoeffAction {
            zeta_mult: self.zeta_mult * other.zeta_mult, // reduced on use
            symbol_perm: (0..n).map(|i| self.symbol_perm[other.symbol_perm[i]]).collect(),
        }
    }

    pub fn reduce(mut self, group: &CoeffGroup) -> CoeffAction {
        self.zeta_mult %= group.n;
        self
    }

    pub fn is_identity(&self, group: &CoeffGroup) -> bool {
        self.zeta_mult % group.n == 1
            && self.symbol_perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// A point of the torus X_* (x) K, written over the cocharacter basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoint {
    pub datum: Arc<BasedRootDatum>,
    pub coords: Vec<KElem>,
}

impl TorusPoint {
    pub fn identity(datum: &Arc<BasedRootDatum>, group: &Arc<CoeffGroup>) -> TorusPoint {
        TorusPoint { datum: datum.clone(), coords: vec![KElem::one(group); datum.dim] }
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| c.is_one())
    }

    pub fn group(&self) -> Arc<CoeffGroup> {
        self.coords[0].group.clone()
    }

    pub fn mul(&self, o: &TorusPoint) -> TorusPoint {
        assert!(self.datum == o.datum, "datum mismatch");
        TorusPoint {
            datum: self.datum.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn inv(&self) -> TorusPoint {
        TorusPoint { datum: self.datum.clone(), coords: self.coords.iter().map(|c| c.inv()).collect() }
    }

    /// mu (x) x for a cocharacter mu: coordinates x^{mu_i}.
    pub fn eval_cocharacter(datum: &Arc<BasedRootDatum>, mu: &[i64], x: &KElem) -> TorusPoint {
        assert_eq!(mu.len(), datum.dim);
        TorusPoint { datum: datum.clone(), coords: mu.iter().map(|&e| x.pow(e)).collect() }
    }

    /// chi(t) for a character chi.
    pub fn eval_root(&self, chi: &[i64]) -> KElem {
        assert_eq!(chi.len(), self.datum.dim);
        let mut out = KElem::one(&self.group());
        for (c, &e) in self.coords.iter().zip(chi) {
            if e != 0 {
                out = out.mul(&c.pow(e));
            }
        }
        out
    }

    fn apply_lattice(&self, m: &IntMat) -> TorusPoint {
        let coords = (0..self.datum.dim)
            .map(|i| {
                let mut out = KElem::one(&self.group());
                for (j, c) in self.coords.iter().enumerate() {
                    let e = m[(i, j)];
                    if e != 0 {
                        out = out.mul(&c.pow(e));
                    }
                }
                out
            })
            .collect();
        TorusPoint { datum: self.datum.clone(), coords }
    }

    pub fn weyl_apply(&self, w: &WeylElem) -> TorusPoint {
        assert!(self.datum == w.datum, "datum mismatch");
        self.apply_lattice(&w.cochar_mat)
    }

    pub fn pinned_apply(&self, pa: &PinnedAutomorphism) -> TorusPoint {
        assert!(self.datum == pa.datum, "datum mismatch");
        self.apply_lattice(&pa.cochar_mat)
    }

    pub fn coeff_apply(&self, act: &CoeffAction) -> TorusPoint {
        TorusPoint {
            datum: self.datum.clone(),
            coords: self.coords.iter().map(|c| act.apply(c)).collect(),
        }
    }

    /// Applies the coefficient action of a group element, then the lattice
    /// action of the Weyl twist.
    pub fn galois_act(&self, act: &CoeffAction, twist: &WeylElem) -> TorusPoint {
        self.coeff_apply(act).weyl_apply(twist)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coords.iter().map(|c| c.to_json()).collect())
    }
}
