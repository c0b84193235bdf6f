//! a-data, chi-data and scaling vectors on root sets, their negation and
//! scaling involutions, and theta-orbit bookkeeping.
//!
//! a-data satisfy a_{-alpha} = -a_alpha and equivariance under the twisted
//! Galois action; chi-data are finite-cyclic-valued abstractions retaining
//! exactly chi_{-alpha} = chi_alpha^{-1} and transport-equivariance.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rootdatum::{BasedRootDatum, PinnedAutomorphism};
use crate::torus::{CoeffAction, CoeffGroup, KElem};
use crate::twist::GammaTwist;
use crate::weyl::WeylElem;

/// Root-indexed coefficients a_alpha in K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AData {
    pub datum: Arc<BasedRootDatum>,
    pub values: Vec<KElem>,
}

impl AData {
    pub fn value(&self, idx: usize) -> &KElem {
        &self.values[idx]
    }

    pub fn group(&self) -> Arc<CoeffGroup> {
        self.values[0].group.clone()
    }

    /// Constant a-data a_alpha = v on positives, -v on negatives.
    pub fn signed_constant(datum: &Arc<BasedRootDatum>, v: KElem) -> AData {
        let values = (0..datum.n_roots())
            .map(|i| if datum.is_positive(i) { v.clone() } else { v.neg() })
            .collect();
        AData { datum: datum.clone(), values }
    }

    pub fn validate(
        &self,
        twist: Option<&GammaTwist>,
        theta: Option<&PinnedAutomorphism>,
    ) -> Result<()> {
        let d = &self.datum;
        if self.values.len() != d.n_roots() {
            return Err(Error::DimensionMismatch("a-data length".into()));
        }
        for i in 0..d.n_roots() {
            if self.values[d.neg_index(i)] != self.values[i].neg() {
                return Err(Error::InvalidData(format!(
                    "a-data breaks a(-alpha) = -a(alpha) at root {i}"
                )));
            }
        }
        if let Some(tw) = twist {
            for k in tw.elements() {
                for i in 0..d.n_roots() {
                    let j = tw.act_root(k, i);
                    if self.values[j] != tw.coeff_action(k).apply(&self.values[i]) {
                        return Err(Error::InvalidData(format!(
                            "a-data not Gamma-equivariant at root {i}, sigma^{k}"
                        )));
                    }
                }
            }
        }
        if let Some(th) = theta {
            for i in 0..d.n_roots() {
                if self.values[th.apply_root_index(i)] != self.values[i] {
                    return Err(Error::InvalidData(format!(
                        "a-data not theta-invariant at root {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Replaces each a_alpha by -a_alpha.
    pub fn negate(&self) -> AData {
        AData { datum: self.datum.clone(), values: self.values.iter().map(|v| v.neg()).collect() }
    }

    /// (c . A)_alpha = c_alpha a_alpha for an invariant scaling vector.
    pub fn scale(&self, c: &ScalingVector) -> Result<AData> {
        c.validate_weyl()?;
        if c.datum != self.datum {
            return Err(Error::DatumMismatch);
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.mul(&c.values[i]))
            .collect();
        Ok(AData { datum: self.datum.clone(), values })
    }

    /// Serialization per orbit representative of the negation-and-Gamma
    /// action; values elsewhere are recovered by transport.
    pub fn to_json(&self, twist: Option<&GammaTwist>) -> serde_json::Value {
        let d = &self.datum;
        let mut seen = vec![false; d.n_roots()];
        let mut orbits = Vec::new();
        for start in 0..d.n_roots() {
            if seen[start] {
                continue;
            }
            let mut members = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(i) = queue.pop() {
                let mut next = vec![d.neg_index(i)];
                if let Some(tw) = twist {
                    for k in 1..tw.order {
                        next.push(tw.act_root(k, i));
                    }
                }
                for j in next {
                    if !seen[j] {
                        seen[j] = true;
                        members.push(j);
                        queue.push(j);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(serde_json::json!({
                "representative": members[0] + 1,
                "value": self.values[members[0]].to_json(),
                "members": members.iter().map(|m| m + 1).collect::<Vec<_>>(),
                "transport": "negation-and-gamma",
            }));
        }
        serde_json::Value::Array(orbits)
    }

    /// Draws valid a-data for the twisted action: per orbit of the group
    /// generated by negation and the Gamma-action, a representative value is
    /// sampled consistently and propagated.
    pub fn random_valid(
        datum: &Arc<BasedRootDatum>,
        group: &Arc<CoeffGroup>,
        twist: &GammaTwist,
        theta: Option<&PinnedAutomorphism>,
        rng: &mut impl Rng,
    ) -> Result<AData> {
        // transform = (coefficient action, sign): value = act(rep) * (-1)^sign
        #[derive(Clone)]
        struct Transform {
            act: CoeffAction,
            sign: bool,
        }
        impl Transform {
            fn apply(&self, v: &KElem) -> KElem {
                let w = self.act.apply(v);
                if self.sign {
                    w.neg()
                } else {
                    w
                }
            }
        }
        fn invert_action(a: &CoeffAction, n: u64) -> CoeffAction {
            let mut inv_perm = vec![0usize; a.symbol_perm.len()];
            for (i, &p) in a.symbol_perm.iter().enumerate() {
                inv_perm[p] = i;
            }
            let mut zeta_inv = 1u64;
            for cand in 1..n {
                if (cand * a.zeta_mult) % n == 1 {
                    zeta_inv = cand;
                    break;
                }
            }
            CoeffAction { zeta_mult: zeta_inv, symbol_perm: inv_perm }
        }

        let d = datum;
        let n_roots = d.n_roots();
        let mut values: Vec<Option<KElem>> = vec![None; n_roots];
        let mut order: Vec<usize> = (0..n_roots).collect();
        order.shuffle(rng);

        // candidate pool for representatives
        let mut pool: Vec<KElem> = (0..group.n).map(|j| KElem::zeta_pow(group, j as i64)).collect();
        if let Ok(sym) = KElem::symbol(group, "a") {
            for j in 0..group.n {
                pool.push(sym.mul(&KElem::zeta_pow(group, j as i64)));
            }
        }

        for &start in &order {
            if values[start].is_some() {
                continue;
            }
            // explore the orbit of `start` under negation, sigma, theta
            let mut transforms: Vec<Option<Transform>> = vec![None; n_roots];
            transforms[start] =
                Some(Transform { act: CoeffAction::identity(group), sign: false });
            let mut queue = vec![start];
            let mut members = vec![start];
            let mut constraints: Vec<Transform> = Vec::new();
            while let Some(i) = queue.pop() {
                let ti = transforms[i].clone().unwrap();
                let mut steps: Vec<(usize, Transform)> = Vec::new();
                steps.push((
                    d.neg_index(i),
                    Transform { act: ti.act.clone(), sign: !ti.sign },
                ));
                for k in 1..twist.order {
                    let j = twist.act_root(k, i);
                    let act = twist.coeff_action(k).compose(&ti.act).reduce(group);
                    steps.push((j, Transform { act, sign: ti.sign }));
                }
                if let Some(th) = theta {
                    steps.push((th.apply_root_index(i), ti.clone()));
                }
                for (j, tj) in steps {
                    match &transforms[j] {
                        None => {
                            transforms[j] = Some(tj);
                            queue.push(j);
                            members.push(j);
                        }
                        Some(existing) => {
                            // constraint: existing(rep) = tj(rep), i.e.
                            // (existing^{-1} tj)(rep) = rep
                            let inv = invert_action(&existing.act, group.n);
                            let comb = Transform {
                                act: inv.compose(&tj.act).reduce(group),
                                sign: existing.sign != tj.sign,
                            };
                            constraints.push(comb);
                        }
                    }
                }
            }
            let mut candidates = pool.clone();
            candidates.shuffle(rng);
            let rep_val = candidates
                .into_iter()
                .find(|v| constraints.iter().all(|c| c.apply(v) == *v))
                .ok_or_else(|| {
                    Error::ConstructionFailure(
                        "no a-data value satisfies the orbit constraints".into(),
                    )
                })?;
            for &m in &members {
                values[m] = Some(transforms[m].as_ref().unwrap().apply(&rep_val));
            }
        }
        let out = AData {
            datum: d.clone(),
            values: values.into_iter().map(|v| v.unwrap()).collect(),
        };
        out.validate(Some(twist), theta)?;
        Ok(out)
    }
}

/// chi-data: per root a finite cyclic group Z/d_alpha and the image of its
/// canonical generator in K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiData {
    pub datum: Arc<BasedRootDatum>,
    pub orders: Vec<u64>,
    pub gens: Vec<KElem>,
}

impl ChiData {
    /// The trivial chi-data: every character is trivial.
    pub fn trivial(datum: &Arc<BasedRootDatum>, group: &Arc<CoeffGroup>) -> ChiData {
        ChiData {
            datum: datum.clone(),
            orders: vec![1; datum.n_roots()],
            gens: vec![KElem::one(group); datum.n_roots()],
        }
    }

    /// Constant chi-data with generator value of the given torsion order.
    pub fn of_torsion_order(
        datum: &Arc<BasedRootDatum>,
        group: &Arc<CoeffGroup>,
        order: u64,
    ) -> Result<ChiData> {
        if order == 0 || group.n % order != 0 {
            return Err(Error::InvalidData(format!("order {order} does not divide N")));
        }
        let g = KElem::zeta_pow(group, (group.n / order) as i64);
        let gens = (0..datum.n_roots())
            .map(|i| if datum.is_positive(i) { g.clone() } else { g.inv() })
            .collect();
        let out = ChiData { datum: datum.clone(), orders: vec![order; datum.n_roots()], gens };
        out.validate(None)?;
        Ok(out)
    }

    pub fn validate(&self, twist: Option<&GammaTwist>) -> Result<()> {
        let d = &self.datum;
        if self.orders.len() != d.n_roots() || self.gens.len() != d.n_roots() {
            return Err(Error::DimensionMismatch("chi-data length".into()));
        }
        for i in 0..d.n_roots() {
            let n = d.neg_index(i);
            if self.orders[n] != self.orders[i] {
                return Err(Error::InvalidData("chi-data orders differ across negation".into()));
            }
            if self.gens[n] != self.gens[i].inv() {
                return Err(Error::InvalidData(format!(
                    "chi-data breaks chi(-alpha) = chi(alpha)^-1 at root {i}"
                )));
            }
            match self.gens[i].torsion_order() {
                Some(o) if self.orders[i] % o == 0 => {}
                _ => {
                    return Err(Error::InvalidData(format!(
                        "chi-data generator image at root {i} has wrong order"
                    )))
                }
            }
        }
        if let Some(tw) = twist {
            // transport between D_alpha and D_{sigma alpha} is the identity
            for k in tw.elements() {
                for i in 0..d.n_roots() {
                    let j = tw.act_root(k, i);
                    if self.orders[j] != self.orders[i] || self.gens[j] != self.gens[i] {
                        return Err(Error::InvalidData(
                            "chi-data not transport-equivariant".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Replaces each chi_alpha by its inverse.
    pub fn negate(&self) -> ChiData {
        ChiData {
            datum: self.datum.clone(),
            orders: self.orders.clone(),
            gens: self.gens.iter().map(|g| g.inv()).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d = &self.datum;
        let reps: Vec<serde_json::Value> = d
            .positive()
            .map(|i| {
                serde_json::json!({
                    "root": i + 1,
                    "order": self.orders[i],
                    "generatorImage": self.gens[i].to_json(),
                })
            })
            .collect();
        serde_json::json!({ "positiveRoots": reps, "transport": "identity" })
    }
}

/// A Weyl- and Gamma-invariant collection c = (c_alpha).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingVector {
    pub datum: Arc<BasedRootDatum>,
    pub values: Vec<KElem>,
}

impl ScalingVector {
    pub fn constant(datum: &Arc<BasedRootDatum>, v: KElem) -> ScalingVector {
        ScalingVector { datum: datum.clone(), values: vec![v; datum.n_roots()] }
    }

    /// Assigns one value per Weyl orbit (length class), in orbit order.
    pub fn by_length_classes(datum: &Arc<BasedRootDatum>, vals: &[KElem]) -> ScalingVector {
        let orbits = weyl_orbits(datum);
        let mut values = vec![vals[0].clone(); datum.n_roots()];
        for (oi, orbit) in orbits.iter().enumerate() {
            let v = &vals[oi % vals.len()];
            for &i in orbit {
                values[i] = v.clone();
            }
        }
        ScalingVector { datum: datum.clone(), values }
    }

    pub fn group(&self) -> Arc<CoeffGroup> {
        self.values[0].group.clone()
    }

    pub fn value(&self, idx: usize) -> Result<KElem> {
        self.values
            .get(idx)
            .cloned()
            .ok_or_else(|| Error::DimensionMismatch("scaling index".into()))
    }

    /// Weyl invariance: c_{w alpha} = c_alpha.
    pub fn validate_weyl(&self) -> Result<()> {
        let d = &self.datum;
        if self.values.len() != d.n_roots() {
            return Err(Error::InvalidScaling("length mismatch".into()));
        }
        for s in 0..d.rank {
            let refl = WeylElem::reflection(d, s);
            for i in 0..d.n_roots() {
                let j = refl.apply_root_index(i);
                if self.values[j] != self.values[i] {
                    return Err(Error::InvalidScaling(format!(
                        "not Weyl-invariant at root {i} under s_{s}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full invariance under the Weyl group and the twisted Gamma-action.
    pub fn validate(&self, twist: Option<&GammaTwist>) -> Result<()> {
        self.validate_weyl()?;
        if let Some(tw) = twist {
            for k in tw.elements() {
                for i in 0..self.datum.n_roots() {
                    let j = tw.act_root(k, i);
                    if self.values[j] != tw.coeff_action(k).apply(&self.values[i]) {
                        return Err(Error::InvalidScaling(format!(
                            "not Gamma-invariant at root {i}, sigma^{k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn pointwise_mul(&self, o: &ScalingVector) -> Result<ScalingVector> {
        if self.datum != o.datum {
            return Err(Error::DatumMismatch);
        }
        Ok(ScalingVector {
            datum: self.datum.clone(),
            values: self.values.iter().zip(&o.values).map(|(a, b)| a.mul(b)).collect(),
        })
    }
}

/// Weyl orbits of the full root set (the length classes per component).
pub fn weyl_orbits(datum: &Arc<BasedRootDatum>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; datum.n_roots()];
    let refls: Vec<WeylElem> =
        (0..datum.rank).map(|i| WeylElem::reflection(datum, i)).collect();
    let mut orbits = Vec::new();
    for start in 0..datum.n_roots() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for r in &refls {
                let j = r.apply_root_index(i);
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                    queue.push(j);
                }
            }
            // -alpha = s_alpha(alpha) is already in the orbit
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Orbit type labels for theta-orbits of roots. R1/R2 follow the root-sum
/// classification; R3 is available only through a caller-supplied predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitType {
    R1,
    R2,
    R3,
}

impl std::fmt::Display for OrbitType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrbitType::R1 => write!(f, "R1"),
            OrbitType::R2 => write!(f, "R2"),
            OrbitType::R3 => write!(f, "R3"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ThetaOrbit {
    /// Sorted root indices.
    pub members: Vec<usize>,
    pub label: OrbitType,
}

pub type R3Predicate<'a> = &'a dyn Fn(&BasedRootDatum, &[usize]) -> bool;

/// Partitions the root set into <theta>-orbits with type labels: R2 when
/// two members sum to a root, R1 otherwise; an optional predicate may claim
/// orbits as R3 first.
pub fn theta_orbits(
    datum: &Arc<BasedRootDatum>,
    theta: &PinnedAutomorphism,
    r3: Option<R3Predicate>,
) -> Vec<ThetaOrbit> {
    let mut seen = vec![false; datum.n_roots()];
    let mut orbits = Vec::new();
    for start in 0..datum.n_roots() {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut i = start;
        loop {
            members.push(i);
            seen[i] = true;
            i = theta.apply_root_index(i);
            if i == start {
                break;
            }
        }
        members.sort_unstable();
        let label = classify_orbit(datum, &members, r3);
        orbits.push(ThetaOrbit { members, label });
    }
    orbits
}

pub fn classify_orbit(
    datum: &BasedRootDatum,
    members: &[usize],
    r3: Option<R3Predicate>,
) -> OrbitType {
    if let Some(pred) = r3 {
        if pred(datum, members) {
            return OrbitType::R3;
        }
    }
    for (ai, &a) in members.iter().enumerate() {
        for &b in &members[ai + 1..] {
            let sum: Vec<i64> =
                datum.roots[a].iter().zip(&datum.roots[b]).map(|(x, y)| x + y).collect();
            if datum.root_index(&sum).is_some() {
                return OrbitType::R2;
            }
        }
    }
    OrbitType::R1
}

/// True when negation maps each theta-orbit to an orbit with equal label.
/// Returns the offending orbit otherwise.
pub fn minus_one_preserves_orbits(
    datum: &Arc<BasedRootDatum>,
    theta: &PinnedAutomorphism,
) -> std::result::Result<(), ThetaOrbit> {
    let orbits = theta_orbits(datum, theta, None);
    for orbit in &orbits {
        let negated: Vec<usize> = {
            let mut v: Vec<usize> = orbit.members.iter().map(|&i| datum.neg_index(i)).collect();
            v.sort_unstable();
            v
        };
        let partner = orbits.iter().find(|o| o.members == negated);
        match partner {
            Some(p) if p.label == orbit.label => {}
            _ => return Err(orbit.clone()),
        }
    }
    Ok(())
}
