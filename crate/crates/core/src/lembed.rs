//! Finite-model L-embeddings of a twisted torus into the ambient group
//! model, and the mechanical verification of the chi-data inversion
//! diagram: Chev o emb_X = Ad(t) o emb_{-X} o (-1) on S x Gamma_f.
//!
//! The r-cochain of an embedding is axiomatized by exactly the two
//! properties the argument uses: the embedding it defines is a group
//! homomorphism, and negating the chi-data inverts the cochain pointwise.

use std::sync::Arc;

use crate::chevalley::{t_element, ChevalleyInvolution};
use crate::chidata::ChiData;
use crate::error::{Error, Result};
use crate::tits::ExtWeylElem;
use crate::torus::{KElem, TorusPoint};
use crate::twist::GammaTwist;

/// An element of the model L-group: an N(T)-valued part and a Gamma_f
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LElem {
    pub g: ExtWeylElem,
    pub gamma: u64,
}

/// An element of S x| Gamma_f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SElem {
    pub t: TorusPoint,
    pub gamma: u64,
}

/// Multiplication in the model L-group: Gamma_f acts through its pinned and
/// coefficient parts.
pub fn l_mul(twist: &GammaTwist, a: &LElem, b: &LElem) -> LElem {
    LElem {
        g: a.g.mul(&twist.l_act(a.gamma, &b.g)),
        gamma: (a.gamma + b.gamma) % twist.order,
    }
}

/// Multiplication in S x| Gamma_f: the torus action includes the Weyl
/// twist.
pub fn s_mul(twist: &GammaTwist, a: &SElem, b: &SElem) -> SElem {
    SElem {
        t: a.t.mul(&twist.s_act(a.gamma, &b.t)),
        gamma: (a.gamma + b.gamma) % twist.order,
    }
}

/// The involution (s, w) -> (s^{-1}, w).
pub fn minus_one_on_ls(s: &SElem) -> SElem {
    SElem { t: s.t.inv(), gamma: s.gamma }
}

/// Conjugation of an L-group element by a torus point.
pub fn ad_torus(twist: &GammaTwist, t: &TorusPoint, x: &LElem) -> LElem {
    let right = twist.l_act_torus(x.gamma, t).inv();
    LElem {
        g: x.g.torus_mul_left(t).mul(&ExtWeylElem::from_torus(right)),
        gamma: x.gamma,
    }
}

/// The L-group extension of the Chevalley involution: (g, w) -> (C(g), w).
pub fn apply_lc(chev: &ChevalleyInvolution, x: &LElem) -> LElem {
    LElem { g: chev.ext_map(&x.g), gamma: x.gamma }
}

/// The r-cochain of an embedding: a torus value per Gamma_f element,
/// labelled by its chi-data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RCochain {
    pub values: Vec<TorusPoint>,
    pub label: ChiData,
}

impl RCochain {
    pub fn trivial(twist: &GammaTwist, label: ChiData) -> RCochain {
        let id = TorusPoint::identity(&twist.datum, &twist.coeff);
        RCochain { values: vec![id; twist.order as usize], label }
    }

    pub fn value(&self, k: u64) -> &TorusPoint {
        &self.values[(k as usize) % self.values.len()]
    }

    /// The cochain attached to the negated chi-data: the pointwise inverse.
    pub fn negate(&self) -> RCochain {
        RCochain {
            values: self.values.iter().map(|t| t.inv()).collect(),
            label: self.label.negate(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, t)| (format!("sigma^{k}"), t.to_json()))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// An executable embedding (s, w) -> (xi(s) r(w) n(sigma_S(w)), w).
pub struct LEmbedding {
    pub twist: Arc<GammaTwist>,
    pub r: RCochain,
}

impl LEmbedding {
    /// Builds the embedding after verifying the homomorphism property
    /// exhaustively over Gamma_f x Gamma_f (the torus part passes through
    /// automatically and is checked on generator sample points).
    pub fn build(twist: &Arc<GammaTwist>, r: RCochain) -> Result<LEmbedding> {
        if r.values.len() != twist.order as usize {
            return Err(Error::InvalidRCochain("cochain length".into()));
        }
        if !r.values[0].is_identity() {
            return Err(Error::InvalidRCochain("r(e) must be the identity".into()));
        }
        let emb = LEmbedding { twist: twist.clone(), r };
        if let Err((a, b)) = check_homomorphism(twist, &|s| emb.map(s)) {
            return Err(Error::InvalidRCochain(format!(
                "homomorphism fails at gamma pair ({}, {})",
                a, b
            )));
        }
        Ok(emb)
    }

    pub fn map(&self, s: &SElem) -> LElem {
        let torus = s.t.mul(self.r.value(s.gamma));
        let section = ExtWeylElem::section(self.twist.weyl_image(s.gamma), &self.twist.coeff);
        LElem { g: ExtWeylElem::from_torus(torus).mul(&section), gamma: s.gamma }
    }
}

/// Sample points of S used in the exhaustive checks: the identity, each
/// cocharacter basis vector carrying a free symbol, and a root of unity.
pub fn s_sample_points(twist: &GammaTwist) -> Vec<TorusPoint> {
    let d = &twist.datum;
    let g = &twist.coeff;
    let mut out = vec![TorusPoint::identity(d, g)];
    if let Ok(sym) = KElem::symbol(g, "a") {
        for i in 0..d.dim {
            let mut mu = vec![0i64; d.dim];
            mu[i] = 1;
            out.push(TorusPoint::eval_cocharacter(d, &mu, &sym));
        }
    }
    let zeta = KElem::zeta_pow(g, 1);
    let mut mu = vec![0i64; d.dim];
    mu[0] = 1;
    out.push(TorusPoint::eval_cocharacter(d, &mu, &zeta));
    out
}

/// Exhaustive homomorphism check for a candidate map S x| Gamma_f -> L.
pub fn check_homomorphism(
    twist: &GammaTwist,
    f: &dyn Fn(&SElem) -> LElem,
) -> std::result::Result<(), (u64, u64)> {
    let samples = s_sample_points(twist);
    for ga in twist.elements() {
        for gb in twist.elements() {
            for ta in &samples {
                for tb in &samples {
                    let a = SElem { t: ta.clone(), gamma: ga };
                    let b = SElem { t: tb.clone(), gamma: gb };
                    let lhs = l_mul(twist, &f(&a), &f(&b));
                    let rhs = f(&s_mul(twist, &a, &b));
                    if lhs != rhs {
                        return Err((ga, gb));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A failed diagram comparison.
#[derive(Debug, Clone)]
pub struct ChiInvWitness {
    pub gamma: u64,
    pub lhs: ExtWeylElem,
    pub rhs: ExtWeylElem,
}

/// Verifies Chev o emb_X = Ad(t) o emb_{-X} o (-1) on the sample points
/// times all of Gamma_f; emb_neg must be built from the pointwise-inverse
/// cochain.
pub fn verify_chi_inv(
    chev: &ChevalleyInvolution,
    emb: &LEmbedding,
    emb_neg: &LEmbedding,
    other_root: bool,
) -> Result<std::result::Result<(), Box<ChiInvWitness>>> {
    let twist = &emb.twist;
    if emb_neg.r != emb.r.negate() {
        return Err(Error::InvalidRCochain(
            "second embedding is not built from the negated cochain".into(),
        ));
    }
    let t = t_element(&twist.datum, &twist.coeff, other_root);
    verify_chi_inv_with_lift(chev, emb, emb_neg, &t)
}

/// Same as [`verify_chi_inv`] but with a caller-chosen lift t; the outcome
/// is insensitive to replacing t by a Gamma-fixed central multiple.
pub fn verify_chi_inv_with_lift(
    chev: &ChevalleyInvolution,
    emb: &LEmbedding,
    emb_neg: &LEmbedding,
    t: &TorusPoint,
) -> Result<std::result::Result<(), Box<ChiInvWitness>>> {
    let twist = &emb.twist;
    for tp in s_sample_points(twist) {
        for gamma in twist.elements() {
            let s = SElem { t: tp.clone(), gamma };
            let lhs = apply_lc(chev, &emb.map(&s));
            let rhs = ad_torus(twist, t, &emb_neg.map(&minus_one_on_ls(&s)));
            if lhs != rhs {
                return Ok(Err(Box::new(ChiInvWitness { gamma, lhs: lhs.g, rhs: rhs.g })));
            }
        }
    }
    Ok(Ok(()))
}

/// Brute-force search for r-cochains with coordinate entries of torsion
/// order dividing `order_bound` that satisfy the homomorphism property.
pub fn search_rcochains(
    twist: &Arc<GammaTwist>,
    label: &ChiData,
    order_bound: u64,
) -> Result<Vec<RCochain>> {
    let d = &twist.datum;
    let g = &twist.coeff;
    if g.n % order_bound != 0 {
        return Err(Error::InvalidData(format!(
            "order bound {order_bound} does not divide N = {}",
            g.n
        )));
    }
    let step = (g.n / order_bound) as i64;
    let entries: Vec<KElem> =
        (0..order_bound).map(|k| KElem::zeta_pow(g, k as i64 * step)).collect();
    // all coordinate vectors over the entry set
    let mut points = vec![TorusPoint::identity(d, g)];
    for dim in 0..d.dim {
        let mut next = Vec::new();
        for p in &points {
            for e in &entries {
                let mut q = p.clone();
                q.coords[dim] = e.clone();
                next.push(q);
            }
        }
        points = next;
    }
    let free = twist.order as usize - 1;
    let mut found = Vec::new();
    let mut idx = vec![0usize; free];
    loop {
        let mut values = vec![TorusPoint::identity(d, g)];
        for k in 0..free {
            values.push(points[idx[k]].clone());
        }
        let cand = RCochain { values, label: label.clone() };
        if LEmbedding::build(twist, cand.clone()).is_ok() {
            found.push(cand);
        }
        let mut carry = true;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < points.len() {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if carry || free == 0 {
            break;
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdatum::{BasedRootDatum, Isogeny, PinnedAutomorphism, TypeLetter};
    use crate::torus::{CoeffAction, CoeffGroup};
    use crate::weyl::WeylElem;

    fn coeff() -> Arc<CoeffGroup> {
        CoeffGroup::standard()
    }

    #[test]
    fn trivial_gamma_embedding() {
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::Adjoint).unwrap();
        let g = coeff();
        let tw = Arc::new(GammaTwist::trivial(&d, &g));
        let emb =
            LEmbedding::build(&tw, RCochain::trivial(&tw, ChiData::trivial(&d, &g))).unwrap();
        let sym = KElem::symbol(&g, "a").unwrap();
        let s = SElem { t: TorusPoint::eval_cocharacter(&d, &[1], &sym), gamma: 0 };
        let img = emb.map(&s);
        assert_eq!(img.g.torus, s.t);
        assert!(img.g.weyl.is_identity());
    }

    #[test]
    fn adjoint_a1_weyl_twist_accepts_all_small_cochains() {
        // dual A1 = adjoint datum: alpha^vee(-1) is trivial, so every
        // 2-torsion candidate passes the homomorphism check
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::Adjoint).unwrap();
        let g = coeff();
        let s = WeylElem::reflection(&d, 0);
        let tw = Arc::new(
            GammaTwist::new(&d, &g, 2, s, None, CoeffAction::identity(&g)).unwrap(),
        );
        let found = search_rcochains(&tw, &ChiData::trivial(&d, &g), 2).unwrap();
        assert_eq!(found.len(), 2);
    }

    #[test]
    fn sc_a1_weyl_twist_rejects_all_cochains() {
        // on the simply-connected datum n(s)^2 = alpha^vee(-1) is a genuine
        // obstruction: no torsion cochain closes the square
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::SimplyConnected).unwrap();
        let g = coeff();
        let s = WeylElem::reflection(&d, 0);
        let tw = Arc::new(
            GammaTwist::new(&d, &g, 2, s, None, CoeffAction::identity(&g)).unwrap(),
        );
        let found = search_rcochains(&tw, &ChiData::trivial(&d, &g), 4).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn minus_one_is_involutive_homomorphism() {
        let d = BasedRootDatum::build(TypeLetter::A, 2, Isogeny::Adjoint).unwrap();
        let g = coeff();
        let tw = GammaTwist::trivial(&d, &g);
        for t in s_sample_points(&tw) {
            let s = SElem { t, gamma: 0 };
            assert_eq!(minus_one_on_ls(&minus_one_on_ls(&s)), s);
        }
    }

    #[test]
    fn chiinv_trivial_gamma() {
        let g = coeff();
        for (l, r) in [(TypeLetter::A, 1), (TypeLetter::A, 2), (TypeLetter::B, 2)] {
            let d = BasedRootDatum::build(l, r, Isogeny::Adjoint).unwrap();
            let chev = ChevalleyInvolution::build(&d, &g).unwrap();
            let tw = Arc::new(GammaTwist::trivial(&d, &g));
            let emb =
                LEmbedding::build(&tw, RCochain::trivial(&tw, ChiData::trivial(&d, &g))).unwrap();
            let emb_neg = LEmbedding::build(&tw, emb.r.negate()).unwrap();
            assert!(verify_chi_inv(&chev, &emb, &emb_neg, false).unwrap().is_ok());
        }
    }

    #[test]
    fn chiinv_a1_weyl_twist_all_cochains() {
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::Adjoint).unwrap();
        let g = coeff();
        let chev = ChevalleyInvolution::build(&d, &g).unwrap();
        let s = WeylElem::reflection(&d, 0);
        let tw = Arc::new(
            GammaTwist::new(&d, &g, 2, s, None, CoeffAction::identity(&g)).unwrap(),
        );
        let label = ChiData::of_torsion_order(&d, &g, 4).unwrap();
        let found = search_rcochains(&tw, &label, 4).unwrap();
        assert!(!found.is_empty());
        for r in found {
            let emb = LEmbedding::build(&tw, r).unwrap();
            let emb_neg = LEmbedding::build(&tw, emb.r.negate()).unwrap();
            assert!(verify_chi_inv(&chev, &emb, &emb_neg, false).unwrap().is_ok());
            assert!(verify_chi_inv(&chev, &emb, &emb_neg, true).unwrap().is_ok());
        }
    }

    #[test]
    fn chiinv_a2_flip_twisted() {
        let d = BasedRootDatum::build(TypeLetter::A, 2, Isogeny::Adjoint).unwrap();
        let g = coeff();
        let chev = ChevalleyInvolution::build(&d, &g).unwrap();
        let flip = PinnedAutomorphism::from_simple_perm(&d, &[1, 0]).unwrap();
        let tw = Arc::new(
            GammaTwist::new(
                &d,
                &g,
                2,
                WeylElem::identity(&d),
                Some(flip),
                CoeffAction::identity(&g),
            )
            .unwrap(),
        );
        let label = ChiData::of_torsion_order(&d, &g, 4).unwrap();
        let found = search_rcochains(&tw, &label, 2).unwrap();
        assert!(!found.is_empty());
        for r in found {
            let emb = LEmbedding::build(&tw, r).unwrap();
            let emb_neg = LEmbedding::build(&tw, emb.r.negate()).unwrap();
            assert!(verify_chi_inv(&chev, &emb, &emb_neg, false).unwrap().is_ok());
        }
    }

    #[test]
    fn rejected_cochain_reports_witness_pair() {
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::SimplyConnected).unwrap();
        let g = coeff();
        let s = WeylElem::reflection(&d, 0);
        let tw = Arc::new(
            GammaTwist::new(&d, &g, 2, s, None, CoeffAction::identity(&g)).unwrap(),
        );
        let r = RCochain::trivial(&tw, ChiData::trivial(&d, &g));
        assert!(matches!(
            LEmbedding::build(&tw, r),
            Err(Error::InvalidRCochain(_))
        ));
    }

    #[test]
    fn apply_lc_examples() {
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::SimplyConnected).unwrap();
        let g = coeff();
        let chev = ChevalleyInvolution::build(&d, &g).unwrap();
        let tw = Arc::new(GammaTwist::trivial(&d, &g));
        // (1, sigma) -> (1, sigma)
        let id = LElem { g: ExtWeylElem::identity(&d, &g), gamma: 0 };
        assert_eq!(apply_lc(&chev, &id), id);
        // torus points map by inversion
        let sym = KElem::symbol(&g, "a").unwrap();
        let t = TorusPoint::eval_cocharacter(&d, &d.coroots[0], &sym);
        let x = LElem { g: ExtWeylElem::from_torus(t.clone()), gamma: 0 };
        assert_eq!(apply_lc(&chev, &x).g, ExtWeylElem::from_torus(t.inv()));
        // involutive on n(w0)
        let w0 = crate::weyl::longest_element(&d);
        let n = LElem { g: ExtWeylElem::section(&w0, &g), gamma: 0 };
        assert_eq!(apply_lc(&chev, &apply_lc(&chev, &n)), n);
        let _ = tw;
    }

    #[test]
    fn chiinv_insensitive_to_central_lift_change() {
        // replacing t by t*z for a central Gamma-fixed z does not change
        // the outcome; on the simply-connected A1 datum z = alpha^vee(-1)
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::SimplyConnected).unwrap();
        let g = coeff();
        let chev = ChevalleyInvolution::build(&d, &g).unwrap();
        let tw = Arc::new(GammaTwist::trivial(&d, &g));
        let emb =
            LEmbedding::build(&tw, RCochain::trivial(&tw, ChiData::trivial(&d, &g))).unwrap();
        let neg = LEmbedding::build(&tw, emb.r.negate()).unwrap();
        let t = crate::chevalley::t_element(&d, &g, false);
        let z = TorusPoint::eval_cocharacter(&d, &d.coroots[0], &KElem::minus_one(&g));
        // z is central: every root evaluates to 1 on it
        assert!(z.eval_root(&d.roots[0]).is_one());
        assert!(verify_chi_inv_with_lift(&chev, &emb, &neg, &t).unwrap().is_ok());
        assert!(verify_chi_inv_with_lift(&chev, &emb, &neg, &t.mul(&z)).unwrap().is_ok());
    }

    #[test]
    fn closure_under_the_conjugated_negation() {
        // if emb passes the homomorphism check, so does
        // Ad(t) o emb_neg o (-1)
        let d = BasedRootDatum::build(TypeLetter::A, 2, Isogeny::Adjoint).unwrap();
        let g = coeff();
        let rot = WeylElem::from_word(&d, &[0, 1]);
        let tw = Arc::new(
            GammaTwist::new(&d, &g, 3, rot, None, CoeffAction::identity(&g)).unwrap(),
        );
        let label = ChiData::trivial(&d, &g);
        let found = search_rcochains(&tw, &label, 2).unwrap();
        assert!(!found.is_empty());
        let t = t_element(&d, &g, false);
        for r in found {
            let emb = LEmbedding::build(&tw, r).unwrap();
            let emb_neg = LEmbedding::build(&tw, emb.r.negate()).unwrap();
            let composite = |s: &SElem| ad_torus(&tw, &t, &emb_neg.map(&minus_one_on_ls(s)));
            assert!(check_homomorphism(&tw, &composite).is_ok());
        }
    }
}
