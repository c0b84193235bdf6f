//! Finite twisting data: a cyclic group Gamma_f acting on a based root
//! datum through a Weyl cocycle, an optional pinned (diagram) part, and an
//! action on the coefficient group K.
//!
//! The Weyl images satisfy the twisted condition
//! w(sigma tau) = w(sigma) * sigma(w(tau)), where sigma acts on the Weyl
//! group through the pinned part; with a trivial pinned part this is a
//! plain homomorphism.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rootdatum::{BasedRootDatum, PinnedAutomorphism};
use crate::tits::ExtWeylElem;
use crate::torus::{CoeffAction, CoeffGroup, TorusPoint};
use crate::weyl::WeylElem;

#[derive(Debug, Clone)]
pub struct GammaTwist {
    pub datum: Arc<BasedRootDatum>,
    pub coeff: Arc<CoeffGroup>,
    pub order: u64,
    /// w_S(sigma^k) for k = 0..order.
    weyl: Vec<WeylElem>,
    /// pinned part of sigma^k.
    pin: Vec<PinnedAutomorphism>,
    /// coefficient action of sigma^k.
    coeff_acts: Vec<CoeffAction>,
}

impl GammaTwist {
    pub fn trivial(datum: &Arc<BasedRootDatum>, coeff: &Arc<CoeffGroup>) -> GammaTwist {
        GammaTwist {
            datum: datum.clone(),
            coeff: coeff.clone(),
            order: 1,
            weyl: vec![WeylElem::identity(datum)],
            pin: vec![PinnedAutomorphism::identity(datum)],
            coeff_acts: vec![CoeffAction::identity(coeff)],
        }
    }

    pub fn new(
        datum: &Arc<BasedRootDatum>,
        coeff: &Arc<CoeffGroup>,
        order: u64,
        weyl_gen: WeylElem,
        pin_gen: Option<PinnedAutomorphism>,
        coeff_gen: CoeffAction,
    ) -> Result<GammaTwist> {
        if order == 0 {
            return Err(Error::InvalidData("gamma order must be positive".into()));
        }
        coeff_gen.validate(coeff)?;
        let pin_gen = pin_gen.unwrap_or_else(|| PinnedAutomorphism::identity(datum));
        if weyl_gen.datum != *datum || pin_gen.datum != *datum {
            return Err(Error::DatumMismatch);
        }
        let mut weyl = vec![WeylElem::identity(datum)];
        let mut pin = vec![PinnedAutomorphism::identity(datum)];
        let mut coeff_acts = vec![CoeffAction::identity(coeff)];
        for k in 1..=order {
            // twisted recursion: w(g^k) = w(g) * pin_g(w(g^{k-1}))
            let prev = &weyl[(k - 1) as usize];
            let twisted_word: Vec<usize> = prev.word.iter().map(|&i| pin_gen.perm[i]).collect();
            let twisted = WeylElem::from_word(datum, &twisted_word);
            weyl.push(weyl_gen.compose(&twisted));
            pin.push(pin_gen.compose(&pin[(k - 1) as usize]));
            coeff_acts.push(coeff_gen.compose(&coeff_acts[(k - 1) as usize]).reduce(coeff));
        }
        // closure at k = order
        if !weyl[order as usize].is_identity()
            || !pin[order as usize].is_identity()
            || !coeff_acts[order as usize].is_identity(coeff)
        {
            return Err(Error::InvalidData(format!(
                "generator data does not close at order {order}"
            )));
        }
        weyl.truncate(order as usize);
        pin.truncate(order as usize);
        coeff_acts.truncate(order as usize);
        Ok(GammaTwist { datum: datum.clone(), coeff: coeff.clone(), order, weyl, pin, coeff_acts })
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order
    }

    pub fn weyl_image(&self, k: u64) -> &WeylElem {
        &self.weyl[(k % self.order) as usize]
    }

    pub fn pinned_part(&self, k: u64) -> &PinnedAutomorphism {
        &self.pin[(k % self.order) as usize]
    }

    pub fn coeff_action(&self, k: u64) -> &CoeffAction {
        &self.coeff_acts[(k % self.order) as usize]
    }

    pub fn has_pinned_part(&self) -> bool {
        self.pin.iter().any(|p| !p.is_identity())
    }

    /// The twisted action of sigma^k on a root index:
    /// alpha -> w_S(sigma^k)(pin^k(alpha)).
    pub fn act_root(&self, k: u64, idx: usize) -> usize {
        let p = self.pinned_part(k).apply_root_index(idx);
        self.weyl_image(k).apply_root_index(p)
    }

    /// The twisted torus action of sigma^k on S(K): coefficient action,
    /// pinned action, then the Weyl twist.
    pub fn s_act(&self, k: u64, t: &TorusPoint) -> TorusPoint {
        t.coeff_apply(self.coeff_action(k))
            .pinned_apply(self.pinned_part(k))
            .weyl_apply(self.weyl_image(k))
    }

    /// The L-group coefficient action of sigma^k on the ambient group
    /// model: pinned and coefficient parts only (no Weyl twist; that part
    /// is carried by the section factors of an embedding).
    pub fn l_act(&self, k: u64, e: &ExtWeylElem) -> ExtWeylElem {
        e.coeff_apply(self.coeff_action(k)).pinned_apply(self.pinned_part(k))
    }

    pub fn l_act_torus(&self, k: u64, t: &TorusPoint) -> TorusPoint {
        t.coeff_apply(self.coeff_action(k)).pinned_apply(self.pinned_part(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdatum::{Isogeny, TypeLetter};
    use crate::torus::KElem;

    #[test]
    fn order_two_weyl_twist() {
        let d = BasedRootDatum::build(TypeLetter::A, 1, Isogeny::SimplyConnected).unwrap();
        let g = CoeffGroup::standard();
        let s = WeylElem::reflection(&d, 0);
        let tw = GammaTwist::new(&d, &g, 2, s, None, CoeffAction::inversion(&g)).unwrap();
        assert_eq!(tw.act_root(1, 0), d.neg_index(0));
        assert_eq!(tw.act_root(0, 0), 0);
        // acting twice is the identity
        let x = KElem::symbol(&g, "a").unwrap();
        let t = TorusPoint::eval_cocharacter(&d, &[1], &x);
        assert_eq!(tw.s_act(1, &tw.s_act(1, &t)), t);
    }

    #[test]
    fn non_closing_generator_rejected() {
        let d = BasedRootDatum::build(TypeLetter::A, 2, Isogeny::SimplyConnected).unwrap();
        let g = CoeffGroup::standard();
        let s = WeylElem::reflection(&d, 0);
        // s has order 2, not 3
        assert!(GammaTwist::new(&d, &g, 3, s, None, CoeffAction::identity(&g)).is_err());
    }

    #[test]
    fn order_three_rotation() {
        let d = BasedRootDatum::build(TypeLetter::A, 2, Isogeny::SimplyConnected).unwrap();
        let g = CoeffGroup::standard();
        let rot = WeylElem::from_word(&d, &[0, 1]);
        let tw = GammaTwist::new(&d, &g, 3, rot, None, CoeffAction::identity(&g)).unwrap();
        assert_eq!(tw.weyl_image(2), &WeylElem::from_word(&d, &[0, 1]).invert());
    }

    #[test]
    fn pinned_flip_twist() {
        let d = BasedRootDatum::build(TypeLetter::A, 2, Isogeny::Adjoint).unwrap();
        let g = CoeffGroup::standard();
        let flip = PinnedAutomorphism::from_simple_perm(&d, &[1, 0]).unwrap();
        let tw = GammaTwist::new(
            &d,
            &g,
            2,
            WeylElem::identity(&d),
            Some(flip),
            CoeffAction::identity(&g),
        )
        .unwrap();
        assert!(tw.has_pinned_part());
        assert_eq!(tw.act_root(1, 0), 1);
    }
}
