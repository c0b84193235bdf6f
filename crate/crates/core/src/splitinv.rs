//! The cochain core of the splitting invariant and the mechanical check of
//! the rescaling lemma: for a twisted torus datum, a-data A and an
//! invariant scaling c, the cochain
//!     sigma -> prod_{alpha>0, w_S(sigma)^{-1} alpha<0} alpha^vee(a_alpha)
//!              * n_{c.spl}(w_S(sigma))
//! computed with rescaled pinning equals the one computed from the scaled
//! a-data c.A with the original pinning. The alignment coboundary
//! sigma(h^{-1})h plays no role at this level and is never represented.
//!
//! Both products run over the positive roots made negative by the inverse
//! of w_S(sigma): that is the index set the generator-lift fold produces,
//! and the comparison is exact only when the a-product uses the same set.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chidata::{weyl_orbits, AData, ScalingVector};
use crate::error::{Error, Result};
use crate::rootdatum::{BasedRootDatum, TypeLetter};
use crate::tits::{rescaled_section_folded, ExtWeylElem};
use crate::torus::{CoeffAction, CoeffGroup, KElem, TorusPoint};
use crate::twist::GammaTwist;
use crate::weyl::{WeylElem, WeylGroup};

/// Computes the cochain core for every element of Gamma_f. The rescaled
/// section is folded from the rescaled generator lifts, so the rescaling
/// lemma is exercised rather than assumed.
pub fn splitting_invariant_core(
    twist: &GammaTwist,
    a: &AData,
    c: &ScalingVector,
) -> Result<Vec<ExtWeylElem>> {
    a.validate(Some(twist), None)?;
    c.validate(Some(twist))?;
    let d = &twist.datum;
    let mut out = Vec::with_capacity(twist.order as usize);
    for k in twist.elements() {
        let w = twist.weyl_image(k);
        let mut prefactor = TorusPoint::identity(d, &twist.coeff);
        for idx in w.invert().inversion_set() {
            prefactor = prefactor
                .mul(&TorusPoint::eval_cocharacter(d, &d.coroots[idx], a.value(idx)));
        }
        let section = rescaled_section_folded(c, w)?;
        out.push(section.torus_mul_left(&prefactor));
    }
    Ok(out)
}

/// A failed comparison, reported with the offending group element.
#[derive(Debug, Clone)]
pub struct SplcngWitness {
    pub sigma: u64,
    pub lhs: ExtWeylElem,
    pub rhs: ExtWeylElem,
}

/// Checks lambda-core(A, c.spl) = lambda-core(c.A, spl) elementwise.
pub fn verify_splcng(
    twist: &GammaTwist,
    a: &AData,
    c: &ScalingVector,
) -> Result<std::result::Result<(), Box<SplcngWitness>>> {
    let lhs = splitting_invariant_core(twist, a, c)?;
    let ones = ScalingVector::constant(&twist.datum, KElem::one(&twist.coeff));
    let scaled = a.scale(c)?;
    let rhs = splitting_invariant_core(twist, &scaled, &ones)?;
    for k in twist.elements() {
        let (l, r) = (&lhs[k as usize], &rhs[k as usize]);
        if l != r {
            return Ok(Err(Box::new(SplcngWitness { sigma: k, lhs: l.clone(), rhs: r.clone() })));
        }
        // core values lie over w_S(sigma) exactly
        if &l.weyl != twist.weyl_image(k) {
            return Err(Error::ConstructionFailure(
                "core value has the wrong Weyl part".into(),
            ));
        }
    }
    Ok(Ok(()))
}

/// One random instance of the rescaling suite.
pub struct SplcngInstance {
    pub twist: GammaTwist,
    pub adata: AData,
    pub scaling: ScalingVector,
}

/// Draws a random twisted datum (Weyl image of the generator among elements
/// of compatible order, coefficient action of matching order), valid a-data
/// and an invariant scaling vector.
pub fn random_instance(
    datum: &Arc<BasedRootDatum>,
    coeff: &Arc<CoeffGroup>,
    gamma_order: u64,
    rng: &mut impl Rng,
) -> Result<SplcngInstance> {
    let wg = WeylGroup::enumerate(datum, crate::weyl::DEFAULT_WEYL_CAP)?;
    let candidates: Vec<&WeylElem> = wg
        .elements
        .iter()
        .filter(|w| {
            let mut p = WeylElem::identity(datum);
            for _ in 0..gamma_order {
                p = p.compose(w);
            }
            p.is_identity()
        })
        .collect();
    let coeff_choices: Vec<CoeffAction> = match gamma_order {
        2 => vec![CoeffAction::identity(coeff), CoeffAction::inversion(coeff)],
        _ => vec![CoeffAction::identity(coeff)],
    };
    for _attempt in 0..40 {
        let w_gen = (*candidates.choose(rng).expect("identity is always available")).clone();
        let act = coeff_choices.choose(rng).unwrap().clone();
        let twist = match GammaTwist::new(datum, coeff, gamma_order, w_gen, None, act) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let adata = match AData::random_valid(datum, coeff, &twist, None, rng) {
            Ok(a) => a,
            Err(_) => continue,
        };
        // scaling values: fixed symbols and signs, one per Weyl orbit
        let orbit_count = weyl_orbits(datum).len();
        let pool = [
            KElem::symbol(coeff, "c1").unwrap(),
            KElem::symbol(coeff, "c2").unwrap(),
            KElem::minus_one(coeff),
            KElem::symbol(coeff, "c1").unwrap().inv(),
            KElem::one(coeff),
        ];
        let vals: Vec<KElem> =
            (0..orbit_count).map(|_| pool.choose(rng).unwrap().clone()).collect();
        let scaling = ScalingVector::by_length_classes(datum, &vals);
        if scaling.validate(Some(&twist)).is_err() {
            continue;
        }
        return Ok(SplcngInstance { twist, adata, scaling });
    }
    Err(Error::ConstructionFailure(
        "could not draw a valid splitting-invariant instance".into(),
    ))
}

/// Runs `count` random instances over the given types; returns the failing
/// witness if any.
pub fn random_suite(
    types: &[(TypeLetter, usize)],
    gamma_orders: &[u64],
    count: usize,
    coeff: &Arc<CoeffGroup>,
    rng: &mut impl Rng,
) -> Result<std::result::Result<usize, Box<SplcngWitness>>> {
    let mut data: Vec<Arc<BasedRootDatum>> = Vec::new();
    for &(l, r) in types {
        data.push(BasedRootDatum::build(l, r, crate::rootdatum::Isogeny::SimplyConnected)?);
    }
    let mut done = 0;
    while done < count {
        let datum = &data[done % data.len()];
        let order = gamma_orders[done % gamma_orders.len()];
        let inst = random_instance(datum, coeff, order, rng)?;
        match verify_splcng(&inst.twist, &inst.adata, &inst.scaling)? {
            Ok(()) => done += 1,
            Err(w) => return Ok(Err(w)),
        }
    }
    Ok(Ok(done))
}
