//! Construction and verification of the Chevalley involution: the unique
//! pinned-opposition automorphism sending each simple root vector X_alpha
//! to X_{-alpha}, built as Ad(n(w0) t0) composed with the pinned
//! automorphism extending -w0. The torus correction t0 is solved from the
//! sign conditions in a matrix model of the same root system.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclo::{Cyc, CycField};
use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::models::{self, MatrixGroupModel, ModelAut};
use crate::rootdatum::{BasedRootDatum, PinnedAutomorphism};
use crate::snf::{solve_mod, IntMat};
use crate::tits::{rho_i_point, ExtWeylElem};
use crate::torus::{CoeffGroup, KElem, TorusPoint};
use crate::weyl::{longest_element, WeylElem};

pub struct ChevalleyInvolution {
    pub datum: Arc<BasedRootDatum>,
    pub coeff: Arc<CoeffGroup>,
    pub w0: WeylElem,
    /// The pinned automorphism extending -w0 (the outer class of the
    /// involution).
    pub diagram: PinnedAutomorphism,
    /// Torus correction aligning Ad(n(w0)) with the opposite pinning.
    pub t0: TorusPoint,
    /// Conjugation signs Ad(n(w0)) X_{alpha_{delta(i)}} = eps_i X_{-alpha_i},
    /// read off the oracle model.
    pub epsilons: Vec<i64>,
}

impl ChevalleyInvolution {
    /// Builds the involution for a datum whose root system has a classical
    /// matrix model. The model supplies the conjugation signs; t0 is solved
    /// in the datum's own cocharacter lattice.
    pub fn build(datum: &Arc<BasedRootDatum>, coeff: &Arc<CoeffGroup>) -> Result<Self> {
        let field = CycField::new(coeff.n);
        let model = models::realize(datum.letter, datum.rank, &field)?;
        Self::build_with_model(datum, coeff, &model)
    }

    pub fn build_with_model(
        datum: &Arc<BasedRootDatum>,
        coeff: &Arc<CoeffGroup>,
        model: &MatrixGroupModel,
    ) -> Result<Self> {
        if model.field.order() != coeff.n {
            return Err(Error::DimensionMismatch("model field order".into()));
        }
        let w0 = longest_element(datum);
        let delta = opposition_permutation(datum, &w0)?;
        let diagram = PinnedAutomorphism::from_simple_perm(datum, &delta)?;

        // signs in the oracle model (same root system, so the same delta)
        let model_w0 = longest_element(&model.datum);
        let model_delta = opposition_permutation(&model.datum, &model_w0)?;
        if model_delta != delta {
            return Err(Error::ConstructionFailure(
                "model and datum disagree on the opposition permutation".into(),
            ));
        }
        let n_mat = model.weyl_matrix(&model_w0)?;
        let n_inv = n_mat.inverse();
        let mut epsilons = Vec::with_capacity(datum.rank);
        for i in 0..datum.rank {
            let conj = n_mat.mul(&model.x_pos[delta[i]]).mul(&n_inv);
            let c = conj.scalar_multiple_of(&model.x_neg[i]).ok_or_else(|| {
                Error::ConstructionFailure(format!(
                    "Ad(n(w0)) X_{} is not proportional to X_{{-{}}}",
                    delta[i], i
                ))
            })?;
            let eps = if c.is_one() {
                1
            } else if c == Cyc::from_i64(&model.field, -1) {
                -1
            } else {
                return Err(Error::ConstructionFailure(
                    "non-unit conjugation sign in the model".into(),
                ));
            };
            epsilons.push(eps);
        }

        // solve alpha_{delta(i)}(t0) = eps_i over mu_N, lexicographically
        // least exponent vector
        let n = coeff.n as i64;
        let a = IntMat::from_rows(
            &(0..datum.rank).map(|i| datum.roots[delta[i]].clone()).collect::<Vec<_>>(),
        );
        let target: Vec<i64> =
            epsilons.iter().map(|&e| if e == 1 { 0 } else { n / 2 }).collect();
        let sols = solve_mod(&a, &target, n, 100_000);
        let x = sols.first().ok_or_else(|| {
            Error::ConstructionFailure("no torus correction t0 over mu_N".into())
        })?;
        let t0 = TorusPoint {
            datum: datum.clone(),
            coords: x.iter().map(|&e| KElem::zeta_pow(coeff, e)).collect(),
        };

        // the composite inverts the torus: cochar action of
        // Ad(n(w0)) o pinned(-w0) is -identity
        let composite = w0.cochar_mat.mul(&diagram.cochar_mat);
        let mut minus = IntMat::identity(datum.dim);
        for i in 0..datum.dim {
            minus[(i, i)] = -1;
        }
        if composite != minus {
            return Err(Error::ConstructionFailure(
                "composite does not invert the torus".into(),
            ));
        }

        Ok(ChevalleyInvolution {
            datum: datum.clone(),
            coeff: coeff.clone(),
            w0,
            diagram,
            t0,
            epsilons,
        })
    }

    /// The conjugator E = n(w0) t0 as an extended Weyl element.
    pub fn conjugator(&self) -> ExtWeylElem {
        ExtWeylElem::section(&self.w0, &self.coeff).mul(&ExtWeylElem::from_torus(self.t0.clone()))
    }

    /// Action on the torus: inversion.
    pub fn torus_map(&self, t: &TorusPoint) -> TorusPoint {
        t.pinned_apply(&self.diagram).weyl_apply(&self.w0)
    }

    /// Action on the extended Weyl group model of N(T).
    pub fn ext_map(&self, e: &ExtWeylElem) -> ExtWeylElem {
        let theta = e.pinned_apply(&self.diagram);
        let conj = self.conjugator();
        conj.mul(&theta).mul(&conj.inv())
    }

    /// The induced map on the character lattice (as a matrix); equals minus
    /// the identity.
    pub fn char_lattice_map(&self) -> IntMat {
        self.w0.char_mat.mul(&self.diagram.char_mat)
    }

    /// Concrete matrix realization on a model of the same datum.
    pub fn model_maps(&self, model: &MatrixGroupModel) -> Result<ChevalleyModelMaps> {
        if model.datum != self.datum {
            return Err(Error::DatumMismatch);
        }
        let theta = model.realize_pinned(&self.diagram)?;
        let assign = BTreeMap::new();
        let t0_mat = model.torus_matrix(&self.t0, &assign)?;
        let e_mat = model.weyl_matrix(&self.w0)?.mul(&t0_mat);
        let e_inv = e_mat.inverse();
        Ok(ChevalleyModelMaps { theta, e_mat, e_inv })
    }
}

/// The permutation delta with -w0(alpha_i) = alpha_{delta(i)}.
pub fn opposition_permutation(datum: &Arc<BasedRootDatum>, w0: &WeylElem) -> Result<Vec<usize>> {
    let mut delta = Vec::with_capacity(datum.rank);
    for i in 0..datum.rank {
        let img: Vec<i64> = w0.act_char(&datum.roots[i]).iter().map(|x| -x).collect();
        let j = datum
            .root_index(&img)
            .filter(|&j| j < datum.rank)
            .ok_or_else(|| Error::ConstructionFailure("-w0 does not permute the simples".into()))?;
        delta.push(j);
    }
    Ok(delta)
}

/// Matrix-level realization of the involution.
pub struct ChevalleyModelMaps {
    theta: ModelAut,
    pub e_mat: CMat,
    pub e_inv: CMat,
}

impl ChevalleyModelMaps {
    pub fn apply_group(&self, g: &CMat) -> CMat {
        self.e_mat.mul(&self.theta.apply_group(g)).mul(&self.e_inv)
    }

    pub fn apply_lie(&self, x: &CMat) -> CMat {
        self.e_mat.mul(&self.theta.apply_lie(x)).mul(&self.e_inv)
    }
}

/// Verifies in the model that the involution sends each simple X_alpha to
/// the opposite vector X_{-alpha} exactly.
pub fn sends_pinning_to_opposite(
    chev: &ChevalleyInvolution,
    model: &MatrixGroupModel,
) -> Result<()> {
    let maps = chev.model_maps(model)?;
    for i in 0..model.datum.rank {
        let img = maps.apply_lie(&model.x_pos[i]);
        if img != model.x_neg[i] {
            return Err(Error::ConstructionFailure(format!(
                "Chevalley image of X_{i} is not X_(-{i})"
            )));
        }
    }
    Ok(())
}

/// Matrix-level commutation with a pinned automorphism realization.
pub fn commutes_with_pinned(
    chev: &ChevalleyInvolution,
    model: &MatrixGroupModel,
    pa: &PinnedAutomorphism,
) -> Result<()> {
    let maps = chev.model_maps(model)?;
    let aut = model.realize_pinned(pa)?;
    for x in model.x_pos.iter().chain(model.x_neg.iter()).chain(model.h.iter()) {
        let lhs = maps.apply_lie(&aut.apply_lie(x));
        let rhs = aut.apply_lie(&maps.apply_lie(x));
        if lhs != rhs {
            return Err(Error::ConstructionFailure(
                "Chevalley involution does not commute with the automorphism".into(),
            ));
        }
    }
    for g in &model.n_gens {
        let lhs = maps.apply_group(&aut.apply_group(g));
        let rhs = aut.apply_group(&maps.apply_group(g));
        if lhs != rhs {
            return Err(Error::ConstructionFailure(
                "group-level commutation fails".into(),
            ));
        }
    }
    Ok(())
}

/// Searches for a torus matrix x with Chev^2 = Ad(x) on the pinning; the
/// involution squares to the identity, so the search is expected to return
/// the trivial witness.
pub fn square_inner_witness(
    chev: &ChevalleyInvolution,
    model: &MatrixGroupModel,
) -> Result<Vec<i64>> {
    let maps = chev.model_maps(model)?;
    let n = chev.coeff.n as i64;
    let quarter = n / 4;
    let exps: Vec<i64> = vec![0, quarter, 2 * quarter, 3 * quarter];
    let rank = model.datum.dim;
    let mut idx = vec![0usize; rank];
    let assign = BTreeMap::new();
    loop {
        let exp_vec: Vec<i64> = idx.iter().map(|&k| exps[k]).collect();
        let t = TorusPoint {
            datum: model.datum.clone(),
            coords: exp_vec.iter().map(|&e| KElem::zeta_pow(&chev.coeff, e)).collect(),
        };
        let tm = model.torus_matrix(&t, &assign)?;
        let tm_inv = tm.inverse();
        let ok = (0..model.datum.rank).all(|i| {
            let sq = maps.apply_lie(&maps.apply_lie(&model.x_pos[i]));
            tm.mul(&sq).mul(&tm_inv) == model.x_pos[i]
        });
        if ok {
            return Ok(exp_vec);
        }
        let mut carry = true;
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < exps.len() {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if carry {
            return Err(Error::WitnessNotFound("Chev^2 inner witness".into()));
        }
    }
}

/// The distinguished lift t of rho^vee(-1): the product of alpha^vee(i)
/// over the positive roots.
pub fn t_element(
    datum: &Arc<BasedRootDatum>,
    coeff: &Arc<CoeffGroup>,
    other_root: bool,
) -> TorusPoint {
    rho_i_point(datum, coeff, other_root)
}
