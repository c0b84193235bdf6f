//! Exact matrix realizations of the classical groups SL(n+1), SO(2n+1),
//! Sp(2n), SO(2n) with standard pinnings over Q(zeta_N).
//!
//! SO and Sp use the antidiagonal form, so the diagonal torus and the
//! upper-triangular Borel are pinned standardly and diagram automorphisms
//! act by coordinate manipulations. These models are the independent
//! oracle for the Tits-section, Chevalley and fixed-subgroup layers.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclo::{Cyc, CycField};
use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::rootdatum::{BasedRootDatum, Isogeny, PinnedAutomorphism, TypeLetter};
use crate::tits::ExtWeylElem;
use crate::torus::{KElem, TorusPoint};
use crate::weyl::WeylElem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// SL(n+1), type A_n simply connected.
    Sl(usize),
    /// SO(m) with the antidiagonal symmetric form; m = 2n+1 gives the
    /// adjoint B_n datum, m = 2n the standard D_n lattice.
    So(usize),
    /// Sp(2n) with the antidiagonal symplectic form, type C_n simply
    /// connected.
    Sp(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Symmetric,
    Symplectic,
}

pub struct MatrixGroupModel {
    pub kind: ModelKind,
    pub dim: usize,
    pub field: Arc<CycField>,
    pub datum: Arc<BasedRootDatum>,
    /// Simple pinning vectors X_alpha, their opposites normalized by
    /// [X_alpha, X_{-alpha}] = H_alpha, and the coroot differentials.
    pub x_pos: Vec<CMat>,
    pub x_neg: Vec<CMat>,
    pub h: Vec<CMat>,
    /// Tits generators n_i = exp(X_i) exp(-X_{-i}) exp(X_i).
    pub n_gens: Vec<CMat>,
    /// Character-lattice weight of each diagonal entry.
    pub diag_weights: Vec<Vec<i64>>,
    pub form: Option<(CMat, FormKind)>,
}

fn e_mat(field: &Arc<CycField>, n: usize, i: usize, j: usize, v: i64) -> CMat {
    let mut m = CMat::zero(field, n);
    m.set(i, j, Cyc::from_i64(field, v));
    m
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    v[i] = 1;
    v
}

/// Realizes the matrix model of the given classical type. Rank is capped at
/// 4; exceptional types have no matrix model here.
pub fn realize(letter: TypeLetter, rank: usize, field: &Arc<CycField>) -> Result<MatrixGroupModel> {
    if rank > 4 {
        return Err(Error::InvalidType(format!("{letter}{rank} exceeds the model rank cap")));
    }
    match letter {
        TypeLetter::A => realize_sl(rank, field),
        TypeLetter::B => realize_so_odd(rank, field),
        TypeLetter::C => realize_sp(rank, field),
        TypeLetter::D => realize_so_even(rank, field),
        TypeLetter::G => Err(Error::InvalidType("no matrix model for G2".into())),
    }
}

fn finish_model(
    kind: ModelKind,
    dim: usize,
    field: &Arc<CycField>,
    datum: Arc<BasedRootDatum>,
    x_pos: Vec<CMat>,
    diag_weights: Vec<Vec<i64>>,
    form: Option<(CMat, FormKind)>,
) -> Result<MatrixGroupModel> {
    let rank = datum.rank;
    let mut h = Vec::with_capacity(rank);
    let mut x_neg = Vec::with_capacity(rank);
    for i in 0..rank {
        // H_alpha = d(alpha^vee)(1): diagonal of pairings with the weights.
        let mut hm = CMat::zero(field, dim);
        for (k, w) in diag_weights.iter().enumerate() {
            let p = datum.pairing(w, &datum.coroots[i]);
            hm.set(k, k, Cyc::from_i64(field, p));
        }
        // X_{-alpha} is the multiple of X_alpha^T fixed by the bracket.
        let pattern = x_pos[i].transpose();
        let br = CMat::bracket(&x_pos[i], &pattern);
        let c = br.scalar_multiple_of(&hm).ok_or_else(|| {
            Error::ConstructionFailure(format!("pinning bracket not proportional at node {i}"))
        })?;
        if c.is_zero() {
            return Err(Error::ConstructionFailure("degenerate pinning bracket".into()));
        }
        let y = pattern.scale(&c.inv());
        debug_assert_eq!(CMat::bracket(&x_pos[i], &y), hm);
        x_neg.push(y);
        h.push(hm);
    }
    let n_gens: Vec<CMat> = (0..rank)
        .map(|i| {
            x_pos[i]
                .exp_nilpotent()
                .mul(&x_neg[i].neg().exp_nilpotent())
                .mul(&x_pos[i].exp_nilpotent())
        })
        .collect();
    let model = MatrixGroupModel {
        kind,
        dim,
        field: field.clone(),
        datum,
        x_pos,
        x_neg,
        h,
        n_gens,
        diag_weights,
        form,
    };
    model.check_pinning()?;
    Ok(model)
}

fn realize_sl(rank: usize, field: &Arc<CycField>) -> Result<MatrixGroupModel> {
    let n = rank + 1;
    let datum = BasedRootDatum::build(TypeLetter::A, rank, Isogeny::SimplyConnected)?;
    // entry j has weight omega_j - omega_{j-1} over the fundamental weights
    let mut diag_weights = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = vec![0i64; rank];
        if j < rank {
            w[j] += 1;
        }
        if j > 0 {
            w[j - 1] -= 1;
        }
        diag_weights.push(w);
    }
    let x_pos: Vec<CMat> = (0..rank).map(|i| e_mat(field, n, i, i + 1, 1)).collect();
    finish_model(ModelKind::Sl(n), n, field, datum, x_pos, diag_weights, None)
}

fn realize_sp(rank: usize, field: &Arc<CycField>) -> Result<MatrixGroupModel> {
    let n = rank;
    let dim = 2 * n;
    let mirror = |k: usize| dim - 1 - k;
    // C_n in epsilon coordinates: both lattices are Z^n.
    let mut simple_roots = Vec::new();
    let mut simple_coroots = Vec::new();
    for i in 0..n - 1 {
        let mut r = vec![0i64; n];
        r[i] = 1;
        r[i + 1] = -1;
        simple_roots.push(r.clone());
        simple_coroots.push(r);
    }
    let mut long = vec![0i64; n];
    long[n - 1] = 2;
    simple_roots.push(long);
    simple_coroots.push(unit(n, n - 1));
    let datum = BasedRootDatum::from_simple_data(
        TypeLetter::C,
        rank,
        Isogeny::SimplyConnected,
        n,
        simple_roots,
        simple_coroots,
    )?;
    let mut diag_weights = vec![vec![0i64; n]; dim];
    for j in 0..n {
        diag_weights[j][j] = 1;
        diag_weights[mirror(j)][j] = -1;
    }
    let mut x_pos = Vec::new();
    for i in 0..n - 1 {
        let m = e_mat(field, dim, i, i + 1, 1)
            .sub(&e_mat(field, dim, mirror(i + 1), mirror(i), 1));
        x_pos.push(m);
    }
    x_pos.push(e_mat(field, dim, n - 1, n, 1));
    let mut j = CMat::zero(field, dim);
    for k in 0..dim {
        let v = if k < n { 1 } else { -1 };
        j.set(k, mirror(k), Cyc::from_i64(field, v));
    }
    finish_model(
        ModelKind::Sp(dim),
        dim,
        field,
        datum,
        x_pos,
        diag_weights,
        Some((j, FormKind::Symplectic)),
    )
}

fn realize_so_odd(rank: usize, field: &Arc<CycField>) -> Result<MatrixGroupModel> {
    let n = rank;
    let dim = 2 * n + 1;
    let mirror = |k: usize| dim - 1 - k;
    // B_n adjoint: the root lattice is Z^n in epsilon coordinates.
    let mut simple_roots = Vec::new();
    let mut simple_coroots = Vec::new();
    for i in 0..n - 1 {
        let mut r = vec![0i64; n];
        r[i] = 1;
        r[i + 1] = -1;
        simple_roots.push(r.clone());
        simple_coroots.push(r);
    }
    simple_roots.push(unit(n, n - 1));
    let mut short_co = vec![0i64; n];
    short_co[n - 1] = 2;
    simple_coroots.push(short_co);
    let datum = BasedRootDatum::from_simple_data(
        TypeLetter::B,
        rank,
        Isogeny::Adjoint,
        n,
        simple_roots,
        simple_coroots,
    )?;
    let mut diag_weights = vec![vec![0i64; n]; dim];
    for j in 0..n {
        diag_weights[j][j] = 1;
        diag_weights[mirror(j)][j] = -1;
    }
    let mut x_pos = Vec::new();
    for i in 0..n - 1 {
        let m = e_mat(field, dim, i, i + 1, 1)
            .sub(&e_mat(field, dim, mirror(i + 1), mirror(i), 1));
        x_pos.push(m);
    }
    // short root epsilon_n
    x_pos.push(e_mat(field, dim, n - 1, n, 1).sub(&e_mat(field, dim, n, n + 1, 1)));
    let mut j = CMat::zero(field, dim);
    for k in 0..dim {
        j.set(k, mirror(k), Cyc::one(field));
    }
    finish_model(
        ModelKind::So(dim),
        dim,
        field,
        datum,
        x_pos,
        diag_weights,
        Some((j, FormKind::Symmetric)),
    )
}

fn realize_so_even(rank: usize, field: &Arc<CycField>) -> Result<MatrixGroupModel> {
    let n = rank;
    if n < 3 {
        return Err(Error::InvalidType(format!("D{n}")));
    }
    let dim = 2 * n;
    let mirror = |k: usize| dim - 1 - k;
    let mut simple_roots = Vec::new();
    for i in 0..n - 1 {
        let mut r = vec![0i64; n];
        r[i] = 1;
        r[i + 1] = -1;
        simple_roots.push(r);
    }
    let mut fork = vec![0i64; n];
    fork[n - 2] = 1;
    fork[n - 1] = 1;
    simple_roots.push(fork);
    let simple_coroots = simple_roots.clone();
    let datum = BasedRootDatum::from_simple_data(
        TypeLetter::D,
        rank,
        Isogeny::Standard,
        n,
        simple_roots,
        simple_coroots,
    )?;
    let mut diag_weights = vec![vec![0i64; n]; dim];
    for j in 0..n {
        diag_weights[j][j] = 1;
        diag_weights[mirror(j)][j] = -1;
    }
    let mut x_pos = Vec::new();
    for i in 0..n - 1 {
        let m = e_mat(field, dim, i, i + 1, 1)
            .sub(&e_mat(field, dim, mirror(i + 1), mirror(i), 1));
        x_pos.push(m);
    }
    // epsilon_{n-1} + epsilon_n
    x_pos.push(
        e_mat(field, dim, n - 2, n, 1).sub(&e_mat(field, dim, n - 1, n + 1, 1)),
    );
    let mut j = CMat::zero(field, dim);
    for k in 0..dim {
        j.set(k, mirror(k), Cyc::one(field));
    }
    finish_model(
        ModelKind::So(dim),
        dim,
        field,
        datum,
        x_pos,
        diag_weights,
        Some((j, FormKind::Symmetric)),
    )
}

impl MatrixGroupModel {
    fn check_pinning(&self) -> Result<()> {
        for i in 0..self.datum.rank {
            // generator relation n_i^2 = alpha_i^vee(-1)
            let sq = self.n_gens[i].mul(&self.n_gens[i]);
            let mut expect = CMat::zero(&self.field, self.dim);
            let half = (self.field.order() / 2) as i64;
            for (k, w) in self.diag_weights.iter().enumerate() {
                let p = self.datum.pairing(w, &self.datum.coroots[i]);
                expect.set(k, k, Cyc::zeta_pow(&self.field, half * p));
            }
            if sq != expect {
                return Err(Error::ConstructionFailure(format!(
                    "n_i^2 != alpha_i^vee(-1) at node {i}"
                )));
            }
        }
        if let Some((j, kind)) = &self.form {
            for x in self.x_pos.iter().chain(&self.x_neg) {
                // Lie algebra of the form: X^T J + J X = 0
                let lhs = x.transpose().mul(j).add(&j.mul(x));
                if !lhs.is_zero() {
                    return Err(Error::ConstructionFailure("pinning leaves the form".into()));
                }
            }
            for g in &self.n_gens {
                let lhs = g.transpose().mul(j).mul(g);
                if lhs != *j {
                    return Err(Error::ConstructionFailure(
                        "Weyl generator does not preserve the form".into(),
                    ));
                }
            }
            let _ = kind;
        }
        Ok(())
    }

    /// Converts a K-element to the field, requiring assignments for free
    /// symbols.
    pub fn k_to_field(&self, k: &KElem, assign: &BTreeMap<String, Cyc>) -> Result<Cyc> {
        if k.group.n != self.field.order() {
            return Err(Error::DimensionMismatch(
                "coefficient order differs from the model field".into(),
            ));
        }
        let mut out = Cyc::zeta_pow(&self.field, k.zeta as i64);
        for (&sym, &e) in &k.free {
            let name = &k.group.symbols[sym];
            let val = assign
                .get(name)
                .ok_or_else(|| Error::UnassignedSymbol(name.clone()))?;
            out = out.mul(&val.pow(e));
        }
        Ok(out)
    }

    pub fn torus_matrix(&self, t: &TorusPoint, assign: &BTreeMap<String, Cyc>) -> Result<CMat> {
        if t.datum != self.datum {
            return Err(Error::DatumMismatch);
        }
        let mut m = CMat::identity(&self.field, self.dim);
        for (k, w) in self.diag_weights.iter().enumerate() {
            let v = self.k_to_field(&t.eval_root(w), assign)?;
            m.set(k, k, v);
        }
        Ok(m)
    }

    /// The matrix of the canonical Tits lift n(w).
    pub fn weyl_matrix(&self, w: &WeylElem) -> Result<CMat> {
        if w.datum != self.datum {
            return Err(Error::DatumMismatch);
        }
        let mut m = CMat::identity(&self.field, self.dim);
        for &i in &w.word {
            m = m.mul(&self.n_gens[i]);
        }
        Ok(m)
    }

    /// The matrix of an arbitrary reduced word (used to cross-check
    /// reduced-word independence against the symbolic model).
    pub fn word_matrix(&self, word: &[usize]) -> CMat {
        let mut m = CMat::identity(&self.field, self.dim);
        for &i in word {
            m = m.mul(&self.n_gens[i]);
        }
        m
    }

    pub fn embed_ext(&self, e: &ExtWeylElem, assign: &BTreeMap<String, Cyc>) -> Result<CMat> {
        let t = self.torus_matrix(&e.torus, assign)?;
        Ok(t.mul(&self.weyl_matrix(&e.weyl)?))
    }

    /// Realizes a pinned automorphism of the datum as a concrete map on the
    /// model, when one exists.
    pub fn realize_pinned(&self, pa: &PinnedAutomorphism) -> Result<ModelAut> {
        if pa.datum != self.datum {
            return Err(Error::DatumMismatch);
        }
        if pa.is_identity() {
            return Ok(ModelAut::Identity);
        }
        match self.kind {
            ModelKind::Sl(n) => {
                let flip = (0..self.datum.rank).all(|i| pa.perm[i] == self.datum.rank - 1 - i);
                if !flip {
                    return Err(Error::InvalidAutomorphism(
                        "unsupported automorphism for SL".into(),
                    ));
                }
                let mut j = CMat::zero(&self.field, n);
                for k in 0..n {
                    j.set(k, n - 1 - k, Cyc::from_i64(&self.field, if k % 2 == 0 { 1 } else { -1 }));
                }
                let aut = ModelAut::SlOuter { j: j.clone(), j_inv: j.inverse() };
                self.validate_model_aut(&aut, pa)?;
                Ok(aut)
            }
            ModelKind::So(m) if m % 2 == 0 => {
                // the flip of the fork nodes: conjugation by the swap of the
                // two middle coordinates (determinant -1, preserves the form)
                let n = m / 2;
                let swap_last_two = (0..self.datum.rank).all(|i| {
                    if i == self.datum.rank - 1 {
                        pa.perm[i] == self.datum.rank - 2
                    } else if i == self.datum.rank - 2 {
                        pa.perm[i] == self.datum.rank - 1
                    } else {
                        pa.perm[i] == i
                    }
                });
                if !swap_last_two {
                    return Err(Error::InvalidAutomorphism(
                        "unsupported automorphism for SO(2n)".into(),
                    ));
                }
                let mut g = CMat::identity(&self.field, m);
                g.set(n - 1, n - 1, Cyc::zero(&self.field));
                g.set(n, n, Cyc::zero(&self.field));
                g.set(n - 1, n, Cyc::one(&self.field));
                g.set(n, n - 1, Cyc::one(&self.field));
                let aut = ModelAut::InnerBy { g: g.clone(), g_inv: g.inverse() };
                self.validate_model_aut(&aut, pa)?;
                Ok(aut)
            }
            _ => Err(Error::InvalidAutomorphism(
                "no pinned automorphism realization for this model".into(),
            )),
        }
    }

    fn validate_model_aut(&self, aut: &ModelAut, pa: &PinnedAutomorphism) -> Result<()> {
        for i in 0..self.datum.rank {
            if aut.apply_lie(&self.x_pos[i]) != self.x_pos[pa.perm[i]] {
                return Err(Error::InvalidAutomorphism(format!(
                    "model automorphism moves X_{i} incorrectly"
                )));
            }
        }
        Ok(())
    }
}

/// A realized automorphism of a matrix model.
#[derive(Debug, Clone)]
pub enum ModelAut {
    Identity,
    /// g -> J (g^T)^{-1} J^{-1}, the pinned outer automorphism of SL(n).
    SlOuter { j: CMat, j_inv: CMat },
    /// Conjugation by a fixed matrix (possibly outside the group, as for
    /// O(2n) \ SO(2n)).
    InnerBy { g: CMat, g_inv: CMat },
}

impl ModelAut {
    pub fn apply_group(&self, g: &CMat) -> CMat {
        match self {
            ModelAut::Identity => g.clone(),
            ModelAut::SlOuter { j, j_inv } => j.mul(&g.transpose().inverse()).mul(j_inv),
            ModelAut::InnerBy { g: m, g_inv } => m.mul(g).mul(g_inv),
        }
    }

    pub fn apply_lie(&self, x: &CMat) -> CMat {
        match self {
            ModelAut::Identity => x.clone(),
            ModelAut::SlOuter { j, j_inv } => j.mul(&x.transpose().neg()).mul(j_inv),
            ModelAut::InnerBy { g, g_inv } => g.mul(x).mul(g_inv),
        }
    }
}
