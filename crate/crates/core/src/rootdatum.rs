//! Based root data: character/cocharacter lattices with roots, coroots and a
//! simple system, plus pinned (diagram) automorphisms.
//!
//! Lattices live in a fixed basis; a datum stores every root together with
//! its coroot and its expansion over the simple roots. Positive roots come
//! first, ordered by height and then by expansion, and `roots[n_pos + i]`
//! is always `-roots[i]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::IntMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    G,
}

impl std::fmt::Display for TypeLetter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TypeLetter::A => "A",
            TypeLetter::B => "B",
            TypeLetter::C => "C",
            TypeLetter::D => "D",
            TypeLetter::G => "G",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for TypeLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(TypeLetter::A),
            "B" => Ok(TypeLetter::B),
            "C" => Ok(TypeLetter::C),
            "D" => Ok(TypeLetter::D),
            "G" | "G2" => Ok(TypeLetter::G),
            other => Err(Error::InvalidType(format!("unknown Cartan letter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Isogeny {
    #[serde(rename = "simply-connected")]
    SimplyConnected,
    #[serde(rename = "adjoint")]
    Adjoint,
    /// The natural lattice of a classical matrix group (used for SO(2n),
    /// which is neither simply connected nor adjoint).
    #[serde(rename = "standard")]
    Standard,
}

impl std::fmt::Display for Isogeny {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Isogeny::SimplyConnected => "simply-connected",
            Isogeny::Adjoint => "adjoint",
            Isogeny::Standard => "standard",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedRootDatum {
    pub letter: TypeLetter,
    pub rank: usize,
    pub isogeny: Isogeny,
    /// Rank of the character lattice (equals `rank` for the semisimple data
    /// built here).
    pub dim: usize,
    /// All roots; positives first (by height, then expansion), negatives in
    /// matching order.
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    /// Expansion of each root over the simple roots.
    pub expansions: Vec<Vec<i64>>,
    pub n_pos: usize,
    /// Indices of the simple roots (always `0..rank`).
    pub simple: Vec<usize>,
    index: BTreeMap<Vec<i64>, usize>,
}

/// Cartan matrix entries `<alpha_i, alpha_j^vee>` for the supported types.
pub fn cartan_matrix(letter: TypeLetter, rank: usize) -> Result<Vec<Vec<i64>>> {
    let ok = match letter {
        TypeLetter::A => rank >= 1,
        TypeLetter::B | TypeLetter::C => rank >= 2,
        TypeLetter::D => rank >= 3,
        TypeLetter::G => rank == 2,
    };
    if !ok || rank > 8 {
        return Err(Error::InvalidType(format!("{letter}{rank}")));
    }
    let mut c = vec![vec![0i64; rank]; rank];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    match letter {
        TypeLetter::A => {
            for i in 0..rank.saturating_sub(1) {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        TypeLetter::B => {
            // alpha_1..alpha_{n-1} long, alpha_n short.
            for i in 0..rank - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[rank - 2][rank - 1] = -2;
        }
        TypeLetter::C => {
            // alpha_1..alpha_{n-1} short, alpha_n long.
            for i in 0..rank - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[rank - 1][rank - 2] = -2;
        }
        TypeLetter::D => {
            // chain alpha_1 .. alpha_{n-1}, with alpha_n attached to
            // alpha_{n-2}
            for i in 0..rank - 2 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[rank - 3][rank - 1] = -1;
            c[rank - 1][rank - 3] = -1;
        }
        TypeLetter::G => {
            // alpha_1 long, alpha_2 short.
            c[0][1] = -3;
            c[1][0] = -1;
        }
    }
    Ok(c)
}

impl BasedRootDatum {
    /// Builds a datum by closing the given simple roots/coroots under simple
    /// reflections. The simple vectors live in an arbitrary common basis of
    /// rank `dim`.
    pub fn from_simple_data(
        letter: TypeLetter,
        rank: usize,
        isogeny: Isogeny,
        dim: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
    ) -> Result<Arc<BasedRootDatum>> {
        assert_eq!(simple_roots.len(), rank);
        assert_eq!(simple_coroots.len(), rank);
        // triples (root, coroot, expansion)
        let mut seen: BTreeMap<Vec<i64>, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = Vec::new();
        for i in 0..rank {
            let mut exp = vec![0i64; rank];
            exp[i] = 1;
            queue.push((simple_roots[i].clone(), simple_coroots[i].clone(), exp));
        }
        while let Some((r, cr, exp)) = queue.pop() {
            if seen.contains_key(&r) {
                continue;
            }
            seen.insert(r.clone(), (cr.clone(), exp.clone()));
            for i in 0..rank {
                let pair: i64 = r.iter().zip(&simple_coroots[i]).map(|(a, b)| a * b).sum();
                let cpair: i64 = simple_roots[i].iter().zip(&cr).map(|(a, b)| a * b).sum();
                let new_r: Vec<i64> =
                    r.iter().zip(&simple_roots[i]).map(|(a, b)| a - pair * b).collect();
                let new_cr: Vec<i64> =
                    cr.iter().zip(&simple_coroots[i]).map(|(a, b)| a - cpair * b).collect();
                let mut new_exp = exp.clone();
                new_exp[i] -= pair;
                if !seen.contains_key(&new_r) {
                    queue.push((new_r, new_cr, new_exp));
                }
            }
        }
        let mut pos: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = Vec::new();
        for (r, (cr, exp)) in &seen {
            if exp.iter().all(|&e| e >= 0) {
                if !exp.iter().any(|&e| e > 0) {
                    return Err(Error::ConstructionFailure("zero root generated".into()));
                }
                pos.push((r.clone(), cr.clone(), exp.clone()));
            }
        }
        if 2 * pos.len() != seen.len() {
            return Err(Error::ConstructionFailure(
                "root set is not symmetric around zero".into(),
            ));
        }
        // height ascending, then expansion descending lexicographically, so
        // that alpha_1 < alpha_2 < ... among the simple roots.
        pos.sort_by(|a, b| {
            let ha: i64 = a.2.iter().sum();
            let hb: i64 = b.2.iter().sum();
            ha.cmp(&hb).then_with(|| b.2.cmp(&a.2))
        });
        let n_pos = pos.len();
        let mut roots = Vec::with_capacity(2 * n_pos);
        let mut coroots = Vec::with_capacity(2 * n_pos);
        let mut expansions = Vec::with_capacity(2 * n_pos);
        for (r, cr, e) in &pos {
            roots.push(r.clone());
            coroots.push(cr.clone());
            expansions.push(e.clone());
        }
        for (r, cr, e) in &pos {
            roots.push(r.iter().map(|x| -x).collect());
            coroots.push(cr.iter().map(|x| -x).collect());
            expansions.push(e.iter().map(|x| -x).collect());
        }
        let mut index = BTreeMap::new();
        for (i, r) in roots.iter().enumerate() {
            index.insert(r.clone(), i);
        }
        let datum = BasedRootDatum {
            letter,
            rank,
            isogeny,
            dim,
            roots,
            coroots,
            expansions,
            n_pos,
            simple: (0..rank).collect(),
            index,
        };
        datum.validate()?;
        Ok(Arc::new(datum))
    }

    /// Builds the simply-connected or adjoint datum of the given type. For
    /// the adjoint datum the basis of the character lattice is the simple
    /// roots; for the simply-connected one it is the fundamental weights.
    pub fn build(letter: TypeLetter, rank: usize, isogeny: Isogeny) -> Result<Arc<BasedRootDatum>> {
        let c = cartan_matrix(letter, rank)?;
        let (simple_roots, simple_coroots) = match isogeny {
            Isogeny::Adjoint => {
                let roots: Vec<Vec<i64>> =
                    (0..rank).map(|i| unit_vec(rank, i)).collect();
                // coroot j in the dual basis: <alpha_i, alpha_j^vee> = C_ij,
                // so alpha_j^vee is the j-th column of C.
                let coroots: Vec<Vec<i64>> =
                    (0..rank).map(|j| (0..rank).map(|i| c[i][j]).collect()).collect();
                (roots, coroots)
            }
            Isogeny::SimplyConnected => {
                // cocharacter basis = simple coroots; alpha_i is the i-th
                // row of C over the fundamental weights.
                let roots: Vec<Vec<i64>> = (0..rank).map(|i| c[i].clone()).collect();
                let coroots: Vec<Vec<i64>> =
                    (0..rank).map(|i| unit_vec(rank, i)).collect();
                (roots, coroots)
            }
            Isogeny::Standard => {
                return Err(Error::InvalidType(
                    "standard isogeny is reserved for matrix models".into(),
                ))
            }
        };
        Self::from_simple_data(letter, rank, isogeny, rank, simple_roots, simple_coroots)
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn positive(&self) -> impl Iterator<Item = usize> {
        0..self.n_pos
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.n_pos
    }

    pub fn neg_index(&self, idx: usize) -> usize {
        if idx < self.n_pos {
            idx + self.n_pos
        } else {
            idx - self.n_pos
        }
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn pairing(&self, chi: &[i64], mu: &[i64]) -> i64 {
        chi.iter().zip(mu).map(|(a, b)| a * b).sum()
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| self.pairing(&self.roots[i], &self.coroots[j]))
                    .collect()
            })
            .collect()
    }

    /// 2*rho^vee: the sum of all positive coroots.
    pub fn two_rho_check(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.dim];
        for i in 0..self.n_pos {
            for (o, c) in out.iter_mut().zip(&self.coroots[i]) {
                *o += c;
            }
        }
        out
    }

    /// Swaps characters with cocharacters and roots with coroots.
    pub fn dual(self: &Arc<Self>) -> Arc<BasedRootDatum> {
        let letter = match self.letter {
            TypeLetter::B => TypeLetter::C,
            TypeLetter::C => TypeLetter::B,
            l => l,
        };
        let isogeny = match self.isogeny {
            Isogeny::SimplyConnected => Isogeny::Adjoint,
            Isogeny::Adjoint => Isogeny::SimplyConnected,
            Isogeny::Standard => Isogeny::Standard,
        };
        let mut index = BTreeMap::new();
        for (i, r) in self.coroots.iter().enumerate() {
            index.insert(r.clone(), i);
        }
        // Expansions over the simple coroots must be recomputed: coroot
        // expansion coefficients differ from root ones for non-simply-laced
        // types. Solve via the simple coroot matrix.
        let expansions = {
            let simple: Vec<Vec<i64>> = (0..self.rank).map(|i| self.coroots[i].clone()).collect();
            self.coroots
                .iter()
                .map(|cr| expand_over(&simple, cr).expect("coroot expansion"))
                .collect()
        };
        Arc::new(BasedRootDatum {
            letter,
            rank: self.rank,
            isogeny,
            dim: self.dim,
            roots: self.coroots.clone(),
            coroots: self.roots.clone(),
            expansions,
            n_pos: self.n_pos,
            simple: self.simple.clone(),
            index,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.n_roots() {
            if self.pairing(&self.roots[i], &self.coroots[i]) != 2 {
                return Err(Error::ConstructionFailure(format!(
                    "<alpha, alpha^vee> != 2 at root {i}"
                )));
            }
        }
        let c = self.cartan();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if i == j && c[i][j] != 2 {
                    return Err(Error::ConstructionFailure("Cartan diagonal != 2".into()));
                }
                if i != j && c[i][j] > 0 {
                    return Err(Error::ConstructionFailure("positive off-diagonal".into()));
                }
            }
        }
        // reflections permute the root set, equivariantly with coroots
        for s in 0..self.rank {
            for i in 0..self.n_roots() {
                let p = self.pairing(&self.roots[i], &self.coroots[s]);
                let refl: Vec<i64> = self.roots[i]
                    .iter()
                    .zip(&self.roots[s])
                    .map(|(a, b)| a - p * b)
                    .collect();
                let j = self
                    .root_index(&refl)
                    .ok_or_else(|| Error::ConstructionFailure("reflection leaves root set".into()))?;
                let cp = self.pairing(&self.roots[s], &self.coroots[i]);
                let crefl: Vec<i64> = self.coroots[i]
                    .iter()
                    .zip(&self.coroots[s])
                    .map(|(a, b)| a - cp * b)
                    .collect();
                if self.coroots[j] != crefl {
                    return Err(Error::ConstructionFailure(
                        "coroot map is not reflection-equivariant".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Height and order respecting label such as "A2-sc".
    pub fn label(&self) -> String {
        let iso = match self.isogeny {
            Isogeny::SimplyConnected => "sc",
            Isogeny::Adjoint => "adj",
            Isogeny::Standard => "std",
        };
        format!("{}{}-{}", self.letter, self.rank, iso)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.letter.to_string(),
            "rank": self.rank,
            "isogeny": self.isogeny,
            "roots": self.roots,
            "coroots": self.coroots,
            "simple": self.simple.iter().map(|i| i + 1).collect::<Vec<_>>(),
        })
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    v[i] = 1;
    v
}

/// Expands `v` as an integer combination of the given vectors, which must
/// form a basis of the ambient space. Returns None when the combination is
/// not integral.
fn expand_over(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let n = basis.len();
    assert_eq!(n, v.len(), "expand_over expects a square system");
    let s: Vec<Vec<i128>> =
        (0..n).map(|r| (0..n).map(|c| basis[c][r] as i128).collect()).collect();
    let det = det_i128(&s);
    if det == 0 {
        return None;
    }
    let adj = adjugate_i128(&s);
    let mut x = vec![0i64; n];
    for (c, xc) in x.iter_mut().enumerate() {
        let num: i128 = (0..n).map(|r| adj[c][r] * v[r] as i128).sum();
        if num % det != 0 {
            return None;
        }
        *xc = (num / det) as i64;
    }
    for r in 0..n {
        let got: i64 = (0..n).map(|c| basis[c][r] * x[c]).sum();
        if got != v[r] {
            return None;
        }
    }
    Some(x)
}

/// An automorphism of the datum that permutes the simple roots and preserves
/// the positive system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinnedAutomorphism {
    pub datum: Arc<BasedRootDatum>,
    /// Images of the simple indices.
    pub perm: Vec<usize>,
    pub char_mat: IntMat,
    pub cochar_mat: IntMat,
    pub order: usize,
}

impl PinnedAutomorphism {
    pub fn identity(datum: &Arc<BasedRootDatum>) -> PinnedAutomorphism {
        PinnedAutomorphism {
            datum: datum.clone(),
            perm: (0..datum.rank).collect(),
            char_mat: IntMat::identity(datum.dim),
            cochar_mat: IntMat::identity(datum.dim),
            order: 1,
        }
    }

    /// Builds the pinned automorphism extending a permutation of simple
    /// indices. The permutation must preserve the Cartan matrix.
    pub fn from_simple_perm(
        datum: &Arc<BasedRootDatum>,
        perm: &[usize],
    ) -> Result<PinnedAutomorphism> {
        if perm.len() != datum.rank {
            return Err(Error::InvalidAutomorphism("permutation length".into()));
        }
        let mut hit = vec![false; datum.rank];
        for &p in perm {
            if p >= datum.rank || hit[p] {
                return Err(Error::InvalidAutomorphism("not a permutation".into()));
            }
            hit[p] = true;
        }
        let c = datum.cartan();
        for i in 0..datum.rank {
            for j in 0..datum.rank {
                if c[perm[i]][perm[j]] != c[i][j] {
                    return Err(Error::InvalidAutomorphism(
                        "permutation does not preserve the Cartan matrix".into(),
                    ));
                }
            }
        }
        let char_mat = lattice_map_from_simple_images(
            &datum.roots[..datum.rank],
            &(0..datum.rank).map(|i| datum.roots[perm[i]].clone()).collect::<Vec<_>>(),
            datum.dim,
        )
        .ok_or_else(|| Error::InvalidAutomorphism("no integral lattice extension".into()))?;
        let cochar_mat = lattice_map_from_simple_images(
            &datum.coroots[..datum.rank],
            &(0..datum.rank).map(|i| datum.coroots[perm[i]].clone()).collect::<Vec<_>>(),
            datum.dim,
        )
        .ok_or_else(|| Error::InvalidAutomorphism("no integral cocharacter extension".into()))?;
        // pairing compatibility
        for i in 0..datum.n_roots() {
            for j in 0..datum.n_roots() {
                let lhs = datum.pairing(
                    &char_mat.mul_vec(&datum.roots[i]),
                    &cochar_mat.mul_vec(&datum.coroots[j]),
                );
                if lhs != datum.pairing(&datum.roots[i], &datum.coroots[j]) {
                    return Err(Error::InvalidAutomorphism("pairing not preserved".into()));
                }
            }
        }
        // order
        let mut order = 1;
        let mut m = char_mat.clone();
        let id = IntMat::identity(datum.dim);
        while m != id {
            m = m.mul(&char_mat);
            order += 1;
            if order > 24 {
                return Err(Error::InvalidAutomorphism("order too large".into()));
            }
        }
        let pa = PinnedAutomorphism { datum: datum.clone(), perm: perm.to_vec(), char_mat, cochar_mat, order };
        pa.validate()?;
        Ok(pa)
    }

    fn validate(&self) -> Result<()> {
        // permutes the root set and fixes the positive system
        for i in 0..self.datum.n_roots() {
            let img = self.char_mat.mul_vec(&self.datum.roots[i]);
            match self.datum.root_index(&img) {
                Some(j) => {
                    if self.datum.is_positive(i) != self.datum.is_positive(j) {
                        return Err(Error::InvalidAutomorphism(
                            "positive system not preserved".into(),
                        ));
                    }
                }
                None => {
                    return Err(Error::InvalidAutomorphism("root set not preserved".into()))
                }
            }
        }
        Ok(())
    }

    pub fn apply_root_index(&self, idx: usize) -> usize {
        let img = self.char_mat.mul_vec(&self.datum.roots[idx]);
        self.datum.root_index(&img).expect("validated automorphism")
    }

    pub fn compose(&self, other: &PinnedAutomorphism) -> PinnedAutomorphism {
        let perm: Vec<usize> = (0..self.datum.rank).map(|i| self.perm[other.perm[i]]).collect();
        let char_mat = self.char_mat.mul(&other.char_mat);
        let cochar_mat = self.cochar_mat.mul(&other.cochar_mat);
        let id = IntMat::identity(self.datum.dim);
        let mut order = 1;
        let mut m = char_mat.clone();
        while m != id {
            m = m.mul(&char_mat);
            order += 1;
        }
        PinnedAutomorphism { datum: self.datum.clone(), perm, char_mat, cochar_mat, order }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Finds the unique lattice map sending the given independent vectors to
/// their images; requires integrality and unimodularity.
fn lattice_map_from_simple_images(
    sources: &[Vec<i64>],
    images: &[Vec<i64>],
    dim: usize,
) -> Option<IntMat> {
    // columns of M are determined by M * source_i = image_i; build M by
    // solving for each standard basis vector over the rationals.
    // Equivalently M = [images as columns] * [sources as columns]^{-1}.
    let n = sources.len();
    assert_eq!(n, dim, "semisimple datum expected");
    // i128 adjugate-based inverse of the source matrix.
    let s: Vec<Vec<i128>> =
        (0..dim).map(|r| (0..n).map(|c| sources[c][r] as i128).collect()).collect();
    let det = det_i128(&s);
    if det == 0 {
        return None;
    }
    let adj = adjugate_i128(&s);
    // M = I_img * adj / det, where I_img has the images as columns.
    let mut m = IntMat::zero(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut num: i128 = 0;
            for k in 0..n {
                num += images[k][r] as i128 * adj[k][c];
            }
            if num % det != 0 {
                return None;
            }
            m[(r, c)] = (num / det) as i64;
        }
    }
    Some(m)
}

fn det_i128(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return a[0][0];
    }
    let mut det = 0i128;
    for (j, item) in a[0].iter().enumerate() {
        if *item == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c]).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        det += sign * item * det_i128(&minor);
    }
    det
}

fn adjugate_i128(a: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * det_i128(&minor);
        }
    }
    adj
}
