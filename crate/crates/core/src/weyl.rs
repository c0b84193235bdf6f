//! Weyl group elements with canonical reduced words, inversion sets and
//! group enumeration.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rootdatum::BasedRootDatum;
use crate::snf::IntMat;

/// A Weyl group element. The canonical word is the lexicographically least
/// reduced expression; it is recomputed after every composition so that
/// equal elements always carry equal words.
#[derive(Debug, Clone)]
pub struct WeylElem {
    pub datum: Arc<BasedRootDatum>,
    pub word: Vec<usize>,
    pub char_mat: IntMat,
    pub cochar_mat: IntMat,
}

impl PartialEq for WeylElem {
    fn eq(&self, other: &Self) -> bool {
        self.datum == other.datum && self.char_mat == other.char_mat
    }
}
impl Eq for WeylElem {}

fn reflection_mats(datum: &BasedRootDatum, i: usize) -> (IntMat, IntMat) {
    let dim = datum.dim;
    let mut c = IntMat::identity(dim);
    let mut cc = IntMat::identity(dim);
    // s_i(x) = x - <x, alpha_i^vee> alpha_i on characters,
    // s_i(y) = y - <alpha_i, y> alpha_i^vee on cocharacters.
    for col in 0..dim {
        let mut e = vec![0i64; dim];
        e[col] = 1;
        let p = datum.pairing(&e, &datum.coroots[i]);
        for row in 0..dim {
            c[(row, col)] -= p * datum.roots[i][row];
        }
        let q = datum.pairing(&datum.roots[i], &e);
        for row in 0..dim {
            cc[(row, col)] -= q * datum.coroots[i][row];
        }
    }
    (c, cc)
}

impl WeylElem {
    pub fn identity(datum: &Arc<BasedRootDatum>) -> WeylElem {
        WeylElem {
            datum: datum.clone(),
            word: vec![],
            char_mat: IntMat::identity(datum.dim),
            cochar_mat: IntMat::identity(datum.dim),
        }
    }

    pub fn reflection(datum: &Arc<BasedRootDatum>, i: usize) -> WeylElem {
        assert!(i < datum.rank);
        let (c, cc) = reflection_mats(datum, i);
        WeylElem { datum: datum.clone(), word: vec![i], char_mat: c, cochar_mat: cc }
    }

    pub fn from_word(datum: &Arc<BasedRootDatum>, word: &[usize]) -> WeylElem {
        let mut w = WeylElem::identity(datum);
        for &i in word {
            w = w.compose(&WeylElem::reflection(datum, i));
        }
        w
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act_char(&self, v: &[i64]) -> Vec<i64> {
        self.char_mat.mul_vec(v)
    }

    pub fn act_cochar(&self, v: &[i64]) -> Vec<i64> {
        self.cochar_mat.mul_vec(v)
    }

    pub fn apply_root_index(&self, idx: usize) -> usize {
        self.datum
            .root_index(&self.act_char(&self.datum.roots[idx]))
            .expect("Weyl action permutes roots")
    }

    pub fn compose(&self, other: &WeylElem) -> WeylElem {
        assert!(self.datum == other.datum, "datum mismatch");
        let char_mat = self.char_mat.mul(&other.char_mat);
        let cochar_mat = self.cochar_mat.mul(&other.cochar_mat);
        let word = canonical_word(&self.datum, &char_mat, &cochar_mat);
        WeylElem { datum: self.datum.clone(), word, char_mat, cochar_mat }
    }

    pub fn checked_compose(&self, other: &WeylElem) -> Result<WeylElem> {
        if self.datum != other.datum {
            return Err(Error::DatumMismatch);
        }
        Ok(self.compose(other))
    }

    pub fn invert(&self) -> WeylElem {
        let mut w = WeylElem::identity(&self.datum);
        for &i in self.word.iter().rev() {
            w = w.compose(&WeylElem::reflection(&self.datum, i));
        }
        w
    }

    /// Indices (into the positive roots) of `{alpha > 0 : w(alpha) < 0}`.
    pub fn inversion_set(&self) -> Vec<usize> {
        let d = &self.datum;
        d.positive()
            .filter(|&i| {
                let img = self.act_char(&d.roots[i]);
                let j = d.root_index(&img).expect("root image");
                !d.is_positive(j)
            })
            .collect()
    }

    /// Right descent test: l(w s_i) < l(w).
    pub fn has_right_descent(&self, i: usize) -> bool {
        let img = self.act_char(&self.datum.roots[i]);
        let j = self.datum.root_index(&img).expect("root image");
        !self.datum.is_positive(j)
    }

    /// All reduced expressions of this element.
    pub fn all_reduced_words(&self) -> Vec<Vec<usize>> {
        fn go(datum: &Arc<BasedRootDatum>, w: &WeylElem, out: &mut Vec<Vec<usize>>, acc: &mut Vec<usize>) {
            if w.is_identity() {
                let mut word = acc.clone();
                word.reverse();
                out.push(word);
                return;
            }
            for i in 0..datum.rank {
                if w.has_right_descent(i) {
                    acc.push(i);
                    let shorter = w.compose(&WeylElem::reflection(datum, i));
                    go(datum, &shorter, out, acc);
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        let mut acc = Vec::new();
        go(&self.datum, self, &mut out, &mut acc);
        out
    }
}

/// Lexicographically least reduced word by greedy left-descent stripping:
/// l(s_i w) < l(w) iff w^{-1}(alpha_i) < 0. The inverse acts on characters
/// by the transpose of the cocharacter action, so no matrix inversion is
/// needed.
fn canonical_word(datum: &Arc<BasedRootDatum>, char_mat: &IntMat, cochar_mat: &IntMat) -> Vec<usize> {
    let mut word = Vec::new();
    let mut m = char_mat.clone();
    let mut inv = cochar_mat.transpose();
    let id = IntMat::identity(datum.dim);
    while m != id {
        let mut found = None;
        for i in 0..datum.rank {
            let img = inv.mul_vec(&datum.roots[i]);
            let idx = datum.root_index(&img).expect("root image");
            if !datum.is_positive(idx) {
                found = Some(i);
                break;
            }
        }
        let i = found.expect("non-identity element has a left descent");
        let (c, _) = reflection_mats(datum, i);
        // w = s_i w' : strip on the left, and track the inverse on the
        // right
        m = c.mul(&m);
        inv = inv.mul(&c);
        word.push(i);
    }
    word
}

/// The full Weyl group, enumerated breadth-first. Enumeration is capped so
/// suites stay desk-scale.
pub struct WeylGroup {
    pub datum: Arc<BasedRootDatum>,
    pub elements: Vec<WeylElem>,
}

pub const DEFAULT_WEYL_CAP: usize = 10_000;

impl WeylGroup {
    pub fn enumerate(datum: &Arc<BasedRootDatum>, cap: usize) -> Result<WeylGroup> {
        let mut seen: BTreeMap<Vec<i64>, WeylElem> = BTreeMap::new();
        let id = WeylElem::identity(datum);
        let mut frontier = vec![id.clone()];
        seen.insert(id.char_mat.a.clone(), id);
        while let Some(w) = frontier.pop() {
            for i in 0..datum.rank {
                let next = w.compose(&WeylElem::reflection(datum, i));
                if !seen.contains_key(&next.char_mat.a) {
                    if seen.len() >= cap {
                        return Err(Error::ConstructionFailure(format!(
                            "Weyl group exceeds enumeration cap {cap}"
                        )));
                    }
                    seen.insert(next.char_mat.a.clone(), next.clone());
                    frontier.push(next);
                }
            }
        }
        let mut elements: Vec<WeylElem> = seen.into_values().collect();
        elements.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
        Ok(WeylGroup { datum: datum.clone(), elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn find(&self, w: &WeylElem) -> Option<usize> {
        self.elements.iter().position(|e| e == w)
    }
}

/// The longest element: repeatedly append the least ascent.
pub fn longest_element(datum: &Arc<BasedRootDatum>) -> WeylElem {
    let mut w = WeylElem::identity(datum);
    loop {
        let mut advanced = false;
        for i in 0..datum.rank {
            if !w.has_right_descent(i) {
                w = w.compose(&WeylElem::reflection(datum, i));
                advanced = true;
                break;
            }
        }
        if !advanced {
            return w;
        }
    }
}
