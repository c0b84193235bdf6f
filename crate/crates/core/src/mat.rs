//! Dense matrices over Q(zeta_N), used by the matrix group models.

use std::sync::Arc;

use crate::cyclo::{Cyc, CycField};

#[derive(Clone, PartialEq, Eq)]
pub struct CMat {
    pub n: usize,
    pub a: Vec<Cyc>,
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                write!(f, "{:?} ", self.a[i * self.n + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn zero(field: &Arc<CycField>, n: usize) -> CMat {
        CMat { n, a: vec![Cyc::zero(field); n * n] }
    }

    pub fn identity(field: &Arc<CycField>, n: usize) -> CMat {
        let mut m = CMat::zero(field, n);
        for i in 0..n {
            m.set(i, i, Cyc::one(field));
        }
        m
    }

    pub fn field(&self) -> Arc<CycField> {
        self.a[0].field().clone()
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyc) {
        self.a[i * self.n + j] = v;
    }

    pub fn add(&self, o: &CMat) -> CMat {
        assert_eq!(self.n, o.n);
        CMat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        assert_eq!(self.n, o.n);
        CMat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn neg(&self) -> CMat {
        CMat { n: self.n, a: self.a.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, c: &Cyc) -> CMat {
        CMat { n: self.n, a: self.a.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.n, o.n);
        let field = self.field();
        let mut out = CMat::zero(&field, self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let v = self.get(i, k);
                if v.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let w = o.get(k, j);
                    if w.is_zero() {
                        continue;
                    }
                    let t = v.mul(w).add(out.get(i, j));
                    out.set(i, j, t);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> CMat {
        let field = self.field();
        let mut out = CMat::zero(&field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// Gauss-Jordan inverse; panics on singular input (model matrices are
    /// always invertible).
    pub fn inverse(&self) -> CMat {
        let field = self.field();
        let n = self.n;
        let mut m = self.clone();
        let mut inv = CMat::identity(&field, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m.get(r, col).is_zero())
                .expect("singular matrix in model computation");
            if pivot != col {
                for j in 0..n {
                    let a = m.get(pivot, j).clone();
                    let b = m.get(col, j).clone();
                    m.set(pivot, j, b);
                    m.set(col, j, a);
                    let a = inv.get(pivot, j).clone();
                    let b = inv.get(col, j).clone();
                    inv.set(pivot, j, b);
                    inv.set(col, j, a);
                }
            }
            let pinv = m.get(col, col).inv();
            for j in 0..n {
                m.set(col, j, m.get(col, j).mul(&pinv));
                inv.set(col, j, inv.get(col, j).mul(&pinv));
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in 0..n {
                    let t = m.get(r, j).sub(&f.mul(m.get(col, j)));
                    m.set(r, j, t);
                    let t = inv.get(r, j).sub(&f.mul(inv.get(col, j)));
                    inv.set(r, j, t);
                }
            }
        }
        inv
    }

    pub fn conj_by(&self, g: &CMat) -> CMat {
        g.mul(self).mul(&g.inverse())
    }

    pub fn bracket(a: &CMat, b: &CMat) -> CMat {
        a.mul(b).sub(&b.mul(a))
    }

    /// exp of a nilpotent matrix, exact.
    pub fn exp_nilpotent(&self) -> CMat {
        let field = self.field();
        let mut out = CMat::identity(&field, self.n);
        let mut term = CMat::identity(&field, self.n);
        for k in 1..=(self.n as i64) {
            term = term.mul(self).scale(&Cyc::from_ratio(&field, 1, k));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        assert!(
            term.mul(self).is_zero() || term.is_zero(),
            "exp_nilpotent called on a non-nilpotent matrix"
        );
        out
    }

    /// If `self == c * other` for a scalar c, return c. Zero matrices pair
    /// only with zero.
    pub fn scalar_multiple_of(&self, other: &CMat) -> Option<Cyc> {
        assert_eq!(self.n, other.n);
        let field = self.field();
        let mut ratio: Option<Cyc> = None;
        for idx in 0..self.a.len() {
            let x = &self.a[idx];
            let y = &other.a[idx];
            if y.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let r = x.mul(&y.inv());
            match &ratio {
                None => ratio = Some(r),
                Some(prev) => {
                    if *prev != r {
                        return None;
                    }
                }
            }
        }
        ratio.or_else(|| {
            if self.is_zero() && other.is_zero() {
                Some(Cyc::one(&field))
            } else {
                None
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f24() -> Arc<CycField> {
        CycField::new(24)
    }

    fn e(field: &Arc<CycField>, n: usize, i: usize, j: usize) -> CMat {
        let mut m = CMat::zero(field, n);
        m.set(i, j, Cyc::one(field));
        m
    }

    #[test]
    fn sl2_weyl_generator() {
        // exp(E) exp(-F) exp(E) = [[0, 1], [-1, 0]]
        let f = f24();
        let ee = e(&f, 2, 0, 1);
        let ff = e(&f, 2, 1, 0);
        let n = ee.exp_nilpotent().mul(&ff.neg().exp_nilpotent()).mul(&ee.exp_nilpotent());
        let mut expect = CMat::zero(&f, 2);
        expect.set(0, 1, Cyc::one(&f));
        expect.set(1, 0, Cyc::from_i64(&f, -1));
        assert_eq!(n, expect);
        // n^2 = -I
        let n2 = n.mul(&n);
        assert_eq!(n2, CMat::identity(&f, 2).neg());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f24();
        let mut m = CMat::identity(&f, 3);
        m.set(0, 1, Cyc::zeta_pow(&f, 5));
        m.set(2, 0, Cyc::from_ratio(&f, 3, 2));
        m.set(1, 2, Cyc::from_i64(&f, -4));
        let inv = m.inverse();
        assert_eq!(m.mul(&inv), CMat::identity(&f, 3));
    }

    #[test]
    fn scalar_detection() {
        let f = f24();
        let x = e(&f, 3, 0, 2);
        let y = x.scale(&Cyc::zeta_pow(&f, 7));
        assert_eq!(y.scalar_multiple_of(&x), Some(Cyc::zeta_pow(&f, 7)));
        let z = e(&f, 3, 1, 0);
        assert_eq!(z.scalar_multiple_of(&x), None);
    }
}
