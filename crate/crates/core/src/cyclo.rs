//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! Elements are dense coordinate vectors over the power basis
//! 1, zeta, ..., zeta^(phi(N)-1), reduced modulo the N-th cyclotomic
//! polynomial. Only even N is supported, which keeps every product of two
//! basis polynomials below degree N and makes -1 a power of zeta.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// Shared context for a fixed cyclotomic order.
#[derive(Debug)]
pub struct CycField {
    n: u64,
    phi: usize,
    /// reduction[j - phi] expresses zeta^j (phi <= j < n) over the basis.
    reduction: Vec<Vec<BigRational>>,
    /// Sparse integer basis coordinates of every power zeta^j, 0 <= j < n;
    /// the cyclotomic reduction is integral, and for the even orders used
    /// here the rows are short.
    int_rows: Vec<Vec<(usize, i64)>>,
}

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division of integer polynomials, panics if not divisible.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    let dl = den.len();
    assert!(dl > 0);
    if rem.len() < dl {
        assert!(rem.is_empty());
        return vec![];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dl + 1];
    while rem.len() >= dl {
        let lead = rem.last().unwrap().clone();
        let dlead = den.last().unwrap();
        let q = &lead / dlead;
        assert_eq!(&q * dlead, lead, "non-exact polynomial division");
        let shift = rem.len() - dl;
        quot[shift] = q.clone();
        for i in 0..dl {
            let t = &den[i] * &q;
            rem[shift + i] -= t;
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    assert!(rem.is_empty(), "non-exact polynomial division (remainder)");
    quot
}

/// The N-th cyclotomic polynomial with integer coefficients.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            let mut prod = vec![BigInt::zero(); den.len() + phi_d.len() - 1];
            for (i, a) in den.iter().enumerate() {
                for (j, b) in phi_d.iter().enumerate() {
                    let t = a * b;
                    prod[i + j] += t;
                }
            }
            den = prod;
        }
    }
    poly_div_exact(&num, &den)
}

impl CycField {
    pub fn new(n: u64) -> Arc<CycField> {
        assert!(n >= 2 && n % 2 == 0, "cyclotomic order must be even and >= 2");
        let phi_poly = cyclotomic_poly(n);
        let phi = phi_poly.len() - 1;
        // zeta^phi = -(lower coefficients); extend iteratively up to zeta^(n-1).
        let mut reduction: Vec<Vec<BigRational>> = Vec::with_capacity(n as usize - phi);
        let top: Vec<BigRational> = (0..phi)
            .map(|i| BigRational::from_integer(-phi_poly[i].clone()))
            .collect();
        reduction.push(top);
        for _ in (phi + 1)..(n as usize) {
            let prev = reduction.last().unwrap().clone();
            // multiply by zeta: shift, then fold the overflowing top term.
            let mut next = vec![BigRational::zero(); phi];
            let carry = prev[phi - 1].clone();
            for i in (1..phi).rev() {
                next[i] = prev[i - 1].clone();
            }
            if !carry.is_zero() {
                let base = &reduction[0];
                for i in 0..phi {
                    let t = &carry * &base[i];
                    next[i] += t;
                }
            }
            reduction.push(next);
        }
        let mut int_rows = Vec::with_capacity(n as usize);
        for j in 0..n as usize {
            let mut row = Vec::new();
            if j < phi {
                row.push((j, 1i64));
            } else {
                for (t, c) in reduction[j - phi].iter().enumerate() {
                    if !c.is_zero() {
                        assert!(c.is_integer(), "non-integral cyclotomic reduction");
                        let v = c.to_integer();
                        let v: i64 = i64::try_from(&v).expect("reduction coefficient overflow");
                        row.push((t, v));
                    }
                }
            }
            int_rows.push(row);
        }
        Arc::new(CycField { n, phi, reduction, int_rows })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    fn basis_of_power(&self, k: u64) -> Vec<BigRational> {
        let k = (k % self.n) as usize;
        if k < self.phi {
            let mut c = vec![BigRational::zero(); self.phi];
            c[k] = BigRational::one();
            c
        } else {
            self.reduction[k - self.phi].clone()
        }
    }

    /// Sparse integer basis coordinates of zeta^k.
    pub fn int_row(&self, k: u64) -> &[(usize, i64)] {
        &self.int_rows[(k % self.n) as usize]
    }
}

/// An in-place coefficient accumulator over the power basis; avoids the
/// per-term allocations of repeated `add`/`mul` in large Fourier sums.
pub struct CycAccumulator {
    field: Arc<CycField>,
    c: Vec<BigRational>,
}

impl CycAccumulator {
    pub fn new(field: &Arc<CycField>) -> CycAccumulator {
        CycAccumulator { field: field.clone(), c: vec![BigRational::zero(); field.phi] }
    }

    /// self += zeta^k * x
    pub fn add_shifted(&mut self, x: &Cyc, k: i64) {
        assert_eq!(x.field.n, self.field.n);
        let k = k.rem_euclid(self.field.n as i64) as u64;
        for (i, coeff) in x.c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for &(t, r) in self.field.int_row(i as u64 + k) {
                if r == 1 {
                    self.c[t] += coeff;
                } else if r == -1 {
                    self.c[t] -= coeff;
                } else {
                    let scaled = coeff * BigRational::from_integer(BigInt::from(r));
                    self.c[t] += scaled;
                }
            }
        }
    }

    pub fn finish(self) -> Cyc {
        Cyc { field: self.field, c: self.c }
    }
}

/// An element of Q(zeta_N).
#[derive(Clone)]
pub struct Cyc {
    field: Arc<CycField>,
    c: Vec<BigRational>,
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}](", self.field.n)?;
        let mut first = true;
        for (i, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{v}*z^{i}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.c == other.c
    }
}
impl Eq for Cyc {}

impl Cyc {
    pub fn zero(field: &Arc<CycField>) -> Cyc {
        Cyc { field: field.clone(), c: vec![BigRational::zero(); field.phi] }
    }

    pub fn one(field: &Arc<CycField>) -> Cyc {
        Cyc::from_i64(field, 1)
    }

    pub fn from_i64(field: &Arc<CycField>, v: i64) -> Cyc {
        let mut c = vec![BigRational::zero(); field.phi];
        c[0] = BigRational::from_integer(BigInt::from(v));
        Cyc { field: field.clone(), c }
    }

    pub fn from_ratio(field: &Arc<CycField>, num: i64, den: i64) -> Cyc {
        assert!(den != 0);
        let mut c = vec![BigRational::zero(); field.phi];
        c[0] = BigRational::new(BigInt::from(num), BigInt::from(den));
        Cyc { field: field.clone(), c }
    }

    /// zeta^k
    pub fn zeta_pow(field: &Arc<CycField>, k: i64) -> Cyc {
        let k = k.rem_euclid(field.n as i64) as u64;
        Cyc { field: field.clone(), c: field.basis_of_power(k) }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|v| v.is_zero())
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect();
        Cyc { field: self.field.clone(), c }
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect();
        Cyc { field: self.field.clone(), c }
    }

    pub fn neg(&self) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        let phi = self.field.phi;
        let mut raw = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                raw[i + j] += t;
            }
        }
        let mut c = raw[..phi].to_vec();
        for (j, coeff) in raw.iter().enumerate().skip(phi) {
            if coeff.is_zero() {
                continue;
            }
            // even order guarantees j < n
            let basis = &self.field.reduction[j - phi];
            for i in 0..phi {
                let t = coeff * &basis[i];
                c[i] += t;
            }
        }
        Cyc { field: self.field.clone(), c }
    }

    /// Galois substitution zeta -> zeta^k (requires gcd(k, N) = 1).
    pub fn galois(&self, k: u64) -> Cyc {
        assert_eq!(num::integer::gcd(k, self.field.n), 1);
        let mut c = vec![BigRational::zero(); self.field.phi];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let basis = self.field.basis_of_power((i as u64 * k) % self.field.n);
            for t in 0..self.field.phi {
                let v = a * &basis[t];
                c[t] += v;
            }
        }
        Cyc { field: self.field.clone(), c }
    }

    /// Complex conjugation zeta -> zeta^(-1).
    pub fn conj(&self) -> Cyc {
        self.galois(self.field.n - 1)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Cyc {
        assert!(!self.is_zero(), "division by zero in Q(zeta)");
        let phi_poly: Vec<BigRational> = {
            let p = cyclotomic_poly(self.field.n);
            p.into_iter().map(BigRational::from_integer).collect()
        };
        let (g, _, t) = rat_poly_egcd(&phi_poly, &self.c);
        // g is a nonzero constant
        assert_eq!(g.len(), 1);
        let ginv = BigRational::one() / &g[0];
        let mut c = vec![BigRational::zero(); self.field.phi];
        for (i, v) in t.iter().enumerate() {
            if i < self.field.phi {
                c[i] = v * &ginv;
            }
        }
        // t may have degree >= phi in edge cases; reduce by multiplying out.
        let cand = Cyc { field: self.field.clone(), c };
        let check = cand.mul(self);
        assert!(check.is_one(), "inverse computation failed");
        cand
    }

    pub fn pow(&self, e: i64) -> Cyc {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = Cyc::one(&self.field);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// If self is a root of unity zeta^k, return k.
    pub fn as_zeta_power(&self) -> Option<u64> {
        for k in 0..self.field.n {
            if self.c == self.field.basis_of_power(k) {
                return Some(k);
            }
        }
        None
    }
}

fn rat_poly_trim(p: &mut Vec<BigRational>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn rat_poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    rat_poly_trim(&mut rem);
    let mut den = den.to_vec();
    rat_poly_trim(&mut den);
    assert!(!den.is_empty());
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() && !rem.is_empty() {
        let q = rem.last().unwrap() / den.last().unwrap();
        let shift = rem.len() - den.len();
        quot[shift] = q.clone();
        for i in 0..den.len() {
            let t = &den[i] * &q;
            rem[shift + i] -= t;
        }
        rat_poly_trim(&mut rem);
    }
    (quot, rem)
}

/// Extended gcd for rational polynomials: returns (g, s, t) with
/// s*a + t*b = g.
fn rat_poly_egcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    rat_poly_trim(&mut r0);
    rat_poly_trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1: Vec<BigRational> = vec![];
    let mut t0: Vec<BigRational> = vec![];
    let mut t1 = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = rat_poly_divmod(&r0, &r1);
        let snew = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
        let tnew = rat_poly_sub(&t0, &rat_poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = snew;
        t0 = t1;
        t1 = tnew;
    }
    (r0, s0, t0)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] += t;
        }
    }
    rat_poly_trim(&mut out);
    out
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    rat_poly_trim(&mut out);
    out
}

/// Rational helper exposed for matrix code.
pub fn big_rational_abs(v: &BigRational) -> BigRational {
    v.abs()
}
