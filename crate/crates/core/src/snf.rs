//! Integer matrix utilities: Smith normal form, lattice quotients and
//! congruence solving.
//!
//! Everything here runs on small matrices (rank at most ~10) with small
//! entries, so plain `i64` arithmetic is used throughout.

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<i64>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            a.extend_from_slice(row);
        }
        IntMat { rows: r, cols: c, a }
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self[(i, k)];
                if v == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += v * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: i64) {
        for c in 0..self.cols {
            let v = self[(j, c)];
            self[(i, c)] += k * v;
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: i64) {
        for r in 0..self.rows {
            let v = self[(r, j)];
            self[(r, i)] += k * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self[(i, c)] = -self[(i, c)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.a[i * self.cols + j]
    }
}

/// Result of a Smith normal form computation: `u * a * v = d` with `u`, `v`
/// unimodular and `d` diagonal with divisibility `d1 | d2 | ...`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Diagonal entries of `d`, including zeros.
    pub fn diagonal(&self) -> Vec<i64> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

pub fn smith_normal_form(a: &IntMat) -> Snf {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut v = IntMat::identity(a.cols);
    let n = a.rows.min(a.cols);

    for t in 0..n {
        // Find a pivot: nonzero entry of least absolute value in the
        // remaining block.
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if d[(i, j)] != 0
                        && pivot.map_or(true, |(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => break,
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..d.rows {
                let q = d[(i, t)].div_euclid(d[(t, t)]);
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                if d[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..d.cols {
                let q = d[(t, j)].div_euclid(d[(t, t)]);
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                if d[(t, j)] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Ensure the pivot divides the rest of the block.
                let p = d[(t, t)];
                let mut offender = None;
                'search: for i in t + 1..d.rows {
                    for j in t + 1..d.cols {
                        if d[(i, j)] % p != 0 {
                            offender = Some(i);
                            break 'search;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        d.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                    }
                    None => break,
                }
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, d, v }
}

/// Torsion invariant factors (entries > 1) and free rank of the cokernel
/// `Z^rows / im(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    pub torsion: Vec<i64>,
    pub free_rank: usize,
    /// Projection onto the free part: the rows of `u` matched with zero
    /// diagonal entries (plus rows beyond the diagonal block).
    pub free_projection: IntMat,
}

pub fn cokernel(a: &IntMat) -> Cokernel {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let mut torsion = Vec::new();
    let mut free_rows = Vec::new();
    for i in 0..a.rows {
        let d = if i < diag.len() { diag[i] } else { 0 };
        if d == 0 {
            free_rows.push(snf.u.row(i).to_vec());
        } else if d > 1 {
            torsion.push(d);
        }
    }
    Cokernel {
        torsion,
        free_rank: free_rows.len(),
        free_projection: IntMat::from_rows(&free_rows),
    }
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// All solutions `x` (mod `m`) of `a x = b (mod m)`, sorted lexicographically.
/// Returns an empty vector when the system is unsolvable. The solution count
/// is the product of `gcd(d_i, m)` over the invariant factors times
/// `m^(cols - rank)`, which stays small for the systems used here; `cap`
/// guards against accidental blowups.
pub fn solve_mod(a: &IntMat, b: &[i64], m: i64, cap: usize) -> Vec<Vec<i64>> {
    assert!(m > 0);
    assert_eq!(a.rows, b.len());
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let n = a.rows.min(a.cols);

    // Solve d z = ub (mod m) coordinatewise, collecting the finitely many
    // choices per coordinate.
    let mut choices: Vec<Vec<i64>> = Vec::with_capacity(a.cols);
    for i in 0..a.cols {
        let d = if i < n { snf.d[(i, i)] } else { 0 };
        let rhs = if i < ub.len() { ub[i].rem_euclid(m) } else { 0 };
        if d == 0 {
            if i < ub.len() && rhs != 0 {
                return Vec::new();
            }
            choices.push((0..m).collect());
        } else {
            let (g, inv, _) = egcd(d, m);
            if rhs % g != 0 {
                return Vec::new();
            }
            let step = m / g;
            let base = ((rhs / g) * inv).rem_euclid(m / g * g) % m;
            let base = (base % step + step) % step;
            choices.push((0..g).map(|k| (base + k * step) % m).collect());
        }
    }
    // Rows beyond the diagonal block impose 0 = ub[i].
    for item in ub.iter().take(a.rows).skip(n) {
        if item.rem_euclid(m) != 0 {
            return Vec::new();
        }
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; a.cols];
    'outer: loop {
        let z: Vec<i64> = (0..a.cols).map(|i| choices[i][idx[i]]).collect();
        let x = snf.v.mul_vec(&z);
        out.push(x.iter().map(|c| c.rem_euclid(m)).collect());
        if out.len() >= cap {
            break;
        }
        for i in (0..a.cols).rev() {
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMat) {
        let snf = smith_normal_form(a);
        let lhs = snf.u.mul(a).mul(&snf.v);
        assert_eq!(lhs, snf.d);
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if w[0] != 0 {
                assert!(w[1] == 0 || w[1] % w[0] == 0, "divisibility broken: {diag:?}");
            } else {
                assert_eq!(w[1], 0);
            }
        }
    }

    #[test]
    fn snf_small() {
        check_snf(&IntMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        check_snf(&IntMat::from_rows(&[vec![1, -1]]));
        check_snf(&IntMat::from_rows(&[vec![0, 0], vec![0, 0]]));
        check_snf(&IntMat::from_rows(&[vec![2, -1], vec![-1, 2]]));
    }

    #[test]
    fn cokernel_swap_action() {
        // Z^2 with coordinate swap: stacked (swap - id) has cokernel Z.
        let a = IntMat::from_rows(&[vec![-1, 1], vec![1, -1]]);
        let c = cokernel(&a);
        assert_eq!(c.free_rank, 1);
        assert!(c.torsion.is_empty());
    }

    #[test]
    fn cokernel_negation() {
        // Z with action -1: quotient by 2Z.
        let a = IntMat::from_rows(&[vec![-2]]);
        let c = cokernel(&a);
        assert_eq!(c.free_rank, 0);
        assert_eq!(c.torsion, vec![2]);
    }

    #[test]
    fn solve_mod_cartan_a2() {
        // Solve C x = (12, 12) mod 24 for the A2 Cartan matrix.
        let c = IntMat::from_rows(&[vec![2, -1], vec![-1, 2]]);
        let sols = solve_mod(&c, &[12, 12], 24, 1000);
        assert!(!sols.is_empty());
        for x in &sols {
            let b = c.mul_vec(x);
            assert_eq!(b[0].rem_euclid(24), 12);
            assert_eq!(b[1].rem_euclid(24), 12);
        }
        assert!(sols.contains(&vec![12, 12]));
    }

    #[test]
    fn solve_mod_unsolvable() {
        let a = IntMat::from_rows(&[vec![2]]);
        assert!(solve_mod(&a, &[1], 4, 10).is_empty());
    }
}
