//! Dense integer matrices and the exact normal forms used to canonicalize
//! presentations and submodules.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

/// A dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have `cols` entries.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix row");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<i64>], rows: usize) -> Self {
        Matrix::from_rows(columns, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = mul_add(out[(i, j)], a, other[(k, j)]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| mul_add(acc, a, b))
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Determinant by fraction-free elimination (Bareiss). Square matrices only.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i64) {
        if c == 0 {
            return;
        }
        for k in 0..self.cols {
            let v = self[(j, k)];
            self[(i, k)] = mul_add(self[(i, k)], c, v);
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i64) {
        if c == 0 {
            return;
        }
        for k in 0..self.rows {
            let v = self[(k, j)];
            self[(k, i)] = mul_add(self[(k, i)], c, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            self[(i, k)] = -self[(i, k)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for k in 0..self.rows {
            self[(k, j)] = -self[(k, j)];
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `acc + a * b`, panicking on overflow rather than wrapping silently.
#[inline]
pub(crate) fn mul_add(acc: i64, a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .and_then(|p| acc.checked_add(p))
        .expect("integer overflow in exact matrix arithmetic")
}

/// Nonnegative remainder; a modulus of 0 leaves the value untouched.
#[inline]
pub(crate) fn reduce(x: i64, m: i64) -> i64 {
    if m == 0 {
        x
    } else {
        x.rem_euclid(m)
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Smith normal form with unimodular transforms: `u * a * v == d`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| self.d[(i, i)] != 0).count()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)]).collect()
    }
}

/// Computes `U * A * V = D` with `D` diagonal, `d_1 | d_2 | ...`, nonnegative,
/// and `U`, `V` unimodular. Inverses of both transforms are tracked alongside.
pub fn smith_normal_form(a: &Matrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut u_inv = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    let mut v_inv = Matrix::identity(n);

    // Row op on d mirrored into u (left) and u_inv (right, inverse op).
    let row_add = |d: &mut Matrix, u: &mut Matrix, u_inv: &mut Matrix, i: usize, j: usize, c: i64| {
        d.add_row(i, j, c);
        u.add_row(i, j, c);
        u_inv.add_col(j, i, -c);
    };
    let col_add = |d: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, i: usize, j: usize, c: i64| {
        d.add_col(i, j, c);
        v.add_col(i, j, c);
        v_inv.add_row(j, i, -c);
    };

    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d[(i, j)];
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let q = d[(i, t)].div_euclid(d[(t, t)]);
                row_add(&mut d, &mut u, &mut u_inv, i, t, -q);
                if d[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = d[(t, j)].div_euclid(d[(t, t)]);
                col_add(&mut d, &mut v, &mut v_inv, j, t, -q);
                if d[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder is smaller than the pivot; move it into place.
                let mut best = (t, t);
                for i in t..m {
                    let x = d[(i, t)];
                    if x != 0 && x.abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    let x = d[(t, j)];
                    if x != 0 && x.abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                    u_inv.swap_cols(t, best.0);
                }
                if best.1 != t {
                    d.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                    v_inv.swap_rows(t, best.1);
                }
                continue;
            }
            // Pivot must divide the whole trailing block.
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| d[(i, j)] % d[(t, t)] != 0);
            match offender {
                Some((i, _)) => row_add(&mut d, &mut u, &mut u_inv, t, i, 1),
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }
    SmithForm { u, u_inv, d, v, v_inv }
}

/// Basis (as columns collected into row vectors) of the integer kernel
/// `{x in Z^n : A x = 0}`.
pub fn integer_kernel(a: &Matrix) -> Vec<Vec<i64>> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    (r..a.cols()).map(|j| snf.v.column(j)).collect()
}

/// One integer solution of `A x = b`, if any exists.
pub fn solve_integer(a: &Matrix, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let y = snf.u.mul_vec(b);
    let r = snf.rank();
    let mut z = vec![0; a.cols()];
    for (i, &yi) in y.iter().enumerate() {
        if i < r {
            let di = snf.d[(i, i)];
            if yi % di != 0 {
                return None;
            }
            z[i] = yi / di;
        } else if yi != 0 {
            return None;
        }
    }
    Some(snf.v.mul_vec(&z))
}

/// Row-style Hermite normal form of the lattice spanned by `rows` together
/// with `moduli[j] * e_j` for every `moduli[j] > 0`.
///
/// The result is the unique echelon basis with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Entries in a column with a
/// positive modulus are reduced against the untouched relation row for that
/// column while earlier columns are eliminated, which keeps values bounded.
pub fn hermite_rows(rows: &[Vec<i64>], moduli: &[i64]) -> Vec<Vec<i64>> {
    let k = moduli.len();
    // (row, Some(j)) marks a pristine relation row moduli[j] * e_j.
    let mut work: Vec<(Vec<i64>, Option<usize>)> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), k, "generator length mismatch");
            (r.clone(), None)
        })
        .collect();
    for (j, &d) in moduli.iter().enumerate() {
        if d > 0 {
            let mut r = vec![0; k];
            r[j] = d;
            work.push((r, Some(j)));
        }
    }

    let reduce_tail = |row: &mut Vec<i64>, from: usize| {
        for j in from..k {
            if moduli[j] > 0 {
                row[j] = row[j].rem_euclid(moduli[j]);
            }
        }
    };
    for (r, tag) in work.iter_mut() {
        if tag.is_none() {
            reduce_tail(r, 0);
        }
    }

    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        if pivot_row >= work.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..work.len() {
                let x = work[i].0[col];
                if x != 0 && best.is_none_or(|b| x.abs() < work[b].0[col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            work.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..work.len() {
                let x = work[i].0[col];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(work[pivot_row].0[col]);
                let pivot = work[pivot_row].0.clone();
                let row = &mut work[i];
                for (v, &pv) in row.0[col..k].iter_mut().zip(&pivot[col..k]) {
                    *v = mul_add(*v, -q, pv);
                }
                row.1 = None;
                reduce_tail(&mut row.0, col + 1);
                if row.0[col] != 0 {
                    done = false;
                }
            }
            work[pivot_row].1 = None;
            if done {
                break;
            }
        }
        if work.get(pivot_row).is_some_and(|r| r.0[col] != 0) {
            if work[pivot_row].0[col] < 0 {
                for x in work[pivot_row].0.iter_mut() {
                    *x = -*x;
                }
            }
            let row = &mut work[pivot_row].0;
            reduce_tail(row, col + 1);
            pivots.push(col);
            pivot_row += 1;
        }
    }
    let mut basis: Vec<Vec<i64>> = work.into_iter().take(pivot_row).map(|(r, _)| r).collect();
    // Back-reduce above each pivot.
    for (p, &col) in pivots.iter().enumerate() {
        let piv = basis[p][col];
        let pivot = basis[p].clone();
        for row in basis.iter_mut().take(p) {
            let q = row[col].div_euclid(piv);
            if q != 0 {
                for c in col..k {
                    row[c] = mul_add(row[c], -q, pivot[c]);
                }
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &Matrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), Matrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), Matrix::identity(a.cols()));
        let diag = s.diagonal();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        for w in diag.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {diag:?}");
            } else {
                assert!(w[0] >= 0);
            }
        }
    }

    #[test]
    fn snf_of_diag_2_3() {
        let a = Matrix::diagonal(&[2, 3]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![1, 6]);
        check_snf(&a);
    }

    #[test]
    fn snf_of_zero_is_identity_transform() {
        let a = Matrix::zeros(2, 3);
        let s = smith_normal_form(&a);
        assert!(s.d.is_zero());
        assert_eq!(s.u, Matrix::identity(2));
        assert_eq!(s.v, Matrix::identity(3));
    }

    #[test]
    fn snf_of_identity() {
        let s = smith_normal_form(&Matrix::identity(3));
        assert_eq!(s.diagonal(), vec![1, 1, 1]);
    }

    #[test]
    fn snf_rectangular() {
        check_snf(&Matrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3));
        check_snf(&Matrix::from_rows(&[vec![0, 6], vec![4, 0], vec![0, 0]], 2));
    }

    #[test]
    fn kernel_and_solve() {
        let a = Matrix::from_rows(&[vec![2, 4, -2]], 3);
        let ker = integer_kernel(&a);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(a.mul_vec(v), vec![0]);
        }
        let x = solve_integer(&a, &[6]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![6]);
        assert!(solve_integer(&a, &[3]).is_none());
    }

    #[test]
    fn hermite_is_canonical() {
        // <2> and <6> in Z/4 x Z: same lattice written two ways.
        let a = hermite_rows(&[vec![2, 3]], &[4, 0]);
        let b = hermite_rows(&[vec![6, 3], vec![0, 0]], &[4, 0]);
        assert_eq!(a, b);
        // Z/12: <2> + <3> is everything.
        let s = hermite_rows(&[vec![2], vec![3]], &[12]);
        assert_eq!(s, vec![vec![1]]);
        // Zero generators give the relation lattice.
        assert_eq!(hermite_rows(&[], &[4, 6]), vec![vec![4, 0], vec![0, 6]]);
    }

    #[test]
    fn determinant_small() {
        let a = Matrix::from_rows(&[vec![2, 1], vec![7, 4]], 2);
        assert_eq!(a.determinant(), 1);
        assert_eq!(Matrix::diagonal(&[2, 3, 5]).determinant(), 30);
    }
}
