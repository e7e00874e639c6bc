//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        ZMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// An `rows x cols` matrix; `rows` is needed when `cols == 0` or the input is empty.
    pub fn from_i64(rows: usize, cols: usize, flat: &[i64]) -> Self {
        assert_eq!(flat.len(), rows * cols);
        ZMatrix {
            rows,
            cols,
            data: flat.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut out = ZMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let t = f * self.get(src, j);
            self.data[dst * self.cols + j] += t;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let t = f * self.get(i, src);
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

/// Result of `smith_normal_form`: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: ZMatrix,
    pub d: ZMatrix,
    pub v: ZMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, in order.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

pub fn smith_normal_form(m: &ZMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = ZMatrix::identity(rows);
    let mut v = ZMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // pivot: smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // nearest-integer quotients keep remainders at most half the pivot
            let mut clean = true;
            for i in t + 1..rows {
                let f = -nearest_quotient(d.get(i, t), d.get(t, t));
                if !f.is_zero() {
                    d.add_row(i, t, &f);
                    u.add_row(i, t, &f);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let f = -nearest_quotient(d.get(t, j), d.get(t, t));
                if !f.is_zero() {
                    d.add_col(j, t, &f);
                    v.add_col(j, t, &f);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole remaining block
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(d.get(t, t))));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(mut u: ZMatrix, mut d: ZMatrix, v: ZMatrix) -> Snf {
    for t in 0..d.rows().min(d.cols()) {
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, d, v }
}

/// `round(a / b)`, ties toward negative infinity.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Basis (as columns of the returned list) of the integer kernel `{x in Z^n : m x = 0}`,
/// in column Hermite normal form.
pub fn integer_kernel(m: &ZMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let basis: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| snf.v.column(j)).collect();
    hermite_columns(&basis)
}

/// Column-style Hermite normal form of the lattice spanned by `vectors`.
///
/// Returns an independent generating set, each vector with a positive leading
/// pivot, later vectors reduced modulo earlier pivots.
pub fn hermite_columns(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(n) = vectors.first().map(|v| v.len()) else {
        return Vec::new();
    };
    // work with vectors as rows and do row-style HNF
    let mut rows: Vec<Vec<BigInt>> = vectors.to_vec();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < n && !rows.is_empty() {
        // gcd-reduce column `col` among the remaining rows
        loop {
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            let nz: Vec<usize> = (0..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i == p {
                    continue;
                }
                let f = rows[i][col].div_floor(&rows[p][col]);
                let pr = rows[p].clone();
                for (a, b) in rows[i].iter_mut().zip(&pr) {
                    *a -= &f * b;
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut piv = rows.remove(i);
            if piv[col].is_negative() {
                for x in piv.iter_mut() {
                    *x = -&*x;
                }
            }
            out.push(piv);
        }
        col += 1;
    }
    // reduce entries above each pivot
    let pivot_cols: Vec<usize> = out
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    for k in 0..out.len() {
        let pc = pivot_cols[k];
        for i in 0..k {
            let f = out[i][pc].div_floor(&out[k][pc]);
            if !f.is_zero() {
                let pr = out[k].clone();
                for (a, b) in out[i].iter_mut().zip(&pr) {
                    *a -= &f * b;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &ZMatrix) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        s
    }

    #[test]
    fn one_by_one() {
        let s = check(&ZMatrix::from_i64_rows(&[vec![2]]));
        assert_eq!(s.d, ZMatrix::from_i64_rows(&[vec![2]]));
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&ZMatrix::identity(4));
        assert_eq!(s.d, ZMatrix::identity(4));
    }

    #[test]
    fn two_by_two_example() {
        // determinantal divisors: gcd of entries is 2, |det| = 8
        let s = check(&ZMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.d, ZMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn rectangular_and_negative() {
        let s = check(&ZMatrix::from_i64_rows(&[vec![-2]]));
        assert_eq!(s.elementary_divisors(), vec![BigInt::from(2)]);
        let s = check(&ZMatrix::from_i64_rows(&[vec![0, 3, 6], vec![0, 6, 12]]));
        assert_eq!(s.elementary_divisors(), vec![BigInt::from(3)]);
        let s = check(&ZMatrix::zeros(2, 3));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn kernel_of_row() {
        let k = integer_kernel(&ZMatrix::from_i64_rows(&[vec![2, 4, 6]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v
                .iter()
                .zip([2, 4, 6])
                .map(|(a, b)| a * BigInt::from(b))
                .sum();
            assert!(s.is_zero());
        }
        // the kernel lattice has index 1 in its rational span: (−2,1,0), (−3,0,1) generate it
        let k2 = integer_kernel(&ZMatrix::from_i64_rows(&[vec![1, 2, 3]]));
        assert_eq!(hermite_columns(&k), k2);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(
            ZMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]).determinant(),
            BigInt::from(-8)
        );
        assert_eq!(
            ZMatrix::from_i64_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]).determinant(),
            BigInt::from(-3)
        );
    }
}
