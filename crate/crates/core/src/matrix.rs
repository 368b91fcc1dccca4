//! Dense square matrices over a [`Field`].

use crate::gfq::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, data: vec![Elem::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, data: rows.concat() }
    }

    pub fn diagonal(entries: &[Elem]) -> Self {
        let mut m = Self::zero(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Elem::ZERO;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Column vector product `M x`.
    pub fn apply(&self, x: &[Elem], f: &Field) -> Vec<Elem> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    /// Row vector product `h M`.
    pub fn apply_row(&self, h: &[Elem], f: &Field) -> Vec<Elem> {
        (0..self.n)
            .map(|j| (0..self.n).fold(Elem::ZERO, |acc, i| f.add(acc, f.mul(h[i], self.get(i, j)))))
            .collect()
    }

    pub fn add(&self, other: &Matrix, f: &Field) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { n: self.n, data }
    }

    pub fn sub(&self, other: &Matrix, f: &Field) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { n: self.n, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n)
    }

    /// Reduced row echelon form and the pivot columns.
    fn rref(&self, f: &Field) -> (Vec<Vec<Elem>>, Vec<usize>) {
        let n = self.n;
        let mut rows: Vec<Vec<Elem>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(pr) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let s = f.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, s);
            }
            for i in 0..n {
                if i != r && !rows[i][c].is_zero() {
                    let factor = rows[i][c];
                    for j in 0..n {
                        let v = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
                        rows[i][j] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (rows, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// A basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self, f: &Field) -> Vec<Vec<Elem>> {
        let n = self.n;
        let (rows, pivots) = self.rref(f);
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Elem::ZERO; n];
                v[free] = Elem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(rows[r][free]);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        let n = self.n;
        let mut aug: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
                row
            })
            .collect();
        for c in 0..n {
            let pr = (c..n).find(|&i| !aug[i][c].is_zero())?;
            aug.swap(c, pr);
            let s = f.inv(aug[c][c]);
            for x in aug[c].iter_mut() {
                *x = f.mul(*x, s);
            }
            for i in 0..n {
                if i != c && !aug[i][c].is_zero() {
                    let factor = aug[i][c];
                    for j in 0..2 * n {
                        let v = f.sub(aug[i][j], f.mul(factor, aug[c][j]));
                        aug[i][j] = v;
                    }
                }
            }
        }
        let rows: Vec<Vec<Elem>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(&rows))
    }

    /// Applies the field automorphism `x -> x^(p^times)` entrywise.
    pub fn frobenius(&self, times: u32, f: &Field) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|&e| f.frobenius_pow(e, times)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_rank_over_gf3() {
        let f = Field::new(3).unwrap();
        let e = |v: u8| Elem(v);
        let m = Matrix::from_rows(&[vec![e(1), e(2), e(0)], vec![e(0), e(1), e(1)], vec![e(2), e(0), e(1)]]);
        let inv = m.inverse(&f).expect("invertible");
        assert!(m.mul(&inv, &f).is_identity());
        assert_eq!(m.rank(&f), 3);

        let singular = Matrix::from_rows(&[vec![e(1), e(2), e(0)], vec![e(2), e(1), e(0)], vec![e(0), e(0), e(0)]]);
        assert!(singular.inverse(&f).is_none());
        assert_eq!(singular.rank(&f), 1);
        for v in singular.kernel(&f) {
            assert!(singular.apply(&v, &f).iter().all(|x| x.is_zero()));
        }
        assert_eq!(singular.kernel(&f).len(), 2);
    }
}
