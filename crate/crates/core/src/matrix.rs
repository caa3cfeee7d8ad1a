//! Dense exact matrices over a pluggable ring.
//!
//! At the sizes this crate works with (56×56 and small) dense storage wins
//! on simplicity; exactness is inherited from the ring.

use alloc::vec::Vec;

use crate::ring::{Field, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> Matrix<R> {
    pub fn zero(ring: R, rows: usize, cols: usize) -> Self {
        let data = alloc::vec![ring.zero(); rows * cols];
        Matrix {
            ring,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            let one = m.ring.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(ring: R, rows: Vec<Vec<R::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        Matrix {
            ring,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.ring.is_one(self.get(i, j))
                    } else {
                        self.ring.is_zero(self.get(i, j))
                    }
                })
            })
    }

    pub fn mul(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = Matrix::zero(self.ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if self.ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if self.ring.is_zero(b) {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    let prod = self.ring.mul(a, b);
                    out.set(i, j, self.ring.add(&cur, &prod));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !self.ring.is_zero(a) && !self.ring.is_zero(&v[j]) {
                        self.ring.mul_add_assign(&mut acc, a, &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix<R> {
        let mut out = Matrix::zero(self.ring.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> Matrix<S> {
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination; exact in any
    /// integral domain with `exact_div`.
    pub fn det(&self) -> R::Elem {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return self.ring.one();
        }
        let r = &self.ring;
        let mut m: Vec<Vec<R::Elem>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign_flip = false;
        let mut prev = r.one();
        for k in 0..n {
            if r.is_zero(&m[k][k]) {
                match (k + 1..n).find(|&i| !r.is_zero(&m[i][k])) {
                    Some(i) => {
                        m.swap(k, i);
                        sign_flip = !sign_flip;
                    }
                    None => return r.zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = r.sub(&r.mul(&m[k][k], &m[i][j]), &r.mul(&m[i][k], &m[k][j]));
                    m[i][j] = r.exact_div(&t, &prev);
                }
                m[i][k] = r.zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign_flip {
            r.neg(&d)
        } else {
            d
        }
    }
}

impl<R: Field> Matrix<R> {
    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Matrix<R>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let r = &self.ring;
        let mut a: Vec<Vec<R::Elem>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut b: Vec<Vec<R::Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { r.one() } else { r.zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&i| !r.is_zero(&a[i][col]))?;
            a.swap(col, piv);
            b.swap(col, piv);
            let inv = r.inv(&a[col][col])?;
            for j in 0..n {
                a[col][j] = r.mul(&a[col][j], &inv);
                b[col][j] = r.mul(&b[col][j], &inv);
            }
            for i in 0..n {
                if i != col && !r.is_zero(&a[i][col]) {
                    let f = a[i][col].clone();
                    for j in 0..n {
                        let t = r.mul(&f, &a[col][j]);
                        a[i][j] = r.sub(&a[i][j], &t);
                        let t = r.mul(&f, &b[col][j]);
                        b[i][j] = r.sub(&b[i][j], &t);
                    }
                }
            }
        }
        Some(Matrix::from_rows(r.clone(), b))
    }

    /// Rank by Gaussian elimination over a field.
    pub fn rank(&self) -> usize {
        let r = &self.ring;
        let mut a: Vec<Vec<R::Elem>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&i| !r.is_zero(&a[i][col])) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = r.inv(&a[rank][col]).unwrap();
            for j in col..self.cols {
                a[rank][j] = r.mul(&a[rank][j], &inv);
            }
            for i in 0..self.rows {
                if i != rank && !r.is_zero(&a[i][col]) {
                    let f = a[i][col].clone();
                    for j in col..self.cols {
                        let t = r.mul(&f, &a[rank][j]);
                        a[i][j] = r.sub(&a[i][j], &t);
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntRing, PrimeField};

    #[test]
    fn det_small() {
        let m = Matrix::from_rows(
            IntRing,
            alloc::vec![
                alloc::vec![IntRing.from_i64(2), IntRing.from_i64(1)],
                alloc::vec![IntRing.from_i64(7), IntRing.from_i64(4)],
            ],
        );
        assert_eq!(m.det(), IntRing.from_i64(1));
    }

    #[test]
    fn det_singular() {
        let m = Matrix::from_rows(
            IntRing,
            alloc::vec![
                alloc::vec![IntRing.from_i64(1), IntRing.from_i64(2)],
                alloc::vec![IntRing.from_i64(2), IntRing.from_i64(4)],
            ],
        );
        assert_eq!(m.det(), IntRing.from_i64(0));
    }

    #[test]
    fn inverse_roundtrip_fp() {
        let fp = PrimeField::new(13);
        let m = Matrix::from_rows(
            fp,
            alloc::vec![
                alloc::vec![3u64, 1, 4],
                alloc::vec![1, 5, 9],
                alloc::vec![2, 6, 5],
            ],
        );
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }
}
