//! Dense matrices over F_p: row reduction, rank, kernel, determinant.

use crate::exactmath::fp::Fp;
use crate::exactmath::rng::SplitMix64;
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<Fp>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        Matrix {
            rows,
            cols,
            p,
            data: vec![Fp::zero(p); rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Matrix::zero(n, n, p);
        for i in 0..n {
            m[(i, i)] = Fp::one(p);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fp>], p: u64) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zero(r, c, p);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn random(rows: usize, cols: usize, p: u64, rng: &mut SplitMix64) -> Self {
        let mut m = Matrix::zero(rows, cols, p);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = rng.fp(p);
            }
        }
        m
    }

    /// Random invertible square matrix (rejection sampling on the rank).
    pub fn random_invertible(n: usize, p: u64, rng: &mut SplitMix64) -> Self {
        loop {
            let m = Matrix::random(n, n, p, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn row(&self, i: usize) -> &[Fp] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Fp]) -> Vec<Fp> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Fp::zero(self.p);
                for j in 0..self.cols {
                    s += self[(i, j)] * v[j];
                }
                s
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].inv();
            for j in c..self.cols {
                self[(r, j)] *= inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)];
                    for j in c..self.cols {
                        let sub = f * self[(r, j)];
                        self[(i, j)] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{v : Mv = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Fp>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Fp::zero(self.p); self.cols];
            v[free] = Fp::one(self.p);
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[(r, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by Gaussian elimination with exact division.
    pub fn det(&self) -> Fp {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = Fp::one(self.p);
        for c in 0..m.cols {
            let Some(pr) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Fp::zero(self.p);
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = -det;
            }
            det *= m[(c, c)];
            let inv = m[(c, c)].inv();
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)] * inv;
                for j in c..m.cols {
                    let sub = f * m[(c, j)];
                    m[(i, j)] -= sub;
                }
            }
        }
        det
    }

    /// Solves `Mx = b`; `None` when inconsistent, otherwise one solution
    /// (free coordinates set to zero).
    pub fn solve(&self, b: &[Fp]) -> Option<Vec<Fp>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Fp::zero(self.p); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)];
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Fp;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Fp {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fp {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} mod {}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 32003;

    fn fp(v: i64) -> Fp {
        Fp::from_i64(v, P)
    }

    #[test]
    fn rref_rank_kernel() {
        // rank-2 matrix with a 1-dimensional kernel
        let m = Matrix::from_rows(
            &[
                vec![fp(1), fp(2), fp(3)],
                vec![fp(2), fp(4), fp(7)],
                vec![fp(3), fp(6), fp(10)],
            ],
            P,
        );
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.matvec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn det_multiplicative() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let a = Matrix::random(5, 5, P, &mut rng);
            let b = Matrix::random(5, 5, P, &mut rng);
            assert_eq!(a.mul(&b).det(), a.det() * b.det());
        }
    }

    #[test]
    fn det_singular_is_zero() {
        let m = Matrix::from_rows(
            &[
                vec![fp(1), fp(2)],
                vec![fp(2), fp(4)],
            ],
            P,
        );
        assert!(m.det().is_zero());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(&[vec![fp(1), fp(1)], vec![fp(1), fp(-1)]], P);
        let x = m.solve(&[fp(4), fp(2)]).unwrap();
        assert_eq!(m.matvec(&x), vec![fp(4), fp(2)]);

        let sing = Matrix::from_rows(&[vec![fp(1), fp(1)], vec![fp(2), fp(2)]], P);
        assert!(sing.solve(&[fp(1), fp(3)]).is_none());
    }

    #[test]
    fn random_invertible_has_full_rank() {
        let mut rng = SplitMix64::new(3);
        let m = Matrix::random_invertible(6, P, &mut rng);
        assert_eq!(m.rank(), 6);
        assert!(!m.det().is_zero());
    }
}
