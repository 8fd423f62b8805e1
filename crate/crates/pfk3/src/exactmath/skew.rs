//! Skew-symmetric bilinear forms, their Pfaffians and radicals.

use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use crate::exactmath::rng::SplitMix64;
use crate::exactmath::ExactError;

/// An alternating bilinear form on F_p^n (n even in all toolkit uses),
/// stored as the full skew-symmetric Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkewForm {
    m: Matrix,
}

impl SkewForm {
    /// Validates skew symmetry and a zero diagonal.
    pub fn new(m: Matrix) -> Result<Self, ExactError> {
        let n = m.rows();
        if m.cols() != n {
            return Err(ExactError::BadDimensions {
                expected: n,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        for i in 0..n {
            if !m[(i, i)].is_zero() {
                return Err(ExactError::NonzeroDiagonal { i });
            }
            for j in i + 1..n {
                if m[(i, j)] != -m[(j, i)] {
                    return Err(ExactError::NotSkew { i, j });
                }
            }
        }
        Ok(SkewForm { m })
    }

    /// Builds an n x n form from its strict upper triangle, row-major:
    /// entries (0,1), (0,2), ..., (0,n-1), (1,2), ...
    pub fn from_upper(n: usize, entries: &[Fp], p: u64) -> Self {
        assert_eq!(entries.len(), n * (n - 1) / 2);
        let mut m = Matrix::zero(n, n, p);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m[(i, j)] = entries[k];
                m[(j, i)] = -entries[k];
                k += 1;
            }
        }
        SkewForm { m }
    }

    pub fn random(n: usize, p: u64, rng: &mut SplitMix64) -> Self {
        let entries: Vec<Fp> = (0..n * (n - 1) / 2).map(|_| rng.fp(p)).collect();
        SkewForm::from_upper(n, &entries, p)
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn modulus(&self) -> u64 {
        self.m.modulus()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Fp {
        self.m[(i, j)]
    }

    /// Strict upper triangle, row-major (inverse of `from_upper`).
    pub fn upper(&self) -> Vec<Fp> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    /// The form evaluated on a pair of vectors.
    pub fn eval(&self, u: &[Fp], v: &[Fp]) -> Fp {
        let av = self.m.matvec(v);
        let mut s = Fp::zero(self.modulus());
        for i in 0..self.dim() {
            s += u[i] * av[i];
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.m.rank()
    }

    /// Basis of the radical `{v : A v = 0}`.
    pub fn radical(&self) -> Vec<Vec<Fp>> {
        self.m.kernel()
    }

    /// Pfaffian by skew Gaussian elimination (Parlett-Reid style), O(n^3).
    ///
    /// At step k the congruence shears zero out row k beyond column k+1;
    /// expanding along that row gives pf(A) = A[k][k+1] * pf(trailing block),
    /// and a row/column transposition flips the sign.
    pub fn pfaffian(&self) -> Fp {
        let n = self.dim();
        let p = self.modulus();
        if n % 2 == 1 {
            return Fp::zero(p);
        }
        let mut a = self.m.clone();
        let mut pf = Fp::one(p);
        let mut k = 0;
        while k < n {
            if a[(k, k + 1)].is_zero() {
                let Some(j) = (k + 2..n).find(|&j| !a[(k, j)].is_zero()) else {
                    return Fp::zero(p);
                };
                swap_symmetric(&mut a, j, k + 1);
                pf = -pf;
            }
            let pivot = a[(k, k + 1)];
            pf *= pivot;
            let inv = pivot.inv();
            for i in k + 2..n {
                let f = a[(k, i)] * inv;
                if f.is_zero() {
                    continue;
                }
                // row_i -= f * row_{k+1}; col_i -= f * col_{k+1}
                for j in 0..n {
                    let sub = f * a[(k + 1, j)];
                    a[(i, j)] -= sub;
                }
                for r in 0..n {
                    let sub = f * a[(r, k + 1)];
                    a[(r, i)] -= sub;
                }
            }
            k += 2;
        }
        pf
    }

    /// Pfaffian by recursive expansion along the first row; exponential, used
    /// as an independent cross-check of the elimination path.
    pub fn pfaffian_expansion(&self) -> Fp {
        let idx: Vec<usize> = (0..self.dim()).collect();
        self.pf_expand(&idx)
    }

    fn pf_expand(&self, idx: &[usize]) -> Fp {
        let p = self.modulus();
        if idx.is_empty() {
            return Fp::one(p);
        }
        if idx.len() % 2 == 1 {
            return Fp::zero(p);
        }
        let mut acc = Fp::zero(p);
        let a = idx[0];
        for t in 1..idx.len() {
            let c = self.m[(a, idx[t])];
            if c.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx[1..]
                .iter()
                .copied()
                .filter(|&x| x != idx[t])
                .collect();
            let term = c * self.pf_expand(&rest);
            if t % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// Congruence transform `g A g^T` (used to test pf(gAg^T) = det(g) pf(A)).
    pub fn congruence(&self, g: &Matrix) -> SkewForm {
        let gt = g.transpose();
        SkewForm {
            m: g.mul(&self.m).mul(&gt),
        }
    }
}

fn swap_symmetric(a: &mut Matrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let (x, y) = (a[(i, c)], a[(j, c)]);
        a[(i, c)] = y;
        a[(j, c)] = x;
    }
    for r in 0..n {
        let (x, y) = (a[(r, i)], a[(r, j)]);
        a[(r, i)] = y;
        a[(r, j)] = x;
    }
}
