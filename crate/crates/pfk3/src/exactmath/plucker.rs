//! Pluecker coordinates for 2-planes in a 6-dimensional space.
//!
//! A 2-plane spanned by vectors v, w has Pluecker vector wedge(v, w) in
//! Lambda^2 V (dimension 15), indexed here by the pairs `PAIRS` in
//! lexicographic order.  Lambda^4 V also has dimension 15, indexed by the
//! 4-subsets `QUADS`; the pairing wedge4 : Lambda^2 x Lambda^2 -> Lambda^4
//! detects incidence: planes P and R meet iff wedge4(omega_P, omega_R) = 0.

use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use crate::exactmath::ExactError;

/// Index pairs (i < j) for Lambda^2 of a 6-dimensional space.
pub const PAIRS: [(usize, usize); 15] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

/// 4-subsets of {0..5} in lexicographic order, indexing Lambda^4.
pub const QUADS: [[usize; 4]; 15] = [
    [0, 1, 2, 3],
    [0, 1, 2, 4],
    [0, 1, 2, 5],
    [0, 1, 3, 4],
    [0, 1, 3, 5],
    [0, 1, 4, 5],
    [0, 2, 3, 4],
    [0, 2, 3, 5],
    [0, 2, 4, 5],
    [0, 3, 4, 5],
    [1, 2, 3, 4],
    [1, 2, 3, 5],
    [1, 2, 4, 5],
    [1, 3, 4, 5],
    [2, 3, 4, 5],
];

pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 6);
    PAIRS.iter().position(|&(a, b)| (a, b) == (i, j)).unwrap()
}

pub fn quad_index(q: [usize; 4]) -> usize {
    QUADS.iter().position(|&s| s == q).unwrap()
}

/// An element of Lambda^2 V, coordinates in `PAIRS` order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PluckerVector {
    coords: [Fp; 15],
}

impl PluckerVector {
    pub fn new(coords: [Fp; 15]) -> Self {
        PluckerVector { coords }
    }

    pub fn coords(&self) -> &[Fp; 15] {
        &self.coords
    }

    pub fn coord(&self, i: usize, j: usize) -> Fp {
        self.coords[pair_index(i, j)]
    }

    pub fn modulus(&self) -> u64 {
        self.coords[0].modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Scales so the first nonzero coordinate is 1 (canonical projective
    /// representative); returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<PluckerVector> {
        let lead = self.coords.iter().find(|c| !c.is_zero())?;
        let inv = lead.inv();
        let mut out = self.coords;
        for c in &mut out {
            *c = *c * inv;
        }
        Some(PluckerVector { coords: out })
    }

    /// Residues of the 15 Pluecker quadrics; all zero iff decomposable.
    pub fn quadric_residues(&self) -> [Fp; 15] {
        let p = self.modulus();
        let mut out = [Fp::zero(p); 15];
        for (qi, &[i, j, k, l]) in QUADS.iter().enumerate() {
            out[qi] = self.coord(i, j) * self.coord(k, l)
                - self.coord(i, k) * self.coord(j, l)
                + self.coord(i, l) * self.coord(j, k);
        }
        out
    }

    pub fn is_decomposable(&self) -> bool {
        !self.is_zero() && self.quadric_residues().iter().all(|r| r.is_zero())
    }

    /// Recovers a basis of the 2-plane from a decomposable vector.
    ///
    /// For omega = v /\ w the skew matrix W with W[i][j] = omega_{ij} equals
    /// v w^T - w v^T, so rows a and b span the plane whenever omega_{ab} != 0.
    pub fn plane_basis(&self) -> Result<(Vec<Fp>, Vec<Fp>), ExactError> {
        let p = self.modulus();
        let Some(&(a, b)) = PAIRS
            .iter()
            .find(|&&(i, j)| !self.coord(i, j).is_zero())
        else {
            return Err(ExactError::NotDecomposable);
        };
        let entry = |i: usize, j: usize| -> Fp {
            use std::cmp::Ordering::*;
            match i.cmp(&j) {
                Less => self.coord(i, j),
                Equal => Fp::zero(p),
                Greater => -self.coord(j, i),
            }
        };
        let v: Vec<Fp> = (0..6).map(|j| entry(a, j)).collect();
        let w: Vec<Fp> = (0..6).map(|j| entry(b, j)).collect();
        // wedge(row_a, row_b) = omega_{ab} * omega exactly when omega is
        // decomposable; verify rather than trust the caller.
        let scaled = wedge(&v, &w, p);
        let c = self.coord(a, b);
        for t in 0..15 {
            if scaled.coords[t] != c * self.coords[t] {
                return Err(ExactError::NotDecomposable);
            }
        }
        Ok((v, w))
    }
}

/// wedge(v, w): the 2x2 minors of the 2x6 matrix with rows v, w.
pub fn wedge(v: &[Fp], w: &[Fp], p: u64) -> PluckerVector {
    assert_eq!(v.len(), 6);
    assert_eq!(w.len(), 6);
    let mut coords = [Fp::zero(p); 15];
    for (t, &(i, j)) in PAIRS.iter().enumerate() {
        coords[t] = v[i] * w[j] - v[j] * w[i];
    }
    PluckerVector::new(coords)
}

/// An element of Lambda^4 V, coordinates in `QUADS` order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FourForm {
    coords: [Fp; 15],
}

impl FourForm {
    pub fn coords(&self) -> &[Fp; 15] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Sign of e_a /\ e_b /\ e_c /\ e_d relative to the sorted basis element,
/// for disjoint pairs (a,b), (c,d) with a<b, c<d; counts inversions of the
/// concatenated sequence.
fn wedge_sign(a: usize, b: usize, c: usize, d: usize) -> i32 {
    let seq = [a, b, c, d];
    let mut inv = 0;
    for s in 0..4 {
        for t in s + 1..4 {
            if seq[s] > seq[t] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The symmetric pairing Lambda^2 x Lambda^2 -> Lambda^4.
pub fn wedge4(a: &PluckerVector, b: &PluckerVector) -> FourForm {
    let p = a.modulus();
    let mut coords = [Fp::zero(p); 15];
    for (s, &(i, j)) in PAIRS.iter().enumerate() {
        if a.coords()[s].is_zero() {
            continue;
        }
        for (t, &(k, l)) in PAIRS.iter().enumerate() {
            if b.coords()[t].is_zero() {
                continue;
            }
            if i == k || i == l || j == k || j == l {
                continue;
            }
            let mut quad = [i, j, k, l];
            quad.sort_unstable();
            let term = a.coords()[s] * b.coords()[t];
            let qi = quad_index(quad);
            if wedge_sign(i, j, k, l) > 0 {
                coords[qi] += term;
            } else {
                coords[qi] -= term;
            }
        }
    }
    FourForm { coords }
}

/// Matrix of the linear map `x -> wedge4(x, b)` on Lambda^2, as a 15x15
/// matrix (rows indexed by QUADS, columns by PAIRS).
pub fn wedge4_matrix(b: &PluckerVector) -> Matrix {
    let p = b.modulus();
    let mut m = Matrix::zero(15, 15, p);
    for col in 0..15 {
        let mut unit = [Fp::zero(p); 15];
        unit[col] = Fp::one(p);
        let image = wedge4(&PluckerVector::new(unit), b);
        for row in 0..15 {
            m[(row, col)] = image.coords()[row];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rng::SplitMix64;

    const P: u64 = 32003;

    fn fp(v: i64) -> Fp {
        Fp::from_i64(v, P)
    }

    fn unit(i: usize) -> Vec<Fp> {
        let mut v = vec![Fp::zero(P); 6];
        v[i] = fp(1);
        v
    }

    fn random_vec(rng: &mut SplitMix64) -> Vec<Fp> {
        (0..6).map(|_| rng.fp(P)).collect()
    }

    #[test]
    fn wedge_of_basis_vectors() {
        let w = wedge(&unit(0), &unit(1), P);
        for (t, &(i, j)) in PAIRS.iter().enumerate() {
            let expect = if (i, j) == (0, 1) { fp(1) } else { fp(0) };
            assert_eq!(w.coords()[t], expect);
        }
        assert!(wedge(&unit(2), &unit(2), P).is_zero());
    }

    #[test]
    fn wedge_is_alternating_and_bilinear() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..50 {
            let v = random_vec(&mut rng);
            let w = random_vec(&mut rng);
            let vw = wedge(&v, &w, P);
            let wv = wedge(&w, &v, P);
            for t in 0..15 {
                assert_eq!(vw.coords()[t], -wv.coords()[t]);
            }
            assert!(wedge(&v, &v, P).is_zero());
        }
    }

    #[test]
    fn pluecker_quadrics_vanish_on_decomposables() {
        let mut rng = SplitMix64::new(2);
        for _ in 0..100 {
            let v = random_vec(&mut rng);
            let w = random_vec(&mut rng);
            let omega = wedge(&v, &w, P);
            assert!(omega.quadric_residues().iter().all(|r| r.is_zero()));
        }
        // and generically do not vanish on a random Lambda^2 element
        let mut coords = [Fp::zero(P); 15];
        for c in &mut coords {
            *c = rng.fp(P);
        }
        let generic = PluckerVector::new(coords);
        assert!(!generic.is_decomposable());
    }

    #[test]
    fn wedge4_units_and_sign() {
        // e01 /\ e23 = +e0123, e23 /\ e01 = +e0123, e02 /\ e13 = -e0123
        let e = |i: usize, j: usize| {
            let mut c = [Fp::zero(P); 15];
            c[pair_index(i, j)] = fp(1);
            PluckerVector::new(c)
        };
        let q = quad_index([0, 1, 2, 3]);
        assert_eq!(wedge4(&e(0, 1), &e(2, 3)).coords()[q], fp(1));
        assert_eq!(wedge4(&e(2, 3), &e(0, 1)).coords()[q], fp(1));
        assert_eq!(wedge4(&e(0, 2), &e(1, 3)).coords()[q], fp(-1));
        assert!(wedge4(&e(0, 1), &e(1, 2)).is_zero());
    }

    #[test]
    fn wedge4_is_symmetric() {
        let mut rng = SplitMix64::new(3);
        let mut mk = || {
            let mut c = [Fp::zero(P); 15];
            for x in &mut c {
                *x = rng.fp(P);
            }
            PluckerVector::new(c)
        };
        for _ in 0..20 {
            let a = mk();
            let b = mk();
            assert_eq!(wedge4(&a, &b), wedge4(&b, &a));
        }
    }

    #[test]
    fn planes_meet_iff_wedge4_vanishes() {
        let mut rng = SplitMix64::new(4);
        for _ in 0..40 {
            let p1 = random_vec(&mut rng);
            let p2 = random_vec(&mut rng);
            let r1 = random_vec(&mut rng);
            let r2 = random_vec(&mut rng);
            let wp = wedge(&p1, &p2, P);
            let wr = wedge(&r1, &r2, P);
            // rank oracle: the planes meet iff the 4x6 matrix of spanning
            // vectors has rank <= 3
            let m = Matrix::from_rows(&[p1.clone(), p2.clone(), r1.clone(), r2.clone()], P);
            let meet = m.rank() <= 3;
            assert_eq!(wedge4(&wp, &wr).is_zero(), meet);
        }
        // shared vector forces incidence
        let a = random_vec(&mut rng);
        let b = random_vec(&mut rng);
        let c = random_vec(&mut rng);
        let w1 = wedge(&a, &b, P);
        let w2 = wedge(&a, &c, P);
        assert!(wedge4(&w1, &w2).is_zero());
    }

    #[test]
    fn wedge4_with_fixed_decomposable_has_rank_six() {
        // The kernel of x -> x /\ omega_R is R /\ V, of dimension 9.
        let mut rng = SplitMix64::new(5);
        for _ in 0..10 {
            let r1 = random_vec(&mut rng);
            let r2 = random_vec(&mut rng);
            let omega = wedge(&r1, &r2, P);
            let m = wedge4_matrix(&omega);
            assert_eq!(m.rank(), 6);
            assert_eq!(m.kernel().len(), 9);
        }
    }

    #[test]
    fn plane_basis_recovers_the_plane() {
        let mut rng = SplitMix64::new(6);
        for _ in 0..40 {
            let v = random_vec(&mut rng);
            let w = random_vec(&mut rng);
            let omega = wedge(&v, &w, P);
            if omega.is_zero() {
                continue;
            }
            let (a, b) = omega.plane_basis().unwrap();
            // same plane: wedge(a,b) proportional to omega, and both a, b
            // lie in the span of v, w
            let back = wedge(&a, &b, P).normalized().unwrap();
            assert_eq!(back, omega.normalized().unwrap());
            let m = Matrix::from_rows(&[v.clone(), w.clone(), a, b], P);
            assert_eq!(m.rank(), 2);
        }
    }

    #[test]
    fn plane_basis_rejects_non_decomposable() {
        let mut coords = [Fp::zero(P); 15];
        coords[pair_index(0, 1)] = fp(1);
        coords[pair_index(2, 3)] = fp(1);
        let non_dec = PluckerVector::new(coords);
        assert!(non_dec.plane_basis().is_err());
    }
}
