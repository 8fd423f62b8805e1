//! Determinantal twisted cubics on cubic surfaces in P^3.
//!
//! A 3x3 matrix A of linear forms in four variables cuts out a cubic
//! surface S = V(det A).  Two independent linear combinations of the
//! columns of A form a 3x2 matrix whose 2x2 minors generate the ideal of a
//! twisted cubic lying on S.  This module certifies the whole package
//! exactly: the Hilbert polynomial 3n + 1, the resolution shape
//! (three quadric generators, two linear syzygies, nothing higher), the
//! Cramer/adjugate identities behind the 2-periodic resolution over S, the
//! truncated Hilbert identity of that resolution, and the 3-dimensional
//! degree-0 Hom space from the curve ideal into the surface ring.

use crate::config::Budget;
use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use crate::exactmath::rng::SplitMix64;
use crate::polyalg::groebner::VecPoly;
use crate::polyalg::ideal::GradedIdeal;
use crate::polyalg::module::{
    hom_dimension, minimal_module_generators, module_syzygies, syzygies, twisted_degree,
};
use crate::polyalg::qpoly::{big, QPoly};
use crate::polyalg::ring::{MonomialOrder, MultiPoly, PolyRing};
use crate::polyalg::PolyError;

/// The coordinate ring of P^3 used throughout this module.
pub fn p3_ring(p: u64) -> PolyRing {
    PolyRing::new(p, &["x", "y", "z", "w"], MonomialOrder::GrevLex)
}

/// A 3x3 matrix of homogeneous linear forms on P^3.
#[derive(Clone, Debug)]
pub struct LinearMatrix3 {
    ring: PolyRing,
    entries: Vec<Vec<MultiPoly>>,
}

fn det2(ring: &PolyRing, a: &MultiPoly, b: &MultiPoly, c: &MultiPoly, d: &MultiPoly) -> MultiPoly {
    a.mul(ring, d).sub(ring, &b.mul(ring, c))
}

impl LinearMatrix3 {
    pub fn new(ring: &PolyRing, entries: Vec<Vec<MultiPoly>>) -> Result<Self, PolyError> {
        if entries.len() != 3 || entries.iter().any(|r| r.len() != 3) {
            return Err(PolyError::BadInput("expected a 3x3 grid".into()));
        }
        for row in &entries {
            for e in row {
                if e.is_zero() || e.degree() != 1 || !e.is_homogeneous() {
                    return Err(PolyError::BadInput(
                        "entries must be nonzero homogeneous linear forms".into(),
                    ));
                }
            }
        }
        let m = LinearMatrix3 {
            ring: ring.clone(),
            entries,
        };
        if m.det().is_zero() {
            return Err(PolyError::BadInput(
                "determinant vanishes identically; no cubic surface".into(),
            ));
        }
        Ok(m)
    }

    pub fn random(ring: &PolyRing, rng: &mut SplitMix64) -> Self {
        let p = ring.modulus();
        loop {
            let entries: Vec<Vec<MultiPoly>> = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let coeffs: Vec<Fp> = (0..4).map(|_| rng.fp(p)).collect();
                            ring.linear_form(&coeffs)
                        })
                        .collect()
                })
                .collect();
            if let Ok(m) = LinearMatrix3::new(ring, entries) {
                return m;
            }
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i][j]
    }

    /// Determinant, a cubic form, by Laplace expansion along the first row.
    pub fn det(&self) -> MultiPoly {
        let r = &self.ring;
        let e = &self.entries;
        let m00 = det2(r, &e[1][1], &e[1][2], &e[2][1], &e[2][2]);
        let m01 = det2(r, &e[1][0], &e[1][2], &e[2][0], &e[2][2]);
        let m02 = det2(r, &e[1][0], &e[1][1], &e[2][0], &e[2][1]);
        e[0][0]
            .mul(r, &m00)
            .sub(r, &e[0][1].mul(r, &m01))
            .add(r, &e[0][2].mul(r, &m02))
    }

    /// Adjugate matrix: transposed cofactors, all entries quadrics.
    pub fn adj(&self) -> Vec<Vec<MultiPoly>> {
        let r = &self.ring;
        let e = &self.entries;
        let mut out = vec![vec![r.zero_poly(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let ri: Vec<usize> = (0..3).filter(|&k| k != i).collect();
                let cj: Vec<usize> = (0..3).filter(|&k| k != j).collect();
                let cof = det2(
                    r,
                    &e[ri[0]][cj[0]],
                    &e[ri[0]][cj[1]],
                    &e[ri[1]][cj[0]],
                    &e[ri[1]][cj[1]],
                );
                let sign = if (i + j) % 2 == 0 { 1i64 } else { -1 };
                out[j][i] = cof.scale(Fp::from_i64(sign, r.modulus()));
            }
        }
        out
    }

    /// Product of two 3x3 polynomial matrices.
    pub fn matmul(
        ring: &PolyRing,
        a: &[Vec<MultiPoly>],
        b: &[Vec<MultiPoly>],
    ) -> Vec<Vec<MultiPoly>> {
        let mut out = vec![vec![ring.zero_poly(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, bk) in b.iter().enumerate() {
                    out[i][j] = out[i][j].add(ring, &a[i][k].mul(ring, &bk[j]));
                }
            }
        }
        out
    }

    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }
}

/// A determinantal twisted cubic: the 2x2 minors of two independent column
/// combinations of a LinearMatrix3, on the surface V(det A).
#[derive(Clone, Debug)]
pub struct DetCurve {
    ring: PolyRing,
    /// The 3x2 matrix of linear forms whose minors cut the curve.
    pub a0: Vec<Vec<MultiPoly>>,
    /// The three quadric minors (row pairs (0,1), (0,2), (1,2)).
    pub minors: Vec<MultiPoly>,
    /// The curve ideal generated by the minors.
    pub ideal: GradedIdeal,
    /// det A, the cubic surface the curve lies on.
    pub surface: MultiPoly,
}

/// Builds the determinantal curve from A and a 3x2 column-combination
/// matrix with independent columns.  Certifies codimension 2, degree 3,
/// Hilbert polynomial 3n + 1, and det A lying in the minor ideal.
pub fn make_det_curve(
    a: &LinearMatrix3,
    combo: &Matrix,
    budget: &Budget,
) -> Result<DetCurve, PolyError> {
    let ring = a.ring().clone();
    if combo.rows() != 3 || combo.cols() != 2 {
        return Err(PolyError::BadInput("combo must be 3x2".into()));
    }
    if combo.rank() != 2 {
        return Err(PolyError::BadInput(
            "degenerate matrix: combo columns are dependent".into(),
        ));
    }
    let mut a0 = vec![vec![ring.zero_poly(); 2]; 3];
    for (i, row) in a0.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..3 {
                *cell = cell.add(&ring, &a.entry(i, k).scale(combo[(k, j)]));
            }
        }
    }
    let minors = vec![
        det2(&ring, &a0[0][0], &a0[0][1], &a0[1][0], &a0[1][1]),
        det2(&ring, &a0[0][0], &a0[0][1], &a0[2][0], &a0[2][1]),
        det2(&ring, &a0[1][0], &a0[1][1], &a0[2][0], &a0[2][1]),
    ];
    let ideal = GradedIdeal::new(&ring, minors.clone());
    let hd = ideal.hilbert(budget)?;
    if hd.projective_dim() != 1 || hd.degree != 3 {
        return Err(PolyError::BadInput(format!(
            "degenerate matrix: minors cut dimension {} degree {} instead of a cubic curve",
            hd.projective_dim(),
            hd.degree
        )));
    }
    if hd.hp != QPoly::from_i64(&[1, 3]) {
        return Err(PolyError::BadInput(format!(
            "degenerate matrix: Hilbert polynomial {} is not 3m + 1",
            hd.hp
        )));
    }
    let surface = a.det();
    if !ideal.gb(budget)?.contains(&surface) {
        return Err(PolyError::BadInput(
            "det A does not lie in the minor ideal".into(),
        ));
    }
    Ok(DetCurve {
        ring,
        a0,
        minors,
        ideal,
        surface,
    })
}

/// Graded Betti data of the curve ideal's minimal free resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionShape {
    pub generator_degrees: Vec<u16>,
    pub syzygy_degrees: Vec<u32>,
    pub second_syzygies: usize,
}

/// Computes the resolution shape of the curve ideal over the ambient P^3
/// ring: expect three degree-2 generators, two degree-3 (linear) syzygies,
/// and no second syzygies.
pub fn resolution_shape(curve: &DetCurve, budget: &Budget) -> Result<ResolutionShape, PolyError> {
    let ring = &curve.ring;
    let generator_degrees: Vec<u16> = curve
        .minors
        .iter()
        .map(|m| {
            debug_assert!(m.is_homogeneous());
            m.degree() as u16
        })
        .collect();
    let syz_raw = syzygies(ring, &curve.minors, budget)?;
    let syz = minimal_module_generators(ring, &syz_raw, 3, &generator_degrees, budget)?;
    let mut syzygy_degrees: Vec<u32> = syz
        .iter()
        .map(|s| twisted_degree(s, &generator_degrees))
        .collect();
    syzygy_degrees.sort_unstable();
    let second_raw = module_syzygies(ring, &syz, 3, &generator_degrees, budget)?;
    let second_twists: Vec<u16> = syzygy_degrees.iter().map(|&d| d as u16).collect();
    let second = minimal_module_generators(
        ring,
        &second_raw,
        syz.len() as u32,
        &second_twists,
        budget,
    )?;
    Ok(ResolutionShape {
        generator_degrees,
        syzygy_degrees,
        second_syzygies: second.len(),
    })
}

/// Report of the adjugate / 2-periodicity checks for a LinearMatrix3.
#[derive(Clone, Debug)]
pub struct TwoPeriodicReport {
    /// A adj(A) = adj(A) A = det(A) I as exact polynomial identities.
    pub cramer_holds: bool,
    /// Every adjugate entry is a homogeneous quadric.
    pub adj_entries_quadric: bool,
    /// Both composite maps vanish entrywise modulo det A.
    pub composites_vanish_on_surface: bool,
    /// adj(adj A) = det(A) A, the classical 3x3 identity.
    pub double_adjugate_holds: bool,
}

impl TwoPeriodicReport {
    pub fn all_hold(&self) -> bool {
        self.cramer_holds
            && self.adj_entries_quadric
            && self.composites_vanish_on_surface
            && self.double_adjugate_holds
    }
}

/// Verifies the Cramer identity and the 2-periodicity of the adjugate
/// resolution over the surface det A = 0.
pub fn two_periodic_check(a: &LinearMatrix3, budget: &Budget) -> Result<TwoPeriodicReport, PolyError> {
    let ring = a.ring();
    let det = a.det();
    let adj = a.adj();
    let prod1 = LinearMatrix3::matmul(ring, a.entries(), &adj);
    let prod2 = LinearMatrix3::matmul(ring, &adj, a.entries());
    let mut cramer = true;
    for i in 0..3 {
        for j in 0..3 {
            let expect = if i == j { det.clone() } else { ring.zero_poly() };
            cramer &= prod1[i][j] == expect && prod2[i][j] == expect;
        }
    }
    let adj_quadric = adj
        .iter()
        .flatten()
        .all(|e| e.is_zero() || (e.degree() == 2 && e.is_homogeneous()));
    let surface = GradedIdeal::new(ring, vec![det.clone()]);
    let sgb = surface.gb(budget)?;
    let vanish = prod1
        .iter()
        .chain(prod2.iter())
        .flatten()
        .all(|e| sgb.contains(e));
    let adj_adj = {
        // adj of the quadric matrix, computed with the same cofactor rule.
        let r = ring;
        let mut out = vec![vec![r.zero_poly(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let ri: Vec<usize> = (0..3).filter(|&k| k != i).collect();
                let cj: Vec<usize> = (0..3).filter(|&k| k != j).collect();
                let cof = det2(
                    r,
                    &adj[ri[0]][cj[0]],
                    &adj[ri[0]][cj[1]],
                    &adj[ri[1]][cj[0]],
                    &adj[ri[1]][cj[1]],
                );
                let sign = if (i + j) % 2 == 0 { 1i64 } else { -1 };
                out[j][i] = cof.scale(Fp::from_i64(sign, r.modulus()));
            }
        }
        out
    };
    let mut double_adj = true;
    for i in 0..3 {
        for j in 0..3 {
            double_adj &= adj_adj[i][j] == det.mul(ring, a.entry(i, j));
        }
    }
    Ok(TwoPeriodicReport {
        cramer_holds: cramer,
        adj_entries_quadric: adj_quadric,
        composites_vanish_on_surface: vanish,
        double_adjugate_holds: double_adj,
    })
}

/// Hilbert function of the image of the curve ideal in the surface ring,
/// h(I_{C/S}, n) = h(R/(det A), n) - h(R/I_C, n).
pub fn curve_in_surface_hilbert(
    curve: &DetCurve,
    budget: &Budget,
    max_deg: usize,
) -> Result<Vec<i64>, PolyError> {
    let surface = GradedIdeal::new(&curve.ring, vec![curve.surface.clone()]);
    let hs = surface.hilbert(budget)?.series_prefix(max_deg);
    let hc = curve.ideal.hilbert(budget)?.series_prefix(max_deg);
    Ok(hs.iter().zip(&hc).map(|(a, b)| a - b).collect())
}

/// Checks the truncated Hilbert identity of the 2-periodic resolution
/// ... -> O_S(-5)^3 -> O_S(-3)^3 -> O_S(-2)^3 -> I_{C/S} -> 0:
/// for n <= 5 the omitted twists contribute nothing, so
/// h(I_{C/S}, n) = 3 h(R_S, n-2) - 3 h(R_S, n-3) + 3 h(R_S, n-5).
pub fn two_periodic_hilbert_identity(curve: &DetCurve, budget: &Budget) -> Result<bool, PolyError> {
    let surface = GradedIdeal::new(&curve.ring, vec![curve.surface.clone()]);
    let hs = surface.hilbert(budget)?.series_prefix(5);
    let lhs = curve_in_surface_hilbert(curve, budget, 5)?;
    let at = |n: i64| -> i64 {
        if n < 0 {
            0
        } else {
            hs[n as usize]
        }
    };
    Ok((0..=5i64).all(|n| lhs[n as usize] == 3 * at(n - 2) - 3 * at(n - 3) + 3 * at(n - 5)))
}

/// Degree-0 dimension of Hom(I_{C/S}, R_S) over the surface ring: the
/// curve ideal is presented as a module over the ambient ring by the
/// projected syzygies of (minors, det A).
pub fn hom_into_surface_dimension(curve: &DetCurve, budget: &Budget) -> Result<usize, PolyError> {
    let ring = &curve.ring;
    let mut with_det = curve.minors.clone();
    with_det.push(curve.surface.clone());
    let syz = syzygies(ring, &with_det, budget)?;
    // Drop the det-coefficient component: what remains generates all
    // relations among the minors inside R/(det A).
    let relations: Vec<VecPoly> = syz
        .iter()
        .map(|s| {
            VecPoly::from_terms(
                ring,
                s.terms()
                    .iter()
                    .filter(|t| t.comp < 3)
                    .copied()
                    .collect(),
            )
        })
        .filter(|v| !v.is_zero())
        .collect();
    let gen_degs: Vec<u16> = curve.minors.iter().map(|m| m.degree() as u16).collect();
    let surface = GradedIdeal::new(ring, vec![curve.surface.clone()]);
    let sgb = surface.gb(budget)?;
    hom_dimension(ring, &gen_degs, &relations, sgb, 0)
}

/// Control computation: Hom(R_S, R_S) in degree 0 is 1-dimensional.
pub fn hom_surface_endomorphisms(a: &LinearMatrix3, budget: &Budget) -> Result<usize, PolyError> {
    let ring = a.ring();
    let det = a.det();
    let relations = vec![VecPoly::from_poly(0, &det)];
    let surface = GradedIdeal::new(ring, vec![det.clone()]);
    let sgb = surface.gb(budget)?;
    hom_dimension(ring, &[0], &relations, sgb, 0)
}

/// The binomial alternating sum from the ambient resolution,
/// binom(n+3,3) - 3 binom(n+1,3) + 2 binom(n,3), as a polynomial: 3n + 1.
pub fn curve_hp_from_resolution() -> QPoly {
    QPoly::binomial_shifted(3, 3)
        .sub(&QPoly::binomial_shifted(1, 3).scale(&big(3)))
        .add(&QPoly::binomial_shifted(0, 3).scale(&big(2)))
}

/// Full certification of one sampled configuration; returns the curve on
/// success so callers can run further checks.
pub fn certify_random_configuration(
    p: u64,
    seed: u64,
    budget: &Budget,
) -> Result<(DetCurve, ResolutionShape, TwoPeriodicReport, usize), PolyError> {
    let ring = p3_ring(p);
    let mut rng = SplitMix64::new(seed);
    let a = LinearMatrix3::random(&ring, &mut rng);
    let combo = loop {
        let c = Matrix::random(3, 2, p, &mut rng);
        if c.rank() == 2 {
            break c;
        }
    };
    let curve = make_det_curve(&a, &combo, budget)?;
    let shape = resolution_shape(&curve, budget)?;
    let report = two_periodic_check(&a, budget)?;
    let hom = hom_into_surface_dimension(&curve, budget)?;
    Ok((curve, shape, report, hom))
}
