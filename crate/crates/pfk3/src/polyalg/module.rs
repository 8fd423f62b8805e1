//! Syzygies and homomorphism spaces.
//!
//! Syzygies are computed by the marker trick: augment each generator g_i of
//! a submodule of R^k with a fresh basis vector e_{k+i}, take a Groebner
//! basis under the position-over-term order (components 0..k-1 dominate the
//! markers), and read off the elements supported entirely in the marker
//! components — those are a generating set (indeed a Groebner basis) of the
//! syzygy module.

use super::groebner::{buchberger_module, normal_form, Counter, GroebnerBasis, VecPoly};
use super::hilbert::standard_monomials;
use super::ring::{Mon, MultiPoly, PolyRing};
use super::PolyError;
use crate::config::Budget;
use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use std::collections::HashMap;

/// Degree of a module element when component c carries internal twist
/// `twists[c]`; max over terms, so it agrees with the usual degree on
/// homogeneous elements.
pub fn twisted_degree(f: &VecPoly, twists: &[u16]) -> u32 {
    f.terms()
        .iter()
        .map(|t| t.mon.deg as u32 + twists[t.comp as usize] as u32)
        .max()
        .unwrap_or(0)
}

/// Syzygies of `gens` as elements of R^m living in ambient R^k (gens are
/// elements of R^k with component twists `twists`).  Returned syzygies s
/// satisfy sum_i s_i * gens_i = 0 exactly.
pub fn module_syzygies(
    ring: &PolyRing,
    gens: &[VecPoly],
    ncomp: u32,
    twists: &[u16],
    budget: &Budget,
) -> Result<Vec<VecPoly>, PolyError> {
    assert_eq!(twists.len(), ncomp as usize);
    let m = gens.len() as u32;
    let total = ncomp + m;
    let mut twists_full = twists.to_vec();
    let mut input = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let deg = twisted_degree(g, twists);
        twists_full.push(deg as u16);
        let marker = VecPoly::unit(ncomp + i as u32, ring.modulus());
        input.push(g.add(ring, &marker));
    }
    let (gb, _) = buchberger_module(ring, &input, total, &twists_full, budget)?;
    Ok(gb
        .into_iter()
        .filter(|v| v.supported_at_or_above(ncomp))
        .map(|v| v.shift_comps_down(ncomp))
        .collect())
}

/// Prunes a homogeneous generating set of a submodule of R^ncomp down to a
/// minimal one: generators are visited in increasing twisted degree and
/// dropped when they already lie in the submodule of those kept so far.
/// Higher-degree elements can never help generate lower-degree ones, so by
/// graded Nakayama the surviving count per degree is the graded Betti
/// number, independent of tie-breaking.
pub fn minimal_module_generators(
    ring: &PolyRing,
    gens: &[VecPoly],
    ncomp: u32,
    twists: &[u16],
    budget: &Budget,
) -> Result<Vec<VecPoly>, PolyError> {
    let mut order: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].is_zero()).collect();
    order.sort_by_key(|&i| twisted_degree(&gens[i], twists));
    let mut kept: Vec<VecPoly> = Vec::new();
    for &i in &order {
        if kept.is_empty() {
            kept.push(gens[i].clone());
            continue;
        }
        let (gb, _) = buchberger_module(ring, &kept, ncomp, twists, budget)?;
        let mut counter = Counter::new(budget, "minimal generators");
        let nf = normal_form(ring, &gens[i], &gb, &mut counter)?;
        if !nf.is_zero() {
            kept.push(gens[i].clone());
        }
    }
    Ok(kept)
}

/// Syzygies of a list of polynomials: elements (s_1..s_m) of R^m with
/// sum_i s_i g_i = 0.
pub fn syzygies(
    ring: &PolyRing,
    gens: &[MultiPoly],
    budget: &Budget,
) -> Result<Vec<VecPoly>, PolyError> {
    let v: Vec<VecPoly> = gens.iter().map(|g| VecPoly::from_poly(0, g)).collect();
    module_syzygies(ring, &v, 1, &[0], budget)
}

/// sum_i s_i * gens_i; the defining property of a syzygy is that this is 0.
pub fn apply_syzygy(ring: &PolyRing, s: &VecPoly, gens: &[MultiPoly]) -> MultiPoly {
    let mut acc = ring.zero_poly();
    for (i, g) in gens.iter().enumerate() {
        let si = s.component(ring, i as u32);
        acc = acc.add(ring, &si.mul(ring, g));
    }
    acc
}

/// Dimension over F_p of Hom(M, N)_d where M = coker(relations in R^m) with
/// generator degrees `gen_degs`, and N = R/J for the Groebner basis `gbn`.
///
/// A homomorphism of degree d sends generator i to a class in N of degree
/// gen_degs[i] + d, parameterized by the standard monomials of that degree;
/// each relation imposes linear conditions through normal forms.  The
/// relation list must generate all relations among the generators' images
/// (a full presentation), otherwise the result overcounts.
pub fn hom_dimension(
    ring: &PolyRing,
    gen_degs: &[u16],
    relations: &[VecPoly],
    gbn: &GroebnerBasis,
    d: i64,
) -> Result<usize, PolyError> {
    let p = ring.modulus();
    let lms = gbn.leading_monomials();

    // Unknowns: coefficients of phi_i over standard monomials of N in
    // degree gen_degs[i] + d.
    let mut unknown_mons: Vec<Vec<Mon>> = Vec::with_capacity(gen_degs.len());
    let mut offsets = Vec::with_capacity(gen_degs.len());
    let mut total = 0usize;
    for &gd in gen_degs {
        let target = gd as i64 + d;
        let mons = if target < 0 {
            Vec::new()
        } else {
            standard_monomials(ring, &lms, target as u16)
        };
        offsets.push(total);
        total += mons.len();
        unknown_mons.push(mons);
    }
    if total == 0 {
        return Ok(0);
    }

    // Rows: for each relation r and each monomial in the union of normal
    // form supports, one linear equation sum_i sum_mu u_{i,mu} NF(r_i * mu).
    let mut rows: Vec<Vec<Fp>> = Vec::new();
    for rel in relations {
        let mut row_index: HashMap<Mon, usize> = HashMap::new();
        let mut local_rows: Vec<Vec<Fp>> = Vec::new();
        for (i, mons) in unknown_mons.iter().enumerate() {
            let ri = rel.component(ring, i as u32);
            if ri.is_zero() {
                continue;
            }
            for (k, mu) in mons.iter().enumerate() {
                let prod = ri.mul_term(ring, mu, Fp::one(p));
                let nf = gbn.normal_form(&prod);
                for &(mon, c) in nf.terms() {
                    let next = row_index.len();
                    let idx = *row_index.entry(mon).or_insert(next);
                    if idx == local_rows.len() {
                        local_rows.push(vec![Fp::zero(p); total]);
                    }
                    local_rows[idx][offsets[i] + k] += c;
                }
            }
        }
        rows.extend(local_rows);
    }

    if rows.is_empty() {
        // No constraints: every choice of images is a homomorphism.
        return Ok(total);
    }
    let mat = Matrix::from_rows(&rows, p);
    Ok(total - mat.rank())
}
