//! Hilbert series, Hilbert polynomials and staircase (standard monomial)
//! utilities for homogeneous ideals, computed from the leading-term
//! monomial ideal of a Groebner basis.
//!
//! The numerator N(t) with HS_{R/I}(t) = N(t)/(1-t)^n is computed by the
//! pivot recursion N(M) = N(M + (x)) + t * N(M : x), memoized on the
//! minimal generators, with closed forms for the empty, unit and
//! pure-power base cases.

use super::groebner::GroebnerBasis;
use super::qpoly::{big, QPoly};
use super::ring::{monomials_of_degree, Mon, MultiPoly, PolyRing, MAX_VARS};
use super::PolyError;
use num::BigRational;
use std::collections::HashMap;

/// Removes monomials divisible by another in the list; result sorted
/// canonically so it can serve as a memoization key.
fn minimalize(ms: &[Mon]) -> Vec<Mon> {
    let mut out: Vec<Mon> = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let dominated = ms.iter().enumerate().any(|(j, other)| {
            j != i && other.divides(m) && (other != m || j < i)
        });
        if !dominated {
            out.push(*m);
        }
    }
    out.sort_unstable_by(|a, b| {
        (a.deg, a.exps(MAX_VARS)).cmp(&(b.deg, b.exps(MAX_VARS)))
    });
    out.dedup();
    out
}

/// a(t) + t^shift * b(t)
fn zadd_shifted(a: &[i64], b: &[i64], shift: usize) -> Vec<i64> {
    let mut out = vec![0i64; a.len().max(b.len() + shift)];
    out[..a.len()].copy_from_slice(a);
    for (i, &c) in b.iter().enumerate() {
        out[i + shift] += c;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn zmul_one_minus_tk(a: &[i64], k: usize) -> Vec<i64> {
    // a(t) * (1 - t^k)
    let mut out = vec![0i64; a.len() + k];
    out[..a.len()].copy_from_slice(a);
    for (i, &c) in a.iter().enumerate() {
        out[i + k] -= c;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn numerator_rec(gens: &[Mon], memo: &mut HashMap<Vec<Mon>, Vec<i64>>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.deg == 0) {
        return vec![];
    }
    // Pure powers x_i^{a_i} (distinct variables since gens are minimal):
    // N = prod (1 - t^{a_i}).
    let single_support = |m: &Mon| (0..MAX_VARS).filter(|&i| m.exp(i) > 0).count() == 1;
    if gens.iter().all(single_support) {
        let mut acc = vec![1i64];
        for m in gens {
            acc = zmul_one_minus_tk(&acc, m.deg as usize);
        }
        return acc;
    }
    if let Some(hit) = memo.get(gens) {
        return hit.clone();
    }
    // Pivot: the most frequent variable among those occurring in some
    // non-pure-power generator, so both branches make strict progress.
    let mut counts = [0usize; MAX_VARS];
    for m in gens.iter().filter(|m| !single_support(m)) {
        for (i, slot) in counts.iter_mut().enumerate() {
            if m.exp(i) > 0 {
                *slot += 1;
            }
        }
    }
    let var = counts
        .iter()
        .enumerate()
        .max_by_key(|(i, &c)| (c, usize::MAX - i))
        .map(|(i, _)| i)
        .expect("non-empty");
    debug_assert!(counts[var] > 0);

    // M + (x_var): generators with positive exponent become redundant.
    let mut sum_gens: Vec<Mon> = gens.iter().filter(|m| m.exp(var) == 0).copied().collect();
    sum_gens.push(Mon::var(var));
    let sum_gens = minimalize(&sum_gens);

    // M : x_var.
    let colon_gens: Vec<Mon> = gens
        .iter()
        .map(|m| {
            if m.exp(var) > 0 {
                let mut e = [0u16; MAX_VARS];
                e.copy_from_slice(m.exps(MAX_VARS));
                e[var] -= 1;
                Mon::from_exps(&e)
            } else {
                *m
            }
        })
        .collect();
    let colon_gens = minimalize(&colon_gens);

    let n_sum = numerator_rec(&sum_gens, memo);
    let n_colon = numerator_rec(&colon_gens, memo);
    let result = zadd_shifted(&n_sum, &n_colon, 1);
    memo.insert(gens.to_vec(), result.clone());
    result
}

/// Numerator of the Hilbert series of R/M over (1-t)^nvars, where M is the
/// monomial ideal generated by `lms`.
pub fn hilbert_numerator(lms: &[Mon]) -> Vec<i64> {
    let gens = minimalize(lms);
    let mut memo = HashMap::new();
    numerator_rec(&gens, &mut memo)
}

/// Coefficients 0..=max_deg of N(t)/(1-t)^nvars, i.e. the Hilbert function
/// of R/I; division by (1-t) is a prefix-sum pass.
pub fn series_prefix(numerator: &[i64], nvars: usize, max_deg: usize) -> Vec<i64> {
    let mut cur = vec![0i64; max_deg + 1];
    for (i, &c) in numerator.iter().enumerate().take(max_deg + 1) {
        cur[i] = c;
    }
    for _ in 0..nvars {
        for i in 1..cur.len() {
            cur[i] += cur[i - 1];
        }
    }
    cur
}

/// Monomials of the given degree outside the monomial ideal of `lms`:
/// a basis of (R/I)_deg when lms are the leading monomials of a Groebner
/// basis of I.
pub fn standard_monomials(ring: &PolyRing, lms: &[Mon], deg: u16) -> Vec<Mon> {
    monomials_of_degree(ring, deg)
        .into_iter()
        .filter(|m| !lms.iter().any(|l| l.divides(m)))
        .collect()
}

/// Direct staircase count of the Hilbert function; exponential-time oracle
/// used to validate the numerator recursion.
pub fn hilbert_function_direct(ring: &PolyRing, lms: &[Mon], deg: u16) -> usize {
    standard_monomials(ring, lms, deg).len()
}

/// Exact Hilbert data of a homogeneous ideal: series numerator, Krull
/// dimension of R/I, degree, Hilbert polynomial (in the projective
/// convention) and the degree from which HF and HP agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    /// Number of ambient variables (the denominator exponent).
    pub nvars: usize,
    /// Numerator over (1-t)^nvars, coefficients ascending.
    pub numerator: Vec<i64>,
    /// Numerator over (1-t)^krull_dim; nonzero at t = 1 unless R/I = 0.
    pub reduced_numerator: Vec<i64>,
    /// Krull dimension of R/I (the affine cone for projective inputs).
    pub krull_dim: usize,
    /// Value of the reduced numerator at t = 1; the degree of the
    /// projective scheme when the ideal is homogeneous and non-unit.
    pub degree: i64,
    /// Hilbert polynomial HP with HF(m) = HP(m) for m >= stable_from.
    pub hp: QPoly,
    pub stable_from: i64,
}

impl HilbertData {
    pub fn from_leading_monomials(lms: &[Mon], nvars: usize) -> Self {
        let numerator = hilbert_numerator(lms);
        let mut reduced = numerator.clone();
        let mut d = nvars;
        loop {
            if reduced.is_empty() {
                d = 0;
                break;
            }
            let at_one: i64 = reduced.iter().sum();
            if at_one != 0 {
                break;
            }
            // Exact division by (1 - t): prefix sums, dropping the trailing 0.
            let mut q = Vec::with_capacity(reduced.len());
            let mut acc = 0i64;
            for &c in &reduced[..reduced.len()] {
                acc += c;
                q.push(acc);
            }
            debug_assert_eq!(q.last(), Some(&0));
            q.pop();
            while q.last() == Some(&0) {
                q.pop();
            }
            reduced = q;
            if d == 0 {
                break;
            }
            d -= 1;
        }
        let degree: i64 = reduced.iter().sum();
        let mut hp = QPoly::zero();
        if d >= 1 {
            for (j, &c) in reduced.iter().enumerate() {
                let term = QPoly::binomial_shifted(d as i64 - 1 - j as i64, d - 1);
                hp = hp.add(&term.scale(&big(c)));
            }
        }
        let stable_from = if reduced.is_empty() {
            0
        } else {
            ((reduced.len() as i64 - 1) - d as i64 + 1).max(0)
        };
        HilbertData {
            nvars,
            numerator,
            reduced_numerator: reduced,
            krull_dim: d,
            degree,
            hp,
            stable_from,
        }
    }

    pub fn from_gb(gb: &GroebnerBasis) -> Result<Self, PolyError> {
        for g in gb.gens() {
            if !g.is_homogeneous() {
                return Err(PolyError::NotHomogeneous(
                    "Hilbert data needs a homogeneous ideal".into(),
                ));
            }
        }
        Ok(Self::from_leading_monomials(
            &gb.leading_monomials(),
            gb.ring().nvars(),
        ))
    }

    /// Dimension of the projective scheme; -1 when empty.
    pub fn projective_dim(&self) -> i64 {
        self.krull_dim as i64 - 1
    }

    pub fn hp_value(&self, m: i64) -> BigRational {
        self.hp.eval_i(m)
    }

    /// Hilbert function values h(0..=max_deg).
    pub fn series_prefix(&self, max_deg: usize) -> Vec<i64> {
        series_prefix(&self.numerator, self.nvars, max_deg)
    }

    /// Some(c) when HP is the constant c.
    pub fn hp_constant(&self) -> Option<i64> {
        use num::ToPrimitive;
        self.hp
            .as_constant()
            .filter(|c| c.is_integer())
            .and_then(|c| c.to_integer().to_i64())
    }
}

/// Convenience: Hilbert data of the ideal generated by `gens` (must be
/// homogeneous), via a fresh Groebner basis.
pub fn hilbert_of(
    ring: &PolyRing,
    gens: &[MultiPoly],
    budget: &crate::config::Budget,
) -> Result<HilbertData, PolyError> {
    let gb = GroebnerBasis::compute(ring, gens, budget)?;
    HilbertData::from_gb(&gb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Budget;
    use crate::exactmath::rng::SplitMix64;
    use crate::polyalg::ring::{parse_poly, MonomialOrder};

    const P: u64 = 32003;

    #[test]
    fn zero_and_unit_ideals() {
        // R = k[x,y,z]: free module, HS = 1/(1-t)^3.
        let h = HilbertData::from_leading_monomials(&[], 3);
        assert_eq!(h.numerator, vec![1]);
        assert_eq!(h.krull_dim, 3);
        assert_eq!(h.degree, 1);
        // HP(m) = binom(m+2, 2)
        assert_eq!(h.hp, QPoly::binomial_shifted(2, 2));

        let u = HilbertData::from_leading_monomials(&[Mon::one()], 3);
        assert!(u.numerator.is_empty());
        assert_eq!(u.krull_dim, 0);
        assert_eq!(u.degree, 0);
        assert!(u.hp.is_zero());
    }

    #[test]
    fn principal_ideals() {
        // (x) in k[x,y]: residue ring k[y], a line through the origin.
        let h = HilbertData::from_leading_monomials(&[Mon::var(0)], 2);
        assert_eq!(h.numerator, vec![1, -1]);
        assert_eq!(h.reduced_numerator, vec![1]);
        assert_eq!(h.krull_dim, 1);
        assert_eq!(h.degree, 1);
        assert_eq!(h.hp_constant(), Some(1));

        // A degree-3 hypersurface in P^3: numerator 1 - t^3.
        let m3 = Mon::from_exps(&[3, 0, 0, 0]);
        let h3 = HilbertData::from_leading_monomials(&[m3], 4);
        assert_eq!(h3.numerator, vec![1, 0, 0, -1]);
        assert_eq!(h3.reduced_numerator, vec![1, 1, 1]);
        assert_eq!(h3.krull_dim, 3);
        assert_eq!(h3.degree, 3);
        assert_eq!(h3.projective_dim(), 2);
    }

    #[test]
    fn numerator_matches_direct_staircase_on_random_monomial_ideals() {
        let ring = PolyRing::with_default_names(P, 4, MonomialOrder::GrevLex);
        for seed in 0..20u64 {
            let mut rng = SplitMix64::new(777 + seed);
            let k = 1 + rng.below(5) as usize;
            let lms: Vec<Mon> = (0..k)
                .map(|_| {
                    let e = [
                        rng.below(4) as u16,
                        rng.below(4) as u16,
                        rng.below(4) as u16,
                        rng.below(4) as u16,
                    ];
                    Mon::from_exps(&e)
                })
                .filter(|m| m.deg > 0)
                .collect();
            let numerator = hilbert_numerator(&lms);
            let hf = series_prefix(&numerator, 4, 9);
            for d in 0..=9u16 {
                assert_eq!(
                    hf[d as usize],
                    hilbert_function_direct(&ring, &lms, d) as i64,
                    "seed {seed} degree {d} lms {lms:?}"
                );
            }
        }
    }

    #[test]
    fn twisted_cubic_hilbert_polynomial() {
        // 2x2 minors of [[x,y,z],[y,z,w]]: the twisted cubic in P^3,
        // HP(m) = 3m + 1, degree 3, dimension 1.
        let r = PolyRing::new(P, &["x", "y", "z", "w"], MonomialOrder::GrevLex);
        let gens = vec![
            parse_poly(&r, "x*z - y^2").unwrap(),
            parse_poly(&r, "x*w - y*z").unwrap(),
            parse_poly(&r, "y*w - z^2").unwrap(),
        ];
        let h = hilbert_of(&r, &gens, &Budget::default()).unwrap();
        assert_eq!(h.krull_dim, 2);
        assert_eq!(h.projective_dim(), 1);
        assert_eq!(h.degree, 3);
        assert_eq!(h.hp, QPoly::from_i64(&[1, 3]));
        // HF values 1, 4, 7, 10, ... and stabilization from the start.
        assert!(h.stable_from <= 1);
        let hf = series_prefix(&h.numerator, 4, 6);
        for m in h.stable_from..=6 {
            assert_eq!(big(hf[m as usize]), h.hp_value(m), "m = {m}");
        }
    }

    #[test]
    fn two_points_in_the_plane() {
        // V(x, y) union V(x, z): ideal (x, yz) in k[x,y,z].
        let r = PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex);
        let gens = vec![
            parse_poly(&r, "x").unwrap(),
            parse_poly(&r, "y*z").unwrap(),
        ];
        let h = hilbert_of(&r, &gens, &Budget::default()).unwrap();
        assert_eq!(h.krull_dim, 1);
        assert_eq!(h.projective_dim(), 0);
        assert_eq!(h.degree, 2);
        assert_eq!(h.hp_constant(), Some(2));
        // HF: 1, 2, 2, 2, ... so stabilization starts at 1.
        assert_eq!(h.stable_from, 1);
    }

    #[test]
    fn stabilization_bound_is_tight_enough() {
        // Fat point (x,y)^2 in k[x,y]: HF = 1, 2, 0, 0, ... HP = 0.
        let lms = [
            Mon::from_exps(&[2, 0]),
            Mon::from_exps(&[1, 1]),
            Mon::from_exps(&[0, 2]),
        ];
        let h = HilbertData::from_leading_monomials(&lms, 2);
        assert_eq!(h.krull_dim, 0);
        assert!(h.hp.is_zero());
        let hf = series_prefix(&h.numerator, 2, 5);
        assert_eq!(&hf[..3], &[1, 2, 0]);
        for m in h.stable_from..=5 {
            assert_eq!(big(hf[m as usize]), h.hp_value(m));
        }
    }

    #[test]
    fn standard_monomials_complement_leading_terms() {
        let r = PolyRing::new(P, &["x", "y"], MonomialOrder::GrevLex);
        let lms = [Mon::from_exps(&[2, 0]), Mon::from_exps(&[0, 3])];
        // deg 2: x^2 excluded -> xy, y^2
        assert_eq!(standard_monomials(&r, &lms, 2).len(), 2);
        // deg 4: monomials x^a y^b, a+b=4, a<2, b<3 -> xy^3? b=3 excluded; a=1,b=3 out; a=0,b=4 out; a=1.. none
        assert_eq!(standard_monomials(&r, &lms, 4).len(), 0);
        assert_eq!(standard_monomials(&r, &lms, 3).len(), 1); // x y^2
    }
}
