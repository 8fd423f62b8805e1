//! Ideal-level operations: cached Groebner bases and Hilbert data, ideal
//! quotients via syzygies, saturation by iterated quotients, intersections
//! by the auxiliary-variable trick, and substitution of linear generators
//! (with exact lifting of points back to the original coordinates).

use super::groebner::GroebnerBasis;
use super::hilbert::HilbertData;
use super::module::syzygies;
use super::ring::{Mon, MultiPoly, PolyRing};
use super::PolyError;
use crate::config::Budget;
use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use std::collections::HashSet;
use std::sync::OnceLock;

/// An ideal presented by generators, with lazily computed (and then cached)
/// reduced Groebner basis and Hilbert data.
#[derive(Clone, Debug)]
pub struct GradedIdeal {
    ring: PolyRing,
    gens: Vec<MultiPoly>,
    gb: OnceLock<GroebnerBasis>,
    hilbert: OnceLock<HilbertData>,
}

impl GradedIdeal {
    pub fn new(ring: &PolyRing, gens: Vec<MultiPoly>) -> Self {
        GradedIdeal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: OnceLock::new(),
            hilbert: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn gb(&self, budget: &Budget) -> Result<&GroebnerBasis, PolyError> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = GroebnerBasis::compute(&self.ring, &self.gens, budget)?;
        let _ = self.gb.set(g);
        Ok(self.gb.get().expect("set above"))
    }

    pub fn hilbert(&self, budget: &Budget) -> Result<&HilbertData, PolyError> {
        if let Some(h) = self.hilbert.get() {
            return Ok(h);
        }
        let h = HilbertData::from_gb(self.gb(budget)?)?;
        let _ = self.hilbert.set(h);
        Ok(self.hilbert.get().expect("set above"))
    }

    pub fn contains(&self, f: &MultiPoly, budget: &Budget) -> Result<bool, PolyError> {
        Ok(self.gb(budget)?.contains(f))
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool, PolyError> {
        Ok(self.gb(budget)?.is_unit_ideal())
    }

    pub fn same_ideal(&self, other: &GradedIdeal, budget: &Budget) -> Result<bool, PolyError> {
        Ok(self.gb(budget)?.same_ideal(other.gb(budget)?))
    }

    pub fn sum_with(&self, extra: &[MultiPoly]) -> GradedIdeal {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        GradedIdeal::new(&self.ring, gens)
    }

    /// The ideal quotient (I : f) = { a : a f in I }, read off the first
    /// components of the syzygies of (f, g_1, ..., g_m).
    pub fn quotient_by_poly(&self, f: &MultiPoly, budget: &Budget) -> Result<GradedIdeal, PolyError> {
        if f.is_zero() {
            return Err(PolyError::BadInput("quotient by the zero polynomial".into()));
        }
        let mut all = Vec::with_capacity(self.gens.len() + 1);
        all.push(f.clone());
        all.extend_from_slice(&self.gens);
        let syz = syzygies(&self.ring, &all, budget)?;
        let quots: Vec<MultiPoly> = syz
            .iter()
            .map(|s| s.component(&self.ring, 0))
            .filter(|q| !q.is_zero())
            .collect();
        Ok(GradedIdeal::new(&self.ring, quots))
    }

    /// The saturation (I : f^infty): iterated quotients until the reduced
    /// Groebner basis stabilizes.
    pub fn saturate_by_poly(&self, f: &MultiPoly, budget: &Budget) -> Result<GradedIdeal, PolyError> {
        let mut cur = self.clone();
        for _ in 0..256 {
            let next = cur.quotient_by_poly(f, budget)?;
            if next.gb(budget)?.same_ideal(cur.gb(budget)?) {
                return Ok(next);
            }
            cur = next;
        }
        Err(PolyError::RetriesExhausted(
            "saturation chain did not stabilize within 256 quotients".into(),
        ))
    }

    /// Intersection of two ideals in the same ring, via the elimination
    /// trick: (t*I + (1-t)*J) ∩ R in R[t] with t dominating.
    pub fn intersect(&self, other: &GradedIdeal, budget: &Budget) -> Result<GradedIdeal, PolyError> {
        assert_eq!(self.ring, other.ring, "intersect needs one ring");
        let rt = self.ring.extend_t();
        let n = self.ring.nvars();
        let shift: Vec<usize> = (1..=n).collect();
        let t = rt.var(0);
        let one_minus_t = rt.one_poly().sub(&rt, &t);
        let mut gens_t = Vec::with_capacity(self.gens.len() + other.gens.len());
        for g in &self.gens {
            gens_t.push(g.map_vars(&rt, &shift).mul(&rt, &t));
        }
        for g in &other.gens {
            gens_t.push(g.map_vars(&rt, &shift).mul(&rt, &one_minus_t));
        }
        let gb = GroebnerBasis::compute(&rt, &gens_t, budget)?;
        Ok(GradedIdeal::new(&self.ring, eliminate_t(&rt, &self.ring, &gb)))
    }

    /// Saturation by an ideal: (I : J^infty) = ∩_i (I : f_i^infty) over
    /// generators f_i of J.
    pub fn saturate_by_ideal(
        &self,
        fs: &[MultiPoly],
        budget: &Budget,
    ) -> Result<GradedIdeal, PolyError> {
        let mut acc: Option<GradedIdeal> = None;
        for f in fs {
            if f.is_zero() {
                continue;
            }
            let s = self.saturate_by_poly(f, budget)?;
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(&s, budget)?,
            });
        }
        Ok(acc.unwrap_or_else(|| self.clone()))
    }
}

/// Generators of gb ∩ R where gb lives in R[t] (t = variable 0 under the
/// elimination order): the t-free elements, renumbered into R.
fn eliminate_t(rt: &PolyRing, ring: &PolyRing, gb: &GroebnerBasis) -> Vec<MultiPoly> {
    let mut map = vec![usize::MAX; rt.nvars()];
    for (i, slot) in map.iter_mut().enumerate().skip(1) {
        *slot = i - 1;
    }
    gb.gens()
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.exp(0) == 0))
        .map(|g| g.map_vars(ring, &map))
        .collect()
}

/// Independent saturation oracle: I : f^infty = (I + (t*f - 1)) ∩ R.
/// Slower than iterated quotients on our inputs; kept as a cross-check.
pub fn saturation_rabinowitsch(
    ring: &PolyRing,
    gens: &[MultiPoly],
    f: &MultiPoly,
    budget: &Budget,
) -> Result<Vec<MultiPoly>, PolyError> {
    let rt = ring.extend_t();
    let n = ring.nvars();
    let shift: Vec<usize> = (1..=n).collect();
    let mut gens_t: Vec<MultiPoly> = gens.iter().map(|g| g.map_vars(&rt, &shift)).collect();
    let tf = rt.var(0).mul(&rt, &f.map_vars(&rt, &shift));
    gens_t.push(tf.sub(&rt, &rt.one_poly()));
    let gb = GroebnerBasis::compute(&rt, &gens_t, budget)?;
    Ok(eliminate_t(&rt, ring, &gb))
}

/// Result of substituting away the linear generators of an ideal: a smaller
/// ring on the non-pivot variables, the substituted generators, and the
/// affine-linear images needed to lift points back.
#[derive(Clone, Debug)]
pub struct LinearReduction {
    pub original_ring: PolyRing,
    pub reduced_ring: PolyRing,
    /// Original indices of the surviving variables, in order.
    pub kept: Vec<usize>,
    /// For each original variable, its expression in the reduced ring.
    pub images: Vec<MultiPoly>,
    /// Non-linear generators after substitution, zero polys dropped.
    pub reduced_gens: Vec<MultiPoly>,
    /// Rank of the system of linear generators.
    pub linear_rank: usize,
}

impl LinearReduction {
    pub fn compute(ring: &PolyRing, gens: &[MultiPoly]) -> Result<Self, PolyError> {
        let p = ring.modulus();
        let n = ring.nvars();
        let mut lin_rows: Vec<Vec<Fp>> = Vec::new();
        let mut rest: Vec<MultiPoly> = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            match g.degree() {
                0 => {
                    return Err(PolyError::BadInput(
                        "linear reduction of the unit ideal".into(),
                    ))
                }
                1 => {
                    if !g.is_homogeneous() {
                        return Err(PolyError::NotHomogeneous(
                            "linear reduction expects homogeneous linear forms".into(),
                        ));
                    }
                    let mut row = vec![Fp::zero(p); n];
                    for &(m, c) in g.terms() {
                        let var = (0..n).find(|&i| m.exp(i) == 1).expect("degree-1 term");
                        row[var] = c;
                    }
                    lin_rows.push(row);
                }
                _ => rest.push(g.clone()),
            }
        }

        let (mat, pivots) = if lin_rows.is_empty() {
            (Matrix::zero(0, n, p), Vec::new())
        } else {
            let mut m = Matrix::from_rows(&lin_rows, p);
            let piv = m.rref();
            (m, piv)
        };
        let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
        let kept: Vec<usize> = (0..n).filter(|i| !pivot_set.contains(i)).collect();
        let reduced_ring = ring.subring(&kept);

        let mut images = vec![reduced_ring.zero_poly(); n];
        for (new_idx, &orig) in kept.iter().enumerate() {
            images[orig] = reduced_ring.var(new_idx);
        }
        for (r, &pv) in pivots.iter().enumerate() {
            // RREF row r reads x_pv + sum_{kept c} a_c x_c = 0.
            let mut f = reduced_ring.zero_poly();
            for (new_idx, &orig) in kept.iter().enumerate() {
                let a = mat[(r, orig)];
                if !a.is_zero() {
                    f = f.sub(&reduced_ring, &reduced_ring.monomial(Mon::var(new_idx), a));
                }
            }
            images[pv] = f;
        }

        let reduced_gens: Vec<MultiPoly> = rest
            .iter()
            .map(|g| g.substitute(ring, &reduced_ring, &images))
            .filter(|g| !g.is_zero())
            .collect();

        Ok(LinearReduction {
            original_ring: ring.clone(),
            reduced_ring,
            kept,
            images,
            reduced_gens,
            linear_rank: pivots.len(),
        })
    }

    /// Substitutes the linear relations into an arbitrary polynomial.
    pub fn push_poly(&self, f: &MultiPoly) -> MultiPoly {
        f.substitute(&self.original_ring, &self.reduced_ring, &self.images)
    }

    /// Evaluates the images at a point of the reduced space, producing the
    /// coordinates of the corresponding original point.
    pub fn lift_point(&self, pt: &[Fp]) -> Vec<Fp> {
        self.images
            .iter()
            .map(|im| im.eval(&self.reduced_ring, pt))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rng::SplitMix64;
    use crate::polyalg::ring::{parse_poly, MonomialOrder};

    const P: u64 = 32003;

    fn ring_xyz() -> PolyRing {
        PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex)
    }

    fn ideal(ring: &PolyRing, srcs: &[&str]) -> GradedIdeal {
        GradedIdeal::new(
            ring,
            srcs.iter().map(|s| parse_poly(ring, s).unwrap()).collect(),
        )
    }

    #[test]
    fn quotient_by_regular_element() {
        // (x^2 y, x z) : x = (x y, z) because x is a nonzerodivisor.
        let r = ring_xyz();
        let b = Budget::default();
        let i = ideal(&r, &["x^2*y", "x*z"]);
        let q = i
            .quotient_by_poly(&parse_poly(&r, "x").unwrap(), &b)
            .unwrap();
        let expect = ideal(&r, &["x*y", "z"]);
        assert!(q.same_ideal(&expect, &b).unwrap());
    }

    #[test]
    fn quotient_detects_membership() {
        // f in I  =>  (I : f) = (1).
        let r = ring_xyz();
        let b = Budget::default();
        let i = ideal(&r, &["x^2 - y*z"]);
        let q = i
            .quotient_by_poly(&parse_poly(&r, "x^2 - y*z").unwrap(), &b)
            .unwrap();
        assert!(q.is_unit(&b).unwrap());
    }

    #[test]
    fn saturation_removes_embedded_component() {
        // (x^2, x y) = (x) ∩ (x, y)^2; saturating by y strips the embedded
        // primary component at the origin.
        let r = PolyRing::new(P, &["x", "y"], MonomialOrder::GrevLex);
        let b = Budget::default();
        let i = ideal(&r, &["x^2", "x*y"]);
        let sat = i
            .saturate_by_poly(&parse_poly(&r, "y").unwrap(), &b)
            .unwrap();
        let expect = ideal(&r, &["x"]);
        assert!(sat.same_ideal(&expect, &b).unwrap());
        // f y ∈ x (x, y) forces x | f, so a single quotient already gives (x).
        let q1 = i.quotient_by_poly(&parse_poly(&r, "y").unwrap(), &b).unwrap();
        assert!(q1.same_ideal(&expect, &b).unwrap());
        // (x^2, x y^2) needs two quotient rounds: first (x^2, x y), then (x).
        let i2 = ideal(&r, &["x^2", "x*y^2"]);
        let q2 = i2.quotient_by_poly(&parse_poly(&r, "y").unwrap(), &b).unwrap();
        assert!(q2.same_ideal(&ideal(&r, &["x^2", "x*y"]), &b).unwrap());
        assert!(!q2.same_ideal(&expect, &b).unwrap());
        let sat2 = i2
            .saturate_by_poly(&parse_poly(&r, "y").unwrap(), &b)
            .unwrap();
        assert!(sat2.same_ideal(&expect, &b).unwrap());
    }

    #[test]
    fn saturation_by_irrelevant_ideal() {
        let r = PolyRing::new(P, &["x", "y"], MonomialOrder::GrevLex);
        let b = Budget::default();
        let i = ideal(&r, &["x^2", "x*y"]);
        let fs = [r.var(0), r.var(1)];
        let sat = i.saturate_by_ideal(&fs, &b).unwrap();
        assert!(sat.same_ideal(&ideal(&r, &["x"]), &b).unwrap());
    }

    #[test]
    fn intersections() {
        let r = ring_xyz();
        let b = Budget::default();
        let a = ideal(&r, &["x"]);
        let c = ideal(&r, &["y"]);
        let meet = a.intersect(&c, &b).unwrap();
        assert!(meet.same_ideal(&ideal(&r, &["x*y"]), &b).unwrap());

        let d = ideal(&r, &["x", "y"]).intersect(&ideal(&r, &["z"]), &b).unwrap();
        assert!(d.same_ideal(&ideal(&r, &["x*z", "y*z"]), &b).unwrap());
    }

    #[test]
    fn rabinowitsch_agrees_with_iterated_quotients() {
        let r = PolyRing::new(P, &["x", "y"], MonomialOrder::GrevLex);
        let b = Budget::default();
        let cases: [(&[&str], &str); 3] = [
            (&["x^2", "x*y"], "y"),
            (&["x^2*y", "x*y^2"], "x"),
            (&["x^3 - y^2", "x*y"], "x"),
        ];
        for (gens_src, f_src) in cases {
            let i = ideal(&r, gens_src);
            let f = parse_poly(&r, f_src).unwrap();
            let sat = i.saturate_by_poly(&f, &b).unwrap();
            let rab = GradedIdeal::new(
                &r,
                saturation_rabinowitsch(&r, i.gens(), &f, &b).unwrap(),
            );
            assert!(
                sat.same_ideal(&rab, &b).unwrap(),
                "case {gens_src:?} : {f_src}"
            );
        }
    }

    #[test]
    fn linear_reduction_substitutes_and_lifts() {
        let r = PolyRing::new(P, &["a", "b", "c", "d"], MonomialOrder::GrevLex);
        let gens = vec![
            parse_poly(&r, "a + b").unwrap(),
            parse_poly(&r, "c - d").unwrap(),
            parse_poly(&r, "a*d + b*c + c^2").unwrap(),
        ];
        let red = LinearReduction::compute(&r, &gens).unwrap();
        assert_eq!(red.linear_rank, 2);
        assert_eq!(red.kept, vec![1, 3]); // pivots a and c eliminated
        assert_eq!(red.reduced_ring.nvars(), 2);
        assert_eq!(red.reduced_gens.len(), 1);

        // The substituted quadric: a = -b, c = d gives -bd + bd + d^2 = d^2.
        let expect = parse_poly(&red.reduced_ring, "d^2").unwrap();
        assert_eq!(red.reduced_gens[0], expect);

        // Lifting a reduced point satisfies the original generators.
        let mut rng = SplitMix64::new(5);
        for _ in 0..10 {
            let pt = vec![rng.fp(P), rng.fp(P)];
            let lifted = red.lift_point(&pt);
            assert_eq!(lifted.len(), 4);
            for g in &gens[..2] {
                assert!(g.eval(&r, &lifted).is_zero());
            }
            // push_poly commutes with evaluation.
            let q = &gens[2];
            assert_eq!(
                q.eval(&r, &lifted),
                red.push_poly(q).eval(&red.reduced_ring, &pt)
            );
        }
    }

    #[test]
    fn linear_reduction_with_no_linear_forms_is_identity() {
        let r = PolyRing::new(P, &["x", "y"], MonomialOrder::GrevLex);
        let gens = vec![parse_poly(&r, "x^2 + y^2").unwrap()];
        let red = LinearReduction::compute(&r, &gens).unwrap();
        assert_eq!(red.linear_rank, 0);
        assert_eq!(red.kept, vec![0, 1]);
        assert_eq!(red.reduced_gens, gens);
    }

    #[test]
    fn gb_and_hilbert_are_cached() {
        let r = ring_xyz();
        let b = Budget::default();
        let i = ideal(&r, &["x*z - y^2"]);
        let g1 = i.gb(&b).unwrap() as *const _;
        let g2 = i.gb(&b).unwrap() as *const _;
        assert_eq!(g1, g2);
        let h = i.hilbert(&b).unwrap();
        assert_eq!(h.krull_dim, 2);
        assert_eq!(h.degree, 2);
    }
}
