//! Groebner bases for submodules of free modules over F_p[x_1..x_n], with
//! ideals as the one-component case.
//!
//! The engine is Buchberger's algorithm with the sugar selection strategy,
//! the product criterion (valid for ideals only, so only applied there), and
//! the chain criterion.  Budgets on basis size, reduction steps and wall
//! clock make every computation fail loudly rather than run away; a budget
//! violation is an error, never a silently wrong answer.
//!
//! Free-module terms are ordered position-over-term with component 0
//! dominating, which makes the component filtration an elimination order:
//! this is what the syzygy and intersection constructions elsewhere rely on.

use super::ring::{Mon, MultiPoly, PolyRing, MAX_VARS};
use super::PolyError;
use crate::config::Budget;
use crate::exactmath::fp::Fp;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

/// One term of a free-module element: component index, monomial, coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VTerm {
    pub comp: u32,
    pub mon: Mon,
    pub c: Fp,
}

/// Element of a free module R^k, terms sorted strictly descending in
/// position-over-term order (component 0 highest, ties broken by the ring's
/// monomial order).  A polynomial is the k = 1 case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VecPoly {
    terms: Vec<VTerm>,
}

#[inline]
fn cmp_vt(ring: &PolyRing, a: (u32, &Mon), b: (u32, &Mon)) -> Ordering {
    match a.0.cmp(&b.0) {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => ring.cmp_mon(a.1, b.1),
    }
}

impl VecPoly {
    pub fn zero() -> Self {
        VecPoly { terms: Vec::new() }
    }

    /// Embeds a polynomial into the given component.
    pub fn from_poly(comp: u32, f: &MultiPoly) -> Self {
        VecPoly {
            terms: f
                .terms()
                .iter()
                .map(|&(mon, c)| VTerm { comp, mon, c })
                .collect(),
        }
    }

    pub fn from_terms(ring: &PolyRing, mut terms: Vec<VTerm>) -> Self {
        terms.sort_unstable_by(|a, b| cmp_vt(ring, (b.comp, &b.mon), (a.comp, &a.mon)));
        let mut out: Vec<VTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.comp == t.comp && last.mon == t.mon {
                    last.c += t.c;
                    if last.c.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !t.c.is_zero() {
                out.push(t);
            }
        }
        VecPoly { terms: out }
    }

    /// The basis vector e_comp.
    pub fn unit(comp: u32, p: u64) -> Self {
        VecPoly {
            terms: vec![VTerm {
                comp,
                mon: Mon::one(),
                c: Fp::one(p),
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[VTerm] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    /// Extracts one component as a plain polynomial.
    pub fn component(&self, ring: &PolyRing, comp: u32) -> MultiPoly {
        ring.poly_from_terms(
            self.terms
                .iter()
                .filter(|t| t.comp == comp)
                .map(|t| (t.mon, t.c))
                .collect(),
        )
    }

    /// True when every term lives in a component >= lo.
    pub fn supported_at_or_above(&self, lo: u32) -> bool {
        self.terms.iter().all(|t| t.comp >= lo)
    }

    /// Shifts every component index down by `delta` (caller guarantees no
    /// underflow).  A uniform shift preserves the term order.
    pub fn shift_comps_down(&self, delta: u32) -> VecPoly {
        VecPoly {
            terms: self
                .terms
                .iter()
                .map(|t| VTerm {
                    comp: t.comp - delta,
                    mon: t.mon,
                    c: t.c,
                })
                .collect(),
        }
    }

    /// Multiplication by a single term c * x^mon.  Monomial orders are
    /// multiplication-compatible, so sortedness is preserved.
    pub fn mul_term(&self, mon: &Mon, c: Fp) -> VecPoly {
        if c.is_zero() {
            return VecPoly::zero();
        }
        VecPoly {
            terms: self
                .terms
                .iter()
                .map(|t| VTerm {
                    comp: t.comp,
                    mon: t.mon.mul(mon),
                    c: t.c * c,
                })
                .collect(),
        }
    }

    pub fn add(&self, ring: &PolyRing, other: &VecPoly) -> VecPoly {
        merge_vt(ring, &self.terms, &other.terms, None)
    }

    pub fn sub(&self, ring: &PolyRing, other: &VecPoly) -> VecPoly {
        if other.is_zero() {
            return self.clone();
        }
        merge_vt(ring, &self.terms, &other.terms, Some(-Fp::one(ring.modulus())))
    }

    pub fn scale(&self, c: Fp) -> VecPoly {
        if c.is_zero() {
            return VecPoly::zero();
        }
        VecPoly {
            terms: self
                .terms
                .iter()
                .map(|t| VTerm {
                    comp: t.comp,
                    mon: t.mon,
                    c: t.c * c,
                })
                .collect(),
        }
    }

    pub fn make_monic(&mut self) {
        if let Some(t0) = self.terms.first() {
            if t0.c.value() != 1 {
                let inv = t0.c.inv();
                for t in &mut self.terms {
                    t.c *= inv;
                }
            }
        }
    }
}

fn merge_vt(ring: &PolyRing, a: &[VTerm], b: &[VTerm], scale_b: Option<Fp>) -> VecPoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let sc = |t: &VTerm| -> Fp {
        match scale_b {
            Some(s) => t.c * s,
            None => t.c,
        }
    };
    while i < a.len() && j < b.len() {
        match cmp_vt(ring, (a[i].comp, &a[i].mon), (b[j].comp, &b[j].mon)) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push(VTerm {
                    c: sc(&b[j]),
                    ..b[j]
                });
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].c + sc(&b[j]);
                if !c.is_zero() {
                    out.push(VTerm { c, ..a[i] });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        out.push(VTerm { c: sc(t), ..*t });
    }
    VecPoly { terms: out }
}

fn twisted_degree(f: &VecPoly, twists: &[u16]) -> u32 {
    f.terms
        .iter()
        .map(|t| t.mon.deg as u32 + twists[t.comp as usize] as u32)
        .max()
        .unwrap_or(0)
}

/// Counts reduction steps against a budget; optionally enforces a deadline.
pub struct Counter {
    pub steps: usize,
    max: usize,
    deadline: Option<Instant>,
    label: &'static str,
}

impl Counter {
    pub fn new(budget: &Budget, label: &'static str) -> Self {
        Counter {
            steps: 0,
            max: budget.max_reductions,
            deadline: budget.wall.map(|w| Instant::now() + w),
            label,
        }
    }

    /// Normal forms always terminate, so interactive queries run uncapped.
    pub fn unlimited(label: &'static str) -> Self {
        Counter {
            steps: 0,
            max: usize::MAX,
            deadline: None,
            label,
        }
    }

    #[inline]
    fn tick(&mut self) -> Result<(), PolyError> {
        self.steps += 1;
        if self.steps > self.max {
            return Err(PolyError::ResourceExhausted(format!(
                "{}: {} reduction steps",
                self.label, self.steps
            )));
        }
        if self.steps & 0x3ff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(PolyError::ResourceExhausted(format!(
                        "{}: wall clock",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Fully reduces `work` against `basis`: every term of the result is
/// irreducible.  When `sugars` is provided, tracks the sugar degree of the
/// result for the selection strategy.
fn reduce_full(
    ring: &PolyRing,
    mut work: VecPoly,
    basis: &[VecPoly],
    sugars: Option<(&[u32], u32)>,
    counter: &mut Counter,
) -> Result<(VecPoly, u32), PolyError> {
    let mut sugar = sugars.map(|(_, s0)| s0).unwrap_or(0);
    let mut finished: Vec<VTerm> = Vec::new();
    'outer: while let Some(&lt) = work.leading() {
        for (gi, g) in basis.iter().enumerate() {
            let Some(glt) = g.leading() else { continue };
            if glt.comp == lt.comp && glt.mon.divides(&lt.mon) {
                counter.tick()?;
                let m = glt.mon.div_into(&lt.mon);
                let c = lt.c / glt.c;
                work = work.sub(ring, &g.mul_term(&m, c));
                if let Some((bs, _)) = sugars {
                    sugar = sugar.max(bs[gi] + m.deg as u32);
                }
                continue 'outer;
            }
        }
        finished.push(lt);
        work.terms.remove(0);
    }
    Ok((VecPoly { terms: finished }, sugar))
}

/// Normal form of `f` modulo `basis` (assumed a Groebner basis for
/// membership queries; any basis gives *a* remainder).
pub fn normal_form(
    ring: &PolyRing,
    f: &VecPoly,
    basis: &[VecPoly],
    counter: &mut Counter,
) -> Result<VecPoly, PolyError> {
    Ok(reduce_full(ring, f.clone(), basis, None, counter)?.0)
}

fn spair(ring: &PolyRing, a: &VecPoly, b: &VecPoly) -> VecPoly {
    let ta = *a.leading().expect("spair of zero");
    let tb = *b.leading().expect("spair of zero");
    debug_assert_eq!(ta.comp, tb.comp);
    let l = ta.mon.lcm(&tb.mon);
    let ma = ta.mon.div_into(&l);
    let mb = tb.mon.div_into(&l);
    a.mul_term(&ma, tb.c).sub(ring, &b.mul_term(&mb, ta.c))
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Debug)]
struct PairKey {
    sugar: u32,
    lcm_deg: u16,
    lcm_e: [u16; MAX_VARS],
    i: u32,
    j: u32,
}

#[inline]
fn pair_id(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, Default)]
pub struct GBStats {
    pub pairs_considered: usize,
    pub pairs_skipped: usize,
    pub zero_reductions: usize,
    pub reduction_steps: usize,
    pub basis_size: usize,
}

#[allow(clippy::too_many_arguments)]
fn add_generator(
    ring: &PolyRing,
    mut g: VecPoly,
    sugar: u32,
    basis: &mut Vec<VecPoly>,
    sugars: &mut Vec<u32>,
    queue: &mut BTreeSet<PairKey>,
    done: &mut HashSet<(u32, u32)>,
    ncomp: u32,
    budget: &Budget,
) -> Result<(), PolyError> {
    if basis.len() + 1 > budget.max_basis {
        return Err(PolyError::ResourceExhausted(format!(
            "buchberger: basis size above {}",
            budget.max_basis
        )));
    }
    g.make_monic();
    let n = basis.len() as u32;
    let gl = *g.leading().expect("add_generator of zero");
    for (k, h) in basis.iter().enumerate() {
        let hl = h.leading().expect("zero element in basis");
        if hl.comp != gl.comp {
            continue;
        }
        // Product criterion: S-pairs with coprime leading monomials reduce
        // to zero.  Only valid in the ideal case.
        if ncomp == 1 && hl.mon.is_coprime(&gl.mon) {
            done.insert((k as u32, n));
            continue;
        }
        let l = hl.mon.lcm(&gl.mon);
        let sug = (sugars[k] + hl.mon.div_into(&l).deg as u32)
            .max(sugar + gl.mon.div_into(&l).deg as u32);
        let mut lcm_e = [0u16; MAX_VARS];
        for (idx, slot) in lcm_e.iter_mut().enumerate().take(ring.nvars()) {
            *slot = l.exp(idx);
        }
        queue.insert(PairKey {
            sugar: sug,
            lcm_deg: l.deg,
            lcm_e,
            i: k as u32,
            j: n,
        });
    }
    basis.push(g);
    sugars.push(sugar);
    Ok(())
}

/// Buchberger's algorithm on a free module R^ncomp.  `twists` gives the
/// internal degree of each component's basis vector (all zero for an ideal)
/// so that sugar degrees are meaningful for twisted inputs.  Returns the
/// unique reduced Groebner basis, monic, sorted ascending by leading term.
pub fn buchberger_module(
    ring: &PolyRing,
    input: &[VecPoly],
    ncomp: u32,
    twists: &[u16],
    budget: &Budget,
) -> Result<(Vec<VecPoly>, GBStats), PolyError> {
    assert_eq!(twists.len(), ncomp as usize, "one twist per component");
    debug_assert!(input
        .iter()
        .flat_map(|f| f.terms())
        .all(|t| t.comp < ncomp));
    let mut counter = Counter::new(budget, "buchberger");
    let mut stats = GBStats::default();
    let mut basis: Vec<VecPoly> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    let mut done: HashSet<(u32, u32)> = HashSet::new();

    for f in input {
        if f.is_zero() {
            continue;
        }
        let s0 = twisted_degree(f, twists);
        let (nf, s) = reduce_full(ring, f.clone(), &basis, Some((&sugars, s0)), &mut counter)?;
        if nf.is_zero() {
            continue;
        }
        add_generator(
            ring, nf, s, &mut basis, &mut sugars, &mut queue, &mut done, ncomp, budget,
        )?;
    }

    while let Some(key) = queue.pop_first() {
        let (i, j) = (key.i as usize, key.j as usize);
        done.insert((key.i, key.j));
        stats.pairs_considered += 1;

        // Chain criterion: if some other leading term divides this pair's
        // lcm and both corresponding pairs were already treated (reduced or
        // legitimately skipped), this pair is redundant.  Treatment times
        // are totally ordered, so the justification never cycles.
        let li = *basis[i].leading().expect("zero in basis");
        let lj = basis[j].leading().expect("zero in basis");
        let lcm = li.mon.lcm(&lj.mon);
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let gl = g.leading().expect("zero in basis");
            if gl.comp == li.comp && gl.mon.divides(&lcm) {
                let a = pair_id(key.i, k as u32);
                let b = pair_id(key.j, k as u32);
                if done.contains(&a) && done.contains(&b) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            stats.pairs_skipped += 1;
            continue;
        }

        let s = spair(ring, &basis[i], &basis[j]);
        let (nf, sug) = reduce_full(ring, s, &basis, Some((&sugars, key.sugar)), &mut counter)?;
        if nf.is_zero() {
            stats.zero_reductions += 1;
            continue;
        }
        add_generator(
            ring, nf, sug, &mut basis, &mut sugars, &mut queue, &mut done, ncomp, budget,
        )?;
    }

    let reduced = reduce_basis(ring, basis, &mut counter)?;
    stats.reduction_steps = counter.steps;
    stats.basis_size = reduced.len();
    Ok((reduced, stats))
}

/// Minimalizes and tail-reduces a Groebner basis into the unique reduced
/// form: monic elements with pairwise indivisible leading terms, every tail
/// term irreducible, sorted ascending by leading term.
pub fn reduce_basis(
    ring: &PolyRing,
    basis: Vec<VecPoly>,
    counter: &mut Counter,
) -> Result<Vec<VecPoly>, PolyError> {
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        let li = *basis[i].leading().expect("zero in basis");
        for (j, gj) in basis.iter().enumerate() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = gj.leading().expect("zero in basis");
            if lj.comp == li.comp && lj.mon.divides(&li.mon) {
                // Equal leading terms: drop the later index only.
                if lj.mon == li.mon && j > i {
                    continue;
                }
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<VecPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<VecPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (mut nf, _) = reduce_full(ring, minimal[i].clone(), &others, None, counter)?;
        debug_assert_eq!(
            nf.leading().map(|t| (t.comp, t.mon)),
            minimal[i].leading().map(|t| (t.comp, t.mon)),
            "minimal leading term must survive tail reduction"
        );
        nf.make_monic();
        out.push(nf);
    }
    out.sort_by(|a, b| {
        let la = a.leading().expect("zero in reduced basis");
        let lb = b.leading().expect("zero in reduced basis");
        cmp_vt(ring, (la.comp, &la.mon), (lb.comp, &lb.mon))
    });
    Ok(out)
}

/// A reduced Groebner basis of an ideal, cached in both polynomial and
/// vector form.  Two ideals in the same ring with the same order are equal
/// iff their `gens` lists are equal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: PolyRing,
    gens: Vec<MultiPoly>,
    vgens: Vec<VecPoly>,
    stats: GBStats,
}

impl GroebnerBasis {
    pub fn compute(
        ring: &PolyRing,
        gens: &[MultiPoly],
        budget: &Budget,
    ) -> Result<Self, PolyError> {
        let input: Vec<VecPoly> = gens
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| VecPoly::from_poly(0, f))
            .collect();
        let (gb, stats) = buchberger_module(ring, &input, 1, &[0], budget)?;
        let gens: Vec<MultiPoly> = gb.iter().map(|v| v.component(ring, 0)).collect();
        Ok(GroebnerBasis {
            ring: ring.clone(),
            gens,
            vgens: gb,
            stats,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn stats(&self) -> &GBStats {
        &self.stats
    }

    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        let mut counter = Counter::unlimited("normal_form");
        let (nf, _) = reduce_full(
            &self.ring,
            VecPoly::from_poly(0, f),
            &self.vgens,
            None,
            &mut counter,
        )
        .expect("unlimited normal form cannot exhaust its budget");
        nf.component(&self.ring, 0)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].degree() == 0
    }

    pub fn leading_monomials(&self) -> Vec<Mon> {
        self.gens
            .iter()
            .map(|g| g.leading().expect("zero generator").0)
            .collect()
    }

    /// Reduced bases are canonical, so equality of generator lists decides
    /// equality of ideals (same ring, same order).
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        assert_eq!(self.ring, other.ring, "same_ideal needs matching rings");
        self.gens == other.gens
    }
}
