//! Construction and certification of Pfaffian instances.
//!
//! An instance is built from six random skew forms phi_1..phi_6 on a
//! 6-dimensional space V.  Two varieties come out of the span L of the
//! forms:
//!
//! * the cubic fourfold Y in P^5 = P(L*), cut out by the Pfaffian of the
//!   pencil y |-> sum_i y_i phi_i (a cubic form in y);
//! * the surface X in Gr(2, V) of 2-planes isotropic for every form in L,
//!   cut out inside P^14 by the 15 Plucker quadrics together with the six
//!   linear forms p |-> <phi_i, p> on Plucker coordinates — a degree-14
//!   K3 surface for generic input.
//!
//! Certification is exact: Y is smooth iff the Jacobian ideal of the cubic
//! saturates to the unit ideal; X must have dimension 2, degree 14 and
//! Hilbert polynomial 7n^2 + 2; and the Jacobian of the 21 generators of
//! the X ideal must have rank exactly 12 at a panel of sampled points
//! (smoothness at sampled points).  Sampling retries with derived
//! sub-seeds and fails loudly when genericity cannot be reached.

use crate::config::Budget;
use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use crate::exactmath::plucker::{PluckerVector, PAIRS, QUADS};
use crate::exactmath::rng::{derive_seed, SplitMix64};
use crate::exactmath::skew::SkewForm;
use crate::exactmath::ExactError;
use crate::polyalg::ideal::{GradedIdeal, LinearReduction};
use crate::polyalg::ring::{Mon, MonomialOrder, MultiPoly, PolyRing};
use crate::polyalg::solve::{normalize_proj, solve_projective};
use crate::polyalg::univar::{roots, UPoly};
use crate::polyalg::{HilbertData, PolyError, QPoly};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("genericity exhausted after {attempts} attempts; last failure: {last}")]
    GenericityExhausted { attempts: u32, last: String },
    #[error("retries exhausted: {0}")]
    RetriesExhausted(String),
    #[error("invalid instance data: {0}")]
    BadInstance(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Number of full re-samples before giving up on genericity.
pub const MAX_INSTANCE_ATTEMPTS: u32 = 32;
/// Sampled points used for the X smoothness panel.
pub const X_SMOOTHNESS_PANEL: usize = 20;
const Y_POINT_RETRIES: usize = 200;

/// The certificate block of an instance.  Reproducible from the seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    /// Saturation of the Jacobian ideal of the cubic is the unit ideal.
    pub y_smooth: bool,
    pub y_smooth_witness: String,
    /// Projective dimension of X (must be 2).
    pub x_dim: i64,
    /// Degree of X (must be 14).
    pub x_degree: i64,
    /// Hilbert polynomial coefficients of X, ascending (must be [2, 0, 7]).
    pub x_hp: Vec<i64>,
    /// Jacobian ranks of the X ideal at the sampled panel (each must be 12).
    pub x_point_ranks: Vec<usize>,
    /// Re-sample attempts consumed before this instance passed.
    pub retries: u32,
    /// Genericity facts assumed but not certified by this toolkit.
    pub unverified: Vec<String>,
}

impl GenericityReport {
    pub fn all_pass(&self) -> bool {
        self.y_smooth
            && self.x_dim == 2
            && self.x_degree == 14
            && self.x_hp == vec![2, 0, 7]
            && self.x_point_ranks.len() >= X_SMOOTHNESS_PANEL
            && self.x_point_ranks.iter().all(|&r| r == 12)
    }
}

/// A constructed and certified Pfaffian instance.
#[derive(Clone, Debug)]
pub struct PfaffianInstance {
    pub seed: u64,
    pub p: u64,
    /// The six skew forms spanning L.
    pub forms: Vec<SkewForm>,
    /// Coordinate ring of P^5 = P(L*), variables y0..y5.
    pub y_ring: PolyRing,
    /// pf(sum y_i phi_i), homogeneous of degree 3.
    pub y_cubic: MultiPoly,
    /// Coordinate ring of P^14, one variable per Plucker pair.
    pub x_ring: PolyRing,
    /// 15 Plucker quadrics followed by the 6 linear evaluation forms.
    pub x_ideal: GradedIdeal,
    /// Elimination of the six linear forms: X in 9 variables.
    pub x_reduction: LinearReduction,
    /// The reduced X ideal (15 quadrics in 9 variables).
    pub x_reduced: GradedIdeal,
    pub report: GenericityReport,
}

/// Ring of P^5 with variables y0..y5.
pub fn y_ring(p: u64) -> PolyRing {
    let names: Vec<String> = (0..6).map(|i| format!("y{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    PolyRing::new(p, &refs, MonomialOrder::GrevLex)
}

/// Ring of P^14 with one variable per Plucker pair, named p01..p45.
pub fn x_ring(p: u64) -> PolyRing {
    let names: Vec<String> = PAIRS.iter().map(|&(a, b)| format!("p{a}{b}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    PolyRing::new(p, &refs, MonomialOrder::GrevLex)
}

/// The 15 three-term Plucker quadrics of Gr(2, 6) in the x ring.
pub fn plucker_quadrics(ring: &PolyRing) -> Vec<MultiPoly> {
    use crate::exactmath::plucker::pair_index;
    let p = ring.modulus();
    QUADS
        .iter()
        .map(|&[a, b, c, d]| {
            let m = |i: usize, j: usize, k: usize, l: usize| {
                Mon::var(pair_index(i, j)).mul(&Mon::var(pair_index(k, l)))
            };
            ring.monomial(m(a, b, c, d), Fp::one(p))
                .sub(ring, &ring.monomial(m(a, c, b, d), Fp::one(p)))
                .add(ring, &ring.monomial(m(a, d, b, c), Fp::one(p)))
        })
        .collect()
}

/// The linear form p |-> <phi, p> of a skew form in Plucker coordinates.
pub fn evaluation_form(ring: &PolyRing, phi: &SkewForm) -> MultiPoly {
    ring.linear_form(&phi.upper())
}

/// Pfaffian of a symbolic skew matrix given by its upper entries (PAIRS
/// order), by recursive expansion along the first remaining index.
pub fn pfaffian_symbolic(ring: &PolyRing, upper: &[MultiPoly]) -> MultiPoly {
    assert_eq!(upper.len(), 15);
    fn rec(ring: &PolyRing, upper: &[MultiPoly], idx: &[usize]) -> MultiPoly {
        use crate::exactmath::plucker::pair_index;
        if idx.is_empty() {
            return ring.one_poly();
        }
        let i0 = idx[0];
        let mut acc = ring.zero_poly();
        for (pos, &j) in idx.iter().enumerate().skip(1) {
            let rest: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&k| k != i0 && k != j)
                .collect();
            let term = upper[pair_index(i0, j)].mul(ring, &rec(ring, upper, &rest));
            if (pos - 1) % 2 == 0 {
                acc = acc.add(ring, &term);
            } else {
                acc = acc.sub(ring, &term);
            }
        }
        acc
    }
    rec(ring, upper, &[0, 1, 2, 3, 4, 5])
}

/// The cubic pf(sum_i y_i phi_i) in the y ring.
pub fn pencil_pfaffian(yr: &PolyRing, forms: &[SkewForm]) -> MultiPoly {
    let upper: Vec<MultiPoly> = PAIRS
        .iter()
        .map(|&(a, b)| {
            let coeffs: Vec<Fp> = forms.iter().map(|f| f.entry(a, b)).collect();
            yr.linear_form(&coeffs)
        })
        .collect();
    pfaffian_symbolic(yr, &upper)
}

/// The skew matrix of the pencil at a point y.
pub fn form_at(forms: &[SkewForm], y: &[Fp], p: u64) -> Result<SkewForm, ExactError> {
    let mut m = Matrix::zero(6, 6, p);
    for (f, &c) in forms.iter().zip(y) {
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] = m[(i, j)] + f.matrix()[(i, j)] * c;
            }
        }
    }
    SkewForm::new(m)
}

fn jacobian_rank_at(ring: &PolyRing, gens: &[MultiPoly], point: &[Fp]) -> usize {
    let p = ring.modulus();
    let rows: Vec<Vec<Fp>> = gens
        .iter()
        .map(|g| {
            (0..ring.nvars())
                .map(|v| g.derivative(ring, v).eval(ring, point))
                .collect()
        })
        .collect();
    Matrix::from_rows(&rows, p).rank()
}

struct RawInstance {
    forms: Vec<SkewForm>,
    y_ring: PolyRing,
    y_cubic: MultiPoly,
    x_ring: PolyRing,
    x_ideal: GradedIdeal,
    x_reduction: LinearReduction,
    x_reduced: GradedIdeal,
}

impl RawInstance {
    fn from_instance(inst: &PfaffianInstance) -> Self {
        RawInstance {
            forms: inst.forms.clone(),
            y_ring: inst.y_ring.clone(),
            y_cubic: inst.y_cubic.clone(),
            x_ring: inst.x_ring.clone(),
            x_ideal: inst.x_ideal.clone(),
            x_reduction: inst.x_reduction.clone(),
            x_reduced: inst.x_reduced.clone(),
        }
    }
}

fn build_raw(p: u64, rng: &mut SplitMix64) -> Result<RawInstance, String> {
    let forms: Vec<SkewForm> = (0..6).map(|_| SkewForm::random(6, p, rng)).collect();
    raw_from_forms(p, forms)
}

fn raw_from_forms(p: u64, forms: Vec<SkewForm>) -> Result<RawInstance, String> {
    let coeff_rows: Vec<Vec<Fp>> = forms.iter().map(|f| f.upper()).collect();
    if Matrix::from_rows(&coeff_rows, p).rank() != 6 {
        return Err("forms do not span a 6-dimensional space".into());
    }
    let yr = y_ring(p);
    let y_cubic = pencil_pfaffian(&yr, &forms);
    if y_cubic.is_zero() || y_cubic.degree() != 3 || !y_cubic.is_homogeneous() {
        return Err("pencil Pfaffian is not a nonzero cubic".into());
    }
    let xr = x_ring(p);
    let mut gens = plucker_quadrics(&xr);
    for f in &forms {
        gens.push(evaluation_form(&xr, f));
    }
    let x_ideal = GradedIdeal::new(&xr, gens);
    let x_reduction = match LinearReduction::compute(&xr, x_ideal.gens()) {
        Ok(r) => r,
        Err(e) => return Err(format!("linear reduction failed: {e}")),
    };
    if x_reduction.linear_rank != 6 {
        return Err(format!(
            "evaluation forms have rank {} instead of 6",
            x_reduction.linear_rank
        ));
    }
    let x_reduced = GradedIdeal::new(
        &x_reduction.reduced_ring,
        x_reduction.reduced_gens.clone(),
    );
    Ok(RawInstance {
        forms,
        y_ring: yr,
        y_cubic,
        x_ring: xr,
        x_ideal,
        x_reduction,
        x_reduced,
    })
}

fn unverified_hypotheses() -> Vec<String> {
    vec![
        "no_line_on_X".into(),
        "no_plane_in_Y".into(),
        "no_quadric_surface_in_Y".into(),
    ]
}

/// (i) Y smooth iff the Jacobian ideal of the cubic saturates to (1).
fn y_smooth_raw(raw: &RawInstance, budget: &Budget) -> Result<bool, String> {
    let yr = &raw.y_ring;
    let partials: Vec<MultiPoly> = (0..6).map(|v| raw.y_cubic.derivative(yr, v)).collect();
    let jac = GradedIdeal::new(yr, partials);
    let vars: Vec<MultiPoly> = (0..6).map(|v| yr.var(v)).collect();
    let sat = jac
        .saturate_by_ideal(&vars, budget)
        .map_err(|e| format!("Y smoothness saturation failed: {e}"))?;
    sat.is_unit(budget).map_err(|e| e.to_string())
}

/// (ii) X has dimension 2, degree 14, Hilbert polynomial 7n^2 + 2.
fn x_hilbert_raw<'a>(raw: &'a RawInstance, budget: &Budget) -> Result<&'a HilbertData, String> {
    let hd = raw
        .x_reduced
        .hilbert(budget)
        .map_err(|e| format!("X Hilbert computation failed: {e}"))?;
    if hd.projective_dim() != 2 || hd.degree != 14 || hd.hp != QPoly::from_i64(&[2, 0, 7]) {
        return Err(format!(
            "X is not a degree-14 surface: dim {} degree {} hp {}",
            hd.projective_dim(),
            hd.degree,
            hd.hp
        ));
    }
    Ok(hd)
}

/// (iii) Jacobian of the 21 X generators has rank exactly 12 at a panel
/// of sampled points.
fn x_panel_raw(
    raw: &RawInstance,
    panel_seed: u64,
    count: usize,
    budget: &Budget,
) -> Result<Vec<usize>, String> {
    let mut rng = SplitMix64::new(panel_seed);
    let pts = sample_x_points(raw, count, budget, &mut rng)
        .map_err(|e| format!("X point sampling failed: {e}"))?;
    let mut ranks = Vec::with_capacity(pts.len());
    for pt in &pts {
        let r = jacobian_rank_at(&raw.x_ring, raw.x_ideal.gens(), &pt.plucker);
        if r != 12 {
            return Err(format!("X not smooth at sampled point: Jacobian rank {r}"));
        }
        ranks.push(r);
    }
    Ok(ranks)
}

fn certify_raw(
    raw: &RawInstance,
    seed: u64,
    retries: u32,
    budget: &Budget,
) -> Result<GenericityReport, String> {
    let y_smooth = y_smooth_raw(raw, budget)?;
    if !y_smooth {
        return Err("Y singular: Jacobian ideal does not saturate to (1)".into());
    }
    let hd = x_hilbert_raw(raw, budget)?;
    let x_dim = hd.projective_dim();
    let x_degree = hd.degree;
    let panel_seed = derive_seed(seed, 3, retries as u64);
    let ranks = x_panel_raw(raw, panel_seed, X_SMOOTHNESS_PANEL, budget)?;

    Ok(GenericityReport {
        y_smooth,
        y_smooth_witness: "jacobian_saturation_is_unit".into(),
        x_dim,
        x_degree,
        x_hp: vec![2, 0, 7],
        x_point_ranks: ranks,
        retries,
        unverified: unverified_hypotheses(),
    })
}

/// Samples a certified instance, retrying with derived sub-seeds.
/// Deterministic in (seed, p).
pub fn sample_instance(seed: u64, p: u64, budget: &Budget) -> Result<PfaffianInstance, ConstructError> {
    let mut last = String::new();
    for attempt in 0..MAX_INSTANCE_ATTEMPTS {
        let mut rng = SplitMix64::new(derive_seed(seed, 1, attempt as u64));
        let raw = match build_raw(p, &mut rng) {
            Ok(r) => r,
            Err(e) => {
                last = e;
                continue;
            }
        };
        match certify_raw(&raw, seed, attempt, budget) {
            Ok(report) => {
                return Ok(PfaffianInstance {
                    seed,
                    p,
                    forms: raw.forms,
                    y_ring: raw.y_ring,
                    y_cubic: raw.y_cubic,
                    x_ring: raw.x_ring,
                    x_ideal: raw.x_ideal,
                    x_reduction: raw.x_reduction,
                    x_reduced: raw.x_reduced,
                    report,
                })
            }
            Err(e) => {
                last = e;
            }
        }
    }
    Err(ConstructError::GenericityExhausted {
        attempts: MAX_INSTANCE_ATTEMPTS,
        last,
    })
}

/// A sampled point of X: Plucker coordinates plus an explicit basis of the
/// corresponding 2-plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPoint {
    pub plucker: Vec<Fp>,
    pub basis: (Vec<Fp>, Vec<Fp>),
}

/// Cuts X by two random hyperplanes and returns the rational simple points
/// of the slice, lifted to Plucker coordinates.  A degenerate slice (wrong
/// length, positive dimension, chart trouble) yields an empty list; only
/// resource exhaustion is a hard error.
fn slice_points(
    raw: &RawInstance,
    slice_seed: u64,
    budget: &Budget,
) -> Result<Vec<Vec<Fp>>, ConstructError> {
    let ring9 = &raw.x_reduction.reduced_ring;
    let p = ring9.modulus();
    let mut rng = SplitMix64::new(slice_seed);
    let mut gens = raw.x_reduced.gens().to_vec();
    for _ in 0..2 {
        let coeffs: Vec<Fp> = (0..ring9.nvars()).map(|_| rng.fp(p)).collect();
        gens.push(ring9.linear_form(&coeffs));
    }
    let sol = match solve_projective(ring9, &gens, budget, &mut rng) {
        Ok(s) => s,
        Err(PolyError::ResourceExhausted(e)) => {
            return Err(ConstructError::Poly(PolyError::ResourceExhausted(e)))
        }
        Err(_) => return Ok(Vec::new()),
    };
    if sol.length != 14 {
        return Ok(Vec::new());
    }
    Ok(sol
        .rational_points
        .iter()
        .filter(|rp| rp.multiplicity == 1)
        .filter_map(|rp| normalize_proj(&raw.x_reduction.lift_point(&rp.coords)))
        .collect())
}

/// Wave size for parallel slice sampling.
const SLICE_WAVE: usize = 8;

fn sample_x_points(
    raw: &RawInstance,
    count: usize,
    budget: &Budget,
    rng: &mut SplitMix64,
) -> Result<Vec<XPoint>, ConstructError> {
    let base = rng.next_u64();
    let max_slices = 16 + 8 * count;
    let mut found: Vec<XPoint> = Vec::new();
    let mut next_slice = 0usize;
    // Slices run in parallel waves; merging in slice order keeps the
    // result independent of scheduling.
    while found.len() < count && next_slice < max_slices {
        let n = SLICE_WAVE.min(max_slices - next_slice);
        let seeds: Vec<u64> = (0..n)
            .map(|i| derive_seed(base, 5, (next_slice + i) as u64))
            .collect();
        next_slice += n;
        let results = crate::parallel::par_map(&seeds, |s| slice_points(raw, *s, budget));
        for res in results {
            for plucker in res? {
                if found.len() >= count {
                    break;
                }
                if found.iter().any(|q| q.plucker == plucker) {
                    continue;
                }
                found.push(verify_x_point(raw, &plucker)?);
            }
        }
    }
    if found.len() < count {
        return Err(ConstructError::RetriesExhausted(format!(
            "found {}/{} X points in {} slices",
            found.len(),
            count,
            max_slices
        )));
    }
    Ok(found)
}

fn verify_x_point(raw: &RawInstance, plucker: &[Fp]) -> Result<XPoint, ConstructError> {
    for g in raw.x_ideal.gens() {
        if !g.eval(&raw.x_ring, plucker).is_zero() {
            return Err(ConstructError::BadInstance(
                "sampled point fails an X generator".into(),
            ));
        }
    }
    let mut arr = [Fp::zero(raw.x_ring.modulus()); 15];
    arr.copy_from_slice(plucker);
    let pv = PluckerVector::new(arr);
    if !pv.is_decomposable() {
        return Err(ConstructError::BadInstance(
            "sampled point is not decomposable".into(),
        ));
    }
    let (b1, b2) = pv.plane_basis()?;
    for f in &raw.forms {
        if !f.eval(&b1, &b2).is_zero() {
            return Err(ConstructError::BadInstance(
                "2-plane not isotropic for a sampled form".into(),
            ));
        }
    }
    Ok(XPoint {
        plucker: plucker.to_vec(),
        basis: (b1, b2),
    })
}

/// Samples `count` distinct points of X, deterministic in (instance, seed).
pub fn points_on_x(
    inst: &PfaffianInstance,
    seed: u64,
    count: usize,
    budget: &Budget,
) -> Result<Vec<XPoint>, ConstructError> {
    let raw = RawInstance::from_instance(inst);
    let mut rng = SplitMix64::new(derive_seed(seed, 4, 0));
    sample_x_points(&raw, count, budget, &mut rng)
}

/// Samples one point of X.
pub fn point_on_x(
    inst: &PfaffianInstance,
    seed: u64,
    budget: &Budget,
) -> Result<XPoint, ConstructError> {
    Ok(points_on_x(inst, seed, 1, budget)?.remove(0))
}

/// Converts a univariate MultiPoly in `var` (all other variables already
/// substituted away) into a UPoly.
fn to_upoly(_ring: &PolyRing, f: &MultiPoly, var: usize, p: u64) -> UPoly {
    let deg = f.degree() as usize;
    let mut c = vec![Fp::zero(p); deg + 1];
    for &(m, coeff) in f.terms() {
        c[m.exp(var) as usize] = c[m.exp(var) as usize] + coeff;
    }
    UPoly::from_coeffs(p, c)
}

/// Samples a point y on Y with rank(pencil at y) = 4, by fixing five
/// coordinates and extracting roots of the resulting univariate cubic.
/// Deterministic in (instance, seed).
pub fn point_on_y(
    inst: &PfaffianInstance,
    seed: u64,
) -> Result<Vec<Fp>, ConstructError> {
    let p = inst.p;
    let yr = &inst.y_ring;
    let mut rng = SplitMix64::new(derive_seed(seed, 2, 0));
    for _ in 0..Y_POINT_RETRIES {
        let var = rng.below(6) as usize;
        let mut point: Vec<Fp> = (0..6).map(|_| rng.fp(p)).collect();
        // Substitute all variables except `var`, leaving a univariate poly.
        let images: Vec<MultiPoly> = (0..6)
            .map(|v| {
                if v == var {
                    yr.var(v)
                } else {
                    yr.constant(point[v])
                }
            })
            .collect();
        let uni = inst.y_cubic.substitute(yr, yr, &images);
        if uni.is_zero() {
            continue;
        }
        let up = to_upoly(yr, &uni, var, p);
        let Some(d) = up.degree() else { continue };
        if d == 0 {
            continue;
        }
        let rts = roots(&up, &mut rng).map_err(ConstructError::Poly)?;
        for (r, _) in rts {
            point[var] = r;
            if point.iter().all(|c| c.is_zero()) {
                continue;
            }
            if !inst.y_cubic.eval(yr, &point).is_zero() {
                return Err(ConstructError::BadInstance(
                    "root does not satisfy the cubic".into(),
                ));
            }
            let form = form_at(&inst.forms, &point, p)?;
            if form.rank() == 4 {
                return Ok(normalize_proj(&point).expect("nonzero point"));
            }
        }
    }
    Err(ConstructError::RetriesExhausted(format!(
        "no rank-4 point on Y in {Y_POINT_RETRIES} attempts"
    )))
}

/// One term of a polynomial in the instance file: exponents then the
/// coefficient value.
pub type TermRecord = (Vec<u16>, u64);

fn poly_to_records(ring: &PolyRing, f: &MultiPoly) -> Vec<TermRecord> {
    f.terms()
        .iter()
        .map(|&(m, c)| (m.exps(ring.nvars()).to_vec(), c.value()))
        .collect()
}

fn poly_from_records(
    ring: &PolyRing,
    recs: &[TermRecord],
) -> Result<MultiPoly, ConstructError> {
    let p = ring.modulus();
    let mut terms = Vec::with_capacity(recs.len());
    for (exps, c) in recs {
        if exps.len() != ring.nvars() {
            return Err(ConstructError::BadInstance(
                "term exponent arity mismatch".into(),
            ));
        }
        let mut mon = Mon::one();
        for (v, &e) in exps.iter().enumerate() {
            mon = mon.mul(&Mon::pow_of_var(v, e));
        }
        terms.push((mon, Fp::new(*c, p)));
    }
    Ok(ring.poly_from_terms(terms))
}

/// Versioned, canonical-JSON-serializable form of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    pub prime: u64,
    pub seed: u64,
    pub rng: String,
    /// Upper-triangular entries of each form, PAIRS order.
    pub forms_upper: Vec<Vec<u64>>,
    /// The cubic as exponent/coefficient records in y0..y5.
    pub y_cubic: Vec<TermRecord>,
    /// The 21 X generators as exponent/coefficient records in p01..p45.
    pub x_generators: Vec<Vec<TermRecord>>,
    pub certificate: GenericityReport,
}

pub const INSTANCE_SCHEMA: &str = "pfk3-instance/1";

pub fn to_instance_file(inst: &PfaffianInstance) -> InstanceFile {
    InstanceFile {
        schema: INSTANCE_SCHEMA.into(),
        prime: inst.p,
        seed: inst.seed,
        rng: crate::exactmath::rng::RNG_ALGORITHM.into(),
        forms_upper: inst
            .forms
            .iter()
            .map(|f| f.upper().iter().map(|c| c.value()).collect())
            .collect(),
        y_cubic: poly_to_records(&inst.y_ring, &inst.y_cubic),
        x_generators: inst
            .x_ideal
            .gens()
            .iter()
            .map(|g| poly_to_records(&inst.x_ring, g))
            .collect(),
        certificate: inst.report.clone(),
    }
}

/// Rebuilds an instance from its file form, re-deriving every generator
/// from the stored forms and checking the stored copies match exactly.
pub fn from_instance_file(file: &InstanceFile) -> Result<PfaffianInstance, ConstructError> {
    if file.schema != INSTANCE_SCHEMA {
        return Err(ConstructError::BadInstance(format!(
            "unsupported schema '{}'",
            file.schema
        )));
    }
    if file.rng != crate::exactmath::rng::RNG_ALGORITHM {
        return Err(ConstructError::BadInstance(format!(
            "unsupported rng '{}'",
            file.rng
        )));
    }
    let p = file.prime;
    if file.forms_upper.len() != 6 || file.forms_upper.iter().any(|f| f.len() != 15) {
        return Err(ConstructError::BadInstance(
            "expected six forms of 15 upper entries".into(),
        ));
    }
    let forms: Vec<SkewForm> = file
        .forms_upper
        .iter()
        .map(|u| {
            let entries: Vec<Fp> = u.iter().map(|&v| Fp::new(v, p)).collect();
            SkewForm::from_upper(6, &entries, p)
        })
        .collect();
    let raw = raw_from_forms(p, forms).map_err(ConstructError::BadInstance)?;
    let stored_cubic = poly_from_records(&raw.y_ring, &file.y_cubic)?;
    if stored_cubic != raw.y_cubic {
        return Err(ConstructError::BadInstance(
            "stored cubic disagrees with the stored forms".into(),
        ));
    }
    if file.x_generators.len() != raw.x_ideal.gens().len() {
        return Err(ConstructError::BadInstance(
            "wrong number of X generators".into(),
        ));
    }
    for (stored, derived) in file.x_generators.iter().zip(raw.x_ideal.gens()) {
        if &poly_from_records(&raw.x_ring, stored)? != derived {
            return Err(ConstructError::BadInstance(
                "stored X generator disagrees with the stored forms".into(),
            ));
        }
    }
    Ok(PfaffianInstance {
        seed: file.seed,
        p,
        forms: raw.forms,
        y_ring: raw.y_ring,
        y_cubic: raw.y_cubic,
        x_ring: raw.x_ring,
        x_ideal: raw.x_ideal,
        x_reduction: raw.x_reduction,
        x_reduced: raw.x_reduced,
        report: file.certificate.clone(),
    })
}

/// Re-runs the full certification on a loaded instance.
pub fn certify_instance(
    inst: &PfaffianInstance,
    budget: &Budget,
) -> Result<GenericityReport, ConstructError> {
    let raw = RawInstance::from_instance(inst);
    certify_raw(&raw, inst.seed, inst.report.retries, budget)
        .map_err(ConstructError::BadInstance)
}

/// Standalone Y smoothness certificate.
pub fn verify_y_smooth(inst: &PfaffianInstance, budget: &Budget) -> Result<bool, ConstructError> {
    y_smooth_raw(&RawInstance::from_instance(inst), budget).map_err(ConstructError::BadInstance)
}

/// Standalone X Hilbert certificate (dimension 2, degree 14, 7n^2 + 2).
pub fn verify_x_hilbert(
    inst: &PfaffianInstance,
    budget: &Budget,
) -> Result<HilbertData, ConstructError> {
    let raw = RawInstance::from_instance(inst);
    let hd = x_hilbert_raw(&raw, budget).map_err(ConstructError::BadInstance)?;
    Ok(hd.clone())
}

/// Standalone X sampled-smoothness panel; returns the Jacobian ranks.
pub fn verify_x_panel(
    inst: &PfaffianInstance,
    count: usize,
    budget: &Budget,
) -> Result<Vec<usize>, ConstructError> {
    let raw = RawInstance::from_instance(inst);
    let panel_seed = derive_seed(inst.seed, 3, inst.report.retries as u64);
    x_panel_raw(&raw, panel_seed, count, budget).map_err(ConstructError::BadInstance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    pub const P: u64 = 32003;

    /// Shared instance: sampling + certification is the expensive part, so
    /// tests share one.
    pub fn shared_instance() -> &'static PfaffianInstance {
        static INST: OnceLock<PfaffianInstance> = OnceLock::new();
        INST.get_or_init(|| sample_instance(1, P, &Budget::default()).expect("seed 1 certifies"))
    }

    #[test]
    fn pencil_pfaffian_matches_numeric_pfaffian() {
        let inst = shared_instance();
        let mut rng = SplitMix64::new(99);
        for _ in 0..25 {
            let y: Vec<Fp> = (0..6).map(|_| rng.fp(P)).collect();
            let sym = inst.y_cubic.eval(&inst.y_ring, &y);
            let num = form_at(&inst.forms, &y, P).unwrap().pfaffian();
            assert_eq!(sym, num);
        }
    }

    #[test]
    fn instance_shape() {
        let inst = shared_instance();
        assert_eq!(inst.y_cubic.degree(), 3);
        assert!(inst.y_cubic.is_homogeneous());
        let gens = inst.x_ideal.gens();
        assert_eq!(gens.len(), 21);
        assert!(gens[..15].iter().all(|g| g.degree() == 2));
        assert!(gens[15..].iter().all(|g| g.degree() == 1));
        assert_eq!(inst.x_reduction.linear_rank, 6);
        assert_eq!(inst.x_reduction.reduced_ring.nvars(), 9);
    }

    #[test]
    fn certificate_values() {
        let inst = shared_instance();
        assert!(inst.report.all_pass());
        assert_eq!(inst.report.x_dim, 2);
        assert_eq!(inst.report.x_degree, 14);
        assert_eq!(inst.report.x_hp, vec![2, 0, 7]);
        assert!(inst.report.x_point_ranks.len() >= X_SMOOTHNESS_PANEL);
        assert!(inst.report.x_point_ranks.iter().all(|&r| r == 12));
        assert_eq!(inst.report.unverified.len(), 3);
    }

    #[test]
    fn x_hilbert_polynomial_is_7nn_plus_2() {
        let inst = shared_instance();
        let hd = inst.x_reduced.hilbert(&Budget::default()).unwrap();
        assert_eq!(hd.hp, QPoly::from_i64(&[2, 0, 7]));
        // Spot values 2, 9, 30, 65 at n = 0..4.
        let hf = hd.series_prefix(3);
        for (n, v) in [(0i64, 2i64), (1, 9), (2, 30), (3, 65)] {
            assert_eq!(hd.hp_value(n), crate::polyalg::qpoly::big(v));
            if n >= hd.stable_from {
                assert_eq!(hf[n as usize], v, "HF at {n}");
            }
        }
    }

    #[test]
    fn determinism_of_sampling() {
        let a = sample_instance(7, P, &Budget::default()).unwrap();
        let b = sample_instance(7, P, &Budget::default()).unwrap();
        assert_eq!(a.y_cubic, b.y_cubic);
        assert_eq!(a.report, b.report);
        for (f, g) in a.forms.iter().zip(&b.forms) {
            assert_eq!(f.upper(), g.upper());
        }
    }

    #[test]
    fn y_points_lie_on_y_with_rank_4() {
        let inst = shared_instance();
        let mut seen = Vec::new();
        for s in 0..20u64 {
            let y = point_on_y(inst, 1000 + s).unwrap();
            assert!(inst.y_cubic.eval(&inst.y_ring, &y).is_zero());
            assert_eq!(form_at(&inst.forms, &y, P).unwrap().rank(), 4);
            seen.push(y);
        }
        seen.sort_by_key(|v| v.iter().map(|c| c.value()).collect::<Vec<_>>());
        seen.dedup();
        assert!(seen.len() >= 19, "only {} distinct Y points", seen.len());
    }

    #[test]
    fn x_points_lie_on_x() {
        let inst = shared_instance();
        let pts = points_on_x(inst, 5, 10, &Budget::default()).unwrap();
        assert_eq!(pts.len(), 10);
        for pt in &pts {
            let mut arr = [Fp::zero(P); 15];
            arr.copy_from_slice(&pt.plucker);
            let pv = PluckerVector::new(arr);
            assert!(pv.is_decomposable());
            assert!(pv.quadric_residues().iter().all(|r| r.is_zero()));
            for g in inst.x_ideal.gens() {
                assert!(g.eval(&inst.x_ring, &pt.plucker).is_zero());
            }
            for f in &inst.forms {
                assert!(f.eval(&pt.basis.0, &pt.basis.1).is_zero());
            }
        }
        let mut keys: Vec<Vec<u64>> = pts
            .iter()
            .map(|pt| pt.plucker.iter().map(|c| c.value()).collect())
            .collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 10, "X points must be pairwise distinct");
    }

    #[test]
    fn degenerate_span_fails_certification() {
        // Force a rank-2 form into the span: the corresponding point of Y
        // is singular, so the Jacobian saturation cannot be the unit ideal.
        let mut rng = SplitMix64::new(4242);
        let mut forms: Vec<SkewForm> = (0..5).map(|_| SkewForm::random(6, P, &mut rng)).collect();
        let mut entries = vec![Fp::zero(P); 15];
        entries[0] = Fp::one(P); // e0 ^ e1 only: rank 2
        forms.push(SkewForm::from_upper(6, &entries, P));
        let raw = raw_from_forms(P, forms).unwrap();
        let err = certify_raw(&raw, 0, 0, &Budget::default()).unwrap_err();
        assert!(err.contains("Y singular") || err.contains("X"), "got: {err}");
    }

    #[test]
    fn instance_file_round_trip() {
        let inst = shared_instance();
        let file = to_instance_file(inst);
        let json = serde_json::to_value(&file).unwrap().to_string();
        let parsed: InstanceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, file);
        let rebuilt = from_instance_file(&parsed).unwrap();
        assert_eq!(rebuilt.y_cubic, inst.y_cubic);
        assert_eq!(rebuilt.report, inst.report);
        let json2 = serde_json::to_value(&to_instance_file(&rebuilt))
            .unwrap()
            .to_string();
        assert_eq!(json, json2, "canonical serialization must be stable");
    }

    #[test]
    fn corrupted_instance_file_is_rejected() {
        let inst = shared_instance();
        let mut file = to_instance_file(inst);
        file.y_cubic[0].1 ^= 1;
        match from_instance_file(&file) {
            Err(ConstructError::BadInstance(msg)) => assert!(msg.contains("cubic")),
            other => panic!("expected rejection, got {other:?}"),
        }
        let mut file2 = to_instance_file(inst);
        file2.schema = "pfk3-instance/0".into();
        assert!(from_instance_file(&file2).is_err());
    }
}
