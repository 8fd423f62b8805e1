//! The incidence correspondence between X and Y.
//!
//! Over a point y of Y the pencil form phi_y has a 2-dimensional radical
//! R; the Schubert cycle of planes meeting R is cut out of the
//! Grassmannian by the 15 linear forms "wedge with a 4-form", and its
//! intersection with X is the fiber of the correspondence: a length-4
//! subscheme xi(y) of X for generic y.  Over a point [P] of X the fiber
//! in P^5 is the rank-<=1 locus of a 2x6 matrix of linear forms, a
//! degree-4 surface with Hilbert polynomial 2n^2 + 3n + 1.  Fibers over
//! distinct points are computed independently over a shared immutable
//! instance, so batches parallelize.

use crate::config::Budget;
use crate::construction::{ConstructError, PfaffianInstance, XPoint};
use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use crate::exactmath::plucker::{wedge, wedge4_matrix, PluckerVector};
use crate::exactmath::rng::{derive_seed, SplitMix64};
use crate::polyalg::ideal::{GradedIdeal, LinearReduction};
use crate::polyalg::ring::MultiPoly;
use crate::polyalg::solve::{normalize_proj, solve_projective};
use crate::polyalg::{HilbertData, PolyError, QPoly};

fn fold_point_seed(seed: u64, tag: u64, pt: &[Fp]) -> u64 {
    let mut s = derive_seed(seed, tag, 0);
    for c in pt {
        s = derive_seed(s, tag, c.value());
    }
    s
}

/// The Schubert cycle of 2-planes meeting the radical of phi_y.
#[derive(Clone, Debug)]
pub struct SchubertCycle {
    pub y: Vec<Fp>,
    /// Basis of the radical plane R of phi_y.
    pub radical: (Vec<Fp>, Vec<Fp>),
    /// The 15 linear forms omega -> wedge4(omega, r1 ^ r2), of rank 6.
    pub forms: Vec<MultiPoly>,
    pub linear_rank: usize,
}

/// Builds the Schubert cycle at a rank-4 point y of Y.
pub fn schubert_cycle(
    inst: &PfaffianInstance,
    y: &[Fp],
) -> Result<SchubertCycle, ConstructError> {
    let p = inst.p;
    let form = crate::construction::form_at(&inst.forms, y, p)?;
    if form.rank() != 4 {
        return Err(ConstructError::BadInstance(format!(
            "radical not 2-dimensional: pencil form has rank {}",
            form.rank()
        )));
    }
    let rad = form.radical();
    debug_assert_eq!(rad.len(), 2);
    let rho = wedge(&rad[0], &rad[1], p);
    let mat = wedge4_matrix(&rho);
    let rank = mat.rank();
    let forms: Vec<MultiPoly> = (0..15)
        .map(|i| inst.x_ring.linear_form(mat.row(i)))
        .filter(|f| !f.is_zero())
        .collect();
    Ok(SchubertCycle {
        y: y.to_vec(),
        radical: (rad[0].clone(), rad[1].clone()),
        forms,
        linear_rank: rank,
    })
}

/// Hilbert data of the Schubert cycle inside the Plucker ambient:
/// projective dimension 5, degree 4.
pub fn schubert_hilbert(
    inst: &PfaffianInstance,
    cycle: &SchubertCycle,
    budget: &Budget,
) -> Result<HilbertData, ConstructError> {
    let mut gens = crate::construction::plucker_quadrics(&inst.x_ring);
    gens.extend(cycle.forms.iter().cloned());
    let red = LinearReduction::compute(&inst.x_ring, &gens)?;
    let ideal = GradedIdeal::new(&red.reduced_ring, red.reduced_gens.clone());
    Ok(ideal.hilbert(budget)?.clone())
}

/// The fiber of the correspondence over a point y of Y.
#[derive(Clone, Debug)]
pub struct FiberOverY {
    pub y: Vec<Fp>,
    /// Projective dimension of the fiber (0 for generic y).
    pub dimension: i64,
    /// Length when zero-dimensional.
    pub length: Option<usize>,
    /// (degree, multiplicity) of each irreducible eliminant factor.
    pub eliminant_factor_degrees: Vec<(usize, usize)>,
    pub eliminant_squarefree: bool,
    /// Rational points of the fiber, lifted to X with witness planes.
    pub split_points: Vec<XPoint>,
    /// Multiplicities of the split points, parallel to `split_points`.
    pub split_multiplicities: Vec<usize>,
}

/// Computes the fiber over y: the X ideal plus the Schubert forms, cut
/// down by linear elimination and solved as a zero-dimensional system.
/// Positive-dimensional fibers are reported (dimension, no length), not
/// errors.
pub fn fiber_over_y(
    inst: &PfaffianInstance,
    y: &[Fp],
    budget: &Budget,
) -> Result<FiberOverY, ConstructError> {
    let cycle = schubert_cycle(inst, y)?;
    fiber_from_cycle(inst, &cycle, budget)
}

fn fiber_from_cycle(
    inst: &PfaffianInstance,
    cycle: &SchubertCycle,
    budget: &Budget,
) -> Result<FiberOverY, ConstructError> {
    let mut gens = inst.x_ideal.gens().to_vec();
    gens.extend(cycle.forms.iter().cloned());
    let red = LinearReduction::compute(&inst.x_ring, &gens)?;
    let ring = &red.reduced_ring;
    let mut rng = SplitMix64::new(fold_point_seed(inst.seed, 6, &cycle.y));
    match solve_projective(ring, &red.reduced_gens, budget, &mut rng) {
        Ok(sol) => {
            let mut split_points = Vec::new();
            let mut split_multiplicities = Vec::new();
            for rp in &sol.rational_points {
                let lifted = red.lift_point(&rp.coords);
                let Some(plucker) = normalize_proj(&lifted) else {
                    continue;
                };
                split_points.push(split_point_on_x(inst, cycle, &plucker)?);
                split_multiplicities.push(rp.multiplicity);
            }
            Ok(FiberOverY {
                y: cycle.y.clone(),
                dimension: 0,
                length: Some(sol.length),
                eliminant_factor_degrees: sol.eliminant_factor_degrees,
                eliminant_squarefree: sol.eliminant_squarefree,
                split_points,
                split_multiplicities,
            })
        }
        Err(PolyError::NotZeroDimensional(_)) => {
            let ideal = GradedIdeal::new(ring, red.reduced_gens.clone());
            let hd = ideal.hilbert(budget)?;
            Ok(FiberOverY {
                y: cycle.y.clone(),
                dimension: hd.projective_dim(),
                length: None,
                eliminant_factor_degrees: Vec::new(),
                eliminant_squarefree: false,
                split_points: Vec::new(),
                split_multiplicities: Vec::new(),
            })
        }
        Err(e) => Err(ConstructError::Poly(e)),
    }
}

/// Verifies a rational fiber point: on X, on the Schubert cycle, and its
/// witness plane meets the radical.
fn split_point_on_x(
    inst: &PfaffianInstance,
    cycle: &SchubertCycle,
    plucker: &[Fp],
) -> Result<XPoint, ConstructError> {
    let p = inst.p;
    for g in inst.x_ideal.gens() {
        if !g.eval(&inst.x_ring, plucker).is_zero() {
            return Err(ConstructError::BadInstance(
                "fiber point fails an X generator".into(),
            ));
        }
    }
    for f in &cycle.forms {
        if !f.eval(&inst.x_ring, plucker).is_zero() {
            return Err(ConstructError::BadInstance(
                "fiber point fails a Schubert form".into(),
            ));
        }
    }
    let mut arr = [Fp::zero(p); 15];
    arr.copy_from_slice(plucker);
    let pv = PluckerVector::new(arr);
    if !pv.is_decomposable() {
        return Err(ConstructError::BadInstance(
            "fiber point is not decomposable".into(),
        ));
    }
    let (b1, b2) = pv.plane_basis()?;
    // Q meets rad(phi): the four spanning vectors are dependent.
    let rows = vec![
        b1.clone(),
        b2.clone(),
        cycle.radical.0.clone(),
        cycle.radical.1.clone(),
    ];
    if Matrix::from_rows(&rows, p).rank() > 3 {
        return Err(ConstructError::BadInstance(
            "fiber plane does not meet the radical".into(),
        ));
    }
    Ok(XPoint {
        plucker: plucker.to_vec(),
        basis: (b1, b2),
    })
}

/// A point of xi(y) described by its residue-field degree and local
/// multiplicity; rational points carry explicit coordinates.
#[derive(Clone, Debug)]
pub struct XiPoint {
    pub residue_degree: usize,
    pub multiplicity: usize,
    pub split: Option<XPoint>,
}

/// The points of xi(y) with residue degrees, from the fiber over y.
/// Degrees (weighted by multiplicity) sum to the fiber length.
pub fn xi_points(
    inst: &PfaffianInstance,
    y: &[Fp],
    budget: &Budget,
) -> Result<Vec<XiPoint>, ConstructError> {
    let fiber = fiber_over_y(inst, y, budget)?;
    let Some(length) = fiber.length else {
        return Err(ConstructError::BadInstance(format!(
            "non-generic fiber: dimension {}",
            fiber.dimension
        )));
    };
    let mut out = Vec::new();
    let mut split_iter = fiber
        .split_points
        .iter()
        .zip(&fiber.split_multiplicities);
    for &(deg, mult) in &fiber.eliminant_factor_degrees {
        if deg == 1 {
            let (pt, &m) = split_iter.next().ok_or_else(|| {
                ConstructError::BadInstance("missing split point for a linear factor".into())
            })?;
            debug_assert_eq!(m, mult);
            out.push(XiPoint {
                residue_degree: 1,
                multiplicity: m,
                split: Some(pt.clone()),
            });
        } else {
            out.push(XiPoint {
                residue_degree: deg,
                multiplicity: mult,
                split: None,
            });
        }
    }
    let total: usize = out.iter().map(|q| q.residue_degree * q.multiplicity).sum();
    if total != length {
        return Err(ConstructError::BadInstance(format!(
            "residue degrees sum to {total}, fiber length is {length}"
        )));
    }
    Ok(out)
}

/// The fiber of the correspondence over a point [P] of X: the rank-<=1
/// locus in P^5 of the 2x6 matrix phi_y(p_i, e_j).
#[derive(Clone, Debug)]
pub struct FiberOverX {
    pub plane: XPoint,
    /// Entries of the 2x6 matrix, linear forms in the Y coordinates.
    pub matrix: Vec<Vec<MultiPoly>>,
    /// The 15 two-by-two minors.
    pub ideal: GradedIdeal,
    pub hilbert: HilbertData,
}

/// Builds the fiber over [P] and certifies dimension 2, degree 4 and
/// Hilbert polynomial 2n^2 + 3n + 1.
pub fn fiber_over_x(
    inst: &PfaffianInstance,
    pt: &XPoint,
    budget: &Budget,
) -> Result<FiberOverX, ConstructError> {
    let yr = &inst.y_ring;
    let p = inst.p;
    let unit = |j: usize| {
        let mut e = vec![Fp::zero(p); 6];
        e[j] = Fp::one(p);
        e
    };
    let basis = [&pt.basis.0, &pt.basis.1];
    let m: Vec<Vec<MultiPoly>> = (0..2)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let coeffs: Vec<Fp> = inst
                        .forms
                        .iter()
                        .map(|f| f.eval(basis[i], &unit(j)))
                        .collect();
                    yr.linear_form(&coeffs)
                })
                .collect()
        })
        .collect();
    // The P-direction columns vanish identically: for b in the plane,
    // sum_j b_j m[i][j] = phi_y(p_i, b) = 0 as a polynomial in y.
    for b in basis {
        for row in &m {
            let mut acc = yr.zero_poly();
            for (j, entry) in row.iter().enumerate() {
                acc = acc.add(yr, &entry.scale(b[j]));
            }
            if !acc.is_zero() {
                return Err(ConstructError::BadInstance(
                    "plane directions do not annihilate the fiber matrix".into(),
                ));
            }
        }
    }
    let mut minors = Vec::with_capacity(15);
    for j in 0..6 {
        for l in (j + 1)..6 {
            let d = m[0][j]
                .mul(yr, &m[1][l])
                .sub(yr, &m[0][l].mul(yr, &m[1][j]));
            if !d.is_zero() {
                minors.push(d);
            }
        }
    }
    let ideal = GradedIdeal::new(yr, minors);
    let hd = ideal.hilbert(budget)?.clone();
    if hd.projective_dim() != 2 || hd.degree != 4 || hd.hp != expected_hp() {
        return Err(ConstructError::BadInstance(format!(
            "fiber over X is not a degree-4 surface: dim {} degree {} hp {}",
            hd.projective_dim(),
            hd.degree,
            hd.hp
        )));
    }
    Ok(FiberOverX {
        plane: pt.clone(),
        matrix: m,
        ideal,
        hilbert: hd,
    })
}

/// The predicted Hilbert polynomial 2n^2 + 3n + 1 of a fiber over X.
pub fn expected_hp() -> QPoly {
    crate::ktheory::expected_fiber_hp()
}

/// Flatness evidence: the Hilbert polynomials of k fibers over sampled
/// points of X, which must all coincide.
#[derive(Clone, Debug)]
pub struct FlatnessReport {
    pub points: Vec<XPoint>,
    pub hilbert_polynomials: Vec<QPoly>,
}

pub fn flatness_evidence(
    inst: &PfaffianInstance,
    k: usize,
    seed: u64,
    budget: &Budget,
) -> Result<FlatnessReport, ConstructError> {
    let points = crate::construction::points_on_x(inst, seed, k, budget)?;
    let fibers = crate::parallel::par_map(&points, |pt| fiber_over_x(inst, pt, budget));
    let mut hps = Vec::with_capacity(k);
    for (i, fib) in fibers.into_iter().enumerate() {
        let fib = fib.map_err(|e| {
            ConstructError::BadInstance(format!("fiber over sampled point {i} failed: {e}"))
        })?;
        hps.push(fib.hilbert.hp.clone());
    }
    if let Some(first) = hps.first() {
        for (i, hp) in hps.iter().enumerate() {
            if hp != first {
                return Err(ConstructError::BadInstance(format!(
                    "Hilbert polynomial mismatch at sampled point {i}: {hp} vs {first}"
                )));
            }
        }
    }
    Ok(FlatnessReport {
        points,
        hilbert_polynomials: hps,
    })
}

/// Distinctness of fibers over pairs of points of X: the planes meet in
/// zero (transversality rank exactly 4) and the fiber ideals differ.
#[derive(Clone, Debug, Default)]
pub struct DistinctnessReport {
    pub checked: usize,
    pub skipped_identical: usize,
}

pub fn distinctness_checks(
    inst: &PfaffianInstance,
    pairs: &[(XPoint, XPoint)],
    budget: &Budget,
) -> Result<DistinctnessReport, ConstructError> {
    let mut report = DistinctnessReport::default();
    for (idx, (a, b)) in pairs.iter().enumerate() {
        if a.plucker == b.plucker {
            report.skipped_identical += 1;
            continue;
        }
        let rows = vec![
            a.basis.0.clone(),
            a.basis.1.clone(),
            b.basis.0.clone(),
            b.basis.1.clone(),
        ];
        let rank = Matrix::from_rows(&rows, inst.p).rank();
        if rank != 4 {
            return Err(ConstructError::BadInstance(format!(
                "pair {idx}: planes meet (rank {rank}); a line on X or a degenerate instance"
            )));
        }
        let fa = fiber_over_x(inst, a, budget)?;
        let fb = fiber_over_x(inst, b, budget)?;
        let ga = fa.ideal.gb(budget)?;
        let gb = fb.ideal.gb(budget)?;
        if ga.gens() == gb.gens() {
            return Err(ConstructError::BadInstance(format!(
                "pair {idx}: fibers over distinct points coincide"
            )));
        }
        report.checked += 1;
    }
    Ok(report)
}

/// Witness that the radical plane of phi_y is not a point of X: an index
/// i with phi_i nonvanishing on the radical.
pub fn radical_witness(forms: &[crate::exactmath::skew::SkewForm], r1: &[Fp], r2: &[Fp]) -> Option<usize> {
    forms.iter().position(|f| !f.eval(r1, r2).is_zero())
}

pub fn radical_not_on_x(
    inst: &PfaffianInstance,
    y: &[Fp],
) -> Result<usize, ConstructError> {
    let cycle = schubert_cycle(inst, y)?;
    radical_witness(&inst.forms, &cycle.radical.0, &cycle.radical.1).ok_or_else(|| {
        ConstructError::BadInstance(
            "all forms vanish on the radical plane: instance rejected".into(),
        )
    })
}

/// Fiber-length statistics over `count` sampled points of Y, evaluated
/// concurrently.  Records lengths, squarefree eliminant counts, and the
/// multiset of residue-degree patterns.
#[derive(Clone, Debug, Default)]
pub struct FiberStatistics {
    pub fibers: usize,
    pub length_four: usize,
    pub squarefree: usize,
    /// Sorted residue-degree patterns, e.g. [1,1,2], with repetition counts.
    pub degree_patterns: Vec<(Vec<usize>, usize)>,
}

pub fn fiber_statistics(
    inst: &PfaffianInstance,
    count: usize,
    seed: u64,
    budget: &Budget,
) -> Result<FiberStatistics, ConstructError> {
    let seeds: Vec<u64> = (0..count as u64).map(|i| derive_seed(seed, 7, i)).collect();
    let results = crate::parallel::par_map(&seeds, |s| -> Result<_, ConstructError> {
        let y = crate::construction::point_on_y(inst, *s)?;
        let fiber = fiber_over_y(inst, &y, budget)?;
        Ok(fiber)
    });
    let mut stats = FiberStatistics::default();
    let mut patterns: std::collections::BTreeMap<Vec<usize>, usize> = Default::default();
    for res in results {
        let fiber = res?;
        stats.fibers += 1;
        if fiber.length == Some(4) {
            stats.length_four += 1;
        }
        if fiber.eliminant_squarefree {
            stats.squarefree += 1;
        }
        let mut pattern: Vec<usize> = fiber
            .eliminant_factor_degrees
            .iter()
            .flat_map(|&(d, m)| std::iter::repeat(d).take(m))
            .collect();
        pattern.sort_unstable();
        *patterns.entry(pattern).or_insert(0) += 1;
    }
    stats.degree_patterns = patterns.into_iter().collect();
    Ok(stats)
}
