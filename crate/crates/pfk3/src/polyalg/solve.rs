//! Exact solving of zero-dimensional projective schemes over F_p.
//!
//! The pipeline: certify zero-dimensionality and read the length from the
//! Hilbert polynomial; cross-check the length against quotient-algebra
//! dimensions in two independent random affine charts; compute the
//! characteristic polynomial of a random separating linear form on the
//! quotient algebra (the eliminant) by evaluation/interpolation of
//! det(cI - M); factor it exactly; and extract every rational point, with
//! its multiplicity, verifying all original generators vanish before
//! returning.  Degeneracies (a chart missing points, a non-separating
//! form) are detected and retried with fresh randomness; persistent
//! disagreement is an error, never silently absorbed.

use super::groebner::GroebnerBasis;
use super::hilbert::{standard_monomials, HilbertData};
use super::ring::{Mon, MultiPoly, PolyRing};
use super::univar::{factor, UPoly};
use super::PolyError;
use crate::config::Budget;
use crate::exactmath::fp::Fp;
use crate::exactmath::matrix::Matrix;
use crate::exactmath::rng::SplitMix64;
use std::collections::HashMap;

/// Scales projective coordinates so the first nonzero one is 1; None for
/// the zero vector.
pub fn normalize_proj(coords: &[Fp]) -> Option<Vec<Fp>> {
    let lead = coords.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv();
    Some(coords.iter().map(|&c| c * inv).collect())
}

/// A random affine chart of projective space: original coordinates are
/// x = M u with M invertible, dehomogenized at u_0 = 1.
#[derive(Clone, Debug)]
pub struct Chart {
    mat: Matrix,
    pub affine_ring: PolyRing,
    images: Vec<MultiPoly>,
}

impl Chart {
    pub fn random(ring: &PolyRing, rng: &mut SplitMix64) -> Chart {
        let n = ring.nvars();
        let p = ring.modulus();
        let mat = Matrix::random_invertible(n, p, rng);
        let names: Vec<String> = (1..n).map(|j| format!("u{j}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let affine_ring = PolyRing::new(p, &refs, ring.order());
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let mut f = affine_ring.constant(mat[(i, 0)]);
                for j in 1..n {
                    f = f.add(
                        &affine_ring,
                        &affine_ring.monomial(Mon::var(j - 1), mat[(i, j)]),
                    );
                }
                f
            })
            .collect();
        Chart {
            mat,
            affine_ring,
            images,
        }
    }

    /// Restricts a homogeneous polynomial to the chart.
    pub fn push(&self, f: &MultiPoly, ring: &PolyRing) -> MultiPoly {
        f.substitute(ring, &self.affine_ring, &self.images)
    }

    /// Projective coordinates (not normalized) of an affine point.
    pub fn lift(&self, pt: &[Fp]) -> Vec<Fp> {
        let p = self.mat.modulus();
        let mut u = Vec::with_capacity(pt.len() + 1);
        u.push(Fp::one(p));
        u.extend_from_slice(pt);
        self.mat.matvec(&u)
    }
}

/// Monomial basis of R/I for a zero-dimensional affine ideal, enumerated
/// degree by degree.  Errors when some variable has no pure power among the
/// leading terms (the staircase criterion for zero-dimensionality).
pub fn quotient_basis(gb: &GroebnerBasis) -> Result<Vec<Mon>, PolyError> {
    let ring = gb.ring();
    if gb.is_unit_ideal() {
        return Ok(Vec::new());
    }
    let lms = gb.leading_monomials();
    let n = ring.nvars();
    for v in 0..n {
        let has_pure_power = lms.iter().any(|m| {
            m.exp(v) > 0 && (0..n).all(|i| i == v || m.exp(i) == 0)
        });
        if !has_pure_power {
            return Err(PolyError::NotZeroDimensional(format!(
                "no pure power of {} among the leading terms",
                ring.names()[v]
            )));
        }
    }
    let mut out = Vec::new();
    let mut deg = 0u16;
    loop {
        let sm = standard_monomials(ring, &lms, deg);
        if sm.is_empty() {
            break;
        }
        out.extend(sm);
        deg += 1;
    }
    Ok(out)
}

/// Matrix of multiplication by f on the quotient algebra, in the given
/// standard-monomial basis.
pub fn mult_matrix(gb: &GroebnerBasis, basis: &[Mon], f: &MultiPoly) -> Matrix {
    let ring = gb.ring();
    let p = ring.modulus();
    let index: HashMap<Mon, usize> = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut mat = Matrix::zero(basis.len(), basis.len(), p);
    for (k, bm) in basis.iter().enumerate() {
        let prod = f.mul_term(ring, bm, Fp::one(p));
        let nf = gb.normal_form(&prod);
        for &(m, c) in nf.terms() {
            let i = *index
                .get(&m)
                .expect("normal form must lie in the staircase");
            mat[(i, k)] = c;
        }
    }
    mat
}

/// Characteristic polynomial det(cI - M) by evaluation at deg+1 points and
/// Lagrange interpolation; exact, monic of degree M.rows().
pub fn char_poly(m: &Matrix) -> UPoly {
    let n = m.rows();
    let p = m.modulus();
    debug_assert!((n as u64) < p);
    let points: Vec<Fp> = (0..=n as u64).map(|c| Fp::new(c, p)).collect();
    let values: Vec<Fp> = points
        .iter()
        .map(|&c| {
            let mut a = Matrix::zero(n, n, p);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = if i == j { c - m[(i, j)] } else { -m[(i, j)] };
                }
            }
            a.det()
        })
        .collect();
    let chi = UPoly::interpolate(&points, &values);
    debug_assert_eq!(chi.degree(), Some(n));
    chi
}

/// A rational point of a zero-dimensional projective scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivePoint {
    /// Normalized homogeneous coordinates (first nonzero = 1).
    pub coords: Vec<Fp>,
    /// Local multiplicity (dimension of the local quotient algebra).
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct ProjectiveSolution {
    /// Degree of the scheme = constant Hilbert polynomial.
    pub length: usize,
    /// Quotient-algebra dimensions in the two verification charts.
    pub chart_lengths: [usize; 2],
    /// (degree, multiplicity) of the irreducible factors of the eliminant,
    /// canonically sorted; degrees-with-multiplicity sum to `length`.
    pub eliminant_factor_degrees: Vec<(usize, usize)>,
    pub eliminant_squarefree: bool,
    /// All rational points, each verified against the original generators.
    pub rational_points: Vec<ProjectivePoint>,
}

const CHART_ATTEMPTS: usize = 8;
const SEPARATOR_ATTEMPTS: usize = 16;

/// Solves a zero-dimensional projective scheme; see the module docs for the
/// pipeline and its cross-checks.
pub fn solve_projective(
    ring: &PolyRing,
    gens: &[MultiPoly],
    budget: &Budget,
    rng: &mut SplitMix64,
) -> Result<ProjectiveSolution, PolyError> {
    let p = ring.modulus();
    let gb = GroebnerBasis::compute(ring, gens, budget)?;
    let hd = HilbertData::from_gb(&gb)?;
    let Some(len) = hd.hp_constant() else {
        return Err(PolyError::NotZeroDimensional(format!(
            "Hilbert polynomial {} (projective dimension {})",
            hd.hp,
            hd.projective_dim()
        )));
    };
    let length = len as usize;

    // Two independent random charts must both see the full length.
    let mut chart_lengths: Vec<usize> = Vec::new();
    let mut first_chart: Option<(Chart, Vec<MultiPoly>, GroebnerBasis, Vec<Mon>)> = None;
    for _attempt in 0..CHART_ATTEMPTS {
        if chart_lengths.len() == 2 {
            break;
        }
        let chart = Chart::random(ring, rng);
        let affine_gens: Vec<MultiPoly> = gens.iter().map(|g| chart.push(g, ring)).collect();
        let agb = GroebnerBasis::compute(&chart.affine_ring, &affine_gens, budget)?;
        let basis = quotient_basis(&agb)?;
        if basis.len() != length {
            // The chart hyperplane met the scheme; try another chart.
            continue;
        }
        chart_lengths.push(basis.len());
        if first_chart.is_none() {
            first_chart = Some((chart, affine_gens, agb, basis));
        }
    }
    if chart_lengths.len() < 2 {
        return Err(PolyError::ChartDisagreement(format!(
            "only {}/2 random charts reached the Hilbert length {} in {} attempts",
            chart_lengths.len(),
            length,
            CHART_ATTEMPTS
        )));
    }
    let (chart, affine_gens, agb, basis) =
        first_chart.expect("two successful charts imply a stored first");

    'separator: for _attempt in 0..SEPARATOR_ATTEMPTS {
        let coeffs: Vec<Fp> = (0..chart.affine_ring.nvars()).map(|_| rng.fp(p)).collect();
        let ell = chart.affine_ring.linear_form(&coeffs);
        let m = mult_matrix(&agb, &basis, &ell);
        let chi = char_poly(&m);
        let (_, factors) = factor(&chi, rng)?;
        let total: usize = factors.iter().map(|(g, mult)| g.deg() * mult).sum();
        if total != length {
            return Err(PolyError::BadInput(
                "eliminant degree mismatch (internal invariant)".into(),
            ));
        }
        let eliminant_factor_degrees: Vec<(usize, usize)> =
            factors.iter().map(|(g, mult)| (g.deg(), *mult)).collect();
        let eliminant_squarefree = factors.iter().all(|(_, mult)| *mult == 1);

        let mut rational_points = Vec::new();
        for (g, mult) in factors.iter().filter(|(g, _)| g.deg() == 1) {
            let c = -g.coeff(0);
            // (ell - c)^mult cuts out exactly the primary component over the
            // eigenvalue c: it is nilpotent there (order <= algebraic
            // multiplicity) and invertible on every other local factor.
            let shifted = ell.sub(&chart.affine_ring, &chart.affine_ring.constant(c));
            let mut local_gens = affine_gens.clone();
            local_gens.push(shifted.pow(&chart.affine_ring, *mult as u32));
            let lgb = GroebnerBasis::compute(&chart.affine_ring, &local_gens, budget)?;
            let lbasis = quotient_basis(&lgb)?;
            if lbasis.len() != *mult {
                // Distinct points shared this eliminant value: not separating.
                continue 'separator;
            }
            let nvars = chart.affine_ring.nvars();
            let mut coords = Vec::with_capacity(nvars);
            if lbasis.len() == 1 {
                for v in 0..nvars {
                    let nf = lgb.normal_form(&chart.affine_ring.var(v));
                    debug_assert!(nf.degree() == 0);
                    coords.push(nf.terms().first().map(|t| t.1).unwrap_or(Fp::zero(p)));
                }
            } else {
                // Fat point: each coordinate function must have a single
                // eigenvalue on the local algebra.
                for v in 0..nvars {
                    let mm = mult_matrix(&lgb, &lbasis, &chart.affine_ring.var(v));
                    let chi_v = char_poly(&mm);
                    let (_, fv) = factor(&chi_v, rng)?;
                    if fv.len() != 1 || fv[0].0.deg() != 1 {
                        continue 'separator;
                    }
                    coords.push(-fv[0].0.coeff(0));
                }
            }
            // Exact verification in the chart and upstairs.
            for f in &affine_gens {
                if !f.eval(&chart.affine_ring, &coords).is_zero() {
                    return Err(PolyError::BadInput(
                        "extracted point fails an affine generator (internal invariant)".into(),
                    ));
                }
            }
            let lifted = chart.lift(&coords);
            let proj = normalize_proj(&lifted).ok_or_else(|| {
                PolyError::BadInput("extracted point lifted to zero (internal invariant)".into())
            })?;
            for f in gens {
                if !f.eval(ring, &proj).is_zero() {
                    return Err(PolyError::BadInput(
                        "extracted point fails a homogeneous generator (internal invariant)"
                            .into(),
                    ));
                }
            }
            rational_points.push(ProjectivePoint {
                coords: proj,
                multiplicity: *mult,
            });
        }

        rational_points.sort_by_key(|pt| pt.coords.iter().map(|c| c.value()).collect::<Vec<_>>());
        return Ok(ProjectiveSolution {
            length,
            chart_lengths: [chart_lengths[0], chart_lengths[1]],
            eliminant_factor_degrees,
            eliminant_squarefree,
            rational_points,
        });
    }
    Err(PolyError::RetriesExhausted(format!(
        "no separating linear form in {SEPARATOR_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::ideal::GradedIdeal;
    use crate::polyalg::ring::{parse_poly, MonomialOrder};

    const P: u64 = 32003;

    #[test]
    fn three_coordinate_points() {
        let r = PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex);
        let gens = vec![
            parse_poly(&r, "x*y").unwrap(),
            parse_poly(&r, "x*z").unwrap(),
            parse_poly(&r, "y*z").unwrap(),
        ];
        let mut rng = SplitMix64::new(42);
        let sol = solve_projective(&r, &gens, &Budget::default(), &mut rng).unwrap();
        assert_eq!(sol.length, 3);
        assert_eq!(sol.chart_lengths, [3, 3]);
        assert!(sol.eliminant_squarefree);
        assert_eq!(sol.eliminant_factor_degrees, vec![(1, 1); 3]);
        assert_eq!(sol.rational_points.len(), 3);
        let mut found: Vec<Vec<u64>> = sol
            .rational_points
            .iter()
            .map(|pt| pt.coords.iter().map(|c| c.value()).collect())
            .collect();
        found.sort();
        assert_eq!(found, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert!(sol.rational_points.iter().all(|pt| pt.multiplicity == 1));
    }

    #[test]
    fn conjugate_point_pair_has_no_rational_points() {
        // x^2 + y^2 is irreducible since p = 3 mod 4: two conjugate points.
        let r = PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex);
        let gens = vec![
            parse_poly(&r, "x^2 + y^2").unwrap(),
            parse_poly(&r, "z").unwrap(),
        ];
        let mut rng = SplitMix64::new(7);
        let sol = solve_projective(&r, &gens, &Budget::default(), &mut rng).unwrap();
        assert_eq!(sol.length, 2);
        assert!(sol.rational_points.is_empty());
        assert_eq!(sol.eliminant_factor_degrees, vec![(2, 1)]);
        assert!(sol.eliminant_squarefree);
    }

    #[test]
    fn fat_point_multiplicity() {
        // ((x - z)^2, y): one point [1:0:1] with multiplicity 2.
        let r = PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex);
        let gens = vec![
            parse_poly(&r, "x^2 - 2*x*z + z^2").unwrap(),
            parse_poly(&r, "y").unwrap(),
        ];
        let mut rng = SplitMix64::new(13);
        let sol = solve_projective(&r, &gens, &Budget::default(), &mut rng).unwrap();
        assert_eq!(sol.length, 2);
        assert!(!sol.eliminant_squarefree);
        assert_eq!(sol.eliminant_factor_degrees, vec![(1, 2)]);
        assert_eq!(sol.rational_points.len(), 1);
        assert_eq!(sol.rational_points[0].multiplicity, 2);
        let coords: Vec<u64> = sol.rational_points[0]
            .coords
            .iter()
            .map(|c| c.value())
            .collect();
        assert_eq!(coords, vec![1, 0, 1]);
    }

    #[test]
    fn positive_dimension_is_rejected() {
        let r = PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex);
        let gens = vec![parse_poly(&r, "x").unwrap()];
        let mut rng = SplitMix64::new(1);
        match solve_projective(&r, &gens, &Budget::default(), &mut rng) {
            Err(PolyError::NotZeroDimensional(_)) => {}
            other => panic!("expected NotZeroDimensional, got {other:?}"),
        }
    }

    #[test]
    fn construct_then_solve_recovers_random_points() {
        // Build the ideal of k random points as an intersection of point
        // ideals, then solve and compare the point sets exactly.
        let r = PolyRing::new(P, &["x", "y", "z", "w"], MonomialOrder::GrevLex);
        let b = Budget::default();
        for seed in 0..4u64 {
            let mut rng = SplitMix64::new(900 + seed);
            let k = 2 + rng.below(2) as usize; // 2 or 3 points
            let mut points: Vec<Vec<Fp>> = Vec::new();
            while points.len() < k {
                let cand: Vec<Fp> = (0..4).map(|_| rng.fp(P)).collect();
                let Some(normd) = normalize_proj(&cand) else {
                    continue;
                };
                if !points.contains(&normd) {
                    points.push(normd);
                }
            }
            let mut acc: Option<GradedIdeal> = None;
            for pt in &points {
                let lead = pt.iter().position(|c| !c.is_zero()).unwrap();
                let mut lins = Vec::new();
                for i in 0..4 {
                    if i == lead {
                        continue;
                    }
                    // x_i * p_lead - x_lead * p_i
                    let f = r
                        .monomial(Mon::var(i), pt[lead])
                        .sub(&r, &r.monomial(Mon::var(lead), pt[i]));
                    lins.push(f);
                }
                let pi = GradedIdeal::new(&r, lins);
                acc = Some(match acc {
                    None => pi,
                    Some(a) => a.intersect(&pi, &b).unwrap(),
                });
            }
            let ideal = acc.unwrap();
            let sol = solve_projective(&r, ideal.gens(), &b, &mut rng).unwrap();
            assert_eq!(sol.length, k, "seed {seed}");
            assert!(sol.eliminant_squarefree);
            assert_eq!(sol.rational_points.len(), k);
            let mut got: Vec<Vec<Fp>> = sol
                .rational_points
                .iter()
                .map(|pt| pt.coords.clone())
                .collect();
            let mut want = points.clone();
            got.sort_by_key(|c| c.iter().map(|x| x.value()).collect::<Vec<_>>());
            want.sort_by_key(|c| c.iter().map(|x| x.value()).collect::<Vec<_>>());
            assert_eq!(got, want, "seed {seed}");
        }
    }

    #[test]
    fn char_poly_matches_det_at_fresh_points() {
        let mut rng = SplitMix64::new(77);
        for n in 1..6 {
            let m = Matrix::random(n, n, P, &mut rng);
            let chi = char_poly(&m);
            assert_eq!(chi.degree(), Some(n));
            assert_eq!(chi.lead().value(), 1);
            for probe in [100u64, 1234, 31999] {
                let c = Fp::new(probe, P);
                let mut a = Matrix::zero(n, n, P);
                for i in 0..n {
                    for j in 0..n {
                        a[(i, j)] = if i == j { c - m[(i, j)] } else { -m[(i, j)] };
                    }
                }
                assert_eq!(chi.eval(c), a.det());
            }
        }
    }

    #[test]
    fn quotient_basis_of_symmetric_system() {
        // x+y+z, xy+yz+zx, xyz-1 (affine): quotient dimension 6.
        let r = PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex);
        let gens = vec![
            parse_poly(&r, "x + y + z").unwrap(),
            parse_poly(&r, "x*y + y*z + z*x").unwrap(),
            parse_poly(&r, "x*y*z - 1").unwrap(),
        ];
        let gb = GroebnerBasis::compute(&r, &gens, &Budget::default()).unwrap();
        let basis = quotient_basis(&gb).unwrap();
        assert_eq!(basis.len(), 6);
        // Multiplication by z has char poly (t^3 - 1)^2.
        let m = mult_matrix(&gb, &basis, &r.var(2));
        let chi = char_poly(&m);
        let cube = UPoly::from_i64(P, &[-1, 0, 0, 1]);
        assert_eq!(chi, cube.mul(&cube));
    }

    #[test]
    fn normalize_projective_coordinates() {
        let z = Fp::zero(P);
        let two = Fp::new(2, P);
        let four = Fp::new(4, P);
        let n = normalize_proj(&[z, two, four]).unwrap();
        assert_eq!(n[0], z);
        assert_eq!(n[1].value(), 1);
        assert_eq!(n[2].value(), 2);
        assert!(normalize_proj(&[z, z]).is_none());
    }
}
