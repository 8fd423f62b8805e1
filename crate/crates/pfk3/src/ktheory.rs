//! Exact numerical K-theory of a smooth cubic fourfold, over Q.
//!
//! Classes live in the numerical Grothendieck group, represented by their
//! Chern character (ch0..ch4) in powers of the hyperplane class h, with
//! all coefficients exact rationals.  The Euler pairing is
//! chi(a, b) = deg( ch(a)^dual * ch(b) * td ), where deg reads off the h^4
//! coefficient times the degree 3 of the fourfold, and td is the Todd
//! class derived from c(T) = (1+h)^6 / (1+3h) = 1 + 3h + 6h^2 + 2h^3 + 9h^4.
//!
//! Left mutation through the exceptional line bundles O(1), O, O(-1)
//! composes into a projector onto their orthogonal complement; its action
//! on a point class and the induced self-pairing are pinned here, alongside
//! the rank-2 Mukai pairing bookkeeping for a degree-14 K3 surface.

use crate::polyalg::qpoly::{big, binom_int, frac, QPoly};
use num::{BigInt, BigRational, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Degree of the fourfold: h^4 integrates to 3.
const DEGREE: i64 = 3;

fn td() -> [BigRational; 5] {
    [big(1), frac(3, 2), frac(5, 4), frac(3, 4), frac(1, 3)]
}

/// A numerical K-class, stored as Chern character components ch0..ch4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    pub ch: [BigRational; 5],
}

impl KClass {
    pub fn zero() -> KClass {
        KClass {
            ch: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ch.iter().all(|c| c.is_zero())
    }

    /// The line bundle O(k): ch = (1, k, k^2/2, k^3/6, k^4/24).
    pub fn o(k: i64) -> KClass {
        let mut ch = [
            big(1),
            big(k),
            big(k * k),
            big(k * k * k),
            big(k * k * k * k),
        ];
        ch[2] /= BigRational::from_integer(BigInt::from(2));
        ch[3] /= BigRational::from_integer(BigInt::from(6));
        ch[4] /= BigRational::from_integer(BigInt::from(24));
        KClass { ch }
    }

    /// The structure sheaf of a point: ch = h^4 / 3.
    pub fn point() -> KClass {
        let mut k = KClass::zero();
        k.ch[4] = frac(1, DEGREE);
        k
    }

    pub fn add(&self, other: &KClass) -> KClass {
        KClass {
            ch: std::array::from_fn(|i| &self.ch[i] + &other.ch[i]),
        }
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        KClass {
            ch: std::array::from_fn(|i| &self.ch[i] - &other.ch[i]),
        }
    }

    pub fn scale(&self, c: &BigRational) -> KClass {
        KClass {
            ch: std::array::from_fn(|i| &self.ch[i] * c),
        }
    }

    pub fn scale_i(&self, c: i64) -> KClass {
        self.scale(&big(c))
    }

    /// Dual class: odd Chern components change sign.
    pub fn dual(&self) -> KClass {
        let mut ch = self.ch.clone();
        ch[1] = -&ch[1];
        ch[3] = -&ch[3];
        KClass { ch }
    }

    /// Product in the cohomology ring, truncated above h^4.
    pub fn mul(&self, other: &KClass) -> KClass {
        let mut ch = std::array::from_fn(|_| BigRational::zero());
        for i in 0..5 {
            for j in 0..(5 - i) {
                ch[i + j] += &self.ch[i] * &other.ch[j];
            }
        }
        KClass { ch }
    }

    /// Tensor with O(k).
    pub fn twist(&self, k: i64) -> KClass {
        self.mul(&KClass::o(k))
    }
}

/// Euler pairing chi(a, b) = deg(ch(a)^dual ch(b) td), an exact rational
/// (an integer whenever a and b are integral classes).
pub fn chi(a: &KClass, b: &KClass) -> BigRational {
    let product = a.dual().mul(b).mul(&KClass { ch: td() });
    &product.ch[4] * big(DEGREE)
}

/// Integer Euler pairing; panics when the pairing is not an integer, which
/// never happens for classes of actual sheaves.
pub fn chi_i(a: &KClass, b: &KClass) -> i64 {
    let q = chi(a, b);
    assert!(q.is_integer(), "non-integral Euler pairing {q}");
    let z = q.to_integer();
    i64::try_from(z).expect("Euler pairing exceeds i64")
}

/// Independent oracle for chi(O, O(k)) on a degree-3 hypersurface in P^5:
/// binom(k+5, 5) - binom(k+2, 5), valid for every integer k.
pub fn chi_of_twist_oracle(k: i64) -> i64 {
    let v = binom_int(k + 5, 5) - binom_int(k + 2, 5);
    i64::try_from(v).expect("binomial oracle exceeds i64")
}

/// Left mutation of b through the exceptional bundle O(k):
/// b - chi(O(k), b) O(k).
pub fn mutate(k: i64, b: &KClass) -> KClass {
    let e = KClass::o(k);
    b.sub(&e.scale(&chi(&e, b)))
}

/// Projector onto the right orthogonal complement of <O(-1), O, O(1)>:
/// the composite of left mutations through O(1), then O, then O(-1).
pub fn pr(b: &KClass) -> KClass {
    mutate(-1, &mutate(0, &mutate(1, b)))
}

/// Alternating binomial sum from the length-two resolution of a fiber
/// ideal sheaf; equals (2n+1)(n+1) as a polynomial in n.
pub fn en_binomial_sum() -> QPoly {
    QPoly::binomial_shifted(5, 5)
        .sub(&QPoly::binomial_shifted(3, 5).scale(&big(6)))
        .add(&QPoly::binomial_shifted(2, 5).scale(&big(8)))
        .sub(&QPoly::binomial_shifted(1, 5).scale(&big(3)))
}

/// Hilbert polynomial (2n+1)(n+1) = 2n^2 + 3n + 1 that the fibers of the
/// correspondence must exhibit.
pub fn expected_fiber_hp() -> QPoly {
    QPoly::from_i64(&[1, 3, 2])
}

/// A rank-2 Mukai vector (r, d, s) for a polarized K3 surface of degree 14.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MukaiVector {
    pub r: i64,
    pub d: i64,
    pub s: i64,
}

impl MukaiVector {
    pub fn new(r: i64, d: i64, s: i64) -> Self {
        MukaiVector { r, d, s }
    }

    /// Mukai pairing <(r,d,s), (r',d',s')> = 14 d d' - r s' - r' s.
    pub fn pair(&self, other: &MukaiVector) -> i64 {
        14 * self.d * other.d - self.r * other.s - other.r * self.s
    }

    pub fn self_pair(&self) -> i64 {
        self.pair(self)
    }
}

/// Mukai vector of the ideal sheaf of a length-4 fiber subscheme.
pub fn mukai_ideal_sheaf() -> MukaiVector {
    MukaiVector::new(1, 0, -3)
}

/// Mukai vector of the structure sheaf of the K3 surface.
pub fn mukai_structure_sheaf() -> MukaiVector {
    MukaiVector::new(1, 0, 1)
}

/// The full set of pinned K-theory invariants, serializable for reports.
#[derive(Clone, Debug, Serialize)]
pub struct KTheoryInvariants {
    /// chi(O, O(k)) for k in -6..=6, keyed by k.
    pub euler_of_twist: BTreeMap<String, i64>,
    /// Coefficients of pr([point]) on the basis [point], [O(1)], [O], [O(-1)].
    pub projector_of_point: Vec<i64>,
    /// chi(pr [point], pr [point]).
    pub chi_pr_point: i64,
    /// Self-pairing of the Mukai vector (1, 0, -3) of a fiber ideal sheaf.
    pub mukai_ideal_self: i64,
    /// ext^1 dimension <v,v> + 2 for the fiber ideal sheaf.
    pub mukai_ideal_ext1: i64,
    /// Self-pairing of the Mukai vector (1, 0, 1) of the structure sheaf.
    pub mukai_structure_self: i64,
    /// Named consistency identities; all must hold.
    pub identities: BTreeMap<String, bool>,
}

impl KTheoryInvariants {
    pub fn all_hold(&self) -> bool {
        self.identities.values().all(|&b| b)
    }
}

/// Computes every invariant from scratch and records which identities hold.
pub fn compute_invariants() -> KTheoryInvariants {
    let o = KClass::o(0);
    let point = KClass::point();

    let mut euler_of_twist = BTreeMap::new();
    let mut oracle_ok = true;
    for k in -6..=6 {
        let v = chi_i(&o, &KClass::o(k));
        oracle_ok &= v == chi_of_twist_oracle(k);
        euler_of_twist.insert(format!("{k}"), v);
    }

    let kills = pr(&KClass::o(1)).is_zero()
        && pr(&KClass::o(0)).is_zero()
        && pr(&KClass::o(-1)).is_zero();

    // Koszul-type combinations supported on the exceptional span: the
    // class of a conic ideal twist, 2[O(1)] - [O], and of a twisted-cubic
    // ideal twist, 3[O(1)] - 3[O] + [O(-1)], are both projected to zero.
    let conic = KClass::o(1).scale_i(2).sub(&KClass::o(0));
    let cubic = KClass::o(1)
        .scale_i(3)
        .sub(&KClass::o(0).scale_i(3))
        .add(&KClass::o(-1));
    let kills_koszul = pr(&conic).is_zero() && pr(&cubic).is_zero();

    let pr_point = pr(&point);
    let basis = [point.clone(), KClass::o(1), KClass::o(0), KClass::o(-1)];
    let coeffs = [1i64, -1, 5, -10];
    let mut recombined = KClass::zero();
    for (c, b) in coeffs.iter().zip(basis.iter()) {
        recombined = recombined.add(&b.scale_i(*c));
    }
    let pr_point_pinned = pr_point == recombined;
    let chi_pr_point = chi_i(&pr_point, &pr_point);

    let mut idempotent = true;
    for k in -2..=3 {
        let x = KClass::o(k);
        idempotent &= pr(&pr(&x)) == pr(&x);
    }
    idempotent &= pr(&pr(&point)) == pr(&point);

    let mut serre = true;
    let probes = [
        KClass::o(-2),
        KClass::o(0),
        KClass::o(3),
        point.clone(),
        point.add(&KClass::o(1).scale_i(2)),
    ];
    for a in &probes {
        for b in &probes {
            serre &= chi(a, b) == chi(b, &a.twist(-3));
        }
    }

    let v_ideal = mukai_ideal_sheaf();
    let v_str = mukai_structure_sheaf();
    let mukai_matches_chi = v_ideal.self_pair() == -chi_pr_point;

    let en = en_binomial_sum() == expected_fiber_hp();

    let mut identities = BTreeMap::new();
    identities.insert("chi_matches_binomial_oracle".into(), oracle_ok);
    identities.insert("projector_kills_exceptional".into(), kills);
    identities.insert("projector_kills_koszul_combinations".into(), kills_koszul);
    identities.insert("projector_of_point_pinned".into(), pr_point_pinned);
    identities.insert("projector_idempotent".into(), idempotent);
    identities.insert("serre_symmetry".into(), serre);
    identities.insert("mukai_matches_chi".into(), mukai_matches_chi);
    identities.insert("en_binomial_identity".into(), en);

    KTheoryInvariants {
        euler_of_twist,
        projector_of_point: coeffs.to_vec(),
        chi_pr_point,
        mukai_ideal_self: v_ideal.self_pair(),
        mukai_ideal_ext1: v_ideal.self_pair() + 2,
        mukai_structure_self: v_str.self_pair(),
        identities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rng::SplitMix64;

    #[test]
    fn todd_class_from_tangent_chern_classes() {
        // c(T) = (1+h)^6/(1+3h) = 1 + 3h + 6h^2 + 2h^3 + 9h^4; the Todd
        // class below is the universal polynomial in those Chern classes.
        let (c1, c2, c3, c4) = (big(3), big(6), big(2), big(9));
        let t = td();
        assert_eq!(t[0], big(1));
        assert_eq!(t[1], &c1 / big(2));
        assert_eq!(t[2], (&c1 * &c1 + &c2) / big(12));
        assert_eq!(t[3], &c1 * &c2 / big(24));
        assert_eq!(
            t[4],
            (-(&c1 * &c1 * &c1 * &c1)
                + big(4) * &c1 * &c1 * &c2
                + &c1 * &c3
                + big(3) * &c2 * &c2
                - &c4)
                / big(720)
        );
    }

    #[test]
    fn euler_characteristic_of_twists_matches_oracle() {
        let o = KClass::o(0);
        for k in -8..=8 {
            assert_eq!(chi_i(&o, &KClass::o(k)), chi_of_twist_oracle(k), "k={k}");
        }
        // Hand values: chi(O)=1, chi(O(1))=6, chi(O(2))=21, chi(O(3))=55.
        assert_eq!(chi_of_twist_oracle(0), 1);
        assert_eq!(chi_of_twist_oracle(1), 6);
        assert_eq!(chi_of_twist_oracle(2), 21);
        assert_eq!(chi_of_twist_oracle(3), 55);
        assert_eq!(chi_of_twist_oracle(-1), 0);
        assert_eq!(chi_of_twist_oracle(-2), 0);
    }

    #[test]
    fn twist_invariance_of_euler_pairing() {
        for a in -3..=3 {
            for b in -3..=3 {
                assert_eq!(
                    chi_i(&KClass::o(a), &KClass::o(b)),
                    chi_of_twist_oracle(b - a)
                );
            }
        }
    }

    #[test]
    fn point_class_pairings() {
        let pt = KClass::point();
        assert_eq!(chi_i(&pt, &pt), 0);
        for k in -4..=4 {
            assert_eq!(chi_i(&KClass::o(k), &pt), 1, "chi(O({k}), point)");
            assert_eq!(chi_i(&pt, &KClass::o(k)), 1, "chi(point, O({k}))");
        }
        // A point is insensitive to twisting.
        assert_eq!(pt.twist(5), pt);
    }

    #[test]
    fn projector_kills_each_exceptional_bundle_stepwise() {
        // O(1) dies immediately.
        assert!(mutate(1, &KClass::o(1)).is_zero());
        // O survives the first mutation unchanged, then dies.
        let step = mutate(1, &KClass::o(0));
        assert_eq!(step, KClass::o(0));
        assert!(mutate(0, &step).is_zero());
        // O(-1) survives two mutations, then dies.
        let step = mutate(0, &mutate(1, &KClass::o(-1)));
        assert_eq!(step, KClass::o(-1));
        assert!(mutate(-1, &step).is_zero());
        for k in [-1, 0, 1] {
            assert!(pr(&KClass::o(k)).is_zero(), "pr must kill O({k})");
        }
    }

    #[test]
    fn projector_of_point_chain() {
        let pt = KClass::point();
        let s1 = mutate(1, &pt);
        assert_eq!(s1, pt.sub(&KClass::o(1)));
        let s2 = mutate(0, &s1);
        assert_eq!(s2, s1.add(&KClass::o(0).scale_i(5)));
        let s3 = mutate(-1, &s2);
        assert_eq!(s3, s2.sub(&KClass::o(-1).scale_i(10)));
        assert_eq!(pr(&pt), s3);
        // pr(point) pairs with itself to -6.
        assert_eq!(chi_i(&s3, &s3), -6);
        // It is orthogonal to all three exceptional bundles on the right.
        for k in [-1, 0, 1] {
            assert_eq!(chi_i(&KClass::o(k), &s3), 0, "chi(O({k}), pr point)");
        }
    }

    #[test]
    fn projector_is_idempotent_on_random_classes() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..20 {
            let mut x = KClass::zero();
            for k in -2..=3 {
                let c = rng.below(19) as i64 - 9;
                x = x.add(&KClass::o(k).scale_i(c));
            }
            x = x.add(&KClass::point().scale_i(rng.below(19) as i64 - 9));
            let once = pr(&x);
            assert_eq!(pr(&once), once);
            // The image is right-orthogonal to the exceptional bundles.
            for k in [-1, 0, 1] {
                assert!(chi(&KClass::o(k), &once).is_zero());
            }
        }
    }

    #[test]
    fn serre_symmetry() {
        let mut rng = SplitMix64::new(55);
        for _ in 0..10 {
            let mut a = KClass::zero();
            let mut b = KClass::zero();
            for k in -2..=2 {
                a = a.add(&KClass::o(k).scale_i(rng.below(9) as i64 - 4));
                b = b.add(&KClass::o(k).scale_i(rng.below(9) as i64 - 4));
            }
            a = a.add(&KClass::point().scale_i(rng.below(9) as i64 - 4));
            b = b.add(&KClass::point().scale_i(rng.below(9) as i64 - 4));
            assert_eq!(chi(&a, &b), chi(&b, &a.twist(-3)));
        }
    }

    #[test]
    fn eagon_northcott_binomial_identity() {
        let lhs = en_binomial_sum();
        assert_eq!(lhs, expected_fiber_hp());
        // Spot values 1, 6, 15, 28 at n = 0..4.
        for (n, v) in [(0, 1), (1, 6), (2, 15), (3, 28)] {
            assert_eq!(lhs.eval_i(n), big(v));
        }
        // Independent check straight from integer binomials.
        for n in -3..=6i64 {
            let direct = binom_int(n + 5, 5) - 6 * binom_int(n + 3, 5)
                + 8 * binom_int(n + 2, 5)
                - 3 * binom_int(n + 1, 5);
            assert_eq!(direct, BigInt::from((2 * n + 1) * (n + 1)));
        }
    }

    #[test]
    fn mukai_pairings() {
        let v = mukai_ideal_sheaf();
        assert_eq!(v.self_pair(), 6);
        assert_eq!(v.self_pair() + 2, 8);
        let w = mukai_structure_sheaf();
        assert_eq!(w.self_pair(), -2);
        assert_eq!(v.pair(&w), -(1 * 1) - (1 * -3));
        assert_eq!(v.pair(&w), w.pair(&v));
        // General symmetry probe: 14*3*4 - 2*2 - (-1)*(-1) = 163.
        let a = MukaiVector::new(2, 3, -1);
        let b = MukaiVector::new(-1, 4, 2);
        assert_eq!(a.pair(&b), 163);
        assert_eq!(a.pair(&b), b.pair(&a));
    }

    #[test]
    fn invariants_summary_is_consistent() {
        let inv = compute_invariants();
        assert!(inv.all_hold(), "failed: {:?}", inv.identities);
        assert_eq!(inv.chi_pr_point, -6);
        assert_eq!(inv.mukai_ideal_self, 6);
        assert_eq!(inv.mukai_ideal_ext1, 8);
        assert_eq!(inv.mukai_structure_self, -2);
        assert_eq!(inv.projector_of_point, vec![1, -1, 5, -10]);
        assert_eq!(inv.euler_of_twist["1"], 6);
        // chi(O(-3)) = chi(canonical bundle) = chi(O) = 1 by Serre duality.
        assert_eq!(inv.euler_of_twist["-3"], 1);
        // Serialization round-trips through canonical JSON.
        let s = serde_json::to_string(&inv).unwrap();
        assert!(s.contains("\"chi_pr_point\":-6"));
    }

    #[test]
    fn class_algebra_basics() {
        let a = KClass::o(2);
        let b = KClass::o(-1);
        assert_eq!(a.mul(&b), KClass::o(1));
        assert_eq!(a.twist(-2), KClass::o(0));
        assert_eq!(a.sub(&a), KClass::zero());
        assert_eq!(a.dual(), KClass::o(-2));
        let s = a.add(&b);
        assert_eq!(s.ch[0], big(2));
        assert_eq!(s.ch[1], big(1));
    }
}
