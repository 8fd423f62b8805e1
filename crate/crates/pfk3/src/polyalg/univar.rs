//! Univariate polynomials over F_p: Euclidean arithmetic, Lagrange
//! interpolation, Yun squarefree decomposition, and full factorization by
//! distinct-degree splitting plus Cantor-Zassenhaus equal-degree splitting.
//! Every factorization is verified by multiplying back before returning.

use super::PolyError;
use crate::exactmath::fp::Fp;
use crate::exactmath::rng::SplitMix64;
use num::BigUint;

/// Coefficients ascending, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    p: u64,
    c: Vec<Fp>,
}

impl UPoly {
    pub fn zero(p: u64) -> Self {
        UPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        UPoly::constant(Fp::one(p))
    }

    pub fn x(p: u64) -> Self {
        UPoly {
            p,
            c: vec![Fp::zero(p), Fp::one(p)],
        }
    }

    pub fn constant(c: Fp) -> Self {
        let p = c.modulus();
        UPoly::from_coeffs(p, vec![c])
    }

    pub fn from_coeffs(p: u64, c: Vec<Fp>) -> Self {
        let mut f = UPoly { p, c };
        f.trim();
        f
    }

    pub fn from_i64(p: u64, c: &[i64]) -> Self {
        UPoly::from_coeffs(p, c.iter().map(|&a| Fp::from_i64(a, p)).collect())
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|a| a.is_zero()) {
            self.c.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Fp {
        self.c.get(i).copied().unwrap_or(Fp::zero(self.p))
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.c
    }

    pub fn lead(&self) -> Fp {
        *self.c.last().expect("lead of the zero polynomial")
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.c.len().max(other.c.len());
        UPoly::from_coeffs(self.p, (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.c.len().max(other.c.len());
        UPoly::from_coeffs(self.p, (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            p: self.p,
            c: self.c.iter().map(|&a| -a).collect(),
        }
    }

    pub fn scale(&self, k: Fp) -> UPoly {
        if k.is_zero() {
            return UPoly::zero(self.p);
        }
        UPoly {
            p: self.p,
            c: self.c.iter().map(|&a| a * k).collect(),
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.p);
        }
        let mut out = vec![Fp::zero(self.p); self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(self.p, out)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.lead().inv())
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.c.len() < d.c.len() {
            return (UPoly::zero(self.p), self.clone());
        }
        let mut rem = self.c.clone();
        let dd = d.deg();
        let lead_inv = d.lead().inv();
        let mut quo = vec![Fp::zero(self.p); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i] * lead_inv;
            if q.is_zero() {
                continue;
            }
            quo[i - dd] = q;
            for (k, &dc) in d.c.iter().enumerate() {
                let idx = i - dd + k;
                rem[idx] = rem[idx] - q * dc;
            }
        }
        (
            UPoly::from_coeffs(self.p, quo),
            UPoly::from_coeffs(self.p, rem),
        )
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics in debug builds if the division has remainder.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "div_exact with remainder");
        q
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        if self.c.len() <= 1 {
            return UPoly::zero(self.p);
        }
        UPoly::from_coeffs(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * Fp::new(i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: Fp) -> Fp {
        let mut acc = Fp::zero(self.p);
        for &a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// self^e mod m, square and multiply.
    pub fn pow_mod(&self, e: u64, m: &UPoly) -> UPoly {
        self.pow_mod_big(&BigUint::from(e), m)
    }

    pub fn pow_mod_big(&self, e: &BigUint, m: &UPoly) -> UPoly {
        let mut acc = UPoly::one(self.p);
        let mut base = self.rem(m);
        let bits = e.bits();
        for k in 0..bits {
            if e.bit(k) {
                acc = acc.mul(&base).rem(m);
            }
            if k + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(points: &[Fp], values: &[Fp]) -> UPoly {
        assert_eq!(points.len(), values.len());
        assert!(!points.is_empty());
        let p = points[0].modulus();
        // full = prod (x - x_j)
        let mut full = UPoly::one(p);
        for &xj in points {
            full = full.mul(&UPoly::from_coeffs(p, vec![-xj, Fp::one(p)]));
        }
        let mut out = UPoly::zero(p);
        for (&xi, &yi) in points.iter().zip(values) {
            let q = full.div_exact(&UPoly::from_coeffs(p, vec![-xi, Fp::one(p)]));
            let denom = q.eval(xi);
            out = out.add(&q.scale(yi / denom));
        }
        out
    }
}

/// Yun's squarefree decomposition of a nonconstant polynomial: returns
/// monic pairwise-coprime squarefree (a_i, i) with f = lead * prod a_i^i.
/// Valid here because deg f < p, so derivatives behave as in
/// characteristic zero.
pub fn squarefree_decomposition(f: &UPoly) -> Vec<(UPoly, usize)> {
    let f = f.monic();
    assert!((f.deg() as u64) < f.modulus(), "degree must stay below p");
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0);
    let mut c = df.div_exact(&a0);
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1usize;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        if a.deg() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a);
        c = d.div_exact(&a);
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

pub fn is_squarefree(f: &UPoly) -> bool {
    if f.is_zero() {
        return false;
    }
    if f.deg() == 0 {
        return true;
    }
    f.gcd(&f.derivative()).deg() == 0
}

/// Distinct-degree splitting of a monic squarefree polynomial: returns
/// (product of all irreducible factors of degree d, d) with d ascending.
pub fn distinct_degree_split(f: &UPoly) -> Vec<(UPoly, usize)> {
    let p = f.modulus();
    let mut g = f.monic();
    let mut out = Vec::new();
    let mut h = UPoly::x(p).rem(&g);
    let mut d = 0usize;
    while g.deg() >= 2 * (d + 1) {
        d += 1;
        // h = x^(p^d) mod g via one more Frobenius power
        h = h.pow_mod(p, &g);
        let trap = h.sub(&UPoly::x(p)).gcd(&g);
        if trap.deg() > 0 {
            out.push((trap.clone(), d));
            g = g.div_exact(&trap);
            h = h.rem(&g);
        }
    }
    if g.deg() > 0 {
        let deg = g.deg();
        out.push((g, deg));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting: factors a monic squarefree
/// product of irreducibles all of degree d.
pub fn equal_degree_split(f: &UPoly, d: usize, rng: &mut SplitMix64) -> Vec<UPoly> {
    let p = f.modulus();
    if f.deg() == d {
        return vec![f.monic()];
    }
    debug_assert_eq!(f.deg() % d, 0);
    let exponent = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = UPoly::from_coeffs(
            p,
            (0..f.deg()).map(|_| rng.fp(p)).collect(),
        );
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let shared = a.gcd(f);
        if shared.deg() > 0 && shared.deg() < f.deg() {
            let mut out = equal_degree_split(&shared, d, rng);
            out.extend(equal_degree_split(&f.div_exact(&shared), d, rng));
            return out;
        }
        let b = a.pow_mod_big(&exponent, f);
        let split = b.sub(&UPoly::one(p)).gcd(f);
        if split.deg() > 0 && split.deg() < f.deg() {
            let mut out = equal_degree_split(&split, d, rng);
            out.extend(equal_degree_split(&f.div_exact(&split), d, rng));
            return out;
        }
    }
}

/// Full factorization: f = lead * prod factors_i^{mult_i} with monic
/// irreducible factors, canonically sorted.  The product is re-multiplied
/// and compared with the input before returning.
pub fn factor(f: &UPoly, rng: &mut SplitMix64) -> Result<(Fp, Vec<(UPoly, usize)>), PolyError> {
    if f.is_zero() {
        return Err(PolyError::BadInput("factor of the zero polynomial".into()));
    }
    let lead = f.lead();
    if f.deg() == 0 {
        return Ok((lead, Vec::new()));
    }
    let mut out: Vec<(UPoly, usize)> = Vec::new();
    for (sqf, mult) in squarefree_decomposition(f) {
        for (prod, d) in distinct_degree_split(&sqf) {
            for irred in equal_degree_split(&prod, d, rng) {
                out.push((irred, mult));
            }
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<u64> = a.0.coeffs().iter().map(|c| c.value()).collect();
        let kb: Vec<u64> = b.0.coeffs().iter().map(|c| c.value()).collect();
        (a.0.deg(), ka, a.1).cmp(&(b.0.deg(), kb, b.1))
    });
    // Reconstruction check: never return an unverified factorization.
    let mut prod = UPoly::constant(lead);
    for (g, m) in &out {
        for _ in 0..*m {
            prod = prod.mul(g);
        }
    }
    if &prod != f {
        return Err(PolyError::BadInput(
            "internal factorization reconstruction mismatch".into(),
        ));
    }
    Ok((lead, out))
}

/// Roots in F_p with multiplicities, via the linear factors.
pub fn roots(f: &UPoly, rng: &mut SplitMix64) -> Result<Vec<(Fp, usize)>, PolyError> {
    let (_, factors) = factor(f, rng)?;
    Ok(factors
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, m)| (-g.coeff(0), m))
        .collect())
}

pub fn is_irreducible(f: &UPoly, rng: &mut SplitMix64) -> Result<bool, PolyError> {
    if f.is_zero() || f.deg() == 0 {
        return Ok(false);
    }
    let (_, factors) = factor(f, rng)?;
    Ok(factors.len() == 1 && factors[0].1 == 1)
}
