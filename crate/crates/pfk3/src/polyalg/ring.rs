//! Polynomial rings over F_p: monomials with a cached total degree,
//! monomial orders, and sparse multivariate polynomials.

use crate::exactmath::fp::Fp;
use std::cmp::Ordering;
use std::fmt;

/// Hard cap on ring size.  15 Pluecker variables plus one auxiliary
/// elimination variable is the largest ring the toolkit ever needs.
pub const MAX_VARS: usize = 16;

/// A monomial: exponent vector with cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mon {
    pub deg: u16,
    e: [u16; MAX_VARS],
}

impl Mon {
    pub fn one() -> Self {
        Mon {
            deg: 0,
            e: [0; MAX_VARS],
        }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Mon::one();
        m.e[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Mon::one();
        for (i, &x) in exps.iter().enumerate() {
            m.e[i] = x;
        }
        m.deg = exps.iter().sum();
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u16 {
        self.e[i]
    }

    pub fn exps(&self, nvars: usize) -> &[u16] {
        &self.e[..nvars]
    }

    #[inline]
    pub fn mul(&self, other: &Mon) -> Mon {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.e[i] += other.e[i];
        }
        m.deg += other.deg;
        m
    }

    #[inline]
    pub fn divides(&self, other: &Mon) -> bool {
        if self.deg > other.deg {
            return false;
        }
        (0..MAX_VARS).all(|i| self.e[i] <= other.e[i])
    }

    /// `other / self`; caller guarantees divisibility.
    #[inline]
    pub fn div_into(&self, other: &Mon) -> Mon {
        let mut m = *other;
        for i in 0..MAX_VARS {
            debug_assert!(m.e[i] >= self.e[i]);
            m.e[i] -= self.e[i];
        }
        m.deg -= self.deg;
        m
    }

    pub fn lcm(&self, other: &Mon) -> Mon {
        let mut m = Mon::one();
        let mut deg = 0u16;
        for i in 0..MAX_VARS {
            m.e[i] = self.e[i].max(other.e[i]);
            deg += m.e[i];
        }
        m.deg = deg;
        m
    }

    pub fn is_coprime(&self, other: &Mon) -> bool {
        (0..MAX_VARS).all(|i| self.e[i] == 0 || other.e[i] == 0)
    }

    pub fn pow_of_var(i: usize, k: u16) -> Mon {
        let mut m = Mon::one();
        m.e[i] = k;
        m.deg = k;
        m
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (the default everywhere).
    GrevLex,
    /// Pure lexicographic; used for order-independence cross-checks.
    Lex,
    /// Block order eliminating variable 0: compares the exponent of
    /// variable 0 first, then grevlex on the remaining variables.  Variable 0
    /// is the auxiliary `t` in intersection/saturation tricks.
    Elim1,
}

impl MonomialOrder {
    /// Total order; `Greater` means `a` is larger (leading side).
    #[inline]
    pub fn cmp(&self, a: &Mon, b: &Mon, nvars: usize) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a, b, 0, nvars, a.deg, b.deg),
            MonomialOrder::Lex => {
                for i in 0..nvars {
                    match a.e[i].cmp(&b.e[i]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Elim1 => match a.e[0].cmp(&b.e[0]) {
                Ordering::Equal => {
                    grevlex(a, b, 1, nvars, a.deg - a.e[0], b.deg - b.e[0])
                }
                ord => ord,
            },
        }
    }
}

#[inline]
fn grevlex(a: &Mon, b: &Mon, from: usize, nvars: usize, adeg: u16, bdeg: u16) -> Ordering {
    match adeg.cmp(&bdeg) {
        Ordering::Equal => {
            for i in (from..nvars).rev() {
                match a.e[i].cmp(&b.e[i]) {
                    Ordering::Equal => continue,
                    // smaller exponent in the last differing variable wins
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
        ord => ord,
    }
}

/// A polynomial ring F_p[x_1..x_n] with a fixed monomial order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyRing {
    p: u64,
    order: MonomialOrder,
    names: Vec<String>,
}

impl PolyRing {
    pub fn new(p: u64, names: &[&str], order: MonomialOrder) -> Self {
        assert!(
            names.len() <= MAX_VARS,
            "at most {MAX_VARS} variables are supported"
        );
        PolyRing {
            p,
            order,
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn with_default_names(p: u64, nvars: usize, order: MonomialOrder) -> Self {
        let names: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        PolyRing::new(p, &refs, order)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn with_order(&self, order: MonomialOrder) -> PolyRing {
        PolyRing {
            p: self.p,
            order,
            names: self.names.clone(),
        }
    }

    /// Same field and order, restricted to the given variables (their order
    /// is preserved and names are kept).
    pub fn subring(&self, keep: &[usize]) -> PolyRing {
        PolyRing {
            p: self.p,
            order: self.order,
            names: keep.iter().map(|&i| self.names[i].clone()).collect(),
        }
    }

    /// Extends by one auxiliary variable `t` in position 0 with the
    /// elimination order.
    pub fn extend_t(&self) -> PolyRing {
        assert!(self.nvars() < MAX_VARS);
        let mut names = vec!["t_aux".to_string()];
        names.extend(self.names.iter().cloned());
        PolyRing {
            p: self.p,
            order: MonomialOrder::Elim1,
            names,
        }
    }

    #[inline]
    pub fn cmp_mon(&self, a: &Mon, b: &Mon) -> Ordering {
        self.order.cmp(a, b, self.nvars())
    }

    pub fn zero_poly(&self) -> MultiPoly {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(&self, c: Fp) -> MultiPoly {
        if c.is_zero() {
            self.zero_poly()
        } else {
            MultiPoly {
                terms: vec![(Mon::one(), c)],
            }
        }
    }

    pub fn one_poly(&self) -> MultiPoly {
        self.constant(Fp::one(self.p))
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        assert!(i < self.nvars());
        MultiPoly {
            terms: vec![(Mon::var(i), Fp::one(self.p))],
        }
    }

    pub fn monomial(&self, mon: Mon, c: Fp) -> MultiPoly {
        if c.is_zero() {
            self.zero_poly()
        } else {
            MultiPoly {
                terms: vec![(mon, c)],
            }
        }
    }

    /// Builds a polynomial from unsorted terms, combining duplicates.
    pub fn poly_from_terms(&self, terms: Vec<(Mon, Fp)>) -> MultiPoly {
        let mut terms = terms;
        terms.sort_unstable_by(|a, b| self.cmp_mon(&b.0, &a.0));
        let mut out: Vec<(Mon, Fp)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    if last.1.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !c.is_zero() {
                out.push((m, c));
            }
        }
        MultiPoly { terms: out }
    }

    /// Linear form from coefficients, one per variable.
    pub fn linear_form(&self, coeffs: &[Fp]) -> MultiPoly {
        assert_eq!(coeffs.len(), self.nvars());
        let terms: Vec<(Mon, Fp)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (Mon::var(i), c))
            .collect();
        self.poly_from_terms(terms)
    }
}

/// Sparse multivariate polynomial; terms sorted strictly descending in the
/// ring's monomial order, never containing zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    terms: Vec<(Mon, Fp)>,
}

impl MultiPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Mon, Fp)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<&(Mon, Fp)> {
        self.terms.first()
    }

    /// Total degree (max over terms); zero polynomial reports 0.
    pub fn degree(&self) -> u16 {
        self.terms.iter().map(|(m, _)| m.deg).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.deg == m0.deg),
        }
    }

    pub fn add(&self, ring: &PolyRing, other: &MultiPoly) -> MultiPoly {
        merge(ring, &self.terms, &other.terms, None)
    }

    pub fn sub(&self, ring: &PolyRing, other: &MultiPoly) -> MultiPoly {
        let p = ring.modulus();
        merge(ring, &self.terms, &other.terms, Some(-Fp::one(p)))
    }

    pub fn neg(&self, _ring: &PolyRing) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|&(m, c)| (m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: Fp) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly { terms: Vec::new() };
        }
        MultiPoly {
            terms: self.terms.iter().map(|&(m, k)| (m, k * c)).collect(),
        }
    }

    pub fn mul(&self, ring: &PolyRing, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return ring.zero_poly();
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                terms.push((ma.mul(&mb), ca * cb));
            }
        }
        ring.poly_from_terms(terms)
    }

    pub fn mul_term(&self, ring: &PolyRing, mon: &Mon, c: Fp) -> MultiPoly {
        if c.is_zero() {
            return ring.zero_poly();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|&(m, k)| (m.mul(mon), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, ring: &PolyRing, mut e: u32) -> MultiPoly {
        let mut acc = ring.one_poly();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    pub fn eval(&self, ring: &PolyRing, point: &[Fp]) -> Fp {
        assert_eq!(point.len(), ring.nvars());
        let p = ring.modulus();
        let mut acc = Fp::zero(p);
        for (m, c) in &self.terms {
            let mut t = *c;
            for i in 0..ring.nvars() {
                for _ in 0..m.exp(i) {
                    t *= point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `images[i]` (a polynomial in `target`) for variable i.
    pub fn substitute(&self, ring: &PolyRing, target: &PolyRing, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), ring.nvars());
        let mut acc = target.zero_poly();
        for (m, c) in &self.terms {
            let mut t = target.constant(*c);
            for i in 0..ring.nvars() {
                let e = m.exp(i);
                if e > 0 {
                    t = t.mul(target, &images[i].pow(target, e as u32));
                }
            }
            acc = acc.add(target, &t);
        }
        acc
    }

    /// Renumbers variables: variable i becomes `map[i]` in `target`.
    pub fn map_vars(&self, target: &PolyRing, map: &[usize]) -> MultiPoly {
        let terms: Vec<(Mon, Fp)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = [0u16; MAX_VARS];
                for (i, &to) in map.iter().enumerate() {
                    let e = m.exp(i);
                    if e > 0 {
                        assert!(to < target.nvars());
                        exps[to] += e;
                    }
                }
                (Mon::from_exps(&exps[..target.nvars()]), *c)
            })
            .collect();
        target.poly_from_terms(terms)
    }

    pub fn derivative(&self, ring: &PolyRing, var: usize) -> MultiPoly {
        let p = ring.modulus();
        let terms: Vec<(Mon, Fp)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                let mut exps = [0u16; MAX_VARS];
                exps[..ring.nvars()].copy_from_slice(m.exps(ring.nvars()));
                exps[var] -= 1;
                (
                    Mon::from_exps(&exps[..ring.nvars()]),
                    *c * Fp::new(e as u64, p),
                )
            })
            .collect();
        ring.poly_from_terms(terms)
    }

    pub fn make_monic(&mut self) {
        if let Some(&(_, c)) = self.terms.first() {
            if c.value() != 1 {
                let inv = c.inv();
                for t in &mut self.terms {
                    t.1 *= inv;
                }
            }
        }
    }

    pub fn display<'a>(&'a self, ring: &'a PolyRing) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, ring }
    }
}

fn merge(ring: &PolyRing, a: &[(Mon, Fp)], b: &[(Mon, Fp)], scale_b: Option<Fp>) -> MultiPoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match ring.cmp_mon(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                let (m, mut c) = b[j];
                if let Some(s) = scale_b {
                    c *= s;
                }
                out.push((m, c));
                j += 1;
            }
            Ordering::Equal => {
                let mut c = a[i].1;
                match scale_b {
                    Some(s) => c += b[j].1 * s,
                    None => c += b[j].1,
                }
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for &(m, c) in &b[j..] {
        match scale_b {
            Some(s) => out.push((m, c * s)),
            None => out.push((m, c)),
        }
    }
    MultiPoly { terms: out }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    ring: &'a PolyRing,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if c.value() != 1 || m.deg == 0 {
                write!(f, "{}", c.value())?;
                wrote = true;
            }
            for i in 0..self.ring.nvars() {
                let e = m.exp(i);
                if e > 0 {
                    if wrote {
                        write!(f, "*")?;
                    }
                    write!(f, "{}", self.ring.names()[i])?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                    wrote = true;
                }
            }
        }
        Ok(())
    }
}

/// Parses "x0^2*x1 - 3*x2 + 7"-style expressions over the ring's variables.
/// Intended for tests and small fixtures.
pub fn parse_poly(ring: &PolyRing, src: &str) -> Result<MultiPoly, String> {
    let p = ring.modulus();
    let mut acc = ring.zero_poly();
    let toks = tokenize(src)?;
    let mut pos = 0usize;
    let mut sign = Fp::one(p);
    if pos < toks.len() {
        if toks[pos] == Tok::Plus {
            pos += 1;
        } else if toks[pos] == Tok::Minus {
            sign = -sign;
            pos += 1;
        }
    }
    loop {
        let (term, next) = parse_term(ring, &toks, pos)?;
        acc = acc.add(ring, &term.scale(sign));
        pos = next;
        if pos == toks.len() {
            break;
        }
        sign = match toks[pos] {
            Tok::Plus => Fp::one(p),
            Tok::Minus => -Fp::one(p),
            _ => return Err(format!("expected + or - at token {pos}")),
        };
        pos += 1;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Int(u64),
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '0'..='9' => {
                let mut v = 0u64;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    v = v * 10 + chars[i].to_digit(10).unwrap() as u64;
                    i += 1;
                }
                toks.push(Tok::Int(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    s.push(chars[i]);
                    i += 1;
                }
                toks.push(Tok::Ident(s));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(toks)
}

fn parse_term(ring: &PolyRing, toks: &[Tok], mut pos: usize) -> Result<(MultiPoly, usize), String> {
    let p = ring.modulus();
    let mut coeff = Fp::one(p);
    let mut mon = Mon::one();
    loop {
        match toks.get(pos) {
            Some(Tok::Int(v)) => {
                coeff *= Fp::new(*v, p);
                pos += 1;
            }
            Some(Tok::Ident(name)) => {
                let Some(var) = ring.names().iter().position(|n| n == name) else {
                    return Err(format!("unknown variable '{name}'"));
                };
                let mut e = 1u16;
                pos += 1;
                if toks.get(pos) == Some(&Tok::Caret) {
                    match toks.get(pos + 1) {
                        Some(Tok::Int(v)) => {
                            e = *v as u16;
                            pos += 2;
                        }
                        _ => return Err("expected integer exponent after ^".into()),
                    }
                }
                mon = mon.mul(&Mon::pow_of_var(var, e));
            }
            _ => return Err(format!("expected factor at token {pos}")),
        }
        if toks.get(pos) == Some(&Tok::Star) {
            pos += 1;
            continue;
        }
        break;
    }
    Ok((ring.monomial(mon, coeff), pos))
}

/// All monomials of the given total degree, in descending ring order.
pub fn monomials_of_degree(ring: &PolyRing, deg: u16) -> Vec<Mon> {
    let mut out = Vec::new();
    let mut exps = [0u16; MAX_VARS];
    fn rec(
        ring: &PolyRing,
        exps: &mut [u16; MAX_VARS],
        var: usize,
        left: u16,
        out: &mut Vec<Mon>,
    ) {
        if var + 1 == ring.nvars() {
            exps[var] = left;
            out.push(Mon::from_exps(&exps[..ring.nvars()]));
            exps[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            exps[var] = e;
            rec(ring, exps, var + 1, left - e, out);
        }
        exps[var] = 0;
    }
    if ring.nvars() == 0 {
        if deg == 0 {
            out.push(Mon::one());
        }
        return out;
    }
    rec(ring, &mut exps, 0, deg, &mut out);
    out.sort_unstable_by(|a, b| ring.cmp_mon(b, a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u64 = 32003;

    fn ring3() -> PolyRing {
        PolyRing::new(P, &["x", "y", "z"], MonomialOrder::GrevLex)
    }

    #[test]
    fn parse_display_round_trip() {
        let r = ring3();
        let f = parse_poly(&r, "x^2*y - 3*z + 7").unwrap();
        assert_eq!(f.num_terms(), 3);
        let g = parse_poly(&r, &f.display(&r).to_string()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn arithmetic_basics() {
        let r = ring3();
        let x = r.var(0);
        let y = r.var(1);
        let f = x.add(&r, &y);
        let f2 = f.mul(&r, &f);
        let expect = parse_poly(&r, "x^2 + 2*x*y + y^2").unwrap();
        assert_eq!(f2, expect);
        assert!(f2.sub(&r, &expect).is_zero());
        assert_eq!(f.pow(&r, 2), f2);
        assert!(f2.is_homogeneous());
        let inhom = parse_poly(&r, "x^2 + y").unwrap();
        assert!(!inhom.is_homogeneous());
    }

    #[test]
    fn grevlex_vs_lex_leading_terms() {
        // In grevlex x*z < y^2 iff ... classic discriminator: compare x*z and y^2.
        let r = ring3();
        let xz = Mon::from_exps(&[1, 0, 1]);
        let y2 = Mon::from_exps(&[0, 2, 0]);
        // grevlex: same degree; last differing variable is z with larger
        // exponent in xz, so xz < y^2
        assert_eq!(r.cmp_mon(&xz, &y2), Ordering::Less);
        let rlex = r.with_order(MonomialOrder::Lex);
        // lex: x beats y
        assert_eq!(rlex.cmp_mon(&xz, &y2), Ordering::Greater);
    }

    #[test]
    fn elim_order_prefers_t() {
        let r = PolyRing::new(P, &["t", "x", "y"], MonomialOrder::Elim1);
        let t = Mon::from_exps(&[1, 0, 0]);
        let x5 = Mon::from_exps(&[0, 5, 0]);
        assert_eq!(r.cmp_mon(&t, &x5), Ordering::Greater);
    }

    #[test]
    fn derivative_and_eval() {
        let r = ring3();
        let f = parse_poly(&r, "x^3 + x*y^2 + 5").unwrap();
        let fx = f.derivative(&r, 0);
        let expect = parse_poly(&r, "3*x^2 + y^2").unwrap();
        assert_eq!(fx, expect);
        let pt = [Fp::new(2, P), Fp::new(3, P), Fp::new(1, P)];
        assert_eq!(f.eval(&r, &pt), Fp::new(8 + 18 + 5, P));
    }

    #[test]
    fn substitution_renames_and_expands() {
        let r = ring3();
        let r2 = PolyRing::new(P, &["u", "v"], MonomialOrder::GrevLex);
        let f = parse_poly(&r, "x*y + z^2").unwrap();
        // x -> u, y -> u + v, z -> v
        let images = vec![
            r2.var(0),
            r2.var(0).add(&r2, &r2.var(1)),
            r2.var(1),
        ];
        let g = f.substitute(&r, &r2, &images);
        let expect = parse_poly(&r2, "u^2 + u*v + v^2").unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn monomial_enumeration_counts() {
        let r = ring3();
        // C(d+2, 2) monomials of degree d in three variables
        for d in 0..6u16 {
            let n = monomials_of_degree(&r, d).len();
            assert_eq!(n, ((d as usize + 2) * (d as usize + 1)) / 2);
        }
    }

    proptest! {
        #[test]
        fn orders_refine_divisibility(ea in proptest::collection::vec(0u16..4, 3),
                                      eb in proptest::collection::vec(0u16..4, 3)) {
            let a = Mon::from_exps(&ea);
            let prod = a.mul(&Mon::from_exps(&eb));
            for order in [MonomialOrder::GrevLex, MonomialOrder::Lex, MonomialOrder::Elim1] {
                if prod != a {
                    prop_assert_eq!(order.cmp(&prod, &a, 3), Ordering::Greater);
                }
            }
        }

        #[test]
        fn mul_commutes(sa in 0u64..1000, sb in 0u64..1000) {
            let r = ring3();
            let mut rng = crate::exactmath::rng::SplitMix64::new(sa * 1000 + sb);
            let mut rand_poly = || {
                let terms: Vec<(Mon, Fp)> = (0..4)
                    .map(|_| {
                        let e = [
                            (rng.below(3)) as u16,
                            (rng.below(3)) as u16,
                            (rng.below(3)) as u16,
                        ];
                        (Mon::from_exps(&e), rng.fp(P))
                    })
                    .collect();
                r.poly_from_terms(terms)
            };
            let f = rand_poly();
            let g = rand_poly();
            prop_assert_eq!(f.mul(&r, &g), g.mul(&r, &f));
        }
    }
}
