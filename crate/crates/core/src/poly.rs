//! Sparse distributed polynomials over a standard graded polynomial ring.

use std::cmp::Ordering;
use std::fmt;
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MAX_VARS};

/// Runtime description of a coefficient field, as it appears in job files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffField {
    Prime(u32),
    Rationals,
}

impl Default for CoeffField {
    fn default() -> Self {
        CoeffField::Prime(32003)
    }
}

/// A polynomial as a list of `(monomial, coefficient)` pairs sorted strictly
/// descending in grevlex, with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    nvars: usize,
    terms: Vec<(Monomial, F)>,
}

impl<F: Field> Poly<F> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(nvars, Monomial::one(), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: F) -> Self {
        if c.is_zero() {
            Self::zero(nvars)
        } else {
            Poly { nvars, terms: vec![(m, c)] }
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Monomial::var(i), F::one())
    }

    /// Build from arbitrary terms; sorts, merges duplicates and drops zeros.
    pub fn from_terms(nvars: usize, mut terms: Vec<(Monomial, F)>) -> Self {
        terms.sort_by(|a, b| b.0.grevlex_cmp(&a.0));
        let mut out: Vec<(Monomial, F)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.clone() + c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    /// Maximal total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::RingMismatch(format!("polynomials over {} and {} variables", self.nvars, other.nvars)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_scaled(other, &F::one(), &Monomial::one()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_scaled(other, &-F::one(), &Monomial::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + c * m * other`, a single merge pass.
    pub fn add_scaled(&self, other: &Self, c: &F, m: &Monomial) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(t, k)| (t.mul(m), k.clone() * c.clone())).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match x.0.grevlex_cmp(&y.0) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (t, k1) = a.next().unwrap().clone();
                        let (_, k2) = b.next().unwrap();
                        let s = k1 + k2;
                        if !s.is_zero() {
                            out.push((t, s));
                        }
                    }
                },
            }
        }
        Poly { nvars: self.nvars, terms: out }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut acc = Poly::zero(self.nvars);
        // multiply by the shorter factor term-wise
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        for (m, c) in &small.terms {
            acc = acc.add_scaled(big, c, m);
        }
        acc
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, k)| (*m, k.clone() * c.clone())).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(t, k)| (t.mul(m), k.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Coefficient of the constant term.
    pub fn constant_coeff(&self) -> F {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => F::zero(),
        }
    }
}

impl<F: Field> std::ops::Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        self.try_add(o).expect("ring mismatch")
    }
}

impl<F: Field> std::ops::Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        self.try_sub(o).expect("ring mismatch")
    }
}

impl<F: Field> std::ops::Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        self.try_mul(o).expect("ring mismatch")
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", format_poly(self, &names))
    }
}

/// Render a polynomial as `3*x^2*y - y^3`.
pub fn format_poly<F: Field>(p: &Poly<F>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms.iter().enumerate() {
        let (neg, abs) = match c.to_integer() {
            Some(v) if v < 0 => (true, format!("{}", -v)),
            Some(v) => (false, format!("{v}")),
            None => {
                let txt = c.to_string();
                match txt.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, txt),
                }
            }
        };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = m.format(names);
        if m.is_one() {
            s.push_str(&abs);
        } else if abs == "1" {
            s.push_str(&mono);
        } else {
            s.push_str(&abs);
            s.push('*');
            s.push_str(&mono);
        }
    }
    s
}

/// The standard graded polynomial ring `k[x_1, ..., x_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<F> {
    names: Vec<String>,
    _field: PhantomData<F>,
}

impl<F: Field> PolyRing<F> {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Precondition("a polynomial ring needs at least one variable".into()));
        }
        if names.len() > MAX_VARS {
            return Err(Error::Precondition(format!("at most {MAX_VARS} variables are supported")));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Precondition(format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Precondition(format!("duplicate variable name `{n}`")));
            }
        }
        Ok(PolyRing { names, _field: PhantomData })
    }

    /// Ring with variables named `x0, x1, ...`.
    pub fn with_vars(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        Self::new(&names).expect("generated names are valid")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, i: usize) -> Poly<F> {
        Poly::var(self.nvars(), i)
    }

    pub fn zero(&self) -> Poly<F> {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly<F> {
        Poly::one(self.nvars())
    }

    pub fn format(&self, p: &Poly<F>) -> String {
        format_poly(p, &self.names)
    }

    fn own(&self, p: &Poly<F>) -> Result<()> {
        if p.nvars != self.nvars() {
            return Err(Error::RingMismatch(format!(
                "polynomial over {} variables used in a ring with {}",
                p.nvars,
                self.nvars()
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>> {
        self.own(a)?;
        self.own(b)?;
        a.try_add(b)
    }

    pub fn mul(&self, a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>> {
        self.own(a)?;
        self.own(b)?;
        a.try_mul(b)
    }

    /// Parse text such as `3*x^2*y - (x+y)^2`.
    pub fn parse(&self, text: &str) -> Result<Poly<F>> {
        let mut p = Parser { ring: self, src: text.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err(format!("unexpected character `{}`", p.src[p.pos] as char)));
        }
        Ok(out)
    }
}

struct Parser<'a, F> {
    ring: &'a PolyRing<F>,
    src: &'a [u8],
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, message: String) -> Error {
        Error::Parse { position: self.pos, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly<F>> {
        let n = self.ring.nvars();
        let mut acc = Poly::zero(n);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -F::one()
            }
            Some(b'+') => {
                self.pos += 1;
                F::one()
            }
            None => return Err(self.err("empty expression".into())),
            _ => F::one(),
        };
        loop {
            let t = self.term()?;
            acc = acc.add_scaled(&t, &sign, &Monomial::one());
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = F::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -F::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<F>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul_unchecked(&f);
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number".into()));
        }
        let txt = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        txt.parse::<u64>().map_err(|_| Error::Parse { position: start, message: "integer too large".into() })
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            let e = u32::try_from(e).ok().filter(|&e| e < 256).ok_or_else(|| self.err("exponent too large".into()))?;
            Ok(Some(e))
        } else {
            Ok(None)
        }
    }

    fn factor(&mut self) -> Result<Poly<F>> {
        let n = self.ring.nvars();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`".into()));
                }
                self.pos += 1;
                Ok(match self.exponent()? {
                    Some(e) => inner.pow(e),
                    None => inner,
                })
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                let c = coefficient_from_u64::<F>(v);
                if self.exponent()?.is_some() {
                    return Err(self.err("powers of constants are not supported".into()));
                }
                Ok(Poly::constant(n, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                let idx =
                    self.ring.names.iter().position(|v| v == name).ok_or_else(|| Error::Parse {
                        position: start,
                        message: format!("unknown variable `{name}`"),
                    })?;
                let e = self.exponent()?.unwrap_or(1);
                Ok(Poly::monomial(n, Monomial::var(idx).pow(e), F::one()))
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input".into())),
        }
    }
}

fn coefficient_from_u64<F: Field>(v: u64) -> F {
    // split to stay inside i64 for huge literals
    let base = F::from_i64(1 << 31);
    let hi = F::from_i64((v >> 31) as i64);
    let lo = F::from_i64((v & ((1 << 31) - 1)) as i64);
    hi * base + lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    type F = Fp<32003>;

    fn ring() -> PolyRing<F> {
        PolyRing::new(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn additive_cancellation() {
        let r = ring();
        let a = r.parse("x + y").unwrap();
        let b = r.parse("-x").unwrap();
        assert_eq!(r.add(&a, &b).unwrap(), r.parse("y").unwrap());
    }

    #[test]
    fn difference_of_squares_over_rationals() {
        let r: PolyRing<Rational> = PolyRing::new(&["x", "y"]).unwrap();
        let p = r.mul(&r.parse("x+y").unwrap(), &r.parse("x-y").unwrap()).unwrap();
        assert_eq!(r.format(&p), "x^2 - y^2");
    }

    #[test]
    fn square_mod_three() {
        let r: PolyRing<Fp<3>> = PolyRing::new(&["x", "y"]).unwrap();
        let s = r.parse("x+y").unwrap();
        let sq = r.mul(&s, &s).unwrap();
        // 2 == -1 mod 3 in the symmetric rendering
        assert_eq!(sq, r.parse("x^2 + 2*x*y + y^2").unwrap());
        assert_eq!(r.format(&sq), "x^2 - x*y + y^2");
    }

    #[test]
    fn total_degree_examples() {
        let r = ring();
        assert_eq!(r.parse("x^2*y").unwrap().total_degree(), Some(3));
        assert_eq!(r.zero().total_degree(), None);
        assert_eq!(r.parse("x^3 + y").unwrap().total_degree(), Some(3));
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let r = ring();
        let p = r.parse("3*x^2*y - y^3").unwrap();
        assert_eq!(r.format(&p), "3*x^2*y - y^3");
        assert_eq!(r.parse(&r.format(&p)).unwrap(), p);
        assert_eq!(r.parse("(x+y)^2").unwrap(), r.parse("x^2+2*x*y+y^2").unwrap());
        match r.parse("x + * y") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(r.parse("x + w"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(r.parse(""), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("x)"), Err(Error::Parse { position: 1, .. })));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let r2: PolyRing<F> = PolyRing::with_vars(2);
        let r3 = ring();
        assert!(matches!(r3.add(&r2.var(0), &r3.var(0)), Err(Error::RingMismatch(_))));
        assert!(r2.var(0).try_mul(&r3.var(0)).is_err());
    }

    #[test]
    fn invalid_rings() {
        assert!(PolyRing::<F>::new(&["x", "x"]).is_err());
        assert!(PolyRing::<F>::new(&["1x"]).is_err());
        let empty: [&str; 0] = [];
        assert!(PolyRing::<F>::new(&empty).is_err());
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Poly<F>> {
        prop::collection::vec((prop::collection::vec(0u32..3, n), -20i64..20), 0..6).prop_map(move |ts| {
            Poly::from_terms(n, ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), F::from_i64(c))).collect())
        })
    }

    fn arb_q_poly(n: usize) -> impl Strategy<Value = Poly<Rational>> {
        prop::collection::vec((prop::collection::vec(0u32..3, n), -20i64..20), 0..5).prop_map(move |ts| {
            Poly::from_terms(
                n,
                ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), Rational::from_i64(c))).collect(),
            )
        })
    }

    fn arb_homogeneous(n: usize, d: u32) -> impl Strategy<Value = Poly<F>> {
        let mons = crate::monomial::monomials_of_degree(n, d);
        prop::collection::vec(-5i64..5, mons.len())
            .prop_map(move |cs| Poly::from_terms(n, mons.iter().zip(cs).map(|(m, c)| (*m, F::from_i64(c))).collect()))
    }

    proptest! {
        #[test]
        fn ring_axioms_fp(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn ring_axioms_rationals(a in arb_q_poly(2), b in arb_q_poly(2), c in arb_q_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn canonical_form(a in arb_poly(3), b in arb_poly(3)) {
            let p = &a * &b;
            prop_assert!(p.terms().iter().all(|(_, c)| !c.is_zero()));
            prop_assert!(p.terms().windows(2).all(|w| w[0].0.grevlex_cmp(&w[1].0) == Ordering::Greater));
        }

        #[test]
        fn homogeneous_products(a in arb_homogeneous(3, 2), b in arb_homogeneous(3, 1)) {
            let p = &a * &b;
            prop_assert!(p.is_homogeneous());
            if !p.is_zero() {
                prop_assert_eq!(p.total_degree(), Some(3));
            }
        }
    }
}
