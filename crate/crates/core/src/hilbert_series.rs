//! Hilbert series of monomial quotients `F / in(N)`.
//!
//! A series is stored as `t^shift * num(t) / (1 - t)^nvars` with an integer
//! numerator. Dimension, multiplicity and finite lengths all fall out of the
//! numerator's behavior at `t = 1`.

use crate::monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    nvars: usize,
    shift: i64,
    num: Vec<i64>,
}

/// Length of a module that may have positive dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<u64> {
        match self {
            Length::Finite(v) => Some(v),
            Length::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Length::Finite(_))
    }
}

fn trim(shift: &mut i64, num: &mut Vec<i64>) {
    while num.last() == Some(&0) {
        num.pop();
    }
    let lead = num.iter().take_while(|&&c| c == 0).count();
    if lead == num.len() {
        num.clear();
        *shift = 0;
        return;
    }
    if lead > 0 {
        num.drain(..lead);
        *shift += lead as i64;
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_shifted(acc: &mut Vec<i64>, p: &[i64], shift: usize, sign: i64) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (i, &c) in p.iter().enumerate() {
        acc[i + shift] += sign * c;
    }
}

/// Remove monomials divisible by another generator; sort for determinism.
fn minimalize(gens: &mut Vec<Monomial>) {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then(b.grevlex_cmp(a)));
    gens.dedup();
    let mut keep: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens.iter() {
        if !keep.iter().any(|k| k.divides(g)) {
            keep.push(*g);
        }
    }
    *gens = keep;
}

/// Numerator `N(t)` with `HS(S/L) = N(t) / (1-t)^n` for the monomial ideal `L`.
pub fn monomial_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut g = gens.to_vec();
    numerator_rec(&mut g)
}

fn numerator_rec(gens: &mut Vec<Monomial>) -> Vec<i64> {
    minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new();
    }
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut acc = vec![1i64];
        for g in gens.iter() {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    // pivot on the variable shared by the most generators
    let mut best = (0usize, 0usize);
    for v in 0..crate::monomial::MAX_VARS {
        let count = gens.iter().filter(|g| g.exp(v) > 0).count();
        if count > best.1 {
            best = (v, count);
        }
    }
    let v = best.0;
    let mut exps: Vec<u32> = gens.iter().filter(|g| g.exp(v) > 0 && g.support_len() > 1).map(|g| g.exp(v)).collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];
    let pivot = Monomial::var(v).pow(e);

    let mut with_pivot = gens.clone();
    with_pivot.push(pivot);
    let mut colon: Vec<Monomial> = gens.iter().map(|g| g.colon(&pivot)).collect();

    let mut acc = numerator_rec(&mut with_pivot);
    let rest = numerator_rec(&mut colon);
    add_shifted(&mut acc, &rest, e as usize, 1);
    acc
}

impl HilbertSeries {
    pub fn zero(nvars: usize) -> Self {
        HilbertSeries { nvars, shift: 0, num: Vec::new() }
    }

    /// Series of the free module `⊕ S(-twist)` modulo monomial submodules,
    /// given per component as `(twist, leading monomials)`.
    pub fn from_components<'a, I>(nvars: usize, comps: I) -> Self
    where
        I: IntoIterator<Item = (i32, &'a [Monomial])>,
    {
        let mut out = HilbertSeries::zero(nvars);
        for (twist, lts) in comps {
            let num = monomial_numerator(lts);
            let mut shift = twist as i64;
            let mut num = num;
            trim(&mut shift, &mut num);
            out = out.add(&HilbertSeries { nvars, shift, num });
        }
        out
    }

    /// Numerator coefficients of `t^shift · num(t) / (1 - t)^nvars`.
    pub fn numerator(&self) -> &[i64] {
        &self.num
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        assert_eq!(self.nvars, other.nvars, "series over different rings");
        if self.is_zero() {
            let mut o = other.clone();
            o.num.iter_mut().for_each(|c| *c *= sign);
            return o;
        }
        if other.is_zero() {
            return self.clone();
        }
        let shift = self.shift.min(other.shift);
        let mut num = Vec::new();
        add_shifted(&mut num, &self.num, (self.shift - shift) as usize, 1);
        add_shifted(&mut num, &other.num, (other.shift - shift) as usize, sign);
        let mut shift = shift;
        trim(&mut shift, &mut num);
        HilbertSeries { nvars: self.nvars, shift, num }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    /// Multiply by `t^k`.
    pub fn shifted(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.shift += k;
        }
        out
    }

    /// `(dimension, h)` with `HS = t^shift h(t) / (1-t)^dimension`, `h(1) != 0`.
    fn reduce(&self) -> Option<(usize, Vec<i64>)> {
        if self.is_zero() {
            return None;
        }
        let mut h = self.num.clone();
        let mut dim = self.nvars;
        while dim > 0 {
            let total: i64 = h.iter().sum();
            if total != 0 {
                break;
            }
            // divide by (1 - t): quotient coefficients are prefix sums
            let mut q = Vec::with_capacity(h.len().saturating_sub(1));
            let mut run = 0i64;
            for &c in &h[..h.len() - 1] {
                run += c;
                q.push(run);
            }
            h = q;
            dim -= 1;
        }
        Some((dim, h))
    }

    /// Krull dimension; `None` for the zero module.
    pub fn dim(&self) -> Option<usize> {
        self.reduce().map(|(d, _)| d)
    }

    /// Leading coefficient of the Hilbert polynomial times `(dim-1)!`, or the
    /// length in dimension zero.
    pub fn multiplicity(&self) -> i64 {
        self.reduce().map_or(0, |(_, h)| h.iter().sum())
    }

    /// Length of a finite-length module; `Infinite` in positive dimension.
    pub fn length(&self) -> Length {
        match self.reduce() {
            None => Length::Finite(0),
            Some((0, h)) => {
                let s: i64 = h.iter().sum();
                Length::Finite(u64::try_from(s).expect("lengths are nonnegative"))
            }
            Some(_) => Length::Infinite,
        }
    }

    /// Value of the Hilbert function in degree `deg`.
    pub fn value(&self, deg: i64) -> i64 {
        let n = self.nvars as i64;
        let mut total = 0i64;
        for (k, &c) in self.num.iter().enumerate() {
            let d = deg - self.shift - k as i64;
            if d < 0 || c == 0 {
                continue;
            }
            total += c * binomial(d + n - 1, n - 1);
        }
        total
    }

    /// Smallest degree with a possibly nonzero value.
    pub fn initial_degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.shift)
        }
    }
}

/// `binom(n, k)` with the convention `0` outside `0 <= k <= n` for `n >= 0`;
/// negative upper arguments follow the polynomial extension.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    if k == 0 {
        return 1;
    }
    if n >= 0 && k > n {
        return 0;
    }
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k {
        num *= (n - i) as i128;
        den *= (i + 1) as i128;
    }
    (num / den) as i64
}
