//! Exponent vectors and the graded reverse lexicographic order.

use std::cmp::Ordering;
use std::fmt;

/// Upper bound on the number of ring variables.
pub const MAX_VARS: usize = 16;

/// A monomial `x_0^e_0 ... x_{n-1}^e_{n-1}` with its total degree cached.
///
/// Unused trailing slots are always zero, so two monomials from rings with
/// different variable counts still compare consistently.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "variable index {i} exceeds MAX_VARS");
        let mut m = Monomial::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u16::try_from(e).expect("exponent overflow");
            m.deg += e;
        }
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Number of variables actually occurring.
    pub fn support_len(&self) -> usize {
        self.exps.iter().filter(|&&e| e > 0).count()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        weights.iter().zip(self.exps.iter()).map(|(&w, &e)| w * e as u32).sum()
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = out.exps[i].checked_add(other.exps[i]).expect("exponent overflow");
        }
        out.deg += other.deg;
        out
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let mut out = Monomial::one();
        for i in 0..MAX_VARS {
            let e = self.exps[i] as u32 * k;
            out.exps[i] = u16::try_from(e).expect("exponent overflow");
        }
        out.deg = self.deg * k;
        out
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = *other;
        for i in 0..MAX_VARS {
            out.exps[i] -= self.exps[i];
        }
        out.deg -= self.deg;
        Some(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::one();
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            out.deg += out.exps[i] as u32;
        }
        out
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::one();
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].min(other.exps[i]);
            out.deg += out.exps[i] as u32;
        }
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Colon `self : other`, i.e. `self / gcd(self, other)`.
    pub fn colon(&self, other: &Monomial) -> Monomial {
        let g = self.gcd(other);
        g.quotient_of(self).expect("gcd divides")
    }

    /// Graded reverse lexicographic comparison.
    #[inline]
    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..MAX_VARS).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                // smaller exponent in the last differing variable wins
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }

    /// Restrict to the variables `range`, zeroing the rest.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Monomial {
        let mut out = Monomial::one();
        for i in range {
            out.exps[i] = self.exps[i];
            out.deg += self.exps[i] as u32;
        }
        out
    }

    /// Iterate over the first `nvars` exponents.
    pub fn iter(&self, nvars: usize) -> impl Iterator<Item = u32> + '_ {
        self.exps[..nvars].iter().map(|&e| e as u32)
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate() {
            match self.exps[i] {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// All monomials of total degree `deg` in `nvars` variables, in descending
/// grevlex order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if n == 0 {
            if left == 0 {
                out.push(Monomial::one());
            }
            return;
        }
        if i == n - 1 {
            exps[i] = left;
            out.push(Monomial::from_exponents(exps));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    rec(0, deg, &mut exps, &mut out);
    out.sort_by(|a, b| b.grevlex_cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        // x > y > z among linear forms
        assert_eq!(m(&[1, 0, 0]).grevlex_cmp(&m(&[0, 1, 0])), Ordering::Greater);
        // xz < y^2 in grevlex
        assert_eq!(m(&[1, 0, 1]).grevlex_cmp(&m(&[0, 2, 0])), Ordering::Less);
        // degree dominates
        assert_eq!(m(&[0, 0, 2]).grevlex_cmp(&m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(a.gcd(&b), m(&[1, 1]));
        assert!(m(&[1, 1]).divides(&a));
        assert_eq!(m(&[1, 1]).quotient_of(&a), Some(m(&[1, 0])));
        assert_eq!(b.quotient_of(&a), None);
        assert_eq!(a.colon(&b), m(&[1, 0]));
    }

    #[test]
    fn degree_enumeration() {
        let mons = monomials_of_degree(3, 2);
        assert_eq!(mons.len(), 6);
        assert!(mons.windows(2).all(|w| w[0].grevlex_cmp(&w[1]) == Ordering::Greater));
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial::one()]);
    }

    #[test]
    fn multiplicative_compatibility() {
        let mons = monomials_of_degree(3, 3);
        let t = m(&[0, 1, 2]);
        for a in &mons {
            for b in &mons {
                assert_eq!(a.grevlex_cmp(b), a.mul(&t).grevlex_cmp(&b.mul(&t)));
            }
        }
    }
}
