//! Hilbert–Samuel functions `λ(M / Q^{n+1} M)` and their coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::SubmoduleGb;
use crate::graded::GradedModule;
use crate::hilbert_series::{binomial, Length};
use crate::poly::Poly;

/// Default bound on the first fitting window.
pub const DEFAULT_MAX_START: usize = 24;

/// Forms `x_1, ..., x_t` with `λ(M / QM) < ∞`.
#[derive(Clone)]
pub struct ParameterIdeal<F> {
    gens: Vec<Poly<F>>,
    colength: u64,
}

impl<F: Field> std::fmt::Debug for ParameterIdeal<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParameterIdeal").field("gens", &self.gens).field("colength", &self.colength).finish()
    }
}

impl<F: Field> ParameterIdeal<F> {
    /// A parameter ideal in the strict sense: as many generators as `dim M`.
    pub fn new(m: &GradedModule<F>, gens: Vec<Poly<F>>) -> Result<Self> {
        let dim = m.dim().unwrap_or(0);
        if gens.len() != dim {
            return Err(Error::NotParameter {
                witness: format!("{} generators for a module of dimension {dim}", gens.len()),
            });
        }
        Self::primary(m, gens)
    }

    /// Any homogeneous ideal with `M / QM` of finite length.
    pub fn primary(m: &GradedModule<F>, gens: Vec<Poly<F>>) -> Result<Self> {
        for g in &gens {
            if g.nvars() != m.nvars() {
                return Err(Error::RingMismatch("ideal generator over a different ring".into()));
            }
            if !g.is_homogeneous() {
                return Err(Error::Inhomogeneous("ideal generator".into()));
            }
            if g.total_degree() == Some(0) {
                return Err(Error::Precondition("ideal generator is a unit".into()));
            }
        }
        let rels = m.ideal_times_cover(&gens)?;
        let gb = SubmoduleGb::new(m.cover(), rels)?;
        if let Some((comp, var)) = gb.infinite_direction() {
            return Err(Error::NotParameter {
                witness: format!("all powers of variable {var} survive on generator {comp}"),
            });
        }
        let colength = gb.quotient_series().length().finite().expect("artinian");
        Ok(ParameterIdeal { gens, colength })
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.total_degree().unwrap_or(0)).collect()
    }

    /// `λ(M / QM)`.
    pub fn colength(&self) -> u64 {
        self.colength
    }
}

/// Values `λ(M / Q^{n+1} M)` for `n = 0..`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HilbertSamuelTable {
    pub values: Vec<u64>,
    pub stabilized: bool,
}

/// Lazily extended Hilbert–Samuel table.
pub struct SamuelSequence<'a, F> {
    module: &'a GradedModule<F>,
    q: &'a [Poly<F>],
    current: Option<SubmoduleGb<F>>,
    values: Vec<u64>,
}

impl<'a, F: Field> SamuelSequence<'a, F> {
    pub fn new(module: &'a GradedModule<F>, q: &'a [Poly<F>]) -> Self {
        SamuelSequence { module, q, current: None, values: Vec::new() }
    }

    fn step(&mut self) -> Result<()> {
        let m = self.module;
        let f0 = m.cover();
        let next = match &self.current {
            None => SubmoduleGb::new(f0, m.ideal_times_cover(self.q)?)?,
            Some(b) => {
                let mut gens = m.gb().basis().to_vec();
                for p in self.q {
                    for g in b.basis() {
                        gens.push(f0.mul_poly(p, g));
                    }
                }
                SubmoduleGb::new(f0, gens)?
            }
        };
        let len = match next.quotient_series().length() {
            Length::Finite(v) => v,
            Length::Infinite => {
                return Err(Error::NotParameter { witness: "M / QM has infinite length".into() });
            }
        };
        self.values.push(len);
        self.current = Some(next);
        Ok(())
    }

    pub fn value(&mut self, n: usize) -> Result<u64> {
        while self.values.len() <= n {
            self.step()?;
        }
        Ok(self.values[n])
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// `λ(M / Q^{n+1} M)` for `n = 0..=n_max`.
pub fn hilbert_samuel<F: Field>(
    m: &GradedModule<F>,
    q: &ParameterIdeal<F>,
    n_max: usize,
) -> Result<HilbertSamuelTable> {
    let mut seq = SamuelSequence::new(m, q.gens());
    seq.value(n_max)?;
    let r = m.dim().unwrap_or(0);
    let stabilized = stabilize(&mut |n| seq_value(&mut seq, n), r, n_max.saturating_sub(r + 2)).is_ok();
    Ok(HilbertSamuelTable { values: seq.values()[..=n_max].to_vec(), stabilized })
}

fn seq_value<F: Field>(seq: &mut SamuelSequence<'_, F>, n: usize) -> Result<i64> {
    Ok(seq.value(n)? as i64)
}

/// Solve `Σ_i (-1)^i e_i binom(n + r - i, r - i) = v(n)` on `n0..=n0+r`.
pub fn fit_window(values: &[i64], r: usize, n0: usize) -> Option<Vec<i64>> {
    let size = r + 1;
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(size);
    for k in 0..size {
        let n = (n0 + k) as i64;
        let mut row: Vec<BigRational> = (0..size)
            .map(|i| {
                let b = binomial(n + (r - i) as i64, (r - i) as i64);
                let s = if i % 2 == 0 { b } else { -b };
                BigRational::from_integer(BigInt::from(s))
            })
            .collect();
        row.push(BigRational::from_integer(BigInt::from(*values.get(n0 + k)?)));
        a.push(row);
    }
    for col in 0..size {
        let piv = (col..size).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = BigRational::one() / a[col][col].clone();
        for v in &mut a[col][col..=size] {
            *v = v.clone() * inv.clone();
        }
        for row in 0..size {
            if row != col && !a[row][col].is_zero() {
                let f = a[row][col].clone();
                let pivot_row = a[col].clone();
                for (c, p) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                    *c = c.clone() - p.clone() * f.clone();
                }
            }
        }
    }
    a.iter().map(|row| if row[size].is_integer() { row[size].to_integer().to_i64() } else { None }).collect()
}

/// Value of the fitted polynomial at `n`.
pub fn eval_fit(e: &[i64], n: i64) -> i64 {
    let r = e.len() as i64 - 1;
    e.iter()
        .enumerate()
        .map(|(i, &c)| {
            let b = binomial(n + r - i as i64, r - i as i64);
            if i % 2 == 0 {
                c * b
            } else {
                -c * b
            }
        })
        .sum()
}

/// Double-window stabilization with one validation point; returns the
/// coefficients and the first index of the accepted window.
pub fn stabilize(value: &mut dyn FnMut(usize) -> Result<i64>, r: usize, max_start: usize) -> Result<(Vec<i64>, usize)> {
    let mut vals: Vec<i64> = Vec::new();
    for n0 in 0..=max_start {
        while vals.len() < n0 + r + 3 {
            vals.push(value(vals.len())?);
        }
        let (Some(a), Some(b)) = (fit_window(&vals, r, n0), fit_window(&vals, r, n0 + 1)) else { continue };
        if a == b && eval_fit(&a, (n0 + r + 2) as i64) == vals[n0 + r + 2] {
            return Ok((a, n0));
        }
    }
    Err(Error::NotStabilized { bound: max_start + r + 2 })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HilbertCoefficients {
    /// `(e_0, ..., e_r)`.
    pub e: Vec<i64>,
    pub r: usize,
    pub stabilized_at: usize,
    pub table: Vec<u64>,
}

impl HilbertCoefficients {
    pub fn e0(&self) -> i64 {
        self.e[0]
    }

    pub fn e1(&self) -> i64 {
        self.e.get(1).copied().unwrap_or(0)
    }

    /// `Σ (-1)^i e_i`.
    pub fn characteristic(&self) -> i64 {
        self.e.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c } else { -c }).sum()
    }
}

pub fn hilbert_coefficients<F: Field>(m: &GradedModule<F>, q: &ParameterIdeal<F>) -> Result<HilbertCoefficients> {
    coefficients_with_bound(m, q.gens(), DEFAULT_MAX_START)
}

/// Coefficients of `λ(M / Q^{n+1} M)` in degree `dim M`, for any ideal of
/// finite colength on `M`.
pub fn coefficients_with_bound<F: Field>(
    m: &GradedModule<F>,
    q: &[Poly<F>],
    max_start: usize,
) -> Result<HilbertCoefficients> {
    let r = m.dim().unwrap_or(0);
    let mut seq = SamuelSequence::new(m, q);
    let (e, n0) = stabilize(&mut |n| seq_value(&mut seq, n), r, max_start)?;
    Ok(HilbertCoefficients { e, r, stabilized_at: n0, table: seq.values().to_vec() })
}

/// Multiplicity `e_0(Q, M)`; zero for the zero module.
pub fn samuel_multiplicity<F: Field>(m: &GradedModule<F>, q: &[Poly<F>]) -> Result<i64> {
    if m.is_zero() {
        return Ok(0);
    }
    Ok(coefficients_with_bound(m, q, DEFAULT_MAX_START)?.e0())
}

/// Outcome of the hyperplane-section rules for a single `h`.
#[derive(Clone, Debug, Serialize)]
pub struct SuperficialReport {
    pub colon_length: Length,
    pub quotient_dim: Option<usize>,
    pub e_module: Vec<i64>,
    pub e_section: Vec<i64>,
    /// `λ(H^0_m(M / hM))`.
    pub section_h0: u64,
    pub identities_hold: bool,
    pub colon_bound_holds: bool,
    pub pass: bool,
}

/// Compare `e_i(Q, M)` with `e_i(Q, M/hM)` and the colon correction in the
/// last coefficient.
pub fn superficial_check<F: Field>(
    m: &GradedModule<F>,
    q: &ParameterIdeal<F>,
    h: &Poly<F>,
) -> Result<SuperficialReport> {
    let r = m.dim().unwrap_or(0);
    let colon = m.colon_submodule(std::slice::from_ref(h))?;
    let colon_length = colon.length();
    let section = m.quotient_by_ideal(std::slice::from_ref(h))?;
    let quotient_dim = section.dim();
    let em = hilbert_coefficients(m, q)?;
    let es = coefficients_with_bound(&section, q.gens(), DEFAULT_MAX_START)?;
    let section_h0 = section.zeroth_local_cohomology()?.0.length().finite().expect("finite");
    let dims_ok = r >= 1 && quotient_dim == Some(r - 1);
    let mut identities_hold = false;
    let mut colon_bound_holds = false;
    if let (true, Length::Finite(c)) = (dims_ok, colon_length) {
        identities_hold = (0..r - 1).all(|i| em.e[i] == es.e[i]) && {
            let sign = if r.is_multiple_of(2) { 1 } else { -1 };
            em.e[r - 1] == es.e[r - 1] + sign * c as i64
        };
        colon_bound_holds = c <= section_h0;
    }
    Ok(SuperficialReport {
        colon_length,
        quotient_dim,
        e_module: em.e,
        e_section: es.e,
        section_h0,
        identities_hold,
        colon_bound_holds,
        pass: identities_hold && colon_bound_holds,
    })
}

/// `|x|` for the integer coefficients used in reports.
pub fn magnitude(v: i64) -> u64 {
    BigInt::from(v).abs().to_u64().expect("fits")
}
