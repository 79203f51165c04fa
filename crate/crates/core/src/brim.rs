//! Buchsbaum–Rim functions `λ(F^n / E^n)` for a submodule `E ⊆ F = R^r`
//! of finite colength, computed inside `R[T_1, ..., T_r]`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::{SubmoduleGb, Truncation};
use crate::graded::GradedModule;
use crate::hilbert::{stabilize, DEFAULT_MAX_START};
use crate::hilbert_series::{binomial, HilbertSeries, Length};
use crate::homology::local_cohomology_lengths;
use crate::module::FreeModule;
use crate::monomial::{monomials_of_degree, Monomial, MAX_VARS};
use crate::poly::Poly;

/// `E = im(φ: R^m -> R^r)` over `R = S / I`.
#[derive(Clone)]
pub struct ParameterModule<F> {
    nvars: usize,
    ideal: Vec<Poly<F>>,
    columns: Vec<Vec<Poly<F>>>,
    rank: usize,
    dim: usize,
    colength: u64,
}

impl<F: Field> std::fmt::Debug for ParameterModule<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParameterModule")
            .field("rank", &self.rank)
            .field("gens", &self.columns.len())
            .field("dim", &self.dim)
            .field("colength", &self.colength)
            .finish()
    }
}

impl<F: Field> ParameterModule<F> {
    /// `columns[j][i] = φ_ij`; each column homogeneous of positive degree.
    pub fn new(nvars: usize, ideal: Vec<Poly<F>>, rank: usize, columns: Vec<Vec<Poly<F>>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Precondition("rank zero ambient".into()));
        }
        if nvars + rank > MAX_VARS {
            return Err(Error::Precondition(format!("{nvars} variables and rank {rank} exceed {MAX_VARS}")));
        }
        for p in &ideal {
            if p.nvars() != nvars {
                return Err(Error::RingMismatch("ring ideal generator".into()));
            }
            if !p.is_homogeneous() {
                return Err(Error::Inhomogeneous("ring ideal generator".into()));
            }
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rank {
                return Err(Error::Precondition(format!("column {j} has {} entries, expected {rank}", col.len())));
            }
            let mut deg = None;
            for p in col.iter().filter(|p| !p.is_zero()) {
                if p.nvars() != nvars {
                    return Err(Error::RingMismatch(format!("entry of column {j}")));
                }
                let d = p.total_degree().expect("nonzero");
                if !p.is_homogeneous() || deg.is_some_and(|e| e != d) {
                    return Err(Error::Inhomogeneous(format!("column {j}")));
                }
                if d == 0 {
                    return Err(Error::Precondition(format!("column {j} has a unit entry")));
                }
                deg = Some(d);
            }
            if deg.is_none() {
                return Err(Error::Precondition(format!("column {j} is zero")));
            }
        }
        let ring = GradedModule::cyclic(nvars, &ideal)?;
        let dim = ring.dim().ok_or_else(|| Error::Precondition("zero ring".into()))?;
        let mut pm = ParameterModule { nvars, ideal, columns, rank, dim, colength: 0 };
        pm.colength = pm.value(1).map_err(|e| match e {
            Error::InfiniteLength(_) => Error::NotParameter { witness: "F/E has infinite length".into() },
            e => e,
        })?;
        Ok(pm)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens_count(&self) -> usize {
        self.columns.len()
    }

    /// `d = dim R`.
    pub fn ring_dim(&self) -> usize {
        self.dim
    }

    pub fn colength(&self) -> u64 {
        self.colength
    }

    pub fn ideal(&self) -> &[Poly<F>] {
        &self.ideal
    }

    pub fn columns(&self) -> &[Vec<Poly<F>>] {
        &self.columns
    }

    /// `m = d + r - 1`.
    pub fn is_parameter(&self) -> bool {
        self.columns.len() == self.dim + self.rank - 1
    }

    /// Degree of the Buchsbaum–Rim polynomial.
    pub fn poly_degree(&self) -> usize {
        self.dim + self.rank - 1
    }

    fn total_vars(&self) -> usize {
        self.nvars + self.rank
    }

    fn lift(&self, p: &Poly<F>) -> Poly<F> {
        Poly::from_terms(self.total_vars(), p.terms().to_vec())
    }

    /// `g_j = Σ_i φ_ij T_i`.
    fn linear_forms(&self) -> Vec<Poly<F>> {
        let nv = self.total_vars();
        self.columns
            .iter()
            .map(|col| {
                let mut g = Poly::zero(nv);
                for (i, p) in col.iter().enumerate() {
                    let t = Monomial::var(self.nvars + i);
                    g = g.try_add(&self.lift(p).mul_monomial(&t)).expect("same ring");
                }
                g
            })
            .collect()
    }

    fn t_monomials(&self, n: u32) -> Vec<Monomial> {
        monomials_of_degree(self.rank, n)
            .into_iter()
            .map(|m| {
                let mut e = vec![0u32; self.nvars];
                e.extend(m.iter(self.rank));
                Monomial::from_exponents(&e)
            })
            .collect()
    }

    /// `λ(F^n / E^n)`.
    pub fn value(&self, n: u32) -> Result<u64> {
        let g = self.linear_forms();
        let nv = self.total_vars();
        let mut gens: Vec<Poly<F>> = Vec::new();
        for alpha in monomials_of_degree(g.len(), n) {
            let mut p = Poly::one(nv);
            for (j, e) in alpha.iter(g.len()).enumerate() {
                if e > 0 {
                    p = p.try_mul(&g[j].pow(e))?;
                }
            }
            if !p.is_zero() {
                gens.push(p);
            }
        }
        self.component_length(gens, n)
    }

    /// `λ(F^n / E F^{n-1})`, the degree `n` part of the cokernel of `φ`
    /// in the symmetric algebra.
    pub fn symmetric_value(&self, n: u32) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        let mut gens = Vec::new();
        for g in self.linear_forms() {
            for tau in self.t_monomials(n - 1) {
                gens.push(g.mul_monomial(&tau));
            }
        }
        self.component_length(gens, n)
    }

    fn component_length(&self, mut gens: Vec<Poly<F>>, n: u32) -> Result<u64> {
        let nv = self.total_vars();
        let taus = self.t_monomials(n);
        for f in &self.ideal {
            let lf = self.lift(f);
            for tau in &taus {
                gens.push(lf.mul_monomial(tau));
            }
        }
        let fm = FreeModule::ring_rank_one(nv);
        let vecs = gens.iter().map(|p| fm.from_polys(std::slice::from_ref(p))).collect::<Result<Vec<_>>>()?;
        let mut weights = vec![0u32; self.nvars];
        weights.extend(std::iter::repeat_n(1, self.rank));
        let gb = SubmoduleGb::truncated(&fm, vecs, Truncation::Weighted { weights, bound: n })?;
        let mut by_tau: HashMap<Monomial, Vec<Monomial>> = HashMap::new();
        for lead in gb.leading_monomials().into_iter().flatten() {
            let t = lead.restrict(self.nvars..nv);
            if t.degree() == n {
                by_tau.entry(t).or_default().push(lead.restrict(0..self.nvars));
            }
        }
        let mut total = 0u64;
        for tau in &taus {
            let lts = by_tau.get(tau).map(Vec::as_slice).unwrap_or(&[]);
            match HilbertSeries::from_components(self.nvars, [(0, lts)]).length() {
                Length::Finite(v) => total += v,
                Length::Infinite => {
                    return Err(Error::InfiniteLength(format!("F^{n}/E^{n} has infinite length")));
                }
            }
        }
        Ok(total)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BrReport {
    /// `λ(F^n / E^n)` for `n = 0..`.
    pub table: Vec<u64>,
    pub degree: usize,
    pub br: i64,
    pub br1: i64,
    pub coefficients: Vec<i64>,
    pub stabilized_at: usize,
    pub is_parameter: bool,
    /// `λ(F^n/E^n) = br binom(n+D-1, D)` for some `n >= 1`.
    pub equality_case: bool,
    /// The same equality for every computed `n`.
    pub equality_everywhere: bool,
    /// `λ(F^n/E^n) >= br binom(n+D-1, D)` for every computed `n`.
    pub lower_bound_holds: bool,
}

impl BrReport {
    /// `br1 <= 0` for parameter modules; the equality case forces `br1 = 0`.
    pub fn consistent(&self) -> bool {
        if !self.is_parameter {
            return true;
        }
        self.br >= 1
            && self.br1 <= 0
            && self.lower_bound_holds
            && (!self.equality_case || (self.equality_everywhere && self.br1 == 0))
    }
}

/// `λ(F^n/E^n)` for `n = 0..=n_max`.
pub fn br_table<F: Field>(e: &ParameterModule<F>, n_max: usize) -> Result<Vec<u64>> {
    (0..=n_max as u32).into_par_iter().map(|n| e.value(n)).collect()
}

pub fn br_coefficients<F: Field>(e: &ParameterModule<F>) -> Result<BrReport> {
    br_coefficients_with_bound(e, DEFAULT_MAX_START)
}

pub fn br_coefficients_with_bound<F: Field>(e: &ParameterModule<F>, max_start: usize) -> Result<BrReport> {
    let d = e.poly_degree();
    let mut table = br_table(e, d + 4)?;
    let (coefficients, n0) = stabilize(
        &mut |m| {
            while table.len() <= m + 1 {
                table.push(e.value(table.len() as u32)?);
            }
            Ok(table[m + 1] as i64)
        },
        d,
        max_start,
    )?;
    let br = coefficients[0];
    let br1 = coefficients.get(1).copied().unwrap_or(0);
    let lead = |n: usize| br * binomial(n as i64 + d as i64 - 1, d as i64);
    let equality_case = (1..table.len()).any(|n| table[n] as i64 == lead(n));
    let equality_everywhere = (0..table.len()).all(|n| table[n] as i64 == lead(n));
    let lower_bound_holds = (0..table.len()).all(|n| table[n] as i64 >= lead(n));
    Ok(BrReport {
        table,
        degree: d,
        br,
        br1,
        coefficients,
        stabilized_at: n0,
        is_parameter: e.is_parameter(),
        equality_case,
        equality_everywhere,
        lower_bound_holds,
    })
}

/// Evidence for "R Cohen–Macaulay iff R unmixed and br_1 = 0".
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConjectureProbe {
    pub is_cm: bool,
    pub is_unmixed: bool,
    pub br1: i64,
    /// Unmixed, `br_1 = 0` and not Cohen–Macaulay.
    pub alert: bool,
}

pub fn probe_conjecture<F: Field>(e: &ParameterModule<F>) -> Result<ConjectureProbe> {
    let ring = GradedModule::cyclic(e.nvars, &e.ideal)?;
    let profile = local_cohomology_lengths(&ring)?;
    let is_cm = profile.is_cohen_macaulay();
    let is_unmixed = crate::homology::unmixed_from_profile(&ring, &profile)?.0.is_zero();
    let br1 = br_coefficients(e)?.br1;
    Ok(ConjectureProbe { is_cm, is_unmixed, br1, alert: is_unmixed && br1 == 0 && !is_cm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::hilbert::{hilbert_coefficients, ParameterIdeal};
    use crate::poly::PolyRing;

    type F = Fp<32003>;

    fn pm(names: &[&str], ideal: &[&str], rank: usize, cols: &[&[&str]]) -> ParameterModule<F> {
        let r = PolyRing::<F>::new(names).unwrap();
        let i = ideal.iter().map(|s| r.parse(s).unwrap()).collect();
        let c = cols.iter().map(|c| c.iter().map(|s| r.parse(s).unwrap()).collect()).collect();
        ParameterModule::new(r.nvars(), i, rank, c).unwrap()
    }

    #[test]
    fn ideal_case_on_the_line() {
        let e = pm(&["x"], &[], 1, &[&["x"]]);
        assert_eq!(br_table(&e, 5).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        let rep = br_coefficients(&e).unwrap();
        assert_eq!((rep.br, rep.br1), (1, 0));
        let e = pm(&["x"], &[], 1, &[&["x^2"]]);
        let rep = br_coefficients(&e).unwrap();
        assert_eq!(&rep.table[..4], &[0, 2, 4, 6]);
        assert_eq!((rep.br, rep.br1), (2, 0));
    }

    #[test]
    fn scalar_multiple_of_the_free_module() {
        let e = pm(&["x"], &[], 2, &[&["x", "0"], &["0", "x"]]);
        assert!(e.is_parameter());
        let rep = br_coefficients(&e).unwrap();
        for (n, v) in rep.table.iter().enumerate() {
            assert_eq!(*v, (n * (n + 1)) as u64);
        }
        assert_eq!((rep.br, rep.br1, rep.degree), (2, 0, 2));
        assert!(rep.equality_case && rep.equality_everywhere && rep.consistent());
        // the cokernel component differs: F^n / x F^n
        assert_eq!(e.symmetric_value(3).unwrap(), 4);
    }

    #[test]
    fn maximal_ideal_of_the_plane() {
        let e = pm(&["x", "y"], &[], 1, &[&["x"], &["y"]]);
        let rep = br_coefficients(&e).unwrap();
        assert_eq!(&rep.table[..4], &[0, 1, 3, 6]);
        assert_eq!((rep.br, rep.br1), (1, 0));
    }

    #[test]
    fn rank_two_over_the_plane() {
        let e = pm(&["x", "y"], &[], 2, &[&["x", "0"], &["y", "x"], &["0", "y"]]);
        assert!(e.is_parameter());
        let rep = br_coefficients(&e).unwrap();
        assert_eq!(rep.degree, 3);
        assert!(rep.consistent(), "{rep:?}");
        assert_eq!(rep.br1, 0);
    }

    #[test]
    fn two_plane_ring_matches_hilbert_coefficients() {
        let names = ["x", "y", "z", "w"];
        let rels = ["x*z", "x*w", "y*z", "y*w"];
        let e = pm(&names, &rels, 1, &[&["x+z"], &["y+w"]]);
        let rep = br_coefficients(&e).unwrap();
        let r = PolyRing::<F>::new(&names).unwrap();
        let ring = GradedModule::cyclic(4, &rels.iter().map(|s| r.parse(s).unwrap()).collect::<Vec<_>>()).unwrap();
        let q = ParameterIdeal::new(&ring, vec![r.parse("x+z").unwrap(), r.parse("y+w").unwrap()]).unwrap();
        let c = hilbert_coefficients(&ring, &q).unwrap();
        assert_eq!((rep.br, rep.br1), (c.e0(), c.e1()));
        assert_eq!(rep.br1, -1);
        let probe = probe_conjecture(&e).unwrap();
        assert!(probe.is_unmixed && !probe.is_cm && !probe.alert);
    }

    #[test]
    fn infinite_colength_is_rejected() {
        let r = PolyRing::<F>::new(&["x", "y"]).unwrap();
        let err = ParameterModule::new(2, vec![], 1, vec![vec![r.parse("x").unwrap()]]).unwrap_err();
        assert!(matches!(err, Error::NotParameter { .. }));
    }
}
