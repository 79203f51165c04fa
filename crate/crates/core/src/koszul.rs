//! Koszul complexes `K(x; M)` and the lengths of their homology.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::{self, SubmoduleGb};
use crate::graded::GradedModule;
use crate::hilbert::{samuel_multiplicity, ParameterIdeal};
use crate::hilbert_series::Length;
use crate::module::{FreeModule, Vector};
use crate::poly::Poly;

/// `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The Koszul complex on `x` tensored with the cover `F0` of `M`.
pub struct KoszulComplex<'a, F> {
    module: &'a GradedModule<F>,
    x: Vec<Poly<F>>,
    degs: Vec<i32>,
}

impl<'a, F: Field> KoszulComplex<'a, F> {
    pub fn new(module: &'a GradedModule<F>, x: &[Poly<F>]) -> Result<Self> {
        let mut degs = Vec::with_capacity(x.len());
        for p in x {
            if p.is_zero() || !p.is_homogeneous() {
                return Err(Error::Inhomogeneous("Koszul complex needs nonzero forms".into()));
            }
            degs.push(p.total_degree().expect("nonzero") as i32);
        }
        Ok(KoszulComplex { module, x: x.to_vec(), degs })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `K_i(F0) = ⊕_{|σ| = i} F0(-deg x_σ)`; component `s * rank + c`.
    pub fn free(&self, i: usize) -> FreeModule {
        let f0 = self.module.cover();
        let mut twists = Vec::new();
        for s in subsets(self.x.len(), i) {
            let shift: i32 = s.iter().map(|&k| self.degs[k]).sum();
            twists.extend(f0.twists().iter().map(|t| t + shift));
        }
        FreeModule::new(f0.nvars(), twists)
    }

    /// Image of the basis vector `e_σ ⊗ e_c` under `d_i`.
    fn boundary_of(&self, sigma: &[usize], c: usize, target: &FreeModule, lower: &[Vec<usize>]) -> Vector<F> {
        let rank = self.module.cover().rank();
        let mut out = Vector::zero();
        for (pos, &k) in sigma.iter().enumerate() {
            let mut tau = sigma.to_vec();
            tau.remove(pos);
            let t = lower.iter().position(|s| *s == tau).expect("subset present");
            let e = target.basis(t * rank + c);
            let coef = if pos % 2 == 0 { self.x[k].clone() } else { self.x[k].neg() };
            out = target.add(&out, &target.mul_poly(&coef, &e));
        }
        out
    }

    /// Columns of `d_i : K_i -> K_{i-1}`.
    pub fn differential(&self, i: usize) -> Vec<Vector<F>> {
        assert!(i >= 1 && i <= self.x.len());
        let rank = self.module.cover().rank();
        let target = self.free(i - 1);
        let lower = subsets(self.x.len(), i - 1);
        let mut cols = Vec::new();
        for s in subsets(self.x.len(), i) {
            for c in 0..rank {
                cols.push(self.boundary_of(&s, c, &target, &lower));
            }
        }
        cols
    }

    /// `K_i(R)`: the relations of `M` copied into every summand.
    fn relations_in(&self, i: usize) -> Vec<Vector<F>> {
        let fm = self.free(i);
        let rank = self.module.cover().rank();
        let rels = self.module.gb().basis();
        let mut out = Vec::new();
        for t in 0..subsets(self.x.len(), i).len() {
            for r in rels {
                out.push(fm.embed(r, t * rank));
            }
        }
        out
    }

    /// `d_{i-1} ∘ d_i = 0` on the free level.
    pub fn squares_to_zero(&self) -> bool {
        for i in 2..=self.x.len() {
            let hi = self.differential(i);
            let lo = self.differential(i - 1);
            let target = self.free(i - 2);
            let src = self.free(i - 1);
            for col in &hi {
                let mut acc = Vector::zero();
                for (j, p) in src.to_polys(col).iter().enumerate() {
                    if !p.is_zero() {
                        acc = target.add(&acc, &target.mul_poly(p, &lo[j]));
                    }
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// `λ(H_i(x; M))`.
    pub fn homology_length(&self, i: usize) -> Result<Length> {
        let r = self.x.len();
        let fi = self.free(i);
        let rel_i = self.relations_in(i);
        let z = if i == 0 {
            SubmoduleGb::full(&fi)
        } else {
            let target = self.free(i - 1);
            let rel = self.relations_in(i - 1);
            gb::kernel_of_map(&fi, &self.differential(i), &target, &rel)?
        };
        let mut bgens = rel_i;
        if i < r {
            bgens.extend(self.differential(i + 1));
        }
        let b = SubmoduleGb::new(&fi, bgens)?;
        let diff = b.quotient_series().sub(&z.quotient_series());
        Ok(diff.length())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KoszulHomologyReport {
    pub lengths: Vec<u64>,
    /// `Σ (-1)^i λ(H_i)`.
    pub chi: i64,
    /// `Σ_{i >= 1} (-1)^{i-1} λ(H_i)`.
    pub chi1: i64,
}

/// Homology lengths of `K(x; M)`; every homology module must have finite length.
pub fn koszul_lengths<F: Field>(m: &GradedModule<F>, x: &[Poly<F>]) -> Result<KoszulHomologyReport> {
    let k = KoszulComplex::new(m, x)?;
    let mut lengths = Vec::with_capacity(x.len() + 1);
    for i in 0..=x.len() {
        match k.homology_length(i)? {
            Length::Finite(v) => lengths.push(v),
            Length::Infinite => {
                return Err(Error::InfiniteLength(format!("Koszul homology H_{i} is not of finite length")))
            }
        }
    }
    let chi = lengths.iter().enumerate().map(|(i, &l)| if i % 2 == 0 { l as i64 } else { -(l as i64) }).sum();
    let chi1 = lengths.iter().enumerate().skip(1).map(|(i, &l)| if i % 2 == 1 { l as i64 } else { -(l as i64) }).sum();
    Ok(KoszulHomologyReport { lengths, chi, chi1 })
}

pub fn koszul_homology<F: Field>(m: &GradedModule<F>, q: &ParameterIdeal<F>) -> Result<KoszulHomologyReport> {
    koszul_lengths(m, q.gens())
}

/// `χ_1` by Serre's formula `λ(M/QM) - e_0(Q, M)`.
pub fn chi1_serre<F: Field>(m: &GradedModule<F>, q: &ParameterIdeal<F>) -> Result<i64> {
    Ok(q.colength() as i64 - samuel_multiplicity(m, q.gens())?)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Chi1RecursionReport {
    pub chi1: i64,
    pub section: i64,
    pub colon: i64,
    pub holds: bool,
}

/// `χ_1(x; M) = χ_1(x'; M/x_1 M) + χ_1(x'; 0 :_M x_1)`.
pub fn chi1_recursion_check<F: Field>(m: &GradedModule<F>, x: &[Poly<F>]) -> Result<Chi1RecursionReport> {
    if x.len() < 2 {
        return Err(Error::Precondition("the recursion needs at least two parameters".into()));
    }
    let chi1 = koszul_lengths(m, x)?.chi1;
    let section_m = m.quotient_by_ideal(&x[..1])?;
    let colon_m = m.colon_submodule(&x[..1])?;
    let section = koszul_lengths(&section_m, &x[1..])?.chi1;
    let colon = if colon_m.is_zero() { 0 } else { koszul_lengths(&colon_m, &x[1..])?.chi1 };
    Ok(Chi1RecursionReport { chi1, section, colon, holds: chi1 == section + colon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::poly::PolyRing;

    type F = Fp<32003>;

    fn setup(names: &[&str], rels: &[&str]) -> (PolyRing<F>, GradedModule<F>) {
        let r = PolyRing::<F>::new(names).unwrap();
        let ps: Vec<Poly<F>> = rels.iter().map(|g| r.parse(g).unwrap()).collect();
        let m = GradedModule::cyclic(r.nvars(), &ps).unwrap();
        (r, m)
    }

    fn forms(r: &PolyRing<F>, gens: &[&str]) -> Vec<Poly<F>> {
        gens.iter().map(|g| r.parse(g).unwrap()).collect()
    }

    #[test]
    fn subsets_are_ordered() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn differentials_square_to_zero() {
        let (r, m) = setup(&["x", "y", "z"], &["x*y"]);
        let k = KoszulComplex::new(&m, &forms(&r, &["x", "y+z", "z^2"])).unwrap();
        assert!(k.squares_to_zero());
    }

    #[test]
    fn regular_sequence_on_the_plane() {
        let (r, m) = setup(&["x", "y"], &[]);
        let rep = koszul_lengths(&m, &forms(&r, &["x", "y"])).unwrap();
        assert_eq!(rep.lengths, vec![1, 0, 0]);
        assert_eq!(rep.chi1, 0);
    }

    #[test]
    fn embedded_point_line() {
        let (r, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        let rep = koszul_lengths(&m, &forms(&r, &["y"])).unwrap();
        assert_eq!(rep.lengths, vec![2, 1]);
        assert_eq!(rep.chi1, 1);
        let q = ParameterIdeal::new(&m, forms(&r, &["y"])).unwrap();
        assert_eq!(chi1_serre(&m, &q).unwrap(), 1);
    }

    #[test]
    fn two_planes() {
        let (r, m) = setup(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        let x = forms(&r, &["x+z", "y+w"]);
        let rep = koszul_lengths(&m, &x).unwrap();
        assert_eq!(rep.lengths[0], 3);
        assert_eq!(rep.chi1, 1);
        let q = ParameterIdeal::new(&m, x.clone()).unwrap();
        assert_eq!(chi1_serre(&m, &q).unwrap(), 1);
        let rec = chi1_recursion_check(&m, &x).unwrap();
        assert!(rec.holds, "{rec:?}");
    }

    #[test]
    fn free_module_recursion() {
        let (r, m) = setup(&["x", "y"], &[]);
        let rec = chi1_recursion_check(&m, &forms(&r, &["x", "y"])).unwrap();
        assert_eq!((rec.chi1, rec.section, rec.colon), (0, 0, 0));
    }
}
