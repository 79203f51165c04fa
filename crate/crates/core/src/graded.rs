//! Finitely presented graded modules `M = coker(F1 -> F0)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::{self, SubmoduleGb};
use crate::hilbert_series::{HilbertSeries, Length};
use crate::module::{FreeModule, ModuleMap, Term, Vector};
use crate::poly::Poly;

/// A graded module given by generators (the basis of `F0`) and relations
/// (the columns of the presentation).
#[derive(Clone, Debug)]
pub struct GradedModule<F> {
    presentation: ModuleMap<F>,
    gb: OnceLock<SubmoduleGb<F>>,
}

/// Hashable canonical form: twists plus the reduced basis of the relations.
pub type ModuleKey<F> = (usize, Vec<i32>, Vec<Vector<F>>);

impl<F: Field> GradedModule<F> {
    pub fn new(presentation: ModuleMap<F>) -> Self {
        GradedModule { presentation, gb: OnceLock::new() }
    }

    /// `F0 / <relations>`; zero relations are dropped.
    pub fn from_relations(f0: &FreeModule, relations: Vec<Vector<F>>) -> Result<Self> {
        let relations: Vec<Vector<F>> = relations.into_iter().filter(|v| !v.is_zero()).collect();
        let f0 = FreeModule::new(f0.nvars(), f0.twists().to_vec());
        Ok(Self::new(ModuleMap::from_columns(f0, relations)?))
    }

    /// `F0 / N` from a Gröbner basis, reusing it as the cached basis.
    pub fn from_gb(n: SubmoduleGb<F>) -> Result<Self> {
        let m = Self::from_relations(n.ambient(), n.basis().to_vec())?;
        if n.ambient().order() == Default::default() {
            let _ = m.gb.set(n);
        }
        Ok(m)
    }

    /// The free module `⊕ S(-twist)`.
    pub fn free(nvars: usize, twists: Vec<i32>) -> Self {
        let f0 = FreeModule::new(nvars, twists);
        Self::new(ModuleMap::new(FreeModule::new(nvars, Vec::new()), f0, Vec::new()).expect("empty map"))
    }

    /// `S / I`.
    pub fn cyclic(nvars: usize, ideal: &[Poly<F>]) -> Result<Self> {
        let f0 = FreeModule::ring_rank_one(nvars);
        let rels = ideal.iter().map(|p| f0.from_polys(std::slice::from_ref(p))).collect::<Result<Vec<_>>>()?;
        Self::from_relations(&f0, rels)
    }

    pub fn nvars(&self) -> usize {
        self.presentation.target().nvars()
    }

    pub fn presentation(&self) -> &ModuleMap<F> {
        &self.presentation
    }

    /// The free module of generators `F0`.
    pub fn cover(&self) -> &FreeModule {
        self.presentation.target()
    }

    pub fn relations(&self) -> &[Vector<F>] {
        self.presentation.columns()
    }

    /// Reduced Gröbner basis of the relation module (computed once).
    pub fn gb(&self) -> &SubmoduleGb<F> {
        self.gb.get_or_init(|| {
            SubmoduleGb::new(self.cover(), self.relations().to_vec()).expect("presentation is homogeneous")
        })
    }

    pub fn key(&self) -> ModuleKey<F> {
        (self.nvars(), self.cover().twists().to_vec(), self.gb().basis().to_vec())
    }

    pub fn series(&self) -> HilbertSeries {
        self.gb().quotient_series()
    }

    pub fn is_zero(&self) -> bool {
        self.series().is_zero()
    }

    /// Krull dimension, `None` for the zero module.
    pub fn dim(&self) -> Option<usize> {
        self.series().dim()
    }

    pub fn length(&self) -> Length {
        self.series().length()
    }

    /// Multiplicity with respect to the maximal ideal.
    pub fn degree(&self) -> i64 {
        self.series().multiplicity()
    }

    /// `M / N` where `N` is generated by `extra` in `F0`.
    pub fn quotient_by(&self, extra: &[Vector<F>]) -> Result<Self> {
        let mut rels = self.gb().basis().to_vec();
        rels.extend(extra.iter().cloned());
        Self::from_relations(self.cover(), rels)
    }

    /// `M / I M`.
    pub fn quotient_by_ideal(&self, ideal: &[Poly<F>]) -> Result<Self> {
        Self::from_relations(self.cover(), self.ideal_times_cover(ideal)?)
    }

    /// Generators of `I F0 + relations`.
    pub(crate) fn ideal_times_cover(&self, ideal: &[Poly<F>]) -> Result<Vec<Vector<F>>> {
        let f0 = self.cover();
        let mut rels = self.gb().basis().to_vec();
        for p in ideal {
            if p.nvars() != self.nvars() {
                return Err(Error::RingMismatch("ideal over a different ring".into()));
            }
            if !p.is_homogeneous() {
                return Err(Error::Inhomogeneous("ideal generator".into()));
            }
            for c in 0..f0.rank() {
                rels.push(f0.mul_poly(p, &f0.basis(c)));
            }
        }
        Ok(rels)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.nvars() != other.nvars() {
            return Err(Error::RingMismatch("direct sum over different rings".into()));
        }
        let f0 = self.cover().direct_sum(other.cover());
        let mut rels: Vec<Vector<F>> = self.relations().iter().map(|v| f0.embed(v, 0)).collect();
        rels.extend(other.relations().iter().map(|v| f0.embed(v, self.cover().rank())));
        Self::from_relations(&f0, rels)
    }

    /// Module shifted so that `M(k)_d = M_{k+d}`.
    pub fn twisted(&self, k: i32) -> Result<Self> {
        let f0 = self.cover().shifted(-k);
        Self::from_relations(&f0, self.relations().to_vec())
    }

    /// The submodule generated by `gens ⊂ F0` modulo the relations, given by
    /// its own presentation.
    pub fn submodule(&self, gens: &[Vector<F>]) -> Result<Self> {
        subquotient(self.cover(), gens, self.gb().basis())
    }

    /// Minimal presentation: unit relations are used to eliminate
    /// generators, then the relations are cut down to a minimal set.
    pub fn pruned(&self) -> Result<Self> {
        let mut f0 = FreeModule::new(self.nvars(), self.cover().twists().to_vec());
        let mut rels: Vec<Vector<F>> = self.gb().basis().to_vec();
        loop {
            let unit = rels
                .iter()
                .enumerate()
                .find_map(|(j, r)| r.terms().iter().find(|t| t.mono.is_one()).map(|t| (j, t.comp, t.coef.clone())));
            let Some((j, comp, c)) = unit else { break };
            let pivot = rels.swap_remove(j);
            let inv = c.inv().expect("nonzero");
            let mut next = Vec::with_capacity(rels.len());
            for r in rels {
                let e = f0.entry(&r, comp);
                let mut r2 = r;
                if !e.is_zero() {
                    let factor = e.scale(&-inv.clone());
                    r2 = f0.add(&r2, &f0.mul_poly(&factor, &pivot));
                }
                next.push(r2);
            }
            let map: Vec<Option<usize>> = (0..f0.rank())
                .map(|i| {
                    if i == comp {
                        None
                    } else if i < comp {
                        Some(i)
                    } else {
                        Some(i - 1)
                    }
                })
                .collect();
            let mut twists = f0.twists().to_vec();
            twists.remove(comp);
            let g0 = FreeModule::new(f0.nvars(), twists);
            rels = next.iter().map(|r| g0.reindex(r, &map)).filter(|r| !r.is_zero()).collect();
            f0 = g0;
        }
        let gb = SubmoduleGb::new(&f0, rels)?;
        let minimal = gb::minimal_generators(&f0, gb.basis())?;
        let m = Self::from_relations(&f0, minimal)?;
        let _ = m.gb.set(gb);
        Ok(m)
    }

    /// Annihilator ideal generators.
    pub fn annihilator(&self) -> Result<Vec<Poly<F>>> {
        Ok(gb::ideal_generators(&gb::annihilator(self.gb())?))
    }

    /// Presentation of `(0 :_M I)` as a module in its own right.
    pub fn colon_submodule(&self, ideal: &[Poly<F>]) -> Result<Self> {
        let c = gb::colon_ideal(self.gb(), ideal)?;
        self.submodule(c.basis())
    }

    /// `H^0_m(M)` via saturation by the maximal ideal.
    pub fn zeroth_local_cohomology(&self) -> Result<(Self, SubmoduleGb<F>)> {
        let vars: Vec<Poly<F>> = (0..self.nvars()).map(|i| Poly::var(self.nvars(), i)).collect();
        let sat = saturate(self.gb(), &vars)?;
        Ok((self.submodule(sat.basis())?, sat))
    }

    /// Render relations as polynomial rows for diagnostics.
    pub fn describe(&self, names: &[String]) -> String {
        let f0 = self.cover();
        let rows: Vec<String> = self
            .relations()
            .iter()
            .map(|r| {
                let ps = f0.to_polys(r);
                format!("[{}]", ps.iter().map(|p| crate::poly::format_poly(p, names)).collect::<Vec<_>>().join(", "))
            })
            .collect();
        format!("twists {:?}, relations {}", f0.twists(), rows.join(" "))
    }
}

/// `<gens> / (<gens> ∩ B)` where `b` is a Gröbner basis in `ambient`.
pub fn subquotient<F: Field>(ambient: &FreeModule, gens: &[Vector<F>], b: &[Vector<F>]) -> Result<GradedModule<F>> {
    let gens: Vec<Vector<F>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut twists = Vec::with_capacity(gens.len());
    for g in &gens {
        let d = ambient.degree(g)?.expect("nonzero");
        twists.push(i32::try_from(d).map_err(|_| Error::Internal("degree overflow".into()))?);
    }
    let source = FreeModule::new(ambient.nvars(), twists);
    let ker = gb::kernel_of_map(&source, &gens, ambient, b)?;
    GradedModule::from_gb(ker)
}

/// `N :_F I^∞`.
pub fn saturate<F: Field>(n: &SubmoduleGb<F>, ideal: &[Poly<F>]) -> Result<SubmoduleGb<F>> {
    let mut cur = n.clone();
    loop {
        let next = gb::colon_ideal(&cur, ideal)?;
        if next.quotient_series() == cur.quotient_series() {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Product of two ideals, minimally generated.
pub fn ideal_product<F: Field>(a: &[Poly<F>], b: &[Poly<F>]) -> Result<Vec<Poly<F>>> {
    let Some(first) = a.first().or(b.first()) else { return Ok(Vec::new()) };
    let n = first.nvars();
    let f0 = FreeModule::ring_rank_one(n);
    let mut gens = Vec::new();
    for p in a {
        for q in b {
            let pq = p.try_mul(q)?;
            if !pq.is_zero() {
                gens.push(f0.from_polys(&[pq])?);
            }
        }
    }
    let min = gb::minimal_generators(&f0, &gens)?;
    Ok(min.iter().map(|v| f0.entry(v, 0)).collect())
}

/// Build a vector of `fm` from `(poly, component)` pairs.
pub fn vector_from<F: Field>(fm: &FreeModule, entries: &[(Poly<F>, usize)]) -> Vector<F> {
    let mut terms = Vec::new();
    for (p, c) in entries {
        for (m, coef) in p.terms() {
            terms.push(Term { mono: *m, comp: *c, coef: coef.clone() });
        }
    }
    fm.from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::poly::PolyRing;

    type F = Fp<32003>;

    fn cyc(names: &[&str], gens: &[&str]) -> GradedModule<F> {
        let r = PolyRing::<F>::new(names).unwrap();
        let ps: Vec<Poly<F>> = gens.iter().map(|g| r.parse(g).unwrap()).collect();
        GradedModule::cyclic(r.nvars(), &ps).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(GradedModule::<F>::free(2, vec![0]).dim(), Some(2));
        assert_eq!(cyc(&["x", "y"], &["x^2", "x*y"]).dim(), Some(1));
        assert_eq!(cyc(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]).dim(), Some(2));
        assert_eq!(cyc(&["x", "y"], &["1"]).dim(), None);
    }

    #[test]
    fn lengths() {
        assert_eq!(cyc(&["x", "y"], &["x^2", "x*y", "y^2"]).length(), Length::Finite(3));
        assert_eq!(cyc(&["x", "y"], &["x^2", "y^3"]).length(), Length::Finite(6));
        assert_eq!(GradedModule::<F>::free(2, vec![0]).length(), Length::Infinite);
    }

    #[test]
    fn pruning_removes_unit_relations() {
        let r = PolyRing::<F>::new(&["x", "y"]).unwrap();
        let f0 = FreeModule::new(2, vec![0, 0]);
        // e1 = x e0 is eliminated; the module is S/(y x) after substitution
        let rels = vec![
            f0.from_polys(&[r.parse("x").unwrap(), r.parse("-1").unwrap()]).unwrap(),
            f0.from_polys(&[r.zero(), r.parse("y").unwrap()]).unwrap(),
        ];
        let m = GradedModule::from_relations(&FreeModule::new(2, vec![0, 1]), rels).unwrap();
        let p = m.pruned().unwrap();
        assert_eq!(p.cover().rank(), 1);
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.series(), m.series());
    }

    #[test]
    fn local_cohomology_zero() {
        let m = cyc(&["x", "y"], &["x^2", "x*y"]);
        let (h0, _) = m.zeroth_local_cohomology().unwrap();
        assert_eq!(h0.length(), Length::Finite(1));
        let two_planes = cyc(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        assert!(two_planes.zeroth_local_cohomology().unwrap().0.is_zero());
    }

    #[test]
    fn colon_submodule_length() {
        let m = cyc(&["x", "y"], &["x^2", "x*y"]);
        let r = PolyRing::<F>::new(&["x", "y"]).unwrap();
        let c = m.colon_submodule(&[r.parse("y").unwrap()]).unwrap();
        assert_eq!(c.length(), Length::Finite(1));
    }
}
