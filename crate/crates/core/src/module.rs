//! Graded free modules, their elements, and homogeneous maps between them.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::poly::Poly;

/// Monomial order on module terms `m * e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Hash)]
pub enum ModuleOrder {
    /// Compare positions first (`e_0 > e_1 > ...`), then grevlex.
    #[default]
    PositionOverTerm,
    /// Compare twisted degree, then grevlex, then position.
    TermOverPosition,
}

/// A single term `coef * mono * e_comp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<F> {
    pub mono: Monomial,
    pub comp: usize,
    pub coef: F,
}

/// An element of a free module: terms sorted strictly descending under the
/// ambient module's order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector<F> {
    terms: Vec<Term<F>>,
}

impl<F: Field> Vector<F> {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn lead(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest component index occurring, if any.
    pub fn max_comp(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.comp).max()
    }

    pub(crate) fn from_sorted(terms: Vec<Term<F>>) -> Self {
        Vector { terms }
    }

    pub(crate) fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }
}

/// A graded free module `⊕ S(-a_i)` over a polynomial ring in `nvars`
/// variables; basis vector `e_i` has degree `twists[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeModule {
    nvars: usize,
    twists: Vec<i32>,
    order: ModuleOrder,
}

impl FreeModule {
    pub fn new(nvars: usize, twists: Vec<i32>) -> Self {
        FreeModule { nvars, twists, order: ModuleOrder::default() }
    }

    pub fn with_order(mut self, order: ModuleOrder) -> Self {
        self.order = order;
        self
    }

    pub fn ring_rank_one(nvars: usize) -> Self {
        Self::new(nvars, vec![0])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    pub fn twist(&self, i: usize) -> i32 {
        self.twists[i]
    }

    pub fn order(&self) -> ModuleOrder {
        self.order
    }

    /// `self ⊕ other`, components of `other` shifted by `self.rank()`.
    pub fn direct_sum(&self, other: &FreeModule) -> FreeModule {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        FreeModule { nvars: self.nvars, twists, order: self.order }
    }

    /// Degree shift: every basis vector's degree increases by `shift`.
    pub fn shifted(&self, shift: i32) -> FreeModule {
        FreeModule { nvars: self.nvars, twists: self.twists.iter().map(|t| t + shift).collect(), order: self.order }
    }

    #[inline]
    pub fn cmp_terms(&self, am: &Monomial, ac: usize, bm: &Monomial, bc: usize) -> Ordering {
        match self.order {
            ModuleOrder::PositionOverTerm => bc.cmp(&ac).then_with(|| am.grevlex_cmp(bm)),
            ModuleOrder::TermOverPosition => {
                let da = am.degree() as i64 + self.twists[ac] as i64;
                let db = bm.degree() as i64 + self.twists[bc] as i64;
                da.cmp(&db).then_with(|| am.grevlex_cmp(bm)).then_with(|| bc.cmp(&ac))
            }
        }
    }

    pub fn basis<F: Field>(&self, i: usize) -> Vector<F> {
        assert!(i < self.rank());
        Vector { terms: vec![Term { mono: Monomial::one(), comp: i, coef: F::one() }] }
    }

    pub fn term<F: Field>(&self, mono: Monomial, comp: usize, coef: F) -> Vector<F> {
        if coef.is_zero() {
            Vector::zero()
        } else {
            Vector { terms: vec![Term { mono, comp, coef }] }
        }
    }

    /// Build from unsorted terms, merging duplicates.
    pub fn from_terms<F: Field>(&self, mut terms: Vec<Term<F>>) -> Vector<F> {
        terms.sort_by(|a, b| self.cmp_terms(&b.mono, b.comp, &a.mono, a.comp));
        let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.mono == t.mono && l.comp == t.comp => l.coef = l.coef.clone() + t.coef,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coef.is_zero());
        Vector { terms: out }
    }

    /// Re-sort a vector built for a module with a different order.
    pub fn resort<F: Field>(&self, v: &Vector<F>) -> Vector<F> {
        self.from_terms(v.terms.clone())
    }

    pub fn from_polys<F: Field>(&self, entries: &[Poly<F>]) -> Result<Vector<F>> {
        if entries.len() != self.rank() {
            return Err(Error::Precondition(format!(
                "vector with {} entries in a free module of rank {}",
                entries.len(),
                self.rank()
            )));
        }
        let mut terms = Vec::new();
        for (comp, p) in entries.iter().enumerate() {
            if p.nvars() != self.nvars {
                return Err(Error::RingMismatch("entry lives in a different ring".into()));
            }
            for (m, c) in p.terms() {
                terms.push(Term { mono: *m, comp, coef: c.clone() });
            }
        }
        Ok(self.from_terms(terms))
    }

    pub fn to_polys<F: Field>(&self, v: &Vector<F>) -> Vec<Poly<F>> {
        let mut buckets: Vec<Vec<(Monomial, F)>> = vec![Vec::new(); self.rank()];
        for t in &v.terms {
            buckets[t.comp].push((t.mono, t.coef.clone()));
        }
        buckets.into_iter().map(|ts| Poly::from_terms(self.nvars, ts)).collect()
    }

    pub fn entry<F: Field>(&self, v: &Vector<F>, comp: usize) -> Poly<F> {
        Poly::from_terms(
            self.nvars,
            v.terms.iter().filter(|t| t.comp == comp).map(|t| (t.mono, t.coef.clone())).collect(),
        )
    }

    /// `a + c * m * b` in one merge.
    pub fn add_scaled<F: Field>(&self, a: &Vector<F>, b: &Vector<F>, c: &F, m: &Monomial) -> Vector<F> {
        self.add_scaled_from(&a.terms, b, c, m)
    }

    pub(crate) fn add_scaled_from<F: Field>(&self, a: &[Term<F>], b: &Vector<F>, c: &F, m: &Monomial) -> Vector<F> {
        let mut out = Vec::with_capacity(a.len() + b.terms.len());
        let mut i = 0;
        let mut j = 0;
        let bt = &b.terms;
        while i < a.len() && j < bt.len() {
            let bm = bt[j].mono.mul(m);
            match self.cmp_terms(&a[i].mono, a[i].comp, &bm, bt[j].comp) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { mono: bm, comp: bt[j].comp, coef: bt[j].coef.clone() * c.clone() });
                    j += 1;
                }
                Ordering::Equal => {
                    let s = a[i].coef.clone() + bt[j].coef.clone() * c.clone();
                    if !s.is_zero() {
                        out.push(Term { mono: bm, comp: bt[j].comp, coef: s });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &bt[j..] {
            out.push(Term { mono: t.mono.mul(m), comp: t.comp, coef: t.coef.clone() * c.clone() });
        }
        Vector { terms: out }
    }

    pub fn add<F: Field>(&self, a: &Vector<F>, b: &Vector<F>) -> Vector<F> {
        self.add_scaled(a, b, &F::one(), &Monomial::one())
    }

    pub fn sub<F: Field>(&self, a: &Vector<F>, b: &Vector<F>) -> Vector<F> {
        self.add_scaled(a, b, &-F::one(), &Monomial::one())
    }

    pub fn scale<F: Field>(&self, v: &Vector<F>, c: &F) -> Vector<F> {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector {
            terms: v
                .terms
                .iter()
                .map(|t| Term { mono: t.mono, comp: t.comp, coef: t.coef.clone() * c.clone() })
                .collect(),
        }
    }

    /// Multiplication by a monomial preserves the order.
    pub fn mul_monomial<F: Field>(&self, v: &Vector<F>, m: &Monomial) -> Vector<F> {
        Vector {
            terms: v.terms.iter().map(|t| Term { mono: t.mono.mul(m), comp: t.comp, coef: t.coef.clone() }).collect(),
        }
    }

    pub fn mul_poly<F: Field>(&self, p: &Poly<F>, v: &Vector<F>) -> Vector<F> {
        let mut acc = Vector::zero();
        for (m, c) in p.terms() {
            acc = self.add_scaled(&acc, v, c, m);
        }
        acc
    }

    pub fn monic<F: Field>(&self, v: &Vector<F>) -> Vector<F> {
        match v.lead() {
            None => Vector::zero(),
            Some(t) => self.scale(v, &t.coef.inv().expect("nonzero lead")),
        }
    }

    /// Degree of a term `m * e_i`.
    pub fn term_degree(&self, m: &Monomial, comp: usize) -> i64 {
        m.degree() as i64 + self.twists[comp] as i64
    }

    /// Common degree of all terms, `None` for zero; error when inhomogeneous.
    pub fn degree<F: Field>(&self, v: &Vector<F>) -> Result<Option<i64>> {
        let mut deg = None;
        for t in &v.terms {
            if t.comp >= self.rank() {
                return Err(Error::RingMismatch(format!("component {} outside rank {}", t.comp, self.rank())));
            }
            let d = self.term_degree(&t.mono, t.comp);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Inhomogeneous(format!("terms of degrees {e} and {d} in one element")))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous<F: Field>(&self, v: &Vector<F>) -> bool {
        self.degree(v).is_ok()
    }

    /// Move a vector of a summand into a direct sum at `offset`.
    pub fn embed<F: Field>(&self, v: &Vector<F>, offset: usize) -> Vector<F> {
        self.from_terms(
            v.terms.iter().map(|t| Term { mono: t.mono, comp: t.comp + offset, coef: t.coef.clone() }).collect(),
        )
    }

    /// Keep components in `range`, renumbered from zero.
    pub fn project<F: Field>(&self, v: &Vector<F>, range: std::ops::Range<usize>) -> Vector<F> {
        self.from_terms(
            v.terms
                .iter()
                .filter(|t| range.contains(&t.comp))
                .map(|t| Term { mono: t.mono, comp: t.comp - range.start, coef: t.coef.clone() })
                .collect(),
        )
    }

    /// Renumber components through `map` (`None` drops the component).
    pub fn reindex<F: Field>(&self, v: &Vector<F>, map: &[Option<usize>]) -> Vector<F> {
        self.from_terms(
            v.terms
                .iter()
                .filter_map(|t| map[t.comp].map(|c| Term { mono: t.mono, comp: c, coef: t.coef.clone() }))
                .collect(),
        )
    }
}

/// A homogeneous map of graded free modules, stored by columns: column `j`
/// is the image of the `j`-th basis vector of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap<F> {
    source: FreeModule,
    target: FreeModule,
    columns: Vec<Vector<F>>,
}

impl<F: Field> ModuleMap<F> {
    pub fn new(source: FreeModule, target: FreeModule, columns: Vec<Vector<F>>) -> Result<Self> {
        if columns.len() != source.rank() {
            return Err(Error::Precondition(format!(
                "{} columns for a source of rank {}",
                columns.len(),
                source.rank()
            )));
        }
        if source.nvars() != target.nvars() {
            return Err(Error::RingMismatch("source and target over different rings".into()));
        }
        for (j, col) in columns.iter().enumerate() {
            if let Some(d) = target.degree(col)? {
                if d != source.twist(j) as i64 {
                    return Err(Error::Inhomogeneous(format!(
                        "column {j} has degree {d} but its source generator has degree {}",
                        source.twist(j)
                    )));
                }
            }
        }
        let columns = columns.iter().map(|c| target.resort(c)).collect();
        Ok(ModuleMap { source, target, columns })
    }

    /// Map whose source twists are read off the (nonzero) columns.
    pub fn from_columns(target: FreeModule, columns: Vec<Vector<F>>) -> Result<Self> {
        let mut twists = Vec::with_capacity(columns.len());
        for c in &columns {
            match target.degree(c)? {
                Some(d) => twists.push(i32::try_from(d).map_err(|_| Error::Internal("degree overflow".into()))?),
                None => {
                    return Err(Error::Precondition("zero column needs an explicit source twist".into()));
                }
            }
        }
        Self::new(FreeModule::new(target.nvars(), twists), target, columns)
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn columns(&self) -> &[Vector<F>] {
        &self.columns
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly<F> {
        self.target.entry(&self.columns[j], i)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, v: &Vector<F>) -> Vector<F> {
        let mut acc = Vector::zero();
        for (j, p) in self.source.to_polys(v).iter().enumerate() {
            if !p.is_zero() {
                acc = self.target.add(&acc, &self.target.mul_poly(p, &self.columns[j]));
            }
        }
        acc
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap<F>) -> Result<ModuleMap<F>> {
        if other.source.twists() != self.target.twists() {
            return Err(Error::RingMismatch("composition of incompatible maps".into()));
        }
        let cols = self.columns.iter().map(|c| other.apply(c)).collect();
        ModuleMap::new(self.source.clone(), other.target.clone(), cols)
    }

    /// The dual map `Hom(target, S) -> Hom(source, S)`.
    pub fn transpose(&self) -> ModuleMap<F> {
        let new_source = FreeModule::new(self.source.nvars(), self.target.twists().iter().map(|t| -t).collect());
        let new_target = FreeModule::new(self.source.nvars(), self.source.twists().iter().map(|t| -t).collect());
        let mut cols: Vec<Vec<Term<F>>> = vec![Vec::new(); self.target.rank()];
        for (j, col) in self.columns.iter().enumerate() {
            for t in col.terms() {
                cols[t.comp].push(Term { mono: t.mono, comp: j, coef: t.coef.clone() });
            }
        }
        let columns = cols.into_iter().map(|ts| new_target.from_terms(ts)).collect();
        ModuleMap { source: new_source, target: new_target, columns }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::poly::PolyRing;

    type F = Fp<32003>;

    #[test]
    fn pot_and_top_orders() {
        let fm = FreeModule::new(2, vec![0, 3]);
        let x = Monomial::var(0);
        let one = Monomial::one();
        assert_eq!(fm.cmp_terms(&one, 0, &x, 1), Ordering::Greater);
        let top = fm.clone().with_order(ModuleOrder::TermOverPosition);
        assert_eq!(top.cmp_terms(&one, 0, &x, 1), Ordering::Less);
    }

    #[test]
    fn homogeneity_check() {
        let r: PolyRing<F> = PolyRing::new(&["x", "y"]).unwrap();
        let fm = FreeModule::new(2, vec![0, 1]);
        let v = fm.from_polys(&[r.parse("x^2").unwrap(), r.parse("y").unwrap()]).unwrap();
        assert_eq!(fm.degree(&v).unwrap(), Some(2));
        let w = fm.from_polys(&[r.parse("x").unwrap(), r.parse("y").unwrap()]).unwrap();
        assert!(matches!(fm.degree(&w), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn transpose_and_compose() {
        let r: PolyRing<F> = PolyRing::new(&["x", "y"]).unwrap();
        let target = FreeModule::new(2, vec![0]);
        let col = |s: &str| target.from_polys(&[r.parse(s).unwrap()]).unwrap();
        let f = ModuleMap::from_columns(target.clone(), vec![col("x"), col("y")]).unwrap();
        let src = f.source().clone();
        let k = ModuleMap::from_columns(
            src.clone(),
            vec![src.from_polys(&[r.parse("y").unwrap(), r.parse("-x").unwrap()]).unwrap()],
        )
        .unwrap();
        assert!(k.then(&f).unwrap().is_zero());
        let ft = f.transpose();
        assert_eq!(ft.source().twists(), &[0]);
        assert_eq!(ft.target().twists(), &[-1, -1]);
        assert_eq!(ft.entry(1, 0), r.parse("y").unwrap());
    }
}
