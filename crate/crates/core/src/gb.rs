//! Buchberger's algorithm for homogeneous submodules of graded free modules,
//! together with the constructions built on it: normal forms, syzygies,
//! kernels, images, colons and minimal generators.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hilbert_series::HilbertSeries;
use crate::module::{FreeModule, ModuleMap, Term, Vector};
use crate::monomial::Monomial;
use crate::poly::Poly;

/// Optional bound on the S-pairs and generators processed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Truncation {
    #[default]
    None,
    /// Only degrees `<= bound` (twists included).
    Degree(i64),
    /// Only leading monomials of weighted degree `<= bound`.
    Weighted { weights: Vec<u32>, bound: u32 },
}

impl Truncation {
    fn admits(&self, fm: &FreeModule, m: &Monomial, comp: usize) -> bool {
        match self {
            Truncation::None => true,
            Truncation::Degree(d) => fm.term_degree(m, comp) <= *d,
            Truncation::Weighted { weights, bound } => m.weighted_degree(weights) <= *bound,
        }
    }
}

/// A submodule of a free module with a reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct SubmoduleGb<F> {
    ambient: FreeModule,
    generators: Vec<Vector<F>>,
    basis: Vec<Vector<F>>,
    index: Vec<Vec<usize>>,
    truncation: Truncation,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    deg: i64,
}

fn lead<F: Field>(v: &Vector<F>) -> &Term<F> {
    v.lead().expect("basis elements are nonzero")
}

/// Full reduction of `v` by a monic basis; `index[c]` lists the basis
/// elements whose leading term sits in component `c`.
fn reduce<F: Field>(fm: &FreeModule, v: Vector<F>, basis: &[Vector<F>], index: &[Vec<usize>]) -> Vector<F> {
    let mut done: Vec<Term<F>> = Vec::new();
    let mut rest = v.into_terms();
    let mut pos = 0;
    while pos < rest.len() {
        let t = &rest[pos];
        let div =
            index.get(t.comp).and_then(|ids| ids.iter().copied().find(|&k| lead(&basis[k]).mono.divides(&t.mono)));
        match div {
            Some(k) => {
                let g = &basis[k];
                let q = lead(g).mono.quotient_of(&t.mono).expect("divisor");
                let c = -t.coef.clone();
                rest = fm.add_scaled_from(&rest[pos..], g, &c, &q).into_terms();
                pos = 0;
            }
            None => {
                done.push(rest[pos].clone());
                pos += 1;
                // terms before `pos` are final; drop them from `rest` lazily
                if pos > 64 {
                    rest.drain(..pos);
                    pos = 0;
                }
            }
        }
    }
    done.extend(rest.drain(pos..));
    Vector::from_sorted(done)
}

fn s_vector<F: Field>(fm: &FreeModule, a: &Vector<F>, b: &Vector<F>, lcm: &Monomial) -> Vector<F> {
    let ma = lead(a).mono.quotient_of(lcm).expect("lcm");
    let mb = lead(b).mono.quotient_of(lcm).expect("lcm");
    let left = fm.mul_monomial(a, &ma);
    fm.add_scaled(&left, b, &-F::one(), &mb)
}

/// Gebauer–Möller update after adding basis element `h`.
fn update_pairs<F: Field>(
    fm: &FreeModule,
    pairs: &mut Vec<Pair>,
    basis: &[Vector<F>],
    index: &[Vec<usize>],
    h: usize,
    trunc: &Truncation,
) {
    let th = lead(&basis[h]).mono;
    let ch = lead(&basis[h]).comp;
    let product_ok = fm.rank() == 1;
    pairs.retain(|p| {
        if lead(&basis[p.i]).comp != ch || !th.divides(&p.lcm) {
            return true;
        }
        let l1 = lead(&basis[p.i]).mono.lcm(&th);
        let l2 = lead(&basis[p.j]).mono.lcm(&th);
        l1 == p.lcm || l2 == p.lcm
    });
    let cands: Vec<(usize, Monomial, bool)> = index[ch]
        .iter()
        .copied()
        .filter(|&i| i != h)
        .map(|i| {
            let ti = lead(&basis[i]).mono;
            (i, ti.lcm(&th), product_ok && ti.is_coprime(&th))
        })
        .collect();
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    for (a, ca) in cands.iter().enumerate() {
        let dominated = cands.iter().enumerate().any(|(b, cb)| b != a && cb.1.divides(&ca.1) && cb.1 != ca.1);
        if dominated {
            continue;
        }
        if let Some(k) = kept.iter_mut().find(|k| k.1 == ca.1) {
            k.2 |= ca.2;
            continue;
        }
        kept.push(*ca);
    }
    for (i, lcm, coprime) in kept {
        if coprime || !trunc.admits(fm, &lcm, ch) {
            continue;
        }
        pairs.push(Pair { i, j: h, lcm, deg: fm.term_degree(&lcm, ch) });
    }
}

/// Drop redundant leading terms and tail-reduce.
fn interreduce<F: Field>(fm: &FreeModule, basis: Vec<Vector<F>>) -> Vec<Vector<F>> {
    let mut minimal: Vec<Vector<F>> = Vec::new();
    for (a, g) in basis.iter().enumerate() {
        let tg = lead(g);
        let redundant = basis.iter().enumerate().any(|(b, o)| {
            let to = lead(o);
            b != a && to.comp == tg.comp && to.mono.divides(&tg.mono) && (to.mono != tg.mono || b < a)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by(|a, b| {
        let (ta, tb) = (lead(a), lead(b));
        fm.cmp_terms(&tb.mono, tb.comp, &ta.mono, ta.comp)
    });
    let index = build_index(fm, &minimal);
    let mut out = Vec::with_capacity(minimal.len());
    for g in &minimal {
        let mut terms = g.terms().to_vec();
        let head = terms.remove(0);
        let tail = reduce(fm, Vector::from_sorted(terms), &minimal, &index);
        let mut all = vec![head];
        all.extend(tail.into_terms());
        out.push(Vector::from_sorted(all));
    }
    out
}

fn build_index<F: Field>(fm: &FreeModule, basis: &[Vector<F>]) -> Vec<Vec<usize>> {
    let mut index = vec![Vec::new(); fm.rank()];
    for (k, g) in basis.iter().enumerate() {
        index[lead(g).comp].push(k);
    }
    index
}

fn buchberger<F: Field>(fm: &FreeModule, gens: &[Vector<F>], trunc: &Truncation) -> Result<Vec<Vector<F>>> {
    let mut pending: Vec<(i64, Vector<F>)> = Vec::new();
    for g in gens {
        let g = fm.resort(g);
        if let Some(d) = fm.degree(&g)? {
            let t = lead(&g);
            if trunc.admits(fm, &t.mono, t.comp) {
                pending.push((d, g));
            }
        }
    }
    pending.sort_by_key(|(d, _)| *d);
    pending.reverse();

    let mut basis: Vec<Vector<F>> = Vec::new();
    let mut index: Vec<Vec<usize>> = vec![Vec::new(); fm.rank()];
    let mut pairs: Vec<Pair> = Vec::new();
    loop {
        let best_pair = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.deg.cmp(&b.deg).then(a.lcm.grevlex_cmp(&b.lcm)).then((a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, p)| (k, p.deg));
        let next_gen = pending.last().map(|(d, _)| *d);
        let candidate = match (best_pair, next_gen) {
            (None, None) => break,
            (Some((k, pd)), Some(gd)) if pd < gd => {
                let p = pairs.swap_remove(k);
                s_vector(fm, &basis[p.i], &basis[p.j], &p.lcm)
            }
            (Some((k, _)), None) => {
                let p = pairs.swap_remove(k);
                s_vector(fm, &basis[p.i], &basis[p.j], &p.lcm)
            }
            (_, Some(_)) => pending.pop().expect("pending").1,
        };
        let h = reduce(fm, candidate, &basis, &index);
        if h.is_zero() {
            continue;
        }
        let h = fm.monic(&h);
        let k = basis.len();
        index[lead(&h).comp].push(k);
        basis.push(h);
        update_pairs(fm, &mut pairs, &basis, &index, k, trunc);
    }
    Ok(interreduce(fm, basis))
}

impl<F: Field> SubmoduleGb<F> {
    /// Reduced Gröbner basis of the submodule generated by `gens`.
    pub fn new(ambient: &FreeModule, gens: Vec<Vector<F>>) -> Result<Self> {
        Self::truncated(ambient, gens, Truncation::None)
    }

    pub fn truncated(ambient: &FreeModule, gens: Vec<Vector<F>>, truncation: Truncation) -> Result<Self> {
        for g in &gens {
            if let Some(c) = g.max_comp() {
                if c >= ambient.rank() {
                    return Err(Error::RingMismatch(format!(
                        "generator uses component {c} of a rank {} module",
                        ambient.rank()
                    )));
                }
            }
        }
        let basis = buchberger(ambient, &gens, &truncation)?;
        let generators = gens.into_iter().filter(|g| !g.is_zero()).map(|g| ambient.resort(&g)).collect();
        Ok(Self::from_parts(ambient.clone(), generators, basis, truncation))
    }

    /// Trust `basis` to be a reduced Gröbner basis already.
    pub(crate) fn from_parts(
        ambient: FreeModule,
        generators: Vec<Vector<F>>,
        basis: Vec<Vector<F>>,
        truncation: Truncation,
    ) -> Self {
        let index = build_index(&ambient, &basis);
        SubmoduleGb { ambient, generators, basis, index, truncation }
    }

    pub fn zero(ambient: &FreeModule) -> Self {
        Self::from_parts(ambient.clone(), Vec::new(), Vec::new(), Truncation::None)
    }

    /// The whole free module.
    pub fn full(ambient: &FreeModule) -> Self {
        let basis: Vec<Vector<F>> = (0..ambient.rank()).map(|i| ambient.basis(i)).collect();
        Self::from_parts(ambient.clone(), basis.clone(), basis, Truncation::None)
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vector<F>] {
        &self.generators
    }

    pub fn basis(&self) -> &[Vector<F>] {
        &self.basis
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn normal_form(&self, v: &Vector<F>) -> Result<Vector<F>> {
        if let Some(c) = v.max_comp() {
            if c >= self.ambient.rank() {
                return Err(Error::RingMismatch(format!(
                    "element uses component {c} of a rank {} module",
                    self.ambient.rank()
                )));
            }
        }
        Ok(reduce(&self.ambient, self.ambient.resort(v), &self.basis, &self.index))
    }

    pub fn contains(&self, v: &Vector<F>) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero())
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_contained_in(&self, other: &SubmoduleGb<F>) -> Result<bool> {
        for g in &self.basis {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &SubmoduleGb<F>) -> Result<bool> {
        Ok(self.is_contained_in(other)? && other.is_contained_in(self)?)
    }

    /// Buchberger's criterion: every S-vector of the basis reduces to zero.
    pub fn verify(&self) -> bool {
        let fm = &self.ambient;
        for (a, ga) in self.basis.iter().enumerate() {
            for gb in &self.basis[a + 1..] {
                let (ta, tb) = (lead(ga), lead(gb));
                if ta.comp != tb.comp {
                    continue;
                }
                let lcm = ta.mono.lcm(&tb.mono);
                if !self.truncation.admits(fm, &lcm, ta.comp) {
                    continue;
                }
                let s = s_vector(fm, ga, gb, &lcm);
                if !reduce(fm, s, &self.basis, &self.index).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Leading monomials grouped by component.
    pub fn leading_monomials(&self) -> Vec<Vec<Monomial>> {
        let mut out = vec![Vec::new(); self.ambient.rank()];
        for g in &self.basis {
            let t = lead(g);
            out[t.comp].push(t.mono);
        }
        out
    }

    /// Hilbert series of `ambient / self`.
    pub fn quotient_series(&self) -> HilbertSeries {
        let lts = self.leading_monomials();
        HilbertSeries::from_components(
            self.ambient.nvars(),
            self.ambient.twists().iter().zip(lts.iter()).map(|(&t, l)| (t, l.as_slice())),
        )
    }

    /// Hilbert series of the submodule itself.
    pub fn series(&self) -> HilbertSeries {
        SubmoduleGb::<F>::zero(&self.ambient).quotient_series().sub(&self.quotient_series())
    }

    /// `ambient / self` has finite length: every component's leading
    /// monomials contain a pure power of every variable.
    pub fn quotient_is_artinian(&self) -> bool {
        let n = self.ambient.nvars();
        self.leading_monomials()
            .iter()
            .all(|lts| (0..n).all(|v| lts.iter().any(|m| m.support_len() <= 1 && (m.is_one() || m.exp(v) > 0))))
    }

    /// A variable whose powers all survive in some component of the quotient.
    pub fn infinite_direction(&self) -> Option<(usize, usize)> {
        let n = self.ambient.nvars();
        for (c, lts) in self.leading_monomials().iter().enumerate() {
            if lts.iter().any(|m| m.is_one()) {
                continue;
            }
            for v in 0..n {
                if !lts.iter().any(|m| m.support_len() == 1 && m.exp(v) > 0) {
                    return Some((c, v));
                }
            }
        }
        None
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn groebner<F: Field>(ambient: &FreeModule, gens: Vec<Vector<F>>) -> Result<SubmoduleGb<F>> {
    SubmoduleGb::new(ambient, gens)
}

/// Kernel of the homogeneous map `source -> target / <relations>` sending
/// the `j`-th basis vector to `images[j]`, as a submodule of `source`.
pub fn kernel_of_map<F: Field>(
    source: &FreeModule,
    images: &[Vector<F>],
    target: &FreeModule,
    relations: &[Vector<F>],
) -> Result<SubmoduleGb<F>> {
    if images.len() != source.rank() {
        return Err(Error::Precondition(format!("{} images for a source of rank {}", images.len(), source.rank())));
    }
    let mut shift: Option<i64> = None;
    for (j, img) in images.iter().enumerate() {
        if let Some(d) = target.degree(img)? {
            let s = d - source.twist(j) as i64;
            match shift {
                None => shift = Some(s),
                Some(t) if t != s => {
                    return Err(Error::Inhomogeneous(format!("image {j} shifts degree by {s}, others by {t}")))
                }
                _ => {}
            }
        }
    }
    let shift = shift.unwrap_or(0) as i32;
    let m = target.rank();
    let pot_target = FreeModule::new(target.nvars(), target.twists().to_vec());
    let ext = pot_target.direct_sum(&source.shifted(shift).with_order(Default::default()));
    let mut gens = Vec::with_capacity(images.len() + relations.len());
    for (j, img) in images.iter().enumerate() {
        gens.push(ext.add(&ext.embed(img, 0), &ext.basis(m + j)));
    }
    for r in relations {
        gens.push(ext.embed(r, 0));
    }
    let basis = buchberger(&ext, &gens, &Truncation::None)?;
    let kernel: Vec<Vector<F>> =
        basis.into_iter().filter(|g| lead(g).comp >= m).map(|g| source.project(&g, m..m + source.rank())).collect();
    if source.order() == Default::default() {
        Ok(SubmoduleGb::from_parts(source.clone(), kernel.clone(), kernel, Truncation::None))
    } else {
        SubmoduleGb::new(source, kernel)
    }
}

/// Map from a free module onto the syzygies of `gens`, one column per
/// element of a Gröbner basis of the syzygy module.
pub fn syzygies<F: Field>(ambient: &FreeModule, gens: &[Vector<F>]) -> Result<ModuleMap<F>> {
    let mut twists = Vec::with_capacity(gens.len());
    for g in gens {
        match ambient.degree(g)? {
            Some(d) => twists.push(d as i32),
            None => return Err(Error::Precondition("syzygies of a zero generator need a twist".into())),
        }
    }
    let source = FreeModule::new(ambient.nvars(), twists);
    let ker = kernel_of_map(&source, gens, ambient, &[])?;
    ModuleMap::from_columns(source, ker.basis().to_vec())
}

pub fn kernel<F: Field>(f: &ModuleMap<F>) -> Result<SubmoduleGb<F>> {
    kernel_of_map(f.source(), f.columns(), f.target(), &[])
}

pub fn image<F: Field>(f: &ModuleMap<F>) -> Result<SubmoduleGb<F>> {
    SubmoduleGb::new(f.target(), f.columns().to_vec())
}

/// Copies of `fm`, the `i`-th twisted down by `shifts[i]`.
fn stacked(fm: &FreeModule, shifts: &[i32]) -> FreeModule {
    let mut out = FreeModule::new(fm.nvars(), Vec::new());
    for &s in shifts {
        out = out.direct_sum(&FreeModule::new(fm.nvars(), fm.twists().iter().map(|t| t - s).collect()));
    }
    out
}

/// `(N :_F (f_1, ..., f_t)) = { v : f_i v ∈ N for all i }`.
pub fn colon_ideal<F: Field>(n: &SubmoduleGb<F>, ideal: &[Poly<F>]) -> Result<SubmoduleGb<F>> {
    let fm = n.ambient();
    let ideal: Vec<&Poly<F>> = ideal.iter().filter(|f| !f.is_zero()).collect();
    if ideal.is_empty() {
        return Err(Error::ZeroColon);
    }
    let mut shifts = Vec::with_capacity(ideal.len());
    for f in &ideal {
        if !f.is_homogeneous() {
            return Err(Error::Inhomogeneous("colon by an inhomogeneous form".into()));
        }
        shifts.push(f.total_degree().expect("nonzero") as i32);
    }
    let target = stacked(fm, &shifts);
    let r = fm.rank();
    let mut images = Vec::with_capacity(r);
    for c in 0..r {
        let mut img = Vector::zero();
        for (i, f) in ideal.iter().enumerate() {
            img = target.add(&img, &target.mul_poly(f, &target.basis(i * r + c)));
        }
        images.push(img);
    }
    let mut rels = Vec::new();
    for i in 0..ideal.len() {
        for g in n.basis() {
            rels.push(target.embed(g, i * r));
        }
    }
    let source = FreeModule::new(fm.nvars(), fm.twists().to_vec()).with_order(fm.order());
    kernel_of_map(&source, &images, &target, &rels)
}

/// `(N :_F f)`.
pub fn colon<F: Field>(n: &SubmoduleGb<F>, f: &Poly<F>) -> Result<SubmoduleGb<F>> {
    if f.is_zero() {
        return Err(Error::ZeroColon);
    }
    colon_ideal(n, std::slice::from_ref(f))
}

/// `A ∩ B` for submodules of the same free module.
pub fn intersect<F: Field>(a: &SubmoduleGb<F>, b: &SubmoduleGb<F>) -> Result<SubmoduleGb<F>> {
    let fm = a.ambient();
    if fm.twists() != b.ambient().twists() {
        return Err(Error::RingMismatch("intersection in different free modules".into()));
    }
    let r = fm.rank();
    let target = stacked(fm, &[0, 0]);
    let images: Vec<Vector<F>> = (0..r).map(|c| target.add(&target.basis(c), &target.basis(r + c))).collect();
    let mut rels: Vec<Vector<F>> = a.basis().iter().map(|g| target.embed(g, 0)).collect();
    rels.extend(b.basis().iter().map(|g| target.embed(g, r)));
    kernel_of_map(fm, &images, &target, &rels)
}

/// `(N :_S F) = ann(F/N)` as an ideal, i.e. a submodule of `S^1`.
pub fn annihilator<F: Field>(n: &SubmoduleGb<F>) -> Result<SubmoduleGb<F>> {
    let fm = n.ambient();
    let r = fm.rank();
    let target = stacked(fm, fm.twists());
    let mut img = Vector::zero();
    for c in 0..r {
        img = target.add(&img, &target.basis(c * r + c));
    }
    let mut rels = Vec::new();
    for c in 0..r {
        for g in n.basis() {
            rels.push(target.embed(g, c * r));
        }
    }
    kernel_of_map(&FreeModule::ring_rank_one(fm.nvars()), &[img], &target, &rels)
}

/// Ideal of `S` from a submodule of `S^1`.
pub fn ideal_generators<F: Field>(gb: &SubmoduleGb<F>) -> Vec<Poly<F>> {
    gb.basis().iter().map(|v| gb.ambient().entry(v, 0)).collect()
}

/// Row echelon bookkeeping for homogeneous elements of one degree.
pub(crate) struct Echelon<F> {
    rows: Vec<Vector<F>>,
    by_lead: HashMap<(Monomial, usize), usize>,
}

impl<F: Field> Echelon<F> {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::new(), by_lead: HashMap::new() }
    }

    /// Insert `v`; true when it was independent of the rows so far.
    pub(crate) fn insert(&mut self, fm: &FreeModule, v: &Vector<F>) -> bool {
        let mut v = v.clone();
        let mut idx = 0;
        while idx < v.len() {
            let t = &v.terms()[idx];
            match self.by_lead.get(&(t.mono, t.comp)) {
                Some(&r) => {
                    let c = -t.coef.clone();
                    let head: Vec<Term<F>> = v.terms()[..idx].to_vec();
                    let tail = fm.add_scaled_from(&v.terms()[idx..], &self.rows[r], &c, &Monomial::one());
                    let mut all = head;
                    all.extend(tail.into_terms());
                    v = Vector::from_sorted(all);
                }
                None => idx += 1,
            }
        }
        if v.is_zero() {
            return false;
        }
        let v = fm.monic(&v);
        let t = lead(&v);
        self.by_lead.insert((t.mono, t.comp), self.rows.len());
        self.rows.push(v);
        true
    }
}

/// A minimal homogeneous generating set of the submodule spanned by `gens`,
/// chosen among `gens` themselves.
pub fn minimal_generators<F: Field>(ambient: &FreeModule, gens: &[Vector<F>]) -> Result<Vec<Vector<F>>> {
    let mut by_deg: Vec<(i64, Vector<F>)> = Vec::new();
    for g in gens {
        let g = ambient.resort(g);
        if let Some(d) = ambient.degree(&g)? {
            by_deg.push((d, g));
        }
    }
    by_deg.sort_by_key(|(d, _)| *d);
    let mut kept: Vec<Vector<F>> = Vec::new();
    let mut i = 0;
    while i < by_deg.len() {
        let d = by_deg[i].0;
        let lower = if kept.is_empty() {
            SubmoduleGb::zero(ambient)
        } else {
            SubmoduleGb::truncated(ambient, kept.clone(), Truncation::Degree(d))?
        };
        let mut ech = Echelon::new();
        while i < by_deg.len() && by_deg[i].0 == d {
            let g = &by_deg[i].1;
            let nf = lower.normal_form(g)?;
            if ech.insert(ambient, &nf) {
                kept.push(g.clone());
            }
            i += 1;
        }
    }
    Ok(kept)
}
