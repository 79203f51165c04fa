//! Homological degree, homological torsion, Buchsbaum invariants,
//! d-sequences and the Hilbert characteristic.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb;
use crate::graded::{GradedModule, ModuleKey};
use crate::hilbert::{
    coefficients_with_bound, hilbert_coefficients, samuel_multiplicity, ParameterIdeal, DEFAULT_MAX_START,
};
use crate::hilbert_series::{binomial, Length};
use crate::homology::{local_cohomology_lengths, CohomologyProfile};
use crate::koszul::koszul_homology;
use crate::poly::Poly;
use crate::resolution::minimal_free_resolution;

/// Memoized `hdeg_Q` for a fixed ideal `Q`.
pub struct HdegEngine<F: Field> {
    q: Vec<Poly<F>>,
    memo: Mutex<HashMap<ModuleKey<F>, u64>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HdegReport {
    pub hdeg: u64,
    pub deg: i64,
    /// `T^(i)` for `i = 1..r-1`.
    pub torsions: Vec<u64>,
}

impl<F: Field> HdegEngine<F> {
    pub fn new(q: &[Poly<F>]) -> Self {
        HdegEngine { q: q.to_vec(), memo: Mutex::new(HashMap::new()) }
    }

    pub fn ideal(&self) -> &[Poly<F>] {
        &self.q
    }

    pub fn hdeg(&self, m: &GradedModule<F>) -> Result<u64> {
        let Some(r) = m.dim() else { return Ok(0) };
        if r == 0 {
            return Ok(m.length().finite().expect("dimension zero"));
        }
        let key = m.key();
        if let Some(&v) = self.memo.lock().expect("memo").get(&key) {
            return Ok(v);
        }
        let profile = local_cohomology_lengths(m)?;
        let deg = samuel_multiplicity(m, &self.q)?;
        let mut total = u64::try_from(deg).map_err(|_| Error::Internal("negative multiplicity".into()))?;
        for j in 0..r {
            let dual = profile.dual(j);
            if dual.is_zero() {
                continue;
            }
            if dual.dim().is_some_and(|d| d > j) {
                return Err(Error::Internal(format!("dual module M_{j} has dimension above {j}")));
            }
            total += binomial(r as i64 - 1, j as i64) as u64 * self.hdeg(dual)?;
        }
        self.memo.lock().expect("memo").insert(key, total);
        Ok(total)
    }

    /// `T^(i)(M) = Σ_{j=1}^{r-i} binom(r-i-1, j-1) hdeg(M_j)`.
    pub fn torsion(&self, m: &GradedModule<F>, i: usize) -> Result<u64> {
        let r = m.dim().unwrap_or(0);
        if r < 2 || i == 0 || i >= r {
            return Err(Error::Precondition(format!("torsion index {i} outside 1..{} ", r.saturating_sub(1))));
        }
        let profile = local_cohomology_lengths(m)?;
        self.torsion_from(&profile, r, i)
    }

    fn torsion_from(&self, profile: &CohomologyProfile<F>, r: usize, i: usize) -> Result<u64> {
        let mut t = 0u64;
        for j in 1..=(r - i) {
            t += binomial((r - i - 1) as i64, (j - 1) as i64) as u64 * self.hdeg(profile.dual(j))?;
        }
        Ok(t)
    }

    pub fn report(&self, m: &GradedModule<F>) -> Result<HdegReport> {
        let hdeg = self.hdeg(m)?;
        let deg = if m.is_zero() { 0 } else { samuel_multiplicity(m, &self.q)? };
        let r = m.dim().unwrap_or(0);
        let mut torsions = Vec::new();
        if r >= 2 {
            let profile = local_cohomology_lengths(m)?;
            for i in 1..r {
                torsions.push(self.torsion_from(&profile, r, i)?);
            }
        }
        Ok(HdegReport { hdeg, deg, torsions })
    }
}

/// `I(M)` and the lower bound `s` for `e_1` of a generalized CM module.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BuchsbaumData {
    pub dim: usize,
    pub h: Vec<u64>,
    /// `Σ_{i=0}^{r-1} binom(r-1, i) h^i`.
    pub i_m: u64,
    /// `Σ_{i=1}^{r-1} binom(r-2, i-1) h^i`.
    pub bound_s: u64,
}

impl BuchsbaumData {
    pub fn from_h(dim: usize, h: &[u64]) -> Self {
        let r = dim as i64;
        let i_m = h.iter().enumerate().map(|(i, &v)| binomial(r - 1, i as i64) as u64 * v).sum();
        let bound_s = h.iter().enumerate().skip(1).map(|(i, &v)| binomial(r - 2, i as i64 - 1) as u64 * v).sum();
        BuchsbaumData { dim, h: h.to_vec(), i_m, bound_s }
    }
}

/// `None` when `M` is not generalized Cohen–Macaulay.
pub fn buchsbaum_data<F: Field>(profile: &CohomologyProfile<F>) -> Option<BuchsbaumData> {
    let h = profile.finite_h()?;
    Some(BuchsbaumData::from_h(profile.dim.unwrap_or(0), &h))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BoundReport {
    pub lhs: i64,
    pub rhs: i64,
    pub slack: i64,
    pub pass: bool,
}

impl BoundReport {
    pub fn le(lhs: i64, rhs: i64) -> Self {
        BoundReport { lhs, rhs, slack: rhs - lhs, pass: lhs <= rhs }
    }
}

/// `-e_1(Q, M) <= T^(1)_Q(M)`.
pub fn check_e1_torsion_bound<F: Field>(m: &GradedModule<F>, q: &ParameterIdeal<F>) -> Result<BoundReport> {
    let r = m.dim().unwrap_or(0);
    if r < 2 {
        return Err(Error::Precondition("the torsion bound needs dimension at least 2".into()));
    }
    let e1 = hilbert_coefficients(m, q)?.e1();
    let t1 = HdegEngine::new(q.gens()).torsion(m, 1)?;
    Ok(BoundReport::le(-e1, t1 as i64))
}

/// `χ_1(x; M) <= hdeg_Q(M) - deg_Q(M)`.
pub fn check_chi1_hdeg_bound<F: Field>(m: &GradedModule<F>, q: &ParameterIdeal<F>) -> Result<BoundReport> {
    let chi1 = koszul_homology(m, q)?.chi1;
    let engine = HdegEngine::new(q.gens());
    let hdeg = engine.hdeg(m)? as i64;
    let deg = samuel_multiplicity(m, q.gens())?;
    Ok(BoundReport::le(chi1, hdeg - deg))
}

/// `((x_1..x_i)M :_M x_{i+1} x_k) = ((x_1..x_i)M :_M x_k)` for all `i < k`.
pub fn is_d_sequence<F: Field>(m: &GradedModule<F>, x: &[Poly<F>]) -> Result<bool> {
    for i in 0..x.len() {
        let base = gb::SubmoduleGb::new(m.cover(), m.ideal_times_cover(&x[..i])?)?;
        for k in i..x.len() {
            let prod = x[i].try_mul(&x[k])?;
            let a = gb::colon(&base, &prod)?;
            let b = gb::colon(&base, &x[k])?;
            if !a.same_as(&b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `h(x; M) = Σ (-1)^i e_i(x, M)`.
pub fn hilbert_characteristic<F: Field>(m: &GradedModule<F>, x: &[Poly<F>]) -> Result<i64> {
    Ok(coefficients_with_bound(m, x, DEFAULT_MAX_START)?.characteristic())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BettiBoundReport {
    pub betti: Vec<usize>,
    pub residue_betti: Vec<u64>,
    pub colength: u64,
    pub pass: bool,
}

/// `β_i(M) <= λ(M/(x)M) β_i(k)` over the polynomial ring.
pub fn betti_bound_check<F: Field>(m: &GradedModule<F>, x: &[Poly<F>]) -> Result<BettiBoundReport> {
    if x.iter().any(|p| p.total_degree() != Some(1)) {
        return Err(Error::Precondition("the Betti bound needs linear forms".into()));
    }
    let n = m.nvars();
    let res = minimal_free_resolution(m, n + 1)?;
    let betti = res.betti();
    let residue_betti: Vec<u64> = (0..=n).map(|i| binomial(n as i64, i as i64) as u64).collect();
    let colength = m
        .quotient_by_ideal(x)?
        .length()
        .finite()
        .ok_or_else(|| Error::NotParameter { witness: "M/(x)M has infinite length".into() })?;
    let pass = betti.iter().enumerate().all(|(i, &b)| i <= n && b as u64 <= colength * residue_betti[i]);
    Ok(BettiBoundReport { betti, residue_betti, colength, pass })
}

/// The quasi-cohomological degree rules for `h(x; M)` on a d-sequence.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuasiDegreeReport {
    pub h: i64,
    pub colength: u64,
    pub e_top: i64,
    pub h0_length: u64,
    /// `e_r = λ(M_0)`.
    pub e_top_plain: bool,
    /// `e_r = (-1)^r λ(M_0)`.
    pub e_top_signed: bool,
    /// `h(x; M) = h(x'; M/x_1 M)`, checked when `depth M >= 1`.
    pub section_rule: Option<bool>,
    /// `h(x; M) = h(x; M/M_0) + λ(M_0)`.
    pub torsion_rule: bool,
    pub colength_rule: bool,
}

pub fn quasi_degree_check<F: Field>(m: &GradedModule<F>, x: &[Poly<F>]) -> Result<QuasiDegreeReport> {
    let r = x.len();
    let coeffs = coefficients_with_bound(m, x, DEFAULT_MAX_START)?;
    let h = coeffs.characteristic();
    let colength = m.quotient_by_ideal(x)?.length().finite().expect("parameter ideal");
    let (h0, sat) = m.zeroth_local_cohomology()?;
    let h0_length = h0.length().finite().expect("finite");
    let e_top = coeffs.e[r];
    let sign: i64 = if r.is_multiple_of(2) { 1 } else { -1 };
    let section_rule = if h0_length == 0 && r >= 1 {
        let section = m.quotient_by_ideal(&x[..1])?;
        Some(hilbert_characteristic(&section, &x[1..])? == h)
    } else {
        None
    };
    let reduced = GradedModule::from_gb(sat)?;
    let torsion_rule = hilbert_characteristic(&reduced, x)? + h0_length as i64 == h;
    Ok(QuasiDegreeReport {
        h,
        colength,
        e_top,
        h0_length,
        e_top_plain: e_top == h0_length as i64,
        e_top_signed: e_top == sign * h0_length as i64,
        section_rule,
        torsion_rule,
        colength_rule: h == colength as i64,
    })
}

/// Extended-degree axioms for `hdeg_Q` on one module and hyperplane section.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HdegAxiomReport {
    /// `hdeg(M) = hdeg(M/H^0) + λ(H^0)`.
    pub torsion_rule: bool,
    /// `hdeg(M/hM) <= hdeg(M)` when `depth M >= 1`.
    pub bertini: Option<bool>,
    /// `T^(i)(M/hM) <= T^(i)(M)` for `i <= r-2`.
    pub torsion_section: Option<bool>,
    /// `hdeg(M) = e_0` when `M` is Cohen–Macaulay.
    pub calibration: Option<bool>,
}

pub fn hdeg_axioms<F: Field>(m: &GradedModule<F>, q: &ParameterIdeal<F>, h: &Poly<F>) -> Result<HdegAxiomReport> {
    let engine = HdegEngine::new(q.gens());
    let profile = local_cohomology_lengths(m)?;
    let hd = engine.hdeg(m)?;
    let (h0, sat) = m.zeroth_local_cohomology()?;
    let l0 = h0.length().finite().expect("finite");
    let reduced = GradedModule::from_gb(sat)?;
    let torsion_rule = engine.hdeg(&reduced)? + l0 == hd;
    let r = m.dim().unwrap_or(0);
    let (bertini, torsion_section) = if profile.depth.is_some_and(|d| d >= 1) {
        let section = m.quotient_by_ideal(std::slice::from_ref(h))?;
        let b = engine.hdeg(&section)? <= hd;
        let ts = if r >= 3 {
            let mut ok = true;
            for i in 1..=(r - 2) {
                ok &= engine.torsion(&section, i)? <= engine.torsion(m, i)?;
            }
            Some(ok)
        } else {
            None
        };
        (Some(b), ts)
    } else {
        (None, None)
    };
    let calibration =
        if profile.is_cohen_macaulay() { Some(hd as i64 == samuel_multiplicity(m, q.gens())?) } else { None };
    Ok(HdegAxiomReport { torsion_rule, bertini, torsion_section, calibration })
}

/// Standardness of one parameter ideal against `I(M)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StandardSample {
    pub colength: u64,
    pub e: Vec<i64>,
    pub excess: i64,
    pub standard: bool,
}

pub fn standard_sample<F: Field>(
    m: &GradedModule<F>,
    q: &ParameterIdeal<F>,
    data: &BuchsbaumData,
) -> Result<StandardSample> {
    let c = hilbert_coefficients(m, q)?;
    let excess = q.colength() as i64 - c.e0();
    Ok(StandardSample { colength: q.colength(), e: c.e, excess, standard: excess == data.i_m as i64 })
}

/// `λ` of a module known to have finite length.
pub fn finite_length<F: Field>(m: &GradedModule<F>) -> Result<u64> {
    match m.length() {
        Length::Finite(v) => Ok(v),
        Length::Infinite => Err(Error::InfiniteLength("module expected to have finite length".into())),
    }
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
    fn hdeg_calibrates_on_free_modules() {
        let (r, m) = setup(&["x", "y"], &[]);
        let q = forms(&r, &["x^2", "y"]);
        let rep = HdegEngine::new(&q).report(&m).unwrap();
        assert_eq!(rep.hdeg, 2);
        assert_eq!(rep.deg, 2);
        assert_eq!(rep.torsions, vec![0]);
    }

    #[test]
    fn hdeg_worked_examples() {
        let (r, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        assert_eq!(HdegEngine::new(&forms(&r, &["y"])).hdeg(&m).unwrap(), 2);

        let (r, m) = setup(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        let q = forms(&r, &["x+z", "y+w"]);
        let e = HdegEngine::new(&q);
        assert_eq!(e.hdeg(&m).unwrap(), 3);
        assert_eq!(e.torsion(&m, 1).unwrap(), 1);
        let pq = ParameterIdeal::new(&m, q).unwrap();
        let b = check_e1_torsion_bound(&m, &pq).unwrap();
        assert_eq!((b.lhs, b.rhs, b.slack), (1, 1, 0));
        let c = check_chi1_hdeg_bound(&m, &pq).unwrap();
        assert_eq!((c.lhs, c.rhs), (1, 1));
    }

    #[test]
    fn torsion_index_is_checked() {
        let (r, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        assert!(HdegEngine::new(&forms(&r, &["y"])).torsion(&m, 1).is_err());
    }

    #[test]
    fn chi1_bound_on_embedded_point() {
        let (r, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        let q = ParameterIdeal::new(&m, forms(&r, &["y"])).unwrap();
        let c = check_chi1_hdeg_bound(&m, &q).unwrap();
        assert_eq!((c.lhs, c.rhs, c.slack), (1, 1, 0));
    }

    #[test]
    fn d_sequences() {
        let (r, m) = setup(&["x", "y"], &[]);
        assert!(is_d_sequence(&m, &forms(&r, &["x", "y"])).unwrap());
        let (r, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        assert!(is_d_sequence(&m, &forms(&r, &["y"])).unwrap());
        let (r, m) = setup(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        assert!(is_d_sequence(&m, &forms(&r, &["x+z", "y+w"])).unwrap());
        // y^2 kills x but y does not on k[x,y]/(x y^2)
        let (r, m) = setup(&["x", "y"], &["x*y^2"]);
        assert!(!is_d_sequence(&m, &forms(&r, &["y"])).unwrap());
    }

    #[test]
    fn hilbert_characteristic_examples() {
        let (r, m) = setup(&["x", "y"], &[]);
        assert_eq!(hilbert_characteristic(&m, &forms(&r, &["x^2", "y^3"])).unwrap(), 6);
        let (r, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        assert_eq!(hilbert_characteristic(&m, &forms(&r, &["y"])).unwrap(), 2);
        let (r, m) = setup(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        let x = forms(&r, &["x+z", "y+w"]);
        assert_eq!(hilbert_characteristic(&m, &x).unwrap(), 3);
        let q = quasi_degree_check(&m, &x).unwrap();
        assert!(q.colength_rule && q.torsion_rule && q.section_rule == Some(true));
    }

    #[test]
    fn quasi_degree_on_embedded_point() {
        let (r, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        let q = quasi_degree_check(&m, &forms(&r, &["y"])).unwrap();
        assert!(q.torsion_rule && q.colength_rule);
        assert_eq!(q.section_rule, None);
        assert_eq!(q.h0_length, 1);
        assert_eq!(q.e_top, -1);
        assert!(q.e_top_signed && !q.e_top_plain);
    }

    #[test]
    fn betti_bounds() {
        let (r, k) = setup(&["x", "y"], &["x", "y"]);
        let _ = r;
        let (r2, s) = setup(&["x", "y"], &[]);
        let b = betti_bound_check(&s, &forms(&r2, &["x", "y"])).unwrap();
        assert!(b.pass);
        assert_eq!(b.betti, vec![1]);
        let (r3, m) = setup(&["x", "y"], &["x^2", "x*y"]);
        let b = betti_bound_check(&m, &forms(&r3, &["y"])).unwrap();
        assert_eq!(b.betti, vec![1, 2, 1]);
        assert_eq!(b.colength, 2);
        assert!(b.pass);
        assert!(finite_length(&k).is_ok());
    }

    #[test]
    fn buchsbaum_numbers() {
        let d = BuchsbaumData::from_h(2, &[0, 1]);
        assert_eq!((d.i_m, d.bound_s), (1, 1));
        let d = BuchsbaumData::from_h(3, &[0, 1, 0]);
        assert_eq!((d.i_m, d.bound_s), (2, 1));
    }

    #[test]
    fn hdeg_axioms_on_two_planes() {
        let (r, m) = setup(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        let q = ParameterIdeal::new(&m, forms(&r, &["x+z", "y+w"])).unwrap();
        let rep = hdeg_axioms(&m, &q, &r.parse("2*x+2*z+7*y+7*w").unwrap()).unwrap();
        assert!(rep.torsion_rule);
        assert_eq!(rep.bertini, Some(true));
        assert_eq!(rep.calibration, None);
    }
}
