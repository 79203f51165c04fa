//! Seeded random parameter ideals, sampled estimates of `Λ(M)` and `Ξ(M)`,
//! and the sampled module classification.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brim::ParameterModule;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedModule;
use crate::hilbert::{hilbert_coefficients, superficial_check, ParameterIdeal, SuperficialReport};
use crate::homology::{local_cohomology_lengths, unmixed_from_profile};
use crate::invariants::{buchsbaum_data, standard_sample, BuchsbaumData, StandardSample};
use crate::koszul::chi1_serre;
use crate::monomial::monomials_of_degree;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    /// Upper bounds on generator degrees; one entry is broadcast.
    pub degree_bounds: Vec<u32>,
    pub retry_limit: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { seed: 0, count: 25, degree_bounds: vec![2], retry_limit: 16 }
    }
}

impl SampleConfig {
    pub fn with_seed(seed: u64) -> Self {
        SampleConfig { seed, ..Default::default() }
    }

    fn bound(&self, i: usize) -> u32 {
        match self.degree_bounds.len() {
            0 => 1,
            1 => self.degree_bounds[0],
            _ => self.degree_bounds.get(i).copied().unwrap_or(1),
        }
        .max(1)
    }
}

/// The generator for sample `index`; independent of scheduling.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A form of degree `deg` with uniformly random coefficients.
pub fn random_form<F: Field, R: Rng + ?Sized>(nvars: usize, deg: u32, rng: &mut R) -> Poly<F> {
    let terms = monomials_of_degree(nvars, deg).into_iter().map(|m| (m, F::random(rng))).collect();
    Poly::from_terms(nvars, terms)
}

pub fn random_parameter_ideal<F: Field, R: Rng + ?Sized>(
    m: &GradedModule<F>,
    degrees: &[u32],
    rng: &mut R,
    retry_limit: usize,
) -> Result<ParameterIdeal<F>> {
    let r = m.dim().unwrap_or(0);
    if degrees.len() != r {
        return Err(Error::Precondition(format!("{} degrees for a module of dimension {r}", degrees.len())));
    }
    if degrees.contains(&0) {
        return Err(Error::Precondition("parameter of degree zero".into()));
    }
    let mut last = String::new();
    for _ in 0..retry_limit.max(1) {
        let gens = degrees.iter().map(|&d| random_form(m.nvars(), d, rng)).collect();
        match ParameterIdeal::new(m, gens) {
            Ok(q) => return Ok(q),
            Err(Error::NotParameter { witness }) => last = witness,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryExhausted { attempts: retry_limit.max(1), reason: last })
}

/// Degrees for sample `index`, each uniform in `1..=bound`.
fn draw_degrees<R: Rng + ?Sized>(cfg: &SampleConfig, r: usize, rng: &mut R) -> Vec<u32> {
    (0..r).map(|i| rng.gen_range(1..=cfg.bound(i))).collect()
}

/// `cfg.count` parameter ideals, sample `i` drawn from `sample_rng(seed, i)`.
pub fn sample_parameter_ideals<F: Field>(m: &GradedModule<F>, cfg: &SampleConfig) -> Result<Vec<ParameterIdeal<F>>> {
    let r = m.dim().unwrap_or(0);
    (0..cfg.count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, i);
            let degrees = draw_degrees(cfg, r, &mut rng);
            random_parameter_ideal(m, &degrees, &mut rng, cfg.retry_limit)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LambdaEstimate {
    pub values: Vec<i64>,
    pub distinct: BTreeSet<i64>,
    pub min: Option<i64>,
    pub max: Option<i64>,
}

impl LambdaEstimate {
    pub fn from_values(values: Vec<i64>) -> Self {
        let distinct: BTreeSet<i64> = values.iter().copied().collect();
        LambdaEstimate { min: distinct.first().copied(), max: distinct.last().copied(), values, distinct }
    }

    pub fn is_singleton(&self) -> bool {
        self.distinct.len() == 1
    }
}

fn require_positive_dim<F: Field>(m: &GradedModule<F>) -> Result<()> {
    match m.dim() {
        Some(r) if r >= 1 => Ok(()),
        _ => Err(Error::Precondition("sampling needs a module of positive dimension".into())),
    }
}

/// Sampled values of `e_1(Q, M)`.
pub fn estimate_lambda<F: Field>(m: &GradedModule<F>, cfg: &SampleConfig) -> Result<LambdaEstimate> {
    require_positive_dim(m)?;
    let qs = sample_parameter_ideals(m, cfg)?;
    let values = qs.par_iter().map(|q| Ok(hilbert_coefficients(m, q)?.e1())).collect::<Result<Vec<_>>>()?;
    Ok(LambdaEstimate::from_values(values))
}

/// Sampled values of `χ_1(Q; M)`.
pub fn estimate_xi<F: Field>(m: &GradedModule<F>, cfg: &SampleConfig) -> Result<LambdaEstimate> {
    require_positive_dim(m)?;
    let qs = sample_parameter_ideals(m, cfg)?;
    let values = qs.par_iter().map(|q| chi1_serre(m, q)).collect::<Result<Vec<_>>>()?;
    Ok(LambdaEstimate::from_values(values))
}

/// A random element of `Q` of the least generator degree.
pub fn random_element<F: Field, R: Rng + ?Sized>(q: &ParameterIdeal<F>, rng: &mut R) -> Result<Poly<F>> {
    let low = q.degrees().into_iter().min().ok_or_else(|| Error::Precondition("empty ideal".into()))?;
    let mut h = Poly::zero(q.gens()[0].nvars());
    for (g, d) in q.gens().iter().zip(q.degrees()) {
        if d == low {
            h = h.try_add(&g.scale(&F::random(rng)))?;
        }
    }
    Ok(h)
}

/// A superficial element of `Q` for `M` and for each positive-dimensional
/// dual `M_j`, by redrawing until every check passes.
pub fn generic_section<F: Field, R: Rng + ?Sized>(
    m: &GradedModule<F>,
    q: &ParameterIdeal<F>,
    rng: &mut R,
    retry_limit: usize,
) -> Result<(Poly<F>, SuperficialReport)> {
    let profile = local_cohomology_lengths(m)?;
    let r = m.dim().unwrap_or(0);
    let mut duals = Vec::new();
    for j in 0..r {
        let d = profile.dual(j);
        if d.dim().is_some_and(|k| k >= 1) {
            duals.push((d, ParameterIdeal::primary(d, q.gens().to_vec())?));
        }
    }
    let mut reason = String::new();
    for _ in 0..retry_limit.max(1) {
        let h = random_element(q, rng)?;
        if h.is_zero() {
            continue;
        }
        let rep = superficial_check(m, q, &h)?;
        if !rep.pass {
            reason = "superficial check failed on the module".into();
            continue;
        }
        let mut ok = true;
        for (d, qd) in &duals {
            if !superficial_check(d, qd, &h)?.pass {
                ok = false;
                reason = "superficial check failed on a dual".into();
                break;
            }
        }
        if ok {
            return Ok((h, rep));
        }
    }
    Err(Error::RetryExhausted { attempts: retry_limit.max(1), reason })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Classification {
    pub dim: Option<usize>,
    pub depth: Option<usize>,
    pub cohen_macaulay: bool,
    pub unmixed: bool,
    pub generalized_cm: bool,
    /// `h^j(M)` for `j < dim`, `None` where infinite.
    pub h: Vec<Option<u64>>,
    pub buchsbaum: Option<BuchsbaumData>,
    pub standard_samples: Vec<StandardSample>,
    /// Every sampled parameter ideal is standard.
    pub buchsbaum_sampled: bool,
}

pub fn classify<F: Field>(m: &GradedModule<F>, cfg: &SampleConfig) -> Result<Classification> {
    let profile = local_cohomology_lengths(m)?;
    let unmixed = unmixed_from_profile(m, &profile)?.0.is_zero();
    let data = buchsbaum_data(&profile);
    let mut standard_samples = Vec::new();
    if let (Some(d), Some(r)) = (&data, profile.dim) {
        if r >= 1 {
            let qs = sample_parameter_ideals(m, cfg)?;
            standard_samples = qs.par_iter().map(|q| standard_sample(m, q, d)).collect::<Result<Vec<_>>>()?;
        }
    }
    let buchsbaum_sampled = data.is_some() && standard_samples.iter().all(|s| s.standard);
    Ok(Classification {
        dim: profile.dim,
        depth: profile.depth,
        cohen_macaulay: profile.is_cohen_macaulay(),
        unmixed,
        generalized_cm: profile.is_generalized_cm(),
        h: profile.h.iter().map(|l| l.finite()).collect(),
        buchsbaum: data,
        standard_samples,
        buchsbaum_sampled,
    })
}

/// `e_1` along `Q = (x_1^ℓ, x_2, ..., x_r)` for each `ℓ`.
pub fn power_sweep<F: Field>(m: &GradedModule<F>, sop: &[Poly<F>], ells: &[u32]) -> Result<Vec<(u32, i64)>> {
    let Some((first, rest)) = sop.split_first() else {
        return Err(Error::Precondition("empty system of parameters".into()));
    };
    ells.iter()
        .map(|&l| {
            let mut gens = vec![first.pow(l)];
            gens.extend(rest.iter().cloned());
            let q = ParameterIdeal::new(m, gens)?;
            Ok((l, hilbert_coefficients(m, &q)?.e1()))
        })
        .collect()
}

/// A parameter module `E ⊆ R^rank` over `R = S / ideal` with
/// `dim R + rank - 1` random linear columns.
pub fn random_parameter_module<F: Field, R: Rng + ?Sized>(
    nvars: usize,
    ideal: &[Poly<F>],
    rank: usize,
    rng: &mut R,
    retry_limit: usize,
) -> Result<ParameterModule<F>> {
    let d = GradedModule::cyclic(nvars, ideal)?.dim().ok_or_else(|| Error::Precondition("zero ring".into()))?;
    let m = d + rank - 1;
    let mut last = String::new();
    for _ in 0..retry_limit.max(1) {
        let columns = (0..m).map(|_| (0..rank).map(|_| random_form(nvars, 1, rng)).collect()).collect();
        match ParameterModule::new(nvars, ideal.to_vec(), rank, columns) {
            Ok(e) => return Ok(e),
            Err(Error::NotParameter { witness }) => last = witness,
            Err(Error::Precondition(w)) if w.contains("zero") => last = w,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryExhausted { attempts: retry_limit.max(1), reason: last })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::poly::PolyRing;

    type F = Fp<32003>;

    fn cyc(names: &[&str], rels: &[&str]) -> (PolyRing<F>, GradedModule<F>) {
        let r = PolyRing::<F>::new(names).unwrap();
        let ps: Vec<Poly<F>> = rels.iter().map(|g| r.parse(g).unwrap()).collect();
        let m = GradedModule::cyclic(r.nvars(), &ps).unwrap();
        (r, m)
    }

    #[test]
    fn linear_parameters_on_the_plane() {
        let (_, s) = cyc(&["x", "y"], &[]);
        let q = random_parameter_ideal(&s, &[1, 1], &mut sample_rng(7, 0), 8).unwrap();
        assert_eq!(q.colength(), 1);
        let err = random_parameter_ideal(&s, &[1, 1, 1], &mut sample_rng(7, 0), 8).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn two_plane_samples_are_constant() {
        let (_, m) = cyc(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        let cfg = SampleConfig { count: 6, ..SampleConfig::with_seed(3) };
        let lam = estimate_lambda(&m, &cfg).unwrap();
        assert_eq!(lam.distinct.into_iter().collect::<Vec<_>>(), vec![-1]);
        let c = classify(&m, &cfg).unwrap();
        assert!(c.buchsbaum_sampled && c.unmixed && !c.cohen_macaulay);
        assert_eq!(c.buchsbaum.unwrap().i_m, 1);
    }

    #[test]
    fn free_module_estimates_are_zero() {
        let (_, s) = cyc(&["x", "y"], &[]);
        let cfg = SampleConfig { count: 5, ..SampleConfig::with_seed(1) };
        assert_eq!(estimate_lambda(&s, &cfg).unwrap().distinct.into_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(estimate_xi(&s, &cfg).unwrap().distinct.into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn replay_is_deterministic() {
        let (_, m) = cyc(&["x", "y"], &["x^2", "x*y"]);
        let cfg = SampleConfig { count: 8, ..SampleConfig::with_seed(11) };
        let a = estimate_lambda(&m, &cfg).unwrap();
        let b = estimate_lambda(&m, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.distinct.into_iter().collect::<Vec<_>>(), vec![-1]);
    }

    #[test]
    fn mixed_module_has_unbounded_e1() {
        let r = PolyRing::<F>::new(&["x", "y"]).unwrap();
        let a = GradedModule::cyclic(2, &[r.parse("x").unwrap()]).unwrap();
        let m = a.direct_sum(&GradedModule::free(2, vec![0])).unwrap();
        let sweep = power_sweep(&m, &[r.parse("y").unwrap(), r.parse("x").unwrap()], &[1, 2, 3]).unwrap();
        assert_eq!(sweep, vec![(1, -1), (2, -2), (3, -3)]);
    }

    #[test]
    fn random_parameter_modules_have_the_right_shape() {
        let e = random_parameter_module::<F, _>(2, &[], 2, &mut sample_rng(2, 0), 8).unwrap();
        assert_eq!((e.rank(), e.gens_count()), (2, 3));
        assert!(e.is_parameter());
    }

    #[test]
    fn generic_sections_exist() {
        let (_, m) = cyc(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"]);
        let mut rng = sample_rng(5, 0);
        let q = random_parameter_ideal(&m, &[1, 1], &mut rng, 8).unwrap();
        let (_, rep) = generic_section(&m, &q, &mut rng, 8).unwrap();
        assert!(rep.pass);
    }
}
