//! The `check` command: every property check over a corpus directory.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chern_core::brim::{br_coefficients, probe_conjecture, ParameterModule};
use chern_core::hilbert::{hilbert_coefficients, ParameterIdeal, SuperficialReport};
use chern_core::homology::{depth_from_resolution, local_cohomology_lengths, unmixed_from_profile, CohomologyProfile};
use chern_core::invariants::{
    betti_bound_check, buchsbaum_data, hdeg_axioms, is_d_sequence, quasi_degree_check, BettiBoundReport, BuchsbaumData,
    HdegEngine, HdegReport, QuasiDegreeReport, StandardSample,
};
use chern_core::koszul::{chi1_recursion_check, koszul_homology};
use chern_core::sampler::{
    generic_section, random_parameter_module, sample_parameter_ideals, sample_rng, Classification, LambdaEstimate,
    SampleConfig,
};
use chern_core::{Field, GradedModule, Length};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::compute::{sample_config, VERSION};
use crate::dispatch::FieldChoice;
use crate::error::CliError;
use crate::instance::{parse_all, Instance};
use crate::job::{BrClaims, Claims, JobSpec};
use crate::with_field;

/// Random streams for hyperplane sections start here.
const SECTION_STREAM: u64 = 1 << 40;
/// Random streams for parameter modules start here.
const MODULE_STREAM: u64 = 1 << 41;

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Cell {
    pub pass: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Default for Cell {
    fn default() -> Self {
        Cell { pass: true, cases: 0, failures: Vec::new() }
    }
}

#[derive(Default)]
struct Checks {
    cells: BTreeMap<String, Cell>,
    observations: BTreeMap<String, Value>,
}

impl Checks {
    fn record(&mut self, check: &str, ok: bool, what: impl FnOnce() -> String) {
        let c = self.cells.entry(check.to_string()).or_default();
        c.cases += 1;
        if !ok {
            c.pass = false;
            c.failures.push(what());
        }
    }

    fn observe(&mut self, key: &str, v: Value) {
        self.observations.insert(key.to_string(), v);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_override: Option<u64>,
    pub instances: Vec<String>,
    /// `check -> instance -> cell`.
    pub matrix: BTreeMap<String, BTreeMap<String, Cell>>,
    pub observations: BTreeMap<String, BTreeMap<String, Value>>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    /// Total cases and overall verdict of one check across instances.
    pub fn summary(&self, check: &str) -> (usize, bool) {
        self.matrix
            .get(check)
            .map(|row| (row.values().map(|c| c.cases).sum(), row.values().all(|c| c.pass)))
            .unwrap_or((0, true))
    }

    pub fn failures(&self) -> Vec<(String, String, Vec<String>)> {
        let mut out = Vec::new();
        for (check, row) in &self.matrix {
            for (inst, cell) in row {
                if !cell.pass {
                    out.push((check.clone(), inst.clone(), cell.failures.clone()));
                }
            }
        }
        out
    }
}

/// All `*.json` files of `dir` in file-name order.
pub fn load_corpus(dir: &Path) -> Result<Vec<JobSpec>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut jobs = Vec::with_capacity(paths.len());
    let mut names = BTreeSet::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        let job = JobSpec::from_json(&text).map_err(|e| CliError::Schema(format!("{}: {e}", p.display())))?;
        if !names.insert(job.name.clone()) {
            return Err(CliError::Schema(format!("{}: duplicate instance name {:?}", p.display(), job.name)));
        }
        jobs.push(job);
    }
    Ok(jobs)
}

pub fn run_suite(dir: &Path, opts: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let jobs = load_corpus(dir)?;
    run_jobs(&jobs, opts)
}

pub fn run_jobs(jobs: &[JobSpec], opts: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let outcomes: Vec<Result<Checks, CliError>> = jobs.par_iter().map(|job| check_instance(job, opts)).collect();
    let mut matrix: BTreeMap<String, BTreeMap<String, Cell>> = BTreeMap::new();
    let mut observations = BTreeMap::new();
    for (job, outcome) in jobs.iter().zip(outcomes) {
        let checks = match outcome {
            Ok(c) => c,
            Err(e @ CliError::Schema(_)) => return Err(e),
            Err(e) => {
                let mut c = Checks::default();
                c.record("engine", false, || e.to_string());
                c
            }
        };
        for (check, cell) in checks.cells {
            matrix.entry(check).or_default().insert(job.name.clone(), cell);
        }
        observations.insert(job.name.clone(), checks.observations);
    }
    let pass = matrix.values().all(|row| row.values().all(|c| c.pass));
    Ok(SuiteReport {
        tool: "chern",
        version: VERSION,
        seed_override: opts.seed,
        instances: jobs.iter().map(|j| j.name.clone()).collect(),
        matrix,
        observations,
        pass,
    })
}

fn check_instance(job: &JobSpec, opts: &SuiteOptions) -> Result<Checks, CliError> {
    let field = FieldChoice::resolve(job.ring.field).map_err(CliError::Schema)?;
    let cfg = sample_config(job, opts.seed);
    let mut checks = Checks::default();
    checks.observe("field", json!(field.to_string()));
    checks.observe("seed", json!(cfg.seed));
    with_field!(field, F => {
        let inst = Instance::<F>::build(job)?;
        if inst.module.is_some() {
            module_checks(&inst, job, &cfg, &mut checks)?;
        }
        brim_checks(&inst, job, &cfg, &mut checks)?;
    });
    Ok(checks)
}

/// Everything computed for one parameter ideal.
struct Sample {
    label: String,
    degrees: Vec<u32>,
    colength: u64,
    e: Vec<i64>,
    chi1_koszul: i64,
    hdeg: HdegReport,
    section: Option<Result<SuperficialReport, String>>,
    d_sequence: bool,
    characteristic: i64,
    quasi: Option<QuasiDegreeReport>,
    betti: Option<BettiBoundReport>,
}

impl Sample {
    fn e1(&self) -> i64 {
        self.e.get(1).copied().unwrap_or(0)
    }

    fn excess(&self) -> i64 {
        self.colength as i64 - self.e[0]
    }
}

fn evaluate<F: Field>(
    m: &GradedModule<F>,
    q: &ParameterIdeal<F>,
    label: String,
    stream: u64,
    cfg: &SampleConfig,
) -> Result<Sample, CliError> {
    let c = hilbert_coefficients(m, q)?;
    let chi1_koszul = koszul_homology(m, q)?.chi1;
    let hdeg = HdegEngine::new(q.gens()).report(m)?;
    let degrees = q.degrees();
    let section = if degrees.contains(&1) {
        let mut rng = sample_rng(cfg.seed, SECTION_STREAM + stream);
        Some(generic_section(m, q, &mut rng, cfg.retry_limit).map(|(_, rep)| rep).map_err(|e| e.to_string()))
    } else {
        None
    };
    let d_sequence = is_d_sequence(m, q.gens())?;
    let quasi = if d_sequence { Some(quasi_degree_check(m, q.gens())?) } else { None };
    let betti =
        if d_sequence && degrees.iter().all(|&d| d == 1) { Some(betti_bound_check(m, q.gens())?) } else { None };
    Ok(Sample {
        label,
        degrees,
        colength: q.colength(),
        characteristic: c.characteristic(),
        e: c.e,
        chi1_koszul,
        hdeg,
        section,
        d_sequence,
        quasi,
        betti,
    })
}

fn module_checks<F: Field>(
    inst: &Instance<F>,
    job: &JobSpec,
    cfg: &SampleConfig,
    checks: &mut Checks,
) -> Result<(), CliError> {
    let m = inst.module()?;
    let profile = local_cohomology_lengths(m)?;
    let r = profile.dim.unwrap_or(0);
    let unmixed = unmixed_from_profile(m, &profile)?.0.is_zero();
    let cm = profile.is_cohen_macaulay();
    let data = buchsbaum_data(&profile);

    structural_checks(m, &profile, checks)?;

    let mut ideals: Vec<(String, ParameterIdeal<F>)> = Vec::new();
    if r >= 1 {
        for (i, q) in sample_parameter_ideals(m, cfg)?.into_iter().enumerate() {
            ideals.push((format!("sample {i}"), q));
        }
        for (name, gens) in &inst.ideals {
            if let Ok(q) = ParameterIdeal::new(m, gens.clone()) {
                ideals.push((format!("ideal {name}"), q));
            }
        }
    }
    let samples: Vec<Sample> = ideals
        .par_iter()
        .enumerate()
        .map(|(i, (label, q))| evaluate(m, q, label.clone(), i as u64, cfg))
        .collect::<Result<_, _>>()?;
    let sampled: Vec<&Sample> = samples.iter().filter(|s| s.label.starts_with("sample")).collect();

    for s in &samples {
        sample_checks(s, r, cm, unmixed, &profile, data.as_ref(), job, checks);
    }
    closure_checks(&samples, r, checks);

    if let Some((label, q)) = ideals.iter().find(|(_, q)| q.len() >= 2) {
        let g = q.gens();
        let mut moved = g.to_vec();
        for i in 1..moved.len() {
            if g[i].total_degree() == g[i - 1].total_degree() {
                moved[i] = &g[i] + &g[i - 1];
            }
        }
        let q2 = ParameterIdeal::new(m, moved)?;
        let (a, b) = (hilbert_coefficients(m, q)?, hilbert_coefficients(m, &q2)?);
        checks.record("generator-invariance", a.e == b.e && q.colength() == q2.colength(), || {
            format!("{label}: e = {:?} but {:?} after a triangular change of generators", a.e, b.e)
        });
    }

    if r == 0 {
        let hd = HdegEngine::new(&[]).hdeg(m)?;
        let len = m.length().finite().unwrap_or(0);
        checks.record("hdeg-chain", hd == len, || format!("hdeg {hd} differs from the length {len}"));
    }

    if r >= 2 {
        for (label, q) in ideals.iter().take(3) {
            let rep = chi1_recursion_check(m, q.gens())?;
            checks.record("chi1-recursion", rep.holds, || format!("{label}: {rep:?}"));
        }
    }

    if let Some((label, q)) = ideals.iter().find(|(_, q)| q.degrees().contains(&1)) {
        let mut rng = sample_rng(cfg.seed, SECTION_STREAM - 1);
        if let Ok((h, _)) = generic_section(m, q, &mut rng, cfg.retry_limit) {
            let rep = hdeg_axioms(m, q, &h)?;
            let ok = rep.torsion_rule
                && rep.bertini != Some(false)
                && rep.torsion_section != Some(false)
                && rep.calibration != Some(false);
            checks.record("hdeg-axioms", ok, || format!("{label}: {rep:?}"));
        }
    }

    let lambda = LambdaEstimate::from_values(sampled.iter().map(|s| s.e1()).collect());
    let xi = LambdaEstimate::from_values(sampled.iter().map(|s| s.chi1_koszul).collect());
    if r >= 1 && !sampled.is_empty() {
        if cm {
            checks.record(
                "lambda-grid",
                lambda.distinct == BTreeSet::from([0]) && xi.distinct == BTreeSet::from([0]),
                || {
                    format!(
                        "Cohen–Macaulay module with e1 values {:?} and chi1 values {:?}",
                        lambda.distinct, xi.distinct
                    )
                },
            );
        }
        if job.claims.buchsbaum == Some(true) {
            checks.record("lambda-grid", lambda.is_singleton(), || {
                format!("Buchsbaum module with e1 values {:?}", lambda.distinct)
            });
        }
        if let (Some(d), true) = (&data, r >= 2) {
            let lo = -(d.bound_s as i64);
            let ok = lambda.min.is_none_or(|v| v >= lo) && lambda.max.is_none_or(|v| v <= 0);
            checks.record("lambda-grid", ok, || format!("e1 values {:?} outside [{lo}, 0]", lambda.distinct));
        }
    }

    if let Some(sweep) = &job.sweep {
        let sop = parse_all(&inst.ring, &sweep.sop, "sweep sop")?;
        let values = chern_core::sampler::power_sweep(m, &sop, &sweep.powers)?;
        let ok = values.windows(2).all(|w| w[1].1 < w[0].1) && values.iter().all(|v| v.1 <= 0);
        checks.record("power-sweep", ok, || format!("e1 along the powers: {values:?}"));
        checks.observe("power_sweep", json!(values));
    }

    let standard: Vec<StandardSample> = match &data {
        Some(d) if r >= 1 => sampled
            .iter()
            .map(|s| StandardSample {
                colength: s.colength,
                e: s.e.clone(),
                excess: s.excess(),
                standard: s.excess() == d.i_m as i64,
            })
            .collect(),
        _ => Vec::new(),
    };
    let classification = Classification {
        dim: profile.dim,
        depth: profile.depth,
        cohen_macaulay: cm,
        unmixed,
        generalized_cm: profile.is_generalized_cm(),
        h: profile.h.iter().map(|l| l.finite()).collect(),
        buchsbaum_sampled: data.is_some() && standard.iter().all(|s| s.standard),
        buchsbaum: data.clone(),
        standard_samples: Vec::new(),
    };
    claim_checks(inst, &job.claims, &classification, &lambda, &samples, checks);

    let mut conventions = BTreeMap::from([("plain", 0usize), ("signed", 0), ("d_sequences", 0)]);
    for s in &samples {
        if let Some(q) = &s.quasi {
            *conventions.get_mut("d_sequences").expect("key") += 1;
            *conventions.get_mut("plain").expect("key") += q.e_top_plain as usize;
            *conventions.get_mut("signed").expect("key") += q.e_top_signed as usize;
        }
    }
    checks.observe("classification", serde_json::to_value(&classification).expect("serializable"));
    checks.observe("lambda", json!(lambda.distinct));
    checks.observe("xi", json!(xi.distinct));
    checks.observe("top_coefficient_conventions", json!(conventions));
    checks.observe(
        "samples",
        json!(samples
            .iter()
            .map(|s| json!({
                "label": s.label,
                "degrees": s.degrees,
                "colength": s.colength,
                "e": s.e,
                "chi1": s.chi1_koszul,
                "hdeg": s.hdeg.hdeg,
                "torsions": s.hdeg.torsions,
                "d_sequence": s.d_sequence,
            }))
            .collect::<Vec<_>>()),
    );
    Ok(())
}

fn structural_checks<F: Field>(
    m: &GradedModule<F>,
    profile: &CohomologyProfile<F>,
    checks: &mut Checks,
) -> Result<(), CliError> {
    for j in 0..profile.duals.len() {
        let d = profile.dual_dim(j);
        checks.record("dual-dimensions", d.is_none_or(|d| d <= j), || format!("dim M_{j} = {d:?}"));
    }
    let via_res = depth_from_resolution(m)?;
    checks.record("depth-agreement", via_res == profile.depth, || {
        format!("depth {:?} from duals, {via_res:?} from the resolution", profile.depth)
    });
    Ok(())
}

/// Linear parameter ideals are reductions of the maximal ideal, so they share one integral closure.
fn closure_checks(samples: &[Sample], r: usize, checks: &mut Checks) {
    let family: Vec<&Sample> = samples.iter().filter(|s| s.degrees.iter().all(|&d| d == 1)).collect();
    if family.len() < 2 {
        return;
    }
    let gaps: BTreeSet<i64> = family.iter().map(|s| s.hdeg.hdeg as i64 - s.hdeg.deg).collect();
    let gap = *gaps.iter().next().unwrap();
    let mut ok = gaps.len() == 1 && family.iter().all(|s| s.chi1_koszul <= gap);
    let mut t1s = BTreeSet::new();
    if r >= 2 {
        t1s = family.iter().map(|s| s.hdeg.torsions[0] as i64).collect();
        let t1 = *t1s.iter().next().unwrap();
        ok &= t1s.len() == 1 && family.iter().all(|s| -s.e1() <= t1 && s.e1() <= 0);
    }
    checks.record("closure-family", ok, || {
        format!("{} linear ideals: hdeg - deg values {gaps:?}, T1 values {t1s:?}", family.len())
    });
}

#[allow(clippy::too_many_arguments)]
fn sample_checks<F: Field>(
    s: &Sample,
    r: usize,
    cm: bool,
    unmixed: bool,
    profile: &CohomologyProfile<F>,
    data: Option<&BuchsbaumData>,
    job: &JobSpec,
    checks: &mut Checks,
) {
    let label = &s.label;
    let e1 = s.e1();
    let serre = s.excess();
    checks.record("serre-identity", s.chi1_koszul == serre, || {
        format!("{label}: Koszul chi1 {} but colength minus e0 is {serre}", s.chi1_koszul)
    });
    checks.record("negativity", e1 <= 0 && s.chi1_koszul >= 0, || {
        format!("{label}: e1 = {e1}, chi1 = {}", s.chi1_koszul)
    });
    if unmixed {
        checks.record("cm-criterion", (e1 == 0) == cm, || format!("{label}: e1 = {e1} on a module with CM = {cm}"));
        let zeros = s.e.iter().skip(1).take_while(|&&v| v == 0).count();
        let ok = (1..=zeros).all(|j| profile.h.get(r - j).is_some_and(|h| *h == Length::Finite(0)));
        checks.record("cohomology-vanishing", ok, || format!("{label}: e = {:?}, h = {:?}", s.e, profile.h));
        if r >= 2 {
            let h1 = profile.h[1];
            checks.record("unmixed-h1", h1.is_finite(), || "h^1 is infinite on an unmixed module".into());
        }
    }
    if let Some(d) = data {
        if r >= 2 {
            let lo = -(d.bound_s as i64);
            checks.record("gen-cm-bound", lo <= e1 && e1 <= 0, || format!("{label}: e1 = {e1} outside [{lo}, 0]"));
            let tight = e1 == lo;
            let standard = serre == d.i_m as i64;
            checks.record("standardness", tight == standard && (0..=d.i_m as i64).contains(&serre), || {
                format!("{label}: e1 = {e1}, bound {lo}, colength minus e0 = {serre}, I(M) = {}", d.i_m)
            });
        } else if r == 1 {
            let h0 = d.h[0] as i64;
            checks.record("dimension-one", e1 == -h0, || format!("{label}: e1 = {e1} but h^0 = {h0}"));
        }
        if job.claims.buchsbaum == Some(true) {
            let want = if r >= 2 { -(d.bound_s as i64) } else { -(d.h[0] as i64) };
            checks.record("buchsbaum-constancy", e1 == want && serre == d.i_m as i64, || {
                format!("{label}: e1 = {e1} (want {want}), colength minus e0 = {serre} (want {})", d.i_m)
            });
        }
    }
    let hd = &s.hdeg;
    let mut chain = hd.hdeg as i64 >= hd.deg;
    if let Some(&t1) = hd.torsions.first() {
        chain &= hd.hdeg > t1 && hd.torsions.windows(2).all(|w| w[0] >= w[1]);
    }
    if cm {
        chain &= hd.hdeg as i64 == hd.deg && hd.torsions.iter().all(|&t| t == 0);
    }
    checks.record("hdeg-chain", chain, || format!("{label}: {hd:?}"));
    if r >= 2 {
        let t1 = hd.torsions[0] as i64;
        checks.record("torsion-bound", -e1 <= t1, || format!("{label}: -e1 = {} exceeds T1 = {t1}", -e1));
    }
    let gap = hd.hdeg as i64 - hd.deg;
    checks.record("chi1-hdeg-bound", s.chi1_koszul <= gap, || {
        format!("{label}: chi1 = {} exceeds hdeg - deg = {gap}", s.chi1_koszul)
    });
    match &s.section {
        Some(Ok(rep)) => checks.record("superficial", rep.pass, || format!("{label}: {rep:?}")),
        Some(Err(e)) => checks.record("superficial", false, || format!("{label}: {e}")),
        None => {}
    }
    if s.d_sequence {
        checks.record("hilbert-characteristic", s.characteristic == s.colength as i64, || {
            format!("{label}: h = {} but colength {}", s.characteristic, s.colength)
        });
        if let Some(q) = &s.quasi {
            let ok = q.torsion_rule && q.section_rule != Some(false) && q.colength_rule;
            checks.record("quasi-degree", ok, || format!("{label}: {q:?}"));
        }
    }
    if let Some(b) = &s.betti {
        checks.record("betti-bound", b.pass, || format!("{label}: {b:?}"));
    }
}

fn claim_checks<F: Field>(
    inst: &Instance<F>,
    claims: &Claims,
    c: &Classification,
    lambda: &LambdaEstimate,
    samples: &[Sample],
    checks: &mut Checks,
) {
    fn cmp<T: PartialEq + std::fmt::Debug>(checks: &mut Checks, what: &str, claimed: &Option<T>, got: T) {
        if let Some(want) = claimed {
            checks.record("claims", *want == got, || format!("{what}: claimed {want:?}, computed {got:?}"));
        }
    }
    cmp(checks, "dim", &claims.dim, c.dim.unwrap_or(0));
    cmp(checks, "depth", &claims.depth, c.depth.unwrap_or(0));
    cmp(checks, "cohen_macaulay", &claims.cohen_macaulay, c.cohen_macaulay);
    cmp(checks, "unmixed", &claims.unmixed, c.unmixed);
    cmp(checks, "generalized_cm", &claims.generalized_cm, c.generalized_cm);
    cmp(checks, "buchsbaum", &claims.buchsbaum, c.buchsbaum_sampled);
    cmp(checks, "h", &claims.h, c.h.clone());
    cmp(checks, "lambda", &claims.lambda, lambda.distinct.iter().copied().collect::<Vec<_>>());
    for (name, want) in &claims.hdeg {
        let got = samples.iter().find(|s| s.label == format!("ideal {name}")).map(|s| s.hdeg.hdeg).or_else(|| {
            let q = inst.ideals.get(name)?;
            HdegEngine::new(q).hdeg(inst.module.as_ref()?).ok()
        });
        checks.record("claims", got == Some(*want), || format!("hdeg for {name}: claimed {want}, computed {got:?}"));
    }
    for (name, want) in &claims.coefficients {
        let got = samples.iter().find(|s| s.label == format!("ideal {name}")).map(|s| s.e.clone()).or_else(|| {
            let m = inst.module.as_ref()?;
            let q = ParameterIdeal::primary(m, inst.ideals.get(name)?.clone()).ok()?;
            hilbert_coefficients(m, &q).ok().map(|c| c.e)
        });
        checks.record("claims", got.as_ref() == Some(want), || {
            format!("coefficients for {name}: claimed {want:?}, computed {got:?}")
        });
    }
}

fn brim_checks<F: Field>(
    inst: &Instance<F>,
    job: &JobSpec,
    cfg: &SampleConfig,
    checks: &mut Checks,
) -> Result<(), CliError> {
    let mut modules: Vec<(String, ParameterModule<F>, Option<&BrClaims>)> = Vec::new();
    for (name, spec) in &job.parameter_modules {
        modules.push((name.clone(), inst.parameter_module(spec, name)?, Some(&spec.claims)));
    }
    let mut stream = MODULE_STREAM;
    for (k, spec) in job.random_parameter_modules.iter().enumerate() {
        let ideal = parse_all(&inst.ring, &spec.ring_ideal, "random parameter module ring ideal")?;
        for i in 0..spec.count {
            let mut rng = sample_rng(cfg.seed, stream);
            stream += 1;
            let e = random_parameter_module(inst.ring.nvars(), &ideal, spec.rank, &mut rng, cfg.retry_limit)?;
            modules.push((format!("random {k}.{i}"), e, None));
        }
    }
    if modules.is_empty() {
        return Ok(());
    }
    let reports = modules
        .par_iter()
        .map(|(_, e, _)| Ok((br_coefficients(e)?, probe_conjecture(e)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut observed = Vec::new();
    for ((name, e, claims), (rep, probe)) in modules.iter().zip(&reports) {
        let d = e.poly_degree();
        checks.record("brim-degree", rep.degree == d && rep.br >= 1, || {
            format!("{name}: degree {} with br = {}", rep.degree, rep.br)
        });
        if e.is_parameter() {
            checks.record("brim-negativity", rep.br1 <= 0, || format!("{name}: br1 = {}", rep.br1));
            checks.record("brim-lower-bound", rep.lower_bound_holds, || {
                format!("{name}: table {:?}, br {}", rep.table, rep.br)
            });
            if probe.is_cm {
                checks.record("brim-cm-equality", rep.equality_everywhere, || {
                    format!("{name}: Cohen–Macaulay ring, table {:?}, br {}", rep.table, rep.br)
                });
            }
        }
        if rep.equality_case {
            checks.record("brim-equality", rep.equality_everywhere && rep.br1 == 0, || {
                format!("{name}: equality at some n but table {:?}, br1 = {}", rep.table, rep.br1)
            });
        }
        checks.record("brim-conjecture", !probe.alert, || format!("{name}: unmixed, br1 = 0, not Cohen–Macaulay"));
        if e.rank() == 1 && e.gens_count() == e.ring_dim() {
            let ring = GradedModule::cyclic(inst.ring.nvars(), e.ideal())?;
            let gens: Vec<_> = e.columns().iter().map(|c| c[0].clone()).collect();
            let q = ParameterIdeal::new(&ring, gens)?;
            let c = hilbert_coefficients(&ring, &q)?;
            checks.record("brim-ideal-case", c.e0() == rep.br && c.e1() == rep.br1, || {
                format!("{name}: br = {}, br1 = {} against e = {:?}", rep.br, rep.br1, c.e)
            });
        }
        if let Some(cl) = claims {
            if let Some(t) = &cl.table {
                let got = &rep.table[..t.len().min(rep.table.len())];
                checks.record("brim-claims", got == t.as_slice(), || format!("{name}: table {got:?}, claimed {t:?}"));
            }
            for (what, want, got) in [("br", cl.br, rep.br), ("br1", cl.br1, rep.br1)] {
                if let Some(w) = want {
                    checks.record("brim-claims", w == got, || format!("{name}: {what} = {got}, claimed {w}"));
                }
            }
            if let Some(w) = cl.equality_case {
                checks.record("brim-claims", w == rep.equality_case, || {
                    format!("{name}: equality case {}", rep.equality_case)
                });
            }
        }
        observed.push(json!({
            "module": name,
            "rank": e.rank(),
            "gens": e.gens_count(),
            "ring_dim": e.ring_dim(),
            "table": rep.table,
            "br": rep.br,
            "br1": rep.br1,
            "equality_case": rep.equality_case,
            "probe": serde_json::to_value(probe).expect("serializable"),
        }));
    }
    checks.observe("buchsbaum_rim", json!(observed));
    Ok(())
}
