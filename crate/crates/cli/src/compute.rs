//! The `compute` command: run the operations listed in a job.

use std::collections::BTreeMap;
use std::time::Instant;

use chern_core::brim::{br_coefficients, br_table, probe_conjecture};
use chern_core::hilbert::{hilbert_coefficients, hilbert_samuel};
use chern_core::homology::{depth_from_resolution, local_cohomology_lengths, unmixed_component};
use chern_core::invariants::{
    betti_bound_check, check_chi1_hdeg_bound, check_e1_torsion_bound, hilbert_characteristic, is_d_sequence,
    quasi_degree_check, HdegEngine,
};
use chern_core::koszul::{chi1_recursion_check, chi1_serre, koszul_homology};
use chern_core::resolution::minimal_free_resolution;
use chern_core::sampler::{classify, estimate_lambda, estimate_xi, generic_section, sample_rng, SampleConfig};
use chern_core::{Field, GradedModule};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dispatch::FieldChoice;
use crate::error::CliError;
use crate::instance::Instance;
use crate::job::{JobSpec, Operation, OutputFormat};
use crate::with_field;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub timings: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OpResult {
    pub op: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub verdicts: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub job: String,
    pub field: String,
    pub seed: u64,
    pub inputs: JobSpec,
    pub results: Vec<OpResult>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<u64>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    /// Tables only: one row per `(op, target, n)`.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(["job", "op", "target", "n", "value"]).map_err(io)?;
        for r in &self.results {
            let Some(table) = r.result.get("table").and_then(Value::as_array) else { continue };
            let target = r.target.clone().unwrap_or_default();
            for (n, v) in table.iter().enumerate() {
                w.write_record([self.job.as_str(), r.op.as_str(), target.as_str(), &n.to_string(), &v.to_string()])
                    .map_err(io)?;
            }
        }
        String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
            .map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => Ok(self.to_json()),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

pub fn sample_config(job: &JobSpec, seed: Option<u64>) -> SampleConfig {
    let mut cfg = job.sample.clone().unwrap_or_default();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg
}

pub fn run(job: &JobSpec, opts: &RunOptions) -> Result<Report, CliError> {
    let field = FieldChoice::resolve(job.ring.field).map_err(CliError::Schema)?;
    let cfg = sample_config(job, opts.seed);
    let (results, timings) = with_field!(field, F => run_typed::<F>(job, &cfg)?);
    let pass = results.iter().all(|r| r.verdicts.values().all(|&v| v));
    Ok(Report {
        tool: "chern",
        version: VERSION,
        job: job.name.clone(),
        field: field.to_string(),
        seed: cfg.seed,
        inputs: job.clone(),
        results,
        pass,
        timings_ms: opts.timings.then_some(timings),
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run_typed<F: Field>(job: &JobSpec, cfg: &SampleConfig) -> Result<(Vec<OpResult>, Vec<u64>), CliError> {
    let inst = Instance::<F>::build(job)?;
    let mut results = Vec::with_capacity(job.operations.len());
    let mut timings = Vec::with_capacity(job.operations.len());
    for (index, op) in job.operations.iter().enumerate() {
        let start = Instant::now();
        let mut verdicts = BTreeMap::new();
        let result = run_op(&inst, job, op, cfg, index as u64, &mut verdicts)?;
        timings.push(start.elapsed().as_millis() as u64);
        results.push(OpResult {
            op: op.label().to_string(),
            target: op.target().map(str::to_string),
            result,
            verdicts,
        });
    }
    Ok((results, timings))
}

fn series_value<F: Field>(m: &GradedModule<F>) -> Value {
    let s = m.series();
    let start = s.initial_degree().unwrap_or(0);
    let values: Vec<i64> = (start..start + 8).map(|d| s.value(d)).collect();
    json!({
        "numerator": s.numerator(),
        "shift": s.shift(),
        "dim": s.dim(),
        "multiplicity": s.multiplicity(),
        "initial_degree": s.initial_degree(),
        "values_from_initial_degree": values,
    })
}

fn run_op<F: Field>(
    inst: &Instance<F>,
    job: &JobSpec,
    op: &Operation,
    cfg: &SampleConfig,
    index: u64,
    verdicts: &mut BTreeMap<String, bool>,
) -> Result<Value, CliError> {
    Ok(match op {
        Operation::Dimension => json!({ "dim": inst.module()?.dim() }),
        Operation::Length => json!({ "length": inst.module()?.length() }),
        Operation::HilbertSeries => series_value(inst.module()?),
        Operation::Resolution => {
            let m = inst.module()?;
            let res = minimal_free_resolution(m, m.nvars() + 1)?;
            verdicts.insert("exact".into(), res.verify()?);
            verdicts.insert("minimal".into(), res.is_minimal());
            json!({ "betti": res.betti(), "graded_betti": res.graded_betti() })
        }
        Operation::Cohomology => {
            let m = inst.module()?;
            let p = local_cohomology_lengths(m)?;
            let duals: Vec<Value> = p
                .duals
                .iter()
                .enumerate()
                .map(|(j, d)| json!({ "j": j, "dim": d.dim(), "length": d.length() }))
                .collect();
            verdicts.insert("dual-dimensions".into(), (0..p.duals.len()).all(|j| p.dual_dim(j).is_none_or(|d| d <= j)));
            verdicts.insert("depth-agreement".into(), depth_from_resolution(m)? == p.depth);
            json!({
                "dim": p.dim,
                "depth": p.depth,
                "h": p.h,
                "cohen_macaulay": p.is_cohen_macaulay(),
                "generalized_cm": p.is_generalized_cm(),
                "duals": duals,
            })
        }
        Operation::UnmixedComponent => {
            let (u, n) = unmixed_component(inst.module()?)?;
            json!({
                "unmixed": u.is_zero(),
                "u_dim": u.dim(),
                "u_length": u.length(),
                "quotient_dim": n.dim(),
                "quotient_series": series_value(&n),
            })
        }
        Operation::Classify => to_value(&classify(inst.module()?, cfg)?),
        Operation::EstimateLambda => {
            let est = estimate_lambda(inst.module()?, cfg)?;
            verdicts.insert("nonpositive".into(), est.max.is_none_or(|v| v <= 0));
            to_value(&est)
        }
        Operation::EstimateXi => {
            let est = estimate_xi(inst.module()?, cfg)?;
            verdicts.insert("nonnegative".into(), est.min.is_none_or(|v| v >= 0));
            to_value(&est)
        }
        Operation::HilbertSamuel { ideal, n } => {
            let t = hilbert_samuel(inst.module()?, &inst.primary(ideal)?, *n)?;
            json!({ "table": t.values, "stabilized": t.stabilized })
        }
        Operation::HilbertCoefficients { ideal } => {
            let c = hilbert_coefficients(inst.module()?, &inst.primary(ideal)?)?;
            if c.r >= 1 {
                verdicts.insert("e1-nonpositive".into(), c.e1() <= 0);
            }
            to_value(&c)
        }
        Operation::Koszul { ideal } => {
            let m = inst.module()?;
            let q = inst.sop(ideal)?;
            let k = koszul_homology(m, &q)?;
            let serre = chi1_serre(m, &q)?;
            verdicts.insert("serre-identity".into(), k.chi1 == serre);
            verdicts.insert("chi1-nonnegative".into(), k.chi1 >= 0);
            json!({ "lengths": k.lengths, "chi": k.chi, "chi1": k.chi1, "chi1_serre": serre, "colength": q.colength() })
        }
        Operation::Chi1Recursion { ideal } => {
            let rep = chi1_recursion_check(inst.module()?, inst.ideal(ideal)?)?;
            verdicts.insert("recursion".into(), rep.holds);
            to_value(&rep)
        }
        Operation::Superficial { ideal } => {
            let m = inst.module()?;
            let q = inst.sop(ideal)?;
            let mut rng = sample_rng(cfg.seed, u64::MAX - index);
            let (h, rep) = generic_section(m, &q, &mut rng, cfg.retry_limit)?;
            verdicts.insert("superficial".into(), rep.pass);
            json!({ "h": inst.ring.format(&h), "report": to_value(&rep) })
        }
        Operation::Hdeg { ideal } => {
            let m = inst.module()?;
            let q = inst.primary(ideal)?;
            let rep = HdegEngine::new(q.gens()).report(m)?;
            verdicts.insert("hdeg-at-least-deg".into(), rep.hdeg as i64 >= rep.deg);
            let mut out = json!({ "hdeg": rep.hdeg, "deg": rep.deg, "torsions": rep.torsions });
            if m.dim().unwrap_or(0) >= 2 {
                let b = check_e1_torsion_bound(m, &q)?;
                verdicts.insert("e1-torsion-bound".into(), b.pass);
                out["e1_torsion_bound"] = to_value(&b);
            }
            if m.dim().unwrap_or(0) >= 1 && q.len() == m.dim().unwrap_or(0) {
                let b = check_chi1_hdeg_bound(m, &q)?;
                verdicts.insert("chi1-hdeg-bound".into(), b.pass);
                out["chi1_hdeg_bound"] = to_value(&b);
            }
            out
        }
        Operation::DSequence { ideal } => json!({ "d_sequence": is_d_sequence(inst.module()?, inst.ideal(ideal)?)? }),
        Operation::HilbertCharacteristic { ideal } => {
            let m = inst.module()?;
            let q = inst.sop(ideal)?;
            let h = hilbert_characteristic(m, q.gens())?;
            let d = is_d_sequence(m, q.gens())?;
            if d {
                verdicts.insert("equals-colength".into(), h == q.colength() as i64);
            }
            json!({ "h": h, "colength": q.colength(), "d_sequence": d })
        }
        Operation::QuasiDegree { ideal } => {
            let m = inst.module()?;
            let q = inst.sop(ideal)?;
            let rep = quasi_degree_check(m, q.gens())?;
            if is_d_sequence(m, q.gens())? {
                verdicts.insert("torsion-rule".into(), rep.torsion_rule);
                verdicts.insert("colength-rule".into(), rep.colength_rule);
                if let Some(s) = rep.section_rule {
                    verdicts.insert("section-rule".into(), s);
                }
            }
            to_value(&rep)
        }
        Operation::BettiBound { ideal } => {
            let rep = betti_bound_check(inst.module()?, inst.ideal(ideal)?)?;
            verdicts.insert("betti-bound".into(), rep.pass);
            to_value(&rep)
        }
        Operation::BuchsbaumRim { module } => {
            let spec = job
                .parameter_modules
                .get(module)
                .ok_or_else(|| CliError::Schema(format!("unknown parameter module {module:?}")))?;
            let e = inst.parameter_module(spec, module)?;
            let rep = br_coefficients(&e)?;
            let probe = probe_conjecture(&e)?;
            verdicts.insert("consistent".into(), rep.consistent());
            verdicts.insert("no-alert".into(), !probe.alert);
            json!({
                "rank": e.rank(),
                "gens": e.gens_count(),
                "ring_dim": e.ring_dim(),
                "colength": e.colength(),
                "table": rep.table,
                "report": to_value(&rep),
                "probe": to_value(&probe),
            })
        }
        Operation::BrTable { module, n } => {
            let spec = job
                .parameter_modules
                .get(module)
                .ok_or_else(|| CliError::Schema(format!("unknown parameter module {module:?}")))?;
            let e = inst.parameter_module(spec, module)?;
            json!({ "table": br_table(&e, *n)? })
        }
    })
}
