//! Turning a parsed job into engine objects over a concrete field.

use std::collections::BTreeMap;

use chern_core::brim::ParameterModule;
use chern_core::hilbert::ParameterIdeal;
use chern_core::{Field, FreeModule, GradedModule, Poly, PolyRing};

use crate::error::CliError;
use crate::job::{JobSpec, ModuleSpec, ParameterModuleSpec};

pub struct Instance<F: Field> {
    pub ring: PolyRing<F>,
    pub module: Option<GradedModule<F>>,
    pub ideals: BTreeMap<String, Vec<Poly<F>>>,
}

impl<F: Field> Instance<F> {
    pub fn build(job: &JobSpec) -> Result<Self, CliError> {
        let ring = PolyRing::<F>::new(&job.ring.variables).map_err(|e| CliError::schema("ring", e))?;
        let module = job.module.as_ref().map(|m| build_module(&ring, m, "module")).transpose()?;
        let mut ideals = BTreeMap::new();
        for (name, gens) in &job.ideals {
            ideals.insert(name.clone(), parse_all(&ring, gens, &format!("ideal {name}"))?);
        }
        Ok(Instance { ring, module, ideals })
    }

    pub fn module(&self) -> Result<&GradedModule<F>, CliError> {
        self.module.as_ref().ok_or_else(|| CliError::Schema("the job has no module".into()))
    }

    pub fn ideal(&self, name: &str) -> Result<&[Poly<F>], CliError> {
        self.ideals.get(name).map(Vec::as_slice).ok_or_else(|| CliError::Schema(format!("unknown ideal {name:?}")))
    }

    /// A named ideal with `M/QM` of finite length.
    pub fn primary(&self, name: &str) -> Result<ParameterIdeal<F>, CliError> {
        Ok(ParameterIdeal::primary(self.module()?, self.ideal(name)?.to_vec())?)
    }

    /// A named system of parameters.
    pub fn sop(&self, name: &str) -> Result<ParameterIdeal<F>, CliError> {
        Ok(ParameterIdeal::new(self.module()?, self.ideal(name)?.to_vec())?)
    }

    pub fn parameter_module(&self, spec: &ParameterModuleSpec, what: &str) -> Result<ParameterModule<F>, CliError> {
        let ideal = parse_all(&self.ring, &spec.ring_ideal, &format!("{what} ring ideal"))?;
        let mut columns = Vec::with_capacity(spec.columns.len());
        for (j, col) in spec.columns.iter().enumerate() {
            columns.push(parse_all(&self.ring, col, &format!("{what} column {j}"))?);
        }
        Ok(ParameterModule::new(self.ring.nvars(), ideal, spec.rank, columns)?)
    }
}

pub fn parse_all<F: Field>(ring: &PolyRing<F>, texts: &[String], what: &str) -> Result<Vec<Poly<F>>, CliError> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| ring.parse(t).map_err(|e| CliError::schema(&format!("{what}, entry {i} {t:?}"), e)))
        .collect()
}

fn build_module<F: Field>(ring: &PolyRing<F>, spec: &ModuleSpec, what: &str) -> Result<GradedModule<F>, CliError> {
    let n = ring.nvars();
    let given = [spec.ideal.is_some(), spec.relations.is_some() || spec.twists.is_some(), spec.direct_sum.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(CliError::Schema(format!("{what}: give exactly one of ideal, relations/twists, direct_sum")));
    }
    if let Some(ideal) = &spec.ideal {
        let ps = parse_all(ring, ideal, &format!("{what} ideal"))?;
        return GradedModule::cyclic(n, &ps).map_err(|e| CliError::schema(what, e));
    }
    if let Some(parts) = &spec.direct_sum {
        let mut acc: Option<GradedModule<F>> = None;
        for (i, p) in parts.iter().enumerate() {
            let m = build_module(ring, p, &format!("{what} summand {i}"))?;
            acc = Some(match acc {
                None => m,
                Some(a) => a.direct_sum(&m)?,
            });
        }
        return acc.ok_or_else(|| CliError::Schema(format!("{what}: empty direct sum")));
    }
    let relations = spec.relations.clone().unwrap_or_default();
    let twists = match &spec.twists {
        Some(t) => t.clone(),
        None => match relations.first() {
            Some(c) => vec![0; c.len()],
            None => return Err(CliError::Schema(format!("{what}: twists or relations are required"))),
        },
    };
    let fm = FreeModule::new(n, twists);
    let mut vecs = Vec::with_capacity(relations.len());
    for (j, col) in relations.iter().enumerate() {
        if col.len() != fm.rank() {
            return Err(CliError::Schema(format!(
                "{what}: relation {j} has {} entries for rank {}",
                col.len(),
                fm.rank()
            )));
        }
        let ps = parse_all(ring, col, &format!("{what} relation {j}"))?;
        vecs.push(fm.from_polys(&ps).map_err(|e| CliError::schema(what, e))?);
    }
    GradedModule::from_relations(&fm, vecs).map_err(|e| CliError::schema(what, e))
}
