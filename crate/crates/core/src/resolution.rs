//! Minimal graded free resolutions and Ext against the ring.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::field::Field;
use crate::gb::{self, SubmoduleGb};
use crate::graded::{subquotient, GradedModule};
use crate::module::{FreeModule, ModuleMap};

/// `0 <- F0 <- F1 <- ... <- Fk <- 0` with `maps[i]: F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct Resolution<F> {
    start: FreeModule,
    maps: Vec<ModuleMap<F>>,
}

impl<F: Field> Resolution<F> {
    pub fn maps(&self) -> &[ModuleMap<F>] {
        &self.maps
    }

    /// `F_i`, empty beyond the length.
    pub fn module(&self, i: usize) -> FreeModule {
        if i == 0 {
            self.start.clone()
        } else if i <= self.maps.len() {
            self.maps[i - 1].source().clone()
        } else {
            FreeModule::new(self.start.nvars(), Vec::new())
        }
    }

    /// Projective dimension (for a nonzero module).
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn betti(&self) -> Vec<usize> {
        (0..=self.maps.len()).map(|i| self.module(i).rank()).collect()
    }

    /// `β_{i,j}`: number of generators of `F_i` in degree `j`.
    pub fn graded_betti(&self) -> Vec<BTreeMap<i32, usize>> {
        (0..=self.maps.len())
            .map(|i| {
                let mut m = BTreeMap::new();
                for &t in self.module(i).twists() {
                    *m.entry(t).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }

    /// Consecutive maps compose to zero and the complex is exact in the middle.
    pub fn verify(&self) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !w[1].then(&w[0])?.is_zero() {
                return Ok(false);
            }
            let ker = gb::kernel(&w[0])?;
            let im = gb::image(&w[1])?;
            if !ker.same_as(&im)? {
                return Ok(false);
            }
        }
        if let Some(last) = self.maps.last() {
            if !gb::kernel(last)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// No entry of any differential is a nonzero constant.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| m.columns().iter().all(|c| c.terms().iter().all(|t| !t.mono.is_one())))
    }
}

/// Minimal graded free resolution of `m`, truncated after `max_len` maps.
pub fn minimal_free_resolution<F: Field>(m: &GradedModule<F>, max_len: usize) -> Result<Resolution<F>> {
    let p = m.pruned()?;
    let start = p.cover().clone();
    let mut maps = Vec::new();
    if p.relations().is_empty() || max_len == 0 {
        return Ok(Resolution { start, maps });
    }
    maps.push(p.presentation().clone());
    while maps.len() < max_len {
        let last = maps.last().expect("nonempty");
        let ker = gb::kernel(last)?;
        if ker.is_zero() {
            break;
        }
        let gens = gb::minimal_generators(last.source(), ker.basis())?;
        maps.push(ModuleMap::from_columns(last.source().clone(), gens)?);
    }
    Ok(Resolution { start, maps })
}

/// `Ext^i_S(M, S)` computed from a resolution of `M`.
pub fn ext_from_resolution<F: Field>(res: &Resolution<F>, i: usize) -> Result<GradedModule<F>> {
    let n = res.start.nvars();
    if i > res.length() {
        return Ok(GradedModule::free(n, Vec::new()));
    }
    let fi = res.module(i);
    let dual = FreeModule::new(n, fi.twists().iter().map(|t| -t).collect());
    let z = if i < res.maps.len() { gb::kernel(&res.maps[i].transpose())? } else { SubmoduleGb::full(&dual) };
    let b = if i >= 1 { gb::image(&res.maps[i - 1].transpose())? } else { SubmoduleGb::zero(&dual) };
    subquotient(&dual, z.basis(), b.basis())?.pruned()
}

pub fn ext<F: Field>(m: &GradedModule<F>, i: usize) -> Result<GradedModule<F>> {
    let res = minimal_free_resolution(m, m.nvars() + 1)?;
    ext_from_resolution(&res, i)
}
