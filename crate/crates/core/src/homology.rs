//! Local cohomology through graded duality, depth, and the unmixed
//! component.
//!
//! `M_j = Ext^{n-j}_S(M, S)` is the Matlis dual of `H^j_m(M)` up to a shift,
//! so `h^j(M) = λ(M_j)` whenever that length is finite.

use crate::error::Result;
use crate::field::Field;
use crate::graded::{saturate, subquotient, GradedModule};
use crate::hilbert_series::Length;
use crate::resolution::{ext_from_resolution, minimal_free_resolution, Resolution};

#[derive(Clone, Debug)]
pub struct CohomologyProfile<F> {
    /// Krull dimension of `M`, `None` for the zero module.
    pub dim: Option<usize>,
    /// `M_j` for `j = 0..=n`.
    pub duals: Vec<GradedModule<F>>,
    /// `h^j(M)` for `j < dim`.
    pub h: Vec<Length>,
    /// `None` for the zero module.
    pub depth: Option<usize>,
    pub resolution: Resolution<F>,
}

impl<F: Field> CohomologyProfile<F> {
    pub fn dual(&self, j: usize) -> &GradedModule<F> {
        &self.duals[j]
    }

    pub fn dual_dim(&self, j: usize) -> Option<usize> {
        self.duals[j].dim()
    }

    /// All `h^j`, `j < dim`, are finite.
    pub fn is_generalized_cm(&self) -> bool {
        self.h.iter().all(|l| l.is_finite())
    }

    pub fn is_cohen_macaulay(&self) -> bool {
        self.depth == self.dim
    }

    /// Finite `h^j` values; `None` when any is infinite.
    pub fn finite_h(&self) -> Option<Vec<u64>> {
        self.h.iter().map(|l| l.finite()).collect()
    }
}

/// `M_j = Ext^{n-j}(M, S)`.
pub fn ext_dual<F: Field>(m: &GradedModule<F>, j: usize) -> Result<GradedModule<F>> {
    let n = m.nvars();
    assert!(j <= n, "dual index {j} exceeds the number of variables {n}");
    let res = minimal_free_resolution(m, n + 1)?;
    ext_from_resolution(&res, n - j)
}

pub fn local_cohomology_lengths<F: Field>(m: &GradedModule<F>) -> Result<CohomologyProfile<F>> {
    let n = m.nvars();
    let res = minimal_free_resolution(m, n + 1)?;
    let mut duals = Vec::with_capacity(n + 1);
    for j in 0..=n {
        duals.push(ext_from_resolution(&res, n - j)?);
    }
    let dim = m.dim();
    let h = (0..dim.unwrap_or(0)).map(|j| duals[j].length()).collect();
    let depth = if dim.is_none() { None } else { (0..=n).find(|&j| !duals[j].is_zero()) };
    Ok(CohomologyProfile { dim, duals, h, depth, resolution: res })
}

/// Depth via the first nonvanishing dual; `None` for the zero module.
pub fn depth<F: Field>(m: &GradedModule<F>) -> Result<Option<usize>> {
    Ok(local_cohomology_lengths(m)?.depth)
}

/// Depth via Auslander–Buchsbaum.
pub fn depth_from_resolution<F: Field>(m: &GradedModule<F>) -> Result<Option<usize>> {
    if m.is_zero() {
        return Ok(None);
    }
    let res = minimal_free_resolution(m, m.nvars() + 1)?;
    Ok(Some(m.nvars() - res.length()))
}

/// The unmixed component `U` (largest submodule of dimension `< dim M`) and
/// `N = M / U`.
pub fn unmixed_component<F: Field>(m: &GradedModule<F>) -> Result<(GradedModule<F>, GradedModule<F>)> {
    let profile = local_cohomology_lengths(m)?;
    unmixed_from_profile(m, &profile)
}

pub fn unmixed_from_profile<F: Field>(
    m: &GradedModule<F>,
    profile: &CohomologyProfile<F>,
) -> Result<(GradedModule<F>, GradedModule<F>)> {
    let n = m.nvars();
    let zero = GradedModule::free(n, Vec::new());
    let Some(r) = profile.dim else { return Ok((zero, m.clone())) };
    let mut lower: Option<GradedModule<F>> = None;
    for s in 0..r {
        let d = &profile.duals[s];
        if d.is_zero() {
            continue;
        }
        lower = Some(match lower {
            None => d.clone(),
            Some(acc) => acc.direct_sum(d)?,
        });
    }
    let Some(lower) = lower else { return Ok((zero, m.clone())) };
    let j = lower.annihilator()?;
    let sat = saturate(m.gb(), &j)?;
    let u = subquotient(m.cover(), sat.basis(), m.gb().basis())?;
    let quotient = GradedModule::from_gb(sat)?;
    Ok((u, quotient))
}

pub fn is_unmixed<F: Field>(m: &GradedModule<F>) -> Result<bool> {
    Ok(unmixed_component(m)?.0.is_zero())
}

pub fn is_generalized_cm<F: Field>(m: &GradedModule<F>) -> Result<bool> {
    Ok(local_cohomology_lengths(m)?.is_generalized_cm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::poly::{Poly, PolyRing};

    type F = Fp<32003>;

    fn cyc(names: &[&str], gens: &[&str]) -> GradedModule<F> {
        let r = PolyRing::<F>::new(names).unwrap();
        let ps: Vec<Poly<F>> = gens.iter().map(|g| r.parse(g).unwrap()).collect();
        GradedModule::cyclic(r.nvars(), &ps).unwrap()
    }

    fn two_planes() -> GradedModule<F> {
        cyc(&["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"])
    }

    #[test]
    fn free_module_profile() {
        let s = GradedModule::<F>::free(2, vec![0]);
        let p = local_cohomology_lengths(&s).unwrap();
        assert!(p.dual(0).is_zero() && p.dual(1).is_zero());
        assert_eq!(p.h, vec![Length::Finite(0), Length::Finite(0)]);
        assert_eq!(p.depth, Some(2));
        assert!(p.is_cohen_macaulay());
    }

    #[test]
    fn line_with_embedded_point_profile() {
        let m = cyc(&["x", "y"], &["x^2", "x*y"]);
        let p = local_cohomology_lengths(&m).unwrap();
        assert_eq!(p.h, vec![Length::Finite(1)]);
        assert_eq!(p.depth, Some(0));
        assert!(p.is_generalized_cm());
        let (u, n) = unmixed_component(&m).unwrap();
        assert_eq!(u.length(), Length::Finite(1));
        assert_eq!(n.dim(), Some(1));
        assert!(is_unmixed(&n).unwrap());
    }

    #[test]
    fn two_planes_profile() {
        let m = two_planes();
        let p = local_cohomology_lengths(&m).unwrap();
        assert!(p.dual(0).is_zero());
        assert_eq!(p.dual(1).length(), Length::Finite(1));
        assert_eq!(p.h, vec![Length::Finite(0), Length::Finite(1)]);
        assert_eq!(p.depth, Some(1));
        assert_eq!(depth_from_resolution(&m).unwrap(), Some(1));
        assert!(is_unmixed(&m).unwrap());
        assert!(p.is_generalized_cm());
        for j in 0..=4 {
            assert!(p.dual_dim(j).is_none_or(|d| d <= j));
        }
    }

    #[test]
    fn direct_sum_mixed_module() {
        let a = cyc(&["x", "y"], &["x"]);
        let b = cyc(&["x", "y"], &["x", "y"]);
        let m = a.direct_sum(&b).unwrap();
        let (u, n) = unmixed_component(&m).unwrap();
        assert_eq!(u.length(), Length::Finite(1));
        assert_eq!(n.series(), a.series());

        let s = GradedModule::<F>::free(2, vec![0]);
        let mixed = a.direct_sum(&s).unwrap();
        assert!(!is_unmixed(&mixed).unwrap());
        assert!(!is_generalized_cm(&mixed).unwrap());
        let (u, _) = unmixed_component(&mixed).unwrap();
        assert_eq!(u.series(), a.series());
    }
}
