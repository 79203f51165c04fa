use chern_core::hilbert::{hilbert_coefficients, ParameterIdeal};
use chern_core::{GradedModule, PolyRing, F32003};

#[test]
fn line_with_embedded_point() -> chern_core::Result<()> {
    let r = PolyRing::<F32003>::new(&["x", "y"])?;
    let m = GradedModule::cyclic(2, &[r.parse("x^2")?, r.parse("x*y")?])?;
    let q = ParameterIdeal::new(&m, vec![r.parse("y")?])?;
    assert_eq!(hilbert_coefficients(&m, &q)?.e, vec![1, -1]);
    Ok(())
}
