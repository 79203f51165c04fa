use chern_core::brim::{br_coefficients, ParameterModule};
use chern_core::gb::groebner;
use chern_core::hilbert::{hilbert_coefficients, ParameterIdeal};
use chern_core::homology::{depth, depth_from_resolution};
use chern_core::koszul::{chi1_serre, koszul_homology};
use chern_core::resolution::minimal_free_resolution;
use chern_core::{FreeModule, GradedModule, Poly32003, PolyQ, PolyRing, F32003};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

fn ring() -> PolyRing<F32003> {
    PolyRing::new(&VARS.map(String::from)).unwrap()
}

/// Text of a random form of degree `1..=3` with up to three terms.
fn poly_text() -> impl Strategy<Value = String> {
    (1u32..4, prop::collection::vec((1i64..7, 0u32..4, 0u32..4), 1..4)).prop_map(|(deg, terms)| {
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(c, a, b)| {
                let a = a % (deg + 1);
                let b = b % (deg - a + 1);
                format!("{c}*x^{a}*y^{b}*z^{}", deg - a - b)
            })
            .collect();
        parts.join("+")
    })
}

fn linear_text() -> impl Strategy<Value = String> {
    (1i64..50, 0i64..50, 0i64..50).prop_map(|(a, b, c)| format!("{a}*x+{b}*y+{c}*z"))
}

fn parse(r: &PolyRing<F32003>, ts: &[String]) -> Vec<Poly32003> {
    ts.iter().map(|t| r.parse(t).unwrap()).collect()
}

fn ideal_gb(ps: &[Poly32003]) -> chern_core::SubmoduleGb<F32003> {
    let f = FreeModule::new(3, vec![0]);
    groebner(&f, ps.iter().map(|p| f.from_polys(std::slice::from_ref(p)).unwrap()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn groebner_basis_contains_generators_and_products(ts in prop::collection::vec(poly_text(), 1..4), m in poly_text()) {
        let r = ring();
        let ps = parse(&r, &ts);
        let gb = ideal_gb(&ps);
        prop_assert!(gb.verify());
        let f = FreeModule::new(3, vec![0]);
        let mult = r.parse(&m).unwrap();
        for p in &ps {
            prop_assert!(gb.contains(&f.from_polys(std::slice::from_ref(p)).unwrap()).unwrap());
            let prod = &mult * p;
            prop_assert!(gb.contains(&f.from_polys(&[prod]).unwrap()).unwrap());
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_a_representative(ts in prop::collection::vec(poly_text(), 1..3), g in poly_text()) {
        let r = ring();
        let gb = ideal_gb(&parse(&r, &ts));
        let f = FreeModule::new(3, vec![0]);
        let v = f.from_polys(&[r.parse(&g).unwrap()]).unwrap();
        let nf = gb.normal_form(&v).unwrap();
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        let diff = f.add_scaled(&v, &nf, &F32003::new(32002), &chern_core::Monomial::one());
        prop_assert!(gb.contains(&diff).unwrap());
    }

    #[test]
    fn resolutions_are_exact_minimal_and_short(ts in prop::collection::vec(poly_text(), 1..4)) {
        let r = ring();
        let m = GradedModule::cyclic(3, &parse(&r, &ts)).unwrap();
        let res = minimal_free_resolution(&m, 8).unwrap();
        prop_assert!(res.verify().unwrap());
        prop_assert!(res.is_minimal());
        prop_assert!(res.length() <= 3);
    }

    #[test]
    fn depth_is_bounded_by_dimension_and_agrees(ts in prop::collection::vec(poly_text(), 1..3)) {
        let r = ring();
        let m = GradedModule::cyclic(3, &parse(&r, &ts)).unwrap();
        prop_assume!(!m.is_zero());
        let dp = depth(&m).unwrap();
        prop_assert!(dp <= m.dim());
        prop_assert_eq!(dp, depth_from_resolution(&m).unwrap());
    }

    #[test]
    fn serre_identity_and_negativity(f in poly_text(), a in linear_text(), b in linear_text()) {
        let r = ring();
        let m = GradedModule::cyclic(3, &parse(&r, &[f])).unwrap();
        prop_assume!(m.dim() == Some(2));
        let q = ParameterIdeal::new(&m, parse(&r, &[a, b]));
        prop_assume!(q.is_ok());
        let q = q.unwrap();
        let k = koszul_homology(&m, &q).unwrap();
        prop_assert_eq!(k.chi1, chi1_serre(&m, &q).unwrap());
        prop_assert!(k.chi1 >= 0);
        let c = hilbert_coefficients(&m, &q).unwrap();
        prop_assert!(c.e1() <= 0);
        prop_assert_eq!(c.table[0], q.colength());
    }

    #[test]
    fn brim_degree_and_sign(cs in prop::collection::vec(linear_text(), 2)) {
        let r = PolyRing::<F32003>::new(&["x".to_string(), "y".to_string()]).unwrap();
        let cols: Vec<Vec<Poly32003>> = cs
            .iter()
            .map(|t| vec![r.parse(&t.replace("*z", "*x")).unwrap()])
            .collect();
        let e = ParameterModule::new(2, vec![], 1, cols);
        prop_assume!(e.is_ok());
        let rep = br_coefficients(&e.unwrap()).unwrap();
        prop_assert_eq!(rep.degree, 2);
        prop_assert!(rep.br1 <= 0);
        prop_assert!(rep.consistent());
    }
}

#[test]
fn rationals_agree_with_a_large_prime() {
    let names = VARS.map(String::from);
    let rq = PolyRing::<chern_core::Rational>::new(&names).unwrap();
    let rp = ring();
    let gens = ["x^2-y*z", "x*y-z^2", "y^2-x*z"];
    let pq: Vec<PolyQ> = gens.iter().map(|t| rq.parse(t).unwrap()).collect();
    let pp: Vec<Poly32003> = gens.iter().map(|t| rp.parse(t).unwrap()).collect();
    let mq = GradedModule::cyclic(3, &pq).unwrap();
    let mp = GradedModule::cyclic(3, &pp).unwrap();
    assert_eq!(mq.series(), mp.series());
    let res_q = minimal_free_resolution(&mq, 8).unwrap();
    let res_p = minimal_free_resolution(&mp, 8).unwrap();
    assert_eq!(res_q.graded_betti(), res_p.graded_betti());
}
