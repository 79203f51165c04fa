use std::path::PathBuf;
use std::time::{Duration, Instant};

use chern::suite::{load_corpus, run_jobs, SuiteReport};
use chern::{run_suite, SuiteOptions};
use chern_core::brim::{br_coefficients, ParameterModule};
use chern_core::hilbert::{hilbert_coefficients, ParameterIdeal};
use chern_core::invariants::{check_chi1_hdeg_bound, check_e1_torsion_bound};
use chern_core::sampler::{sample_parameter_ideals, SampleConfig};
use chern_core::{GradedModule, Poly32003, PolyRing, F32003};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

fn cells(rep: &SuiteReport, check: &str, min_cases: usize) -> (bool, String) {
    let (cases, pass) = rep.summary(check);
    (pass && cases >= min_cases, format!("{check}: {cases} cases, pass = {pass}"))
}

fn ring(vars: &[&str]) -> PolyRing<F32003> {
    PolyRing::new(&vars.iter().map(|s| s.to_string()).collect::<Vec<_>>()).unwrap()
}

fn polys(r: &PolyRing<F32003>, texts: &[&str]) -> Vec<Poly32003> {
    texts.iter().map(|t| r.parse(t).unwrap()).collect()
}

fn two_plane() -> (PolyRing<F32003>, GradedModule<F32003>) {
    let r = ring(&["x", "y", "z", "w"]);
    let m = GradedModule::cyclic(4, &polys(&r, &["x*z", "x*w", "y*z", "y*w"])).unwrap();
    (r, m)
}

fn buchsbaum_constancy() -> Line {
    let (_, m) = two_plane();
    let cfg = SampleConfig { count: 25, ..SampleConfig::default() };
    let qs = sample_parameter_ideals(&m, &cfg).unwrap();
    let mut bad = Vec::new();
    for q in &qs {
        let c = hilbert_coefficients(&m, q).unwrap();
        let excess = q.colength() as i64 - c.e0();
        if c.e1() != -1 || excess != 1 {
            bad.push((c.e1(), excess));
        }
    }
    line(qs.len() == 25 && bad.is_empty(), format!("{} ideals, violations {bad:?}", qs.len()))
}

fn worked_examples() -> Line {
    let mut out = Vec::new();
    let r = ring(&["x", "y"]);
    let m = GradedModule::cyclic(2, &polys(&r, &["x^2", "x*y"])).unwrap();
    let q = ParameterIdeal::new(&m, polys(&r, &["y"])).unwrap();
    let chi = check_chi1_hdeg_bound(&m, &q).unwrap();
    out.push(("line with embedded point, chi1 bound", chi.pass && chi.slack == 0));

    let (r, m) = two_plane();
    let q = ParameterIdeal::new(&m, polys(&r, &["x+z", "y+w"])).unwrap();
    let tor = check_e1_torsion_bound(&m, &q).unwrap();
    let chi = check_chi1_hdeg_bound(&m, &q).unwrap();
    out.push(("two-plane, torsion bound", tor.pass && tor.slack == 0));
    out.push(("two-plane, chi1 bound", chi.pass && chi.slack == 0));
    line(out.iter().all(|(_, ok)| *ok), format!("equality {out:?}"))
}

fn scalar_brim() -> Line {
    let r = ring(&["x"]);
    let x = r.parse("x").unwrap();
    let zero = r.parse("0").unwrap();
    let e = ParameterModule::new(1, vec![], 2, vec![vec![x.clone(), zero.clone()], vec![zero, x]]).unwrap();
    let rep = br_coefficients(&e).unwrap();
    let want: Vec<u64> = (0..rep.table.len() as u64).map(|n| n * (n + 1)).collect();
    let ok = rep.table == want && rep.br == 2 && rep.br1 == 0 && rep.equality_case;
    line(
        ok,
        format!("xF over k[x]: table {:?}, br {}, br1 {}, equality {}", rep.table, rep.br, rep.br1, rep.equality_case),
    )
}

fn within(t: Duration, secs: u64) -> bool {
    t < Duration::from_secs(secs)
}

fn main() {
    let jobs = load_corpus(&corpus()).unwrap();
    let opts = SuiteOptions::default();
    let (modules, brims): (Vec<_>, Vec<_>) = jobs.into_iter().partition(|j| j.module.is_some());

    let start = Instant::now();
    let mods = run_jobs(&modules, &opts).unwrap();
    let module_time = start.elapsed();
    let start = Instant::now();
    let brim = run_jobs(&brims, &opts).unwrap();
    let brim_time = start.elapsed();

    let mut lines: Vec<(&str, Line)> = Vec::new();

    let (ok, d) = cells(&mods, "serre-identity", 30);
    lines.push(("serre identity", line(ok && within(module_time, 60), format!("{d}, {module_time:.1?} (< 60s)"))));

    let (ok, d) = cells(&mods, "negativity", 200);
    lines.push(("negativity", line(ok, d)));

    let (ok, d) = cells(&mods, "cm-criterion", 1);
    lines.push(("cm characterization", line(ok, d)));

    lines.push(("buchsbaum constancy", buchsbaum_constancy()));

    let (ok, d) = cells(&mods, "gen-cm-bound", 1);
    lines.push(("generalized cm bound", line(ok, d)));

    let (a, da) = cells(&mods, "torsion-bound", 1);
    let (b, db) = cells(&mods, "chi1-hdeg-bound", 1);
    let w = worked_examples();
    lines.push(("hdeg bounds", line(a && b && w.pass, format!("{da}; {db}; {}", w.detail))));

    let (ok, d) = cells(&mods, "superficial", 20);
    lines.push(("superficiality", line(ok, d)));

    let (a, da) = cells(&mods, "hilbert-characteristic", 1);
    let (b, db) = cells(&mods, "betti-bound", 1);
    lines.push(("hilbert characteristic", line(a && b, format!("{da}; {db}"))));

    let (a, da) = cells(&brim, "brim-degree", 1);
    let (b, db) = cells(&brim, "brim-negativity", 1);
    let s = scalar_brim();
    let ok = a && b && s.pass && within(brim_time, 120);
    lines.push(("buchsbaum-rim", line(ok, format!("{da}; {db}; {}; {brim_time:.1?} (< 120s)", s.detail))));

    let first = run_suite(&corpus(), &opts).unwrap().to_json();
    let second = run_suite(&corpus(), &opts).unwrap().to_json();
    let same = first == second && first.len() > 2;
    lines.push((
        "determinism",
        line(same && mods.pass && brim.pass, format!("{} bytes, identical = {same}", first.len())),
    ));

    for (i, (name, l)) in lines.iter().enumerate() {
        println!("{:>2} {} {name}: {}", i + 1, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed: Vec<_> = lines.iter().filter(|(_, l)| !l.pass).map(|(n, _)| *n).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", lines.len());
}
