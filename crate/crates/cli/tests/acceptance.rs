use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jb_cli::format::{load_pair, AlgebraFile};
use jb_core::conecomplex::{
    build_codifferential, check_d_squared, check_structural_zeros, export_cone_brackets, ConeMode,
};
use jb_core::formalfields::{first_failing_order, verify_field_morphism};
use jb_core::jbtwist::{solve_cn_in, twisted_action, twisted_action_with, LiePair};
use jb_core::liecore::linf::check_linfinity;
use jb_core::liecore::AlgebraSpec;
use jb_core::operadengine::{
    check_delta_squared, check_dilation_grading, check_dilation_grading_with,
    check_jb_against_action, check_jb_chain_map, check_jb_chain_map_with,
    check_jb_half_against_general, check_jb_half_chain_map, lift_jb_infinity, verify_lift,
    Conventions, Gen, Operad, TreeSum,
};
use jb_core::scalars::{
    bernoulli, bernoulli_akiyama_tanigawa, bernoulli_over_factorial, bernoulli_recurrence_holds,
    frac, int, Scalar,
};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn pair(name: &str) -> LiePair {
    load_pair(&fixture(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

const STRICT_PAIRS: [&str; 4] = [
    "sl2_gl2",
    "sl2_identity",
    "heisenberg_abelianization",
    "nonabelian2_identity",
];

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, format!("{what} took {e:?}, limit {limit:?}"))
}

fn bernoulli_table() -> Outcome {
    let t = Instant::now();
    for n in 0..=20 {
        ensure(
            bernoulli(n) == bernoulli_akiyama_tanigawa(n),
            format!("B_{n} disagrees with the independent algorithm"),
        )?;
    }
    ensure(bernoulli_recurrence_holds(20), "recurrence fails below 20")?;
    ensure(bernoulli(0) == int(1), "B_0")?;
    ensure(bernoulli(1) == frac(-1, 2), "B_1")?;
    ensure(bernoulli(2) == frac(1, 6), "B_2")?;
    within(t, Duration::from_secs(1), "bernoulli")?;
    Ok(format!("B_20 = {}", bernoulli(20)))
}

fn recursion_oracle() -> Outcome {
    let t = Instant::now();
    let c = solve_cn_in(8, 10).map_err(|e| e.to_string())?;
    let expected: Vec<Scalar> = (0..=8).map(bernoulli_over_factorial).collect();
    ensure(c == expected, format!("c = {c:?}"))?;
    ensure(int(2) * &c[1] == int(-1), "2c_1 = -1")?;
    ensure(int(3) * &c[2] == frac(1, 4), "3c_2 = 1/4")?;
    within(t, Duration::from_secs(120), "solve_cn(8)")?;
    Ok(format!("c_8 = {} in {:.1?}", c[8], t.elapsed()))
}

fn twisted_action_is_a_morphism() -> Outcome {
    let pairs = [
        "sl2_gl2",
        "sl2_identity",
        "heisenberg_abelianization",
        "nonabelian2_identity",
    ];
    for name in pairs {
        let t = Instant::now();
        let p = pair(name);
        let fields = twisted_action(&p, 6).map_err(|e| e.to_string())?;
        let report = verify_field_morphism(&fields, &p.g, 6).map_err(|e| e.to_string())?;
        ensure(report.is_valid(), format!("{name}: {report}"))?;
        within(t, Duration::from_secs(60), name)?;
    }
    let p = pair("sl2_identity");
    let bad = |n: usize| {
        if n == 2 {
            frac(1, 8)
        } else {
            bernoulli_over_factorial(n)
        }
    };
    let fields = twisted_action_with(&p, 6, &bad).map_err(|e| e.to_string())?;
    let report = verify_field_morphism(&fields, &p.g, 6).map_err(|e| e.to_string())?;
    let first = first_failing_order(&report);
    ensure(
        first == Some(2),
        format!("control with 1/8 first fails at {first:?}"),
    )?;
    Ok("4 pairs to order 6; 1/8 control fails at order 2".into())
}

/// Every single-entry change of a bracket structure constant in `g` or `h`.
fn perturbations(p: &LiePair) -> Vec<(String, LiePair)> {
    let mut out = Vec::new();
    let mut perturb = |side: &str, spec: &AlgebraSpec, rebuild: &dyn Fn(AlgebraSpec) -> LiePair| {
        let file = AlgebraFile::from_spec(spec);
        let names = spec.names();
        for x in 0..spec.dim() {
            for y in x + 1..spec.dim() {
                for z in 0..spec.dim() {
                    let mut f = file.clone();
                    f.brackets.push(vec![
                        names[x].clone().into(),
                        names[y].clone().into(),
                        names[z].clone().into(),
                        "1".into(),
                    ]);
                    if let Ok(s) = f.to_spec() {
                        out.push((
                            format!("{side}:[{},{}]+{}", names[x], names[y], names[z]),
                            rebuild(s),
                        ));
                    }
                }
            }
        }
    };
    let (g, h, phi) = (p.g.clone(), p.h.clone(), p.phi.clone());
    perturb("g", &p.g, &|s| LiePair::new(s, h.clone(), phi.clone()));
    let (g2, phi2) = (g.clone(), phi.clone());
    perturb("h", &p.h, &|s| LiePair::new(g2.clone(), s, phi2.clone()));
    out
}

fn jacobi_bernoulli_complex() -> Outcome {
    let mut runs: Vec<(&str, ConeMode)> = STRICT_PAIRS
        .iter()
        .map(|&n| (n, ConeMode::Strict))
        .collect();
    runs.push(("dg_sl2", ConeMode::Dg));
    for (name, mode) in runs {
        let t = Instant::now();
        let p = pair(name);
        let c = build_codifferential(&p, mode, 5).map_err(|e| e.to_string())?;
        let report = check_d_squared(&c, 5).map_err(|e| e.to_string())?;
        ensure(report.is_valid(), format!("{name}: {report}"))?;
        within(t, Duration::from_secs(60), name)?;
    }
    let mut detected = 0;
    for name in STRICT_PAIRS {
        for (label, q) in perturbations(&pair(name)) {
            let broken = !q.validate().map_err(|e| e.to_string())?.is_valid();
            let c = build_codifferential(&q, ConeMode::Strict, 3).map_err(|e| e.to_string())?;
            let flagged = !check_d_squared(&c, 3)
                .map_err(|e| e.to_string())?
                .is_valid();
            ensure(
                broken == flagged,
                format!("{name} {label}: pair broken {broken}, D² flagged {flagged}"),
            )?;
            detected += usize::from(flagged);
        }
    }
    ensure(detected > 0, "no perturbation broke the pairs")?;
    Ok(format!(
        "5 fixtures at weight 5; {detected} pair-breaking perturbations all reported"
    ))
}

fn cone_linfinity() -> Outcome {
    let mut runs: Vec<(&str, ConeMode)> = STRICT_PAIRS
        .iter()
        .map(|&n| (n, ConeMode::Strict))
        .collect();
    runs.push(("dg_sl2", ConeMode::Dg));
    runs.push(("linf_sl2", ConeMode::LinfMorphism));
    for (name, mode) in runs {
        let p = pair(name);
        let c = build_codifferential(&p, mode, 4).map_err(|e| e.to_string())?;
        let l = export_cone_brackets(&c, 4).map_err(|e| e.to_string())?;
        let report = check_linfinity(&l, 4).map_err(|e| e.to_string())?;
        ensure(report.is_valid(), format!("{name}: {report}"))?;
        let zeros = check_structural_zeros(&l, p.g.dim(), mode != ConeMode::Strict);
        ensure(zeros.is_valid(), format!("{name}: {zeros}"))?;
    }
    Ok("6 fixtures, arity 4, structural zeros present".into())
}

fn delta_squared() -> Outcome {
    let t = Instant::now();
    let conv = Conventions::default();
    for op in [Operad::HsInf, Operad::LpInf, Operad::LpHalf] {
        let report = check_delta_squared(op, 4, &conv).map_err(|e| e.to_string())?;
        ensure(report.is_valid(), report.to_string())?;
    }
    within(t, Duration::from_secs(120), "δ²")?;
    let mutated = Conventions {
        composition_unit: false,
        ..conv
    };
    let report = check_delta_squared(Operad::LpInf, 4, &mutated).map_err(|e| e.to_string())?;
    ensure(!report.is_valid(), "mutated sign not detected")?;
    Ok(format!(
        "three operads to arity 4; mutated sign leaves {}",
        report
            .first()
            .map(|v| v.witness.join(","))
            .unwrap_or_default()
    ))
}

fn chain_maps() -> Outcome {
    let conv = Conventions::default();
    let f1: Vec<Gen> = (0..=5).map(|n| Gen::F(1, n)).collect();
    let r = check_jb_chain_map("jb", &f1, &conv).map_err(|e| e.to_string())?;
    ensure(r.is_valid(), r.to_string())?;
    let f2: Vec<Gen> = (0..=4).map(|n| Gen::F(2, n)).collect();
    let r = check_jb_chain_map("jb", &f2, &conv).map_err(|e| e.to_string())?;
    ensure(r.is_valid(), r.to_string())?;
    let hs = Operad::HsInf.generators(4, &conv);
    let r = check_jb_half_chain_map("jb_half", &hs, &conv).map_err(|e| e.to_string())?;
    ensure(r.is_valid(), r.to_string())?;
    let bad = |n: usize| {
        if n == 2 {
            frac(1, 8)
        } else {
            bernoulli_over_factorial(n)
        }
    };
    let r = check_jb_chain_map_with("jb", &f2, &conv, &bad).map_err(|e| e.to_string())?;
    ensure(!r.is_valid(), "1/8 control not detected")?;
    Ok(format!(
        "JB on F(1,n), F(2,n); JB½ on {} generators; 1/8 control fails at {}",
        hs.len(),
        r.first().map(|v| v.witness.join(",")).unwrap_or_default()
    ))
}

fn dilation() -> Outcome {
    let conv = Conventions::default();
    let r = check_dilation_grading(5, &conv).map_err(|e| e.to_string())?;
    ensure(r.is_valid(), r.to_string())?;
    let fake = |g: Gen| match g {
        Gen::F(1, 2) => "+1 F1,1(s1,w2)".parse().unwrap_or_default(),
        _ => TreeSum::zero(),
    };
    let bad = check_dilation_grading_with(5, &conv, &fake).map_err(|e| e.to_string())?;
    ensure(!bad.is_valid(), "fake term not detected")?;
    Ok(format!(
        "{} generators to arity 5; fake term detected",
        r.checked
    ))
}

fn lift() -> Outcome {
    let t = Instant::now();
    let conv = Conventions::default();
    let lift = lift_jb_infinity(4, 2, &conv).map_err(|e| e.to_string())?;
    ensure(lift.report.is_valid(), lift.report.to_string())?;
    let r = verify_lift(&lift, &conv).map_err(|e| e.to_string())?;
    ensure(r.is_valid(), r.to_string())?;
    within(t, Duration::from_secs(300), "lift")?;
    Ok(format!(
        "{} generators, {} consistent systems",
        lift.table.len(),
        lift.systems
    ))
}

fn coherence() -> Outcome {
    let r = check_jb_against_action(&pair("sl2_identity"), 4).map_err(|e| e.to_string())?;
    ensure(r.is_valid(), r.to_string())?;
    let r2 = check_jb_half_against_general(&pair("formal_higher"), 4).map_err(|e| e.to_string())?;
    ensure(r2.is_valid(), r2.to_string())?;
    Ok(format!(
        "{} JB tables, {} JB½ tables",
        r.checked, r2.checked
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Bernoulli table", bernoulli_table),
        ("recursion oracle", recursion_oracle),
        (
            "twisted action is a Lie morphism",
            twisted_action_is_a_morphism,
        ),
        ("Jacobi-Bernoulli complex", jacobi_bernoulli_complex),
        ("cone L-infinity structure", cone_linfinity),
        ("symbolic delta squared", delta_squared),
        ("chain maps", chain_maps),
        ("dilation grading", dilation),
        ("JB-infinity lift", lift),
        ("cross-module coherence", coherence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS {name}: {detail} [{:.1?}]",
                i + 1,
                t.elapsed()
            ),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
