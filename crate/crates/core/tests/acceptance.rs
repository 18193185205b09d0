//! Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use geodesica::eulerclass::{euler_number, euler_number_with, milnor_wood_bound, Verdict};
use geodesica::knotgroup::{verify_subgroup_identities, Word};
use geodesica::mobius::{uniqueness_systems_7_4, uniqueness_systems_pretzel, UniqOutcome, UniqVerdict};
use geodesica::numfield::{FieldElement, FieldMatrix};
use geodesica::pipeline::{load_bundled_census, parse_checks, run, KnotRecord, KnotSource, RunFlags};
use geodesica::polycore::{q, RatPoly};
use geodesica::pretzel::{lambda_closed_form, lambda_poly, pretzel_holonomy, psi_root_census, tangency_chain};
use geodesica::slopes::{brute_force_pairs, build_system, longitude_tau, slope_set_for_knot, Slope};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const TWO_BRIDGE_ANCHORS: [(&str, &[i64]); 18] = [
    ("7_3", &[3, 1]),
    ("7_5", &[3, 1]),
    ("8_4", &[1]),
    ("8_6", &[-1]),
    ("8_14", &[-1]),
    ("9_3", &[5, 3, 1]),
    ("9_4", &[3, 1]),
    ("9_6", &[5, 1]),
    ("9_7", &[3, 1]),
    ("9_8", &[1]),
    ("9_9", &[5, 3, 1]),
    ("9_10", &[3, 1]),
    ("9_12", &[1]),
    ("9_13", &[3, 1]),
    ("9_15", &[1]),
    ("9_18", &[3, 1]),
    ("9_21", &[1]),
    ("9_23", &[1]),
];

fn census() -> Vec<KnotRecord> {
    load_bundled_census().expect("bundled census loads")
}

fn record<'a>(c: &'a [KnotRecord], name: &str) -> &'a KnotRecord {
    c.iter().find(|r| r.name() == name).unwrap_or_else(|| panic!("{name} missing from census"))
}

fn criterion_1() -> Outcome {
    let z2p2 = RatPoly::from_ints(&[2, 0, 1]);
    ensure(lambda_poly(0) == RatPoly::from_ints(&[-1, 1]), "Λ₀ ≠ z − 1")?;
    ensure(lambda_poly(1) == RatPoly::from_ints(&[-1, 3, -1, 1]), "Λ₁ ≠ z³ − z² + 3z − 1")?;
    for k in 0..=10u32 {
        let lam = lambda_poly(k);
        ensure(lam.degree() == Some(2 * k as usize + 1), format!("deg Λ_{k}"))?;
        ensure(lam == lambda_closed_form(k), format!("closed form at k = {k}"))?;
        if k >= 1 {
            let rhs = &(&z2p2 * &lambda_poly(k)) - &lambda_poly(k - 1);
            ensure(lambda_poly(k + 1) == rhs, format!("three-term recursion at k = {k}"))?;
        }
    }
    Ok("Λ_k for k = 0..10".into())
}

fn criterion_2() -> Outcome {
    for k in 1..=5 {
        let d = pretzel_holonomy(k).map_err(|e| e.to_string())?;
        for r in &d.rep.presentation.relators {
            let m = d.eval(r);
            let id = FieldMatrix::identity(&d.field);
            ensure(m == id || m == id.neg(), format!("relator at k = {k} is not ±I"))?;
        }
    }
    Ok("both relators are ±I mod Λ_k for k = 1..5".into())
}

fn criterion_3() -> Outcome {
    for k in 1..=5 {
        let c = psi_root_census(k, 256).map_err(|e| e.to_string())?;
        ensure(c.real_roots == 2 && c.sturm_real_roots == 2, format!("k = {k}: real roots {}", c.real_roots))?;
        ensure(c.per_quadrant == [k as usize; 4], format!("k = {k}: quadrants {:?}", c.per_quadrant))?;
        ensure(c.uncertain == 0, format!("k = {k}: {} uncertain roots", c.uncertain))?;
        ensure(c.right_half_outside_unit_circle, format!("k = {k}: right-half root inside the unit circle"))?;
    }
    Ok("Ψ_k census for k = 1..5 at 256 bits".into())
}

fn criterion_4() -> Outcome {
    let c = census();
    let mut summary = Vec::new();
    for (name, expected) in
        [("7_4", vec!["-2", "2"]), ("9_35", vec!["0"]), ("P(5,5,5)", vec!["0"]), ("P(7,7,7)", vec!["0"])]
    {
        let rec = record(&c, name);
        let rep = rec.rep.as_ref().ok_or("no representation")?;
        let cases = rec.row.slope_cases.as_ref().ok_or("no slope cases")?;
        let res = slope_set_for_knot(rep, cases, &rec.row.manual_field_flags).map_err(|e| e.to_string())?;
        let got: Vec<String> = res.slopes.iter().map(|s| s.to_string()).collect();
        ensure(res.exhaustive && got == expected, format!("{name}: {got:?}"))?;
        // independent enumeration over |p|, |q|, |m|, |n| ≤ 20
        let tau = longitude_tau(rep).map_err(|e| e.to_string())?;
        let mut oracle: BTreeSet<Slope> = BTreeSet::new();
        for case in cases {
            let sys = build_system(&tau, &FieldElement::from_poly(&rep.field, &case.weight));
            let fixed = case.fixed_boundary.and_then(|(p, q)| Slope::from_i64(p, q));
            for (a, b) in brute_force_pairs(&sys, 20) {
                if fixed.as_ref().is_none_or(|f| *f == a) {
                    oracle.insert(a);
                    oracle.insert(b);
                }
            }
        }
        ensure(oracle == res.slopes, format!("{name}: enumeration gives {oracle:?}"))?;
        summary.push(format!("{name} {{{}}}", got.join(",")));
    }
    Ok(summary.join(", "))
}

fn criterion_5() -> Outcome {
    let c = census();
    let rep = record(&c, "7_4").rep.as_ref().ok_or("no representation")?;
    let r = verify_subgroup_identities(rep).map_err(|e| e.to_string())?;
    for check in &r.checks {
        ensure(check.holds, format!("{} fails", check.label))?;
    }
    Ok(format!("{} identities", r.checks.len()))
}

fn criterion_6() -> Outcome {
    for k in 1..=3 {
        let r = tangency_chain(k).map_err(|e| e.to_string())?;
        let d = pretzel_holonomy(k).map_err(|e| e.to_string())?;
        let z = d.z();
        let expected = (&z - &FieldElement::one(&d.field)).div(&z.scale(&q(2))).map_err(|e| e.to_string())?;
        ensure(r.meeting_point == expected, format!("g_2k(0) at k = {k}"))?;
        let sig = &d.sigma;
        ensure(sig.mul(sig) == FieldMatrix::identity(&d.field), "σ'² ≠ I")?;
        ensure(r.checks.iter().all(|c| c.1), format!("chain identities at k = {k}"))?;
    }
    Ok("k = 1, 2, 3".into())
}

fn criterion_7_and_8() -> (Outcome, Outcome) {
    let c = census();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut max_bits = 0;
    let mut c7 = Ok(());
    let mut c8 = Ok(());
    for (name, anchor) in TWO_BRIDGE_ANCHORS {
        let rec = record(&c, name);
        let Some(rep) = rec.rep.as_ref() else {
            c7 = Err(format!("{name} has no representation"));
            continue;
        };
        let bound = milnor_wood_bound(rec.row.genus.unwrap_or(0));
        let mut tuple = Vec::new();
        for place in 0..rep.field.real_place_count() {
            match euler_number(rep, place, 128) {
                Ok(r) => {
                    worst = worst.max(r.residual);
                    max_bits = max_bits.max(r.precision_bits);
                    if r.n.abs() > bound && c8.is_ok() {
                        c8 = Err(format!("{name}: |e| = {} > {bound}", r.n.abs()));
                    }
                    tuple.push(r.n);
                }
                Err(e) => c7 = Err(format!("{name}: {e}")),
            }
        }
        if tuple != anchor && c7.is_ok() {
            c7 = Err(format!("{name}: {tuple:?} ≠ {anchor:?}"));
        }
    }
    if c7.is_ok() && (worst >= 1e-9 || max_bits > 1024) {
        c7 = Err(format!("residual {worst:.1e} at up to {max_bits} bits"));
    }
    let r74 = record(&c, "7_4").rep.as_ref().map(|rep| euler_number(rep, 0, 128));
    match r74 {
        Some(Ok(r)) if r.n.abs() == 1 => {}
        Some(Ok(r)) => c8 = Err(format!("7_4: e = {}", r.n)),
        Some(Err(e)) => c8 = Err(format!("7_4: {e}")),
        None => c8 = Err("7_4 missing".into()),
    }
    (
        c7.map(|_| format!("18 rows, max residual {worst:.1e}, ≤ {max_bits} bits, {:.1?}", start.elapsed())),
        c8.map(|_| "all |e| ≤ 2g − 1; 7_4 has |e| = 1".into()),
    )
}

fn criterion_9() -> Outcome {
    let c = census();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut trials = 0;
    for name in ["7_3", "7_4"] {
        let rep = record(&c, name).rep.as_ref().ok_or("no representation")?;
        for place in 0..rep.field.real_place_count() {
            let base = euler_number(rep, place, 128).map_err(|e| e.to_string())?.n;
            for _ in 0..20 {
                let offsets: Vec<i64> = (0..rep.images.len()).map(|_| rng.random_range(-6..=6)).collect();
                let r = euler_number_with(rep, place, 128, &offsets, &Word::empty()).map_err(|e| e.to_string())?;
                ensure(r.n == base, format!("{name} place {place}: offsets {offsets:?} give {} ≠ {base}", r.n))?;
                trials += 1;
            }
        }
    }
    Ok(format!("{trials} random offset vectors"))
}

fn criterion_10() -> Outcome {
    // rows for the z² and z¹ coefficients, columns (σ₁ + σ₂, σ₁σ₂)
    let published: [(&str, [[i64; 2]; 2]); 4] = [
        ("7_4 case 1", [[1, -2], [-2, 3]]),
        ("7_4 case 2", [[-1, -2], [2, 3]]),
        ("9_35 j = 1", [[0, 1], [-1, 0]]),
        ("9_35 j = 2", [[0, 0], [2, 0]]),
    ];
    let mut systems: Vec<UniqOutcome> = uniqueness_systems_7_4().map_err(|e| e.to_string())?;
    systems.extend(uniqueness_systems_pretzel(1, &[1, 2]).map_err(|e| e.to_string())?);
    let mut failures = Vec::new();
    for ((label, want), got) in published.iter().zip(&systems) {
        let want = want.map(|r| r.map(q));
        if got.system.matrix != want {
            let shown: Vec<Vec<String>> =
                got.system.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            failures.push(format!("{label}: matrix {shown:?}"));
        }
        if got.verdict != UniqVerdict::OnlyZeroSolution {
            let sol = got.solution.as_ref().map(|(a, b)| format!("({a}, {b})")).unwrap_or_default();
            failures.push(format!(
                "{label}: {:?} {sol}, real distinct endpoints possible: {}",
                got.verdict, got.real_distinct_sigma
            ));
        }
    }
    if failures.is_empty() {
        Ok("four systems, only the zero solution".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_11() -> Outcome {
    let c = census();
    let checks = parse_checks("euler").map_err(|e| e.to_string())?;
    let flags = RunFlags::default();
    let first = run(&c, &checks, &flags);
    let second = run(&c, &checks, &flags);
    ensure(first.success(), format!("run failures: {:?}", first.failures))?;
    ensure(first.to_json() == second.to_json(), "JSON differs between runs")?;
    for (name, _) in TWO_BRIDGE_ANCHORS {
        let v = first.knot(name).and_then(|k| k.obstruction.as_ref()).ok_or(format!("{name}: no verdict"))?;
        ensure(
            matches!(v.verdict, Verdict::NoTgsEulerBound | Verdict::NoTgsCalegariFibered | Verdict::NoClosedTgsReid),
            format!("{name}: {:?}", v.verdict),
        )?;
    }
    for name in ["7_4", "9_35"] {
        let v = first.knot(name).and_then(|k| k.obstruction.as_ref()).ok_or(format!("{name}: no verdict"))?;
        ensure(
            v.obstruction == Verdict::Inconclusive && v.verdict == Verdict::KnownUniqueSurface,
            format!("{name}: {:?} / {:?}", v.obstruction, v.verdict),
        )?;
    }
    let pretzels = c.iter().filter(|r| matches!(r.row.source, KnotSource::Pretzel { .. })).count();
    Ok(format!("{} knots ({pretzels} pretzel), byte-identical reports", first.knots.len()))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: u32, title: &str, start: Instant, o: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match o {
            Ok(detail) => println!("criterion {n:>2} PASS  {title}: {detail} ({secs:.2}s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {title}: {why} ({secs:.2}s)");
            }
        }
    };
    let t = Instant::now();
    report(1, "pretzel recursions", t, criterion_1());
    let t = Instant::now();
    report(2, "pretzel relators", t, criterion_2());
    let t = Instant::now();
    report(3, "root census", t, criterion_3());
    let t = Instant::now();
    report(4, "slope sets", t, criterion_4());
    let t = Instant::now();
    report(5, "7_4 subgroup identities", t, criterion_5());
    let t = Instant::now();
    report(6, "tangency chain", t, criterion_6());
    let t = Instant::now();
    let (c7, c8) = criterion_7_and_8();
    report(7, "Euler numbers of the two-bridge rows", t, c7);
    report(8, "Milnor-Wood", t, c8);
    let t = Instant::now();
    report(9, "lift independence", t, criterion_9());
    let t = Instant::now();
    report(10, "uniqueness systems", t, criterion_10());
    let t = Instant::now();
    report(11, "verdict regression", t, criterion_11());
    if failed > 0 {
        println!("{failed} of 11 criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria pass");
}
