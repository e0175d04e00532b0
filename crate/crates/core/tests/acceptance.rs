//! Acceptance suite: every exit criterion, with its runtime budget, printed
//! as one PASS/FAIL line. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use expdio_core::diophantine::{
    evaluate, verify_scope, verify_scope_sharded, Bounds, ScopeTag, SolutionCertificate,
    VerificationReport,
};
use expdio_core::ljunggren::search_ljunggren;
use expdio_core::lucas::{check_carmichael, check_lemma1, check_lemma3};
use expdio_core::pell::{check_d, fundamental_solution};
use expdio_core::Natural;
use num_traits::ToPrimitive;

type Outcome = Result<String, String>;

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

fn non_square_d(max: u64) -> impl Iterator<Item = Natural> {
    (2..=max).map(nat).filter(|d| check_d(d).is_ok())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tuple(c: &SolutionCertificate) -> (u64, u64, u32, u64) {
    (
        c.a.to_u64().unwrap(),
        c.b.to_u64().unwrap(),
        c.n,
        c.x.to_u64().unwrap_or(u64::MAX),
    )
}

fn pell_regression() -> Outcome {
    let cases: [(u64, u64, u64); 5] = [
        (6083, 78, 1),
        (2, 3, 2),
        (3, 2, 1),
        (5, 9, 4),
        (61, 1_766_319_049, 226_153_980),
    ];
    for (d, u1, v1) in cases {
        let f = fundamental_solution(&nat(d)).map_err(|e| e.to_string())?;
        ensure(f.u1 == nat(u1) && f.v1 == nat(v1), || {
            format!("d = {d}: got ({}, {})", f.u1, f.v1)
        })?;
        ensure(&f.u1 * &f.u1 == nat(d) * &f.v1 * &f.v1 + 1u32, || {
            format!("d = {d}: not a solution")
        })?;
    }
    Ok("5 fundamental solutions exact".into())
}

fn identity_suite() -> Outcome {
    let mut checked = 0;
    for d in non_square_d(200) {
        let f = fundamental_solution(&d).map_err(|e| e.to_string())?;
        let pts: Vec<_> = f.iter().take(10).collect();
        let (u, v) = (|i: usize| &pts[i - 1].u, |i: usize| &pts[i - 1].v);
        for t in 1..=5 {
            ensure(*u(2 * t) == u(t) * u(t) * 2u32 - 1u32, || {
                format!("d = {d}: u_{} != 2 u_{t}^2 - 1", 2 * t)
            })?;
            ensure(*v(2 * t) == u(t) * v(t) * 2u32, || {
                format!("d = {d}: v_{} != 2 v_{t} u_{t}", 2 * t)
            })?;
        }
        let u1 = u(1);
        let u1_3 = u1 * u1 * u1;
        let u1_5 = &u1_3 * u1 * u1;
        ensure(*u(3) == &u1_3 * 4u32 - u1 * 3u32, || {
            format!("d = {d}: u_3")
        })?;
        ensure(*u(5) == &u1_5 * 16u32 + u1 * 5u32 - &u1_3 * 20u32, || {
            format!("d = {d}: u_5")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} values of d, zero violations"))
}

fn lemma_sweeps() -> Outcome {
    let mut checked = 0;
    for d in non_square_d(200) {
        let l1 = check_lemma1(&d, 10).map_err(|e| e.to_string())?;
        ensure(l1.is_empty(), || format!("divisibility violations: {l1:?}"))?;
        let l3 = check_lemma3(&d, 12).map_err(|e| e.to_string())?;
        ensure(l3.is_empty(), || format!("parity violations: {l3:?}"))?;
        checked += 1;
    }
    Ok(format!("{checked} values of d, zero violations"))
}

fn carmichael_sweep() -> Outcome {
    let mut checked = 0;
    for d in non_square_d(100) {
        let v = check_carmichael(&d, 20).map_err(|e| e.to_string())?;
        ensure(v.is_empty(), || format!("violations: {v:?}"))?;
        checked += 1;
    }
    Ok(format!(
        "{checked} values of d, 6 < n <= 20, zero violations"
    ))
}

fn ljunggren() -> Outcome {
    let pairs = |p: u32, y_max: u64| -> Result<Vec<(u64, u64)>, String> {
        Ok(search_ljunggren(p, y_max)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| (s.x.to_u64().unwrap(), s.y.to_u64().unwrap()))
            .collect())
    };
    let cubic = pairs(3, 1_000_000)?;
    ensure(cubic == [(1, 1), (23, 78)], || format!("p = 3: {cubic:?}"))?;
    for p in [5, 7, 11] {
        let found = pairs(p, 100_000)?;
        ensure(found == [(1, 1)], || format!("p = {p}: {found:?}"))?;
    }
    Ok("p = 3: (1,1), (23,78); p = 5, 7, 11: (1,1)".into())
}

fn known_solutions() -> Outcome {
    let cases: [(u64, u64, u32, u64); 5] = [
        (2, 5, 1, 2),
        (2, 4, 3, 21),
        (3, 243, 1, 22),
        (7, 2401, 1, 120),
        (13, 239, 4, 9_653_280),
    ];
    for (a, b, n, x) in cases {
        let cert = evaluate(&nat(a), &nat(b), n)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("({a}, {b}, {n}) not found"))?;
        ensure(cert.x == nat(x), || {
            format!("({a}, {b}, {n}): x = {}", cert.x)
        })?;
        cert.validate().map_err(|e| e.to_string())?;
    }
    Ok("5 certificates found and re-validated".into())
}

fn check_report(report: &VerificationReport) -> Result<(), String> {
    ensure(report.holds(), || {
        format!("{} violations: {:?}", report.scope, report.violations)
    })?;
    for c in report.expected_exceptions.iter().chain(&report.violations) {
        c.validate().map_err(|e| e.to_string())?;
    }
    Ok(())
}

const THM1: [ScopeTag; 3] = [
    ScopeTag::Thm1Case1,
    ScopeTag::Thm1Case2,
    ScopeTag::Thm1Case3,
];

fn theorem1_sweep() -> Outcome {
    let mut found = Vec::new();
    let mut instances = 0;
    for scope in THM1 {
        let report = verify_scope(scope, Bounds::new(40, 40, 12));
        check_report(&report)?;
        ensure(report.expected_exceptions.iter().all(|c| c.n == 2), || {
            format!("{scope}: exception with n != 2")
        })?;
        instances += report.instances_checked;
        found.extend(report.expected_exceptions.iter().map(tuple));
    }
    for needed in [(7, 2, 2, 12), (17, 3, 2, 48)] {
        ensure(found.contains(&needed), || {
            format!("missing exception {needed:?}")
        })?;
    }
    Ok(format!(
        "{instances} instances, {} n = 2 exceptions, zero violations",
        found.len()
    ))
}

fn theorem2_sweep() -> Outcome {
    let report = verify_scope(ScopeTag::Thm2, Bounds::new(40, 40, 12));
    check_report(&report)?;
    ensure(report.expected_exceptions.is_empty(), || {
        "unexpected solutions".into()
    })?;
    // even a in 2..=40 against b in {3, 11, 19}
    ensure(report.pairs_checked == 60, || {
        format!("expected 60 pairs, scanned {}", report.pairs_checked)
    })?;
    Ok(format!(
        "{} instances, zero solutions",
        report.instances_checked
    ))
}

fn cohn_sweep() -> Outcome {
    let report = verify_scope(ScopeTag::Cohn4n, Bounds::new(250, 250, 12));
    check_report(&report)?;
    let found: Vec<_> = report.expected_exceptions.iter().map(tuple).collect();
    ensure(found == [(13, 239, 4, 9_653_280)], || {
        format!("found {found:?}")
    })?;
    Ok(format!(
        "{} instances, only (13, 239, 4)",
        report.instances_checked
    ))
}

fn determinism() -> Outcome {
    let sweeps = [
        (ScopeTag::Thm1Case1, Bounds::new(40, 40, 12)),
        (ScopeTag::Thm1Case2, Bounds::new(40, 40, 12)),
        (ScopeTag::Thm1Case3, Bounds::new(40, 40, 12)),
        (ScopeTag::Thm2, Bounds::new(40, 40, 12)),
        (ScopeTag::Cohn4n, Bounds::new(250, 250, 12)),
    ];
    for (scope, bounds) in sweeps {
        let bytes =
            |shards| serde_json::to_string(&verify_scope_sharded(scope, bounds, shards)).unwrap();
        let single = bytes(1);
        for shards in [2, 8] {
            ensure(bytes(shards) == single, || {
                format!("{scope}: {shards}-way report differs")
            })?;
        }
    }
    Ok("5 sweeps byte-identical under 1/2/8 shards".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "Pell regression",
            budget: secs(1),
            run: pell_regression,
        },
        Criterion {
            id: 2,
            name: "identity suite",
            budget: secs(10),
            run: identity_suite,
        },
        Criterion {
            id: 3,
            name: "u-sequence divisibility and parity sweeps",
            budget: secs(60),
            run: lemma_sweeps,
        },
        Criterion {
            id: 4,
            name: "Carmichael sweep",
            budget: secs(300),
            run: carmichael_sweep,
        },
        Criterion {
            id: 5,
            name: "Ljunggren search",
            budget: secs(30),
            run: ljunggren,
        },
        Criterion {
            id: 6,
            name: "known-solution regression",
            budget: secs(1),
            run: known_solutions,
        },
        Criterion {
            id: 7,
            name: "thm1 congruence scopes sweep",
            budget: secs(300),
            run: theorem1_sweep,
        },
        Criterion {
            id: 8,
            name: "thm2 scope sweep",
            budget: secs(120),
            run: theorem2_sweep,
        },
        Criterion {
            id: 9,
            name: "cohn-4n scope sweep",
            budget: secs(300),
            run: cohn_sweep,
        },
        Criterion {
            id: 10,
            name: "sharding determinism",
            budget: secs(900),
            run: determinism,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.budget => Err(format!("{msg}; over budget {:?}", c.budget)),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS [{:>2}] {} ({elapsed:.2?}): {msg}", c.id, c.name),
            Err(msg) => {
                failures += 1;
                println!("FAIL [{:>2}] {} ({elapsed:.2?}): {msg}", c.id, c.name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
