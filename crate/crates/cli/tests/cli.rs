use expdio_cli::{run_with, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use expdio_core::diophantine::{Obstruction, SolutionCertificate, VerificationReport};
use expdio_core::ljunggren::LjunggrenSolution;
use expdio_core::lucas::PrimitiveDivisorSet;
use expdio_core::pell::{PellFundamental, PellPoint};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &str) -> Run {
    let argv = std::iter::once("expdio").chain(args.split_whitespace());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn records<T: serde::de::DeserializeOwned>(run: &Run) -> Vec<T> {
    run.stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

#[test]
fn pell_fundamental() {
    let r = cli("pell --d 6083");
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout, "{\"d\":\"6083\",\"u1\":\"78\",\"v1\":\"1\"}\n");
    let f: Vec<PellFundamental> = records(&r);
    assert_eq!(&f[0].u1 * &f[0].u1, &f[0].d * &f[0].v1 * &f[0].v1 + 1u32);
}

#[test]
fn pell_kth_point() {
    let r = cli("pell --d 6083 --k 2");
    assert_eq!(r.code, EXIT_OK);
    let p: Vec<PellPoint> = records(&r);
    assert!(p[0].satisfies_equation());
    assert_eq!(p[0].u.to_string(), "12167");
}

#[test]
fn evaluate_known_solution() {
    let r = cli("evaluate --a 2 --b 5 --n 1");
    assert_eq!(r.code, EXIT_OK);
    let certs: Vec<SolutionCertificate> = records(&r);
    assert_eq!(certs[0].x.to_string(), "2");
    certs[0].validate().unwrap();
    let r = cli("evaluate --a 13 --b 239 --n 4 --expect-solution");
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("\"x\":\"9653280\""));
}

#[test]
fn evaluate_without_solution() {
    let r = cli("evaluate --a 2 --b 3 --n 1");
    assert_eq!(r.code, EXIT_OK);
    let obs: Vec<Obstruction> = records(&r);
    assert!(obs[0].validate());
    assert_eq!(
        cli("evaluate --a 2 --b 3 --n 1 --expect-solution").code,
        EXIT_VIOLATION
    );
}

#[test]
fn verify_theorem2() {
    let r = cli("verify --scope thm2 --a-max 40 --b-max 40 --n-max 12");
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("\"violations\":[]"));
    let reports: Vec<VerificationReport> = records(&r);
    assert!(reports[0].holds());
}

#[test]
fn verify_defaults_reproduce_acceptance_bounds() {
    let r = cli("verify --scope cohn-4n");
    assert_eq!(r.code, EXIT_OK);
    let report: VerificationReport = records(&r).remove(0);
    assert_eq!(
        (
            report.bounds.a_max,
            report.bounds.b_max,
            report.bounds.n_max
        ),
        (250, 250, 12)
    );
    assert_eq!(report.expected_exceptions.len(), 1);
    for c in &report.expected_exceptions {
        c.validate().unwrap();
    }
}

#[test]
fn violations_exit_one() {
    // v_1 = 1 for d = 3, so with bound 0 index 1 becomes a violation.
    let r = cli("lemmas --d 3 --n-max 10 --bound 0");
    assert_eq!(r.code, EXIT_VIOLATION);
    let rec: serde_json::Value = records(&r).remove(0);
    assert_eq!(rec["violations"][0]["lemma_id"], "CARMICHAEL");
    assert_eq!(rec["violations"][0]["k"], "1");
    assert_eq!(cli("lemmas --d 3 --n-max 10").code, EXIT_OK);
}

#[test]
fn sharding_does_not_change_bytes() {
    let one = cli("verify --scope thm1-case1 --shards 1");
    for shards in [2, 8] {
        let many = cli(&format!("verify --scope thm1-case1 --shards {shards}"));
        assert_eq!(one.stdout, many.stdout);
    }
    let one = cli("search --a-max 20 --b-max 30 --n-max 6");
    let many = cli("search --a-max 20 --b-max 30 --n-max 6 --shards 8");
    assert_eq!(one.stdout, many.stdout);
    let certs: Vec<SolutionCertificate> = records(&one);
    assert!(!certs.is_empty());
    for c in certs {
        c.validate().unwrap();
    }
}

#[test]
fn other_subcommands_round_trip() {
    let sets: Vec<PrimitiveDivisorSet> = records(&cli("primitive-divisors --d 2 --n 7"));
    let primes: Vec<String> = sets[0].primes.iter().map(|p| p.to_string()).collect();
    assert_eq!(primes, ["13", "239"]);
    let sols: Vec<LjunggrenSolution> = records(&cli("ljunggren --p 3 --y-max 1000"));
    assert_eq!(sols.len(), 2);
    assert!(sols.iter().all(LjunggrenSolution::is_valid));
    let r = cli("lemmas --d 2 --d-max 30");
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<serde_json::Value> = records(&r);
    // 30 candidates minus the squares 4, 9, 16, 25
    assert_eq!(lines.len(), 25);
    assert!(lines
        .iter()
        .all(|l| l["violations"].as_array().unwrap().is_empty()));
}

#[test]
fn human_mode() {
    let r = cli("--format human pell --d 2");
    assert_eq!(r.stdout, "d = 2: u1 = 3, v1 = 2\n");
    let r = cli("evaluate --a 2 --b 4 --n 3 --format human");
    assert!(r.stdout.starts_with("(2^3 - 1)(4^3 - 1) = 21^2"));
}

#[test]
fn output_file_gets_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.jsonl");
    let r = cli(&format!(
        "search --a-max 5 --b-max 5 --n-max 5 --output {}",
        path.display()
    ));
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), r.stdout);
    assert_eq!(r.stdout.lines().count(), 2);
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let cases = [
        "pell --d 49",
        "pell --d -3",
        "pell --d 2 --k 0",
        "lemmas --d 4",
        "lemmas --d 2 --n-max 6",
        "primitive-divisors --d 9 --n 3",
        "ljunggren --p 4",
        "evaluate --a 3 --b 3 --n 1",
        "evaluate --a 2 --b 3 --n 0",
        "search --a-max x --b-max 5 --n-max 2",
        "verify --scope thm3",
        "pell --d 2 --bogus 1",
        "",
    ];
    for args in cases {
        let r = cli(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert_eq!(r.stderr.lines().count(), 1, "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let r = cli("--help");
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("verify"));
}
