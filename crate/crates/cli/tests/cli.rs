use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pdpm_cli::cert::{parse_certificates, Claim, Outcome};
use pdpm_core::multigraph::document::read_multigraph;
use pdpm_core::multigraph::graph6::write_graph6;
use pdpm_core::petersen::petersen;
use pdpm_core::Multigraph;

fn pdpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdpm"))
        .args(args)
        .env_remove("PDPM_BUDGET")
        .env("PDPM_WORKERS", "1")
        .output()
        .expect("binary runs")
}

fn pdpm_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_pdpm"))
        .args(args)
        .env_remove("PDPM_BUDGET")
        .env("PDPM_WORKERS", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn strip_wall_time(s: &str) -> String {
    s.lines().filter(|l| !l.starts_with("wall-time")).collect::<Vec<_>>().join("\n")
}

#[test]
fn build_g1_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.mgf"), dir.path().join("b.mgf"));
    let (pa, pb) = (dir.path().join("a.prov"), dir.path().join("b.prov"));
    for (g, p) in [(&a, &pa), (&b, &pb)] {
        let o = pdpm(&["build", "g_k", "--k", "1", "-o", path(g), "--prov", path(p)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(&pa).unwrap(), fs::read(&pb).unwrap());
    let g = read_multigraph(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(g.n(), 190);
    assert!(g.is_regular(6));
    let prov = fs::read_to_string(&pa).unwrap();
    assert!(prov.starts_with("prov 1\n"));
    assert!(prov.contains("designated A "));
}

fn sorted_pairs(g: &Multigraph) -> Vec<(usize, usize)> {
    let mut v: Vec<_> = g.edges().map(|(_, a, b)| (a.min(b), a.max(b))).collect();
    v.sort_unstable();
    v
}

#[test]
fn build_petersen_and_p_plus_matchings() {
    let o = pdpm(&["build", "petersen"]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_multigraph(&stdout(&o)).unwrap(), petersen());

    let p1 = read_multigraph(&stdout(&pdpm(&["build", "p_k", "--k", "1"]))).unwrap();
    let pm = read_multigraph(&stdout(&pdpm(&["build", "p-plus-matchings", "--types", "0,1,2"]))).unwrap();
    assert_eq!(sorted_pairs(&p1), sorted_pairs(&pm));
    assert!(pm.is_regular(6));

    assert_eq!(code(&pdpm(&["build", "g_k"])), 3, "missing --k");
    assert_ne!(code(&pdpm(&["build", "no-such-thing"])), 0);
}

#[test]
fn verify_checks_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = dir.path().join("s1.mgf");
    assert_eq!(code(&pdpm(&["build", "s_k", "--k", "1", "-o", path(&s1)])), 0);
    let o = pdpm(&["verify", path(&s1), "--check", "regular:6", "--check", "edge-conn:6"]);
    assert_eq!(code(&o), 0);
    let certs = parse_certificates(&stdout(&o)).unwrap();
    assert_eq!(certs.len(), 2);
    assert!(certs.iter().all(|c| c.verified && c.outcome == Outcome::Holds));
    assert_eq!(certs[1].claim, Claim::EdgeConnectivity(6));

    let o = pdpm(&["verify", "petersen", "--check", "r-graph:3,3-connected,underlying-cubic"]);
    assert_eq!(code(&o), 0);

    let o = pdpm(&["verify", "petersen", "--check", "regular:5"]);
    assert_eq!(code(&o), 1);
    let c = &parse_certificates(&stdout(&o)).unwrap()[0];
    assert!(!c.verified);
    assert_eq!(c.outcome, Outcome::Refuted);

    assert_eq!(code(&pdpm(&["verify", "/nonexistent/graph", "--check", "regular:3"])), 3);
    assert_eq!(code(&pdpm(&["verify", "petersen", "--check", "bogus:1"])), 3);
}

#[test]
fn pdpm_certificates_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let o = pdpm(&["pdpm", "petersen", "2"]);
    assert_eq!(code(&o), 0);
    let c = &parse_certificates(&stdout(&o)).unwrap()[0];
    assert_eq!(c.claim, Claim::NoPdpm(2));
    assert!(c.verified);

    let o = pdpm(&["pdpm", "theta5", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let c = &parse_certificates(&text).unwrap()[0];
    assert_eq!(c.claim, Claim::Pdpm(5));
    assert_eq!(c.witnesses("matching").count(), 5);
    let cert = dir.path().join("theta.cert");
    fs::write(&cert, &text).unwrap();
    let o = pdpm(&["verify-certificate", path(&cert), "--graph", "theta5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("confirmed 5-PDPM"));

    // A certificate for another graph is rejected by digest.
    let o = pdpm(&["verify-certificate", path(&cert), "--graph", "theta6"]);
    assert_eq!(code(&o), 1);

    // Tampering with the witness is caught.
    let tampered = text.replacen("witness matching 0", "witness matching 1", 1);
    fs::write(&cert, tampered).unwrap();
    assert_eq!(code(&pdpm(&["verify-certificate", path(&cert), "--graph", "theta5"])), 1);

    let o = pdpm(&["pdpm", "petersen", "1", "--avoid", "0,1", "--contain", "2"]);
    assert_eq!(code(&o), 0);
    let c = &parse_certificates(&stdout(&o)).unwrap()[0];
    assert_eq!(c.param("avoid"), Some("0,1"));
}

#[test]
fn pdpm_budget_is_a_distinct_outcome() {
    let o = pdpm(&["pdpm", "g1", "4", "--budget", "2000"]);
    let certs = parse_certificates(&stdout(&o)).unwrap();
    match code(&o) {
        2 => assert_eq!(certs[0].outcome, Outcome::Exhausted),
        0 => assert_eq!(certs[0].claim, Claim::NoPdpm(4)),
        other => panic!("unexpected exit {other}"),
    }
}

#[test]
fn single_worker_runs_are_identical() {
    let a = pdpm(&["--workers", "1", "pdpm", "k6", "5", "--seed", "7"]);
    let b = pdpm(&["--workers", "1", "pdpm", "k6", "5", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(strip_wall_time(&stdout(&a)), strip_wall_time(&stdout(&b)));
}

#[test]
fn cubic_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let pg = dir.path().join("petersen.g6");
    fs::write(&pg, write_graph6(&petersen()).unwrap() + "\n").unwrap();
    let k4 = dir.path().join("k4.g6");
    fs::write(&k4, write_graph6(&Multigraph::complete(4)).unwrap() + "\n").unwrap();

    for (args, claim) in [
        (vec!["cubic", "fr", path(&pg), "--edge", "0", "--nu", "0"], Claim::FrTriple),
        (vec!["cubic", "bf", path(&pg)], Claim::BfCover),
        (vec!["cubic", "cdc5", path(&k4)], Claim::Cdc5),
        (vec!["cubic", "two-factor", path(&pg)], Claim::Special2Factor),
        (vec!["cubic", "fr-pipeline", path(&pg), "--edge", "3", "--nu", "2"], Claim::FrTriple),
    ] {
        let o = pdpm(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let c = &parse_certificates(&text).unwrap()[0];
        assert_eq!(c.claim, claim);
        assert!(c.verified);
        let cert = dir.path().join("c.cert");
        fs::write(&cert, &text).unwrap();
        let g = args[2];
        let v = pdpm(&["verify-certificate", path(&cert), "--graph", g]);
        assert_eq!(code(&v), 0, "{}", stdout(&v));
    }
    assert_eq!(code(&pdpm(&["cubic", "fr", "k6"])), 3, "not cubic");
    assert_eq!(code(&pdpm(&["cubic", "fr-pipeline", path(&pg)])), 3, "needs --edge and --nu");
}

#[test]
fn hunt_buckets_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let certs = dir.path().join("hunt.cert");
    let k6 = write_graph6(&Multigraph::complete(6)).unwrap();
    let p = write_graph6(&petersen()).unwrap();
    let stream = format!("{p}\n{k6}\n\nnot a graph\n");
    let o = pdpm_stdin(&["hunt", "--report", path(&report), "--certs", path(&certs)], &stream);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "scanned 3\nregular 1\nconnected-enough 1\nclass1 1\nclass2 0\nindeterminate 0\nmalformed 1\n"
    );
    let rep = fs::read_to_string(&report).unwrap();
    assert!(rep.contains("line 4 malformed"), "{rep}");
    assert!(rep.contains("line 2 class1"), "{rep}");
    let o = pdpm(&["verify-certificate", path(&certs)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = pdpm_stdin(&["hunt"], "");
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "scanned 0\nregular 0\nconnected-enough 0\nclass1 0\nclass2 0\nindeterminate 0\nmalformed 0\n");
}

#[test]
fn hunt_budget_marks_indeterminate() {
    let k6 = write_graph6(&Multigraph::complete(6)).unwrap();
    let o = pdpm_stdin(&["hunt", "--budget-per-graph", "1"], &format!("{k6}\n"));
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("indeterminate 1"));
    assert!(stdout(&o).contains("class1 0"));
}
