use std::io::Write;
use std::process::{Command, Output, Stdio};

fn twodom(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twodom"))
        .args(args)
        .env_remove("TWODOM_JOBS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const P4: &str = "4\n0 1\n1 2\n2 3\n";
const P5: &str = "5\n0 1\n1 2\n2 3\n3 4\n";
const P6_G6: &str = "EhCG";

#[test]
fn compute_p4() {
    let o = twodom(&["compute", "--input", "-"], Some(P4));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Ch\t3\t3\ttrue\n");
}

#[test]
fn compute_brute_cross_check_and_json() {
    let o = twodom(&["compute", "--brute", "--format", "json", "Ch"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["gamma2"], 3);
    assert_eq!(v["alpha2"], 3);
    assert_eq!(v["equal"], true);
}

#[test]
fn graph6_lines_from_file() {
    let dir = std::env::temp_dir().join(format!("twodom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trees.g6");
    std::fs::write(&path, "Ch\nDhC\n").unwrap();
    let o = twodom(&["compute", "--input", path.to_str().unwrap()], None);
    assert_eq!(stdout(&o), "Ch\t3\t3\ttrue\nDhC\t3\t4\tfalse\n");
}

#[test]
fn recognize_p5_is_rejected_with_exit_zero() {
    let o = twodom(&["recognize", "--input", "-"], Some(P5));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "DhC\t3\t4\tfalse\n");
}

#[test]
fn certificate_round_trip() {
    let dir = std::env::temp_dir().join(format!("twodom-cert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("p6.json");
    let cert = cert.to_str().unwrap();

    let o = twodom(&["recognize", P6_G6, "--cert-out", cert], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "EhCG\t4\t4\ttrue\n");

    let o = twodom(&["verify-cert", "--cert", cert, P6_G6], None);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "true\n".to_string())
    );

    let o = twodom(&["verify-cert", "--cert", cert, "--input", "-"], Some(P5));
    assert!(stdout(&o).starts_with("false\t"));

    let o = twodom(
        &["verify-cert", "--cert", cert, "--format", "json", P6_G6],
        None,
    );
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["valid"], true);
}

#[test]
fn sweep_small_orders() {
    let o = twodom(&["sweep", "--max-n", "4"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "1\t1\t1\ttrue\n2\t1\t1\ttrue\n3\t1\t1\ttrue\n4\t2\t2\ttrue\n"
    );
}

#[test]
fn sweep_is_stable_across_worker_counts() {
    let one = twodom(&["sweep", "--max-n", "11", "--jobs", "1"], None);
    let four = twodom(&["sweep", "--max-n", "11", "--jobs", "4"], None);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
    let paranoid = twodom(
        &["sweep", "--max-n", "11", "--paranoid", "--o4-t14", "off"],
        None,
    );
    assert_eq!(stdout(&one), stdout(&paranoid));
}

#[test]
fn sweep_rejects_large_orders() {
    let o = twodom(&["sweep", "--max-n", "19"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn patterns_selfcheck_reports_discrepancies() {
    let o = twodom(&["patterns-selfcheck"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 25 + 3);
    assert!(text.contains("discrepancy\tB7\tdiamonds 3 < alpha2 4"));
    assert!(text.contains("attacher\tT3"));
    assert!(text.contains("attacher\tT7"));
}

#[test]
fn generate_is_deterministic() {
    let a = twodom(
        &["generate", "--seed", "11", "--steps", "4", "--count", "3"],
        None,
    );
    let b = twodom(
        &["generate", "--seed", "11", "--steps", "4", "--count", "3"],
        None,
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    for line in stdout(&a).lines() {
        let g6 = line.split('\t').next().unwrap();
        let o = twodom(&["recognize", g6], None);
        assert!(stdout(&o).ends_with("\ttrue\n"), "{line}");
    }
}

#[test]
fn invalid_input_exits_one() {
    // triangle
    let o = twodom(&["compute", "Bw"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = twodom(&["compute", "--input", "-"], Some("3\n0 1\n"));
    assert_eq!(o.status.code(), Some(1));
    let o = twodom(&["compute"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = twodom(&["no-such-command"], None);
    assert_eq!(o.status.code(), Some(1));
}
