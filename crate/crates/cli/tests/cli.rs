use std::process::{Command, Output};

fn qeuler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeuler"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_main_prints_both_sides() {
    let out = qeuler(&["verify", "--n", "3", "--check", "main"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("PASS  main n=3\n"));
    let sides = "z^2 + 2*t*z + t^2 + t^2*z + t^3";
    assert!(
        text.contains(&format!("  lhs: {sides}\n  rhs: {sides}\n")),
        "{text}"
    );
}

#[test]
fn schedules_of_example_word() {
    let out = qeuler(&["schedules", "*8*63*274*15"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 2 1 2 1 2 1 1\n");
    let json = stdout(&qeuler(&["schedules", "21", "--format", "json"]));
    assert_eq!(json, "{\"schedule\":[1,2],\"tau\":\"21\"}\n");
}

#[test]
fn usage_errors_exit_2() {
    let out = qeuler(&["verify", "--n", "99", "--check", "main"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside supported range"));
    assert_eq!(
        qeuler(&["verify", "--n", "3", "--check", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qeuler(&[
            "verify",
            "--n",
            "3",
            "--check",
            "sched-q-minus1",
            "--k",
            "3"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        qeuler(&["verify", "--n", "3", "--check", "main", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qeuler(&["schedules", "1123"]).status.code(), Some(2));
    assert_eq!(qeuler(&["bijection", "*21*3"]).status.code(), Some(2));
    assert_eq!(qeuler(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qeuler(&["verify", "--n", "3", "--threads", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_restricted_parameters() {
    let out = qeuler(&[
        "verify",
        "--n",
        "3",
        "--check",
        "sched-q-minus1",
        "--k",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("lhs: t^2 + t^3\n"));
    let out = qeuler(&["verify", "--n", "3", "--check", "dnj-recursion", "--j", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS  dnj-recursion n=3 j=0\n"));
}

#[test]
fn verify_ranges_and_formats() {
    let out = qeuler(&[
        "verify", "--from", "1", "--n", "4", "--check", "psi", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,n,k,j,passed,lhs,rhs,witness,elapsed_ms");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[4], "psi,4,,,true,24,24,,");

    let out = qeuler(&[
        "verify", "--n", "4", "--check", "t-euler", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v[0];
    for key in [
        "name",
        "params",
        "passed",
        "lhs",
        "rhs",
        "witness",
        "elapsed_ms",
    ] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["elapsed_ms"], serde_json::Value::Null);
    assert_eq!(r["params"], serde_json::json!({"n": 4}));

    let timed = qeuler(&[
        "verify",
        "--n",
        "4",
        "--check",
        "t-euler",
        "--format",
        "json",
        "--timings",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v[0]["elapsed_ms"].is_number());
}

#[test]
fn verify_all_skips_unsupported_checks() {
    let out = qeuler(&["verify", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains("dnj-recursion"));
    assert!(text.contains("PASS  golden n=8"));
    assert_eq!(qeuler(&["verify", "--n", "11"]).status.code(), Some(2));
}

#[test]
fn bijection_both_ways() {
    assert_eq!(stdout(&qeuler(&["bijection", "*3*21"])), "123\n");
    assert_eq!(
        stdout(&qeuler(&["bijection", "--inverse", "123"])),
        "*3*21\n"
    );
    let table = stdout(&qeuler(&["bijection", "--n", "2", "--format", "csv"]));
    assert_eq!(
        table,
        "address,tau,sigma,revmaj,dec,inv3,monot\n1,12,21,1,0,1,0\n2,*21,12,0,1,0,1\n"
    );
}

#[test]
fn poly_output() {
    let out = stdout(&qeuler(&[
        "poly", "--n", "2", "--which", "q-minus1", "--format", "json",
    ]));
    assert_eq!(
        out,
        "[{\"q\":0,\"t\":0,\"z\":1,\"c\":1},{\"q\":0,\"t\":1,\"z\":0,\"c\":1}]\n"
    );
    assert_eq!(
        stdout(&qeuler(&["poly", "--n", "3", "--which", "dnj", "--j", "0"])),
        "t^2 + t^3\n"
    );
    assert_eq!(
        stdout(&qeuler(&["poly", "--n", "3", "--which", "euler"])),
        "1 + t\n"
    );
    assert_eq!(
        qeuler(&["poly", "--n", "3", "--which", "dnj"])
            .status
            .code(),
        Some(2)
    );
    let csv = stdout(&qeuler(&[
        "poly", "--n", "2", "--which", "delta", "--format", "csv",
    ]));
    assert_eq!(csv, "q,t,z,c\n0,0,0,1\n0,0,1,1\n0,1,0,1\n1,0,0,1\n");
}

#[test]
fn enumerate_and_stats() {
    let pf = stdout(&qeuler(&[
        "enumerate",
        "--n",
        "3",
        "--kind",
        "parking-functions",
        "--format",
        "csv",
    ]));
    assert_eq!(pf.lines().count(), 1 + 16);
    let dec = stdout(&qeuler(&[
        "enumerate",
        "--n",
        "2",
        "--k",
        "1",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&dec).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["dv"], serde_json::json!([2]));
    assert_eq!(v[0]["dinv"], 0);
    let dyck = stdout(&qeuler(&[
        "enumerate",
        "--n",
        "4",
        "--kind",
        "dyck",
        "--format",
        "csv",
    ]));
    assert_eq!(dyck.lines().count(), 1 + 14);

    let st = stdout(&qeuler(&["stats", "213", "123", "--format", "csv"]));
    assert_eq!(
        st,
        "sigma,maj,revmaj,inv,inv3,monot,ihat,31-2,alternating\n213,1,1,1,3,0,2,0,true\n123,0,3,0,0,2,1,0,false\n"
    );
    let all = stdout(&qeuler(&["stats", "--n", "4", "--format", "csv"]));
    assert_eq!(all.lines().count(), 1 + 24);
}

#[test]
fn schedule_listings() {
    let ones = stdout(&qeuler(&[
        "schedules",
        "--n",
        "3",
        "--k",
        "0",
        "--format",
        "csv",
    ]));
    assert_eq!(ones, "tau,revmaj,dec\n123,3,0\n231,2,0\n");
    let all = stdout(&qeuler(&[
        "schedules",
        "--n",
        "2",
        "--all",
        "--format",
        "csv",
    ]));
    assert_eq!(all, "tau,schedule,weight\n12,1 1,t\n*12,1 0,0\n1*2,1 0,0\n*1*2,0 0,0\n21,1 2,1 + q\n*21,1 1,1\n2*1,1 0,0\n*2*1,0 0,0\n");
}

#[test]
fn output_file_and_progress() {
    let dir = std::env::temp_dir().join(format!("qeuler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = qeuler(&[
        "verify",
        "--n",
        "4",
        "--check",
        "main",
        "--format",
        "json",
        "--progress",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("pass main n=4"));
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"name\": \"main\""));
    std::fs::remove_dir_all(&dir).unwrap();
}
