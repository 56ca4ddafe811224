use serde_json::Value;
use strength_fano_cli::{
    run, run_with_env, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION, SCHEMA,
};

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("strength-fano")
        .chain(args.iter().copied())
        .map(String::from)
        .collect()
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(argv(args));
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}):\n{out}"));
    (code, v)
}

#[test]
fn fano_eqs_lists_three_equations_for_a_conic() {
    let (code, v) = json(&[
        "fano-eqs",
        "--field",
        "rat",
        "-k",
        "1",
        "-f",
        "x0^2+x1^2+x2^2",
    ]);
    assert_eq!(code, EXIT_OK);
    let gs: Vec<&str> = v["result"]["equations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["g"].as_str().unwrap())
        .collect();
    assert_eq!(
        gs,
        [
            "u0_0^2 + u0_1^2 + u0_2^2",
            "2*u0_0*u1_0 + 2*u0_1*u1_1 + 2*u0_2*u1_2",
            "u1_0^2 + u1_1^2 + u1_2^2"
        ]
    );
}

#[test]
fn ustr_of_two_quadrics() {
    let (code, v) = json(&["ustr", "2", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["u_str"], 25);
}

#[test]
fn charp_demo_finds_the_middle_slot() {
    let (code, v) = json(&["charp-demo", "--p", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["slots"], 5);
    assert_eq!(v["result"]["zero_slots"], serde_json::json!([[2, 2]]));
    assert_eq!(v["field"], "fp:3");
}

#[test]
fn reports_carry_the_header() {
    let (_, v) = json(&["--seed", "9", "quadric-strength", "-f", "x0*x1+x2*x3"]);
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["field"], "rat");
    assert_eq!(v["command"], "quadric-strength");
    assert_eq!(v["input"]["polynomials"][0], "x0*x1+x2*x3");
    assert!(v["checks"].is_array());
    assert_eq!(v["result"][0]["strength"], 1);
    assert_eq!(v["result"][0]["rank"], 4);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    let cases: &[&[&str]] = &[
        &[
            "--seed",
            "4",
            "parametrize-cubic",
            "-f",
            "x0^3+x1^3+x2^3+x3^3",
            "--plane",
            "1,-1,0,0;0,0,1,-1",
        ],
        &[
            "--seed",
            "2",
            "--trials",
            "20",
            "transfer-check",
            "-k",
            "1",
            "-f",
            "x0^2+x1^2+x2^2+x3^2+x4^2",
        ],
        &[
            "--seed",
            "1",
            "collective-sample",
            "-f",
            "x0*x1",
            "-f",
            "x2*x3",
        ],
        &["--field", "fp:101", "dim", "--primes", "101", "-f", "x0*x1"],
    ];
    for args in cases {
        let a = run(argv(args));
        let b = run(argv(args));
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn env_seed_only_replaces_the_default() {
    let args = argv(&[
        "parametrize-quadric",
        "-f",
        "x0*x1+x2*x3",
        "--point",
        "1,0,0,0",
    ]);
    let (_, from_env) = run_with_env(args.clone(), Some("17"));
    let (_, explicit) = run_with_env(
        argv(&[
            "--seed",
            "17",
            "parametrize-quadric",
            "-f",
            "x0*x1+x2*x3",
            "--point",
            "1,0,0,0",
        ]),
        None,
    );
    assert_eq!(from_env, explicit);

    let mut flagged = args.clone();
    flagged.splice(1..1, ["--seed".to_string(), "3".to_string()]);
    let (_, v) = run_with_env(flagged, Some("17"));
    let v: Value = serde_json::from_str(&v).unwrap();
    assert_eq!(v["seed"], 3);
}

#[test]
fn malformed_input_exits_one() {
    assert_eq!(run(argv(&["no-such-command"])).0, EXIT_INPUT);
    assert_eq!(
        run(argv(&["smooth-strength", "-f", "x0^2 +* x1"])).0,
        EXIT_INPUT
    );
    assert_eq!(run(argv(&["--field", "fp:4", "ustr", "2"])).0, EXIT_INPUT);
    let (code, v) = json(&["--field", "fp:7", "smooth-strength", "-f", "x0^2 + 1/7*x1"]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["error"]["kind"], "input");
}

#[test]
fn degenerate_cubic_exits_two_with_report() {
    let (code, v) = json(&[
        "parametrize-cubic",
        "-f",
        "x0^2*x2+x1^2*x3",
        "--plane",
        "1,0,0,0;0,1,0,0",
    ]);
    assert_eq!(code, EXIT_VERIFICATION);
    assert_eq!(v["pass"], false);
    assert!(v["error"]["message"].as_str().unwrap().contains("conic"));
}

#[test]
fn exhausted_limits_exit_three() {
    let (code, v) = json(&[
        "--max-basis",
        "1",
        "dim",
        "-f",
        "x0*x1-1",
        "-f",
        "x0^2+x1^3",
    ]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(v["error"]["kind"], "inconclusive");
}

#[test]
fn help_is_not_an_error() {
    let (code, out) = run(argv(&["--help"]));
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("fano-eqs"));
}

#[test]
fn text_output() {
    let (code, out) = run(argv(&["--out", "text", "thresholds", "2", "3"]));
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("strength-fano "));
}

#[test]
fn pullback_end_to_end() {
    let (code, v) = json(&[
        "pullback",
        "-f",
        "x0*x1+x2*x3",
        "-f",
        "y0*y1",
        "-f",
        "y2*y3",
        "-f",
        "y4*y5",
        "-f",
        "y6*y7",
        "--point",
        "1,0,0,0",
    ]);
    assert_eq!(code, EXIT_OK, "{v}");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}
