use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpquiv"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn decompose_examples() {
    assert_eq!(
        stdout(&["finite", "decompose", "--p", "72", "--n", "5", "--m", "1"]),
        "C(T)^4 ⊕ M2(C(T))^10 ⊕ M6(C(T))^8\n"
    );
    let v = json(&["finite", "decompose", "--p", "77", "--n", "6", "--m", "1"]);
    let pairs: Vec<(u64, u64)> = v["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["size"].as_u64().unwrap(),
                s["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(pairs, vec![(1, 1), (2, 3), (10, 7)]);
    assert_eq!(v["total_dimension"], 77);
}

#[test]
fn census_and_iso() {
    let text = stdout(&["finite", "census", "--p", "3"]);
    assert!(text.starts_with("5 classes"));
    assert!(text.contains("(1,2) (2,1)"));
    let v = json(&["finite", "census", "--p", "3"]);
    assert_eq!(v["class_count"], 5);
    assert_eq!(v["closed_form"], 5);

    assert!(
        stdout(&["finite", "iso", "--p", "3", "--q1", "1,2", "--q2", "2,1"])
            .starts_with("isomorphic: yes")
    );
    assert!(
        stdout(&["finite", "iso", "--p", "3", "--q1", "0,1", "--q2", "1,0"])
            .starts_with("isomorphic: no")
    );
    let v = json(&["finite", "iso", "--p", "3", "--q1", "0,1", "--q2", "0,2"]);
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["witness"]["vertex_map"].as_array().unwrap().len(), 3);
}

#[test]
fn build_lists_edges() {
    let v = json(&["finite", "build", "--p", "3", "--n", "1", "--m", "2"]);
    assert_eq!(v["edges"], serde_json::json!([[0, 0], [1, 2], [2, 1]]));
    let text = stdout(&["finite", "build", "--p", "3", "--n", "1", "--m", "2"]);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn torus_commands() {
    let v = json(&["torus", "reduce", "--F", "4,6;2,2", "--G", "1,0;0,1"]);
    assert_eq!(v["F"], serde_json::json!([[2, 0], [0, 2]]));
    assert!(
        stdout(&["torus", "reduce", "--F", "4,6;2,2", "--G", "1,0;0,1"])
            .starts_with("F' = 2,0;0,2\n")
    );

    let args = [
        "torus",
        "onb",
        "--F",
        "2",
        "--G",
        "3",
        "--samples",
        "100",
        "--seed",
        "0",
    ];
    let v = json(&args);
    assert!(v["orth_defect"].as_f64().unwrap() < 1e-9);
    assert!(v["recon_defect"].as_f64().unwrap() < 1e-9);
    let text = stdout(&args);
    let orth: f64 = text
        .lines()
        .next()
        .unwrap()
        .strip_prefix("orth_defect = ")
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(orth, v["orth_defect"].as_f64().unwrap());
}

#[test]
fn symbolic_commands() {
    assert_eq!(
        stdout(&[
            "symbolic",
            "normalize",
            "--F",
            "2",
            "--G",
            "3",
            "--word",
            "S* U1^2 S"
        ]),
        "U1^3\n"
    );
    let v = json(&[
        "symbolic",
        "normalize",
        "--F",
        "2",
        "--G",
        "3",
        "--word",
        "S* U1^2 S",
    ]);
    assert_eq!(v["degree_terms"][0]["nu"], serde_json::json!([3]));
    assert!(stdout(&[
        "symbolic",
        "verify",
        "--check",
        "crossed-product",
        "--F",
        "2",
        "--G",
        "3",
        "--k",
        "1",
        "--trials",
        "25"
    ])
    .contains("PASS"));
    let v = json(&[
        "symbolic",
        "verify",
        "--check",
        "presentation",
        "--F",
        "2,0;0,3",
        "--G",
        "1,1;0,1",
    ]);
    assert_eq!(v["passed"], true);
    let v = json(&[
        "symbolic",
        "verify",
        "--check",
        "subalg-gens",
        "--F",
        "2",
        "--G",
        "3",
        "--kvec",
        "2",
    ]);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["finite", "census", "--help"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["finite", "bogus"]), 1);
    assert_eq!(
        code(&["finite", "decompose", "--p", "x", "--n", "5", "--m", "1"]),
        1
    );
    assert_eq!(
        code(&["finite", "iso", "--p", "3", "--q1", "1", "--q2", "2,1"]),
        1
    );
    assert_eq!(code(&["torus", "reduce", "--F", "1,x", "--G", "1"]), 1);
    assert_eq!(
        code(&[
            "symbolic",
            "normalize",
            "--F",
            "2",
            "--G",
            "3",
            "--word",
            "S* U3 S"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "symbolic",
            "normalize",
            "--F",
            "2",
            "--G",
            "3",
            "--word",
            "S Q"
        ]),
        1
    );
    assert_eq!(
        code(&["symbolic", "verify", "--check", "twisted", "--F", "2", "--G", "3"]),
        1
    );

    assert_eq!(
        code(&["finite", "decompose", "--p", "72", "--n", "4", "--m", "1"]),
        2
    );
    assert_eq!(code(&["finite", "census", "--p", "0"]), 2);
    assert_eq!(
        code(&["torus", "reduce", "--F", "1,1;1,1", "--G", "1,0;0,1"]),
        2
    );
    assert_eq!(
        code(&[
            "symbolic",
            "verify",
            "--check",
            "subalg-gens",
            "--F",
            "2",
            "--G",
            "4",
            "--kvec",
            "2"
        ]),
        2
    );
    assert_eq!(
        code(&["symbolic", "verify", "--check", "twisted", "--F", "2", "--G", "3", "--kvec", "2"]),
        2
    );
    assert_eq!(
        code(&[
            "symbolic",
            "verify",
            "--check",
            "power-quotient",
            "--F",
            "2",
            "--G",
            "3",
            "--k",
            "2"
        ]),
        2
    );

    let err = run(&["torus", "reduce", "--F", "1,1;1,1", "--G", "1,0;0,1"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("singular F"));
    let err = run(&[
        "symbolic",
        "normalize",
        "--F",
        "2",
        "--G",
        "3",
        "--word",
        "S* U3 S",
    ]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("position 3"));
}

#[test]
fn json_is_byte_stable() {
    let cases: [&[&str]; 6] = [
        &["finite", "census", "--p", "5", "--json"],
        &[
            "finite",
            "decompose",
            "--p",
            "72",
            "--n",
            "5",
            "--m",
            "1",
            "--json",
        ],
        &[
            "torus", "reduce", "--F", "4,6;2,2", "--G", "1,2;3,4", "--json",
        ],
        &[
            "torus", "onb", "--F", "2,0;0,3", "--G", "1,1;0,1", "--seed", "7", "--json",
        ],
        &[
            "symbolic",
            "normalize",
            "--F",
            "2,0;0,3",
            "--G",
            "1,1;0,1",
            "--word",
            "1/2 S U1 S* - 3i U2^-1 S",
            "--json",
        ],
        &[
            "symbolic",
            "verify",
            "--check",
            "crossed-product",
            "--F",
            "3",
            "--G",
            "-1",
            "--seed",
            "4",
            "--json",
        ],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        serde_json::from_slice::<Value>(&a.stdout).unwrap();
    }
}

#[test]
fn non_diagonal_f_is_reduced_first() {
    let out = run(&[
        "symbolic",
        "verify",
        "--check",
        "presentation",
        "--F",
        "4,6;2,2",
        "--G",
        "1,0;0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reduced pair"));
}
