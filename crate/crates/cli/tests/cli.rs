use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use concomp_core::formats::{
    parse_gate, parse_instance, parse_program, write_gate, write_instance, write_program,
};
use concomp_core::logic::fredkin_gate;
use concomp_core::movement::{cup, fredkin_program};
use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn concomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_concomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixtures_are_canonical() {
    for name in [
        "fredkin.json",
        "not.json",
        "and.json",
        "cup2.json",
        "cdown2.json",
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(write_gate(&parse_gate(&text).unwrap()), text, "{name}");
    }
    for name in ["infeasible.json", "pair.json", "mixed.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(
            write_instance(&parse_instance(&text).unwrap()),
            text,
            "{name}"
        );
    }
    let fredkin = std::fs::read_to_string(fixture("fredkin.json")).unwrap();
    assert_eq!(fredkin, write_gate(&fredkin_gate()));
    let cup2 = std::fs::read_to_string(fixture("cup2.json")).unwrap();
    assert_eq!(cup2, write_gate(&cup(2).unwrap()));
}

#[test]
fn check_conservative_exit_codes() {
    let out = concomp(&["check-conservative", path(&fixture("fredkin.json"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"conservative": true, "witness": null})
    );

    let out = concomp(&["check-conservative", path(&fixture("not.json"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout_json(&out),
        json!({"conservative": false, "witness": {"input": [0], "input_energy": "1", "output_energy": "2"}})
    );

    let out = concomp(&[
        "check-conservative",
        path(&fixture("fredkin.json")),
        "--eps0",
        "3/2",
        "--delta",
        "1/4",
    ]);
    assert_eq!(code(&out), 0);

    assert_eq!(
        code(&concomp(&[
            "check-conservative",
            path(&fixture("malformed.json"))
        ])),
        2
    );
    assert_eq!(
        code(&concomp(&["check-conservative", "/nonexistent/gate.json"])),
        2
    );
    assert_eq!(
        code(&concomp(&[
            "check-conservative",
            path(&fixture("not.json")),
            "--eps0",
            "0"
        ])),
        2
    );
    assert_eq!(
        code(&concomp(&[
            "check-conservative",
            path(&fixture("not.json")),
            "--delta",
            "x"
        ])),
        2
    );
}

#[test]
fn extend_writes_gate_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let gf = dir.path().join("gf.json");
    let report = dir.path().join("gf.report.json");
    let out = concomp(&[
        "extend",
        path(&fixture("and.json")),
        "--out",
        path(&gf),
        "--report",
        path(&report),
    ]);
    assert_eq!(code(&out), 0);
    let expected = json!({"o_units": 0, "z_units": 2, "ones_pads": 0, "zeros_pads": 2});
    assert_eq!(stdout_json(&out), expected);
    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(on_disk, expected);
    let g = parse_gate(&std::fs::read_to_string(&gf).unwrap()).unwrap();
    assert_eq!((g.inputs(), g.outputs()), (4, 3));

    // the extension is not conservative off its padded inputs
    assert_eq!(code(&concomp(&["check-conservative", path(&gf)])), 1);

    let half = concomp(&[
        "extend",
        path(&fixture("and.json")),
        "--out",
        path(&gf),
        "--eps0",
        "1/2",
    ]);
    assert_eq!(code(&half), 2);
    assert!(String::from_utf8_lossy(&half.stderr).contains("model not unit-scalable"));
}

#[test]
fn conscomp_solve_goldens() {
    let out = concomp(&["conscomp", "solve", path(&fixture("infeasible.json"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout_json(&out),
        json!({"feasible": false, "order": null, "trace": null})
    );

    let out = concomp(&["conscomp", "solve", path(&fixture("mixed.json"))]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["feasible"], true);
    let trace: Vec<i64> = serde_json::from_value(v["trace"].clone()).unwrap();
    assert!(trace.iter().all(|&s| (0..=3).contains(&s)));
    assert_eq!(trace.last(), Some(&0));

    let bf = concomp(&[
        "conscomp",
        "solve",
        "--brute-force",
        path(&fixture("mixed.json")),
    ]);
    assert_eq!(code(&bf), 0);
    // lexicographically first feasible order starts with the first +3
    assert_eq!(stdout_json(&bf)["order"], json!([3, 0, 1, 4, 2]));

    let limited = concomp(&[
        "conscomp",
        "solve",
        "--limit",
        "4",
        path(&fixture("mixed.json")),
    ]);
    assert_eq!(code(&limited), 2);
    assert!(String::from_utf8_lossy(&limited.stderr).contains("instance too large"));

    let unbalanced = concomp(&["conscomp", "solve", path(&fixture("unbalanced.json"))]);
    assert_eq!(code(&unbalanced), 2);
    assert!(String::from_utf8_lossy(&unbalanced.stderr).contains("not a conservative computation"));
}

#[test]
fn conscomp_verify_and_min_capacity() {
    let out = concomp(&[
        "conscomp",
        "verify",
        path(&fixture("pair.json")),
        "--order",
        "0,1",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout_json(&out),
        json!({"feasible": false, "order": [0, 1], "trace": [-1, 0]})
    );

    let out = concomp(&[
        "conscomp",
        "verify",
        path(&fixture("pair.json")),
        "--order",
        "1,0",
    ]);
    assert_eq!(code(&out), 0);

    let out = concomp(&[
        "conscomp",
        "verify",
        path(&fixture("pair.json")),
        "--order",
        "0,0",
    ]);
    assert_eq!(code(&out), 2);

    let out = concomp(&["conscomp", "min-capacity", path(&fixture("mixed.json"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({"min_capacity": 3}));
}

#[test]
fn conscomp_reduce_and_gen() {
    let out = concomp(&["conscomp", "reduce", "1", "2", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({"e": [-1, -2, -3, 3, 3], "C": 3}));

    let out = concomp(&["conscomp", "reduce", "1", "1", "1"]);
    assert_eq!(stdout_json(&out), json!({"e": [2, -1, -1], "C": 1}));

    assert_eq!(code(&concomp(&["conscomp", "reduce", "1", "-2"])), 2);
    assert_eq!(code(&concomp(&["conscomp", "reduce"])), 2);

    let a = concomp(&["conscomp", "gen", "--k", "6", "--bound", "5", "--seed", "7"]);
    let b = concomp(&["conscomp", "gen", "--k", "6", "--bound", "5", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let inst = parse_instance(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!(inst.len(), 6);
    assert_eq!(
        code(&concomp(&["conscomp", "gen", "--k", "0", "--bound", "5"])),
        2
    );
}

#[test]
fn movement_commands() {
    let dir = tempfile::tempdir().unwrap();
    let prog = dir.path().join("fredkin-program.json");
    assert_eq!(
        code(&concomp(&["movement", "fredkin", "--out", path(&prog)])),
        0
    );
    let text = std::fs::read_to_string(&prog).unwrap();
    assert_eq!(text, write_program(&fredkin_program()));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 6);
    let ancillas = v["lines"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|l| l["role"] == "ancilla")
        .count();
    assert_eq!(ancillas, 4);

    let out = concomp(&["movement", "run", path(&prog), "--input", "1,0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"output": [1, 1, 0], "ancillas": [0, 0, 1, 1], "fired": [0, 2, 4]})
    );

    assert_eq!(
        code(&concomp(&[
            "movement",
            "run",
            path(&prog),
            "--input",
            "1,0"
        ])),
        2
    );

    let out = concomp(&["movement", "check", path(&prog)]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"conserves": true, "ancillas_restored": true, "witness": null})
    );

    let out = concomp(&["movement", "check", path(&fixture("dirty.json"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout_json(&out),
        json!({"conserves": true, "ancillas_restored": false, "witness": {"input": [1], "ancillas": [1]}})
    );

    assert_eq!(
        code(&concomp(&[
            "movement",
            "check",
            path(&fixture("fredkin.json"))
        ])),
        2
    );
}

#[test]
fn quantum_commands() {
    let out = concomp(&["quantum", "op", path(&fixture("fredkin.json"))]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 8);
    let re: Vec<Vec<f64>> = serde_json::from_value(v["re"].clone()).unwrap();
    for (col, (x, y)) in fredkin_gate().rows().enumerate() {
        let _ = x;
        let row = y.rank() as usize;
        for (r, line) in re.iter().enumerate() {
            assert_eq!(line[col], if r == row { 1.0 } else { 0.0 });
        }
    }

    assert_eq!(
        code(&concomp(&["quantum", "op", path(&fixture("and.json"))])),
        2
    );

    assert_eq!(
        code(&concomp(&[
            "quantum",
            "verify",
            path(&fixture("cup2.json")),
            "--formula"
        ])),
        0
    );
    assert_eq!(
        code(&concomp(&[
            "quantum",
            "verify",
            path(&fixture("cdown2.json")),
            "--formula"
        ])),
        0
    );
    assert_eq!(
        code(&concomp(&[
            "quantum",
            "verify",
            path(&fixture("fredkin.json"))
        ])),
        0
    );
    let out = concomp(&[
        "quantum",
        "verify",
        path(&fixture("fredkin.json")),
        "--formula",
        "cup",
    ]);
    assert_eq!(code(&out), 1);

    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("not-op.json");
    assert_eq!(
        code(&concomp(&[
            "quantum",
            "op",
            path(&fixture("not.json")),
            "--out",
            path(&op)
        ])),
        0
    );
    assert_eq!(
        code(&concomp(&[
            "quantum",
            "verify",
            path(&fixture("not.json")),
            "--operator",
            path(&op)
        ])),
        0
    );
    let out = concomp(&[
        "quantum",
        "verify",
        path(&fixture("fredkin.json")),
        "--operator",
        path(&op),
    ]);
    assert_eq!(code(&out), 2);

    let out = concomp(&["quantum", "ladder-report", "--d", "3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["clean"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 9);
    assert_eq!(code(&concomp(&["quantum", "ladder-report", "--d", "1"])), 2);
}

#[test]
fn outputs_are_deterministic() {
    let runs: Vec<Output> = (0..2)
        .map(|_| concomp(&["quantum", "ladder-report", "--d", "5"]))
        .collect();
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let runs: Vec<Output> = (0..2)
        .map(|_| concomp(&["conscomp", "solve", path(&fixture("mixed.json"))]))
        .collect();
    assert_eq!(runs[0].stdout, runs[1].stdout);
}

#[test]
fn program_file_round_trip_through_cli() {
    let out = concomp(&["movement", "fredkin"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(write_program(&parse_program(&text).unwrap()), text);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&concomp(&[])), 2);
    assert_eq!(code(&concomp(&["conscomp", "bogus"])), 2);
}
