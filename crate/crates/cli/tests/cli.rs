use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellhiggs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn report_su11_has_two_components() {
    let v = json(&["report", "su(1,1)"]);
    assert_eq!(v["command"], "report");
    let comps = v["payload"]["moduli"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["total_dim"], 1);
    assert_eq!(comps[1]["base"]["component_count"], "4");
    assert_eq!(comps[1]["fiber_dim"], 1);
    assert_eq!(comps[1]["quotient_action_order"], 2);
    assert_eq!(v["payload"]["moduli"]["moduli_dim"], 1);
    assert!(v["timings"].is_null());
}

#[test]
fn report_compact_a2_is_one_weyl_quotient() {
    let v = json(&["report", "compact(A2)"]);
    let comps = v["payload"]["moduli"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["description"], "(X (x) Z^2) / W, |W| = 6");
}

#[test]
fn report_sp4r_lists_four_classes() {
    let v = json(&["report", "sp(4,R)"]);
    assert_eq!(v["payload"]["moduli"]["cartan_class_count"], 4);
}

#[test]
fn rationals_are_strings() {
    let v = json(&["report", "su(2,1)"]);
    let basis = v["payload"]["moduli"]["real_form"]["lambda_t_basis"]
        .as_array()
        .unwrap();
    assert!(basis
        .iter()
        .flat_map(|r| r.as_array().unwrap())
        .all(Value::is_string));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["report", "so(3,2)"][..],
        &["fiber", "sp(4,R)", "--generic", "--seed", "7"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn timings_are_opt_in() {
    let v = json(&["involution", "su(1,1)", "--timings"]);
    assert!(v["timings"]["involution"].is_number());
}

#[test]
fn fibers() {
    let v = json(&["fiber", "sustar(4)", "--generic"]);
    assert_eq!(v["payload"]["quotient_summary"], "P1 x P1");
    assert_eq!(v["payload"]["stabilizer_order"], 4);
    let v = json(&["fiber", "su(1,1)", "--z", "0"]);
    assert_eq!(v["payload"]["quotient_summary"], "X^1");
    let v = json(&["fiber", "su(1,1)", "--generic"]);
    assert_eq!(v["payload"]["quotient_summary"], "4 points");
    let v = json(&["fiber", "su(1,1)", "--z", "-3/2"]);
    assert_eq!(v["payload"]["z"][0], "-3/2");
}

#[test]
fn involutions() {
    let v = json(&["involution", "compact(A1)"]);
    let mut dims: Vec<String> = v["payload"]["involutive_elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["formula_dim"].as_str().unwrap().to_string())
        .collect();
    dims.sort();
    assert_eq!(dims, ["1", "2"]);
    let v = json(&["involution", "su(1,1)"]);
    assert_eq!(v["payload"]["etale"].as_array().unwrap().len(), 2);
    let v = json(&["involution", "sustar(4)"]);
    assert_eq!(
        (
            v["payload"]["sigma_plus_dim"].as_u64(),
            v["payload"]["sigma_minus_dim"].as_u64()
        ),
        (Some(2), Some(1))
    );
}

#[test]
fn oracle_checks_agree() {
    for s in ["su(1,1)", "su(2,1)"] {
        assert_eq!(json(&["oracle-check", s])["payload"]["agrees"], true);
    }
    let v = json(&["oracle-check", "sustar(4)"]);
    assert_eq!(v["payload"]["real_rank_oracle"], 1);
}

#[test]
fn explicit_spec_from_file_matches_preset() {
    let dir = std::env::temp_dir().join(format!("ellhiggs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("su11.json");
    std::fs::write(
        &path,
        r#"{"cartan_type": "A1", "theta": [[1]], "painting": {"1": "noncompact"}}"#,
    )
    .unwrap();
    let from_file = json(&["report", path.to_str().unwrap()]);
    let preset = json(&["report", "su(1,1)"]);
    assert_eq!(
        from_file["payload"]["moduli"]["components"],
        preset["payload"]["moduli"]["components"]
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_format() {
    let out = run(&["report", "su(1,1)", "--format", "text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("moduli dimension 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["report", "foo(3)"]), 2);
    assert_eq!(
        code(&[
            "report",
            r#"{"cartan_type": "A1", "theta": [[1]], "extra": 1}"#
        ]),
        2
    );
    assert_eq!(code(&["fiber", "su(1,1)", "--z", "1,2"]), 2);
    assert_eq!(code(&["fiber", "su(1,1)", "--z", "x"]), 2);
    assert_eq!(
        code(&["report", "complex(A3)", "--max-weyl-order", "10"]),
        3
    );
    assert_eq!(code(&["oracle-check", "compact(G2)"]), 2);
    assert_eq!(
        code(&["oracle-check", r#"{"cartan_type": "A1", "theta": [[1]]}"#]),
        2
    );
}
