use davenport_cli::{run, OutputRecord};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("davenport").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn theorem_table_row_seven() {
    let (code, out, _) = invoke(&["table", "theorem1", "--jmax", "10", "--format", "tsv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "j\tlower\tlower_display\tupper\tupper_display");
    assert_eq!(lines.len(), 11);
    let row7: Vec<&str> = lines[7].split('\t').collect();
    assert_eq!(row7[0], "7");
    assert_eq!(row7[2], "2.333");
    assert_eq!(row7[4], "3.143");
}

#[test]
fn theorem_table_json_rows() {
    let v = json(&["table", "theorem1", "--jmax", "4", "--schedule", "mixed-f2f3", "--format", "json"]);
    assert_eq!(v["command"], "table theorem1");
    assert_eq!(v["parameters"]["schedule"], "mixed-f2f3");
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn davenport_rank_three() {
    let v = json(&["exact", "davenport", "--rank", "3", "--j", "1"]);
    assert_eq!(v["result"]["value"], 4);
    assert_eq!(v["result"]["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn hamming_at_zero() {
    let v = json(&["bounds", "eval", "--kind", "hamming", "--delta", "0.0"]);
    assert_eq!(v["result"]["value"].as_f64(), Some(1.0));
    let (_, tsv, _) = invoke(&["bounds", "eval", "--kind", "hamming", "--delta", "0.0", "--format", "tsv"]);
    assert_eq!(tsv, "value\n1\n");
}

#[test]
fn decompose_and_sconst() {
    let v = json(&["exact", "decompose", "--rank", "2", "--elements", "1,2,3,1,1"]);
    assert_eq!(v["result"]["max_disjoint"], 2);
    let v = json(&["exact", "sconst", "--rank", "3", "--d", "4"]);
    assert_eq!(v["result"]["value"], 4);
}

#[test]
fn counting_commands() {
    let v = json(&["counting", "ratio", "--n", "12", "--rank", "6", "--j", "2", "--mode", "log"]);
    assert_eq!(v["result"]["mode"], "log");
    assert!(v["result"]["exact_ratio"].is_null());
    let v = json(&["counting", "ratio", "--n", "12", "--rank", "6", "--j", "2"]);
    assert!(v["result"]["exact_ratio"].as_str().unwrap().contains('/'));
    let v = json(&["counting", "lower", "--rank", "3", "--j", "1"]);
    assert_eq!(v["result"]["value"], 4);
}

#[test]
fn corollary_warns() {
    let (code, out, err) = invoke(&["corollary", "--rank", "1000", "--n", "5"]);
    assert_eq!(code, 0);
    assert!(err.starts_with("warning:"), "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 2478.0).abs() <= 1.0, "{value}");
    assert_eq!(v["result"]["asymptotic_in_r"], true);
}

#[test]
fn solve_and_profile() {
    let v = json(&["solve", "--p", "1", "--kind", "mrrw1"]);
    let c = v["result"]["increment"].as_f64().unwrap();
    assert!((c - 0.395628).abs() < 1e-5);
    let (code, out, _) = invoke(&["asymptotic", "--jmax", "100"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("j\tincrement\tcumulative\trho\tkappa\n"));
}

#[test]
fn pcm_run_is_clean() {
    let v = json(&["verify", "pcm", "--trials", "50", "--seed", "3", "--max-rank", "5", "--max-len", "10"]);
    assert_eq!(v["result"]["trials"], 50);
    assert_eq!(v["result"]["mismatches"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["--help"]).0, 0);
    assert_eq!(invoke(&["--version"]).0, 0);
    assert_eq!(invoke(&[]).0, 2);
    assert_eq!(invoke(&["bounds", "eval", "--kind", "plotkin", "--delta", "0.1"]).0, 2);
    let (code, out, err) = invoke(&["bounds", "eval", "--kind", "hamming", "--delta", "1.5"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"));
    assert_eq!(invoke(&["exact", "davenport", "--rank", "9", "--j", "1"]).0, 2);
    assert_eq!(invoke(&["exact", "davenport", "--rank", "4", "--j", "4", "--budget", "10"]).0, 3);
    assert_eq!(invoke(&["counting", "ratio", "--n", "5000", "--rank", "10", "--j", "2"]).0, 2);
}

#[test]
fn byte_identical_reruns() {
    let cases: [&[&str]; 4] = [
        &["table", "theorem1", "--jmax", "10"],
        &["verify", "pcm", "--trials", "40", "--seed", "11"],
        &["exact", "davenport", "--rank", "2", "--j", "3"],
        &["heuristic", "--jmax", "12", "--format", "json"],
    ];
    for args in cases {
        assert_eq!(invoke(args), invoke(args), "{args:?}");
    }
}

#[test]
fn json_round_trips() {
    let cases: [&[&str]; 5] = [
        &["table", "theorem1", "--jmax", "6", "--format", "json"],
        &["bounds", "eval", "--kind", "mrrw1", "--delta", "0.2"],
        &["counting", "ratio", "--n", "30", "--rank", "10", "--j", "3"],
        &["asymptotic", "--jmax", "1000", "--format", "json"],
        &["corollary", "--rank", "50", "--n", "8", "--schedule", "gv"],
    ];
    for args in cases {
        let (code, out, _) = invoke(args);
        assert_eq!(code, 0, "{args:?}");
        let record: OutputRecord = serde_json::from_str(&out).unwrap();
        let mut again = Vec::new();
        record.write_json(&mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), out, "{args:?}");
    }
}
