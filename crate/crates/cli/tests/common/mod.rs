//! Golden-file cases shared by the golden and acceptance targets.

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub scenario: &'static str,
    pub args: &'static [&'static str],
    pub golden: &'static str,
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { scenario: "case1_line", args: &["reduce"], golden: "case1_line.reduce.json", exit: 0 },
    Case { scenario: "case1_line", args: &["verify"], golden: "case1_line.verify.json", exit: 0 },
    Case { scenario: "case1_line", args: &["chain", "--from", "-1", "--to", "0.9"], golden: "case1_line.chain.csv", exit: 0 },
    Case { scenario: "case1_line", args: &["iterate", "--start", "1"], golden: "case1_line.iterate.csv", exit: 0 },
    Case { scenario: "case2_plane", args: &["reduce"], golden: "case2_plane.reduce.json", exit: 0 },
    Case { scenario: "case2_plane", args: &["verify"], golden: "case2_plane.verify.json", exit: 0 },
    Case { scenario: "case2_plane", args: &["chain", "--from", "0,0", "--to", "1.2,-0.9"], golden: "case2_plane.chain.csv", exit: 0 },
    Case { scenario: "case2_plane", args: &["iterate", "--start", "1,-2"], golden: "case2_plane.iterate.csv", exit: 0 },
    Case { scenario: "negative_control", args: &["reduce"], golden: "negative_control.reduce.json", exit: 0 },
    Case { scenario: "negative_control", args: &["verify"], golden: "negative_control.verify.json", exit: 4 },
    Case { scenario: "negative_control", args: &["chain", "--from", "0", "--to", "0.5"], golden: "negative_control.chain.csv", exit: 4 },
    Case { scenario: "negative_control", args: &["iterate", "--start", "1", "--max-iter", "20"], golden: "negative_control.iterate.csv", exit: 3 },
    Case { scenario: "interval_selector", args: &["reduce"], golden: "interval_selector.reduce.json", exit: 0 },
    Case { scenario: "interval_selector", args: &["verify"], golden: "interval_selector.verify.json", exit: 0 },
    Case { scenario: "interval_selector", args: &["chain", "--from", "0.5", "--to", "1.5"], golden: "interval_selector.chain.csv", exit: 0 },
    Case { scenario: "interval_selector", args: &["iterate", "--start", "0", "--local"], golden: "interval_selector.iterate.csv", exit: 0 },
    Case { scenario: "finite_table", args: &["iterate", "--start", "3"], golden: "finite_table.iterate.csv", exit: 0 },
    Case { scenario: "finite_table", args: &["chainability", "--from", "0", "--to", "3"], golden: "finite_table.chainability.json", exit: 0 },
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run_case(case: &Case) -> (String, i32) {
    let scenario = crate_dir().join("scenarios").join(format!("{}.json", case.scenario));
    let out = Command::new(env!("CARGO_BIN_EXE_mvfix"))
        .arg(case.args[0])
        .arg("--scenario")
        .arg(&scenario)
        .args(&case.args[1..])
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8 stdout"), out.status.code().expect("exit code"))
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests").join("golden").join(name)
}
