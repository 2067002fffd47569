use std::path::PathBuf;
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Invocations shared with the golden-file tests.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("eval", &["eval", "--norm", "p:2", "--point", "0.6,0.8"]),
    ("boundary", &["boundary", "--norm", "p:2", "--n", "5"]),
    (
        "boundary_json",
        &[
            "boundary",
            "--norm",
            "mix:0.5:p:1:p:inf",
            "--n",
            "7",
            "--format",
            "json",
        ],
    ),
    ("support", &["support", "--norm", "p:1", "--x0", "0"]),
    (
        "support_endpoint",
        &["support", "--norm", "p:inf", "--endpoint", "right"],
    ),
    ("classify", &["classify", "--norm", "p:2"]),
    (
        "bgp_check",
        &["bgp-check", "--norm", "p:2", "--eps", "0.5,1"],
    ),
    (
        "bgp_check_csv",
        &[
            "bgp-check",
            "--norm",
            "p:1",
            "--eps",
            "0.5",
            "--format",
            "csv",
        ],
    ),
    (
        "lemma",
        &[
            "lemma",
            "--norm",
            "p:2",
            "--X",
            "p:2,1",
            "--Y",
            "p:2,1",
            "--y",
            "2",
            "--r",
            "1",
            "--samples",
            "100000",
            "--seed",
            "7",
        ],
    ),
    (
        "psi",
        &["psi", "--norm", "curve:0,1;0.5,0.9;1,0", "--n", "5"],
    ),
    (
        "validate",
        &[
            "validate",
            "--norm",
            "curve:0,1;0.5,0.9;1,0",
            "--samples",
            "2000",
            "--seed",
            "3",
        ],
    ),
];

pub fn run_cli(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_absnorm"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code())
}
