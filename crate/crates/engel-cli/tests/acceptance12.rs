//! Acceptance criterion 12: every command is byte-identical across two
//! runs with the same seed, and the checked-in golden reports for the
//! degree-table, Stokes and density/beta fixtures reproduce exactly.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_engel")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn capture(args: &[String]) -> String {
    let out = Command::new(bin())
        .args(args)
        .env_remove("ENGEL_SEED")
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn c12_cli_determinism_and_goldens() {
    let start = Instant::now();
    let s = |v: &[&str]| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };
    // one invocation per command, all seeded
    let all_commands: Vec<Vec<String>> = vec![
        s(&[
            "degree",
            "--surface",
            &fixture("vplane.json"),
            "--grid",
            "9",
            "--seed",
            "5",
        ]),
        s(&["beta", "--plane", "e2,e3", "--refine", "2", "--seed", "5"]),
        s(&[
            "density",
            "--surface",
            &fixture("vplane.json"),
            "--degree",
            "3",
            "--radii",
            "0.2,0.15,0.1",
            "--mesh",
            "32",
            "--levels",
            "2",
            "--seed",
            "5",
        ]),
        s(&[
            "stokes",
            "--surface",
            &fixture("vplane.json"),
            "--radius",
            "0.25",
            "--seed",
            "5",
        ]),
        s(&[
            "blowup",
            "--surface",
            &fixture("vplane.json"),
            "--seed",
            "5",
        ]),
        s(&[
            "diverge",
            "--surface",
            &fixture("mixed.json"),
            "--beta",
            "5",
            "--radii",
            "0.125,0.0625",
            "--mesh",
            "32",
            "--levels",
            "2",
            "--seed",
            "5",
        ]),
        s(&[
            "residuals",
            "--surface",
            &fixture("mixed.json"),
            "--grid",
            "9",
            "--seed",
            "5",
        ]),
        s(&["check-distance", "--samples", "50000", "--seed", "5"]),
    ];
    for cmd in &all_commands {
        let first = capture(cmd);
        let second = capture(cmd);
        assert_eq!(first, second, "{:?} not byte-identical", cmd);
    }

    // golden fixtures for the degree table (criterion 4), the Stokes check
    // (criterion 5) and the density/beta pair (criterion 7)
    let golden_cases: Vec<(Vec<String>, &str)> = vec![
        (
            s(&[
                "degree",
                "--surface",
                &fixture("vplane.json"),
                "--grid",
                "9",
            ]),
            "degree_vplane.csv",
        ),
        (
            s(&[
                "degree",
                "--surface",
                &fixture("hplane.json"),
                "--grid",
                "9",
            ]),
            "degree_hplane.csv",
        ),
        (
            s(&["degree", "--surface", &fixture("mixed.json"), "--grid", "9"]),
            "degree_mixed.csv",
        ),
        (
            s(&[
                "degree",
                "--surface",
                &fixture("plane14.json"),
                "--grid",
                "9",
            ]),
            "degree_plane14.csv",
        ),
        (
            s(&[
                "degree",
                "--surface",
                &fixture("plane34.json"),
                "--grid",
                "9",
            ]),
            "degree_plane34.csv",
        ),
        (
            s(&[
                "stokes",
                "--surface",
                &fixture("vplane.json"),
                "--radius",
                "0.25",
            ]),
            "stokes_vplane.csv",
        ),
        (
            s(&["beta", "--plane", "e2,e3", "--refine", "2"]),
            "beta_e2e3.csv",
        ),
        (
            s(&[
                "density",
                "--surface",
                &fixture("vplane.json"),
                "--degree",
                "3",
                "--radii",
                "0.2,0.15,0.1",
                "--mesh",
                "32",
                "--levels",
                "2",
            ]),
            "density_vplane.csv",
        ),
        (
            s(&["blowup", "--surface", &fixture("vplane.json")]),
            "blowup_vplane.csv",
        ),
    ];
    for (cmd, file) in &golden_cases {
        let got = capture(cmd);
        let want = std::fs::read_to_string(golden().join(file)).unwrap();
        assert_eq!(got, want, "golden mismatch for {file}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "[acceptance] 12 CLI determinism: PASS ({} commands byte-identical, {} goldens, {elapsed:.1}s)",
        all_commands.len(),
        golden_cases.len()
    );
}
