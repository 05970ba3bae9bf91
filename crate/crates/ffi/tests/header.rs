use std::path::Path;
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/harmonic_ffi.h");

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(HEADER).unwrap();
    for sym in [
        "hp_version",
        "hp_status_string",
        "hp_last_error_message",
        "hp_family_new",
        "hp_family_free",
        "hp_family_vertex_count",
        "hp_family_vertices",
        "hp_family_brocard",
        "hp_family_brocard_angle_measured",
        "hp_family_closure_residual",
        "hp_family_invariant",
        "hp_family_omega_prime",
        "hp_lateral_areas",
        "HP_FRAME_CASEY",
        "HP_STATUS_BUFFER_TOO_SMALL",
        "typedef struct HpFamily HpFamily;",
    ] {
        assert!(h.contains(sym), "missing {sym}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    assert!(Path::new(HEADER).exists());
    let out = Command::new(cc)
        .args([
            "-std=c99",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-x",
            "c",
            HEADER,
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
