//! Compiles a small C program against the header and the static library.

use std::path::PathBuf;
use std::process::Command;

const SRC: &str = r#"
#include <math.h>
#include <stdio.h>
#include "cmapprox.h"

int main(void) {
    CmFunctionHandle *g = NULL;
    if (cm_function_new("spline", &g) != CM_STATUS_OK) return 1;
    double v = 0.0;
    if (cm_function_moment(g, 2, &v) != CM_STATUS_OK || fabs(v - 4.0 / 3.0) > 1e-12) return 2;
    if (cm_function_new("bogus", &g) == CM_STATUS_OK) return 3;
    printf("%s\n", cm_last_error());
    cm_function_free(g);
    return 0;
}
"#;

#[test]
fn c_program_links() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler, skipped");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/c_smoke-xxxx -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcmapprox_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built at {}, skipped", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, SRC).unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).contains("bogus"));
}

fn which_cc() -> Result<String, ()> {
    for c in ["cc", "gcc", "clang"] {
        if Command::new(c).arg("--version").output().is_ok() {
            return Ok(c.to_string());
        }
    }
    Err(())
}
