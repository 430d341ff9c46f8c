//! Compiles a small C program against `include/crown.h` and the static
//! library, then runs it. Skipped when no C compiler or archive is found.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "crown.h"

int main(void) {
    double g[4] = {1.0, 1.0, 0.0, 1.0};
    CrownSymplectic *h = NULL;
    if (crown_symplectic_validate(1, g, NULL, 1e-9, &h) != CrownStatus_Ok) return 10;

    double zr = 0.0, zi = 1.0, wr, wi;
    if (crown_moebius(h, &zr, &zi, 1e-9, &wr, &wi) != CrownStatus_Ok) return 11;
    if (fabs(wr - 1.0) > 1e-14 || fabs(wi - 1.0) > 1e-14) return 12;
    crown_symplectic_free(h);

    double bad[4] = {2.0, 0.0, 0.0, 1.0};
    if (crown_symplectic_validate(1, bad, NULL, 1e-9, &h) != CrownStatus_Validation) return 13;
    if (crown_last_error()[0] == '\0') return 14;

    double y1 = 4.0, y2 = 1.0;
    CrownConePoint *p = NULL;
    if (crown_cone_point_new(NULL, 1, &y1, &y2, 1e-9, &p) != CrownStatus_Ok) return 15;
    double a, b, c, d;
    if (crown_interior_map(p, 1e-9, &a, &b, &c, &d) != CrownStatus_Ok) return 16;
    crown_cone_point_free(p);
    if (fabs(b - 4.0) > 1e-14 || fabs(d + 1.0) > 1e-14) return 17;

    printf("crown %s ok\n", crown_version());
    return 0;
}
"#;

fn find_archive() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let deps = exe.parent()?;
    [deps.parent()?, deps]
        .iter()
        .map(|d| d.join("libcrown_ffi.a"))
        .find(|p| p.exists())
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| cc)
}

#[test]
fn c_program_links_and_runs() {
    let (Some(cc), Some(archive)) = (compiler(), find_archive()) else {
        eprintln!("skipping: no C compiler or static library");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("crown-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let bin = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();

    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "compile failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let run = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "exit {:?}: {stdout}",
        run.status.code()
    );
    assert!(stdout.contains(" ok"));
    let _ = std::fs::remove_dir_all(&dir);
}
