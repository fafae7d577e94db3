//! End-to-end tests of the dec2d binary: exit codes, report content, artifact
//! determinism, and the meshgen round trip. Every case runs the real
//! executable in its own process, so `DEC2D_THREADS` settings cannot leak
//! between tests.

use std::fs;
use std::path::Path;
use std::process::Command;

use dec2d_core::mesh::parse_mesh;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dec2d_in(dir: &Path, envs: &[(&str, &str)], args: &[&str]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dec2d"));
    cmd.args(args).current_dir(dir).env_remove("DEC2D_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("failed to run dec2d");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn dec2d(dir: &Path, args: &[&str]) -> Run {
    dec2d_in(dir, &[], args)
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

/// First number after `pattern`, parsed from each occurrence in the text.
fn values_after(text: &str, pattern: &str) -> Vec<f64> {
    text.match_indices(pattern)
        .map(|(i, _)| {
            let rest = &text[i + pattern.len()..];
            let token = rest.split_whitespace().next().unwrap_or("");
            token.parse::<f64>().unwrap_or_else(|_| panic!("bad number {token:?} after {pattern:?}"))
        })
        .collect()
}

const CONSTANT_FIELD_CFG: &str = "\
[mesh]
kind = square
n = 4
side = 1

[materials]
material = 0 1 1 0 0

[dirichlet]
value = 10

[solver]
method = both

[output]
report = report.txt
";

#[test]
fn meshgen_round_trips_through_the_mesh_parser() {
    let dir = TempDir::new().unwrap();
    let r = dec2d(
        dir.path(),
        &["meshgen", "disk", "rings=2", "radius=1", "dirichlet=10", "--out", "disk.mesh"],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("wrote"), "{}", r.stdout);
    let file = parse_mesh(&fs::read_to_string(dir.path().join("disk.mesh")).unwrap()).unwrap();
    assert_eq!(file.mesh.num_nodes(), 19);
    assert_eq!(file.mesh.num_elements(), 24);
    assert_eq!(file.materials.len(), 1);
    assert_eq!(file.dirichlet.len(), 12);
    assert!(file.dirichlet.iter().all(|(_, v)| v == 10.0));

    let r = dec2d(
        dir.path(),
        &["meshgen", "square", "n=2", "side=1", "kx=3", "q=2", "--out", "square.mesh"],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let file = parse_mesh(&fs::read_to_string(dir.path().join("square.mesh")).unwrap()).unwrap();
    assert_eq!(file.mesh.num_nodes(), 9);
    assert_eq!(file.mesh.num_elements(), 8);
    assert_eq!(file.materials[0].kx, 3.0);
    assert_eq!(file.materials[0].q, 2.0);
    assert!(file.dirichlet.is_empty());
}

#[test]
fn meshgen_rejects_bad_specs_as_usage_errors() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["meshgen", "disk", "rings=0", "--out", "m.mesh"],
        &["meshgen", "disk", "rings=2", "n=3", "--out", "m.mesh"],
        &["meshgen", "torus", "rings=2", "--out", "m.mesh"],
        &["meshgen", "disk", "rings=abc", "--out", "m.mesh"],
        &["meshgen", "disk", "rings", "--out", "m.mesh"],
        &["meshgen", "square", "side=1", "--out", "m.mesh"],
        &["meshgen", "square", "n=2", "side=1", "inclusion=1,2", "--out", "m.mesh"],
    ];
    for args in cases {
        let r = dec2d(dir.path(), args);
        assert_eq!(r.code, 1, "args {args:?}: stderr {}", r.stderr);
        assert!(r.stderr.contains("usage error"), "args {args:?}: stderr {}", r.stderr);
    }
    let r = dec2d(dir.path(), &["meshgen", "disk", "rings=2", "rings=3", "--out", "m.mesh"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("duplicate meshgen key rings"), "{}", r.stderr);
}

#[test]
fn solve_reports_a_constant_field_without_flux() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "case.cfg", CONSTANT_FIELD_CFG);
    let r = dec2d(dir.path(), &["solve", "--config", "case.cfg"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);

    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    let temps = values_after(&report, "max temperature: ");
    assert_eq!(temps.len(), 2, "one per method:\n{report}");
    for t in temps {
        assert!((t - 10.0).abs() < 1e-8, "constant field should sit at 10, got {t}");
    }
    for f in values_after(&report, "max element flux magnitude: ") {
        assert!(f < 1e-6, "no source and uniform boundary means no flux, got {f}");
    }
    assert!(report.contains("converged: true"));
    assert!(report.contains("stiffness pattern: identical"), "{report}");

    // Wall time is nondeterministic, so it goes to stdout only.
    assert!(r.stdout.contains("wall time:"), "{}", r.stdout);
    assert!(!report.contains("wall time"), "{report}");
}

#[test]
fn method_and_tol_flags_override_the_config() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "case.cfg", CONSTANT_FIELD_CFG);
    let r = dec2d(dir.path(), &["solve", "--config", "case.cfg", "--method", "dec"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("method dec"), "{report}");
    assert!(!report.contains("method feml"), "{report}");

    let r = dec2d(dir.path(), &["solve", "--config", "case.cfg", "--method", "fem"]);
    assert_eq!(r.code, 1, "stderr: {}", r.stderr);
    let r = dec2d(dir.path(), &["solve", "--config", "case.cfg", "--tol", "-1"]);
    assert_eq!(r.code, 1, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("--tol must be finite and positive"), "{}", r.stderr);
}

#[test]
fn data_problems_exit_2() {
    let dir = TempDir::new().unwrap();

    let r = dec2d(dir.path(), &["solve", "--config", "missing.cfg"]);
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("data error"), "{}", r.stderr);

    write(dir.path(), "broken.mesh", "nodes pi\n0 0\n");
    write(dir.path(), "file.cfg", "[mesh]\nkind = file\npath = broken.mesh\n");
    let r = dec2d(dir.path(), &["solve", "--config", "file.cfg"]);
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);

    write(dir.path(), "nomat.cfg", "[mesh]\nkind = disk\nrings = 2\n[dirichlet]\nvalue = 1\n");
    let r = dec2d(dir.path(), &["solve", "--config", "nomat.cfg"]);
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("[materials]"), "{}", r.stderr);

    write(
        dir.path(),
        "nobc.cfg",
        "[mesh]\nkind = disk\nrings = 2\n[materials]\nmaterial = 0 1 1 0 1\n",
    );
    let r = dec2d(dir.path(), &["solve", "--config", "nobc.cfg"]);
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("[dirichlet]"), "{}", r.stderr);
}

#[test]
fn unconverged_solves_exit_3() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "stall.cfg",
        "[mesh]\nkind = square\nn = 6\nside = 1\n\
         [materials]\nmaterial = 0 1 1 0 1\n\
         [dirichlet]\nvalue = 0\n\
         [solver]\ntol = 1e-15\nmax_iter = 1\n",
    );
    let r = dec2d(dir.path(), &["solve", "--config", "stall.cfg"]);
    assert_eq!(r.code, 3, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("solver error"), "{}", r.stderr);
    assert!(r.stderr.contains("iteration cap"), "{}", r.stderr);
}

#[test]
fn csv_without_sample_lines_gets_a_note() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "case.cfg",
        "[mesh]\nkind = disk\nrings = 2\n\
         [materials]\nmaterial = 0 1 1 0 1\n\
         [dirichlet]\nvalue = 0\n\
         [output]\ncsv = line.csv\n",
    );
    let r = dec2d(dir.path(), &["solve", "--config", "case.cfg"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("no [samples] lines"), "{}", r.stdout);
}

const ANISO_DISK_CFG: &str = "\
[mesh]
kind = disk
rings = 3

[materials]
material = 0 1.5 1.0 30 1

[dirichlet]
value = 10

[solver]
method = both

[output]
report = report.txt
vtk = fields.vtk
csv = line.csv

[samples]
line = -1 0 1 0 21
";

fn artifact_set(dir: &Path, sub: &str) -> Vec<(String, Vec<u8>)> {
    let expected = [
        "report.txt",
        "fields-dec.vtk",
        "fields-feml.vtk",
        "line-u-dec.csv",
        "line-flux-dec.csv",
        "line-u-feml.csv",
        "line-flux-feml.csv",
    ];
    expected
        .iter()
        .map(|name| {
            let path = dir.join(sub).join(name);
            (name.to_string(), fs::read(&path).unwrap_or_else(|_| panic!("missing {path:?}")))
        })
        .collect()
}

#[test]
fn artifacts_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "case.cfg", ANISO_DISK_CFG);
    let runs: &[(&str, &[(&str, &str)])] =
        &[("a", &[]), ("b", &[]), ("c", &[("DEC2D_THREADS", "1")]), ("d", &[("DEC2D_THREADS", "3")])];
    for (sub, envs) in runs {
        let r = dec2d_in(dir.path(), envs, &["solve", "--config", "case.cfg", "--out", sub]);
        assert_eq!(r.code, 0, "run {sub}: stderr {}", r.stderr);
    }
    let base = artifact_set(dir.path(), "a");
    for sub in ["b", "c", "d"] {
        let other = artifact_set(dir.path(), sub);
        for ((name, bytes), (_, other_bytes)) in base.iter().zip(&other) {
            assert_eq!(bytes, other_bytes, "artifact {name} differs between runs a and {sub}");
        }
    }
}

#[test]
fn sample_writes_temperature_and_flux_csv() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "case.cfg", ANISO_DISK_CFG);
    let r = dec2d(dir.path(), &["sample", "--config", "case.cfg", "--out", "s"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    for name in ["line-u-dec.csv", "line-flux-dec.csv", "line-u-feml.csv", "line-flux-feml.csv"] {
        let text = fs::read_to_string(dir.path().join("s").join(name)).unwrap();
        assert!(text.starts_with("t,x,y,value\n"), "{name}: {text}");
        assert_eq!(text.lines().count(), 22, "{name}: header plus 21 samples");
    }
    // No [output] csv and no --out: the samples go to stdout under a name header.
    write(dir.path(), "plain.cfg", &ANISO_DISK_CFG.replace("csv = line.csv\n", ""));
    let r = dec2d(dir.path(), &["sample", "--config", "plain.cfg", "--method", "dec"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("# sample-u.csv"), "{}", r.stdout);
    assert!(r.stdout.contains("# sample-flux.csv"), "{}", r.stdout);
    assert!(r.stdout.contains("t,x,y,value"), "{}", r.stdout);
}

#[test]
fn sample_line_flag_overrides_and_validates() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "case.cfg", ANISO_DISK_CFG);
    let r = dec2d(
        dir.path(),
        &["sample", "--config", "case.cfg", "--method", "dec", "--line", "-1,0,1,0,5", "--out", "s"],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let text = fs::read_to_string(dir.path().join("s").join("line-u.csv")).unwrap();
    assert_eq!(text.lines().count(), 6, "header plus 5 samples: {text}");

    let r = dec2d(dir.path(), &["sample", "--config", "case.cfg", "--line", "1,2,3"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--line"), "{}", r.stderr);

    write(dir.path(), "nolines.cfg", &ANISO_DISK_CFG.replace("line = -1 0 1 0 21\n", ""));
    let r = dec2d(dir.path(), &["sample", "--config", "nolines.cfg"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--line"), "{}", r.stderr);
    assert!(r.stderr.contains("[samples]"), "{}", r.stderr);
}

#[test]
fn convergence_subcommand_levels_and_source_checks() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "case.cfg", ANISO_DISK_CFG);
    let r = dec2d(dir.path(), &["convergence", "--config", "case.cfg", "--levels", "1"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("(1 level of midpoint refinement)"), "{}", r.stdout);
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("(1 level of midpoint refinement)"), "{report}");

    let r = dec2d(dir.path(), &["convergence", "--config", "case.cfg", "--levels", "0"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--levels"), "{}", r.stderr);

    let gen = dec2d(dir.path(), &["meshgen", "disk", "rings=2", "dirichlet=0", "--out", "d.mesh"]);
    assert_eq!(gen.code, 0);
    write(dir.path(), "file.cfg", "[mesh]\nkind = file\npath = d.mesh\n");
    let r = dec2d(dir.path(), &["convergence", "--config", "file.cfg", "--levels", "2"]);
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("generator mesh source"), "{}", r.stderr);
}

#[test]
fn thread_env_is_validated() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "case.cfg", CONSTANT_FIELD_CFG);
    for bad in ["abc", "0", "-2", ""] {
        let r = dec2d_in(dir.path(), &[("DEC2D_THREADS", bad)], &["solve", "--config", "case.cfg"]);
        assert_eq!(r.code, 1, "DEC2D_THREADS={bad:?}: stderr {}", r.stderr);
        assert!(r.stderr.contains("DEC2D_THREADS"), "{}", r.stderr);
    }
}

#[test]
fn help_and_usage_exit_codes() {
    let dir = TempDir::new().unwrap();
    for args in [&["--help"][..], &["solve", "--help"][..], &["--version"][..]] {
        let r = dec2d(dir.path(), args);
        assert_eq!(r.code, 0, "args {args:?}: stderr {}", r.stderr);
    }
    let r = dec2d(dir.path(), &["warp", "--config", "x.cfg"]);
    assert_eq!(r.code, 1, "stderr: {}", r.stderr);
    let r = dec2d(dir.path(), &["solve"]);
    assert_eq!(r.code, 1, "missing --config is a usage error: {}", r.stderr);
}
