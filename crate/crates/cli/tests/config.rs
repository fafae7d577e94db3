//! Scenario config parsing: happy path, defaults, and rejection with
//! line-numbered messages.

use dec2d_cli::{parse_config, parse_methods, CliError, MeshSource, Paraboloid};
use dec2d_core::local_ops::Method;
use dec2d_core::mesh::Point2;

fn data_message(err: CliError) -> String {
    assert_eq!(err.exit_code(), 2, "config errors are data errors: {err}");
    err.to_string()
}

#[test]
fn full_config_round_trip() {
    let text = "\
# comment line
[mesh]
kind = disk
rings = 8          # inline comment
radius = 2.5

[materials]
material = 0 1.5 1.0 30 1
material = 1 4 4 0 0.5

[dirichlet]
value = 10

[solver]
method = both
tol = 1e-9
max_iter = 500

[output]
report = out/report.txt
vtk = fields.vtk
csv = line.csv

[samples]
line = -1 0 1 0 201
line = 0 -1 0 1 11

[convergence]
levels = 4
exact = paraboloid 10 0.2
";
    let cfg = parse_config(text).unwrap();
    match cfg.mesh {
        MeshSource::Disk { rings, radius } => {
            assert_eq!(rings, 8);
            assert_eq!(radius, 2.5);
        }
        other => panic!("expected disk source, got {other}"),
    }
    assert_eq!(cfg.materials.len(), 2);
    assert_eq!(cfg.materials[0].id, 0);
    assert_eq!(cfg.materials[0].kx, 1.5);
    assert_eq!(cfg.materials[1].q, 0.5);
    assert_eq!(cfg.dirichlet_value, Some(10.0));
    assert_eq!(cfg.methods, vec![Method::Dec, Method::Feml]);
    assert_eq!(cfg.tol, 1e-9);
    assert_eq!(cfg.max_iter, 500);
    assert_eq!(cfg.report.as_deref(), Some("out/report.txt"));
    assert_eq!(cfg.vtk.as_deref(), Some("fields.vtk"));
    assert_eq!(cfg.csv.as_deref(), Some("line.csv"));
    assert_eq!(cfg.lines.len(), 2);
    assert_eq!(cfg.lines[0].p0, Point2::new(-1.0, 0.0));
    assert_eq!(cfg.lines[0].count, 201);
    assert_eq!(cfg.lines[1].p1, Point2::new(0.0, 1.0));
    assert_eq!(cfg.levels, 4);
    assert_eq!(cfg.exact, Some(Paraboloid { base: 10.0, coef: 0.2 }));
}

#[test]
fn defaults_fill_optional_keys() {
    let cfg = parse_config("[mesh]\nkind = square\nn = 4\nside = 1\n").unwrap();
    match cfg.mesh {
        MeshSource::Square { n, side, inclusion } => {
            assert_eq!(n, 4);
            assert_eq!(side, 1.0);
            assert!(inclusion.is_none());
        }
        other => panic!("expected square source, got {other}"),
    }
    assert!(cfg.materials.is_empty());
    assert_eq!(cfg.dirichlet_value, None);
    assert_eq!(cfg.methods, vec![Method::Dec, Method::Feml]);
    assert_eq!(cfg.tol, 1e-10);
    assert_eq!(cfg.max_iter, 0);
    assert!(cfg.report.is_none() && cfg.vtk.is_none() && cfg.csv.is_none());
    assert!(cfg.lines.is_empty());
    assert_eq!(cfg.levels, 1);
    assert!(cfg.exact.is_none());

    let disk = parse_config("[mesh]\nkind = disk\nrings = 3\n").unwrap();
    match disk.mesh {
        MeshSource::Disk { rings, radius } => {
            assert_eq!(rings, 3);
            assert_eq!(radius, 1.0);
        }
        other => panic!("expected disk source, got {other}"),
    }
}

#[test]
fn file_and_egg_sources() {
    let cfg = parse_config("[mesh]\nkind = file\npath = meshes/plate.mesh\n").unwrap();
    match cfg.mesh {
        MeshSource::File { ref path } => assert_eq!(path, "meshes/plate.mesh"),
        ref other => panic!("expected file source, got {other}"),
    }
    assert!(!cfg.mesh.is_generator());

    let cfg = parse_config("[mesh]\nkind = egg\nrings = 6\n").unwrap();
    match cfg.mesh {
        MeshSource::Egg { rings } => assert_eq!(rings, 6),
        other => panic!("expected egg source, got {other}"),
    }
    assert!(cfg.mesh.is_generator());
}

#[test]
fn square_inclusion_parses() {
    let text = "[mesh]\nkind = square\nn = 16\nside = 6.2\ninclusion = 3.1 3.1 2 0 1\n";
    let cfg = parse_config(text).unwrap();
    match cfg.mesh {
        MeshSource::Square { inclusion: Some(inc), .. } => {
            assert_eq!(inc.center, Point2::new(3.1, 3.1));
            assert_eq!(inc.radius, 2.0);
            assert_eq!(inc.inside, 0);
            assert_eq!(inc.outside, 1);
        }
        other => panic!("expected square with inclusion, got {other}"),
    }
}

#[test]
fn missing_mesh_pieces_are_rejected() {
    let msg = data_message(parse_config("[solver]\ntol = 1e-8\n").unwrap_err());
    assert!(msg.contains("missing [mesh] section"), "{msg}");

    let msg = data_message(parse_config("[mesh]\nrings = 4\n").unwrap_err());
    assert!(msg.contains("needs kind"), "{msg}");

    let msg = data_message(parse_config("[mesh]\nkind = square\nn = 4\n").unwrap_err());
    assert!(msg.contains("mesh kind square needs side"), "{msg}");

    let msg = data_message(parse_config("[mesh]\nkind = file\n").unwrap_err());
    assert!(msg.contains("mesh kind file needs path"), "{msg}");

    let msg = data_message(parse_config("[mesh]\nkind = lattice\nrings = 1\n").unwrap_err());
    assert!(msg.contains("unknown mesh kind"), "{msg}");
}

#[test]
fn keys_are_validated_per_mesh_kind() {
    let msg = data_message(parse_config("[mesh]\nkind = disk\nrings = 4\nn = 3\n").unwrap_err());
    assert!(msg.contains("line 4"), "{msg}");
    assert!(msg.contains("key n does not apply to mesh kind disk"), "{msg}");

    let msg = data_message(parse_config("[mesh]\nkind = egg\nrings = 4\nradius = 2\n").unwrap_err());
    assert!(msg.contains("key radius does not apply to mesh kind egg"), "{msg}");
}

#[test]
fn malformed_lines_carry_line_numbers() {
    let msg = data_message(parse_config("kind = disk\n").unwrap_err());
    assert!(msg.contains("config line 1"), "{msg}");
    assert!(msg.contains("outside any [section]"), "{msg}");

    let msg = data_message(parse_config("[mesh]\nkind = disk\nrings\n").unwrap_err());
    assert!(msg.contains("config line 3: expected key = value"), "{msg}");

    let msg = data_message(parse_config("[mesh\nkind = disk\n").unwrap_err());
    assert!(msg.contains("unterminated [section] header"), "{msg}");

    let msg = data_message(parse_config("[boundary]\nvalue = 1\n").unwrap_err());
    assert!(msg.contains("unknown section [boundary]"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\n\n[solver]\nspeed = 9\n").unwrap_err(),
    );
    assert!(msg.contains("config line 6: unknown key speed in [solver]"), "{msg}");
}

#[test]
fn duplicate_keys_are_rejected() {
    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\nrings = 3\n").unwrap_err(),
    );
    assert!(msg.contains("config line 4: duplicate key rings"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nkind = egg\nrings = 2\n").unwrap_err(),
    );
    assert!(msg.contains("duplicate key kind"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\n[dirichlet]\nvalue = 1\nvalue = 2\n")
            .unwrap_err(),
    );
    assert!(msg.contains("config line 6: duplicate key value"), "{msg}");
}

#[test]
fn numeric_validation() {
    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = two\n").unwrap_err(),
    );
    assert!(msg.contains("cannot parse rings"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\n[solver]\ntol = -1e-8\n").unwrap_err(),
    );
    assert!(msg.contains("tol must be finite and positive"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\n[convergence]\nlevels = 0\n").unwrap_err(),
    );
    assert!(msg.contains("levels must be at least 1"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\n[samples]\nline = 0 0 1 1 0\n").unwrap_err(),
    );
    assert!(msg.contains("sample count must be at least 1"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\n[materials]\nmaterial = 0 1 1 0\n")
            .unwrap_err(),
    );
    assert!(msg.contains("expected 5 fields: id kx ky angle_deg q"), "{msg}");

    let msg = data_message(
        parse_config("[mesh]\nkind = disk\nrings = 2\n[convergence]\nexact = sine 1 2\n")
            .unwrap_err(),
    );
    assert!(msg.contains("exact must be: paraboloid <base> <coef>"), "{msg}");
}

#[test]
fn method_names() {
    assert_eq!(parse_methods("dec").unwrap(), vec![Method::Dec]);
    assert_eq!(parse_methods("feml").unwrap(), vec![Method::Feml]);
    assert_eq!(parse_methods(" both ").unwrap(), vec![Method::Dec, Method::Feml]);
    let err = parse_methods("fem").unwrap_err();
    assert!(err.contains("method must be dec, feml, or both"), "{err}");

    let cfg = parse_config("[mesh]\nkind = disk\nrings = 2\n[solver]\nmethod = feml\n").unwrap();
    assert_eq!(cfg.methods, vec![Method::Feml]);
}

#[test]
fn error_kinds_map_to_exit_codes() {
    assert_eq!(CliError::usage("bad flag").exit_code(), 1);
    assert_eq!(CliError::data("bad mesh").exit_code(), 2);
    assert_eq!(CliError::solver("stalled").exit_code(), 3);
    assert_eq!(CliError::usage("x").to_string(), "usage error: x");
    assert_eq!(CliError::data("x").to_string(), "data error: x");
    assert_eq!(CliError::solver("x").to_string(), "solver error: x");
}
