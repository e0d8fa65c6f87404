use std::fs;
use std::path::{Path, PathBuf};

use memsim_core::cells::{build_cell, CellConfig, CellKind};
use memsim_core::netlist::{parse, serialize, validate};

fn fixtures(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(dir);
    let mut paths: Vec<PathBuf> = fs::read_dir(&root)
        .unwrap_or_else(|e| panic!("{}: {e}", root.display()))
        .map(|entry| entry.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ckt"))
        .collect();
    paths.sort();
    paths
}

fn expected_line(text: &str) -> usize {
    text.lines()
        .find_map(|l| l.strip_prefix("* error-line:"))
        .and_then(|n| n.trim().parse().ok())
        .expect("malformed fixture declares its error line")
}

#[test]
fn corpus_sizes() {
    assert_eq!(fixtures("good").len(), 20);
    assert_eq!(fixtures("bad").len(), 10);
}

#[test]
fn good_fixtures_round_trip() {
    for path in fixtures("good") {
        let text = fs::read_to_string(&path).unwrap();
        let first = parse(&text).unwrap_or_else(|e| panic!("{}: {e:?}", path.display()));
        let emitted = serialize(&first);
        let second = parse(&emitted).unwrap_or_else(|e| panic!("{}: re-parse {e:?}\n{emitted}", path.display()));
        assert_eq!(first, second, "{}", path.display());
        assert_eq!(emitted, serialize(&second), "{}: serialization is not a fixed point", path.display());
    }
}

#[test]
fn good_fixtures_validate() {
    for path in fixtures("good") {
        let n = parse(&fs::read_to_string(&path).unwrap()).unwrap();
        if let Err(d) = validate(&n) {
            panic!("{}: {d:?}", path.display());
        }
    }
}

#[test]
fn malformed_fixtures_point_at_the_line() {
    for path in fixtures("bad") {
        let text = fs::read_to_string(&path).unwrap();
        let line = expected_line(&text);
        let errors = parse(&text).expect_err(&path.display().to_string());
        assert!(
            errors.iter().all(|e| e.line == line),
            "{}: expected line {line}, got {errors:?}",
            path.display()
        );
        assert!(errors.iter().all(|e| e.column >= 1));
    }
}

#[test]
fn every_cell_netlist_round_trips() {
    let config = CellConfig::default();
    for kind in CellKind::ALL {
        let n = build_cell(kind, &config).unwrap();
        assert_eq!(parse(&serialize(&n)).unwrap(), n, "{kind}");
    }
}
