use std::fs;

use gelfand_core::cache::cache_path;
use gelfand_core::verify::{parse_grid, report_path, run_sweep};
use gelfand_core::{run_verify, Error, GroupKind, PairSpec, RunOptions};

fn pair(kind: GroupKind, n: usize, q: u32) -> PairSpec {
    PairSpec { kind, n, q }
}

#[test]
fn reports_are_deterministic() {
    let p = pair(GroupKind::GL, 2, 2);
    let a = run_verify(p, &RunOptions::default()).unwrap();
    let b = run_verify(p, &RunOptions::default()).unwrap();
    assert_eq!(a.deterministic_json().unwrap(), b.deterministic_json().unwrap());
    assert!(a.deterministic_json().unwrap().contains("\"schema\": \"gelfand-report/1\""));
}

#[test]
fn cached_table_reproduces_cold_report() {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        cache_dir: Some(dir.path().to_path_buf()),
        ..RunOptions::default()
    };
    let p = pair(GroupKind::O, 2, 3);
    let cold = run_verify(p, &RunOptions::default()).unwrap();
    let first = run_verify(p, &opts).unwrap();
    assert!(cache_path(dir.path(), GroupKind::O, 3, 3).exists());
    let warm = run_verify(p, &opts).unwrap();
    let cold = cold.deterministic_json().unwrap();
    assert_eq!(first.deterministic_json().unwrap(), cold);
    assert_eq!(warm.deterministic_json().unwrap(), cold);
}

#[test]
fn corrupted_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        cache_dir: Some(dir.path().to_path_buf()),
        ..RunOptions::default()
    };
    let p = pair(GroupKind::GL, 1, 3);
    let cold = run_verify(p, &opts).unwrap().deterministic_json().unwrap();
    let path = cache_path(dir.path(), GroupKind::GL, 2, 3);
    let text = fs::read_to_string(&path).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["values"][1][0] = serde_json::json!(5);
    fs::write(&path, json.to_string()).unwrap();
    let again = run_verify(p, &opts).unwrap().deterministic_json().unwrap();
    assert_eq!(again, cold);
}

#[test]
fn sweep_writes_reports_and_continues_past_errors() {
    let dir = tempfile::tempdir().unwrap();
    let grid = parse_grid("gl:1:2,o:1:4,o:1:3").unwrap();
    let summary = run_sweep(&grid, dir.path(), &RunOptions::default()).unwrap();
    assert_eq!(summary.rows.len(), 3);
    assert!(summary.rows[0].pass);
    assert!(summary.rows[1].error.is_some());
    assert!(summary.rows[2].pass && summary.rows[2].k == Some(0));
    assert!(!summary.all_pass() && summary.has_errors());
    assert!(report_path(dir.path(), grid[0]).exists());
    assert!(!report_path(dir.path(), grid[1]).exists());
    let table = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert_eq!(table.lines().count(), 4);
    assert!(table.contains("O_2(F_4) > O_1(F_4)"));
}

#[test]
fn empty_sweep_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_sweep(&[], dir.path(), &RunOptions::default()).unwrap();
    assert!(summary.rows.is_empty() && summary.all_pass());
}

#[test]
fn capacity_errors_are_usage_errors() {
    let opts = RunOptions {
        group_cap: 50,
        ..RunOptions::default()
    };
    let err = run_verify(pair(GroupKind::GL, 2, 2), &opts).unwrap_err();
    assert!(matches!(err.root(), Error::Capacity { .. }));
    assert!(err.is_usage());
}
