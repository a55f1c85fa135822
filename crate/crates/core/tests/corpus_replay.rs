//! Runs the checked-in fuzz seeds through the fuzz target bodies.

use std::fs;
use std::path::PathBuf;

include!("../../../fuzz/src/exercise.rs");

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let bytes = fs::read(&path).unwrap();
            (path, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn rat_seeds() {
    for (_, bytes) in seeds("parse_rat") {
        exercise_rat(&bytes);
    }
}

#[test]
fn space_document_seeds() {
    for (_, bytes) in seeds("parse_space_document") {
        exercise_space_document(&bytes);
    }
}

#[test]
fn tree_document_seeds() {
    for (_, bytes) in seeds("parse_tree_document") {
        exercise_tree_document(&bytes);
    }
}
