#![allow(dead_code)]

use std::path::{Path, PathBuf};

use boxprune::sidecar::Sidecar;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn read_program(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every `.c` file in the corpus with its sidecar, sorted by name.
pub fn corpus() -> Vec<(String, String, Sidecar)> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("c") {
            continue;
        }
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let src = std::fs::read_to_string(&path).unwrap();
        let side = std::fs::read_to_string(path.with_extension("expected")).unwrap();
        out.push((name, src, Sidecar::parse(&side).unwrap()));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
