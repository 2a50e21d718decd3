//! Checked-in fixtures match what the generators produce. `SEMIK_BLESS=1` rewrites them.

use std::fs;
use std::path::PathBuf;

use semikernel_cli::doc::{gallery_document, mutation_documents, to_text};
use semikernel_cli::run::MUTATIONS_PER_CORING;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn bless() -> bool {
    std::env::var("SEMIK_BLESS").map_or(false, |v| v == "1")
}

fn check(path: PathBuf, text: String) {
    if bless() {
        fs::write(&path, text).unwrap();
        return;
    }
    let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e} (run with SEMIK_BLESS=1)", path.display()));
    assert_eq!(on_disk, text, "{} is stale (run with SEMIK_BLESS=1)", path.display());
}

#[test]
fn gallery_fixture_is_current() {
    check(fixtures().join("gallery.json"), to_text(&gallery_document().unwrap()));
}

#[test]
fn mutation_fixtures_are_current() {
    let dir = fixtures().join("mutations");
    let docs = mutation_documents(MUTATIONS_PER_CORING).unwrap();
    assert!(docs.len() >= 20, "only {} mutations", docs.len());
    if bless() {
        fs::create_dir_all(&dir).unwrap();
        for e in fs::read_dir(&dir).unwrap() {
            fs::remove_file(e.unwrap().path()).unwrap();
        }
    }
    let mut expected: Vec<String> = Vec::new();
    for (stem, v) in &docs {
        let name = format!("{stem}.json");
        check(dir.join(&name), to_text(v));
        expected.push(name);
    }
    let mut present: Vec<String> =
        fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    present.sort();
    expected.sort();
    assert_eq!(present, expected);
}
