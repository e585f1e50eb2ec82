#![allow(dead_code)]

use std::path::PathBuf;

use lto::textio::{load_corpus, LoadedCorpus};

#[path = "../../../core/tests/oracle/mod.rs"]
pub mod oracle;

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

pub fn fixture_themes() -> PathBuf {
    data("fixture/fixture.lto.txt")
}

pub fn fixture_stories() -> PathBuf {
    data("fixture/fixture.sto.txt")
}

pub fn load_fixture() -> LoadedCorpus {
    load_corpus(&[fixture_themes()], &[fixture_stories()]).expect("fixture loads")
}

pub const DAY_THE_EARTH: &str = "movie-day-earth-stood-still-1951";
pub const LAST_WOMAN: &str = "movie-last-woman-on-earth-1960";
pub const VENUS_ENVOY: &str = "st-synthetic-04";

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lto").chain(args.iter().copied());
    let code = lto::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}
