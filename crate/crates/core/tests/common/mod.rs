#![allow(dead_code)]

use std::path::PathBuf;

use plog::syntax::program::Program;
use plog::worlds::Model;
use plog::Rational;

pub fn corpus_dir() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"].iter().collect()
}

pub fn source(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{}: {}", name, e))
}

/// Statements of several corpus files taken together.
pub fn program(names: &[&str]) -> Program {
    let src: Vec<String> = names.iter().map(|n| source(n)).collect();
    Program::parse(&src.join("\n")).unwrap_or_else(|e| panic!("{:?}: {}", names, e))
}

pub fn model(names: &[&str]) -> Model {
    Model::new(&program(names)).unwrap()
}

/// Every `.plog` file of the corpus, sorted. Files that only make sense as additions to another
/// program are paired with it.
pub fn corpus_programs() -> Vec<Vec<String>> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".plog"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            if n == "max_score.plog" {
                vec!["dice.plog".to_string(), n]
            } else {
                vec![n]
            }
        })
        .collect()
}

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}
