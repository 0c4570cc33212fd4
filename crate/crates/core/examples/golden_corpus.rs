//! Grades the shipped golden corpus and prints a pass/fail table.

use folgrade::corpus::{run_corpus, CorpusFile};
use folgrade::GraderConfig;

fn main() {
    let corpus = CorpusFile::from_json(include_str!("../data/golden_corpus.json")).expect("corpus");
    let report = run_corpus(&corpus, &GraderConfig::default(), 4);
    println!("{report}");
    if !report.all_passed() {
        std::process::exit(1);
    }
}
