use std::sync::Mutex;
use std::thread;

use folgrade::corpus::CorpusFile;
use folgrade::oracle::{agreement_suite, check, Agreement};
use folgrade::GraderConfig;

fn golden() -> CorpusFile {
    CorpusFile::from_json(include_str!("../data/golden_corpus.json")).unwrap()
}

fn run_suite() -> Vec<Agreement> {
    let suite = agreement_suite(&golden());
    let results = Mutex::new(Vec::new());
    let chunk = suite.len().div_ceil(4).max(1);
    thread::scope(|s| {
        for part in suite.chunks(chunk) {
            let results = &results;
            s.spawn(move || {
                for (ex, text) in part {
                    let a = check(ex, text, &GraderConfig::default(), 3).expect("suite texts parse");
                    results.lock().unwrap().push(a);
                }
            });
        }
    });
    results.into_inner().unwrap()
}

#[test]
fn verdicts_agree_with_finite_model_oracle() {
    let results = run_suite();
    assert!(results.len() >= 30, "only {} pairs", results.len());
    let conclusive = results.iter().filter(|a| a.oracle.is_conclusive()).count();
    assert!(conclusive >= 20, "only {conclusive} conclusive pairs");
    println!("{} pairs, {conclusive} separated by the oracle", results.len());
    let unsound: Vec<&str> = results.iter().filter(|a| a.unsound_correct()).map(|a| a.text.as_str()).collect();
    assert!(unsound.is_empty(), "unsound Correct: {unsound:?}");
    let disagree: Vec<String> = results
        .iter()
        .filter(|a| !a.agrees())
        .map(|a| format!("{} => {}", a.text, a.verdict.status()))
        .collect();
    assert!(disagree.is_empty(), "disagreements: {disagree:#?}");
}
