//! Loads the sample deployment config and token file, then applies
//! environment-style overrides.

use std::path::Path;

use folgrade_service::{Config, TokenTable};

fn main() {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("deploy/folgrade.toml");
    let config = Config::load(Some(&file)).unwrap();
    println!("{config:#?}");

    let tokens = TokenTable::load(&config.token_file).unwrap();
    println!("{} tokens", tokens.len());
    for header in ["Bearer change-me-student", "Bearer change-me-instructor", "Bearer wrong"] {
        println!("{header:32} -> {:?}", tokens.authenticate(Some(header)));
    }

    let mut overridden = config.clone();
    overridden
        .apply_env(|key| match key {
            "FOLGRADE_LISTEN" => Some("0.0.0.0:9000".into()),
            "FOLGRADE_WORKERS" => Some("16".into()),
            _ => None,
        })
        .unwrap();
    println!("\nwith overrides: listen {} workers {}", overridden.listen, overridden.workers);

    let mut broken = config;
    println!("{}", broken.apply_env(|k| (k == "FOLGRADE_WORKERS").then(|| "many".into())).unwrap_err());
}
