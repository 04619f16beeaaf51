//! Replays the checked-in fuzz seeds through the parse entry points so the
//! seeds and the target invariants stay in sync with the code.

use std::fs;
use std::path::PathBuf;

use absum::identities::parse_identity_list;
use absum_cli::RunConfig;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn identity_list_seeds() {
    let seeds = seeds("identity_list");
    assert!(!seeds.is_empty());
    for (name, data) in seeds {
        let s = std::str::from_utf8(&data).unwrap();
        let parsed = parse_identity_list(s);
        assert_eq!(parsed.is_ok(), name != "empty_item", "{name}");
        if let Ok(ids) = parsed {
            assert!(ids.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn cli_args_seeds() {
    let seeds = seeds("cli_args");
    assert!(!seeds.is_empty());
    for (name, data) in seeds {
        let s = std::str::from_utf8(&data).unwrap();
        let args = std::iter::once("absum").chain(s.split('\0'));
        let parsed = RunConfig::from_args(args);
        assert_eq!(
            parsed.is_ok(),
            name != "inverted_range",
            "{name}: {parsed:?}"
        );
    }
}
