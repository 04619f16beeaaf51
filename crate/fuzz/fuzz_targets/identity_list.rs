#![no_main]
use libfuzzer_sys::fuzz_target;

use absum::identities::{parse_identity_list, IdentityId};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ids) = parse_identity_list(s) {
        // Accepted lists are non-empty, sorted and free of duplicates, and
        // every id round-trips through its canonical name.
        assert!(!ids.is_empty());
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
        for id in ids {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
    }
});
