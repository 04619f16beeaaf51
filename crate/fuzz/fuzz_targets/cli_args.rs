#![no_main]
use libfuzzer_sys::fuzz_target;

use absum_cli::RunConfig;

// Arguments are NUL-separated; the program name is prepended.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let args = std::iter::once("absum").chain(s.split('\0'));
    if let Ok(config) = RunConfig::from_args(args) {
        assert!(config.k_min <= config.k_max);
        assert!(config.validate().is_ok());
    }
});
