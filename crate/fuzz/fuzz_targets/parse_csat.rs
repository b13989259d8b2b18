#![no_main]

use libfuzzer_sys::fuzz_target;
use trackclique::io::{parse_csat, write_csat};
use trackclique::{construct_tracks, validate};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(instance) = parse_csat(text) {
        assert_eq!(parse_csat(&write_csat(&instance)).unwrap(), instance);
        // Anything that validates must reduce.
        if validate(&instance).is_valid() {
            construct_tracks(&instance).unwrap();
        }
    }
});
