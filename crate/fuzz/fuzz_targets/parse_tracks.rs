#![no_main]

use libfuzzer_sys::fuzz_target;
use trackclique::io::{parse_tracks, write_tracks};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(family) = parse_tracks(text) {
        assert_eq!(parse_tracks(&write_tracks(&family)).unwrap(), family);
    }
});
