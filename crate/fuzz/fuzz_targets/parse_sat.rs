#![no_main]

use libfuzzer_sys::fuzz_target;
use trackclique::io::{parse_sat, write_sat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(instance) = parse_sat(text) {
        assert_eq!(parse_sat(&write_sat(&instance)).unwrap(), instance);
    }
});
