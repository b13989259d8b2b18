#![no_main]

use libfuzzer_sys::fuzz_target;
use trackclique::io::{parse_assignment, write_assignment};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(assignment) = parse_assignment(text) {
        assert_eq!(
            parse_assignment(&write_assignment(&assignment)).unwrap(),
            assignment
        );
    }
});
