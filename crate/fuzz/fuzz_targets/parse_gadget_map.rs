#![no_main]

use libfuzzer_sys::fuzz_target;
use trackclique::io::{parse_csat, parse_gadget_map, write_csat_with_gadget};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (Ok(Some(map)), Ok(instance)) = (parse_gadget_map(text), parse_csat(text)) else {
        return;
    };
    let again = write_csat_with_gadget(&instance, &map);
    assert_eq!(parse_gadget_map(&again).unwrap(), Some(map));
    assert_eq!(parse_csat(&again).unwrap(), instance);
});
