#![no_main]

use libfuzzer_sys::fuzz_target;
use trackclique::io::{parse_graph, write_graph};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(graph) = parse_graph(text) {
        assert_eq!(parse_graph(&write_graph(&graph)).unwrap(), graph);
    }
});
