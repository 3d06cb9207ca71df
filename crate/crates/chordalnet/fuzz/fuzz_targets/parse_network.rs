#![no_main]

use chordalnet::network::{parse_network, print_network};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let input = match std::str::from_utf8(data) {
        Ok(s) => s,
        Err(_) => return,
    };
    if input.len() > 1 << 16 {
        return;
    }
    if let Ok(net) = parse_network(input) {
        // Print and reparse: the dump must round-trip bit-exactly.
        let text = print_network(&net);
        let back = parse_network(&text).expect("dump must reparse");
        assert_eq!(print_network(&back), text);
    }
});
