#![no_main]

use chordalnet::ring::{parse_poly, Ring};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let input = match std::str::from_utf8(data) {
        Ok(s) => s,
        Err(_) => return,
    };
    let ring = Ring::new(6, 13);
    if let Ok(f) = parse_poly(ring, input) {
        // Canonical text must reparse to the identical polynomial.
        let text = f.to_string();
        let back = parse_poly(ring, &text).expect("canonical form must parse");
        assert_eq!(f, back);
    }
});
