#![no_main]

use chordalnet::cli::parse_problem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let input = match std::str::from_utf8(data) {
        Ok(s) => s,
        Err(_) => return,
    };
    // Cap the inferred ring size so pathological indices stay cheap.
    if input.len() > 4096 {
        return;
    }
    if let Ok(problem) = parse_problem(input, None) {
        for f in &problem.polys {
            let text = f.to_string();
            let back = chordalnet::ring::parse_poly(problem.ring, &text)
                .expect("canonical form must parse");
            assert_eq!(*f, back);
        }
    }
});
