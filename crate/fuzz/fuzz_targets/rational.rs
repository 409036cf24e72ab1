#![no_main]

use fnef::rational::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(s) {
        let text = format_rational(&q);
        assert_eq!(parse_rational(&text).expect("formatted rational parses"), q);
    }
});
