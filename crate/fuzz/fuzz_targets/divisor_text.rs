#![no_main]

use fnef::divisor::SymDivisor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = SymDivisor::parse_text(s) {
        // Canonical formatting is a fixed point.
        let text = d.to_text();
        let again = SymDivisor::parse_text(&text).expect("formatted divisor parses");
        assert_eq!(again, d);
        assert_eq!(again.to_text(), text);
    }
});
