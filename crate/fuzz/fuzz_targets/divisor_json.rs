#![no_main]

use fnef::divisor::SymDivisor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = SymDivisor::parse_any(s) {
        let again = SymDivisor::parse_json(&d.to_json()).expect("serialized divisor parses");
        assert_eq!(again, d);
    }
});
