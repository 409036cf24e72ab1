#![no_main]

use fnef::feasibility::{certificate_violations, Certificate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = Certificate::parse_json(s) {
        let again = Certificate::parse_json(&c.to_json()).expect("serialized certificate parses");
        assert_eq!(again, c);
        if c.n() <= 12 {
            let _ = certificate_violations(&c);
        }
    }
});
