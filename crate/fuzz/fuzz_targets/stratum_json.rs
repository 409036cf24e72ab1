#![no_main]

use fnef::strata::{canonical_code, Stratum};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = Stratum::parse_json(s) {
        let again = Stratum::parse_json(&t.to_json()).expect("serialized stratum parses");
        assert_eq!(again, t);
        if t.n() <= 16 && !t.is_empty() {
            let _ = canonical_code(&t);
        }
    }
});
