#![no_main]

use fnef::feasibility::WitnessRecord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = WitnessRecord::parse_json(s) {
        let again = WitnessRecord::parse_json(&w.to_json()).expect("serialized witness parses");
        assert_eq!(again, w);
        if w.divisor.n() <= 12 {
            let _ = w.verify();
        }
    }
});
