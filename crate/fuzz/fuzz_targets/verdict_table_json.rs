#![no_main]

use fnef::pipeline::{report, Format, VerdictTable};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = VerdictTable::parse_json(s) {
        let again = VerdictTable::parse_json(&t.to_json()).expect("serialized table parses");
        assert_eq!(again, t);
        let _ = report(&t, Format::Csv);
        let _ = report(&t, Format::Text);
    }
});
