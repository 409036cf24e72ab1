#![no_main]

use fnef::feasibility::verify_proof_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    // A check enumerates every leaf subset; keep inputs small.
    let Ok(v) = serde_json::from_str::<serde_json::Value>(s) else { return };
    if v.get("n").and_then(|n| n.as_u64()).is_some_and(|n| n <= 12) {
        let _ = verify_proof_json(s);
    }
});
