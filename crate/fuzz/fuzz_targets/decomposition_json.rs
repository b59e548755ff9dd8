#![no_main]

use libfuzzer_sys::fuzz_target;

use entropic_emd::Decomposition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // deserialization enforces the decomposition invariants (matching
    // lengths, finite values); accepted values must round-trip
    if let Ok(d) = serde_json::from_str::<Decomposition>(text) {
        let rendered = serde_json::to_string(&d).expect("valid decomposition serializes");
        let again: Decomposition =
            serde_json::from_str(&rendered).expect("rendered output reparses");
        assert_eq!(d, again);
    }
});
