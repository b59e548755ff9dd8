#![no_main]

use libfuzzer_sys::fuzz_target;

use entropic_emd::io::{format_series, parse_series_json, SeriesFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(series) = parse_series_json(text) {
        let rendered = format_series(&series, SeriesFormat::Json);
        let again = parse_series_json(&rendered).expect("rendered output reparses");
        assert_eq!(series, again);
    }
});
