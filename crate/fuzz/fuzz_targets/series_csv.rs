#![no_main]

use libfuzzer_sys::fuzz_target;

use entropic_emd::io::{format_series, parse_series_csv, SeriesFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // junk must come back as an error, never a panic; anything accepted
    // must survive a write/read round trip bit-exactly
    if let Ok(series) = parse_series_csv(text, 1.0) {
        let rendered = format_series(&series, SeriesFormat::Csv);
        let again = parse_series_csv(&rendered, 1.0).expect("rendered output reparses");
        assert_eq!(series.samples(), again.samples());
    }
});
