#![no_main]
use libfuzzer_sys::fuzz_target;
use sdutm::experiments::table::parse_plot_csv as parse;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse(s);
    }
});
