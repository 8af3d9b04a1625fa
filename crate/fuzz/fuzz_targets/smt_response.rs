#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(out) = std::str::from_utf8(data) {
        let _ = mrv::smt::parse_response(out);
    }
});
