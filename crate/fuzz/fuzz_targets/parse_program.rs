#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(p) = mrv::syntax::parse_program(src) {
        // anything that parses must survive printing and reparsing
        let text = mrv::syntax::pretty(&p);
        let q = mrv::syntax::parse_program(&text).expect("pretty output reparses");
        assert_eq!(p, q);
        let _ = mrv::checks::check_program(&p);
    }
});
