#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(s) = mrv::smt::sexp::parse(src) else { return };
    if let Ok(m) = mrv::smt::model::Model::from_sexp(&s) {
        let _ = m.assignments();
    }
});
