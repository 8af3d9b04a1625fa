#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(xs) = mrv::smt::sexp::parse_all(src) {
        // printing and reparsing gives the same trees
        let text: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
        assert_eq!(mrv::smt::sexp::parse_all(&text.join(" ")).as_ref(), Ok(&xs));
    }
});
