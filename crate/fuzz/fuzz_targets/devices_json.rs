#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = mrv::devices::DeviceTable::from_json(text) {
        let keys: Vec<String> = t.keys().map(str::to_string).collect();
        for k in keys {
            for i in 0..4 {
                let _ = t.read(&k, i, &mrv::ast::Value::Float(0.0));
            }
        }
    }
});
