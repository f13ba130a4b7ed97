#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(model) = sosbeta::load_model(text) {
            let _ = sosbeta::enumerate_terms(&model);
            let _ = sosbeta::to_fluctuation(&model);
        }
    }
});
