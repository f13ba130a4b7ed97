#![no_main]

use libfuzzer_sys::fuzz_target;

// NUL-separated argv; file arguments are not created, so this exercises the
// argument parser and validation paths.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("sosbeta").chain(text.split('\0'));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let _ = sosbeta::cli::run(args, &mut out, &mut err);
});
