#![no_main]

use libfuzzer_sys::fuzz_target;
use sosbeta::environment::{environment_shift, parse_sites, Assembly, SignConvention};
use sosbeta::model::units::LengthUnit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(sites) = parse_sites(text, None, LengthUnit::Bohr) else {
        return;
    };
    if let Ok(assembly) = Assembly::new(sites, 1.0) {
        let _ = environment_shift(&assembly, SignConvention::AsPrinted);
    }
});
