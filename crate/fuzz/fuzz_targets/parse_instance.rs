#![no_main]

use libfuzzer_sys::fuzz_target;

// Instance parsing and schema validation must never panic, and a validated
// instance must round-trip through the emitter.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = arbor_core::io::parse_instance(text) else {
        return;
    };
    if let Ok(loaded) = arbor_core::io::validate_instance(&file) {
        let _ = arbor_core::io::instance_digest(&file);
        let emitted = arbor_core::io::emit_instance(&file);
        let reparsed = arbor_core::io::parse_instance(&emitted).expect("emitted instances parse");
        assert_eq!(reparsed, file);
        let _ = loaded.is_multiroot();
    }
});
