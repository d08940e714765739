#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = arbor_core::io::parse_sequence(text) else {
        return;
    };
    let emitted = arbor_core::io::emit_sequence(&file);
    let reparsed = arbor_core::io::parse_sequence(&emitted).expect("emitted sequences parse");
    assert_eq!(reparsed, file);
    // Replay against a tiny fixed instance: ids and kinds are validated,
    // never panicked on.
    let d = arbor_core::digraph::Digraph::new(3, &[(0, 1), (0, 2), (1, 2), (2, 1)], Some(0))
        .expect("fixed digraph");
    let start = d.arc_set(&[0, 2]).expect("fixed arc set");
    let _ = arbor_core::io::sequence_from_file(&d, &start, &file);
});
