#![no_main]

use libfuzzer_sys::fuzz_target;

use arbor_core::packing::PackingInstance;
use arbor_core::reconfig::{reconfigure, verify_sequence};
use arbor_core::{multiroot, packing};

// Deep pipeline on parsed instances, bounded to desk scale: whatever the
// input, checking must not panic, and when both S and T are feasible the
// produced sequence must replay cleanly.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(loaded) = arbor_core::io::load_instance(text) else {
        return;
    };
    let d = &loaded.digraph;
    if d.vertex_count() > 5 || d.arc_count() > 12 || loaded.k > 2 {
        return;
    }
    let (Some(s), Some(t)) = (loaded.s.clone(), loaded.t.clone()) else {
        return;
    };

    if loaded.is_multiroot() {
        let feasible = |a| {
            multiroot::check_feasible_multiroot(d, loaded.k, a)
                .map(|v| v.is_feasible())
                .unwrap_or(false)
        };
        if feasible(&s) && feasible(&t) {
            let seq = multiroot::reconfigure_multiroot(d, loaded.k, &s, &t)
                .expect("feasible pairs reconfigure");
            assert!(
                multiroot::verify_sequence_multiroot(d, loaded.k, &s, &t, &seq).unwrap_or(false)
            );
        }
    } else {
        let Ok(inst) = PackingInstance::new(d.clone(), loaded.k) else {
            return;
        };
        if packing::check_feasible(&inst, &s).is_feasible()
            && packing::check_feasible(&inst, &t).is_feasible()
        {
            let seq = reconfigure(&inst, &s, &t).expect("feasible pairs reconfigure");
            assert!(verify_sequence(&inst, &s, &t, &seq));
        }
    }
});
