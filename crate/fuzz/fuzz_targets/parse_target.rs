#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(z) = ifs_hull::parse_target(data) {
        assert!(z.re.is_finite() && z.im.is_finite());
    }
});
