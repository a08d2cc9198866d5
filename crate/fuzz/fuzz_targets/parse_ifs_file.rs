#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = ifs_hull::parse_ifs_file(data);
});
