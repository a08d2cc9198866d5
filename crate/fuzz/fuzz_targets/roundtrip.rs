#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(file) = ifs_hull::parse_ifs_file(data) else {
        return;
    };
    let text = ifs_hull::emit(&file);
    let again = ifs_hull::parse_ifs_file(&text).expect("emitted file parses");
    assert_eq!(ifs_hull::emit(&again), text);
    assert_eq!(again.system.numerators(), file.system.numerators());
    assert_eq!(again.settings, file.settings);
});
