#![no_main]

use libfuzzer_sys::fuzz_target;

// First byte picks the map count, the rest is the address text.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let n = n as usize % 16 + 1;
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(a) = ifs_hull::parse_address(text, n) {
        assert!(a.indices().iter().all(|&k| k < n));
        let again = ifs_hull::parse_address(&a.to_index_string(n > 9), n).unwrap();
        assert_eq!(again, a);
    }
});
