#![no_main]

use hankel::io::parse_sequence;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_sequence(text) {
        assert!(!s.is_empty());
        let again = serde_json::to_string(&s).unwrap();
        assert_eq!(parse_sequence(&again).unwrap(), s);
    }
});
