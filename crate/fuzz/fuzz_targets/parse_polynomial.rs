#![no_main]

use hankel::io::parse_polynomial;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_polynomial(text) {
        if let Some(lead) = p.leading() {
            assert!(*lead != 0);
        }
        let again = serde_json::to_string(&p).unwrap();
        assert_eq!(parse_polynomial(&again).unwrap(), p);
        let _ = p.to_string();
    }
});
