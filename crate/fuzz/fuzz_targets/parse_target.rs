#![no_main]

use hankel::inverse::frobenius_check;
use hankel::io::parse_target;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((t, policy)) = parse_target(text) {
        assert_eq!(
            policy
                .to_string()
                .parse::<hankel::inverse::FreePolicy>()
                .unwrap(),
            policy
        );
        let report = frobenius_check(&t);
        assert_eq!(report.solvable, report.violation.is_none());
    }
});
