#![no_main]

use hankel::io::parse_jacobi;
use hankel::{jacobi_from_moments, moments_from_jacobi};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(j) = parse_jacobi(text) else {
        return;
    };
    if j.is_empty() || j.len() > 6 {
        return;
    }
    let s = moments_from_jacobi(&j).unwrap();
    assert_eq!(jacobi_from_moments(&s, j.len()).unwrap(), j);
});
