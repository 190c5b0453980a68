#![no_main]

use hankel::determinant_transform;
use hankel::inverse::{frobenius_check, TargetSequence};
use hankel::io::parse_sequence;
use hankel::iohvidov::degree_profile;
use hankel::kronecker::{hankel_rank, RankVerdict};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(s) = parse_sequence(text) else {
        return;
    };
    let small = s.len() <= 11
        && s.terms()
            .iter()
            .all(|x| x.numer().significant_bits() <= 64 && x.denom().significant_bits() <= 64);
    if !small {
        return;
    }
    let d = determinant_transform(&s).d_values;
    let report = frobenius_check(&TargetSequence::new(d.clone()).unwrap());
    assert!(report.solvable);
    let cert = hankel_rank(&s);
    if let RankVerdict::FiniteRank(r) = cert.verdict {
        assert!(d[r - 1] != 0);
        assert!(d[r..].iter().all(|x| *x == 0));
    }
    if s.is_nonzero() {
        assert!(degree_profile(&s).unwrap().consistent);
    }
});
