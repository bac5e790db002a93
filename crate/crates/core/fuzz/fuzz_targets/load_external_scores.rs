#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::sentiment::load_external_scores;

fuzz_target!(|data: &[u8]| {
    if let Ok((scores, _)) = load_external_scores(data, None, 1.0) {
        for s in scores {
            assert!(s.score.is_on_simplex());
        }
    }
});
