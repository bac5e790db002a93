#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::sentiment::{lexicon_score, parse_lexicon};

fuzz_target!(|data: &[u8]| {
    if let Ok(lexicon) = parse_lexicon(data) {
        let words: Vec<&str> = lexicon.entries().into_iter().map(|(w, _)| w).collect();
        if let Ok(s) = lexicon_score(&words, &lexicon, 1.0) {
            assert!(s.is_on_simplex());
        }
    }
});
