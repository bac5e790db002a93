#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::corpus::{default_dictionary, segment, TextCleaner};

fuzz_target!(|text: &str| {
    let cleaner = TextCleaner::new(vec!["风险提示".into(), "Risk".into()]);
    let cleaned = cleaner.clean(text);
    assert_eq!(cleaner.clean(&cleaned), cleaned);
    let tokens = segment(&cleaned, &default_dictionary());
    let squeezed: String = cleaned.chars().filter(|c| !c.is_whitespace()).collect();
    assert_eq!(tokens.concat(), squeezed);
});
