#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::market::parse_calendar;

fuzz_target!(|data: &[u8]| {
    if let Ok(cal) = parse_calendar(data) {
        assert!(cal.dates().windows(2).all(|w| w[0] < w[1]));
    }
});
