#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::market::parse_bars;

fuzz_target!(|data: &[u8]| {
    if let Ok((bars, _)) = parse_bars(data) {
        for b in bars {
            assert!(b.prices.validate().is_ok());
        }
    }
});
