#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::market::parse_industry;

fuzz_target!(|data: &[u8]| {
    let _ = parse_industry(data);
});
