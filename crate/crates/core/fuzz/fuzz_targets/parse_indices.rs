#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::market::parse_indices;

fuzz_target!(|data: &[u8]| {
    let _ = parse_indices(data);
});
