#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::corpus::parse_dictionary;

fuzz_target!(|data: &[u8]| {
    let _ = parse_dictionary(data);
});
