#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::pipeline::RunConfig;

fuzz_target!(|text: &str| {
    if let Ok(cfg) = RunConfig::parse(text) {
        let _ = cfg.validate();
        let again = RunConfig::parse(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again.to_toml().unwrap(), cfg.to_toml().unwrap());
    }
});
