#![no_main]

use libfuzzer_sys::fuzz_target;
use reportsent::corpus::{parse_corpus, write_corpus, CorpusFormat, CorpusOptions};

// First byte picks the format; accepted records must survive a round trip.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, body)) = data.split_first() else {
        return;
    };
    let format = if sel & 1 == 0 {
        CorpusFormat::Delimited
    } else {
        CorpusFormat::JsonLines
    };
    let opts = CorpusOptions {
        max_reject_rate: 1.0,
        ..CorpusOptions::default()
    };
    if let Ok(corpus) = parse_corpus(body, format, &opts) {
        let mut buf = Vec::new();
        write_corpus(&corpus.records, format, &mut buf).unwrap();
        let back = parse_corpus(&buf, format, &opts).unwrap();
        assert_eq!(back.records, corpus.records);
    }
});
