/// Markers that open the compliance risk paragraph at the end of a report.
pub const DEFAULT_RISK_WARNINGS: &[&str] = &[
    "风险提示",
    "风险因素",
    "风险提醒",
    "投资风险",
    "Risk warning",
    "Risk factors",
];

/// Share of the text, counted from the end, in which a marker may start.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct TextCleaner {
    patterns: Vec<String>,
    tail_fraction: f64,
}

impl Default for TextCleaner {
    fn default() -> Self {
        Self::new(DEFAULT_RISK_WARNINGS.iter().map(|s| s.to_string()).collect())
    }
}

impl TextCleaner {
    pub fn new(patterns: Vec<String>) -> Self {
        let patterns = patterns.into_iter().filter(|p| !p.is_empty()).collect();
        Self {
            patterns,
            tail_fraction: DEFAULT_TAIL_FRACTION,
        }
    }

    pub fn with_tail_fraction(mut self, fraction: f64) -> Self {
        self.tail_fraction = fraction.clamp(0.0, 1.0);
        self
    }

    pub fn patterns(&self) -> &[String] {
        &self.patterns
    }

    pub fn clean(&self, raw: &str) -> String {
        let mut text = collapse(raw);
        // Removing a suffix shortens the text and moves the gate, so repeat
        // until nothing more qualifies.
        while let Some(cut) = self.suffix_start(&text) {
            text.truncate(cut);
            let trimmed = text.trim_end().len();
            text.truncate(trimmed);
        }
        text
    }

    /// Byte offset where the longest qualifying warning suffix begins.
    fn suffix_start(&self, text: &str) -> Option<usize> {
        let n_chars = text.chars().count();
        if n_chars == 0 {
            return None;
        }
        let gate = ((1.0 - self.tail_fraction) * n_chars as f64).ceil() as usize;
        let mut best: Option<usize> = None;
        for pattern in &self.patterns {
            for (byte_pos, _) in text.match_indices(pattern.as_str()) {
                let char_pos = text[..byte_pos].chars().count();
                if char_pos >= gate {
                    best = Some(best.map_or(byte_pos, |b| b.min(byte_pos)));
                    break;
                }
            }
        }
        best
    }
}

fn is_stripped(c: char) -> bool {
    (c.is_control() && !c.is_whitespace())
        || matches!(c, '\u{200B}' | '\u{200C}' | '\u{200D}' | '\u{2060}' | '\u{FEFF}')
}

/// Drops strip-set characters, collapses whitespace runs to one space and trims.
fn collapse(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars() {
        if is_stripped(c) {
            continue;
        }
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(c);
    }
    out
}

pub fn clean_text(raw: &str, risk_warning_patterns: &[String]) -> String {
    TextCleaner::new(risk_warning_patterns.to_vec()).clean(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn strips_control_and_collapses() {
        assert_eq!(clean_text("abc\u{0000}  def", &[]), "abc def");
        assert_eq!(clean_text("  a\t\n b \u{3000} c  ", &[]), "a b c");
        assert_eq!(clean_text("x\u{FEFF}y", &[]), "xy");
        assert_eq!(clean_text("", &[]), "");
    }

    #[test]
    fn trailing_warning_removed() {
        let cleaner = TextCleaner::default();
        let text =
            "公司2018年业绩同比增长27.4%，维持增持评级。公司煤炭在建产能近420万吨，成长空间也较大。风险提示：煤价下跌";
        assert_eq!(
            cleaner.clean(text),
            "公司2018年业绩同比增长27.4%，维持增持评级。公司煤炭在建产能近420万吨，成长空间也较大。"
        );
    }

    #[test]
    fn warning_in_first_sentence_kept() {
        // three sentences, marker in the first one: well outside the trailing quarter
        let cleaner = TextCleaner::default();
        let text = "风险提示已解除，公司经营稳健。二季度收入同比增长二成以上。维持增持评级不变，目标价上调。";
        assert_eq!(cleaner.clean(text), text);
    }

    #[test]
    fn longest_suffix_wins() {
        let cleaner = TextCleaner::new(vec!["风险".into(), "提示".into()]);
        let body = "一".repeat(40);
        let text = format!("{body}风险提示：下跌");
        assert_eq!(cleaner.clean(&text), body);
    }

    #[test]
    fn gate_fraction_is_configurable() {
        let text = format!("{}风险提示：下跌", "一".repeat(10));
        let strict = TextCleaner::default().with_tail_fraction(0.1);
        assert_eq!(strict.clean(&text), text);
        let loose = TextCleaner::default().with_tail_fraction(0.5);
        assert_eq!(loose.clean(&text), "一".repeat(10));
    }

    proptest! {
        #[test]
        fn idempotent(raw in "[a-c 风险提示\\t\\u{0}\\u{3000}。]{0,60}") {
            let cleaner = TextCleaner::default();
            let once = cleaner.clean(&raw);
            prop_assert_eq!(cleaner.clean(&once), once.clone());
            prop_assert!(!once.contains("  "));
            prop_assert!(!once.chars().any(|c| c.is_control()));
        }
    }
}
