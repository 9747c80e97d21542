use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Keywords and issue-reference detection used to recognise defect-fixing
/// commits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixPatterns {
    pub keywords: Vec<String>,
    /// Treat `#<digits>` as an issue reference.
    pub issue_refs: bool,
}

impl Default for FixPatterns {
    fn default() -> Self {
        Self {
            keywords: ["fix", "fixes", "fixed", "bug", "bugs", "defect", "fault", "patch"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            issue_refs: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FixClassification {
    pub is_fix: bool,
    /// Matched substrings in message order, as written.
    pub evidence: Vec<String>,
    /// Issue ids referenced as `#<digits>`, without the `#`.
    pub issue_refs: Vec<String>,
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Case-insensitive, word-bounded keyword and `#<digits>` matching.
pub fn classify_fix_commit(message: &str, patterns: &FixPatterns) -> FixClassification {
    let chars: Vec<(usize, char)> = message.char_indices().collect();
    let mut out = FixClassification::default();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let boundary_before = i == 0 || !is_word(chars[i - 1].1);
        if patterns.issue_refs && c == '#' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let bounded = j == chars.len() || !is_word(chars[j].1);
            if j > i + 1 && bounded {
                let end = chars.get(j).map_or(message.len(), |(b, _)| *b);
                out.evidence.push(message[start..end].to_string());
                out.issue_refs.push(message[start + 1..end].to_string());
                i = j;
                continue;
            }
        }
        if boundary_before && is_word(c) {
            let mut j = i;
            while j < chars.len() && is_word(chars[j].1) {
                j += 1;
            }
            let end = chars.get(j).map_or(message.len(), |(b, _)| *b);
            let word = &message[start..end];
            if patterns
                .keywords
                .iter()
                .any(|k| k.eq_ignore_ascii_case(word))
            {
                out.evidence.push(word.to_string());
            }
            i = j;
            continue;
        }
        i += 1;
    }
    out.is_fix = !out.evidence.is_empty();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn classify(m: &str) -> FixClassification {
        classify_fix_commit(m, &FixPatterns::default())
    }

    #[test]
    fn keyword_fix() {
        let c = classify("Fix NPE in parser");
        assert!(c.is_fix);
        assert_eq!(c.evidence, vec!["Fix"]);
    }

    #[test]
    fn feature_is_not_fix() {
        assert!(!classify("Add feature X").is_fix);
    }

    #[test]
    fn issue_reference() {
        let c = classify("Refactor; closes #142");
        assert!(c.is_fix);
        assert_eq!(c.evidence, vec!["#142"]);
        assert_eq!(c.issue_refs, vec!["142"]);
    }

    #[test]
    fn word_boundaries() {
        assert!(!classify("debug output and prefix handling").is_fix);
        assert!(!classify("issue #12a").is_fix);
        let c = classify("fix-2: correct rounding BUG");
        assert_eq!(c.evidence, vec!["fix", "BUG"]);
    }

    #[test]
    fn overridden_keywords() {
        let p = FixPatterns {
            keywords: vec!["hotfix".into()],
            issue_refs: false,
        };
        assert!(classify_fix_commit("Hotfix for #3", &p).is_fix);
        assert!(!classify_fix_commit("fix #3", &p).is_fix);
    }
}
