//! Small text helpers shared by the lexicon, morphology and engine.

use alloc::string::String;
use unicode_normalization::UnicodeNormalization;

/// NFC-normalizes `input`.
pub fn nfc(input: &str) -> String {
    input.nfc().collect()
}

/// Sentence punctuation that detaches from the word it follows.
pub fn is_sentence_punct(c: char) -> bool {
    matches!(c, '?' | '!' | '।' | ',' | ';')
}

/// Characters that end a morphological chunk.
pub fn is_boundary(c: char) -> bool {
    c.is_whitespace() || is_sentence_punct(c)
}

/// Number of code points in `s[..byte]`.
pub fn char_offset(s: &str, byte: usize) -> usize {
    s[..byte].chars().count()
}
