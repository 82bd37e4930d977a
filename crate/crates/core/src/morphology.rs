//! Root + inflection segmentation and attribute merging.
//!
//! The dictionary stores each word root once, under the longest surface
//! string shared by its inflected forms, and stores inflection suffixes as
//! entries with an empty Universal Word. A surface word is segmented into one
//! root followed by zero or more such suffixes.

use alloc::vec::Vec;
use alloc::string::String;

use crate::lexicon::{AttrSet, Candidate, LexEntry, Lexicon};
use crate::text::is_boundary;

/// Upper bound on the alternatives [`segment`] enumerates for one word.
pub const MAX_SEGMENTATIONS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation<'a> {
    pub root: Candidate<'a>,
    pub suffixes: Vec<Candidate<'a>>,
}

impl<'a> Segmentation<'a> {
    /// Consumed length in bytes.
    pub fn len(&self) -> usize {
        self.root.len + self.suffixes.iter().map(|s| s.len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Consumed length in code points.
    pub fn char_len(&self) -> usize {
        self.pieces().map(|e| e.headword.chars().count()).sum()
    }

    /// Root then suffix entries.
    pub fn pieces(&self) -> impl Iterator<Item = &'a LexEntry> + '_ {
        core::iter::once(self.root.entry).chain(self.suffixes.iter().map(|c| c.entry))
    }

    pub fn surface(&self) -> String {
        self.pieces().map(|e| e.headword.as_str()).collect()
    }
}

/// End (byte offset) of the word starting at `position`.
pub fn word_end(input: &str, position: usize) -> usize {
    input[position..]
        .char_indices()
        .find(|&(_, c)| is_boundary(c))
        .map_or(input.len(), |(i, _)| position + i)
}

/// Enumerates the segmentations of the word at `position` that consume it
/// completely, best first.
///
/// Roots are entries with a Universal Word; suffixes are entries without.
/// Both are tried in [`Lexicon::longest_prefix_candidates`] order, so the
/// first result has the longest root, then the longest first suffix, and so
/// on. The word ends at whitespace or sentence punctuation. An empty result
/// means the word is unknown.
pub fn segment<'a>(lexicon: &'a Lexicon, input: &str, position: usize) -> Vec<Segmentation<'a>> {
    let end = word_end(input, position);
    let word = &input[..end];
    let mut out = Vec::new();
    if position == end {
        return out;
    }
    for root in lexicon.longest_prefix_candidates(word, position) {
        if root.entry.is_inflection() {
            continue;
        }
        let mut suffixes = Vec::new();
        tile(lexicon, word, position + root.len, root, &mut suffixes, &mut out);
        if out.len() >= MAX_SEGMENTATIONS {
            break;
        }
    }
    out
}

fn tile<'a>(
    lexicon: &'a Lexicon,
    word: &str,
    at: usize,
    root: Candidate<'a>,
    suffixes: &mut Vec<Candidate<'a>>,
    out: &mut Vec<Segmentation<'a>>,
) {
    if out.len() >= MAX_SEGMENTATIONS {
        return;
    }
    if at == word.len() {
        out.push(Segmentation {
            root,
            suffixes: suffixes.clone(),
        });
        return;
    }
    for c in lexicon.longest_prefix_candidates(word, at) {
        if !c.entry.is_inflection() {
            continue;
        }
        suffixes.push(c);
        tile(lexicon, word, at + c.len, root, suffixes, out);
        suffixes.pop();
    }
}

/// Inflection tokens and the UNL attributes they imply, in output order.
pub const TENSE_TABLE: [(&str, &[&str]); 3] = [
    ("PRGR", &["@present", "@progress"]),
    ("FUT", &["@future"]),
    ("PAST", &["@past"]),
];

/// Marks a verbal inflection suffix.
pub const VERBAL_INFLECTION: &str = "VI";

/// UNL attributes implied by the tense tokens in `attrs`. A verbal
/// inflection without any tense token is present tense.
pub fn tense_attributes(attrs: &AttrSet) -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    for (token, labels) in TENSE_TABLE {
        if attrs.contains(token) {
            for l in labels {
                if !out.contains(l) {
                    out.push(l);
                }
            }
        }
    }
    if out.is_empty() && attrs.contains(VERBAL_INFLECTION) {
        out.push("@present");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merged {
    pub attributes: AttrSet,
    /// UNL attributes the merged word will carry once it is emitted.
    pub pending: Vec<&'static str>,
}

/// Combines a root's attributes with a suffix's.
///
/// The result is the union, minus `ROOT` once a verbal inflection has been
/// attached, plus the pending UNL attributes the suffix's tense tokens imply.
pub fn merge_attributes(root: &AttrSet, suffix: &AttrSet) -> Merged {
    let mut attributes: AttrSet = root.union(suffix).cloned().collect();
    if suffix.contains(VERBAL_INFLECTION) {
        attributes.remove("ROOT");
    }
    Merged {
        attributes,
        pending: tense_attributes(suffix),
    }
}
