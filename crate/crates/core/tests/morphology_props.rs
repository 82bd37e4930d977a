use std::cmp::Reverse;

use proptest::prelude::*;
use unlenc_core::lexicon::parse_dictionary;
use unlenc_core::morphology::{segment, MAX_SEGMENTATIONS};
use unlenc_core::{LexEntry, Lexicon};

const ALPHABET: [char; 4] = ['ক', 'খ', 'া', 'ি'];

type Key = (Reverse<usize>, Reverse<u32>, Reverse<u32>, usize);

fn key(lex: &Lexicon, i: usize) -> Key {
    let e: &LexEntry = &lex.entries()[i];
    (Reverse(e.headword.len()), Reverse(e.priority), Reverse(e.frequency), i)
}

/// Every root + suffix tiling of `word`, ordered piece by piece.
fn all_tilings(lex: &Lexicon, word: &str) -> Vec<Vec<usize>> {
    fn rest(lex: &Lexicon, word: &str, at: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == word.len() {
            out.push(acc.clone());
            return;
        }
        for (i, e) in lex.entries().iter().enumerate() {
            if e.uw.is_empty() && word[at..].starts_with(e.headword.as_str()) {
                acc.push(i);
                rest(lex, word, at + e.headword.len(), acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    for (i, e) in lex.entries().iter().enumerate() {
        if !e.uw.is_empty() && word.starts_with(e.headword.as_str()) {
            let mut acc = vec![i];
            rest(lex, word, e.headword.len(), &mut acc, &mut out);
        }
    }
    out.sort_by_cached_key(|t| t.iter().map(|&i| key(lex, i)).collect::<Vec<_>>());
    out
}

fn lexicon() -> impl Strategy<Value = String> {
    let entry = (
        prop::collection::vec(prop::sample::select(&ALPHABET[..]), 1..=3),
        any::<bool>(),
        0u32..2,
        0u32..2,
    );
    prop::collection::vec(entry, 1..=30).prop_map(|es| {
        es.into_iter()
            .enumerate()
            .map(|(i, (hw, suffix, fre, pri))| {
                let hw: String = hw.into_iter().collect();
                let (uw, attrs) = if suffix { (String::new(), "VI,PRGR") } else { (format!("r{i}"), "ROOT") };
                format!("[{hw}]{{}}\"{uw}\"({attrs})<B,{fre},{pri}>\n")
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_segmentation_matches_exhaustive_tiling(
        source in lexicon(),
        word in prop::collection::vec(prop::sample::select(&ALPHABET[..]), 1..=15),
    ) {
        let word: String = word.into_iter().collect();
        let lex = parse_dictionary(&source, "gen").unwrap();
        let got: Vec<Vec<usize>> = segment(&lex, &word, 0)
            .iter()
            .map(|s| std::iter::once(s.root.index).chain(s.suffixes.iter().map(|c| c.index)).collect())
            .collect();
        let mut want = all_tilings(&lex, &word);
        want.truncate(MAX_SEGMENTATIONS);
        prop_assert_eq!(&got, &want);

        for s in segment(&lex, &word, 0) {
            prop_assert_eq!(s.surface(), word.clone());
            prop_assert!(s.suffixes.iter().all(|c| c.entry.uw.is_empty()));
        }
        prop_assert_eq!(segment(&lex, &word, 0), segment(&lex, &word, 0));
    }
}

#[test]
fn stops_at_whitespace_and_punctuation() {
    let lex = parse_dictionary("[কা]{}\"x\"(ROOT)<B,0,0>\n[কি]{}\"\"(VI)<B,0,0>\n", "t").unwrap();
    for input in ["কাকি খ", "কাকি?", "কাকি"] {
        let segs = segment(&lex, input, 0);
        assert_eq!(segs.len(), 1, "{input}");
        assert_eq!(segs[0].surface(), "কাকি");
    }
    assert!(segment(&lex, "কাকিখ", 0).is_empty());
}
