//! Word dictionary: parsing and longest-prefix lookup.
//!
//! One entry per line:
//!
//! ```text
//! [মাছ]{}"fish(icl>animal>animate thing)"(N,ANI,SG,CONCRETE)<B,0,0>
//! ```
//!
//! The bracketed head word, an optional id in braces, the quoted Universal
//! Word (possibly `""` for inflection morphemes), the attribute list and the
//! `<flag,frequency,priority>` triple. Blank lines and lines starting with `#`
//! are skipped.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use crate::text::nfc;
use crate::unl::UniversalWord;

/// Lexical attribute token, e.g. `N`, `ROOT`, `#AGT`.
pub type Attr = String;

/// A duplicate-free set of lexical attributes.
pub type AttrSet = BTreeSet<Attr>;

/// Checks the `[#A-Z0-9_]+` shape of an attribute token.
pub fn is_attr_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_' || c == '#')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub headword: String,
    pub id: Option<String>,
    pub uw: UniversalWord,
    pub attributes: AttrSet,
    pub flag: char,
    pub frequency: u32,
    pub priority: u32,
}

impl LexEntry {
    pub fn has(&self, attr: &str) -> bool {
        self.attributes.contains(attr)
    }

    /// Entries with an empty Universal Word only contribute attributes.
    pub fn is_inflection(&self) -> bool {
        self.uw.is_empty()
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]{{{}}}\"{}\"(",
            self.headword,
            self.id.as_deref().unwrap_or(""),
            self.uw
        )?;
        for (i, a) in self.attributes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a)?;
        }
        write!(f, ")<{},{},{}>", self.flag, self.frequency, self.priority)
    }
}

/// The grammar element that failed to parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexErrorKind {
    Missing(&'static str),
    UnclosedQuote,
    BadInteger(String),
    BadFlag(String),
    BadAttribute(String),
    DuplicateAttribute(String),
    EmptyHeadword,
    NoAttributes,
    BadUniversalWord(String),
    Trailing(String),
}

impl fmt::Display for LexErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexErrorKind::Missing(what) => write!(f, "missing {}", what),
            LexErrorKind::UnclosedQuote => f.write_str("unclosed quote around universal word"),
            LexErrorKind::BadInteger(s) => write!(f, "bad integer `{}`", s),
            LexErrorKind::BadFlag(s) => write!(f, "bad language flag `{}`", s),
            LexErrorKind::BadAttribute(s) => write!(f, "bad attribute `{}`", s),
            LexErrorKind::DuplicateAttribute(s) => write!(f, "duplicate attribute `{}`", s),
            LexErrorKind::EmptyHeadword => f.write_str("empty head word"),
            LexErrorKind::NoAttributes => f.write_str("empty attribute list"),
            LexErrorKind::BadUniversalWord(s) => write!(f, "bad universal word: {}", s),
            LexErrorKind::Trailing(s) => write!(f, "unexpected trailing text `{}`", s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{origin}:{line}: {kind}")]
pub struct LexiconError {
    pub origin: String,
    pub line: usize,
    pub kind: LexErrorKind,
}

/// One longest-prefix match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate<'a> {
    pub entry: &'a LexEntry,
    /// Position of the entry in the lexicon.
    pub index: usize,
    /// Matched length in bytes of the (NFC) input.
    pub len: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct TrieNode {
    children: BTreeMap<char, usize>,
    entries: Vec<usize>,
}

/// Immutable dictionary with a code-point trie over head words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    trie: Vec<TrieNode>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon {
            entries: Vec::new(),
            trie: alloc::vec![TrieNode::default()],
        }
    }
}

impl Lexicon {
    pub fn from_entries(entries: impl IntoIterator<Item = LexEntry>) -> Self {
        let mut lex = Lexicon::default();
        for e in entries {
            lex.push(e);
        }
        lex
    }

    fn push(&mut self, entry: LexEntry) {
        let idx = self.entries.len();
        let mut node = 0;
        for c in entry.headword.chars() {
            node = match self.trie[node].children.get(&c) {
                Some(&next) => next,
                None => {
                    self.trie.push(TrieNode::default());
                    let next = self.trie.len() - 1;
                    self.trie[node].children.insert(c, next);
                    next
                }
            };
        }
        self.trie[node].entries.push(idx);
        self.entries.push(entry);
    }

    /// Appends every entry of `other` after this lexicon's entries.
    pub fn extend(&mut self, other: Lexicon) {
        for e in other.entries {
            self.push(e);
        }
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries whose head word equals `headword`, in file order.
    pub fn lookup(&self, headword: &str) -> Vec<&LexEntry> {
        let mut node = 0;
        for c in headword.chars() {
            match self.trie[node].children.get(&c) {
                Some(&next) => node = next,
                None => return Vec::new(),
            }
        }
        self.trie[node].entries.iter().map(|&i| &self.entries[i]).collect()
    }

    /// Head words carried by more than one entry, with their entry counts.
    pub fn duplicate_headwords(&self) -> Vec<(&str, usize)> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        let mut order: Vec<&str> = Vec::new();
        for e in &self.entries {
            let c = counts.entry(e.headword.as_str()).or_insert(0);
            if *c == 0 {
                order.push(e.headword.as_str());
            }
            *c += 1;
        }
        order
            .into_iter()
            .filter_map(|hw| (counts[hw] > 1).then_some((hw, counts[hw])))
            .collect()
    }

    /// Every entry whose head word is a prefix of `input[position..]`.
    ///
    /// Ordered by longer match, then higher priority, then higher frequency,
    /// then earlier declaration. `input` must already be NFC; `position` is a
    /// byte offset on a character boundary.
    pub fn longest_prefix_candidates(&self, input: &str, position: usize) -> Vec<Candidate<'_>> {
        let mut out = Vec::new();
        let mut node = 0;
        let mut len = 0;
        for c in input[position..].chars() {
            match self.trie[node].children.get(&c) {
                Some(&next) => node = next,
                None => break,
            }
            len += c.len_utf8();
            for &index in &self.trie[node].entries {
                out.push(Candidate {
                    entry: &self.entries[index],
                    index,
                    len,
                });
            }
        }
        sort_candidates(&mut out);
        out
    }

    /// Renders the lexicon back into dictionary text.
    pub fn to_dictionary_string(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

/// The candidate order: length, PRI, FRE descending, then file order.
pub fn sort_candidates(c: &mut [Candidate<'_>]) {
    c.sort_by_key(|c| {
        (
            Reverse(c.len),
            Reverse(c.entry.priority),
            Reverse(c.entry.frequency),
            c.index,
        )
    });
}

/// Parses dictionary text. The first malformed line aborts the parse.
pub fn parse_dictionary(source: &str, origin: &str) -> Result<Lexicon, LexiconError> {
    let source = nfc(source);
    let mut lex = Lexicon::default();
    for (n, line) in source.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let entry = parse_entry(trimmed).map_err(|kind| LexiconError {
            origin: origin.to_string(),
            line: n + 1,
            kind,
        })?;
        lex.push(entry);
    }
    Ok(lex)
}

fn parse_entry(line: &str) -> Result<LexEntry, LexErrorKind> {
    let rest = line
        .strip_prefix('[')
        .ok_or(LexErrorKind::Missing("`[` opening the head word"))?;
    let (headword, rest) = rest
        .split_once(']')
        .ok_or(LexErrorKind::Missing("`]` closing the head word"))?;
    if headword.is_empty() {
        return Err(LexErrorKind::EmptyHeadword);
    }

    let rest = rest
        .trim_start()
        .strip_prefix('{')
        .ok_or(LexErrorKind::Missing("`{` opening the id"))?;
    let (id, rest) = rest
        .split_once('}')
        .ok_or(LexErrorKind::Missing("`}` closing the id"))?;
    let id = id.trim();

    let rest = rest
        .trim_start()
        .strip_prefix('"')
        .ok_or(LexErrorKind::Missing("`\"` opening the universal word"))?;
    let (uw_text, rest) = rest.split_once('"').ok_or(LexErrorKind::UnclosedQuote)?;
    let uw = UniversalWord::parse(uw_text).map_err(|e| LexErrorKind::BadUniversalWord(e.kind.to_string()))?;

    let rest = rest
        .trim_start()
        .strip_prefix('(')
        .ok_or(LexErrorKind::Missing("`(` opening the attributes"))?;
    let (attr_text, rest) = rest
        .split_once(')')
        .ok_or(LexErrorKind::Missing("`)` closing the attributes"))?;
    if attr_text.trim().is_empty() {
        return Err(LexErrorKind::NoAttributes);
    }
    let mut attributes = AttrSet::new();
    for raw in attr_text.split(',') {
        let a = raw.trim();
        if !is_attr_token(a) {
            return Err(LexErrorKind::BadAttribute(a.to_string()));
        }
        if !attributes.insert(a.to_string()) {
            return Err(LexErrorKind::DuplicateAttribute(a.to_string()));
        }
    }

    let rest = rest
        .trim_start()
        .strip_prefix('<')
        .ok_or(LexErrorKind::Missing("`<` opening flag, frequency and priority"))?;
    let (triple, rest) = rest
        .split_once('>')
        .ok_or(LexErrorKind::Missing("`>` closing flag, frequency and priority"))?;
    if !rest.trim().is_empty() {
        return Err(LexErrorKind::Trailing(rest.trim().to_string()));
    }
    let mut parts = triple.split(',').map(str::trim);
    let flag_text = parts.next().unwrap_or("");
    let mut flag_chars = flag_text.chars();
    let flag = match (flag_chars.next(), flag_chars.next()) {
        (Some(c), None) if c.is_alphabetic() => c,
        _ => return Err(LexErrorKind::BadFlag(flag_text.to_string())),
    };
    let mut int = |what: &'static str| -> Result<u32, LexErrorKind> {
        let s = parts.next().ok_or(LexErrorKind::Missing(what))?;
        s.parse().map_err(|_| LexErrorKind::BadInteger(s.to_string()))
    };
    let frequency = int("frequency")?;
    let priority = int("priority")?;
    if let Some(extra) = parts.next() {
        return Err(LexErrorKind::Trailing(extra.to_string()));
    }

    Ok(LexEntry {
        headword: headword.to_string(),
        id: (!id.is_empty()).then(|| id.to_string()),
        uw,
        attributes,
        flag,
        frequency,
        priority,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unl::Restriction;
    use alloc::vec;

    fn attrs(list: &[&str]) -> AttrSet {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_fish_entry() {
        let lex = parse_dictionary(
            "[মাছ]{}\"fish(icl>animal>animate thing)\"(N,ANI,SG,CONCRETE)<B,0,0>",
            "test.dic",
        )
        .unwrap();
        assert_eq!(lex.len(), 1);
        let e = &lex.entries()[0];
        assert_eq!(e.headword, "মাছ");
        assert_eq!(e.id, None);
        assert_eq!(e.uw.head, "fish");
        assert_eq!(e.uw.restrictions, vec![Restriction::new("icl", "animal>animate thing")]);
        assert_eq!(e.attributes, attrs(&["N", "ANI", "SG", "CONCRETE"]));
        assert_eq!((e.flag, e.frequency, e.priority), ('B', 0, 0));
    }

    #[test]
    fn parses_eat_entry_with_spacing() {
        let lex = parse_dictionary(
            "[খা]{} \"eat(icl>consume>do,agt>living_thing,obj>concrete_thing)\"(ROOT,VEND,VEG1,#AGT,#OBJ)<B,0,2>",
            "test.dic",
        )
        .unwrap();
        let e = &lex.entries()[0];
        assert_eq!(e.priority, 2);
        assert_eq!(e.attributes, attrs(&["ROOT", "VEND", "VEG1", "#AGT", "#OBJ"]));
        assert_eq!(e.uw.restrictions.len(), 3);
    }

    #[test]
    fn empty_source_and_comments() {
        assert!(parse_dictionary("", "x").unwrap().is_empty());
        assert!(parse_dictionary("# comment\n\n   \n", "x").unwrap().is_empty());
    }

    #[test]
    fn malformed_lines() {
        let err = parse_dictionary("[খা]\"eat\"", "bad.dic").unwrap_err();
        assert_eq!((err.origin.as_str(), err.line), ("bad.dic", 1));
        assert!(matches!(err.kind, LexErrorKind::Missing(_)));

        let err = parse_dictionary("# c\n[ক]{}\"a(icl>b)(N)<B,0,0>", "x").unwrap_err();
        assert_eq!((err.line, err.kind), (2, LexErrorKind::UnclosedQuote));

        let err = parse_dictionary("[ক]{}\"a\"(N)<B,x,0>", "x").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::BadInteger("x".into()));

        let err = parse_dictionary("[ক]{}\"a\"(N,n)<B,0,0>", "x").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::BadAttribute("n".into()));

        let err = parse_dictionary("[ক]{}\"a\"(N,N)<B,0,0>", "x").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::DuplicateAttribute("N".into()));

        let err = parse_dictionary("[ক]{}\"\"()<B,0,0>", "x").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::NoAttributes);

        let err = parse_dictionary("[]{}\"a\"(N)<B,0,0>", "x").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::EmptyHeadword);

        let err = parse_dictionary("[ক]{}\"a\"(N)<BB,0,0>", "x").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::BadFlag("BB".into()));
    }

    #[test]
    fn first_error_aborts() {
        let err = parse_dictionary("[ক]{}\"a\"(N)<B,0,0>\n[খ]\n[গ]", "x").unwrap_err();
        assert_eq!(err.line, 2);
    }

    fn lex(lines: &[&str]) -> Lexicon {
        let mut src = String::new();
        for l in lines {
            src.push_str(l);
            src.push('\n');
        }
        parse_dictionary(&src, "t").unwrap()
    }

    #[test]
    fn longest_prefix_verb_root() {
        let l = lex(&[
            "[খা]{}\"eat(icl>consume>do)\"(ROOT)<B,0,2>",
            "[বে]{}\"\"(VI,2P,FUT,SD)<B,0,0>",
        ]);
        let c = l.longest_prefix_candidates("খাবে", 0);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].entry.headword, "খা");
        assert_eq!(c[0].len, "খা".len());
    }

    #[test]
    fn longest_prefix_noun_then_case() {
        let l = lex(&[
            "[ঢাকা]{}\"Dhaka(icl>place)\"(N,PLACE)<B,0,0>",
            "[য়]{}\"\"(CASE,LOC)<B,0,0>",
        ]);
        let input = nfc("ঢাকায়");
        let c = l.longest_prefix_candidates(&input, 0);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].entry.headword, "ঢাকা");
        let c = l.longest_prefix_candidates(&input, c[0].len);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].entry.headword, nfc("য়"));
        assert!(l.longest_prefix_candidates("xyz", 0).is_empty());
    }

    #[test]
    fn candidate_order() {
        let l = lex(&[
            "[ক]{}\"a\"(N)<B,0,0>",
            "[কখ]{}\"b\"(N)<B,0,0>",
            "[কখ]{}\"c\"(N)<B,5,0>",
            "[কখ]{}\"d\"(N)<B,0,1>",
            "[কখ]{}\"e\"(N)<B,0,1>",
        ]);
        let heads: Vec<&str> = l
            .longest_prefix_candidates("কখগ", 0)
            .iter()
            .map(|c| c.entry.uw.head.as_str())
            .collect();
        assert_eq!(heads, ["d", "e", "c", "b", "a"]);
    }

    #[test]
    fn duplicates_are_reported_not_rejected() {
        let l = lex(&[
            "[তিনি]{}\"He(icl>person)\"(PRON,MALE,3SG,ANI,HPRON)<B,0,0>",
            "[তিনি]{}\"She(icl>person)\"(PRON,FEMALE,3SG,ANI,HPRON)<B,0,0>",
        ]);
        assert_eq!(l.lookup("তিনি").len(), 2);
        assert_eq!(l.duplicate_headwords(), vec![("তিনি", 2)]);
    }

    #[test]
    fn round_trip_text() {
        let l = lex(&[
            "[খা]{} \"eat(icl>consume>do,agt>living_thing)\"(ROOT,#AGT)<B,0,2>",
            "[বে]{x1}\"\"(VI, FUT)<B,3,0>",
        ]);
        let again = parse_dictionary(&l.to_dictionary_string(), "t").unwrap();
        assert_eq!(l, again);
    }
}
