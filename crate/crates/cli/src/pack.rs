//! The reference Bangla pack, compiled in.

use unlenc_core::lexicon::parse_dictionary;
use unlenc_core::ruleset::parse_rules;
use unlenc_core::{Lexicon, Registry, RuleSet};

pub const DICTIONARY: &str = include_str!("../../../packs/bangla/dictionary.dic");
pub const RULES: &str = include_str!("../../../packs/bangla/rules.ppr");

pub const DICTIONARY_NAME: &str = "<reference>/dictionary.dic";
pub const RULES_NAME: &str = "<reference>/rules.ppr";

pub fn lexicon() -> Lexicon {
    parse_dictionary(DICTIONARY, DICTIONARY_NAME).expect("reference dictionary parses")
}

pub fn rules() -> RuleSet {
    parse_rules(RULES, RULES_NAME, &Registry::builtin()).expect("reference rules parse")
}
