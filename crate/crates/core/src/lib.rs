//! Rule-driven enconversion of natural-language sentences into Universal
//! Networking Language (UNL) expressions.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`lexicon`]: the word dictionary format and longest-prefix lookup,
//! * [`morphology`]: root + inflection segmentation and attribute merging,
//! * [`unl`]: Universal Words, relations, the UNL text format and DOT export,
//! * [`ruleset`]: the analysis rule language and rule selection,
//! * [`engine`]: the two-window node-list machine that drives the analysis.
//!
//! File IO, the command line front end and the reference rule pack live in
//! the companion `unlenc` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod engine;
pub mod lexicon;
pub mod morphology;
pub mod ruleset;
pub mod text;
pub mod unl;

pub use engine::{Analysis, Engine, EngineConfig, EngineError, IdPolicy, MachineState, Node};
pub use lexicon::{Attr, AttrSet, LexEntry, Lexicon, LexiconError};
pub use morphology::Segmentation;
pub use ruleset::{Action, Condition, Movement, Rule, RuleError, RuleSet, Window};
pub use unl::{
    Endpoint, ParseError as UnlParseError, Registry, Relation, RelationLabel, ScopeId, Style,
    UnlExpression, UniversalWord, UwInstance,
};
