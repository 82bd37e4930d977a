//! Analysis rules: the line-oriented rule language, rule selection and the
//! priority band check.
//!
//! One rule per line:
//!
//! ```text
//! 210: "noun-case" L{N,PLACE} R{CASE} => ADD_ATTR(L,PLC); MERGE(L); STAY
//! 90: "manner" L{ADV,!TIME} R{PRED} => REL(man,R,L); STAY
//! 10: "shift" L{ANY} R{!PRED,!STAIL} => NOP; SHIFT_R
//! ```
//!
//! `L{}` and `R{}` test the nodes under the left and right analysis windows,
//! the optional `LL{}` and `RR{}` test their outer neighbours. A condition is
//! `ANY` or a conjunction of attribute tests (`N`, `!TIME`), head word tests
//! (`HW="আজ"`) and the `SHEAD`/`STAIL` markers. The highest priority rule
//! that matches fires; ties go to the rule declared first.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;
use core::ops::RangeInclusive;

use crate::lexicon::is_attr_token;
use crate::text::nfc;
use crate::unl::{is_attribute_label, Registry, RelationLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    L,
    R,
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Window::L => "L",
            Window::R => "R",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Test {
    Attr(String),
    Headword(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cond {
    pub negated: bool,
    pub test: Test,
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        match &self.test {
            Test::Attr(a) => f.write_str(a),
            Test::Headword(hw) => write!(f, "HW=\"{}\"", hw),
        }
    }
}

/// What a rule can see of a node.
pub trait NodeView {
    fn has_attr(&self, attr: &str) -> bool;
    fn headword(&self) -> &str;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    Any,
    All(Vec<Cond>),
}

impl Condition {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Condition::Any)
    }

    pub fn matches<N: NodeView + ?Sized>(&self, node: &N) -> bool {
        match self {
            Condition::Any => true,
            Condition::All(conds) => conds.iter().all(|c| {
                let hit = match &c.test {
                    Test::Attr(a) => node.has_attr(a),
                    Test::Headword(hw) => node.headword() == hw,
                };
                hit != c.negated
            }),
        }
    }

    /// A conditional window pointing past either end of the node list only
    /// satisfies `ANY`.
    fn matches_opt<N: NodeView + ?Sized>(&self, node: Option<&N>) -> bool {
        match node {
            Some(n) => self.matches(n),
            None => self.is_trivial(),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Any => f.write_str("ANY"),
            Condition::All(conds) => {
                for (i, c) in conds.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", c)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    AddAttr(Window, String),
    DelAttr(Window, String),
    /// Fold the other window's node into this one.
    Merge(Window),
    /// Emit `label(head, dependent)` and delete the dependent node.
    Rel(RelationLabel, Window, Window),
    UnlAttr(Window, String),
    Swap,
    /// Splice a dictionary node next to the window, on that window's outer side.
    Insert(String, Window),
    /// Resolve the node against the antecedent registers.
    Refer(Window),
    Nop,
}

impl Action {
    pub fn deletes_node(&self) -> bool {
        matches!(self, Action::Merge(_) | Action::Rel(..))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::AddAttr(w, a) => write!(f, "ADD_ATTR({},{})", w, a),
            Action::DelAttr(w, a) => write!(f, "DEL_ATTR({},{})", w, a),
            Action::Merge(w) => write!(f, "MERGE({})", w),
            Action::Rel(l, h, d) => write!(f, "REL({},{},{})", l, h, d),
            Action::UnlAttr(w, a) => write!(f, "UNL_ATTR({},{})", w, a),
            Action::Swap => f.write_str("SWAP"),
            Action::Insert(hw, w) => write!(f, "INSERT(\"{}\",{})", hw, w),
            Action::Refer(w) => write!(f, "REFER({})", w),
            Action::Nop => f.write_str("NOP"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Movement {
    Stay,
    ShiftR,
    ShiftL,
}

impl fmt::Display for Movement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Movement::Stay => "STAY",
            Movement::ShiftR => "SHIFT_R",
            Movement::ShiftL => "SHIFT_L",
        })
    }
}

/// Rule families, ordered from highest to lowest priority band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Morphological,
    SpecificConstruct,
    Modification,
    Composition,
    Shift,
}

impl RuleKind {
    pub fn band(self) -> RangeInclusive<i32> {
        match self {
            RuleKind::Morphological => 200..=i32::MAX,
            RuleKind::SpecificConstruct => 150..=199,
            RuleKind::Modification => 100..=149,
            RuleKind::Composition => 50..=99,
            RuleKind::Shift => 0..=49,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Morphological => "morphological",
            RuleKind::SpecificConstruct => "specific-construct",
            RuleKind::Modification => "modification",
            RuleKind::Composition => "composition",
            RuleKind::Shift => "shift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub priority: i32,
    pub name: Option<String>,
    pub law: Condition,
    pub raw: Condition,
    pub lcw: Option<Condition>,
    pub rcw: Option<Condition>,
    pub actions: Vec<Action>,
    pub movement: Movement,
    /// 1-based source line, 0 for rules built in code.
    pub line: usize,
}

impl Rule {
    /// The rule's name, or `line N` for anonymous rules.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => alloc::format!("line {}", self.line),
        }
    }

    /// Classifies the rule by its actions: merging is morphological;
    /// swapping, inserting or resolving anaphora marks a specific construct;
    /// emitting a relation is composition; attribute changes alone are
    /// modification; a rule that only moves is a shift.
    pub fn kind(&self) -> RuleKind {
        let any = |f: fn(&Action) -> bool| self.actions.iter().any(f);
        if any(|a| matches!(a, Action::Merge(_))) {
            RuleKind::Morphological
        } else if any(|a| matches!(a, Action::Swap | Action::Insert(..) | Action::Refer(_))) {
            RuleKind::SpecificConstruct
        } else if any(|a| matches!(a, Action::Rel(..))) {
            RuleKind::Composition
        } else if any(|a| matches!(a, Action::AddAttr(..) | Action::DelAttr(..) | Action::UnlAttr(..))) {
            RuleKind::Modification
        } else {
            RuleKind::Shift
        }
    }

    pub fn applies<N: NodeView + ?Sized>(&self, lcw: Option<&N>, law: &N, raw: &N, rcw: Option<&N>) -> bool {
        self.law.matches(law)
            && self.raw.matches(raw)
            && self.lcw.as_ref().is_none_or(|c| c.matches_opt(lcw))
            && self.rcw.as_ref().is_none_or(|c| c.matches_opt(rcw))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.priority)?;
        if let Some(n) = &self.name {
            write!(f, "\"{}\" ", n)?;
        }
        write!(f, "L{{{}}} R{{{}}}", self.law, self.raw)?;
        if let Some(c) = &self.lcw {
            write!(f, " LL{{{}}}", c)?;
        }
        if let Some(c) = &self.rcw {
            write!(f, " RR{{{}}}", c)?;
        }
        f.write_str(" =>")?;
        for a in &self.actions {
            write!(f, " {};", a)?;
        }
        write!(f, " {}", self.movement)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleErrorKind {
    Expected(&'static str),
    UnknownAction(String),
    BadAttribute(String),
    BadUnlAttribute(String),
    BadLabel(String),
    UnknownLabel(String),
    BadInteger(String),
    TrivialConditions,
    DeleteThenShiftLeft,
    SameWindow,
    UnterminatedString,
}

impl fmt::Display for RuleErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleErrorKind::Expected(what) => write!(f, "expected {}", what),
            RuleErrorKind::UnknownAction(a) => write!(f, "unknown action `{}`", a),
            RuleErrorKind::BadAttribute(a) => write!(f, "bad attribute `{}`", a),
            RuleErrorKind::BadUnlAttribute(a) => write!(f, "bad UNL attribute `{}`", a),
            RuleErrorKind::BadLabel(l) => write!(f, "bad relation label `{}`", l),
            RuleErrorKind::UnknownLabel(l) => write!(f, "relation label `{}` is not in the registry", l),
            RuleErrorKind::BadInteger(s) => write!(f, "bad priority `{}`", s),
            RuleErrorKind::TrivialConditions => f.write_str("both L{} and R{} are ANY"),
            RuleErrorKind::DeleteThenShiftLeft => {
                f.write_str("a rule that deletes a node cannot move SHIFT_L")
            }
            RuleErrorKind::SameWindow => f.write_str("relation head and dependent are the same window"),
            RuleErrorKind::UnterminatedString => f.write_str("unterminated string"),
        }
    }
}

/// A rule syntax error (1-based line and column, in code points).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{origin}:{line}:{column}: {kind}")]
pub struct RuleError {
    pub origin: String,
    pub line: usize,
    pub column: usize,
    pub kind: RuleErrorKind,
}

/// A rule that sits outside its kind's priority band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandViolation {
    pub rule: String,
    pub line: usize,
    pub kind: RuleKind,
    pub priority: i32,
}

impl fmt::Display for BandViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let band = self.kind.band();
        write!(
            f,
            "rule `{}` (line {}) is {} but has priority {}; expected ",
            self.rule,
            self.line,
            self.kind.name(),
            self.priority
        )?;
        if *band.end() == i32::MAX {
            write!(f, ">= {}", band.start())
        } else {
            write!(f, "{}..={}", band.start(), band.end())
        }
    }
}

/// An ordered, immutable collection of rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
    /// Indices sorted by descending priority, then file order.
    order: Vec<usize>,
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Self {
        let mut order: Vec<usize> = (0..rules.len()).collect();
        order.sort_by_key(|&i| (Reverse(rules[i].priority), i));
        RuleSet { rules, order }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Appends `other`'s rules after this set's.
    pub fn extend(&mut self, other: RuleSet) {
        let mut rules = core::mem::take(&mut self.rules);
        rules.extend(other.rules);
        *self = RuleSet::new(rules);
    }

    /// The highest-priority applicable rule; earlier rules win ties.
    pub fn select<N: NodeView + ?Sized>(
        &self,
        lcw: Option<&N>,
        law: &N,
        raw: &N,
        rcw: Option<&N>,
    ) -> Option<&Rule> {
        self.order
            .iter()
            .map(|&i| &self.rules[i])
            .find(|r| r.applies(lcw, law, raw, rcw))
    }

    /// Rules whose priority lies outside their kind's band.
    pub fn band_violations(&self) -> Vec<BandViolation> {
        self.rules
            .iter()
            .filter(|r| !r.kind().band().contains(&r.priority))
            .map(|r| BandViolation {
                rule: r.label(),
                line: r.line,
                kind: r.kind(),
                priority: r.priority,
            })
            .collect()
    }

    /// Relation labels used by `REL` actions that `registry` lacks.
    pub fn unknown_labels(&self, registry: &Registry) -> Vec<(usize, RelationLabel)> {
        let mut out = Vec::new();
        for r in &self.rules {
            for a in &r.actions {
                if let Action::Rel(l, _, _) = a {
                    if !registry.contains(l.as_str()) {
                        out.push((r.line, l.clone()));
                    }
                }
            }
        }
        out
    }

    /// Canonical rule text, one rule per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses rule text. With a strict `registry`, `REL` labels must be known.
pub fn parse_rules(source: &str, origin: &str, registry: &Registry) -> Result<RuleSet, RuleError> {
    let source = nfc(source);
    let mut rules = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut p = LineParser {
            src: line,
            pos: 0,
        };
        let rule = p.rule(n + 1, registry).map_err(|(pos, kind)| RuleError {
            origin: origin.to_string(),
            line: n + 1,
            column: line[..pos].chars().count() + 1,
            kind,
        })?;
        rules.push(rule);
    }
    Ok(RuleSet::new(rules))
}

type PResult<T> = Result<T, (usize, RuleErrorKind)>;

struct LineParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> LineParser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str, what: &'static str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err((self.pos, RuleErrorKind::Expected(what)))
        }
    }

    fn word(&mut self) -> &'a str {
        self.ws();
        let rest = self.rest();
        let n = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '#' || c == '@'))
            .unwrap_or(rest.len());
        self.pos += n;
        &rest[..n]
    }

    fn string(&mut self) -> PResult<String> {
        self.expect("\"", "`\"`")?;
        let rest = self.rest();
        let end = rest.find('"').ok_or((self.pos, RuleErrorKind::UnterminatedString))?;
        self.pos += end + 1;
        Ok(rest[..end].to_string())
    }

    fn window(&mut self) -> PResult<Window> {
        let at = self.pos;
        match self.word() {
            "L" => Ok(Window::L),
            "R" => Ok(Window::R),
            _ => Err((at, RuleErrorKind::Expected("window `L` or `R`"))),
        }
    }

    fn rule(&mut self, line: usize, registry: &Registry) -> PResult<Rule> {
        self.ws();
        let at = self.pos;
        let digits = {
            let rest = self.rest();
            let n = rest
                .char_indices()
                .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                .map_or(rest.len(), |(i, _)| i);
            self.pos += n;
            &rest[..n]
        };
        let priority: i32 = match digits.parse() {
            Ok(p) => p,
            Err(_) => {
                let rest = &self.src[at..];
                let bad = rest.split(|c: char| c == ':' || c.is_whitespace()).next().unwrap_or("");
                return Err((at, RuleErrorKind::BadInteger(bad.to_string())));
            }
        };
        self.expect(":", "`:` after the priority")?;
        self.ws();
        let name = if self.rest().starts_with('"') {
            Some(self.string()?)
        } else {
            None
        };
        let cond_at = self.pos;
        self.expect("L{", "`L{`")?;
        let law = self.conditions()?;
        self.expect("R{", "`R{`")?;
        let raw = self.conditions()?;
        let lcw = if self.eat("LL{") { Some(self.conditions()?) } else { None };
        let rcw = if self.eat("RR{") { Some(self.conditions()?) } else { None };
        if law.is_trivial() && raw.is_trivial() {
            return Err((cond_at, RuleErrorKind::TrivialConditions));
        }
        self.expect("=>", "`=>`")?;

        let mut actions = Vec::new();
        let movement = loop {
            self.ws();
            let at = self.pos;
            let name = self.word();
            match name {
                "STAY" | "SHIFT_R" | "SHIFT_L" if !actions.is_empty() => {
                    break match name {
                        "STAY" => Movement::Stay,
                        "SHIFT_R" => Movement::ShiftR,
                        _ => Movement::ShiftL,
                    };
                }
                _ => {}
            }
            actions.push(self.action(at, name, registry)?);
            self.expect(";", "`;` after an action")?;
        };
        self.ws();
        if !self.rest().is_empty() && !self.rest().starts_with('#') {
            return Err((self.pos, RuleErrorKind::Expected("end of rule")));
        }
        if movement == Movement::ShiftL && actions.iter().any(Action::deletes_node) {
            return Err((self.pos, RuleErrorKind::DeleteThenShiftLeft));
        }
        Ok(Rule {
            priority,
            name,
            law,
            raw,
            lcw,
            rcw,
            actions,
            movement,
            line,
        })
    }

    fn conditions(&mut self) -> PResult<Condition> {
        if self.eat("ANY") {
            self.expect("}", "`}`")?;
            return Ok(Condition::Any);
        }
        let mut conds = Vec::new();
        loop {
            let negated = self.eat("!");
            let at = self.pos;
            let word = self.word();
            let test = if word == "HW" && self.eat("=") {
                Test::Headword(self.string()?)
            } else if is_attr_token(word) {
                Test::Attr(word.to_string())
            } else {
                self.ws();
                return Err((at, RuleErrorKind::BadAttribute(word.to_string())));
            };
            conds.push(Cond { negated, test });
            if self.eat("}") {
                break;
            }
            self.expect(",", "`,` or `}`")?;
        }
        Ok(Condition::All(conds))
    }

    fn action(&mut self, at: usize, name: &str, registry: &Registry) -> PResult<Action> {
        let action = match name {
            "NOP" => return Ok(Action::Nop),
            "SWAP" => return Ok(Action::Swap),
            "ADD_ATTR" | "DEL_ATTR" => {
                self.expect("(", "`(`")?;
                let w = self.window()?;
                self.expect(",", "`,`")?;
                let attr_at = self.pos;
                let attr = self.word();
                if !is_attr_token(attr) {
                    return Err((attr_at, RuleErrorKind::BadAttribute(attr.to_string())));
                }
                if name == "ADD_ATTR" {
                    Action::AddAttr(w, attr.to_string())
                } else {
                    Action::DelAttr(w, attr.to_string())
                }
            }
            "MERGE" | "REFER" => {
                self.expect("(", "`(`")?;
                let w = self.window()?;
                if name == "MERGE" {
                    Action::Merge(w)
                } else {
                    Action::Refer(w)
                }
            }
            "UNL_ATTR" => {
                self.expect("(", "`(`")?;
                let w = self.window()?;
                self.expect(",", "`,`")?;
                let attr_at = self.pos;
                let attr = self.word();
                if !is_attribute_label(attr) {
                    return Err((attr_at, RuleErrorKind::BadUnlAttribute(attr.to_string())));
                }
                Action::UnlAttr(w, attr.to_string())
            }
            "REL" => {
                self.expect("(", "`(`")?;
                let label_at = self.pos;
                let text = self.word();
                let label = RelationLabel::new(text)
                    .ok_or((label_at, RuleErrorKind::BadLabel(text.to_string())))?;
                if registry.is_strict() && !registry.contains(label.as_str()) {
                    return Err((label_at, RuleErrorKind::UnknownLabel(text.to_string())));
                }
                self.expect(",", "`,`")?;
                let h = self.window()?;
                self.expect(",", "`,`")?;
                let d = self.window()?;
                if h == d {
                    return Err((label_at, RuleErrorKind::SameWindow));
                }
                Action::Rel(label, h, d)
            }
            "INSERT" => {
                self.expect("(", "`(`")?;
                let hw = self.string()?;
                self.expect(",", "`,`")?;
                let w = self.window()?;
                Action::Insert(hw, w)
            }
            "" => return Err((at, RuleErrorKind::Expected("an action"))),
            other => return Err((at, RuleErrorKind::UnknownAction(other.to_string()))),
        };
        self.expect(")", "`)`")?;
        Ok(action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    struct N {
        attrs: BTreeSet<String>,
        hw: String,
    }

    fn n(hw: &str, attrs: &[&str]) -> N {
        N {
            attrs: attrs.iter().map(|s| s.to_string()).collect(),
            hw: hw.to_string(),
        }
    }

    impl NodeView for N {
        fn has_attr(&self, attr: &str) -> bool {
            self.attrs.contains(attr)
        }
        fn headword(&self) -> &str {
            &self.hw
        }
    }

    fn parse(src: &str) -> RuleSet {
        parse_rules(src, "t.rules", &Registry::builtin()).unwrap()
    }

    fn parse_err(src: &str) -> RuleError {
        parse_rules(src, "t.rules", &Registry::builtin()).unwrap_err()
    }

    #[test]
    fn noun_case_rule() {
        let rs = parse(r#"210: "noun-case" L{N,PLACE} R{CASE} => ADD_ATTR(L,PLC); MERGE(L) ; STAY"#);
        assert_eq!(rs.len(), 1);
        let r = &rs.rules()[0];
        assert_eq!(r.priority, 210);
        assert_eq!(r.name.as_deref(), Some("noun-case"));
        assert_eq!(
            r.actions,
            vec![Action::AddAttr(Window::L, "PLC".into()), Action::Merge(Window::L)]
        );
        assert_eq!(r.movement, Movement::Stay);
        assert_eq!(r.kind(), RuleKind::Morphological);
    }

    #[test]
    fn manner_rule() {
        let rs = parse("90: L{ADV} R{PRED} => REL(man,R,L) ; STAY");
        let r = &rs.rules()[0];
        assert_eq!(r.name, None);
        assert_eq!(
            r.actions,
            vec![Action::Rel(RelationLabel::new("man").unwrap(), Window::R, Window::L)]
        );
        assert_eq!(r.kind(), RuleKind::Composition);
        assert_eq!(r.label(), "line 1");
    }

    #[test]
    fn empty_and_comments() {
        assert!(parse("").is_empty());
        assert!(parse("# nothing here\n\n").is_empty());
    }

    #[test]
    fn conditional_windows_and_headwords() {
        let rs = parse(r#"20: "back" L{PRED} R{STAIL} LL{!SHEAD} RR{ANY} => NOP; SHIFT_L"#);
        let r = &rs.rules()[0];
        assert!(r.lcw.is_some() && r.rcw == Some(Condition::Any));
        assert_eq!(r.kind(), RuleKind::Shift);
        let rs = parse(r#"160: L{HW="আজ"} R{ANY} => INSERT("আমি",L); STAY"#);
        let r = &rs.rules()[0];
        assert!(r.law.matches(&n("আজ", &[])));
        assert!(!r.law.matches(&n("কাল", &[])));
        assert_eq!(r.kind(), RuleKind::SpecificConstruct);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_err("# header\n90: L{ADV} R{PRED} => FOO(L); STAY");
        assert_eq!((e.line, e.kind.clone()), (2, RuleErrorKind::UnknownAction("FOO".into())));
        assert_eq!(e.column, 23);

        let e = parse_err("90: L{ADV} R{PRED} REL(man,R,L); STAY");
        assert_eq!(e.kind, RuleErrorKind::Expected("`=>`"));

        let e = parse_err("90: L{ANY} R{ANY} => NOP; SHIFT_R");
        assert_eq!(e.kind, RuleErrorKind::TrivialConditions);

        let e = parse_err("90: L{ADV} R{PRED} => REL(man,R,L); SHIFT_L");
        assert_eq!(e.kind, RuleErrorKind::DeleteThenShiftLeft);

        let e = parse_err("90: L{ADV} R{PRED} => REL(man,R,R); STAY");
        assert_eq!(e.kind, RuleErrorKind::SameWindow);

        let e = parse_err("x: L{ADV} R{PRED} => NOP; STAY");
        assert_eq!(e.kind, RuleErrorKind::BadInteger("x".into()));

        let e = parse_err("9: L{adv} R{PRED} => NOP; STAY");
        assert_eq!(e.kind, RuleErrorKind::BadAttribute("adv".into()));

        let e = parse_err("9: L{ADV} R{PRED} => UNL_ATTR(L,entry); STAY");
        assert_eq!(e.kind, RuleErrorKind::BadUnlAttribute("entry".into()));

        let e = parse_err("9: L{ADV} R{PRED} => NOP; STAY extra");
        assert_eq!(e.kind, RuleErrorKind::Expected("end of rule"));
    }

    #[test]
    fn strict_registry_rejects_unknown_labels() {
        let src = "90: L{ADV} R{PRED} => REL(qua,R,L); STAY";
        assert!(parse_rules(src, "t", &Registry::builtin()).is_ok());
        let e = parse_rules(src, "t", &Registry::builtin().strict(true)).unwrap_err();
        assert_eq!(e.kind, RuleErrorKind::UnknownLabel("qua".into()));
        let rs = parse(src);
        assert_eq!(rs.unknown_labels(&Registry::builtin()).len(), 1);
    }

    #[test]
    fn selection_prefers_priority_then_file_order() {
        let rs = parse(
            "60: \"compose\" L{N} R{V} => REL(agt,R,L); STAY\n\
             210: \"morph\" L{N} R{V} => MERGE(L); STAY\n\
             5: \"shift-a\" L{SHEAD} R{ANY} => NOP; SHIFT_R\n\
             5: \"shift-b\" L{SHEAD} R{ANY} => NOP; SHIFT_R\n",
        );
        let law = n("x", &["N"]);
        let raw = n("y", &["V"]);
        assert_eq!(rs.select(None, &law, &raw, None).unwrap().label(), "morph");
        let head = n("", &["SHEAD"]);
        let noun = n("z", &["N"]);
        assert_eq!(rs.select(None, &head, &noun, None).unwrap().label(), "shift-a");
        assert!(rs.select(None, &raw, &raw, None).is_none());
    }

    #[test]
    fn missing_conditional_window_only_matches_any() {
        let rs = parse("5: L{SHEAD} R{ANY} LL{!N} => NOP; SHIFT_R");
        let head = n("", &["SHEAD"]);
        assert!(rs.select(None, &head, &head, None).is_none());
        assert!(rs.select(Some(&head), &head, &head, None).is_some());
    }

    #[test]
    fn band_check() {
        let rs = parse(
            "210: L{N} R{CASE} => MERGE(L); STAY\n\
             210: \"bad-compose\" L{N} R{V} => REL(agt,R,L); STAY\n\
             10: L{SHEAD} R{ANY} => NOP; SHIFT_R\n",
        );
        let v = rs.band_violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "bad-compose");
        assert_eq!(v[0].kind, RuleKind::Composition);
    }

    #[test]
    fn render_is_canonical() {
        let text = "210: \"noun-case\" L{N,PLACE} R{CASE} => ADD_ATTR(L,PLC); MERGE(L); STAY\n\
                    90: L{ADV,!TIME} R{PRED} LL{!SHEAD} RR{ANY} => REL(man,R,L); STAY\n\
                    160: L{PRED,1P} R{STAIL} => INSERT(\"আমি\",L); UNL_ATTR(L,@entry); STAY\n\
                    150: L{HW=\"তার\"} R{N} => REFER(L); SWAP; DEL_ATTR(R,X); STAY\n\
                    5: L{SHEAD} R{ANY} => NOP; SHIFT_R\n";
        let rs = parse(text);
        assert_eq!(rs.render(), text);
        assert_eq!(parse(&rs.render()), rs);
    }
}
