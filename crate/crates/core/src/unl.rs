//! Universal Words, UNL relations and expressions.
//!
//! The text format is one relation per line between delimiter lines:
//!
//! ```text
//! [S]
//! man(hot(icl>state).@entry.@present, very(intensifier))
//! [/S]
//! ```
//!
//! A relation that belongs to a scope carries the scope id after its label
//! (`obj:01(...)`), and a scope is referenced as an endpoint by its bare id
//! (`pur(go(...).@entry, :01)`).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// One qualifier inside a Universal Word, e.g. `icl>move>do`.
///
/// `tag` is the leading relation tag (`icl`, `iof`, `equ`, `agt`, ...). A
/// restriction without a tag, like the `intensifier` in `very(intensifier)`,
/// has `tag == None`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Restriction {
    pub tag: Option<String>,
    pub target: String,
}

impl Restriction {
    pub fn new(tag: &str, target: &str) -> Self {
        Restriction {
            tag: Some(tag.to_string()),
            target: target.to_string(),
        }
    }

    pub fn untagged(target: &str) -> Self {
        Restriction {
            tag: None,
            target: target.to_string(),
        }
    }

    fn parse(raw: &str) -> Option<Self> {
        let text = collapse_ws(raw);
        if text.is_empty() {
            return None;
        }
        if let Some((tag, target)) = text.split_once('>') {
            let tag = tag.trim();
            if is_tag(tag) && !target.trim().is_empty() {
                return Some(Restriction {
                    tag: Some(tag.to_string()),
                    target: target.trim().to_string(),
                });
            }
        }
        Some(Restriction {
            tag: None,
            target: text,
        })
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            Some(tag) => write!(f, "{}>{}", tag, self.target),
            None => f.write_str(&self.target),
        }
    }
}

fn is_tag(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_lowercase() || c == '_')
}

fn collapse_ws(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// A language-independent concept: a head word plus restrictions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniversalWord {
    pub head: String,
    pub restrictions: Vec<Restriction>,
}

impl UniversalWord {
    pub fn new(head: &str) -> Self {
        UniversalWord {
            head: head.to_string(),
            restrictions: Vec::new(),
        }
    }

    pub fn with(mut self, restriction: Restriction) -> Self {
        self.restrictions.push(restriction);
        self
    }

    /// The designated empty word, used by pure-inflection dictionary entries.
    pub fn empty() -> Self {
        UniversalWord::default()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.restrictions.is_empty()
    }

    /// Parses the textual form `head(tag>target,...)`. The empty string
    /// parses to the empty word.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(UniversalWord::empty());
        }
        let mut cur = Cursor::new(text);
        let uw = cur.universal_word()?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.error(ParseErrorKind::Trailing));
        }
        Ok(uw)
    }
}

impl fmt::Display for UniversalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.head)?;
        if !self.restrictions.is_empty() {
            f.write_str("(")?;
            for (i, r) in self.restrictions.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", r)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Checks the `@[a-z_0-9]+` shape of a UNL attribute label.
pub fn is_attribute_label(label: &str) -> bool {
    label
        .strip_prefix('@')
        .is_some_and(|rest| !rest.is_empty() && rest.chars().all(is_attr_char))
}

fn is_attr_char(c: char) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'
}

/// A Universal Word occurrence with attribute labels and an optional id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UwInstance {
    pub uw: UniversalWord,
    attributes: Vec<String>,
    pub instance_id: Option<u16>,
}

impl UwInstance {
    pub fn new(uw: UniversalWord) -> Self {
        UwInstance {
            uw,
            attributes: Vec::new(),
            instance_id: None,
        }
    }

    pub fn with_attr(mut self, label: &str) -> Self {
        self.push_attr(label);
        self
    }

    pub fn with_id(mut self, id: u16) -> Self {
        self.instance_id = Some(id);
        self
    }

    /// Appends `label` unless present. Returns false for duplicates.
    ///
    /// Panics in debug builds if `label` is not a valid attribute label.
    pub fn push_attr(&mut self, label: &str) -> bool {
        debug_assert!(is_attribute_label(label), "bad attribute label {label}");
        if self.has_attr(label) {
            return false;
        }
        self.attributes.push(label.to_string());
        true
    }

    pub fn has_attr(&self, label: &str) -> bool {
        self.attributes.iter().any(|a| a == label)
    }

    /// Attribute labels in insertion order.
    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn is_entry(&self) -> bool {
        self.has_attr("@entry")
    }
}

impl fmt::Display for UwInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.uw)?;
        for a in &self.attributes {
            write!(f, ".{}", a)?;
        }
        if let Some(id) = self.instance_id {
            write!(f, ":{:02}", id)?;
        }
        Ok(())
    }
}

/// Scope id, rendered as a two-digit zero-padded `:NN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScopeId(pub u16);

impl fmt::Display for ScopeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, ":{:02}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Instance(UwInstance),
    Scope(ScopeId),
}

impl Endpoint {
    pub fn instance(&self) -> Option<&UwInstance> {
        match self {
            Endpoint::Instance(i) => Some(i),
            Endpoint::Scope(_) => None,
        }
    }
}

impl From<UwInstance> for Endpoint {
    fn from(i: UwInstance) -> Self {
        Endpoint::Instance(i)
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Instance(i) => write!(f, "{}", i),
            Endpoint::Scope(s) => write!(f, "{}", s),
        }
    }
}

/// A relation label: two or three lowercase ASCII letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationLabel(String);

impl RelationLabel {
    pub fn new(label: &str) -> Option<Self> {
        let ok = (2..=3).contains(&label.len()) && label.chars().all(|c| c.is_ascii_lowercase());
        ok.then(|| RelationLabel(label.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A binary relation, optionally belonging to a scope.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub label: RelationLabel,
    pub scope: Option<ScopeId>,
    pub head: Endpoint,
    pub dependent: Endpoint,
}

impl Relation {
    pub fn new(label: RelationLabel, head: impl Into<Endpoint>, dependent: impl Into<Endpoint>) -> Self {
        Relation {
            label,
            scope: None,
            head: head.into(),
            dependent: dependent.into(),
        }
    }

    pub fn in_scope(mut self, scope: ScopeId) -> Self {
        self.scope = Some(scope);
        self
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label.as_str())?;
        if let Some(s) = self.scope {
            write!(f, "{}", s)?;
        }
        write!(f, "({}, {})", self.head, self.dependent)
    }
}

/// Structural violations of a [`UnlExpression`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpressionError {
    #[error("relation {0} has identical head and dependent")]
    SelfLoop(String),
    #[error("scope {0} is referenced but has no relations")]
    UnresolvedScope(ScopeId),
    #[error("more than one @entry instance in {}", scope_name(*.0))]
    MultipleEntries(Option<ScopeId>),
    #[error("relation label `{0}` is not in the registry")]
    UnknownLabel(String),
}

fn scope_name(scope: Option<ScopeId>) -> String {
    match scope {
        Some(s) => format!("scope {}", s),
        None => "the sentence scope".to_string(),
    }
}

/// An ordered list of relations. Scoped relations carry their scope id; the
/// relations of a scope, in order, form that scope's fragment.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UnlExpression {
    relations: Vec<Relation>,
}

impl UnlExpression {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a relation, rejecting self-loops.
    pub fn push(&mut self, relation: Relation) -> Result<(), ExpressionError> {
        if relation.head == relation.dependent {
            return Err(ExpressionError::SelfLoop(relation.to_string()));
        }
        self.relations.push(relation);
        Ok(())
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Distinct scope ids that own at least one relation, ascending.
    pub fn scope_ids(&self) -> Vec<ScopeId> {
        let set: BTreeSet<ScopeId> = self.relations.iter().filter_map(|r| r.scope).collect();
        set.into_iter().collect()
    }

    /// The relations belonging to `scope`, in order.
    pub fn scope(&self, scope: ScopeId) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(move |r| r.scope == Some(scope))
    }

    /// Relations outside any scope.
    pub fn top_level(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.scope.is_none())
    }

    /// Checks scope references and the one-`@entry`-per-scope rule.
    pub fn validate(&self) -> Result<(), ExpressionError> {
        let owned: BTreeSet<ScopeId> = self.relations.iter().filter_map(|r| r.scope).collect();
        let mut entries: BTreeMap<Option<ScopeId>, UwInstance> = BTreeMap::new();
        for r in &self.relations {
            if r.head == r.dependent {
                return Err(ExpressionError::SelfLoop(r.to_string()));
            }
            for ep in [&r.head, &r.dependent] {
                match ep {
                    Endpoint::Scope(s) if !owned.contains(s) => {
                        return Err(ExpressionError::UnresolvedScope(*s));
                    }
                    Endpoint::Instance(i) if i.is_entry() => match entries.get(&r.scope) {
                        Some(seen) if seen != i => {
                            return Err(ExpressionError::MultipleEntries(r.scope));
                        }
                        Some(_) => {}
                        None => {
                            entries.insert(r.scope, i.clone());
                        }
                    },
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Every instance occurring as an endpoint, in order of first occurrence.
    pub fn instances(&self) -> Vec<&UwInstance> {
        let mut out: Vec<&UwInstance> = Vec::new();
        for r in &self.relations {
            for ep in [&r.head, &r.dependent] {
                if let Endpoint::Instance(i) = ep {
                    if !out.contains(&i) {
                        out.push(i);
                    }
                }
            }
        }
        out
    }
}

/// Delimiter style of the serialized document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// `[S]` ... `[/S]`
    #[default]
    SBrackets,
    /// `{unl}` ... `{/unl}`
    UnlBraces,
}

impl Style {
    fn delimiters(self) -> (&'static str, &'static str) {
        match self {
            Style::SBrackets => ("[S]", "[/S]"),
            Style::UnlBraces => ("{unl}", "{/unl}"),
        }
    }
}

/// Renders `expr` in canonical form, one relation per line.
pub fn serialize(expr: &UnlExpression, style: Style) -> String {
    let (open, close) = style.delimiters();
    let mut out = String::new();
    out.push_str(open);
    out.push('\n');
    for r in &expr.relations {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out.push_str(close);
    out.push('\n');
    out
}

/// [`serialize`], refusing labels missing from a strict registry.
pub fn serialize_checked(
    expr: &UnlExpression,
    style: Style,
    registry: &Registry,
) -> Result<String, ExpressionError> {
    registry.check(expr)?;
    Ok(serialize(expr, style))
}

/// The set of known relation labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    labels: BTreeSet<String>,
    strict: bool,
}

impl Registry {
    /// Labels used by the built-in analyses.
    pub const BUILTIN: [&'static str; 12] = [
        "agt", "obj", "plc", "plt", "plf", "pur", "met", "man", "tim", "pos", "ben", "mod",
    ];

    pub fn builtin() -> Self {
        Registry {
            labels: Self::BUILTIN.iter().map(|s| s.to_string()).collect(),
            strict: false,
        }
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn insert(&mut self, label: RelationLabel) {
        self.labels.insert(label.0);
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.contains(label)
    }

    /// In strict mode, fails on the first relation whose label is unknown.
    pub fn check(&self, expr: &UnlExpression) -> Result<(), ExpressionError> {
        if !self.strict {
            return Ok(());
        }
        match expr.relations.iter().find(|r| !self.contains(r.label.as_str())) {
            Some(r) => Err(ExpressionError::UnknownLabel(r.label.0.clone())),
            None => Ok(()),
        }
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingOpen,
    MissingClose,
    Unbalanced,
    Expected(&'static str),
    MalformedAttribute,
    DuplicateAttribute(String),
    BadLabel(String),
    BadNumber,
    Structure(ExpressionError),
    Trailing,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingOpen => f.write_str("missing opening `[S]` or `{unl}` line"),
            ParseErrorKind::MissingClose => f.write_str("missing closing delimiter"),
            ParseErrorKind::Unbalanced => f.write_str("unbalanced parentheses"),
            ParseErrorKind::Expected(what) => write!(f, "expected {}", what),
            ParseErrorKind::MalformedAttribute => f.write_str("malformed attribute label"),
            ParseErrorKind::DuplicateAttribute(a) => write!(f, "duplicate attribute {}", a),
            ParseErrorKind::BadLabel(l) => write!(f, "bad relation label `{}`", l),
            ParseErrorKind::BadNumber => f.write_str("bad id number"),
            ParseErrorKind::Structure(e) => write!(f, "{}", e),
            ParseErrorKind::Trailing => f.write_str("unexpected trailing text"),
        }
    }
}

/// A positioned UNL syntax error (1-based line and column, in code points).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Parses either delimiter style. Whitespace between tokens is free.
pub fn parse_expression(text: &str) -> Result<UnlExpression, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let close = if cur.eat("[S]") {
        "[/S]"
    } else if cur.eat("{unl}") {
        "{/unl}"
    } else {
        return Err(cur.error(ParseErrorKind::MissingOpen));
    };
    let mut expr = UnlExpression::new();
    loop {
        cur.skip_ws();
        if cur.eat(close) {
            break;
        }
        if cur.at_end() {
            return Err(cur.error(ParseErrorKind::MissingClose));
        }
        let start = cur.pos;
        let rel = cur.relation()?;
        if rel.head == rel.dependent {
            return Err(cur.error_at(
                start,
                ParseErrorKind::Structure(ExpressionError::SelfLoop(rel.to_string())),
            ));
        }
        expr.relations.push(rel);
    }
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error(ParseErrorKind::Trailing));
    }
    if let Err(e) = expr.validate() {
        return Err(cur.error(ParseErrorKind::Structure(e)));
    }
    Ok(expr)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.pos, kind)
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = before[line_start..].chars().count() + 1;
        ParseError { line, column, kind }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Expected(what)))
        }
    }

    fn number(&mut self) -> Result<u16, ParseError> {
        let digits = self.take_while(|c| c.is_ascii_digit());
        digits.parse().map_err(|_| self.error(ParseErrorKind::BadNumber))
    }

    fn relation(&mut self) -> Result<Relation, ParseError> {
        let start = self.pos;
        let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if word.is_empty() {
            return Err(self.error(ParseErrorKind::Expected("relation label")));
        }
        let label = RelationLabel::new(word)
            .ok_or_else(|| self.error_at(start, ParseErrorKind::BadLabel(word.to_string())))?;
        let scope = if self.eat(":") {
            Some(ScopeId(self.number()?))
        } else {
            None
        };
        self.expect('(', "`(` after relation label")?;
        let head = self.endpoint()?;
        self.expect(',', "`,` between relation arguments")?;
        let dependent = self.endpoint()?;
        self.skip_ws();
        match self.peek() {
            Some(')') => {
                self.bump();
            }
            Some(',') | Some('(') | None => return Err(self.error(ParseErrorKind::Unbalanced)),
            _ => return Err(self.error(ParseErrorKind::Expected("`)` closing the relation"))),
        }
        Ok(Relation {
            label,
            scope,
            head,
            dependent,
        })
    }

    fn endpoint(&mut self) -> Result<Endpoint, ParseError> {
        self.skip_ws();
        if self.peek() == Some(':') {
            self.bump();
            return Ok(Endpoint::Scope(ScopeId(self.number()?)));
        }
        let uw = self.universal_word()?;
        let mut inst = UwInstance::new(uw);
        loop {
            self.skip_ws();
            if self.peek() != Some('.') {
                break;
            }
            self.bump();
            self.skip_ws();
            let start = self.pos;
            if !self.eat("@") {
                return Err(self.error(ParseErrorKind::MalformedAttribute));
            }
            let name = self.take_while(is_attr_char);
            if name.is_empty() {
                return Err(self.error(ParseErrorKind::MalformedAttribute));
            }
            let label = &self.src[start..self.pos];
            if !inst.push_attr(label) {
                return Err(self.error_at(start, ParseErrorKind::DuplicateAttribute(label.to_string())));
            }
        }
        self.skip_ws();
        if self.peek() == Some(':') {
            self.bump();
            inst.instance_id = Some(self.number()?);
        }
        Ok(Endpoint::Instance(inst))
    }

    fn universal_word(&mut self) -> Result<UniversalWord, ParseError> {
        let head = self.take_while(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '.' | ':'));
        if head.is_empty() {
            return Err(self.error(ParseErrorKind::Expected("universal word")));
        }
        let mut uw = UniversalWord::new(head);
        self.skip_ws();
        if self.peek() == Some('(') {
            self.bump();
            let open = self.pos;
            let body = self.take_while(|c| c != ')' && c != '(');
            match self.peek() {
                Some(')') => {
                    self.bump();
                }
                _ => return Err(self.error(ParseErrorKind::Unbalanced)),
            }
            for item in body.split(',') {
                let r = Restriction::parse(item)
                    .ok_or_else(|| self.error_at(open, ParseErrorKind::Expected("restriction")))?;
                uw.restrictions.push(r);
            }
        }
        Ok(uw)
    }
}

/// One comparable relation: label, head text, head attributes, dependent
/// text, dependent attributes. Ids and restrictions are dropped.
pub type NormalRelation = (String, String, BTreeSet<String>, String, BTreeSet<String>);

/// Order-, id- and restriction-insensitive form of an expression.
pub fn normalize(expr: &UnlExpression) -> Vec<NormalRelation> {
    fn side(ep: &Endpoint) -> (String, BTreeSet<String>) {
        match ep {
            Endpoint::Instance(i) => (i.uw.head.clone(), i.attributes.iter().cloned().collect()),
            Endpoint::Scope(s) => (s.to_string(), BTreeSet::new()),
        }
    }
    let mut out: Vec<NormalRelation> = expr
        .relations
        .iter()
        .map(|r| {
            let (h, ha) = side(&r.head);
            let (d, da) = side(&r.dependent);
            (r.label.0.clone(), h, ha, d, da)
        })
        .collect();
    out.sort();
    out
}

/// Renders the expression as a Graphviz digraph: one node per instance, one
/// cluster per scope, one labelled edge per relation. An edge into a scope
/// points at the scope's `@entry` instance (or its first instance) and is
/// clipped at the cluster border.
pub fn to_dot(expr: &UnlExpression) -> String {
    let instances = expr.instances();
    let index_of = |i: &UwInstance| instances.iter().position(|x| *x == i).unwrap();

    // An instance sits in a cluster when every relation touching it is in
    // that one scope.
    let mut home: Vec<Option<Option<ScopeId>>> = alloc::vec![None; instances.len()];
    for r in &expr.relations {
        for ep in [&r.head, &r.dependent] {
            if let Endpoint::Instance(i) = ep {
                let slot = &mut home[index_of(i)];
                *slot = match *slot {
                    None => Some(r.scope),
                    Some(s) if s == r.scope => Some(s),
                    Some(_) => Some(None),
                };
            }
        }
    }

    let scope_anchor = |s: ScopeId| -> Option<usize> {
        let mut first = None;
        for r in expr.scope(s) {
            for ep in [&r.head, &r.dependent] {
                if let Endpoint::Instance(i) = ep {
                    if i.is_entry() {
                        return Some(index_of(i));
                    }
                    first.get_or_insert(index_of(i));
                }
            }
        }
        first
    };

    let mut out = String::from("digraph unl {\n");
    let scopes = expr.scope_ids();
    if !scopes.is_empty() {
        out.push_str("  compound=true;\n");
    }
    let node_line = |n: usize, i: &UwInstance, indent: &str| -> String {
        let mut label = i.uw.head.clone();
        for a in i.attributes() {
            label.push('.');
            label.push_str(a);
        }
        format!("{indent}n{n} [label=\"{}\"];\n", escape(&label))
    };
    for (n, i) in instances.iter().enumerate() {
        if home[n] == Some(None) {
            out.push_str(&node_line(n, i, "  "));
        }
    }
    for s in &scopes {
        out.push_str(&format!("  subgraph cluster_{:02} {{\n    label=\"{}\";\n", s.0, s));
        for (n, i) in instances.iter().enumerate() {
            if home[n] == Some(Some(*s)) {
                out.push_str(&node_line(n, i, "    "));
            }
        }
        out.push_str("  }\n");
    }
    for r in &expr.relations {
        let end = |ep: &Endpoint| -> Option<(usize, Option<ScopeId>)> {
            match ep {
                Endpoint::Instance(i) => Some((index_of(i), None)),
                Endpoint::Scope(s) => scope_anchor(*s).map(|n| (n, Some(*s))),
            }
        };
        let (Some((h, hs)), Some((d, ds))) = (end(&r.head), end(&r.dependent)) else {
            continue;
        };
        let mut attrs = format!("label=\"{}\"", r.label);
        if let Some(s) = hs {
            attrs.push_str(&format!(", ltail=cluster_{:02}", s.0));
        }
        if let Some(s) = ds {
            attrs.push_str(&format!(", lhead=cluster_{:02}", s.0));
        }
        out.push_str(&format!("  n{h} -> n{d} [{attrs}];\n"));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
