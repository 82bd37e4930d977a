//! The two-window node-list machine.
//!
//! A sentence becomes a list of nodes bracketed by the `SHEAD` and `STAIL`
//! markers. Two adjacent analysis windows (LAW, RAW) sit on the list; on each
//! step the highest-priority rule matching the windows and their outer
//! neighbours fires, its actions edit the list and the window moves. Relation
//! rules delete the dependent node and keep the head, so the main predicate
//! is the node left standing when no rule applies any more. That node
//! receives `@entry`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::lexicon::{AttrSet, LexEntry, Lexicon};
use crate::morphology::{merge_attributes, segment, word_end};
use crate::ruleset::{Action, Movement, NodeView, Rule, RuleKind, RuleSet, Window};
use crate::text::{char_offset, is_sentence_punct, nfc};
use crate::unl::{Relation, RelationLabel, UnlExpression, UniversalWord, UwInstance};

pub type NodeId = u32;

pub const SHEAD: &str = "SHEAD";
pub const STAIL: &str = "STAIL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Head,
    Tail,
    Word,
}

/// One cell of the node list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    /// Surface morphemes, in sentence order.
    pub pieces: Vec<String>,
    /// Head word of the dictionary entry the node was built from.
    pub headword: String,
    pub uw: UniversalWord,
    pub attributes: AttrSet,
    /// UNL attributes to attach when the node is emitted.
    pub pending: Vec<String>,
    pub id: NodeId,
}

impl Node {
    fn marker(kind: NodeKind, id: NodeId) -> Self {
        let name = if kind == NodeKind::Head { SHEAD } else { STAIL };
        Node {
            kind,
            pieces: Vec::new(),
            headword: String::new(),
            uw: UniversalWord::empty(),
            attributes: core::iter::once(name.to_string()).collect(),
            pending: Vec::new(),
            id,
        }
    }

    fn from_entry(entry: &LexEntry, id: NodeId) -> Self {
        Node {
            kind: NodeKind::Word,
            pieces: alloc::vec![entry.headword.clone()],
            headword: entry.headword.clone(),
            uw: entry.uw.clone(),
            attributes: entry.attributes.clone(),
            pending: Vec::new(),
            id,
        }
    }

    pub fn is_marker(&self) -> bool {
        self.kind != NodeKind::Word
    }

    /// Surface text, morphemes separated by a space.
    pub fn surface(&self) -> String {
        match self.kind {
            NodeKind::Head => SHEAD.to_string(),
            NodeKind::Tail => STAIL.to_string(),
            NodeKind::Word => self.pieces.join(" "),
        }
    }

    fn push_pending(&mut self, label: &str) {
        if !self.pending.iter().any(|p| p == label) {
            self.pending.push(label.to_string());
        }
    }

    /// Register key: gender (`MALE`/`FEMALE`, if any) and number.
    fn agreement(&self) -> (Option<&'static str>, &'static str) {
        let gender = ["MALE", "FEMALE"].into_iter().find(|g| self.attributes.contains(*g));
        let number = if self.attributes.contains("PL") { "PL" } else { "SG" };
        (gender, number)
    }
}

impl NodeView for Node {
    fn has_attr(&self, attr: &str) -> bool {
        self.attributes.contains(attr)
    }

    fn headword(&self) -> &str {
        &self.headword
    }
}

/// Whether emitted instances carry `:NN` ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdPolicy {
    /// Ids on non-entry instances that occur in two or more relations, and on
    /// anaphora-linked instances.
    #[default]
    Minimal,
    /// Ids on every instance.
    Always,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Step budget as a multiple of the initial node count.
    pub budget_factor: usize,
    /// Absolute step budget; overrides `budget_factor`.
    pub budget: Option<usize>,
    pub ids: IdPolicy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            budget_factor: 50,
            budget: None,
            ids: IdPolicy::Minimal,
        }
    }
}

/// Snapshot of one node in a [`TraceRecord`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub surface: String,
    pub attributes: Vec<String>,
    pub unl: Vec<String>,
}

/// The state after one rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    pub rule: String,
    pub kind: RuleKind,
    pub movement: Movement,
    /// Index of the LAW node in `nodes`.
    pub window: usize,
    pub nodes: Vec<NodeRecord>,
    /// The node list in `/<</ ... />>/` notation.
    pub rendered: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("empty sentence")]
    EmptySentence,
    #[error("unknown word `{word}` at offset {offset}")]
    UnknownWord { word: String, offset: usize },
    #[error("no rule applies at {state}")]
    DeadEnd { state: String, trace: Vec<TraceRecord> },
    #[error("step budget of {budget} exceeded")]
    BudgetExceeded { budget: usize, trace: Vec<TraceRecord> },
    #[error("rule `{rule}` revisits an earlier state at step {step}")]
    Cycle { rule: String, step: usize, trace: Vec<TraceRecord> },
    #[error("rule `{rule}`: {problem}")]
    InvalidAction {
        rule: String,
        problem: ActionProblem,
        trace: Vec<TraceRecord>,
    },
}

impl EngineError {
    /// The trace up to the failure, when the failure happened mid-analysis.
    pub fn trace(&self) -> Option<&[TraceRecord]> {
        match self {
            EngineError::DeadEnd { trace, .. }
            | EngineError::BudgetExceeded { trace, .. }
            | EngineError::Cycle { trace, .. }
            | EngineError::InvalidAction { trace, .. } => Some(trace),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionProblem {
    Marker,
    SelfRelation,
    InsertUnknown(String),
    InsertAmbiguous(String),
    NoAntecedent,
    MoveOutOfRange,
}

impl fmt::Display for ActionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionProblem::Marker => f.write_str("cannot modify a sentence marker"),
            ActionProblem::SelfRelation => f.write_str("relation between two nodes of one instance"),
            ActionProblem::InsertUnknown(hw) => write!(f, "cannot insert unknown word `{}`", hw),
            ActionProblem::InsertAmbiguous(hw) => write!(f, "cannot insert ambiguous word `{}`", hw),
            ActionProblem::NoAntecedent => f.write_str("no antecedent to refer to"),
            ActionProblem::MoveOutOfRange => f.write_str("window moved past the node list"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Emitted {
    label: RelationLabel,
    head: NodeId,
    dependent: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Antecedent {
    id: NodeId,
    uw: UniversalWord,
}

type Fingerprint = (usize, Vec<(NodeId, String, Vec<String>, Vec<String>, String)>);

/// The node list, window and everything emitted so far.
#[derive(Debug, Clone)]
pub struct MachineState {
    nodes: Vec<Node>,
    window: usize,
    emitted: Vec<Emitted>,
    /// Last known Universal Word and UNL attributes per instance.
    snapshots: BTreeMap<NodeId, (UniversalWord, Vec<String>)>,
    antecedents: BTreeMap<(Option<&'static str>, &'static str), Antecedent>,
    referents: BTreeSet<NodeId>,
    next_id: NodeId,
    steps: usize,
    budget: usize,
    trace: Vec<TraceRecord>,
    seen: BTreeSet<Fingerprint>,
}

impl MachineState {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn law(&self) -> &Node {
        &self.nodes[self.window]
    }

    pub fn raw(&self) -> &Node {
        &self.nodes[self.window + 1]
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    /// Relations emitted so far as (label, head id, dependent id).
    pub fn emitted(&self) -> Vec<(&str, NodeId, NodeId)> {
        self.emitted
            .iter()
            .map(|e| (e.label.as_str(), e.head, e.dependent))
            .collect()
    }

    /// Instance ids shared through anaphora resolution.
    pub fn referents(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.referents.iter().copied()
    }

    /// Content nodes between the markers.
    pub fn content(&self) -> &[Node] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    /// True when one content node is left and the RAW is on `STAIL`.
    pub fn is_final(&self) -> bool {
        self.nodes.len() == 3 && self.window == 1
    }

    /// The current node list in trace notation.
    pub fn render(&self) -> String {
        render_nodes(&self.nodes, self.window)
    }

    fn neighbours(&self) -> (Option<&Node>, &Node, &Node, Option<&Node>) {
        let i = self.window;
        (
            i.checked_sub(1).map(|j| &self.nodes[j]),
            &self.nodes[i],
            &self.nodes[i + 1],
            self.nodes.get(i + 2),
        )
    }

    fn fingerprint(&self) -> Fingerprint {
        (
            self.window,
            self.nodes
                .iter()
                .map(|n| {
                    (
                        n.id,
                        n.headword.clone(),
                        n.attributes.iter().cloned().collect(),
                        n.pending.clone(),
                        n.uw.head.clone(),
                    )
                })
                .collect(),
        )
    }

    fn slot(&self, w: Window) -> usize {
        match w {
            Window::L => self.window,
            Window::R => self.window + 1,
        }
    }

    fn snapshot(&mut self, idx: usize) {
        let n = &self.nodes[idx];
        self.snapshots.insert(n.id, (n.uw.clone(), n.pending.clone()));
    }

    fn record(&mut self, rule: &Rule) {
        let rec = TraceRecord {
            step: self.steps,
            rule: rule.label(),
            kind: rule.kind(),
            movement: rule.movement,
            window: self.window,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRecord {
                    surface: n.surface(),
                    attributes: n.attributes.iter().cloned().collect(),
                    unl: n.pending.clone(),
                })
                .collect(),
            rendered: self.render(),
        };
        self.trace.push(rec);
    }

    fn update_antecedents(&mut self) {
        let law = &self.nodes[self.window];
        if law.has_attr("N") && law.has_attr("ANI") {
            let key = law.agreement();
            let a = Antecedent {
                id: law.id,
                uw: law.uw.clone(),
            };
            self.antecedents.insert(key, a);
        }
    }
}

/// The highest-priority rule applicable to the state's windows.
pub fn select_rule<'r>(rules: &'r RuleSet, state: &MachineState) -> Option<&'r Rule> {
    let (lcw, law, raw, rcw) = state.neighbours();
    rules.select(lcw, law, raw, rcw)
}

/// Renders a node list: nodes left of the windows plain, the window nodes in
/// brackets, the unexplored rest as one quoted string. Markers are implied by
/// the `/<<` and `>>/` ends.
pub fn render_nodes(nodes: &[Node], window: usize) -> String {
    let mut items: Vec<String> = Vec::new();
    let last = nodes.len().saturating_sub(1);
    for n in nodes.iter().take(window).skip(1) {
        items.push(n.surface());
    }
    for n in &nodes[window..=window + 1] {
        if !n.is_marker() {
            items.push(alloc::format!("[{}]", n.surface()));
        }
    }
    let rest: Vec<String> = nodes[window + 2..last.max(window + 2)]
        .iter()
        .filter(|n| !n.is_marker())
        .map(Node::surface)
        .collect();
    if !rest.is_empty() {
        items.push(alloc::format!("\"{}\"", rest.join(" ")));
    }
    if items.is_empty() {
        return String::from("/<</ />>/");
    }
    alloc::format!("/<</ {} />>/", items.join(" / "))
}

/// Renders a trace one line per resting state.
///
/// Every record is drawn except where the window is still in transit: a
/// state the next step leaves by a pure leftward move, or an intermediate
/// position inside a run of pure shifts. A line identical to the previous one
/// is not repeated.
pub fn render_trace(trace: &[TraceRecord]) -> String {
    let mut out = String::new();
    let mut last: Option<&str> = None;
    for (i, rec) in trace.iter().enumerate() {
        if let Some(next) = trace.get(i + 1) {
            let next_moves = next.kind == RuleKind::Shift;
            if next_moves && (next.movement == Movement::ShiftL || rec.kind == RuleKind::Shift) {
                continue;
            }
        }
        if last == Some(rec.rendered.as_str()) {
            continue;
        }
        out.push_str(&rec.rendered);
        out.push('\n');
        last = Some(&rec.rendered);
    }
    out
}

/// The result of a completed analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub expression: UnlExpression,
    /// The surviving predicate, with `@entry`.
    pub entry: UwInstance,
    pub trace: Vec<TraceRecord>,
}

/// Runs sentences against a lexicon and rule set.
#[derive(Debug, Clone)]
pub struct Engine<'a> {
    lexicon: &'a Lexicon,
    rules: &'a RuleSet,
    config: EngineConfig,
}

impl<'a> Engine<'a> {
    pub fn new(lexicon: &'a Lexicon, rules: &'a RuleSet) -> Self {
        Engine {
            lexicon,
            rules,
            config: EngineConfig::default(),
        }
    }

    pub fn with_config(mut self, config: EngineConfig) -> Self {
        self.config = config;
        self
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Builds the initial node list: each whitespace-separated word is split
    /// into its root and suffix nodes; punctuation becomes its own node. The
    /// window starts on (`SHEAD`, first word).
    pub fn init(&self, sentence: &str) -> Result<MachineState, EngineError> {
        let text = nfc(sentence);
        let mut nodes = alloc::vec![Node::marker(NodeKind::Head, 1)];
        let mut next_id: NodeId = 2;
        let mut pos = 0;
        while pos < text.len() {
            let c = text[pos..].chars().next().unwrap();
            if c.is_whitespace() {
                pos += c.len_utf8();
                continue;
            }
            if is_sentence_punct(c) {
                let hw = &text[pos..pos + c.len_utf8()];
                let entry = self.lexicon.lookup(hw).into_iter().next().ok_or_else(|| {
                    EngineError::UnknownWord {
                        word: hw.to_string(),
                        offset: char_offset(&text, pos),
                    }
                })?;
                nodes.push(Node::from_entry(entry, next_id));
                next_id += 1;
                pos += c.len_utf8();
                continue;
            }
            let segs = segment(self.lexicon, &text, pos);
            let Some(seg) = segs.first() else {
                return Err(EngineError::UnknownWord {
                    word: text[pos..word_end(&text, pos)].to_string(),
                    offset: char_offset(&text, pos),
                });
            };
            for entry in seg.pieces() {
                nodes.push(Node::from_entry(entry, next_id));
                next_id += 1;
            }
            pos += seg.len();
        }
        if nodes.len() == 1 {
            return Err(EngineError::EmptySentence);
        }
        nodes.push(Node::marker(NodeKind::Tail, next_id));
        next_id += 1;
        let budget = self
            .config
            .budget
            .unwrap_or(self.config.budget_factor.saturating_mul(nodes.len()));
        let mut state = MachineState {
            nodes,
            window: 0,
            emitted: Vec::new(),
            snapshots: BTreeMap::new(),
            antecedents: BTreeMap::new(),
            referents: BTreeSet::new(),
            next_id,
            steps: 0,
            budget,
            trace: Vec::new(),
            seen: BTreeSet::new(),
        };
        let fp = state.fingerprint();
        state.seen.insert(fp);
        Ok(state)
    }

    /// Applies one rule. Returns `Ok(None)` when no rule applies.
    pub fn step<'s>(&self, state: &'s mut MachineState) -> Result<Option<&'s TraceRecord>, EngineError> {
        let Some(rule) = select_rule(self.rules, state) else {
            return Ok(None);
        };
        if state.steps >= state.budget {
            return Err(EngineError::BudgetExceeded {
                budget: state.budget,
                trace: core::mem::take(&mut state.trace),
            });
        }
        state.steps += 1;
        if let Err(problem) = self.apply(rule, state) {
            return Err(EngineError::InvalidAction {
                rule: rule.label(),
                problem,
                trace: core::mem::take(&mut state.trace),
            });
        }
        state.update_antecedents();
        state.record(rule);
        if !state.seen.insert(state.fingerprint()) {
            return Err(EngineError::Cycle {
                rule: rule.label(),
                step: state.steps,
                trace: core::mem::take(&mut state.trace),
            });
        }
        Ok(state.trace.last())
    }

    fn apply(&self, rule: &Rule, st: &mut MachineState) -> Result<(), ActionProblem> {
        for action in &rule.actions {
            match action {
                Action::Nop => {}
                Action::AddAttr(w, a) => {
                    let n = word_node(st, *w)?;
                    n.attributes.insert(a.clone());
                }
                Action::DelAttr(w, a) => {
                    let n = word_node(st, *w)?;
                    n.attributes.remove(a);
                }
                Action::UnlAttr(w, a) => {
                    let n = word_node(st, *w)?;
                    n.push_pending(a);
                }
                Action::Merge(w) => {
                    let (t, o) = (st.slot(*w), st.slot(other(*w)));
                    if st.nodes[t].is_marker() || st.nodes[o].is_marker() {
                        return Err(ActionProblem::Marker);
                    }
                    let absorbed = st.nodes[o].clone();
                    let target = &mut st.nodes[t];
                    let merged = merge_attributes(&target.attributes, &absorbed.attributes);
                    target.attributes = merged.attributes;
                    for p in absorbed.pending.iter().map(String::as_str).chain(merged.pending) {
                        target.push_pending(p);
                    }
                    if *w == Window::L {
                        target.pieces.extend(absorbed.pieces);
                    } else {
                        let mut pieces = absorbed.pieces;
                        pieces.append(&mut target.pieces);
                        target.pieces = pieces;
                    }
                    if target.uw.is_empty() {
                        target.uw = absorbed.uw;
                        target.headword = absorbed.headword;
                    }
                    // keep the instance that relations already point at
                    let linked = |id| st.emitted.iter().any(|e: &Emitted| e.head == id || e.dependent == id);
                    let keep = if !linked(st.nodes[t].id) && linked(absorbed.id) { absorbed.id } else { st.nodes[t].id };
                    st.nodes[t].id = keep;
                    st.nodes.remove(o);
                }
                Action::Rel(label, h, d) => {
                    let (hi, di) = (st.slot(*h), st.slot(*d));
                    if st.nodes[hi].is_marker() || st.nodes[di].is_marker() {
                        return Err(ActionProblem::Marker);
                    }
                    if st.nodes[hi].id == st.nodes[di].id {
                        return Err(ActionProblem::SelfRelation);
                    }
                    st.snapshot(hi);
                    st.snapshot(di);
                    st.emitted.push(Emitted {
                        label: label.clone(),
                        head: st.nodes[hi].id,
                        dependent: st.nodes[di].id,
                    });
                    st.nodes.remove(di);
                }
                Action::Swap => {
                    let i = st.window;
                    if st.nodes[i].is_marker() || st.nodes[i + 1].is_marker() {
                        return Err(ActionProblem::Marker);
                    }
                    st.nodes.swap(i, i + 1);
                }
                Action::Insert(hw, w) => {
                    let hw = nfc(hw);
                    let entries: Vec<&LexEntry> = self
                        .lexicon
                        .lookup(&hw)
                        .into_iter()
                        .filter(|e| !e.is_inflection())
                        .collect();
                    let entry = match entries.as_slice() {
                        [] => return Err(ActionProblem::InsertUnknown(hw)),
                        [e] => *e,
                        _ => return Err(ActionProblem::InsertAmbiguous(hw)),
                    };
                    let node = Node::from_entry(entry, st.next_id);
                    st.next_id += 1;
                    let i = st.window;
                    match w {
                        Window::L => {
                            if st.nodes[i].is_marker() {
                                return Err(ActionProblem::Marker);
                            }
                            st.nodes.insert(i, node);
                        }
                        Window::R => {
                            if st.nodes[i + 1].is_marker() {
                                return Err(ActionProblem::Marker);
                            }
                            st.nodes.insert(i + 2, node);
                            st.window = i + 1;
                        }
                    }
                }
                Action::Refer(w) => {
                    let idx = st.slot(*w);
                    if st.nodes[idx].is_marker() {
                        return Err(ActionProblem::Marker);
                    }
                    let key = st.nodes[idx].agreement();
                    let ante = st.antecedents.get(&key).cloned().ok_or(ActionProblem::NoAntecedent)?;
                    let n = &mut st.nodes[idx];
                    n.uw = ante.uw;
                    n.id = ante.id;
                    st.referents.insert(ante.id);
                }
            }
        }
        match rule.movement {
            Movement::Stay => {}
            Movement::ShiftR if st.window + 2 < st.nodes.len() => st.window += 1,
            Movement::ShiftL if st.window > 0 => st.window -= 1,
            _ => return Err(ActionProblem::MoveOutOfRange),
        }
        Ok(())
    }

    /// Steps until no rule applies, then finalizes.
    pub fn run(&self, sentence: &str) -> Result<Analysis, EngineError> {
        let mut state = self.init(sentence)?;
        while self.step(&mut state)?.is_some() {}
        self.finish(state)
    }

    /// Turns a halted state into an [`Analysis`]: the lone remaining node
    /// gets `@entry` plus its pending attributes, and every relation endpoint
    /// is rendered from its instance's last snapshot.
    pub fn finish(&self, mut state: MachineState) -> Result<Analysis, EngineError> {
        if !state.is_final() {
            return Err(EngineError::DeadEnd {
                state: state.render(),
                trace: state.trace,
            });
        }
        let entry_node = &state.nodes[1];
        let entry_id = entry_node.id;
        let mut rest: Vec<String> = entry_node.pending.iter().filter(|a| *a != "@entry").cloned().collect();
        rest.sort();
        let mut attrs = alloc::vec![String::from("@entry")];
        attrs.extend(rest);
        state.snapshots.insert(entry_id, (entry_node.uw.clone(), attrs));

        let mut uses: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut order: Vec<NodeId> = Vec::new();
        for e in &state.emitted {
            for id in [e.head, e.dependent] {
                let c = uses.entry(id).or_insert(0);
                if *c == 0 {
                    order.push(id);
                }
                *c += 1;
            }
        }
        // anaphora-linked instances are numbered first
        order.sort_by_key(|id| !state.referents.contains(id));
        let numbered: Vec<NodeId> = order
            .into_iter()
            .filter(|id| match self.config.ids {
                IdPolicy::Always => true,
                IdPolicy::Minimal => {
                    *id != entry_id && (uses[id] >= 2 || state.referents.contains(id))
                }
            })
            .collect();
        let instance = |id: NodeId| -> UwInstance {
            let (uw, attrs) = state.snapshots.get(&id).cloned().unwrap_or_default();
            let mut inst = UwInstance::new(uw);
            for a in &attrs {
                inst.push_attr(a);
            }
            if let Some(k) = numbered.iter().position(|n| *n == id) {
                inst.instance_id = Some(k as u16 + 1);
            }
            inst
        };
        let mut expression = UnlExpression::new();
        for e in &state.emitted {
            let rel = Relation::new(e.label.clone(), instance(e.head), instance(e.dependent));
            if expression.push(rel).is_err() {
                return Err(EngineError::InvalidAction {
                    rule: String::from("finalize"),
                    problem: ActionProblem::SelfRelation,
                    trace: state.trace,
                });
            }
        }
        Ok(Analysis {
            expression,
            entry: instance(entry_id),
            trace: state.trace,
        })
    }
}

fn other(w: Window) -> Window {
    match w {
        Window::L => Window::R,
        Window::R => Window::L,
    }
}

fn word_node(st: &mut MachineState, w: Window) -> Result<&mut Node, ActionProblem> {
    let idx = st.slot(w);
    let n = &mut st.nodes[idx];
    if n.is_marker() {
        Err(ActionProblem::Marker)
    } else {
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_dictionary;
    use crate::ruleset::parse_rules;
    use crate::unl::Registry;

    fn word(s: &str, id: NodeId) -> Node {
        Node {
            kind: NodeKind::Word,
            pieces: s.split(' ').map(String::from).collect(),
            headword: String::new(),
            uw: UniversalWord::empty(),
            attributes: AttrSet::new(),
            pending: Vec::new(),
            id,
        }
    }

    fn list(words: &[&str]) -> Vec<Node> {
        let mut v = alloc::vec![Node::marker(NodeKind::Head, 0)];
        for (i, w) in words.iter().enumerate() {
            v.push(word(w, i as NodeId + 1));
        }
        v.push(Node::marker(NodeKind::Tail, 99));
        v
    }

    #[test]
    fn node_list_notation() {
        let nodes = list(&["a", "b", "c d", "e"]);
        assert_eq!(render_nodes(&nodes, 0), "/<</ [a] / \"b c d e\" />>/");
        assert_eq!(render_nodes(&nodes, 2), "/<</ a / [b] / [c d] / \"e\" />>/");
        assert_eq!(render_nodes(&nodes, 4), "/<</ a / b / c d / [e] />>/");
        assert_eq!(render_nodes(&list(&[]), 0), "/<</ />>/");
    }

    #[test]
    fn empty_trace_renders_nothing() {
        assert_eq!(render_trace(&[]), "");
    }

    #[test]
    fn insert_and_swap_place_the_window() {
        let lex = parse_dictionary(
            "[ক]{}\"k\"(N)<B,0,0>\n[খ]{}\"kh\"(V)<B,0,0>\n[গ]{}\"g\"(X)<B,0,0>\n",
            "t",
        )
        .unwrap();
        let rules = parse_rules(
            "170: L{N} R{V} => INSERT(\"গ\",R); STAY\n160: L{V} R{X} => SWAP; STAY\n10: L{SHEAD} R{ANY} => NOP; SHIFT_R\n",
            "t",
            &Registry::builtin(),
        )
        .unwrap();
        let engine = Engine::new(&lex, &rules);
        let mut st = engine.init("ক খ").unwrap();
        engine.step(&mut st).unwrap();
        engine.step(&mut st).unwrap();
        // INSERT(_, R) lands right of RAW and the window follows it
        assert_eq!(st.render(), "/<</ ক / [খ] / [গ] />>/");
        engine.step(&mut st).unwrap();
        assert_eq!(st.render(), "/<</ ক / [গ] / [খ] />>/");
        assert_eq!(st.law().headword, "গ");
    }

    #[test]
    fn shift_past_tail_is_an_error() {
        let lex = parse_dictionary("[ক]{}\"k\"(N)<B,0,0>\n", "t").unwrap();
        let rules = parse_rules("10: L{ANY} R{N} => NOP; SHIFT_R\n5: L{N} R{ANY} => NOP; SHIFT_R\n", "t", &Registry::builtin()).unwrap();
        let err = Engine::new(&lex, &rules).run("ক").unwrap_err();
        assert!(matches!(
            err,
            EngineError::InvalidAction { problem: ActionProblem::MoveOutOfRange, .. }
        ));
    }
}
