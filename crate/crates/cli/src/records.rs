//! JSON-lines export of the machine state, one object per step.
//!
//! Fields: `sentence` (1-based input line), `step`, `rule`, `window` (index
//! of the LAW node in `nodes`), `nodes` (surfaces, markers included),
//! `attributes` (lexical attributes per node), `unl` (pending UNL
//! attributes per node).

use serde::Serialize;
use unlenc_core::engine::TraceRecord;

#[derive(Debug, Serialize)]
pub struct StepRecord<'a> {
    pub sentence: usize,
    pub step: usize,
    pub rule: &'a str,
    pub window: usize,
    pub nodes: Vec<&'a str>,
    pub attributes: Vec<&'a [String]>,
    pub unl: Vec<&'a [String]>,
}

impl<'a> StepRecord<'a> {
    pub fn new(sentence: usize, rec: &'a TraceRecord) -> Self {
        StepRecord {
            sentence,
            step: rec.step,
            rule: &rec.rule,
            window: rec.window,
            nodes: rec.nodes.iter().map(|n| n.surface.as_str()).collect(),
            attributes: rec.nodes.iter().map(|n| n.attributes.as_slice()).collect(),
            unl: rec.nodes.iter().map(|n| n.unl.as_slice()).collect(),
        }
    }
}

pub fn to_lines(sentence: usize, trace: &[TraceRecord]) -> String {
    let mut out = String::new();
    for rec in trace {
        out.push_str(&serde_json::to_string(&StepRecord::new(sentence, rec)).expect("records serialize"));
        out.push('\n');
    }
    out
}
