//! Index coding instances.
//!
//! An instance is a message count plus an ordered list of destinations. Each
//! destination names the messages it desires and the messages it does not
//! have as side information (its interferers); every other message is an
//! antidote. Message ids are 1-based.
//!
//! Two serialized forms are accepted. The line form:
//!
//! ```text
//! # comment
//! messages 3
//! label toy
//! dest 1 desires 1 sees 2,3
//! dest 2 desires 2 sees none
//! ```
//!
//! and a JSON object `{"messages": 3, "label": "toy", "destinations":
//! [{"desires": [1], "interferers": [2, 3]}, ...]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::{MessageSet, MAX_MESSAGES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("invalid JSON instance: {0}")]
    Json(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Destination {
    pub desired: MessageSet,
    pub interferers: MessageSet,
}

impl Destination {
    pub fn new(desired: MessageSet, interferers: MessageSet) -> Self {
        Destination { desired, interferers }
    }

    /// Destination desiring the single message `w`.
    pub fn unicast<I: IntoIterator<Item = u32>>(w: u32, interferers: I) -> Self {
        Destination::new(MessageSet::singleton(w), MessageSet::from_ids(interferers))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    message_count: usize,
    destinations: Vec<Destination>,
    label: String,
}

impl Instance {
    pub fn new(
        message_count: usize,
        destinations: Vec<Destination>,
        label: impl Into<String>,
    ) -> Result<Self, InstanceError> {
        let inst = Instance { message_count, destinations, label: label.into() };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<(), InstanceError> {
        let n = self.message_count;
        if n == 0 || n > MAX_MESSAGES {
            return Err(InstanceError::Validation(format!(
                "message count must be in 1..={MAX_MESSAGES}, got {n}"
            )));
        }
        let all = MessageSet::full(n);
        for (k, d) in self.destinations.iter().enumerate() {
            let k = k + 1;
            if d.desired.is_empty() {
                return Err(InstanceError::Validation(format!("destination {k} desires nothing")));
            }
            if !d.desired.is_subset(all) || !d.interferers.is_subset(all) {
                return Err(InstanceError::Validation(format!(
                    "destination {k} references a message outside 1..={n}"
                )));
            }
            if !d.desired.is_disjoint(d.interferers) {
                return Err(InstanceError::Validation(format!(
                    "destination {k}: desired messages {} cannot also be interferers {}",
                    d.desired, d.interferers
                )));
            }
        }
        Ok(())
    }

    pub fn message_count(&self) -> usize {
        self.message_count
    }

    pub fn destinations(&self) -> &[Destination] {
        &self.destinations
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn all_messages(&self) -> MessageSet {
        MessageSet::full(self.message_count)
    }

    /// True iff every message is desired by at most one destination.
    pub fn is_unicast(&self) -> bool {
        let mut seen = MessageSet::EMPTY;
        for d in &self.destinations {
            if !seen.is_disjoint(d.desired) {
                return false;
            }
            seen = seen.union(d.desired);
        }
        true
    }

    /// Largest interferer set size over all destinations.
    pub fn max_interferers(&self) -> usize {
        self.destinations.iter().map(|d| d.interferers.len()).max().unwrap_or(0)
    }

    /// Applies a message relabeling: message `i` becomes `perm[i - 1]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Instance, InstanceError> {
        if perm.len() != self.message_count {
            return Err(InstanceError::Validation("permutation length mismatch".into()));
        }
        let map = |s: MessageSet| s.iter().map(|i| perm[i as usize - 1]).collect::<MessageSet>();
        let dests = self
            .destinations
            .iter()
            .map(|d| Destination::new(map(d.desired), map(d.interferers)))
            .collect();
        Instance::new(self.message_count, dests, self.label.clone())
    }

    /// Parses either serialized form; JSON is detected by a leading `{`.
    pub fn parse(text: &str) -> Result<Instance, InstanceError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    pub fn from_text(text: &str) -> Result<Instance, InstanceError> {
        let mut message_count: Option<usize> = None;
        let mut label = String::new();
        let mut dests = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            let tokens = tokenize(line);
            let Some(&(col, head)) = tokens.first() else { continue };
            let err = |column: usize, message: String| InstanceError::Syntax { line: line_no, column, message };
            match head {
                "messages" => {
                    if message_count.is_some() {
                        return Err(err(col, "duplicate `messages` line".into()));
                    }
                    let &(c, v) = tokens.get(1).ok_or_else(|| err(col, "expected a message count".into()))?;
                    let n = v.parse().map_err(|_| err(c, format!("expected a message count, found `{v}`")))?;
                    if let Some(&(c, extra)) = tokens.get(2) {
                        return Err(err(c, format!("unexpected `{extra}`")));
                    }
                    message_count = Some(n);
                }
                "label" => {
                    label = line.trim_start().trim_start_matches("label").trim().to_string();
                }
                "dest" => {
                    if message_count.is_none() {
                        return Err(err(col, "`dest` before `messages`".into()));
                    }
                    dests.push(parse_dest(&tokens, dests.len() + 1, &err)?);
                }
                other => return Err(err(col, format!("unknown directive `{other}`"))),
            }
        }
        let n = message_count.ok_or(InstanceError::Syntax {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing `messages` line".into(),
        })?;
        Instance::new(n, dests, label)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "messages {}", self.message_count).unwrap();
        if !self.label.is_empty() {
            writeln!(out, "label {}", self.label).unwrap();
        }
        for (k, d) in self.destinations.iter().enumerate() {
            let sees = if d.interferers.is_empty() { "none".to_string() } else { id_list(d.interferers) };
            writeln!(out, "dest {} desires {} sees {}", k + 1, id_list(d.desired), sees).unwrap();
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Instance, InstanceError> {
        let raw: InstanceJson = serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
        let mut dests = Vec::with_capacity(raw.destinations.len());
        for (k, d) in raw.destinations.iter().enumerate() {
            let conv = |ids: &[u32]| -> Result<MessageSet, InstanceError> {
                ids.iter()
                    .map(|&i| {
                        if i == 0 || i as usize > raw.messages.min(MAX_MESSAGES) {
                            Err(InstanceError::Validation(format!(
                                "destination {} references message {i} outside 1..={}",
                                k + 1,
                                raw.messages
                            )))
                        } else {
                            Ok(i)
                        }
                    })
                    .collect()
            };
            dests.push(Destination::new(conv(&d.desires)?, conv(&d.interferers)?));
        }
        Instance::new(raw.messages, dests, raw.label)
    }

    pub fn to_json(&self) -> String {
        let raw = InstanceJson {
            messages: self.message_count,
            label: self.label.clone(),
            destinations: self
                .destinations
                .iter()
                .map(|d| DestJson { desires: d.desired.iter().collect(), interferers: d.interferers.iter().collect() })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("instance serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    messages: usize,
    #[serde(default)]
    label: String,
    destinations: Vec<DestJson>,
}

#[derive(Serialize, Deserialize)]
struct DestJson {
    desires: Vec<u32>,
    #[serde(default)]
    interferers: Vec<u32>,
}

fn id_list(s: MessageSet) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// Splits on whitespace and commas, keeping 1-based columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        let sep = ch.is_whitespace() || ch == ',';
        match (sep, start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_dest<F>(tokens: &[(usize, &str)], expected_id: usize, err: &F) -> Result<Destination, InstanceError>
where
    F: Fn(usize, String) -> InstanceError,
{
    let mut it = tokens.iter().skip(1).peekable();
    let &(c, id) = it.next().ok_or_else(|| err(tokens[0].0, "expected a destination id".into()))?;
    let id: usize = id.parse().map_err(|_| err(c, format!("expected a destination id, found `{id}`")))?;
    if id != expected_id {
        return Err(err(c, format!("destination ids must be consecutive: expected {expected_id}, found {id}")));
    }
    match it.next() {
        Some(&(_, "desires")) => {}
        Some(&(c, t)) => return Err(err(c, format!("expected `desires`, found `{t}`"))),
        None => return Err(err(c, "expected `desires`".into())),
    }
    let mut desired = MessageSet::EMPTY;
    let mut last_col = c;
    loop {
        match it.next() {
            Some(&(_, "sees")) => break,
            Some(&(c, t)) => {
                desired = desired.with(parse_id(c, t, err)?);
                last_col = c;
            }
            None => return Err(err(last_col, "expected `sees`".into())),
        }
    }
    let mut interferers = MessageSet::EMPTY;
    let mut none_seen = false;
    for &(c, t) in it {
        if t == "none" {
            none_seen = true;
            continue;
        }
        if none_seen {
            return Err(err(c, "`none` cannot be combined with message ids".into()));
        }
        interferers = interferers.with(parse_id(c, t, err)?);
    }
    if desired.is_empty() {
        return Err(err(c, "a destination must desire at least one message".into()));
    }
    if interferers.is_empty() && !none_seen {
        return Err(err(last_col, "expected an id list or `none` after `sees`".into()));
    }
    Ok(Destination::new(desired, interferers))
}

fn parse_id<F>(col: usize, tok: &str, err: &F) -> Result<u32, InstanceError>
where
    F: Fn(usize, String) -> InstanceError,
{
    match tok.parse::<u32>() {
        Ok(v) if v >= 1 && (v as usize) <= MAX_MESSAGES => Ok(v),
        _ => Err(err(col, format!("expected a message id, found `{tok}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_message_instance_is_valid() {
        let inst = Instance::parse("messages 1\ndest 1 desires 1 sees none\n").unwrap();
        assert_eq!(inst.message_count(), 1);
        assert_eq!(inst.destinations().len(), 1);
        assert!(inst.is_unicast());
    }

    #[test]
    fn desired_message_cannot_interfere() {
        let err = Instance::parse("messages 2\ndest 1 desires 1 sees 1\n").unwrap_err();
        assert!(matches!(err, InstanceError::Validation(ref m) if m.contains("cannot also be interferers")), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = Instance::parse("messages 3\ndest 1 wants 1 sees 2\n").unwrap_err();
        assert_eq!(err, InstanceError::Syntax { line: 2, column: 8, message: "expected `desires`, found `wants`".into() });
        let err = Instance::parse("messages 3\ndest 1 desires 1 sees 2 x\n").unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { line: 2, column: 25, .. }), "{err:?}");
        let err = Instance::parse("dest 1 desires 1 sees none").unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { line: 1, column: 1, .. }));
    }

    #[test]
    fn out_of_range_ids_are_rejected() {
        assert!(Instance::parse("messages 2\ndest 1 desires 3 sees none\n").is_err());
        assert!(Instance::parse(r#"{"messages":2,"destinations":[{"desires":[1],"interferers":[7]}]}"#).is_err());
    }

    #[test]
    fn comments_commas_and_spaces_are_equivalent() {
        let a = Instance::parse("# toy\nmessages 3\ndest 1 desires 1 sees 2 3 # inline\n").unwrap();
        let b = Instance::parse("messages 3\ndest 1 desires 1 sees 2,3\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_and_text_agree() {
        let t = Instance::parse("messages 3\nlabel toy\ndest 1 desires 1 sees 2,3\ndest 2 desires 2 sees none\n").unwrap();
        let j = Instance::parse(&t.to_json()).unwrap();
        assert_eq!(t, j);
        assert_eq!(Instance::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn groupcast_is_not_unicast() {
        let inst = Instance::new(
            2,
            vec![Destination::unicast(1, [2]), Destination::unicast(1, [])],
            "",
        )
        .unwrap();
        assert!(!inst.is_unicast());
    }
}
