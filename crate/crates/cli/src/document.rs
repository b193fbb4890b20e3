//! JSON documents describing events and payoffs on finite sequence spaces.
//!
//! Symbols are 1-based, matching the alphabet `{1, ..., K}`. An event is a
//! payoff whose values (including the default) are 0 or 1.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use exchbound::spaces::{Event, Payoff, Sequence, SequenceSpace};
use exchbound::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Event,
    Payoff,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffDocument {
    pub k: u32,
    pub n: u32,
    pub kind: DocumentKind,
    #[serde(default)]
    pub default: f64,
    #[serde(default)]
    pub entries: Vec<DocumentEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentEntry {
    pub seq: Vec<u32>,
    pub value: f64,
}

impl PayoffDocument {
    pub fn space(&self) -> Result<SequenceSpace, Error> {
        SequenceSpace::new(self.k, self.n)
    }

    fn validated_table(&self) -> Result<BTreeMap<u64, f64>, Error> {
        let space = self.space()?;
        let zero_one = |v: f64| v == 0.0 || v == 1.0;
        if self.kind == DocumentKind::Event && !zero_one(self.default) {
            return Err(Error::InvalidArgument(format!(
                "an event's default must be 0 or 1, got {}",
                self.default
            )));
        }
        let mut table = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for entry in &self.entries {
            let seq = Sequence::from(entry.seq.clone());
            space.validate_sequence(&seq)?;
            let idx = space.index_of(&seq);
            if !seen.insert(idx) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate sequence {seq} in the document"
                )));
            }
            if self.kind == DocumentKind::Event && !zero_one(entry.value) {
                return Err(Error::InvalidArgument(format!(
                    "an event's values must be 0 or 1, got {} at {seq}",
                    entry.value
                )));
            }
            table.insert(idx, entry.value);
        }
        Ok(table)
    }

    pub fn to_payoff(&self) -> Result<Payoff, Error> {
        let table = self.validated_table()?;
        Payoff::new(self.space()?, table, self.default)
    }

    /// Interprets the document as an event. A default of 1 stands for the
    /// complement of the listed zero-valued sequences and needs an
    /// enumerable space.
    pub fn to_event(&self) -> Result<Event, Error> {
        if self.kind != DocumentKind::Event {
            return Err(Error::InvalidArgument(
                "document kind must be \"event\" for probability quantities".to_string(),
            ));
        }
        let space = self.space()?;
        let table = self.validated_table()?;
        if self.default == 0.0 {
            let members = table
                .iter()
                .filter(|(_, &v)| v == 1.0)
                .map(|(&i, _)| i);
            Event::new(space, members)
        } else {
            let capacity = match space.index_capacity() {
                Some(c) if space.is_enumerable() => c,
                _ => {
                    return Err(Error::GuardExceeded(
                        "a default of 1 describes a co-sparse event and needs an enumerable space"
                            .to_string(),
                    ))
                }
            };
            let members = (0..capacity).filter(|i| *table.get(i).unwrap_or(&1.0) == 1.0);
            Event::new(space, members)
        }
    }
}

pub fn parse_document(text: &str) -> Result<PayoffDocument, serde_json::Error> {
    serde_json::from_str(text)
}
