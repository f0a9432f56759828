use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One public message.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub round: Option<usize>,
    pub speaker: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub payload: Value,
}

/// Ordered log of everything sent over the public channel.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    records: Vec<TranscriptRecord>,
}

impl Transcript {
    pub fn push(&mut self, round: Option<usize>, speaker: impl Into<String>, kind: &str, payload: Value) {
        self.records.push(TranscriptRecord { round, speaker: speaker.into(), kind: kind.to_string(), payload });
    }

    pub fn records(&self) -> &[TranscriptRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// One JSON object per line, LF-terminated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialise"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> serde_json::Result<Self> {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<serde_json::Result<_>>()?;
        Ok(Self { records })
    }
}

/// Name of player `index` (zero-based) on the channel.
pub fn speaker(index: usize) -> String {
    format!("A{}", index + 1)
}
