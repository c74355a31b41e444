//! File-backed store of adjacency verdicts keyed by the canonical form of
//! the pair graph.
//!
//! The file holds one JSON record per line and is only ever appended to.
//! A second verdict for a key already present must agree with the first.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::canon::CanonicalKey;
use crate::error::{Error, Result};
use crate::obstruction::Status;

pub const KB_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbRecord {
    pub version: u32,
    pub key: CanonicalKey,
    pub verdict: Status,
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoreOutcome {
    Inserted,
    AlreadyPresent,
}

#[derive(Debug)]
pub struct KnowledgeBase {
    path: PathBuf,
    records: BTreeMap<CanonicalKey, KbRecord>,
}

impl KnowledgeBase {
    /// Loads the store, treating a missing file as empty.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(Error::KnowledgeBase(format!("{}: {e}", path.display()))),
        };
        let mut records = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let corrupt = |msg: String| Error::KnowledgeBase(format!("{}:{}: {msg}", path.display(), n + 1));
            let rec: KbRecord = serde_json::from_str(line).map_err(|e| corrupt(e.to_string()))?;
            if rec.version != KB_VERSION {
                return Err(corrupt(format!("unsupported record version {}", rec.version)));
            }
            if let Some(prev) = records.get(&rec.key).map(|r: &KbRecord| r.verdict) {
                if prev != rec.verdict {
                    return Err(corrupt(format!("key {} recorded as both {prev} and {}", rec.key, rec.verdict)));
                }
                continue;
            }
            records.insert(rec.key.clone(), rec);
        }
        Ok(KnowledgeBase { path, records })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lookup(&self, key: &CanonicalKey) -> Option<&KbRecord> {
        self.records.get(key)
    }

    /// Records a verdict. Re-storing the same verdict is a no-op; a
    /// different one is a [`Error::VerdictConflict`].
    pub fn store(&mut self, key: CanonicalKey, verdict: Status, provenance: &str) -> Result<StoreOutcome> {
        if let Some(prev) = self.records.get(&key) {
            if prev.verdict == verdict {
                return Ok(StoreOutcome::AlreadyPresent);
            }
            return Err(Error::VerdictConflict {
                key: key.to_string(),
                stored: prev.verdict.to_string(),
                offered: verdict.to_string(),
            });
        }
        let rec = KbRecord {
            version: KB_VERSION,
            key: key.clone(),
            verdict,
            provenance: provenance.to_string(),
        };
        let mut line = serde_json::to_string(&rec).expect("records serialize");
        line.push('\n');
        let io_err = |e: io::Error| Error::KnowledgeBase(format!("{}: {e}", self.path.display()));
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(io_err)?;
        file.write_all(line.as_bytes()).map_err(io_err)?;
        self.records.insert(key, rec);
        Ok(StoreOutcome::Inserted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_key;
    use crate::graph::DualGraph;

    fn chain_pair(ids: [u32; 3]) -> CanonicalKey {
        let mut g = DualGraph::from_weights(
            &[(ids[0], -2), (ids[1], -2), (ids[2], -1)],
            &[(ids[0], ids[1]), (ids[1], ids[2])],
        )
        .unwrap();
        g.add_label(crate::graph::VertexId(ids[0]), "E").unwrap();
        g.add_label(crate::graph::VertexId(ids[2]), "F").unwrap();
        canonical_key(&g)
    }

    #[test]
    fn store_lookup_conflict() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kb.jsonl");
        let mut kb = KnowledgeBase::open(&path).unwrap();
        assert!(kb.is_empty());
        let key = chain_pair([0, 1, 2]);
        assert_eq!(kb.store(key.clone(), Status::RuledOut, "test").unwrap(), StoreOutcome::Inserted);
        assert_eq!(kb.store(key.clone(), Status::RuledOut, "again").unwrap(), StoreOutcome::AlreadyPresent);
        assert!(matches!(
            kb.store(key, Status::NotRuledOut, "test"),
            Err(Error::VerdictConflict { .. })
        ));

        let reopened = KnowledgeBase::open(&path).unwrap();
        let relabeled = chain_pair([7, 3, 5]);
        assert_eq!(reopened.lookup(&relabeled).unwrap().verdict, Status::RuledOut);
        assert_eq!(reopened.len(), 1);
        let unseen = chain_pair([0, 1, 2]);
        let mut g = DualGraph::from_weights(&[(0, -3)], &[]).unwrap();
        g.add_label(crate::graph::VertexId(0), "E").unwrap();
        assert!(reopened.lookup(&canonical_key(&g)).is_none());
        assert!(reopened.lookup(&unseen).is_some());
    }

    #[test]
    fn corrupt_lines_are_reported_with_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kb.jsonl");
        let mut kb = KnowledgeBase::open(&path).unwrap();
        kb.store(chain_pair([0, 1, 2]), Status::RuledOut, "x").unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("{not json\n");
        fs::write(&path, text).unwrap();
        match KnowledgeBase::open(&path) {
            Err(Error::KnowledgeBase(msg)) => assert!(msg.contains(":2:"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_version_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kb.jsonl");
        fs::write(
            &path,
            r#"{"version":9,"key":"k","verdict":"RULED_OUT","provenance":""}"#,
        )
        .unwrap();
        assert!(KnowledgeBase::open(&path).is_err());
    }
}
