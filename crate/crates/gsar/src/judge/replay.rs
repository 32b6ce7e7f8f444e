//! Replay of recorded judge verdicts, keyed by request fingerprint.
//!
//! A replay file is JSONL, one `{"fingerprint": ..., "verdict": {...}}`
//! entry per line. Replaying decouples scoring experiments from the judge
//! that produced the verdicts: the same recorded run can be re-scored under
//! any configuration without re-invoking a model.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{parse_jsonl_line, JudgeBackend, JudgeRequest, Judgement};
use crate::domain::JudgeVerdict;
use crate::Error;

#[derive(Serialize, Deserialize)]
struct ReplayEntry {
    fingerprint: String,
    verdict: JudgeVerdict,
}

/// Judge backend that serves verdicts recorded in an earlier run.
pub struct ReplayJudge {
    verdicts: HashMap<String, JudgeVerdict>,
    duplicate_warnings: Vec<String>,
}

impl ReplayJudge {
    /// Loads a replay file. Duplicate fingerprints are tolerated with the
    /// last entry winning; each duplicate is reported as a warning for the
    /// caller to surface.
    pub fn from_path(path: &Path) -> crate::Result<ReplayJudge> {
        let display = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(display.clone(), e))?;
        let mut verdicts = HashMap::new();
        let mut duplicate_warnings = Vec::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(display.clone(), e))?;
            let Some(entry) = parse_jsonl_line::<ReplayEntry>(&display, idx + 1, &line)? else {
                continue;
            };
            if verdicts
                .insert(entry.fingerprint.clone(), entry.verdict)
                .is_some()
            {
                duplicate_warnings.push(format!(
                    "duplicate fingerprint {} at line {}; keeping the later entry",
                    entry.fingerprint,
                    idx + 1
                ));
            }
        }
        Ok(ReplayJudge {
            verdicts,
            duplicate_warnings,
        })
    }

    /// Builds a replay judge directly from fingerprint/verdict pairs.
    pub fn from_entries(entries: impl IntoIterator<Item = (String, JudgeVerdict)>) -> ReplayJudge {
        ReplayJudge {
            verdicts: entries.into_iter().collect(),
            duplicate_warnings: Vec::new(),
        }
    }

    /// Warnings accumulated while loading (currently only duplicates).
    pub fn duplicate_warnings(&self) -> &[String] {
        &self.duplicate_warnings
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }
}

impl JudgeBackend for ReplayJudge {
    fn id(&self) -> &str {
        "replay"
    }

    fn evaluate(&self, request: &JudgeRequest) -> Judgement {
        match self.verdicts.get(&request.fingerprint()) {
            Some(verdict) => Judgement::native(verdict.clone()),
            None => Judgement::fallback(JudgeVerdict::safe_default("no recorded verdict")),
        }
    }
}

/// Writes a replay trace for later consumption by [`ReplayJudge`].
pub fn write_replay_trace<'a>(
    path: &Path,
    entries: impl IntoIterator<Item = (&'a str, &'a JudgeVerdict)>,
) -> crate::Result<()> {
    let display = path.display().to_string();
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(display.clone(), e))?;
    for (fingerprint, verdict) in entries {
        let entry = ReplayEntry {
            fingerprint: fingerprint.to_string(),
            verdict: verdict.clone(),
        };
        let line = serde_json::to_string(&entry).expect("replay entries serialize");
        writeln!(file, "{line}").map_err(|e| Error::io(display.clone(), e))?;
    }
    Ok(())
}
