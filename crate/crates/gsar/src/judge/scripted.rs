//! Scripted judge: serves a fixed sequence of verdicts, one per call.
//!
//! This is the workhorse for loop testing and for the `loop` CLI command;
//! scripting the judge makes every control-flow path of the replan loop
//! reachable on demand. An exhausted script abstains, which the loop treats
//! like any other abstention and eventually degrades on.

use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Mutex;

use super::{parse_jsonl_line, JudgeBackend, JudgeRequest, Judgement};
use crate::domain::JudgeVerdict;
use crate::Error;

pub struct ScriptedJudge {
    verdicts: Vec<JudgeVerdict>,
    cursor: Mutex<usize>,
}

impl ScriptedJudge {
    pub fn new(verdicts: Vec<JudgeVerdict>) -> ScriptedJudge {
        ScriptedJudge {
            verdicts,
            cursor: Mutex::new(0),
        }
    }

    /// Loads a script: JSONL with one verdict object per line.
    pub fn from_path(path: &Path) -> crate::Result<ScriptedJudge> {
        let display = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(display.clone(), e))?;
        let mut verdicts = Vec::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(display.clone(), e))?;
            if let Some(verdict) = parse_jsonl_line::<JudgeVerdict>(&display, idx + 1, &line)? {
                verdicts.push(verdict);
            }
        }
        Ok(ScriptedJudge::new(verdicts))
    }

    /// How many verdicts have been served so far.
    pub fn calls_made(&self) -> usize {
        *self.cursor.lock().expect("cursor lock")
    }

    pub fn script_len(&self) -> usize {
        self.verdicts.len()
    }
}

impl JudgeBackend for ScriptedJudge {
    fn id(&self) -> &str {
        "scripted"
    }

    fn evaluate(&self, _request: &JudgeRequest) -> Judgement {
        let mut cursor = self.cursor.lock().expect("cursor lock");
        if *cursor < self.verdicts.len() {
            let verdict = self.verdicts[*cursor].clone();
            *cursor += 1;
            Judgement::native(verdict)
        } else {
            *cursor += 1;
            Judgement::fallback(JudgeVerdict::safe_default("judge script exhausted"))
        }
    }
}
