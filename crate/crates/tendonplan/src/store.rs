//! JSON persistence for [`WearState`].
//!
//! ```json
//! {
//!   "motors": { "0": 1400, "1": 0, "2": 70, "3": 0 },
//!   "segments": [ { "section": 0, "a": 30, "b": 31, "count": 20 } ]
//! }
//! ```
//!
//! `section` is 0 for the lower and 1 for the upper section; `a` and `b` are
//! adjacent node ids, written low id first. The canonical form lists all four
//! motors and the non-zero segments in `(section, a, b)` order.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tendonplan_core::env::{Section, SectionEnv};
use tendonplan_core::wear::MOTOR_COUNT;
use tendonplan_core::WearState;

use crate::AppError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WearFile {
    #[serde(default)]
    motors: BTreeMap<String, u64>,
    #[serde(default)]
    segments: Vec<SegmentRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentRecord {
    section: usize,
    a: usize,
    b: usize,
    count: u64,
}

/// Parses a wear document. Errors name the offending record.
pub fn from_json(text: &str) -> Result<WearState, String> {
    let file: WearFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let env = SectionEnv::new();
    let mut state = WearState::new();

    for (key, steps) in &file.motors {
        let motor = key
            .parse::<usize>()
            .ok()
            .filter(|m| *m < MOTOR_COUNT)
            .ok_or_else(|| format!("motors.{key}: unknown motor, expected 0..{MOTOR_COUNT}"))?;
        state
            .set_motor_steps(motor, *steps)
            .map_err(|e| format!("motors.{key}: {e}"))?;
    }

    let mut seen = BTreeSet::new();
    for (idx, rec) in file.segments.iter().enumerate() {
        let section = Section::from_index(rec.section)
            .ok_or_else(|| format!("segments[{idx}]: unknown section {}", rec.section))?;
        let key = (rec.section, rec.a.min(rec.b), rec.a.max(rec.b));
        if !seen.insert(key) {
            return Err(format!(
                "segments[{idx}]: duplicate segment {}-{} in section {}",
                key.1, key.2, key.0
            ));
        }
        state
            .set_segment_use(&env, section, rec.a, rec.b, rec.count)
            .map_err(|e| format!("segments[{idx}]: {e}"))?;
    }
    Ok(state)
}

/// Canonical, pretty-printed JSON with a trailing newline.
pub fn to_json(state: &WearState) -> String {
    let file = WearFile {
        motors: (0..MOTOR_COUNT)
            .map(|m| (m.to_string(), state.motor_steps(m)))
            .collect(),
        segments: state
            .segments()
            .map(|(k, count)| SegmentRecord {
                section: k.section.index(),
                a: k.a,
                b: k.b,
                count,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("wear state always serializes");
    out.push('\n');
    out
}

/// Reads the store at `path`. A missing file is a pristine robot.
pub fn load(path: &Path) -> Result<WearState, AppError> {
    match fs::read_to_string(path) {
        Ok(text) => from_json(&text).map_err(|message| AppError::Store {
            path: path.to_path_buf(),
            message,
        }),
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(WearState::new()),
        Err(source) => Err(AppError::Io {
            path: path.to_path_buf(),
            source,
        }),
    }
}

pub fn save(path: &Path, state: &WearState) -> Result<(), AppError> {
    fs::write(path, to_json(state)).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })
}
