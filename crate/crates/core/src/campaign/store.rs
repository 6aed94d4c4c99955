//! Append-only verdict cache keyed by problem content.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::fol::Formula;
use crate::prover::TestVerdict;
use crate::testgen::{Provenance, TestId, TestKind};
use crate::tptp::{render_ontology, Ontology};

/// Content hash of one proof attempt: premises, conjecture, prover and limit.
pub fn verdict_key(premises: &Ontology, conjecture: &Formula, prover: &str, seconds: f64) -> String {
    let mut h = Sha256::new();
    h.update(render_ontology(premises).as_bytes());
    h.update(b"\n");
    h.update(conjecture.to_string().as_bytes());
    h.update(b"\n");
    h.update(prover.as_bytes());
    h.update(b"\n");
    h.update(format!("{seconds}").as_bytes());
    hex::encode(h.finalize())
}

/// A suite record extended with one prover's verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub key: String,
    pub id: TestId,
    pub kind: TestKind,
    pub origins: Vec<Provenance>,
    pub conjecture: String,
    #[serde(flatten)]
    pub verdict: TestVerdict,
}

/// Loads every record of a store file; a missing file is an empty store.
/// A truncated last line (interrupted write) is ignored.
pub fn load(path: &Path) -> io::Result<HashMap<String, TestVerdict>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(HashMap::new()),
        Err(e) => return Err(e),
    };
    let mut out = HashMap::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if let Ok(rec) = serde_json::from_str::<VerdictRecord>(&line) {
            out.insert(rec.key, rec.verdict);
        }
    }
    Ok(out)
}

pub struct Writer {
    file: File,
}

impl Writer {
    pub fn open(path: &Path) -> io::Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        // Terminate a line cut off by an earlier interruption.
        let len = file.metadata()?.len();
        if len > 0 {
            let text = std::fs::read(path)?;
            if text.last() != Some(&b'\n') {
                file.write_all(b"\n")?;
            }
        }
        Ok(Writer { file })
    }

    pub fn append(&mut self, rec: &VerdictRecord) -> io::Result<()> {
        let mut line = serde_json::to_vec(rec)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.flush()
    }
}
