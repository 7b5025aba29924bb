//! Append-only per-chunk checkpoint files.
//!
//! Format: JSON lines. The first line is `{"tag": "..."}` naming the run
//! (command, k, x); each further line is `{"chunk": i, "data": ...}` with
//! consecutive `i` starting at 0. A torn last line from an interrupted write
//! is dropped on reopen.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Header {
    tag: String,
}

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    chunk: usize,
    data: T,
}

pub struct ChunkLog<T> {
    path: Option<PathBuf>,
    file: Option<File>,
    completed: Vec<T>,
    _marker: PhantomData<T>,
}

impl<T: Serialize + for<'de> Deserialize<'de>> ChunkLog<T> {
    /// A log that records nothing.
    pub fn disabled() -> Self {
        ChunkLog { path: None, file: None, completed: Vec::new(), _marker: PhantomData }
    }

    /// Opens or creates the log at `path`. An existing log must carry the
    /// same `tag`.
    pub fn open(path: &Path, tag: &str) -> Result<Self> {
        let err = |reason: String| Error::Checkpoint { path: path.display().to_string(), reason };
        let mut completed = Vec::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            let mut lines = reader.lines();
            if let Some(first) = lines.next() {
                let header: Header =
                    serde_json::from_str(&first?).map_err(|e| err(format!("bad header: {e}")))?;
                if header.tag != tag {
                    return Err(err(format!("belongs to run `{}`, not `{tag}`", header.tag)));
                }
            }
            for line in lines {
                let line = line?;
                // a torn trailing line ends the usable prefix
                let Ok(entry) = serde_json::from_str::<Entry<T>>(&line) else { break };
                if entry.chunk != completed.len() {
                    return Err(err(format!("chunk {} out of sequence", entry.chunk)));
                }
                completed.push(entry.data);
            }
        }
        // Rewrite the valid prefix so appends start on a clean line.
        let mut file = File::create(path)?;
        writeln!(file, "{}", serde_json::to_string(&Header { tag: tag.to_string() })?)?;
        for (chunk, data) in completed.iter().enumerate() {
            writeln!(file, "{}", serde_json::to_string(&Entry { chunk, data })?)?;
        }
        file.sync_data()?;
        let file = OpenOptions::new().append(true).open(path)?;
        Ok(ChunkLog { path: Some(path.to_path_buf()), file: Some(file), completed, _marker: PhantomData })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Chunks recovered from disk, in order. Leaves the log empty.
    pub fn take_completed(&mut self) -> Vec<T> {
        std::mem::take(&mut self.completed)
    }

    pub fn append(&mut self, chunk: usize, data: &T) -> Result<()> {
        if let Some(file) = self.file.as_mut() {
            writeln!(file, "{}", serde_json::to_string(&Entry { chunk, data })?)?;
            file.flush()?;
        }
        Ok(())
    }
}
