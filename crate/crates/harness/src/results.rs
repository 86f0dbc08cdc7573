//! Append-only result files.
//!
//! `results.csv` gets one row per finished trial and is flushed after each
//! row, so an interrupted campaign leaves at most one partial trailing line.
//! Reopening drops that line and reports the keys already present.

use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use upbo_core::benchmarks::FunctionId;
use upbo_core::stats::TrialResult;
use upbo_core::TraceEntry;

use crate::error::{HarnessError, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const FAILURES_FILE: &str = "failed.csv";
pub const TRACES_DIR: &str = "traces";

pub const RESULT_HEADER: [&str; 9] = [
    "optimizer",
    "config_fingerprint",
    "function",
    "dimension",
    "nfe",
    "seed",
    "final_error",
    "evaluations_used",
    "best_cost",
];

const FAILURE_HEADER: [&str; 7] = ["optimizer", "config_fingerprint", "function", "dimension", "nfe", "seed", "message"];

/// Identity of a trial; a rerun skips every key already in the file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrialKey {
    pub optimizer: String,
    pub fingerprint: String,
    pub function: FunctionId,
    pub dimension: usize,
    pub nfe: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub key: TrialKey,
    pub final_error: f64,
    pub evaluations_used: u64,
    pub best_cost: f64,
}

impl ResultRow {
    fn fields(&self) -> [String; 9] {
        let k = &self.key;
        [
            k.optimizer.clone(),
            k.fingerprint.clone(),
            k.function.to_string(),
            k.dimension.to_string(),
            k.nfe.to_string(),
            k.seed.to_string(),
            // `Display` for f64 is the shortest string that parses back exactly.
            self.final_error.to_string(),
            self.evaluations_used.to_string(),
            self.best_cost.to_string(),
        ]
    }

    fn parse(record: &csv::StringRecord, path: &Path, line: u64) -> Result<Self> {
        let bad = |what: &str| HarnessError::format(path, format!("line {line}: bad {what}"));
        if record.len() != RESULT_HEADER.len() {
            return Err(bad("field count"));
        }
        let num = |i: usize, what: &str| record[i].parse::<u64>().map_err(|_| bad(what));
        let real = |i: usize, what: &str| record[i].parse::<f64>().map_err(|_| bad(what));
        Ok(ResultRow {
            key: TrialKey {
                optimizer: record[0].to_string(),
                fingerprint: record[1].to_string(),
                function: record[2].parse().map_err(|_| bad("function"))?,
                dimension: num(3, "dimension")? as usize,
                nfe: num(4, "nfe")?,
                seed: num(5, "seed")?,
            },
            final_error: real(6, "final_error")?,
            evaluations_used: num(7, "evaluations_used")?,
            best_cost: real(8, "best_cost")?,
        })
    }

    pub fn to_trial(&self) -> TrialResult {
        TrialResult {
            optimizer: self.key.optimizer.clone(),
            function: self.key.function,
            dimension: self.key.dimension,
            nfe: self.key.nfe,
            seed: self.key.seed,
            final_error: self.final_error,
            evaluations_used: self.evaluations_used,
            trace: Vec::new(),
        }
    }
}

/// Cuts a trailing line that lacks its newline.
fn drop_partial_line(path: &Path) -> Result<()> {
    let mut file = OpenOptions::new().read(true).write(true).open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes).map_err(|e| HarnessError::io(path, e))?;
    if bytes.last().is_some_and(|&b| b != b'\n') {
        let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        file.set_len(keep as u64).map_err(|e| HarnessError::io(path, e))?;
        file.seek(SeekFrom::End(0)).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(())
}

/// Reads every complete row of a results file.
pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(complete.as_bytes());
    let header = reader.headers().map_err(|e| HarnessError::format(path, e.to_string()))?.clone();
    if !header.is_empty() && header.iter().ne(RESULT_HEADER) {
        return Err(HarnessError::format(path, "unexpected header"));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::format(path, e.to_string()))?;
        rows.push(ResultRow::parse(&rec, path, i as u64 + 2)?);
    }
    Ok(rows)
}

fn open_append(path: &Path, header: &[&str]) -> Result<csv::Writer<File>> {
    let exists = path.exists();
    if exists {
        drop_partial_line(path)?;
    }
    let file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| HarnessError::io(path, e))?;
    let empty = file.metadata().map_err(|e| HarnessError::io(path, e))?.len() == 0;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if empty {
        writer.write_record(header).map_err(|e| HarnessError::format(path, e.to_string()))?;
        writer.flush().map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(writer)
}

/// Open handles on a campaign's output directory.
pub struct ResultStore {
    dir: PathBuf,
    results: csv::Writer<File>,
    failures: csv::Writer<File>,
    completed: BTreeSet<TrialKey>,
}

impl ResultStore {
    /// Creates the directory and files if needed. Fails here, before any
    /// trial runs, when the location is not writable.
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let results_path = dir.join(RESULTS_FILE);
        let results = open_append(&results_path, &RESULT_HEADER)?;
        let completed = read_results(&results_path)?.into_iter().map(|r| r.key).collect();
        let failures = open_append(&dir.join(FAILURES_FILE), &FAILURE_HEADER)?;
        Ok(ResultStore { dir: dir.to_path_buf(), results, failures, completed })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn is_complete(&self, key: &TrialKey) -> bool {
        self.completed.contains(key)
    }

    pub fn completed(&self) -> usize {
        self.completed.len()
    }

    pub fn append(&mut self, row: &ResultRow) -> Result<()> {
        let path = self.dir.join(RESULTS_FILE);
        self.results.write_record(row.fields()).map_err(|e| HarnessError::format(&path, e.to_string()))?;
        self.results.flush().map_err(|e| HarnessError::io(&path, e))?;
        self.completed.insert(row.key.clone());
        Ok(())
    }

    pub fn append_failure(&mut self, key: &TrialKey, message: &str) -> Result<()> {
        let path = self.dir.join(FAILURES_FILE);
        let record = [
            key.optimizer.as_str(),
            key.fingerprint.as_str(),
            &key.function.to_string(),
            &key.dimension.to_string(),
            &key.nfe.to_string(),
            &key.seed.to_string(),
            message,
        ];
        self.failures.write_record(record).map_err(|e| HarnessError::format(&path, e.to_string()))?;
        self.failures.flush().map_err(|e| HarnessError::io(&path, e))
    }

    pub fn write_trace(&self, key: &TrialKey, trace: &[TraceEntry]) -> Result<()> {
        let dir = self.dir.join(TRACES_DIR);
        fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
        let path = dir.join(format!(
            "{}_{}_d{}_n{}_s{}_{}.csv",
            key.optimizer, key.function, key.dimension, key.nfe, key.seed, key.fingerprint
        ));
        let mut out = String::from("iteration,best_cost,evaluations,discarded\n");
        for t in trace {
            out.push_str(&format!("{},{},{},{}\n", t.iteration, t.best_cost, t.evaluations, t.discarded));
        }
        let mut file = File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
        file.write_all(out.as_bytes()).map_err(|e| HarnessError::io(&path, e))
    }
}
