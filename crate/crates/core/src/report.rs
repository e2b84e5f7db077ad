//! Plain data types for machine-readable suite reports.

use alloc::string::String;
use alloc::vec::Vec;

/// Outcome of one identity instance.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Pass,
    Fail,
    /// index range empty or atom out of catalog at this rank
    Skipped,
    /// passed up to an explicitly reported convention sign
    Flagged,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Flagged => "flagged",
        }
    }
}

/// One checked identity instance; `id` carries the catalog anchor
/// (e.g. `A1-7`, `thm:screening3`) so failures are citable.
#[derive(Clone, Debug)]
pub struct Record {
    pub suite: String,
    pub id: String,
    pub indices: Vec<i64>,
    pub status: Status,
    pub detail: String,
}

impl Record {
    pub fn new(suite: &str, id: &str, indices: &[i64], status: Status, detail: String) -> Self {
        Record {
            suite: String::from(suite),
            id: String::from(id),
            indices: indices.to_vec(),
            status,
            detail,
        }
    }
}

/// Summary counts over a record list: (pass, fail, skipped, flagged).
pub fn summarize(records: &[Record]) -> (usize, usize, usize, usize) {
    let mut pass = 0;
    let mut fail = 0;
    let mut skip = 0;
    let mut flag = 0;
    for r in records {
        match r.status {
            Status::Pass => pass += 1,
            Status::Fail => fail += 1,
            Status::Skipped => skip += 1,
            Status::Flagged => flag += 1,
        }
    }
    (pass, fail, skip, flag)
}

/// True when no record failed.
pub fn all_green(records: &[Record]) -> bool {
    records.iter().all(|r| r.status != Status::Fail)
}
