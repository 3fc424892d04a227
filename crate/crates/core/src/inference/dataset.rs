use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error};
use crate::Result;

/// One failure-time observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub time: f64,
    pub observed: bool,
}

impl Record {
    pub fn observed(time: f64) -> Self {
        Self {
            time,
            observed: true,
        }
    }

    pub fn censored(time: f64) -> Self {
        Self {
            time,
            observed: false,
        }
    }
}

/// How censored records are timed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Censoring {
    /// No horizon known; censored records cannot enter a likelihood.
    Unset,
    /// Every censored record is censored at this common `tau`.
    Common(f64),
    /// Each censored record carries its own censoring time.
    PerRecord,
}

/// Failure and censoring times.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<Record>,
    censoring: Censoring,
}

fn check_record(row: usize, r: &Record) -> Result<()> {
    if r.time > 0.0 && r.time.is_finite() {
        Ok(())
    } else {
        Err(Error::Parse {
            row,
            message: format!("time must be finite and > 0, got {}", r.time),
        })
    }
}

impl Dataset {
    /// Records with an optional common censoring horizon. With `tau` set,
    /// censored records are moved to `tau` and observed times may not
    /// exceed it.
    pub fn new(records: Vec<Record>, tau: Option<f64>) -> Result<Self> {
        if records.is_empty() {
            return domain("dataset must contain at least one record");
        }
        for (i, r) in records.iter().enumerate() {
            check_record(i + 1, r)?;
        }
        let censoring = match tau {
            None => Censoring::Unset,
            Some(tau) => {
                if !(tau > 0.0 && tau.is_finite()) {
                    return domain(format!("censoring horizon tau must be positive, got {tau}"));
                }
                if let Some(r) = records.iter().find(|r| r.observed && r.time > tau) {
                    return Err(Error::Config(format!(
                        "observed time {} exceeds the censoring horizon {tau}",
                        r.time
                    )));
                }
                Censoring::Common(tau)
            }
        };
        let records = records
            .into_iter()
            .map(|r| match (r.observed, tau) {
                (false, Some(tau)) => Record::censored(tau),
                _ => r,
            })
            .collect();
        Ok(Self { records, censoring })
    }

    /// Records whose censored entries each carry their own censoring time.
    pub fn with_censoring_times(records: Vec<Record>) -> Result<Self> {
        if records.is_empty() {
            return domain("dataset must contain at least one record");
        }
        for (i, r) in records.iter().enumerate() {
            check_record(i + 1, r)?;
        }
        Ok(Self {
            records,
            censoring: Censoring::PerRecord,
        })
    }

    pub(crate) fn from_simulation(records: Vec<Record>, tau: Option<f64>) -> Result<Self> {
        Self::new(records, tau)
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn censoring(&self) -> Censoring {
        self.censoring
    }

    pub fn tau(&self) -> Option<f64> {
        match self.censoring {
            Censoring::Common(tau) => Some(tau),
            _ => None,
        }
    }

    pub fn n(&self) -> usize {
        self.records.len()
    }

    pub fn n_observed(&self) -> usize {
        self.records.iter().filter(|r| r.observed).count()
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time).collect()
    }

    /// Concatenate two datasets with the same censoring scheme.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        if self.censoring != other.censoring {
            return Err(Error::Config(
                "cannot concatenate datasets with different censoring".into(),
            ));
        }
        let mut records = self.records.clone();
        records.extend_from_slice(&other.records);
        Ok(Dataset {
            records,
            censoring: self.censoring,
        })
    }

    /// Parse `time,status` CSV (status 1 = observed, 0 = censored).
    pub fn from_csv_reader<R: Read>(reader: R, tau: Option<f64>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "time" || &headers[1] != "status" {
            return Err(Error::Parse {
                row: 0,
                message: format!("expected header `time,status`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let row_no = i + 1;
            let row = row?;
            let parse_err = |message: String| Error::Parse {
                row: row_no,
                message,
            };
            if row.len() != 2 {
                return Err(parse_err(format!("expected 2 fields, got {}", row.len())));
            }
            let time: f64 = row[0]
                .parse()
                .map_err(|_| parse_err(format!("invalid time `{}`", &row[0])))?;
            let observed = match &row[1] {
                "1" => true,
                "0" => false,
                s => return Err(parse_err(format!("status must be 0 or 1, got `{s}`"))),
            };
            let record = Record { time, observed };
            check_record(row_no, &record)?;
            records.push(record);
        }
        if records.is_empty() {
            return Err(Error::Parse {
                row: 0,
                message: "dataset has no rows".into(),
            });
        }
        Self::new(records, tau)
    }

    pub fn from_csv_path(path: &Path, tau: Option<f64>) -> Result<Self> {
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_reader(file, tau)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "time,status")?;
        for r in &self.records {
            writeln!(out, "{},{}", r.time, u8::from(r.observed))?;
        }
        Ok(())
    }
}
