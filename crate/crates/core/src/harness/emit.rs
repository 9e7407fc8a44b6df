use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::run::Report;
use crate::error::Result;

/// One line of a results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario: String,
    pub alpha: Option<f64>,
    pub scheme: String,
    pub final_mi_nats: f64,
    pub seed: u64,
    pub n_samples: usize,
    pub epochs: usize,
}

impl From<&Report> for ResultRow {
    fn from(r: &Report) -> Self {
        let s = &r.config_echo;
        ResultRow {
            scenario: r.scenario.clone(),
            alpha: s.source.alpha(),
            scheme: s.scheme.name().to_string(),
            final_mi_nats: r.final_mi_nats,
            seed: s.seed,
            n_samples: s.n_samples,
            epochs: s.mine.epochs,
        }
    }
}

const HEADER: [&str; 7] = ["scenario", "alpha", "scheme", "final_mi_nats", "seed", "n_samples", "epochs"];

/// CSV with a fixed column order; an empty table still gets its header.
pub fn write_rows_csv<W: Write>(rows: &[ResultRow], w: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(HEADER)?;
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_rows_json<W: Write>(rows: &[ResultRow], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, rows)?;
    Ok(())
}

pub fn read_rows_json<R: Read>(r: R) -> Result<Vec<ResultRow>> {
    Ok(serde_json::from_reader(r)?)
}
