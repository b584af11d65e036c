//! CSV and gnuplot output for sweep results.
//!
//! The CSV layout is one header row `snr_db,n_symbols,rate_bits_per_cu,ber,fer,trials,seed`
//! followed by one row per point. Reals use the shortest representation that
//! parses back to the same value.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::Deserialize;

use super::sweep::{SweepPoint, SweepResult};
use crate::error::Result;

pub const CSV_HEADER: [&str; 7] = [
    "snr_db",
    "n_symbols",
    "rate_bits_per_cu",
    "ber",
    "fer",
    "trials",
    "seed",
];

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRecord {
    pub snr_db: f64,
    pub n_symbols: usize,
    pub rate_bits_per_cu: f64,
    pub ber: f64,
    pub fer: f64,
    pub trials: u64,
    pub seed: u64,
}

impl From<&SweepPoint> for CsvRecord {
    fn from(p: &SweepPoint) -> Self {
        CsvRecord {
            snr_db: p.snr_db,
            n_symbols: p.n_symbols,
            rate_bits_per_cu: p.rate_bits_per_cu,
            ber: p.ber,
            fer: p.fer,
            trials: p.trials,
            seed: p.seed,
        }
    }
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for p in &result.points {
        w.write_record([
            p.snr_db.to_string(),
            p.n_symbols.to_string(),
            p.rate_bits_per_cu.to_string(),
            p.ber.to_string(),
            p.fer.to_string(),
            p.trials.to_string(),
            p.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_csv(result, BufWriter::new(File::create(path)?))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRecord>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<CsvRecord>, _>>()?)
}

/// Whitespace-separated blocks, one per result, separated by two blank lines
/// so that gnuplot's `index` selects a result. Columns: rate, BER, FER,
/// SNR, capacity, reached (1/0), low-confidence (1/0).
pub fn write_gnuplot<W: Write>(results: &[SweepResult], mut out: W) -> Result<()> {
    for (i, r) in results.iter().enumerate() {
        if i > 0 {
            writeln!(out, "\n")?;
        }
        writeln!(out, "# index {i}: {}", r.label)?;
        writeln!(
            out,
            "# rate_bits_per_cu ber fer snr_db capacity reached low_confidence"
        )?;
        for p in &r.points {
            writeln!(
                out,
                "{} {} {} {} {} {} {}",
                p.rate_bits_per_cu,
                p.ber,
                p.fer,
                p.snr_db,
                p.capacity,
                u8::from(p.reached),
                u8::from(p.low_confidence)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn emit_gnuplot(results: &[SweepResult], path: &Path) -> Result<()> {
    write_gnuplot(results, BufWriter::new(File::create(path)?))
}
