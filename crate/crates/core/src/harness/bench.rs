use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::strategy::{digest, run_native, run_strategy, Strategy};
use super::workloads::Workload;
use crate::eval::EvalError;

/// One benchmark run: a workload instance under one strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub workload: Workload,
    pub size: usize,
    pub strategy: Strategy,
    pub fuel: u64,
    pub repetitions: usize,
}

/// Row of benchmark output. CSV and JSON carry exactly these fields, in
/// this order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub workload: Workload,
    pub size: usize,
    pub strategy: Strategy,
    /// `list` or `tree` for the ordered strategies, `n/a` otherwise.
    pub env_backend: String,
    pub median_ns: u64,
    pub steps: u64,
    pub peak_live_nodes: usize,
    /// Empty unless `status` is `ok`.
    pub digest: String,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    FuelExhausted,
    InvariantBreach,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{workload} size {size}: {first} and {second} disagree on the normal form")]
    DigestMismatch { workload: Workload, size: usize, first: Strategy, second: Strategy },
    #[error("size and repetitions must be at least 1, fuel at least 1")]
    InvalidConfig,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Computes the full normal form once, untimed, for the digest, step count
/// and peak live nodes; then times `repetitions` runs of the strategy up to
/// its native result (weak head value or β-normal form). Reading back and
/// naming are not timed.
pub fn run_bench(config: &BenchConfig) -> Result<BenchRecord, BenchError> {
    if config.size == 0 || config.repetitions == 0 || config.fuel == 0 {
        return Err(BenchError::InvalidConfig);
    }
    let term = config.workload.build(config.size);
    let mut record = BenchRecord {
        workload: config.workload,
        size: config.size,
        strategy: config.strategy,
        env_backend: config.strategy.backend().map_or("n/a".to_string(), |b| b.to_string()),
        median_ns: 0,
        steps: 0,
        peak_live_nodes: 0,
        digest: String::new(),
        status: Status::Ok,
    };
    match run_strategy(&term, config.strategy, config.fuel) {
        Ok(out) => {
            record.steps = out.steps;
            record.peak_live_nodes = out.peak_live_nodes;
            record.digest = digest(&out.normal_form);
        }
        Err(EvalError::FuelExhausted { steps }) => {
            record.steps = steps;
            record.status = Status::FuelExhausted;
            return Ok(record);
        }
        Err(EvalError::Invariant(_)) => {
            record.status = Status::InvariantBreach;
            return Ok(record);
        }
    }
    let mut times = Vec::with_capacity(config.repetitions);
    for _ in 0..config.repetitions {
        let start = Instant::now();
        let result = run_native(&term, config.strategy, config.fuel);
        times.push(u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX));
        if result.is_err() {
            record.status = Status::InvariantBreach;
            return Ok(record);
        }
    }
    times.sort_unstable();
    record.median_ns = times[times.len() / 2];
    Ok(record)
}

/// Benchmarks every strategy on every size, in that nesting order, and
/// refuses to return records if two strategies reached different normal
/// forms on the same instance.
pub fn run_comparison(
    workload: Workload,
    sizes: &[usize],
    strategies: &[Strategy],
    fuel: u64,
    repetitions: usize,
) -> Result<Vec<BenchRecord>, BenchError> {
    let mut records = Vec::new();
    for &size in sizes {
        let mut reference: Option<(Strategy, String)> = None;
        for &strategy in strategies {
            let record = run_bench(&BenchConfig { workload, size, strategy, fuel, repetitions })?;
            if record.status == Status::Ok {
                match &reference {
                    Some((first, d)) if *d != record.digest => {
                        return Err(BenchError::DigestMismatch { workload, size, first: *first, second: strategy })
                    }
                    Some(_) => {}
                    None => reference = Some((strategy, record.digest.clone())),
                }
            }
            records.push(record);
        }
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[BenchRecord], mut out: W) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}

pub const CSV_HEADER: &str = "workload,size,strategy,env_backend,median_ns,steps,peak_live_nodes,digest,status";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_is_fixed() {
        let recs = run_comparison(Workload::ChurchAdd, &[4], &Strategy::ALL, 100_000, 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains(",n/a,"));
    }

    #[test]
    fn csv_and_json_carry_the_same_rows() {
        let recs = run_comparison(Workload::CombinatorChain, &[3, 5], &Strategy::ALL, 100_000, 2).unwrap();
        let mut c = Vec::new();
        write_csv(&recs, &mut c).unwrap();
        let mut j = Vec::new();
        write_json(&recs, &mut j).unwrap();
        let from_csv: Vec<BenchRecord> =
            csv::Reader::from_reader(&c[..]).deserialize().collect::<Result<_, _>>().unwrap();
        let from_json: Vec<BenchRecord> = serde_json::from_slice(&j).unwrap();
        assert_eq!(from_csv, recs);
        assert_eq!(from_json, recs);
    }

    #[test]
    fn fuel_marks_record_failed() {
        let recs = run_comparison(Workload::ChurchExp, &[64], &Strategy::ALL, 10, 1).unwrap();
        assert!(recs.iter().all(|r| r.status == Status::FuelExhausted && r.digest.is_empty()));
    }

    #[test]
    fn ordered_backends_agree_on_steps() {
        let recs = run_comparison(Workload::ChurchMul, &[12], &[Strategy::OrderedList, Strategy::OrderedTree], 1_000_000, 1)
            .unwrap();
        assert_eq!(recs[0].steps, recs[1].steps);
        assert_eq!(recs[0].digest, recs[1].digest);
        assert_eq!(recs[0].env_backend, "list");
        assert_eq!(recs[1].env_backend, "tree");
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let cfg = BenchConfig {
            workload: Workload::ChurchAdd,
            size: 0,
            strategy: Strategy::Closures,
            fuel: 1,
            repetitions: 1,
        };
        assert!(matches!(run_bench(&cfg), Err(BenchError::InvalidConfig)));
    }
}
