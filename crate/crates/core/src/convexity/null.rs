use std::fs;
use std::path::{Path, PathBuf};

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{statistic_of, NodeConvention};
use crate::error::{Error, Result};
use crate::reference::ReferenceTransform;

/// Minimum number of Monte Carlo runs for a null table.
pub const MIN_RUNS: usize = 500;

/// Simulated null law of the statistic, drawn from the reference
/// distribution itself. `values` are sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullDistribution {
    pub transform: ReferenceTransform,
    pub convention: NodeConvention,
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    pub values: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheRow {
    kind: ReferenceTransform,
    convention: NodeConvention,
    n: usize,
    runs: usize,
    seed: u64,
    statistic: f64,
}

impl NullDistribution {
    /// Runs `runs` replicates in parallel. Replicate `r` draws from its own
    /// ChaCha stream `r` under `seed`, so the table does not depend on the
    /// number of worker threads.
    pub fn simulate(
        transform: ReferenceTransform,
        convention: NodeConvention,
        n: usize,
        runs: usize,
        seed: u64,
    ) -> Result<Self> {
        super::check_transform(transform)?;
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "null tables need n >= 3, got {n}"
            )));
        }
        if runs < MIN_RUNS {
            return Err(Error::InvalidArgument(format!(
                "null tables need at least {MIN_RUNS} runs, got {runs}"
            )));
        }
        Self::simulate_low_precision(transform, convention, n, runs, seed)
    }

    /// As [`simulate`](Self::simulate) but accepting any positive number
    /// of runs. Tables below [`MIN_RUNS`] are for exploration only.
    pub fn simulate_low_precision(
        transform: ReferenceTransform,
        convention: NodeConvention,
        n: usize,
        runs: usize,
        seed: u64,
    ) -> Result<Self> {
        super::check_transform(transform)?;
        if n < 3 || runs == 0 {
            return Err(Error::InvalidArgument(format!(
                "null tables need n >= 3 and runs >= 1, got n={n}, runs={runs}"
            )));
        }
        let mut values: Vec<f64> = (0..runs as u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r);
                let mut xs: Vec<f64> = (0..n)
                    .map(|_| transform.quantile(rng.sample(Open01)))
                    .collect();
                xs.sort_by(f64::total_cmp);
                statistic_of(xs, transform, convention)
            })
            .collect::<Result<_>>()?;
        values.sort_by(f64::total_cmp);
        Ok(Self {
            transform,
            convention,
            n,
            runs,
            seed,
            values,
        })
    }

    /// Empirical quantile: the smallest table value v with
    /// #{values ≤ v} ≥ p·runs.
    pub fn quantile(&self, p: f64) -> f64 {
        let k = ((p * self.runs as f64).ceil() as usize).clamp(1, self.runs);
        self.values[k - 1]
    }

    /// (#{values ≥ statistic} + 1) / (runs + 1).
    pub fn p_value(&self, statistic: f64) -> f64 {
        let below = self.values.partition_point(|&v| v < statistic);
        (self.runs - below + 1) as f64 / (self.runs + 1) as f64
    }

    fn cache_file(
        dir: &Path,
        transform: ReferenceTransform,
        convention: NodeConvention,
        n: usize,
        runs: usize,
        seed: u64,
    ) -> PathBuf {
        dir.join(format!(
            "null_{}_{}_n{n}_r{runs}_s{seed}.csv",
            transform.name(),
            convention.name()
        ))
    }

    /// Writes the table as CSV, one row per statistic value.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for &statistic in &self.values {
            w.serialize(CacheRow {
                kind: self.transform,
                convention: self.convention,
                n: self.n,
                runs: self.runs,
                seed: self.seed,
                statistic,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let mut rows = rdr.deserialize::<CacheRow>();
        let first: CacheRow = rows
            .next()
            .ok_or_else(|| Error::InvalidArgument(format!("{} is empty", path.display())))??;
        let mut values = vec![first.statistic];
        for row in rows {
            let row = row?;
            if (row.kind, row.convention, row.n, row.runs, row.seed)
                != (
                    first.kind,
                    first.convention,
                    first.n,
                    first.runs,
                    first.seed,
                )
            {
                return Err(Error::InvalidArgument(format!(
                    "{} mixes several tables",
                    path.display()
                )));
            }
            values.push(row.statistic);
        }
        if values.len() != first.runs || values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!(
                "{}: expected {} sorted values, found {}",
                path.display(),
                first.runs,
                values.len()
            )));
        }
        Ok(Self {
            transform: first.kind,
            convention: first.convention,
            n: first.n,
            runs: first.runs,
            seed: first.seed,
            values,
        })
    }

    /// Loads the exact-key table from `dir`, simulating and storing it when
    /// absent.
    pub fn load_or_simulate(
        dir: &Path,
        transform: ReferenceTransform,
        convention: NodeConvention,
        n: usize,
        runs: usize,
        seed: u64,
    ) -> Result<Self> {
        let path = Self::cache_file(dir, transform, convention, n, runs, seed);
        if path.exists() {
            match Self::read_csv(&path) {
                Ok(t) => return Ok(t),
                Err(e) => log::warn!("ignoring unreadable cache {}: {e}", path.display()),
            }
        }
        let table = Self::simulate(transform, convention, n, runs, seed)?;
        fs::create_dir_all(dir)?;
        table.write_csv(&path)?;
        Ok(table)
    }
}
