use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::emit::ResultRow;
use super::run::{run_scenario, Report};
use super::scenario::{Profile, Scenario};
use crate::error::{Error, Result};
use crate::huncc::{Cryptosystem, HunccSpec};

/// A grid of GE alphas against cryptosystems, each cell run once per seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub alphas: Vec<f64>,
    pub schemes: Vec<Cryptosystem>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub profile: Profile,
}

impl SweepSpec {
    /// HUNCC against full AES-ECB and AES-CTR encryption.
    pub fn table1(profile: Profile) -> Self {
        SweepSpec {
            alphas: profile.sweep_alphas(),
            schemes: vec![
                Cryptosystem::Huncc(HunccSpec::default()),
                Cryptosystem::Aes128Ecb,
                Cryptosystem::Aes128Ctr,
            ],
            seeds: vec![0],
            profile,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidScenario(m.to_string()));
        if self.alphas.is_empty() || self.schemes.is_empty() || self.seeds.is_empty() {
            return bad("sweep needs at least one alpha, scheme and seed");
        }
        if !self.alphas.iter().all(|&a| a > 0.0 && a <= 0.5) {
            return bad("sweep alphas must lie in (0, 0.5]");
        }
        if !self.alphas.windows(2).all(|w| w[0] < w[1]) {
            return bad("sweep alphas must be strictly increasing");
        }
        Ok(())
    }

    /// Cells in row-major (alpha, scheme, seed) order.
    pub fn cells(&self) -> Result<Vec<Scenario>> {
        self.validate()?;
        let mut out = vec![];
        for &alpha in &self.alphas {
            for &scheme in &self.schemes {
                for &seed in &self.seeds {
                    out.push(Scenario::sweep_cell(alpha, scheme, self.profile)?.with_seed(seed));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug)]
pub struct CellFailure {
    pub scenario: String,
    pub seed: u64,
    pub error: Error,
}

/// Completed cells in grid order plus the cells that failed.
#[derive(Debug, Default)]
pub struct SweepResult {
    pub reports: Vec<Report>,
    pub failures: Vec<CellFailure>,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<ResultRow> {
        self.reports.iter().map(ResultRow::from).collect()
    }

    /// Mean estimate over seeds for one `(alpha, scheme)` cell.
    pub fn mean(&self, alpha: f64, scheme: &str) -> Option<f64> {
        let v: Vec<f64> = self
            .reports
            .iter()
            .filter(|r| r.config_echo.source.alpha() == Some(alpha) && r.config_echo.scheme.name() == scheme)
            .map(|r| r.final_mi_nats)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs every cell of `spec` on a pool of `jobs` worker threads. A failing
/// cell is recorded and the rest still run; results do not depend on `jobs`.
pub fn sweep_alpha(spec: &SweepSpec, jobs: usize) -> Result<SweepResult> {
    let cells = spec.cells()?;
    run_all(&cells, jobs)
}

pub(crate) fn run_all(cells: &[Scenario], jobs: usize) -> Result<SweepResult> {
    if jobs == 0 {
        return Err(Error::InvalidParam("need at least one job".into()));
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Report>>>> = Mutex::new((0..cells.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(cells.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                let out = run_scenario(cell);
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    let mut result = SweepResult::default();
    for (cell, slot) in cells.iter().zip(slots.into_inner().unwrap()) {
        match slot.expect("every cell ran") {
            Ok(r) => result.reports.push(r),
            Err(error) => result.failures.push(CellFailure {
                scenario: cell.name.clone(),
                seed: cell.seed,
                error,
            }),
        }
    }
    Ok(result)
}
