//! Training loop: shuffle, iterate non-overlapping batches, ascend the
//! regularized objective, and record the unregularized estimate on a fixed
//! evaluation batch. By default the evaluation rows are excluded from
//! training, so memorized pairs do not count as dependence.

use std::io::Write;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::data::Dataset;
use super::mlp::MlpParams;
use super::objective::{backward_permuted, dv_objective_permuted, marginal_permutation, DvValue};
use super::optim::{Optimizer, OptimizerState};
use crate::error::{Error, Result};
use crate::seed;

/// Estimator hyperparameters. Defaults are the full-scale settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MineConfig {
    /// Expected `dx + dy`; checked against the dataset when set.
    pub input_dim: Option<usize>,
    pub hidden: [usize; 2],
    pub lr: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub reg_coeff: f64,
    pub optimizer: Optimizer,
    pub seed: u64,
    /// Epochs between trace points.
    pub eval_every: usize,
    /// Rows in the fixed evaluation batch; `None` uses `batch_size`.
    pub eval_batch_size: Option<usize>,
    /// Keep the evaluation rows out of training.
    pub held_out_eval: bool,
    pub ema_decay: f64,
}

impl Default for MineConfig {
    fn default() -> Self {
        MineConfig {
            input_dim: None,
            hidden: [100, 100],
            lr: 1e-4,
            batch_size: 10_000,
            epochs: 2000,
            reg_coeff: 0.1,
            optimizer: Optimizer::default(),
            seed: 0,
            eval_every: 1,
            eval_batch_size: None,
            held_out_eval: true,
            ema_decay: 0.9,
        }
    }
}

impl MineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if !(self.lr > 0.0) || !self.lr.is_finite() {
            return bad(format!("learning rate must be positive, got {}", self.lr));
        }
        if self.batch_size < 2 {
            return bad(format!("batch size must be at least 2, got {}", self.batch_size));
        }
        if !(self.reg_coeff >= 0.0) {
            return bad(format!("regularization must be nonnegative, got {}", self.reg_coeff));
        }
        if self.eval_every == 0 {
            return bad("eval_every must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.ema_decay) {
            return bad(format!("ema decay must lie in [0, 1), got {}", self.ema_decay));
        }
        if self.hidden.contains(&0) {
            return bad("hidden widths must be nonzero".into());
        }
        if self.eval_batch_size() < 2 {
            return bad("evaluation batch must have at least 2 rows".into());
        }
        Ok(())
    }

    pub fn eval_batch_size(&self) -> usize {
        self.eval_batch_size.unwrap_or(self.batch_size)
    }

    /// Smallest dataset this configuration can train on.
    pub fn min_samples(&self) -> usize {
        if self.held_out_eval {
            self.batch_size + self.eval_batch_size()
        } else {
            self.batch_size.max(self.eval_batch_size())
        }
    }

    /// `ln(eval batch)`, the most a DV estimate on that batch can credibly reach.
    pub fn ceiling_nats(&self) -> f64 {
        (self.eval_batch_size() as f64).ln()
    }
}

/// One evaluation point of a training run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub epoch: usize,
    pub raw_dv_nats: f64,
    pub ema_nats: f64,
    pub reg_term: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    pub records: Vec<TraceRecord>,
}

impl TrainTrace {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// EMA of the raw estimates over the final 10% of trace points (at least
    /// one), started at the first of them. `None` for an empty trace.
    pub fn final_estimate(&self, decay: f64) -> Option<f64> {
        let n = self.records.len();
        if n == 0 {
            return None;
        }
        let tail = (n / 10).max(1);
        let mut it = self.records[n - tail..].iter();
        let first = it.next()?.raw_dv_nats;
        Some(it.fold(first, |ema, r| decay * ema + (1.0 - decay) * r.raw_dv_nats))
    }

    /// CSV with header `epoch,raw_dv_nats,ema_nats,reg_term`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for r in &self.records {
            wtr.serialize(r)?;
        }
        if self.records.is_empty() {
            wtr.write_record(["epoch", "raw_dv_nats", "ema_nats", "reg_term"])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn tag_non_finite(e: Error, epoch: usize, batch: usize) -> Error {
    match e {
        Error::NonFinite { what, .. } => Error::NonFinite { epoch, batch, what },
        other => other,
    }
}

/// Trains the statistic network on `dataset` and returns it with its trace.
pub fn train(dataset: &Dataset, cfg: &MineConfig) -> Result<(MlpParams, TrainTrace)> {
    cfg.validate()?;
    if let Some(d) = cfg.input_dim {
        if d != dataset.input_dim() {
            return Err(Error::Dimension(format!(
                "configured input width {d}, dataset has {}",
                dataset.input_dim()
            )));
        }
    }
    if dataset.len() < cfg.min_samples() {
        return Err(Error::InvalidParam(format!(
            "{} samples cannot fill a batch of {} and an evaluation batch of {}",
            dataset.len(),
            cfg.batch_size,
            cfg.eval_batch_size()
        )));
    }
    let dims = [dataset.input_dim(), cfg.hidden[0], cfg.hidden[1], 1];
    let mut params = MlpParams::init(&dims, &mut seed::stream(cfg.seed, "mine/init", 0))?;
    let mut trace = TrainTrace::default();
    if cfg.epochs == 0 {
        return Ok((params, trace));
    }

    let mut opt = OptimizerState::new(cfg.optimizer, cfg.lr, &params);
    let mut shuffle_rng = seed::stream(cfg.seed, "mine/shuffle", 0);
    let mut marginal_rng = seed::stream(cfg.seed, "mine/marginal", 0);
    let mut eval_rng = seed::stream(cfg.seed, "mine/eval", 0);
    let eval_idx =
        index::sample(&mut seed::stream(cfg.seed, "mine/eval-batch", 0), dataset.len(), cfg.eval_batch_size())
            .into_vec();
    let eval_batch = dataset.batch(&eval_idx);

    let mut order: Vec<usize> = if cfg.held_out_eval {
        let mut in_eval = vec![false; dataset.len()];
        eval_idx.iter().for_each(|&i| in_eval[i] = true);
        (0..dataset.len()).filter(|&i| !in_eval[i]).collect()
    } else {
        (0..dataset.len()).collect()
    };
    let mut ema: Option<f64> = None;
    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut shuffle_rng);
        for (b, chunk) in order.chunks_exact(cfg.batch_size).enumerate() {
            let batch = dataset.batch(chunk);
            let perm = marginal_permutation(chunk.len(), &mut marginal_rng)?;
            let (_, grads) = backward_permuted(&params, &batch, &perm, cfg.reg_coeff)
                .map_err(|e| tag_non_finite(e, epoch, b))?;
            if !grads.is_finite() {
                return Err(Error::NonFinite {
                    epoch,
                    batch: b,
                    what: "gradient".into(),
                });
            }
            opt.ascend(&mut params, &grads);
            if !params.is_finite() {
                return Err(Error::NonFinite {
                    epoch,
                    batch: b,
                    what: "parameters".into(),
                });
            }
        }
        if epoch % cfg.eval_every == 0 || epoch == cfg.epochs {
            let perm = marginal_permutation(eval_batch.len(), &mut eval_rng)?;
            let v: DvValue = dv_objective_permuted(&params, &eval_batch, &perm, cfg.reg_coeff)
                .map_err(|e| tag_non_finite(e, epoch, 0))?;
            let smoothed = match ema {
                None => v.mi_nats,
                Some(prev) => cfg.ema_decay * prev + (1.0 - cfg.ema_decay) * v.mi_nats,
            };
            ema = Some(smoothed);
            trace.records.push(TraceRecord {
                epoch,
                raw_dv_nats: v.mi_nats,
                ema_nats: smoothed,
                reg_term: v.reg_term(cfg.reg_coeff),
            });
        }
    }
    Ok((params, trace))
}

/// Unregularized DV estimate on a random batch of `eval_batch_size` rows
/// against a random reshuffle of the same rows.
pub fn estimate_mi<R: Rng + ?Sized>(
    params: &MlpParams,
    dataset: &Dataset,
    eval_batch_size: usize,
    rng: &mut R,
) -> Result<f64> {
    if eval_batch_size > dataset.len() {
        return Err(Error::InvalidParam(format!(
            "evaluation batch {eval_batch_size} exceeds {} samples",
            dataset.len()
        )));
    }
    let idx = index::sample(rng, dataset.len(), eval_batch_size).into_vec();
    let batch = dataset.batch(&idx);
    let perm = marginal_permutation(batch.len(), rng)?;
    Ok(dv_objective_permuted(params, &batch, &perm, 0.0)?.mi_nats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    fn copy_dataset(n: usize, seed: u64) -> Dataset {
        let mut rng = seed::stream(seed, "train-test", 0);
        let mut d = Dataset::with_capacity(2, 2, n);
        for _ in 0..n {
            let mut x = [0u8; 2];
            rng.fill_bytes(&mut x);
            d.push(&x, &x).unwrap();
        }
        d
    }

    fn small_cfg() -> MineConfig {
        MineConfig {
            hidden: [16, 16],
            lr: 1e-2,
            batch_size: 100,
            epochs: 40,
            ..MineConfig::default()
        }
    }

    #[test]
    fn deterministic_and_learns_dependence() {
        let d = copy_dataset(600, 1);
        let (p1, t1) = train(&d, &small_cfg()).unwrap();
        let (p2, t2) = train(&d, &small_cfg()).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(t1, t2);
        assert_eq!(t1.records.len(), 40);
        let est = t1.final_estimate(0.9).unwrap();
        assert!(est > 1.0 && est <= 100f64.ln(), "{est}");
        let (_, t3) = train(&d, &MineConfig { seed: 1, ..small_cfg() }).unwrap();
        assert_ne!(t1, t3);
    }

    #[test]
    fn final_estimate_is_ema_of_last_tenth() {
        let records = (1..=20)
            .map(|e| TraceRecord {
                epoch: e,
                raw_dv_nats: e as f64,
                ema_nats: 0.0,
                reg_term: 0.0,
            })
            .collect();
        let t = TrainTrace { records };
        // last two points: 19 then 0.9·19 + 0.1·20
        assert!((t.final_estimate(0.9).unwrap() - 19.1).abs() < 1e-12);
        assert_eq!(TrainTrace::default().final_estimate(0.9), None);
    }

    #[test]
    fn size_and_parameter_checks() {
        let d = copy_dataset(150, 2);
        assert!(train(&d, &small_cfg()).is_err());
        let cfg = MineConfig { held_out_eval: false, ..small_cfg() };
        assert!(train(&d, &cfg).is_ok());
        assert!(train(&d, &MineConfig { batch_size: 1, ..small_cfg() }).is_err());
        assert!(train(&d, &MineConfig { input_dim: Some(5), ..cfg.clone() }).is_err());
        let (p, t) = train(&d, &MineConfig { epochs: 0, ..cfg }).unwrap();
        assert!(t.is_empty());
        assert_eq!(p.dims(), vec![4, 16, 16, 1]);
    }

    #[test]
    fn divergence_is_reported_with_its_epoch() {
        let d = copy_dataset(400, 3);
        let cfg = MineConfig {
            lr: 1e300,
            optimizer: Optimizer::Sgd,
            ..small_cfg()
        };
        match train(&d, &cfg) {
            Err(Error::NonFinite { epoch, .. }) => assert!(epoch >= 1),
            other => panic!("expected a non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn trace_csv_header() {
        let mut buf = vec![];
        TrainTrace::default().write_csv(&mut buf).unwrap();
        assert_eq!(buf, b"epoch,raw_dv_nats,ema_nats,reg_term\n");
        let (_, t) = train(&copy_dataset(300, 4), &MineConfig { epochs: 2, ..small_cfg() }).unwrap();
        let mut buf = vec![];
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("epoch,raw_dv_nats,ema_nats,reg_term\n1,"));
        assert_eq!(text.lines().count(), 3);
    }
}
