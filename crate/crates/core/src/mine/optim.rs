use ndarray::Zip;
use serde::{Deserialize, Serialize};

use super::mlp::MlpParams;

/// Update rule used for gradient ascent on the objective.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Optimizer {
    Sgd,
    Adam { beta1: f64, beta2: f64, eps: f64 },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

pub(crate) struct OptimizerState {
    kind: Optimizer,
    lr: f64,
    step: i32,
    m: MlpParams,
    v: MlpParams,
}

impl OptimizerState {
    pub fn new(kind: Optimizer, lr: f64, like: &MlpParams) -> Self {
        OptimizerState {
            kind,
            lr,
            step: 0,
            m: like.zeros_like(),
            v: like.zeros_like(),
        }
    }

    /// Moves `params` along `grads` (ascent).
    pub fn ascend(&mut self, params: &mut MlpParams, grads: &MlpParams) {
        self.step += 1;
        match self.kind {
            Optimizer::Sgd => params.add_scaled(grads, self.lr),
            Optimizer::Adam { beta1, beta2, eps } => {
                let c1 = 1.0 - beta1.powi(self.step);
                let c2 = 1.0 - beta2.powi(self.step);
                let lr = self.lr;
                let update = |p: &mut f64, &g: &f64, m: &mut f64, v: &mut f64| {
                    *m = beta1 * *m + (1.0 - beta1) * g;
                    *v = beta2 * *v + (1.0 - beta2) * g * g;
                    *p += lr * (*m / c1) / ((*v / c2).sqrt() + eps);
                };
                for (((p, g), m), v) in params
                    .layers
                    .iter_mut()
                    .zip(&grads.layers)
                    .zip(&mut self.m.layers)
                    .zip(&mut self.v.layers)
                {
                    Zip::from(&mut p.w).and(&g.w).and(&mut m.w).and(&mut v.w).for_each(update);
                    Zip::from(&mut p.b).and(&g.b).and(&mut m.b).and(&mut v.b).for_each(update);
                }
            }
        }
    }
}
