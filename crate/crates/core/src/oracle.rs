//! Exact mutual information on small discrete alphabets.
//!
//! This is the ground truth the neural estimator is checked against. All
//! quantities are in nats; cells with zero probability contribute nothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Largest `nx * ny` accepted by [`plugin_mi_from_samples`].
pub const MAX_JOINT_CELLS: usize = 1 << 16;

/// Joint probability table `p[i][j] = P(X = i, Y = j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    p: Vec<Vec<f64>>,
}

impl JointTable {
    pub fn new(p: Vec<Vec<f64>>) -> Result<Self> {
        let ny = p.first().map_or(0, Vec::len);
        if p.is_empty() || ny == 0 {
            return Err(Error::InvalidTable("table is empty".into()));
        }
        if p.iter().any(|r| r.len() != ny) {
            return Err(Error::InvalidTable("rows have different lengths".into()));
        }
        let mut sum = 0.0;
        for &v in p.iter().flatten() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidTable(format!("bad probability {v}")));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidTable(format!("probabilities sum to {sum}")));
        }
        Ok(JointTable { p })
    }

    /// Normalizes nonnegative counts into a table.
    pub fn from_counts(counts: &[Vec<u64>]) -> Result<Self> {
        let total: u64 = counts.iter().flatten().sum();
        if total == 0 {
            return Err(Error::InvalidTable("no counts".into()));
        }
        let p = counts
            .iter()
            .map(|r| r.iter().map(|&c| c as f64 / total as f64).collect())
            .collect();
        // normalization by division can leave the sum a few ulps off
        let t = JointTable { p };
        t.check_shape()?;
        Ok(t)
    }

    /// The table of two independent variables with the given marginals.
    pub fn product(px: &[f64], py: &[f64]) -> Result<Self> {
        JointTable::new(
            px.iter()
                .map(|a| py.iter().map(|b| a * b).collect())
                .collect(),
        )
    }

    fn check_shape(&self) -> Result<()> {
        let ny = self.ny();
        if self.p.is_empty() || ny == 0 || self.p.iter().any(|r| r.len() != ny) {
            return Err(Error::InvalidTable("bad shape".into()));
        }
        Ok(())
    }

    pub fn nx(&self) -> usize {
        self.p.len()
    }

    pub fn ny(&self) -> usize {
        self.p.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i][j]
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.p.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.ny())
            .map(|j| self.p.iter().map(|r| r[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> JointTable {
        JointTable {
            p: (0..self.ny())
                .map(|j| self.p.iter().map(|r| r[j]).collect())
                .collect(),
        }
    }
}

/// Entropy (nats) of a probability vector.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum()
}

/// `I(X;Y) = Σ p_ij ln(p_ij / (p_i· p_·j))`.
pub fn exact_mi(t: &JointTable) -> f64 {
    let px = t.marginal_x();
    let py = t.marginal_y();
    let mut mi = 0.0;
    for (i, row) in t.p.iter().enumerate() {
        for (j, &pij) in row.iter().enumerate() {
            if pij > 0.0 {
                mi += pij * (pij / (px[i] * py[j])).ln();
            }
        }
    }
    mi.max(0.0)
}

/// Plug-in MI of paired symbol sequences.
pub fn plugin_mi_from_samples(xs: &[u32], ys: &[u32]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension(format!(
            "{} x-symbols vs {} y-symbols",
            xs.len(),
            ys.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let nx = *xs.iter().max().unwrap() as usize + 1;
    let ny = *ys.iter().max().unwrap() as usize + 1;
    if nx.saturating_mul(ny) > MAX_JOINT_CELLS {
        return Err(Error::InvalidParam(format!(
            "alphabets {nx}x{ny} exceed {MAX_JOINT_CELLS} joint cells"
        )));
    }
    let mut counts = vec![vec![0u64; ny]; nx];
    for (&x, &y) in xs.iter().zip(ys) {
        counts[x as usize][y as usize] += 1;
    }
    Ok(exact_mi(&JointTable::from_counts(&counts)?))
}

/// First-order bias of the plug-in MI under independence:
/// `(nx - 1)(ny - 1) / (2n)`.
pub fn miller_madow_bias(nx: usize, ny: usize, n: usize) -> f64 {
    (nx as f64 - 1.0) * (ny as f64 - 1.0) / (2.0 * n as f64)
}
