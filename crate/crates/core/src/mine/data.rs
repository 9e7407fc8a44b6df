use ndarray::Array2;

use super::objective::PairBatch;
use crate::error::{Error, Result};

/// `n` joint samples: row `i` of `x` (plaintext bytes) with row `i` of `y`
/// (observed output bytes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    n: usize,
    dx: usize,
    dy: usize,
    x: Vec<u8>,
    y: Vec<u8>,
}

impl Dataset {
    pub fn new(dx: usize, dy: usize, x: Vec<u8>, y: Vec<u8>) -> Result<Self> {
        if dx == 0 || dy == 0 {
            return Err(Error::Dimension("sample widths must be nonzero".into()));
        }
        if x.len() % dx != 0 || y.len() % dy != 0 || x.len() / dx != y.len() / dy {
            return Err(Error::Dimension(format!(
                "{} x bytes of width {dx} do not pair with {} y bytes of width {dy}",
                x.len(),
                y.len()
            )));
        }
        Ok(Dataset {
            n: x.len() / dx,
            dx,
            dy,
            x,
            y,
        })
    }

    pub fn with_capacity(dx: usize, dy: usize, n: usize) -> Self {
        Dataset {
            n: 0,
            dx,
            dy,
            x: Vec::with_capacity(n * dx),
            y: Vec::with_capacity(n * dy),
        }
    }

    pub fn push(&mut self, x: &[u8], y: &[u8]) -> Result<()> {
        if x.len() != self.dx || y.len() != self.dy {
            return Err(Error::Dimension(format!(
                "sample of widths ({}, {}) in a ({}, {}) dataset",
                x.len(),
                y.len(),
                self.dx,
                self.dy
            )));
        }
        self.x.extend_from_slice(x);
        self.y.extend_from_slice(y);
        self.n += 1;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    pub fn input_dim(&self) -> usize {
        self.dx + self.dy
    }

    pub fn x_row(&self, i: usize) -> &[u8] {
        &self.x[i * self.dx..(i + 1) * self.dx]
    }

    pub fn y_row(&self, i: usize) -> &[u8] {
        &self.y[i * self.dy..(i + 1) * self.dy]
    }

    pub fn x_bytes(&self) -> &[u8] {
        &self.x
    }

    pub fn y_bytes(&self) -> &[u8] {
        &self.y
    }

    /// Normalized rows at `indices`.
    pub fn batch(&self, indices: &[usize]) -> PairBatch {
        PairBatch {
            x: gather(&self.x, self.dx, indices),
            y: gather(&self.y, self.dy, indices),
        }
    }
}

fn gather(bytes: &[u8], width: usize, indices: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros((indices.len(), width));
    for (mut row, &i) in out.rows_mut().into_iter().zip(indices) {
        for (dst, &b) in row.iter_mut().zip(&bytes[i * width..(i + 1) * width]) {
            *dst = scale(b);
        }
    }
    out
}

#[inline]
fn scale(b: u8) -> f64 {
    b as f64 / 255.0
}

/// One input node per byte, scaled to `[0, 1]`.
pub fn normalize(bytes: &[u8]) -> Vec<f64> {
    bytes.iter().map(|&b| scale(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_endpoints() {
        let v = normalize(&[0x00, 0xFF, 0x80]);
        assert_eq!(v.len(), 3);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[1], 1.0);
        assert!((v[2] - 0.50196).abs() < 1e-5);
    }

    #[test]
    fn construction_and_batches() {
        let d = Dataset::new(2, 1, vec![1, 2, 3, 4], vec![9, 8]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.y_row(1), &[8]);
        let b = d.batch(&[1, 0]);
        assert_eq!(b.x[[0, 0]], 3.0 / 255.0);
        assert_eq!(b.y[[1, 0]], 9.0 / 255.0);
        assert!(Dataset::new(2, 1, vec![1, 2, 3], vec![9]).is_err());
        assert!(Dataset::new(2, 1, vec![1, 2], vec![9, 8]).is_err());
        let mut e = Dataset::with_capacity(2, 2, 4);
        e.push(&[1, 2], &[3, 4]).unwrap();
        assert!(e.push(&[1], &[3, 4]).is_err());
        assert_eq!(e.len(), 1);
    }
}
