//! Binary model checkpoints.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! "MINE"            4 bytes
//! version           u16 (= 1)
//! layer count L     u32
//! widths            (L + 1) × u32, input first
//! per layer         weights row-major (fan_in × fan_out) f64, then biases f64
//! ```

use std::io::{Read, Write};

use ndarray::{Array1, Array2};

use super::mlp::{Dense, MlpParams};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"MINE";
pub const VERSION: u16 = 1;

pub fn write_checkpoint<W: Write>(params: &MlpParams, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(params.layers.len() as u32).to_le_bytes())?;
    for d in params.dims() {
        w.write_all(&(d as u32).to_le_bytes())?;
    }
    for v in params.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64s<R: Read>(r: &mut R, n: usize) -> Result<Vec<f64>> {
    let mut buf = vec![0u8; n * 8];
    r.read_exact(&mut buf)?;
    Ok(buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<MlpParams> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a MINE checkpoint".into()));
    }
    let mut v = [0u8; 2];
    r.read_exact(&mut v)?;
    let version = u16::from_le_bytes(v);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let n_layers = read_u32(&mut r)? as usize;
    if n_layers == 0 || n_layers > 64 {
        return Err(Error::Format(format!("implausible layer count {n_layers}")));
    }
    let dims = (0..=n_layers)
        .map(|_| read_u32(&mut r).map(|d| d as usize))
        .collect::<Result<Vec<_>>>()?;
    if dims.iter().any(|&d| d == 0 || d > 1 << 20) {
        return Err(Error::Format(format!("implausible widths {dims:?}")));
    }
    let mut layers = Vec::with_capacity(n_layers);
    for d in dims.windows(2) {
        let w = Array2::from_shape_vec((d[0], d[1]), read_f64s(&mut r, d[0] * d[1])?)
            .map_err(|e| Error::Format(e.to_string()))?;
        let b = Array1::from(read_f64s(&mut r, d[1])?);
        layers.push(Dense { w, b });
    }
    Ok(MlpParams { layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn roundtrip_and_header() {
        let p = MlpParams::init(&[6, 5, 4, 1], &mut seed::stream(1, "ckpt", 0)).unwrap();
        let mut buf = vec![];
        write_checkpoint(&p, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"MINE");
        assert_eq!(u16::from_le_bytes([buf[4], buf[5]]), 1);
        assert_eq!(buf.len(), 4 + 2 + 4 + 4 * 4 + 8 * p.num_params());
        assert_eq!(read_checkpoint(&buf[..]).unwrap(), p);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_checkpoint(&b"MINX\x01\x00"[..]).is_err());
        assert!(read_checkpoint(&b"MINE\x02\x00\x01\x00\x00\x00"[..]).is_err());
        let p = MlpParams::zeros(&[2, 1]).unwrap();
        let mut buf = vec![];
        write_checkpoint(&p, &mut buf).unwrap();
        buf.pop();
        assert!(read_checkpoint(&buf[..]).is_err());
    }
}
