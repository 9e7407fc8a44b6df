//! `.cmin` dataset files.
//!
//! ```text
//! "CMIN"   4 bytes
//! version  u16 LE (= 1)
//! N        u64 LE
//! Dx       u32 LE
//! Dy       u32 LE
//! N records of Dx plaintext bytes followed by Dy output bytes
//! ```

use std::io::{Read, Write};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mine::Dataset;

pub const MAGIC: &[u8; 4] = b"CMIN";
pub const VERSION: u16 = 1;

pub fn write_dataset<W: Write>(ds: &Dataset, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(ds.len() as u64).to_le_bytes())?;
    w.write_all(&(ds.dx() as u32).to_le_bytes())?;
    w.write_all(&(ds.dy() as u32).to_le_bytes())?;
    for i in 0..ds.len() {
        w.write_all(ds.x_row(i))?;
        w.write_all(ds.y_row(i))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset<R: Read>(mut r: R) -> Result<Dataset> {
    let mut header = [0u8; 22];
    r.read_exact(&mut header)?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("not a CMIN dataset".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported dataset version {version}")));
    }
    let n = u64::from_le_bytes(header[6..14].try_into().unwrap()) as usize;
    let dx = u32::from_le_bytes(header[14..18].try_into().unwrap()) as usize;
    let dy = u32::from_le_bytes(header[18..22].try_into().unwrap()) as usize;
    if dx == 0 || dy == 0 {
        return Err(Error::Format("zero-width samples".into()));
    }
    let mut ds = Dataset::with_capacity(dx, dy, n.min(1 << 24));
    let mut rec = vec![0u8; dx + dy];
    for _ in 0..n {
        r.read_exact(&mut rec)?;
        ds.push(&rec[..dx], &rec[dx..])?;
    }
    Ok(ds)
}

/// Hex SHA-256 of the dataset's file encoding.
pub fn dataset_digest(ds: &Dataset) -> String {
    let mut h = Sha256::new();
    let mut buf = Vec::with_capacity(22);
    write_dataset(&Dataset::new(ds.dx(), ds.dy(), vec![], vec![]).unwrap(), &mut buf).unwrap();
    buf[6..14].copy_from_slice(&(ds.len() as u64).to_le_bytes());
    h.update(&buf);
    for i in 0..ds.len() {
        h.update(ds.x_row(i));
        h.update(ds.y_row(i));
    }
    hex::encode(h.finalize())
}
