//! Arithmetic and linear algebra over GF(2^8).
//!
//! Elements are polynomials over GF(2) reduced modulo the AES polynomial
//! x^8 + x^4 + x^3 + x + 1 (0x11B). Addition is XOR. Multiplication goes
//! through a 256×256 product table built once from shift-and-reduce.
//!
//! Matrices are dense and row-major. They carry the random linear network
//! code used by [`crate::huncc`]: `n` messages of `L` bytes form an `n×L`
//! matrix and the coded links are `G · messages`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::sync::LazyLock;

use rand::Rng;

use crate::error::{Error, Result};

/// Low byte of the reduction polynomial 0x11B.
const REDUCTION: u8 = 0x1B;

/// Attempts before [`Gf256Matrix::random_invertible`] gives up.
pub const MAX_REJECTION_ATTEMPTS: usize = 1000;

fn mul_shift_reduce(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        let carry = a & 0x80;
        a <<= 1;
        if carry != 0 {
            a ^= REDUCTION;
        }
        b >>= 1;
    }
    acc
}

static MUL_TABLE: LazyLock<Box<[[u8; 256]; 256]>> = LazyLock::new(|| {
    let mut t = Box::new([[0u8; 256]; 256]);
    for a in 0..256 {
        for b in 0..256 {
            t[a][b] = mul_shift_reduce(a as u8, b as u8);
        }
    }
    t
});

static INV_TABLE: LazyLock<[u8; 256]> = LazyLock::new(|| {
    let mut inv = [0u8; 256];
    for a in 1..256usize {
        // a^254 = a^-1 in the multiplicative group of order 255
        let mut r = 1u8;
        let mut base = a as u8;
        let mut e = 254u32;
        while e > 0 {
            if e & 1 == 1 {
                r = MUL_TABLE[r as usize][base as usize];
            }
            base = MUL_TABLE[base as usize][base as usize];
            e >>= 1;
        }
        inv[a] = r;
    }
    inv
});

/// Field product.
#[inline]
pub fn gf_mul(a: u8, b: u8) -> u8 {
    MUL_TABLE[a as usize][b as usize]
}

/// Multiplicative inverse; zero has none.
pub fn gf_inv(a: u8) -> Result<u8> {
    if a == 0 {
        return Err(Error::NoInverse);
    }
    Ok(INV_TABLE[a as usize])
}

/// Row of the product table for a fixed left operand.
#[inline]
pub(crate) fn mul_row(a: u8) -> &'static [u8; 256] {
    &MUL_TABLE[a as usize]
}

/// An element of GF(2^8).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
#[repr(transparent)]
pub struct Gf256(pub u8);

impl Gf256 {
    pub const ZERO: Gf256 = Gf256(0);
    pub const ONE: Gf256 = Gf256(1);

    pub fn inv(self) -> Result<Gf256> {
        gf_inv(self.0).map(Gf256)
    }
}

impl fmt::Debug for Gf256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#04x}", self.0)
    }
}

impl Add for Gf256 {
    type Output = Gf256;
    fn add(self, rhs: Gf256) -> Gf256 {
        Gf256(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf256 {
    fn add_assign(&mut self, rhs: Gf256) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf256 {
    type Output = Gf256;
    fn mul(self, rhs: Gf256) -> Gf256 {
        Gf256(gf_mul(self.0, rhs.0))
    }
}

/// Dense row-major matrix over GF(2^8).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf256Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl fmt::Debug for Gf256Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf256Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", hex::encode(self.row(r)))?;
        }
        write!(f, "]")
    }
}

impl Gf256Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf256Matrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major bytes.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Gf256Matrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "ragged rows: {} vs {cols}",
                    r.len()
                )));
            }
            entries.extend_from_slice(r);
        }
        Ok(Gf256Matrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Gf256 {
        Gf256(self.entries[r * self.cols + c])
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gf256) {
        self.entries[r * self.cols + c] = v.0;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.entries
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.entries
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Gf256Matrix) -> Result<Gf256Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Gf256Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let table = mul_row(a);
                let src = rhs.row(k);
                let dst = &mut out.entries[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d ^= table[s as usize];
                }
            }
        }
        Ok(out)
    }

    /// Inverse by Gauss-Jordan elimination. The pivot for each column is the
    /// first nonzero entry at or below the diagonal.
    pub fn inverse(&self) -> Result<Gf256Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Gf256Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a.entries[r * n + col] != 0)
                .ok_or(Error::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = gf_inv(a.entries[col * n + col])?;
            a.scale_row(col, scale);
            inv.scale_row(col, scale);
            for r in 0..n {
                let factor = a.entries[r * n + col];
                if r != col && factor != 0 {
                    a.add_scaled_row(r, col, factor);
                    inv.add_scaled_row(r, col, factor);
                }
            }
        }
        Ok(inv)
    }

    /// Draws uniform `n×n` matrices until one is invertible.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Gf256Matrix> {
        if n == 0 {
            return Err(Error::InvalidParam("matrix size must be at least 1".into()));
        }
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            let mut entries = vec![0u8; n * n];
            rng.fill(&mut entries[..]);
            let m = Gf256Matrix {
                rows: n,
                cols: n,
                entries,
            };
            if m.inverse().is_ok() {
                return Ok(m);
            }
        }
        Err(Error::RejectionExhausted(MAX_REJECTION_ATTEMPTS))
    }

    pub fn transpose(&self) -> Gf256Matrix {
        let mut t = Gf256Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: u8) {
        let table = mul_row(s);
        for v in self.row_mut(r) {
            *v = table[*v as usize];
        }
    }

    /// row[dst] += factor · row[src]
    fn add_scaled_row(&mut self, dst: usize, src: usize, factor: u8) {
        let table = mul_row(factor);
        let cols = self.cols;
        for c in 0..cols {
            let s = self.entries[src * cols + c];
            self.entries[dst * cols + c] ^= table[s as usize];
        }
    }
}

/// Codes `n` messages (rows of an `n×L` matrix) with generator `g`: `g · messages`.
/// Column `j` of the result mixes byte `j` of every message.
pub fn rlnc_encode(messages: &Gf256Matrix, g: &Gf256Matrix) -> Result<Gf256Matrix> {
    if !g.is_square() || g.cols() != messages.rows() {
        return Err(Error::Dimension(format!(
            "generator {}x{} does not fit {} messages",
            g.rows(),
            g.cols(),
            messages.rows()
        )));
    }
    g.mul(messages)
}

/// Recovers the messages from coded links: `g⁻¹ · coded`.
pub fn rlnc_decode(coded: &Gf256Matrix, g: &Gf256Matrix) -> Result<Gf256Matrix> {
    g.inverse()?.mul(coded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use proptest::prelude::*;
    use rand::Rng;

    /// Carry-less 8x8 product followed by polynomial long division by 0x11B.
    /// Independent from the table path.
    fn oracle_mul(a: u8, b: u8) -> u8 {
        let mut wide = 0u16;
        for i in 0..8 {
            if (b >> i) & 1 == 1 {
                wide ^= (a as u16) << i;
            }
        }
        for bit in (8..16).rev() {
            if (wide >> bit) & 1 == 1 {
                wide ^= 0x11B << (bit - 8);
            }
        }
        wide as u8
    }

    #[test]
    fn mul_examples() {
        assert_eq!(gf_mul(0x57, 0x01), 0x57);
        assert_eq!(gf_mul(0x00, 0xAB), 0x00);
        assert_eq!(oracle_mul(0x57, 0x83), 0xC1);
        assert_eq!(gf_mul(0x57, 0x83), 0xC1);
    }

    #[test]
    fn table_matches_oracle_everywhere() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(gf_mul(a, b), oracle_mul(a, b), "{a:#x}*{b:#x}");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(gf_inv(1).unwrap(), 1);
        let by_search = (1..=255u8).find(|&c| oracle_mul(2, c) == 1).unwrap();
        assert_eq!(by_search, 0x8D);
        assert_eq!(gf_inv(2).unwrap(), 0x8D);
        assert!(matches!(gf_inv(0), Err(Error::NoInverse)));
        assert_eq!(Error::NoInverse.to_string(), "no inverse of zero");
    }

    #[test]
    fn inverse_sweep() {
        for a in 1..=255u8 {
            assert_eq!(gf_mul(a, gf_inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn small_product() {
        let a = Gf256Matrix::from_rows(&[[0x02, 0x01], [0x01, 0x01]]).unwrap();
        let b = Gf256Matrix::from_rows(&[[0x01], [0x03]]).unwrap();
        let expect = [
            oracle_mul(2, 1) ^ oracle_mul(1, 3),
            oracle_mul(1, 1) ^ oracle_mul(1, 3),
        ];
        let p = a.mul(&b).unwrap();
        assert_eq!(p.as_bytes(), &expect);
        assert_eq!(p.as_bytes(), &[0x01, 0x02]);
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = Gf256Matrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn identity_and_singular() {
        let i8 = Gf256Matrix::identity(8);
        assert_eq!(i8.inverse().unwrap(), i8);
        let mut rng = seed::stream(1, "test", 0);
        let mut m = Gf256Matrix::zeros(8, 5);
        rng.fill(m.row_mut(0));
        assert_eq!(i8.mul(&m).unwrap(), m);
        assert!(matches!(
            Gf256Matrix::zeros(4, 4).inverse(),
            Err(Error::Singular)
        ));
        assert!(Gf256Matrix::zeros(2, 3).inverse().is_err());
    }

    #[test]
    fn random_invertible_properties() {
        let m1 = Gf256Matrix::random_invertible(1, &mut seed::stream(3, "g", 0)).unwrap();
        assert_ne!(m1.get(0, 0), Gf256::ZERO);
        let a = Gf256Matrix::random_invertible(8, &mut seed::stream(3, "g", 1)).unwrap();
        let b = Gf256Matrix::random_invertible(8, &mut seed::stream(3, "g", 1)).unwrap();
        assert_eq!(a, b);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Gf256Matrix::identity(8));
        assert_eq!(inv.mul(&a).unwrap(), Gf256Matrix::identity(8));
        assert!(Gf256Matrix::random_invertible(0, &mut seed::stream(3, "g", 1)).is_err());
    }

    #[test]
    fn rlnc_xor_combination() {
        let g = Gf256Matrix::from_rows(&[[1, 1], [0, 1]]).unwrap();
        let m = Gf256Matrix::from_rows(&[[0x0F], [0xF0]]).unwrap();
        let coded = rlnc_encode(&m, &g).unwrap();
        assert_eq!(coded.as_bytes(), &[0x0F ^ 0xF0, 0xF0]);
        assert_eq!(rlnc_decode(&coded, &g).unwrap(), m);
        assert_eq!(rlnc_encode(&m, &Gf256Matrix::identity(2)).unwrap(), m);
        assert!(rlnc_encode(&m, &Gf256Matrix::identity(3)).is_err());
    }

    proptest! {
        #[test]
        fn field_laws(a: u8, b: u8, c: u8) {
            prop_assert_eq!(gf_mul(a, gf_mul(b, c)), gf_mul(gf_mul(a, b), c));
            prop_assert_eq!(gf_mul(a, b ^ c), gf_mul(a, b) ^ gf_mul(a, c));
            prop_assert_eq!(gf_mul(a, b), gf_mul(b, a));
        }

        #[test]
        fn rlnc_roundtrip(seed: u64, n in 1usize..9, len in 1usize..40) {
            let mut rng = seed::stream(seed, "prop", 0);
            let g = Gf256Matrix::random_invertible(n, &mut rng).unwrap();
            let mut bytes = vec![0u8; n * len];
            rng.fill(&mut bytes[..]);
            let m = Gf256Matrix::from_vec(n, len, bytes).unwrap();
            let coded = rlnc_encode(&m, &g).unwrap();
            prop_assert_eq!(rlnc_decode(&coded, &g).unwrap(), m);
        }
    }
}
