//! Classic LZW over bytes.
//!
//! The dictionary starts with the 256 single-byte strings. Code `t` of the
//! output (0-based) is written with `max(9, bit_length(min(255 + t, 4095)))`
//! bits, which is exactly wide enough for every code that can exist when it
//! is emitted. The dictionary freezes at 4096 entries. Codes are packed
//! MSB-first and the last byte is zero-padded.

use std::collections::HashMap;

use crate::error::{Error, Result};

const MAX_ENTRIES: usize = 4096;
const MIN_WIDTH: u32 = 9;

fn code_width(t: usize) -> u32 {
    let top = (255 + t).min(MAX_ENTRIES - 1);
    (usize::BITS - top.leading_zeros()).max(MIN_WIDTH)
}

/// LZW codes before bit packing.
pub fn lzw_codes(data: &[u8]) -> Result<Vec<u16>> {
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut dict: HashMap<(u16, u8), u16> = HashMap::new();
    let mut next = 256usize;
    let mut codes = Vec::new();
    let mut w = data[0] as u16;
    for &b in &data[1..] {
        if let Some(&c) = dict.get(&(w, b)) {
            w = c;
            continue;
        }
        codes.push(w);
        if next < MAX_ENTRIES {
            dict.insert((w, b), next as u16);
            next += 1;
        }
        w = b as u16;
    }
    codes.push(w);
    Ok(codes)
}

pub fn lzw_compress(data: &[u8]) -> Result<Vec<u8>> {
    let codes = lzw_codes(data)?;
    let mut out = Vec::with_capacity(codes.len() * 3 / 2 + 1);
    let mut acc: u32 = 0;
    let mut nbits: u32 = 0;
    for (t, &c) in codes.iter().enumerate() {
        let w = code_width(t);
        acc = (acc << w) | c as u32;
        nbits += w;
        while nbits >= 8 {
            nbits -= 8;
            out.push((acc >> nbits) as u8);
        }
        acc &= (1 << nbits) - 1;
    }
    if nbits > 0 {
        out.push((acc << (8 - nbits)) as u8);
    }
    Ok(out)
}

fn unpack_codes(stream: &[u8]) -> Vec<u16> {
    let total = stream.len() * 8;
    let mut pos = 0usize;
    let mut codes = Vec::new();
    loop {
        let w = code_width(codes.len()) as usize;
        if pos + w > total {
            break;
        }
        let mut c = 0u16;
        for i in pos..pos + w {
            c = (c << 1) | ((stream[i / 8] >> (7 - i % 8)) & 1) as u16;
        }
        codes.push(c);
        pos += w;
    }
    codes
}

pub fn lzw_decompress(stream: &[u8]) -> Result<Vec<u8>> {
    let codes = unpack_codes(stream);
    let Some((&first, rest)) = codes.split_first() else {
        return Err(Error::InvalidCode("empty stream".into()));
    };
    if first > 255 {
        return Err(Error::InvalidCode(format!("first code {first} is not a literal")));
    }
    // entry i (i >= 256) = entries[prefix] + byte; stored as (prefix, last byte, first byte, len)
    let mut table: Vec<(u16, u8, u8)> = (0..=255u8).map(|b| (u16::MAX, b, b)).collect();
    let mut out = vec![first as u8];
    let mut prev = first;
    let mut scratch = Vec::new();
    for &code in rest {
        let c = code as usize;
        let first_byte = if c < table.len() {
            table[c].2
        } else if c == table.len() && table.len() < MAX_ENTRIES {
            table[prev as usize].2
        } else {
            return Err(Error::InvalidCode(format!(
                "code {code} with {} dictionary entries",
                table.len()
            )));
        };
        if table.len() < MAX_ENTRIES {
            table.push((prev, first_byte, table[prev as usize].2));
        }
        scratch.clear();
        let mut k = c;
        loop {
            let (p, last, _) = table[k];
            scratch.push(last);
            if p == u16::MAX {
                break;
            }
            k = p as usize;
        }
        out.extend(scratch.iter().rev());
        prev = code;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn hand_traces() {
        // A B | AB -> 256, BA -> 257 | AB then A: ABA -> 258 | AB at end
        assert_eq!(lzw_codes(b"ABABAB").unwrap(), vec![65, 66, 256, 256]);
        assert_eq!(lzw_codes(b"ABABABA").unwrap(), vec![65, 66, 256, 258]);
        // 4 codes of 9 bits = 36 bits -> 5 bytes
        let packed = lzw_compress(b"ABABABA").unwrap();
        assert_eq!(packed.len(), 5);
        assert_eq!(lzw_decompress(&packed).unwrap(), b"ABABABA");
        // A | AA | AAA | AA; the second code is emitted before the decoder knows it
        assert_eq!(lzw_codes(b"AAAAAAAA").unwrap(), vec![65, 256, 257, 256]);
        assert_eq!(lzw_decompress(&lzw_compress(b"AAAAAAAA").unwrap()).unwrap(), b"AAAAAAAA");
    }

    #[test]
    fn widths() {
        assert_eq!(code_width(0), 9);
        assert_eq!(code_width(256), 9);
        assert_eq!(code_width(257), 10);
        assert_eq!(code_width(100_000), 12);
    }

    #[test]
    fn repetitive_text_compresses() {
        let data: Vec<u8> = b"AB".iter().copied().cycle().take(1024).collect();
        let c = lzw_compress(&data).unwrap();
        assert!(c.len() * 4 < data.len(), "{} bytes", c.len());
        assert_eq!(lzw_decompress(&c).unwrap(), data);
    }

    #[test]
    fn roundtrip_edge_cases() {
        let mut rng = seed::stream(9, "lzw", 0);
        let mut random = vec![0u8; 10_000];
        rng.fill(&mut random[..]);
        // random data fills and freezes the dictionary
        for data in [vec![7u8], vec![0xAA; 5000], random] {
            assert_eq!(lzw_decompress(&lzw_compress(&data).unwrap()).unwrap(), data);
        }
        assert!(matches!(lzw_compress(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn malformed_streams() {
        assert!(matches!(lzw_decompress(&[]), Err(Error::InvalidCode(_))));
        // first code 300 (9 bits: 100101100)
        assert!(matches!(lzw_decompress(&[0b1001_0110, 0]), Err(Error::InvalidCode(_))));
        // literal 65 then code 400, beyond the next free code 256
        let mut bits = format!("{:09b}{:09b}", 65, 400);
        while bits.len() % 8 != 0 {
            bits.push('0');
        }
        let bytes: Vec<u8> = bits
            .as_bytes()
            .chunks(8)
            .map(|c| u8::from_str_radix(std::str::from_utf8(c).unwrap(), 2).unwrap())
            .collect();
        let err = lzw_decompress(&bytes).unwrap_err();
        assert!(err.to_string().starts_with("invalid code"));
    }

    proptest! {
        #[test]
        fn roundtrip(data in proptest::collection::vec(0u8..4, 1..3000)) {
            prop_assert_eq!(lzw_decompress(&lzw_compress(&data).unwrap()).unwrap(), data);
        }
    }
}
