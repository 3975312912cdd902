//! Little-endian byte writer/reader used by the oracle containers.
//!
//! Bit-vectors are written as `ceil(len / 8)` bytes, bit `i` at byte `i / 8`,
//! position `i % 8` (LSB first). Their length is never written; it comes from
//! the surrounding header.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u32(&mut self, v: u32) {
        self.bytes(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }

    pub fn f64(&mut self, v: f64) {
        self.bytes(&v.to_bits().to_le_bytes());
    }

    pub fn len_u32(&mut self, v: usize) {
        self.u32(u32::try_from(v).expect("container field exceeds u32"));
    }

    pub fn bitset(&mut self, set: &FixedBitSet) {
        let start = self.buf.len();
        self.buf.resize(start + set.len().div_ceil(8), 0);
        for i in set.ones() {
            self.buf[start + i / 8] |= 1 << (i % 8);
        }
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| {
            Error::Format(format!("truncated at byte {} (wanted {n} more)", self.pos))
        })?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub fn magic(&mut self, want: &[u8; 4]) -> Result<()> {
        let got = self.take(4)?;
        if got != want {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(got),
                String::from_utf8_lossy(want)
            )));
        }
        Ok(())
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }

    pub fn usize(&mut self) -> Result<usize> {
        Ok(self.u32()? as usize)
    }

    pub fn bitset(&mut self, len: usize) -> Result<FixedBitSet> {
        let raw = self.take(len.div_ceil(8))?;
        let mut set = FixedBitSet::with_capacity(len);
        for (byte_idx, &b) in raw.iter().enumerate() {
            for bit in 0..8 {
                if b & (1 << bit) != 0 {
                    let i = byte_idx * 8 + bit;
                    if i >= len {
                        return Err(Error::Format("padding bits set in bit-vector".into()));
                    }
                    set.insert(i);
                }
            }
        }
        Ok(set)
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format(format!("{} trailing bytes", self.buf.len() - self.pos)));
        }
        Ok(())
    }
}
