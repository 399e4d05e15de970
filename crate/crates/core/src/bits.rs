//! MSB-first bit streams with Elias-gamma integers.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits written so far.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn put_bit(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Low `width` bits of `v`, most significant first.
    pub fn put_bits(&mut self, v: u64, width: u32) {
        for i in (0..width).rev() {
            self.put_bit((v >> i) & 1 == 1);
        }
    }

    /// Elias gamma of `v + 1`.
    pub fn put_gamma(&mut self, v: u64) {
        let x = v.checked_add(1).expect("gamma value overflow");
        let n = 63 - x.leading_zeros();
        self.put_bits(0, n);
        self.put_bits(x, n + 1);
    }

    pub fn put_writer(&mut self, other: &BitWriter) {
        for i in 0..other.len {
            self.put_bit(other.bytes[i / 8] & (0x80 >> (i % 8)) != 0);
        }
    }

    pub fn pad_to_byte(&mut self) {
        while self.len % 8 != 0 {
            self.put_bit(false);
        }
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

pub fn gamma_len(v: u64) -> usize {
    let x = v + 1;
    2 * (63 - x.leading_zeros() as usize) + 1
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    end: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader {
            bytes,
            pos: 0,
            end: bytes.len() * 8,
        }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.end - self.pos
    }

    /// A reader over the next `bits` bits; advances `self` past them.
    pub fn sub_reader(&mut self, bits: usize) -> Result<BitReader<'a>> {
        if bits > self.remaining() {
            return Err(underflow());
        }
        let r = BitReader {
            bytes: self.bytes,
            pos: self.pos,
            end: self.pos + bits,
        };
        self.pos += bits;
        Ok(r)
    }

    pub fn get_bit(&mut self) -> Result<bool> {
        if self.pos >= self.end {
            return Err(underflow());
        }
        let b = self.bytes[self.pos / 8] & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(b)
    }

    pub fn get_bits(&mut self, width: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.get_bit()? as u64;
        }
        Ok(v)
    }

    pub fn get_gamma(&mut self) -> Result<u64> {
        let mut n = 0u32;
        while !self.get_bit()? {
            n += 1;
            if n > 63 {
                return Err(Error::corrupt("gamma code longer than 64 bits"));
            }
        }
        let rest = self.get_bits(n)?;
        let x = (1u64 << n) | rest;
        Ok(x - 1)
    }

    /// Gamma value that must fit a `usize` no larger than `max`.
    pub fn get_gamma_max(&mut self, max: usize) -> Result<usize> {
        let v = self.get_gamma()?;
        if v > max as u64 {
            return Err(Error::corrupt(format!("value {v} exceeds bound {max}")));
        }
        Ok(v as usize)
    }

    pub fn align_to_byte(&mut self) -> Result<()> {
        while self.pos % 8 != 0 {
            self.get_bit()?;
        }
        Ok(())
    }
}

fn underflow() -> Error {
    Error::corrupt("bit stream ended early")
}
