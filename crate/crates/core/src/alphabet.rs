//! Byte alphabets and symbol codes.

use crate::error::{Error, Result};

/// A symbol code. Codes below `sigma` index the alphabet table; larger codes
/// are sentinels that never equal an input byte.
pub type Symbol = u32;

/// Sorted table of the distinct bytes that occur in an instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    table: Vec<u8>,
}

impl Alphabet {
    /// Builds the table from every byte of every input.
    pub fn from_inputs(inputs: &[&[u8]]) -> Self {
        let mut seen = [false; 256];
        for s in inputs {
            for &b in s.iter() {
                seen[b as usize] = true;
            }
        }
        let table = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        Alphabet { table }
    }

    pub fn from_table(table: Vec<u8>) -> Result<Self> {
        if table.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "alphabet table must be strictly increasing".into(),
            ));
        }
        Ok(Alphabet { table })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    /// Bits needed to write one symbol, `ceil(log2 sigma)`.
    pub fn symbol_bits(&self) -> u32 {
        symbol_bits(self.size())
    }

    pub fn code(&self, byte: u8) -> Option<Symbol> {
        self.table.binary_search(&byte).ok().map(|i| i as Symbol)
    }

    pub fn byte(&self, code: Symbol) -> Option<u8> {
        self.table.get(code as usize).copied()
    }

    /// Maps raw bytes to codes. Fails on bytes outside the table.
    pub fn encode(&self, bytes: &[u8]) -> Result<Vec<Symbol>> {
        bytes
            .iter()
            .map(|&b| {
                self.code(b)
                    .ok_or_else(|| Error::InvalidArgument(format!("byte {b:#04x} not in alphabet")))
            })
            .collect()
    }

    pub fn decode(&self, codes: &[Symbol]) -> Result<Vec<u8>> {
        codes
            .iter()
            .map(|&c| {
                self.byte(c)
                    .ok_or_else(|| Error::InvalidArgument(format!("symbol {c} outside alphabet")))
            })
            .collect()
    }
}

pub fn symbol_bits(sigma: usize) -> u32 {
    if sigma <= 1 {
        0
    } else {
        usize::BITS - (sigma - 1).leading_zeros()
    }
}

/// Maps every text byte that does not occur in the pattern to one byte that
/// does not occur in it either. Occurrences and edit positions are unchanged;
/// inserted and substituted values outside the pattern all read as that byte.
pub fn reduce_to_pattern(p: &[u8], t: &[u8]) -> (Vec<u8>, Option<u8>) {
    let mut in_p = [false; 256];
    for &b in p {
        in_p[b as usize] = true;
    }
    let Some(other) = (0..=255u8).find(|&b| !in_p[b as usize]) else {
        return (t.to_vec(), None);
    };
    let mut used = false;
    let out = t
        .iter()
        .map(|&b| {
            if in_p[b as usize] {
                b
            } else {
                used = true;
                other
            }
        })
        .collect();
    (out, used.then_some(other))
}
