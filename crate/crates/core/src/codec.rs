//! The sketch data model and its bit-exact serialization (see FORMAT.md).

use crate::align::{Edit, EditInfo, Op};
use crate::alphabet::{symbol_bits, Symbol};
use crate::bits::{gamma_len, BitReader, BitWriter};
use crate::cover::Phrase;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"PMWE";
pub const VERSION: u8 = 0x01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Empty = 0,
    Raw = 1,
    BcZero = 2,
    General = 3,
    Periodic = 4,
}

impl Mode {
    pub fn from_tag(tag: u64) -> Result<Mode> {
        Ok(match tag {
            0 => Mode::Empty,
            1 => Mode::Raw,
            2 => Mode::BcZero,
            3 => Mode::General,
            4 => Mode::Periodic,
            t => return Err(Error::corrupt(format!("unknown block tag {t}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Empty => "EMPTY",
            Mode::Raw => "RAW",
            Mode::BcZero => "BC_ZERO",
            Mode::General => "GENERAL",
            Mode::Periodic => "PERIODIC",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub n: usize,
    pub m: usize,
    /// The caller's threshold before normalization.
    pub k: usize,
    pub alphabet: Vec<u8>,
}

impl Header {
    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }
}

/// One alignment `P[x..x_end) ->> T[y..y_end)` of a block; `y_end` follows
/// from the edit information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentRecord {
    pub x: usize,
    pub x_end: usize,
    pub y: usize,
    pub info: EditInfo,
}

impl AlignmentRecord {
    pub fn y_end(&self) -> Option<usize> {
        let mut y = self.y + (self.x_end.checked_sub(self.x)?);
        let mut dels = 0;
        for e in &self.info.tuples {
            match e.op() {
                Op::Ins => y += 1,
                Op::Del => dels += 1,
                _ => {}
            }
        }
        y.checked_sub(dels)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRun {
    pub a: usize,
    pub b: usize,
    pub phrases: Vec<Phrase>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSketch {
    Empty,
    /// Pattern and the window `T'[b_i + offset ..)` verbatim.
    Raw {
        offset: usize,
        pattern: Vec<Symbol>,
        text: Vec<Symbol>,
    },
    /// Window `T'[b_i + offset .. b_i + offset + len)` described by an
    /// alignment set (`X_pref`, `X_suf`, `a_count` full alignments, then
    /// partial ones) and, unless `mode` is `BcZero`, the period-cover runs.
    Structured {
        mode: Mode,
        offset: usize,
        len: usize,
        a_count: usize,
        b_count: usize,
        records: Vec<AlignmentRecord>,
        runs: Vec<CoverRun>,
    },
}

impl BlockSketch {
    pub fn mode(&self) -> Mode {
        match self {
            BlockSketch::Empty => Mode::Empty,
            BlockSketch::Raw { .. } => Mode::Raw,
            BlockSketch::Structured { mode, .. } => *mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    pub header: Header,
    pub blocks: Vec<BlockSketch>,
}

/// Where the bits of a serialized sketch go.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SizeBreakdown {
    /// Header including the alphabet table, padded.
    pub header_bits: usize,
    pub alphabet_bits: usize,
    /// Per block: tag, length prefix and payload, without padding.
    pub block_bits: Vec<usize>,
    pub padding_bits: usize,
    pub trailer_bits: usize,
    pub total_bits: usize,
}

impl SizeBreakdown {
    pub fn payload_bits(&self) -> usize {
        self.block_bits.iter().sum()
    }
}

fn put_symbol(w: &mut BitWriter, c: Symbol, sb: u32) {
    w.put_bits(c as u64, sb);
}

fn get_symbol(r: &mut BitReader, sb: u32, sigma: usize) -> Result<Symbol> {
    let c = r.get_bits(sb)?;
    if c as usize >= sigma {
        return Err(Error::corrupt(format!(
            "symbol code {c} outside an alphabet of {sigma}"
        )));
    }
    Ok(c as Symbol)
}

/// Edit information relative to its start point: cost, then per edit the
/// number of matches since the previous step, a 2-bit tag and the symbols.
pub fn encode_edit_info(w: &mut BitWriter, info: &EditInfo, start: (usize, usize), sigma: usize) {
    let sb = symbol_bits(sigma);
    w.put_gamma(info.cost() as u64);
    let (mut x, mut y) = start;
    for e in &info.tuples {
        debug_assert_eq!(e.x - x, e.y - y);
        w.put_gamma((e.x - x) as u64);
        match (e.cx, e.cy) {
            (Some(a), None) => {
                w.put_bits(0b00, 2);
                put_symbol(w, a, sb);
                x = e.x + 1;
                y = e.y;
            }
            (None, Some(b)) => {
                w.put_bits(0b01, 2);
                put_symbol(w, b, sb);
                x = e.x;
                y = e.y + 1;
            }
            (Some(a), Some(b)) => {
                w.put_bits(0b10, 2);
                put_symbol(w, a, sb);
                put_symbol(w, b, sb);
                x = e.x + 1;
                y = e.y + 1;
            }
            (None, None) => unreachable!("edit with two empty sides"),
        }
    }
}

pub fn decode_edit_info(
    r: &mut BitReader,
    start: (usize, usize),
    sigma: usize,
    max_x: usize,
) -> Result<EditInfo> {
    let sb = symbol_bits(sigma);
    let cost = r.get_gamma_max(r.remaining())?;
    let (mut x, mut y) = start;
    let mut tuples = Vec::with_capacity(cost);
    for _ in 0..cost {
        let gap = r.get_gamma_max(max_x)?;
        x += gap;
        y += gap;
        let e = match r.get_bits(2)? {
            0b00 => {
                let e = Edit {
                    x,
                    cx: Some(get_symbol(r, sb, sigma)?),
                    y,
                    cy: None,
                };
                x += 1;
                e
            }
            0b01 => {
                let e = Edit {
                    x,
                    cx: None,
                    y,
                    cy: Some(get_symbol(r, sb, sigma)?),
                };
                y += 1;
                e
            }
            0b10 => {
                let a = get_symbol(r, sb, sigma)?;
                let b = get_symbol(r, sb, sigma)?;
                if a == b {
                    return Err(Error::corrupt("substitution of a symbol by itself"));
                }
                let e = Edit {
                    x,
                    cx: Some(a),
                    y,
                    cy: Some(b),
                };
                x += 1;
                y += 1;
                e
            }
            _ => return Err(Error::corrupt("invalid edit tag")),
        };
        if x > max_x {
            return Err(Error::corrupt("edit beyond the pattern"));
        }
        tuples.push(e);
    }
    Ok(EditInfo { tuples })
}

/// Phrase stream of one cover run: count, then per phrase a flag bit and
/// either a symbol or the copy distance and length.
pub fn encode_phrases(w: &mut BitWriter, phrases: &[Phrase], sigma: usize) {
    let sb = symbol_bits(sigma);
    w.put_gamma(phrases.len() as u64);
    for ph in phrases {
        match *ph {
            Phrase::Literal(c) => {
                w.put_bit(false);
                put_symbol(w, c, sb);
            }
            Phrase::Copy { delta, len } => {
                w.put_bit(true);
                w.put_gamma(delta as u64 - 1);
                w.put_gamma(len as u64 - 1);
            }
        }
    }
}

pub fn decode_phrases(r: &mut BitReader, sigma: usize, max_len: usize) -> Result<Vec<Phrase>> {
    let sb = symbol_bits(sigma);
    let count = r.get_gamma_max(r.remaining())?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        if r.get_bit()? {
            let delta = r.get_gamma_max(max_len)? + 1;
            let len = r.get_gamma_max(max_len)? + 1;
            out.push(Phrase::Copy { delta, len });
        } else {
            out.push(Phrase::Literal(get_symbol(r, sb, sigma)?));
        }
    }
    Ok(out)
}

fn encode_block_payload(w: &mut BitWriter, block: &BlockSketch, sigma: usize) {
    let sb = symbol_bits(sigma);
    match block {
        BlockSketch::Empty => {}
        BlockSketch::Raw {
            offset,
            pattern,
            text,
        } => {
            w.put_gamma(*offset as u64);
            w.put_gamma(text.len() as u64);
            for &c in pattern.iter().chain(text.iter()) {
                put_symbol(w, c, sb);
            }
        }
        BlockSketch::Structured {
            mode,
            offset,
            len,
            a_count,
            b_count,
            records,
            runs,
        } => {
            w.put_gamma(*offset as u64);
            w.put_gamma(*len as u64);
            w.put_gamma(*a_count as u64);
            w.put_gamma(*b_count as u64);
            for rec in records {
                w.put_gamma(rec.x as u64);
                w.put_gamma((rec.x_end - rec.x) as u64);
                w.put_gamma(rec.y as u64);
                encode_edit_info(w, &rec.info, (rec.x, rec.y), sigma);
            }
            if *mode != Mode::BcZero {
                w.put_gamma(runs.len() as u64);
                let mut next = 0;
                for run in runs {
                    w.put_gamma((run.a - next) as u64);
                    w.put_gamma((run.b - run.a) as u64);
                    encode_phrases(w, &run.phrases, sigma);
                    next = run.b + 1;
                }
            }
        }
    }
}

fn decode_block_payload(r: &mut BitReader, mode: Mode, h: &Header) -> Result<BlockSketch> {
    let sigma = h.sigma();
    let sb = symbol_bits(sigma);
    let limit = h.n.max(h.m) + 1;
    Ok(match mode {
        Mode::Empty => BlockSketch::Empty,
        Mode::Raw => {
            let offset = r.get_gamma_max(limit)?;
            let len = r.get_gamma_max(limit)?;
            if (h.m + len) * sb as usize > r.remaining() {
                return Err(Error::corrupt(
                    "raw block shorter than its declared contents",
                ));
            }
            let pattern = (0..h.m)
                .map(|_| get_symbol(r, sb, sigma))
                .collect::<Result<_>>()?;
            let text = (0..len)
                .map(|_| get_symbol(r, sb, sigma))
                .collect::<Result<_>>()?;
            BlockSketch::Raw {
                offset,
                pattern,
                text,
            }
        }
        Mode::BcZero | Mode::General | Mode::Periodic => {
            let offset = r.get_gamma_max(limit)?;
            let len = r.get_gamma_max(limit)?;
            let a_count = r.get_gamma_max(r.remaining())?;
            let b_count = r.get_gamma_max(r.remaining())?;
            let total = 2 + a_count + b_count;
            if total > r.remaining() {
                return Err(Error::corrupt("more alignments than payload bits"));
            }
            let mut records = Vec::with_capacity(total);
            for _ in 0..total {
                let x = r.get_gamma_max(h.m)?;
                let x_end = x + r.get_gamma_max(h.m - x)?;
                let y = r.get_gamma_max(len)?;
                let info = decode_edit_info(r, (x, y), sigma, x_end)?;
                records.push(AlignmentRecord { x, x_end, y, info });
            }
            let mut runs = Vec::new();
            if mode != Mode::BcZero {
                let count = r.get_gamma_max(r.remaining())?;
                let mut next = 0usize;
                for _ in 0..count {
                    let a = next + r.get_gamma_max(limit)?;
                    let b = a + r.get_gamma_max(limit)?;
                    let phrases = decode_phrases(r, sigma, limit)?;
                    runs.push(CoverRun { a, b, phrases });
                    next = b + 1;
                }
            }
            BlockSketch::Structured {
                mode,
                offset,
                len,
                a_count,
                b_count,
                records,
                runs,
            }
        }
    })
}

pub fn serialize_sketch(s: &Sketch) -> Vec<u8> {
    serialize_with_breakdown(s).0
}

pub fn serialize_with_breakdown(s: &Sketch) -> (Vec<u8>, SizeBreakdown) {
    let h = &s.header;
    let mut w = BitWriter::new();
    for &b in MAGIC.iter().chain(std::iter::once(&VERSION)) {
        w.put_bits(b as u64, 8);
    }
    w.put_gamma(h.n as u64);
    w.put_gamma(h.m as u64);
    w.put_gamma(h.k as u64);
    w.put_gamma(h.sigma() as u64);
    for &b in &h.alphabet {
        w.put_bits(b as u64, 8);
    }
    w.put_gamma(s.blocks.len() as u64);
    w.pad_to_byte();
    let mut br = SizeBreakdown {
        header_bits: w.len(),
        alphabet_bits: 8 * h.sigma(),
        ..Default::default()
    };
    for block in &s.blocks {
        let mut payload = BitWriter::new();
        encode_block_payload(&mut payload, block, h.sigma());
        let start = w.len();
        w.put_bits(block.mode() as u64, 3);
        w.put_gamma(payload.len() as u64);
        w.put_writer(&payload);
        br.block_bits.push(w.len() - start);
        debug_assert_eq!(
            w.len() - start,
            3 + gamma_len(payload.len() as u64) + payload.len()
        );
        let before = w.len();
        w.pad_to_byte();
        br.padding_bits += w.len() - before;
    }
    let mut bytes = w.into_bytes();
    let crc = crc32fast::hash(&bytes);
    bytes.extend_from_slice(&crc.to_be_bytes());
    br.trailer_bits = 32;
    br.total_bits = bytes.len() * 8;
    (bytes, br)
}

pub fn deserialize_sketch(bytes: &[u8]) -> Result<Sketch> {
    if bytes.len() < 5 || &bytes[..4] != MAGIC {
        return Err(Error::UnsupportedFormat("missing PMWE magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::UnsupportedFormat(format!(
            "version {:#04x}",
            bytes[4]
        )));
    }
    if bytes.len() < 9 {
        return Err(Error::corrupt("sketch too short"));
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 4);
    if crc32fast::hash(body).to_be_bytes() != trailer {
        return Err(Error::corrupt("checksum mismatch"));
    }
    let mut r = BitReader::new(body);
    r.get_bits(40)?;
    let n = r.get_gamma_max(usize::MAX >> 2)?;
    let m = r.get_gamma_max(usize::MAX >> 2)?;
    let k = r.get_gamma_max(usize::MAX >> 2)?;
    let sigma = r.get_gamma_max(256)?;
    let alphabet: Vec<u8> = (0..sigma)
        .map(|_| r.get_bits(8).map(|b| b as u8))
        .collect::<Result<_>>()?;
    if alphabet.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::corrupt("alphabet table not strictly increasing"));
    }
    let count = r.get_gamma_max(r.remaining())?;
    r.align_to_byte()?;
    let header = Header { n, m, k, alphabet };
    let mut blocks = Vec::with_capacity(count);
    for _ in 0..count {
        let mode = Mode::from_tag(r.get_bits(3)?)?;
        let len = r.get_gamma_max(r.remaining())?;
        let mut sub = r.sub_reader(len)?;
        let block = decode_block_payload(&mut sub, mode, &header)?;
        if sub.remaining() != 0 {
            return Err(Error::corrupt("block payload has trailing bits"));
        }
        blocks.push(block);
        r.align_to_byte()?;
    }
    if r.remaining() != 0 {
        return Err(Error::corrupt("trailing bytes after the last block"));
    }
    Ok(Sketch { header, blocks })
}
