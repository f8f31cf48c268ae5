//! Binary container: a fixed header followed by little-endian fields.
//!
//! Header layout: magic "RCKS", u16 version, u8 object kind, u8 reserved,
//! u32 ring degree, u32 level, u32 prime count, then each prime as u64.

use std::path::Path;

use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"RCKS";
pub const VERSION: u16 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ObjectKind {
    Ciphertext = 1,
    Plaintext = 2,
    SecretKey = 3,
    EvaluationKey = 4,
    PlaintextSeed = 5,
    DftPlan = 6,
    Limb = 7,
}

impl ObjectKind {
    fn from_u8(v: u8) -> Result<Self> {
        Ok(match v {
            1 => ObjectKind::Ciphertext,
            2 => ObjectKind::Plaintext,
            3 => ObjectKind::SecretKey,
            4 => ObjectKind::EvaluationKey,
            5 => ObjectKind::PlaintextSeed,
            6 => ObjectKind::DftPlan,
            7 => ObjectKind::Limb,
            _ => return Err(Error::Serialization(format!("unknown object kind {v}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub kind: ObjectKind,
    pub degree: usize,
    pub level: usize,
    pub primes: Vec<u64>,
}

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new(header: &Header) -> Self {
        let mut w = Writer::default();
        w.buf.extend_from_slice(&MAGIC);
        w.u16(VERSION);
        w.u8(header.kind as u8);
        w.u8(0);
        w.u32(header.degree as u32);
        w.u32(header.level as u32);
        w.u32(header.primes.len() as u32);
        for &p in &header.primes {
            w.u64(p);
        }
        w
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }

    pub fn words(&mut self, v: &[u64]) {
        for &x in v {
            self.u64(x);
        }
    }

    pub fn bytes(&mut self, v: &[u8]) {
        self.u32(v.len() as u32);
        self.buf.extend_from_slice(v);
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    /// Parse the header and check the object kind.
    pub fn open(data: &'a [u8], expected: ObjectKind) -> Result<(Self, Header)> {
        let mut r = Reader { data, pos: 0 };
        let magic = r.take(4)?;
        if magic != MAGIC {
            return Err(Error::Serialization("bad magic".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Serialization(format!("unsupported version {version}")));
        }
        let kind = ObjectKind::from_u8(r.u8()?)?;
        if kind != expected {
            return Err(Error::Serialization(format!("expected {expected:?}, found {kind:?}")));
        }
        let _reserved = r.u8()?;
        let degree = r.u32()? as usize;
        let level = r.u32()? as usize;
        let count = r.u32()? as usize;
        if count > 4096 {
            return Err(Error::Serialization(format!("implausible prime count {count}")));
        }
        let primes = (0..count).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        Ok((
            r,
            Header {
                kind,
                degree,
                level,
                primes,
            },
        ))
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.data.len())
            .ok_or_else(|| Error::Serialization(format!("truncated input at byte {}", self.pos)))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
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

    pub fn words(&mut self, count: usize) -> Result<Vec<u64>> {
        let raw = self.take(
            count
                .checked_mul(8)
                .ok_or_else(|| Error::Serialization("length overflow".into()))?,
        )?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    pub fn bytes(&mut self) -> Result<&'a [u8]> {
        let len = self.u32()? as usize;
        self.take(len)
    }

    pub fn finish(self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::Serialization(format!(
                "{} trailing bytes",
                self.data.len() - self.pos
            )));
        }
        Ok(())
    }
}

/// Object kind named by a container header, without decoding the body.
pub fn peek_kind(data: &[u8]) -> Result<ObjectKind> {
    if data.len() < 8 || data[..4] != MAGIC {
        return Err(Error::Serialization("bad magic".into()));
    }
    ObjectKind::from_u8(data[6])
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::from(e).at_path(path))
}

/// Read a file and decode it, naming the file in any error.
pub fn read_file<T>(path: &Path, decode: impl FnOnce(&[u8]) -> Result<T>) -> Result<T> {
    let bytes = std::fs::read(path).map_err(|e| Error::from(e).at_path(path))?;
    decode(&bytes).map_err(|e| e.at_path(path))
}
