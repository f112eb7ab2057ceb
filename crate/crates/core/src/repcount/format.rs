//! Binary `RepTable` files.
//!
//! Layout, all little-endian: magic `WLAB`, format version `u16 = 1`, `s` as
//! `u16`, `x_max` as `u64`, then `x_max` counts as `u32` for `n = 1..=x_max`,
//! then the CRC-32 (IEEE) of the count bytes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::sieve::RepTable;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"WLAB";
pub const FORMAT_VERSION: u16 = 1;

/// Writes a table incrementally; counts must arrive in order of `n`.
pub struct RepTableWriter<W: Write> {
    out: W,
    crc: crc32fast::Hasher,
    expected: u64,
    written: u64,
}

impl<W: Write> RepTableWriter<W> {
    pub fn new(mut out: W, s: u32, x_max: u64) -> Result<Self> {
        out.write_all(&MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&(s as u16).to_le_bytes())?;
        out.write_all(&x_max.to_le_bytes())?;
        Ok(Self { out, crc: crc32fast::Hasher::new(), expected: x_max, written: 0 })
    }

    pub fn push(&mut self, counts: &[u64]) -> Result<()> {
        if self.written + counts.len() as u64 > self.expected {
            return Err(Error::invalid("more counts than the declared x_max"));
        }
        let mut buf = Vec::with_capacity(counts.len() * 4);
        for (i, &c) in counts.iter().enumerate() {
            let c = u32::try_from(c).map_err(|_| {
                Error::Capacity(format!("R({}) = {c} does not fit the 32-bit file cell", self.written + i as u64 + 1))
            })?;
            buf.extend_from_slice(&c.to_le_bytes());
        }
        self.crc.update(&buf);
        self.out.write_all(&buf)?;
        self.written += counts.len() as u64;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        if self.written != self.expected {
            return Err(Error::invalid(format!("wrote {} of {} counts", self.written, self.expected)));
        }
        self.out.write_all(&self.crc.finalize().to_le_bytes())?;
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn write_rep_table(table: &RepTable, path: impl AsRef<Path>) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let mut w = RepTableWriter::new(file, table.s(), table.x_max())?;
    w.push(table.counts())?;
    w.finish()?;
    Ok(())
}

pub fn read_rep_table(path: impl AsRef<Path>) -> Result<RepTable> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if header[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let s = u16::from_le_bytes([header[6], header[7]]) as u32;
    let x_max = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes"));
    if s != 3 && s != 4 {
        return Err(Error::Format(format!("invalid s = {s}")));
    }
    let len = usize::try_from(x_max)
        .ok()
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::Format("x_max too large".into()))?;
    let mut payload = vec![0u8; len];
    r.read_exact(&mut payload)?;
    let mut crc = [0u8; 4];
    r.read_exact(&mut crc)?;
    if crc32fast::hash(&payload) != u32::from_le_bytes(crc) {
        return Err(Error::Format("CRC mismatch".into()));
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after CRC".into()));
    }
    let mut counts = Vec::with_capacity(x_max as usize + 1);
    counts.push(0);
    counts.extend(payload.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")) as u64));
    Ok(RepTable::from_counts(s, counts))
}
