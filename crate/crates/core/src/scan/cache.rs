//! Optional on-disk memo of the scan's singular-series residue tables,
//! enabled by pointing `WLAB_CACHE_DIR` at a directory.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::singular::{global_cache, QSumTables};

pub const CACHE_ENV: &str = "WLAB_CACHE_DIR";
const MAGIC: &[u8; 4] = b"WLQT";
const VERSION: u16 = 1;

pub fn cache_path(dir: &Path, s: u32, q_max: u64) -> PathBuf {
    dir.join(format!("qsum-s{s}-q{q_max}.bin"))
}

/// Tables from `$WLAB_CACHE_DIR` when present there, otherwise built (and
/// stored, if the variable is set).
pub fn load_or_build_tables(s: u32, q_max: u64) -> Result<QSumTables> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => load_or_build_in(Path::new(&dir), s, q_max),
        _ => QSumTables::build(global_cache(), s, q_max),
    }
}

pub fn load_or_build_in(dir: &Path, s: u32, q_max: u64) -> Result<QSumTables> {
    let path = cache_path(dir, s, q_max);
    if path.exists() {
        return read_tables(&path, s, q_max);
    }
    let tables = QSumTables::build(global_cache(), s, q_max)?;
    fs::create_dir_all(dir)?;
    // Write beside the target and rename so readers never see a partial file.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    write_tables(&tmp, &tables)?;
    fs::rename(&tmp, &path)?;
    Ok(tables)
}

fn write_tables(path: &Path, tables: &QSumTables) -> Result<()> {
    let mut payload = Vec::new();
    for t in tables.residues() {
        payload.extend_from_slice(&(t.len() as u64).to_le_bytes());
        for v in t {
            payload.extend_from_slice(&v.to_le_bytes());
        }
    }
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(tables.s() as u16).to_le_bytes())?;
    out.write_all(&tables.q_max().to_le_bytes())?;
    out.write_all(&(tables.residues().len() as u64).to_le_bytes())?;
    out.write_all(&payload)?;
    out.write_all(&crc32fast::hash(&payload).to_le_bytes())?;
    out.flush()?;
    Ok(())
}

fn read_tables(path: &Path, s: u32, q_max: u64) -> Result<QSumTables> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |what: &str| Error::Integrity(format!("cache file {}: {what}", path.display()));
    let header = 4 + 2 + 2 + 8 + 8;
    if bytes.len() < header + 4 || &bytes[..4] != MAGIC {
        return Err(bad("not a residue table cache"));
    }
    let u16_at = |i: usize| u16::from_le_bytes(bytes[i..i + 2].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    if u16_at(4) != VERSION || u16_at(6) as u32 != s || u64_at(8) != q_max {
        return Err(bad("header does not match the requested tables"));
    }
    let count = u64_at(16) as usize;
    let (payload, crc) = bytes[header..].split_at(bytes.len() - header - 4);
    if crc32fast::hash(payload) != u32::from_le_bytes(crc.try_into().unwrap()) {
        return Err(bad("checksum mismatch"));
    }
    let mut residues = Vec::with_capacity(count);
    let mut i = 0;
    for _ in 0..count {
        if i + 8 > payload.len() {
            return Err(bad("truncated"));
        }
        let len = u64::from_le_bytes(payload[i..i + 8].try_into().unwrap()) as usize;
        i += 8;
        let end = len.checked_mul(8).and_then(|b| b.checked_add(i)).filter(|&e| e <= payload.len());
        let end = end.ok_or_else(|| bad("truncated"))?;
        residues.push(payload[i..end].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect());
        i = end;
    }
    if i != payload.len() {
        return Err(bad("trailing bytes"));
    }
    QSumTables::from_parts(s, q_max, residues).map_err(|e| bad(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let built = load_or_build_in(dir.path(), 4, 64).unwrap();
        let loaded = load_or_build_in(dir.path(), 4, 64).unwrap();
        for n in [6u64, 77, 1000] {
            assert_eq!(built.evaluate(n), loaded.evaluate(n));
        }
        let path = cache_path(dir.path(), 4, 64);
        let mut bytes = fs::read(&path).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 1;
        fs::write(&path, bytes).unwrap();
        assert!(load_or_build_in(dir.path(), 4, 64).unwrap_err().is_integrity());
    }
}
